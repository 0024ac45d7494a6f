//! Sparse multivariate polynomials over `F_p`.
//!
//! A polynomial is keyed by exponent vectors aligned to an ordered variable
//! universe. Terms are kept in graded-lexicographic order (declared variable
//! order, earlier variables more significant), which fixes printing and
//! iteration; zero coefficients are never stored.

mod parse;

pub use parse::parse_poly;

use crate::field::{FieldElement, FiniteField, PrimeField};
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

/// Exponents are capped well below this; additions are checked.
pub const MAX_EXPONENT: u32 = 1 << 31;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PolyError {
    Syntax { pos: usize, msg: String },
    UnknownVariable { name: String, pos: Option<usize> },
    DuplicateVariable(String),
    BadVariableName(String),
    FieldMismatch,
    UniverseMismatch,
    ExponentOverflow,
    NotDivisible,
    DivisionByZero,
    MissingCoordinate(String),
}

impl fmt::Display for PolyError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PolyError::Syntax { pos, msg } => write!(f, "syntax error at byte {pos}: {msg}"),
            PolyError::UnknownVariable { name, pos: Some(p) } => {
                write!(f, "unknown variable `{name}` at byte {p}")
            }
            PolyError::UnknownVariable { name, pos: None } => {
                write!(f, "unknown variable `{name}`")
            }
            PolyError::DuplicateVariable(v) => write!(f, "duplicate variable `{v}`"),
            PolyError::BadVariableName(v) => write!(f, "bad variable name `{v}`"),
            PolyError::FieldMismatch => write!(f, "polynomials over different fields"),
            PolyError::UniverseMismatch => write!(f, "polynomials over different variable universes"),
            PolyError::ExponentOverflow => write!(f, "exponent exceeds 2^31"),
            PolyError::NotDivisible => write!(f, "no exact quotient exists"),
            PolyError::DivisionByZero => write!(f, "division by the zero polynomial"),
            PolyError::MissingCoordinate(v) => write!(f, "point is missing coordinate `{v}`"),
        }
    }
}

impl std::error::Error for PolyError {}

fn valid_var_name(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric())
}

/// An ordered, named variable universe shared by polynomials.
#[derive(Clone)]
pub struct VarSet {
    names: Arc<Vec<String>>,
}

impl PartialEq for VarSet {
    fn eq(&self, other: &Self) -> bool {
        self.names == other.names
    }
}

impl Eq for VarSet {}

impl fmt::Debug for VarSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "VarSet{:?}", self.names)
    }
}

impl VarSet {
    pub fn new<I, S>(names: I) -> Result<VarSet, PolyError>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let names: Vec<String> = names.into_iter().map(Into::into).collect();
        for (i, n) in names.iter().enumerate() {
            if !valid_var_name(n) {
                return Err(PolyError::BadVariableName(n.clone()));
            }
            if names[..i].contains(n) {
                return Err(PolyError::DuplicateVariable(n.clone()));
            }
        }
        Ok(VarSet { names: Arc::new(names) })
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn contains(&self, name: &str) -> bool {
        self.index_of(name).is_some()
    }

    /// A new universe with `extra` appended.
    pub fn extended<S: AsRef<str>>(&self, extra: &[S]) -> Result<VarSet, PolyError> {
        let mut names: Vec<String> = self.names.as_ref().clone();
        names.extend(extra.iter().map(|s| s.as_ref().to_string()));
        VarSet::new(names)
    }
}

/// An exponent vector aligned to a `VarSet`. Ordered graded-lex: total degree
/// first, then earlier variables more significant.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Monomial {
    exps: Box<[u32]>,
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Monomial{:?}", self.exps)
    }
}

impl Monomial {
    pub fn one(arity: usize) -> Monomial {
        Monomial { exps: vec![0; arity].into_boxed_slice() }
    }

    pub fn from_exps(exps: Vec<u32>) -> Monomial {
        Monomial { exps: exps.into_boxed_slice() }
    }

    pub fn exps(&self) -> &[u32] {
        &self.exps
    }

    pub fn arity(&self) -> usize {
        self.exps.len()
    }

    pub fn exp(&self, idx: usize) -> u32 {
        self.exps[idx]
    }

    pub fn is_constant(&self) -> bool {
        self.exps.iter().all(|&e| e == 0)
    }

    pub fn total_degree(&self) -> u64 {
        self.exps.iter().map(|&e| e as u64).sum()
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        debug_assert_eq!(self.arity(), other.arity());
        self.exps.iter().zip(other.exps.iter()).all(|(a, b)| a <= b)
    }

    pub fn try_mul(&self, other: &Monomial) -> Result<Monomial, PolyError> {
        debug_assert_eq!(self.arity(), other.arity());
        let mut exps = Vec::with_capacity(self.exps.len());
        for (a, b) in self.exps.iter().zip(other.exps.iter()) {
            let s = a.checked_add(*b).ok_or(PolyError::ExponentOverflow)?;
            if s >= MAX_EXPONENT {
                return Err(PolyError::ExponentOverflow);
            }
            exps.push(s);
        }
        Ok(Monomial::from_exps(exps))
    }

    /// Quotient monomial; requires `other.divides(self)`.
    pub fn div(&self, other: &Monomial) -> Monomial {
        debug_assert!(other.divides(self));
        let exps = self.exps.iter().zip(other.exps.iter()).map(|(a, b)| a - b).collect();
        Monomial::from_exps(exps)
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.total_degree()
            .cmp(&other.total_degree())
            .then_with(|| self.exps.cmp(&other.exps))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

/// A sparse polynomial over `F_p` on a fixed variable universe.
#[derive(Clone, PartialEq, Eq)]
pub struct Polynomial {
    field: PrimeField,
    vars: VarSet,
    terms: BTreeMap<Monomial, FieldElement>,
}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl Polynomial {
    pub fn zero(field: PrimeField, vars: &VarSet) -> Polynomial {
        Polynomial { field, vars: vars.clone(), terms: BTreeMap::new() }
    }

    pub fn constant(field: PrimeField, vars: &VarSet, c: FieldElement) -> Polynomial {
        let mut p = Polynomial::zero(field, vars);
        if !c.is_zero() {
            p.terms.insert(Monomial::one(vars.len()), c);
        }
        p
    }

    pub fn constant_int(field: PrimeField, vars: &VarSet, n: i64) -> Polynomial {
        Polynomial::constant(field, vars, field.element(n))
    }

    pub fn one(field: PrimeField, vars: &VarSet) -> Polynomial {
        Polynomial::constant_int(field, vars, 1)
    }

    pub fn variable(field: PrimeField, vars: &VarSet, name: &str) -> Result<Polynomial, PolyError> {
        let idx = vars
            .index_of(name)
            .ok_or_else(|| PolyError::UnknownVariable { name: name.into(), pos: None })?;
        let mut exps = vec![0u32; vars.len()];
        exps[idx] = 1;
        Ok(Polynomial::from_term(field, vars, Monomial::from_exps(exps), field.one()))
    }

    pub fn from_term(field: PrimeField, vars: &VarSet, m: Monomial, c: FieldElement) -> Polynomial {
        assert_eq!(m.arity(), vars.len(), "monomial arity mismatch");
        let mut p = Polynomial::zero(field, vars);
        if !c.is_zero() {
            p.terms.insert(m, c);
        }
        p
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn vars(&self) -> &VarSet {
        &self.vars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1
            && self
                .terms
                .iter()
                .next()
                .map(|(m, c)| m.is_constant() && c.is_one())
                .unwrap_or(false)
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Terms in ascending graded-lex order.
    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, FieldElement)> {
        self.terms.iter().map(|(m, c)| (m, *c))
    }

    pub fn coeff(&self, m: &Monomial) -> FieldElement {
        self.terms.get(m).copied().unwrap_or_else(|| self.field.zero())
    }

    pub fn leading_monomial(&self) -> Option<&Monomial> {
        self.terms.keys().next_back()
    }

    pub fn total_degree(&self) -> Option<u64> {
        self.terms.keys().map(|m| m.total_degree()).max()
    }

    fn add_term(&mut self, m: Monomial, c: FieldElement) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(m);
        match entry {
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let s = *e.get() + c;
                if s.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = s;
                }
            }
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
        }
    }

    fn check_compatible(&self, other: &Polynomial) -> Result<(), PolyError> {
        if self.field != other.field {
            return Err(PolyError::FieldMismatch);
        }
        if self.vars != other.vars {
            return Err(PolyError::UniverseMismatch);
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &Polynomial) -> Result<Polynomial, PolyError> {
        self.check_compatible(other)?;
        let mut out = self.clone();
        for (m, c) in other.terms() {
            out.add_term(m.clone(), c);
        }
        Ok(out)
    }

    pub fn checked_sub(&self, other: &Polynomial) -> Result<Polynomial, PolyError> {
        self.check_compatible(other)?;
        let mut out = self.clone();
        for (m, c) in other.terms() {
            out.add_term(m.clone(), -c);
        }
        Ok(out)
    }

    /// Exact product. Errors on mismatched fields or universes and on
    /// exponent overflow.
    pub fn checked_mul(&self, other: &Polynomial) -> Result<Polynomial, PolyError> {
        self.check_compatible(other)?;
        let mut out = Polynomial::zero(self.field, &self.vars);
        for (ma, ca) in self.terms() {
            for (mb, cb) in other.terms() {
                out.add_term(ma.try_mul(mb)?, ca * cb);
            }
        }
        Ok(out)
    }

    pub fn scaled(&self, c: FieldElement) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero(self.field, &self.vars);
        }
        let terms = self.terms.iter().map(|(m, t)| (m.clone(), *t * c)).collect();
        Polynomial { field: self.field, vars: self.vars.clone(), terms }
    }

    pub fn pow(&self, e: u32) -> Result<Polynomial, PolyError> {
        let mut acc = Polynomial::one(self.field, &self.vars);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.checked_mul(&base)?;
            }
            e >>= 1;
            if e > 0 {
                base = base.checked_mul(&base)?;
            }
        }
        Ok(acc)
    }

    /// Exact quotient `q` with `self = q * g`, by leading-term division in
    /// graded-lex order. `NotDivisible` when no exact quotient exists.
    pub fn exact_divide(&self, g: &Polynomial) -> Result<Polynomial, PolyError> {
        self.check_compatible(g)?;
        if g.is_zero() {
            return Err(PolyError::DivisionByZero);
        }
        let g_lead = g.leading_monomial().unwrap().clone();
        let g_lead_coeff = g.coeff(&g_lead);
        let g_lead_inv = g_lead_coeff.invert().expect("nonzero leading coefficient");
        let mut rem = self.clone();
        let mut quot = Polynomial::zero(self.field, &self.vars);
        while !rem.is_zero() {
            let r_lead = rem.leading_monomial().unwrap().clone();
            if !g_lead.divides(&r_lead) {
                return Err(PolyError::NotDivisible);
            }
            let m = r_lead.div(&g_lead);
            let c = rem.coeff(&r_lead) * g_lead_inv;
            let step = Polynomial::from_term(self.field, &self.vars, m, c);
            quot = quot.checked_add(&step)?;
            rem = rem.checked_sub(&step.checked_mul(g)?)?;
        }
        Ok(quot)
    }

    /// Formal partial derivative with respect to `v`.
    pub fn partial_derivative(&self, v: &str) -> Result<Polynomial, PolyError> {
        let idx = self
            .vars
            .index_of(v)
            .ok_or_else(|| PolyError::UnknownVariable { name: v.into(), pos: None })?;
        let mut out = Polynomial::zero(self.field, &self.vars);
        for (m, c) in self.terms() {
            let e = m.exp(idx);
            if e == 0 {
                continue;
            }
            let coeff = c * self.field.element(e as i64);
            if coeff.is_zero() {
                continue;
            }
            let mut exps = m.exps().to_vec();
            exps[idx] -= 1;
            out.add_term(Monomial::from_exps(exps), coeff);
        }
        Ok(out)
    }

    /// Evaluate at a point with coordinates in any field of the same
    /// characteristic; coefficients are embedded through the prime subfield.
    pub fn evaluate<F: FiniteField>(
        &self,
        field: &F,
        point: &BTreeMap<String, F::Elem>,
    ) -> Result<F::Elem, PolyError> {
        if field.characteristic() != self.field.characteristic() {
            return Err(PolyError::FieldMismatch);
        }
        // check coverage of occurring variables up front
        for name in self.vars_occurring() {
            if !point.contains_key(name) {
                return Err(PolyError::MissingCoordinate(name.to_string()));
            }
        }
        let coords: Vec<Option<&F::Elem>> =
            self.vars.names().iter().map(|n| point.get(n)).collect();
        let mut acc = field.zero();
        for (m, c) in self.terms() {
            let mut term = field.embed(c);
            for (idx, &e) in m.exps().iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let v = coords[idx].expect("coverage checked above");
                term = field.mul(&term, &field.pow(v, e as u64));
            }
            acc = field.add(&acc, &term);
        }
        Ok(acc)
    }

    /// Names of variables that actually occur.
    pub fn vars_occurring(&self) -> BTreeSet<&str> {
        let mut out = BTreeSet::new();
        for (m, _) in self.terms() {
            for (idx, &e) in m.exps().iter().enumerate() {
                if e > 0 {
                    out.insert(self.vars.names()[idx].as_str());
                }
            }
        }
        out
    }

    pub fn occurs(&self, name: &str) -> bool {
        match self.vars.index_of(name) {
            None => false,
            Some(idx) => self.terms.keys().any(|m| m.exp(idx) > 0),
        }
    }

    /// Reinterpret over a larger universe containing every current variable.
    pub fn extended(&self, target: &VarSet) -> Result<Polynomial, PolyError> {
        let mut map = Vec::with_capacity(self.vars.len());
        for n in self.vars.names() {
            map.push(
                target
                    .index_of(n)
                    .ok_or_else(|| PolyError::UnknownVariable { name: n.clone(), pos: None })?,
            );
        }
        let mut out = Polynomial::zero(self.field, target);
        for (m, c) in self.terms() {
            let mut exps = vec![0u32; target.len()];
            for (i, &e) in m.exps().iter().enumerate() {
                exps[map[i]] = e;
            }
            out.add_term(Monomial::from_exps(exps), c);
        }
        Ok(out)
    }

    /// Reinterpret over a universe that must contain every occurring
    /// variable (dropping unused ones).
    pub fn restricted(&self, target: &VarSet) -> Result<Polynomial, PolyError> {
        let mut out = Polynomial::zero(self.field, target);
        for (m, c) in self.terms() {
            let mut exps = vec![0u32; target.len()];
            for (i, &e) in m.exps().iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let name = &self.vars.names()[i];
                let idx = target
                    .index_of(name)
                    .ok_or_else(|| PolyError::UnknownVariable { name: name.clone(), pos: None })?;
                exps[idx] = e;
            }
            out.add_term(Monomial::from_exps(exps), c);
        }
        Ok(out)
    }

    /// Substitute images for variables. Every image must live over
    /// (`field`, `target`); variables without an image must exist in
    /// `target` and map to themselves.
    pub fn substitute(
        &self,
        target: &VarSet,
        images: &BTreeMap<String, Polynomial>,
    ) -> Result<Polynomial, PolyError> {
        for img in images.values() {
            if img.field != self.field {
                return Err(PolyError::FieldMismatch);
            }
            if &img.vars != target {
                return Err(PolyError::UniverseMismatch);
            }
        }
        // image polynomial per source variable index, identity when absent
        let mut image_of: Vec<Option<Polynomial>> = Vec::with_capacity(self.vars.len());
        for n in self.vars.names() {
            match images.get(n) {
                Some(img) => image_of.push(Some(img.clone())),
                None => {
                    if self.occurs(n) && !target.contains(n) {
                        return Err(PolyError::UnknownVariable { name: n.clone(), pos: None });
                    }
                    image_of.push(None);
                }
            }
        }
        let mut acc = Polynomial::zero(self.field, target);
        for (m, c) in self.terms() {
            let mut term = Polynomial::constant(self.field, target, c);
            for (idx, &e) in m.exps().iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let factor = match &image_of[idx] {
                    Some(img) => img.pow(e)?,
                    None => {
                        let name = &self.vars.names()[idx];
                        Polynomial::variable(self.field, target, name)?.pow(e)?
                    }
                };
                term = term.checked_mul(&factor)?;
            }
            acc = acc.checked_add(&term)?;
        }
        Ok(acc)
    }

    /// Group terms by the exponent of `v`: exponent -> polynomial with the
    /// `v`-power struck out (same universe).
    pub fn coefficients_in(&self, v: &str) -> Result<BTreeMap<u32, Polynomial>, PolyError> {
        let idx = self
            .vars
            .index_of(v)
            .ok_or_else(|| PolyError::UnknownVariable { name: v.into(), pos: None })?;
        let mut out: BTreeMap<u32, Polynomial> = BTreeMap::new();
        for (m, c) in self.terms() {
            let e = m.exp(idx);
            let mut exps = m.exps().to_vec();
            exps[idx] = 0;
            out.entry(e)
                .or_insert_with(|| Polynomial::zero(self.field, &self.vars))
                .add_term(Monomial::from_exps(exps), c);
        }
        Ok(out)
    }

    /// Parse an expression over the given universe; see the grammar in
    /// `parse_poly`.
    pub fn parse(text: &str, vars: &VarSet, field: PrimeField) -> Result<Polynomial, PolyError> {
        parse_poly(text, vars, field)
    }
}

impl std::ops::Add<&Polynomial> for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        self.checked_add(rhs).expect("incompatible polynomials")
    }
}

impl std::ops::Sub<&Polynomial> for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        self.checked_sub(rhs).expect("incompatible polynomials")
    }
}

impl std::ops::Mul<&Polynomial> for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        self.checked_mul(rhs).expect("incompatible polynomials")
    }
}

impl std::ops::Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        self.scaled(-self.field.one())
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut parts = Vec::with_capacity(self.terms.len());
        for (m, c) in self.terms.iter().rev() {
            let mut factors = Vec::new();
            for (idx, &e) in m.exps().iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let name = &self.vars.names()[idx];
                if e == 1 {
                    factors.push(name.clone());
                } else {
                    factors.push(format!("{name}^{e}"));
                }
            }
            let part = if factors.is_empty() {
                format!("{}", c.value())
            } else if c.is_one() {
                factors.join("*")
            } else {
                format!("{}*{}", c.value(), factors.join("*"))
            };
            parts.push(part);
        }
        write!(f, "{}", parts.join(" + "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f2() -> PrimeField {
        PrimeField::new(2).unwrap()
    }

    fn f3() -> PrimeField {
        PrimeField::new(3).unwrap()
    }

    fn xyzt() -> VarSet {
        VarSet::new(["x", "y", "z", "t"]).unwrap()
    }

    fn p(text: &str, vars: &VarSet, field: PrimeField) -> Polynomial {
        Polynomial::parse(text, vars, field).unwrap()
    }

    #[test]
    fn mul_identity() {
        let vars = VarSet::new(["z", "t"]).unwrap();
        let f = p("z^2 + t^3 + 1", &vars, f2());
        let one = Polynomial::one(f2(), &vars);
        assert_eq!(f.checked_mul(&one).unwrap(), f);
    }

    #[test]
    fn freshmans_dream_square() {
        let vars = VarSet::new(["t", "y", "U"]).unwrap();
        let f = p("t + y*U", &vars, f2());
        let sq = f.checked_mul(&f).unwrap();
        assert_eq!(sq, p("t^2 + y^2*U^2", &vars, f2()));
    }

    #[test]
    fn binomial_square_char_3() {
        let vars = VarSet::new(["z", "t"]).unwrap();
        let f = p("z + t", &vars, f3());
        let sq = f.checked_mul(&f).unwrap();
        assert_eq!(sq, p("z^2 + 2*z*t + t^2", &vars, f3()));
    }

    #[test]
    fn field_mismatch_is_reported() {
        let vars = VarSet::new(["x"]).unwrap();
        let a = p("x", &vars, f2());
        let b = p("x", &vars, f3());
        assert_eq!(a.checked_mul(&b), Err(PolyError::FieldMismatch));
    }

    #[test]
    fn exact_divide_frobenius_expansion() {
        // oracle: expand (t + y*U)^6 - t^6 over F_2 by brute-force products
        let vars = VarSet::new(["t", "y", "U"]).unwrap();
        let base = p("t + y*U", &vars, f2());
        let mut pow6 = Polynomial::one(f2(), &vars);
        for _ in 0..6 {
            pow6 = pow6.checked_mul(&base).unwrap();
        }
        let f = pow6.checked_sub(&p("t^6", &vars, f2())).unwrap();
        assert_eq!(f, p("t^4*y^2*U^2 + t^2*y^4*U^4 + y^6*U^6", &vars, f2()));
        let y = p("y", &vars, f2());
        let q = f.exact_divide(&y).unwrap();
        assert_eq!(q, p("t^4*y*U^2 + t^2*y^3*U^4 + y^5*U^6", &vars, f2()));
    }

    #[test]
    fn exact_divide_edge_cases() {
        let vars = VarSet::new(["t", "y"]).unwrap();
        let y = p("y", &vars, f2());
        let zero = Polynomial::zero(f2(), &vars);
        assert_eq!(zero.exact_divide(&y).unwrap(), zero);
        let f = p("t + 1", &vars, f2());
        assert_eq!(f.exact_divide(&y), Err(PolyError::NotDivisible));
        assert_eq!(f.exact_divide(&zero), Err(PolyError::DivisionByZero));
    }

    #[test]
    fn exact_divide_binomial() {
        let vars = VarSet::new(["z", "t"]).unwrap();
        let f = p("z^2 + 2*z*t + t^2", &vars, f3());
        let g = p("z + t", &vars, f3());
        assert_eq!(f.exact_divide(&g).unwrap(), g);
    }

    #[test]
    fn partial_derivatives() {
        let vars = xyzt();
        let rel = p("x^2*y + z^4 + t + t^6", &vars, f2());
        assert_eq!(rel.partial_derivative("t").unwrap(), Polynomial::one(f2(), &vars));
        assert_eq!(
            p("z^4", &vars, f2()).partial_derivative("z").unwrap(),
            Polynomial::zero(f2(), &vars)
        );
        assert_eq!(
            p("t^3", &vars, f2()).partial_derivative("t").unwrap(),
            p("t^2", &vars, f2())
        );
    }

    #[test]
    fn evaluation() {
        let vars = VarSet::new(["z", "t"]).unwrap();
        let f = p("z^4 + t + t^6", &vars, f2());
        let mut point = BTreeMap::new();
        point.insert("z".to_string(), f2().element(0));
        point.insert("t".to_string(), f2().element(1));
        assert!(f.evaluate(&f2(), &point).unwrap().is_zero());

        let one = Polynomial::one(f2(), &vars);
        assert!(one.evaluate(&f2(), &BTreeMap::new()).unwrap().is_one());

        let vars = xyzt();
        let g = p("x^2*y + z^4 + t + t^6", &vars, f2());
        let mut point = BTreeMap::new();
        for (n, v) in [("x", 1), ("y", 1), ("z", 0), ("t", 1)] {
            point.insert(n.to_string(), f2().element(v));
        }
        assert!(g.evaluate(&f2(), &point).unwrap().is_one());

        let mut partial = BTreeMap::new();
        partial.insert("x".to_string(), f2().element(1));
        assert_eq!(
            g.evaluate(&f2(), &partial),
            Err(PolyError::MissingCoordinate("t".into()))
        );
    }

    #[test]
    fn grouping_by_parameter_power() {
        let vars = VarSet::new(["t", "y", "U"]).unwrap();
        let f = p("t + y*U + t^2*y*U^3", &vars, f2());
        let groups = f.coefficients_in("U").unwrap();
        assert_eq!(groups.len(), 3);
        assert_eq!(groups[&0], p("t", &vars, f2()));
        assert_eq!(groups[&1], p("y", &vars, f2()));
        assert_eq!(groups[&3], p("t^2*y", &vars, f2()));
    }

    #[test]
    fn substitute_translation() {
        let vars = VarSet::new(["t"]).unwrap();
        let target = VarSet::new(["t", "U"]).unwrap();
        let f = p("t^2 + t", &vars, f3());
        let mut images = BTreeMap::new();
        images.insert("t".to_string(), p("t + U", &target, f3()));
        let got = f.substitute(&target, &images).unwrap();
        assert_eq!(got, p("t^2 + 2*t*U + U^2 + t + U", &target, f3()));
    }
}
