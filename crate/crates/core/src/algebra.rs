//! Finitely presented quotient algebras with a single distinguished relation
//! and canonical normal forms.
//!
//! A presentation carries generators, optional central parameters (`U`, `V`,
//! ...) and at most one relation `µ + τ` whose distinguished monomial `µ` is
//! turned into the rewrite rule `µ -> -τ`. Exhaustive rewriting terminates
//! because every tail monomial has strictly smaller total degree in the
//! variables of `µ`, and the single non-self-overlapping rule is confluent,
//! so normal forms are canonical and equality is structural.

use crate::field::{FieldElement, PrimeField};
use crate::poly::{Monomial, PolyError, Polynomial, VarSet};
use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AlgebraError {
    Poly(PolyError),
    Field(crate::field::FieldError),
    BadParams(String),
    RuleMonomialMissing(String),
    RuleUsesParameters,
    RuleNotTerminating(String),
    RelationUsesParameters,
    OwnerMismatch,
    MissingImage(String),
    ZeroExponentRule,
}

impl fmt::Display for AlgebraError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AlgebraError::Poly(e) => write!(f, "{e}"),
            AlgebraError::Field(e) => write!(f, "{e}"),
            AlgebraError::BadParams(m) => write!(f, "invalid parameters: {m}"),
            AlgebraError::RuleMonomialMissing(m) => {
                write!(f, "rule monomial {m} does not occur in the relation")
            }
            AlgebraError::RuleUsesParameters => {
                write!(f, "rule monomial may only involve generators")
            }
            AlgebraError::RuleNotTerminating(m) => {
                write!(f, "unsupported relation: {m}")
            }
            AlgebraError::RelationUsesParameters => {
                write!(f, "relation may only involve generators")
            }
            AlgebraError::OwnerMismatch => write!(f, "elements of different algebras"),
            AlgebraError::MissingImage(g) => write!(f, "no image given for generator `{g}`"),
            AlgebraError::ZeroExponentRule => write!(f, "rule monomial must be non-constant"),
        }
    }
}

impl std::error::Error for AlgebraError {}

impl From<PolyError> for AlgebraError {
    fn from(e: PolyError) -> Self {
        AlgebraError::Poly(e)
    }
}

impl From<crate::field::FieldError> for AlgebraError {
    fn from(e: crate::field::FieldError) -> Self {
        AlgebraError::Field(e)
    }
}

/// Defining data of the Asanuma family: `k[X,Y,Z,T]/(X^m Y + Z^{p^e} + T + T^{sp})`
/// with `p^e` not dividing `sp` and `sp` not dividing `p^e`. We write
/// `s = q p^r` with `p` prime to `q`; the two divisibility hypotheses force
/// `e - r - 1 > 0` and `q > 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AsanumaParams {
    pub p: u32,
    pub m: u32,
    pub e: u32,
    pub s: u32,
    pub q: u32,
    pub r: u32,
}

impl AsanumaParams {
    pub fn new(p: u64, m: u32, e: u32, s: u32) -> Result<Self, AlgebraError> {
        let field = PrimeField::new(p)?;
        let p = field.characteristic();
        if m < 1 || e < 1 || s < 1 {
            return Err(AlgebraError::BadParams("m, e, s must be positive".into()));
        }
        let pe: u128 = (p as u128)
            .checked_pow(e)
            .filter(|&v| v <= 1 << 31)
            .ok_or_else(|| AlgebraError::BadParams("p^e exceeds 2^31".into()))?;
        let sp: u128 = s as u128 * p as u128;
        if sp > 1 << 31 {
            return Err(AlgebraError::BadParams("s*p exceeds 2^31".into()));
        }
        if sp % pe == 0 {
            return Err(AlgebraError::BadParams(format!("p^e = {pe} divides sp = {sp}")));
        }
        if pe % sp == 0 {
            return Err(AlgebraError::BadParams(format!("sp = {sp} divides p^e = {pe}")));
        }
        let mut q = s;
        let mut r = 0u32;
        while q % p == 0 {
            q /= p;
            r += 1;
        }
        debug_assert!(q > 1 && e > r + 1, "implied by the divisibility hypotheses");
        Ok(AsanumaParams { p, m, e, s, q, r })
    }

    pub fn field(&self) -> PrimeField {
        PrimeField::new(self.p as u64).expect("validated at construction")
    }

    /// `p^e` as an exponent.
    pub fn pe(&self) -> u32 {
        (self.p as u64).pow(self.e) as u32
    }

    /// `s * p` as an exponent.
    pub fn sp(&self) -> u32 {
        self.s * self.p
    }
}

#[derive(Debug, Clone)]
pub struct RewriteRule {
    /// The distinguished monomial µ, monic in the relation.
    head: Monomial,
    /// `-τ`, so that a term `c·µ·σ` rewrites to `c·σ·(-τ)`.
    minus_tail: Polynomial,
}

impl RewriteRule {
    pub fn head(&self) -> &Monomial {
        &self.head
    }

    pub fn minus_tail(&self) -> &Polynomial {
        &self.minus_tail
    }
}

#[derive(Debug)]
struct Presentation {
    field: PrimeField,
    generators: Vec<String>,
    params: Vec<String>,
    vars: VarSet,
    /// Zero for a free polynomial ring; otherwise µ + τ with µ monic.
    relation: Polynomial,
    rule: Option<RewriteRule>,
    /// Generator the rule is linear in (the variable the rewrite solves for).
    eliminated: Option<String>,
    asanuma: Option<AsanumaParams>,
}

/// A cheap-to-clone handle on a quotient presentation.
#[derive(Clone)]
pub struct PresentedAlgebra {
    inner: Arc<Presentation>,
}

impl PartialEq for PresentedAlgebra {
    fn eq(&self, other: &Self) -> bool {
        self.same_presentation(other)
    }
}

impl Eq for PresentedAlgebra {}

impl fmt::Debug for PresentedAlgebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "F_{}[{}]",
            self.inner.field.characteristic(),
            self.inner.vars.names().join(",")
        )?;
        if !self.inner.relation.is_zero() {
            write!(f, "/({})", self.inner.relation)?;
        }
        Ok(())
    }
}

impl PresentedAlgebra {
    /// Free polynomial ring on the given generators.
    pub fn free_ring<S: AsRef<str>>(field: PrimeField, gens: &[S]) -> Result<Self, AlgebraError> {
        Self::build(field, gens, &[] as &[&str], None, None)
    }

    /// Quotient by a single relation with the given distinguished monomial.
    pub fn quotient<S: AsRef<str>, T: AsRef<str>>(
        field: PrimeField,
        gens: &[S],
        params: &[T],
        relation: &str,
        rule_monomial: &str,
    ) -> Result<Self, AlgebraError> {
        Self::build(field, gens, params, Some((relation, rule_monomial)), None)
    }

    /// The Asanuma threefold for the given parameters: generators x, y, z, t,
    /// relation `x^m*y + z^{p^e} + t + t^{sp}`, rule monomial `x^m*y`.
    pub fn asanuma(params: AsanumaParams) -> Result<Self, AlgebraError> {
        let relation = format!(
            "x^{}*y + z^{} + t + t^{}",
            params.m,
            params.pe(),
            params.sp()
        );
        let rule = format!("x^{}*y", params.m);
        Self::build(
            params.field(),
            &["x", "y", "z", "t"],
            &[] as &[&str],
            Some((&relation, &rule)),
            Some(params),
        )
    }

    fn build<S: AsRef<str>, T: AsRef<str>>(
        field: PrimeField,
        gens: &[S],
        params: &[T],
        relation: Option<(&str, &str)>,
        asanuma: Option<AsanumaParams>,
    ) -> Result<Self, AlgebraError> {
        let generators: Vec<String> = gens.iter().map(|s| s.as_ref().to_string()).collect();
        let param_names: Vec<String> = params.iter().map(|s| s.as_ref().to_string()).collect();
        let mut all = generators.clone();
        all.extend(param_names.iter().cloned());
        let vars = VarSet::new(all)?;
        let n_gens = generators.len();

        let (relation, rule, eliminated) = match relation {
            None => (Polynomial::zero(field, &vars), None, None),
            Some((rel_text, rule_text)) => {
                let rel = Polynomial::parse(rel_text, &vars, field)?;
                let rule_poly = Polynomial::parse(rule_text, &vars, field)?;
                if rule_poly.num_terms() != 1 {
                    return Err(AlgebraError::RuleMonomialMissing(rule_text.into()));
                }
                let (head, _) = rule_poly.terms().next().expect("one term");
                let head = head.clone();
                if head.is_constant() {
                    return Err(AlgebraError::ZeroExponentRule);
                }
                if head.exps().iter().skip(n_gens).any(|&e| e > 0) {
                    return Err(AlgebraError::RuleUsesParameters);
                }
                for (m, _) in rel.terms() {
                    if m.exps().iter().skip(n_gens).any(|&e| e > 0) {
                        return Err(AlgebraError::RelationUsesParameters);
                    }
                }
                let c = rel.coeff(&head);
                if c.is_zero() {
                    return Err(AlgebraError::RuleMonomialMissing(rule_text.into()));
                }
                // scale so µ is monic; a unit factor does not change the ideal
                let rel = rel.scaled(c.invert()?);
                let head_poly =
                    Polynomial::from_term(field, &vars, head.clone(), field.one());
                let tail = rel.checked_sub(&head_poly)?;
                // termination and confluence guards
                let head_vars: Vec<usize> =
                    (0..n_gens).filter(|&i| head.exp(i) > 0).collect();
                let head_deg: u64 = head_vars.iter().map(|&i| head.exp(i) as u64).sum();
                for (m, _) in tail.terms() {
                    if head.divides(m) {
                        return Err(AlgebraError::RuleNotTerminating(format!(
                            "tail monomial divisible by the rule monomial in {rel_text}"
                        )));
                    }
                    let d: u64 = head_vars.iter().map(|&i| m.exp(i) as u64).sum();
                    if d >= head_deg {
                        return Err(AlgebraError::RuleNotTerminating(format!(
                            "tail monomial does not drop in the rule variables in {rel_text}"
                        )));
                    }
                }
                // the variable the rule solves for: last exponent-1 generator
                let eliminated = (0..n_gens)
                    .rev()
                    .find(|&i| head.exp(i) == 1)
                    .map(|i| generators[i].clone());
                let minus_tail = -&tail;
                (rel, Some(RewriteRule { head, minus_tail }), eliminated)
            }
        };

        Ok(PresentedAlgebra {
            inner: Arc::new(Presentation {
                field,
                generators,
                params: param_names,
                vars,
                relation,
                rule,
                eliminated,
                asanuma,
            }),
        })
    }

    /// The same algebra with extra central parameters appended.
    pub fn with_params<S: AsRef<str>>(&self, extra: &[S]) -> Result<Self, AlgebraError> {
        let mut params = self.inner.params.clone();
        params.extend(extra.iter().map(|s| s.as_ref().to_string()));
        let mut all = self.inner.generators.clone();
        all.extend(params.iter().cloned());
        let vars = VarSet::new(all)?;
        let relation = self.inner.relation.extended(&vars)?;
        let rule = match &self.inner.rule {
            None => None,
            Some(r) => {
                let mut exps = r.head.exps().to_vec();
                exps.resize(vars.len(), 0);
                Some(RewriteRule {
                    head: Monomial::from_exps(exps),
                    minus_tail: r.minus_tail.extended(&vars)?,
                })
            }
        };
        Ok(PresentedAlgebra {
            inner: Arc::new(Presentation {
                field: self.inner.field,
                generators: self.inner.generators.clone(),
                params,
                vars,
                relation,
                rule,
                eliminated: self.inner.eliminated.clone(),
                asanuma: self.inner.asanuma,
            }),
        })
    }

    pub fn field(&self) -> PrimeField {
        self.inner.field
    }

    pub fn generators(&self) -> &[String] {
        &self.inner.generators
    }

    pub fn params(&self) -> &[String] {
        &self.inner.params
    }

    pub fn vars(&self) -> &VarSet {
        &self.inner.vars
    }

    pub fn relation(&self) -> &Polynomial {
        &self.inner.relation
    }

    pub fn rule(&self) -> Option<&RewriteRule> {
        self.inner.rule.as_ref()
    }

    pub fn eliminated_var(&self) -> Option<&str> {
        self.inner.eliminated.as_deref()
    }

    pub fn asanuma_params(&self) -> Option<AsanumaParams> {
        self.inner.asanuma
    }

    pub fn is_free_ring(&self) -> bool {
        self.inner.rule.is_none()
    }

    pub fn same_presentation(&self, other: &PresentedAlgebra) -> bool {
        Arc::ptr_eq(&self.inner, &other.inner)
            || (self.inner.field == other.inner.field
                && self.inner.generators == other.inner.generators
                && self.inner.params == other.inner.params
                && self.inner.relation == other.inner.relation
                && self.inner.rule.as_ref().map(|r| &r.head)
                    == other.inner.rule.as_ref().map(|r| &r.head))
    }

    /// Certify irreducibility of the relation when it is linear in the
    /// eliminated variable with a tail free of the rule variables: such a
    /// relation is a primitive linear polynomial over a UFD, hence
    /// irreducible iff the tail is nonzero. Returns `None` when the
    /// criterion does not apply.
    pub fn relation_irreducibility(&self) -> Option<bool> {
        let rule = self.inner.rule.as_ref()?;
        let elim = self.inner.eliminated.as_ref()?;
        let idx = self.inner.vars.index_of(elim)?;
        if rule.head.exp(idx) != 1 {
            return None;
        }
        let tail = -&rule.minus_tail;
        for (m, _) in tail.terms() {
            for (i, &e) in m.exps().iter().enumerate() {
                if e > 0 && rule.head.exp(i) > 0 {
                    return None;
                }
            }
        }
        Some(!tail.is_zero())
    }

    pub fn zero(&self) -> AlgebraElement {
        AlgebraElement {
            owner: self.clone(),
            nf: Polynomial::zero(self.inner.field, &self.inner.vars),
        }
    }

    pub fn one(&self) -> AlgebraElement {
        AlgebraElement {
            owner: self.clone(),
            nf: Polynomial::one(self.inner.field, &self.inner.vars),
        }
    }

    pub fn generator(&self, name: &str) -> Result<AlgebraElement, AlgebraError> {
        let nf = Polynomial::variable(self.inner.field, &self.inner.vars, name)?;
        Ok(AlgebraElement { owner: self.clone(), nf })
    }

    /// Parse a polynomial expression and reduce it to normal form.
    pub fn element(&self, text: &str) -> Result<AlgebraElement, AlgebraError> {
        let f = Polynomial::parse(text, &self.inner.vars, self.inner.field)?;
        self.normalize(&f)
    }

    /// Normal form of a polynomial over this algebra's universe (polynomials
    /// over a sub-universe are extended by name first).
    pub fn normalize(&self, f: &Polynomial) -> Result<AlgebraElement, AlgebraError> {
        if f.field() != self.inner.field {
            return Err(AlgebraError::Poly(PolyError::FieldMismatch));
        }
        let f = if f.vars() == &self.inner.vars {
            f.clone()
        } else {
            f.extended(&self.inner.vars)?
        };
        Ok(AlgebraElement { owner: self.clone(), nf: self.normalize_poly(f) })
    }

    /// Exhaustive rewriting µ -> -τ; the result is independent of the order
    /// in which reducible terms are processed.
    pub fn normalize_poly(&self, mut f: Polynomial) -> Polynomial {
        let Some(rule) = &self.inner.rule else {
            return f;
        };
        loop {
            let reducible: Vec<(Monomial, FieldElement)> = f
                .terms()
                .filter(|(m, _)| rule.head.divides(m))
                .map(|(m, c)| (m.clone(), c))
                .collect();
            if reducible.is_empty() {
                return f;
            }
            for (m, c) in reducible {
                f = self.rewrite_term(f, &m, c, rule);
            }
        }
    }

    /// Single-term rewriting with a caller-chosen order; used to exercise
    /// confluence. `pick` receives the number of reducible terms and returns
    /// the index (in ascending monomial order) of the one to rewrite.
    pub fn normalize_poly_with_order(
        &self,
        mut f: Polynomial,
        mut pick: impl FnMut(usize) -> usize,
    ) -> Polynomial {
        let Some(rule) = &self.inner.rule else {
            return f;
        };
        loop {
            let reducible: Vec<(Monomial, FieldElement)> = f
                .terms()
                .filter(|(m, _)| rule.head.divides(m))
                .map(|(m, c)| (m.clone(), c))
                .collect();
            if reducible.is_empty() {
                return f;
            }
            let idx = pick(reducible.len()) % reducible.len();
            let (m, c) = reducible[idx].clone();
            f = self.rewrite_term(f, &m, c, rule);
        }
    }

    fn rewrite_term(
        &self,
        f: Polynomial,
        m: &Monomial,
        c: FieldElement,
        rule: &RewriteRule,
    ) -> Polynomial {
        let quotient = m.div(&rule.head);
        let removed = Polynomial::from_term(self.inner.field, &self.inner.vars, m.clone(), c);
        let quotient_poly = Polynomial::from_term(
            self.inner.field,
            &self.inner.vars,
            quotient,
            self.inner.field.one(),
        );
        let replacement = (&quotient_poly * &rule.minus_tail).scaled(c);
        &(&f - &removed) + &replacement
    }
}

/// An element of a [`PresentedAlgebra`], held in canonical normal form.
#[derive(Clone)]
pub struct AlgebraElement {
    owner: PresentedAlgebra,
    nf: Polynomial,
}

impl fmt::Debug for AlgebraElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.nf)
    }
}

impl fmt::Display for AlgebraElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.nf)
    }
}

impl PartialEq for AlgebraElement {
    fn eq(&self, other: &Self) -> bool {
        self.owner.same_presentation(&other.owner) && self.nf == other.nf
    }
}

impl Eq for AlgebraElement {}

impl AlgebraElement {
    pub fn owner(&self) -> &PresentedAlgebra {
        &self.owner
    }

    pub fn nf(&self) -> &Polynomial {
        &self.nf
    }

    pub fn is_zero(&self) -> bool {
        self.nf.is_zero()
    }

    /// Structural equality of normal forms; sound and complete because
    /// normal forms are unique.
    pub fn equals(&self, other: &AlgebraElement) -> Result<bool, AlgebraError> {
        if !self.owner.same_presentation(&other.owner) {
            return Err(AlgebraError::OwnerMismatch);
        }
        Ok(self.nf == other.nf)
    }

    fn check_owner(&self, other: &AlgebraElement) {
        assert!(
            self.owner.same_presentation(&other.owner),
            "elements of different algebras"
        );
    }

    pub fn add(&self, other: &AlgebraElement) -> AlgebraElement {
        self.check_owner(other);
        // a sum of normal forms is a normal form
        AlgebraElement { owner: self.owner.clone(), nf: &self.nf + &other.nf }
    }

    pub fn sub(&self, other: &AlgebraElement) -> AlgebraElement {
        self.check_owner(other);
        AlgebraElement { owner: self.owner.clone(), nf: &self.nf - &other.nf }
    }

    pub fn neg(&self) -> AlgebraElement {
        AlgebraElement { owner: self.owner.clone(), nf: -&self.nf }
    }

    pub fn mul(&self, other: &AlgebraElement) -> AlgebraElement {
        self.check_owner(other);
        let prod = &self.nf * &other.nf;
        AlgebraElement { owner: self.owner.clone(), nf: self.owner.normalize_poly(prod) }
    }

    pub fn pow(&self, e: u32) -> AlgebraElement {
        let raw = self.nf.pow(e).expect("exponent overflow");
        AlgebraElement { owner: self.owner.clone(), nf: self.owner.normalize_poly(raw) }
    }

    pub fn scaled(&self, c: FieldElement) -> AlgebraElement {
        AlgebraElement { owner: self.owner.clone(), nf: self.nf.scaled(c) }
    }

    /// Which variables occur in the normal form; `y_free` is true when the
    /// eliminated variable does not occur, i.e. the element lies in the
    /// subring on the other generators.
    pub fn subring_profile(&self) -> SubringProfile {
        let mut occurs = BTreeMap::new();
        for v in self.owner.vars().names() {
            occurs.insert(v.clone(), self.nf.occurs(v));
        }
        let y_free = self.owner.eliminated_var().map(|y| !self.nf.occurs(y));
        SubringProfile { occurs, y_free }
    }
}

/// Per-variable occurrence report for an element's normal form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubringProfile {
    pub occurs: BTreeMap<String, bool>,
    /// `Some(true)` iff the algebra has an eliminated variable and the
    /// element avoids it.
    pub y_free: Option<bool>,
}

/// Whether the generator images define a ring homomorphism, i.e. whether the
/// source relation maps to zero in the target. Source variables without an
/// image map to the same-named target variable.
pub fn verify_hom(
    source: &PresentedAlgebra,
    target: &PresentedAlgebra,
    images: &BTreeMap<String, AlgebraElement>,
) -> Result<bool, AlgebraError> {
    for gen in source.generators() {
        if !images.contains_key(gen) && !target.vars().contains(gen) {
            return Err(AlgebraError::MissingImage(gen.clone()));
        }
    }
    let image = apply_images(source, target, &source.relation().clone(), images)?;
    Ok(image.is_zero())
}

/// Substitute generator images into a polynomial over the source universe
/// and normalize in the target.
pub fn apply_images(
    source: &PresentedAlgebra,
    target: &PresentedAlgebra,
    f: &Polynomial,
    images: &BTreeMap<String, AlgebraElement>,
) -> Result<AlgebraElement, AlgebraError> {
    let mut map = BTreeMap::new();
    for (name, img) in images {
        if !img.owner().same_presentation(target) {
            return Err(AlgebraError::OwnerMismatch);
        }
        if source.vars().contains(name) {
            map.insert(name.clone(), img.nf().clone());
        }
    }
    let substituted = f.substitute(target.vars(), &map)?;
    target.normalize(&substituted)
}

/// Check a pair of generator-image maps in opposite directions: both must be
/// homomorphisms and both composites must fix every generator.
pub fn verify_isomorphism_pair(
    a: &PresentedAlgebra,
    b: &PresentedAlgebra,
    fwd: &BTreeMap<String, AlgebraElement>,
    bwd: &BTreeMap<String, AlgebraElement>,
) -> Result<bool, AlgebraError> {
    if !verify_hom(a, b, fwd)? || !verify_hom(b, a, bwd)? {
        return Ok(false);
    }
    for gen in a.generators() {
        let forth = match fwd.get(gen) {
            Some(img) => img.clone(),
            None => b.generator(gen)?,
        };
        let back = apply_images(b, a, forth.nf(), bwd)?;
        if !back.equals(&a.generator(gen)?)? {
            return Ok(false);
        }
    }
    for gen in b.generators() {
        let back = match bwd.get(gen) {
            Some(img) => img.clone(),
            None => a.generator(gen)?,
        };
        let forth = apply_images(a, b, back.nf(), fwd)?;
        if !forth.equals(&b.generator(gen)?)? {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sample::SplitMix64;

    fn a223() -> PresentedAlgebra {
        PresentedAlgebra::asanuma(AsanumaParams::new(2, 2, 2, 3).unwrap()).unwrap()
    }

    #[test]
    fn asanuma_params_validation() {
        let p = AsanumaParams::new(2, 2, 2, 3).unwrap();
        assert_eq!((p.q, p.r), (3, 0));
        assert_eq!((p.pe(), p.sp()), (4, 6));
        let p = AsanumaParams::new(3, 1, 2, 2).unwrap();
        assert_eq!((p.q, p.r), (2, 0));
        // sp = p^e
        assert!(AsanumaParams::new(2, 2, 2, 2).is_err());
        // p^e | sp: p=2, e=1, s=3 -> sp=6, p^e=2
        assert!(AsanumaParams::new(2, 2, 1, 3).is_err());
        // sp | p^e: p=2, e=3, s=2 -> sp=4 divides 8
        assert!(AsanumaParams::new(2, 2, 3, 2).is_err());
        assert!(AsanumaParams::new(4, 2, 2, 3).is_err());
    }

    #[test]
    fn normalize_defining_relation() {
        let a = a223();
        let lhs = a.element("x^2*y").unwrap();
        let rhs = a.element("z^4 + t + t^6").unwrap();
        assert_eq!(lhs, rhs);
        assert_eq!(lhs.nf().to_string(), "t^6 + z^4 + t");
    }

    #[test]
    fn normalize_relation_degree_drop() {
        // x^m y + z^{p^e} + t^{sp} = -t, which is t in characteristic 2
        let a = a223();
        let got = a.element("x^2*y + z^4 + t^6").unwrap();
        assert_eq!(got, a.element("t").unwrap());
    }

    #[test]
    fn normalize_already_normal() {
        let a = a223();
        let z4 = a.element("z^4").unwrap();
        assert_eq!(z4.nf().to_string(), "z^4");
    }

    #[test]
    fn normalize_one_step_then_stops() {
        // x^3 y^2 = x*y*(x^2 y) -> x*y*(z^4 + t + t^6), which is normal
        let a = a223();
        let got = a.element("x^3*y^2").unwrap();
        let expected = {
            let xy = a.element("x*y").unwrap();
            let tail = a.element("z^4 + t + t^6").unwrap();
            xy.mul(&tail)
        };
        assert_eq!(got, expected);
        // every monomial of the result satisfies deg_x < 2 or deg_y = 0
        for (m, _) in got.nf().terms() {
            assert!(m.exp(0) < 2 || m.exp(1) == 0);
        }
    }

    #[test]
    fn equality_through_the_relation() {
        let a = a223();
        assert!(a
            .element("x^2*y")
            .unwrap()
            .equals(&a.element("z^4 + t + t^6").unwrap())
            .unwrap());
        assert!(a.element("y").unwrap().equals(&a.element("y").unwrap()).unwrap());
        assert!(!a.element("y").unwrap().equals(&a.element("t").unwrap()).unwrap());
    }

    #[test]
    fn owner_mismatch_is_reported() {
        let a = a223();
        let b = PresentedAlgebra::asanuma(AsanumaParams::new(2, 3, 2, 3).unwrap()).unwrap();
        let ea = a.element("y").unwrap();
        let eb = b.element("y").unwrap();
        assert_eq!(ea.equals(&eb), Err(AlgebraError::OwnerMismatch));
    }

    #[test]
    fn subring_profiles() {
        let a = a223();
        assert_eq!(a.element("x^3 + z*t").unwrap().subring_profile().y_free, Some(true));
        // x*y is already normal for m = 2
        let xy = a.element("x*y").unwrap();
        assert_eq!(xy.nf().to_string(), "x*y");
        assert_eq!(xy.subring_profile().y_free, Some(false));
        // x^2*y rewrites into k[z,t]
        assert_eq!(a.element("x^2*y").unwrap().subring_profile().y_free, Some(true));
    }

    #[test]
    fn verify_hom_identity_and_twist() {
        let a = a223();
        let mut id = BTreeMap::new();
        for g in a.generators() {
            id.insert(g.clone(), a.generator(g).unwrap());
        }
        assert!(verify_hom(&a, &a, &id).unwrap());

        // t -> t + x^2, y -> y + 1 + t^4 x^2 + t^2 x^6 + x^10 is a ring map
        let mut tw = BTreeMap::new();
        tw.insert("t".to_string(), a.element("t + x^2").unwrap());
        tw.insert(
            "y".to_string(),
            a.element("y + 1 + t^4*x^2 + t^2*x^6 + x^10").unwrap(),
        );
        assert!(verify_hom(&a, &a, &tw).unwrap());

        // t -> t + 1 alone does not respect the relation
        let mut bad = BTreeMap::new();
        bad.insert("t".to_string(), a.element("t + 1").unwrap());
        assert!(!verify_hom(&a, &a, &bad).unwrap());
    }

    #[test]
    fn isomorphism_pairs() {
        let a = a223();
        let id: BTreeMap<String, AlgebraElement> = BTreeMap::new();
        assert!(verify_isomorphism_pair(&a, &a, &id, &id).unwrap());

        let f5 = PrimeField::new(5).unwrap();
        let r = PresentedAlgebra::free_ring(f5, &["X", "Y"]).unwrap();
        let mut fwd = BTreeMap::new();
        fwd.insert("X".to_string(), r.element("X + Y^2").unwrap());
        let mut bwd = BTreeMap::new();
        bwd.insert("X".to_string(), r.element("X - Y^2").unwrap());
        assert!(verify_isomorphism_pair(&r, &r, &fwd, &bwd).unwrap());

        // constant-zero images are homomorphisms of a free ring but no
        // isomorphism pair
        let mut zero = BTreeMap::new();
        zero.insert("X".to_string(), r.zero());
        zero.insert("Y".to_string(), r.zero());
        assert!(!verify_isomorphism_pair(&r, &r, &zero, &zero).unwrap());
    }

    #[test]
    fn rejects_unsupported_relations() {
        let f2 = PrimeField::new(2).unwrap();
        let no_params: &[&str] = &[];
        // tail monomial divisible by the rule monomial
        assert!(matches!(
            PresentedAlgebra::quotient(f2, &["x", "y", "z"], no_params, "x*y + x*y*z + z", "x*y"),
            Err(AlgebraError::RuleNotTerminating(_))
        ));
        // tail does not drop in the rule variables
        assert!(matches!(
            PresentedAlgebra::quotient(f2, &["x", "y", "z"], no_params, "x*y + x^2 + y^2", "x*y"),
            Err(AlgebraError::RuleNotTerminating(_))
        ));
        // missing rule monomial
        assert!(matches!(
            PresentedAlgebra::quotient(f2, &["x", "y", "z"], no_params, "x^2 + z", "x*y"),
            Err(AlgebraError::RuleMonomialMissing(_))
        ));
    }

    #[test]
    fn irreducibility_certificate() {
        let a = a223();
        assert_eq!(a.relation_irreducibility(), Some(true));
        let f2 = PrimeField::new(2).unwrap();
        let no_params: &[&str] = &[];
        let b = PresentedAlgebra::quotient(
            f2,
            &["x", "y", "z", "t"],
            no_params,
            "x^2*y + z^4 + t^6",
            "x^2*y",
        )
        .unwrap();
        assert_eq!(b.relation_irreducibility(), Some(true));
        let free = PresentedAlgebra::free_ring(f2, &["x"]).unwrap();
        assert_eq!(free.relation_irreducibility(), None);
    }

    #[test]
    fn confluence_under_random_orders() {
        let a = a223();
        let mut rng = SplitMix64::new(0xC0FFEE);
        for _ in 0..200 {
            let f = crate::sample::random_poly(&mut rng, a.field(), a.vars(), a.vars().len(), 4, 5);
            let canonical = a.normalize_poly(f.clone());
            let mut order_rng = SplitMix64::new(rng.next_u64());
            let randomized =
                a.normalize_poly_with_order(f, |n| order_rng.below(n as u64) as usize);
            assert_eq!(canonical, randomized);
        }
    }

    #[test]
    fn normalize_is_a_ring_hom_section() {
        let a = a223();
        let mut rng = SplitMix64::new(0xFEED);
        for _ in 0..100 {
            let f = crate::sample::random_poly(&mut rng, a.field(), a.vars(), a.vars().len(), 3, 4);
            let g = crate::sample::random_poly(&mut rng, a.field(), a.vars(), a.vars().len(), 3, 4);
            let nf = |p: &Polynomial| a.normalize_poly(p.clone());
            assert_eq!(nf(&(&f + &g)), &nf(&f) + &nf(&g));
            assert_eq!(nf(&(&f * &g)), nf(&(&nf(&f) * &nf(&g))));
        }
    }
}
