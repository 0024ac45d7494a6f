//! Exact arithmetic in prime fields `F_p` and finite extensions `F_{p^a}`.
//!
//! Scalars are stored as canonical least non-negative residues and every
//! reduction is eager, so equality is structural. Extension fields carry a
//! monic irreducible modulus over `F_p`; when none is supplied the
//! lexicographically smallest irreducible of the requested degree is chosen,
//! which keeps runs reproducible.

use std::fmt;
use std::sync::Arc;

/// Largest supported characteristic.
pub const MAX_CHARACTERISTIC: u64 = 1 << 31;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FieldError {
    NotPrime(u64),
    CharacteristicTooLarge(u64),
    DivisionByZero,
    BadModulus(String),
    ReducibleModulus(String),
    BadDegree(u32),
    MixedFields,
}

impl fmt::Display for FieldError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldError::NotPrime(p) => write!(f, "{p} is not prime"),
            FieldError::CharacteristicTooLarge(p) => {
                write!(f, "characteristic {p} exceeds 2^31")
            }
            FieldError::DivisionByZero => write!(f, "division by zero"),
            FieldError::BadModulus(m) => write!(f, "bad extension modulus: {m}"),
            FieldError::ReducibleModulus(m) => {
                write!(f, "extension modulus is reducible: {m}")
            }
            FieldError::BadDegree(a) => write!(f, "unsupported extension degree {a}"),
            FieldError::MixedFields => write!(f, "elements belong to different fields"),
        }
    }
}

impl std::error::Error for FieldError {}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

/// The prime field `F_p`, `p <= 2^31`.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct PrimeField {
    p: u32,
}

impl fmt::Debug for PrimeField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{}", self.p)
    }
}

impl PrimeField {
    pub fn new(p: u64) -> Result<Self, FieldError> {
        if p > MAX_CHARACTERISTIC {
            return Err(FieldError::CharacteristicTooLarge(p));
        }
        if !is_prime(p) {
            return Err(FieldError::NotPrime(p));
        }
        Ok(PrimeField { p: p as u32 })
    }

    pub fn characteristic(&self) -> u32 {
        self.p
    }

    /// Canonical representative of `n` mod p.
    pub fn element(&self, n: i64) -> FieldElement {
        let p = self.p as i64;
        let v = n.rem_euclid(p) as u32;
        FieldElement { p: self.p, value: v }
    }

    pub fn zero(&self) -> FieldElement {
        FieldElement { p: self.p, value: 0 }
    }

    pub fn one(&self) -> FieldElement {
        self.element(1)
    }
}

/// An element of `F_p`, held as its canonical residue.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct FieldElement {
    p: u32,
    value: u32,
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (mod {})", self.value, self.p)
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

impl FieldElement {
    pub fn value(&self) -> u32 {
        self.value
    }

    pub fn field(&self) -> PrimeField {
        PrimeField { p: self.p }
    }

    pub fn is_zero(&self) -> bool {
        self.value == 0
    }

    pub fn is_one(&self) -> bool {
        self.value == 1
    }

    pub fn pow(&self, mut e: u64) -> FieldElement {
        let p = self.p as u64;
        let mut base = self.value as u64;
        let mut acc = 1u64;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base % p;
            }
            base = base * base % p;
            e >>= 1;
        }
        FieldElement { p: self.p, value: acc as u32 }
    }

    /// Multiplicative inverse; errors on zero.
    pub fn invert(&self) -> Result<FieldElement, FieldError> {
        if self.is_zero() {
            return Err(FieldError::DivisionByZero);
        }
        Ok(self.pow(self.p as u64 - 2))
    }

    /// `x^(p^i)`, computed by repeated p-th powers.
    pub fn frobenius(&self, i: u32) -> FieldElement {
        let mut x = *self;
        for _ in 0..i {
            x = x.pow(self.p as u64);
        }
        x
    }
}

macro_rules! check_same_field {
    ($a:expr, $b:expr) => {
        assert_eq!($a.p, $b.p, "elements belong to different prime fields");
    };
}

impl std::ops::Add for FieldElement {
    type Output = FieldElement;
    fn add(self, rhs: FieldElement) -> FieldElement {
        check_same_field!(self, rhs);
        let p = self.p as u64;
        let v = (self.value as u64 + rhs.value as u64) % p;
        FieldElement { p: self.p, value: v as u32 }
    }
}

impl std::ops::Sub for FieldElement {
    type Output = FieldElement;
    fn sub(self, rhs: FieldElement) -> FieldElement {
        check_same_field!(self, rhs);
        let p = self.p as u64;
        let v = (self.value as u64 + p - rhs.value as u64) % p;
        FieldElement { p: self.p, value: v as u32 }
    }
}

impl std::ops::Mul for FieldElement {
    type Output = FieldElement;
    fn mul(self, rhs: FieldElement) -> FieldElement {
        check_same_field!(self, rhs);
        let p = self.p as u64;
        let v = (self.value as u64 * rhs.value as u64) % p;
        FieldElement { p: self.p, value: v as u32 }
    }
}

impl std::ops::Neg for FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        let p = self.p as u64;
        let v = (p - self.value as u64) % p;
        FieldElement { p: self.p, value: v as u32 }
    }
}

// ---- dense univariate arithmetic over F_p, used for extension moduli ----

fn uni_trim(v: &mut Vec<u32>) {
    while v.last() == Some(&0) {
        v.pop();
    }
}

fn uni_mul_mod(p: u64, a: &[u32], b: &[u32], m: &[u32]) -> Vec<u32> {
    let mut prod = vec![0u64; a.len() + b.len()];
    for (i, &ai) in a.iter().enumerate() {
        if ai == 0 {
            continue;
        }
        for (j, &bj) in b.iter().enumerate() {
            prod[i + j] = (prod[i + j] + ai as u64 * bj as u64) % p;
        }
    }
    uni_rem(p, prod, m)
}

/// Remainder of `a` by monic `m`, coefficients ascending.
fn uni_rem(p: u64, mut a: Vec<u64>, m: &[u32]) -> Vec<u32> {
    let dm = m.len() - 1;
    while a.len() > dm {
        let lead = a[a.len() - 1] % p;
        let shift = a.len() - 1 - dm;
        if lead != 0 {
            for (k, &mk) in m.iter().enumerate().take(dm) {
                let idx = shift + k;
                a[idx] = (a[idx] + p * p - lead * mk as u64 % p) % p;
            }
        }
        a.pop();
    }
    let mut out: Vec<u32> = a.into_iter().map(|c| (c % p) as u32).collect();
    uni_trim(&mut out);
    out
}

fn uni_pow_mod(p: u64, base: &[u32], mut e: u64, m: &[u32]) -> Vec<u32> {
    let mut acc = vec![1u32];
    let mut b = base.to_vec();
    while e > 0 {
        if e & 1 == 1 {
            acc = uni_mul_mod(p, &acc, &b, m);
        }
        b = uni_mul_mod(p, &b, &b, m);
        e >>= 1;
    }
    acc
}

fn uni_gcd(p: u64, mut a: Vec<u32>, mut b: Vec<u32>) -> Vec<u32> {
    uni_trim(&mut a);
    uni_trim(&mut b);
    while !b.is_empty() {
        let r = {
            let wide: Vec<u64> = a.iter().map(|&c| c as u64).collect();
            // make b monic before using it as a divisor
            let lead = b[b.len() - 1] as u64;
            let inv = mod_inv(lead, p);
            let monic: Vec<u32> = b.iter().map(|&c| (c as u64 * inv % p) as u32).collect();
            uni_rem(p, wide, &monic)
        };
        a = b;
        b = r;
    }
    a
}

fn mod_inv(a: u64, p: u64) -> u64 {
    // Fermat; p prime, a != 0 mod p.
    let mut e = p - 2;
    let mut base = a % p;
    let mut acc = 1u64;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % p;
        }
        base = base * base % p;
        e >>= 1;
    }
    acc
}

/// Irreducibility over F_p of a monic polynomial of degree `a`:
/// gcd(x^{p^i} - x, f) must be constant for every i <= a/2.
fn uni_is_irreducible(p: u64, modulus: &[u32]) -> bool {
    let deg = modulus.len() - 1;
    if deg == 0 {
        return false;
    }
    if deg == 1 {
        return true;
    }
    let x = vec![0u32, 1u32];
    let mut xpi = x.clone();
    for _ in 1..=(deg / 2) {
        xpi = uni_pow_mod(p, &xpi, p, modulus);
        // xpi - x
        let mut diff: Vec<u32> = xpi.clone();
        if diff.len() < 2 {
            diff.resize(2, 0);
        }
        diff[1] = ((diff[1] as u64 + p - 1) % p) as u32;
        let g = uni_gcd(p, modulus.to_vec(), diff);
        if g.len() > 1 {
            return false;
        }
    }
    true
}

struct ExtInner {
    base: PrimeField,
    degree: u32,
    /// Monic modulus, coefficients ascending, length degree + 1.
    modulus: Vec<u32>,
}

/// The extension field `F_{p^a} = F_p[w]/(modulus)`.
#[derive(Clone)]
pub struct ExtensionField {
    inner: Arc<ExtInner>,
}

impl PartialEq for ExtensionField {
    fn eq(&self, other: &Self) -> bool {
        self.inner.base == other.inner.base && self.inner.modulus == other.inner.modulus
    }
}

impl Eq for ExtensionField {}

impl fmt::Debug for ExtensionField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "F_{}^{} mod {}",
            self.inner.base.p,
            self.inner.degree,
            self.modulus_text()
        )
    }
}

impl ExtensionField {
    /// Build `F_p[w]/(modulus)`; the modulus is given by ascending
    /// coefficients and must be monic of degree >= 1 and irreducible.
    pub fn new(base: PrimeField, modulus: Vec<u32>) -> Result<Self, FieldError> {
        let p = base.p as u64;
        let mut m: Vec<u32> = modulus.iter().map(|&c| (c as u64 % p) as u32).collect();
        uni_trim(&mut m);
        if m.len() < 2 {
            return Err(FieldError::BadModulus("degree must be at least 1".into()));
        }
        if m[m.len() - 1] != 1 {
            return Err(FieldError::BadModulus("modulus must be monic".into()));
        }
        if !uni_is_irreducible(p, &m) {
            return Err(FieldError::ReducibleModulus(modulus_text(&m)));
        }
        let degree = (m.len() - 1) as u32;
        Ok(ExtensionField {
            inner: Arc::new(ExtInner { base, degree, modulus: m }),
        })
    }

    /// `F_{p^a}` with the lexicographically smallest monic irreducible
    /// modulus of degree `a` (deterministic across runs).
    pub fn with_default_modulus(base: PrimeField, degree: u32) -> Result<Self, FieldError> {
        if degree == 0 || degree > 16 {
            return Err(FieldError::BadDegree(degree));
        }
        if degree == 1 {
            return ExtensionField::new(base, vec![0, 1]);
        }
        let p = base.p as u64;
        let count = (p as u128).checked_pow(degree).ok_or(FieldError::BadDegree(degree))?;
        let mut n: u128 = 0;
        while n < count {
            let mut coeffs = Vec::with_capacity(degree as usize + 1);
            let mut k = n;
            for _ in 0..degree {
                coeffs.push((k % p as u128) as u32);
                k /= p as u128;
            }
            coeffs.push(1);
            if uni_is_irreducible(p, &coeffs) {
                return ExtensionField::new(base, coeffs);
            }
            n += 1;
        }
        Err(FieldError::BadDegree(degree))
    }

    pub fn base(&self) -> PrimeField {
        self.inner.base
    }

    pub fn degree(&self) -> u32 {
        self.inner.degree
    }

    pub fn modulus(&self) -> &[u32] {
        &self.inner.modulus
    }

    pub fn modulus_text(&self) -> String {
        modulus_text(&self.inner.modulus)
    }

    pub fn order(&self) -> u64 {
        (self.inner.base.p as u64).pow(self.inner.degree)
    }

    /// Element from ascending coefficients on 1, w, w^2, ...
    pub fn element_from_coeffs(&self, coeffs: &[u32]) -> ExtensionElement {
        let p = self.inner.base.p;
        let mut v = vec![0u32; self.inner.degree as usize];
        for (i, &c) in coeffs.iter().enumerate() {
            if i < v.len() {
                v[i] = c % p;
            } else {
                assert!(c % p == 0, "coefficient beyond extension degree");
            }
        }
        ExtensionElement { field: self.clone(), coeffs: v }
    }

    pub fn embed_int(&self, n: i64) -> ExtensionElement {
        let c = self.inner.base.element(n);
        self.embed(c)
    }

    pub fn embed(&self, c: FieldElement) -> ExtensionElement {
        assert_eq!(c.p, self.inner.base.p, "embedding from wrong prime field");
        let mut v = vec![0u32; self.inner.degree as usize];
        v[0] = c.value;
        ExtensionElement { field: self.clone(), coeffs: v }
    }

    pub fn zero(&self) -> ExtensionElement {
        self.embed_int(0)
    }

    pub fn one(&self) -> ExtensionElement {
        self.embed_int(1)
    }

    /// The class of `w`.
    pub fn generator(&self) -> ExtensionElement {
        let mut v = vec![0u32; self.inner.degree as usize];
        if v.len() > 1 {
            v[1] = 1;
        } else {
            // degree-1 extension: w is a root of the linear modulus
            let p = self.inner.base.p as u64;
            v[0] = ((p - self.inner.modulus[0] as u64) % p) as u32;
        }
        ExtensionElement { field: self.clone(), coeffs: v }
    }

    /// The element with index `idx` in the canonical enumeration:
    /// base-p digits of `idx`, least significant digit on the constant.
    pub fn element_at(&self, idx: u64) -> ExtensionElement {
        let p = self.inner.base.p as u64;
        let mut v = vec![0u32; self.inner.degree as usize];
        let mut k = idx;
        for slot in v.iter_mut() {
            *slot = (k % p) as u32;
            k /= p;
        }
        assert_eq!(k, 0, "element index out of range");
        ExtensionElement { field: self.clone(), coeffs: v }
    }
}

fn modulus_text(m: &[u32]) -> String {
    let mut parts = Vec::new();
    for (i, &c) in m.iter().enumerate().rev() {
        if c == 0 {
            continue;
        }
        let var = match i {
            0 => String::new(),
            1 => "w".to_string(),
            _ => format!("w^{i}"),
        };
        let part = if var.is_empty() {
            format!("{c}")
        } else if c == 1 {
            var
        } else {
            format!("{c}*{var}")
        };
        parts.push(part);
    }
    if parts.is_empty() {
        "0".into()
    } else {
        parts.join(" + ")
    }
}

/// An element of an extension field, coefficients ascending on powers of `w`.
#[derive(Clone)]
pub struct ExtensionElement {
    field: ExtensionField,
    coeffs: Vec<u32>,
}

impl PartialEq for ExtensionElement {
    fn eq(&self, other: &Self) -> bool {
        self.field == other.field && self.coeffs == other.coeffs
    }
}

impl Eq for ExtensionElement {}

impl fmt::Debug for ExtensionElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for ExtensionElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut m: Vec<u32> = self.coeffs.clone();
        uni_trim(&mut m);
        write!(f, "{}", modulus_text(&m))
    }
}

impl ExtensionElement {
    pub fn field(&self) -> &ExtensionField {
        &self.field
    }

    pub fn coeffs(&self) -> &[u32] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    fn check_field(&self, other: &ExtensionElement) {
        assert!(self.field == other.field, "elements belong to different extension fields");
    }

    pub fn add(&self, other: &ExtensionElement) -> ExtensionElement {
        self.check_field(other);
        let p = self.field.inner.base.p as u64;
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(&a, &b)| ((a as u64 + b as u64) % p) as u32)
            .collect();
        ExtensionElement { field: self.field.clone(), coeffs }
    }

    pub fn sub(&self, other: &ExtensionElement) -> ExtensionElement {
        self.check_field(other);
        let p = self.field.inner.base.p as u64;
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(&a, &b)| ((a as u64 + p - b as u64) % p) as u32)
            .collect();
        ExtensionElement { field: self.field.clone(), coeffs }
    }

    pub fn neg(&self) -> ExtensionElement {
        self.field.zero().sub(self)
    }

    pub fn mul(&self, other: &ExtensionElement) -> ExtensionElement {
        self.check_field(other);
        let p = self.field.inner.base.p as u64;
        let raw = uni_mul_mod(p, &self.coeffs, &other.coeffs, &self.field.inner.modulus);
        let mut coeffs = raw;
        coeffs.resize(self.field.inner.degree as usize, 0);
        ExtensionElement { field: self.field.clone(), coeffs }
    }

    pub fn pow(&self, e: u64) -> ExtensionElement {
        let p = self.field.inner.base.p as u64;
        let raw = uni_pow_mod(p, &self.coeffs, e, &self.field.inner.modulus);
        let mut coeffs = raw;
        coeffs.resize(self.field.inner.degree as usize, 0);
        ExtensionElement { field: self.field.clone(), coeffs }
    }

    pub fn invert(&self) -> Result<ExtensionElement, FieldError> {
        if self.is_zero() {
            return Err(FieldError::DivisionByZero);
        }
        // x^(q-2) with q = p^a
        Ok(self.pow(self.field.order() - 2))
    }

    pub fn frobenius(&self, i: u32) -> ExtensionElement {
        let p = self.field.inner.base.p as u64;
        let mut x = self.clone();
        for _ in 0..i {
            x = x.pow(p);
        }
        x
    }
}

/// A finite field that can embed `F_p` scalars, enumerate its elements in a
/// deterministic order and index them for work partitioning.
pub trait FiniteField {
    type Elem: Clone + PartialEq + fmt::Debug + fmt::Display;

    fn characteristic(&self) -> u32;
    fn extension_degree(&self) -> u32;
    fn order(&self) -> u64;
    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn embed(&self, c: FieldElement) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn invert(&self, a: &Self::Elem) -> Result<Self::Elem, FieldError>;
    fn frobenius(&self, a: &Self::Elem, i: u32) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn pow(&self, a: &Self::Elem, e: u64) -> Self::Elem;
    /// Element with the given enumeration index, `idx < order()`.
    fn element_at(&self, idx: u64) -> Self::Elem;

    /// All elements, each exactly once, in the canonical order.
    fn elements(&self) -> Vec<Self::Elem> {
        (0..self.order()).map(|i| self.element_at(i)).collect()
    }
}

impl FiniteField for PrimeField {
    type Elem = FieldElement;

    fn characteristic(&self) -> u32 {
        self.p
    }
    fn extension_degree(&self) -> u32 {
        1
    }
    fn order(&self) -> u64 {
        self.p as u64
    }
    fn zero(&self) -> FieldElement {
        PrimeField::zero(self)
    }
    fn one(&self) -> FieldElement {
        PrimeField::one(self)
    }
    fn embed(&self, c: FieldElement) -> FieldElement {
        assert_eq!(c.p, self.p, "embedding from wrong prime field");
        c
    }
    fn add(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        *a + *b
    }
    fn sub(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        *a - *b
    }
    fn mul(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        *a * *b
    }
    fn neg(&self, a: &FieldElement) -> FieldElement {
        -*a
    }
    fn invert(&self, a: &FieldElement) -> Result<FieldElement, FieldError> {
        FieldElement::invert(a)
    }
    fn frobenius(&self, a: &FieldElement, i: u32) -> FieldElement {
        FieldElement::frobenius(a, i)
    }
    fn is_zero(&self, a: &FieldElement) -> bool {
        a.is_zero()
    }
    fn pow(&self, a: &FieldElement, e: u64) -> FieldElement {
        FieldElement::pow(a, e)
    }
    fn element_at(&self, idx: u64) -> FieldElement {
        assert!(idx < self.p as u64, "element index out of range");
        FieldElement { p: self.p, value: idx as u32 }
    }
}

impl FiniteField for ExtensionField {
    type Elem = ExtensionElement;

    fn characteristic(&self) -> u32 {
        self.inner.base.p
    }
    fn extension_degree(&self) -> u32 {
        self.inner.degree
    }
    fn order(&self) -> u64 {
        ExtensionField::order(self)
    }
    fn zero(&self) -> ExtensionElement {
        ExtensionField::zero(self)
    }
    fn one(&self) -> ExtensionElement {
        ExtensionField::one(self)
    }
    fn embed(&self, c: FieldElement) -> ExtensionElement {
        ExtensionField::embed(self, c)
    }
    fn add(&self, a: &ExtensionElement, b: &ExtensionElement) -> ExtensionElement {
        ExtensionElement::add(a, b)
    }
    fn sub(&self, a: &ExtensionElement, b: &ExtensionElement) -> ExtensionElement {
        ExtensionElement::sub(a, b)
    }
    fn mul(&self, a: &ExtensionElement, b: &ExtensionElement) -> ExtensionElement {
        ExtensionElement::mul(a, b)
    }
    fn neg(&self, a: &ExtensionElement) -> ExtensionElement {
        ExtensionElement::neg(a)
    }
    fn invert(&self, a: &ExtensionElement) -> Result<ExtensionElement, FieldError> {
        ExtensionElement::invert(a)
    }
    fn frobenius(&self, a: &ExtensionElement, i: u32) -> ExtensionElement {
        ExtensionElement::frobenius(a, i)
    }
    fn is_zero(&self, a: &ExtensionElement) -> bool {
        a.is_zero()
    }
    fn pow(&self, a: &ExtensionElement, e: u64) -> ExtensionElement {
        ExtensionElement::pow(a, e)
    }
    fn element_at(&self, idx: u64) -> ExtensionElement {
        ExtensionField::element_at(self, idx)
    }
}
