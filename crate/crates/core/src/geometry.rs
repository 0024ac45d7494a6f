//! Finite-field geometric certificates: point counts of hypersurfaces,
//! Jacobian smoothness of the Asanuma relations and singular-point checks.
//!
//! Counting is deterministic: enumeration follows the field's canonical
//! element order and the parallel partitioning never changes the sum.

use crate::algebra::PresentedAlgebra;
use crate::field::{ExtensionField, FiniteField};
use crate::poly::{PolyError, Polynomial};
use std::collections::BTreeMap;
use std::fmt;

/// Brute-force guards.
pub const MAX_BRUTE_POINTS: u64 = 100_000_000;
pub const MAX_BRUTE_EXTENSION_DEGREE: u32 = 4;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GeometryError {
    Poly(PolyError),
    Algebra(crate::algebra::AlgebraError),
    Field(crate::field::FieldError),
    TooLarge { points: u128 },
    ExtensionTooLarge { degree: u32 },
    NotStratifiable(String),
    NotAsanumaShape,
    CharacteristicMismatch,
}

impl fmt::Display for GeometryError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GeometryError::Poly(e) => write!(f, "{e}"),
            GeometryError::Algebra(e) => write!(f, "{e}"),
            GeometryError::Field(e) => write!(f, "{e}"),
            GeometryError::TooLarge { points } => {
                write!(f, "brute enumeration would visit {points} points (limit {MAX_BRUTE_POINTS})")
            }
            GeometryError::ExtensionTooLarge { degree } => {
                write!(f, "brute mode supports extension degree <= {MAX_BRUTE_EXTENSION_DEGREE}, got {degree}")
            }
            GeometryError::NotStratifiable(m) => write!(f, "stratified count unavailable: {m}"),
            GeometryError::NotAsanumaShape => {
                write!(f, "algebra was not built from Asanuma parameters")
            }
            GeometryError::CharacteristicMismatch => {
                write!(f, "field characteristic differs from the polynomial's")
            }
        }
    }
}

impl std::error::Error for GeometryError {}

impl From<PolyError> for GeometryError {
    fn from(e: PolyError) -> Self {
        GeometryError::Poly(e)
    }
}

impl From<crate::algebra::AlgebraError> for GeometryError {
    fn from(e: crate::algebra::AlgebraError) -> Self {
        GeometryError::Algebra(e)
    }
}

impl From<crate::field::FieldError> for GeometryError {
    fn from(e: crate::field::FieldError) -> Self {
        GeometryError::Field(e)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CountMethod {
    Brute,
    Stratified,
}

/// Number of rational points of `V(rel)` in the affine space on the
/// polynomial's full variable universe.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PointCountResult {
    pub q: u64,
    pub ambient_dim: usize,
    pub count: u64,
    pub method: CountMethod,
}

/// Exhaustive count over `F_q^n`; partitions the outermost coordinate across
/// `jobs` workers.
pub fn count_points_brute(
    rel: &Polynomial,
    field: &ExtensionField,
    jobs: usize,
) -> Result<PointCountResult, GeometryError> {
    if field.characteristic() != rel.field().characteristic() {
        return Err(GeometryError::CharacteristicMismatch);
    }
    if field.extension_degree() > MAX_BRUTE_EXTENSION_DEGREE {
        return Err(GeometryError::ExtensionTooLarge { degree: field.extension_degree() });
    }
    let n = rel.vars().len();
    let q = field.order();
    let total = (q as u128).pow(n as u32);
    if total > MAX_BRUTE_POINTS as u128 {
        return Err(GeometryError::TooLarge { points: total });
    }
    let total = total as u64;
    let names: Vec<String> = rel.vars().names().to_vec();

    let worker = |lo: u64, hi: u64| -> Result<u64, GeometryError> {
        let mut count = 0u64;
        let mut point: BTreeMap<String, _> = BTreeMap::new();
        for idx in lo..hi {
            let mut k = idx;
            for name in &names {
                point.insert(name.clone(), field.element_at(k % q));
                k /= q;
            }
            if field.is_zero(&rel.evaluate(field, &point)?) {
                count += 1;
            }
        }
        Ok(count)
    };

    let jobs = jobs.max(1).min(16);
    let count = if jobs == 1 || total < 1024 {
        worker(0, total)?
    } else {
        let chunk = total.div_ceil(jobs as u64);
        std::thread::scope(|scope| {
            let mut handles = Vec::new();
            for j in 0..jobs as u64 {
                let lo = j * chunk;
                let hi = ((j + 1) * chunk).min(total);
                if lo < hi {
                    handles.push(scope.spawn(move || worker(lo, hi)));
                }
            }
            let mut acc = 0u64;
            for h in handles {
                acc += h.join().expect("worker panicked")?;
            }
            Ok::<u64, GeometryError>(acc)
        })?
    };
    Ok(PointCountResult { q, ambient_dim: n, count, method: CountMethod::Brute })
}

/// Count exploiting the relation shape `x^a y = -τ(rest)`: for `x != 0` the
/// `y`-coordinate is determined, for `x = 0` the relation restricts to
/// `τ(rest) = 0` with `y` free.
pub fn count_points_stratified(
    algebra: &PresentedAlgebra,
    field: &ExtensionField,
) -> Result<PointCountResult, GeometryError> {
    if field.characteristic() != algebra.field().characteristic() {
        return Err(GeometryError::CharacteristicMismatch);
    }
    let rule = algebra
        .rule()
        .ok_or_else(|| GeometryError::NotStratifiable("no relation".into()))?;
    let head = rule.head();
    let head_vars: Vec<usize> = (0..algebra.vars().len()).filter(|&i| head.exp(i) > 0).collect();
    if head_vars.len() != 2 {
        return Err(GeometryError::NotStratifiable(
            "rule monomial must involve exactly two variables".into(),
        ));
    }
    let y_idx = *head_vars
        .iter()
        .find(|&&i| head.exp(i) == 1)
        .ok_or_else(|| GeometryError::NotStratifiable("rule monomial not linear in any variable".into()))?;
    let x_idx = if head_vars[0] == y_idx { head_vars[1] } else { head_vars[0] };
    let tail = -rule.minus_tail();
    let names = algebra.vars().names();
    for (i, name) in names.iter().enumerate() {
        if (i == x_idx || i == y_idx) && tail.occurs(name) {
            return Err(GeometryError::NotStratifiable(format!(
                "tail involves the rule variable `{name}`"
            )));
        }
    }
    if !algebra.params().is_empty() {
        return Err(GeometryError::NotStratifiable("algebra has central parameters".into()));
    }

    let q = field.order();
    let rest: Vec<String> = names
        .iter()
        .enumerate()
        .filter(|&(i, _)| i != x_idx && i != y_idx)
        .map(|(_, n)| n.clone())
        .collect();
    let rest_total = (q as u128).pow(rest.len() as u32);
    if rest_total > MAX_BRUTE_POINTS as u128 {
        return Err(GeometryError::TooLarge { points: rest_total });
    }

    // zeros of the tail over the remaining coordinates
    let mut tail_zeros = 0u64;
    let mut point: BTreeMap<String, _> = BTreeMap::new();
    for idx in 0..rest_total as u64 {
        let mut k = idx;
        for name in &rest {
            point.insert(name.clone(), field.element_at(k % q));
            k /= q;
        }
        if field.is_zero(&tail.evaluate(field, &point)?) {
            tail_zeros += 1;
        }
    }

    // x != 0: y is uniquely determined for every choice of x and the rest;
    // x = 0: the relation becomes τ = 0 and y ranges freely
    let count = (q - 1) * q.pow(rest.len() as u32) + q * tail_zeros;
    Ok(PointCountResult {
        q,
        ambient_dim: algebra.generators().len(),
        count,
        method: CountMethod::Stratified,
    })
}

/// Value and gradient of `g` at a rational point, with the singular verdict
/// of the Jacobian criterion.
#[derive(Debug, Clone)]
pub struct SingularityCertificate<E> {
    pub value: E,
    pub gradient: Vec<(String, E)>,
    pub singular: bool,
}

/// Evaluate `g` and all first partials at `point`; singular iff everything
/// vanishes. For rational points this agrees with membership of `g` in the
/// square of the maximal ideal at the point.
pub fn singular_at<F: FiniteField>(
    g: &Polynomial,
    field: &F,
    point: &BTreeMap<String, F::Elem>,
) -> Result<SingularityCertificate<F::Elem>, GeometryError> {
    if field.characteristic() != g.field().characteristic() {
        return Err(GeometryError::CharacteristicMismatch);
    }
    let value = g.evaluate(field, point)?;
    let mut gradient = Vec::new();
    let mut all_vanish = field.is_zero(&value);
    for name in g.vars().names() {
        let partial = g.partial_derivative(name)?;
        let dv = partial.evaluate(field, point)?;
        if !field.is_zero(&dv) {
            all_vanish = false;
        }
        gradient.push((name.clone(), dv));
    }
    Ok(SingularityCertificate { value, gradient, singular: all_vanish })
}

/// A symbolic smoothness proof for an Asanuma hypersurface: the t-partial of
/// the relation is the constant 1, so the Jacobian never vanishes over any
/// field extension.
#[derive(Debug, Clone)]
pub struct SmoothnessCertificate {
    pub dt: Polynomial,
    pub smooth: bool,
}

pub fn smoothness_certificate(
    algebra: &PresentedAlgebra,
) -> Result<SmoothnessCertificate, GeometryError> {
    if algebra.asanuma_params().is_none() {
        return Err(GeometryError::NotAsanumaShape);
    }
    let dt = algebra.relation().partial_derivative("t")?;
    let smooth = dt.is_one();
    Ok(SmoothnessCertificate { dt, smooth })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{AsanumaParams, PresentedAlgebra};
    use crate::field::{ExtensionField, PrimeField};
    use crate::poly::VarSet;

    fn fq(p: u64, a: u32) -> ExtensionField {
        ExtensionField::with_default_modulus(PrimeField::new(p).unwrap(), a).unwrap()
    }

    #[test]
    fn asanuma_counts_are_q_cubed() {
        let a = PresentedAlgebra::asanuma(AsanumaParams::new(2, 2, 2, 3).unwrap()).unwrap();
        for deg in [1u32, 2] {
            let field = fq(2, deg);
            let q = field.order();
            let brute = count_points_brute(a.relation(), &field, 1).unwrap();
            let strat = count_points_stratified(&a, &field).unwrap();
            assert_eq!(brute.count, q.pow(3));
            assert_eq!(strat.count, brute.count);
        }
    }

    #[test]
    fn hyperplane_count() {
        let f3 = PrimeField::new(3).unwrap();
        let vars = VarSet::new(["x", "y", "z", "t"]).unwrap();
        let rel = Polynomial::parse("x", &vars, f3).unwrap();
        let field = fq(3, 1);
        let res = count_points_brute(&rel, &field, 1).unwrap();
        assert_eq!(res.count, 27);
    }

    #[test]
    fn graded_ring_counts_agree_between_methods() {
        // the relation without the linear term still stratifies
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
        for deg in [1u32, 2] {
            let field = fq(2, deg);
            let brute = count_points_brute(b.relation(), &field, 1).unwrap();
            let strat = count_points_stratified(&b, &field).unwrap();
            assert_eq!(brute.count, strat.count);
        }
    }

    #[test]
    fn parallel_count_matches_serial() {
        let a = PresentedAlgebra::asanuma(AsanumaParams::new(2, 2, 2, 3).unwrap()).unwrap();
        let field = fq(2, 2);
        let serial = count_points_brute(a.relation(), &field, 1).unwrap();
        let parallel = count_points_brute(a.relation(), &field, 4).unwrap();
        assert_eq!(serial.count, parallel.count);
    }

    #[test]
    fn brute_guards() {
        let f2 = PrimeField::new(2).unwrap();
        let vars = VarSet::new(["x"]).unwrap();
        let rel = Polynomial::parse("x", &vars, f2).unwrap();
        let too_big = fq(2, 5);
        assert!(matches!(
            count_points_brute(&rel, &too_big, 1),
            Err(GeometryError::ExtensionTooLarge { degree: 5 })
        ));
    }

    #[test]
    fn singular_point_of_the_cusp_shape() {
        // g = z^2 + t^3 + 1 over F_2, singular at (z, t) = (1, 0)
        let f2 = PrimeField::new(2).unwrap();
        let vars = VarSet::new(["z", "t"]).unwrap();
        let g = Polynomial::parse("z^2 + t^3 + 1", &vars, f2).unwrap();
        let mut point = BTreeMap::new();
        point.insert("z".to_string(), f2.element(1));
        point.insert("t".to_string(), f2.element(0));
        let cert = singular_at(&g, &f2, &point).unwrap();
        assert!(cert.singular);
        assert!(cert.value.is_zero());

        // smooth at a point where a partial survives
        let h = Polynomial::parse("z + t", &vars, f2).unwrap();
        let mut origin = BTreeMap::new();
        origin.insert("z".to_string(), f2.element(0));
        origin.insert("t".to_string(), f2.element(0));
        let cert = singular_at(&h, &f2, &origin).unwrap();
        assert!(!cert.singular);

        // g = t^2 lies in (t)^2
        let vars_t = VarSet::new(["t"]).unwrap();
        let sq = Polynomial::parse("t^2", &vars_t, f2).unwrap();
        let mut p0 = BTreeMap::new();
        p0.insert("t".to_string(), f2.element(0));
        assert!(singular_at(&sq, &f2, &p0).unwrap().singular);
    }

    #[test]
    fn singular_verdicts_survive_field_extension() {
        let f2 = PrimeField::new(2).unwrap();
        let vars = VarSet::new(["z", "t"]).unwrap();
        let g = Polynomial::parse("z^2 + t^3 + 1", &vars, f2).unwrap();
        let ext = fq(2, 2);
        let mut point = BTreeMap::new();
        point.insert("z".to_string(), ext.embed(f2.element(1)));
        point.insert("t".to_string(), ext.zero());
        let cert = singular_at(&g, &ext, &point).unwrap();
        assert!(cert.singular);
    }

    #[test]
    fn smoothness_of_asanuma_relations() {
        for (p, m, e, s) in [(2u64, 2u32, 2u32, 3u32), (3, 2, 2, 2), (2, 3, 3, 3)] {
            let a = PresentedAlgebra::asanuma(AsanumaParams::new(p, m, e, s).unwrap()).unwrap();
            let cert = smoothness_certificate(&a).unwrap();
            assert!(cert.smooth);
            assert!(cert.dt.is_one());
        }
        // the graded relation x^2 y + z^4 + t^6 is not of Asanuma shape
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
        assert!(matches!(
            smoothness_certificate(&b),
            Err(GeometryError::NotAsanumaShape)
        ));
    }

    #[test]
    fn stratified_requires_the_right_shape() {
        let f2 = PrimeField::new(2).unwrap();
        let free = PresentedAlgebra::free_ring(f2, &["x", "y"]).unwrap();
        let field = fq(2, 1);
        assert!(matches!(
            count_points_stratified(&free, &field),
            Err(GeometryError::NotStratifiable(_))
        ));
    }
}
