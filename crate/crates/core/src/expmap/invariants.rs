//! Truncated invariant rings by exact linear algebra.
//!
//! An exponential map is coefficient-linear, so "φ(a) = a" restricted to the
//! span of the normal-form monomials of degree at most D is an `F_p`-linear
//! condition on the coefficients. We materialize the monomial list, solve
//! the nullspace by dense row reduction and return a reduced-echelon basis,
//! which makes the output canonical for the monomial order.

use super::{ExpMap, ExpMapError};
use crate::algebra::AlgebraElement;
use crate::grading::WeightGrading;
use crate::linalg::{in_span, rref_rows, MatGf};
use crate::poly::{Monomial, Polynomial};
use std::collections::BTreeMap;

/// Hard cap on the ambient monomial list.
pub const MAX_MONOMIALS: usize = 100_000;

/// How the degree bound of [`invariant_basis`] is measured.
#[derive(Debug, Clone)]
pub enum DegreeMeasure {
    /// Total degree of normal-form monomials (the default).
    Total,
    /// Weighted degree under a grading; every generator weight must be
    /// strictly positive so the monomial list stays finite.
    Weighted(WeightGrading),
}

/// The coordinates and reduced-echelon basis of a truncated invariant ring.
#[derive(Debug, Clone)]
pub struct InvariantBasis {
    pub degree_bound: i64,
    /// The normal-form monomials used as coordinates, ascending graded-lex.
    pub monomials: Vec<Monomial>,
    /// Invariant elements, one per nullspace basis vector, in reduced
    /// echelon form with respect to the monomial list.
    pub basis: Vec<AlgebraElement>,
}

impl InvariantBasis {
    /// Whether every basis element avoids the eliminated variable.
    pub fn all_y_free(&self) -> Option<bool> {
        let mut any = None;
        for b in &self.basis {
            match b.subring_profile().y_free {
                None => return None,
                Some(v) => any = Some(any.unwrap_or(true) && v),
            }
        }
        any.or(Some(true))
    }
}

/// All normal-form monomials on the generators with measure at most `bound`,
/// ascending graded-lex.
fn monomial_list(
    phi: &ExpMap,
    bound: i64,
    measure: &DegreeMeasure,
) -> Result<Vec<Monomial>, ExpMapError> {
    let algebra = phi.algebra();
    let n_vars = algebra.vars().len();
    let n_gens = algebra.generators().len();
    let head = algebra.rule().map(|r| r.head().clone());

    // per-generator exponent caps keeping the search finite
    let mut caps = Vec::with_capacity(n_gens);
    match measure {
        DegreeMeasure::Total => {
            if bound < 0 {
                return Ok(Vec::new());
            }
            for _ in 0..n_gens {
                caps.push(bound as u64);
            }
        }
        DegreeMeasure::Weighted(w) => {
            for g in algebra.generators() {
                let wt = w.weight(g).ok_or_else(|| {
                    ExpMapError::Grading(crate::grading::GradingError::UnweightedVariable(
                        g.clone(),
                    ))
                })?;
                if wt <= 0 {
                    return Err(ExpMapError::PositiveWeightsRequired);
                }
                caps.push((bound.max(0) / wt) as u64);
            }
        }
    }

    let mut out = Vec::new();
    let mut exps = vec![0u32; n_vars];
    fn walk(
        gen_idx: usize,
        n_gens: usize,
        caps: &[u64],
        exps: &mut Vec<u32>,
        measure_left: i64,
        weight_of: &dyn Fn(usize) -> i64,
        head: &Option<Monomial>,
        out: &mut Vec<Monomial>,
    ) -> Result<(), ExpMapError> {
        if gen_idx == n_gens {
            let m = Monomial::from_exps(exps.clone());
            let reduced = head.as_ref().map(|h| h.divides(&m)).unwrap_or(false);
            if !reduced {
                out.push(m);
                if out.len() > MAX_MONOMIALS {
                    return Err(ExpMapError::DegreeBoundTooLarge { monomials: out.len() });
                }
            }
            return Ok(());
        }
        let w = weight_of(gen_idx);
        let max_e = if w > 0 {
            (measure_left / w).max(0).min(caps[gen_idx] as i64) as u32
        } else {
            caps[gen_idx] as u32
        };
        for e in 0..=max_e {
            exps[gen_idx] = e;
            walk(
                gen_idx + 1,
                n_gens,
                caps,
                exps,
                measure_left - w * e as i64,
                weight_of,
                head,
                out,
            )?;
            exps[gen_idx] = 0;
        }
        Ok(())
    }

    let gens = algebra.generators().to_vec();
    let weight_of: Box<dyn Fn(usize) -> i64> = match measure {
        DegreeMeasure::Total => Box::new(|_| 1i64),
        DegreeMeasure::Weighted(w) => {
            let weights: Vec<i64> = gens.iter().map(|g| w.weight(g).unwrap()).collect();
            Box::new(move |i| weights[i])
        }
    };
    walk(0, n_gens, &caps, &mut exps, bound, &weight_of, &head, &mut out)?;
    out.sort();
    Ok(out)
}

/// Reduced-echelon basis of `{a : deg a <= d, φ(a) = a}` with total degree.
pub fn invariant_basis(phi: &ExpMap, d: u32) -> Result<InvariantBasis, ExpMapError> {
    invariant_basis_with(phi, d as i64, &DegreeMeasure::Total)
}

/// As [`invariant_basis`] with an explicit degree measure.
pub fn invariant_basis_with(
    phi: &ExpMap,
    bound: i64,
    measure: &DegreeMeasure,
) -> Result<InvariantBasis, ExpMapError> {
    if !phi.verified() {
        return Err(ExpMapError::UnverifiedMap);
    }
    let algebra = phi.algebra();
    let field = algebra.field();
    let monomials = monomial_list(phi, bound, measure)?;

    // difference φ(µ_j) - µ_j per coordinate monomial
    let mut diffs: Vec<Polynomial> = Vec::with_capacity(monomials.len());
    for m in &monomials {
        let elem = algebra.normalize(&Polynomial::from_term(
            field,
            algebra.vars(),
            m.clone(),
            field.one(),
        ))?;
        let image = phi.apply(&elem)?;
        let embedded = phi.extended_algebra().normalize(elem.nf())?;
        diffs.push(image.nf() - embedded.nf());
    }

    // constraint rows are indexed by the monomials appearing in any diff
    let mut row_of: BTreeMap<Monomial, usize> = BTreeMap::new();
    for d in &diffs {
        for (m, _) in d.terms() {
            let next = row_of.len();
            row_of.entry(m.clone()).or_insert(next);
        }
    }
    let mut mat = MatGf::zero(field, row_of.len(), monomials.len());
    for (col, d) in diffs.iter().enumerate() {
        for (m, c) in d.terms() {
            mat.set(row_of[m], col, c.value());
        }
    }

    let null = mat.nullspace_basis();
    let mut basis = Vec::with_capacity(null.len());
    for vec in null {
        let mut nf = Polynomial::zero(field, algebra.vars());
        for (j, &c) in vec.iter().enumerate() {
            if c != 0 {
                let t = Polynomial::from_term(
                    field,
                    algebra.vars(),
                    monomials[j].clone(),
                    field.element(c as i64),
                );
                nf = nf.checked_add(&t)?;
            }
        }
        basis.push(algebra.normalize(&nf)?);
    }
    Ok(InvariantBasis { degree_bound: bound, monomials, basis })
}

/// Union of truncated invariant rings, closed under products up to the
/// degree bound, with a per-generator recovery verdict.
#[derive(Debug, Clone)]
pub struct DerksenReport {
    pub degree_bound: u32,
    /// Invariant-basis elements of all maps, concatenated.
    pub union_basis: Vec<AlgebraElement>,
    /// Dimension of the span of the product closure.
    pub closure_dim: usize,
    /// Which generators lie in the span of the product closure.
    pub generators_recovered: BTreeMap<String, bool>,
    /// Whether every union element avoids the eliminated variable.
    pub y_free: Option<bool>,
}

impl DerksenReport {
    pub fn recovers_all_generators(&self) -> bool {
        !self.generators_recovered.is_empty() && self.generators_recovered.values().all(|&v| v)
    }
}

/// Union the invariant bases of `maps` up to degree `d`, close under
/// products staying within degree `d`, and report which generators land in
/// the resulting span.
pub fn derksen_report(maps: &[ExpMap], d: u32) -> Result<DerksenReport, ExpMapError> {
    let mut union: Vec<AlgebraElement> = Vec::new();
    let mut algebra = None;
    for phi in maps {
        if !phi.verified() {
            return Err(ExpMapError::UnverifiedMap);
        }
        match &algebra {
            None => algebra = Some(phi.algebra().clone()),
            Some(a) => {
                if !a.same_presentation(phi.algebra()) {
                    return Err(ExpMapError::AlgebraMismatch);
                }
            }
        }
        let basis = invariant_basis(phi, d)?;
        union.extend(basis.basis);
    }

    let Some(algebra) = algebra else {
        return Ok(DerksenReport {
            degree_bound: d,
            union_basis: Vec::new(),
            closure_dim: 0,
            generators_recovered: BTreeMap::new(),
            y_free: None,
        });
    };

    // coordinates over all normal-form monomials of degree <= d
    let field = algebra.field();
    let p = field.characteristic() as u64;
    let head = algebra.rule().map(|r| r.head().clone());
    let mut coords: Vec<Monomial> = Vec::new();
    {
        // reuse the total-degree walker through a dummy map on the algebra
        let n_gens = algebra.generators().len();
        let n_vars = algebra.vars().len();
        let mut exps = vec![0u32; n_vars];
        fn walk(
            i: usize,
            n_gens: usize,
            left: u32,
            exps: &mut Vec<u32>,
            head: &Option<Monomial>,
            out: &mut Vec<Monomial>,
        ) {
            if i == n_gens {
                let m = Monomial::from_exps(exps.clone());
                if !head.as_ref().map(|h| h.divides(&m)).unwrap_or(false) {
                    out.push(m);
                }
                return;
            }
            for e in 0..=left {
                exps[i] = e;
                walk(i + 1, n_gens, left - e, exps, head, out);
                exps[i] = 0;
            }
        }
        walk(0, n_gens, d, &mut exps, &head, &mut coords);
        coords.sort();
    }
    let col_of: BTreeMap<&Monomial, usize> = coords.iter().zip(0..).collect();
    let coords_of = |e: &AlgebraElement| -> Vec<u32> {
        let mut v = vec![0u32; coords.len()];
        for (m, c) in e.nf().terms() {
            v[col_of[m]] = c.value();
        }
        v
    };

    let mut span = rref_rows(p, union.iter().map(&coords_of).collect());
    let mut closure: Vec<AlgebraElement> = union.clone();
    // close under products within the degree bound
    let mut i = 0;
    while i < closure.len() {
        let mut j = 0;
        while j <= i {
            let prod = closure[i].mul(&closure[j]);
            j += 1;
            let within = prod
                .nf()
                .total_degree()
                .map(|deg| deg <= d as u64)
                .unwrap_or(false);
            if !within {
                continue;
            }
            let vec = coords_of(&prod);
            if !in_span(p, &span, &vec) {
                let mut rows = span.clone();
                rows.push(vec);
                span = rref_rows(p, rows);
                closure.push(prod);
            }
        }
        i += 1;
    }

    let mut generators_recovered = BTreeMap::new();
    for g in algebra.generators() {
        let elem = algebra.generator(g)?;
        let hit = elem
            .nf()
            .total_degree()
            .map(|deg| deg <= d as u64)
            .unwrap_or(false)
            && in_span(p, &span, &coords_of(&elem));
        generators_recovered.insert(g.clone(), hit);
    }

    let y_free = algebra.eliminated_var().map(|y| union.iter().all(|e| !e.nf().occurs(y)));

    Ok(DerksenReport {
        degree_bound: d,
        union_basis: union,
        closure_dim: span.len(),
        generators_recovered,
        y_free,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{AsanumaParams, PresentedAlgebra};
    use crate::expmap::{asanuma_map, translation_maps, AsanumaFamily};
    use crate::field::PrimeField;

    #[test]
    fn translation_invariants_on_two_variables() {
        // X1 -> X1 + U over F_2: degree-2 invariants are spanned by
        // 1, X2, X2^2 (note (X1 + U)^2 = X1^2 + U^2, so X1^2 moves)
        let f2 = PrimeField::new(2).unwrap();
        let maps = translation_maps(f2, 2).unwrap();
        let basis = invariant_basis(&maps[0], 2).unwrap();
        let ring = maps[0].algebra();
        let expected = ["1", "X2", "X2^2"];
        assert_eq!(basis.basis.len(), expected.len());
        for (b, text) in basis.basis.iter().zip(expected) {
            assert_eq!(b, &ring.element(text).unwrap());
        }
    }

    #[test]
    fn phi1_low_degree_invariants() {
        let a = PresentedAlgebra::asanuma(AsanumaParams::new(2, 1, 2, 3).unwrap()).unwrap();
        let one = Polynomial::one(a.field(), a.vars());
        let phi = asanuma_map(&a, AsanumaFamily::Phi1, &one).unwrap();
        let basis = invariant_basis(&phi, 1).unwrap();
        let texts: Vec<String> = basis.basis.iter().map(|b| b.to_string()).collect();
        // canonical order follows the ascending monomial list (1, t, z, y, x)
        assert_eq!(texts, vec!["1", "z", "y"]);
        assert!(!texts.contains(&"t".to_string()));
        assert!(!texts.contains(&"x".to_string()));
    }

    #[test]
    fn degree_zero_basis_is_constants() {
        let f3 = PrimeField::new(3).unwrap();
        let maps = translation_maps(f3, 1).unwrap();
        let basis = invariant_basis(&maps[0], 0).unwrap();
        assert_eq!(basis.basis.len(), 1);
        assert_eq!(basis.basis[0], maps[0].algebra().one());
    }

    #[test]
    fn invariant_basis_requires_verification() {
        let f2 = PrimeField::new(2).unwrap();
        let ring = PresentedAlgebra::free_ring(f2, &["X1"]).unwrap();
        let phi = ExpMap::from_texts(&ring, "U", &[("X1", "X1 + U")]).unwrap();
        assert!(matches!(invariant_basis(&phi, 2), Err(ExpMapError::UnverifiedMap)));
        assert!(matches!(
            derksen_report(&[phi], 2),
            Err(ExpMapError::UnverifiedMap)
        ));
    }

    #[test]
    fn oversized_degree_bounds_are_rejected() {
        let a = PresentedAlgebra::asanuma(AsanumaParams::new(2, 2, 2, 3).unwrap()).unwrap();
        let one = Polynomial::one(a.field(), a.vars());
        let phi = asanuma_map(&a, AsanumaFamily::Phi3, &one).unwrap();
        assert!(matches!(
            invariant_basis(&phi, 200),
            Err(ExpMapError::DegreeBoundTooLarge { .. })
        ));
    }

    #[test]
    fn every_basis_element_is_invariant() {
        let a = PresentedAlgebra::asanuma(AsanumaParams::new(2, 2, 2, 3).unwrap()).unwrap();
        let one = Polynomial::one(a.field(), a.vars());
        for family in [AsanumaFamily::Phi3, AsanumaFamily::Phi4] {
            let phi = asanuma_map(&a, family, &one).unwrap();
            let basis = invariant_basis(&phi, 4).unwrap();
            assert!(!basis.basis.is_empty());
            for b in &basis.basis {
                assert!(phi.is_invariant(b).unwrap(), "non-invariant basis element {b}");
            }
        }
    }

    #[test]
    fn brute_force_equivalence_small_cases() {
        // independent oracle: enumerate every F_2 coefficient vector on the
        // monomial list and test invariance directly
        let f2 = PrimeField::new(2).unwrap();
        let maps = translation_maps(f2, 2).unwrap();
        let phi = &maps[0];
        for d in 0..=3u32 {
            let basis = invariant_basis(phi, d).unwrap();
            let ring = phi.algebra().clone();
            let mons = &basis.monomials;
            assert!(mons.len() <= 16, "brute force stays small");
            let mut count = 0u64;
            for mask in 0u64..(1 << mons.len()) {
                let mut nf = Polynomial::zero(f2, ring.vars());
                for (j, m) in mons.iter().enumerate() {
                    if mask >> j & 1 == 1 {
                        nf = nf
                            .checked_add(&Polynomial::from_term(f2, ring.vars(), m.clone(), f2.one()))
                            .unwrap();
                    }
                }
                let elem = ring.normalize(&nf).unwrap();
                if phi.is_invariant(&elem).unwrap() {
                    count += 1;
                }
            }
            assert_eq!(count, 1u64 << basis.basis.len());
        }
    }

    #[test]
    fn phi3_invariants_avoid_t_as_well() {
        // phi3 moves t and y; its degree-4 invariants land in k[x, z]
        let a = PresentedAlgebra::asanuma(AsanumaParams::new(2, 2, 2, 3).unwrap()).unwrap();
        let one = Polynomial::one(a.field(), a.vars());
        let phi = asanuma_map(&a, AsanumaFamily::Phi3, &one).unwrap();
        let basis = invariant_basis(&phi, 4).unwrap();
        assert_eq!(basis.all_y_free(), Some(true));
        for b in &basis.basis {
            assert!(!b.nf().occurs("t"), "{b} involves t");
        }
    }

    #[test]
    fn invariant_products_stay_in_the_span() {
        // the truncated invariant space is product-closed within its degree
        let a = PresentedAlgebra::asanuma(AsanumaParams::new(2, 2, 2, 3).unwrap()).unwrap();
        let one = Polynomial::one(a.field(), a.vars());
        let phi = asanuma_map(&a, AsanumaFamily::Phi3, &one).unwrap();
        let d = 4u32;
        let basis = invariant_basis(&phi, d).unwrap();
        let p = a.field().characteristic() as u64;
        let col_of: BTreeMap<&Monomial, usize> =
            basis.monomials.iter().zip(0..).collect();
        let coords = |e: &crate::algebra::AlgebraElement| {
            let mut v = vec![0u32; basis.monomials.len()];
            for (m, c) in e.nf().terms() {
                v[col_of[m]] = c.value();
            }
            v
        };
        let span = crate::linalg::rref_rows(p, basis.basis.iter().map(&coords).collect());
        for (i, b1) in basis.basis.iter().enumerate() {
            for b2 in &basis.basis[i..] {
                let prod = b1.mul(b2);
                let within = prod
                    .nf()
                    .total_degree()
                    .map(|deg| deg <= d as u64)
                    .unwrap_or(true);
                if within {
                    assert!(
                        crate::linalg::in_span(p, &span, &coords(&prod)),
                        "{b1} * {b2} escapes the span"
                    );
                }
            }
        }
    }

    #[test]
    fn derksen_recovers_polynomial_ring_from_translations() {
        let f2 = PrimeField::new(2).unwrap();
        let maps = translation_maps(f2, 3).unwrap();
        let report = derksen_report(&maps, 2).unwrap();
        assert!(report.recovers_all_generators());
        assert_eq!(report.y_free, None); // free rings have no eliminated variable
    }

    #[test]
    fn derksen_misses_y_for_the_quotient() {
        let a = PresentedAlgebra::asanuma(AsanumaParams::new(2, 2, 2, 3).unwrap()).unwrap();
        let one = Polynomial::one(a.field(), a.vars());
        let phi3 = asanuma_map(&a, AsanumaFamily::Phi3, &one).unwrap();
        let phi4 = asanuma_map(&a, AsanumaFamily::Phi4, &one).unwrap();
        let report = derksen_report(&[phi3, phi4], 4).unwrap();
        assert_eq!(report.y_free, Some(true));
        assert_eq!(report.generators_recovered["x"], true);
        assert_eq!(report.generators_recovered["z"], true);
        assert_eq!(report.generators_recovered["y"], false);
    }

    #[test]
    fn empty_map_list_gives_empty_report() {
        let report = derksen_report(&[], 3).unwrap();
        assert!(report.union_basis.is_empty());
        assert_eq!(report.closure_dim, 0);
        assert!(report.generators_recovered.is_empty());
    }
}
