//! The induced exponential map on an associated graded ring.
//!
//! Writing `φ(g) = g + a_1 U + a_2 U^2 + ...`, the candidate weight of `U`
//! is `d = max (deg a_i - deg g) / i` over all generators and all `i >= 1`
//! with `a_i != 0`. The induced images keep, for each `i`, the leading form
//! of `a_i` exactly when `deg a_i = deg g + i d` and drop everything below.
//! If `d` is not an integer the grading is first scaled by the denominator,
//! which preserves leading forms. The candidate is re-verified from scratch
//! on the graded presentation, so a wrong reconstruction can never slip
//! through silently.

use super::{ExpMap, ExpMapError, Status};
use crate::algebra::AlgebraElement;
use crate::grading::{GradedPresentation, WeightGrading};
use crate::poly::Polynomial;
use std::collections::BTreeMap;

/// The outcome of inducing a map on the associated graded algebra.
#[derive(Debug, Clone)]
pub struct InducedMap {
    /// Graded presentation actually used (scaled if the slope was
    /// fractional).
    pub graded: GradedPresentation,
    /// The verified induced exponential map on `graded.gr()`.
    pub map: ExpMap,
    /// Weight of `U` under the (possibly scaled) grading.
    pub u_weight: i64,
    /// Factor the grading was scaled by (1 when untouched).
    pub scale: i64,
}

/// Reduced fraction with positive denominator.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct Slope {
    num: i64,
    den: i64,
}

impl Slope {
    fn new(num: i64, den: i64) -> Slope {
        debug_assert!(den > 0);
        let g = gcd(num.unsigned_abs(), den.unsigned_abs()).max(1);
        Slope { num: num / g as i64, den: den / g as i64 }
    }
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

impl PartialOrd for Slope {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Slope {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (self.num as i128 * other.den as i128).cmp(&(other.num as i128 * self.den as i128))
    }
}

/// Decompose every image as coefficients of powers of `U`, each coefficient
/// an element of the base algebra.
fn u_coefficients(
    phi: &ExpMap,
) -> Result<BTreeMap<String, BTreeMap<u32, AlgebraElement>>, ExpMapError> {
    let base = phi.algebra();
    let mut out = BTreeMap::new();
    for (gen, img) in phi.images() {
        let mut coeffs = BTreeMap::new();
        for (i, poly) in img.nf().coefficients_in(phi.parameter())? {
            if poly.is_zero() {
                continue;
            }
            let restricted = poly.restricted(base.vars())?;
            coeffs.insert(i, base.normalize(&restricted)?);
        }
        out.insert(gen.clone(), coeffs);
    }
    Ok(out)
}

/// Induce a verified non-trivial exponential map on the associated graded
/// algebra of its base under `grading`.
pub fn induce_on_gr(phi: &ExpMap, grading: &WeightGrading) -> Result<InducedMap, ExpMapError> {
    if !phi.verified() {
        return Err(ExpMapError::UnverifiedMap);
    }
    if phi.is_trivial() {
        return Err(ExpMapError::TrivialMap);
    }
    let base = phi.algebra();
    let coeffs = u_coefficients(phi)?;

    // candidate U-weight: the maximal per-power slope
    let mut slope: Option<Slope> = None;
    {
        for (gen, by_power) in &coeffs {
            let gen_deg = grading.weight_degree(&base.generator(gen)?)?;
            for (&i, a_i) in by_power {
                if i == 0 {
                    continue;
                }
                let s = Slope::new(grading.weight_degree(a_i)? - gen_deg, i as i64);
                slope = Some(match slope {
                    None => s,
                    Some(cur) => cur.max(s),
                });
            }
        }
    }
    let Some(slope) = slope else {
        // every image is its generator, contradicting non-triviality
        return Err(ExpMapError::TrivialMap);
    };

    let (grading, scale) = if slope.den == 1 {
        (grading.clone(), 1)
    } else {
        (grading.scaled(slope.den)?, slope.den)
    };
    let u_weight = slope.num * scale / slope.den;
    let graded = GradedPresentation::new(base, &grading)?;
    let gr = graded.gr().clone();
    let gr_ext = gr.with_params(&[phi.parameter()])?;

    // top-slope parts of each image, with ρ applied per U-power
    let mut images = BTreeMap::new();
    for (gen, by_power) in &coeffs {
        let gen_deg = grading.weight_degree(&base.generator(gen)?)?;
        let mut nf = Polynomial::variable(gr_ext.field(), gr_ext.vars(), gen)?;
        for (&i, a_i) in by_power {
            if i == 0 {
                continue;
            }
            if grading.weight_degree(a_i)? != gen_deg + u_weight * i as i64 {
                continue; // below the top slope: drops in gr
            }
            let lead = graded.lead(a_i)?;
            let u_pow = Polynomial::variable(gr_ext.field(), gr_ext.vars(), phi.parameter())?
                .pow(i)?;
            let term = &lead.nf().extended(gr_ext.vars())? * &u_pow;
            nf = &nf + &term;
        }
        images.insert(gen.clone(), gr_ext.normalize(&nf)?);
    }

    let mut induced = ExpMap::new(&gr, phi.parameter(), images)?;
    match induced.check_exponential() {
        Status::Verified => {}
        Status::Refuted(r) => {
            return Err(ExpMapError::VerificationFailed(format!(
                "{:?} on `{}`: {}",
                r.axiom, r.generator, r.detail
            )))
        }
        Status::Unverified => unreachable!(),
    }
    if induced.is_trivial() {
        return Err(ExpMapError::InducedMapTrivial);
    }
    Ok(InducedMap { graded, map: induced, u_weight, scale })
}
