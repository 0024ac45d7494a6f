//! Bounded exhaustive search for exponential maps over a coefficient
//! template.
//!
//! A template fixes, per generator, a list of `monomial * U^i` slots with
//! unknown `F_p` coefficients; generators without slots stay fixed, and the
//! `U^0` layer is always the generator itself (forced by the identity-at-zero
//! axiom). The search enumerates every coefficient assignment in odometer
//! order, keeps the candidates that pass the full symbolic checker and drops
//! the identity, so its output is a deterministic function of the template.

use super::{ExpMap, ExpMapError, Status};
use crate::algebra::PresentedAlgebra;
use crate::poly::Polynomial;
use std::collections::BTreeMap;

/// Hard caps: unknown count and total candidate count.
pub const MAX_UNKNOWNS: usize = 24;
pub const MAX_CANDIDATES: u128 = 1 << 24;

/// One coefficient slot: `coefficient * monomial * U^{u_power}` added to the
/// image of `generator`.
#[derive(Debug, Clone)]
pub struct TemplateTerm {
    pub generator: String,
    pub u_power: u32,
    /// Monomial in the algebra's generators, as an expression.
    pub monomial: String,
}

/// A per-generator support template with unknown coefficients.
#[derive(Debug, Clone, Default)]
pub struct SearchTemplate {
    pub terms: Vec<TemplateTerm>,
}

impl SearchTemplate {
    pub fn new(terms: Vec<TemplateTerm>) -> SearchTemplate {
        SearchTemplate { terms }
    }

    pub fn term(mut self, generator: &str, u_power: u32, monomial: &str) -> SearchTemplate {
        self.terms.push(TemplateTerm {
            generator: generator.to_string(),
            u_power,
            monomial: monomial.to_string(),
        });
        self
    }
}

/// Exhaust every coefficient assignment of the template and return the
/// verified non-identity exponential maps, in assignment order.
pub fn search_expmaps(
    algebra: &PresentedAlgebra,
    template: &SearchTemplate,
) -> Result<Vec<ExpMap>, ExpMapError> {
    let n = template.terms.len();
    if n > MAX_UNKNOWNS {
        return Err(ExpMapError::SearchSpaceTooLarge { unknowns: n });
    }
    let p = algebra.field().characteristic() as u128;
    let candidates = p.checked_pow(n as u32).filter(|&c| c <= MAX_CANDIDATES);
    let Some(candidates) = candidates else {
        return Err(ExpMapError::SearchSpaceTooLarge { unknowns: n });
    };
    if n == 0 {
        return Ok(Vec::new());
    }

    let ext = algebra.with_params(&["U"])?;
    let field = algebra.field();
    let u_poly = Polynomial::variable(field, ext.vars(), "U")?;

    // precompute each slot's monomial * U^i over A[U]
    let mut slot_polys = Vec::with_capacity(n);
    for term in &template.terms {
        if term.u_power == 0 {
            return Err(ExpMapError::UPowerMustBePositive);
        }
        if !algebra.generators().iter().any(|g| g == &term.generator) {
            return Err(ExpMapError::Algebra(crate::algebra::AlgebraError::MissingImage(
                term.generator.clone(),
            )));
        }
        let mon = Polynomial::parse(&term.monomial, algebra.vars(), field)?;
        for v in mon.vars_occurring() {
            if algebra.params().iter().any(|p| p == v) {
                return Err(ExpMapError::HasParameters(v.to_string()));
            }
        }
        let mon = mon.extended(ext.vars())?;
        slot_polys.push(&mon * &u_poly.pow(term.u_power)?);
    }

    let base_images: BTreeMap<String, Polynomial> = algebra
        .generators()
        .iter()
        .map(|g| {
            let v = Polynomial::variable(field, ext.vars(), g).expect("generator");
            (g.clone(), v)
        })
        .collect();

    let mut found = Vec::new();
    let p32 = field.characteristic() as u128;
    for idx in 1..candidates {
        // digits of idx in base p are the slot coefficients
        let mut images = base_images.clone();
        let mut k = idx;
        for (slot, term) in slot_polys.iter().zip(&template.terms) {
            let digit = (k % p32) as i64;
            k /= p32;
            if digit != 0 {
                let scaled = slot.scaled(field.element(digit));
                let img = images.get_mut(&term.generator).expect("validated generator");
                *img = &*img + &scaled;
            }
        }
        let image_map: BTreeMap<String, crate::algebra::AlgebraElement> = images
            .into_iter()
            .map(|(g, nf)| Ok((g, ext.normalize(&nf)?)))
            .collect::<Result<_, ExpMapError>>()?;
        let mut candidate = ExpMap::new(algebra, "U", image_map)?;
        if matches!(candidate.check_exponential(), Status::Verified) && !candidate.is_trivial() {
            found.push(candidate);
        }
    }
    Ok(found)
}
