//! Deterministic sampling for property checks: a small SplitMix64 generator
//! and random polynomial/element constructors. Runs are reproducible from
//! the seed alone, independent of platform and thread count.

use crate::algebra::{AlgebraElement, PresentedAlgebra};
use crate::field::PrimeField;
use crate::poly::{Monomial, Polynomial, VarSet};

/// SplitMix64; passes through the full 2^64 state space, good enough for
/// test-vector generation and nowhere used for security.
#[derive(Debug, Clone)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        SplitMix64 { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    /// Uniform in `0..n` (n > 0); the tiny modulo bias is irrelevant here.
    pub fn below(&mut self, n: u64) -> u64 {
        debug_assert!(n > 0);
        self.next_u64() % n
    }
}

/// A random polynomial with up to `max_terms` terms over the first `active`
/// variables of the universe, exponents at most `max_exp`.
pub fn random_poly(
    rng: &mut SplitMix64,
    field: PrimeField,
    vars: &VarSet,
    active: usize,
    max_exp: u32,
    max_terms: usize,
) -> Polynomial {
    let active = active.min(vars.len());
    let n_terms = 1 + rng.below(max_terms as u64) as usize;
    let mut out = Polynomial::zero(field, vars);
    for _ in 0..n_terms {
        let mut exps = vec![0u32; vars.len()];
        for e in exps.iter_mut().take(active) {
            *e = rng.below(max_exp as u64 + 1) as u32;
        }
        let coeff = field.element(rng.below(field.characteristic() as u64) as i64);
        let term = Polynomial::from_term(field, vars, Monomial::from_exps(exps), coeff);
        out = out.checked_add(&term).expect("same universe");
    }
    out
}

/// A random nonzero element of the algebra, sampled over its generators
/// only (parameters never occur).
pub fn random_nonzero_element(
    rng: &mut SplitMix64,
    algebra: &PresentedAlgebra,
    max_exp: u32,
    max_terms: usize,
) -> AlgebraElement {
    loop {
        let f = random_poly(
            rng,
            algebra.field(),
            algebra.vars(),
            algebra.generators().len(),
            max_exp,
            max_terms,
        );
        let e = algebra.normalize(&f).expect("poly over the algebra's universe");
        if !e.is_zero() {
            return e;
        }
    }
}
