//! Exponential maps on presented algebras.
//!
//! A candidate map is stored as generator images in `A[U]` and nothing else;
//! well-definedness is always re-derived by the checker, never trusted from
//! input files. The checker verifies, symbolically and in this order:
//!
//! 0. the relation maps to zero (the images define a ring map at all);
//! 1. every image evaluated at `U = 0` returns its generator;
//! 2. coassociativity in `A[V,U]`: extending `φ_V` to `A[U]` by
//!    `φ_V(U) = U`, the composite `φ_V φ_U` equals `φ_{V+U}` on every
//!    generator.
//!
//! Refutations carry the first failing axiom and generator.

mod induce;
mod invariants;
mod search;

pub use induce::{induce_on_gr, InducedMap};
pub use invariants::{
    derksen_report, invariant_basis, invariant_basis_with, DegreeMeasure, DerksenReport,
    InvariantBasis,
};
pub use search::{search_expmaps, SearchTemplate, TemplateTerm};

use crate::algebra::{verify_hom, AlgebraElement, AlgebraError, PresentedAlgebra};
use crate::field::PrimeField;
use crate::grading::GradingError;
use crate::poly::{PolyError, Polynomial};
use std::collections::BTreeMap;
use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ExpMapError {
    Algebra(AlgebraError),
    Grading(GradingError),
    Poly(PolyError),
    UnverifiedMap,
    TrivialMap,
    HasParameters(String),
    DegreeBoundTooLarge { monomials: usize },
    FamilyUnavailable { family: AsanumaFamily, m: u32 },
    NotAsanumaAlgebra,
    ParameterOutsideDomain { family: AsanumaFamily, allowed: &'static str },
    ConstructionFailed(String),
    InducedMapTrivial,
    VerificationFailed(String),
    SearchSpaceTooLarge { unknowns: usize },
    AlgebraMismatch,
    PositiveWeightsRequired,
    UPowerMustBePositive,
}

impl fmt::Display for ExpMapError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExpMapError::Algebra(e) => write!(f, "{e}"),
            ExpMapError::Grading(e) => write!(f, "{e}"),
            ExpMapError::Poly(e) => write!(f, "{e}"),
            ExpMapError::UnverifiedMap => write!(f, "map has not been verified"),
            ExpMapError::TrivialMap => write!(f, "map is the identity"),
            ExpMapError::HasParameters(v) => {
                write!(f, "element involves the parameter `{v}`")
            }
            ExpMapError::DegreeBoundTooLarge { monomials } => {
                write!(f, "degree bound needs {monomials} monomials (limit 100000)")
            }
            ExpMapError::FamilyUnavailable { family, m } => {
                write!(f, "family {family:?} is unavailable for m = {m}")
            }
            ExpMapError::NotAsanumaAlgebra => {
                write!(f, "algebra was not built from Asanuma parameters")
            }
            ExpMapError::ParameterOutsideDomain { family, allowed } => {
                write!(f, "parameter of {family:?} must lie in {allowed}")
            }
            ExpMapError::ConstructionFailed(m) => write!(f, "construction failed: {m}"),
            ExpMapError::InducedMapTrivial => {
                write!(f, "induced map on gr is trivial")
            }
            ExpMapError::VerificationFailed(m) => {
                write!(f, "induced map failed verification: {m}")
            }
            ExpMapError::SearchSpaceTooLarge { unknowns } => {
                write!(f, "search space too large: {unknowns} unknown coefficients")
            }
            ExpMapError::AlgebraMismatch => write!(f, "maps live on different algebras"),
            ExpMapError::PositiveWeightsRequired => {
                write!(f, "weighted degree bounds require strictly positive weights")
            }
            ExpMapError::UPowerMustBePositive => {
                write!(f, "template terms must have positive U-power")
            }
        }
    }
}

impl std::error::Error for ExpMapError {}

impl From<AlgebraError> for ExpMapError {
    fn from(e: AlgebraError) -> Self {
        ExpMapError::Algebra(e)
    }
}

impl From<GradingError> for ExpMapError {
    fn from(e: GradingError) -> Self {
        ExpMapError::Grading(e)
    }
}

impl From<PolyError> for ExpMapError {
    fn from(e: PolyError) -> Self {
        ExpMapError::Poly(e)
    }
}

/// Which axiom a refuted map failed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axiom {
    RelationPreservation,
    IdentityAtZero,
    Coassociativity,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Refutation {
    pub axiom: Axiom,
    pub generator: String,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Status {
    Unverified,
    Verified,
    Refuted(Refutation),
}

/// A candidate exponential map, stored by generator images in `A[U]`.
#[derive(Debug, Clone)]
pub struct ExpMap {
    base: PresentedAlgebra,
    ext: PresentedAlgebra,
    u: String,
    images: BTreeMap<String, AlgebraElement>,
    status: Status,
}

impl ExpMap {
    /// Build a candidate from generator images (elements of `A[U]`);
    /// generators without an image are fixed. The parameter name must be
    /// fresh.
    pub fn new(
        algebra: &PresentedAlgebra,
        u: &str,
        images: BTreeMap<String, AlgebraElement>,
    ) -> Result<ExpMap, ExpMapError> {
        let ext = algebra.with_params(&[u])?;
        for key in images.keys() {
            if !algebra.generators().iter().any(|g| g == key) {
                return Err(ExpMapError::ConstructionFailed(format!(
                    "image given for non-generator `{key}`"
                )));
            }
        }
        let mut all = BTreeMap::new();
        for gen in algebra.generators() {
            match images.get(gen) {
                Some(img) => {
                    if !img.owner().same_presentation(&ext) {
                        return Err(ExpMapError::Algebra(AlgebraError::OwnerMismatch));
                    }
                    all.insert(gen.clone(), img.clone());
                }
                None => {
                    all.insert(gen.clone(), ext.generator(gen)?);
                }
            }
        }
        Ok(ExpMap { base: algebra.clone(), ext, u: u.to_string(), images: all, status: Status::Unverified })
    }

    /// Convenience constructor from image expressions.
    pub fn from_texts(
        algebra: &PresentedAlgebra,
        u: &str,
        images: &[(&str, &str)],
    ) -> Result<ExpMap, ExpMapError> {
        let ext = algebra.with_params(&[u])?;
        let mut map = BTreeMap::new();
        for (gen, text) in images {
            map.insert(gen.to_string(), ext.element(text)?);
        }
        ExpMap::new(algebra, u, map)
    }

    pub fn algebra(&self) -> &PresentedAlgebra {
        &self.base
    }

    /// `A[U]`, where images live.
    pub fn extended_algebra(&self) -> &PresentedAlgebra {
        &self.ext
    }

    pub fn parameter(&self) -> &str {
        &self.u
    }

    pub fn images(&self) -> &BTreeMap<String, AlgebraElement> {
        &self.images
    }

    pub fn image(&self, gen: &str) -> Option<&AlgebraElement> {
        self.images.get(gen)
    }

    pub fn status(&self) -> &Status {
        &self.status
    }

    pub fn verified(&self) -> bool {
        matches!(self.status, Status::Verified)
    }

    /// Trivial means every image equals its generator.
    pub fn is_trivial(&self) -> bool {
        self.images.iter().all(|(gen, img)| {
            self.ext
                .generator(gen)
                .map(|g| g == *img)
                .unwrap_or(false)
        })
    }

    /// Substitute the images into a parameter-free element of the base
    /// algebra, landing in `A[U]`.
    pub fn apply(&self, a: &AlgebraElement) -> Result<AlgebraElement, ExpMapError> {
        if !a.owner().same_presentation(&self.base) {
            return Err(ExpMapError::Algebra(AlgebraError::OwnerMismatch));
        }
        for p in self.base.params() {
            if a.nf().occurs(p) {
                return Err(ExpMapError::HasParameters(p.clone()));
            }
        }
        let mut map = BTreeMap::new();
        for (gen, img) in &self.images {
            map.insert(gen.clone(), img.nf().clone());
        }
        let substituted = a.nf().substitute(self.ext.vars(), &map)?;
        Ok(self.ext.normalize(&substituted)?)
    }

    /// Whether `apply` fixes `a`; requires a verified map.
    pub fn is_invariant(&self, a: &AlgebraElement) -> Result<bool, ExpMapError> {
        if !self.verified() {
            return Err(ExpMapError::UnverifiedMap);
        }
        let image = self.apply(a)?;
        let embedded = self.ext.normalize(a.nf())?;
        Ok(image == embedded)
    }

    /// Run the three symbolic checks and record the outcome.
    pub fn check_exponential(&mut self) -> Status {
        if !matches!(self.status, Status::Unverified) {
            return self.status.clone();
        }
        self.status = self.run_checks().unwrap_or_else(|e| {
            Status::Refuted(Refutation {
                axiom: Axiom::RelationPreservation,
                generator: String::new(),
                detail: format!("internal error: {e}"),
            })
        });
        self.status.clone()
    }

    fn run_checks(&self) -> Result<Status, ExpMapError> {
        // (0) the source relation must map to zero
        if !verify_hom(&self.base, &self.ext, &self.images)? {
            let image = crate::algebra::apply_images(
                &self.base,
                &self.ext,
                self.base.relation(),
                &self.images,
            )?;
            return Ok(Status::Refuted(Refutation {
                axiom: Axiom::RelationPreservation,
                generator: String::new(),
                detail: format!("relation maps to {image}"),
            }));
        }

        // (i) evaluation at U = 0 must return each generator
        for (gen, img) in &self.images {
            let at_zero = set_param_to_zero(img.nf(), &self.u)?;
            let expected = Polynomial::variable(self.ext.field(), self.ext.vars(), gen)?;
            if at_zero != expected {
                return Ok(Status::Refuted(Refutation {
                    axiom: Axiom::IdentityAtZero,
                    generator: gen.clone(),
                    detail: format!("image at U = 0 is {at_zero}"),
                }));
            }
        }

        // (ii) φ_V φ_U = φ_{V+U} in A[V,U]
        let v = fresh_name(&self.ext, "V");
        let ext2 = self.base.with_params(&[v.as_str(), self.u.as_str()])?;
        let v_poly = Polynomial::variable(self.ext.field(), ext2.vars(), &v)?;
        let u_poly = Polynomial::variable(self.ext.field(), ext2.vars(), &self.u)?;
        let v_plus_u = &v_poly + &u_poly;

        // images with U renamed to V, as polynomials over A[V,U]
        let mut images_v: BTreeMap<String, Polynomial> = BTreeMap::new();
        for (gen, img) in &self.images {
            let mut rename = BTreeMap::new();
            rename.insert(self.u.clone(), v_poly.clone());
            images_v.insert(gen.clone(), img.nf().substitute(ext2.vars(), &rename)?);
        }

        for (gen, img) in &self.images {
            // φ_V(φ_U(gen)): generators map through images_v, U stays U
            let lhs_raw = img.nf().substitute(ext2.vars(), &images_v)?;
            let lhs = ext2.normalize(&lhs_raw)?;
            // φ_{V+U}(gen): substitute U := V + U into the image
            let mut shift = BTreeMap::new();
            shift.insert(self.u.clone(), v_plus_u.clone());
            let rhs_raw = img.nf().substitute(ext2.vars(), &shift)?;
            let rhs = ext2.normalize(&rhs_raw)?;
            if lhs != rhs {
                return Ok(Status::Refuted(Refutation {
                    axiom: Axiom::Coassociativity,
                    generator: gen.clone(),
                    detail: format!("composite gives {lhs}, reparametrized map gives {rhs}"),
                }));
            }
        }
        Ok(Status::Verified)
    }
}

/// The U = 0 specialization of a polynomial: drop every term with a positive
/// `u`-exponent.
fn set_param_to_zero(f: &Polynomial, u: &str) -> Result<Polynomial, PolyError> {
    Ok(f.coefficients_in(u)?
        .remove(&0)
        .unwrap_or_else(|| Polynomial::zero(f.field(), f.vars())))
}

fn fresh_name(algebra: &PresentedAlgebra, base: &str) -> String {
    if !algebra.vars().contains(base) {
        return base.to_string();
    }
    let mut i = 0u32;
    loop {
        let cand = format!("{base}{i}");
        if !algebra.vars().contains(&cand) {
            return cand;
        }
        i += 1;
    }
}

/// The n coordinate translation maps `X_i -> X_i + U` on `F_p[X_1..X_n]`,
/// verified before they are returned.
pub fn translation_maps(field: PrimeField, n: usize) -> Result<Vec<ExpMap>, ExpMapError> {
    let names: Vec<String> = (1..=n).map(|i| format!("X{i}")).collect();
    let ring = PresentedAlgebra::free_ring(field, &names)?;
    let mut out = Vec::with_capacity(n);
    for name in &names {
        let ext = ring.with_params(&["U"])?;
        let img = ext.element(&format!("{name} + U"))?;
        let mut map = ExpMap::new(&ring, "U", BTreeMap::from([(name.clone(), img)]))?;
        match map.check_exponential() {
            Status::Verified => out.push(map),
            other => {
                return Err(ExpMapError::ConstructionFailed(format!(
                    "translation map on {name} refused: {other:?}"
                )))
            }
        }
    }
    Ok(out)
}

/// The closed-form map families on the Asanuma rings. `Phi1`/`Phi2` exist
/// for m = 1 and fix (y, z) resp. (y, t); `Phi3`/`Phi4` are the analogues
/// with `x^m` in place of `y`, fixing (x, z) resp. (x, t).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AsanumaFamily {
    Phi1,
    Phi2,
    Phi3,
    Phi4,
}

impl AsanumaFamily {
    fn allowed_parameter_vars(&self) -> (&'static str, [&'static str; 2]) {
        match self {
            AsanumaFamily::Phi1 => ("k[y,z]", ["y", "z"]),
            AsanumaFamily::Phi2 => ("k[y,t]", ["y", "t"]),
            AsanumaFamily::Phi3 => ("k[x,z]", ["x", "z"]),
            AsanumaFamily::Phi4 => ("k[x,t]", ["x", "t"]),
        }
    }
}

/// Construct one of the closed-form families with the given polynomial
/// parameter, then verify it; the returned map is always verified.
pub fn asanuma_map(
    algebra: &PresentedAlgebra,
    family: AsanumaFamily,
    parameter: &Polynomial,
) -> Result<ExpMap, ExpMapError> {
    let params = algebra.asanuma_params().ok_or(ExpMapError::NotAsanumaAlgebra)?;
    if matches!(family, AsanumaFamily::Phi1 | AsanumaFamily::Phi2) && params.m != 1 {
        return Err(ExpMapError::FamilyUnavailable { family, m: params.m });
    }
    let (allowed_text, allowed) = family.allowed_parameter_vars();
    for v in parameter.vars_occurring() {
        if !allowed.contains(&v) {
            return Err(ExpMapError::ParameterOutsideDomain { family, allowed: allowed_text });
        }
    }

    let ext = algebra.with_params(&["U"])?;
    let vars = ext.vars();
    let field = ext.field();
    let var = |n: &str| Polynomial::variable(field, vars, n).expect("generator");
    let c = parameter.extended(vars)?;
    let u = var("U");
    let sp = params.sp();
    let pe = params.pe();

    let images = match family {
        AsanumaFamily::Phi1 => {
            // t -> t + y f U;  x -> x - f U - ((t + y f U)^{sp} - t^{sp}) / y
            let t_img = &var("t") + &(&(&var("y") * &c) * &u);
            let delta = &t_img.pow(sp)? - &var("t").pow(sp)?;
            let corr = delta
                .exact_divide(&var("y"))
                .map_err(|e| ExpMapError::ConstructionFailed(format!("division by y: {e}")))?;
            let x_img = &(&var("x") - &(&c * &u)) - &corr;
            vec![("t", t_img), ("x", x_img)]
        }
        AsanumaFamily::Phi2 => {
            // z -> z + y g U;  x -> x - y^{p^e - 1} g^{p^e} U^{p^e}
            let z_img = &var("z") + &(&(&var("y") * &c) * &u);
            let corr = &(&var("y").pow(pe - 1)? * &c.pow(pe)?) * &u.pow(pe)?;
            let x_img = &var("x") - &corr;
            vec![("z", z_img), ("x", x_img)]
        }
        AsanumaFamily::Phi3 => {
            // t -> t + x^m c U;  y -> y - c U - ((t + x^m c U)^{sp} - t^{sp}) / x^m
            let xm = var("x").pow(params.m)?;
            let t_img = &var("t") + &(&(&xm * &c) * &u);
            let delta = &t_img.pow(sp)? - &var("t").pow(sp)?;
            let corr = delta
                .exact_divide(&xm)
                .map_err(|e| ExpMapError::ConstructionFailed(format!("division by x^m: {e}")))?;
            let y_img = &(&var("y") - &(&c * &u)) - &corr;
            vec![("t", t_img), ("y", y_img)]
        }
        AsanumaFamily::Phi4 => {
            // z -> z + x^m c U;  y -> y - ((z + x^m c U)^{p^e} - z^{p^e}) / x^m
            let xm = var("x").pow(params.m)?;
            let z_img = &var("z") + &(&(&xm * &c) * &u);
            let delta = &z_img.pow(pe)? - &var("z").pow(pe)?;
            let corr = delta
                .exact_divide(&xm)
                .map_err(|e| ExpMapError::ConstructionFailed(format!("division by x^m: {e}")))?;
            let y_img = &var("y") - &corr;
            vec![("z", z_img), ("y", y_img)]
        }
    };

    let mut image_map = BTreeMap::new();
    for (gen, poly) in images {
        image_map.insert(gen.to_string(), ext.normalize(&poly)?);
    }
    let mut map = ExpMap::new(algebra, "U", image_map)?;
    match map.check_exponential() {
        Status::Verified => Ok(map),
        Status::Refuted(r) => Err(ExpMapError::ConstructionFailed(format!(
            "constructed map refuted at {:?} on `{}`: {}",
            r.axiom, r.generator, r.detail
        ))),
        Status::Unverified => unreachable!("check_exponential always decides"),
    }
}
