//! JSON input formats: algebra, grading, map and search-template specs.
//!
//! An algebra file either spells out the presentation
//! (`{"p": 2, "vars": ["x","y","z","t"], "relation": "x^2*y + z^4 + t + t^6",
//! "rule_monomial": "x^2*y", "params": ["U","V"]}`) or uses the shorthand
//! `{"asanuma": {"p": 2, "m": 2, "e": 2, "s": 3}}`, which expands to the
//! relation above and validates the parameter hypotheses. File-path
//! resolution inside map specs is the caller's business; this module only
//! builds objects from parsed JSON.

use crate::algebra::{AsanumaParams, PresentedAlgebra};
use crate::expmap::{ExpMap, SearchTemplate, TemplateTerm};
use crate::field::{ExtensionField, PrimeField};
use crate::grading::WeightGrading;
use crate::poly::{Polynomial, VarSet};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt;

#[derive(Debug)]
pub enum InputError {
    Json(serde_json::Error),
    Invalid(String),
    Algebra(crate::algebra::AlgebraError),
    Field(crate::field::FieldError),
    Poly(crate::poly::PolyError),
    Grading(crate::grading::GradingError),
    ExpMap(crate::expmap::ExpMapError),
}

impl fmt::Display for InputError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            InputError::Json(e) => write!(f, "malformed JSON: {e}"),
            InputError::Invalid(m) => write!(f, "invalid input: {m}"),
            InputError::Algebra(e) => write!(f, "{e}"),
            InputError::Field(e) => write!(f, "{e}"),
            InputError::Poly(e) => write!(f, "{e}"),
            InputError::Grading(e) => write!(f, "{e}"),
            InputError::ExpMap(e) => write!(f, "{e}"),
        }
    }
}

impl std::error::Error for InputError {}

macro_rules! from_err {
    ($var:ident, $ty:ty) => {
        impl From<$ty> for InputError {
            fn from(e: $ty) -> Self {
                InputError::$var(e)
            }
        }
    };
}

from_err!(Json, serde_json::Error);
from_err!(Algebra, crate::algebra::AlgebraError);
from_err!(Field, crate::field::FieldError);
from_err!(Poly, crate::poly::PolyError);
from_err!(Grading, crate::grading::GradingError);
from_err!(ExpMap, crate::expmap::ExpMapError);

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AsanumaSpec {
    pub p: u64,
    pub m: u32,
    pub e: u32,
    pub s: u32,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ExtensionSpec {
    pub degree: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub modulus: Option<String>,
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlgebraSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub asanuma: Option<AsanumaSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub extension: Option<ExtensionSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub vars: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub relation: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rule_monomial: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub params: Option<Vec<String>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GradingSpec {
    pub weights: BTreeMap<String, i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub derive_y: Option<bool>,
}

/// Either an inline algebra spec or a path to one; paths are resolved by
/// the caller.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum AlgebraRef {
    Path(String),
    Inline(AlgebraSpec),
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MapSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub algebra: Option<AlgebraRef>,
    /// Parameter name, `U` by default.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub param: Option<String>,
    pub images: BTreeMap<String, String>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TemplateTermSpec {
    pub generator: String,
    pub u_power: u32,
    pub monomial: String,
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TemplateSpec {
    #[serde(default)]
    pub terms: Vec<TemplateTermSpec>,
}

/// One entry of a point-count batch: family parameters plus a field size.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CountBatchEntry {
    pub asanuma: AsanumaSpec,
    pub q: u64,
}

/// Build an algebra from a spec, expanding the Asanuma shorthand.
pub fn build_algebra(spec: &AlgebraSpec) -> Result<PresentedAlgebra, InputError> {
    if let Some(a) = &spec.asanuma {
        if spec.p.is_some() || spec.vars.is_some() || spec.relation.is_some() || spec.rule_monomial.is_some()
        {
            return Err(InputError::Invalid(
                "the asanuma shorthand excludes p/vars/relation/rule_monomial".into(),
            ));
        }
        let params = AsanumaParams::new(a.p, a.m, a.e, a.s)?;
        let algebra = PresentedAlgebra::asanuma(params)?;
        return match &spec.params {
            None => Ok(algebra),
            Some(extra) => {
                let extra: Vec<&str> = extra.iter().map(String::as_str).collect();
                Ok(algebra.with_params(&extra)?)
            }
        };
    }
    let p = spec
        .p
        .ok_or_else(|| InputError::Invalid("missing field `p`".into()))?;
    let field = PrimeField::new(p)?;
    let vars = spec
        .vars
        .as_ref()
        .ok_or_else(|| InputError::Invalid("missing field `vars`".into()))?;
    let gens: Vec<&str> = vars.iter().map(String::as_str).collect();
    let params: Vec<&str> = spec
        .params
        .as_ref()
        .map(|p| p.iter().map(String::as_str).collect())
        .unwrap_or_default();
    match (&spec.relation, &spec.rule_monomial) {
        (None, None) => {
            let ring = PresentedAlgebra::free_ring(field, &gens)?;
            if params.is_empty() {
                Ok(ring)
            } else {
                Ok(ring.with_params(&params)?)
            }
        }
        (Some(rel), Some(rule)) => {
            Ok(PresentedAlgebra::quotient(field, &gens, &params, rel, rule)?)
        }
        _ => Err(InputError::Invalid(
            "`relation` and `rule_monomial` come together".into(),
        )),
    }
}

pub fn algebra_from_json(text: &str) -> Result<PresentedAlgebra, InputError> {
    build_algebra(&serde_json::from_str(text)?)
}

/// The coefficient field an algebra spec asks geometry to work over: `F_p`
/// itself or the declared extension.
pub fn build_point_field(
    spec: &AlgebraSpec,
    algebra: &PresentedAlgebra,
) -> Result<ExtensionField, InputError> {
    let base = algebra.field();
    match &spec.extension {
        None => Ok(ExtensionField::with_default_modulus(base, 1)?),
        Some(ext) => build_extension(base, ext),
    }
}

pub fn build_extension(
    base: PrimeField,
    spec: &ExtensionSpec,
) -> Result<ExtensionField, InputError> {
    match &spec.modulus {
        None => Ok(ExtensionField::with_default_modulus(base, spec.degree)?),
        Some(text) => {
            let w = VarSet::new(["w"])?;
            let poly = Polynomial::parse(text, &w, base)?;
            let degree = poly
                .total_degree()
                .ok_or_else(|| InputError::Invalid("zero modulus".into()))?;
            if degree != spec.degree as u64 {
                return Err(InputError::Invalid(format!(
                    "modulus degree {degree} does not match declared degree {}",
                    spec.degree
                )));
            }
            let mut coeffs = vec![0u32; degree as usize + 1];
            for (m, c) in poly.terms() {
                coeffs[m.exp(0) as usize] = c.value();
            }
            Ok(ExtensionField::new(base, coeffs)?)
        }
    }
}

/// The field `F_q` for `q = p^a`, with the default modulus.
pub fn extension_of_order(base: PrimeField, q: u64) -> Result<ExtensionField, InputError> {
    let p = base.characteristic() as u64;
    let mut a = 0u32;
    let mut acc = 1u64;
    while acc < q {
        acc = acc.checked_mul(p).ok_or_else(|| {
            InputError::Invalid(format!("q = {q} is not a power of p = {p}"))
        })?;
        a += 1;
    }
    if acc != q || a == 0 {
        return Err(InputError::Invalid(format!("q = {q} is not a power of p = {p}")));
    }
    Ok(ExtensionField::with_default_modulus(base, a)?)
}

pub fn build_grading(
    spec: &GradingSpec,
    algebra: &PresentedAlgebra,
) -> Result<WeightGrading, InputError> {
    let derive = spec.derive_y.unwrap_or(false);
    Ok(WeightGrading::for_algebra(algebra, &spec.weights, derive)?)
}

pub fn grading_from_json(
    text: &str,
    algebra: &PresentedAlgebra,
) -> Result<WeightGrading, InputError> {
    build_grading(&serde_json::from_str(text)?, algebra)
}

/// Build a candidate map over `algebra` from parsed image expressions. If
/// the algebra already declares the map's parameter among its central
/// parameters, the base is rebuilt without it so that `A[U]` is formed
/// exactly once.
pub fn build_map(spec: &MapSpec, algebra: &PresentedAlgebra) -> Result<ExpMap, InputError> {
    let u = spec.param.clone().unwrap_or_else(|| "U".to_string());
    let base = if algebra.params().iter().any(|p| p == &u) {
        rebuild_without_param(algebra, &u)?
    } else {
        algebra.clone()
    };
    let ext = base.with_params(&[u.as_str()])?;
    let mut images = BTreeMap::new();
    for (gen, text) in &spec.images {
        if !base.generators().iter().any(|g| g == gen) {
            return Err(InputError::Invalid(format!("image given for non-generator `{gen}`")));
        }
        images.insert(gen.clone(), ext.element(text)?);
    }
    Ok(ExpMap::new(&base, &u, images)?)
}

fn rebuild_without_param(
    algebra: &PresentedAlgebra,
    param: &str,
) -> Result<PresentedAlgebra, InputError> {
    let gens: Vec<&str> = algebra.generators().iter().map(String::as_str).collect();
    let params: Vec<&str> = algebra
        .params()
        .iter()
        .filter(|p| p.as_str() != param)
        .map(String::as_str)
        .collect();
    if algebra.relation().is_zero() {
        let ring = PresentedAlgebra::free_ring(algebra.field(), &gens)?;
        return Ok(if params.is_empty() { ring } else { ring.with_params(&params)? });
    }
    let rule = algebra.rule().expect("nonzero relation implies a rule");
    let head_text = Polynomial::from_term(
        algebra.field(),
        algebra.vars(),
        rule.head().clone(),
        algebra.field().one(),
    )
    .to_string();
    Ok(PresentedAlgebra::quotient(
        algebra.field(),
        &gens,
        &params,
        &algebra.relation().to_string(),
        &head_text,
    )?)
}

pub fn build_template(spec: &TemplateSpec) -> SearchTemplate {
    SearchTemplate::new(
        spec.terms
            .iter()
            .map(|t| TemplateTerm {
                generator: t.generator.clone(),
                u_power: t.u_power,
                monomial: t.monomial.clone(),
            })
            .collect(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expmap::Status;

    #[test]
    fn asanuma_shorthand_expands() {
        let spec: AlgebraSpec =
            serde_json::from_str(r#"{"asanuma": {"p": 2, "m": 2, "e": 2, "s": 3}}"#).unwrap();
        let a = build_algebra(&spec).unwrap();
        assert_eq!(a.generators(), ["x", "y", "z", "t"]);
        assert_eq!(a.relation().to_string(), "t^6 + z^4 + x^2*y + t");
        assert!(a.asanuma_params().is_some());
    }

    #[test]
    fn explicit_presentation_builds() {
        let text = r#"{
            "p": 2,
            "vars": ["x", "y", "z", "t"],
            "relation": "x^2*y + z^4 + t + t^6",
            "rule_monomial": "x^2*y",
            "params": ["U", "V"]
        }"#;
        let a = algebra_from_json(text).unwrap();
        assert_eq!(a.params(), ["U", "V"]);
        // identical relation to the shorthand (up to declared params)
        let b = algebra_from_json(r#"{"asanuma": {"p": 2, "m": 2, "e": 2, "s": 3}}"#).unwrap();
        assert_eq!(a.relation().to_string(), b.relation().to_string());
    }

    #[test]
    fn invalid_asanuma_params_are_rejected() {
        let err = algebra_from_json(r#"{"asanuma": {"p": 2, "m": 2, "e": 2, "s": 2}}"#);
        assert!(err.is_err());
        let err = algebra_from_json(r#"{"asanuma": {"p": 2, "m": 2, "e": 2, "s": 3}, "p": 2}"#);
        assert!(err.is_err());
    }

    #[test]
    fn grading_spec_with_derivation() {
        let a = algebra_from_json(r#"{"asanuma": {"p": 2, "m": 2, "e": 2, "s": 3}}"#).unwrap();
        let w = grading_from_json(
            r#"{"weights": {"x": 0, "z": 3, "t": 2}, "derive_y": true}"#,
            &a,
        )
        .unwrap();
        assert_eq!(w.weight("y"), Some(12));
        let w = grading_from_json(
            r#"{"weights": {"x": 0, "z": 3, "t": 2, "y": 12}}"#,
            &a,
        )
        .unwrap();
        assert_eq!(w.weight("y"), Some(12));
    }

    #[test]
    fn map_spec_builds_and_verifies() {
        let a = algebra_from_json(r#"{"asanuma": {"p": 2, "m": 1, "e": 2, "s": 3}}"#).unwrap();
        let spec: MapSpec = serde_json::from_str(
            r#"{
                "images": {
                    "t": "t + y*U",
                    "x": "x + U + t^4*y*U^2 + t^2*y^3*U^4 + y^5*U^6"
                }
            }"#,
        )
        .unwrap();
        let mut map = build_map(&spec, &a).unwrap();
        assert!(matches!(map.check_exponential(), Status::Verified));
    }

    #[test]
    fn map_parameter_collision_is_handled() {
        // algebra declares U among its params; the map still builds
        let a = algebra_from_json(
            r#"{"p": 2, "vars": ["x"], "params": ["U"]}"#,
        )
        .unwrap();
        let spec: MapSpec =
            serde_json::from_str(r#"{"images": {"x": "x + U"}}"#).unwrap();
        let mut map = build_map(&spec, &a).unwrap();
        assert!(matches!(map.check_exponential(), Status::Verified));
    }

    #[test]
    fn extension_spec_with_modulus() {
        let f2 = PrimeField::new(2).unwrap();
        let ext = build_extension(
            f2,
            &ExtensionSpec { degree: 2, modulus: Some("w^2 + w + 1".into()) },
        )
        .unwrap();
        assert_eq!(ext.order(), 4);
        assert!(build_extension(
            f2,
            &ExtensionSpec { degree: 3, modulus: Some("w^2 + w + 1".into()) }
        )
        .is_err());
    }

    #[test]
    fn q_must_be_a_power_of_p() {
        let f2 = PrimeField::new(2).unwrap();
        assert_eq!(extension_of_order(f2, 8).unwrap().order(), 8);
        assert!(extension_of_order(f2, 6).is_err());
        assert!(extension_of_order(f2, 1).is_err());
    }

    #[test]
    fn template_spec_round_trip() {
        let spec: TemplateSpec = serde_json::from_str(
            r#"{"terms": [{"generator": "t", "u_power": 1, "monomial": "x^2"}]}"#,
        )
        .unwrap();
        let template = build_template(&spec);
        assert_eq!(template.terms.len(), 1);
        assert_eq!(template.terms[0].generator, "t");
    }
}
