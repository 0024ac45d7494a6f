//! Weight gradings, the filtrations they induce, leading forms and
//! associated graded presentations.
//!
//! A grading assigns an integer weight to every generator; the filtration
//! level of an element is the maximal weight of its normal-form monomials,
//! which is well defined because normal forms are unique. The filtration is
//! never materialized as subspaces. Gradings built here are induced by
//! generator weights, so the finite generating set witnesses admissibility
//! by construction.

use crate::algebra::{AlgebraElement, AlgebraError, PresentedAlgebra};
use crate::poly::Polynomial;
use crate::sample::{random_nonzero_element, SplitMix64};
use std::collections::BTreeMap;
use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GradingError {
    Algebra(AlgebraError),
    UnweightedVariable(String),
    ZeroElement,
    OwnerMismatch,
    UnsupportedGrading(String),
    DerivationUnavailable(String),
    NonPositiveScale,
}

impl fmt::Display for GradingError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GradingError::Algebra(e) => write!(f, "{e}"),
            GradingError::UnweightedVariable(v) => write!(f, "variable `{v}` has no weight"),
            GradingError::ZeroElement => write!(f, "the degree of 0 is undefined"),
            GradingError::OwnerMismatch => write!(f, "element belongs to a different algebra"),
            GradingError::UnsupportedGrading(m) => write!(f, "unsupported grading: {m}"),
            GradingError::DerivationUnavailable(m) => {
                write!(f, "cannot derive a weight: {m}")
            }
            GradingError::NonPositiveScale => write!(f, "grading scale must be positive"),
        }
    }
}

impl std::error::Error for GradingError {}

impl From<AlgebraError> for GradingError {
    fn from(e: AlgebraError) -> Self {
        GradingError::Algebra(e)
    }
}

/// Integer weights on generators. `derived_for` records a weight that was
/// induced from the relation rather than supplied.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightGrading {
    weights: BTreeMap<String, i64>,
    derived_for: Option<String>,
    /// Generator-weight gradings are admissible: every normal form is a sum
    /// of generator monomials lying in its own filtration level.
    admissible: bool,
}

impl WeightGrading {
    pub fn new<S: Into<String>>(pairs: impl IntoIterator<Item = (S, i64)>) -> WeightGrading {
        WeightGrading {
            weights: pairs.into_iter().map(|(k, v)| (k.into(), v)).collect(),
            derived_for: None,
            admissible: true,
        }
    }

    /// A grading on the algebra's generators. When `derive_eliminated` is
    /// set, the weight of the eliminated variable is induced from the
    /// relation: w(y) = top-weight(τ) − (weight of µ with y struck out).
    pub fn for_algebra(
        algebra: &PresentedAlgebra,
        given: &BTreeMap<String, i64>,
        derive_eliminated: bool,
    ) -> Result<WeightGrading, GradingError> {
        let mut weights = given.clone();
        let mut derived_for = None;
        if derive_eliminated {
            let rule = algebra.rule().ok_or_else(|| {
                GradingError::DerivationUnavailable("algebra has no relation".into())
            })?;
            let elim = algebra.eliminated_var().ok_or_else(|| {
                GradingError::DerivationUnavailable("relation has no eliminated variable".into())
            })?;
            if weights.contains_key(elim) {
                return Err(GradingError::DerivationUnavailable(format!(
                    "`{elim}` already has an explicit weight"
                )));
            }
            let idx = algebra.vars().index_of(elim).expect("eliminated is a generator");
            if rule.head().exp(idx) != 1 {
                return Err(GradingError::DerivationUnavailable(format!(
                    "rule monomial is not linear in `{elim}`"
                )));
            }
            let partial = WeightGrading {
                weights: weights.clone(),
                derived_for: None,
                admissible: true,
            };
            let tail = -rule.minus_tail();
            if tail.is_zero() {
                return Err(GradingError::DerivationUnavailable(
                    "relation has an empty tail".into(),
                ));
            }
            let tail_top = partial.poly_weight_degree(&tail)?;
            let mut head_rest = 0i64;
            for (i, &e) in rule.head().exps().iter().enumerate() {
                if e == 0 || i == idx {
                    continue;
                }
                let name = &algebra.vars().names()[i];
                let w = *weights
                    .get(name)
                    .ok_or_else(|| GradingError::UnweightedVariable(name.clone()))?;
                head_rest += w * e as i64;
            }
            weights.insert(elim.to_string(), tail_top - head_rest);
            derived_for = Some(elim.to_string());
        }
        for g in algebra.generators() {
            if !weights.contains_key(g) {
                return Err(GradingError::UnweightedVariable(g.clone()));
            }
        }
        Ok(WeightGrading { weights, derived_for, admissible: true })
    }

    pub fn weight(&self, var: &str) -> Option<i64> {
        self.weights.get(var).copied()
    }

    pub fn weights(&self) -> &BTreeMap<String, i64> {
        &self.weights
    }

    pub fn derived_for(&self) -> Option<&str> {
        self.derived_for.as_deref()
    }

    pub fn is_admissible(&self) -> bool {
        self.admissible
    }

    /// All weights multiplied by a positive integer; leading forms are
    /// unchanged.
    pub fn scaled(&self, k: i64) -> Result<WeightGrading, GradingError> {
        if k <= 0 {
            return Err(GradingError::NonPositiveScale);
        }
        Ok(WeightGrading {
            weights: self.weights.iter().map(|(n, &w)| (n.clone(), w * k)).collect(),
            derived_for: self.derived_for.clone(),
            admissible: self.admissible,
        })
    }

    /// Weight of a single monomial of `f`'s universe.
    fn monomial_weight(&self, f: &Polynomial, m: &crate::poly::Monomial) -> Result<i64, GradingError> {
        let mut acc = 0i64;
        for (i, &e) in m.exps().iter().enumerate() {
            if e == 0 {
                continue;
            }
            let name = &f.vars().names()[i];
            let w = self
                .weights
                .get(name)
                .copied()
                .ok_or_else(|| GradingError::UnweightedVariable(name.clone()))?;
            acc += w * e as i64;
        }
        Ok(acc)
    }

    /// Max weight over the monomials of a nonzero polynomial.
    pub fn poly_weight_degree(&self, f: &Polynomial) -> Result<i64, GradingError> {
        if f.is_zero() {
            return Err(GradingError::ZeroElement);
        }
        let mut best = i64::MIN;
        for (m, _) in f.terms() {
            best = best.max(self.monomial_weight(f, m)?);
        }
        Ok(best)
    }

    /// Filtration level of a nonzero element: the maximal weight of its
    /// normal-form monomials.
    pub fn weight_degree(&self, a: &AlgebraElement) -> Result<i64, GradingError> {
        self.poly_weight_degree(a.nf())
    }

    /// The top-weight part of a nonzero polynomial.
    pub fn leading_terms(&self, f: &Polynomial) -> Result<Polynomial, GradingError> {
        let top = self.poly_weight_degree(f)?;
        let mut out = Polynomial::zero(f.field(), f.vars());
        for (m, c) in f.terms() {
            if self.monomial_weight(f, m)? == top {
                let t = Polynomial::from_term(f.field(), f.vars(), m.clone(), c);
                out = out.checked_add(&t).expect("same universe");
            }
        }
        Ok(out)
    }
}

/// The associated graded presentation of an algebra under a grading: the
/// same generators with the relation replaced by its leading form. When the
/// relation is homogeneous the original presentation is returned and the
/// leading-form map is the identity on normal forms.
#[derive(Debug, Clone)]
pub struct GradedPresentation {
    source: PresentedAlgebra,
    gr: PresentedAlgebra,
    grading: WeightGrading,
    homogeneous: bool,
}

impl GradedPresentation {
    pub fn new(
        algebra: &PresentedAlgebra,
        grading: &WeightGrading,
    ) -> Result<GradedPresentation, GradingError> {
        if algebra.relation().is_zero() {
            return Ok(GradedPresentation {
                source: algebra.clone(),
                gr: algebra.clone(),
                grading: grading.clone(),
                homogeneous: true,
            });
        }
        let rule = algebra.rule().expect("nonzero relation implies a rule");
        let lead = grading.leading_terms(algebra.relation())?;
        if &lead == algebra.relation() {
            return Ok(GradedPresentation {
                source: algebra.clone(),
                gr: algebra.clone(),
                grading: grading.clone(),
                homogeneous: true,
            });
        }
        if lead.coeff(rule.head()).is_zero() {
            return Err(GradingError::UnsupportedGrading(format!(
                "the leading form {lead} loses the rule monomial"
            )));
        }
        let head_text = {
            let head_poly = Polynomial::from_term(
                algebra.field(),
                algebra.vars(),
                rule.head().clone(),
                algebra.field().one(),
            );
            head_poly.to_string()
        };
        let gr = PresentedAlgebra::quotient(
            algebra.field(),
            &algebra.generators().iter().map(String::as_str).collect::<Vec<_>>(),
            &algebra.params().iter().map(String::as_str).collect::<Vec<_>>(),
            &lead.to_string(),
            &head_text,
        )?;
        Ok(GradedPresentation {
            source: algebra.clone(),
            gr,
            grading: grading.clone(),
            homogeneous: false,
        })
    }

    pub fn source(&self) -> &PresentedAlgebra {
        &self.source
    }

    /// The associated graded algebra.
    pub fn gr(&self) -> &PresentedAlgebra {
        &self.gr
    }

    pub fn grading(&self) -> &WeightGrading {
        &self.grading
    }

    /// Whether the relation was homogeneous, i.e. gr is the source itself.
    pub fn is_homogeneous(&self) -> bool {
        self.homogeneous
    }

    /// The leading-form map ρ: the top-weight part of the normal form, read
    /// in the graded presentation. Multiplicative but not additive.
    pub fn lead(&self, a: &AlgebraElement) -> Result<AlgebraElement, GradingError> {
        if !a.owner().same_presentation(&self.source) {
            return Err(GradingError::OwnerMismatch);
        }
        if a.is_zero() {
            return Err(GradingError::ZeroElement);
        }
        let top = self.grading.leading_terms(a.nf())?;
        // normal-form monomials stay normal for the same rule monomial
        Ok(self.gr.normalize(&top)?)
    }
}

/// Build the associated graded presentation of `algebra` under `grading`.
pub fn gr_presentation(
    algebra: &PresentedAlgebra,
    grading: &WeightGrading,
) -> Result<GradedPresentation, GradingError> {
    GradedPresentation::new(algebra, grading)
}

/// Leading form of a single element (builds the graded presentation on the
/// fly; prefer [`GradedPresentation::lead`] for repeated use).
pub fn leading_form(
    a: &AlgebraElement,
    grading: &WeightGrading,
) -> Result<AlgebraElement, GradingError> {
    GradedPresentation::new(a.owner(), grading)?.lead(a)
}

/// One sampled counterexample from the filtration check.
#[derive(Debug, Clone)]
pub struct FiltrationFailure {
    pub a: String,
    pub b: String,
    pub reason: String,
}

/// Result of sampling the multiplicative filtration axiom and the
/// multiplicativity of ρ.
#[derive(Debug, Clone)]
pub struct FiltrationReport {
    pub samples: u32,
    pub failures: Vec<FiltrationFailure>,
}

impl FiltrationReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// For `samples` random nonzero pairs (a, b), assert
/// deg(ab) = deg(a) + deg(b) and ρ(ab) = ρ(a)ρ(b).
pub fn check_filtration_axioms(
    algebra: &PresentedAlgebra,
    grading: &WeightGrading,
    samples: u32,
    seed: u64,
) -> Result<FiltrationReport, GradingError> {
    let gp = GradedPresentation::new(algebra, grading)?;
    let mut rng = SplitMix64::new(seed);
    let mut failures = Vec::new();
    for _ in 0..samples {
        let a = random_nonzero_element(&mut rng, algebra, 3, 4);
        let b = random_nonzero_element(&mut rng, algebra, 3, 4);
        let ab = a.mul(&b);
        if ab.is_zero() {
            failures.push(FiltrationFailure {
                a: a.to_string(),
                b: b.to_string(),
                reason: "product is zero".into(),
            });
            continue;
        }
        let da = grading.weight_degree(&a)?;
        let db = grading.weight_degree(&b)?;
        let dab = grading.weight_degree(&ab)?;
        if dab != da + db {
            failures.push(FiltrationFailure {
                a: a.to_string(),
                b: b.to_string(),
                reason: format!("deg(ab) = {dab} but deg(a) + deg(b) = {}", da + db),
            });
            continue;
        }
        let lead_ab = gp.lead(&ab)?;
        let lead_prod = gp.lead(&a)?.mul(&gp.lead(&b)?);
        if lead_ab != lead_prod {
            failures.push(FiltrationFailure {
                a: a.to_string(),
                b: b.to_string(),
                reason: format!("lead(ab) = {lead_ab} but lead(a)lead(b) = {lead_prod}"),
            });
        }
    }
    Ok(FiltrationReport { samples, failures })
}

/// The two weight assignments used on the Asanuma rings.
pub mod standard {
    use super::WeightGrading;
    use crate::algebra::{AsanumaParams, PresentedAlgebra};
    use crate::grading::GradingError;
    use std::collections::BTreeMap;

    /// w(x) = -1, w(y) derived (= m for the Asanuma relation), w(z) = w(t) = 0;
    /// the relation is homogeneous for this grading.
    pub fn negative_x(algebra: &PresentedAlgebra) -> Result<WeightGrading, GradingError> {
        let mut given = BTreeMap::new();
        given.insert("x".to_string(), -1);
        given.insert("z".to_string(), 0);
        given.insert("t".to_string(), 0);
        WeightGrading::for_algebra(algebra, &given, true)
    }

    /// w(x) = 0, w(z) = q, w(t) = p^{e-r-1}, w(y) derived (= q p^e); drops
    /// the linear t from the relation.
    pub fn parameter_weights(
        algebra: &PresentedAlgebra,
        params: &AsanumaParams,
    ) -> Result<WeightGrading, GradingError> {
        let mut given = BTreeMap::new();
        given.insert("x".to_string(), 0);
        given.insert("z".to_string(), params.q as i64);
        given.insert("t".to_string(), (params.p as i64).pow(params.e - params.r - 1));
        WeightGrading::for_algebra(algebra, &given, true)
    }
}
