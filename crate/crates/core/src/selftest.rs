//! The bundled verification suite: nine criteria covering the map families,
//! graded relations, induced maps, truncated invariants, the refutation
//! search, point counts, singularity certificates and the infrastructure
//! invariants. The CLI `selftest` command and the `acceptance` test target
//! both run these.

use crate::algebra::{AsanumaParams, PresentedAlgebra};
use crate::expmap::{
    asanuma_map, derksen_report, induce_on_gr, invariant_basis, search_expmaps, translation_maps,
    AsanumaFamily, ExpMap, SearchTemplate, Status,
};
use crate::field::PrimeField;
use crate::geometry::{count_points_brute, count_points_stratified, singular_at, smoothness_certificate};
use crate::grading::{check_filtration_axioms, standard, GradedPresentation};
use crate::input::extension_of_order;
use crate::poly::{Polynomial, VarSet};
use crate::sample::SplitMix64;
use std::collections::BTreeMap;
use std::time::Instant;

/// Outcome of one criterion.
#[derive(Debug, Clone)]
pub struct CriterionOutcome {
    pub id: &'static str,
    pub title: &'static str,
    pub passed: bool,
    pub details: String,
    pub millis: u128,
}

impl CriterionOutcome {
    pub fn line(&self) -> String {
        format!(
            "{}: {} ({} ms) - {}",
            self.id,
            if self.passed { "PASS" } else { "FAIL" },
            self.millis,
            self.title
        )
    }
}

struct Check {
    passed: bool,
    notes: Vec<String>,
}

impl Check {
    fn new() -> Check {
        Check { passed: true, notes: Vec::new() }
    }

    fn assert(&mut self, cond: bool, note: String) {
        if !cond {
            self.passed = false;
            self.notes.push(format!("FAILED: {note}"));
        }
    }

    fn note(&mut self, note: String) {
        self.notes.push(note);
    }
}

fn run(
    id: &'static str,
    title: &'static str,
    body: impl FnOnce(&mut Check) -> Result<(), String>,
) -> CriterionOutcome {
    let start = Instant::now();
    let mut check = Check::new();
    if let Err(e) = body(&mut check) {
        check.passed = false;
        check.notes.push(format!("ERROR: {e}"));
    }
    CriterionOutcome {
        id,
        title,
        passed: check.passed,
        details: check.notes.join("; "),
        millis: start.elapsed().as_millis(),
    }
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

/// Every single-coefficient mutation of the images must break verification.
fn all_mutations_refute(phi: &ExpMap) -> Result<(usize, usize), String> {
    let p = phi.algebra().field().characteristic();
    let ext = phi.extended_algebra().clone();
    let mut tested = 0usize;
    let mut refuted = 0usize;
    for (gen, img) in phi.images() {
        for (mon, _) in img.nf().terms() {
            for delta in 1..p {
                let bump = Polynomial::from_term(
                    ext.field(),
                    ext.vars(),
                    mon.clone(),
                    ext.field().element(delta as i64),
                );
                let mutated = img.nf().checked_add(&bump).map_err(err)?;
                let mut images = phi.images().clone();
                images.insert(gen.clone(), ext.normalize(&mutated).map_err(err)?);
                let mut candidate =
                    ExpMap::new(phi.algebra(), phi.parameter(), images).map_err(err)?;
                tested += 1;
                if !matches!(candidate.check_exponential(), Status::Verified) {
                    refuted += 1;
                }
            }
        }
    }
    Ok((tested, refuted))
}

/// Criterion 1: the closed-form families construct and verify on the m = 1
/// instances for several polynomial parameters, and every single-coefficient
/// corruption flips the verdict.
pub fn c1_remark_maps() -> CriterionOutcome {
    run("c1", "closed-form maps verify; corrupted coefficients refute", |check| {
        for (p, e, s) in [(2u64, 2u32, 3u32), (3, 2, 2), (2, 3, 3)] {
            let params = AsanumaParams::new(p, 1, e, s).map_err(err)?;
            let a = PresentedAlgebra::asanuma(params).map_err(err)?;
            let phi1_params = ["1", "y", "z"];
            let phi2_params = ["1", "y", "t"];
            for (family, texts) in
                [(AsanumaFamily::Phi1, phi1_params), (AsanumaFamily::Phi2, phi2_params)]
            {
                for text in texts {
                    let c = Polynomial::parse(text, a.vars(), a.field()).map_err(err)?;
                    let started = Instant::now();
                    let phi = asanuma_map(&a, family, &c).map_err(err)?;
                    let elapsed = started.elapsed();
                    check.assert(
                        phi.verified(),
                        format!("{family:?} with parameter {text} on p={p},e={e},s={s}"),
                    );
                    check.assert(
                        elapsed.as_secs_f64() < 5.0,
                        format!("verification took {elapsed:?} (limit 5 s)"),
                    );
                    let (tested, refuted) = all_mutations_refute(&phi)?;
                    check.assert(
                        tested == refuted,
                        format!(
                            "{family:?}/{text} on p={p}: {refuted}/{tested} mutations refuted"
                        ),
                    );
                }
            }
        }
        check.note("3 instances x 2 families x 3 parameters, all mutations refuted".into());
        Ok(())
    })
}

/// Criterion 2: the graded relation under the second-grading weights is
/// exactly `x^m y + z^{p^e} + t^{sp}`, and the relation's degree drop lands
/// at `p^{e-r-1} < q p^e`.
pub fn c2_graded_relation() -> CriterionOutcome {
    run("c2", "graded relation and degree drop are exact", |check| {
        for (p, e, s) in [(2u64, 2u32, 3u32), (3, 2, 2), (2, 3, 3)] {
            for m in [2u32, 3] {
                let params = AsanumaParams::new(p, m, e, s).map_err(err)?;
                let a = PresentedAlgebra::asanuma(params).map_err(err)?;
                let w = standard::parameter_weights(&a, &params).map_err(err)?;
                let gp = GradedPresentation::new(&a, &w).map_err(err)?;
                let expected = Polynomial::parse(
                    &format!("x^{}*y + z^{} + t^{}", m, params.pe(), params.sp()),
                    a.vars(),
                    a.field(),
                )
                .map_err(err)?;
                check.assert(
                    gp.gr().relation() == &expected,
                    format!("gr relation for p={p},m={m},e={e},s={s}: got {}", gp.gr().relation()),
                );
                // x^m y + z^{p^e} + t^{sp} = -t sits at level p^{e-r-1}
                let dropped = a
                    .element(&format!("x^{}*y + z^{} + t^{}", m, params.pe(), params.sp()))
                    .map_err(err)?;
                let level = w.weight_degree(&dropped).map_err(err)?;
                let l2 = (params.p as i64).pow(params.e - params.r - 1);
                let l1 = params.q as i64 * params.pe() as i64;
                check.assert(
                    level == l2,
                    format!("degree drop for p={p},m={m}: got {level}, want {l2}"),
                );
                check.assert(l2 < l1, format!("l2 = {l2} not below l1 = {l1}"));
                for text in [format!("x^{m}*y"), format!("z^{}", params.pe()), format!("t^{}", params.sp())] {
                    let elem = a.element(&text).map_err(err)?;
                    check.assert(
                        w.weight_degree(&elem).map_err(err)? == l1,
                        format!("{text} not at level {l1}"),
                    );
                }
            }
        }
        check.note("6 instances, exact equality".into());
        Ok(())
    })
}

/// Criterion 3: the induced maps on gr exist, verify, are non-trivial, and
/// the leading form of every degree-4 invariant stays invariant.
pub fn c3_induced_maps() -> CriterionOutcome {
    run("c3", "induced maps on gr verify and contain the leading forms", |check| {
        let started = Instant::now();
        let params = AsanumaParams::new(2, 2, 2, 3).map_err(err)?;
        let a = PresentedAlgebra::asanuma(params).map_err(err)?;
        let one = Polynomial::one(a.field(), a.vars());
        let gradings = [
            ("negative-x", standard::negative_x(&a).map_err(err)?),
            ("parameter-weights", standard::parameter_weights(&a, &params).map_err(err)?),
        ];
        for family in [AsanumaFamily::Phi3, AsanumaFamily::Phi4] {
            let phi = asanuma_map(&a, family, &one).map_err(err)?;
            let basis = invariant_basis(&phi, 4).map_err(err)?;
            check.assert(!basis.basis.is_empty(), format!("{family:?} has no invariants"));
            for (name, w) in &gradings {
                let induced = induce_on_gr(&phi, w).map_err(err)?;
                check.assert(
                    induced.map.verified() && !induced.map.is_trivial(),
                    format!("{family:?} under {name}: induced map unusable"),
                );
                let mut held = 0usize;
                for b in &basis.basis {
                    let lead = induced.graded.lead(b).map_err(err)?;
                    if induced.map.is_invariant(&lead).map_err(err)? {
                        held += 1;
                    }
                }
                check.assert(
                    held == basis.basis.len(),
                    format!(
                        "{family:?} under {name}: {held}/{} leading forms invariant",
                        basis.basis.len()
                    ),
                );
            }
        }
        let elapsed = started.elapsed();
        check.assert(elapsed.as_secs_f64() < 60.0, format!("took {elapsed:?} (limit 60 s)"));
        check.note("phi3/phi4 under both gradings, 100% containment".into());
        Ok(())
    })
}

/// Criterion 4: truncated invariants of phi3/phi4 avoid y entirely, and the
/// two maps together never recover y.
pub fn c4_invariants_avoid_y() -> CriterionOutcome {
    run("c4", "invariants of phi3/phi4 avoid y; y is not recovered", |check| {
        let params = AsanumaParams::new(2, 2, 2, 3).map_err(err)?;
        let a = PresentedAlgebra::asanuma(params).map_err(err)?;
        let one = Polynomial::one(a.field(), a.vars());
        let phi3 = asanuma_map(&a, AsanumaFamily::Phi3, &one).map_err(err)?;
        let phi4 = asanuma_map(&a, AsanumaFamily::Phi4, &one).map_err(err)?;
        for (name, phi) in [("phi3", &phi3), ("phi4", &phi4)] {
            for d in 0..=4u32 {
                let basis = invariant_basis(phi, d).map_err(err)?;
                check.assert(
                    basis.all_y_free() == Some(true),
                    format!("{name} basis at degree {d} involves y"),
                );
            }
        }
        let report = derksen_report(&[phi3, phi4], 4).map_err(err)?;
        check.assert(report.y_free == Some(true), "union basis involves y".into());
        check.assert(
            !report.generators_recovered["y"],
            "product closure recovered y".into(),
        );
        check.assert(
            report.generators_recovered["x"] && report.generators_recovered["z"],
            "x and z should be recovered".into(),
        );
        check.note(format!(
            "union size {}, closure dimension {}",
            report.union_basis.len(),
            report.closure_dim
        ));
        Ok(())
    })
}

/// The documented refutation template for criterion 5: y is pinned, the
/// images of x, z, t carry unknown coefficients on {1, x, z, t} at U^1 and
/// on {1, x} at U^2 — 18 unknowns, 2^18 = 262144 candidates.
pub fn c5_template() -> SearchTemplate {
    let mut template = SearchTemplate::default();
    for gen in ["x", "z", "t"] {
        for mon in ["1", "x", "z", "t"] {
            template = template.term(gen, 1, mon);
        }
        for mon in ["1", "x"] {
            template = template.term(gen, 2, mon);
        }
    }
    template
}

/// Criterion 5: the bounded exhaustive search finds no non-trivial
/// exponential map fixing y on the graded ring.
pub fn c5_refutation_search() -> CriterionOutcome {
    run("c5", "no exponential map fixes y within the search template", |check| {
        let started = Instant::now();
        let f2 = PrimeField::new(2).map_err(err)?;
        let no_params: &[&str] = &[];
        let b = PresentedAlgebra::quotient(
            f2,
            &["x", "y", "z", "t"],
            no_params,
            "x^2*y + z^4 + t^6",
            "x^2*y",
        )
        .map_err(err)?;
        let template = c5_template();
        check.assert(template.terms.len() == 18, "template must have 18 unknowns".into());
        let found = search_expmaps(&b, &template).map_err(err)?;
        check.assert(
            found.is_empty(),
            format!("search returned {} maps", found.len()),
        );
        let elapsed = started.elapsed();
        check.assert(elapsed.as_secs_f64() < 600.0, format!("took {elapsed:?} (limit 10 min)"));
        check.note(format!("262144 candidates exhausted in {elapsed:?}"));
        Ok(())
    })
}

/// Criterion 6: the coordinate translations of a polynomial ring recover
/// every generator.
pub fn c6_translations_recover_generators() -> CriterionOutcome {
    run("c6", "translations recover all generators of k[X1,X2,X3]", |check| {
        let f2 = PrimeField::new(2).map_err(err)?;
        let maps = translation_maps(f2, 3).map_err(err)?;
        let report = derksen_report(&maps, 2).map_err(err)?;
        for g in ["X1", "X2", "X3"] {
            check.assert(report.generators_recovered[g], format!("{g} not recovered"));
        }
        Ok(())
    })
}

/// Criterion 7: point counts are q^3 with brute and stratified agreement.
pub fn c7_point_counts() -> CriterionOutcome {
    run("c7", "hypersurface point counts equal q^3 by two methods", |check| {
        let started = Instant::now();
        let cases: [(u64, u32, u32, u32, &[u64]); 2] =
            [(2, 2, 2, 3, &[2, 4, 8]), (3, 2, 2, 2, &[3, 9])];
        for (p, m, e, s, qs) in cases {
            let params = AsanumaParams::new(p, m, e, s).map_err(err)?;
            let a = PresentedAlgebra::asanuma(params).map_err(err)?;
            for &q in qs {
                let field = extension_of_order(a.field(), q).map_err(err)?;
                let brute = count_points_brute(a.relation(), &field, 2).map_err(err)?;
                let strat = count_points_stratified(&a, &field).map_err(err)?;
                check.assert(
                    brute.count == q.pow(3),
                    format!("brute count over F_{q} is {}, want {}", brute.count, q.pow(3)),
                );
                check.assert(
                    strat.count == brute.count,
                    format!("methods disagree over F_{q}: {} vs {}", strat.count, brute.count),
                );
            }
        }
        let elapsed = started.elapsed();
        check.assert(elapsed.as_secs_f64() < 30.0, format!("took {elapsed:?} (limit 30 s)"));
        Ok(())
    })
}

/// Criterion 8: the t-partial of every valid relation is 1, and the
/// cusp-shaped plane curves are singular where predicted.
pub fn c8_certificates() -> CriterionOutcome {
    run("c8", "smoothness and singularity certificates", |check| {
        let mut valid = 0usize;
        for p in [2u64, 3, 5] {
            for m in 1..=3u32 {
                for e in 1..=3u32 {
                    for s in 1..=6u32 {
                        let Ok(params) = AsanumaParams::new(p, m, e, s) else {
                            continue;
                        };
                        valid += 1;
                        let a = PresentedAlgebra::asanuma(params).map_err(err)?;
                        let cert = smoothness_certificate(&a).map_err(err)?;
                        check.assert(
                            cert.smooth && cert.dt.is_one(),
                            format!("dt != 1 for p={p},m={m},e={e},s={s}"),
                        );
                    }
                }
            }
        }
        check.assert(valid > 0, "no valid parameter set sampled".into());
        check.note(format!("{valid} valid parameter sets, all with dt = 1"));

        // singular points of g = z^{p^e} - a t^m + b at (t, z) = (0, l)
        // with l^{p^e} = -b
        let cusps: [(u64, u32, u32, i64, i64, i64); 3] = [
            (2, 1, 3, 1, 1, 1),  // z^2 + t^3 + 1 over F_2, l = 1
            (3, 1, 2, 1, 1, 2),  // z^3 + 2t^2 + 1 over F_3, l = 2
            (5, 1, 2, 2, 3, 2),  // z^5 + 3t^2 + 3 over F_5, l = 2
        ];
        for (p, e, m, alpha, beta, lambda) in cusps {
            let field = PrimeField::new(p).map_err(err)?;
            let pe = (p as i64).pow(e);
            let vars = VarSet::new(["z", "t"]).map_err(err)?;
            let text = format!(
                "z^{} - {}*t^{} + {}",
                pe,
                field.element(alpha).value(),
                m,
                field.element(beta).value()
            );
            let g = Polynomial::parse(&text, &vars, field).map_err(err)?;
            let l = field.element(lambda);
            check.assert(
                l.pow(pe as u64) == -field.element(beta),
                format!("lambda^(p^e) != -beta for p={p}"),
            );
            let mut point = BTreeMap::new();
            point.insert("z".to_string(), l);
            point.insert("t".to_string(), field.zero());
            let cert = singular_at(&g, &field, &point).map_err(err)?;
            check.assert(cert.singular, format!("{text} not singular at (0, {lambda}) over F_{p}"));
        }
        Ok(())
    })
}

/// Criterion 9: confluence under randomized orders, multiplicativity and
/// non-additivity of the leading form, and brute-force agreement of the
/// invariant solver.
pub fn c9_infrastructure() -> CriterionOutcome {
    run("c9", "confluence, leading-form laws, invariant brute force", |check| {
        let params = AsanumaParams::new(2, 2, 2, 3).map_err(err)?;
        let a = PresentedAlgebra::asanuma(params).map_err(err)?;

        // confluence: 1000 random polynomials, each reduced with a
        // randomized single-step order
        let mut rng = SplitMix64::new(0x5EED_0001);
        let mut confluent = 0usize;
        for _ in 0..1000 {
            let f = crate::sample::random_poly(&mut rng, a.field(), a.vars(), 4, 4, 5);
            let canonical = a.normalize_poly(f.clone());
            let mut order = SplitMix64::new(rng.next_u64());
            let randomized = a.normalize_poly_with_order(f, |n| order.below(n as u64) as usize);
            if canonical == randomized {
                confluent += 1;
            }
        }
        check.assert(confluent == 1000, format!("confluence held on {confluent}/1000"));

        // leading-form multiplicativity on 1000 samples
        let w = standard::parameter_weights(&a, &params).map_err(err)?;
        let report = check_filtration_axioms(&a, &w, 1000, 0x5EED_0002).map_err(err)?;
        check.assert(
            report.passed(),
            format!("{} filtration failures", report.failures.len()),
        );

        // pinned non-additivity pair
        let gp = GradedPresentation::new(&a, &w).map_err(err)?;
        let a1 = a.element("z^4 + t").map_err(err)?;
        let a2 = a.element("-z^4").map_err(err)?;
        let lead_sum = gp.lead(&a1.add(&a2)).map_err(err)?;
        let sum_of_leads = gp.lead(&a1).map_err(err)?.add(&gp.lead(&a2).map_err(err)?);
        check.assert(
            lead_sum != sum_of_leads && sum_of_leads.is_zero(),
            "leading form behaved additively on the regression pair".into(),
        );

        // invariant solver vs brute force over F_2, degrees 0..=3
        let f2 = PrimeField::new(2).map_err(err)?;
        let maps = translation_maps(f2, 2).map_err(err)?;
        let phi = &maps[0];
        for d in 0..=3u32 {
            let basis = invariant_basis(phi, d).map_err(err)?;
            let ring = phi.algebra();
            let mons = &basis.monomials;
            if mons.len() > 20 {
                return Err(format!("monomial list too large for brute force: {}", mons.len()));
            }
            let mut count = 0u64;
            for mask in 0u64..(1 << mons.len()) {
                let mut nf = Polynomial::zero(f2, ring.vars());
                for (j, m) in mons.iter().enumerate() {
                    if mask >> j & 1 == 1 {
                        let term = Polynomial::from_term(f2, ring.vars(), m.clone(), f2.one());
                        nf = nf.checked_add(&term).map_err(err)?;
                    }
                }
                let elem = ring.normalize(&nf).map_err(err)?;
                if phi.is_invariant(&elem).map_err(err)? {
                    count += 1;
                }
            }
            check.assert(
                count == 1u64 << basis.basis.len(),
                format!(
                    "degree {d}: brute force found {count} invariants, solver basis has {}",
                    basis.basis.len()
                ),
            );
        }
        Ok(())
    })
}

/// Run all nine criteria in order.
pub fn run_all() -> Vec<CriterionOutcome> {
    vec![
        c1_remark_maps(),
        c2_graded_relation(),
        c3_induced_maps(),
        c4_invariants_avoid_y(),
        c5_refutation_search(),
        c6_translations_recover_generators(),
        c7_point_counts(),
        c8_certificates(),
        c9_infrastructure(),
    ]
}
