//! Whole-caterpillar checks: oracle cross-validation and the theorem pipeline.

use std::collections::BTreeMap;
use std::ops::RangeInclusive;

use serde::{Deserialize, Serialize};
use serde_json::json;

use super::{ConformanceRecord, Verdict};
use crate::caterpoly::{
    caterpillar_polys, check_conditions, closed_k, k_exponent_min_recurrence, p_sequence, predict_from,
};
use crate::polyalg::Polynomial;
use crate::shape::{analyze_shape, ShapeReport};
use crate::treegraph::{indpoly_bruteforce, indpoly_deletion, indpoly_treedp, CaterpillarSpec, MAX_CAP};

/// Computes `I(T(m, n))` by the p-recursion, tree DP, deletion recursion and,
/// within `cap`, subset enumeration. Conform iff all agree and the `(1+x)`
/// multiplicity matches the min-recurrence (and the closed form for
/// non-decreasing `m`).
pub fn cross_validate_instance(spec: &CaterpillarSpec, cap: usize) -> ConformanceRecord {
    let m = spec.m();
    let n = spec.n();
    let tree = spec.build_tree();

    let mut methods: BTreeMap<&str, Polynomial> = BTreeMap::new();
    let recursion = p_sequence(m).pop().expect("n >= 1");
    methods.insert("treedp", indpoly_treedp(&tree));
    methods.insert("deletion", indpoly_deletion(&tree));
    if cap <= MAX_CAP && tree.vertex_count() <= cap {
        let brute = indpoly_bruteforce(&tree, cap).expect("size checked against cap");
        methods.insert("bruteforce", brute);
    }
    let disagreeing: Vec<&str> = methods
        .iter()
        .filter(|(_, p)| **p != recursion)
        .map(|(name, _)| *name)
        .collect();

    let multiplicity = recursion
        .remove_binomial_factor()
        .expect("independence polynomials are nonzero")
        .0;
    let min_rec = k_exponent_min_recurrence(m)[n - 1];
    let closed = spec.is_non_decreasing().then(|| closed_k(m, n)[n - 1]);
    let integrity = caterpillar_polys(spec).err().map(|e| e.to_string());

    let mut compared: Vec<&str> = vec!["recursion"];
    compared.extend(methods.keys());
    let holds = disagreeing.is_empty()
        && multiplicity == min_rec
        && closed.is_none_or(|k| k == multiplicity)
        && integrity.is_none();

    ConformanceRecord::new(
        "cross-validate",
        json!({ "spec": spec, "cap": cap }),
        json!({
            "all_methods_agree": true,
            "multiplicity_min_recurrence": min_rec,
            "multiplicity_closed_form": closed,
        }),
        json!({
            "polynomial": recursion,
            "methods_compared": compared,
            "disagreeing_methods": disagreeing,
            "multiplicity": multiplicity,
            "integrity_error": integrity,
        }),
        Verdict::from_holds(holds),
    )
}

/// Proposition claim on one `q_j`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QClaim {
    pub j: usize,
    pub k: usize,
    pub q: Polynomial,
    /// `"balanced-strictly-unimodal-dominant"` or, for the degenerate `q_2`,
    /// `"consecutive-modes"`.
    pub expectation: String,
    pub expected_modes: Option<Vec<usize>>,
    pub shape: ShapeReport,
    pub holds: bool,
}

/// `(t-1)(t'-1) >= 1` at recursion step `n >= 3`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundStep {
    pub n: usize,
    pub t: usize,
    pub tprime: usize,
    pub product: i64,
    pub holds: bool,
}

/// `q_2` with `m_1 >= 6` even and `m_2 = m_1 + 1` has two adjacent modes.
fn degenerate_q2(m: &[usize]) -> Option<Vec<usize>> {
    (m.len() >= 2 && m[0] >= 6 && m[0].is_multiple_of(2) && m[1] == m[0] + 1)
        .then(|| vec![(m[1] - 1) / 2, m[1].div_ceil(2)])
}

fn q_claim(j: usize, m: &[usize], k: usize, q: Polynomial) -> QClaim {
    let shape = analyze_shape(&q).expect("q_j is a counting sequence");
    let (expectation, expected_modes, holds) = match (j, degenerate_q2(m)) {
        (2, Some(modes)) => {
            let holds = shape.unimodal && shape.modes == modes;
            ("consecutive-modes", Some(modes), holds)
        }
        _ => {
            let holds = shape.strictly_unimodal && shape.is_balanced() && !shape.weak_sides().is_empty();
            ("balanced-strictly-unimodal-dominant", None, holds)
        }
    };
    QClaim {
        j,
        k,
        q,
        expectation: expectation.to_string(),
        expected_modes,
        shape,
        holds,
    }
}

/// Runs the full theorem pipeline on `T(m, n)`: hypotheses, the shape of every
/// `q_j`, the mode of `p_n` (confirmed against the tree DP), and the proof's
/// `t <= mu'` and `(t-1)(t'-1) >= 1` diagnostics.
pub fn verify_theorem_instance(spec: &CaterpillarSpec, cond3_range: RangeInclusive<usize>) -> ConformanceRecord {
    const NAME: &str = "theorem-instance";
    let m = spec.m();
    let conditions = check_conditions(spec, cond3_range.clone());
    let inputs = json!({
        "spec": spec,
        "cond3_range": [cond3_range.start(), cond3_range.end()],
    });

    let p = p_sequence(m);
    let p_n = p.last().expect("n >= 1").clone();
    let treedp = indpoly_treedp(&spec.build_tree());
    let d = spec.leaf_count();
    let mut mode_set = vec![d / 2, d.div_ceil(2)];
    mode_set.dedup();

    let q_claims: Vec<QClaim> = p
        .iter()
        .enumerate()
        .map(|(i, pj)| {
            let (k, q) = pj.remove_binomial_factor().expect("nonzero");
            q_claim(i + 1, m, k, q)
        })
        .collect();

    let p_shape = analyze_shape(&p_n).expect("p_n is a counting sequence");
    let p_holds = p_shape.unimodal && p_shape.modes.iter().all(|mu| mode_set.contains(mu));

    let mut diagnostics = json!({});
    let mut integrity_error = None;
    if spec.is_non_decreasing() {
        match caterpillar_polys(spec).and_then(|seq| {
            let pred = predict_from(&seq)?;
            Ok((seq, pred))
        }) {
            Ok((seq, pred)) => {
                let qs = seq.closed_form.expect("non-decreasing");
                let bounds: Vec<BoundStep> = (3..=spec.n())
                    .map(|n| {
                        let (t, tprime) = (qs.t(n), qs.tprime(n));
                        let product = (t as i64 - 1) * (tprime as i64 - 1);
                        BoundStep {
                            n,
                            t,
                            tprime,
                            product,
                            holds: product >= 1,
                        }
                    })
                    .collect();
                diagnostics = json!({
                    "t_hypothesis": pred.t_hypothesis,
                    "t_tprime_bound": bounds,
                });
            }
            Err(e) => integrity_error = Some(e.to_string()),
        }
    }

    let observed = json!({
        "p_n": p_n,
        "p_shape": p_shape,
        "p_matches_treedp": p_n == treedp,
        "q_claims": q_claims,
        "diagnostics": diagnostics,
        "integrity_error": integrity_error,
    });
    let predicted = json!({
        "conditions": conditions,
        "d": d,
        "mode_set": mode_set,
        "q": "balanced, strictly unimodal, weakly LD or RD (q_2 may have consecutive modes)",
    });

    let verdict = if !conditions.all_pass {
        Verdict::HypothesisNotMet
    } else {
        let holds = p_holds && p_n == treedp && integrity_error.is_none() && q_claims.iter().all(|c| c.holds);
        Verdict::from_holds(holds)
    };
    ConformanceRecord::new(NAME, inputs, predicted, observed, verdict)
}

/// Classifies `q_1 = (1+x)^{m_1} + x` against the claim that it is always
/// strictly unimodal.
pub fn base_case_probe(m1: usize) -> ConformanceRecord {
    const NAME: &str = "q1-base-case";
    let inputs = json!({ "m1": m1 });
    let q1 = &Polynomial::binomial_power(m1) + &Polynomial::x();
    let shape = analyze_shape(&q1).expect("counting sequence");
    if m1 < 3 {
        let reason = format!("m_1 = {m1} is below 3");
        return ConformanceRecord::hypothesis_not_met(NAME, inputs, reason, json!({ "q1": q1, "shape": shape }));
    }
    let finding = (!shape.strictly_unimodal).then(|| {
        format!(
            "q_1 for m_1 = {m1} has modes {:?}; it is not strictly unimodal, contrary to the base-case claim",
            shape.modes
        )
    });
    ConformanceRecord::new(
        NAME,
        inputs,
        json!({ "strictly_unimodal": true }),
        json!({ "q1": q1, "shape": shape, "finding": finding }),
        Verdict::from_holds(shape.strictly_unimodal),
    )
}
