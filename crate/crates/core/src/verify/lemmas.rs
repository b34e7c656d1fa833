//! Checks for the `(1+x)^t q(x)` lemmas and the symmetric-multiplier remark.

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};
use serde_json::json;

use super::{ConformanceRecord, Verdict};
use crate::polyalg::{bigint_string, binomial_at, binomial_row, Polynomial};
use crate::shape::{analyze_shape, Dominance, ShapeReport, Side};

/// Shared hypotheses: balanced, strictly unimodal, weakly LD or RD, `1 <= t <= mu`.
fn lemma_hypotheses(q: &Polynomial, t: usize) -> Result<ShapeReport, String> {
    let shape = analyze_shape(q).map_err(|e| e.to_string())?;
    let mu = shape.mode().ok_or("q is not strictly unimodal")?;
    if shape.weak_sides().is_empty() {
        return Err("q is neither weakly LD nor weakly RD".into());
    }
    if !shape.is_balanced() {
        return Err("q is not balanced".into());
    }
    if t == 0 {
        return Err("t must be positive".into());
    }
    if t > mu {
        return Err(format!("t = {t} exceeds the mode {mu} of q"));
    }
    Ok(shape)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
struct ShapePrediction {
    /// The class of `q` this prediction follows from.
    from: Dominance,
    mode: usize,
    class: Dominance,
}

/// The lemma's claim for each dominance side `q` has: even `t` keeps the side
/// and moves the mode by `t/2`; odd `t` swaps sides, landing at `mu + (t-1)/2`
/// from LD and `mu + (t+1)/2` from RD.
fn shift_predictions(q_shape: &ShapeReport, t: usize) -> Vec<ShapePrediction> {
    let mu = q_shape.modes[0];
    q_shape
        .weak_sides()
        .into_iter()
        .map(|side| {
            let strict = q_shape.has(Dominance::new(side, true));
            let (mode, target) = match (t.is_multiple_of(2), side) {
                (true, _) => (mu + t / 2, side),
                (false, Side::Left) => (mu + (t - 1) / 2, side.opposite()),
                (false, Side::Right) => (mu + t.div_ceil(2), side.opposite()),
            };
            ShapePrediction {
                from: Dominance::new(side, strict),
                mode,
                class: Dominance::new(target, strict),
            }
        })
        .collect()
}

/// Every predicted failure, as readable strings; empty means conform.
fn shape_mismatches(observed: &ShapeReport, predictions: &[ShapePrediction]) -> Vec<String> {
    let mut out = Vec::new();
    if !observed.strictly_unimodal {
        out.push(format!("product is not strictly unimodal (modes {:?})", observed.modes));
    }
    if !observed.is_balanced() {
        out.push("product is not balanced".into());
    }
    for pr in predictions {
        if observed.mode() != Some(pr.mode) {
            out.push(format!("from {}: expected unique mode {}", pr.from, pr.mode));
        }
        if !observed.has(pr.class) {
            out.push(format!("from {}: expected {}", pr.from, pr.class));
        }
    }
    out
}

/// Multiplies `q` by `(1+x)^t` and compares the product's shape with the lemma.
pub fn check_shift_lemma(q: &Polynomial, t: usize) -> ConformanceRecord {
    const NAME: &str = "shift-lemma";
    let inputs = json!({ "q": q, "t": t });
    let q_shape = match lemma_hypotheses(q, t) {
        Ok(s) => s,
        Err(reason) => return ConformanceRecord::hypothesis_not_met(NAME, inputs, reason, json!({})),
    };
    let product = q.mul_binomial_power(t);
    let observed = analyze_shape(&product).expect("product of a counting sequence with (1+x)^t");
    let predictions = shift_predictions(&q_shape, t);
    let mismatches = shape_mismatches(&observed, &predictions);

    ConformanceRecord::new(
        NAME,
        inputs,
        json!({
            "strictly_unimodal": true,
            "balanced": true,
            "claims": predictions,
        }),
        json!({
            "q_shape": q_shape,
            "product": product,
            "shape": observed,
            "mismatches": mismatches,
        }),
        Verdict::from_holds(mismatches.is_empty()),
    )
}

/// One instance of a difference bound `lhs >= rhs`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiffInequality {
    pub part: u8,
    pub k: usize,
    /// `None` for the lone-term bound.
    pub j: Option<isize>,
    #[serde(with = "bigint_string")]
    pub lhs: BigInt,
    #[serde(with = "bigint_string")]
    pub rhs: BigInt,
    pub holds: bool,
}

impl DiffInequality {
    fn new(part: u8, k: usize, j: Option<isize>, lhs: &BigInt, rhs: BigInt) -> Self {
        DiffInequality {
            part,
            k,
            j,
            holds: *lhs >= rhs,
            lhs: lhs.clone(),
            rhs,
        }
    }
}

/// Lower bounds on consecutive differences of `(1+x)^t q` in terms of those of `q`.
///
/// With `nu` the observed mode of the product:
/// part 1, `k` in `[mu+1, nu-1]`:
/// `beta_{k+1} - beta_k >= b_{k+1} - b_{k+2}` and, for `j` in `[k-ceil(t/2)+1, k]`,
/// `>= (C(t,k-j+1) - C(t,k-j)) (b_j - b_{j+1})`;
/// part 2, `k` in `[nu, deg q - 1]`:
/// `beta_k - beta_{k+1} >= b_k - b_{k+1}` and, for `j` in `[k-floor(t/2), k-1]`,
/// `>= (C(t,k-j) - C(t,k-j-1)) (b_j - b_{j+1})`.
pub fn check_diff_bounds(q: &Polynomial, t: usize) -> ConformanceRecord {
    const NAME: &str = "diff-bounds";
    let inputs = json!({ "q": q, "t": t });
    let q_shape = match lemma_hypotheses(q, t) {
        Ok(s) => s,
        Err(reason) => return ConformanceRecord::hypothesis_not_met(NAME, inputs, reason, json!({})),
    };
    let mu = q_shape.modes[0];
    let d = q.degree();
    let product = q.mul_binomial_power(t);
    let product_shape = analyze_shape(&product).expect("product of a counting sequence with (1+x)^t");
    let nu = product_shape.modes[0];
    let nu_candidates = [mu + t / 2, mu + t.div_ceil(2)];
    let nu_in_predicted = product_shape.modes.len() == 1 && nu_candidates.contains(&nu);

    let row = binomial_row(t);
    let c = |i: isize| binomial_at(&row, i);
    let b = |i: isize| q.coeff(i);
    let beta = |i: isize| product.coeff(i);
    let drop = |j: isize| b(j) - b(j + 1);
    let (half_up, half_down) = (t.div_ceil(2) as isize, (t / 2) as isize);

    let mut inequalities = Vec::new();
    for k in (mu + 1)..nu {
        let ki = k as isize;
        let lhs = beta(ki + 1) - beta(ki);
        inequalities.push(DiffInequality::new(1, k, None, &lhs, b(ki + 1) - b(ki + 2)));
        for j in (ki - half_up + 1)..=ki {
            let rhs = (c(ki - j + 1) - c(ki - j)) * drop(j);
            inequalities.push(DiffInequality::new(1, k, Some(j), &lhs, rhs));
        }
    }
    for k in nu..d {
        let ki = k as isize;
        let lhs = beta(ki) - beta(ki + 1);
        inequalities.push(DiffInequality::new(2, k, None, &lhs, b(ki) - b(ki + 1)));
        for j in (ki - half_down)..ki {
            let rhs = (c(ki - j) - c(ki - j - 1)) * drop(j);
            inequalities.push(DiffInequality::new(2, k, Some(j), &lhs, rhs));
        }
    }
    let failures = inequalities.iter().filter(|i| !i.holds).count();

    ConformanceRecord::new(
        NAME,
        inputs,
        json!({
            "all_hold": true,
            "nu_candidates": nu_candidates,
        }),
        json!({
            "product": product,
            "mu": mu,
            "nu": nu,
            "nu_unique": product_shape.modes.len() == 1,
            "nu_in_predicted": nu_in_predicted,
            "inequalities": inequalities,
            "failures": failures,
        }),
        Verdict::from_holds(failures == 0),
    )
}

/// The remark that a symmetric unimodal even-degree multiplier behaves like
/// `(1+x)^t`, and that symmetric unimodal times symmetric unimodal stays so.
pub fn check_symmetric_multiplier(q: &Polynomial, p_sym: &Polynomial) -> ConformanceRecord {
    const NAME: &str = "symmetric-multiplier";
    let inputs = json!({ "q": q, "p_sym": p_sym });
    let sym_shape = match analyze_shape(p_sym) {
        Ok(s) => s,
        Err(e) => return ConformanceRecord::hypothesis_not_met(NAME, inputs, e.to_string(), json!({})),
    };
    if !(sym_shape.symmetric && sym_shape.unimodal && sym_shape.degree % 2 == 0) {
        let reason = "multiplier must be symmetric, unimodal and of even degree".to_string();
        return ConformanceRecord::hypothesis_not_met(NAME, inputs, reason, json!({ "p_sym_shape": sym_shape }));
    }
    let q_shape = match analyze_shape(q) {
        Ok(s) => s,
        Err(e) => return ConformanceRecord::hypothesis_not_met(NAME, inputs, e.to_string(), json!({})),
    };
    let t = sym_shape.degree;
    // The lemma analogue reads `t` as the multiplier's degree.
    let lemma_claim = match t {
        0 => lemma_hypotheses(q, 1).ok(),
        _ => lemma_hypotheses(q, t).ok(),
    };
    let symmetric_claim = q_shape.symmetric && q_shape.unimodal;
    if lemma_claim.is_none() && !symmetric_claim {
        let reason = "q is neither balanced strictly unimodal dominant (with deg p_sym <= mode) nor symmetric unimodal"
            .to_string();
        return ConformanceRecord::hypothesis_not_met(NAME, inputs, reason, json!({ "q_shape": q_shape }));
    }

    let product = q * p_sym;
    let observed = analyze_shape(&product).expect("product of counting sequences");
    let mut mismatches = Vec::new();
    let mut predicted = serde_json::Map::new();
    if let Some(shape) = &lemma_claim {
        let predictions = shift_predictions(shape, t);
        mismatches.extend(shape_mismatches(&observed, &predictions));
        predicted.insert("lemma_claims".into(), json!(predictions));
    }
    if symmetric_claim {
        if !observed.symmetric {
            mismatches.push("product is not symmetric".into());
        }
        if !observed.unimodal {
            mismatches.push("product is not unimodal".into());
        }
        predicted.insert("symmetric_unimodal".into(), json!(true));
    }

    ConformanceRecord::new(
        NAME,
        inputs,
        predicted.into(),
        json!({
            "product": product,
            "shape": observed,
            "mismatches": mismatches,
        }),
        Verdict::from_holds(mismatches.is_empty()),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: &[i64]) -> Polynomial {
        Polynomial::from_coeffs(c.iter().copied())
    }

    #[test]
    fn shift_even_keeps_side() {
        let r = check_shift_lemma(&p(&[1, 6, 7, 4, 1]), 2);
        assert_eq!(r.verdict, Verdict::Conform);
        assert_eq!(
            r.observed_as::<Polynomial>("product").unwrap(),
            p(&[1, 8, 20, 24, 16, 6, 1])
        );
        let shape: ShapeReport = r.observed_as("shape").unwrap();
        assert_eq!(shape.mode(), Some(3));
        assert!(shape.has(Dominance::StrictLd));
    }

    #[test]
    fn shift_odd_swaps_side() {
        let r = check_shift_lemma(&p(&[1, 3, 2]), 1);
        assert_eq!(r.verdict, Verdict::Conform);
        let shape: ShapeReport = r.observed_as("shape").unwrap();
        assert_eq!(shape.mode(), Some(2));
        assert!(shape.has(Dominance::StrictLd));
    }

    #[test]
    fn shift_symmetric_boundary_case_is_nonconform() {
        let r = check_shift_lemma(&p(&[1, 3, 1]), 1);
        assert_eq!(r.verdict, Verdict::Nonconform);
        let shape: ShapeReport = r.observed_as("shape").unwrap();
        assert_eq!(shape.modes, vec![1, 2]);
    }

    #[test]
    fn shift_hypotheses() {
        // t > mu
        assert_eq!(
            check_shift_lemma(&p(&[1, 6, 7, 4, 1]), 3).verdict,
            Verdict::HypothesisNotMet
        );
        assert_eq!(
            check_shift_lemma(&p(&[1, 6, 7, 4, 1]), 0).verdict,
            Verdict::HypothesisNotMet
        );
        // tied modes
        assert_eq!(
            check_shift_lemma(&p(&[1, 4, 4, 1]), 1).verdict,
            Verdict::HypothesisNotMet
        );
        // unbalanced
        assert_eq!(
            check_shift_lemma(&p(&[3, 5, 2, 1]), 1).verdict,
            Verdict::HypothesisNotMet
        );
        assert_eq!(check_shift_lemma(&p(&[1, -1, 1]), 1).verdict, Verdict::HypothesisNotMet);
    }

    fn find(r: &ConformanceRecord, part: u8, k: usize, j: Option<isize>) -> DiffInequality {
        let all: Vec<DiffInequality> = r.observed_as("inequalities").unwrap();
        all.into_iter()
            .find(|i| i.part == part && i.k == k && i.j == j)
            .expect("inequality present")
    }

    #[test]
    fn diff_bounds_part_two_fixture() {
        let r = check_diff_bounds(&p(&[1, 6, 7, 4, 1]), 2);
        assert_eq!(r.verdict, Verdict::Conform);
        let lone = find(&r, 2, 3, None);
        assert_eq!((lone.lhs, lone.rhs), (BigInt::from(8), BigInt::from(3)));
        let j2 = find(&r, 2, 3, Some(2));
        assert_eq!(j2.rhs, BigInt::from(3));
    }

    #[test]
    fn diff_bounds_part_one_fixture() {
        let q = p(&[1, 11, 41, 94, 136, 131, 85, 36, 9, 1]);
        let r = check_diff_bounds(&q, 3);
        assert_eq!(r.verdict, Verdict::Conform);
        let lone = find(&r, 1, 5, None);
        assert_eq!((lone.lhs, lone.rhs), (BigInt::from(118), BigInt::from(49)));
    }

    #[test]
    fn diff_bounds_vacuous() {
        let r = check_diff_bounds(&p(&[1, 3, 2]), 1);
        assert_eq!(r.verdict, Verdict::Conform);
        let all: Vec<DiffInequality> = r.observed_as("inequalities").unwrap();
        assert!(all.is_empty());
    }

    #[test]
    fn diff_bounds_counterexample() {
        // beta_2 - beta_3 = 59 - 51 = 8, below b_2 - b_3 = 15.
        let r = check_diff_bounds(&p(&[10, 26, 33, 18, 2]), 1);
        assert_eq!(r.verdict, Verdict::Nonconform);
        let lone = find(&r, 2, 2, None);
        assert_eq!(
            (lone.lhs, lone.rhs, lone.holds),
            (BigInt::from(8), BigInt::from(15), false)
        );
    }

    #[test]
    fn symmetric_multiplier_examples() {
        let r = check_symmetric_multiplier(&p(&[1, 3, 1]), &p(&[1, 2, 1]));
        assert_eq!(r.verdict, Verdict::Conform);
        assert_eq!(r.observed_as::<Polynomial>("product").unwrap(), p(&[1, 5, 8, 5, 1]));

        let r = check_symmetric_multiplier(&p(&[1, 6, 7, 4, 1]), &p(&[1, 1, 1]));
        assert_eq!(r.verdict, Verdict::Conform);
        let shape: ShapeReport = r.observed_as("shape").unwrap();
        assert_eq!(shape.mode(), Some(3));

        let r = check_symmetric_multiplier(&p(&[1, 6, 7, 4, 1]), &p(&[1]));
        assert_eq!(r.verdict, Verdict::Conform);
    }

    #[test]
    fn symmetric_multiplier_hypotheses() {
        let odd = check_symmetric_multiplier(&p(&[1, 6, 7, 4, 1]), &p(&[1, 1]));
        assert_eq!(odd.verdict, Verdict::HypothesisNotMet);
        let asym = check_symmetric_multiplier(&p(&[1, 6, 7, 4, 1]), &p(&[1, 2, 3]));
        assert_eq!(asym.verdict, Verdict::HypothesisNotMet);
        let bad_q = check_symmetric_multiplier(&p(&[1, 2, 1, 2]), &p(&[1, 2, 1]));
        assert_eq!(bad_q.verdict, Verdict::HypothesisNotMet);
    }
}
