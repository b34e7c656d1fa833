//! Closed-form machinery for caterpillar independence polynomials.
//!
//! `p_n = I(T(m, n))` obeys
//!
//! ```text
//! p_1 = (1+x)^{m_1} + x
//! p_2 = (1+x)^{m_1+m_2} + x((1+x)^{m_1} + (1+x)^{m_2})
//! p_n = (1+x)^{m_n} p_{n-1} + x (1+x)^{m_{n-1}} p_{n-2}
//! ```
//!
//! for any `m`. When `m` is non-decreasing, `p_n = (1+x)^{k_n} q_n` with
//! `k_n` alternating partial sums of `m` and `q_n` given by its own recursion.

use std::collections::BTreeMap;
use std::ops::RangeInclusive;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::polyalg::Polynomial;
use crate::shape::{analyze_shape, ShapeReport};
use crate::treegraph::CaterpillarSpec;

/// The p-recursion; valid for every `m`.
pub fn p_sequence(m: &[usize]) -> Vec<Polynomial> {
    let x = Polynomial::x();
    let mut p: Vec<Polynomial> = Vec::with_capacity(m.len());
    for n in 1..=m.len() {
        let next = match n {
            1 => &Polynomial::binomial_power(m[0]) + &x,
            2 => {
                let tail = &Polynomial::binomial_power(m[0]) + &Polynomial::binomial_power(m[1]);
                &Polynomial::binomial_power(m[0] + m[1]) + &tail.shift(1)
            }
            _ => {
                let a = p[n - 2].mul_binomial_power(m[n - 1]);
                let b = p[n - 3].mul_binomial_power(m[n - 2]).shift(1);
                &a + &b
            }
        };
        p.push(next);
    }
    p
}

/// Sum of `m_i` over `i` in `first, first+2, ..., <= last` (1-based).
fn alternating_sum(m: &[usize], first: usize, last: usize) -> usize {
    (first..=last).step_by(2).map(|i| m[i - 1]).sum()
}

/// `k_1 = 0`, `k_n = m_1 + m_3 + ... + m_{n-1}` (n even) or
/// `m_2 + m_4 + ... + m_{n-1}` (n odd), for `n` up to `len`.
pub fn closed_k(m: &[usize], len: usize) -> Vec<usize> {
    (1..=len)
        .map(|n| match n {
            1 => 0,
            _ if n % 2 == 0 => alternating_sum(m, 1, n - 1),
            _ => alternating_sum(m, 2, n - 1),
        })
        .collect()
}

/// `k_1 = 0`, `k_2 = min(m_1, m_2)`, `k_n = min(k_{n-1} + m_n, k_{n-2} + m_{n-1})`.
pub fn k_exponent_min_recurrence(m: &[usize]) -> Vec<usize> {
    let mut k: Vec<usize> = Vec::with_capacity(m.len());
    for n in 1..=m.len() {
        let next = match n {
            1 => 0,
            2 => m[0].min(m[1]),
            _ => (k[n - 2] + m[n - 1]).min(k[n - 3] + m[n - 2]),
        };
        k.push(next);
    }
    k
}

/// The cofactor side of a non-decreasing sequence.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QSequence {
    pub k: Vec<usize>,
    pub q: Vec<Polynomial>,
    /// Entry `n-1` is `t = k_{n+1} - k_n`, the `(1+x)` exponent that builds `q_{n+1}`.
    pub t_steps: Vec<usize>,
    /// Entry `n-1` is `t' = k_n - k_{n-1}` (with `k_0 = 0`).
    pub tprime_steps: Vec<usize>,
}

impl QSequence {
    /// `t` at recursion step `n` (1-based).
    pub fn t(&self, n: usize) -> usize {
        self.t_steps[n - 1]
    }

    pub fn tprime(&self, n: usize) -> usize {
        self.tprime_steps[n - 1]
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CaterpillarPolySequence {
    pub spec: CaterpillarSpec,
    pub p: Vec<Polynomial>,
    /// Present only when `m` is non-decreasing.
    pub closed_form: Option<QSequence>,
}

impl CaterpillarPolySequence {
    pub fn p_n(&self) -> &Polynomial {
        self.p.last().expect("spine length is at least 1")
    }
}

fn q_sequence(m: &[usize]) -> QSequence {
    let n = m.len();
    // One extra k so t at the last step is available.
    let k_ext = {
        let mut k = closed_k(m, n);
        if n >= 1 {
            let next = if n == 1 { m[0] } else { k[n - 2] + m[n - 1] };
            k.push(next);
        }
        k
    };
    let t_steps: Vec<usize> = (0..n).map(|i| k_ext[i + 1] - k_ext[i]).collect();
    let tprime_steps: Vec<usize> = (0..n)
        .map(|i| if i == 0 { 0 } else { k_ext[i] - k_ext[i - 1] })
        .collect();

    let x = Polynomial::x();
    let mut q: Vec<Polynomial> = Vec::with_capacity(n);
    for j in 1..=n {
        let next = match j {
            1 => &Polynomial::binomial_power(m[0]) + &x,
            2 => {
                let mid = Polynomial::binomial_power(m[1] - m[0]).shift(1);
                &(&Polynomial::binomial_power(m[1]) + &mid) + &x
            }
            _ => &q[j - 2].mul_binomial_power(t_steps[j - 1]) + &q[j - 3].shift(1),
        };
        q.push(next);
    }
    QSequence {
        k: k_ext[..n].to_vec(),
        q,
        t_steps,
        tprime_steps,
    }
}

/// Builds `p_1..p_n`, and for non-decreasing `m` also `k`, `q` and the proof's
/// `t`/`t'` steps, cross-checked against exact `(1+x)` factoring of each `p_j`.
pub fn caterpillar_polys(spec: &CaterpillarSpec) -> Result<CaterpillarPolySequence> {
    let m = spec.m();
    let p = p_sequence(m);
    let closed_form = if spec.is_non_decreasing() {
        let qs = q_sequence(m);
        for (j, pj) in p.iter().enumerate() {
            let (found_k, found_q) = pj.remove_binomial_factor()?;
            if found_k != qs.k[j] || found_q != qs.q[j] {
                return Err(Error::Integrity {
                    n: j + 1,
                    expected_k: qs.k[j],
                    found_k,
                    expected_q: qs.q[j].clone(),
                    found_q,
                });
            }
        }
        Some(qs)
    } else {
        None
    };
    Ok(CaterpillarPolySequence {
        spec: spec.clone(),
        p,
        closed_form,
    })
}

/// Both sides of one condition-(3) inequality, `lhs < rhs`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Cond3Entry {
    pub lhs: usize,
    pub rhs: usize,
    pub holds: bool,
}

/// The simpler per-index test `m_k <= (alternating sum below k)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SufficientEntry {
    pub m_k: usize,
    pub bound: usize,
    pub holds: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConditionReport {
    pub cond1_nondecreasing: bool,
    pub cond2_base: bool,
    pub cond3_range: Option<[usize; 2]>,
    pub cond3_results: BTreeMap<usize, Cond3Entry>,
    pub sufficient_variant: BTreeMap<usize, SufficientEntry>,
    /// Indices where the sufficient test and condition (3) disagree.
    pub sufficient_discrepancies: Vec<usize>,
    pub all_pass: bool,
}

/// Default condition-(3) range `[3, n]`.
pub fn default_cond3_range(n: usize) -> RangeInclusive<usize> {
    3..=n
}

/// Conditions (1)-(3) of the unimodality theorem, with condition (3) checked
/// for `k` in `cond3_range` clipped to `[1, n]`.
pub fn check_conditions(spec: &CaterpillarSpec, cond3_range: RangeInclusive<usize>) -> ConditionReport {
    let m = spec.m();
    let n = spec.n();
    let at = |i: usize| m.get(i - 1).copied();

    let cond1_nondecreasing = spec.is_non_decreasing();
    let lt = |a: Option<usize>, b: Option<usize>| match (a, b) {
        (Some(a), Some(b)) => a < b,
        _ => true,
    };
    let cond2_base = m[0] >= 3 && lt(at(1), at(2)) && lt(at(3), at(4));

    let lo = (*cond3_range.start()).max(1);
    let hi = (*cond3_range.end()).min(n);
    let mut cond3_results = BTreeMap::new();
    let mut sufficient_variant = BTreeMap::new();
    for k in lo..=hi {
        let (same, other) = if k % 2 == 1 {
            (alternating_sum(m, 1, k), alternating_sum(m, 2, k - 1))
        } else {
            (alternating_sum(m, 2, k), alternating_sum(m, 1, k - 1))
        };
        let (lhs, rhs) = (2 * same, 3 * other);
        cond3_results.insert(
            k,
            Cond3Entry {
                lhs,
                rhs,
                holds: lhs < rhs,
            },
        );
        let m_k = m[k - 1];
        sufficient_variant.insert(
            k,
            SufficientEntry {
                m_k,
                bound: other,
                holds: m_k <= other,
            },
        );
    }
    let sufficient_discrepancies = cond3_results
        .iter()
        .filter(|(k, e)| sufficient_variant[k].holds != e.holds)
        .map(|(k, _)| *k)
        .collect();
    let all_pass = cond1_nondecreasing && cond2_base && cond3_results.values().all(|e| e.holds);

    ConditionReport {
        cond1_nondecreasing,
        cond2_base,
        cond3_range: (lo <= hi).then_some([lo, hi]),
        cond3_results,
        sufficient_variant,
        sufficient_discrepancies,
        all_pass,
    }
}

/// Whether `t <= mu(q_{n-1})` at recursion step `n >= 3`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TStep {
    pub n: usize,
    pub t: usize,
    /// Modes of `q_{n-1}`; the test needs a unique one.
    pub prev_modes: Vec<usize>,
    pub holds: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TheoremPrediction {
    pub d: usize,
    pub mode_set: Vec<usize>,
    pub t_hypothesis: Vec<TStep>,
}

impl TheoremPrediction {
    pub fn t_hypothesis_ok(&self) -> Vec<bool> {
        self.t_hypothesis.iter().map(|s| s.holds).collect()
    }
}

/// Predicted degree and mode set `{floor(d/2), ceil(d/2)}` of `p_n`, plus the
/// `t <= mu'` flags measured on the actual `q` sequence.
pub fn predict_theorem(spec: &CaterpillarSpec) -> Result<TheoremPrediction> {
    let seq = caterpillar_polys(spec)?;
    predict_from(&seq)
}

pub fn predict_from(seq: &CaterpillarPolySequence) -> Result<TheoremPrediction> {
    let qs = seq
        .closed_form
        .as_ref()
        .ok_or_else(|| Error::NotMonotone(seq.spec.m().to_vec()))?;
    let d = seq.spec.leaf_count();
    let mut mode_set = vec![d / 2, d.div_ceil(2)];
    mode_set.dedup();
    let mut t_hypothesis = Vec::new();
    for n in 3..=seq.spec.n() {
        let t = qs.t(n);
        let prev_modes = analyze_shape(&qs.q[n - 2])?.modes;
        let holds = prev_modes.len() == 1 && t <= prev_modes[0];
        t_hypothesis.push(TStep {
            n,
            t,
            prev_modes,
            holds,
        });
    }
    Ok(TheoremPrediction {
        d,
        mode_set,
        t_hypothesis,
    })
}

/// Everything computed for one caterpillar: `k_j` and `q_j` by exact factoring
/// of each `p_j`, the shape of `p_n`, the hypothesis report, and the theorem's
/// prediction when `m` is non-decreasing.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InstanceReport {
    pub spec: CaterpillarSpec,
    pub k: Vec<usize>,
    pub p: Vec<Polynomial>,
    pub q: Vec<Polynomial>,
    pub p_shape: ShapeReport,
    pub conditions: ConditionReport,
    pub prediction: Option<TheoremPrediction>,
}

pub fn instance_report(spec: &CaterpillarSpec, cond3_range: RangeInclusive<usize>) -> Result<InstanceReport> {
    let p = p_sequence(spec.m());
    let (k, q) = p
        .iter()
        .map(Polynomial::remove_binomial_factor)
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .unzip();
    let p_shape = analyze_shape(p.last().expect("spine length is at least 1"))?;
    let prediction = if spec.is_non_decreasing() {
        Some(predict_theorem(spec)?)
    } else {
        None
    };
    Ok(InstanceReport {
        spec: spec.clone(),
        k,
        p,
        q,
        p_shape,
        conditions: check_conditions(spec, cond3_range),
        prediction,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: &[i64]) -> Polynomial {
        Polynomial::from_coeffs(c.iter().copied())
    }

    fn spec(m: &[usize]) -> CaterpillarSpec {
        CaterpillarSpec::new(m.to_vec()).unwrap()
    }

    #[test]
    fn single_spine_vertex() {
        let s = caterpillar_polys(&spec(&[3])).unwrap();
        assert_eq!(s.p, vec![p(&[1, 4, 3, 1])]);
        let qs = s.closed_form.unwrap();
        assert_eq!(qs.k, vec![0]);
        assert_eq!(qs.q, vec![p(&[1, 4, 3, 1])]);
    }

    #[test]
    fn two_spine_vertices() {
        let s = caterpillar_polys(&spec(&[3, 4])).unwrap();
        assert_eq!(s.p[1], p(&[1, 9, 28, 44, 40, 22, 7, 1]));
        let qs = s.closed_form.unwrap();
        assert_eq!(qs.k, vec![0, 3]);
        assert_eq!(qs.q[1], p(&[1, 6, 7, 4, 1]));
    }

    #[test]
    fn theorem_showcase_degrees() {
        let s = caterpillar_polys(&spec(&[4, 9, 9, 10])).unwrap();
        assert_eq!(s.p_n().degree(), 32);
        let qs = s.closed_form.unwrap();
        assert_eq!(qs.k[3], 13);
        assert_eq!(qs.q[3].degree(), 19);
        assert_eq!(qs.t_steps, vec![4, 5, 4, 6]);
        assert_eq!(qs.tprime_steps, vec![0, 4, 5, 4]);
    }

    #[test]
    fn non_monotone_withholds_q() {
        let s = caterpillar_polys(&spec(&[5, 3])).unwrap();
        assert!(s.closed_form.is_none());
        assert_eq!(s.p[1].remove_binomial_factor().unwrap().0, 3);
        assert!(matches!(predict_theorem(&spec(&[5, 3])), Err(Error::NotMonotone(_))));
    }

    #[test]
    fn equal_neighbours_are_non_decreasing() {
        let s = caterpillar_polys(&spec(&[2, 2, 2, 2, 2])).unwrap();
        assert_eq!(s.closed_form.unwrap().k, vec![0, 2, 2, 4, 4]);
    }

    #[test]
    fn min_recurrence_examples() {
        assert_eq!(k_exponent_min_recurrence(&[3, 4, 5]), vec![0, 3, 4]);
        assert_eq!(closed_k(&[3, 4, 5], 3)[2], 4);
        assert_eq!(k_exponent_min_recurrence(&[5, 3]), vec![0, 3]);
        assert_eq!(k_exponent_min_recurrence(&[2, 5, 2]), vec![0, 2, 4]);
        let p3 = &p_sequence(&[2, 5, 2])[2];
        assert_eq!(p3.remove_binomial_factor().unwrap().0, 4);
    }

    #[test]
    fn conditions_showcase() {
        let r = check_conditions(&spec(&[4, 9, 9, 10]), default_cond3_range(4));
        assert!(r.cond1_nondecreasing && r.cond2_base && r.all_pass);
        assert_eq!(r.cond3_range, Some([3, 4]));
        assert_eq!(
            r.cond3_results[&3],
            Cond3Entry {
                lhs: 26,
                rhs: 27,
                holds: true
            }
        );
        assert_eq!(
            r.cond3_results[&4],
            Cond3Entry {
                lhs: 38,
                rhs: 39,
                holds: true
            }
        );
    }

    #[test]
    fn conditions_cond3_failure() {
        let r = check_conditions(&spec(&[3, 4, 5]), default_cond3_range(3));
        assert_eq!(
            r.cond3_results[&3],
            Cond3Entry {
                lhs: 16,
                rhs: 12,
                holds: false
            }
        );
        assert!(!r.all_pass);
        // m_3 = 5 > m_2 = 4: the sufficient test fails too.
        assert!(!r.sufficient_variant[&3].holds);
        assert!(r.sufficient_discrepancies.is_empty());
    }

    #[test]
    fn conditions_cond2_failure() {
        let r = check_conditions(&spec(&[3, 3]), default_cond3_range(2));
        assert!(!r.cond2_base);
        assert!(r.cond1_nondecreasing);
        assert_eq!(r.cond3_range, None);
        assert!(!r.all_pass);
    }

    #[test]
    fn literal_range_including_two_is_unsatisfiable_here() {
        let r = check_conditions(&spec(&[4, 9, 9, 10]), 2..=4);
        assert_eq!(
            r.cond3_results[&2],
            Cond3Entry {
                lhs: 18,
                rhs: 12,
                holds: false
            }
        );
        assert!(!r.all_pass);
    }

    #[test]
    fn sufficient_variant_can_disagree() {
        let r = check_conditions(&spec(&[4, 9, 9, 10]), default_cond3_range(4));
        assert!(r.sufficient_variant.values().all(|e| e.holds));
        assert!(r.sufficient_discrepancies.is_empty());

        // m_3 = 5 <= m_2 = 5, but 2 * (4 + 5) = 18 is not below 3 * 5 = 15.
        let r = check_conditions(&spec(&[4, 5, 5]), default_cond3_range(3));
        assert!(r.sufficient_variant[&3].holds);
        assert!(!r.cond3_results[&3].holds);
        assert_eq!(r.sufficient_discrepancies, vec![3]);
    }

    #[test]
    fn prediction_examples() {
        let pr = predict_theorem(&spec(&[4, 9, 9, 10])).unwrap();
        assert_eq!((pr.d, pr.mode_set.clone()), (32, vec![16]));
        assert_eq!(pr.t_hypothesis_ok(), vec![true, true]);

        let pr = predict_theorem(&spec(&[3, 4])).unwrap();
        assert_eq!((pr.d, pr.mode_set), (7, vec![3, 4]));
        assert!(pr.t_hypothesis.is_empty());

        let pr = predict_theorem(&spec(&[3])).unwrap();
        assert_eq!((pr.d, pr.mode_set), (3, vec![1, 2]));
    }

    #[test]
    fn instance_report_factors_every_prefix() {
        let r = instance_report(&spec(&[3, 4]), default_cond3_range(2)).unwrap();
        assert_eq!(r.k, vec![0, 3]);
        assert_eq!(r.q[1], p(&[1, 6, 7, 4, 1]));
        assert_eq!(r.p_shape.modes, vec![3]);
        assert!(r.prediction.is_some());

        let r = instance_report(&spec(&[1, 3, 2]), default_cond3_range(3)).unwrap();
        assert_eq!(r.k, vec![0, 1, 4]);
        assert!(r.prediction.is_none());
        assert!(!r.conditions.all_pass);
    }
}
