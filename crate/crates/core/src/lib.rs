//! Independence polynomials of caterpillar trees.
//!
//! Exact polynomial arithmetic ([`polyalg`]), caterpillar construction with
//! three independent independence-polynomial routes ([`treegraph`]), shape
//! classification of coefficient sequences ([`shape`]), the closed-form
//! `p_n`/`k_n`/`q_n` recursions with theorem hypothesis checks
//! ([`caterpoly`]), and a conformance harness that compares predictions with
//! computed reality ([`verify`]).

pub mod caterpoly;
pub mod error;
pub mod polyalg;
pub mod shape;
pub mod treegraph;
pub mod verify;

pub use caterpoly::{
    caterpillar_polys, check_conditions, default_cond3_range, instance_report, k_exponent_min_recurrence,
    predict_theorem, CaterpillarPolySequence, ConditionReport, InstanceReport, QSequence, TheoremPrediction,
};
pub use error::{Error, Result};
pub use polyalg::Polynomial;
pub use shape::{analyze_shape, modes_of, Dominance, ShapeReport, Side};
pub use treegraph::{
    build_caterpillar, indpoly_bruteforce, indpoly_deletion, indpoly_treedp, CaterpillarSpec, Tree, DEFAULT_CAP,
    MAX_CAP,
};
pub use verify::{ConformanceRecord, Verdict};
