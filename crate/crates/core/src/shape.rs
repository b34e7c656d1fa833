//! Ordering properties of a nonnegative coefficient sequence: modes,
//! (strict) unimodality, left/right dominance, balance and symmetry.
//!
//! Dominance uses a pairwise window around the unique mode `mu`. With
//! `S = min(mu, d - mu)`, left dominance asks for
//!
//! ```text
//! b[mu-s] > b[mu+s] > b[mu-s-1]   for 1 <= s <= S-1
//! b[mu-S] >= b[mu+S]
//! ```
//!
//! and right dominance mirrors it. The weak variants replace every `>` above
//! with `>=`. Coefficients outside `[mu-S, mu+S]` are only constrained by
//! unimodality. When `S = 0` both sides hold vacuously.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::Signed;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::polyalg::Polynomial;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Side {
    Left,
    Right,
}

impl Side {
    pub fn opposite(self) -> Side {
        match self {
            Side::Left => Side::Right,
            Side::Right => Side::Left,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Dominance {
    #[serde(rename = "strict-LD")]
    StrictLd,
    #[serde(rename = "weak-LD")]
    WeakLd,
    #[serde(rename = "strict-RD")]
    StrictRd,
    #[serde(rename = "weak-RD")]
    WeakRd,
}

impl Dominance {
    pub const ALL: [Dominance; 4] = [
        Dominance::StrictLd,
        Dominance::WeakLd,
        Dominance::StrictRd,
        Dominance::WeakRd,
    ];

    pub fn new(side: Side, strict: bool) -> Self {
        match (side, strict) {
            (Side::Left, true) => Dominance::StrictLd,
            (Side::Left, false) => Dominance::WeakLd,
            (Side::Right, true) => Dominance::StrictRd,
            (Side::Right, false) => Dominance::WeakRd,
        }
    }

    pub fn side(self) -> Side {
        match self {
            Dominance::StrictLd | Dominance::WeakLd => Side::Left,
            Dominance::StrictRd | Dominance::WeakRd => Side::Right,
        }
    }

    pub fn is_strict(self) -> bool {
        matches!(self, Dominance::StrictLd | Dominance::StrictRd)
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Dominance::StrictLd => "strict-LD",
            Dominance::WeakLd => "weak-LD",
            Dominance::StrictRd => "strict-RD",
            Dominance::WeakRd => "weak-RD",
        }
    }
}

impl fmt::Display for Dominance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Dominance {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Dominance::ALL
            .into_iter()
            .find(|d| d.as_str().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::Parameter(format!("unknown dominance class {s:?}")))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ShapeReport {
    pub degree: usize,
    pub modes: Vec<usize>,
    pub unimodal: bool,
    pub strictly_unimodal: bool,
    /// Sorted; empty unless strictly unimodal.
    pub dominance: Vec<Dominance>,
    /// `None` when not strictly unimodal or no dominance class holds.
    pub balanced: Option<bool>,
    pub symmetric: bool,
}

impl ShapeReport {
    /// The unique mode, when strictly unimodal.
    pub fn mode(&self) -> Option<usize> {
        self.strictly_unimodal.then(|| self.modes[0])
    }

    pub fn has(&self, class: Dominance) -> bool {
        self.dominance.contains(&class)
    }

    pub fn is_balanced(&self) -> bool {
        self.balanced == Some(true)
    }

    /// Sides on which at least weak dominance holds.
    pub fn weak_sides(&self) -> Vec<Side> {
        [Side::Left, Side::Right]
            .into_iter()
            .filter(|&s| self.has(Dominance::new(s, false)))
            .collect()
    }
}

fn check_counting_sequence(p: &Polynomial) -> Result<()> {
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    match p.coeffs().iter().position(Signed::is_negative) {
        Some(index) => Err(Error::NegativeCoefficient { index }),
        None => Ok(()),
    }
}

/// Every index attaining the maximum coefficient.
pub fn modes_of(p: &Polynomial) -> Result<Vec<usize>> {
    check_counting_sequence(p)?;
    Ok(max_indices(p.coeffs()))
}

fn max_indices(b: &[BigInt]) -> Vec<usize> {
    let max = b.iter().max().expect("coefficient vectors are non-empty");
    b.iter()
        .enumerate()
        .filter(|(_, c)| *c == max)
        .map(|(i, _)| i)
        .collect()
}

fn is_unimodal(b: &[BigInt]) -> bool {
    let peak = b.windows(2).take_while(|w| w[0] <= w[1]).count();
    b[peak..].windows(2).all(|w| w[0] >= w[1])
}

fn is_strictly_unimodal_at(b: &[BigInt], mu: usize) -> bool {
    b[..=mu].windows(2).all(|w| w[0] < w[1]) && b[mu..].windows(2).all(|w| w[0] > w[1])
}

/// Evaluates the dominance window on `side`; `strict` selects the strict class.
fn dominates(b: &[BigInt], mu: usize, side: Side, strict: bool) -> bool {
    let d = b.len() - 1;
    let span = mu.min(d - mu);
    // `near(s)` walks from the mode towards the dominating side, `far(s)` the other.
    let near = |s: usize| match side {
        Side::Left => &b[mu - s],
        Side::Right => &b[mu + s],
    };
    let far = |s: usize| match side {
        Side::Left => &b[mu + s],
        Side::Right => &b[mu - s],
    };
    let gt = |x: &BigInt, y: &BigInt| if strict { x > y } else { x >= y };
    (1..span).all(|s| gt(near(s), far(s)) && gt(far(s), near(s + 1))) && near(span) >= far(span)
}

pub fn analyze_shape(p: &Polynomial) -> Result<ShapeReport> {
    check_counting_sequence(p)?;
    let b = p.coeffs();
    let degree = p.degree();
    let modes = max_indices(b);
    let unimodal = is_unimodal(b);
    let strictly_unimodal = modes.len() == 1 && is_strictly_unimodal_at(b, modes[0]);
    let symmetric = b.iter().eq(b.iter().rev());

    let mut dominance = Vec::new();
    let mut balanced = None;
    if strictly_unimodal {
        let mu = modes[0];
        for side in [Side::Left, Side::Right] {
            for strict in [true, false] {
                if dominates(b, mu, side, strict) {
                    dominance.push(Dominance::new(side, strict));
                }
            }
        }
        dominance.sort();
        if !dominance.is_empty() {
            let ld = dominance.contains(&Dominance::WeakLd) && mu == degree.div_ceil(2);
            let rd = dominance.contains(&Dominance::WeakRd) && mu == degree / 2;
            balanced = Some(ld || rd);
        }
    }

    Ok(ShapeReport {
        degree,
        modes,
        unimodal,
        strictly_unimodal,
        dominance,
        balanced,
        symmetric,
    })
}
