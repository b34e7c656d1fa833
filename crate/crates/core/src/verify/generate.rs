use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::polyalg::Polynomial;
use crate::shape::{analyze_shape, Dominance, Side};

/// Positions visited from the mode outwards, alternating sides starting with
/// `first`; once a side runs out the other continues alone.
fn interleaving(mu: usize, d: usize, first: Side) -> Vec<usize> {
    let mut order = vec![mu];
    let mut left = (0..mu).rev();
    let mut right = mu + 1..=d;
    loop {
        let (a, b) = match first {
            Side::Left => (left.next(), right.next()),
            Side::Right => (right.next(), left.next()),
        };
        if a.is_none() && b.is_none() {
            break;
        }
        order.extend(a);
        order.extend(b);
    }
    order
}

/// Deterministically builds a strictly unimodal polynomial of degree `degree`
/// in dominance class `class`, balanced or not as requested.
///
/// A decreasing positive chain is written into the class's interleaving order
/// (`b_mu, b_{mu-1}, b_{mu+1}, ...` for LD). Weak classes get at least one
/// tie between mirror-image terms when the window allows it.
pub fn gen_dominant_poly(seed: u64, class: Dominance, degree: usize, balanced: bool) -> Result<Polynomial> {
    if degree < 2 {
        return Err(Error::Parameter(format!("degree {degree} is below 2")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let side = class.side();
    let balanced_mu = match side {
        Side::Left => degree.div_ceil(2),
        Side::Right => degree / 2,
    };
    let mu = if balanced {
        balanced_mu
    } else {
        let choices: Vec<usize> = (0..=degree).filter(|&m| m != balanced_mu).collect();
        *choices.choose(&mut rng).expect("degree >= 2 leaves other modes")
    };

    let order = interleaving(mu, degree, side);
    let opposite = |i: usize| (order[i] < mu) != (order[i + 1] < mu);
    let span = mu.min(degree - mu);
    // Ties are kept off the first mirror pair so the opposite class stays false,
    // and off the last one, whose comparison is `>=` in every class.
    let tie_ok = |i: usize| i >= 2 && i + 1 < 2 * span && opposite(i);
    let forced = if class.is_strict() {
        None
    } else {
        let eligible: Vec<usize> = (0..degree).filter(|&i| tie_ok(i)).collect();
        eligible.choose(&mut rng).copied()
    };

    let step_max: u64 = *[1u64, 3, 10, 1000].choose(&mut rng).expect("non-empty");
    let mut drops = vec![0u64; degree];
    for i in 0..degree {
        let prev_zero = i > 0 && drops[i - 1] == 0;
        let zero = !class.is_strict()
            && tie_ok(i)
            && !prev_zero
            && forced != Some(i + 1)
            && (forced == Some(i) || rng.gen_bool(0.25));
        drops[i] = if zero { 0 } else { rng.gen_range(1..=step_max) };
    }

    let mut coeffs = vec![0u64; degree + 1];
    let mut value = rng.gen_range(1..=step_max);
    coeffs[order[degree]] = value;
    for i in (0..degree).rev() {
        value += drops[i];
        coeffs[order[i]] = value;
    }
    let poly = Polynomial::from_coeffs(coeffs);

    let shape = analyze_shape(&poly)?;
    if !(shape.strictly_unimodal && shape.has(class) && shape.is_balanced() == balanced) {
        return Err(Error::Parameter(format!(
            "generated {poly} does not certify as {class} (balanced = {balanced})"
        )));
    }
    Ok(poly)
}
