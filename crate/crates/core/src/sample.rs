//! Seeded rational points on presented varieties.
//!
//! Each relation must contain a *pivot*: a variable of degree one that occurs
//! in no other relation. Non-pivot coordinates are drawn at random and each
//! pivot is then solved from its relation. This covers `K`, `A_n`, `B_n` and
//! free rings; rings without pivots (the sphere) are rejected.

use std::sync::Arc;

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::groebner::RingPresentation;
use crate::poly::{ratio, Coeff, Polynomial};

/// Seed used by every sampled check unless overridden.
pub const DEFAULT_SEED: u64 = 0x5EED_0C1B;

fn pivots(pres: &RingPresentation) -> Result<Vec<usize>> {
    let rels = pres.relations();
    let n = pres.ring().nvars();
    let mut chosen = Vec::with_capacity(rels.len());
    for (k, rel) in rels.iter().enumerate() {
        // prefer the last eligible variable: X/Y-style coordinates come late
        let pivot = (0..n).rev().find(|&v| {
            rel.degree_in(v) == 1
                && !chosen.contains(&v)
                && rels.iter().enumerate().all(|(j, other)| j == k || !other.uses_var(v))
        });
        match pivot {
            Some(v) => chosen.push(v),
            None => {
                return Err(Error::Unsupported(format!(
                    "cannot sample points: relation {rel} has no private linear variable"
                )))
            }
        }
    }
    Ok(chosen)
}

fn random_coeff(rng: &mut ChaCha8Rng) -> Coeff {
    let num = rng.gen_range(-6i64..=6);
    let den = if rng.gen_bool(0.25) { rng.gen_range(2i64..=3) } else { 1 };
    ratio(num, den)
}

/// `count` rational points of `Spec` of the presented ring. Points where
/// `avoid` vanishes, or where a pivot coefficient vanishes, are redrawn.
pub fn sample_points(
    pres: &Arc<RingPresentation>,
    count: usize,
    seed: u64,
    avoid: Option<&Polynomial>,
) -> Result<Vec<Vec<Coeff>>> {
    let piv = pivots(pres)?;
    let n = pres.ring().nvars();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut points = Vec::with_capacity(count);
    let mut attempts = 0usize;
    while points.len() < count {
        attempts += 1;
        if attempts > 100 * count + 100 {
            return Err(Error::Unsupported("sampler keeps hitting degenerate points".into()));
        }
        let mut pt: Vec<Coeff> = (0..n).map(|_| random_coeff(&mut rng)).collect();
        let mut ok = true;
        for (rel, &v) in pres.relations().iter().zip(&piv) {
            pt[v] = Coeff::zero();
            let b = rel.eval_dense(&pt);
            pt[v] = Coeff::from_integer(1.into());
            let a = rel.eval_dense(&pt) - &b;
            if a.is_zero() {
                ok = false;
                break;
            }
            pt[v] = -b / a;
        }
        if !ok || avoid.is_some_and(|f| f.eval_dense(&pt).is_zero()) {
            continue;
        }
        debug_assert!(pres.relations().iter().all(|r| r.eval_dense(&pt).is_zero()));
        points.push(pt);
    }
    Ok(points)
}
