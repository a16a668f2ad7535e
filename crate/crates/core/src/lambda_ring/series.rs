use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

use super::model::{K0Class, K0Model};

/// A power series `Σ a_k t^k` truncated after `t^{len-1}`, with
/// coefficients in a model's `K₀`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Series {
    coeffs: Vec<K0Class>,
}

impl Series {
    /// The series `1`.
    pub fn one(model: &Arc<K0Model>, truncation: usize) -> Series {
        let mut coeffs = vec![model.zero(); truncation + 1];
        coeffs[0] = model.one();
        Series { coeffs }
    }

    pub fn from_coeffs(coeffs: Vec<K0Class>) -> Series {
        Series { coeffs }
    }

    pub fn coeffs(&self) -> &[K0Class] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> &K0Class {
        &self.coeffs[k]
    }

    pub fn truncation(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn mul(&self, other: &Series) -> Series {
        let n = self.coeffs.len().min(other.coeffs.len());
        let model = self.coeffs[0].model();
        let mut out = vec![model.zero(); n];
        for i in 0..n {
            if self.coeffs[i].is_zero() {
                continue;
            }
            for j in 0..n - i {
                if !other.coeffs[j].is_zero() {
                    out[i + j] = &out[i + j] + &self.coeffs[i].mul(&other.coeffs[j]);
                }
            }
        }
        Series { coeffs: out }
    }

    /// Inverse of a series with constant term 1.
    pub fn inverse(&self) -> Series {
        let n = self.coeffs.len();
        let model = self.coeffs[0].model();
        debug_assert!(self.coeffs[0] == model.one());
        let mut inv = vec![model.zero(); n];
        inv[0] = model.one();
        for k in 1..n {
            let mut acc = model.zero();
            for j in 1..=k {
                acc = &acc + &self.coeffs[j].mul(&inv[k - j]);
            }
            inv[k] = -&acc;
        }
        Series { coeffs: inv }
    }

    pub fn pow(&self, e: &BigInt) -> Series {
        let model = self.coeffs[0].model();
        let base = if e.is_negative() { self.inverse() } else { self.clone() };
        let mut k = e.abs();
        let mut out = Series::one(model, self.truncation());
        let mut sq = base;
        while !k.is_zero() {
            if k.is_odd() {
                out = out.mul(&sq);
            }
            k >>= 1;
            if !k.is_zero() {
                sq = sq.mul(&sq);
            }
        }
        out
    }

    /// Substitutes `t ↦ s(t)` for a scalar series with `s(0) = 0`.
    pub fn compose(&self, s: &[BigInt]) -> Series {
        let n = self.coeffs.len();
        let model = self.coeffs[0].model();
        let mut out = vec![model.zero(); n];
        // running power s^i, truncated
        let mut power: Vec<BigInt> = (0..n).map(|k| if k == 0 { BigInt::one() } else { BigInt::zero() }).collect();
        for i in 0..n {
            for k in 0..n {
                if !power[k].is_zero() {
                    out[k] = &out[k] + &self.coeffs[i].scale(&power[k]);
                }
            }
            power = scalar_mul(&power, s, n);
        }
        Series { coeffs: out }
    }
}

fn scalar_mul(a: &[BigInt], b: &[BigInt], n: usize) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); n];
    for (i, x) in a.iter().enumerate().take(n) {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate().take(n - i) {
            out[i + j] += x * y;
        }
    }
    out
}

fn check_truncation(model: &K0Model, truncation: usize) -> Result<()> {
    let bound = model.lambda_bound();
    if truncation == 0 || truncation > bound {
        return Err(Error::Truncation { requested: truncation, bound });
    }
    Ok(())
}

/// `λ_t(x)` through `t^truncation`, extended from the generator table by
/// `λ_t(x + y) = λ_t(x) λ_t(y)`.
pub fn lambda_series(x: &K0Class, truncation: usize) -> Result<Series> {
    let model = x.model();
    check_truncation(model, truncation)?;
    let mut out = Series::one(model, truncation);
    for (i, c) in x.coords().iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let table = model.lambda_table(i);
        let g = Series::from_coeffs(
            table[..=truncation].iter().map(|v| K0Class::new(model, v.clone())).collect::<Result<Vec<_>>>()?,
        );
        out = out.mul(&g.pow(c));
    }
    Ok(out)
}

/// `γ_t(x) = λ_{t/(1-t)}(x)` through `t^truncation`.
pub fn gamma_series(x: &K0Class, truncation: usize) -> Result<Series> {
    let lam = lambda_series(x, truncation)?;
    let s: Vec<BigInt> = (0..=truncation).map(|k| if k == 0 { BigInt::zero() } else { BigInt::one() }).collect();
    Ok(lam.compose(&s))
}

/// `γ^k(x)`.
pub fn gamma(x: &K0Class, k: usize) -> Result<K0Class> {
    if k == 0 {
        return Ok(x.model().one());
    }
    Ok(gamma_series(x, k)?.coeff(k).clone())
}
