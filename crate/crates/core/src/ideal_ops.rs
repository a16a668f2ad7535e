//! Products, powers and the factorial ideal `B(J) = (f_1..f_{r-1}) + J^{(r-1)!}`.

use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::binomial;
use num_rational::BigRational;

use crate::error::{Error, Result};
use crate::groebner::{Ideal, RingPresentation};
use crate::poly::Polynomial;

pub fn factorial(n: usize) -> u64 {
    (1..=n as u64).product()
}

pub fn ideal_power(i: &Ideal, k: u32) -> Result<Ideal> {
    i.power(k)
}

/// Witness that `result = B(base, gens)` together with the congruence
/// `base = (gens) + base²`.
#[derive(Clone, Debug)]
pub struct BConstruction {
    pub base: Ideal,
    pub gens: Vec<Polynomial>,
    pub r: usize,
    pub result: Ideal,
}

impl BConstruction {
    /// The exponent `(r-1)!`.
    pub fn exponent(&self) -> u64 {
        factorial(self.r - 1)
    }
}

/// `(gens_1..gens_{r-1}) + J0^{(r-1)!}` without any checks.
pub fn b_ideal(j0: &Ideal, gens: &[Polynomial]) -> Result<Ideal> {
    let r = gens.len();
    if r == 0 {
        return Err(Error::Precondition("B(J) needs at least one generator".into()));
    }
    let k = factorial(r - 1) as u32;
    let power = j0.power(k)?;
    power.add_generators(&gens[..r - 1])
}

/// Checks `J0 = (gens) + J0²`.
pub fn congruence_holds(j0: &Ideal, gens: &[Polynomial]) -> Result<bool> {
    for g in gens {
        if !j0.contains(g)? {
            return Ok(false);
        }
    }
    let modulus = j0.power(2)?.add_generators(gens)?;
    modulus.contains_ideal(j0)
}

/// `B(J₀) = (f₁,…,f_{r−1}) + J₀^{(r−1)!}`, after checking the congruence
/// `J₀ = (f) + J₀²`.
///
/// ```
/// use ciwb_core::{Colength, Ideal, RingPresentation};
/// use ciwb_core::ideal_ops::construct_b;
///
/// let r = RingPresentation::parse("Q[x,y,z]", &[])?;
/// let j = Ideal::parse(&r, &["x", "y", "z"])?;
/// let fs: Vec<_> = ["x", "y", "z"].iter().map(|v| r.parse_poly(v)).collect::<Result<_, _>>()?;
/// let b = construct_b(&j, &fs)?;
/// assert_eq!(b.result.colength()?, Colength::Finite(2));
/// # Ok::<(), ciwb_core::Error>(())
/// ```
pub fn construct_b(j0: &Ideal, gens: &[Polynomial]) -> Result<BConstruction> {
    if gens.is_empty() {
        return Err(Error::Precondition("B(J) needs at least one generator".into()));
    }
    if !congruence_holds(j0, gens)? {
        return Err(Error::Congruence(format!("{j0} is not generated by the given elements modulo its square")));
    }
    let result = b_ideal(j0, gens)?;
    if !j0.contains_ideal(&result)? || !result.radical_contains_ideal(j0)? {
        return Err(Error::Verification("radicals of J0 and B(J0) differ".into()));
    }
    Ok(BConstruction { base: j0.clone(), gens: gens.to_vec(), r: gens.len(), result })
}

/// The pattern `(f_1, .., f_{r-1}, f_r^{(r-1)!})`.
pub fn b_pattern(fs: &[Polynomial]) -> Vec<Polynomial> {
    let r = fs.len();
    let mut out = fs.to_vec();
    if let Some(last) = out.last_mut() {
        *last = last.pow(factorial(r - 1) as u32);
    }
    out
}

/// Recognises `J = B(J0, f)` from the elements `f_1..f_r`.
///
/// Returns `None` when `J ≠ (pattern) + J²`. Otherwise finds a Nakayama
/// element `s ∈ J` with `(1+s)J ⊆ (pattern)` and returns the construction
/// for `J0 = (f_1..f_r, s)`.
pub fn recognize_b(j: &Ideal, fs: &[Polynomial]) -> Result<Option<BConstruction>> {
    if fs.is_empty() {
        return Err(Error::Precondition("empty generator pattern".into()));
    }
    let pattern = b_pattern(fs);
    for p in &pattern {
        if !j.contains(p)? {
            return Ok(None);
        }
    }
    let pat = Ideal::new(j.presentation(), pattern.clone())?.with_budget(*j.budget());
    if !j.power(2)?.sum(&pat)?.contains_ideal(j)? {
        return Ok(None);
    }
    let s = nakayama_element(j, &pat)?;
    let mut base_gens = fs.to_vec();
    if !j.presentation().is_zero(&s) {
        base_gens.push(s.clone());
    }
    let base = Ideal::new(j.presentation(), base_gens)?.with_budget(*j.budget());
    let cert = construct_b(&base, fs)?;
    if !cert.result.equals(j)? {
        return Err(Error::Verification(format!("B(J0) with s = {s} does not recover J")));
    }
    Ok(Some(cert))
}

fn is_nakayama(j: &Ideal, pat: &Ideal, s: &Polynomial) -> Result<bool> {
    let one_plus = &Polynomial::one(s.ring()) + s;
    for g in j.generators() {
        if !pat.contains(&(&one_plus * g))? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Small candidates first (0 and ±generators of J); otherwise the element is
/// read off a lift of `1 ∈ (pattern : J) + J`.
fn nakayama_element(j: &Ideal, pat: &Ideal) -> Result<Polynomial> {
    let ring = j.ring().clone();
    let mut cands = vec![Polynomial::zero(&ring)];
    for g in j.generators() {
        cands.push(-g);
        cands.push(g.clone());
    }
    for s in cands {
        if is_nakayama(j, pat, &s)? {
            return Ok(s);
        }
    }
    let colon = pat.colon(j)?;
    let combined = colon.sum(j)?;
    let k = colon.generators().len();
    let coeffs = combined
        .lift_membership(&Polynomial::one(&ring))?
        .ok_or_else(|| Error::SearchExhausted("no Nakayama element: 1 ∉ (pattern : J) + J".into()))?;
    let mut b = Polynomial::zero(&ring);
    for (c, g) in coeffs[k..].iter().zip(j.generators()) {
        b = &b + &(c * g);
    }
    let s = j.presentation().reduce(&-b);
    if !is_nakayama(j, pat, &s)? {
        return Err(Error::Verification(format!("candidate Nakayama element {s} fails")));
    }
    Ok(s)
}

/// Each `f_i` is a nonzerodivisor modulo `(f_1..f_{i-1})` and the ideal is
/// proper.
pub fn is_regular_sequence(fs: &[Polynomial], pres: &Arc<RingPresentation>) -> Result<bool> {
    let mut prev = Ideal::zero(pres);
    for f in fs {
        let colon = prev.colon_element(f)?;
        if !prev.contains_ideal(&colon)? {
            return Ok(false);
        }
        prev = prev.add_generators(std::slice::from_ref(f))?;
        if prev.is_unit()? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Splits `1 = (u + v)^{2N-1}` into `a + b` with `a ∈ (u^N)` and `b ∈ (v^N)`.
pub(crate) fn binomial_split(u: &Polynomial, v: &Polynomial, n: u32) -> (Polynomial, Polynomial) {
    let ring = u.ring();
    let m = 2 * n - 1;
    let mut a = Polynomial::zero(ring);
    let mut b = Polynomial::zero(ring);
    for k in 0..=m {
        let c = BigRational::from_integer(binomial(BigInt::from(m), BigInt::from(k)));
        let term = (&u.pow(k) * &v.pow(m - k)).scale(&c);
        if k >= n {
            a = &a + &term;
        } else {
            b = &b + &term;
        }
    }
    (a, b)
}

/// Given coprime `I = B(I0, f)` and `J = B(J0, g)` with the same `r`,
/// produces `IJ = B(I0·J0, h)` with `h_i = b·f_i + a·g_i`, where `a + b = 1`,
/// `a ∈ I^N`, `b ∈ J^N`.
pub fn coprime_product_b_stability(
    i: &Ideal,
    j: &Ideal,
    cert_i: &BConstruction,
    cert_j: &BConstruction,
) -> Result<BConstruction> {
    if i.is_unit()? {
        return Ok(cert_j.clone());
    }
    if j.is_unit()? {
        return Ok(cert_i.clone());
    }
    if !cert_i.result.equals(i)? || !cert_j.result.equals(j)? {
        return Err(Error::Precondition("certificates do not describe the given ideals".into()));
    }
    if cert_i.r != cert_j.r {
        return Err(Error::Precondition(format!("pattern lengths differ: {} vs {}", cert_i.r, cert_j.r)));
    }
    let sum = i.sum(j)?;
    let ring = i.ring().clone();
    let lift = sum
        .lift_membership(&Polynomial::one(&ring))?
        .ok_or_else(|| Error::Precondition("ideals are not coprime".into()))?;
    let ni = i.generators().len();
    let mut u = Polynomial::zero(&ring);
    for (c, g) in lift[..ni].iter().zip(i.generators()) {
        u = &u + &(c * g);
    }
    let v = &Polynomial::one(&ring) - &u;
    let n = (cert_i.exponent() as u32).max(2);
    let (a, b) = binomial_split(&u, &v, n);
    let pres = i.presentation();
    let h: Vec<Polynomial> = cert_i
        .gens
        .iter()
        .zip(&cert_j.gens)
        .map(|(f, g)| pres.reduce(&(&(&b * f) + &(&a * g))))
        .collect();
    let base = cert_i.base.product(&cert_j.base)?;
    let cert = construct_b(&base, &h)?;
    if !cert.result.equals(&i.product(j)?)? {
        return Err(Error::Verification("IJ differs from the combined B-ideal".into()));
    }
    Ok(cert)
}
