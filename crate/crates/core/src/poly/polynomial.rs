use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::{Monomial, PolyRing};
use crate::error::{Error, Result};

pub type Coeff = BigRational;
pub type Term = (Monomial, Coeff);

pub fn rat(n: i64) -> Coeff {
    BigRational::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> Coeff {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Sparse polynomial with exact rational coefficients.
///
/// Terms are kept sorted in strictly decreasing order under the ring's
/// monomial order with no zero coefficients, so structural equality is
/// equality of polynomials.
#[derive(Clone)]
pub struct Polynomial {
    ring: Arc<PolyRing>,
    terms: Vec<Term>,
}

impl PartialEq for Polynomial {
    fn eq(&self, other: &Self) -> bool {
        PolyRing::same(&self.ring, &other.ring) && self.terms == other.terms
    }
}

impl Eq for Polynomial {}

impl Hash for Polynomial {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.terms.hash(state);
    }
}

fn merge_scaled(ring: &PolyRing, a: &[Term], b: &[Term], scale: &Coeff, shift: Option<&Monomial>) -> Vec<Term> {
    let ord = ring.order();
    let mut out = Vec::with_capacity(a.len() + b.len());
    let mut i = 0;
    let mut j = 0;
    let shifted = |t: &Term| -> Term {
        let m = match shift {
            Some(s) => t.0.mul(s),
            None => t.0.clone(),
        };
        (m, &t.1 * scale)
    };
    while i < a.len() && j < b.len() {
        let bj = shifted(&b[j]);
        match ord.cmp(&a[i].0, &bj.0) {
            Ordering::Greater => {
                out.push(a[i].clone());
                i += 1;
            }
            Ordering::Less => {
                out.push(bj);
                j += 1;
            }
            Ordering::Equal => {
                let c = &a[i].1 + &bj.1;
                if !c.is_zero() {
                    out.push((bj.0, c));
                }
                i += 1;
                j += 1;
            }
        }
    }
    out.extend(a[i..].iter().cloned());
    out.extend(b[j..].iter().map(shifted));
    out
}

impl Polynomial {
    pub fn zero(ring: &Arc<PolyRing>) -> Self {
        Polynomial { ring: ring.clone(), terms: Vec::new() }
    }

    pub fn one(ring: &Arc<PolyRing>) -> Self {
        Self::constant(ring, Coeff::one())
    }

    pub fn constant(ring: &Arc<PolyRing>, c: Coeff) -> Self {
        if c.is_zero() {
            return Self::zero(ring);
        }
        Polynomial { ring: ring.clone(), terms: vec![(Monomial::one(ring.nvars()), c)] }
    }

    pub fn from_int(ring: &Arc<PolyRing>, n: i64) -> Self {
        Self::constant(ring, rat(n))
    }

    pub fn variable(ring: &Arc<PolyRing>, index: usize) -> Self {
        Self::monomial(ring, Monomial::variable(ring.nvars(), index, 1), Coeff::one())
    }

    pub fn monomial(ring: &Arc<PolyRing>, m: Monomial, c: Coeff) -> Self {
        assert_eq!(m.nvars(), ring.nvars(), "monomial arity does not match ring");
        if c.is_zero() {
            return Self::zero(ring);
        }
        Polynomial { ring: ring.clone(), terms: vec![(m, c)] }
    }

    /// Builds a polynomial from arbitrary terms, combining duplicates.
    pub fn from_terms<I: IntoIterator<Item = Term>>(ring: &Arc<PolyRing>, terms: I) -> Self {
        let mut acc: HashMap<Monomial, Coeff> = HashMap::new();
        for (m, c) in terms {
            assert_eq!(m.nvars(), ring.nvars(), "monomial arity does not match ring");
            *acc.entry(m).or_insert_with(Coeff::zero) += c;
        }
        let mut terms: Vec<Term> = acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        let ord = ring.order();
        terms.sort_by(|a, b| ord.cmp(&b.0, &a.0));
        Polynomial { ring: ring.clone(), terms }
    }

    pub fn ring(&self) -> &Arc<PolyRing> {
        &self.ring
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].0.is_one() && self.terms[0].1.is_one()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.is_empty() || (self.terms.len() == 1 && self.terms[0].0.is_one())
    }

    /// Constant term (coefficient of the unit monomial).
    pub fn constant_term(&self) -> Coeff {
        match self.terms.last() {
            Some((m, c)) if m.is_one() => c.clone(),
            _ => Coeff::zero(),
        }
    }

    pub fn leading_term(&self) -> Option<&Term> {
        self.terms.first()
    }

    pub fn leading_monomial(&self) -> Option<&Monomial> {
        self.terms.first().map(|t| &t.0)
    }

    pub fn leading_coeff(&self) -> Option<&Coeff> {
        self.terms.first().map(|t| &t.1)
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.iter().map(|t| t.0.degree()).max()
    }

    pub fn degree_in(&self, var: usize) -> u32 {
        self.terms.iter().map(|t| t.0.exponent(var)).max().unwrap_or(0)
    }

    pub fn uses_var(&self, var: usize) -> bool {
        self.terms.iter().any(|t| t.0.exponent(var) > 0)
    }

    fn check_ring(&self, other: &Polynomial) -> Result<()> {
        if PolyRing::same(&self.ring, &other.ring) {
            Ok(())
        } else {
            Err(Error::RingMismatch)
        }
    }

    pub fn checked_add(&self, other: &Polynomial) -> Result<Polynomial> {
        self.check_ring(other)?;
        Ok(self.add_scaled(&Coeff::one(), None, other))
    }

    pub fn checked_sub(&self, other: &Polynomial) -> Result<Polynomial> {
        self.check_ring(other)?;
        Ok(self.add_scaled(&-Coeff::one(), None, other))
    }

    pub fn checked_mul(&self, other: &Polynomial) -> Result<Polynomial> {
        self.check_ring(other)?;
        Ok(self.mul_unchecked(other))
    }

    /// `self + scale * shift * other`.
    pub fn add_scaled(&self, scale: &Coeff, shift: Option<&Monomial>, other: &Polynomial) -> Polynomial {
        if scale.is_zero() || other.is_zero() {
            return self.clone();
        }
        Polynomial { ring: self.ring.clone(), terms: merge_scaled(&self.ring, &self.terms, &other.terms, scale, shift) }
    }

    fn mul_unchecked(&self, other: &Polynomial) -> Polynomial {
        if self.is_zero() || other.is_zero() {
            return Polynomial::zero(&self.ring);
        }
        if self.terms.len() == 1 {
            let (m, c) = &self.terms[0];
            return other.mul_term(m, c);
        }
        if other.terms.len() == 1 {
            let (m, c) = &other.terms[0];
            return self.mul_term(m, c);
        }
        let mut acc: HashMap<Monomial, Coeff> = HashMap::with_capacity(self.len() * other.len());
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                *acc.entry(ma.mul(mb)).or_insert_with(Coeff::zero) += ca * cb;
            }
        }
        let mut terms: Vec<Term> = acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        let ord = self.ring.order();
        terms.sort_by(|a, b| ord.cmp(&b.0, &a.0));
        Polynomial { ring: self.ring.clone(), terms }
    }

    /// Multiplication by a single term; order is preserved by multiplicativity.
    pub fn mul_term(&self, m: &Monomial, c: &Coeff) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero(&self.ring);
        }
        Polynomial {
            ring: self.ring.clone(),
            terms: self.terms.iter().map(|(tm, tc)| (tm.mul(m), tc * c)).collect(),
        }
    }

    pub fn scale(&self, c: &Coeff) -> Polynomial {
        self.mul_term(&Monomial::one(self.ring.nvars()), c)
    }

    pub fn pow(&self, k: u32) -> Polynomial {
        let mut result = Polynomial::one(&self.ring);
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                result = result.mul_unchecked(&base);
            }
            k >>= 1;
            if k > 0 {
                base = base.mul_unchecked(&base);
            }
        }
        result
    }

    /// Divides by the leading coefficient.
    pub fn monic(&self) -> Polynomial {
        match self.leading_coeff() {
            Some(c) if !c.is_one() => self.scale(&c.recip()),
            _ => self.clone(),
        }
    }

    /// Evaluates at a full assignment given by variable name.
    pub fn eval(&self, point: &HashMap<String, Coeff>) -> Result<Coeff> {
        let mut dense = Vec::with_capacity(self.ring.nvars());
        for (i, v) in self.ring.vars().iter().enumerate() {
            match point.get(v) {
                Some(x) => dense.push(x.clone()),
                None if !self.uses_var(i) => dense.push(Coeff::zero()),
                None => return Err(Error::MissingAssignment(v.clone())),
            }
        }
        Ok(self.eval_dense(&dense))
    }

    /// Evaluates at a point given in variable-index order.
    pub fn eval_dense(&self, point: &[Coeff]) -> Coeff {
        assert_eq!(point.len(), self.ring.nvars());
        let mut total = Coeff::zero();
        for (m, c) in &self.terms {
            let mut v = c.clone();
            for (i, &e) in m.exponents().iter().enumerate() {
                if e > 0 {
                    v *= num_traits::pow(point[i].clone(), e as usize);
                }
            }
            total += v;
        }
        total
    }

    /// Ring map: variable `i` of the source ring goes to `images[i]`.
    pub fn substitute(&self, target: &Arc<PolyRing>, images: &[Polynomial]) -> Result<Polynomial> {
        if images.len() != self.ring.nvars() {
            return Err(Error::Precondition(format!(
                "substitution needs {} images, got {}",
                self.ring.nvars(),
                images.len()
            )));
        }
        for img in images {
            if !PolyRing::same(img.ring(), target) {
                return Err(Error::RingMismatch);
            }
        }
        let mut powers: Vec<Vec<Polynomial>> = vec![vec![Polynomial::one(target)]; images.len()];
        let mut result = Polynomial::zero(target);
        for (m, c) in &self.terms {
            let mut t = Polynomial::constant(target, c.clone());
            for (i, &e) in m.exponents().iter().enumerate() {
                if e == 0 {
                    continue;
                }
                while powers[i].len() <= e as usize {
                    let next = powers[i].last().unwrap().mul_unchecked(&images[i]);
                    powers[i].push(next);
                }
                t = t.mul_unchecked(&powers[i][e as usize]);
            }
            result = result.add_scaled(&Coeff::one(), None, &t);
        }
        Ok(result)
    }

    /// Moves the polynomial into `target`, sending variable `i` to
    /// variable `var_map[i]` of the target ring.
    pub fn embed(&self, target: &Arc<PolyRing>, var_map: &[usize]) -> Polynomial {
        assert_eq!(var_map.len(), self.ring.nvars());
        let n = target.nvars();
        Polynomial::from_terms(
            target,
            self.terms.iter().map(|(m, c)| {
                let mut e = vec![0u32; n];
                for (i, &x) in m.exponents().iter().enumerate() {
                    e[var_map[i]] += x;
                }
                (Monomial::from_exponents(e), c.clone())
            }),
        )
    }

    /// Same variables, different order (or ring identity); terms are re-sorted.
    pub fn reorder(&self, target: &Arc<PolyRing>) -> Polynomial {
        assert_eq!(target.vars(), self.ring.vars(), "reorder needs identical variables");
        if Arc::ptr_eq(target, &self.ring) {
            return self.clone();
        }
        let ord = target.order();
        let mut terms = self.terms.clone();
        terms.sort_by(|a, b| ord.cmp(&b.0, &a.0));
        Polynomial { ring: target.clone(), terms }
    }

    /// Exact quotient `self / d` in the ambient polynomial ring.
    pub fn div_exact(&self, d: &Polynomial) -> Option<Polynomial> {
        let (dm, dc) = d.leading_term()?;
        let mut rem = self.clone();
        let mut quotient = Vec::new();
        while let Some((m, c)) = rem.leading_term() {
            let q = dm.quotient_of(m)?;
            let qc = c / dc;
            rem = rem.add_scaled(&-qc.clone(), Some(&q), d);
            quotient.push((q, qc));
        }
        Some(Polynomial::from_terms(&self.ring, quotient))
    }

    /// Multiplies through by the lcm of denominators and divides by the
    /// content, giving a primitive integer polynomial with positive leading
    /// coefficient.
    pub fn primitive_integer(&self) -> Polynomial {
        use num_integer::Integer;
        if self.is_zero() {
            return self.clone();
        }
        let mut l = BigInt::one();
        for (_, c) in &self.terms {
            l = l.lcm(c.denom());
        }
        let mut g = BigInt::zero();
        for (_, c) in &self.terms {
            let v = c.numer() * (&l / c.denom());
            g = g.gcd(&v);
        }
        let mut s = BigRational::new(l, g);
        if self.leading_coeff().unwrap().is_negative() {
            s = -s;
        }
        self.scale(&s)
    }
}

impl<'a> Add<&'a Polynomial> for &'a Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &'a Polynomial) -> Polynomial {
        self.checked_add(rhs).expect("ring mismatch in polynomial addition")
    }
}

impl<'a> Sub<&'a Polynomial> for &'a Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &'a Polynomial) -> Polynomial {
        self.checked_sub(rhs).expect("ring mismatch in polynomial subtraction")
    }
}

impl<'a> Mul<&'a Polynomial> for &'a Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &'a Polynomial) -> Polynomial {
        self.checked_mul(rhs).expect("ring mismatch in polynomial multiplication")
    }
}

impl Add for Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: Polynomial) -> Polynomial {
        &self + &rhs
    }
}

impl Sub for Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: Polynomial) -> Polynomial {
        &self - &rhs
    }
}

impl Mul for Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: Polynomial) -> Polynomial {
        &self * &rhs
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        self.scale(&-Coeff::one())
    }
}

impl Neg for Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        -&self
    }
}

fn fmt_coeff(c: &Coeff) -> String {
    if c.is_integer() {
        c.numer().to_string()
    } else {
        format!("{}/{}", c.numer(), c.denom())
    }
}

pub(crate) fn fmt_monomial(vars: &[String], m: &Monomial) -> String {
    let mut parts = Vec::new();
    for (i, &e) in m.exponents().iter().enumerate() {
        match e {
            0 => {}
            1 => parts.push(vars[i].clone()),
            _ => parts.push(format!("{}^{}", vars[i], e)),
        }
    }
    parts.join("*")
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (m, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            if k == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            if m.is_one() {
                write!(f, "{}", fmt_coeff(&abs))?;
            } else if abs.is_one() {
                write!(f, "{}", fmt_monomial(self.ring.vars(), m))?;
            } else {
                write!(f, "{}*{}", fmt_coeff(&abs), fmt_monomial(self.ring.vars(), m))?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Polynomial({self})")
    }
}
