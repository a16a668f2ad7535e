//! Matrices over presented rings, plus exact rational linear algebra.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::groebner::RingPresentation;
use crate::poly::{Coeff, Polynomial};

#[derive(Clone)]
pub struct Matrix {
    pres: Arc<RingPresentation>,
    rows: usize,
    cols: usize,
    entries: Vec<Polynomial>,
}

impl Matrix {
    pub fn from_rows(pres: &Arc<RingPresentation>, rows: Vec<Vec<Polynomial>>) -> Result<Self> {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, |r| r.len());
        let mut entries = Vec::with_capacity(nrows * ncols);
        for row in rows {
            if row.len() != ncols {
                return Err(Error::Precondition("matrix rows differ in length".into()));
            }
            for e in row {
                if !crate::poly::PolyRing::same(e.ring(), pres.ring()) {
                    return Err(Error::RingMismatch);
                }
                entries.push(e);
            }
        }
        Ok(Matrix { pres: pres.clone(), rows: nrows, cols: ncols, entries })
    }

    pub fn parse(pres: &Arc<RingPresentation>, rows: &[&[&str]]) -> Result<Self> {
        let rows = rows
            .iter()
            .map(|r| r.iter().map(|e| pres.parse_poly(e)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        Self::from_rows(pres, rows)
    }

    pub fn zero(pres: &Arc<RingPresentation>, rows: usize, cols: usize) -> Self {
        Matrix { pres: pres.clone(), rows, cols, entries: vec![Polynomial::zero(pres.ring()); rows * cols] }
    }

    pub fn identity(pres: &Arc<RingPresentation>, n: usize) -> Self {
        let mut m = Self::zero(pres, n, n);
        for i in 0..n {
            m.set(i, i, Polynomial::one(pres.ring()));
        }
        m
    }

    pub fn presentation(&self) -> &Arc<RingPresentation> {
        &self.pres
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Polynomial {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, p: Polynomial) {
        self.entries[i * self.cols + j] = p;
    }

    pub fn row(&self, i: usize) -> &[Polynomial] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<Polynomial> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<Polynomial>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn to_strings(&self) -> Vec<Vec<String>> {
        (0..self.rows).map(|i| self.row(i).iter().map(|p| p.to_string()).collect()).collect()
    }

    pub fn map(&self, f: impl Fn(&Polynomial) -> Polynomial) -> Matrix {
        Matrix { pres: self.pres.clone(), rows: self.rows, cols: self.cols, entries: self.entries.iter().map(f).collect() }
    }

    /// Entries replaced by their normal forms modulo the relations.
    pub fn reduced(&self) -> Matrix {
        self.map(|p| self.pres.reduce(p))
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|p| self.pres.is_zero(p))
    }

    pub fn equals(&self, other: &Matrix) -> bool {
        self.rows == other.rows
            && self.cols == other.cols
            && self.entries.iter().zip(&other.entries).all(|(a, b)| self.pres.equal(a, b))
    }

    pub fn transpose(&self) -> Matrix {
        let mut m = Matrix::zero(&self.pres, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m.set(j, i, self.get(i, j).clone());
            }
        }
        m
    }

    pub fn scale(&self, c: &Polynomial) -> Matrix {
        self.map(|p| self.pres.reduce(&(p * c)))
    }

    pub fn add(&self, other: &Matrix) -> Result<Matrix> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::Precondition("matrix shapes differ".into()));
        }
        let entries = self.entries.iter().zip(&other.entries).map(|(a, b)| a + b).collect();
        Ok(Matrix { pres: self.pres.clone(), rows: self.rows, cols: self.cols, entries })
    }

    pub fn sub(&self, other: &Matrix) -> Result<Matrix> {
        self.add(&other.map(|p| -p))
    }

    /// Product with entries reduced modulo the relations.
    pub fn mul(&self, other: &Matrix) -> Result<Matrix> {
        self.mul_with(other, Execution::Sequential)
    }

    pub fn mul_with(&self, other: &Matrix, exec: Execution) -> Result<Matrix> {
        if self.cols != other.rows {
            return Err(Error::Precondition(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let (n, m) = (self.rows, other.cols);
        let entries = exec.map_range(n * m, |k| {
            let (i, j) = (k / m, k % m);
            let mut acc = Polynomial::zero(self.pres.ring());
            for l in 0..self.cols {
                let a = self.get(i, l);
                let b = other.get(l, j);
                if !a.is_zero() && !b.is_zero() {
                    acc = &acc + &(a * b);
                }
            }
            self.pres.reduce(&acc)
        });
        Ok(Matrix { pres: self.pres.clone(), rows: n, cols: m, entries })
    }

    /// Block matrix `[[a, b], [c, d]]`.
    pub fn block(a: &Matrix, b: &Matrix, c: &Matrix, d: &Matrix) -> Result<Matrix> {
        if a.rows != b.rows || c.rows != d.rows || a.cols != c.cols || b.cols != d.cols {
            return Err(Error::Precondition("block shapes do not fit".into()));
        }
        let rows = a.rows + c.rows;
        let cols = a.cols + b.cols;
        let mut m = Matrix::zero(&a.pres, rows, cols);
        for (blk, r0, c0) in [(a, 0, 0), (b, 0, a.cols), (c, a.rows, 0), (d, a.rows, a.cols)] {
            for i in 0..blk.rows {
                for j in 0..blk.cols {
                    m.set(r0 + i, c0 + j, blk.get(i, j).clone());
                }
            }
        }
        Ok(m)
    }

    pub fn trace(&self) -> Polynomial {
        let mut t = Polynomial::zero(self.pres.ring());
        for i in 0..self.rows.min(self.cols) {
            t = &t + self.get(i, i);
        }
        self.pres.reduce(&t)
    }

    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> Matrix {
        let mut m = Matrix::zero(&self.pres, rows.len(), cols.len());
        for (a, &i) in rows.iter().enumerate() {
            for (b, &j) in cols.iter().enumerate() {
                m.set(a, b, self.get(i, j).clone());
            }
        }
        m
    }

    /// Determinant by fraction-free (Bareiss) elimination in the ambient
    /// polynomial ring, reduced modulo the relations at the end.
    pub fn det(&self) -> Result<Polynomial> {
        if self.rows != self.cols {
            return Err(Error::Precondition("determinant of a non-square matrix".into()));
        }
        let n = self.rows;
        let ring = self.pres.ring();
        if n == 0 {
            return Ok(Polynomial::one(ring));
        }
        let mut a: Vec<Vec<Polynomial>> = self.to_rows();
        let mut sign = false;
        let mut prev = Polynomial::one(ring);
        for k in 0..n - 1 {
            if a[k][k].is_zero() {
                match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                    Some(i) => {
                        a.swap(k, i);
                        sign = !sign;
                    }
                    None => return Ok(Polynomial::zero(ring)),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let num = &(&a[i][j] * &a[k][k]) - &(&a[i][k] * &a[k][j]);
                    a[i][j] = num
                        .div_exact(&prev)
                        .ok_or_else(|| Error::Verification("Bareiss division was not exact".into()))?;
                }
                a[i][k] = Polynomial::zero(ring);
            }
            prev = a[k][k].clone();
        }
        let d = a[n - 1][n - 1].clone();
        let d = if sign { -d } else { d };
        Ok(self.pres.reduce(&d))
    }

    /// Classical adjugate, so that `M·adj(M) = det(M)·I`.
    pub fn adjugate(&self) -> Result<Matrix> {
        let n = self.rows;
        if n != self.cols {
            return Err(Error::Precondition("adjugate of a non-square matrix".into()));
        }
        if n == 1 {
            return Ok(Matrix::identity(&self.pres, 1));
        }
        let mut adj = Matrix::zero(&self.pres, n, n);
        for i in 0..n {
            for j in 0..n {
                let rows: Vec<usize> = (0..n).filter(|&r| r != j).collect();
                let cols: Vec<usize> = (0..n).filter(|&c| c != i).collect();
                let minor = self.submatrix(&rows, &cols).det()?;
                adj.set(i, j, if (i + j) % 2 == 1 { -minor } else { minor });
            }
        }
        Ok(adj)
    }

    /// All `k×k` minors, reduced modulo the relations, ordered by row
    /// subset then column subset. Built level by level by expansion along
    /// the first row, reducing at every level so entries stay small.
    pub fn minors(&self, k: usize, exec: Execution) -> Result<Vec<Polynomial>> {
        if k == 0 {
            return Ok(vec![Polynomial::one(self.pres.ring())]);
        }
        let mut prev: HashMap<(Vec<usize>, Vec<usize>), Polynomial> = HashMap::new();
        for level in 1..=k {
            let rsets = subsets(self.rows, level);
            let csets = subsets(self.cols, level);
            let pairs: Vec<(Vec<usize>, Vec<usize>)> =
                rsets.iter().flat_map(|r| csets.iter().map(move |c| (r.clone(), c.clone()))).collect();
            let values = exec.map(&pairs, |(r, c)| {
                if level == 1 {
                    return self.get(r[0], c[0]).clone();
                }
                let mut acc = Polynomial::zero(self.pres.ring());
                for (idx, &col) in c.iter().enumerate() {
                    let e = self.get(r[0], col);
                    if e.is_zero() {
                        continue;
                    }
                    let mut rest = c.clone();
                    rest.remove(idx);
                    let sub = &prev[&(r[1..].to_vec(), rest)];
                    if sub.is_zero() {
                        continue;
                    }
                    let term = e * sub;
                    acc = if idx % 2 == 0 { &acc + &term } else { &acc - &term };
                }
                self.pres.reduce(&acc)
            });
            if level == k {
                return Ok(values);
            }
            prev = pairs.into_iter().zip(values).collect();
        }
        unreachable!("loop returns at level k")
    }

    pub fn substitute(&self, target: &Arc<RingPresentation>, images: &[Polynomial]) -> Result<Matrix> {
        let entries = self
            .entries
            .iter()
            .map(|p| Ok(target.reduce(&p.substitute(target.ring(), images)?)))
            .collect::<Result<Vec<_>>>()?;
        Ok(Matrix { pres: target.clone(), rows: self.rows, cols: self.cols, entries })
    }

    pub fn eval(&self, point: &[Coeff]) -> Vec<Vec<Coeff>> {
        (0..self.rows).map(|i| self.row(i).iter().map(|p| p.eval_dense(point)).collect()).collect()
    }
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(|p| p.to_string()).collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Matrix {}x{}:\n{self}", self.rows, self.cols)
    }
}

/// All increasing `k`-subsets of `0..n`.
pub fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}

/// Rank of a rational matrix by Gaussian elimination.
pub fn rank_rational(m: &[Vec<BigRational>]) -> usize {
    let mut a: Vec<Vec<BigRational>> = m.to_vec();
    let rows = a.len();
    let cols = a.first().map_or(0, |r| r.len());
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..rows).find(|&r| !a[r][c].is_zero()) else {
            continue;
        };
        a.swap(rank, p);
        let inv = BigRational::one() / &a[rank][c];
        for r in 0..rows {
            if r != rank && !a[r][c].is_zero() {
                let f = &a[r][c] * &inv;
                for k in c..cols {
                    let v = &f * &a[rank][k];
                    a[r][k] -= v;
                }
            }
        }
        rank += 1;
    }
    rank
}

/// Solves `A·x = b` over the rationals; `None` if inconsistent.
pub fn solve_rational(a: &[Vec<BigRational>], b: &[BigRational]) -> Option<Vec<BigRational>> {
    let rows = a.len();
    let cols = a.first().map_or(0, |r| r.len());
    let mut m: Vec<Vec<BigRational>> = a
        .iter()
        .zip(b)
        .map(|(r, v)| {
            let mut r = r.clone();
            r.push(v.clone());
            r
        })
        .collect();
    let mut pivots = Vec::new();
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..rows).find(|&r| !m[r][c].is_zero()) else {
            continue;
        };
        m.swap(rank, p);
        let inv = BigRational::one() / &m[rank][c];
        for k in c..=cols {
            m[rank][k] = &m[rank][k] * &inv;
        }
        for r in 0..rows {
            if r != rank && !m[r][c].is_zero() {
                let f = m[r][c].clone();
                for k in c..=cols {
                    let v = &f * &m[rank][k];
                    m[r][k] -= v;
                }
            }
        }
        pivots.push(c);
        rank += 1;
    }
    if (rank..rows).any(|r| !m[r][cols].is_zero()) {
        return None;
    }
    let mut x = vec![BigRational::zero(); cols];
    for (r, &c) in pivots.iter().enumerate() {
        x[c] = m[r][cols].clone();
    }
    Some(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::rat;

    #[test]
    fn det_and_adjugate() {
        let r = RingPresentation::parse("Q[a,b,c,d,e]", &[]).unwrap();
        let m = Matrix::parse(&r, &[&["a", "b", "0"], &["c", "d", "e"], &["1", "a", "b"]]).unwrap();
        let det = m.det().unwrap();
        assert_eq!(det, r.parse_poly("a*d*b - a*e*a - b*c*b + b*e").unwrap());
        let adj = m.adjugate().unwrap();
        let prod = m.mul(&adj).unwrap();
        assert!(prod.equals(&Matrix::identity(&r, 3).scale(&det)));
    }

    #[test]
    fn det_needs_pivoting() {
        let r = RingPresentation::parse("Q[x]", &[]).unwrap();
        let m = Matrix::parse(&r, &[&["0", "1"], &["x", "0"]]).unwrap();
        assert_eq!(m.det().unwrap(), r.parse_poly("-x").unwrap());
    }

    #[test]
    fn det_modulo_relations() {
        let r = RingPresentation::parse("Q[x,y]", &["x*y - 1"]).unwrap();
        let m = Matrix::parse(&r, &[&["x", "0"], &["0", "y"]]).unwrap();
        assert_eq!(m.det().unwrap(), r.parse_poly("1").unwrap());
    }

    #[test]
    fn rational_rank_and_solve() {
        let m = vec![vec![rat(1), rat(2)], vec![rat(2), rat(4)], vec![rat(0), rat(1)]];
        assert_eq!(rank_rational(&m), 2);
        let x = solve_rational(&m, &[rat(3), rat(6), rat(1)]).unwrap();
        assert_eq!(x, vec![rat(1), rat(1)]);
        assert!(solve_rational(&m, &[rat(3), rat(5), rat(1)]).is_none());
    }

    #[test]
    fn minors_count() {
        assert_eq!(subsets(4, 2).len(), 6);
        let r = RingPresentation::parse("Q[x]", &[]).unwrap();
        let m = Matrix::identity(&r, 3);
        let ms = m.minors(2, Execution::Parallel).unwrap();
        assert_eq!(ms.len(), 9);
        assert_eq!(ms.iter().filter(|p| !p.is_zero()).count(), 3);
    }
}
