//! Integer lattices and finitely presented abelian groups.
//!
//! Lattices are kept in row Hermite normal form; group structure comes from
//! a Smith normal form with tracked column transforms.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

pub type Vector = Vec<BigInt>;

pub fn vector(xs: &[i64]) -> Vector {
    xs.iter().map(|&x| BigInt::from(x)).collect()
}

pub fn add(a: &[BigInt], b: &[BigInt]) -> Vector {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn sub(a: &[BigInt], b: &[BigInt]) -> Vector {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn scale(a: &[BigInt], k: &BigInt) -> Vector {
    a.iter().map(|x| x * k).collect()
}

pub fn is_zero(a: &[BigInt]) -> bool {
    a.iter().all(Zero::is_zero)
}

fn axpy(y: &mut [BigInt], a: &BigInt, x: &[BigInt]) {
    if a.is_zero() {
        return;
    }
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi += a * xi;
    }
}

/// Row-style Hermite normal form with the transform: returns `(H, U)` with
/// `U·A = H`, `U` unimodular, nonzero rows of `H` first with positive
/// pivots strictly increasing in column, entries above pivots reduced.
pub fn hnf_with_transform(rows: &[Vector], dim: usize) -> (Vec<Vector>, Vec<Vector>) {
    let n = rows.len();
    let mut h: Vec<Vector> = rows.to_vec();
    let mut u: Vec<Vector> =
        (0..n).map(|i| (0..n).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect()).collect();
    let mut pivot_row = 0;
    for col in 0..dim {
        if pivot_row == n {
            break;
        }
        // Euclid down the column until one nonzero entry remains
        loop {
            let best = (pivot_row..n).filter(|&i| !h[i][col].is_zero()).min_by_key(|&i| h[i][col].abs());
            let Some(b) = best else { break };
            h.swap(pivot_row, b);
            u.swap(pivot_row, b);
            let mut done = true;
            for i in pivot_row + 1..n {
                if h[i][col].is_zero() {
                    continue;
                }
                let q = -h[i][col].div_floor(&h[pivot_row][col]);
                let (hp, up) = (h[pivot_row].clone(), u[pivot_row].clone());
                axpy(&mut h[i], &q, &hp);
                axpy(&mut u[i], &q, &up);
                if !h[i][col].is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if pivot_row < n && !h[pivot_row][col].is_zero() {
            if h[pivot_row][col].is_negative() {
                h[pivot_row].iter_mut().for_each(|x| *x = -&*x);
                u[pivot_row].iter_mut().for_each(|x| *x = -&*x);
            }
            let (hp, up) = (h[pivot_row].clone(), u[pivot_row].clone());
            for i in 0..pivot_row {
                let q = -h[i][col].div_floor(&hp[col]);
                axpy(&mut h[i], &q, &hp);
                axpy(&mut u[i], &q, &up);
            }
            pivot_row += 1;
        }
    }
    (h, u)
}

/// A sublattice of `Z^dim` in Hermite normal form.
#[derive(Clone, PartialEq, Eq)]
pub struct Lattice {
    dim: usize,
    basis: Vec<Vector>,
    pivots: Vec<usize>,
}

impl Lattice {
    pub fn new(dim: usize, gens: &[Vector]) -> Lattice {
        let (h, _) = hnf_with_transform(gens, dim);
        let basis: Vec<Vector> = h.into_iter().filter(|r| !is_zero(r)).collect();
        let pivots = basis.iter().map(|r| r.iter().position(|x| !x.is_zero()).unwrap()).collect();
        Lattice { dim, basis, pivots }
    }

    pub fn zero(dim: usize) -> Lattice {
        Lattice { dim, basis: vec![], pivots: vec![] }
    }

    pub fn full(dim: usize) -> Lattice {
        let gens: Vec<Vector> = (0..dim).map(|i| unit_vector(dim, i)).collect();
        Lattice::new(dim, &gens)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Vector] {
        &self.basis
    }

    pub fn is_zero(&self) -> bool {
        self.basis.is_empty()
    }

    /// Canonical representative of `x` modulo the lattice.
    pub fn reduce(&self, x: &[BigInt]) -> Vector {
        let mut x = x.to_vec();
        for (row, &p) in self.basis.iter().zip(&self.pivots) {
            let q = -x[p].div_floor(&row[p]);
            axpy(&mut x, &q, row);
        }
        x
    }

    /// Coordinates of `x` in the basis, if `x` lies in the lattice.
    pub fn coords(&self, x: &[BigInt]) -> Option<Vector> {
        let mut x = x.to_vec();
        let mut c = Vec::with_capacity(self.rank());
        for (row, &p) in self.basis.iter().zip(&self.pivots) {
            let (q, r) = x[p].div_rem(&row[p]);
            if !r.is_zero() {
                return None;
            }
            axpy(&mut x, &-&q, row);
            c.push(q);
        }
        is_zero(&x).then_some(c)
    }

    pub fn contains(&self, x: &[BigInt]) -> bool {
        self.coords(x).is_some()
    }

    pub fn contains_lattice(&self, other: &Lattice) -> bool {
        other.basis.iter().all(|b| self.contains(b))
    }

    pub fn sum(&self, other: &Lattice) -> Lattice {
        let mut gens = self.basis.clone();
        gens.extend(other.basis.iter().cloned());
        Lattice::new(self.dim, &gens)
    }

    pub fn with(&self, extra: &[Vector]) -> Lattice {
        let mut gens = self.basis.clone();
        gens.extend(extra.iter().cloned());
        Lattice::new(self.dim, &gens)
    }

    pub fn scaled(&self, k: &BigInt) -> Lattice {
        Lattice::new(self.dim, &self.basis.iter().map(|b| scale(b, k)).collect::<Vec<_>>())
    }

    /// `[self : sub]` when `sub ⊆ self` has the same rank.
    pub fn index_of(&self, sub: &Lattice) -> Option<BigInt> {
        if !self.contains_lattice(sub) || sub.rank() != self.rank() {
            return None;
        }
        FpGroup::quotient(self, sub).order()
    }
}

impl fmt::Debug for Lattice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Lattice{:?}", self.basis.iter().map(|r| r.iter().map(|x| x.to_string()).collect::<Vec<_>>()).collect::<Vec<_>>())
    }
}

pub fn unit_vector(dim: usize, i: usize) -> Vector {
    (0..dim).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect()
}

/// Smith form `P·A·Q = D` of an integer matrix; only `Q` and `Q⁻¹` are kept.
#[derive(Clone, Debug)]
struct Smith {
    diag: Vec<BigInt>,
    q: Vec<Vector>,
    q_inv: Vec<Vector>,
}

fn smith(rows: &[Vector], dim: usize) -> Smith {
    let mut a: Vec<Vector> = rows.to_vec();
    let mut q: Vec<Vector> = (0..dim).map(|i| unit_vector(dim, i)).collect();
    let mut q_inv = q.clone();
    let n = a.len();
    let mut diag = Vec::new();
    // column op col_j += k·col_i, with Q ← Q·E and Q⁻¹ ← E⁻¹·Q⁻¹
    let col_op = |a: &mut Vec<Vector>, q: &mut Vec<Vector>, q_inv: &mut Vec<Vector>, j: usize, i: usize, k: &BigInt| {
        for row in a.iter_mut() {
            let v = &row[i] * k;
            row[j] += v;
        }
        for row in q.iter_mut() {
            let v = &row[i] * k;
            row[j] += v;
        }
        let rj = q_inv[j].clone();
        axpy(&mut q_inv[i], &-k, &rj);
    };
    let col_swap = |a: &mut Vec<Vector>, q: &mut Vec<Vector>, q_inv: &mut Vec<Vector>, i: usize, j: usize| {
        for row in a.iter_mut() {
            row.swap(i, j);
        }
        for row in q.iter_mut() {
            row.swap(i, j);
        }
        q_inv.swap(i, j);
    };
    for t in 0..n.min(dim) {
        loop {
            let best = (t..n)
                .flat_map(|i| (t..dim).map(move |j| (i, j)))
                .filter(|&(i, j)| !a[i][j].is_zero())
                .min_by_key(|&(i, j)| a[i][j].abs());
            let Some((bi, bj)) = best else { break };
            a.swap(t, bi);
            if bj != t {
                col_swap(&mut a, &mut q, &mut q_inv, t, bj);
            }
            let p = a[t][t].clone();
            let mut clean = true;
            for i in t + 1..n {
                let k = -a[i][t].div_floor(&p);
                let rt = a[t].clone();
                axpy(&mut a[i], &k, &rt);
                clean &= a[i][t].is_zero();
            }
            for j in t + 1..dim {
                let k = -a[t][j].div_floor(&p);
                if !k.is_zero() {
                    col_op(&mut a, &mut q, &mut q_inv, j, t, &k);
                }
                clean &= a[t][j].is_zero();
            }
            if !clean {
                continue;
            }
            // divisibility: fold an offending row into the pivot row
            let bad = (t + 1..n).find(|&i| (t + 1..dim).any(|j| !a[i][j].is_multiple_of(&p)));
            match bad {
                Some(i) => {
                    let ri = a[i].clone();
                    axpy(&mut a[t], &BigInt::one(), &ri);
                }
                None => break,
            }
        }
        if t < n && !a[t][t].is_zero() {
            diag.push(a[t][t].abs());
        } else {
            break;
        }
    }
    Smith { diag, q, q_inv }
}

/// `Z^ngens / relations`.
#[derive(Clone, Debug)]
pub struct FpGroup {
    ngens: usize,
    relations: Lattice,
    smith: Smith,
}

impl FpGroup {
    pub fn new(ngens: usize, relations: &[Vector]) -> FpGroup {
        let relations = Lattice::new(ngens, relations);
        let smith = smith(relations.basis(), ngens);
        FpGroup { ngens, relations, smith }
    }

    pub fn free(ngens: usize) -> FpGroup {
        FpGroup::new(ngens, &[])
    }

    /// `big / small` for lattices `small ⊆ big`, on the basis of `big`.
    pub fn quotient(big: &Lattice, small: &Lattice) -> FpGroup {
        let rels: Vec<Vector> = small.basis().iter().map(|b| big.coords(b).expect("quotient of non-nested lattices")).collect();
        FpGroup::new(big.rank(), &rels)
    }

    pub fn ngens(&self) -> usize {
        self.ngens
    }

    pub fn relations(&self) -> &Lattice {
        &self.relations
    }

    pub fn zero(&self) -> Vector {
        vec![BigInt::zero(); self.ngens]
    }

    pub fn canonical(&self, x: &[BigInt]) -> Vector {
        self.relations.reduce(x)
    }

    pub fn is_zero(&self, x: &[BigInt]) -> bool {
        self.relations.contains(x)
    }

    pub fn equal(&self, x: &[BigInt], y: &[BigInt]) -> bool {
        self.is_zero(&sub(x, y))
    }

    /// Invariant factors `d_i > 1` of the torsion part.
    pub fn torsion(&self) -> Vec<BigInt> {
        self.smith.diag.iter().filter(|d| !d.is_one()).cloned().collect()
    }

    pub fn free_rank(&self) -> usize {
        self.ngens - self.smith.diag.len()
    }

    pub fn is_free(&self) -> bool {
        self.torsion().is_empty()
    }

    pub fn is_trivial(&self) -> bool {
        self.free_rank() == 0 && self.torsion().is_empty()
    }

    /// Order of the group, `None` when infinite.
    pub fn order(&self) -> Option<BigInt> {
        (self.free_rank() == 0).then(|| self.smith.diag.iter().product())
    }

    /// Smith coordinates `x·Q`; the first `diag.len()` are taken mod `d_i`.
    fn smith_coords(&self, x: &[BigInt]) -> Vector {
        (0..self.ngens).map(|j| x.iter().zip(&self.smith.q).map(|(xi, row)| xi * &row[j]).sum()).collect()
    }

    fn from_smith(&self, y: &[BigInt]) -> Vector {
        (0..self.ngens).map(|j| y.iter().zip(&self.smith.q_inv).map(|(yi, row)| yi * &row[j]).sum()).collect()
    }

    /// Order of `x`, `None` when infinite.
    pub fn order_of(&self, x: &[BigInt]) -> Option<BigInt> {
        let c = self.smith_coords(x);
        let k = self.smith.diag.len();
        if c[k..].iter().any(|v| !v.is_zero()) {
            return None;
        }
        let mut order = BigInt::one();
        for (v, d) in c.iter().zip(&self.smith.diag) {
            let g = v.gcd(d);
            order = order.lcm(&(d / g));
        }
        Some(order)
    }

    /// No nonzero element is killed by `m`.
    pub fn has_no_torsion_dividing(&self, m: &BigInt) -> bool {
        self.torsion().iter().all(|d| d.gcd(m).is_one())
    }

    /// Some `y` with `m·y = x`, canonical.
    pub fn divide(&self, x: &[BigInt], m: &BigInt) -> Option<Vector> {
        if m.is_zero() {
            return self.is_zero(x).then(|| self.zero());
        }
        let c = self.smith_coords(x);
        let k = self.smith.diag.len();
        let mut y = Vec::with_capacity(self.ngens);
        for (j, v) in c.iter().enumerate() {
            if j >= k {
                let (q, r) = v.div_rem(m);
                if !r.is_zero() {
                    return None;
                }
                y.push(q);
            } else {
                // solve m·y ≡ v (mod d)
                let d = &self.smith.diag[j];
                let e = m.extended_gcd(d);
                let (q, r) = v.div_rem(&e.gcd);
                if !r.is_zero() {
                    return None;
                }
                y.push((q * e.x).mod_floor(d));
            }
        }
        let y = self.from_smith(&y);
        debug_assert!(self.equal(&scale(&y, m), x));
        Some(self.canonical(&y))
    }
}

impl fmt::Display for FpGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = self.torsion().iter().map(|d| format!("Z/{d}")).collect();
        match self.free_rank() {
            0 => {}
            1 => parts.insert(0, "Z".into()),
            r => parts.insert(0, format!("Z^{r}")),
        }
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}
