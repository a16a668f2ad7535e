//! Completion of factorial rows `(x_1, .., x_{r-1}, x_r^{(r-1)!})` to square
//! matrices whose determinant is a power of `w = Σ x_i y_i`.
//!
//! Completions are explicit for `r ≤ 3`:
//!
//! * `r = 1`: `[[x_1]]`
//! * `r = 2`: `[[x_1, -y_2], [x_2, y_1]]`, determinant `w`
//! * `r = 3`: the matrix below, determinant `(x_1y_1 + x_2y_2 + x_3y_3)²`
//!
//! ```text
//! [ x_1    y_2²             y_3 - y_1y_2    ]
//! [ x_2   -y_3 - y_1y_2     y_1²            ]
//! [ x_3²  -x_1 + 2x_3y_2   -x_2 - 2x_3y_1   ]
//! ```

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::groebner::RingPresentation;
use crate::ideal_ops::b_pattern;
use crate::matrix::Matrix;
use crate::poly::Polynomial;
use crate::universal::a_n;

pub const MAX_R: usize = 3;

#[derive(Clone, Debug)]
pub struct SuslinCertificate {
    pub matrix: Matrix,
    pub row: Vec<Polynomial>,
    pub row_base: Vec<Polynomial>,
    pub cofactors: Vec<Polynomial>,
    pub witness: Polynomial,
    pub exponent: u32,
}

/// Text form of a certificate, for fixtures and reports.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateRecord {
    pub matrix: Vec<Vec<String>>,
    pub row: Vec<String>,
    pub row_base: Vec<String>,
    pub cofactors: Vec<String>,
    pub witness: String,
    pub exponent: u32,
}

fn strings(ps: &[Polynomial]) -> Vec<String> {
    ps.iter().map(|p| p.to_string()).collect()
}

impl SuslinCertificate {
    pub fn r(&self) -> usize {
        self.row.len()
    }

    pub fn presentation(&self) -> &Arc<RingPresentation> {
        self.matrix.presentation()
    }

    pub fn record(&self) -> CertificateRecord {
        CertificateRecord {
            matrix: self.matrix.to_strings(),
            row: strings(&self.row),
            row_base: strings(&self.row_base),
            cofactors: strings(&self.cofactors),
            witness: self.witness.to_string(),
            exponent: self.exponent,
        }
    }

    pub fn from_record(pres: &Arc<RingPresentation>, rec: &CertificateRecord) -> Result<Self> {
        let parse = |v: &[String]| v.iter().map(|s| pres.parse_poly(s)).collect::<Result<Vec<_>>>();
        let rows = rec.matrix.iter().map(|r| parse(r)).collect::<Result<Vec<_>>>()?;
        let row = parse(&rec.row)?;
        let row_base = parse(&rec.row_base)?;
        Ok(SuslinCertificate {
            matrix: Matrix::from_rows(pres, rows)?,
            row,
            row_base,
            cofactors: parse(&rec.cofactors)?,
            witness: pres.parse_poly(&rec.witness)?,
            exponent: rec.exponent,
        })
    }

    /// Moves the certificate along a ring map given by variable images.
    pub fn transport(&self, target: &Arc<RingPresentation>, images: &[Polynomial]) -> Result<SuslinCertificate> {
        let map = |ps: &[Polynomial]| -> Result<Vec<Polynomial>> {
            ps.iter().map(|p| Ok(target.reduce(&p.substitute(target.ring(), images)?))).collect()
        };
        Ok(SuslinCertificate {
            matrix: self.matrix.substitute(target, images)?,
            row: map(&self.row)?,
            row_base: map(&self.row_base)?,
            cofactors: map(&self.cofactors)?,
            witness: target.reduce(&self.witness.substitute(target.ring(), images)?),
            exponent: self.exponent,
        })
    }
}

fn check_identity(pres: &Arc<RingPresentation>, xs: &[Polynomial], ys: &[Polynomial], w: &Polynomial) -> Result<()> {
    let mut sum = Polynomial::zero(pres.ring());
    for (x, y) in xs.iter().zip(ys) {
        sum = &sum + &(x * y);
    }
    let defect = pres.reduce(&(&sum - w));
    if !defect.is_zero() {
        let lhs: Vec<String> = xs.iter().zip(ys).map(|(x, y)| format!("({x})*({y})")).collect();
        return Err(Error::Identity { equation: format!("{} = {w}", lhs.join(" + ")), defect: defect.to_string() });
    }
    Ok(())
}

/// Completes the factorial row built from `row_base` with cofactors `ys`
/// satisfying `Σ x_i y_i = w` in the presented ring.
pub fn complete_row(
    pres: &Arc<RingPresentation>,
    row_base: &[Polynomial],
    cofactors: &[Polynomial],
    w: &Polynomial,
) -> Result<SuslinCertificate> {
    let r = row_base.len();
    if r == 0 || r > MAX_R {
        return Err(Error::Unsupported(format!("row completion implemented for 1 ≤ r ≤ {MAX_R}, got r = {r}")));
    }
    if cofactors.len() != r {
        return Err(Error::Precondition(format!("{r} row entries but {} cofactors", cofactors.len())));
    }
    if pres.is_zero(w) {
        return Err(Error::Precondition("the witness w must be nonzero".into()));
    }
    check_identity(pres, row_base, cofactors, w)?;
    let (x, y) = (row_base, cofactors);
    let p = |s: &str| pres.parse_poly(s);
    let (rows, exponent): (Vec<Vec<Polynomial>>, u32) = match r {
        1 => {
            let a = if pres.equal(&x[0], w) {
                1
            } else if pres.equal(&x[0], &p("1")?) {
                0
            } else {
                return Err(Error::Unsupported("a 1×1 completion needs x_1 = w or x_1 = 1".into()));
            };
            (vec![vec![x[0].clone()]], a)
        }
        2 => (vec![vec![x[0].clone(), -&y[1]], vec![x[1].clone(), y[0].clone()]], 1),
        _ => {
            let two = p("2")?;
            (
                vec![
                    vec![x[0].clone(), y[1].pow(2), &y[2] - &(&y[0] * &y[1])],
                    vec![x[1].clone(), &(-&y[2]) - &(&y[0] * &y[1]), y[0].pow(2)],
                    vec![x[2].pow(2), &(-&x[0]) + &(&two * &(&x[2] * &y[1])), &(-&x[1]) - &(&two * &(&x[2] * &y[0]))],
                ],
                2,
            )
        }
    };
    let rows = rows.into_iter().map(|row| row.into_iter().map(|e| pres.reduce(&e)).collect()).collect();
    let cert = SuslinCertificate {
        matrix: Matrix::from_rows(pres, rows)?,
        row: b_pattern(row_base).iter().map(|e| pres.reduce(e)).collect(),
        row_base: row_base.to_vec(),
        cofactors: cofactors.to_vec(),
        witness: w.clone(),
        exponent,
    };
    if !verify_certificate(&cert) {
        return Err(Error::Verification("constructed certificate fails its determinant check".into()));
    }
    Ok(cert)
}

/// First column equals the row and `det = w^a`, both modulo the relations.
pub fn verify_certificate(c: &SuslinCertificate) -> bool {
    let pres = c.presentation();
    let r = c.row.len();
    if c.matrix.rows() != r || c.matrix.cols() != r {
        return false;
    }
    let col = c.matrix.column(0);
    if !col.iter().zip(&c.row).all(|(a, b)| pres.equal(a, b)) {
        return false;
    }
    match c.matrix.det() {
        Ok(d) => pres.equal(&d, &c.witness.pow(c.exponent)),
        Err(_) => false,
    }
}

/// The certificate over `A_r` for the row `(X_1, .., X_{r-1}, X_r^{(r-1)!})`
/// with cofactors `Y_i` and witness `ST`.
pub fn universal_certificate(r: usize) -> Result<SuslinCertificate> {
    let a = a_n(r)?;
    let xs: Vec<Polynomial> = (1..=r).map(|i| a.var(&format!("X{i}"))).collect::<Result<_>>()?;
    let ys: Vec<Polynomial> = (1..=r).map(|i| a.var(&format!("Y{i}"))).collect::<Result<_>>()?;
    let w = a.parse_poly("S*T")?;
    complete_row(&a, &xs, &ys, &w)
}
