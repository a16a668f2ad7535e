use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use super::Monomial;

/// Admissible monomial orders. Variable `0` is the largest variable.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MonomialOrder {
    Lex,
    GrevLex,
    /// Elimination order: the first `block` variables are compared first
    /// (grevlex within the block), ties broken by grevlex on the rest.
    Elimination { block: usize },
}

impl Default for MonomialOrder {
    fn default() -> Self {
        MonomialOrder::GrevLex
    }
}

fn grevlex(a: &[u32], b: &[u32]) -> Ordering {
    let da: u32 = a.iter().sum();
    let db: u32 = b.iter().sum();
    match da.cmp(&db) {
        Ordering::Equal => {}
        o => return o,
    }
    for i in (0..a.len()).rev() {
        if a[i] != b[i] {
            return b[i].cmp(&a[i]);
        }
    }
    Ordering::Equal
}

impl MonomialOrder {
    pub fn cmp(&self, a: &Monomial, b: &Monomial) -> Ordering {
        let (a, b) = (a.exponents(), b.exponents());
        match *self {
            MonomialOrder::Lex => a.cmp(b),
            MonomialOrder::GrevLex => grevlex(a, b),
            MonomialOrder::Elimination { block } => {
                let k = block.min(a.len());
                match grevlex(&a[..k], &b[..k]) {
                    Ordering::Equal => grevlex(&a[k..], &b[k..]),
                    o => o,
                }
            }
        }
    }

    pub fn name(&self) -> String {
        match self {
            MonomialOrder::Lex => "lex".into(),
            MonomialOrder::GrevLex => "grevlex".into(),
            MonomialOrder::Elimination { block } => format!("elim:{block}"),
        }
    }

    /// Parses `lex`, `grevlex` or `elim:<k>`.
    pub fn parse(text: &str) -> Option<Self> {
        match text.trim() {
            "lex" => Some(MonomialOrder::Lex),
            "grevlex" | "degrevlex" => Some(MonomialOrder::GrevLex),
            other => other
                .strip_prefix("elim:")
                .and_then(|k| k.parse().ok())
                .map(|block| MonomialOrder::Elimination { block }),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(e: &[u32]) -> Monomial {
        Monomial::from_exponents(e.to_vec())
    }

    #[test]
    fn lex_basics() {
        let x = m(&[1, 0]);
        let y = m(&[0, 1]);
        assert_eq!(MonomialOrder::Lex.cmp(&x, &y), Ordering::Greater);
        assert_eq!(MonomialOrder::Lex.cmp(&x, &x), Ordering::Equal);
        let w = m(&[2, 3]);
        assert_eq!(MonomialOrder::Lex.cmp(&x.mul(&w), &y.mul(&w)), Ordering::Greater);
    }

    #[test]
    fn grevlex_breaks_ties_on_last_variable() {
        // x*z < y^2 in grevlex with x > y > z
        let xz = m(&[1, 0, 1]);
        let yy = m(&[0, 2, 0]);
        assert_eq!(MonomialOrder::GrevLex.cmp(&xz, &yy), Ordering::Less);
        assert_eq!(MonomialOrder::Lex.cmp(&xz, &yy), Ordering::Greater);
    }

    #[test]
    fn elimination_prefers_block() {
        let ord = MonomialOrder::Elimination { block: 1 };
        let t = m(&[1, 0, 0]);
        let big = m(&[0, 5, 5]);
        assert_eq!(ord.cmp(&t, &big), Ordering::Greater);
    }

    #[test]
    fn parse_names() {
        for o in [MonomialOrder::Lex, MonomialOrder::GrevLex, MonomialOrder::Elimination { block: 3 }] {
            assert_eq!(MonomialOrder::parse(&o.name()), Some(o));
        }
        assert_eq!(MonomialOrder::parse("weird"), None);
    }
}
