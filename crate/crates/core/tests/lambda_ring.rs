use std::collections::BTreeMap;
use std::sync::Arc;

use ciwb_core::k0_models::{a_model, b_model, rank_only_model, sphere3_model, torsion_check};
use ciwb_core::lambda_ring::{
    chern_total, cycle_of, gamma, gamma_filtration, lambda_series, top_chern_identity_holds, whitney_holds, K0Class,
    K0Model, K0ModelSpec, LambdaEntry, ProductEntry,
};
use ciwb_core::lattice::Lattice;
use ciwb_core::Error;
use num_bigint::BigInt;
use num_integer::binomial;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// `K₀(P^n)` on the line bundles `L^0..L^n`, `L = O(-1)`, reduced by
/// `(1 - L)^{n+1} = 0`.
fn projective_space(n: usize) -> Arc<K0Model> {
    let m = n + 1;
    // coordinates of L^k for 0 ≤ k ≤ 2n
    let mut powers: Vec<Vec<i64>> = (0..m).map(|k| (0..m).map(|i| i64::from(i == k)).collect()).collect();
    for k in m..=2 * n {
        // L^k = -Σ_{j<m} C(m,j)(-1)^{m-j} L^{k-m+j}
        let mut v = vec![0i64; m];
        for j in 0..m {
            let c = binomial(m as i64, j as i64) * if (m - j) % 2 == 0 { 1 } else { -1 };
            for (o, x) in v.iter_mut().zip(&powers[k - m + j]) {
                *o -= c * x;
            }
        }
        powers.push(v);
    }
    let names: Vec<String> = (0..m).map(|k| format!("L{k}")).collect();
    let mut products = Vec::new();
    for i in 0..m {
        for j in i..m {
            products.push(ProductEntry { left: names[i].clone(), right: names[j].clone(), value: powers[i + j].clone() });
        }
    }
    let zero = vec![0i64; m];
    let lambda = (0..m)
        .map(|k| LambdaEntry {
            generator: names[k].clone(),
            powers: (0..=n + 2)
                .map(|e| match e {
                    0 => powers[0].clone(),
                    1 => powers[k].clone(),
                    _ => zero.clone(),
                })
                .collect(),
        })
        .collect();
    K0Model::from_spec(K0ModelSpec {
        name: format!("P{n}"),
        ring: None,
        dimension: n,
        generators: names,
        one: powers[0].clone(),
        relations: vec![],
        rank: vec![1; m],
        products,
        lambda,
        top_cycles: vec![],
        pullbacks: BTreeMap::new(),
        classes: BTreeMap::new(),
    })
    .unwrap()
}

fn torsion_toy() -> Arc<K0Model> {
    K0Model::from_spec(K0ModelSpec {
        name: "toy".into(),
        ring: None,
        dimension: 1,
        generators: vec!["epsilon".into(), "tau".into()],
        one: vec![1, 0],
        relations: vec![vec![0, 2]],
        rank: vec![1, 0],
        products: vec![
            ProductEntry { left: "epsilon".into(), right: "epsilon".into(), value: vec![1, 0] },
            ProductEntry { left: "epsilon".into(), right: "tau".into(), value: vec![0, 1] },
        ],
        lambda: vec![
            LambdaEntry { generator: "epsilon".into(), powers: vec![vec![1, 0], vec![1, 0], vec![0, 0]] },
            LambdaEntry { generator: "tau".into(), powers: vec![vec![1, 0], vec![0, 1], vec![0, 0]] },
        ],
        top_cycles: vec![],
        pullbacks: BTreeMap::new(),
        classes: BTreeMap::new(),
    })
    .unwrap()
}

fn all_models() -> Vec<Arc<K0Model>> {
    let mut v: Vec<Arc<K0Model>> = Vec::new();
    for n in 2..=4 {
        v.push(a_model(n).unwrap());
        v.push(b_model(n).unwrap());
    }
    v.push(sphere3_model().unwrap());
    v.push(rank_only_model(3).unwrap());
    v.push(projective_space(2));
    v.push(projective_space(3));
    v
}

fn random_class(rng: &mut ChaCha8Rng, m: &Arc<K0Model>) -> K0Class {
    let coords: Vec<i64> = (0..m.ngens()).map(|_| rng.gen_range(-5..=5)).collect();
    m.class(&coords).unwrap()
}

#[test]
fn whitney_on_random_pairs() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for m in all_models() {
        let f = gamma_filtration(&m).unwrap();
        for _ in 0..50 {
            let (x, y) = (random_class(&mut rng, &m), random_class(&mut rng, &m));
            assert!(whitney_holds(&x, &y, &f).unwrap(), "{}: Whitney fails for {x}, {y}", m.name());
        }
    }
}

#[test]
fn gamma_is_binomial_in_lambda() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for m in all_models() {
        let bound = m.lambda_bound();
        for _ in 0..10 {
            let x = random_class(&mut rng, &m);
            let lam = lambda_series(&x, bound).unwrap();
            for k in 1..=bound {
                let mut expected = m.zero();
                for j in 1..=k {
                    let c = binomial(BigInt::from(k - 1), BigInt::from(j - 1));
                    expected = &expected + &lam.coeff(j).scale(&c);
                }
                assert_eq!(gamma(&x, k).unwrap(), expected, "{} γ^{k}({x})", m.name());
            }
        }
    }
}

#[test]
fn filtration_is_multiplicative() {
    for m in all_models() {
        let f = gamma_filtration(&m).unwrap();
        let n = m.dimension();
        for j in 1..=n {
            for k in 1..=n + 1 - j {
                for a in f.generators(j) {
                    for b in f.generators(k) {
                        assert!(f.contains(&a.mul(&b), j + k), "{}: F^{j}·F^{k}", m.name());
                    }
                }
            }
        }
    }
}

#[test]
fn projective_space_grading() {
    for n in 2..=3 {
        let m = projective_space(n);
        let f = gamma_filtration(&m).unwrap();
        for k in 0..=n {
            assert_eq!(f.graded(k).unwrap().to_string(), "Z", "Γ^{k} of P{n}");
        }
        // ξ = 1 - L generates F^1 and c_1(L) = -ξ... as graded classes
        let l = m.generator("L1").unwrap();
        let xi = &m.one() - &l;
        assert!(f.contains(&xi, 1) && !f.contains(&xi, 2));
        assert!(f.contains(&xi.mul(&xi), 2));
        let c = chern_total(&l, &f).unwrap();
        let expected = f.graded_class(&(-&xi).coords().to_vec(), 1);
        assert_eq!(c.get(1), &expected);
        assert!(top_chern_identity_holds(&xi, 1, &f).unwrap());
    }
}

#[test]
fn a_n_ladder() {
    for n in 2..=4 {
        let m = a_model(n).unwrap();
        let f = gamma_filtration(&m).unwrap();
        let lambda = m.generator("lambda").unwrap();
        let top = m.top_cycle_lattice().unwrap();
        for r in 1..=n {
            assert_eq!(f.generators(r).len(), 1, "F^{r} of A{n} should be cyclic");
        }
        let fact: i64 = (1..n as i64).product();
        let fn_lat = f.level(n).clone();
        let rel = Lattice::zero(m.ngens());
        assert!(f.level(n + 1).contains_lattice(&rel) && rel.contains_lattice(f.level(n + 1)));
        assert_eq!(top.sum(&rel).index_of(&fn_lat.sum(&rel)), Some(BigInt::from(fact)));
        let x = lambda.scale_int(fact);
        let c = chern_total(&x, &f).unwrap();
        let sign = if n % 2 == 1 { 1 } else { -1 };
        assert_eq!(c.get(n).rep, lambda.scale_int(sign * fact * fact).coords().to_vec());
        assert!(top_chern_identity_holds(&x, n, &f).unwrap());
        assert!(matches!(cycle_of(&lambda, n, &f), Err(Error::NotInFiltration(_))) || fact == 1);
    }
}

#[test]
fn torsion_detection() {
    let toy = torsion_toy();
    assert!(!torsion_check(&toy, 2));
    assert!(!torsion_check(&toy, 6));
    assert!(torsion_check(&toy, 3));
    assert!(torsion_check(&a_model(3).unwrap(), 2));
    assert_eq!(toy.group().to_string(), "Z + Z/2");
}

#[test]
fn invalid_specs_are_rejected() {
    let mut spec = a_model(2).unwrap().spec().clone();
    spec.rank = vec![1, 1];
    assert!(matches!(K0Model::from_spec(spec), Err(Error::Model(_))));
    let mut spec = a_model(2).unwrap().spec().clone();
    spec.lambda[1].powers.truncate(2);
    assert!(matches!(K0Model::from_spec(spec), Err(Error::Model(_))));
    let mut spec = a_model(2).unwrap().spec().clone();
    spec.products.push(ProductEntry { left: "lambda".into(), right: "lambda".into(), value: vec![0, 1] });
    assert!(matches!(K0Model::from_spec(spec), Err(Error::Model(_))));
}
