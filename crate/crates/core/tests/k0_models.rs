use ciwb_core::k0_models::{
    b_model, builtin_model, divisibility_check, natural_map, sphere3_chow_model, sphere_obstruction_demo,
    theorem81_witness, ModelFile, SphereReport,
};
use ciwb_core::lambda_ring::gamma_filtration;
use ciwb_core::Error;
use num_bigint::BigInt;

#[test]
fn builtin_lookup() {
    for name in ["A2", "A_3", "B4", "sphere3"] {
        let (k0, chow) = builtin_model(name).unwrap();
        chow.check_against(&k0).unwrap();
    }
    for bad in ["A0", "A5", "Z3", ""] {
        assert!(matches!(builtin_model(bad), Err(Error::UnknownModel(_))), "{bad}");
    }
}

#[test]
fn natural_maps_are_isomorphisms() {
    for n in 2..=4 {
        let f = natural_map(n).unwrap();
        assert!(f.is_isomorphism().unwrap());
        let lambda = f.source.generator("lambda").unwrap();
        assert_eq!(f.apply(&lambda).unwrap(), b_model(n).unwrap().generator("beta").unwrap());
    }
}

#[test]
fn quotient_classes_of_a_n() {
    for n in 2..=4 {
        let (k0, _) = builtin_model(&format!("A{n}")).unwrap();
        let j = k0.named_class(&format!("A/J{n}")).unwrap();
        let jp = k0.named_class(&format!("A/J'{n}")).unwrap();
        let fact: i64 = (1..n as i64).product();
        assert_eq!(jp, j.scale_int(fact));
    }
}

#[test]
fn chow_divisibility() {
    let ch = sphere3_chow_model().unwrap();
    let point = ch.generator("point").unwrap();
    assert!(divisibility_check(&point, 2).is_none());
    // in Z/2 the point is divisible by every odd number
    assert_eq!(divisibility_check(&point, 3).unwrap(), point);
    assert!(divisibility_check(&point.scale(&BigInt::from(2)), 2).is_some());
}

#[test]
fn theorem81_across_dimensions() {
    for n in 2..=4 {
        let (k0, ch) = builtin_model(&format!("A{n}")).unwrap();
        let f = gamma_filtration(&k0).unwrap();
        let q0 = k0.class(&[n as i64 - 1, 0]).unwrap();
        for k in [-3i64, -1, 1, 2, 5] {
            let fact: i64 = (1..n as i64).product();
            let q = k0.class(&[n as i64, k * fact]).unwrap();
            let run = theorem81_witness(&q, &q0, &f, Some(&ch)).unwrap();
            assert_eq!(run.witness.scale_int(fact), run.alternating_sum);
            assert_eq!(run.chain.last().unwrap().0, n);
        }
    }
}

#[test]
fn theorem81_rank_mismatch() {
    let (k0, _) = builtin_model("A3").unwrap();
    let f = gamma_filtration(&k0).unwrap();
    let err = theorem81_witness(&k0.class(&[2, 0]).unwrap(), &k0.class(&[2, 0]).unwrap(), &f, None).unwrap_err();
    assert!(matches!(err, Error::Precondition(_)));
}

#[test]
fn sphere_report_serialises() {
    let r = sphere_obstruction_demo().unwrap();
    let back: SphereReport = serde_json::from_str(&serde_json::to_string(&r).unwrap()).unwrap();
    assert_eq!(back, r);
    assert_eq!(r.k0_group, "Z");
    assert_eq!(r.cycle_order.as_deref(), Some("2"));
}

#[test]
fn model_file_edits_are_validated() {
    let mut file = ModelFile::builtin("A3").unwrap();
    file.k0.one = vec![2, 0];
    assert!(matches!(file.build(), Err(Error::Model(_))));
    let text = ModelFile::builtin("B2").unwrap().to_toml().unwrap();
    assert!(text.contains("[k0]") || text.contains("[k0."));
    assert!(matches!(ModelFile::parse("{ not json"), Err(Error::Fixture(_))));
}
