use ciwb_core::suslin::{complete_row, universal_certificate, verify_certificate, SuslinCertificate};
use ciwb_core::universal::a_n;
use ciwb_core::{Error, RingPresentation};

#[test]
fn r2_determinant_is_w() {
    let r = RingPresentation::parse("Q[x1,x2,y1,y2]", &[]).unwrap();
    let p = |s: &str| r.parse_poly(s).unwrap();
    let w = p("x1*y1 + x2*y2");
    let c = complete_row(&r, &[p("x1"), p("x2")], &[p("y1"), p("y2")], &w).unwrap();
    assert_eq!(c.matrix.det().unwrap(), w);
    assert_eq!(c.matrix.column(0), vec![p("x1"), p("x2")]);
}

#[test]
fn universal_r3() {
    let c = universal_certificate(3).unwrap();
    let a = a_n(3).unwrap();
    let col: Vec<String> = c.matrix.column(0).iter().map(|p| p.to_string()).collect();
    assert_eq!(col, ["X1", "X2", "X3^2"]);
    let det = c.matrix.det().unwrap();
    assert!(a.equal(&det, &a.parse_poly("S^2*T^2").unwrap()));
    assert!(verify_certificate(&c));
}

#[test]
fn r3_over_a_polynomial_ring() {
    // x1 y1 + x2 y2 + x3 y3 = w holds identically when w is that sum
    let r = RingPresentation::parse("Q[x1,x2,x3,y1,y2,y3]", &[]).unwrap();
    let p = |s: &str| r.parse_poly(s).unwrap();
    let xs = [p("x1"), p("x2"), p("x3")];
    let ys = [p("y1"), p("y2"), p("y3")];
    let w = p("x1*y1 + x2*y2 + x3*y3");
    let c = complete_row(&r, &xs, &ys, &w).unwrap();
    assert_eq!(c.matrix.det().unwrap(), w.pow(2));
}

#[test]
fn records_round_trip() {
    for r in 2..=3 {
        let c = universal_certificate(r).unwrap();
        let rec = c.record();
        let json = serde_json::to_string(&rec).unwrap();
        let back: ciwb_core::suslin::CertificateRecord = serde_json::from_str(&json).unwrap();
        assert_eq!(back, rec);
        let again = SuslinCertificate::from_record(c.presentation(), &back).unwrap();
        assert!(verify_certificate(&again));
        assert!(again.matrix.equals(&c.matrix));
    }
}

#[test]
fn unsupported_sizes() {
    // X1·Y1 = ST admits no 1×1 completion
    assert!(matches!(universal_certificate(1), Err(Error::Unsupported(_))));
    assert!(matches!(universal_certificate(4), Err(Error::Unsupported(_))));
}
