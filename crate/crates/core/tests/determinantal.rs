use fsing_core::fcriteria::{
    check_witness, frobenius_colon, strongly_fregular, Regularity, RingPresentation, TripleSpec,
};
use fsing_core::frobenius::{bracket_power, FrobeniusPower};
use fsing_core::CoefficientDomain;

const MINORS: [&str; 3] = ["A^4 - B*C", "A^2*B^4 - A^2*D - C*D", "B^5 - B*D - A^2*D"];

fn ring(p: u64) -> RingPresentation {
    let f = CoefficientDomain::prime_field(p).unwrap();
    RingPresentation::parse(&["A", "B", "C", "D"], f, &MINORS).unwrap()
}

#[test]
fn characteristic_three_fiber_needs_cube_frobenius() {
    let r = ring(3);
    let spec = TripleSpec::ring_only(r.clone());
    // no element of the maximal ideal works at q = 9, so checking the
    // variables is exhaustive
    for v in ["A", "B", "C", "D"] {
        let c = r.parse_element(v).unwrap();
        assert!(!strongly_fregular(&spec, &c, 2).unwrap().is_certified(), "{}", v);
    }
    let c = r.parse_element("A").unwrap();
    match strongly_fregular(&spec, &c, 3).unwrap() {
        Regularity::Certified(w) => {
            assert_eq!(w.q.q(), 27);
            assert!(check_witness(&spec, &w).unwrap());
        }
        other => panic!("{:?}", other),
    }
}

#[test]
fn other_fibers_inconclusive_at_first_power() {
    for p in [5u64, 7] {
        let r = ring(p);
        let spec = TripleSpec::ring_only(r.clone());
        let c = r.parse_element("A").unwrap();
        assert_eq!(strongly_fregular(&spec, &c, 1).unwrap(), Regularity::Inconclusive(1));
    }
}

#[test]
fn colon_is_larger_than_bracket_power() {
    let r = ring(3);
    let q = FrobeniusPower::new(3, 1).unwrap();
    let iq = bracket_power(r.relations(), q).unwrap();
    let colon = frobenius_colon(&r, q).unwrap();
    assert!(colon.iter().all(|h| r.relations().generators().iter().all(|g| iq.contains(&(h * g)).unwrap())));
    assert!(colon.iter().any(|h| !iq.contains(h).unwrap()));
}
