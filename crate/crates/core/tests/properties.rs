use fsing_core::fcriteria::{nu_value, sharply_fpure, DivisorData, RingPresentation, TripleSpec};
use fsing_core::frobenius::{bracket_power, frobenius_root, FrobeniusPower};
use fsing_core::poly::{default_names, parse_polynomial, parse_rational};
use fsing_core::{CoefficientDomain, Ideal, Monomial, Polynomial};
use proptest::prelude::*;

const N: usize = 3;

fn domains() -> impl Strategy<Value = CoefficientDomain> {
    prop_oneof![
        Just(CoefficientDomain::Rationals),
        prop::sample::select(vec![2u64, 3, 5, 7]).prop_map(|p| CoefficientDomain::prime_field(p).unwrap()),
    ]
}

fn poly_in(domain: CoefficientDomain, max_exp: u32, max_terms: usize) -> impl Strategy<Value = Polynomial> {
    prop::collection::vec((-4i64..=4, prop::collection::vec(0..=max_exp, N)), 0..=max_terms).prop_map(move |terms| {
        Polynomial::from_terms(domain, N, terms.into_iter().map(|(c, e)| (Monomial::new(e), domain.from_i64(c))))
    })
}

fn fp_poly(p: u64, max_exp: u32, max_terms: usize) -> impl Strategy<Value = Polynomial> {
    poly_in(CoefficientDomain::prime_field(p).unwrap(), max_exp, max_terms)
}

fn triple_of(domain: CoefficientDomain) -> impl Strategy<Value = (Polynomial, Polynomial, Polynomial)> {
    (poly_in(domain, 3, 5), poly_in(domain, 3, 5), poly_in(domain, 3, 5))
}

// polynomials without constant term, so they generate proper ideals
fn in_m(f: Polynomial) -> Polynomial {
    let c = f.constant_term();
    &f - &Polynomial::constant(f.domain(), f.nvars(), c)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn ring_axioms((a, b, c) in domains().prop_flat_map(triple_of)) {
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert!((&a - &a).is_zero());
    }

    #[test]
    fn frobenius_is_additive((a, b) in prop::sample::select(vec![2u64, 3, 5]).prop_flat_map(|p| (fp_poly(p, 2, 3), fp_poly(p, 2, 3)))) {
        let p = a.domain().characteristic();
        prop_assert_eq!((&a + &b).pow(p), &a.pow(p) + &b.pow(p));
        prop_assert_eq!(a.pow(p), a.frobenius_power(p).unwrap());
    }

    #[test]
    fn parse_print_roundtrip(f in domains().prop_flat_map(|d| poly_in(d, 4, 6))) {
        let names = default_names(N);
        let text = f.format_with(&names);
        prop_assert_eq!(parse_polynomial(&text, &names, f.domain()).unwrap(), f);
    }

    #[test]
    fn groebner_is_idempotent((a, b) in (fp_poly(5, 3, 3), fp_poly(5, 3, 3))) {
        let dom = a.domain();
        let i = Ideal::new(dom, N, vec![a.clone(), b.clone()]);
        let gb = i.groebner().unwrap().to_vec();
        let again = Ideal::new(dom, N, gb.clone());
        prop_assert_eq!(again.groebner().unwrap(), &gb[..]);
        prop_assert!(i.contains(&a).unwrap() && i.contains(&b).unwrap());
        prop_assert!(i.contains(&(&a * &b)).unwrap());
    }

    #[test]
    fn colon_contains_and_annihilates((a, b, g) in (fp_poly(3, 2, 3), fp_poly(3, 2, 3), fp_poly(3, 2, 2))) {
        prop_assume!(!g.is_zero());
        let dom = a.domain();
        let i = Ideal::new(dom, N, vec![a, b]);
        let j = Ideal::principal(g.clone());
        let colon = i.colon(&j).unwrap();
        prop_assert!(colon.contains_ideal(&i).unwrap());
        for h in colon.generators() {
            prop_assert!(i.contains(&(h * &g)).unwrap());
        }
    }

    #[test]
    fn roots_are_monotone_and_satisfy_projection((f, g, h) in (fp_poly(3, 4, 3), fp_poly(3, 6, 4), fp_poly(3, 6, 3))) {
        let dom = f.domain();
        let q = FrobeniusPower::new(3, 1).unwrap();
        let small = Ideal::new(dom, N, vec![g.clone()]);
        let big = Ideal::new(dom, N, vec![g.clone(), h]);
        let (rs, rb) = (frobenius_root(&small, q).unwrap(), frobenius_root(&big, q).unwrap());
        prop_assert!(rb.contains_ideal(&rs).unwrap());
        // root(f^q g) = f root(g)
        let lhs = frobenius_root(&Ideal::principal(&f.frobenius_power(3).unwrap() * &g), q).unwrap();
        prop_assert!(lhs.equals(&rs.scale(&f)).unwrap());
        // I ⊆ root(I)^[q]
        prop_assert!(bracket_power(&rs, q).unwrap().contains_ideal(&small).unwrap());
    }

    #[test]
    fn nu_is_superadditive(f in fp_poly(5, 3, 3).prop_map(in_m)) {
        prop_assume!(!f.is_zero());
        let point: Vec<usize> = (0..N).collect();
        let nu1 = nu_value(&f, 1, &point).unwrap();
        let nu2 = nu_value(&f, 2, &point).unwrap();
        prop_assert!(nu2 >= 5 * nu1);
        prop_assert!(nu1 <= 4);
    }

    #[test]
    fn purity_is_monotone_in_lambda(f in fp_poly(5, 3, 3).prop_map(in_m), k in 1i64..5) {
        prop_assume!(!f.is_zero());
        let ring = RingPresentation::polynomial_ring(default_names(N), f.domain());
        let at = |c: String| {
            let d = DivisorData::single(f.clone(), parse_rational(&c).unwrap());
            let t = TripleSpec::pair(ring.clone(), d).unwrap();
            sharply_fpure(&t, 1).unwrap().holds()
        };
        let below = at(format!("{}/4", k));
        let above = at(format!("{}/4", k + 1));
        prop_assert!(below || !above);
    }
}
