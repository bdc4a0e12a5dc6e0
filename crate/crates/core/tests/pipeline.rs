use drinfeld_core::algebra::{format_apoly, list_primes, make_field, parse_apoly, ARing, Domain, FieldSpec};
use drinfeld_core::census::{count_all, count_congruence_class, fixed_class, scan, HeightParams};
use drinfeld_core::criterion::{find_witness, surjectivity_verdict, Verdict};
use drinfeld_core::diagnostics::{cross_validate, SampleConfig};
use drinfeld_core::drinfeld::{has_good_reduction, Datum};
use drinfeld_core::frobenius::{charpoly_deg1, charpoly_search};
use drinfeld_core::golden::PASSING_Q5;
use proptest::prelude::*;

fn f5() -> FieldSpec {
    make_field(5, 1, None).unwrap()
}

#[test]
fn golden_data_pass_the_criterion() {
    let f = f5();
    for s in PASSING_Q5 {
        let w = Datum::parse(&f, s).unwrap();
        assert!(matches!(surjectivity_verdict(&w).unwrap(), Verdict::ProvedSurjective(_)), "{s}");
    }
}

#[test]
fn closed_form_matches_search_on_golden_data() {
    let f = f5();
    for s in PASSING_Q5 {
        let w = Datum::parse(&f, s).unwrap();
        for l in list_primes(&f, 1).iter().filter(|l| has_good_reduction(&w, l)) {
            let (c, d) = (charpoly_deg1(&w, l).unwrap(), charpoly_search(&w, l).unwrap());
            assert_eq!((c.a, c.b), (d.a, d.b), "{s} at {}", format_apoly(&f, l.generator()));
        }
    }
}

#[test]
fn matrices_agree_with_search_over_f9() {
    let f = make_field(3, 2, None).unwrap();
    let w = Datum::parse(&f, "g1=T+(1,1);g2=(0,1)").unwrap();
    let cfg = SampleConfig { max_prime_degree: 1, ..SampleConfig::default() };
    assert!(!cross_validate(&w, &cfg).unwrap().checked.is_empty());
}

#[test]
fn fixed_class_count_matches_scan() {
    let f = f5();
    let (_, class) = fixed_class(&f).unwrap();
    let ring = ARing::new(f.clone());
    for x in 1..=3 {
        let params = HeightParams::new(1, 1, x);
        let scanned = scan(&f, params, 1 << 20, |g1, g2| class.contains(&ring, g1, g2)).unwrap();
        assert_eq!(count_congruence_class(5, params, &class), scanned.into());
        let all = scan(&f, params, 1 << 20, |_, _| true).unwrap();
        assert_eq!(count_all(5, params), all.into());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn datum_text_round_trips(g1 in proptest::collection::vec(0..5u64, 0..5), g2 in proptest::collection::vec(0..5u64, 1..5)) {
        let f = f5();
        let ring = ARing::new(f.clone());
        let poly = |c: &[u64]| ring.from_coeffs(c.iter().map(|&i| f.elem(i)).collect());
        let g2 = poly(&g2);
        prop_assume!(!ring.is_zero(&g2));
        let w = Datum::new(&f, poly(&g1), g2).unwrap();
        let text = w.to_string();
        let back = Datum::parse(&f, &text).unwrap();
        prop_assert_eq!(back.to_string(), text);
        prop_assert_eq!(parse_apoly(&f, &format_apoly(&f, w.g1())).unwrap(), w.g1().clone());
    }

    #[test]
    fn witness_is_first_passing_tuple(g1 in proptest::collection::vec(0..5u64, 0..4), g2 in proptest::collection::vec(0..5u64, 1..5)) {
        let f = f5();
        let ring = ARing::new(f.clone());
        let poly = |c: &[u64]| ring.from_coeffs(c.iter().map(|&i| f.elem(i)).collect());
        let g2 = poly(&g2);
        prop_assume!(!ring.is_zero(&g2));
        let w = Datum::new(&f, poly(&g1), g2).unwrap();
        let found = find_witness(&w).unwrap();
        let first = drinfeld_core::criterion::tuples(&f)
            .into_iter()
            .find(|t| drinfeld_core::criterion::check_conditions(&w, *t).unwrap().pass);
        prop_assert_eq!(found.map(|r| r.tuple), first);
    }
}
