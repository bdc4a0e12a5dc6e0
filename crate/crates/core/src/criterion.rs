//! The five congruence conditions on `(g₁, g₂)` relative to a tuple
//! `(a₁, a₂, η)`, witness search, and the one-sided surjectivity verdict.

use crate::algebra::{is_square, Domain, FieldSpec, FiniteField, FqElem};
use crate::drinfeld::Datum;
use crate::error::{Error, Result};

/// Witness tuple: distinct nonzero anchors `a₁, a₂` and a nonsquare `η`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Tuple {
    pub a1: FqElem,
    pub a2: FqElem,
    pub eta: FqElem,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Conditions {
    /// `(T − a₁) | g₁`
    pub c1_div: bool,
    /// `gcd(g₁, T(T − a₂)) = 1`
    pub c2_coprime: bool,
    /// `(T − a₂) ∥ g₂`
    pub c3_exact_div: bool,
    /// `g₂ ≡ −a₁η⁻¹ mod (T − a₁)`
    pub c4_congruence: bool,
    /// `gcd(g₂, T) = 1`
    pub c5_coprime_t: bool,
}

impl Conditions {
    pub fn all(&self) -> bool {
        self.c1_div && self.c2_coprime && self.c3_exact_div && self.c4_congruence && self.c5_coprime_t
    }

    /// `(key, value)` pairs in condition order, keyed for reports.
    pub fn named(&self) -> [(&'static str, bool); 5] {
        [
            ("divisible_T_minus_a1", self.c1_div),
            ("coprime_T_T_minus_a2", self.c2_coprime),
            ("exact_order_T_minus_a2", self.c3_exact_div),
            ("congruence_eta", self.c4_congruence),
            ("coprime_T", self.c5_coprime_t),
        ]
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CriterionReport {
    pub tuple: Tuple,
    pub conditions: Conditions,
    pub pass: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    ProvedSurjective(CriterionReport),
    Unknown,
}

impl Verdict {
    pub fn as_str(&self) -> &'static str {
        match self {
            Verdict::ProvedSurjective(_) => "proved_surjective",
            Verdict::Unknown => "unknown",
        }
    }
}

pub fn require_odd_q(field: &FieldSpec) -> Result<()> {
    if field.p() == 2 || field.q() < 5 {
        return Err(Error::SmallOrEvenQ { q: field.q() });
    }
    Ok(())
}

pub fn validate_tuple(field: &FieldSpec, t: &Tuple) -> Result<()> {
    require_odd_q(field)?;
    if field.is_zero(&t.a1) || field.is_zero(&t.a2) {
        return Err(Error::ZeroAnchor);
    }
    if t.a1 == t.a2 {
        return Err(Error::EqualAnchors);
    }
    if field.is_zero(&t.eta) || is_square(field, t.eta) {
        return Err(Error::EtaIsSquare);
    }
    Ok(())
}

/// All admissible tuples, `a₁` outermost, then `a₂`, then `η`.
pub fn tuples(field: &FieldSpec) -> Vec<Tuple> {
    let units: Vec<FqElem> = field.units().collect();
    let nonsquares: Vec<FqElem> = units.iter().copied().filter(|x| !is_square(field, *x)).collect();
    let mut out = Vec::new();
    for &a1 in &units {
        for &a2 in units.iter().filter(|&&a| a != a1) {
            for &eta in &nonsquares {
                out.push(Tuple { a1, a2, eta });
            }
        }
    }
    out
}

/// Values of `g₁`, `g₂`, `g₂'` at every point of `F_q`, indexed by
/// enumeration index. All five conditions read only these.
struct Local {
    g1: Vec<FqElem>,
    g2: Vec<FqElem>,
    dg2: Vec<FqElem>,
}

impl Local {
    fn new(w: &Datum) -> Self {
        let ring = w.ring();
        let dg2 = ring.derivative(w.g2());
        let at = |f| w.field().all().map(|x| ring.eval(f, &x)).collect();
        Local {
            g1: at(w.g1()),
            g2: at(w.g2()),
            dg2: at(&dg2),
        }
    }

    fn conditions(&self, f: &FieldSpec, t: &Tuple) -> Conditions {
        let (i1, i2) = (t.a1.index() as usize, t.a2.index() as usize);
        let nonzero = |x: &FqElem| x.index() != 0;
        let target = f.neg(&f.mul(&t.a1, &f.inv(&t.eta).expect("eta nonzero")));
        Conditions {
            c1_div: !nonzero(&self.g1[i1]),
            c2_coprime: nonzero(&self.g1[0]) && nonzero(&self.g1[i2]),
            c3_exact_div: !nonzero(&self.g2[i2]) && nonzero(&self.dg2[i2]),
            c4_congruence: self.g2[i1] == target,
            c5_coprime_t: nonzero(&self.g2[0]),
        }
    }
}

pub fn check_conditions(w: &Datum, tuple: Tuple) -> Result<CriterionReport> {
    validate_tuple(w.field(), &tuple)?;
    let conditions = Local::new(w).conditions(w.field(), &tuple);
    Ok(CriterionReport {
        tuple,
        conditions,
        pass: conditions.all(),
    })
}

/// First passing tuple in enumeration order.
pub fn find_witness(w: &Datum) -> Result<Option<CriterionReport>> {
    find_witness_among(w, &tuples(w.field()))
}

/// As [`find_witness`], over a precomputed tuple list.
pub fn find_witness_among(w: &Datum, tuples: &[Tuple]) -> Result<Option<CriterionReport>> {
    let f = w.field();
    require_odd_q(f)?;
    // cheap reject: (2) and (5) need g₁(0) ≠ 0 and g₂(0) ≠ 0
    let ring = w.ring();
    if f.is_zero(&ring.eval(w.g1(), &f.zero())) || f.is_zero(&ring.eval(w.g2(), &f.zero())) {
        return Ok(None);
    }
    let local = Local::new(w);
    Ok(tuples.iter().find_map(|t| {
        let conditions = local.conditions(f, t);
        conditions.all().then_some(CriterionReport {
            tuple: *t,
            conditions,
            pass: true,
        })
    }))
}

pub fn surjectivity_verdict(w: &Datum) -> Result<Verdict> {
    Ok(match find_witness(w)? {
        Some(r) => Verdict::ProvedSurjective(r),
        None => Verdict::Unknown,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{make_field, valuation, ARing, PrimeIdeal};
    use crate::drinfeld::{reduce_at, ReductionKind};
    use crate::frobenius::charpoly_deg1;
    use proptest::prelude::*;

    fn f5() -> FieldSpec {
        make_field(5, 1, None).unwrap()
    }

    fn tuple(f: &FieldSpec, a1: i64, a2: i64, eta: i64) -> Tuple {
        Tuple {
            a1: f.from_int(a1),
            a2: f.from_int(a2),
            eta: f.from_int(eta),
        }
    }

    #[test]
    fn anchor_datum_passes() {
        let f = f5();
        let w = Datum::parse(&f, "g1=T+4;g2=3*T+4").unwrap();
        let r = check_conditions(&w, tuple(&f, 1, 2, 2)).unwrap();
        assert!(r.pass);
        assert!(r.conditions.named().iter().all(|(_, v)| *v));
        let v = surjectivity_verdict(&w).unwrap();
        assert_eq!(v.as_str(), "proved_surjective");
    }

    #[test]
    fn t_dividing_g1_fails_condition_two() {
        let f = f5();
        let w = Datum::parse(&f, "g1=T;g2=3*T+4").unwrap();
        let r = check_conditions(&w, tuple(&f, 1, 2, 2)).unwrap();
        assert!(!r.conditions.c2_coprime && !r.pass);
    }

    #[test]
    fn validation_errors() {
        let f = f5();
        let w = Datum::parse(&f, "g1=T+4;g2=3*T+4").unwrap();
        assert_eq!(check_conditions(&w, tuple(&f, 1, 2, 4)).unwrap_err(), Error::EtaIsSquare);
        assert_eq!(check_conditions(&w, tuple(&f, 1, 1, 2)).unwrap_err(), Error::EqualAnchors);
        assert_eq!(check_conditions(&w, tuple(&f, 0, 1, 2)).unwrap_err(), Error::ZeroAnchor);
        let f3 = make_field(3, 1, None).unwrap();
        let w3 = Datum::parse(&f3, "g1=1;g2=1").unwrap();
        assert_eq!(surjectivity_verdict(&w3).unwrap_err(), Error::SmallOrEvenQ { q: 3 });
    }

    #[test]
    fn no_witness_cases() {
        let f = f5();
        for s in ["g1=T^2+4*T;g2=3*T+4", "g1=0;g2=1"] {
            let w = Datum::parse(&f, s).unwrap();
            assert_eq!(find_witness(&w).unwrap(), None);
            assert_eq!(surjectivity_verdict(&w).unwrap(), Verdict::Unknown);
        }
    }

    #[test]
    fn tuple_counts() {
        for (p, n) in [(5, 1), (7, 1), (3, 2)] {
            let f = make_field(p, n, None).unwrap();
            let q = f.q() as usize;
            assert_eq!(tuples(&f).len(), (q - 1) * (q - 2) * (q - 1) / 2);
        }
    }

    // Oracle: conditions restated as polynomial divisibility in A.
    fn by_division(w: &Datum, t: &Tuple) -> [bool; 5] {
        let r = w.ring();
        let f = w.field();
        let l1 = r.linear(&t.a1);
        let l2 = r.linear(&t.a2);
        let tt = r.var();
        let target = f.neg(&f.mul(&t.a1, &f.inv(&t.eta).unwrap()));
        let one = r.one();
        [
            r.divides(&l1, w.g1()),
            r.gcd(w.g1(), &r.mul(&tt, &l2)) == one,
            r.divides(&l2, w.g2()) && !r.divides(&r.mul(&l2, &l2), w.g2()),
            r.rem(w.g2(), &l1).unwrap() == r.constant(target),
            r.gcd(w.g2(), &tt) == one,
        ]
    }

    fn flags(c: &Conditions) -> [bool; 5] {
        c.named().map(|(_, v)| v)
    }

    fn poly_strategy(q: u64, max_len: usize) -> impl Strategy<Value = Vec<u64>> {
        proptest::collection::vec(0..q, 0..max_len)
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(200))]
        #[test]
        fn evaluation_matches_division(c1 in poly_strategy(5, 6), c2 in poly_strategy(5, 6), ti in 0usize..24) {
            let f = f5();
            let ring = ARing::new(f.clone());
            let g2 = ring.from_coeffs(c2.iter().map(|&c| f.elem(c)).collect());
            prop_assume!(!g2.is_zero());
            let g1 = ring.from_coeffs(c1.iter().map(|&c| f.elem(c)).collect());
            let w = Datum::new(&f, g1, g2).unwrap();
            let t = tuples(&f)[ti];
            let r = check_conditions(&w, t).unwrap();
            prop_assert_eq!(flags(&r.conditions), by_division(&w, &t));
        }

        #[test]
        fn invariant_under_moduli_shifts(c1 in poly_strategy(5, 4), c2 in poly_strategy(5, 5),
                                         h1 in poly_strategy(5, 3), h2 in poly_strategy(5, 3), ti in 0usize..24) {
            let f = f5();
            let r = ARing::new(f.clone());
            let t = tuples(&f)[ti];
            let g1 = r.from_coeffs(c1.iter().map(|&c| f.elem(c)).collect());
            let g2 = r.from_coeffs(c2.iter().map(|&c| f.elem(c)).collect());
            let h1 = r.from_coeffs(h1.iter().map(|&c| f.elem(c)).collect());
            let h2 = r.from_coeffs(h2.iter().map(|&c| f.elem(c)).collect());
            let (l1, l2) = (r.linear(&t.a1), r.linear(&t.a2));
            let m1 = r.mul(&r.mul(&r.var(), &l1), &l2);
            let m2 = r.mul(&m1, &l2);
            let g1s = r.add(&g1, &r.mul(&h1, &m1));
            let g2s = r.add(&g2, &r.mul(&h2, &m2));
            prop_assume!(!g2.is_zero() && !g2s.is_zero());
            let a = check_conditions(&Datum::new(&f, g1, g2).unwrap(), t).unwrap();
            let b = check_conditions(&Datum::new(&f, g1s, g2s).unwrap(), t).unwrap();
            prop_assert_eq!(a.conditions, b.conditions);
        }

        // structure forced by a passing tuple
        #[test]
        fn passing_data_have_forced_structure(c1 in poly_strategy(5, 4), c2 in poly_strategy(5, 4)) {
            let f = f5();
            let r = ARing::new(f.clone());
            let g2 = r.from_coeffs(c2.iter().map(|&c| f.elem(c)).collect());
            prop_assume!(!g2.is_zero());
            let g1 = r.from_coeffs(c1.iter().map(|&c| f.elem(c)).collect());
            let w = Datum::new(&f, g1, g2).unwrap();
            let Some(rep) = find_witness(&w).unwrap() else { return Ok(()); };
            let t = rep.tuple;
            let tp = PrimeIdeal::new(&r, r.var()).unwrap();
            let info = reduce_at(&w, &tp).unwrap();
            prop_assert_eq!((info.kind, info.height), (ReductionKind::Good, Some(1)));
            let l1 = PrimeIdeal::new(&r, r.linear(&t.a1)).unwrap();
            let cp = charpoly_deg1(&w, &l1).unwrap();
            prop_assert!(cp.a.is_zero());
            let expected_b = r.scale(&r.sub(&r.scale(&r.var(), &f.inv(&t.a1).unwrap()), &r.one()), &t.eta);
            prop_assert_eq!(&cp.b, &expected_b);
            prop_assert_eq!(cp.mod_t(), (f.zero(), f.neg(&t.eta)));
            let l2 = PrimeIdeal::new(&r, r.linear(&t.a2)).unwrap();
            prop_assert_eq!(valuation(&r, w.g1(), &l2), Some(0));
            prop_assert_eq!(valuation(&r, w.g2(), &l2), Some(1));
        }
    }

    #[test]
    fn witness_is_enumeration_first() {
        let f = f5();
        let w = Datum::parse(&f, "g1=T+4;g2=3*T+4").unwrap();
        let rep = find_witness(&w).unwrap().unwrap();
        let first = tuples(&f)
            .into_iter()
            .find(|t| check_conditions(&w, *t).unwrap().pass)
            .unwrap();
        assert_eq!(rep.tuple, first);
        assert_eq!(rep.tuple, tuple(&f, 1, 2, 2));
    }
}
