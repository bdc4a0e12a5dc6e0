use rayon::prelude::*;

use super::require_good;
use crate::algebra::{format_apoly, APoly, Domain, FiniteField, FqElem, PrimeIdeal};
use crate::drinfeld::{reduce_datum, Datum, ResidueField};
use crate::error::{Error, Result};
use crate::twisted::TwistedPoly;

/// Trace `a` and determinant `b` of Frobenius at `prime`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CharPoly {
    pub a: APoly,
    pub b: APoly,
    pub prime: PrimeIdeal,
}

impl CharPoly {
    /// `(a mod T, b mod T)`.
    pub fn mod_t(&self) -> (FqElem, FqElem) {
        let c0 = |f: &APoly| f.coeff(0).copied().unwrap_or(FqElem(0));
        (c0(&self.a), c0(&self.b))
    }
}

#[derive(Clone, Copy, Debug)]
pub struct SearchConfig {
    /// Largest `deg λ` accepted.
    pub max_degree: usize,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig { max_degree: 6 }
    }
}

/// Closed form at `λ = (T − α)`: `a = −ḡ₁/ḡ₂`, `b = −ḡ₂⁻¹(T − α)`.
pub fn charpoly_deg1(w: &Datum, prime: &PrimeIdeal) -> Result<CharPoly> {
    if prime.degree() != 1 {
        return Err(Error::WrongDegree {
            expected: 1,
            got: prime.degree(),
        });
    }
    require_good(w, prime)?;
    let (f, ring) = (w.field(), w.ring());
    let alpha = f.neg(&prime.generator().coeffs()[0]);
    let g1 = ring.eval(w.g1(), &alpha);
    let g2 = ring.eval(w.g2(), &alpha);
    let g2_inv = f.inv(&g2).expect("good reduction");
    let a = ring.constant(f.neg(&f.mul(&g1, &g2_inv)));
    let b = ring.scale(prime.generator(), &f.neg(&g2_inv));
    Ok(CharPoly {
        a,
        b,
        prime: prime.clone(),
    })
}

/// Whether `τ^{2d} − φ̄_a τ^d + φ̄_b = 0` in `k_λ{τ}`.
pub fn frob_identity_check(w: &Datum, prime: &PrimeIdeal, a: &APoly, b: &APoly) -> Result<bool> {
    require_good(w, prime)?;
    let red = reduce_datum(w, prime);
    let table = red.table();
    let d = prime.degree();
    let k = red.field.clone();
    let lhs = TwistedPoly::tau_pow(k, 2 * d)
        .sub(&table.phi(a).shift(d))?
        .add(&table.phi(b))?;
    Ok(lhs.is_zero())
}

pub fn charpoly_search(w: &Datum, prime: &PrimeIdeal) -> Result<CharPoly> {
    charpoly_search_with(w, prime, SearchConfig::default())
}

/// Exhaustive search over `deg a ≤ ⌊d/2⌋`, `b = u·λ`, widening once to
/// `⌈d/2⌉`. Exactly one candidate must satisfy the identity.
pub fn charpoly_search_with(
    w: &Datum,
    prime: &PrimeIdeal,
    config: SearchConfig,
) -> Result<CharPoly> {
    let d = prime.degree();
    if d > config.max_degree {
        return Err(Error::DegreeCapExceeded {
            degree: d,
            cap: config.max_degree,
        });
    }
    require_good(w, prime)?;
    let red = reduce_datum(w, prime);
    let table = red.table();
    let k = red.field.clone();
    let ring = w.ring();
    let t = ring.var();

    let top = d.div_ceil(2);
    // φ̄_{T^i} τ^d for i ≤ top, padded to length 2d + 1
    let width = 2 * d + 1;
    let pad = |f: &TwistedPoly<ResidueField>| {
        let mut c = f.coeffs().to_vec();
        c.resize(width, k.zero());
        c
    };
    let shifted: Vec<Vec<_>> = (0..=top)
        .map(|i| pad(&table.phi(&ring.pow(&t, i as u64)).shift(d)))
        .collect();
    let phi_l = pad(&table.phi(prime.generator()));
    let f = w.field();
    let units: Vec<FqElem> = f.units().collect();

    let search = |bound: usize| -> Vec<(APoly, FqElem)> {
        let count = f.q().pow(bound as u32 + 1);
        (0..count)
            .into_par_iter()
            .flat_map_iter(|idx| {
                let a = ring.nth_below_degree(idx, bound + 1);
                // τ^{2d} − φ̄_a τ^d
                let mut base = vec![k.zero(); width];
                base[2 * d] = k.one();
                for (i, c) in a.coeffs().iter().enumerate() {
                    if c.index() == 0 {
                        continue;
                    }
                    let c = k.from_fq(*c);
                    for (slot, s) in base.iter_mut().zip(&shifted[i]) {
                        *slot = k.sub(slot, &k.mul(&c, s));
                    }
                }
                units
                    .iter()
                    .filter(|u| {
                        let u = k.from_fq(**u);
                        base.iter()
                            .zip(&phi_l)
                            .all(|(x, l)| k.is_zero(&k.add(x, &k.mul(&u, l))))
                    })
                    .map(|u| (a.clone(), *u))
                    .collect::<Vec<_>>()
            })
            .collect()
    };

    let mut hits = search(d / 2);
    if hits.is_empty() && top > d / 2 {
        hits = search(top);
    }
    let name = || format_apoly(f, prime.generator());
    match hits.len() {
        0 => Err(Error::NoSolution { prime: name() }),
        1 => {
            let (a, u) = hits.pop().expect("one hit");
            Ok(CharPoly {
                a,
                b: ring.scale(prime.generator(), &u),
                prime: prime.clone(),
            })
        }
        count => Err(Error::MultipleSolutions {
            prime: name(),
            count,
        }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{list_primes, make_field, parse_apoly, ARing, FieldSpec};
    use proptest::prelude::*;

    fn setup(p: u64, n: usize, w: &str) -> (FieldSpec, Datum) {
        let f = make_field(p, n, None).unwrap();
        let w = Datum::parse(&f, w).unwrap();
        (f, w)
    }

    fn prime(f: &FieldSpec, s: &str) -> PrimeIdeal {
        PrimeIdeal::new(&ARing::new(f.clone()), parse_apoly(f, s).unwrap()).unwrap()
    }

    fn text(f: &FieldSpec, c: &CharPoly) -> (String, String) {
        (format_apoly(f, &c.a), format_apoly(f, &c.b))
    }

    #[test]
    fn closed_form_at_t_for_unit_datum() {
        let (f, w) = setup(5, 1, "g1=1;g2=1");
        let t = prime(&f, "T");
        let c = charpoly_deg1(&w, &t).unwrap();
        assert_eq!(text(&f, &c), ("4".into(), "4*T".into()));
        assert!(frob_identity_check(&w, &t, &c.a, &c.b).unwrap());
        assert_eq!(charpoly_search(&w, &t).unwrap(), c);
    }

    #[test]
    fn anchor_instance_q5() {
        // g1(1) = 0, g2(1) = 2
        let (f, w) = setup(5, 1, "g1=T+4;g2=3*T+4");
        let l = prime(&f, "T+4");
        let c = charpoly_deg1(&w, &l).unwrap();
        assert_eq!(text(&f, &c), ("0".into(), "2*T+3".into()));
        assert!(frob_identity_check(&w, &l, &c.a, &c.b).unwrap());
        let r = w.ring();
        let a1 = r.add(&c.a, &r.one());
        assert!(!frob_identity_check(&w, &l, &a1, &c.b).unwrap());
        assert_eq!(charpoly_search(&w, &l).unwrap(), c);
    }

    #[test]
    fn search_simple_datum() {
        let (f, w) = setup(5, 1, "g1=0;g2=1");
        let c = charpoly_search(&w, &prime(&f, "T+4")).unwrap();
        assert_eq!(text(&f, &c), ("0".into(), "4*T+1".into()));
    }

    #[test]
    fn search_degree_two_prime() {
        let (f, w) = setup(5, 1, "g1=1;g2=1");
        let l = prime(&f, "T^2+2");
        let c = charpoly_search(&w, &l).unwrap();
        assert!(c.a.deg().unwrap_or(0) <= 1);
        assert!(frob_identity_check(&w, &l, &c.a, &c.b).unwrap());
        let u = c.b.leading().unwrap();
        assert_eq!(w.ring().scale(l.generator(), u), c.b);
    }

    #[test]
    fn errors() {
        let (f, w) = setup(5, 1, "g1=T+4;g2=3*T+4");
        let bad = prime(&f, "T+3");
        assert!(matches!(charpoly_deg1(&w, &bad), Err(Error::BadReduction { .. })));
        assert!(matches!(charpoly_search(&w, &bad), Err(Error::BadReduction { .. })));
        assert!(matches!(
            charpoly_deg1(&w, &prime(&f, "T^2+2")),
            Err(Error::WrongDegree { expected: 1, got: 2 })
        ));
        let cfg = SearchConfig { max_degree: 1 };
        assert!(matches!(
            charpoly_search_with(&w, &prime(&f, "T^2+2"), cfg),
            Err(Error::DegreeCapExceeded { degree: 2, cap: 1 })
        ));
    }

    #[test]
    fn uniqueness_and_shape_up_to_degree_two() {
        let (f, w) = setup(5, 1, "g1=T^2+3;g2=2*T+1");
        for d in 1..=2 {
            for l in list_primes(&f, d) {
                if !crate::drinfeld::has_good_reduction(&w, &l) {
                    continue;
                }
                let c = charpoly_search(&w, &l).unwrap();
                assert!(c.a.deg().unwrap_or(0) <= d / 2);
                let u = *c.b.leading().unwrap();
                assert_eq!(w.ring().scale(l.generator(), &u), c.b);
            }
        }
    }

    #[test]
    fn degree_three_prime_over_f3() {
        let (f, w) = setup(3, 1, "g1=T+1;g2=T^2+2");
        let l = list_primes(&f, 3).into_iter().next().unwrap();
        let c = charpoly_search(&w, &l).unwrap();
        assert!(frob_identity_check(&w, &l, &c.a, &c.b).unwrap());
    }

    fn datum_strategy() -> impl Strategy<Value = (u64, usize, Vec<u64>, Vec<u64>)> {
        prop_oneof![Just((5u64, 1usize)), Just((7, 1)), Just((3, 2))].prop_flat_map(|(p, n)| {
            let q = p.pow(n as u32);
            (
                Just(p),
                Just(n),
                proptest::collection::vec(0..q, 0..4),
                proptest::collection::vec(0..q, 1..4),
            )
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]
        #[test]
        fn closed_form_agrees_with_search((p, n, c1, c2) in datum_strategy()) {
            let f = make_field(p, n, None).unwrap();
            let ring = ARing::new(f.clone());
            let g1 = ring.from_coeffs(c1.iter().map(|&c| f.elem(c)).collect());
            let g2 = ring.from_coeffs(c2.iter().map(|&c| f.elem(c)).collect());
            prop_assume!(!g2.is_zero());
            let w = Datum::new(&f, g1, g2).unwrap();
            for l in list_primes(&f, 1) {
                if !crate::drinfeld::has_good_reduction(&w, &l) {
                    continue;
                }
                prop_assert_eq!(charpoly_deg1(&w, &l).unwrap(), charpoly_search(&w, &l).unwrap());
            }
        }
    }
}
