//! Rank-2 Drinfeld modules `φ_T = T + g₁τ + g₂τ²` over `A`.

use std::fmt;
use std::sync::RwLock;

use crate::algebra::{
    format_apoly, list_primes, parse_apoly, valuation, APoly, ARing, Domain, ExtField,
    FieldSpec, FiniteField, FqElem, PrimeIdeal,
};
use crate::error::{Error, Result};
use crate::twisted::{tw_mul, TwistedPoly};

/// Residue field `k_λ = A/λ`.
pub type ResidueField = ExtField<FieldSpec>;

/// A Drinfeld datum `w = (g₁, g₂)` with `g₂ != 0`.
#[derive(Clone, PartialEq)]
pub struct Datum {
    ring: ARing,
    g1: APoly,
    g2: APoly,
}

impl Datum {
    pub fn new(field: &FieldSpec, g1: APoly, g2: APoly) -> Result<Self> {
        if g2.is_zero() {
            return Err(Error::ZeroG2);
        }
        Ok(Datum {
            ring: ARing::new(field.clone()),
            g1,
            g2,
        })
    }

    /// Parses `g1=<poly>;g2=<poly>`.
    pub fn parse(field: &FieldSpec, s: &str) -> Result<Self> {
        let (mut g1, mut g2) = (None, None);
        for part in s.split(';').map(str::trim).filter(|p| !p.is_empty()) {
            let (key, value) = part
                .split_once('=')
                .ok_or_else(|| Error::Parse(format!("expected key=value, got {part:?}")))?;
            let poly = parse_apoly(field, value)?;
            match key.trim() {
                "g1" => g1 = Some(poly),
                "g2" => g2 = Some(poly),
                other => return Err(Error::Parse(format!("unknown datum key {other:?}"))),
            }
        }
        match (g1, g2) {
            (Some(g1), Some(g2)) => Datum::new(field, g1, g2),
            _ => Err(Error::Parse("datum needs both g1 and g2".into())),
        }
    }

    pub fn field(&self) -> &FieldSpec {
        self.ring.base()
    }

    pub fn ring(&self) -> &ARing {
        &self.ring
    }

    pub fn g1(&self) -> &APoly {
        &self.g1
    }

    pub fn g2(&self) -> &APoly {
        &self.g2
    }

    /// `φ_T = T + g₁τ + g₂τ²` in `A{τ}`.
    pub fn phi_t(&self) -> TwistedPoly<ARing> {
        TwistedPoly::new(
            self.ring.clone(),
            vec![self.ring.var(), self.g1.clone(), self.g2.clone()],
        )
    }
}

impl fmt::Display for Datum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "g1={};g2={}",
            format_apoly(self.field(), &self.g1),
            format_apoly(self.field(), &self.g2)
        )
    }
}

impl fmt::Debug for Datum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Datum({self})")
    }
}

/// `φ_a` for all `a`, from a fixed `φ_T` over some domain, with a cache of
/// the powers `φ_T^i`. Safe to share between threads.
pub struct PhiTable<D: Domain> {
    powers: RwLock<Vec<TwistedPoly<D>>>,
}

impl<D: Domain> PhiTable<D> {
    pub fn new(phi_t: TwistedPoly<D>) -> Self {
        let one = TwistedPoly::one(phi_t.domain().clone());
        PhiTable {
            powers: RwLock::new(vec![one, phi_t]),
        }
    }

    /// `φ_T^i`.
    pub fn power(&self, i: usize) -> TwistedPoly<D> {
        if let Some(p) = self.powers.read().expect("poisoned").get(i) {
            return p.clone();
        }
        let mut powers = self.powers.write().expect("poisoned");
        while powers.len() <= i {
            let next = tw_mul(&powers[powers.len() - 1], &powers[1]).expect("same domain");
            powers.push(next);
        }
        powers[i].clone()
    }

    /// `φ_a = Σ c_i φ_T^i` for `a = Σ c_i T^i`.
    pub fn phi(&self, a: &APoly) -> TwistedPoly<D> {
        let domain = self.powers.read().expect("poisoned")[0].domain().clone();
        let mut acc = TwistedPoly::zero(domain.clone());
        for (i, c) in a.coeffs().iter().enumerate() {
            if c.index() == 0 {
                continue;
            }
            let term = self.power(i).scale(&domain.from_fq(*c));
            acc = acc.add(&term).expect("same domain");
        }
        acc
    }
}

/// `φ_a` in `A{τ}`.
pub fn phi_of(w: &Datum, a: &APoly) -> TwistedPoly<ARing> {
    PhiTable::new(w.phi_t()).phi(a)
}

/// `g₁^{q+1} / g₂` in lowest terms with monic denominator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JInvariant {
    pub numerator: APoly,
    pub denominator: APoly,
}

pub fn j_invariant(w: &Datum) -> JInvariant {
    let ring = w.ring();
    let q = w.field().q();
    let num = ring.pow(w.g1(), q + 1);
    if num.is_zero() {
        return JInvariant {
            numerator: num,
            denominator: ring.one(),
        };
    }
    let g = ring.gcd(&num, w.g2());
    let num = ring.divrem(&num, &g).expect("nonzero gcd").0;
    let den = ring.divrem(w.g2(), &g).expect("nonzero gcd").0;
    let lc_inv = w
        .field()
        .inv(den.leading().expect("nonzero"))
        .expect("nonzero");
    JInvariant {
        numerator: ring.scale(&num, &lc_inv),
        denominator: ring.scale(&den, &lc_inv),
    }
}

/// The datum of the module isomorphic via `c`: `(c^{q-1} g₁, c^{q²-1} g₂)`.
pub fn twist(w: &Datum, c: FqElem) -> Result<Datum> {
    let f = w.field();
    if c.index() == 0 {
        return Err(Error::ZeroTwist);
    }
    let q = f.q();
    let ring = w.ring();
    let g1 = ring.scale(w.g1(), &f.pow_u64(&c, q - 1));
    let g2 = ring.scale(w.g2(), &f.pow_u64(&c, q * q - 1));
    Datum::new(f, g1, g2)
}

/// No monic irreducible `f` with `f^{q-1} | g₁` and `f^{q²-1} | g₂`.
pub fn is_minimal(w: &Datum) -> bool {
    let q = w.field().q() as usize;
    let deg2 = w.g2().deg().expect("g2 nonzero");
    let mut bound = deg2 / (q * q - 1);
    if let Some(deg1) = w.g1().deg() {
        bound = bound.min(deg1 / (q - 1));
    }
    for d in 1..=bound {
        for f in list_primes(w.field(), d) {
            let v1 = valuation(w.ring(), w.g1(), &f);
            let v2 = valuation(w.ring(), w.g2(), &f).expect("g2 nonzero");
            if v1.is_none_or(|v| v >= q - 1) && v2 >= q * q - 1 {
                return false;
            }
        }
    }
    true
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ReductionKind {
    Good,
    StableRank1,
    Unstable,
}

impl ReductionKind {
    pub fn as_str(self) -> &'static str {
        match self {
            ReductionKind::Good => "good",
            ReductionKind::StableRank1 => "stable_rank1",
            ReductionKind::Unstable => "unstable",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReductionInfo {
    pub prime: PrimeIdeal,
    pub kind: ReductionKind,
    /// Height `H ∈ {1, 2}`, present iff the reduction is good.
    pub height: Option<usize>,
}

/// `φ` reduced coefficient-wise into `k_λ{τ}`.
pub struct Reduction {
    pub field: ResidueField,
    pub phi_t: TwistedPoly<ResidueField>,
}

impl Reduction {
    pub fn table(&self) -> PhiTable<ResidueField> {
        PhiTable::new(self.phi_t.clone())
    }

    pub fn reduce(&self, a: &APoly) -> Vec<FqElem> {
        self.field.from_poly(a)
    }
}

pub fn residue_field(prime: &PrimeIdeal, field: &FieldSpec) -> ResidueField {
    ExtField::new_unchecked(field.clone(), prime.generator().clone())
}

/// Coefficient-wise reduction of `φ_T` modulo `λ` (no validity checks).
pub fn reduce_datum(w: &Datum, prime: &PrimeIdeal) -> Reduction {
    let k = residue_field(prime, w.field());
    let phi_t = w.phi_t().map_coeffs(k.clone(), |c| k.from_poly(c));
    Reduction { field: k, phi_t }
}

pub fn has_good_reduction(w: &Datum, prime: &PrimeIdeal) -> bool {
    !w.ring().divides(prime.generator(), w.g2())
}

/// Reduction type at `λ` for a minimal datum, with the height
/// `H = ht_τ(φ̄_λ) / deg λ` computed from its definition when good.
pub fn reduce_at(w: &Datum, prime: &PrimeIdeal) -> Result<ReductionInfo> {
    if !is_minimal(w) {
        return Err(Error::NonMinimalDatum);
    }
    let ring = w.ring();
    let l = prime.generator();
    let kind = match (ring.divides(l, w.g1()), ring.divides(l, w.g2())) {
        (_, false) => ReductionKind::Good,
        (true, true) => ReductionKind::Unstable,
        (false, true) => ReductionKind::StableRank1,
    };
    let height = (kind == ReductionKind::Good).then(|| {
        let red = reduce_datum(w, prime);
        let phi_l = red.table().phi(l);
        let ht = phi_l.ht_tau().expect("deg_τ φ_λ = 2 deg λ > 0");
        debug_assert_eq!(ht % prime.degree(), 0);
        ht / prime.degree()
    });
    Ok(ReductionInfo {
        prime: prime.clone(),
        kind,
        height,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::make_field;
    use crate::twisted::{derivative, ht_deg, tw_mul};
    use proptest::prelude::*;

    fn f5() -> FieldSpec {
        make_field(5, 1, None).unwrap()
    }

    fn datum(f: &FieldSpec, s: &str) -> Datum {
        Datum::parse(f, s).unwrap()
    }

    fn prime(f: &FieldSpec, s: &str) -> PrimeIdeal {
        PrimeIdeal::new(&ARing::new(f.clone()), parse_apoly(f, s).unwrap()).unwrap()
    }

    #[test]
    fn datum_text() {
        let f = f5();
        let w = datum(&f, "g1 = T+4; g2 = 3*T+4");
        assert_eq!(w.to_string(), "g1=T+4;g2=3*T+4");
        assert_eq!(Datum::parse(&f, "g1=1;g2=0").unwrap_err(), Error::ZeroG2);
        assert!(Datum::parse(&f, "g1=1").is_err());
    }

    #[test]
    fn phi_of_small_cases() {
        let f = f5();
        let w = datum(&f, "g1=T;g2=1");
        let ring = w.ring().clone();
        assert_eq!(phi_of(&w, &ring.var()), w.phi_t());
        let c = ring.constant(f.elem(3));
        assert_eq!(phi_of(&w, &c), TwistedPoly::constant(ring.clone(), c.clone()));
    }

    // Expansion of φ_{T²} for w = (T, 1) written out by hand:
    // T² + (T g₁ + g₁ T^q) τ + (T g₂ + g₁ g₁^q + g₂ T^{q²}) τ²
    //    + (g₁ g₂^q + g₂ g₁^{q²}) τ³ + g₂ g₂^{q²} τ⁴
    #[test]
    fn phi_t_squared_matches_hand_expansion() {
        let f = f5();
        let w = datum(&f, "g1=T;g2=1");
        let r = w.ring();
        let t = |k: u64| r.pow(&r.var(), k);
        let expected = vec![
            t(2),
            r.add(&t(2), &t(6)),             // T·T + T·T^5
            r.add(&r.add(&t(1), &t(6)), &t(25)), // T·1 + T·T^5 + 1·T^25
            r.add(&t(1), &t(25)),            // T·1 + 1·T^25
            r.one(),
        ];
        let got = phi_of(&w, &t(2));
        assert_eq!(got, TwistedPoly::new(r.clone(), expected));
    }

    #[test]
    fn derivative_and_degree_of_phi() {
        let f = f5();
        let w = datum(&f, "g1=T+4;g2=3*T+4");
        for a in w.ring().below_degree(3).filter(|a| !a.is_zero()) {
            let phi = phi_of(&w, &a);
            assert_eq!(derivative(&phi), a);
            assert_eq!(ht_deg(&phi).unwrap().1, 2 * a.deg().unwrap());
        }
    }

    #[test]
    fn j_invariants() {
        let f = f5();
        let j0 = j_invariant(&datum(&f, "g1=0;g2=T+2"));
        assert!(j0.numerator.is_zero());
        let j1 = j_invariant(&datum(&f, "g1=1;g2=1"));
        assert_eq!((j1.numerator.clone(), j1.denominator.clone()), (w_one(&f), w_one(&f)));
        let w = datum(&f, "g1=T^2+1;g2=2*T^3+T");
        let j = j_invariant(&w);
        assert!(w.ring().is_monic(&j.denominator));
        assert_eq!(w.ring().gcd(&j.numerator, &j.denominator), w.ring().one());
        for c in f.units() {
            assert_eq!(j_invariant(&twist(&w, c).unwrap()), j);
        }
    }

    fn w_one(f: &FieldSpec) -> APoly {
        ARing::new(f.clone()).one()
    }

    #[test]
    fn twists() {
        let f = f5();
        let w = datum(&f, "g1=1;g2=1");
        assert_eq!(twist(&w, f.elem(2)).unwrap(), w);
        assert_eq!(twist(&w, f.elem(1)).unwrap(), w);
        assert_eq!(twist(&w, f.zero()).unwrap_err(), Error::ZeroTwist);
        let c = f.elem(3);
        let back = twist(&twist(&w, c).unwrap(), f.inv(&c).unwrap()).unwrap();
        assert_eq!(back, w);
    }

    #[test]
    fn minimality() {
        let f = f5();
        assert!(is_minimal(&datum(&f, "g1=T;g2=T+1")));
        assert!(is_minimal(&datum(&f, "g1=0;g2=T^3+1")));
        // (T⁴u, T²⁴v) with units u, v
        let r = ARing::new(f.clone());
        let t = r.var();
        let g1 = r.scale(&r.pow(&t, 4), &f.elem(2));
        let g2 = r.scale(&r.pow(&t, 24), &f.elem(3));
        assert!(!is_minimal(&Datum::new(&f, g1.clone(), g2.clone()).unwrap()));
        // one power short in g2
        let g2 = r.pow(&t, 23);
        assert!(is_minimal(&Datum::new(&f, g1, g2).unwrap()));
        // (T+1)^{24} with g1 = 0
        let l = parse_apoly(&f, "T+1").unwrap();
        assert!(!is_minimal(&Datum::new(&f, r.zero(), r.pow(&l, 24)).unwrap()));
    }

    #[test]
    fn reduction_types() {
        let f = f5();
        let t = prime(&f, "T");
        let good = reduce_at(&datum(&f, "g1=T+4;g2=3*T+4"), &t).unwrap();
        assert_eq!((good.kind, good.height), (ReductionKind::Good, Some(1)));
        let sr = reduce_at(&datum(&f, "g1=1;g2=T"), &t).unwrap();
        assert_eq!((sr.kind, sr.height), (ReductionKind::StableRank1, None));
        let un = reduce_at(&datum(&f, "g1=T;g2=T"), &t).unwrap();
        assert_eq!(un.kind, ReductionKind::Unstable);
        // supersingular at (T): g1 ≡ 0 mod T
        let ss = reduce_at(&datum(&f, "g1=T;g2=1"), &t).unwrap();
        assert_eq!((ss.kind, ss.height), (ReductionKind::Good, Some(2)));
        let non_min = Datum::new(
            &f,
            ARing::new(f.clone()).zero(),
            ARing::new(f.clone()).pow(&parse_apoly(&f, "T").unwrap(), 24),
        )
        .unwrap();
        assert_eq!(reduce_at(&non_min, &t).unwrap_err(), Error::NonMinimalDatum);
    }

    fn coeffs(max_len: usize) -> impl Strategy<Value = Vec<u64>> {
        proptest::collection::vec(0..5u64, 0..max_len)
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        // Over A the coefficients blow up quickly, so larger degrees are
        // checked after reduction at a degree-2 prime.
        #[test]
        fn reduced_phi_is_a_homomorphism(
            g1 in coeffs(4), g2 in coeffs(4), a in coeffs(5), b in coeffs(5),
        ) {
            let f = f5();
            let ring = ARing::new(f.clone());
            let poly = |c: &[u64]| ring.from_coeffs(c.iter().map(|&i| f.elem(i)).collect());
            let g2 = if poly(&g2).is_zero() { ring.one() } else { poly(&g2) };
            let w = Datum::new(&f, poly(&g1), g2).unwrap();
            let l = prime(&f, "T^2+2");
            prop_assume!(has_good_reduction(&w, &l));
            let table = reduce_datum(&w, &l).table();
            let (a, b) = (poly(&a), poly(&b));
            let (pa, pb) = (table.phi(&a), table.phi(&b));
            let pab = table.phi(&ring.mul(&a, &b));
            prop_assert_eq!(&pab, &tw_mul(&pa, &pb).unwrap());
            prop_assert_eq!(&pab, &tw_mul(&pb, &pa).unwrap());
            prop_assert_eq!(pab.deg_tau(), ring.mul(&a, &b).deg().map(|d| 2 * d));
        }
    }
}
