//! Exact counts of data `(g₁, g₂)` below a weighted height cutoff, and
//! exact densities of the criterion.
//!
//! Membership at cutoff `X` with weights `(c₁, c₂)`: `deg g₁ < c₁X`,
//! `deg g₂ < c₂X`, `g₂ ≠ 0`.

use std::sync::atomic::{AtomicU64, Ordering};

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rayon::prelude::*;

use crate::algebra::{format_apoly, APoly, ARing, Domain, FieldSpec};
use crate::criterion::{check_conditions, find_witness_among, tuples, validate_tuple, Tuple};
use crate::drinfeld::Datum;
use crate::error::{Error, Result};

pub const DEFAULT_ENUM_CAP: u64 = 10_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct HeightParams {
    pub c1: u32,
    pub c2: u32,
    pub x: u32,
}

impl HeightParams {
    pub fn new(c1: u32, c2: u32, x: u32) -> Self {
        HeightParams { c1, c2, x }
    }

    fn n1(&self) -> u32 {
        self.c1 * self.x
    }

    fn n2(&self) -> u32 {
        self.c2 * self.x
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CensusMode {
    SingleClass,
    SingleTuple(Tuple),
    UnionAllTuples,
}

impl CensusMode {
    pub fn as_str(&self) -> &'static str {
        match self {
            CensusMode::SingleClass => "single_class",
            CensusMode::SingleTuple(_) => "single_tuple",
            CensusMode::UnionAllTuples => "union_all_tuples",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CensusReport {
    pub total: BigUint,
    pub hits: BigUint,
    pub density_ratio: BigRational,
    pub mode: CensusMode,
}

fn big(n: &BigUint) -> num_bigint::BigInt {
    num_bigint::BigInt::from(n.clone())
}

pub fn ratio(num: &BigUint, den: &BigUint) -> BigRational {
    BigRational::new(big(num), big(den))
}

/// `#C(X) = q^{c₁X}(q^{c₂X} − 1)`.
pub fn count_all(q: u64, params: HeightParams) -> BigUint {
    let q = BigUint::from(q);
    q.pow(params.n1()) * (q.pow(params.n2()) - BigUint::one())
}

/// Number of pairs `(g₁, g₂)` a literal scan would visit.
pub fn scan_size(q: u64, params: HeightParams) -> BigUint {
    BigUint::from(q).pow(params.n1() + params.n2())
}

/// Counts members of `C(X)` satisfying `pred`, by literal enumeration.
/// Work is split over `g₁`; the count does not depend on the split.
pub fn scan<P>(field: &FieldSpec, params: HeightParams, cap: u64, pred: P) -> Result<u64>
where
    P: Fn(&APoly, &APoly) -> bool + Sync,
{
    let size = scan_size(field.q(), params);
    if size > BigUint::from(cap) {
        return Err(Error::EnumerationTooLarge {
            size: size.to_string(),
            cap,
        });
    }
    let ring = ARing::new(field.clone());
    let (n1, n2) = (params.n1() as usize, params.n2() as usize);
    let q = field.q();
    let count1 = q.pow(n1 as u32);
    let count2 = q.pow(n2 as u32);
    let hits = AtomicU64::new(0);
    (0..count1).into_par_iter().for_each(|i| {
        let g1 = ring.nth_below_degree(i, n1);
        // index 0 is g₂ = 0
        let local = (1..count2)
            .filter(|&j| pred(&g1, &ring.nth_below_degree(j, n2)))
            .count() as u64;
        hits.fetch_add(local, Ordering::Relaxed);
    });
    Ok(hits.into_inner())
}

/// Moduli `T(T−a₁)(T−a₂)` and `T(T−a₁)(T−a₂)²` of the fixed classes.
pub fn class_moduli(field: &FieldSpec, t: &Tuple) -> (APoly, APoly) {
    let r = ARing::new(field.clone());
    let l2 = r.linear(&t.a2);
    let m1 = r.mul(&r.mul(&r.var(), &r.linear(&t.a1)), &l2);
    let m2 = r.mul(&m1, &l2);
    (m1, m2)
}

/// A congruence class `g₁ ≡ r₁ (m₁)`, `g₂ ≡ r₂ (m₂)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CongruenceClass {
    pub m1: APoly,
    pub r1: APoly,
    pub m2: APoly,
    pub r2: APoly,
}

impl CongruenceClass {
    pub fn new(m1: APoly, r1: APoly, m2: APoly, r2: APoly) -> Result<Self> {
        for (m, r, name) in [(&m1, &r1, "1"), (&m2, &r2, "2")] {
            let Some(dm) = m.deg() else {
                return Err(Error::MalformedResidue(format!("m{name} is zero")));
            };
            if r.deg().is_some_and(|dr| dr >= dm) {
                return Err(Error::MalformedResidue(format!(
                    "deg r{name} must be below deg m{name} = {dm}"
                )));
            }
        }
        Ok(CongruenceClass { m1, r1, m2, r2 })
    }

    pub fn contains(&self, ring: &ARing, g1: &APoly, g2: &APoly) -> bool {
        ring.rem(g1, &self.m1).expect("nonzero") == self.r1
            && ring.rem(g2, &self.m2).expect("nonzero") == self.r2
    }
}

/// Members of `C(X)` in the class, by closed form.
pub fn count_congruence_class(q: u64, params: HeightParams, class: &CongruenceClass) -> BigUint {
    let q = BigUint::from(q);
    let per_coordinate = |n: u32, m: &APoly, r: &APoly| {
        let dm = m.deg().expect("validated") as u32;
        if n >= dm {
            q.pow(n - dm)
        } else if r.deg().is_none_or(|dr| (dr as u32) < n) {
            // only g = r itself
            BigUint::one()
        } else {
            BigUint::zero()
        }
    };
    let c1 = per_coordinate(params.n1(), &class.m1, &class.r1);
    let mut c2 = per_coordinate(params.n2(), &class.m2, &class.r2);
    if class.r2.is_zero() {
        // g₂ = 0 lies in the class but not in C(X)
        c2 -= BigUint::one();
    }
    c1 * c2
}

pub fn count_congruence_class_by_scan(
    field: &FieldSpec,
    params: HeightParams,
    class: &CongruenceClass,
    cap: u64,
) -> Result<u64> {
    let ring = ARing::new(field.clone());
    scan(field, params, cap, |g1, g2| class.contains(&ring, g1, g2))
}

/// The first admissible tuple and the enumeration-first residue pair
/// `(r₁, r₂)` modulo the class moduli that passes all five conditions.
pub fn fixed_class(field: &FieldSpec) -> Result<(Tuple, CongruenceClass)> {
    let t = *tuples(field).first().ok_or(Error::SmallOrEvenQ { q: field.q() })?;
    validate_tuple(field, &t)?;
    let (m1, m2) = class_moduli(field, &t);
    let ring = ARing::new(field.clone());
    let passes = |g1: &APoly, g2: &APoly| {
        let w = Datum::new(field, g1.clone(), g2.clone()).expect("g2 nonzero");
        check_conditions(&w, t).expect("validated").conditions
    };
    let probe_g2 = ring.one();
    let r1 = ring
        .below_degree(3)
        .find(|r1| {
            let c = passes(r1, &probe_g2);
            c.c1_div && c.c2_coprime
        })
        .ok_or_else(|| Error::MalformedResidue("no admissible r1".into()))?;
    let r2 = ring
        .below_degree(4)
        .filter(|r2| !r2.is_zero())
        .find(|r2| passes(&r1, r2).all())
        .ok_or_else(|| Error::MalformedResidue("no admissible r2".into()))?;
    Ok((t, CongruenceClass::new(m1, r1, m2, r2)?))
}

pub fn describe_class(field: &FieldSpec, c: &CongruenceClass) -> [String; 4] {
    [&c.m1, &c.r1, &c.m2, &c.r2].map(|f| format_apoly(field, f))
}

/// `q^{(c₁+c₂)X − 7} / (q^{c₁X}(q^{c₂X} − 1))` for each `X`, which needs
/// `c₁X, c₂X ≥ 4` and increasing `X`.
pub fn density_limit_report(q: u64, c1: u32, c2: u32, xs: &[u32]) -> Result<Vec<BigRational>> {
    let mut prev = None;
    xs.iter()
        .map(|&x| {
            if c1 * x < 4 || c2 * x < 4 || prev.is_some_and(|p| p >= x) {
                return Err(Error::ThresholdViolation { c1, c2, x });
            }
            prev = Some(x);
            let params = HeightParams::new(c1, c2, x);
            let hits = BigUint::from(q).pow((c1 + c2) * x - 7);
            Ok(ratio(&hits, &count_all(q, params)))
        })
        .collect()
}

/// `q^{−7}`.
pub fn density_limit(q: u64) -> BigRational {
    ratio(&BigUint::one(), &BigUint::from(q).pow(7))
}

pub fn criterion_density(
    field: &FieldSpec,
    params: HeightParams,
    mode: CensusMode,
    cap: u64,
) -> Result<CensusReport> {
    let hits = match mode {
        CensusMode::SingleTuple(t) => {
            validate_tuple(field, &t)?;
            scan(field, params, cap, |g1, g2| {
                let w = Datum::new(field, g1.clone(), g2.clone()).expect("g2 nonzero");
                check_conditions(&w, t).expect("validated").pass
            })?
        }
        CensusMode::UnionAllTuples => {
            crate::criterion::require_odd_q(field)?;
            let all = tuples(field);
            scan(field, params, cap, |g1, g2| {
                let w = Datum::new(field, g1.clone(), g2.clone()).expect("g2 nonzero");
                find_witness_among(&w, &all).expect("odd q").is_some()
            })?
        }
        CensusMode::SingleClass => {
            let (_, class) = fixed_class(field)?;
            count_congruence_class_by_scan(field, params, &class, cap)?
        }
    };
    let total = count_all(field.q(), params);
    let hits = BigUint::from(hits);
    Ok(CensusReport {
        density_ratio: ratio(&hits, &total),
        total,
        hits,
        mode,
    })
}

/// Renders a rational as `num/den`.
pub fn format_ratio(r: &BigRational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Floating rendering for human-facing output only.
pub fn approx(r: &BigRational) -> f64 {
    r.numer().to_f64().unwrap_or(f64::NAN) / r.denom().to_f64().unwrap_or(f64::NAN)
}
