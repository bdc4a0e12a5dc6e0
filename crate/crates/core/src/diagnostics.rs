//! Sampling of Frobenius conjugacy classes mod `T` over many good primes,
//! and the proper-subgroup obstructions the sample fails to exclude.
//!
//! The verdict is evidence only: it never proves surjectivity.

use std::collections::{BTreeMap, BTreeSet};

use num_rational::Ratio;
use rayon::prelude::*;

use crate::algebra::{format_apoly, list_primes, FieldSpec, FiniteField, FqElem, PrimeIdeal};
use crate::criterion::require_odd_q;
use crate::drinfeld::{has_good_reduction, Datum};
use crate::error::{Error, Result};
use crate::frobenius::{
    charpoly_search, classify_charpoly, conj_class, torsion_frobenius_matrix, CharPoly,
    ConjClassKind,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SampleConfig {
    pub max_prime_degree: usize,
    pub max_primes: usize,
    pub use_matrices: bool,
    /// Reserved; sampling is exhaustive in enumeration order.
    pub seed: u64,
}

impl Default for SampleConfig {
    fn default() -> Self {
        SampleConfig {
            max_prime_degree: 2,
            max_primes: 1000,
            use_matrices: false,
            seed: 0,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Thresholds {
    pub min_sample: usize,
    /// Trace-zero fraction at or above which the Cartan normalizer stays
    /// suspect.
    pub trace_zero: Ratio<u64>,
}

impl Default for Thresholds {
    fn default() -> Self {
        Thresholds {
            min_sample: 50,
            trace_zero: Ratio::new(3, 4),
        }
    }
}

/// One sampled prime: `(a, b)` and its class mod `T`. `kind` is `None`
/// for a repeated eigenvalue left unrefined.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrimeSample {
    pub charpoly: CharPoly,
    pub trace: FqElem,
    pub det: FqElem,
    pub kind: Option<ConjClassKind>,
}

pub type ClassKey = (FqElem, FqElem, Option<ConjClassKind>);

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ImageEvidence {
    pub class_histogram: BTreeMap<ClassKey, usize>,
    pub det_coverage: BTreeSet<FqElem>,
    pub found_nonsplit: bool,
    pub found_split_nonscalar: bool,
    pub found_nontrivial_unipotent: bool,
    pub primes_used: usize,
    pub samples: Vec<PrimeSample>,
}

impl ImageEvidence {
    pub fn trace_zero_count(&self) -> usize {
        self.samples.iter().filter(|s| s.trace.index() == 0).count()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Obstruction {
    Borel,
    CartanNormalizer,
    DetNotOnto,
    SmallSample,
}

impl Obstruction {
    pub fn as_str(self) -> &'static str {
        match self {
            Obstruction::Borel => "borel",
            Obstruction::CartanNormalizer => "cartan_normalizer",
            Obstruction::DetNotOnto => "det_not_onto",
            Obstruction::SmallSample => "small_sample",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Verdict {
    pub obstructions_unexcluded: BTreeSet<Obstruction>,
    pub consistent_with_full_image: bool,
}

/// Good primes other than `(T)` of degree at most `max_degree`, in
/// enumeration order, at most `max_primes` of them.
pub fn admissible_primes(w: &Datum, max_degree: usize, max_primes: usize) -> Vec<PrimeIdeal> {
    (1..=max_degree)
        .flat_map(|d| list_primes(w.field(), d))
        .filter(|l| !l.is_t() && has_good_reduction(w, l))
        .take(max_primes)
        .collect()
}

fn sample_one(w: &Datum, l: &PrimeIdeal, use_matrices: bool) -> Result<PrimeSample> {
    let f = w.field();
    let charpoly = charpoly_search(w, l)?;
    let (trace, det) = charpoly.mod_t();
    let mut kind = classify_charpoly(f, trace, det);
    if kind.is_none() && use_matrices {
        kind = Some(conj_class(f, &torsion_frobenius_matrix(w, l)?.entries).kind);
    }
    Ok(PrimeSample {
        charpoly,
        trace,
        det,
        kind,
    })
}

pub fn sample_classes(w: &Datum, cfg: &SampleConfig) -> Result<ImageEvidence> {
    require_odd_q(w.field())?;
    let primes = admissible_primes(w, cfg.max_prime_degree, cfg.max_primes);
    if primes.is_empty() {
        return Err(Error::NoAdmissiblePrimes);
    }
    let samples = primes
        .par_iter()
        .map(|l| sample_one(w, l, cfg.use_matrices))
        .collect::<Result<Vec<_>>>()?;
    let mut evidence = ImageEvidence {
        class_histogram: BTreeMap::new(),
        det_coverage: BTreeSet::new(),
        found_nonsplit: false,
        found_split_nonscalar: false,
        found_nontrivial_unipotent: false,
        primes_used: samples.len(),
        samples: Vec::new(),
    };
    for s in &samples {
        *evidence
            .class_histogram
            .entry((s.trace, s.det, s.kind))
            .or_default() += 1;
        evidence.det_coverage.insert(s.det);
        match s.kind {
            Some(ConjClassKind::NonsplitSemisimple) => evidence.found_nonsplit = true,
            Some(ConjClassKind::SplitSemisimple) => evidence.found_split_nonscalar = true,
            Some(ConjClassKind::Nonsemisimple) => evidence.found_nontrivial_unipotent = true,
            _ => {}
        }
    }
    evidence.samples = samples;
    Ok(evidence)
}

pub fn obstruction_analysis(e: &ImageEvidence, field: &FieldSpec, th: &Thresholds) -> Verdict {
    let mut out = BTreeSet::new();
    if !e.found_nonsplit {
        out.insert(Obstruction::Borel);
    }
    let zero = e.trace_zero_count() as u64;
    let total = e.primes_used as u64;
    let saturated = total > 0 && Ratio::new(zero, total) >= th.trace_zero;
    let nonsemisimple_with_trace = e
        .samples
        .iter()
        .any(|s| s.kind == Some(ConjClassKind::Nonsemisimple) && s.trace.index() != 0);
    if saturated && !nonsemisimple_with_trace {
        out.insert(Obstruction::CartanNormalizer);
    }
    if e.det_coverage.len() as u64 != field.q() - 1 {
        out.insert(Obstruction::DetNotOnto);
    }
    if e.primes_used < th.min_sample {
        out.insert(Obstruction::SmallSample);
    }
    Verdict {
        consistent_with_full_image: out.is_empty(),
        obstructions_unexcluded: out,
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CrossValidation {
    /// `(prime, trace, det)` per checked prime.
    pub checked: Vec<(PrimeIdeal, FqElem, FqElem)>,
}

/// Compares the torsion matrix with `(a, b) mod T` from the identity search
/// at every sampled prime. Any mismatch is an internal inconsistency.
pub fn cross_validate(w: &Datum, cfg: &SampleConfig) -> Result<CrossValidation> {
    require_odd_q(w.field())?;
    let primes = admissible_primes(w, cfg.max_prime_degree, cfg.max_primes);
    if primes.is_empty() {
        return Err(Error::NoAdmissiblePrimes);
    }
    let f = w.field();
    let checked = primes
        .par_iter()
        .map(|l| {
            let (a, b) = charpoly_search(w, l)?.mod_t();
            let m = torsion_frobenius_matrix(w, l)?.entries;
            let (t, d) = (m.trace(f), m.det(f));
            if (t, d) != (a, b) {
                return Err(Error::InternalInconsistency {
                    prime: format_apoly(f, l.generator()),
                    matrix: (f.coords(&t), f.coords(&d)),
                    search: (f.coords(&a), f.coords(&b)),
                });
            }
            Ok((l.clone(), a, b))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(CrossValidation { checked })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{make_field, Domain};
    use crate::frobenius::{charpoly_deg1, frob_identity_check};

    fn f5() -> FieldSpec {
        make_field(5, 1, None).unwrap()
    }

    #[test]
    fn zero_g1_saturates_trace_zero() {
        let f = f5();
        let w = Datum::parse(&f, "g1=0;g2=1").unwrap();
        let cfg = SampleConfig {
            max_prime_degree: 1,
            ..Default::default()
        };
        let e = sample_classes(&w, &cfg).unwrap();
        assert_eq!(e.primes_used, 4);
        assert!(e.samples.iter().all(|s| s.trace.index() == 0));
        let v = obstruction_analysis(&e, &f, &Thresholds::default());
        assert!(v.obstructions_unexcluded.contains(&Obstruction::CartanNormalizer));
        assert!(v.obstructions_unexcluded.contains(&Obstruction::SmallSample));
        assert!(!v.consistent_with_full_image);
    }

    #[test]
    fn det_mod_t_at_linear_primes() {
        let f = f5();
        let w = Datum::parse(&f, "g1=T^2+2;g2=T^2+T+1").unwrap();
        let e = sample_classes(&w, &SampleConfig::default()).unwrap();
        for s in e.samples.iter().filter(|s| s.charpoly.prime.degree() == 1) {
            let alpha = f.neg(&s.charpoly.prime.generator().coeffs()[0]);
            let g2a = w.ring().eval(w.g2(), &alpha);
            assert_eq!(s.det, f.mul(&alpha, &f.inv(&g2a).unwrap()));
            assert_eq!(s.charpoly, charpoly_deg1(&w, &s.charpoly.prime).unwrap());
        }
    }

    #[test]
    fn passing_datum_has_expected_class_at_first_anchor() {
        let f = f5();
        let w = Datum::parse(&f, "g1=T+4;g2=3*T+4").unwrap();
        let e = sample_classes(&w, &SampleConfig::default()).unwrap();
        // (ā, b̄) = (0, −η) with η = 2
        assert!(e
            .class_histogram
            .keys()
            .any(|(t, d, _)| t.index() == 0 && *d == f.from_int(-2)));
        let total: usize = e.class_histogram.values().sum();
        assert_eq!(total, e.primes_used);
    }

    #[test]
    fn full_evidence_clears_everything() {
        let f = f5();
        let w = Datum::parse(&f, "g1=T+4;g2=3*T+4").unwrap();
        let cfg = SampleConfig {
            max_prime_degree: 3,
            ..Default::default()
        };
        let e = sample_classes(&w, &cfg).unwrap();
        assert!(e.primes_used >= 50);
        let v = obstruction_analysis(&e, &f, &Thresholds::default());
        assert!(v.consistent_with_full_image, "{v:?}");
    }

    #[test]
    fn cross_validation_small() {
        let f = f5();
        let w = Datum::parse(&f, "g1=0;g2=1").unwrap();
        let cfg = SampleConfig {
            max_prime_degree: 1,
            ..Default::default()
        };
        let r = cross_validate(&w, &cfg).unwrap();
        assert_eq!(r.checked.len(), 4);
        // λ = (T − 1): X² + 1
        let l = r
            .checked
            .iter()
            .find(|c| format_apoly(&f, c.0.generator()) == "T+4")
            .unwrap();
        assert_eq!((l.1, l.2), (f.zero(), f.one()));
    }

    #[test]
    fn corrupted_trace_fails_identity() {
        let f = f5();
        let w = Datum::parse(&f, "g1=T+4;g2=3*T+4").unwrap();
        for l in admissible_primes(&w, 2, 20) {
            let c = charpoly_search(&w, &l).unwrap();
            let bumped = w.ring().add(&c.a, &w.ring().one());
            assert!(!frob_identity_check(&w, &l, &bumped, &c.b).unwrap());
        }
    }

    #[test]
    fn errors() {
        let f3 = make_field(3, 1, None).unwrap();
        let w = Datum::parse(&f3, "g1=1;g2=1").unwrap();
        assert!(matches!(
            sample_classes(&w, &SampleConfig::default()),
            Err(Error::SmallOrEvenQ { q: 3 })
        ));
        // g₂ vanishing at every nonzero point kills all linear primes
        let f = f5();
        let w = Datum::parse(&f, "g1=1;g2=T^4+4").unwrap();
        let cfg = SampleConfig {
            max_prime_degree: 1,
            ..Default::default()
        };
        assert_eq!(sample_classes(&w, &cfg).unwrap_err(), Error::NoAdmissiblePrimes);
    }
}
