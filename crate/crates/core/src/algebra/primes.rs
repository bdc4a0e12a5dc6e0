use num_bigint::BigUint;
use num_traits::ToPrimitive;

use super::{moebius, ARing, APoly, Domain, FieldSpec, FiniteField, Poly, PolyRing};

/// A nonzero prime `λ = (f)` of `A`, `f` monic irreducible.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PrimeIdeal {
    generator: APoly,
    degree: usize,
}

impl PrimeIdeal {
    /// Validates that `generator` is monic irreducible.
    pub fn new(ring: &ARing, generator: APoly) -> Option<Self> {
        (ring.is_monic(&generator) && is_irreducible(ring, &generator)).then(|| PrimeIdeal {
            degree: generator.deg().expect("monic"),
            generator,
        })
    }

    pub(crate) fn new_unchecked(generator: APoly) -> Self {
        PrimeIdeal {
            degree: generator.deg().expect("nonzero"),
            generator,
        }
    }

    pub fn generator(&self) -> &APoly {
        &self.generator
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    /// `true` for the prime `(T)`.
    pub fn is_t(&self) -> bool {
        self.degree == 1 && self.generator.coeffs()[0].index() == 0
    }
}

/// `x ↦ x^q` on `B[y]/(f)`, via precomputed images `(y^i)^q`.
struct QPowerMod<'a, B: FiniteField> {
    ring: &'a PolyRing<B>,
    modulus: &'a Poly<B::Elem>,
    images: Vec<Poly<B::Elem>>,
}

impl<'a, B: FiniteField> QPowerMod<'a, B> {
    fn new(ring: &'a PolyRing<B>, modulus: &'a Poly<B::Elem>) -> Self {
        let d = modulus.deg().expect("nonzero modulus");
        let q = ring.base().constants().q();
        let yq = ring.powmod(&ring.var(), &BigUint::from(q), modulus);
        let mut images = Vec::with_capacity(d);
        let mut acc = ring.rem(&ring.one(), modulus).expect("nonzero");
        for _ in 0..d {
            images.push(acc.clone());
            acc = ring.mulmod(&acc, &yq, modulus);
        }
        QPowerMod {
            ring,
            modulus,
            images,
        }
    }

    fn apply(&self, g: &Poly<B::Elem>) -> Poly<B::Elem> {
        let base = self.ring.base();
        let d = self.modulus.deg().expect("nonzero");
        let mut out = vec![base.zero(); d];
        for (c, img) in g.coeffs().iter().zip(&self.images) {
            if base.is_zero(c) {
                continue;
            }
            let cq = base.q_power(c);
            for (o, v) in out.iter_mut().zip(img.coeffs()) {
                *o = base.add(o, &base.mul(&cq, v));
            }
        }
        self.ring.from_coeffs(out)
    }
}

/// Ben-Or irreducibility test over a finite field `B`.
pub(crate) fn is_irreducible<B: FiniteField>(ring: &PolyRing<B>, f: &Poly<B::Elem>) -> bool {
    let Some(d) = f.deg() else {
        return false;
    };
    if d == 0 {
        return false;
    }
    if d == 1 {
        return true;
    }
    let f = ring.monic(f);
    // |B| = q^m
    let m = ring.base().prime_dim() / ring.base().constants().n();
    let frob = QPowerMod::new(ring, &f);
    let y = ring.var();
    let mut h = y.clone();
    for _ in 1..=d / 2 {
        for _ in 0..m {
            h = frob.apply(&h);
        }
        let g = ring.gcd(&ring.sub(&h, &y), &f);
        if g.deg() != Some(0) {
            return false;
        }
    }
    true
}

/// Monic irreducibles of degree `d` over `B`, in enumeration order.
pub(crate) fn monic_irreducibles<B: FiniteField>(
    ring: &PolyRing<B>,
    d: usize,
) -> impl Iterator<Item = Poly<B::Elem>> + '_ {
    ring.monic_of_degree(d)
        .filter(move |f| is_irreducible(ring, f))
}

/// All primes of `A` of degree exactly `d`, in enumeration order.
pub fn list_primes(field: &FieldSpec, d: usize) -> Vec<PrimeIdeal> {
    let ring = PolyRing::new(field.clone());
    monic_irreducibles(&ring, d)
        .map(PrimeIdeal::new_unchecked)
        .collect()
}

/// Number of monic irreducibles of degree `d` over `F_q`:
/// `(1/d) Σ_{e | d} μ(e) q^{d/e}`.
pub fn count_monic_irreducibles(q: u64, d: usize) -> u64 {
    let d = d as u64;
    let mut total: i128 = 0;
    for e in (1..=d).filter(|e| d % e == 0) {
        total += moebius(e) as i128 * (q as i128).pow((d / e) as u32);
    }
    (total / d as i128).to_u64().expect("positive count")
}

/// `λ`-adic valuation of `f`; `None` for `f = 0`.
pub fn valuation(ring: &ARing, f: &APoly, prime: &PrimeIdeal) -> Option<usize> {
    if f.is_zero() {
        return None;
    }
    let mut v = 0;
    let mut g = f.clone();
    loop {
        let (q, r) = ring.divrem(&g, prime.generator()).expect("nonzero prime");
        if !r.is_zero() {
            return Some(v);
        }
        v += 1;
        g = q;
    }
}
