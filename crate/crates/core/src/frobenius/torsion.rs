use std::collections::{BTreeSet, HashMap};

use super::require_good;
use super::classes::Mat2;
use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algebra::primes::is_irreducible;
use crate::algebra::{
    kernel_mod_p, Domain, ExtField, FiniteField, FqElem, Poly, PolyRing, PrimeIdeal,
};
use crate::drinfeld::{reduce_datum, Datum, ResidueField};
use crate::error::{Error, Result};

/// Degree-`e` extension of `k_λ` holding the `T`-torsion.
pub type SplittingField = ExtField<ResidueField>;

type Point = <SplittingField as Domain>::Elem;

/// Matrix of `x ↦ x^{|k_λ|}` on `φ̄[T]` in the basis `(v₁, v₂)`: column `j`
/// holds the coordinates of the image of `v_j`.
#[derive(Clone, Debug)]
pub struct FrobMatrix {
    pub entries: Mat2,
    pub basis: [Point; 2],
    pub field: SplittingField,
    pub splitting_degree: usize,
    pub prime: PrimeIdeal,
}

fn divisors(n: u64) -> impl Iterator<Item = u64> {
    (1..=n).filter(move |d| n % d == 0)
}

/// Every element of `GL₂(F_q)` has order dividing `q² − 1` or `p(q − 1)`,
/// so the splitting degree is among these divisors.
fn candidate_degrees(p: u64, q: u64) -> Vec<usize> {
    let set: BTreeSet<u64> = divisors(q * q - 1).chain(divisors(p * (q - 1))).collect();
    set.into_iter().map(|e| e as usize).collect()
}

/// A monic irreducible of degree `e` over `k`, drawn from a fixed-seed
/// stream. Low-order enumeration can miss irreducibles for long stretches
/// (e.g. sparse trinomials in characteristic 3), while random monics are
/// irreducible with probability about `1/e`.
fn splitting_modulus(k: &ResidueField, e: usize) -> Poly<<ResidueField as Domain>::Elem> {
    let ring = PolyRing::new(k.clone());
    if e == 1 {
        return ring.var();
    }
    let size = k.size_u64().expect("residue field fits in u64");
    let mut rng = ChaCha8Rng::seed_from_u64(e as u64);
    loop {
        let mut coeffs: Vec<_> = (0..e).map(|_| k.element_at(rng.next_u64() % size)).collect();
        coeffs.push(k.one());
        let h = ring.from_coeffs(coeffs);
        if is_irreducible(&ring, &h) {
            return h;
        }
    }
}

pub fn torsion_frobenius_matrix(w: &Datum, prime: &PrimeIdeal) -> Result<FrobMatrix> {
    if prime.is_t() {
        return Err(Error::PrimeIsT);
    }
    require_good(w, prime)?;
    let f = w.field();
    let red = reduce_datum(w, prime);
    let k = red.field.clone();
    let (gamma, g1, g2) = (red.phi_t.coeff(0), red.phi_t.coeff(1), red.phi_t.coeff(2));
    let q = f.q();
    let candidates = candidate_degrees(f.p(), q);
    let cap = *candidates.last().expect("nonempty");

    for e in candidates {
        let big = ExtField::new_unchecked(k.clone(), splitting_modulus(&k, e));
        let (c0, c1, c2) = (big.embed(&gamma), big.embed(&g1), big.embed(&g2));
        // φ̄_T is F_p-linear: its kernel is the root set
        let dim = big.prime_dim();
        let columns: Vec<Vec<u64>> = (0..dim)
            .map(|j| {
                let mut unit = vec![0u64; dim];
                unit[j] = 1;
                let x = big.from_coords(&unit);
                let xq = big.q_power(&x);
                let xqq = big.q_power(&xq);
                let y = big.add(
                    &big.add(&big.mul(&c0, &x), &big.mul(&c1, &xq)),
                    &big.mul(&c2, &xqq),
                );
                big.coords(&y)
            })
            .collect();
        let kernel = kernel_mod_p(&columns, f.p());
        if kernel.len() < 2 * f.n() {
            continue;
        }
        debug_assert_eq!(kernel.len(), 2 * f.n());
        return Ok(assemble(w, prime, big, &kernel, e));
    }
    Err(Error::SplittingNotFound { cap })
}

fn assemble(
    w: &Datum,
    prime: &PrimeIdeal,
    big: SplittingField,
    kernel: &[Vec<u64>],
    e: usize,
) -> FrobMatrix {
    let f = w.field();
    let p = f.p();
    let dim = big.prime_dim();
    let total = f.q() * f.q();
    let mut roots: Vec<Point> = (0..total)
        .map(|mut idx| {
            let mut v = vec![0u64; dim];
            for basis in kernel {
                let c = idx % p;
                idx /= p;
                for (slot, b) in v.iter_mut().zip(basis) {
                    *slot = (*slot + c * b) % p;
                }
            }
            big.from_coords(&v)
        })
        .collect();
    roots.sort_by(|a, b| big.cmp_elems(a, b));

    let scalars: Vec<FqElem> = f.all().collect();
    let v1 = roots
        .iter()
        .find(|x| !big.is_zero(x))
        .expect("nonzero root")
        .clone();
    let line: Vec<Point> = scalars
        .iter()
        .map(|c| big.mul(&big.from_fq(*c), &v1))
        .collect();
    let v2 = roots
        .iter()
        .find(|x| !line.contains(x))
        .expect("two independent roots")
        .clone();

    let mut coords: HashMap<Point, (FqElem, FqElem)> = HashMap::new();
    for a in &scalars {
        for b in &scalars {
            let x = big.add(
                &big.mul(&big.from_fq(*a), &v1),
                &big.mul(&big.from_fq(*b), &v2),
            );
            coords.insert(x, (*a, *b));
        }
    }
    debug_assert_eq!(coords.len() as u64, total);

    let sigma = |x: &Point| big.q_power_iter(x, prime.degree());
    let (a1, b1) = coords[&sigma(&v1)];
    let (a2, b2) = coords[&sigma(&v2)];
    FrobMatrix {
        entries: Mat2([[a1, a2], [b1, b2]]),
        basis: [v1, v2],
        field: big,
        splitting_degree: e,
        prime: prime.clone(),
    }
}
