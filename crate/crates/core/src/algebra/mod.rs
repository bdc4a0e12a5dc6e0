//! Exact arithmetic for `F_q`, its finite extensions, and `A = F_q[T]`.
//!
//! All arithmetic goes through a *domain handle* (the [`Domain`] trait):
//! elements are plain data and the handle knows how to combine them. This
//! lets the twisted polynomial code run unchanged over `A` and over any
//! finite field carrying the `q`-power map.

use std::cmp::Ordering;
use std::fmt;
use std::hash::Hash;

use num_bigint::BigUint;

mod ext;
mod fq;
mod linalg;
mod poly;
pub(crate) mod primes;
mod text;

pub use ext::ExtField;
pub use fq::{find_nonsquare, is_square, make_field, FieldSpec, FqElem};
pub use linalg::kernel_mod_p;
pub use poly::{poly_divrem, APoly, ARing, Poly, PolyRing};
pub use primes::{count_monic_irreducibles, list_primes, valuation, PrimeIdeal};
pub use text::{format_apoly, parse_apoly, parse_fq};
pub(crate) use text::split_terms as text_split_terms;

/// A commutative `F_q`-algebra with the `q`-power endomorphism.
pub trait Domain: Clone + PartialEq + fmt::Debug + Send + Sync {
    type Elem: Clone + PartialEq + Eq + Hash + fmt::Debug + Send + Sync;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    /// `x ↦ x^q` for the fixed constant field `F_q`.
    fn q_power(&self, a: &Self::Elem) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    /// Structure map `F_q → self`.
    fn from_fq(&self, c: FqElem) -> Self::Elem;
    /// The constant field `F_q`.
    fn constants(&self) -> &FieldSpec;
    fn format_elem(&self, a: &Self::Elem) -> String;

    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        self.add(a, &self.neg(b))
    }

    fn is_one(&self, a: &Self::Elem) -> bool {
        *a == self.one()
    }
}

/// A finite field, viewed as a vector space over its prime field.
pub trait FiniteField: Domain {
    fn inv(&self, a: &Self::Elem) -> Option<Self::Elem>;
    fn characteristic(&self) -> u64;
    /// Dimension over `F_p`.
    fn prime_dim(&self) -> usize;
    /// Little-endian `F_p` coordinates, length [`FiniteField::prime_dim`].
    fn coords(&self, a: &Self::Elem) -> Vec<u64>;
    fn from_coords(&self, c: &[u64]) -> Self::Elem;

    fn size(&self) -> BigUint {
        BigUint::from(self.characteristic()).pow(self.prime_dim() as u32)
    }

    /// Field size when it fits in a `u64`.
    fn size_u64(&self) -> Option<u64> {
        self.characteristic().checked_pow(self.prime_dim() as u32)
    }

    fn pow(&self, a: &Self::Elem, e: &BigUint) -> Self::Elem {
        let mut acc = self.one();
        for i in (0..e.bits()).rev() {
            acc = self.mul(&acc, &acc);
            if e.bit(i) {
                acc = self.mul(&acc, a);
            }
        }
        acc
    }

    fn pow_u64(&self, a: &Self::Elem, e: u64) -> Self::Elem {
        let mut acc = self.one();
        let mut base = a.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        acc
    }

    /// The fixed enumeration order: coordinate sequences compared from the
    /// highest coordinate down, i.e. the order of `Σ c_i p^i` as integers.
    fn cmp_elems(&self, a: &Self::Elem, b: &Self::Elem) -> Ordering {
        let (ca, cb) = (self.coords(a), self.coords(b));
        ca.iter().rev().cmp(cb.iter().rev())
    }

    /// The element with enumeration index `idx` (base-`p` digits of `idx`).
    fn element_at(&self, idx: u64) -> Self::Elem {
        let p = self.characteristic();
        let mut rest = idx;
        let coords: Vec<u64> = (0..self.prime_dim())
            .map(|_| {
                let c = rest % p;
                rest /= p;
                c
            })
            .collect();
        self.from_coords(&coords)
    }

    /// All elements in enumeration order. Panics if the field does not fit
    /// in a `u64` count.
    fn elements(&self) -> Vec<Self::Elem> {
        let size = self.size_u64().expect("field too large to enumerate");
        (0..size).map(|i| self.element_at(i)).collect()
    }

    /// `q^k`-power map applied `k` times via [`Domain::q_power`].
    fn q_power_iter(&self, a: &Self::Elem, k: usize) -> Self::Elem {
        let mut x = a.clone();
        for _ in 0..k {
            x = self.q_power(&x);
        }
        x
    }
}

/// `true` iff `n` is prime (trial division).
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n < 4 {
        return true;
    }
    if n % 2 == 0 {
        return false;
    }
    let mut d = 3u64;
    while d.saturating_mul(d) <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

/// Distinct prime factors of `n`, ascending.
pub fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d.saturating_mul(d) <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Möbius function.
pub fn moebius(n: u64) -> i64 {
    let mut m = n;
    let mut sign = 1i64;
    let mut d = 2u64;
    while d * d <= m {
        if m % d == 0 {
            m /= d;
            if m % d == 0 {
                return 0;
            }
            sign = -sign;
        }
        d += 1;
    }
    if m > 1 {
        sign = -sign;
    }
    sign
}
