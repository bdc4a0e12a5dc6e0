use std::fmt;
use std::sync::Arc;

use super::{is_prime, prime_factors, Domain, FiniteField, PolyRing};
use crate::error::{Error, Result};

/// Fields up to this size get exp/log tables.
const TABLE_LIMIT: u64 = 1 << 20;
/// Built-in moduli exist for `p <= 13, n <= 4`.
const BUILTIN_MAX_P: u64 = 13;
const BUILTIN_MAX_N: usize = 4;

/// An element of `F_q`, stored as its enumeration index `Σ c_i p^i` where
/// `c_i` are the coordinates in the power basis of the defining modulus.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct FqElem(pub(crate) u64);

impl FqElem {
    pub fn index(self) -> u64 {
        self.0
    }
}

/// `F_q = F_p[z]/(m(z))` with `q = p^n`.
///
/// Cheap to clone; all state sits behind an `Arc` and is immutable.
#[derive(Clone)]
pub struct FieldSpec {
    inner: Arc<FqInner>,
}

struct FqInner {
    p: u64,
    n: usize,
    q: u64,
    /// Monic, little-endian, length `n + 1`.
    modulus: Vec<u64>,
    tables: Option<Tables>,
}

struct Tables {
    /// `exp[i] = g^i` for `i < 2(q-1)`.
    exp: Vec<u32>,
    /// `log[x]` for `x != 0`.
    log: Vec<u32>,
}

impl PartialEq for FieldSpec {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.inner, &other.inner)
            || (self.inner.p == other.inner.p && self.inner.modulus == other.inner.modulus)
    }
}

impl Eq for FieldSpec {}

impl fmt::Debug for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{}(modulus={:?})", self.inner.q, self.inner.modulus)
    }
}

/// Validates `(p, n, modulus)` and builds the field.
///
/// Without an explicit modulus, `n = 1` uses `z` and `n > 1` uses the first
/// monic irreducible of degree `n` over `F_p` in enumeration order (only
/// for `p <= 13, n <= 4`).
pub fn make_field(p: u64, n: usize, modulus: Option<&[u64]>) -> Result<FieldSpec> {
    if !is_prime(p) || p >= 1 << 31 {
        return Err(Error::NotPrime(p));
    }
    if n == 0 {
        return Err(Error::MalformedModulus("n must be positive".into()));
    }
    let q = p
        .checked_pow(n as u32)
        .filter(|&q| q < 1 << 48)
        .ok_or(Error::FieldTooLarge { p, n })?;
    let prime = FieldSpec::prime_unchecked(p);
    let modulus = match modulus {
        Some(m) => {
            if m.len() != n + 1 || m[n] % p != 1 {
                return Err(Error::MalformedModulus(format!(
                    "expected a monic sequence of {} coefficients",
                    n + 1
                )));
            }
            let m: Vec<u64> = m.iter().map(|c| c % p).collect();
            let ring = PolyRing::new(prime.clone());
            let poly = ring.from_coeffs(m.iter().map(|&c| FqElem(c)).collect());
            if !super::primes::is_irreducible(&ring, &poly) {
                return Err(Error::ReducibleModulus { p });
            }
            m
        }
        None if n == 1 => vec![0, 1],
        None if p <= BUILTIN_MAX_P && n <= BUILTIN_MAX_N => builtin_modulus(&prime, n),
        None => return Err(Error::UnsupportedDegree { p, n }),
    };
    Ok(FieldSpec::build(p, n, q, modulus))
}

fn builtin_modulus(prime: &FieldSpec, n: usize) -> Vec<u64> {
    let ring = PolyRing::new(prime.clone());
    let f = super::primes::monic_irreducibles(&ring, n)
        .next()
        .expect("irreducibles exist in every degree");
    f.coeffs().iter().map(|c| c.0).collect()
}

impl FieldSpec {
    pub(crate) fn prime_unchecked(p: u64) -> Self {
        Self::build(p, 1, p, vec![0, 1])
    }

    fn build(p: u64, n: usize, q: u64, modulus: Vec<u64>) -> Self {
        let mut inner = FqInner {
            p,
            n,
            q,
            modulus,
            tables: None,
        };
        if q <= TABLE_LIMIT && q > 2 {
            inner.tables = Some(build_tables(&inner));
        }
        FieldSpec {
            inner: Arc::new(inner),
        }
    }

    pub fn p(&self) -> u64 {
        self.inner.p
    }

    pub fn n(&self) -> usize {
        self.inner.n
    }

    pub fn q(&self) -> u64 {
        self.inner.q
    }

    pub fn modulus(&self) -> &[u64] {
        &self.inner.modulus
    }

    /// Element from its enumeration index (reduced mod `q`).
    pub fn elem(&self, idx: u64) -> FqElem {
        FqElem(idx % self.inner.q)
    }

    /// Image of an integer under `Z → F_p ⊂ F_q`.
    pub fn from_int(&self, v: i64) -> FqElem {
        FqElem(v.rem_euclid(self.inner.p as i64) as u64)
    }

    /// All nonzero elements in enumeration order.
    pub fn units(&self) -> impl Iterator<Item = FqElem> {
        (1..self.inner.q).map(FqElem)
    }

    pub fn all(&self) -> impl Iterator<Item = FqElem> {
        (0..self.inner.q).map(FqElem)
    }

    pub fn sub_elem(&self, a: FqElem, b: FqElem) -> FqElem {
        self.add(&a, &self.neg(&b))
    }

    fn digits(&self, x: u64) -> Vec<u64> {
        let p = self.inner.p;
        let mut rest = x;
        (0..self.inner.n)
            .map(|_| {
                let d = rest % p;
                rest /= p;
                d
            })
            .collect()
    }

    fn undigits(&self, d: &[u64]) -> u64 {
        let p = self.inner.p;
        d.iter().rev().fold(0, |acc, &c| acc * p + c % p)
    }

    fn mul_slow(&self, a: u64, b: u64) -> u64 {
        let inner = &self.inner;
        let (p, n) = (inner.p as u128, inner.n);
        if n == 1 {
            return ((a as u128 * b as u128) % p) as u64;
        }
        let (da, db) = (self.digits(a), self.digits(b));
        let mut prod = vec![0u128; 2 * n - 1];
        for (i, &x) in da.iter().enumerate() {
            for (j, &y) in db.iter().enumerate() {
                prod[i + j] = (prod[i + j] + x as u128 * y as u128) % p;
            }
        }
        for k in (n..2 * n - 1).rev() {
            let c = prod[k];
            if c == 0 {
                continue;
            }
            for i in 0..n {
                let m = inner.modulus[i] as u128;
                prod[k - n + i] = (prod[k - n + i] + (p - c) * m) % p;
            }
            prod[k] = 0;
        }
        let low: Vec<u64> = prod[..n].iter().map(|&c| c as u64).collect();
        self.undigits(&low)
    }

    fn pow_slow(&self, a: u64, mut e: u64) -> u64 {
        let mut acc = 1;
        let mut base = a;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul_slow(acc, base);
            }
            base = self.mul_slow(base, base);
            e >>= 1;
        }
        acc
    }
}

fn build_tables(inner: &FqInner) -> Tables {
    let tmp = FieldSpec {
        inner: Arc::new(FqInner {
            p: inner.p,
            n: inner.n,
            q: inner.q,
            modulus: inner.modulus.clone(),
            tables: None,
        }),
    };
    let q = inner.q;
    let factors = prime_factors(q - 1);
    let gen = (1..q)
        .find(|&g| factors.iter().all(|&r| tmp.pow_slow(g, (q - 1) / r) != 1))
        .expect("F_q^× is cyclic");
    let order = (q - 1) as usize;
    let mut exp = vec![0u32; 2 * order];
    let mut log = vec![0u32; q as usize];
    let mut x = 1u64;
    for i in 0..order {
        exp[i] = x as u32;
        exp[i + order] = x as u32;
        log[x as usize] = i as u32;
        x = tmp.mul_slow(x, gen);
    }
    Tables { exp, log }
}

impl Domain for FieldSpec {
    type Elem = FqElem;

    fn zero(&self) -> FqElem {
        FqElem(0)
    }

    fn one(&self) -> FqElem {
        FqElem(1)
    }

    fn add(&self, a: &FqElem, b: &FqElem) -> FqElem {
        let p = self.inner.p;
        if self.inner.n == 1 {
            return FqElem((a.0 + b.0) % p);
        }
        let (mut x, mut y) = (a.0, b.0);
        let (mut out, mut place) = (0, 1);
        for _ in 0..self.inner.n {
            out += ((x % p + y % p) % p) * place;
            x /= p;
            y /= p;
            place *= p;
        }
        FqElem(out)
    }

    fn neg(&self, a: &FqElem) -> FqElem {
        let p = self.inner.p;
        if self.inner.n == 1 {
            return FqElem((p - a.0) % p);
        }
        let mut x = a.0;
        let (mut out, mut place) = (0, 1);
        for _ in 0..self.inner.n {
            out += ((p - x % p) % p) * place;
            x /= p;
            place *= p;
        }
        FqElem(out)
    }

    fn mul(&self, a: &FqElem, b: &FqElem) -> FqElem {
        if a.0 == 0 || b.0 == 0 {
            return FqElem(0);
        }
        match &self.inner.tables {
            Some(t) => FqElem(t.exp[(t.log[a.0 as usize] + t.log[b.0 as usize]) as usize] as u64),
            None => FqElem(self.mul_slow(a.0, b.0)),
        }
    }

    fn q_power(&self, a: &FqElem) -> FqElem {
        *a
    }

    fn is_zero(&self, a: &FqElem) -> bool {
        a.0 == 0
    }

    fn from_fq(&self, c: FqElem) -> FqElem {
        c
    }

    fn constants(&self) -> &FieldSpec {
        self
    }

    fn format_elem(&self, a: &FqElem) -> String {
        if self.inner.n == 1 {
            a.0.to_string()
        } else {
            let parts: Vec<String> = self.digits(a.0).iter().map(u64::to_string).collect();
            format!("({})", parts.join(","))
        }
    }
}

impl FiniteField for FieldSpec {
    fn inv(&self, a: &FqElem) -> Option<FqElem> {
        if a.0 == 0 {
            return None;
        }
        match &self.inner.tables {
            Some(t) => {
                let order = self.inner.q as u32 - 1;
                let l = t.log[a.0 as usize];
                Some(FqElem(t.exp[((order - l) % order) as usize] as u64))
            }
            None => Some(FqElem(self.pow_slow(a.0, self.inner.q - 2))),
        }
    }

    fn characteristic(&self) -> u64 {
        self.inner.p
    }

    fn prime_dim(&self) -> usize {
        self.inner.n
    }

    fn coords(&self, a: &FqElem) -> Vec<u64> {
        self.digits(a.0)
    }

    fn from_coords(&self, c: &[u64]) -> FqElem {
        FqElem(self.undigits(c))
    }

    fn pow_u64(&self, a: &FqElem, e: u64) -> FqElem {
        if a.0 == 0 {
            return FqElem(u64::from(e == 0));
        }
        match &self.inner.tables {
            Some(t) => {
                let order = self.inner.q - 1;
                let l = (t.log[a.0 as usize] as u64 * (e % order)) % order;
                FqElem(t.exp[l as usize] as u64)
            }
            None => FqElem(self.pow_slow(a.0, e)),
        }
    }

    fn cmp_elems(&self, a: &FqElem, b: &FqElem) -> std::cmp::Ordering {
        a.0.cmp(&b.0)
    }
}

/// Square test by Euler's criterion: `x^((q-1)/2) ∈ {0, 1}`.
/// In characteristic 2 every element is a square.
pub fn is_square(field: &FieldSpec, x: FqElem) -> bool {
    if field.p() == 2 {
        return true;
    }
    let e = field.pow_u64(&x, (field.q() - 1) / 2);
    e.0 <= 1
}

/// The first nonsquare of `F_q^×` in enumeration order.
pub fn find_nonsquare(field: &FieldSpec) -> Result<FqElem> {
    if field.p() == 2 {
        return Err(Error::EvenCharacteristic);
    }
    Ok(field
        .units()
        .find(|&x| !is_square(field, x))
        .expect("half of F_q^× are nonsquares for odd q"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_field_defaults_to_identity_modulus() {
        let f = make_field(5, 1, None).unwrap();
        assert_eq!(f.q(), 5);
        assert_eq!(f.modulus(), &[0, 1]);
    }

    #[test]
    fn f9_from_z2_plus_1() {
        // z^2 + 1 has no root mod 3: 0+1, 1+1, 4+1 are all nonzero mod 3.
        for z in 0..3u64 {
            assert_ne!((z * z + 1) % 3, 0);
        }
        let f = make_field(3, 2, Some(&[1, 0, 1])).unwrap();
        assert_eq!(f.q(), 9);
        // the built-in modulus for (3, 2) is the same polynomial
        assert_eq!(make_field(3, 2, None).unwrap().modulus(), &[1, 0, 1]);
    }

    #[test]
    fn rejects_bad_parameters() {
        assert_eq!(make_field(4, 1, None).unwrap_err(), Error::NotPrime(4));
        assert_eq!(
            make_field(5, 2, Some(&[4, 0, 1])).unwrap_err(),
            Error::ReducibleModulus { p: 5 }
        );
        assert_eq!(
            make_field(17, 2, None).unwrap_err(),
            Error::UnsupportedDegree { p: 17, n: 2 }
        );
        assert!(make_field(17, 2, Some(&[3, 0, 1])).is_ok());
    }

    #[test]
    fn nonsquares() {
        let f5 = make_field(5, 1, None).unwrap();
        assert_eq!(find_nonsquare(&f5).unwrap(), FqElem(2));
        let f7 = make_field(7, 1, None).unwrap();
        assert_eq!(find_nonsquare(&f7).unwrap(), FqElem(3));
        let f4 = make_field(2, 2, None).unwrap();
        assert_eq!(find_nonsquare(&f4).unwrap_err(), Error::EvenCharacteristic);
        assert!(is_square(&f5, FqElem(4)));
        assert!(is_square(&f5, FqElem(0)));
        assert!(!is_square(&f5, FqElem(3)));
    }

    #[test]
    fn table_and_slow_paths_agree() {
        let f = make_field(3, 3, None).unwrap();
        for a in f.all() {
            for b in f.all() {
                assert_eq!(f.mul(&a, &b).0, f.mul_slow(a.0, b.0));
            }
        }
    }

    #[test]
    fn large_prime_field_without_tables() {
        let f = make_field(1_000_003, 1, None).unwrap();
        let a = f.elem(123_456);
        let inv = f.inv(&a).unwrap();
        assert_eq!(f.mul(&a, &inv), f.one());
        assert!(is_square(&f, f.mul(&a, &a)));
    }

    #[test]
    fn square_count_and_multiplicativity() {
        for (p, n) in [(5, 1), (7, 1), (3, 2), (11, 1), (5, 2)] {
            let f = make_field(p, n, None).unwrap();
            let squares: Vec<bool> = f.units().map(|x| is_square(&f, x)).collect();
            assert_eq!(squares.iter().filter(|&&s| s).count() as u64, (f.q() - 1) / 2);
            for x in f.units() {
                for y in f.units() {
                    let xy = f.mul(&x, &y);
                    assert_eq!(is_square(&f, xy), is_square(&f, x) == is_square(&f, y));
                }
            }
        }
    }
}
