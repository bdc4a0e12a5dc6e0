use std::fmt;

use num_bigint::BigUint;

use super::{Domain, FieldSpec, FiniteField, FqElem};
use crate::error::{Error, Result};

/// Dense univariate polynomial, little-endian, with no trailing zeros.
/// The zero polynomial has no coefficients and degree `None`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Poly<E> {
    coeffs: Vec<E>,
}

/// An element of `A = F_q[T]`.
pub type APoly = Poly<FqElem>;
/// The ring `A = F_q[T]`.
pub type ARing = PolyRing<FieldSpec>;

impl<E> Poly<E> {
    pub fn coeffs(&self) -> &[E] {
        &self.coeffs
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn deg(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn leading(&self) -> Option<&E> {
        self.coeffs.last()
    }

    pub fn coeff(&self, i: usize) -> Option<&E> {
        self.coeffs.get(i)
    }

    pub fn into_coeffs(self) -> Vec<E> {
        self.coeffs
    }
}

impl<E: fmt::Debug> fmt::Debug for Poly<E> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly{:?}", self.coeffs)
    }
}

/// Polynomials in one variable over a finite field `B`.
#[derive(Clone, Debug, PartialEq)]
pub struct PolyRing<B: FiniteField> {
    base: B,
}

impl<B: FiniteField> PolyRing<B> {
    pub fn new(base: B) -> Self {
        PolyRing { base }
    }

    pub fn base(&self) -> &B {
        &self.base
    }

    /// Builds a polynomial, stripping trailing zeros.
    pub fn from_coeffs(&self, mut coeffs: Vec<B::Elem>) -> Poly<B::Elem> {
        while coeffs.last().is_some_and(|c| self.base.is_zero(c)) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn constant(&self, c: B::Elem) -> Poly<B::Elem> {
        self.from_coeffs(vec![c])
    }

    pub fn monomial(&self, c: B::Elem, k: usize) -> Poly<B::Elem> {
        let mut coeffs = vec![self.base.zero(); k + 1];
        coeffs[k] = c;
        self.from_coeffs(coeffs)
    }

    /// The variable.
    pub fn var(&self) -> Poly<B::Elem> {
        self.monomial(self.base.one(), 1)
    }

    /// `T - α`.
    pub fn linear(&self, alpha: &B::Elem) -> Poly<B::Elem> {
        self.from_coeffs(vec![self.base.neg(alpha), self.base.one()])
    }

    pub fn scale(&self, f: &Poly<B::Elem>, c: &B::Elem) -> Poly<B::Elem> {
        self.from_coeffs(f.coeffs.iter().map(|x| self.base.mul(x, c)).collect())
    }

    pub fn shift(&self, f: &Poly<B::Elem>, k: usize) -> Poly<B::Elem> {
        if f.is_zero() {
            return f.clone();
        }
        let mut coeffs = vec![self.base.zero(); k];
        coeffs.extend(f.coeffs.iter().cloned());
        Poly { coeffs }
    }

    pub fn is_monic(&self, f: &Poly<B::Elem>) -> bool {
        f.leading().is_some_and(|c| self.base.is_one(c))
    }

    pub fn monic(&self, f: &Poly<B::Elem>) -> Poly<B::Elem> {
        match f.leading() {
            None => f.clone(),
            Some(lc) => {
                let inv = self.base.inv(lc).expect("nonzero leading coefficient");
                self.scale(f, &inv)
            }
        }
    }

    pub fn eval(&self, f: &Poly<B::Elem>, x: &B::Elem) -> B::Elem {
        f.coeffs
            .iter()
            .rev()
            .fold(self.base.zero(), |acc, c| self.base.add(&self.base.mul(&acc, x), c))
    }

    /// Formal derivative.
    pub fn derivative(&self, f: &Poly<B::Elem>) -> Poly<B::Elem> {
        let coeffs = f
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| {
                let k = self.base.from_fq(self.base.constants().from_int(i as i64));
                self.base.mul(c, &k)
            })
            .collect();
        self.from_coeffs(coeffs)
    }

    pub fn divrem(
        &self,
        f: &Poly<B::Elem>,
        g: &Poly<B::Elem>,
    ) -> Result<(Poly<B::Elem>, Poly<B::Elem>)> {
        let dg = g.deg().ok_or(Error::DivisionByZeroPolynomial)?;
        let Some(df) = f.deg() else {
            return Ok((f.clone(), f.clone()));
        };
        if df < dg {
            return Ok((self.from_coeffs(vec![]), f.clone()));
        }
        let lc_inv = self.base.inv(&g.coeffs[dg]).expect("nonzero leading coefficient");
        let mut rem = f.coeffs.clone();
        let mut quot = vec![self.base.zero(); df - dg + 1];
        for k in (dg..=df).rev() {
            let c = self.base.mul(&rem[k], &lc_inv);
            if self.base.is_zero(&c) {
                continue;
            }
            for (i, gi) in g.coeffs.iter().enumerate() {
                let t = self.base.mul(&c, gi);
                rem[k - dg + i] = self.base.sub(&rem[k - dg + i], &t);
            }
            quot[k - dg] = c;
        }
        rem.truncate(dg);
        Ok((self.from_coeffs(quot), self.from_coeffs(rem)))
    }

    pub fn rem(&self, f: &Poly<B::Elem>, g: &Poly<B::Elem>) -> Result<Poly<B::Elem>> {
        Ok(self.divrem(f, g)?.1)
    }

    pub fn divides(&self, g: &Poly<B::Elem>, f: &Poly<B::Elem>) -> bool {
        !g.is_zero() && self.rem(f, g).is_ok_and(|r| r.is_zero())
    }

    /// Monic gcd (zero iff both inputs are zero).
    pub fn gcd(&self, f: &Poly<B::Elem>, g: &Poly<B::Elem>) -> Poly<B::Elem> {
        let (mut a, mut b) = (f.clone(), g.clone());
        while !b.is_zero() {
            let r = self.rem(&a, &b).expect("b is nonzero");
            a = b;
            b = r;
        }
        self.monic(&a)
    }

    /// `(g, s, t)` with `s f + t g' = g = gcd(f, g')`, `g` monic.
    pub fn ext_gcd(
        &self,
        f: &Poly<B::Elem>,
        g: &Poly<B::Elem>,
    ) -> (Poly<B::Elem>, Poly<B::Elem>, Poly<B::Elem>) {
        let zero = self.from_coeffs(vec![]);
        let one = self.constant(self.base.one());
        let (mut r0, mut r1) = (f.clone(), g.clone());
        let (mut s0, mut s1) = (one.clone(), zero.clone());
        let (mut t0, mut t1) = (zero, one);
        while !r1.is_zero() {
            let (q, r) = self.divrem(&r0, &r1).expect("r1 is nonzero");
            let s = self.sub(&s0, &self.mul(&q, &s1));
            let t = self.sub(&t0, &self.mul(&q, &t1));
            r0 = std::mem::replace(&mut r1, r);
            s0 = std::mem::replace(&mut s1, s);
            t0 = std::mem::replace(&mut t1, t);
        }
        match r0.leading() {
            None => (r0, s0, t0),
            Some(lc) => {
                let inv = self.base.inv(lc).expect("nonzero");
                (self.scale(&r0, &inv), self.scale(&s0, &inv), self.scale(&t0, &inv))
            }
        }
    }

    pub fn pow(&self, f: &Poly<B::Elem>, mut e: u64) -> Poly<B::Elem> {
        let mut acc = self.one();
        let mut base = f.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            e >>= 1;
            if e > 0 {
                base = self.mul(&base, &base);
            }
        }
        acc
    }

    pub fn mulmod(
        &self,
        f: &Poly<B::Elem>,
        g: &Poly<B::Elem>,
        m: &Poly<B::Elem>,
    ) -> Poly<B::Elem> {
        self.rem(&self.mul(f, g), m).expect("nonzero modulus")
    }

    pub fn powmod(&self, f: &Poly<B::Elem>, e: &BigUint, m: &Poly<B::Elem>) -> Poly<B::Elem> {
        let mut acc = self.rem(&self.one(), m).expect("nonzero modulus");
        let base = self.rem(f, m).expect("nonzero modulus");
        for i in (0..e.bits()).rev() {
            acc = self.mulmod(&acc, &acc, m);
            if e.bit(i) {
                acc = self.mulmod(&acc, &base, m);
            }
        }
        acc
    }

    /// All monic polynomials of degree exactly `d`, in enumeration order
    /// (lower coefficients vary fastest).
    pub fn monic_of_degree(&self, d: usize) -> impl Iterator<Item = Poly<B::Elem>> + '_ {
        let size = self.base.size_u64().expect("base field too large to enumerate");
        // odometer over coefficient indices; no total count needed
        let mut digits = Some(vec![0u64; d]);
        std::iter::from_fn(move || {
            let current = digits.take()?;
            let mut coeffs: Vec<B::Elem> =
                current.iter().map(|&i| self.base.element_at(i)).collect();
            coeffs.push(self.base.one());
            let mut next = current;
            if let Some(pos) = next.iter().position(|&i| i + 1 < size) {
                next[..pos].iter_mut().for_each(|i| *i = 0);
                next[pos] += 1;
                digits = Some(next);
            }
            Some(Poly { coeffs })
        })
    }

    /// All polynomials of degree `< n` (zero included), in enumeration order.
    pub fn below_degree(&self, n: usize) -> impl Iterator<Item = Poly<B::Elem>> + '_ {
        let size = self.base.size_u64().expect("base field too large to enumerate");
        let count = size.checked_pow(n as u32).expect("enumeration too large");
        (0..count).map(move |idx| self.nth_below_degree(idx, n))
    }

    /// The `idx`-th polynomial of degree `< n` in enumeration order.
    pub fn nth_below_degree(&self, idx: u64, n: usize) -> Poly<B::Elem> {
        let size = self.base.size_u64().expect("base field too large to enumerate");
        let mut rest = idx;
        let coeffs = (0..n)
            .map(|_| {
                let c = self.base.element_at(rest % size);
                rest /= size;
                c
            })
            .collect();
        self.from_coeffs(coeffs)
    }
}

impl<B: FiniteField> Domain for PolyRing<B> {
    type Elem = Poly<B::Elem>;

    fn zero(&self) -> Self::Elem {
        Poly { coeffs: vec![] }
    }

    fn one(&self) -> Self::Elem {
        Poly {
            coeffs: vec![self.base.one()],
        }
    }

    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        let (long, short) = if a.coeffs.len() >= b.coeffs.len() { (a, b) } else { (b, a) };
        let mut coeffs = long.coeffs.clone();
        for (c, s) in coeffs.iter_mut().zip(&short.coeffs) {
            *c = self.base.add(c, s);
        }
        self.from_coeffs(coeffs)
    }

    fn neg(&self, a: &Self::Elem) -> Self::Elem {
        Poly {
            coeffs: a.coeffs.iter().map(|c| self.base.neg(c)).collect(),
        }
    }

    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        if a.is_zero() || b.is_zero() {
            return self.zero();
        }
        let mut coeffs = vec![self.base.zero(); a.coeffs.len() + b.coeffs.len() - 1];
        for (i, x) in a.coeffs.iter().enumerate() {
            if self.base.is_zero(x) {
                continue;
            }
            for (j, y) in b.coeffs.iter().enumerate() {
                let t = self.base.mul(x, y);
                coeffs[i + j] = self.base.add(&coeffs[i + j], &t);
            }
        }
        self.from_coeffs(coeffs)
    }

    /// `a(T) ↦ a(T)^q`, i.e. `Σ c_i^q T^{qi}`.
    fn q_power(&self, a: &Self::Elem) -> Self::Elem {
        let Some(d) = a.deg() else {
            return self.zero();
        };
        let q = self.base.constants().q() as usize;
        let mut coeffs = vec![self.base.zero(); d * q + 1];
        for (i, c) in a.coeffs.iter().enumerate() {
            coeffs[i * q] = self.base.q_power(c);
        }
        Poly { coeffs }
    }

    fn is_zero(&self, a: &Self::Elem) -> bool {
        a.is_zero()
    }

    fn from_fq(&self, c: FqElem) -> Self::Elem {
        self.constant(self.base.from_fq(c))
    }

    fn constants(&self) -> &FieldSpec {
        self.base.constants()
    }

    fn format_elem(&self, a: &Self::Elem) -> String {
        super::text::format_poly(&self.base, a, "T")
    }
}

/// Euclidean division in `A`: `f = g·quot + rem` with `deg rem < deg g`.
pub fn poly_divrem(ring: &ARing, f: &APoly, g: &APoly) -> Result<(APoly, APoly)> {
    ring.divrem(f, g)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::make_field;

    fn ring5() -> ARing {
        PolyRing::new(make_field(5, 1, None).unwrap())
    }

    fn p(r: &ARing, c: &[u64]) -> APoly {
        r.from_coeffs(c.iter().map(|&x| r.base().elem(x)).collect())
    }

    #[test]
    fn divrem_examples() {
        let r = ring5();
        // (T^2 + 1) = (T + 4)(T + 1) + 2 over F_5
        let (q, rem) = poly_divrem(&r, &p(&r, &[1, 0, 1]), &p(&r, &[4, 1])).unwrap();
        assert_eq!(q, p(&r, &[1, 1]));
        assert_eq!(rem, p(&r, &[2]));
        let f = p(&r, &[3, 1, 4]);
        assert_eq!(poly_divrem(&r, &f, &r.one()).unwrap(), (f.clone(), r.zero()));
        assert_eq!(poly_divrem(&r, &r.zero(), &f).unwrap(), (r.zero(), r.zero()));
        assert_eq!(
            poly_divrem(&r, &f, &r.zero()).unwrap_err(),
            Error::DivisionByZeroPolynomial
        );
    }

    #[test]
    fn divrem_roundtrip_exhaustive_deg3_f5() {
        let r = ring5();
        let polys: Vec<APoly> = r.below_degree(4).collect();
        for f in &polys {
            for g in polys.iter().filter(|g| !g.is_zero()) {
                let (q, rem) = r.divrem(f, g).unwrap();
                assert_eq!(r.add(&r.mul(g, &q), &rem), *f);
                assert!(rem.deg() < g.deg());
            }
        }
    }

    #[test]
    fn zero_degree_is_distinguished() {
        let r = ring5();
        assert_eq!(r.zero().deg(), None);
        assert_eq!(r.one().deg(), Some(0));
    }

    #[test]
    fn q_power_is_frobenius_on_a() {
        let r = ring5();
        let f = p(&r, &[1, 2, 3]);
        assert_eq!(r.q_power(&f), r.pow(&f, 5));
        assert_eq!(r.q_power(&r.var()), r.pow(&r.var(), 5));
    }

    #[test]
    fn ext_gcd_bezout() {
        let r = ring5();
        let f = p(&r, &[1, 0, 1]);
        let g = p(&r, &[1, 1]);
        let (d, s, t) = r.ext_gcd(&f, &g);
        assert_eq!(d, r.one());
        assert_eq!(r.add(&r.mul(&s, &f), &r.mul(&t, &g)), d);
    }
}
