use std::fmt;
use std::sync::Arc;

use super::{Domain, FieldSpec, FiniteField, FqElem, Poly, PolyRing};
use crate::error::{Error, Result};

/// `B[y]/(h(y))` for a monic irreducible `h` of degree `d` over a finite
/// field `B`. Elements are coefficient vectors of length exactly `d`.
///
/// Nesting gives towers: residue fields `k_λ = F_q[T]/(λ)` are
/// `ExtField<FieldSpec>`, and splitting fields of torsion are
/// `ExtField<ExtField<FieldSpec>>`.
#[derive(Clone)]
pub struct ExtField<B: FiniteField> {
    inner: Arc<ExtInner<B>>,
}

struct ExtInner<B: FiniteField> {
    ring: PolyRing<B>,
    modulus: Poly<B::Elem>,
    degree: usize,
    /// `(y^i)^q` for `i < d`.
    q_images: Vec<Vec<B::Elem>>,
}

impl<B: FiniteField> PartialEq for ExtField<B> {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.inner, &other.inner)
            || (self.inner.ring == other.inner.ring && self.inner.modulus == other.inner.modulus)
    }
}

impl<B: FiniteField> fmt::Debug for ExtField<B> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Ext({:?} / {:?})", self.inner.modulus, self.inner.ring.base())
    }
}

impl<B: FiniteField> ExtField<B> {
    /// Checks that `modulus` is monic and irreducible over `base`.
    pub fn new(base: B, modulus: Poly<B::Elem>) -> Result<Self> {
        let ring = PolyRing::new(base.clone());
        if !ring.is_monic(&modulus) || modulus.deg() == Some(0) {
            return Err(Error::MalformedModulus("extension modulus must be monic of positive degree".into()));
        }
        if !super::primes::is_irreducible(&ring, &modulus) {
            return Err(Error::ReducibleModulus {
                p: base.characteristic(),
            });
        }
        Ok(Self::new_unchecked(base, modulus))
    }

    /// Caller guarantees `modulus` is monic irreducible of positive degree.
    pub(crate) fn new_unchecked(base: B, modulus: Poly<B::Elem>) -> Self {
        let degree = modulus.deg().expect("nonzero modulus");
        let ring = PolyRing::new(base);
        let mut field = ExtField {
            inner: Arc::new(ExtInner {
                ring,
                modulus,
                degree,
                q_images: vec![],
            }),
        };
        // y^q by square-and-multiply, then its powers.
        let q = field.constants().q();
        let y = field.generator();
        let yq = field.pow_u64(&y, q);
        let mut images = Vec::with_capacity(degree);
        let mut acc = field.one();
        for _ in 0..degree {
            images.push(acc.clone());
            acc = field.mul(&acc, &yq);
        }
        Arc::get_mut(&mut field.inner)
            .expect("freshly built")
            .q_images = images;
        field
    }

    pub fn base(&self) -> &B {
        self.inner.ring.base()
    }

    pub fn degree(&self) -> usize {
        self.inner.degree
    }

    pub fn modulus(&self) -> &Poly<B::Elem> {
        &self.inner.modulus
    }

    /// The class of `y`.
    pub fn generator(&self) -> Vec<B::Elem> {
        let mut v = vec![self.base().zero(); self.inner.degree];
        if self.inner.degree == 1 {
            // y ≡ -h_0
            v[0] = self.base().neg(&self.inner.modulus.coeffs()[0]);
        } else {
            v[1] = self.base().one();
        }
        v
    }

    pub fn embed(&self, c: &B::Elem) -> Vec<B::Elem> {
        let mut v = vec![self.base().zero(); self.inner.degree];
        v[0] = c.clone();
        v
    }

    /// Reduces a polynomial over `B` into the field.
    pub fn from_poly(&self, f: &Poly<B::Elem>) -> Vec<B::Elem> {
        let r = self
            .inner
            .ring
            .rem(f, &self.inner.modulus)
            .expect("nonzero modulus");
        let mut v = r.into_coeffs();
        v.resize(self.inner.degree, self.base().zero());
        v
    }

    pub fn to_poly(&self, x: &[B::Elem]) -> Poly<B::Elem> {
        self.inner.ring.from_coeffs(x.to_vec())
    }

    pub fn scale(&self, x: &[B::Elem], c: &B::Elem) -> Vec<B::Elem> {
        x.iter().map(|v| self.base().mul(v, c)).collect()
    }

    fn reduce(&self, mut prod: Vec<B::Elem>) -> Vec<B::Elem> {
        let d = self.inner.degree;
        let base = self.base();
        let m = self.inner.modulus.coeffs();
        for k in (d..prod.len()).rev() {
            let c = std::mem::replace(&mut prod[k], base.zero());
            if base.is_zero(&c) {
                continue;
            }
            for i in 0..d {
                let t = base.mul(&c, &m[i]);
                prod[k - d + i] = base.sub(&prod[k - d + i], &t);
            }
        }
        prod.truncate(d);
        prod.resize(d, base.zero());
        prod
    }
}

impl<B: FiniteField> Domain for ExtField<B> {
    type Elem = Vec<B::Elem>;

    fn zero(&self) -> Self::Elem {
        vec![self.base().zero(); self.inner.degree]
    }

    fn one(&self) -> Self::Elem {
        self.embed(&self.base().one())
    }

    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        a.iter().zip(b).map(|(x, y)| self.base().add(x, y)).collect()
    }

    fn neg(&self, a: &Self::Elem) -> Self::Elem {
        a.iter().map(|x| self.base().neg(x)).collect()
    }

    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        a.iter().zip(b).map(|(x, y)| self.base().sub(x, y)).collect()
    }

    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        let base = self.base();
        let d = self.inner.degree;
        let mut prod = vec![base.zero(); 2 * d - 1];
        for (i, x) in a.iter().enumerate() {
            if base.is_zero(x) {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                if base.is_zero(y) {
                    continue;
                }
                let t = base.mul(x, y);
                prod[i + j] = base.add(&prod[i + j], &t);
            }
        }
        self.reduce(prod)
    }

    fn q_power(&self, a: &Self::Elem) -> Self::Elem {
        let base = self.base();
        let mut out = self.zero();
        for (c, img) in a.iter().zip(&self.inner.q_images) {
            if base.is_zero(c) {
                continue;
            }
            let cq = base.q_power(c);
            for (o, v) in out.iter_mut().zip(img) {
                *o = base.add(o, &base.mul(&cq, v));
            }
        }
        out
    }

    fn is_zero(&self, a: &Self::Elem) -> bool {
        a.iter().all(|x| self.base().is_zero(x))
    }

    fn from_fq(&self, c: FqElem) -> Self::Elem {
        self.embed(&self.base().from_fq(c))
    }

    fn constants(&self) -> &FieldSpec {
        self.base().constants()
    }

    fn format_elem(&self, a: &Self::Elem) -> String {
        let parts: Vec<String> = a.iter().map(|c| self.base().format_elem(c)).collect();
        format!("[{}]", parts.join(","))
    }
}

impl<B: FiniteField> FiniteField for ExtField<B> {
    fn inv(&self, a: &Self::Elem) -> Option<Self::Elem> {
        if self.is_zero(a) {
            return None;
        }
        let ring = &self.inner.ring;
        let (g, s, _) = ring.ext_gcd(&self.to_poly(a), &self.inner.modulus);
        debug_assert!(ring.is_one(&g));
        Some(self.from_poly(&s))
    }

    fn characteristic(&self) -> u64 {
        self.base().characteristic()
    }

    fn prime_dim(&self) -> usize {
        self.base().prime_dim() * self.inner.degree
    }

    fn coords(&self, a: &Self::Elem) -> Vec<u64> {
        a.iter().flat_map(|c| self.base().coords(c)).collect()
    }

    fn from_coords(&self, c: &[u64]) -> Self::Elem {
        let k = self.base().prime_dim();
        (0..self.inner.degree)
            .map(|i| self.base().from_coords(&c[i * k..(i + 1) * k]))
            .collect()
    }
}
