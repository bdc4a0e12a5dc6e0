//! The twisted polynomial ring `K{τ}` with `τ a = a^q τ`.
//!
//! Works over any [`Domain`]: `A` itself (where the `q`-power map is
//! `a(T) ↦ a(T)^q`) as well as residue fields and their extensions.

use std::fmt;

use crate::algebra::{parse_apoly, ARing, Domain, FiniteField};
use crate::error::{Error, Result};

/// `Σ c_i τ^i`, little-endian in `τ`, no trailing zeros.
#[derive(Clone, PartialEq, Eq)]
pub struct TwistedPoly<D: Domain> {
    domain: D,
    coeffs: Vec<D::Elem>,
}

impl<D: Domain> TwistedPoly<D> {
    pub fn new(domain: D, mut coeffs: Vec<D::Elem>) -> Self {
        while coeffs.last().is_some_and(|c| domain.is_zero(c)) {
            coeffs.pop();
        }
        TwistedPoly { domain, coeffs }
    }

    pub fn zero(domain: D) -> Self {
        TwistedPoly {
            domain,
            coeffs: vec![],
        }
    }

    pub fn one(domain: D) -> Self {
        let one = domain.one();
        Self::new(domain, vec![one])
    }

    pub fn constant(domain: D, c: D::Elem) -> Self {
        Self::new(domain, vec![c])
    }

    /// `c τ^k`.
    pub fn monomial(domain: D, c: D::Elem, k: usize) -> Self {
        let mut coeffs = vec![domain.zero(); k + 1];
        coeffs[k] = c;
        Self::new(domain, coeffs)
    }

    /// `τ^k`.
    pub fn tau_pow(domain: D, k: usize) -> Self {
        let one = domain.one();
        Self::monomial(domain, one, k)
    }

    pub fn domain(&self) -> &D {
        &self.domain
    }

    pub fn coeffs(&self) -> &[D::Elem] {
        &self.coeffs
    }

    /// Coefficient of `τ^k` (zero beyond the degree).
    pub fn coeff(&self, k: usize) -> D::Elem {
        self.coeffs.get(k).cloned().unwrap_or_else(|| self.domain.zero())
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn deg_tau(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn ht_tau(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !self.domain.is_zero(c))
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_domain(other)?;
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n)
            .map(|k| self.domain.add(&self.coeff(k), &other.coeff(k)))
            .collect();
        Ok(Self::new(self.domain.clone(), coeffs))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        let coeffs = self.coeffs.iter().map(|c| self.domain.neg(c)).collect();
        TwistedPoly {
            domain: self.domain.clone(),
            coeffs,
        }
    }

    /// Left multiplication by a scalar: `c · f`.
    pub fn scale(&self, c: &D::Elem) -> Self {
        let coeffs = self.coeffs.iter().map(|x| self.domain.mul(c, x)).collect();
        Self::new(self.domain.clone(), coeffs)
    }

    /// Right multiplication by `τ^k`.
    pub fn shift(&self, k: usize) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let mut coeffs = vec![self.domain.zero(); k];
        coeffs.extend(self.coeffs.iter().cloned());
        TwistedPoly {
            domain: self.domain.clone(),
            coeffs,
        }
    }

    /// Applies a coefficient-wise ring map into another domain.
    pub fn map_coeffs<E: Domain>(&self, target: E, f: impl Fn(&D::Elem) -> E::Elem) -> TwistedPoly<E> {
        let coeffs = self.coeffs.iter().map(f).collect();
        TwistedPoly::new(target, coeffs)
    }

    fn check_domain(&self, other: &Self) -> Result<()> {
        if self.domain == other.domain {
            Ok(())
        } else {
            Err(Error::DomainMismatch)
        }
    }
}

/// Product in `K{τ}`: the `τ^k` coefficient is `Σ_{i+j=k} f_i g_j^{q^i}`.
pub fn tw_mul<D: Domain>(f: &TwistedPoly<D>, g: &TwistedPoly<D>) -> Result<TwistedPoly<D>> {
    f.check_domain(g)?;
    let dom = &f.domain;
    if f.is_zero() || g.is_zero() {
        return Ok(TwistedPoly::zero(dom.clone()));
    }
    let mut out = vec![dom.zero(); f.coeffs.len() + g.coeffs.len() - 1];
    // twisted[j] holds g_j^{q^i} for the current i
    let mut twisted: Vec<D::Elem> = g.coeffs.clone();
    for (i, fi) in f.coeffs.iter().enumerate() {
        if i > 0 {
            for c in twisted.iter_mut() {
                if !dom.is_zero(c) {
                    *c = dom.q_power(c);
                }
            }
        }
        if dom.is_zero(fi) {
            continue;
        }
        for (j, gj) in twisted.iter().enumerate() {
            if dom.is_zero(gj) {
                continue;
            }
            out[i + j] = dom.add(&out[i + j], &dom.mul(fi, gj));
        }
    }
    Ok(TwistedPoly::new(dom.clone(), out))
}

/// `f(x) = Σ a_i x^{q^i}` for `x` in an `F_q`-algebra `R`, with the
/// coefficients of `f` carried into `R` by `embed`.
pub fn tw_eval<D: Domain, R: Domain>(
    f: &TwistedPoly<D>,
    x: &R::Elem,
    target: &R,
    embed: impl Fn(&D::Elem) -> Option<R::Elem>,
) -> Result<R::Elem> {
    let mut acc = target.zero();
    let mut power = x.clone();
    for (i, a) in f.coeffs.iter().enumerate() {
        if i > 0 {
            power = target.q_power(&power);
        }
        if f.domain.is_zero(a) {
            continue;
        }
        let a = embed(a).ok_or(Error::EmbeddingUndefined)?;
        acc = target.add(&acc, &target.mul(&a, &power));
    }
    Ok(acc)
}

/// The derivative map `∂: Σ a_n τ^n ↦ a_0`.
pub fn derivative<D: Domain>(f: &TwistedPoly<D>) -> D::Elem {
    f.coeff(0)
}

/// `(ht_τ f, deg_τ f)` for `f != 0`.
pub fn ht_deg<D: Domain>(f: &TwistedPoly<D>) -> Result<(usize, usize)> {
    match (f.ht_tau(), f.deg_tau()) {
        (Some(h), Some(d)) => Ok((h, d)),
        _ => Err(Error::ZeroElement),
    }
}

/// `f^k` under [`tw_mul`].
pub fn tw_pow<D: Domain>(f: &TwistedPoly<D>, k: usize) -> TwistedPoly<D> {
    let mut acc = TwistedPoly::one(f.domain.clone());
    for _ in 0..k {
        acc = tw_mul(&acc, f).expect("same domain");
    }
    acc
}

/// Evaluation at `x` inside the coefficient field itself.
pub fn tw_eval_in<F: FiniteField>(f: &TwistedPoly<F>, x: &F::Elem) -> F::Elem {
    tw_eval(f, x, &f.domain, |c| Some(c.clone())).expect("identity embedding")
}

impl<D: Domain> fmt::Display for TwistedPoly<D> {
    /// Ascending powers of `τ`, written `t`: `c*t^k`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if self.domain.is_zero(c) {
                continue;
            }
            if !first {
                write!(f, "+")?;
            }
            first = false;
            let text = self.domain.format_elem(c);
            let coeff = if text.contains('+') || text.contains('*') {
                format!("({text})")
            } else {
                text
            };
            let unit = self.domain.is_one(c);
            match (k, unit) {
                (0, _) => write!(f, "{coeff}")?,
                (1, true) => write!(f, "t")?,
                (1, false) => write!(f, "{coeff}*t")?,
                (_, true) => write!(f, "t^{k}")?,
                (_, false) => write!(f, "{coeff}*t^{k}")?,
            }
        }
        Ok(())
    }
}

impl<D: Domain> fmt::Debug for TwistedPoly<D> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "TwistedPoly({self})")
    }
}

/// Parses the text form of an element of `A{τ}`.
pub fn parse_twisted(ring: &ARing, s: &str) -> Result<TwistedPoly<ARing>> {
    let text: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    if text.is_empty() {
        return Err(Error::Parse("empty twisted polynomial".into()));
    }
    let mut acc = TwistedPoly::zero(ring.clone());
    for (negative, term) in crate::algebra::text_split_terms(&text)? {
        let (coeff_text, k) = split_tau(term)?;
        let coeff = match coeff_text {
            None => ring.one(),
            Some(c) => parse_apoly(ring.base(), strip_group(c))?,
        };
        let mono = TwistedPoly::monomial(ring.clone(), coeff, k);
        acc = if negative { acc.sub(&mono)? } else { acc.add(&mono)? };
    }
    Ok(acc)
}

fn split_tau(term: &str) -> Result<(Option<&str>, usize)> {
    let mut depth = 0i32;
    let mut pos = None;
    for (i, ch) in term.char_indices() {
        match ch {
            '(' => depth += 1,
            ')' => depth -= 1,
            't' if depth == 0 => pos = Some(i),
            _ => {}
        }
    }
    let Some(i) = pos else {
        return Ok((Some(term), 0));
    };
    let coeff = term[..i].strip_suffix('*').unwrap_or(&term[..i]);
    let k = match &term[i + 1..] {
        "" => 1,
        rest => rest
            .strip_prefix('^')
            .and_then(|e| e.parse().ok())
            .ok_or_else(|| Error::Parse(format!("bad τ exponent in {term:?}")))?,
    };
    Ok(((!coeff.is_empty()).then_some(coeff), k))
}

/// Drops one layer of grouping parentheses, but not a coordinate tuple.
fn strip_group(c: &str) -> &str {
    match c.strip_prefix('(').and_then(|r| r.strip_suffix(')')) {
        Some(inner) if inner.contains(['T', '+', '-', '*']) => inner,
        _ => c,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{make_field, ExtField, FieldSpec, PolyRing};

    fn f5() -> FieldSpec {
        make_field(5, 1, None).unwrap()
    }

    #[test]
    fn mul_over_f5() {
        let f = f5();
        let a = TwistedPoly::monomial(f.clone(), f.elem(2), 1);
        let b = TwistedPoly::monomial(f.clone(), f.elem(3), 1);
        // independent: 3^5 mod 5 by repeated multiplication
        let three_q = (0..5).fold(1u64, |acc, _| acc * 3 % 5);
        assert_eq!(three_q, 3);
        assert_eq!(tw_mul(&a, &b).unwrap(), TwistedPoly::monomial(f.clone(), f.elem(2 * three_q % 5), 2));
        let one = TwistedPoly::one(f.clone());
        assert_eq!(tw_mul(&one, &b).unwrap(), b);
    }

    #[test]
    fn mul_over_a_applies_frobenius() {
        let ring = ARing::new(f5());
        let tau = TwistedPoly::tau_pow(ring.clone(), 1);
        let t_tau = TwistedPoly::monomial(ring.clone(), ring.var(), 1);
        let prod = tw_mul(&tau, &t_tau).unwrap();
        assert_eq!(prod, TwistedPoly::monomial(ring.clone(), ring.pow(&ring.var(), 5), 2));
    }

    #[test]
    fn eval_examples() {
        let f = f5();
        let r = PolyRing::new(f.clone());
        let k = ExtField::new(f.clone(), r.from_coeffs(vec![f.elem(2), f.elem(0), f.elem(1)])).unwrap();
        let tau = TwistedPoly::tau_pow(f.clone(), 1);
        for x in k.elements() {
            let v = tw_eval(&tau, &x, &k, |c| Some(k.from_fq(*c))).unwrap();
            assert_eq!(v, k.pow_u64(&x, 5));
            let zero = TwistedPoly::zero(f.clone());
            assert_eq!(tw_eval(&zero, &x, &k, |c| Some(k.from_fq(*c))).unwrap(), k.zero());
        }
        // T + 4τ + 4τ² reduced along T ↦ 0, at x = 1: 0 + 4 + 4 = 3
        let ring = ARing::new(f.clone());
        let phi = TwistedPoly::new(
            ring.clone(),
            vec![ring.var(), ring.constant(f.elem(4)), ring.constant(f.elem(4))],
        );
        let at_zero = |c: &crate::algebra::APoly| Some(ring.eval(c, &f.zero()));
        assert_eq!(tw_eval(&phi, &f.one(), &f, at_zero).unwrap(), f.elem(3));
    }

    #[test]
    fn embedding_failure_surfaces() {
        let f = f5();
        let tau = TwistedPoly::tau_pow(f.clone(), 1);
        assert_eq!(
            tw_eval(&tau, &f.one(), &f, |_| None).unwrap_err(),
            Error::EmbeddingUndefined
        );
    }

    #[test]
    fn derivative_and_heights() {
        let ring = ARing::new(f5());
        let f = ring.base().clone();
        let phi = TwistedPoly::new(ring.clone(), vec![ring.var(), ring.one(), ring.constant(f.elem(3))]);
        assert_eq!(derivative(&phi), ring.var());
        assert_eq!(derivative(&TwistedPoly::zero(ring.clone())), ring.zero());
        assert_eq!(ht_deg(&TwistedPoly::monomial(ring.clone(), ring.var(), 2)).unwrap(), (2, 2));
        assert_eq!(
            ht_deg(&TwistedPoly::new(ring.clone(), vec![ring.var(), ring.one()])).unwrap(),
            (0, 1)
        );
        assert_eq!(ht_deg(&TwistedPoly::zero(ring)).unwrap_err(), Error::ZeroElement);
        let a = TwistedPoly::new(f.clone(), vec![f.elem(2), f.elem(1)]);
        let b = TwistedPoly::new(f.clone(), vec![f.elem(3), f.elem(4)]);
        assert_eq!(derivative(&tw_mul(&a, &b).unwrap()), f.elem(1));
    }

    #[test]
    fn domain_mismatch() {
        let a = TwistedPoly::one(f5());
        let b = TwistedPoly::one(make_field(7, 1, None).unwrap());
        assert_eq!(tw_mul(&a, &b).unwrap_err(), Error::DomainMismatch);
    }

    #[test]
    fn noncommutative_over_f25() {
        let f = f5();
        let r = PolyRing::new(f.clone());
        let k = ExtField::new(f.clone(), r.from_coeffs(vec![f.elem(2), f.elem(0), f.elem(1)])).unwrap();
        let tau = TwistedPoly::tau_pow(k.clone(), 1);
        for a in k.elements() {
            if k.q_power(&a) == a {
                continue;
            }
            let a_tau = TwistedPoly::monomial(k.clone(), a.clone(), 1);
            let left = tw_mul(&a_tau, &tau).unwrap();
            let right = tw_mul(&tau, &a_tau).unwrap();
            assert_eq!(left.coeff(2), a);
            assert_eq!(right.coeff(2), k.q_power(&a));
            assert_ne!(left, right);
        }
    }

    #[test]
    fn text_roundtrip() {
        let ring = ARing::new(f5());
        let f = ring.base().clone();
        let phi = TwistedPoly::new(
            ring.clone(),
            vec![
                ring.var(),
                crate::algebra::parse_apoly(&f, "T+4").unwrap(),
                crate::algebra::parse_apoly(&f, "3*T+4").unwrap(),
            ],
        );
        let text = phi.to_string();
        assert_eq!(text, "T+(T+4)*t+(3*T+4)*t^2");
        assert_eq!(parse_twisted(&ring, &text).unwrap(), phi);
        let f9 = make_field(3, 2, None).unwrap();
        let ring9 = ARing::new(f9.clone());
        let psi = parse_twisted(&ring9, "(1,2)*t + ((1,1)*T+(0,1))*t^3").unwrap();
        assert_eq!(parse_twisted(&ring9, &psi.to_string()).unwrap(), psi);
    }
}
