//! Text form of polynomials: terms `c*T^k` joined by `+`, descending powers.
//! Coefficients are plain integers over prime fields and coordinate tuples
//! `(c0,c1,...)` otherwise. The zero polynomial is `0`.

use super::{ARing, APoly, Domain, FieldSpec, FiniteField, FqElem, Poly};
use crate::error::{Error, Result};

pub(crate) fn format_poly<B: FiniteField>(base: &B, f: &Poly<B::Elem>, var: &str) -> String {
    if f.is_zero() {
        return "0".into();
    }
    let mut terms = Vec::new();
    for (k, c) in f.coeffs().iter().enumerate().rev() {
        if base.is_zero(c) {
            continue;
        }
        let coeff = base.format_elem(c);
        let monomial = match k {
            0 => String::new(),
            1 => var.to_string(),
            _ => format!("{var}^{k}"),
        };
        terms.push(match (k, base.is_one(c)) {
            (0, _) => coeff,
            (_, true) => monomial,
            (_, false) => format!("{coeff}*{monomial}"),
        });
    }
    terms.join("+")
}

/// Canonical text of an element of `A`.
pub fn format_apoly(field: &FieldSpec, f: &APoly) -> String {
    format_poly(field, f, "T")
}

/// Parses an element of `A`. Whitespace is ignored; `-` is accepted as
/// subtraction and integer coefficients are reduced mod `p`.
pub fn parse_apoly(field: &FieldSpec, s: &str) -> Result<APoly> {
    let ring = ARing::new(field.clone());
    let text: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    if text.is_empty() {
        return Err(Error::Parse("empty polynomial".into()));
    }
    let mut acc = ring.zero();
    for (negative, term) in split_terms(&text)? {
        let (c, k) = parse_term(field, term)?;
        let mono = ring.monomial(c, k);
        acc = if negative { ring.sub(&acc, &mono) } else { ring.add(&acc, &mono) };
    }
    Ok(acc)
}

/// Splits on `+`/`-` at parenthesis depth 0.
pub(crate) fn split_terms(text: &str) -> Result<Vec<(bool, &str)>> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    let mut negative = false;
    for (i, ch) in text.char_indices() {
        match ch {
            '(' | '[' => depth += 1,
            ')' | ']' => {
                depth -= 1;
                if depth < 0 {
                    return Err(Error::Parse(format!("unbalanced parentheses in {text:?}")));
                }
            }
            '+' | '-' if depth == 0 => {
                let term = &text[start..i];
                if !term.is_empty() {
                    out.push((negative, term));
                } else if i != 0 {
                    return Err(Error::Parse(format!("empty term in {text:?}")));
                }
                negative = ch == '-';
                start = i + 1;
            }
            _ => {}
        }
    }
    if depth != 0 {
        return Err(Error::Parse(format!("unbalanced parentheses in {text:?}")));
    }
    let last = &text[start..];
    if last.is_empty() {
        return Err(Error::Parse(format!("trailing operator in {text:?}")));
    }
    out.push((negative, last));
    Ok(out)
}

fn parse_term(field: &FieldSpec, term: &str) -> Result<(FqElem, usize)> {
    let (coeff, mono) = match term.find('T') {
        None => (term, None),
        Some(i) => {
            let coeff = term[..i].trim_end_matches('*');
            (coeff, Some(&term[i + 1..]))
        }
    };
    let c = if coeff.is_empty() {
        if mono.is_none() {
            return Err(Error::Parse("empty term".into()));
        }
        field.one()
    } else {
        parse_coeff(field, coeff)?
    };
    let k = match mono {
        None => 0,
        Some("") => 1,
        Some(rest) => rest
            .strip_prefix('^')
            .and_then(|e| e.parse::<usize>().ok())
            .ok_or_else(|| Error::Parse(format!("bad exponent in term {term:?}")))?,
    };
    Ok((c, k))
}

/// An element of `F_q`: an integer (read in `F_p`) or a coordinate tuple
/// `(c0,c1,...)`. Whitespace is ignored.
pub fn parse_fq(field: &FieldSpec, s: &str) -> Result<FqElem> {
    let text: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    if let Some(rest) = text.strip_prefix('-') {
        return Ok(field.neg(&parse_coeff(field, rest)?));
    }
    parse_coeff(field, &text)
}

/// An `F_q` coefficient: an integer (read in `F_p`) or a coordinate tuple.
pub(crate) fn parse_coeff(field: &FieldSpec, s: &str) -> Result<FqElem> {
    if let Some(inner) = s.strip_prefix('(').and_then(|r| r.strip_suffix(')')) {
        let parts: Vec<&str> = inner.split(',').collect();
        if parts.len() > field.n() {
            return Err(Error::Parse(format!(
                "tuple {s:?} has more than n = {} coordinates",
                field.n()
            )));
        }
        let mut coords = vec![0u64; field.n()];
        for (slot, part) in coords.iter_mut().zip(&parts) {
            *slot = parse_int(part)? % field.p();
        }
        return Ok(field.from_coords(&coords));
    }
    Ok(field.from_coords(&{
        let mut c = vec![0u64; field.n()];
        c[0] = parse_int(s)? % field.p();
        c
    }))
}

fn parse_int(s: &str) -> Result<u64> {
    s.parse::<u64>()
        .map_err(|_| Error::Parse(format!("bad integer {s:?}")))
}
