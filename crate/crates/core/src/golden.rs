//! Embedded golden suite: fixed inputs with known outputs across all
//! modules. Deterministic; used by the `selftest` command.

use num_bigint::BigUint;

use crate::algebra::{
    find_nonsquare, format_apoly, make_field, parse_apoly, ARing, Domain, FieldSpec, FiniteField,
    PrimeIdeal,
};
use crate::census::{
    count_all, count_congruence_class, density_limit_report, fixed_class, format_ratio, scan,
    HeightParams, DEFAULT_ENUM_CAP,
};
use crate::criterion::{check_conditions, surjectivity_verdict, Tuple};
use crate::diagnostics::{cross_validate, SampleConfig};
use crate::drinfeld::{is_minimal, j_invariant, reduce_at, twist, Datum, ReductionKind};
use crate::error::Result;
use crate::frobenius::{
    charpoly_deg1, charpoly_search, conj_class, frob_identity_check, torsion_frobenius_matrix,
    CharPoly, ConjClassKind,
};
use crate::twisted::{parse_twisted, tw_eval, tw_mul, TwistedPoly};

/// Criterion-passing data over `F_5`, each with `deg g₁, deg g₂ ≤ 2`.
pub const PASSING_Q5: [&str; 10] = [
    "g1=T+4;g2=3*T+4",
    "g1=4*T+1;g2=4*T+3",
    "g1=4*T+4;g2=4*T+2",
    "g1=T^2+4;g2=2*T^2+4*T+4",
    "g1=T^2+2*T+1;g2=3*T+1",
    "g1=T^2+3*T+2;g2=T+3",
    "g1=2*T^2+3;g2=2*T^2+4*T+4",
    "g1=2*T^2+3*T+1;g2=3*T^2+T+1",
    "g1=3*T^2+3*T+4;g2=T+1",
    "g1=4*T^2+4*T+2;g2=2*T^2+T+4",
];

/// Deliberate corruptions, for checking that the suite notices.
#[derive(Clone, Copy, Debug, Default)]
pub struct Faults {
    /// Flip the sign of `b` in the degree-one closed form.
    pub gekeler_sign: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GoldenItem {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

type Check = fn(&Faults) -> Result<(bool, String)>;

fn f5() -> FieldSpec {
    make_field(5, 1, None).expect("F_5")
}

fn datum(f: &FieldSpec, s: &str) -> Datum {
    Datum::parse(f, s).expect("golden datum")
}

fn prime(f: &FieldSpec, s: &str) -> PrimeIdeal {
    PrimeIdeal::new(&ARing::new(f.clone()), parse_apoly(f, s).expect("golden prime"))
        .expect("golden prime irreducible")
}

fn closed_form(w: &Datum, l: &PrimeIdeal, faults: &Faults) -> Result<CharPoly> {
    let mut c = charpoly_deg1(w, l)?;
    if faults.gekeler_sign {
        c.b = w.ring().neg(&c.b);
    }
    Ok(c)
}

fn text(f: &FieldSpec, c: &CharPoly) -> String {
    format!("a={} b={}", format_apoly(f, &c.a), format_apoly(f, &c.b))
}

fn expect(got: String, want: &str) -> Result<(bool, String)> {
    Ok((got == want, got))
}

const ITEMS: &[(&str, Check)] = &[
    ("algebra.f9_modulus", |_| {
        let f = make_field(3, 2, Some(&[1, 0, 1]))?;
        expect(format!("q={} modulus={:?}", f.q(), f.modulus()), "q=9 modulus=[1, 0, 1]")
    }),
    ("algebra.nonsquares", |_| {
        let a = find_nonsquare(&f5())?;
        let b = find_nonsquare(&make_field(7, 1, None)?)?;
        expect(format!("{} {}", a.index(), b.index()), "2 3")
    }),
    ("algebra.text_roundtrip", |_| {
        let f = make_field(3, 2, None)?;
        let p = parse_apoly(&f, "(1,2)*T^3 + (0,1)*T + 2")?;
        expect(format_apoly(&f, &p), "(1,2)*T^3+(0,1)*T+(2,0)")
    }),
    ("twisted.product", |_| {
        let f = f5();
        let a = TwistedPoly::monomial(f.clone(), f.from_int(2), 1);
        let b = TwistedPoly::monomial(f.clone(), f.from_int(3), 1);
        expect(tw_mul(&a, &b)?.to_string(), "t^2")
    }),
    ("twisted.eval_at_t", |_| {
        let f = f5();
        let r = ARing::new(f.clone());
        let phi = parse_twisted(&r, "T+4*t+4*t^2")?;
        let v = tw_eval(&phi, &f.one(), &f, |c| Some(r.eval(c, &f.zero())))?;
        expect(v.index().to_string(), "3")
    }),
    ("drinfeld.j_invariant_twist", |_| {
        let f = f5();
        let w = datum(&f, "g1=T^2+1;g2=2*T^3+T");
        let j = j_invariant(&w);
        let ok = f.units().all(|c| twist(&w, c).map(|v| j_invariant(&v) == j).unwrap_or(false));
        Ok((ok, format!("den={}", format_apoly(&f, &j.denominator))))
    }),
    ("drinfeld.minimality", |_| {
        let f = f5();
        let r = ARing::new(f.clone());
        let t = r.var();
        let w = Datum::new(&f, r.pow(&t, 4), r.pow(&t, 24))?;
        expect(is_minimal(&w).to_string(), "false")
    }),
    ("drinfeld.height_at_t", |_| {
        let f = f5();
        let t = prime(&f, "T");
        let good = reduce_at(&datum(&f, "g1=T+4;g2=3*T+4"), &t)?;
        let ss = reduce_at(&datum(&f, "g1=T;g2=1"), &t)?;
        let ok = good.kind == ReductionKind::Good && good.height == Some(1) && ss.height == Some(2);
        Ok((ok, format!("{:?} {:?}", good.height, ss.height)))
    }),
    ("frobenius.closed_form_anchor", |faults| {
        let f = f5();
        let w = datum(&f, "g1=T+4;g2=3*T+4");
        let l = prime(&f, "T+4");
        let c = closed_form(&w, &l, faults)?;
        let ok = frob_identity_check(&w, &l, &c.a, &c.b)?;
        let got = text(&f, &c);
        Ok((ok && got == "a=0 b=2*T+3", got))
    }),
    ("frobenius.closed_form_unit_datum", |faults| {
        let f = f5();
        let w = datum(&f, "g1=1;g2=1");
        let l = prime(&f, "T");
        let c = closed_form(&w, &l, faults)?;
        let ok = frob_identity_check(&w, &l, &c.a, &c.b)?;
        let got = text(&f, &c);
        Ok((ok && got == "a=4 b=4*T", got))
    }),
    ("frobenius.closed_form_general", |faults| {
        // a = 0, b = η(a₁⁻¹T − 1) for every admissible (a₁, η), q ∈ {5, 7, 9}
        let mut checked = 0;
        for (p, n) in [(5, 1), (7, 1), (3, 2)] {
            let f = make_field(p, n, None)?;
            let r = ARing::new(f.clone());
            for a1 in f.units() {
                for eta in f.units().filter(|e| !crate::algebra::is_square(&f, *e)) {
                    let g2 = r.constant(f.neg(&f.mul(&a1, &f.inv(&eta).expect("unit"))));
                    let w = Datum::new(&f, r.linear(&a1), g2)?;
                    let l = PrimeIdeal::new(&r, r.linear(&a1)).expect("linear");
                    let c = closed_form(&w, &l, faults)?;
                    let b = r.scale(&r.sub(&r.scale(&r.var(), &f.inv(&a1).expect("unit")), &r.one()), &eta);
                    if !c.a.is_zero() || c.b != b || c.mod_t() != (f.zero(), f.neg(&eta)) {
                        return Ok((false, format!("q={} a1={} eta={}", f.q(), a1.index(), eta.index())));
                    }
                    checked += 1;
                }
            }
        }
        Ok((true, format!("{checked} cases")))
    }),
    ("frobenius.search_simple", |_| {
        let f = f5();
        let c = charpoly_search(&datum(&f, "g1=0;g2=1"), &prime(&f, "T+4"))?;
        expect(text(&f, &c), "a=0 b=4*T+1")
    }),
    ("frobenius.search_degree_two", |_| {
        let f = f5();
        let w = datum(&f, "g1=1;g2=1");
        let l = prime(&f, "T^2+2");
        let c = charpoly_search(&w, &l)?;
        Ok((frob_identity_check(&w, &l, &c.a, &c.b)?, text(&f, &c)))
    }),
    ("frobenius.torsion_matrix", |_| {
        let f = f5();
        let m = torsion_frobenius_matrix(&datum(&f, "g1=0;g2=1"), &prime(&f, "T+4"))?;
        let c = conj_class(&f, &m.entries);
        let got = format!(
            "trace={} det={} class={} e={}",
            c.trace.index(),
            c.det.index(),
            c.kind.as_str(),
            m.splitting_degree
        );
        let ok = c.kind == ConjClassKind::SplitSemisimple;
        Ok((ok && got == "trace=0 det=1 class=split_semisimple e=4", got))
    }),
    ("criterion.anchor", |_| {
        let f = f5();
        let t = Tuple {
            a1: f.from_int(1),
            a2: f.from_int(2),
            eta: f.from_int(2),
        };
        let r = check_conditions(&datum(&f, "g1=T+4;g2=3*T+4"), t)?;
        expect(r.pass.to_string(), "true")
    }),
    ("criterion.passing_suite", |_| {
        let f = f5();
        let n = PASSING_Q5
            .iter()
            .filter(|s| {
                surjectivity_verdict(&datum(&f, s))
                    .map(|v| v.as_str() == "proved_surjective")
                    .unwrap_or(false)
            })
            .count();
        expect(n.to_string(), "10")
    }),
    ("criterion.zero_g1_unknown", |_| {
        let f = f5();
        expect(surjectivity_verdict(&datum(&f, "g1=0;g2=1"))?.as_str().into(), "unknown")
    }),
    ("census.count_all", |_| {
        let f = f5();
        let p1 = HeightParams::new(1, 1, 1);
        let scanned = scan(&f, p1, DEFAULT_ENUM_CAP, |_, _| true)?;
        let got = format!("{} {}", count_all(5, HeightParams::new(1, 1, 4)), scanned);
        expect(got, "390000 20")
    }),
    ("census.fixed_class", |_| {
        let f = f5();
        let (_, class) = fixed_class(&f)?;
        let c4 = count_congruence_class(5, HeightParams::new(1, 1, 4), &class);
        let c5 = count_congruence_class(5, HeightParams::new(1, 1, 5), &class);
        let ok = c4 == BigUint::from(5u32) && c5 == BigUint::from(125u32);
        Ok((ok, format!("{c4} {c5}")))
    }),
    ("census.density_x4", |_| {
        let seq = density_limit_report(5, 1, 1, &[4])?;
        expect(format_ratio(&seq[0]), "1/78000")
    }),
    ("diagnostics.cross_validate", |_| {
        let f = f5();
        let cfg = SampleConfig {
            max_prime_degree: 1,
            ..Default::default()
        };
        let r = cross_validate(&datum(&f, "g1=0;g2=1"), &cfg)?;
        expect(r.checked.len().to_string(), "4")
    }),
];

/// Runs every item in a fixed order.
pub fn run_golden(faults: &Faults) -> Vec<GoldenItem> {
    ITEMS
        .iter()
        .map(|(name, check)| match check(faults) {
            Ok((passed, detail)) => GoldenItem {
                name,
                passed,
                detail,
            },
            Err(e) => GoldenItem {
                name,
                passed: false,
                detail: format!("error {}: {e}", e.name()),
            },
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn clean_build_passes() {
        let items = run_golden(&Faults::default());
        let failed: Vec<_> = items.iter().filter(|i| !i.passed).collect();
        assert!(failed.is_empty(), "{failed:?}");
    }

    #[test]
    fn sign_fault_is_caught() {
        let items = run_golden(&Faults { gekeler_sign: true });
        let failed: Vec<_> = items.iter().filter(|i| !i.passed).map(|i| i.name).collect();
        assert!(failed.contains(&"frobenius.closed_form_anchor"));
        assert!(failed.iter().all(|n| n.starts_with("frobenius.closed_form")));
    }

    #[test]
    fn deterministic() {
        assert_eq!(run_golden(&Faults::default()), run_golden(&Faults::default()));
    }
}
