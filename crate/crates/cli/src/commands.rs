use drinfeld_core::algebra::{format_apoly, APoly, Domain, FieldSpec, FiniteField, FqElem};
use drinfeld_core::census::{
    self, CensusMode, CongruenceClass, HeightParams, DEFAULT_ENUM_CAP,
};
use drinfeld_core::criterion::{self, CriterionReport, Tuple};
use drinfeld_core::diagnostics::{self, SampleConfig, Thresholds};
use drinfeld_core::drinfeld::{j_invariant, twist, Datum};
use drinfeld_core::frobenius::{
    charpoly_deg1, charpoly_search_with, classify_charpoly, conj_class, torsion_frobenius_matrix,
    SearchConfig,
};
use drinfeld_core::golden::{run_golden, Faults};
use drinfeld_core::Error;
use num_bigint::BigUint;
use serde_json::{json, Map, Value};

use crate::args::{load_datum, parse_elem, parse_poly, parse_prime, CliError, CliResult, FieldArgs};

pub const SCHEMA_VERSION: &str = "1.0";

/// A finished report and the exit code it carries.
pub struct Outcome {
    pub report: Value,
    pub code: i32,
}

impl Outcome {
    fn ok(report: Value) -> Self {
        Outcome { report, code: 0 }
    }
}

/// Stamps the common header onto a command body.
pub fn envelope(command: &str, body: Value) -> Value {
    let mut out = Map::new();
    out.insert("schema_version".into(), json!(SCHEMA_VERSION));
    out.insert("command".into(), json!(command));
    if let Value::Object(fields) = body {
        out.extend(fields);
    }
    Value::Object(out)
}

pub fn error_report(command: &str, e: &CliError) -> Value {
    let mut body = json!({
        "error": e.name(),
        "message": e.message(),
    });
    if let Some(flag) = e.flag() {
        body["flag"] = json!(flag);
    }
    envelope(command, body)
}

fn field_json(f: &FieldSpec) -> Value {
    json!({ "p": f.p(), "n": f.n(), "q": f.q().to_string(), "modulus": f.modulus() })
}

fn elem(f: &FieldSpec, x: &FqElem) -> Value {
    json!(f.format_elem(x))
}

fn poly(f: &FieldSpec, a: &APoly) -> Value {
    json!(format_apoly(f, a))
}

fn big(n: &BigUint) -> Value {
    json!(n.to_string())
}

fn tuple_json(f: &FieldSpec, t: &Tuple) -> Value {
    json!({ "a1": elem(f, &t.a1), "a2": elem(f, &t.a2), "eta": elem(f, &t.eta) })
}

fn conditions_json(r: &CriterionReport) -> Value {
    Value::Object(r.conditions.named().iter().map(|(k, v)| (k.to_string(), json!(v))).collect())
}

fn datum_arg(field: &FieldSpec, datum: &Option<String>) -> CliResult<Datum> {
    let s = datum
        .as_deref()
        .ok_or_else(|| CliError::usage("--datum", "a datum is required"))?;
    load_datum(field, s)
}

pub fn check(fa: &FieldArgs, datum: &Option<String>) -> CliResult<Outcome> {
    let f = fa.resolve()?;
    let w = datum_arg(&f, datum)?;
    let verdict = criterion::surjectivity_verdict(&w)?;
    // report the witness' conditions, or those of the first tuple when none passes
    let shown = match verdict {
        criterion::Verdict::ProvedSurjective(r) => r,
        criterion::Verdict::Unknown => {
            let first = *criterion::tuples(&f).first().ok_or(Error::SmallOrEvenQ { q: f.q() })?;
            criterion::check_conditions(&w, first)?
        }
    };
    let witness = match verdict {
        criterion::Verdict::ProvedSurjective(r) => tuple_json(&f, &r.tuple),
        criterion::Verdict::Unknown => Value::Null,
    };
    Ok(Outcome::ok(json!({
        "field": field_json(&f),
        "datum": w.to_string(),
        "verdict": verdict.as_str(),
        "witness": witness,
        "conditions_tuple": tuple_json(&f, &shown.tuple),
        "conditions": conditions_json(&shown),
    })))
}

pub struct TupleArgs<'a> {
    pub a1: &'a Option<String>,
    pub a2: &'a Option<String>,
    pub eta: &'a Option<String>,
}

impl TupleArgs<'_> {
    fn any(&self) -> bool {
        self.a1.is_some() || self.a2.is_some() || self.eta.is_some()
    }

    /// The given tuple, or the first admissible one when no flag is set.
    fn resolve(&self, f: &FieldSpec) -> CliResult<Tuple> {
        if !self.any() {
            criterion::require_odd_q(f)?;
            return Ok(*criterion::tuples(f).first().ok_or(Error::SmallOrEvenQ { q: f.q() })?);
        }
        let get = |flag: &'static str, v: &Option<String>| -> CliResult<FqElem> {
            let s = v.as_deref().ok_or_else(|| CliError::usage(flag, "all of --a1, --a2, --eta are needed"))?;
            parse_elem(f, flag, s)
        };
        let t = Tuple {
            a1: get("--a1", self.a1)?,
            a2: get("--a2", self.a2)?,
            eta: get("--eta", self.eta)?,
        };
        criterion::validate_tuple(f, &t)?;
        Ok(t)
    }
}

pub fn witness(fa: &FieldArgs, datum: &Option<String>, t: &TupleArgs) -> CliResult<Outcome> {
    let f = fa.resolve()?;
    let w = datum_arg(&f, datum)?;
    let report = if t.any() {
        let r = criterion::check_conditions(&w, t.resolve(&f)?)?;
        Some(r).filter(|r| r.pass).ok_or(r)
    } else {
        criterion::find_witness(&w)?.ok_or(criterion::check_conditions(&w, t.resolve(&f)?)?)
    };
    let (found, r) = match report {
        Ok(r) => (true, r),
        Err(r) => (false, r),
    };
    Ok(Outcome::ok(json!({
        "field": field_json(&f),
        "datum": w.to_string(),
        "witness": if found { tuple_json(&f, &r.tuple) } else { Value::Null },
        "conditions_tuple": tuple_json(&f, &r.tuple),
        "conditions": conditions_json(&r),
        "verdict": if found { "proved_surjective" } else { "unknown" },
    })))
}

pub fn charpoly(
    fa: &FieldArgs,
    datum: &Option<String>,
    prime: &str,
    max_degree: usize,
) -> CliResult<Outcome> {
    let f = fa.resolve()?;
    let w = datum_arg(&f, datum)?;
    let l = parse_prime(&f, prime)?;
    let cp = charpoly_search_with(&w, &l, SearchConfig { max_degree })?;
    let closed_form = if l.degree() == 1 {
        let c = charpoly_deg1(&w, &l)?;
        Some((c.a, c.b) == (cp.a.clone(), cp.b.clone()))
    } else {
        None
    };
    let (ta, tb) = cp.mod_t();
    Ok(Outcome::ok(json!({
        "field": field_json(&f),
        "datum": w.to_string(),
        "prime": poly(&f, l.generator()),
        "a": poly(&f, &cp.a),
        "b": poly(&f, &cp.b),
        "a_mod_T": f.coords(&ta),
        "b_mod_T": f.coords(&tb),
        "class": classify_charpoly(&f, ta, tb).map(|k| k.as_str()),
        "closed_form_agrees": closed_form,
    })))
}

pub fn torsion(fa: &FieldArgs, datum: &Option<String>, prime: &str) -> CliResult<Outcome> {
    let f = fa.resolve()?;
    let w = datum_arg(&f, datum)?;
    let l = parse_prime(&f, prime)?;
    let m = torsion_frobenius_matrix(&w, &l)?;
    let label = conj_class(&f, &m.entries);
    let rows: Vec<Vec<Value>> = m.entries.0.iter().map(|r| r.iter().map(|x| elem(&f, x)).collect()).collect();
    Ok(Outcome::ok(json!({
        "field": field_json(&f),
        "datum": w.to_string(),
        "prime": poly(&f, l.generator()),
        "matrix": rows,
        "splitting_degree": m.splitting_degree,
        "trace": elem(&f, &label.trace),
        "det": elem(&f, &label.det),
        "class": label.kind.as_str(),
        "order": m.entries.order(&f),
    })))
}

pub fn twist_cmd(fa: &FieldArgs, datum: &Option<String>, c: &str) -> CliResult<Outcome> {
    let f = fa.resolve()?;
    let w = datum_arg(&f, datum)?;
    let c = parse_elem(&f, "--c", c)?;
    let t = twist(&w, c)?;
    let (j0, j1) = (j_invariant(&w), j_invariant(&t));
    let j_json = |j: &drinfeld_core::drinfeld::JInvariant| {
        json!({ "numerator": poly(&f, &j.numerator), "denominator": poly(&f, &j.denominator) })
    };
    Ok(Outcome::ok(json!({
        "field": field_json(&f),
        "datum": w.to_string(),
        "c": elem(&f, &c),
        "twisted": t.to_string(),
        "j": j_json(&j0),
        "j_twisted": j_json(&j1),
        "j_equal": j0 == j1,
    })))
}

pub struct CensusArgs {
    pub c1: u32,
    pub c2: u32,
    pub x: u32,
    pub mode: String,
    pub m1: Option<String>,
    pub r1: Option<String>,
    pub m2: Option<String>,
    pub r2: Option<String>,
    pub a1: Option<String>,
    pub a2: Option<String>,
    pub eta: Option<String>,
    pub cap: Option<u64>,
    pub series: Option<Vec<u32>>,
}

/// Largest degree bound `c·X` accepted; the closed forms stay cheap below it.
const MAX_HEIGHT: u32 = 4096;

/// `--cap`, else `DRINFELD_ENUM_CAP`, else the library default.
fn enum_cap(flag: Option<u64>) -> CliResult<u64> {
    if let Some(c) = flag {
        return Ok(c);
    }
    match std::env::var("DRINFELD_ENUM_CAP") {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| CliError::usage("DRINFELD_ENUM_CAP", format!("not an integer: {v:?}"))),
        Err(_) => Ok(DEFAULT_ENUM_CAP),
    }
}

fn explicit_class(f: &FieldSpec, a: &CensusArgs) -> CliResult<Option<CongruenceClass>> {
    let parts = [("--m1", &a.m1), ("--r1", &a.r1), ("--m2", &a.m2), ("--r2", &a.r2)];
    if parts.iter().all(|(_, v)| v.is_none()) {
        return Ok(None);
    }
    let mut polys = Vec::new();
    for (flag, v) in parts {
        let s = v.as_deref().ok_or_else(|| CliError::usage(flag, "all of --m1, --r1, --m2, --r2 are needed"))?;
        polys.push(parse_poly(f, flag, s)?);
    }
    let [m1, r1, m2, r2]: [APoly; 4] = polys.try_into().expect("four parts");
    Ok(Some(CongruenceClass::new(m1, r1, m2, r2)?))
}

pub fn census_cmd(fa: &FieldArgs, a: &CensusArgs) -> CliResult<Outcome> {
    let f = fa.resolve()?;
    if a.c1 == 0 || a.c2 == 0 {
        return Err(CliError::usage(if a.c1 == 0 { "--c1" } else { "--c2" }, "must be positive"));
    }
    for (flag, c) in [("--c1", a.c1), ("--c2", a.c2)] {
        if c.checked_mul(a.x).is_none_or(|n| n > MAX_HEIGHT) {
            return Err(CliError::usage(flag, format!("degree bound c*X exceeds {MAX_HEIGHT}")));
        }
    }
    let cap = enum_cap(a.cap)?;
    let params = HeightParams::new(a.c1, a.c2, a.x);
    let q = f.q();
    let total = census::count_all(q, params);
    let scan_size = census::scan_size(q, params);
    let mut body = json!({
        "field": field_json(&f),
        "c1": a.c1,
        "c2": a.c2,
        "X": a.x,
        "cap": cap.to_string(),
        "scan_size": big(&scan_size),
        "total": big(&total),
    });
    let within_cap = scan_size <= BigUint::from(cap);
    match a.mode.as_str() {
        "all" => {
            body["mode"] = json!("all");
            body["formula_only"] = json!(!within_cap);
            if within_cap {
                let scanned = census::scan(&f, params, cap, |_, _| true)?;
                body["total_by_scan"] = json!(scanned.to_string());
            }
        }
        "class" => {
            let (class, tuple) = match explicit_class(&f, a)? {
                Some(c) => (c, None),
                None => {
                    let (t, c) = census::fixed_class(&f)?;
                    (c, Some(t))
                }
            };
            let hits = census::count_congruence_class(q, params, &class);
            let [m1, r1, m2, r2] = census::describe_class(&f, &class);
            body["mode"] = json!(CensusMode::SingleClass.as_str());
            body["class"] = json!({ "m1": m1, "r1": r1, "m2": m2, "r2": r2 });
            body["tuple"] = tuple.map(|t| tuple_json(&f, &t)).unwrap_or(Value::Null);
            body["hits"] = big(&hits);
            body["density_ratio"] = json!(census::format_ratio(&census::ratio(&hits, &total)));
            body["formula_only"] = json!(!within_cap);
            if within_cap {
                let scanned = census::count_congruence_class_by_scan(&f, params, &class, cap)?;
                body["hits_by_scan"] = json!(scanned.to_string());
            }
            if tuple.is_some() {
                body["density_limit"] = json!(census::format_ratio(&census::density_limit(q)));
                if let Some(xs) = &a.series {
                    let rs = census::density_limit_report(q, a.c1, a.c2, xs)?;
                    body["series"] = xs
                        .iter()
                        .zip(&rs)
                        .map(|(x, r)| json!({ "X": x, "ratio": census::format_ratio(r) }))
                        .collect();
                }
            }
        }
        "tuple" | "union" => {
            let mode = if a.mode == "tuple" {
                let t = TupleArgs { a1: &a.a1, a2: &a.a2, eta: &a.eta }.resolve(&f)?;
                body["tuple"] = tuple_json(&f, &t);
                CensusMode::SingleTuple(t)
            } else {
                criterion::require_odd_q(&f)?;
                CensusMode::UnionAllTuples
            };
            body["mode"] = json!(mode.as_str());
            match census::criterion_density(&f, params, mode, cap) {
                Ok(r) => {
                    body["formula_only"] = json!(false);
                    body["hits"] = big(&r.hits);
                    body["density_ratio"] = json!(census::format_ratio(&r.density_ratio));
                }
                Err(Error::EnumerationTooLarge { .. }) => {
                    body["formula_only"] = json!(true);
                    body["hits"] = Value::Null;
                    body["density_ratio"] = Value::Null;
                }
                Err(e) => return Err(e.into()),
            }
        }
        other => {
            return Err(CliError::usage("--mode", format!("{other:?} is not one of all|class|tuple|union")))
        }
    }
    Ok(Outcome::ok(body))
}

pub struct ProbeArgs {
    pub max_degree: usize,
    pub max_primes: usize,
    pub matrices: bool,
}

pub fn probe(fa: &FieldArgs, datum: &Option<String>, a: &ProbeArgs) -> CliResult<Outcome> {
    let f = fa.resolve()?;
    let w = datum_arg(&f, datum)?;
    let cfg = SampleConfig {
        max_prime_degree: a.max_degree,
        max_primes: a.max_primes,
        use_matrices: a.matrices,
        ..SampleConfig::default()
    };
    let th = Thresholds::default();
    let ev = diagnostics::sample_classes(&w, &cfg)?;
    let verdict = diagnostics::obstruction_analysis(&ev, &f, &th);
    let cross = if a.matrices {
        json!(diagnostics::cross_validate(&w, &cfg)?.checked.len())
    } else {
        Value::Null
    };
    let kind_str = |k: Option<drinfeld_core::frobenius::ConjClassKind>| k.map_or("undetermined", |k| k.as_str());
    let histogram: Map<String, Value> = ev
        .class_histogram
        .iter()
        .map(|((t, d, k), n)| (format!("{},{},{}", f.format_elem(t), f.format_elem(d), kind_str(*k)), json!(n)))
        .collect();
    let table: Vec<Value> = ev
        .samples
        .iter()
        .map(|s| {
            json!({
                "prime": poly(&f, s.charpoly.prime.generator()),
                "trace": elem(&f, &s.trace),
                "det": elem(&f, &s.det),
                "class": s.kind.map(|k| k.as_str()),
            })
        })
        .collect();
    Ok(Outcome::ok(json!({
        "field": field_json(&f),
        "datum": w.to_string(),
        "primes_used": ev.primes_used,
        "histogram": histogram,
        "flags": {
            "found_nonsplit": ev.found_nonsplit,
            "found_split_nonscalar": ev.found_split_nonscalar,
            "found_nontrivial_unipotent": ev.found_nontrivial_unipotent,
            "det_coverage": ev.det_coverage.len(),
            "trace_zero_count": ev.trace_zero_count(),
        },
        "verdict": {
            "consistent_with_full_image": verdict.consistent_with_full_image,
            "obstructions_unexcluded": verdict.obstructions_unexcluded.iter().map(|o| o.as_str()).collect::<Vec<_>>(),
        },
        "cross_validated": cross,
        "table": table,
    })))
}

pub fn selftest(inject: Option<&str>) -> CliResult<Outcome> {
    let faults = match inject {
        None => Faults::default(),
        Some("gekeler-sign") => Faults { gekeler_sign: true },
        Some(other) => return Err(CliError::usage("--inject-fault", format!("unknown fault {other:?}"))),
    };
    let items = run_golden(&faults);
    let failed: Vec<&str> = items.iter().filter(|i| !i.passed).map(|i| i.name).collect();
    let report = json!({
        "items": items
            .iter()
            .map(|i| json!({ "name": i.name, "passed": i.passed, "detail": i.detail }))
            .collect::<Vec<_>>(),
        "passed": items.len() - failed.len(),
        "failed": failed,
    });
    Ok(Outcome {
        code: if failed.is_empty() { 0 } else { 3 },
        report,
    })
}
