use std::path::Path;

use clap::Args;
use drinfeld_core::algebra::{
    make_field, parse_apoly, parse_fq, prime_factors, ARing, FieldSpec, FqElem,
    PrimeIdeal,
};
use drinfeld_core::drinfeld::Datum;
use drinfeld_core::Error;

/// Failure of a command, mapped to an exit code.
#[derive(Debug)]
pub enum CliError {
    Usage { flag: &'static str, message: String },
    Core(Error),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Core(e)
    }
}

impl CliError {
    pub fn usage(flag: &'static str, message: impl Into<String>) -> Self {
        CliError::Usage {
            flag,
            message: message.into(),
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage { .. } => 2,
            CliError::Core(e) if e.is_internal() => 3,
            CliError::Core(
                Error::NotPrime(_)
                | Error::ReducibleModulus { .. }
                | Error::UnsupportedDegree { .. }
                | Error::MalformedModulus(_)
                | Error::FieldTooLarge { .. },
            ) => 2,
            CliError::Core(_) => 1,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            CliError::Usage { .. } => "UsageError",
            CliError::Core(e) => e.name(),
        }
    }

    pub fn message(&self) -> String {
        match self {
            CliError::Usage { flag, message } => format!("{flag}: {message}"),
            CliError::Core(e) => e.to_string(),
        }
    }

    pub fn flag(&self) -> Option<&'static str> {
        match self {
            CliError::Usage { flag, .. } => Some(flag),
            CliError::Core(_) => None,
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;

#[derive(Args, Debug, Clone)]
pub struct FieldArgs {
    /// Characteristic of the constant field.
    #[arg(long)]
    pub p: Option<u64>,
    /// Degree of F_q over F_p.
    #[arg(long)]
    pub n: Option<usize>,
    /// Field size as a prime power; an alternative to --p/--n.
    #[arg(long)]
    pub q: Option<u64>,
    /// Coefficients c0,c1,...,cn of a monic irreducible defining F_q.
    #[arg(long, value_delimiter = ',')]
    pub modulus: Option<Vec<u64>>,
}

impl FieldArgs {
    pub fn resolve(&self) -> CliResult<FieldSpec> {
        let (p, n) = match (self.p, self.q) {
            (Some(p), q) => {
                let n = self.n.unwrap_or(1);
                if let Some(q) = q {
                    if Some(q) != p.checked_pow(n as u32) {
                        return Err(CliError::usage("--q", format!("{q} != {p}^{n}")));
                    }
                }
                (p, n)
            }
            (None, Some(q)) => {
                let p = match prime_factors(q)[..] {
                    [p] => p,
                    _ => return Err(CliError::usage("--q", format!("{q} is not a prime power"))),
                };
                let n = q.ilog(p) as usize;
                if self.n.is_some_and(|m| m != n) {
                    return Err(CliError::usage("--n", format!("q = {q} has degree {n}")));
                }
                (p, n)
            }
            (None, None) => return Err(CliError::usage("--p", "field characteristic is required")),
        };
        Ok(make_field(p, n, self.modulus.as_deref())?)
    }
}

/// Reads `--datum` as inline text, or as a file holding the text form or
/// the JSON form `{"g1", "g2", "p", "n"}`.
pub fn load_datum(field: &FieldSpec, arg: &str) -> CliResult<Datum> {
    let path = Path::new(arg);
    let content = if path.is_file() {
        std::fs::read_to_string(path)
            .map_err(|e| CliError::usage("--datum", format!("cannot read {arg}: {e}")))?
    } else {
        arg.to_string()
    };
    let content = content.trim();
    if content.starts_with('{') {
        let v: serde_json::Value = serde_json::from_str(content)
            .map_err(|e| CliError::usage("--datum", format!("bad JSON: {e}")))?;
        let get = |k: &str| v.get(k).ok_or_else(|| CliError::usage("--datum", format!("missing {k:?}")));
        let (p, n) = (get("p")?.as_u64(), get("n")?.as_u64());
        if p != Some(field.p()) || n != Some(field.n() as u64) {
            return Err(CliError::usage("--datum", "datum field does not match --p/--n"));
        }
        let text = |k: &str| -> CliResult<String> {
            get(k)?
                .as_str()
                .map(str::to_string)
                .ok_or_else(|| CliError::usage("--datum", format!("{k:?} must be a string")))
        };
        let s = format!("g1={};g2={}", text("g1")?, text("g2")?);
        return parse_datum_text(field, &s);
    }
    parse_datum_text(field, content)
}

fn parse_datum_text(field: &FieldSpec, s: &str) -> CliResult<Datum> {
    Datum::parse(field, s).map_err(|e| match e {
        Error::Parse(m) => CliError::usage("--datum", m),
        other => CliError::Core(other),
    })
}

pub fn parse_prime(field: &FieldSpec, s: &str) -> CliResult<PrimeIdeal> {
    let f = parse_apoly(field, s).map_err(|e| CliError::usage("--prime", e.to_string()))?;
    PrimeIdeal::new(&ARing::new(field.clone()), f)
        .ok_or_else(|| CliError::usage("--prime", format!("{s:?} is not monic irreducible")))
}

pub fn parse_elem(field: &FieldSpec, flag: &'static str, s: &str) -> CliResult<FqElem> {
    parse_fq(field, s).map_err(|e| CliError::usage(flag, e.to_string()))
}

pub fn parse_poly(
    field: &FieldSpec,
    flag: &'static str,
    s: &str,
) -> CliResult<drinfeld_core::algebra::APoly> {
    parse_apoly(field, s).map_err(|e| CliError::usage(flag, e.to_string()))
}
