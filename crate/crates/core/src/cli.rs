//! The `defexp` command line.
//!
//! Every verb prints one JSON document on stdout. Argument problems exit
//! with 2, failed computations with 1 and a `{code, message}` object.

use std::ffi::OsString;
use std::str::FromStr;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use crate::error::Error;
use crate::exactmath::Rational;
use crate::jpoly::{delta, JPoly};
use crate::qseries::{a_series, eisenstein_q, eval_mpoly_series, jacobi_p0, Eisenstein, QSeries};
use crate::symcoeff::{
    from_eisenstein, linear_part, reduce_to_a012, to_eisenstein, CoeffTable, MPoly, SymbolFamily,
};
use crate::validate::{fj_extract, locate, ratio_check, residual_profile};
use crate::zeros::ZeroFinder;

/// Environment variable holding a minimum working precision in bits.
pub const PRECISION_ENV: &str = "DEFEXP_PRECISION";

#[derive(Debug, Parser)]
#[command(name = "defexp", version, about = "Zeros of the deformed exponential and their expansion coefficients")]
struct Cli {
    #[command(subcommand)]
    verb: Verb,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Basis {
    Raw,
    A012,
    Eisenstein,
}

#[derive(Debug, Subcommand)]
enum Verb {
    /// The coefficient polynomial C_n.
    Coeff {
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum, default_value = "a012")]
        basis: Basis,
    },
    /// Rewrites a polynomial in A_0, A_1, ... over A_0, A_1, A_2.
    Reduce {
        #[arg(long)]
        poly: String,
    },
    /// Converts between A_0, A_1, A_2 and E2, E4, E6.
    Eisenstein {
        #[arg(long)]
        poly: String,
        /// Read the polynomial in E2, E4, E6 and return it in A_0, A_1, A_2.
        #[arg(long)]
        inverse: bool,
    },
    /// q-expansion of A_i, E2, E4, E6, P0 or C_n.
    Series {
        #[arg(long)]
        expr: String,
        #[arg(long)]
        trunc: usize,
    },
    /// Zeros x_k, ..., x_kmax of f.
    Zeros {
        #[arg(long)]
        q: String,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        kmax: Option<usize>,
        #[arg(long, default_value_t = 4)]
        guess_order: usize,
    },
    /// Scaled residuals r_n(k) against C_{n+1}(q).
    Residuals {
        #[arg(long)]
        q: String,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        kmin: usize,
        #[arg(long)]
        kmax: usize,
        /// Also write the rows as CSV to this path.
        #[arg(long)]
        csv: Option<String>,
    },
    /// Scaled deviations of q x_{k+1}/x_k from 1 + 1/k.
    Ratio {
        #[arg(long)]
        q: String,
        #[arg(long)]
        kmin: usize,
        #[arg(long)]
        kmax: usize,
    },
    /// Coefficients c_{ij} of C_i and the F_j positivity report.
    Fj {
        #[arg(long)]
        imax: usize,
        #[arg(long)]
        jmax: usize,
    },
    /// Runs the built-in regression fixtures.
    Selftest,
}

/// What a run produced.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

enum Failure {
    Usage(String),
    Compute(Error),
    Io(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Compute(e)
    }
}

type Run<T> = std::result::Result<T, Failure>;

fn to_json<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable output");
    s.push('\n');
    s
}

/// Runs the CLI with `DEFEXP_PRECISION` taken from the environment.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    run_with_precision(args, std::env::var(PRECISION_ENV).ok())
}

/// Runs the CLI; `precision` is the raw value of `DEFEXP_PRECISION`.
pub fn run_with_precision<I, T>(args: I, precision: Option<String>) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            return if code == 0 {
                Outcome { code, stdout: text, stderr: String::new() }
            } else {
                Outcome {
                    code,
                    stdout: to_json(&json!({"code": "usage", "message": e.kind().to_string()})),
                    stderr: text,
                }
            };
        }
    };
    let result = parse_precision(precision).and_then(|bits| dispatch(cli.verb, bits));
    match result {
        Ok((code, stdout)) => Outcome { code, stdout, stderr: String::new() },
        Err(Failure::Usage(msg)) => Outcome {
            code: 2,
            stdout: to_json(&json!({"code": "usage", "message": msg})),
            stderr: format!("error: {msg}\n"),
        },
        Err(Failure::Compute(e)) => Outcome {
            code: 1,
            stdout: to_json(&json!({"code": e.code(), "message": e.to_string()})),
            stderr: format!("error: {e}\n"),
        },
        Err(Failure::Io(msg)) => Outcome {
            code: 1,
            stdout: to_json(&json!({"code": "io", "message": msg})),
            stderr: format!("error: {msg}\n"),
        },
    }
}

fn parse_precision(raw: Option<String>) -> Run<Option<u32>> {
    match raw {
        None => Ok(None),
        Some(s) if s.trim().is_empty() => Ok(None),
        Some(s) => match s.trim().parse::<u32>() {
            Ok(b) if (16..=1 << 20).contains(&b) => Ok(Some(b)),
            _ => Err(Failure::Usage(format!("{PRECISION_ENV} must be an integer number of bits in 16..=1048576, got {s:?}"))),
        },
    }
}

fn parse_q(s: &str) -> Run<Rational> {
    Rational::from_str(s).map_err(|e| Failure::Usage(e.to_string()))
}

fn parse_poly(family: SymbolFamily, s: &str) -> Run<MPoly> {
    MPoly::parse(family, s).map_err(|e| Failure::Usage(e.to_string()))
}

/// `A_3`, `A3`, `E2`, `P0`, `C_5`, ...
fn named_series(expr: &str, trunc: usize, table: &mut CoeffTable) -> Run<QSeries> {
    let bad = || Failure::Usage(format!("unknown series {expr:?}; expected A_i, E2, E4, E6, P0 or C_n"));
    let t = expr.trim();
    match t {
        "E2" => return Ok(eisenstein_q(Eisenstein::E2, trunc)),
        "E4" => return Ok(eisenstein_q(Eisenstein::E4, trunc)),
        "E6" => return Ok(eisenstein_q(Eisenstein::E6, trunc)),
        "P0" => return Ok(jacobi_p0(trunc)),
        _ => {}
    }
    let (head, rest) = t.split_at(t.char_indices().nth(1).map_or(t.len(), |(i, _)| i));
    let idx: usize = rest.strip_prefix('_').unwrap_or(rest).parse().map_err(|_| bad())?;
    match head {
        "A" => Ok(a_series(idx as u32, trunc)),
        "C" => Ok(eval_mpoly_series(&table.c_n_a012(idx)?, trunc)?),
        _ => Err(bad()),
    }
}

fn dispatch(verb: Verb, min_bits: Option<u32>) -> Run<(i32, String)> {
    let mut table = CoeffTable::new();
    let out = match verb {
        Verb::Coeff { n, basis } => {
            let p = match basis {
                Basis::Raw => table.c_n(n)?,
                Basis::A012 => table.c_n_a012(n)?,
                Basis::Eisenstein => table.c_n_eisenstein(n)?,
            };
            to_json(&p)
        }
        Verb::Reduce { poly } => to_json(&reduce_to_a012(&parse_poly(SymbolFamily::A, &poly)?)?),
        Verb::Eisenstein { poly, inverse } => {
            if inverse {
                to_json(&from_eisenstein(&parse_poly(SymbolFamily::E, &poly)?)?)
            } else {
                to_json(&to_eisenstein(&parse_poly(SymbolFamily::A, &poly)?)?)
            }
        }
        Verb::Series { expr, trunc } => to_json(&named_series(&expr, trunc, &mut table)?),
        Verb::Zeros { q, k, kmax, guess_order } => {
            let qr = parse_q(&q)?;
            let kmax = kmax.unwrap_or(k);
            if k == 0 || kmax < k {
                return Err(Failure::Usage(format!("need 1 <= k <= kmax, got k={k}, kmax={kmax}")));
            }
            let finder = ZeroFinder::new(&qr, &q, guess_order, &mut table)?.with_min_precision(min_bits);
            let zs = (k..=kmax)
                .map(|kk| locate(&finder, kk, &qr, &q, &mut table))
                .collect::<crate::Result<Vec<_>>>()?;
            to_json(&zs)
        }
        Verb::Residuals { q, n, kmin, kmax, csv } => {
            let qr = parse_q(&q)?;
            if kmin == 0 || kmax < kmin {
                return Err(Failure::Usage(format!("need 1 <= kmin <= kmax, got {kmin}..{kmax}")));
            }
            let ks: Vec<usize> = (kmin..=kmax).collect();
            let profile = residual_profile(&qr, &q, &ks, n, &mut table, min_bits)?;
            if let Some(path) = csv {
                std::fs::write(&path, profile.to_csv()).map_err(|e| Failure::Io(format!("{path}: {e}")))?;
            }
            to_json(&profile)
        }
        Verb::Ratio { q, kmin, kmax } => {
            let qr = parse_q(&q)?;
            to_json(&ratio_check(&qr, &q, kmin, kmax, &mut table)?)
        }
        Verb::Fj { imax, jmax } => to_json(&fj_extract(imax, jmax, &mut table)?),
        Verb::Selftest => {
            let report = selftest(&mut table);
            let code = if report.failed == 0 { 0 } else { 1 };
            return Ok((code, to_json(&report)));
        }
    };
    Ok((0, out))
}

// Printed closed forms, kept as text so they are checked against the
// computation rather than derived from it.
const C_FIXTURES: &[(&str, usize, bool, &str)] = &[
    ("C1", 1, false, "A0"),
    ("C2", 2, false, "-A1"),
    ("C3", 3, false, "-1/10*A0 + 3/5*A1 + 1/2*A2 - 13/10*A0^2"),
    ("C4 raw", 4, false, "1/10*A1 - 14/15*A2 - 1/6*A3 + 23/5*A0*A1"),
    ("C4", 4, true, "1/10*A1 - 11/10*A2 + 23/5*A0*A1 - 6*A1^2 + 4*A0*A2"),
    (
        "C5",
        5,
        true,
        "1/21*A0 - 2/7*A1 + 26/21*A2 + 53/70*A0^2 + 22*A1^2 - 36*A0*A1^2 - 159/35*A0*A1 \
         - 43/2*A0*A2 + 2*A1*A2 + 737/210*A0^3 + 24*A0^2*A2",
    ),
    (
        "C6",
        6,
        true,
        "-1/21*A1 - 20/21*A2 - 74/35*A0*A1 - 1401/35*A1^2 - 2/5*A2^2 + 705/14*A0*A2 \
         - 101/10*A1*A2 + 1662/5*A0*A1^2 - 321/14*A0^2*A1 - 36/5*A1^3 - 1132/5*A0^2*A2 \
         - 864/5*A0^2*A1^2 + 72/5*A0*A1*A2 + 576/5*A0^3*A2",
    ),
];

/// `Delta(N, m)` as coefficients of `1, j, j^2, ...`.
const DELTA_FIXTURES: &[(usize, usize, &str)] = &[
    (2, 0, "0 1/6 -1/2 1/3"),
    (2, 1, "-1 2"),
    (3, 0, "0 0 1/12 -1/3 5/12 -1/6"),
    (3, 1, "0 -1/2 3/2 -1"),
    (4, 0, "0 -1/60 0 3/16 -17/48 23/80 -7/48 1/24"),
    (4, 1, "0 1/12 -3/8 2/3 -5/8 1/4"),
    (4, 2, ""),
    (5, 0, "0 0 -1/120 -1/180 5/32 -17/48 77/240 -2/15 1/32 -1/144"),
    (5, 1, "0 0 1/8 -25/48 35/48 -7/16 7/48 -1/24"),
    (5, 2, ""),
];

/// `(i, n, S_i(n))` in C-symbols.
const S_FIXTURES: &[(usize, usize, &str)] = &[
    (1, 1, "1/6"),
    (2, 2, "-1/12"),
    (1, 2, "-1/2*C1"),
    (3, 3, "1/48"),
    (4, 4, "-1/288"),
];

/// Linear coefficients of reduced `C_{2n-1}` and `C_{2n}`.
const LINEAR_FIXTURES: &[(usize, [&str; 3], [&str; 3])] = &[
    (2, ["-1/10", "3/5", "1/2"], ["0", "1/10", "-11/10"]),
    (3, ["1/21", "-2/7", "26/21"], ["0", "-1/21", "-20/21"]),
    (4, ["-1/20", "3/10", "3/4"], ["0", "1/20", "-21/20"]),
    (5, ["1/11", "-6/11", "16/11"], ["0", "-1/11", "-10/11"]),
    (6, ["-691/2730", "691/455", "-145/546"], ["0", "691/2730", "-3421/2730"]),
];

#[derive(Debug, Serialize)]
struct FixtureResult {
    name: String,
    pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    detail: Option<String>,
}

#[derive(Debug, Serialize)]
struct SelftestReport {
    fixtures: Vec<FixtureResult>,
    passed: usize,
    failed: usize,
}

fn check(name: String, outcome: crate::Result<bool>) -> FixtureResult {
    match outcome {
        Ok(pass) => FixtureResult { name, pass, detail: None },
        Err(e) => FixtureResult { name, pass: false, detail: Some(e.to_string()) },
    }
}

fn rationals(s: &str) -> crate::Result<Vec<Rational>> {
    s.split_whitespace().map(Rational::from_str).collect()
}

fn selftest(table: &mut CoeffTable) -> SelftestReport {
    let mut fixtures = Vec::new();
    for &(name, n, reduced, text) in C_FIXTURES {
        fixtures.push(check(name.to_string(), (|| {
            let want = MPoly::parse(SymbolFamily::A, text)?;
            let got = if reduced { table.c_n_a012(n)? } else { table.c_n(n)? };
            Ok(got == want)
        })()));
    }
    for &(big_n, m, text) in DELTA_FIXTURES {
        fixtures.push(check(format!("Delta({big_n},{m})"), (|| {
            Ok(delta(big_n, m)?.to_jpoly() == JPoly::new(rationals(text)?))
        })()));
    }
    for &(i, n, text) in S_FIXTURES {
        fixtures.push(check(format!("S_{i}({n})"), (|| {
            Ok(table.s_poly(i, n)? == MPoly::parse(SymbolFamily::C, text)?)
        })()));
    }
    for &(n, odd, even) in LINEAR_FIXTURES {
        for (idx, want) in [(2 * n - 1, odd), (2 * n, even)] {
            fixtures.push(check(format!("linear C{idx}"), (|| {
                let got = linear_part(&table.c_n_a012(idx)?)?;
                let want = want.iter().map(|s| Rational::from_str(s)).collect::<crate::Result<Vec<_>>>()?;
                Ok(got.as_slice() == want.as_slice())
            })()));
        }
    }
    let passed = fixtures.iter().filter(|f| f.pass).count();
    let failed = fixtures.len() - passed;
    SelftestReport { fixtures, passed, failed }
}
