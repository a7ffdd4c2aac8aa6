//! Numerical checks of the expansion against computed zeros: scaled residual
//! profiles, the ratio law `x_{k+1}/x_k = (1 + 1/k)/q + o(k^-2)`, and the
//! per-power-of-`q` tables `C_ij` with their `F_j(1/k)` sums.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactmath::Rational;
use crate::precreal::PrecReal;
use crate::qseries::{eval_mpoly_numeric, eval_mpoly_series};
use crate::symcoeff::CoeffTable;
use crate::zeros::{find_zero, ZeroFinder, ZeroResult};

/// Relative gap allowed between the last residual and its limit.
pub const TREND_GAP: f64 = 0.15;

#[derive(Debug, Clone, Serialize)]
pub struct ProfileRow {
    pub k: usize,
    pub x: PrecReal,
    /// `r_n(k)`, rendered to 20 significant digits at most.
    #[serde(serialize_with = "short_decimal")]
    pub r: PrecReal,
}

fn short_decimal<S: serde::Serializer>(v: &PrecReal, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_sci(v.warranted_digits().min(20)))
}

/// Convergence of `r_n(k)` toward `C_{n+1}(q)` over the profile.
#[derive(Debug, Clone, Serialize)]
pub struct TrendReport {
    /// `|r_n(k) - C_{n+1}(q)|` in row order.
    pub gaps: Vec<f64>,
    /// Gap shrinks strictly across the top decade of `k`.
    pub monotone_top_decade: bool,
    /// Last gap below the first; informational.
    pub first_below_last: bool,
    pub final_relative_gap: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct ResidualProfile {
    pub q: String,
    pub n: usize,
    /// `C_{n+1}(q)`, the limit of `r_n(k)`.
    #[serde(serialize_with = "short_decimal")]
    pub limit: PrecReal,
    pub rows: Vec<ProfileRow>,
    pub trend: TrendReport,
}

impl ResidualProfile {
    /// Columns `k,x_k,r_n(k)`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("k,x_k,r_n(k)\n");
        for row in &self.rows {
            out.push_str(&format!(
                "{},{},{}\n",
                row.k,
                row.x.to_decimal(),
                row.r.to_sci(row.r.warranted_digits().min(20))
            ));
        }
        out
    }
}

/// Values `C_1(q), ..., C_m(q)` at `prec` bits.
fn c_values(table: &mut CoeffTable, q: &PrecReal, m: usize, prec: u32) -> Result<Vec<PrecReal>> {
    (1..=m)
        .map(|i| eval_mpoly_numeric(&table.c_n_a012(i)?, q, prec))
        .collect()
}

/// `(-x/(k q^{1-k}) - 1 - sum_{i<=n} C_i k^{-1-i}) k^{n+2}`.
pub fn scaled_residual(x: &PrecReal, k: usize, q: &PrecReal, c: &[PrecReal], n: usize) -> PrecReal {
    let prec = x.precision();
    let q = q.with_precision(prec);
    let kk = PrecReal::from_int(k as i64, prec);
    let inv_k = &PrecReal::from_int(1, prec) / &kk;
    let lead = &kk / &q.powi(k as u32 - 1);
    let mut r = &(-x / lead) - &PrecReal::from_int(1, prec);
    let mut kp = &inv_k * &inv_k;
    for ci in c.iter().take(n) {
        r = &r - &(&ci.with_precision(prec) * &kp);
        kp = &kp * &inv_k;
    }
    &r * &kk.powi(n as u32 + 2)
}

/// `finder.find(k)`, falling back to `find_zero` when the guess does not
/// bracket a zero.
pub fn locate(finder: &ZeroFinder, k: usize, q: &Rational, q_text: &str, table: &mut CoeffTable) -> Result<ZeroResult> {
    match finder.find(k) {
        Err(Error::BracketFailure(_)) => find_zero(k, q, q_text, finder.coeffs().len(), table),
        other => other,
    }
}

/// The trend test: strictly shrinking gap over the last eleven rows (the top
/// decade when rows are consecutive `k`) and a final relative gap under
/// `TREND_GAP`. Whether the last gap is below the first is reported only.
pub fn trend(rs: &[f64], limit: f64) -> TrendReport {
    let gaps: Vec<f64> = rs.iter().map(|r| (r - limit).abs()).collect();
    let top = &gaps[gaps.len().saturating_sub(11)..];
    let monotone_top_decade = top.windows(2).all(|w| w[1] < w[0]);
    let first_below_last = match (gaps.first(), gaps.last()) {
        (Some(a), Some(b)) => b < a,
        _ => false,
    };
    let final_relative_gap = gaps.last().map_or(f64::INFINITY, |g| g / limit.abs());
    TrendReport {
        pass: monotone_top_decade && final_relative_gap < TREND_GAP,
        gaps,
        monotone_top_decade,
        first_below_last,
        final_relative_gap,
    }
}

/// Scaled residuals `r_n(k)` for every `k` in `ks`, with zeros located from
/// a guess of order `n + 1`.
pub fn residual_profile(
    q: &Rational,
    q_text: &str,
    ks: &[usize],
    n: usize,
    table: &mut CoeffTable,
    min_bits: Option<u32>,
) -> Result<ResidualProfile> {
    if ks.is_empty() {
        return Err(Error::OutOfRange("empty k list".into()));
    }
    let finder = ZeroFinder::new(q, q_text, n + 1, table)?.with_min_precision(min_bits);
    let mut ks = ks.to_vec();
    ks.sort_unstable();
    ks.dedup();
    let top_bits = ks.iter().map(|&k| finder.precision_for(k)).max().unwrap();
    let qp = PrecReal::from_rational(q, top_bits);
    let c = c_values(table, &qp, n + 1, top_bits)?;
    let mut rows = Vec::new();
    for &k in &ks {
        let z = locate(&finder, k, q, q_text, table)?;
        let r = scaled_residual(&z.x, k, &qp, &c, n);
        rows.push(ProfileRow { k, x: z.x, r });
    }
    let limit = c[n].with_precision(128);
    let rs: Vec<f64> = rows.iter().map(|row| row.r.to_f64()).collect();
    let trend = trend(&rs, limit.to_f64());
    Ok(ResidualProfile {
        q: q_text.to_string(),
        n,
        limit,
        rows,
        trend,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct RatioRow {
    pub k: usize,
    /// `(q x_{k+1}/x_k - 1 - 1/k) k^2`.
    pub scaled_deviation: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct RatioTable {
    pub q: String,
    pub rows: Vec<RatioRow>,
    pub max_abs: f64,
    /// `|d(k_max)| <= |d(k_min)|` and the least-squares slope of `|d|` is not positive.
    pub no_growth: bool,
    /// First `k` from which the deviation keeps one sign; reported only.
    pub sign_stable_from: Option<usize>,
}

/// Least-squares slope of `ys` against `xs`.
fn slope(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let num: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let den: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    if den == 0.0 {
        0.0
    } else {
        num / den
    }
}

/// Deviations from the ratio law for `k_min <= k <= k_max`.
pub fn ratio_check(
    q: &Rational,
    q_text: &str,
    k_min: usize,
    k_max: usize,
    table: &mut CoeffTable,
) -> Result<RatioTable> {
    if k_min == 0 || k_max < k_min {
        return Err(Error::OutOfRange(format!("bad k range {k_min}..{k_max}")));
    }
    let finder = ZeroFinder::new(q, q_text, 3, table)?;
    let zs = (k_min..=k_max + 1)
        .map(|k| locate(&finder, k, q, q_text, table))
        .collect::<Result<Vec<_>>>()?;
    let mut rows = Vec::new();
    for (i, k) in (k_min..=k_max).enumerate() {
        let (a, b) = (&zs[i].x, &zs[i + 1].x);
        let prec = a.precision().min(b.precision());
        let qp = PrecReal::from_rational(q, prec);
        let kk = PrecReal::from_int(k as i64, prec);
        let one = PrecReal::from_int(1, prec);
        let d = &(&(&qp * b) / a) - &(&one + &(&one / &kk));
        rows.push(RatioRow {
            k,
            scaled_deviation: (&d * &(&kk * &kk)).to_f64(),
        });
    }
    let abs: Vec<f64> = rows.iter().map(|r| r.scaled_deviation.abs()).collect();
    let ks: Vec<f64> = rows.iter().map(|r| r.k as f64).collect();
    let max_abs = abs.iter().cloned().fold(0.0, f64::max);
    let no_growth = abs.last() <= abs.first() && slope(&ks, &abs) <= 0.0;
    let signs: Vec<bool> = rows.iter().map(|r| r.scaled_deviation < 0.0).collect();
    let sign_stable_from = (0..signs.len())
        .find(|&i| signs[i..].iter().all(|&s| s == signs[i]))
        .map(|i| rows[i].k);
    Ok(RatioTable {
        q: q_text.to_string(),
        rows,
        max_abs,
        no_growth,
        sign_stable_from,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct F1Row {
    pub k: usize,
    pub partial: Rational,
    pub closed: Rational,
    /// `|partial - closed| <= k^{-i_max-2}`.
    pub within_bound: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct PositivityRow {
    pub j: usize,
    pub k: usize,
    pub value: Rational,
    pub negative: bool,
}

/// `c[i-1][j] = C_ij`, the coefficient of `q^j` in `C_i(q)`.
#[derive(Debug, Clone, Serialize)]
pub struct FjTable {
    pub i_max: usize,
    pub j_max: usize,
    pub c: Vec<Vec<Rational>>,
    /// Column `j = 1` equals `(-1)^{i+1}` throughout.
    pub first_column_alternates: bool,
    pub f1: Vec<F1Row>,
    /// Truncated `F_j(1/k)` for `1 <= j <= j_max`, `1 <= k <= 20`.
    pub positivity: Vec<PositivityRow>,
    pub negative_count: usize,
}

/// Reads `C_ij` off the q-expansions of the reduced `C_i`.
pub fn fj_extract(i_max: usize, j_max: usize, table: &mut CoeffTable) -> Result<FjTable> {
    if i_max == 0 || j_max == 0 {
        return Err(Error::OutOfRange("i_max and j_max must be >= 1".into()));
    }
    let mut c = Vec::new();
    for i in 1..=i_max {
        let s = eval_mpoly_series(&table.c_n_a012(i)?, j_max)?;
        c.push(s.coeffs().to_vec());
    }
    let first_column_alternates = c
        .iter()
        .enumerate()
        .all(|(i, row)| row[1] == Rational::sign_pow(i + 2));
    let f_at = |j: usize, k: usize| -> Rational {
        let x = Rational::new(1, k as i64);
        c.iter()
            .enumerate()
            .map(|(i, row)| &row[j] * &x.pow(i as u32 + 2))
            .sum()
    };
    let mut f1 = Vec::new();
    for k in 1..=20usize {
        let partial = f_at(1, k);
        let closed = Rational::new(1, (k * (k + 1)) as i64);
        let bound = Rational::new(1, k as i64).pow(i_max as u32 + 2);
        let within_bound = (&partial - &closed).abs() <= bound;
        f1.push(F1Row {
            k,
            partial,
            closed,
            within_bound,
        });
    }
    let mut positivity = Vec::new();
    for j in 1..=j_max {
        for k in 1..=20usize {
            let value = f_at(j, k);
            positivity.push(PositivityRow {
                j,
                k,
                negative: value.is_negative(),
                value,
            });
        }
    }
    let negative_count = positivity.iter().filter(|r| r.negative).count();
    Ok(FjTable {
        i_max,
        j_max,
        c,
        first_column_alternates,
        f1,
        positivity,
        negative_count,
    })
}
