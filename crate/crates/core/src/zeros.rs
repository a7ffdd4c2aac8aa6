//! Evaluation of `f(x) = sum_n x^n q^{n(n-1)/2} / n!` and its negative zeros.
//!
//! Near `x_k` the series alternates with terms as large as roughly
//! `q^{-k(k-1)/2} k^k / k!`, so every evaluation tracks the largest partial
//! sum it saw and reports how many bits of the result stand above the
//! rounding noise that magnitude implies.

use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::exactmath::Rational;
use crate::precreal::PrecReal;
use crate::qseries::eval_mpoly_numeric;
use crate::symcoeff::CoeffTable;

/// Bits added on top of the cancellation estimate.
pub const GUARD_BITS: u32 = 64;

/// Relative bracket width reached by bisection before Newton takes over.
pub const BISECTION_BITS: u32 = 60;

/// Floor on the working precision of the zero finder.
pub const MIN_WORKING_BITS: u32 = 2 * BISECTION_BITS + 16;

/// One evaluation of `f` with its noise budget.
#[derive(Debug, Clone)]
pub struct FEval {
    pub value: PrecReal,
    /// `log2` of the largest term or partial sum met during summation.
    pub peak_log2: f64,
    /// `log2` of the accumulated rounding error bound.
    pub noise_log2: f64,
    pub terms: usize,
}

impl FEval {
    /// Bits of the value above the noise floor (may be negative).
    pub fn effective_bits(&self) -> f64 {
        self.value.log2_abs() - self.noise_log2
    }

    /// Whether the sign of the value can be trusted.
    pub fn sign_reliable(&self) -> bool {
        self.effective_bits() > 1.0
    }

    /// `-1`, `1`, or `0` when the value is lost in the noise.
    pub fn sign(&self) -> i32 {
        if self.sign_reliable() {
            self.value.signum()
        } else {
            0
        }
    }
}

fn check_q(q: &PrecReal) -> Result<()> {
    if q.signum() <= 0 || q.to_f64() >= 1.0 {
        return Err(Error::OutOfRange(format!("q must lie in (0,1), got {}", q.to_sci(10))));
    }
    Ok(())
}

/// Sums the series at working precision `prec`, stopping once the terms
/// decay geometrically (ratio below 1/2) and have dropped `prec` bits below
/// the peak magnitude.
pub fn eval_f_detailed(x: &PrecReal, q: &PrecReal, prec: u32) -> Result<FEval> {
    check_q(q)?;
    let x = x.with_precision(prec);
    let q = q.with_precision(prec);
    let xf = x.log2_abs();
    let log2_q = q.log2_abs();
    let mut sum = PrecReal::from_int(1, prec);
    let mut term = PrecReal::from_int(1, prec);
    // x q^n, updated in place
    let mut xqn = x.clone();
    let mut peak = 0.0f64;
    let mut n: usize = 0;
    loop {
        term = (&term * &xqn).div_int(n as i64 + 1);
        xqn = &xqn * &q;
        n += 1;
        sum = &sum + &term;
        let tl = term.log2_abs();
        peak = peak.max(tl).max(sum.log2_abs());
        // ratio of the next term to this one: |x| q^n / (n+1)
        let ratio_log2 = xf + n as f64 * log2_q - ((n + 1) as f64).log2();
        if term.is_zero() || (ratio_log2 < -1.0 && tl < peak - prec as f64 - 2.0) {
            break;
        }
        if n > 1_000_000 {
            return Err(Error::InsufficientPrecision("series did not settle".into()));
        }
    }
    let noise = peak - prec as f64 + 2.0 * ((n + 2) as f64).log2();
    Ok(FEval {
        value: sum,
        peak_log2: peak,
        noise_log2: noise,
        terms: n + 1,
    })
}

/// `f(x)` labelled with the bits that survive cancellation.
pub fn eval_f(x: &PrecReal, q: &PrecReal, prec: u32) -> Result<PrecReal> {
    let e = eval_f_detailed(x, q, prec)?;
    let bits = e.effective_bits();
    if !(bits >= 1.0) {
        return Err(Error::InsufficientPrecision(format!(
            "f({}) is below the cancellation noise at {prec} bits",
            x.to_sci(12)
        )));
    }
    Ok(e.value.with_precision((bits.floor() as u32).min(prec)))
}

/// `ceil(k(k-1)/2 log2(1/q) + k log2 k) + 64`.
pub fn required_precision(k: usize, q: &PrecReal) -> u32 {
    let kf = k as f64;
    let body = kf * (kf - 1.0) / 2.0 * -q.log2_abs() + kf * kf.log2();
    body.max(0.0).ceil() as u32 + GUARD_BITS
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ZeroMethod {
    /// Bracket around the asymptotic guess, bisection, then Newton.
    Asymptotic,
    /// Sign scan on a geometric grid, then bisection.
    Scan,
}

/// A located zero `x_k` of `f`.
#[derive(Debug, Clone)]
pub struct ZeroResult {
    pub k: usize,
    /// `q` as the caller wrote it.
    pub q: String,
    pub x: PrecReal,
    pub bracket: (PrecReal, PrecReal),
    pub residual: PrecReal,
    pub precision_bits: u32,
    pub method: ZeroMethod,
    /// `-log2 |step/x|` for each Newton step taken.
    pub newton_bits: Vec<f64>,
}

impl Serialize for ZeroResult {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut s = serializer.serialize_struct("ZeroResult", 7)?;
        s.serialize_field("k", &self.k)?;
        s.serialize_field("q", &self.q)?;
        s.serialize_field("x", &self.x.to_decimal())?;
        let digits = self.x.warranted_digits().clamp(1, 20);
        s.serialize_field(
            "bracket",
            &[self.bracket.0.to_sci(digits), self.bracket.1.to_sci(digits)],
        )?;
        s.serialize_field("residual", &self.residual.abs().to_sci(6))?;
        s.serialize_field("precision_bits", &self.precision_bits)?;
        s.serialize_field("method", &self.method)?;
        s.end()
    }
}

/// Residual acceptance: `|f(x)| < 2^{-prec/2} * max(1, peak)`.
fn residual_ok(e: &FEval, prec: u32) -> bool {
    let lhs = e.value.log2_abs();
    lhs < e.peak_log2.max(0.0) - prec as f64 / 2.0
}

fn midpoint(a: &PrecReal, b: &PrecReal) -> PrecReal {
    (a + b).mul_pow2(-1)
}

fn rel_width_log2(lo: &PrecReal, hi: &PrecReal) -> f64 {
    (hi - lo).log2_abs() - lo.log2_abs().max(hi.log2_abs())
}

/// Bisects `[lo, hi]` (with `f(lo)` of sign `s_lo`) until the relative width
/// is below `2^{-bits}` or the midpoint value drops into the noise.
fn bisect(
    q: &PrecReal,
    prec: u32,
    mut lo: PrecReal,
    mut hi: PrecReal,
    s_lo: i32,
    bits: u32,
) -> Result<(PrecReal, PrecReal)> {
    while rel_width_log2(&lo, &hi) > -(bits as f64) {
        let mid = midpoint(&lo, &hi);
        let e = eval_f_detailed(&mid, q, prec)?;
        match e.sign() {
            0 => return Ok((mid.clone(), mid)),
            s if s == s_lo => lo = mid,
            _ => hi = mid,
        }
    }
    Ok((lo, hi))
}

/// Zero finder seeded by the asymptotic expansion at a fixed `q`.
#[derive(Debug, Clone)]
pub struct ZeroFinder {
    q_exact: Rational,
    q: PrecReal,
    q_text: String,
    /// `C_1(q), ..., C_n(q)`.
    coeffs: Vec<PrecReal>,
    prec_override: Option<u32>,
}

impl ZeroFinder {
    /// Prepares guesses of order `n_guess`, evaluating `C_i(q)` from the
    /// reduced polynomials with numerically summed `A_0, A_1, A_2`.
    pub fn new(q: &Rational, q_text: &str, n_guess: usize, table: &mut CoeffTable) -> Result<Self> {
        let qp = PrecReal::from_rational(q, 256);
        check_q(&qp)?;
        let coeffs = (1..=n_guess)
            .map(|i| eval_mpoly_numeric(&table.c_n_a012(i)?, &qp, 128))
            .collect::<Result<Vec<_>>>()?;
        Ok(ZeroFinder {
            q_exact: q.clone(),
            q: qp,
            q_text: q_text.to_string(),
            coeffs,
            prec_override: None,
        })
    }

    /// Uses `bits` instead of `required_precision` when it is larger.
    pub fn with_min_precision(mut self, bits: Option<u32>) -> Self {
        self.prec_override = bits;
        self
    }

    pub fn q(&self) -> &PrecReal {
        &self.q
    }

    pub fn coeffs(&self) -> &[PrecReal] {
        &self.coeffs
    }

    /// `required_precision(k, q)`, but never below what bisection plus one
    /// Newton step need.
    pub fn precision_for(&self, k: usize) -> u32 {
        let p = required_precision(k, &self.q).max(MIN_WORKING_BITS);
        self.prec_override.map_or(p, |o| o.max(p))
    }

    /// `-k q^{1-k} (1 + sum_i C_i(q) k^{-1-i})`.
    pub fn guess(&self, k: usize, prec: u32) -> PrecReal {
        let q = PrecReal::from_rational(&self.q_exact, prec);
        let kk = PrecReal::from_int(k as i64, prec);
        let inv_k = &PrecReal::from_int(1, prec) / &kk;
        let mut corr = PrecReal::from_int(1, prec);
        let mut kp = &inv_k * &inv_k;
        for c in &self.coeffs {
            corr = &corr + &(&c.with_precision(prec) * &kp);
            kp = &kp * &inv_k;
        }
        let scale = &kk / &q.powi(k as u32 - 1);
        -(&scale * &corr)
    }

    /// Locates `x_k` by expanding a relative bracket `x̂(1 ± δ)` from
    /// `δ = k^{-n-2}` by doubling up to `1/(4k)`, then bisection and Newton
    /// with `f'(x) = f(qx)`.
    pub fn find(&self, k: usize) -> Result<ZeroResult> {
        if k == 0 {
            return Err(Error::InvalidIndex("zero index k must be >= 1".into()));
        }
        let prec = self.precision_for(k);
        let q = PrecReal::from_rational(&self.q_exact, prec);
        let center = self.guess(k, prec);
        let kf = k as f64;
        let cap = 1.0 / (4.0 * kf);
        let mut delta = kf.powi(-(self.coeffs.len() as i32) - 2).min(cap);
        let (lo, hi, s_lo) = loop {
            let d = PrecReal::from_f64(delta, prec);
            let one = PrecReal::from_int(1, prec);
            let lo = &center * &(&one + &d);
            let hi = &center * &(&one - &d);
            let s_lo = eval_f_detailed(&lo, &q, prec)?.sign();
            let s_hi = eval_f_detailed(&hi, &q, prec)?.sign();
            if s_lo != 0 && s_hi != 0 && s_lo != s_hi {
                break (lo, hi, s_lo);
            }
            delta *= 2.0;
            if delta > cap {
                return Err(Error::BracketFailure(format!(
                    "no sign change within relative radius 1/(4k) of the guess for k={k}"
                )));
            }
        };
        let (mut lo, mut hi) = bisect(&q, prec, lo, hi, s_lo, BISECTION_BITS)?;
        let bracket = (lo.clone(), hi.clone());
        let mut x = midpoint(&lo, &hi);
        let mut newton_bits = Vec::new();
        let mut acc_bits;
        for _ in 0..64 {
            let fx = eval_f_detailed(&x, &q, prec)?;
            if !fx.sign_reliable() {
                break;
            }
            let dfx = eval_f_detailed(&(&x * &q), &q, prec)?;
            // relative accuracy available for x: |x f'(x)| against the noise
            acc_bits = (x.log2_abs() + dfx.value.log2_abs() - fx.noise_log2).min(prec as f64);
            if fx.value.signum() == s_lo {
                lo = x.clone();
            } else {
                hi = x.clone();
            }
            let step = &fx.value / &dfx.value;
            let mut next = &x - &step;
            let rel = -(step.log2_abs() - x.log2_abs());
            newton_bits.push(rel);
            if !(next < hi && next > lo) {
                next = midpoint(&lo, &hi);
            }
            x = next;
            if rel >= acc_bits - 2.0 {
                break;
            }
        }
        let fin = eval_f_detailed(&x, &q, prec)?;
        let dfin = eval_f_detailed(&(&x * &q), &q, prec)?;
        acc_bits = (x.log2_abs() + dfin.value.log2_abs() - fin.noise_log2).min(prec as f64);
        if !residual_ok(&fin, prec) {
            return Err(Error::InsufficientPrecision(format!(
                "residual for k={k} above 2^(-{prec}/2) relative to the peak term"
            )));
        }
        let bits = (acc_bits.floor().max(2.0) as u32).min(prec);
        Ok(ZeroResult {
            k,
            q: self.q_text.clone(),
            x: x.with_precision(bits),
            bracket,
            residual: fin.value,
            precision_bits: bits,
            method: ZeroMethod::Asymptotic,
            newton_bits,
        })
    }
}

/// `x_k` from the asymptotic bracket, falling back to the sign scan when the
/// guess cannot bracket a zero (small `k`).
pub fn find_zero(
    k: usize,
    q: &Rational,
    q_text: &str,
    n_guess: usize,
    table: &mut CoeffTable,
) -> Result<ZeroResult> {
    let finder = ZeroFinder::new(q, q_text, n_guess, table)?;
    match finder.find(k) {
        Err(Error::BracketFailure(_)) => {
            let qp = finder.q().clone();
            let reach = PrecReal::from_int(k as i64 + 1, 64) / qp.with_precision(64).powi(k as u32);
            let mut zs = scan_zeros(&qp, q_text, &-reach, k)?;
            Ok(zs.swap_remove(k - 1))
        }
        other => other,
    }
}

/// Bits of relative accuracy a scan-located zero is bisected to.
pub const SCAN_BITS: u32 = 96;

/// Finds the first `count` zeros in `(x_min, 0)` by sign changes on a
/// geometric grid (64 points per decade, refined up to 16-fold when fewer
/// sign changes turn up than asymptotic guesses `-k q^{1-k}` in range),
/// each isolated zero bisected to `SCAN_BITS` bits.
pub fn scan_zeros(q: &PrecReal, q_text: &str, x_min: &PrecReal, count: usize) -> Result<Vec<ZeroResult>> {
    check_q(q)?;
    if !x_min.is_negative() {
        return Err(Error::OutOfRange("scan needs x_min < 0".into()));
    }
    let qf = q.to_f64();
    let reach = -x_min.to_f64();
    // asymptotic guesses -k q^{1-k} that fall inside the scan window
    let expected = (1..)
        .take_while(|&k: &usize| (k as f64) * qf.powi(1 - k as i32) < reach)
        .count();
    let k_top = expected + 2;
    let prec = required_precision(k_top, q).max(SCAN_BITS + 64);
    let qp = q.with_precision(prec);
    let start = 1e-2f64.min(reach / 2.0);
    let mut density = 64.0;
    loop {
        let ratio = 10f64.powf(1.0 / density);
        let mut grid: Vec<PrecReal> = Vec::new();
        let mut t = start;
        while t < reach {
            grid.push(PrecReal::from_f64(-t, prec));
            t *= ratio;
        }
        grid.push(x_min.with_precision(prec));
        let mut prev: Option<(PrecReal, i32)> = None;
        let mut found = Vec::new();
        for x in grid {
            let s = eval_f_detailed(&x, &qp, prec)?.sign();
            if s == 0 {
                continue;
            }
            if let Some((px, ps)) = &prev {
                if *ps != s {
                    found.push((px.clone(), x.clone(), *ps));
                }
            }
            prev = Some((x, s));
            if found.len() >= count {
                break;
            }
        }
        let enough = found.len() >= count;
        if enough || (found.len() >= expected.min(count) && density >= 256.0) || density >= 1024.0 {
            if !enough {
                return Err(Error::ScanFailure(format!(
                    "found {} of {count} zeros above {}",
                    found.len(),
                    x_min.to_sci(8)
                )));
            }
            let mut out = Vec::new();
            for (i, (a, b, s_a)) in found.into_iter().take(count).enumerate() {
                // a is nearer 0 (larger); bisect keeps the sign convention of `lo`
                let (lo, hi) = bisect(&qp, prec, b, a, -s_a, SCAN_BITS)?;
                let x = midpoint(&lo, &hi);
                let fin = eval_f_detailed(&x, &qp, prec)?;
                out.push(ZeroResult {
                    k: i + 1,
                    q: q_text.to_string(),
                    x: x.with_precision(SCAN_BITS),
                    bracket: (lo, hi),
                    residual: fin.value,
                    precision_bits: SCAN_BITS,
                    method: ZeroMethod::Scan,
                    newton_bits: Vec::new(),
                });
            }
            return Ok(out);
        }
        density *= 2.0;
    }
}

/// The paired differences `v_j = u_{2k-j-1} - u_j`, `0 <= j < k`, of the
/// terms `u_n = (k + a/k)^n / n! * q^{-n(2k-n-1)/2}` of `f(-(k + a/k) q^{1-k})`.
pub fn vj_sequence(k: usize, q: &Rational, a: &Rational) -> Result<Vec<Rational>> {
    if k == 0 {
        return Err(Error::InvalidIndex("k must be >= 1".into()));
    }
    if q.is_zero() || q.is_negative() || *q >= Rational::one() {
        return Err(Error::OutOfRange(format!("q must lie in (0,1), got {q}")));
    }
    let base = Rational::from(k as i64) + a / &Rational::from(k as i64);
    let inv_q = q.recip();
    let mut u = Vec::with_capacity(2 * k);
    let mut fact = Rational::one();
    for n in 0..2 * k {
        if n > 0 {
            fact = fact * Rational::from(n as i64);
        }
        let e = (n * (2 * k - n - 1) / 2) as u32;
        u.push(base.pow(n as u32) / &fact * inv_q.pow(e));
    }
    Ok((0..k).map(|j| &u[2 * k - j - 1] - &u[j]).collect())
}

/// Positivity and eventual monotonicity of `v_j`.
#[derive(Debug, Clone, Serialize)]
pub struct VjReport {
    pub k: usize,
    pub all_positive: bool,
    /// Smallest `N >= 2` with `v_j < v_{j+1}` for all `0 <= j <= k - N`.
    pub monotone_from: Option<usize>,
}

pub fn vj_report(k: usize, q: &Rational, a: &Rational) -> Result<VjReport> {
    let v = vj_sequence(k, q, a)?;
    let all_positive = v.iter().all(|x| !x.is_zero() && !x.is_negative());
    let monotone_from = (2..=k).find(|&n| (0..=k - n).all(|j| v[j] < v[j + 1]));
    Ok(VjReport {
        k,
        all_positive,
        monotone_from,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactmath::rat;

    fn half(prec: u32) -> PrecReal {
        PrecReal::from_rational(&rat(1, 2), prec)
    }

    #[test]
    fn f_at_zero_is_one() {
        let v = eval_f(&PrecReal::zero(64), &half(64), 64).unwrap();
        assert_eq!(v.to_f64(), 1.0);
    }

    #[test]
    fn f_matches_f64_sum() {
        let x = -1.5f64;
        let q = 0.5f64;
        let mut t = 1.0;
        let mut s = 1.0;
        for n in 0..60 {
            t *= x * q.powi(n) / (n as f64 + 1.0);
            s += t;
        }
        let v = eval_f(&PrecReal::from_f64(x, 128), &half(128), 128).unwrap();
        assert!((v.to_f64() - s).abs() < 1e-14);
    }

    #[test]
    fn functional_equation_by_finite_differences() {
        let p = 200;
        let q = half(p);
        let x = PrecReal::from_int(-1, p);
        let h = PrecReal::from_int(1, p).mul_pow2(-20);
        let fp = eval_f(&(&x + &h), &q, p).unwrap();
        let fm = eval_f(&(&x - &h), &q, p).unwrap();
        let diff = (&fp - &fm) / h.mul_pow2(1);
        let target = eval_f(&(&x * &q), &q, p).unwrap();
        // central difference error is O(h^2)
        let err = (&diff - &target).abs().to_f64();
        assert!(err < 1e-10, "err={err}");
    }

    #[test]
    fn insufficient_precision_is_reported() {
        // at x_10 for q = 1/2 the value is pure cancellation noise at 40 bits
        let mut t = CoeffTable::new();
        let x = ZeroFinder::new(&rat(1, 2), "1/2", 2, &mut t).unwrap().find(10).unwrap().x;
        assert!(matches!(eval_f(&x, &half(40), 40), Err(Error::InsufficientPrecision(_))));
        assert!(eval_f(&x, &PrecReal::from_int(2, 40), 40).is_err());
    }

    #[test]
    fn precision_formula() {
        assert_eq!(required_precision(1, &half(64)), 64);
        assert_eq!(required_precision(20, &half(64)), 190 + 87 + 64);
        for k in 1..40 {
            assert!(required_precision(k + 1, &half(64)) > required_precision(k, &half(64)));
        }
    }

    #[test]
    fn scan_finds_first_zero_and_orders() {
        let q = half(128);
        let zs = scan_zeros(&q, "1/2", &PrecReal::from_int(-80, 64), 4).unwrap();
        assert_eq!(zs.len(), 4);
        for w in zs.windows(2) {
            assert!(w[1].x < w[0].x);
        }
        for z in &zs {
            let p = z.bracket.0.precision();
            let e = eval_f_detailed(&z.x, &q, p).unwrap();
            assert!(residual_ok(&e, p));
            assert!(z.x.is_negative());
        }
        // sign pattern between consecutive zeros: f > 0 before x_1, alternating after
        for (i, w) in zs.windows(2).enumerate() {
            let mid = midpoint(&w[0].x, &w[1].x);
            let s = eval_f_detailed(&mid, &q, 128).unwrap().sign();
            assert_eq!(s, if i % 2 == 0 { -1 } else { 1 });
        }
        assert!(scan_zeros(&q, "1/2", &PrecReal::from_int(-3, 64), 5).is_err());
    }

    #[test]
    fn finder_matches_scan() {
        let mut t = CoeffTable::new();
        let finder = ZeroFinder::new(&rat(1, 2), "1/2", 3, &mut t).unwrap();
        let scan = scan_zeros(&half(128), "1/2", &PrecReal::from_int(-250, 64), 6).unwrap();
        for k in 3..=6 {
            let z = finder.find(k).unwrap();
            let s = &scan[k - 1];
            let rel = ((&z.x - &s.x) / s.x.clone()).abs().log2_abs();
            assert!(rel < -(SCAN_BITS as f64) + 4.0, "k={k} rel={rel}");
        }
        // at k = 1 a fourth-order guess is far off; the result must still be x_1
        for k in 1..=2 {
            let z = find_zero(k, &rat(1, 2), "1/2", 4, &mut t).unwrap();
            let rel = ((&z.x - &scan[k - 1].x) / scan[k - 1].x.clone()).abs().log2_abs();
            assert!(rel < -(SCAN_BITS as f64) + 4.0, "k={k} rel={rel}");
        }
    }

    #[test]
    fn newton_doubles_bits() {
        let mut t = CoeffTable::new();
        let finder = ZeroFinder::new(&rat(1, 2), "1/2", 3, &mut t).unwrap();
        for k in 4..=10 {
            let z = finder.find(k).unwrap();
            let steps = &z.newton_bits;
            assert!(!steps.is_empty(), "k={k}");
            assert!(steps[0] >= BISECTION_BITS as f64 - 2.0, "k={k} {steps:?}");
            for w in steps.windows(2) {
                // each step gains about as many bits as the one before
                assert!(w[1] >= 1.8 * w[0] || w[1] >= z.precision_bits as f64 - 8.0, "k={k} {steps:?}");
            }
            assert!(z.precision_bits as f64 >= required_precision(k, finder.q()) as f64 - 140.0);
        }
    }

    #[test]
    fn zeros_decrease() {
        let mut t = CoeffTable::new();
        let finder = ZeroFinder::new(&rat(1, 2), "1/2", 3, &mut t).unwrap();
        let mut prev: Option<PrecReal> = None;
        for k in 3..=20 {
            let z = finder.find(k).unwrap();
            assert!(z.x.is_negative());
            if let Some(p) = prev {
                assert!(z.x < p, "k={k}");
            }
            prev = Some(z.x);
        }
    }

    #[test]
    fn small_q_first_zero_with_fallback() {
        let mut t = CoeffTable::new();
        let z = find_zero(1, &rat(1, 20), "0.05", 2, &mut t).unwrap();
        let x = z.x.to_f64();
        assert!((x + 1.0).abs() < 0.1, "x={x}");
        let q = PrecReal::from_rational(&rat(1, 20), 128);
        let a = eval_f_detailed(&z.bracket.0, &q, 128).unwrap().sign();
        let b = eval_f_detailed(&z.bracket.1, &q, 128).unwrap().sign();
        assert!(a * b <= 0);
    }

    #[test]
    fn json_fields() {
        let mut t = CoeffTable::new();
        let finder = ZeroFinder::new(&rat(1, 2), "1/2", 2, &mut t).unwrap();
        let z = finder.find(5).unwrap();
        let v = serde_json::to_value(&z).unwrap();
        assert_eq!(v["k"], 5);
        assert_eq!(v["q"], "1/2");
        assert_eq!(v["method"], "asymptotic");
        assert!(v["x"].as_str().unwrap().starts_with("-8."));
        assert_eq!(v["bracket"].as_array().unwrap().len(), 2);
    }

    #[test]
    fn vj_small_k() {
        let v = vj_sequence(1, &rat(1, 2), &rat(1, 1)).unwrap();
        // u_1 - u_0 = (1 + 1) - 1
        assert_eq!(v, vec![Rational::one()]);
        let r = vj_report(15, &rat(1, 2), &rat(16, 10)).unwrap();
        assert!(r.all_positive);
        assert!(vj_sequence(3, &rat(3, 2), &rat(1, 1)).is_err());
    }
}
