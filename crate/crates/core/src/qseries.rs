//! Truncated power series in `q` with exact rational coefficients, the
//! concrete expansions of `A_i`, `E_2`, `E_4`, `E_6` and the Jacobi sum `P_0`,
//! and numeric evaluation at a real `q`.

use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactmath::{divisor_power_sum, Rational};
use crate::precreal::PrecReal;
use crate::symcoeff::{MPoly, SymbolFamily};

/// `sum_{m<=trunc} coeffs[m] q^m + O(q^{trunc+1})`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct QSeries {
    trunc: usize,
    coeffs: Vec<Rational>,
}

impl QSeries {
    pub fn new(mut coeffs: Vec<Rational>, trunc: usize) -> Self {
        coeffs.resize(trunc + 1, Rational::zero());
        QSeries { trunc, coeffs }
    }

    pub fn zero(trunc: usize) -> Self {
        QSeries::new(Vec::new(), trunc)
    }

    pub fn constant(c: Rational, trunc: usize) -> Self {
        QSeries::new(vec![c], trunc)
    }

    pub fn trunc(&self) -> usize {
        self.trunc
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn coeff(&self, m: usize) -> Rational {
        self.coeffs.get(m).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Rational::is_zero)
    }

    pub fn truncate(&self, trunc: usize) -> QSeries {
        let t = trunc.min(self.trunc);
        QSeries::new(self.coeffs[..=t].to_vec(), t)
    }

    pub fn scale(&self, c: &Rational) -> QSeries {
        QSeries {
            trunc: self.trunc,
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
        }
    }

    /// `q d/dq`, term by term.
    pub fn theta(&self) -> QSeries {
        QSeries {
            trunc: self.trunc,
            coeffs: self
                .coeffs
                .iter()
                .enumerate()
                .map(|(m, a)| a * &Rational::from(m as i64))
                .collect(),
        }
    }

    pub fn pow(&self, e: u32) -> QSeries {
        let mut acc = QSeries::constant(Rational::one(), self.trunc);
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }
}

impl Add for &QSeries {
    type Output = QSeries;
    fn add(self, rhs: &QSeries) -> QSeries {
        let t = self.trunc.min(rhs.trunc);
        QSeries::new((0..=t).map(|m| &self.coeffs[m] + &rhs.coeffs[m]).collect(), t)
    }
}

impl Sub for &QSeries {
    type Output = QSeries;
    fn sub(self, rhs: &QSeries) -> QSeries {
        let t = self.trunc.min(rhs.trunc);
        QSeries::new((0..=t).map(|m| &self.coeffs[m] - &rhs.coeffs[m]).collect(), t)
    }
}

impl Mul for &QSeries {
    type Output = QSeries;
    fn mul(self, rhs: &QSeries) -> QSeries {
        let t = self.trunc.min(rhs.trunc);
        let mut out = vec![Rational::zero(); t + 1];
        for (i, a) in self.coeffs.iter().enumerate().take(t + 1) {
            if a.is_zero() {
                continue;
            }
            for (k, b) in rhs.coeffs.iter().enumerate().take(t + 1 - i) {
                if !b.is_zero() {
                    out[i + k] += a * b;
                }
            }
        }
        QSeries::new(out, t)
    }
}

impl Neg for &QSeries {
    type Output = QSeries;
    fn neg(self) -> QSeries {
        self.scale(&-Rational::one())
    }
}

/// `A_i = sum_m m^i sigma(m) q^m`.
pub fn a_series(i: u32, trunc: usize) -> QSeries {
    let mut c = vec![Rational::zero(); trunc + 1];
    for (m, slot) in c.iter_mut().enumerate().skip(1) {
        let s = divisor_power_sum(m as u64, 1).expect("m >= 1");
        *slot = Rational::from(BigInt::from(m).pow(i) * s);
    }
    QSeries::new(c, trunc)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Eisenstein {
    E2,
    E4,
    E6,
}

impl Eisenstein {
    fn lambert(self) -> (i64, u32) {
        match self {
            Eisenstein::E2 => (-24, 1),
            Eisenstein::E4 => (240, 3),
            Eisenstein::E6 => (-504, 5),
        }
    }
}

/// `1 + c sum_n n^a q^n / (1 - q^n) = 1 + c sum_m sigma_a(m) q^m`.
pub fn eisenstein_q(which: Eisenstein, trunc: usize) -> QSeries {
    let (c, a) = which.lambert();
    let mut coeffs = vec![Rational::one()];
    for m in 1..=trunc {
        let s = divisor_power_sum(m as u64, a).expect("m >= 1");
        coeffs.push(Rational::from(s * BigInt::from(c)));
    }
    QSeries::new(coeffs, trunc)
}

/// `P_0 = sum_{j>=1} (-1)^{j-1} (2j-1) q^{j(j-1)/2}`.
pub fn jacobi_p0(trunc: usize) -> QSeries {
    let mut coeffs = vec![Rational::zero(); trunc + 1];
    let mut j = 1usize;
    while j * (j - 1) / 2 <= trunc {
        coeffs[j * (j - 1) / 2] = Rational::sign_pow(j - 1) * Rational::from((2 * j - 1) as i64);
        j += 1;
    }
    QSeries::new(coeffs, trunc)
}

/// `prod_{n>=1} (1 - q^n)^3`, expanded as a finite product.
pub fn jacobi_p0_product(trunc: usize) -> QSeries {
    let mut acc: Vec<BigInt> = vec![BigInt::from(0); trunc + 1];
    acc[0] = BigInt::from(1);
    for n in 1..=trunc {
        for _ in 0..3 {
            for m in (n..=trunc).rev() {
                let prev = acc[m - n].clone();
                acc[m] -= prev;
            }
        }
    }
    QSeries::new(acc.into_iter().map(Rational::from).collect(), trunc)
}

/// Substitutes q-expansions for the symbols of `p` (A- or E-family).
pub fn eval_mpoly_series(p: &MPoly, trunc: usize) -> Result<QSeries> {
    let symbols: Vec<QSeries> = match p.family() {
        SymbolFamily::A => (0..p.num_vars()).map(|i| a_series(i as u32, trunc)).collect(),
        SymbolFamily::E => [Eisenstein::E2, Eisenstein::E4, Eisenstein::E6]
            .into_iter()
            .map(|w| eisenstein_q(w, trunc))
            .collect(),
        other => {
            return Err(Error::SymbolFamily(format!(
                "no q-expansion for {other:?}-symbols"
            )))
        }
    };
    let mut powers: Vec<Vec<QSeries>> = symbols
        .iter()
        .map(|_| vec![QSeries::constant(Rational::one(), trunc)])
        .collect();
    let mut out = QSeries::zero(trunc);
    for (mono, c) in p.terms() {
        let mut term = QSeries::constant(c.clone(), trunc);
        for (i, &e) in mono.exps().iter().enumerate() {
            while powers[i].len() <= e as usize {
                let next = powers[i].last().unwrap() * &symbols[i];
                powers[i].push(next);
            }
            if e > 0 {
                term = &term * &powers[i][e as usize];
            }
        }
        out = &out + &term;
    }
    Ok(out)
}

/// A numeric value with a diagnostic estimate of the neglected tail.
#[derive(Debug, Clone, Serialize)]
pub struct SeriesValue {
    pub value: PrecReal,
    /// `|last coefficient| q^{N+1} / (1-q)`.
    pub tail_estimate: f64,
}

fn check_q(q: &PrecReal) -> Result<()> {
    if q.signum() <= 0 || q.to_f64() >= 1.0 {
        return Err(Error::OutOfRange(format!("q must lie in (0,1), got {}", q.to_sci(10))));
    }
    Ok(())
}

/// Horner evaluation of the truncated polynomial at `q`.
pub fn eval_series_numeric(s: &QSeries, q: &PrecReal, prec: u32) -> Result<SeriesValue> {
    check_q(q)?;
    let q = q.with_precision(prec);
    let mut acc = PrecReal::zero(prec);
    for c in s.coeffs.iter().rev() {
        acc = &(&acc * &q) + &PrecReal::from_rational(c, prec);
    }
    let qf = q.to_f64();
    let last = s.coeffs.last().map(|c| c.abs().to_f64()).unwrap_or(0.0);
    let tail = last * qf.powi(s.trunc as i32 + 1) / (1.0 - qf);
    Ok(SeriesValue {
        value: acc,
        tail_estimate: tail,
    })
}

/// `A_i(q)` summed directly until the terms drop below `2^{-prec}`.
///
/// Terms are bounded by `m^{i+2} q^m`, which is decreasing once
/// `m > (i+2)/ln(1/q)`; the sum stops when that bound, together with its
/// geometric tail, is negligible.
pub fn a_numeric(i: u32, q: &PrecReal, prec: u32) -> Result<PrecReal> {
    check_q(q)?;
    let work = prec + 16;
    let q = q.with_precision(work);
    let ln_inv_q = -q.to_f64().ln();
    let mut acc = PrecReal::zero(work);
    let mut qm = PrecReal::from_int(1, work);
    let mut m: u64 = 0;
    loop {
        m += 1;
        qm = &qm * &q;
        let s = divisor_power_sum(m, 1)?;
        let coeff = BigInt::from(m).pow(i) * s;
        acc = &acc + &(&qm * &PrecReal::from_rational(&Rational::from(coeff), work));
        let mf = m as f64;
        let bound_log2 = (i as f64 + 2.0) * mf.log2() - mf * ln_inv_q / std::f64::consts::LN_2
            - (1.0 - q.to_f64()).log2();
        if mf > (i as f64 + 2.0) / ln_inv_q && bound_log2 < -(work as f64) {
            break;
        }
    }
    Ok(acc.with_precision(prec))
}

/// Evaluates an A-polynomial at `q` from numerically summed `A_i(q)`.
pub fn eval_mpoly_numeric(p: &MPoly, q: &PrecReal, prec: u32) -> Result<PrecReal> {
    if p.family() != SymbolFamily::A {
        return Err(Error::SymbolFamily("numeric evaluation needs A-symbols".into()));
    }
    let work = prec + 32;
    let values = (0..p.num_vars())
        .map(|i| a_numeric(i as u32, q, work))
        .collect::<Result<Vec<_>>>()?;
    let mut acc = PrecReal::zero(work);
    for (mono, c) in p.terms() {
        let mut t = PrecReal::from_rational(c, work);
        for (i, &e) in mono.exps().iter().enumerate() {
            if e > 0 {
                t = &t * &values[i].powi(e);
            }
        }
        acc = &acc + &t;
    }
    Ok(acc.with_precision(prec))
}
