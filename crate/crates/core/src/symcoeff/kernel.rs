//! Direct expansion of the kernel coefficient, used as an oracle for the
//! assembled `S_i(n)`.
//!
//! With `a(x) = a_0 + a_1 x + ...`,
//!
//! ```text
//! G(x) = (1 + a(x) x^2)^j       * prod_{i=0}^{j-1} 1/(1+ix)
//! H(x) = (1 + a(x) x^2)^{-(j-1)} * prod_{i=1}^{j-1} (1-ix)
//! ```
//!
//! and the kernel coefficient is `[x^{n-1}] (G-H)/x^2 * (1 + a(x) x^2)`. Its
//! `a_{n-1}` part is exactly `u`; the remainder is `u * sum_i S_i(n) v^i` with
//! `a_i` standing for `C_{i+1}`.

use std::collections::BTreeMap;

use super::mpoly::{MPoly, Monomial, SymbolFamily};
use crate::error::{Error, Result};
use crate::exactmath::{gen_binomial, Rational};
use crate::jpoly::{uv_decompose, JPoly, StirlingTables, UVForm};

/// The kernel coefficient of order `n`, split into its `a_{n-1}` part and the
/// `S_i(n)` in C-symbols.
#[derive(Debug, Clone)]
pub struct KernelCoeff {
    pub n: usize,
    /// Coefficient of `a_{n-1}` (in u-form; equals `u`).
    pub last: UVForm,
    /// `S_0(n), ..., S_n(n)`.
    pub s: Vec<MPoly>,
}

type Series = Vec<MPoly>;

fn series_mul(a: &[MPoly], b: &[MPoly], len: usize, family: SymbolFamily) -> Series {
    let mut out = vec![MPoly::zero(family); len];
    for (i, ai) in a.iter().enumerate().take(len) {
        if ai.is_zero() {
            continue;
        }
        for (k, bk) in b.iter().enumerate().take(len - i) {
            if !bk.is_zero() {
                out[i + k] = &out[i + k] + &(ai * bk);
            }
        }
    }
    out
}

fn series_sub(a: &[MPoly], b: &[MPoly]) -> Series {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

/// `1/s` for a series with constant term 1.
fn series_inv(s: &[MPoly], family: SymbolFamily) -> Series {
    let mut out = vec![MPoly::one(family)];
    for k in 1..s.len() {
        let mut acc = MPoly::zero(family);
        for i in 1..=k {
            acc = &acc - &(&s[i] * &out[k - i]);
        }
        out.push(acc);
    }
    out
}

/// `a(x) x^2` truncated to `len` terms, with `a_i` the variable at `offset + i`.
fn shifted_a(n: usize, len: usize, family: SymbolFamily, offset: usize) -> Series {
    let mut y = vec![MPoly::zero(family); len];
    for i in 0..n {
        if i + 2 < len {
            y[i + 2] = MPoly::var(family, offset + i);
        }
    }
    y
}

/// `[x^{n+1}] D + sum_{i=0}^{n-3} a_i [x^{n-1-i}] D`.
fn kernel_from_difference(d: &[MPoly], n: usize, offset: usize) -> MPoly {
    let family = d[0].family();
    let mut k = d[n + 1].clone();
    for i in 0..n.saturating_sub(2) {
        k = &k + &(&MPoly::var(family, offset + i) * &d[n - 1 - i]);
    }
    k
}

fn jpoly_to_kernel(p: &JPoly) -> MPoly {
    let mut out = MPoly::zero(SymbolFamily::Kernel);
    for (d, c) in p.coeffs().iter().enumerate() {
        out.add_term(Monomial::new(vec![d as u32]), c.clone());
    }
    out
}

/// Symbolic expansion in `j` and `a_0, ..., a_{n-1}`.
pub fn kernel_expand(n: usize) -> Result<KernelCoeff> {
    if n == 0 {
        return Err(Error::InvalidIndex("kernel order must be >= 1".into()));
    }
    let fam = SymbolFamily::Kernel;
    let len = n + 2;
    let tables = StirlingTables::new(len);
    let y = shifted_a(n, len, fam, 1);

    let one_minus_j = &JPoly::one() - &JPoly::j();
    let mut g_bin = vec![MPoly::zero(fam); len];
    let mut h_bin = vec![MPoly::zero(fam); len];
    let mut y_pow = {
        let mut s = vec![MPoly::zero(fam); len];
        s[0] = MPoly::one(fam);
        s
    };
    for m in 0..=len / 2 {
        let bg = jpoly_to_kernel(&gen_binomial(&JPoly::j(), m));
        let bh = jpoly_to_kernel(&gen_binomial(&one_minus_j, m));
        for (t, yt) in y_pow.iter().enumerate() {
            if !yt.is_zero() {
                g_bin[t] = &g_bin[t] + &(&bg * yt);
                h_bin[t] = &h_bin[t] + &(&bh * yt);
            }
        }
        y_pow = series_mul(&y_pow, &y, len, fam);
    }
    let q_series: Series = (0..len).map(|k| jpoly_to_kernel(&tables.q[k])).collect();
    let s_series: Series = (0..len)
        .map(|k| jpoly_to_kernel(&tables.sigma[k].scale(&Rational::sign_pow(k))))
        .collect();
    let g = series_mul(&g_bin, &q_series, len, fam);
    let h = series_mul(&h_bin, &s_series, len, fam);
    let d = series_sub(&g, &h);
    let kernel = kernel_from_difference(&d, n, 1);

    // group by a-monomial, collecting the j-polynomial coefficient
    let mut groups: BTreeMap<Vec<u32>, Vec<Rational>> = BTreeMap::new();
    for (mono, c) in kernel.terms() {
        let exps = mono.exps();
        let jdeg = exps.first().copied().unwrap_or(0) as usize;
        let key = exps.get(1..).unwrap_or(&[]).to_vec();
        let slot = groups.entry(key).or_default();
        if slot.len() <= jdeg {
            slot.resize(jdeg + 1, Rational::zero());
        }
        slot[jdeg] += c;
    }

    let last_key = Monomial::var(n - 1).exps().to_vec();
    let mut last = UVForm::default();
    let mut s = vec![MPoly::zero(SymbolFamily::C); n + 1];
    for (key, coeffs) in groups {
        let (even, odd) = uv_decompose(&JPoly::new(coeffs));
        if !even.is_empty() {
            return Err(Error::NotUForm(format!(
                "kernel term {key:?} of order {n} has a pure-v part"
            )));
        }
        if key == last_key {
            last = odd;
            continue;
        }
        let mono = Monomial::new(key);
        for (i, c) in odd.vcoeffs().iter().enumerate() {
            if i > n {
                return Err(Error::OutOfRange(format!("kernel v-degree {i} exceeds {n}")));
            }
            s[i].add_term(mono.clone(), c.clone());
        }
    }
    Ok(KernelCoeff { n, last, s })
}

/// The kernel coefficient at a fixed integer `j >= 1`, from the literal
/// finite products; `a_i` is returned as `C_{i+1}`.
pub fn kernel_at_integer_j(n: usize, j: u64) -> Result<MPoly> {
    if n == 0 || j == 0 {
        return Err(Error::InvalidIndex(format!("need n >= 1 and j >= 1, got n={n}, j={j}")));
    }
    let fam = SymbolFamily::C;
    let len = n + 2;
    let mut one_plus_y = shifted_a(n, len, fam, 0);
    one_plus_y[0] = MPoly::one(fam);
    let pow = |e: u64| {
        let mut acc = vec![MPoly::zero(fam); len];
        acc[0] = MPoly::one(fam);
        for _ in 0..e {
            acc = series_mul(&acc, &one_plus_y, len, fam);
        }
        acc
    };
    let mut g = pow(j);
    for i in 1..j {
        let neg_i = -Rational::from(i as i64);
        let geo: Series = (0..len)
            .map(|k| MPoly::constant(fam, neg_i.pow(k as u32)))
            .collect();
        g = series_mul(&g, &geo, len, fam);
    }
    let mut h = series_inv(&pow(j - 1), fam);
    for i in 1..j {
        let mut lin = vec![MPoly::zero(fam); len];
        lin[0] = MPoly::one(fam);
        lin[1] = MPoly::constant(fam, -Rational::from(i as i64));
        h = series_mul(&h, &lin, len, fam);
    }
    let d = series_sub(&g, &h);
    Ok(kernel_from_difference(&d, n, 0))
}
