//! Polynomials in the index symbol `j`, the elementary-symmetric families
//! `sigma_i(j)` and `Q_k(j)`, the kernel blocks `G(N,m)`, `H(N,m)` and their
//! difference `Delta(N,m)` written in the basis `u = 2j-1`, `v = j(j-1)`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactmath::{gen_binomial, power_sum_poly_with, rat, BernoulliCache, Rational};

/// Dense polynomial in `j`; `coeffs[i]` multiplies `j^i`.
#[derive(Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct JPoly {
    coeffs: Vec<Rational>,
}

impl JPoly {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(Rational::is_zero) {
            coeffs.pop();
        }
        JPoly { coeffs }
    }

    pub fn zero() -> Self {
        JPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        JPoly::new(vec![c])
    }

    /// The polynomial `j`.
    pub fn j() -> Self {
        JPoly::new(vec![Rational::zero(), Rational::one()])
    }

    /// `u = 2j - 1`.
    pub fn u() -> Self {
        JPoly::new(vec![-Rational::one(), Rational::from(2)])
    }

    /// `v = j(j-1)`.
    pub fn v() -> Self {
        JPoly::new(vec![Rational::zero(), -Rational::one(), Rational::one()])
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> Rational {
        self.coeffs.get(i).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Rational {
        self.coeffs.last().cloned().unwrap_or_default()
    }

    pub fn scale(&self, c: &Rational) -> JPoly {
        JPoly::new(self.coeffs.iter().map(|a| a * c).collect())
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        self.coeffs
            .iter()
            .rev()
            .fold(Rational::zero(), |acc, c| acc * x + c)
    }

    /// `self(other(j))`.
    pub fn compose(&self, other: &JPoly) -> JPoly {
        self.coeffs.iter().rev().fold(JPoly::zero(), |acc, c| {
            &(&acc * other) + &JPoly::constant(c.clone())
        })
    }

    pub fn pow(&self, e: usize) -> JPoly {
        (0..e).fold(JPoly::one(), |acc, _| &acc * self)
    }

    /// Euclidean division; panics on a zero divisor.
    pub fn div_rem(&self, divisor: &JPoly) -> (JPoly, JPoly) {
        let dd = divisor.degree().expect("division by the zero polynomial");
        let lead = divisor.leading();
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return (JPoly::zero(), self.clone());
        }
        let mut quot = vec![Rational::zero(); rem.len() - dd];
        for i in (0..quot.len()).rev() {
            let c = &rem[i + dd] / &lead;
            if !c.is_zero() {
                for (k, d) in divisor.coeffs.iter().enumerate() {
                    rem[i + k] -= &(&c * d);
                }
            }
            quot[i] = c;
        }
        (JPoly::new(quot), JPoly::new(rem))
    }
}

impl fmt::Debug for JPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for JPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match i {
                0 => write!(f, "{c}")?,
                1 => write!(f, "({c})*j")?,
                _ => write!(f, "({c})*j^{i}")?,
            }
        }
        Ok(())
    }
}

impl Add for &JPoly {
    type Output = JPoly;
    fn add(self, rhs: &JPoly) -> JPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        JPoly::new((0..n).map(|i| self.coeff(i) + rhs.coeff(i)).collect())
    }
}

impl Sub for &JPoly {
    type Output = JPoly;
    fn sub(self, rhs: &JPoly) -> JPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        JPoly::new((0..n).map(|i| self.coeff(i) - rhs.coeff(i)).collect())
    }
}

impl Mul for &JPoly {
    type Output = JPoly;
    fn mul(self, rhs: &JPoly) -> JPoly {
        if self.is_zero() || rhs.is_zero() {
            return JPoly::zero();
        }
        let mut out = vec![Rational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (k, b) in rhs.coeffs.iter().enumerate() {
                out[i + k] += &(a * b);
            }
        }
        JPoly::new(out)
    }
}

impl Neg for &JPoly {
    type Output = JPoly;
    fn neg(self) -> JPoly {
        JPoly::new(self.coeffs.iter().map(|c| -c).collect())
    }
}

/// `u * sum_i vcoeffs[i] v^i` with `u = 2j-1`, `v = j(j-1)`.
#[derive(Clone, PartialEq, Eq, Debug, Default, Serialize, Deserialize)]
pub struct UVForm {
    #[serde(rename = "u_times")]
    vcoeffs: Vec<Rational>,
}

impl UVForm {
    pub fn new(mut vcoeffs: Vec<Rational>) -> Self {
        while vcoeffs.last().is_some_and(Rational::is_zero) {
            vcoeffs.pop();
        }
        UVForm { vcoeffs }
    }

    pub fn vcoeffs(&self) -> &[Rational] {
        &self.vcoeffs
    }

    /// `[u v^i]` of the form.
    pub fn coeff(&self, i: usize) -> Rational {
        self.vcoeffs.get(i).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.vcoeffs.is_empty()
    }

    /// Degree in `v`; `None` for the zero form.
    pub fn v_degree(&self) -> Option<usize> {
        self.vcoeffs.len().checked_sub(1)
    }

    pub fn to_jpoly(&self) -> JPoly {
        &JPoly::u() * &v_series(&self.vcoeffs)
    }
}

fn v_series(vcoeffs: &[Rational]) -> JPoly {
    let v = JPoly::v();
    vcoeffs
        .iter()
        .rev()
        .fold(JPoly::zero(), |acc, c| &(&acc * &v) + &JPoly::constant(c.clone()))
}

/// Splits `p(j) = sum_i even[i] v^i + u * sum_i odd[i] v^i`.
///
/// Repeated division by `v = j^2 - j` peels off linear remainders
/// `alpha j + beta = alpha/2 * u + (beta + alpha/2)`.
pub fn uv_decompose(p: &JPoly) -> (Vec<Rational>, UVForm) {
    let v = JPoly::v();
    let mut even = Vec::new();
    let mut odd = Vec::new();
    let mut cur = p.clone();
    while !cur.is_zero() {
        let (q, r) = cur.div_rem(&v);
        let alpha = r.coeff(1);
        let beta = r.coeff(0);
        let half = &alpha * &rat(1, 2);
        even.push(&beta + &half);
        odd.push(half);
        cur = q;
    }
    let mut even = even;
    while even.last().is_some_and(Rational::is_zero) {
        even.pop();
    }
    (even, UVForm::new(odd))
}

/// Recomposes the output of [`uv_decompose`].
pub fn uv_recompose(even: &[Rational], odd: &UVForm) -> JPoly {
    &v_series(even) + &odd.to_jpoly()
}

/// `sigma_0..=sigma_n` and `Q_0..=Q_n` as polynomials in `j`.
#[derive(Debug, Clone)]
pub struct StirlingTables {
    pub sigma: Vec<JPoly>,
    pub q: Vec<JPoly>,
}

impl StirlingTables {
    /// Newton's identities `m sigma_m = sum_{k=1}^m (-1)^{k-1} p_k sigma_{m-k}`,
    /// then `Q_k = -sum_{i=1}^k sigma_i Q_{k-i}`.
    pub fn new(n: usize) -> Self {
        let mut bern = BernoulliCache::new();
        let p: Vec<JPoly> = (0..=n)
            .map(|m| {
                if m == 0 {
                    JPoly::zero()
                } else {
                    power_sum_poly_with(m, &mut bern)
                }
            })
            .collect();
        let mut sigma = vec![JPoly::one()];
        for m in 1..=n {
            let mut acc = JPoly::zero();
            for k in 1..=m {
                let term = &p[k] * &sigma[m - k];
                acc = if k % 2 == 1 { &acc + &term } else { &acc - &term };
            }
            sigma.push(acc.scale(&rat(1, m as i64)));
        }
        let mut q = vec![JPoly::one()];
        for k in 1..=n {
            let mut acc = JPoly::zero();
            for i in 1..=k {
                acc = &acc - &(&sigma[i] * &q[k - i]);
            }
            q.push(acc);
        }
        StirlingTables { sigma, q }
    }

    pub fn len(&self) -> usize {
        self.sigma.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sigma.is_empty()
    }

    pub fn g_coeff(&self, big_n: usize, m: usize) -> Result<JPoly> {
        check_nm(big_n, m)?;
        let k = big_n - 2 * m;
        self.ensure(k)?;
        Ok(&gen_binomial(&JPoly::j(), m) * &self.q[k])
    }

    pub fn h_coeff(&self, big_n: usize, m: usize) -> Result<JPoly> {
        check_nm(big_n, m)?;
        let k = big_n - 2 * m;
        self.ensure(k)?;
        let one_minus_j = &JPoly::one() - &JPoly::j();
        let h = &gen_binomial(&one_minus_j, m) * &self.sigma[k];
        Ok(h.scale(&Rational::sign_pow(big_n)))
    }

    pub fn delta(&self, big_n: usize, m: usize) -> Result<UVForm> {
        let d = &self.g_coeff(big_n, m)? - &self.h_coeff(big_n, m)?;
        let (even, odd) = uv_decompose(&d);
        if !even.is_empty() {
            return Err(Error::NotUForm(format!("Delta({big_n},{m}) has a pure-v part")));
        }
        Ok(odd)
    }

    fn ensure(&self, k: usize) -> Result<()> {
        if k >= self.sigma.len() {
            return Err(Error::InvalidIndex(format!(
                "table holds sigma/Q up to {}, need {k}",
                self.sigma.len() - 1
            )));
        }
        Ok(())
    }
}

fn check_nm(big_n: usize, m: usize) -> Result<()> {
    if big_n < 2 * m {
        return Err(Error::InvalidIndex(format!("need N >= 2m, got N={big_n}, m={m}")));
    }
    Ok(())
}

/// `sigma_i(j)`: the elementary symmetric sum of degree `i` over `{1, ..., j-1}`.
pub fn sigma_poly(i: usize) -> JPoly {
    StirlingTables::new(i).sigma.swap_remove(i)
}

/// `Q_k(j)`, the `x^k` coefficient of `prod_{i<j} 1/(1+ix)`.
pub fn q_poly(k: usize) -> JPoly {
    StirlingTables::new(k).q.swap_remove(k)
}

pub fn g_coeff(big_n: usize, m: usize) -> Result<JPoly> {
    check_nm(big_n, m)?;
    StirlingTables::new(big_n - 2 * m).g_coeff(big_n, m)
}

pub fn h_coeff(big_n: usize, m: usize) -> Result<JPoly> {
    check_nm(big_n, m)?;
    StirlingTables::new(big_n - 2 * m).h_coeff(big_n, m)
}

/// `Delta(N,m) = G(N,m) - H(N,m)` in the `u * poly(v)` form.
pub fn delta(big_n: usize, m: usize) -> Result<UVForm> {
    check_nm(big_n, m)?;
    StirlingTables::new(big_n - 2 * m).delta(big_n, m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn r(p: i64) -> Rational {
        Rational::from(p)
    }

    #[test]
    fn sigma_and_q_printed() {
        assert_eq!(sigma_poly(0), JPoly::one());
        assert_eq!(sigma_poly(1), JPoly::v().scale(&rat(1, 2)));
        assert_eq!(q_poly(0), JPoly::one());
        assert_eq!(q_poly(1), JPoly::v().scale(&rat(-1, 2)));
    }

    #[test]
    fn sigma_leading_coefficients() {
        let t = StirlingTables::new(10);
        for k in 1..=10usize {
            let kf = crate::exactmath::factorial(k);
            let kf1 = crate::exactmath::factorial(k - 1);
            let two_k = BigInt::from(2).pow(k as u32);
            let s = &t.sigma[k];
            assert_eq!(s.degree(), Some(2 * k));
            assert_eq!(s.coeff(2 * k), Rational::new(1, &two_k * &kf));
            assert_eq!(
                s.coeff(2 * k - 1),
                -Rational::new(2 * k as i64 + 1, BigInt::from(3) * &two_k * &kf1)
            );
            let q = &t.q[k];
            let sign = Rational::sign_pow(k);
            assert_eq!(q.coeff(2 * k), &sign * &Rational::new(1, &two_k * &kf));
            assert_eq!(
                q.coeff(2 * k - 1),
                &sign * &Rational::new(2 * k as i64 - 5, BigInt::from(3) * &two_k * &kf1)
            );
        }
    }

    #[test]
    fn sigma_matches_elementary_symmetric_sums() {
        let t = StirlingTables::new(7);
        for j0 in 1..=8i64 {
            // e_i(1..j0-1) via the product prod (1 + k y)
            let mut e = vec![r(1)];
            for k in 1..j0 {
                let mut next = e.clone();
                next.push(r(0));
                for i in 1..next.len() {
                    next[i] = &e.get(i).cloned().unwrap_or_default() + &(&e[i - 1] * &r(k));
                }
                e = next;
            }
            for i in 0..=7usize {
                let want = e.get(i).cloned().unwrap_or_default();
                assert_eq!(t.sigma[i].eval(&r(j0)), want, "i={i} j={j0}");
                if i as i64 >= j0 {
                    assert!(t.sigma[i].eval(&r(j0)).is_zero());
                }
            }
        }
    }

    #[test]
    fn replace_symmetry() {
        let t = StirlingTables::new(12);
        let one_minus_t = &JPoly::one() - &JPoly::j();
        for n in 0..=12 {
            let lhs = t.q[n].compose(&one_minus_t);
            let rhs = t.sigma[n].scale(&Rational::sign_pow(n));
            assert_eq!(lhs, rhs, "n={n}");
        }
    }

    #[test]
    fn divisible_by_v() {
        let t = StirlingTables::new(12);
        for k in 1..=12 {
            assert!(t.sigma[k].div_rem(&JPoly::v()).1.is_zero());
            assert!(t.q[k].div_rem(&JPoly::v()).1.is_zero());
        }
    }

    #[test]
    fn g_h_small() {
        assert_eq!(g_coeff(0, 0).unwrap(), JPoly::one());
        assert_eq!(h_coeff(0, 0).unwrap(), JPoly::one());
        assert_eq!(g_coeff(2, 1).unwrap(), JPoly::j());
        assert_eq!(h_coeff(2, 1).unwrap(), &JPoly::one() - &JPoly::j());
        assert!(g_coeff(3, 2).is_err());
        assert!(delta(1, 1).is_err());
    }

    #[test]
    fn g_leading_term() {
        for big_n in 0..=10usize {
            for m in 0..=big_n / 2 {
                let g = g_coeff(big_n, m).unwrap();
                let deg = 2 * big_n - 3 * m;
                let denom = crate::exactmath::factorial(m)
                    * crate::exactmath::factorial(big_n - 2 * m)
                    * BigInt::from(2).pow((big_n - 2 * m) as u32);
                assert_eq!(g.degree(), Some(deg));
                assert_eq!(g.coeff(deg), Rational::sign_pow(big_n) * Rational::new(1, denom));
            }
        }
    }

    #[test]
    fn delta_printed_examples() {
        let u = JPoly::u();
        let v = JPoly::v();
        let j = JPoly::j();
        let jm1 = &j - &JPoly::one();
        let poly = |cs: &[i64]| JPoly::new(cs.iter().map(|&x| r(x)).collect());

        assert!(delta(0, 0).unwrap().is_zero());
        assert!(delta(1, 0).unwrap().is_zero());
        assert_eq!(delta(2, 0).unwrap().to_jpoly(), (&v * &u).scale(&rat(1, 6)));
        assert_eq!(delta(2, 1).unwrap().to_jpoly(), u.clone());
        assert_eq!(delta(3, 0).unwrap().to_jpoly(), (&(&v * &v) * &u).scale(&rat(-1, 12)));
        assert_eq!(delta(3, 1).unwrap().to_jpoly(), (&v * &u).scale(&rat(-1, 2)));
        // (j-1) j (2j-1) (-4 - 12j + 17j^2 - 10j^3 + 5j^4) / 240
        let d40 = &(&(&jm1 * &j) * &u) * &poly(&[-4, -12, 17, -10, 5]);
        assert_eq!(delta(4, 0).unwrap().to_jpoly(), d40.scale(&rat(1, 240)));
        let d41 = &(&(&jm1 * &j) * &u) * &poly(&[2, -3, 3]);
        assert_eq!(delta(4, 1).unwrap().to_jpoly(), d41.scale(&rat(1, 24)));
        assert!(delta(4, 2).unwrap().is_zero());
        let v2u = &(&v * &v) * &u;
        let d50 = &v2u * &poly(&[-12, -56, 61, -10, 5]);
        assert_eq!(delta(5, 0).unwrap().to_jpoly(), d50.scale(&rat(-1, 1440)));
        let d51 = &v2u * &poly(&[6, -1, 1]);
        assert_eq!(delta(5, 1).unwrap().to_jpoly(), d51.scale(&rat(-1, 48)));
        assert!(delta(5, 2).unwrap().is_zero());
    }

    #[test]
    fn delta_uv_examples() {
        assert_eq!(delta(2, 1).unwrap().vcoeffs(), &[r(1)]);
        assert_eq!(delta(3, 0).unwrap().vcoeffs(), &[r(0), r(0), rat(-1, 12)]);
        assert_eq!(delta(2, 0).unwrap().vcoeffs(), &[r(0), rat(1, 6)]);
    }

    #[test]
    fn delta_structure() {
        let t = StirlingTables::new(12);
        for big_n in 2..=12usize {
            for m in 0..=big_n / 2 {
                let d = t.delta(big_n, m).unwrap();
                if (big_n, m) != (2, 1) {
                    assert!(d.coeff(0).is_zero(), "N={big_n} m={m}");
                }
                let bound = (2 * big_n as i64 - 3 * m as i64 - 1).div_euclid(2);
                if let Some(deg) = d.v_degree() {
                    assert!(deg as i64 <= bound, "N={big_n} m={m}");
                }
            }
        }
    }

    #[test]
    fn delta_n0_leading() {
        let t = StirlingTables::new(12);
        for big_n in 3..=12usize {
            let d = t.delta(big_n, 0).unwrap();
            let want = Rational::sign_pow(big_n)
                * Rational::new(
                    1,
                    BigInt::from(3)
                        * BigInt::from(2).pow(big_n as u32 - 2)
                        * crate::exactmath::factorial(big_n - 2),
                );
            // the j^{2N-1} coefficient; u v^{N-1} leads with 2 j^{2N-1}
            assert_eq!(d.to_jpoly().coeff(2 * big_n - 1), want);
            assert_eq!(d.v_degree(), Some(big_n - 1));
            assert_eq!(d.coeff(big_n - 1), &want * &rat(1, 2));
        }
    }

    #[test]
    fn uv_examples() {
        // j^2 + 3j + 1 = v + 2u + 3
        let p = JPoly::new(vec![r(1), r(3), r(1)]);
        let (even, odd) = uv_decompose(&p);
        assert_eq!(even, vec![r(3), r(1)]);
        assert_eq!(odd.vcoeffs(), &[r(2)]);
        let (even, odd) = uv_decompose(&JPoly::constant(r(7)));
        assert_eq!(even, vec![r(7)]);
        assert!(odd.is_zero());
        let j3 = JPoly::j().pow(3);
        let (even, odd) = uv_decompose(&j3);
        assert_eq!(uv_recompose(&even, &odd), j3);
    }

    #[test]
    fn serialization() {
        let p = JPoly::new(vec![r(0), rat(-1, 2), rat(1, 2)]);
        assert_eq!(serde_json::to_string(&p).unwrap(), r#"["0","-1/2","1/2"]"#);
        let f = UVForm::new(vec![r(0), rat(1, 6)]);
        assert_eq!(serde_json::to_string(&f).unwrap(), r#"{"u_times":["0","1/6"]}"#);
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn uv_round_trip(cs in proptest::collection::vec(-50i64..50, 0..12)) {
                let p = JPoly::new(cs.into_iter().map(Rational::from).collect());
                let (even, odd) = uv_decompose(&p);
                prop_assert_eq!(uv_recompose(&even, &odd), p);
            }

            #[test]
            fn uvform_expand_redecompose(cs in proptest::collection::vec(-20i64..20, 0..8)) {
                let f = UVForm::new(cs.into_iter().map(Rational::from).collect());
                let (even, odd) = uv_decompose(&f.to_jpoly());
                prop_assert!(even.is_empty());
                prop_assert_eq!(odd, f);
            }
        }
    }
}
