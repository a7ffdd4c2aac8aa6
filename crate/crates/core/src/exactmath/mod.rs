//! Exact scalar substrate: rationals, Bernoulli numbers, generalized
//! binomial coefficients, divisor sums and Faulhaber power-sum polynomials.

mod rational;

pub use rational::{rat, Rational};

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::jpoly::JPoly;

/// Memo table of Bernoulli numbers with the `B_1 = -1/2` convention.
#[derive(Debug, Clone)]
pub struct BernoulliCache {
    table: Vec<Rational>,
}

impl Default for BernoulliCache {
    fn default() -> Self {
        Self::new()
    }
}

impl BernoulliCache {
    pub fn new() -> Self {
        BernoulliCache {
            table: vec![Rational::one()],
        }
    }

    /// `B_n`, extending the table with `sum_{k<=n} C(n+1,k) B_k = 0` as needed.
    pub fn get(&mut self, n: usize) -> Rational {
        while self.table.len() <= n {
            let m = self.table.len();
            // B_m = -1/(m+1) * sum_{k<m} C(m+1,k) B_k
            let mut acc = Rational::zero();
            let mut binom = BigInt::from(1);
            for (k, b) in self.table.iter().enumerate() {
                if !b.is_zero() {
                    acc += Rational::from(binom.clone()) * b;
                }
                binom = binom * BigInt::from(m + 1 - k) / BigInt::from(k + 1);
            }
            let next = -acc / Rational::from((m + 1) as i64);
            self.table.push(next);
        }
        self.table[n].clone()
    }

    pub fn table(&self) -> &[Rational] {
        &self.table
    }
}

/// The n-th Bernoulli number (`B_1 = -1/2`).
pub fn bernoulli(n: usize) -> Rational {
    BernoulliCache::new().get(n)
}

/// Ordinary binomial coefficient as a big integer.
pub fn binomial(n: usize, k: usize) -> BigInt {
    if k > n {
        return BigInt::from(0);
    }
    let k = k.min(n - k);
    let mut acc = BigInt::from(1);
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

pub fn factorial(n: usize) -> BigInt {
    (1..=n).fold(BigInt::from(1), |acc, i| acc * BigInt::from(i))
}

/// Scalars admitting the falling-factorial binomial `alpha (alpha-1) ... (alpha-k+1) / k!`.
pub trait GenBinomial: Sized {
    fn gen_binomial(&self, k: usize) -> Self;
}

impl GenBinomial for Rational {
    fn gen_binomial(&self, k: usize) -> Self {
        let mut acc = Rational::one();
        for i in 0..k {
            acc = acc * (self - Rational::from(i as i64)) / Rational::from((i + 1) as i64);
        }
        acc
    }
}

impl GenBinomial for JPoly {
    fn gen_binomial(&self, k: usize) -> Self {
        let mut acc = JPoly::one();
        for i in 0..k {
            let factor = self - &JPoly::constant(Rational::from(i as i64));
            acc = (&acc * &factor).scale(&rat(1, (i + 1) as i64));
        }
        acc
    }
}

pub fn gen_binomial<T: GenBinomial>(alpha: &T, k: usize) -> T {
    alpha.gen_binomial(k)
}

/// Sum of the positive divisors of `m`.
pub fn divisor_sigma(m: u64) -> Result<u64> {
    divisor_power_sum(m, 1).map(|s| u64::try_from(s).expect("sigma(m) fits u64 when m does"))
}

/// `sum_{d | m} d^power`, by trial division up to `sqrt(m)`.
pub fn divisor_power_sum(m: u64, power: u32) -> Result<BigInt> {
    if m == 0 {
        return Err(Error::ZeroDivisorSum);
    }
    let mut acc = BigInt::from(0);
    let mut d = 1u64;
    while d * d <= m {
        if m % d == 0 {
            acc += BigInt::from(d).pow(power);
            let e = m / d;
            if e != d {
                acc += BigInt::from(e).pow(power);
            }
        }
        d += 1;
    }
    Ok(acc)
}

/// Faulhaber polynomial `p_m(j) = sum_{k=1}^{j-1} k^m` as a polynomial in `j`.
pub fn power_sum_poly(m: usize) -> JPoly {
    power_sum_poly_with(m, &mut BernoulliCache::new())
}

pub(crate) fn power_sum_poly_with(m: usize, bern: &mut BernoulliCache) -> JPoly {
    let mut coeffs = vec![Rational::zero(); m + 2];
    let inv = rat(1, (m + 1) as i64);
    for i in 0..=m {
        let c = Rational::sign_pow(i) * Rational::from(binomial(m + 1, i)) * bern.get(i) * &inv;
        coeffs[m + 1 - i] += c;
    }
    coeffs[m] -= &Rational::one();
    JPoly::new(coeffs)
}
