//! Symbolic coefficients of the zero expansion.
//!
//! `C_n` is built from the kernel coefficients `S_i(n)` and the theta-powers
//! `P_i` of the Jacobi sum through
//!
//! ```text
//! C_n = -S_0(n) + sum_{i=1}^{n} 3 * 2^i * S_i(n)(C_1, ..., C_{n-1}) * P_i
//! ```
//!
//! and can then be rewritten in `Q[A_0, A_1, A_2]` or in `Q[E_2, E_4, E_6]`.

mod kernel;
mod mpoly;

pub use kernel::{kernel_at_integer_j, kernel_expand, KernelCoeff};
pub use mpoly::{MPoly, Monomial, SymbolFamily};

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::exactmath::Rational;
use crate::jpoly::{StirlingTables, UVForm};

/// `Theta = q d/dq` acting by `Theta(A_i) = A_{i+1}`.
///
/// With `extend == false` the result is pushed back into `Q[A_0, A_1, A_2]`.
pub fn theta(p: &MPoly, extend: bool) -> Result<MPoly> {
    expect_family(p, SymbolFamily::A)?;
    let mut out = MPoly::zero(SymbolFamily::A);
    for idx in p.variables() {
        out = &out + &(&p.derivative(idx) * &MPoly::var(SymbolFamily::A, idx + 1));
    }
    if extend {
        Ok(out)
    } else {
        reduce_to_a012(&out)
    }
}

/// `P_1 = A_0`, `P_{m+1} = Theta(P_m) - 3 A_0 P_m`.
pub fn p_m(m: usize) -> Result<MPoly> {
    if m == 0 {
        return Err(Error::InvalidIndex("P_m needs m >= 1".into()));
    }
    Ok(p_sequence(m).pop().unwrap())
}

fn p_sequence(m: usize) -> Vec<MPoly> {
    let a0 = MPoly::var(SymbolFamily::A, 0);
    let mut out = vec![a0.clone()];
    while out.len() < m {
        let last = out.last().unwrap();
        let next = &theta(last, true).expect("A-family") - &(&a0 * last).scale(&Rational::from(3));
        out.push(next);
    }
    out
}

/// `A_3 = A_2 + 36 A_1^2 - 24 A_0 A_2`.
pub fn a3_relation() -> MPoly {
    MPoly::parse(SymbolFamily::A, "A2 + 36*A1^2 - 24*A0*A2").unwrap()
}

/// Representations `R_n(A_0, A_1, A_2)` of `A_n`, grown by the closed theta.
#[derive(Debug, Clone)]
pub struct A012Reducer {
    images: Vec<MPoly>,
}

impl Default for A012Reducer {
    fn default() -> Self {
        Self::new()
    }
}

impl A012Reducer {
    pub fn new() -> Self {
        let a = |i| MPoly::var(SymbolFamily::A, i);
        A012Reducer {
            images: vec![a(0), a(1), a(2), a3_relation()],
        }
    }

    /// `R_n`; `R_{n+1} = dR/dA0 * A1 + dR/dA1 * A2 + dR/dA2 * R_3`.
    pub fn image(&mut self, n: usize) -> &MPoly {
        while self.images.len() <= n {
            let next = closed_theta(self.images.last().unwrap(), &self.images[3]);
            self.images.push(next);
        }
        &self.images[n]
    }

    pub fn reduce(&mut self, p: &MPoly) -> Result<MPoly> {
        expect_family(p, SymbolFamily::A)?;
        let nv = p.num_vars();
        if nv <= 3 {
            return Ok(p.clone());
        }
        self.image(nv - 1);
        p.substitute(&self.images[..nv], SymbolFamily::A)
    }
}

fn closed_theta(p: &MPoly, r3: &MPoly) -> MPoly {
    let a = |i| MPoly::var(SymbolFamily::A, i);
    let t0 = &p.derivative(0) * &a(1);
    let t1 = &p.derivative(1) * &a(2);
    let t2 = &p.derivative(2) * r3;
    &(&t0 + &t1) + &t2
}

/// The unique representation of an A-polynomial in `Q[A_0, A_1, A_2]`.
pub fn reduce_to_a012(p: &MPoly) -> Result<MPoly> {
    A012Reducer::new().reduce(p)
}

/// `A_0 = (1-E_2)/24`, `A_1 = (E_4-E_2^2)/288`, `A_2 = -(E_2^3-3E_2E_4+2E_6)/1728`.
pub fn to_eisenstein(p: &MPoly) -> Result<MPoly> {
    expect_family(p, SymbolFamily::A)?;
    expect_a012(p)?;
    let e = |s: &str| MPoly::parse(SymbolFamily::E, s).unwrap();
    let images = [
        e("1/24 - 1/24*E2"),
        e("1/288*E4 - 1/288*E2^2"),
        e("-1/1728*E2^3 + 1/576*E2*E4 - 1/864*E6"),
    ];
    p.substitute(&images, SymbolFamily::E)
}

/// `E_2 = 1-24A_0`, `E_4 = 1-48A_0+576A_0^2+288A_1`,
/// `E_6 = 1-72A_0+1728A_0^2-13824A_0^3+432A_1-10368A_0A_1-864A_2`.
pub fn from_eisenstein(p: &MPoly) -> Result<MPoly> {
    expect_family(p, SymbolFamily::E)?;
    p.substitute(&eisenstein_in_a(), SymbolFamily::A)
}

/// `[E_2, E_4, E_6]` as A-polynomials.
pub fn eisenstein_in_a() -> [MPoly; 3] {
    let a = |s: &str| MPoly::parse(SymbolFamily::A, s).unwrap();
    [
        a("1 - 24*A0"),
        a("1 - 48*A0 + 576*A0^2 + 288*A1"),
        a("1 - 72*A0 + 1728*A0^2 - 13824*A0^3 + 432*A1 - 10368*A0*A1 - 864*A2"),
    ]
}

/// Coefficients of `A_0`, `A_1`, `A_2`.
pub fn linear_part(p: &MPoly) -> Result<[Rational; 3]> {
    expect_family(p, SymbolFamily::A)?;
    expect_a012(p)?;
    Ok([p.linear_coeff(0), p.linear_coeff(1), p.linear_coeff(2)])
}

/// Sum of the coefficients of all linear monomials.
pub fn linear_sum(p: &MPoly) -> Rational {
    (0..p.num_vars()).map(|i| p.linear_coeff(i)).sum()
}

fn expect_family(p: &MPoly, family: SymbolFamily) -> Result<()> {
    if p.family() != family {
        return Err(Error::SymbolFamily(format!(
            "expected {family:?}-symbols, got {:?}",
            p.family()
        )));
    }
    Ok(())
}

fn expect_a012(p: &MPoly) -> Result<()> {
    if p.num_vars() > 3 {
        return Err(Error::SymbolFamily(format!(
            "expected a polynomial in A0, A1, A2; found {}",
            SymbolFamily::A.symbol(p.num_vars() - 1)
        )));
    }
    Ok(())
}

/// Memo of every object the `C_n` recursion touches.
///
/// Filling is sequential (`C_n` needs `C_1..C_{n-1}`); a filled table is
/// read-only.
#[derive(Debug, Clone)]
pub struct CoeffTable {
    stirling: StirlingTables,
    deltas: Vec<Vec<UVForm>>,
    c: Vec<MPoly>,
    p: Vec<MPoly>,
    s: Vec<Vec<MPoly>>,
    reduced: Vec<MPoly>,
    compositions: BTreeMap<(bool, usize, usize), MPoly>,
    reducer: A012Reducer,
}

impl Default for CoeffTable {
    fn default() -> Self {
        Self::new()
    }
}

impl CoeffTable {
    pub fn new() -> Self {
        CoeffTable {
            stirling: StirlingTables::new(2),
            deltas: Vec::new(),
            c: Vec::new(),
            p: Vec::new(),
            s: Vec::new(),
            reduced: Vec::new(),
            compositions: BTreeMap::new(),
            reducer: A012Reducer::new(),
        }
    }

    /// A table filled through `C_n`.
    pub fn with_order(n: usize) -> Self {
        let mut t = CoeffTable::new();
        t.ensure(n);
        t
    }

    /// Number of `C_n` computed so far.
    pub fn order(&self) -> usize {
        self.c.len()
    }

    pub fn ensure(&mut self, n: usize) {
        while self.c.len() < n {
            self.push_next();
        }
    }

    /// `Delta(N, m)`, memoized.
    pub fn delta(&mut self, big_n: usize, m: usize) -> Result<UVForm> {
        if big_n < 2 * m {
            return Err(Error::InvalidIndex(format!("need N >= 2m, got N={big_n}, m={m}")));
        }
        while self.deltas.len() <= big_n {
            let row_n = self.deltas.len();
            if self.stirling.len() <= row_n {
                self.stirling = StirlingTables::new(row_n + 4);
            }
            let row = (0..=row_n / 2)
                .map(|mm| self.stirling.delta(row_n, mm))
                .collect::<Result<Vec<_>>>()?;
            self.deltas.push(row);
        }
        Ok(self.deltas[big_n][m].clone())
    }

    /// `C_n` in `A_0..A_{n-1}` as produced by the recursion.
    pub fn c_n(&mut self, n: usize) -> Result<MPoly> {
        if n == 0 {
            return Err(Error::InvalidIndex("C_n needs n >= 1".into()));
        }
        self.ensure(n);
        Ok(self.c[n - 1].clone())
    }

    /// `C_n` rewritten in `Q[A_0, A_1, A_2]`.
    pub fn c_n_a012(&mut self, n: usize) -> Result<MPoly> {
        if n == 0 {
            return Err(Error::InvalidIndex("C_n needs n >= 1".into()));
        }
        self.ensure(n);
        while self.reduced.len() < n {
            let i = self.reduced.len();
            let r = self.reducer.reduce(&self.c[i])?;
            self.reduced.push(r);
        }
        Ok(self.reduced[n - 1].clone())
    }

    /// `C_n` in `Q[E_2, E_4, E_6]`.
    pub fn c_n_eisenstein(&mut self, n: usize) -> Result<MPoly> {
        to_eisenstein(&self.c_n_a012(n)?)
    }

    pub fn p_m(&mut self, m: usize) -> Result<MPoly> {
        if m == 0 {
            return Err(Error::InvalidIndex("P_m needs m >= 1".into()));
        }
        self.ensure_p(m);
        Ok(self.p[m - 1].clone())
    }

    /// `S_i(n)` as a polynomial in `C_1, ..., C_{n-1}`.
    pub fn s_poly(&mut self, i: usize, n: usize) -> Result<MPoly> {
        if n == 0 || i > n {
            return Err(Error::InvalidIndex(format!("S_i(n) needs 0 <= i <= n, n >= 1; got i={i}, n={n}")));
        }
        while self.s.len() < n {
            let next = self.s.len() + 1;
            let row = self.assemble_s(next, SymbolFamily::C)?;
            self.s.push(row);
        }
        Ok(self.s[n - 1][i].clone())
    }

    fn ensure_p(&mut self, m: usize) {
        if self.p.len() < m {
            self.p = p_sequence(m);
        }
    }

    fn push_next(&mut self) {
        let n = self.c.len() + 1;
        let s = self
            .assemble_s(n, SymbolFamily::A)
            .expect("Delta table is always in u-form");
        self.ensure_p(n);
        let mut c = -&s[0];
        for (i, si) in s.iter().enumerate().skip(1) {
            let w = Rational::from(3) * Rational::from(2).pow(i as u32);
            c = &c + &(&si.scale(&w) * &self.p[i - 1]);
        }
        self.c.push(c);
    }

    /// `S_0(n), ..., S_n(n)`:
    ///
    /// ```text
    /// S_i(n) = [u v^i] Delta(n+1, 0)
    ///   + sum_{N=3}^{n+1} sum_{m=1}^{N/2} ([u v^i] Delta(N,m) + [u v^i] Delta(N-2,m-1))
    ///         * sum_{c_1+...+c_m = n+1-N+m, c_l >= 1} C_{c_1} ... C_{c_m}
    /// ```
    ///
    /// The composition sums are taken over C-symbols (`family == C`) or over
    /// the already computed A-polynomials of `C_1..C_{n-1}` (`family == A`).
    fn assemble_s(&mut self, n: usize, family: SymbolFamily) -> Result<Vec<MPoly>> {
        let mut out = vec![MPoly::zero(family); n + 1];
        let top = self.delta(n + 1, 0)?;
        for (i, slot) in out.iter_mut().enumerate() {
            *slot = MPoly::constant(family, top.coeff(i));
        }
        for big_n in 3..=n + 1 {
            for m in 1..=big_n / 2 {
                let d = self.delta(big_n, m)?;
                let d_prev = if big_n - 2 >= 2 * (m - 1) {
                    self.delta(big_n - 2, m - 1)?
                } else {
                    UVForm::default()
                };
                let weights: Vec<Rational> = (0..=n).map(|i| d.coeff(i) + d_prev.coeff(i)).collect();
                if weights.iter().all(Rational::is_zero) {
                    continue;
                }
                let comp = self.composition(family, m, n + 1 - big_n + m);
                if comp.is_zero() {
                    continue;
                }
                for (slot, w) in out.iter_mut().zip(&weights) {
                    if !w.is_zero() {
                        *slot = &*slot + &comp.scale(w);
                    }
                }
            }
        }
        Ok(out)
    }

    /// `sum_{c_1+...+c_m = s, c_l >= 1} C_{c_1} ... C_{c_m}`.
    fn composition(&mut self, family: SymbolFamily, m: usize, s: usize) -> MPoly {
        let key = (family == SymbolFamily::A, m, s);
        if let Some(p) = self.compositions.get(&key) {
            return p.clone();
        }
        let result = if s < m {
            MPoly::zero(family)
        } else if m == 1 {
            self.c_symbol(family, s)
        } else {
            let mut acc = MPoly::zero(family);
            for first in 1..=s - (m - 1) {
                let rest = self.composition(family, m - 1, s - first);
                if rest.is_zero() {
                    continue;
                }
                acc = &acc + &(&self.c_symbol(family, first) * &rest);
            }
            acc
        };
        self.compositions.insert(key, result.clone());
        result
    }

    fn c_symbol(&self, family: SymbolFamily, idx: usize) -> MPoly {
        match family {
            SymbolFamily::C => MPoly::var(SymbolFamily::C, idx - 1),
            SymbolFamily::A => self
                .c
                .get(idx - 1)
                .cloned()
                .expect("compositions only reach already computed C"),
            other => unreachable!("no composition over {other:?}"),
        }
    }
}

/// `C_n` in A-symbols, computed on a fresh table.
pub fn c_n(n: usize) -> Result<MPoly> {
    CoeffTable::new().c_n(n)
}

/// `S_i(n)` in C-symbols, computed on a fresh table.
pub fn s_poly(i: usize, n: usize) -> Result<MPoly> {
    CoeffTable::new().s_poly(i, n)
}

/// Constant `S_n(n) = (-1)^{n-1} / (3 * 2^n (n-1)!)`.
pub fn s_top_constant(n: usize) -> Rational {
    let f = crate::exactmath::factorial(n - 1);
    Rational::sign_pow(n - 1) * Rational::new(1, num_bigint::BigInt::from(3) * num_bigint::BigInt::from(2).pow(n as u32) * f)
}

/// The Bernoulli-number linear coefficients of reduced `C_{2n-1}` and `C_{2n}`.
pub fn bernoulli_linear_terms(n: usize) -> ([Rational; 3], [Rational; 3]) {
    let b = crate::exactmath::bernoulli(2 * n) / Rational::from(n as i64);
    let odd = [
        &b * &Rational::from(6),
        &b * &Rational::from(-36),
        Rational::one() + &b * &Rational::from(30),
    ];
    let even = [
        Rational::zero(),
        &b * &Rational::from(-6),
        &b * &Rational::from(6) - Rational::one(),
    ];
    (odd, even)
}
