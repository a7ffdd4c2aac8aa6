use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::exactmath::Rational;

/// The ordered symbol families a polynomial may live over.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SymbolFamily {
    /// `A_0, A_1, ...` with `A_i = sum_m m^i sigma(m) q^m`.
    A,
    /// `C_1, C_2, ...`; index 0 is `C_1`.
    C,
    /// `E_2, E_4, E_6`.
    E,
    /// `j, a_0, a_1, ...`: the kernel expansion variables.
    Kernel,
}

impl SymbolFamily {
    pub fn symbol(self, idx: usize) -> String {
        match self {
            SymbolFamily::A => format!("A{idx}"),
            SymbolFamily::C => format!("C{}", idx + 1),
            SymbolFamily::E => format!("E{}", 2 * idx + 2),
            SymbolFamily::Kernel if idx == 0 => "j".to_string(),
            SymbolFamily::Kernel => format!("a{}", idx - 1),
        }
    }

    fn parse_symbol(self, name: &str) -> Option<usize> {
        let num = |prefix: &str| name.strip_prefix(prefix)?.parse::<usize>().ok();
        match self {
            SymbolFamily::A => num("A"),
            SymbolFamily::C => num("C").filter(|&i| i >= 1).map(|i| i - 1),
            SymbolFamily::E => match num("E")? {
                2 => Some(0),
                4 => Some(1),
                6 => Some(2),
                _ => None,
            },
            SymbolFamily::Kernel if name == "j" => Some(0),
            SymbolFamily::Kernel => num("a").map(|i| i + 1),
        }
    }
}

/// Exponent vector with trailing zeros trimmed.
///
/// Ordered by total degree, then by exponent vector with earlier symbols
/// first, so `1 < A0 < A1 < A2 < A0^2 < A0 A1 < ...`.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn new(mut exps: Vec<u32>) -> Self {
        while exps.last() == Some(&0) {
            exps.pop();
        }
        Monomial(exps)
    }

    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn var(idx: usize) -> Self {
        let mut e = vec![0; idx + 1];
        e[idx] = 1;
        Monomial(e)
    }

    pub fn exps(&self) -> &[u32] {
        &self.0
    }

    pub fn exp(&self, idx: usize) -> u32 {
        self.0.get(idx).copied().unwrap_or(0)
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    fn mul(&self, other: &Monomial) -> Monomial {
        let n = self.0.len().max(other.0.len());
        Monomial::new((0..n).map(|i| self.exp(i) + other.exp(i)).collect())
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| other.0.cmp(&self.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

/// Sparse multivariate polynomial over the rationals in one symbol family.
#[derive(Clone, PartialEq, Eq)]
pub struct MPoly {
    family: SymbolFamily,
    terms: BTreeMap<Monomial, Rational>,
}

impl MPoly {
    pub fn zero(family: SymbolFamily) -> Self {
        MPoly {
            family,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(family: SymbolFamily, c: Rational) -> Self {
        let mut p = MPoly::zero(family);
        p.add_term(Monomial::one(), c);
        p
    }

    pub fn one(family: SymbolFamily) -> Self {
        MPoly::constant(family, Rational::one())
    }

    pub fn var(family: SymbolFamily, idx: usize) -> Self {
        let mut p = MPoly::zero(family);
        p.add_term(Monomial::var(idx), Rational::one());
        p
    }

    pub fn family(&self) -> SymbolFamily {
        self.family
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, exps: &[u32]) -> Rational {
        self.terms
            .get(&Monomial::new(exps.to_vec()))
            .cloned()
            .unwrap_or_default()
    }

    pub fn constant_term(&self) -> Rational {
        self.coeff(&[])
    }

    /// Coefficient of the linear monomial in variable `idx`.
    pub fn linear_coeff(&self, idx: usize) -> Rational {
        self.terms
            .get(&Monomial::var(idx))
            .cloned()
            .unwrap_or_default()
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::degree).max()
    }

    /// Number of variable slots in use (one past the highest variable index).
    pub fn num_vars(&self) -> usize {
        self.terms.keys().map(|m| m.0.len()).max().unwrap_or(0)
    }

    /// Indices of the variables that occur.
    pub fn variables(&self) -> Vec<usize> {
        (0..self.num_vars())
            .filter(|&i| self.terms.keys().any(|m| m.exp(i) > 0))
            .collect()
    }

    pub fn add_term(&mut self, mono: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(mono) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn scale(&self, c: &Rational) -> MPoly {
        if c.is_zero() {
            return MPoly::zero(self.family);
        }
        MPoly {
            family: self.family,
            terms: self.terms.iter().map(|(m, a)| (m.clone(), a * c)).collect(),
        }
    }

    pub fn pow(&self, e: u32) -> MPoly {
        let mut acc = MPoly::one(self.family);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Partial derivative in variable `idx`.
    pub fn derivative(&self, idx: usize) -> MPoly {
        let mut out = MPoly::zero(self.family);
        for (m, c) in &self.terms {
            let e = m.exp(idx);
            if e == 0 {
                continue;
            }
            let mut exps = m.0.clone();
            exps[idx] -= 1;
            out.add_term(Monomial::new(exps), c * &Rational::from(e as i64));
        }
        out
    }

    /// Replaces variable `i` by `images[i]`; every image must share `target`'s family.
    pub fn substitute(&self, images: &[MPoly], target: SymbolFamily) -> Result<MPoly> {
        if let Some(bad) = images.iter().find(|p| p.family != target) {
            return Err(Error::SymbolFamily(format!(
                "image in family {:?}, expected {target:?}",
                bad.family
            )));
        }
        let nv = self.num_vars();
        if nv > images.len() {
            return Err(Error::SymbolFamily(format!(
                "no image for {}",
                self.family.symbol(images.len())
            )));
        }
        // powers[i][e] = images[i]^e, filled lazily
        let mut powers: Vec<Vec<MPoly>> = vec![vec![MPoly::one(target)]; nv];
        let mut out = MPoly::zero(target);
        for (m, c) in &self.terms {
            let mut term = MPoly::constant(target, c.clone());
            for (i, &e) in m.0.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                while powers[i].len() <= e as usize {
                    let next = powers[i].last().unwrap() * &images[i];
                    powers[i].push(next);
                }
                term = &term * &powers[i][e as usize];
            }
            out = &out + &term;
        }
        Ok(out)
    }

    /// Rebadges the polynomial as living in `family`, keeping exponent vectors.
    pub fn with_family(mut self, family: SymbolFamily) -> MPoly {
        self.family = family;
        self
    }

    /// Parses sums of terms like `-13/10*A0^2 + 3/5*A1 - A0*A2 + 1/2`.
    pub fn parse(family: SymbolFamily, s: &str) -> Result<MPoly> {
        let err = || Error::Parse {
            what: "polynomial",
            input: s.to_string(),
        };
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() {
            return Err(err());
        }
        let mut out = MPoly::zero(family);
        let mut chunks: Vec<(bool, String)> = Vec::new();
        let mut cur = String::new();
        let mut neg = false;
        for (i, ch) in compact.char_indices() {
            let sign = ch == '+' || ch == '-';
            let after_exp = i > 0 && matches!(compact.as_bytes()[i - 1], b'^' | b'e' | b'E');
            if sign && !after_exp {
                if !cur.is_empty() {
                    chunks.push((neg, std::mem::take(&mut cur)));
                } else if i > 0 {
                    return Err(err());
                }
                neg = ch == '-';
            } else {
                cur.push(ch);
            }
        }
        if cur.is_empty() {
            return Err(err());
        }
        chunks.push((neg, cur));
        for (neg, chunk) in chunks {
            let mut coeff = Rational::one();
            let mut exps: Vec<u32> = Vec::new();
            for factor in chunk.split('*') {
                if factor.is_empty() {
                    return Err(err());
                }
                let (name, e) = match factor.split_once('^') {
                    Some((n, e)) => (n, e.parse::<u32>().map_err(|_| err())?),
                    None => (factor, 1),
                };
                if let Some(idx) = family.parse_symbol(name) {
                    if exps.len() <= idx {
                        exps.resize(idx + 1, 0);
                    }
                    exps[idx] += e;
                } else {
                    let c: Rational = name.parse().map_err(|_| err())?;
                    coeff = coeff * c.pow(e);
                }
            }
            if neg {
                coeff = -coeff;
            }
            out.add_term(Monomial::new(exps), coeff);
        }
        Ok(out)
    }

    fn check_family(&self, other: &MPoly) {
        assert_eq!(
            self.family, other.family,
            "arithmetic across symbol families"
        );
    }
}

impl Add for &MPoly {
    type Output = MPoly;
    fn add(self, rhs: &MPoly) -> MPoly {
        self.check_family(rhs);
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl Sub for &MPoly {
    type Output = MPoly;
    fn sub(self, rhs: &MPoly) -> MPoly {
        self.check_family(rhs);
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), -c);
        }
        out
    }
}

impl Mul for &MPoly {
    type Output = MPoly;
    fn mul(self, rhs: &MPoly) -> MPoly {
        self.check_family(rhs);
        let mut out = MPoly::zero(self.family);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                out.add_term(ma.mul(mb), ca * cb);
            }
        }
        out
    }
}

impl Neg for &MPoly {
    type Output = MPoly;
    fn neg(self) -> MPoly {
        self.scale(&-Rational::one())
    }
}

impl fmt::Display for MPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (k, (m, c)) in self.terms.iter().enumerate() {
            let (neg, mag) = if c.is_negative() { (true, -c) } else { (false, c.clone()) };
            match (k, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let mut factors: Vec<String> = Vec::new();
            if !mag.is_one() || m.is_one() {
                factors.push(mag.to_string());
            }
            for (i, &e) in m.0.iter().enumerate() {
                match e {
                    0 => {}
                    1 => factors.push(self.family.symbol(i)),
                    _ => factors.push(format!("{}^{e}", self.family.symbol(i))),
                }
            }
            write!(f, "{}", factors.join("*"))?;
        }
        Ok(())
    }
}

impl fmt::Debug for MPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MPoly[{:?}]({self})", self.family)
    }
}

#[derive(Serialize, Deserialize)]
struct TermRepr {
    exps: Vec<u32>,
    coeff: Rational,
}

#[derive(Serialize, Deserialize)]
struct MPolyRepr {
    symbols: Vec<String>,
    terms: Vec<TermRepr>,
}

impl MPoly {
    /// The symbol names listed in serialized output.
    pub fn symbol_names(&self) -> Vec<String> {
        let n = match self.family {
            SymbolFamily::E => 3,
            _ => self.num_vars(),
        };
        (0..n).map(|i| self.family.symbol(i)).collect()
    }
}

impl Serialize for MPoly {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let repr = MPolyRepr {
            symbols: self.symbol_names(),
            terms: self
                .terms
                .iter()
                .map(|(m, c)| TermRepr {
                    exps: m.0.clone(),
                    coeff: c.clone(),
                })
                .collect(),
        };
        repr.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for MPoly {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let repr = MPolyRepr::deserialize(deserializer)?;
        let family = match repr.symbols.first().map(String::as_str) {
            Some("j") => SymbolFamily::Kernel,
            Some(s) if s.starts_with('A') => SymbolFamily::A,
            Some(s) if s.starts_with('C') => SymbolFamily::C,
            Some(s) if s.starts_with('E') => SymbolFamily::E,
            None => SymbolFamily::A,
            Some(other) => return Err(D::Error::custom(format!("unknown symbol {other}"))),
        };
        let mut p = MPoly::zero(family);
        for t in repr.terms {
            p.add_term(Monomial::new(t.exps), t.coeff);
        }
        Ok(p)
    }
}
