//! Truncated power series in `b` with exact rational coefficients.
//!
//! A series carries its reliable order `N`: coefficients of `b^n` for
//! `n < N` are exact, everything from `b^N` on is unknown. Every
//! operation propagates the order honestly, and reading past it yields
//! [`Error::InsufficientPrecision`].

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Rational = BigRational;

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// `Some(n)` when `r` is a non-negative integer that fits a usize.
pub fn as_nonneg_int(r: &Rational) -> Option<usize> {
    if r.is_integer() && !r.is_negative() {
        r.to_integer().to_usize()
    } else {
        None
    }
}

pub fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let num: BigInt = num.parse().ok()?;
    let den: BigInt = den.parse().ok()?;
    if den.is_zero() {
        return None;
    }
    Some(Rational::new(num, den))
}

/// Rising factorial `x (x+1) ... (x+j-1)`.
pub fn rising(x: &Rational, j: usize) -> Rational {
    let mut acc = Rational::one();
    let mut f = x.clone();
    for _ in 0..j {
        acc *= &f;
        f += Rational::one();
    }
    acc
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PowerSeries {
    coeffs: Vec<Rational>,
}

impl fmt::Debug for PowerSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} + O(b^{})", self, self.order())
    }
}

impl fmt::Display for PowerSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (n, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match n {
                0 => write!(f, "{}", c)?,
                1 => write!(f, "({})b", c)?,
                _ => write!(f, "({})b^{}", c, n)?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

impl PowerSeries {
    pub fn from_coeffs(coeffs: Vec<Rational>) -> Self {
        PowerSeries { coeffs }
    }

    pub fn zero(order: usize) -> Self {
        PowerSeries { coeffs: vec![Rational::zero(); order] }
    }

    pub fn one(order: usize) -> Self {
        Self::constant(Rational::one(), order)
    }

    pub fn constant(c: Rational, order: usize) -> Self {
        Self::monomial(c, 0, order)
    }

    /// `c b^n`, truncated to `order`.
    pub fn monomial(c: Rational, n: usize, order: usize) -> Self {
        let mut s = Self::zero(order);
        if n < order {
            s.coeffs[n] = c;
        }
        s
    }

    /// Builds a series from sparse `(exponent, coefficient)` pairs; terms at
    /// or beyond `order` are dropped.
    pub fn from_sparse<I>(terms: I, order: usize) -> Self
    where
        I: IntoIterator<Item = (usize, Rational)>,
    {
        let mut s = Self::zero(order);
        for (n, c) in terms {
            if n < order {
                s.coeffs[n] += c;
            }
        }
        s
    }

    pub fn order(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn coeff(&self, n: usize) -> Result<&Rational> {
        self.coeffs.get(n).ok_or(Error::InsufficientPrecision {
            needed: n + 1,
            available: self.order(),
        })
    }

    /// Nonzero terms as `(exponent, coefficient)` pairs.
    pub fn sparse(&self) -> Vec<(usize, Rational)> {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(n, c)| (n, c.clone()))
            .collect()
    }

    /// Index of the first nonzero coefficient within the reliable order.
    pub fn valuation(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    pub fn is_zero(&self) -> bool {
        self.valuation().is_none()
    }

    pub fn constant_term(&self) -> Rational {
        self.coeffs.first().cloned().unwrap_or_else(Rational::zero)
    }

    pub fn truncate(&self, order: usize) -> Self {
        let mut coeffs = self.coeffs.clone();
        coeffs.truncate(order);
        PowerSeries { coeffs }
    }

    /// Zero extension to `order`, for series known to be polynomials.
    pub fn padded(&self, order: usize) -> Self {
        let mut coeffs = self.coeffs.clone();
        if coeffs.len() < order {
            coeffs.resize(order, Rational::zero());
        }
        PowerSeries { coeffs }
    }

    /// Agreement on the common reliable order.
    pub fn agrees_with(&self, other: &Self) -> bool {
        self.coeffs.iter().zip(other.coeffs.iter()).all(|(x, y)| x == y)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        PowerSeries { coeffs: self.coeffs.iter().map(|x| x * c).collect() }
    }

    /// Multiplication by `b^k`; the order grows by `k`.
    pub fn shift(&self, k: usize) -> Self {
        let mut coeffs = vec![Rational::zero(); k];
        coeffs.extend(self.coeffs.iter().cloned());
        PowerSeries { coeffs }
    }

    /// Division by `b^k`, dropping the first `k` coefficients (the caller
    /// guarantees they vanish or are to be discarded).
    pub fn unshift(&self, k: usize) -> Self {
        PowerSeries { coeffs: self.coeffs.iter().skip(k).cloned().collect() }
    }

    /// `S(c b)`.
    pub fn rescale_variable(&self, c: &Rational) -> Self {
        let mut pow = Rational::one();
        let mut coeffs = Vec::with_capacity(self.order());
        for x in &self.coeffs {
            coeffs.push(x * &pow);
            pow *= c;
        }
        PowerSeries { coeffs }
    }

    /// `b^2 S'`, the action of `a` on functions of `b` in the rank-0 sense.
    pub fn b2_derivative(&self) -> Self {
        let mut coeffs = vec![Rational::zero(); self.order() + 1];
        for n in 1..self.order() {
            if !self.coeffs[n].is_zero() {
                coeffs[n + 1] = &self.coeffs[n] * BigInt::from(n);
            }
        }
        PowerSeries { coeffs }
    }

    pub fn derivative(&self) -> Self {
        ps_derivative(self)
    }

    pub fn invert(&self) -> Result<Self> {
        ps_invert(self)
    }
}

pub fn ps_mul(x: &PowerSeries, y: &PowerSeries) -> PowerSeries {
    let order = x.order().min(y.order());
    let mut coeffs = vec![Rational::zero(); order];
    for (i, xi) in x.coeffs.iter().enumerate().take(order) {
        if xi.is_zero() {
            continue;
        }
        for (j, yj) in y.coeffs.iter().enumerate().take(order - i) {
            if !yj.is_zero() {
                coeffs[i + j] += xi * yj;
            }
        }
    }
    PowerSeries { coeffs }
}

pub fn ps_invert(x: &PowerSeries) -> Result<PowerSeries> {
    let c0 = x.constant_term();
    if c0.is_zero() {
        return Err(Error::NotAUnit);
    }
    let inv0 = c0.recip();
    let order = x.order();
    let mut out: Vec<Rational> = Vec::with_capacity(order);
    for n in 0..order {
        if n == 0 {
            out.push(inv0.clone());
            continue;
        }
        let mut acc = Rational::zero();
        for k in 1..=n {
            if !x.coeffs[k].is_zero() {
                acc += &x.coeffs[k] * &out[n - k];
            }
        }
        out.push(-acc * &inv0);
    }
    Ok(PowerSeries { coeffs: out })
}

pub fn ps_derivative(x: &PowerSeries) -> PowerSeries {
    let coeffs = x
        .coeffs
        .iter()
        .enumerate()
        .skip(1)
        .map(|(n, c)| c * BigInt::from(n))
        .collect();
    PowerSeries { coeffs }
}

impl Add for &PowerSeries {
    type Output = PowerSeries;
    fn add(self, rhs: &PowerSeries) -> PowerSeries {
        let order = self.order().min(rhs.order());
        PowerSeries {
            coeffs: (0..order).map(|n| &self.coeffs[n] + &rhs.coeffs[n]).collect(),
        }
    }
}

impl Sub for &PowerSeries {
    type Output = PowerSeries;
    fn sub(self, rhs: &PowerSeries) -> PowerSeries {
        let order = self.order().min(rhs.order());
        PowerSeries {
            coeffs: (0..order).map(|n| &self.coeffs[n] - &rhs.coeffs[n]).collect(),
        }
    }
}

impl Mul for &PowerSeries {
    type Output = PowerSeries;
    fn mul(self, rhs: &PowerSeries) -> PowerSeries {
        ps_mul(self, rhs)
    }
}

impl Neg for &PowerSeries {
    type Output = PowerSeries;
    fn neg(self) -> PowerSeries {
        PowerSeries { coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }
}

/// Solutions of `b V' - m V = R`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SolutionSpace {
    pub particular: Option<PowerSeries>,
    pub homogeneous_basis: Vec<PowerSeries>,
    /// Resonant exponent and the coefficient of `R` there, which must vanish.
    pub obstruction: Option<(usize, Rational)>,
}

/// Coefficientwise solve of `b V' - m V = R` with the resonant coefficient
/// (if any) set to zero. Returns the series together with the obstruction
/// when the resonance lies inside the reliable order of `R`.
pub fn euler_particular(m: &Rational, r: &PowerSeries) -> (PowerSeries, Option<(usize, Rational)>) {
    let resonance = as_nonneg_int(m);
    let mut coeffs = Vec::with_capacity(r.order());
    let mut obstruction = None;
    for (n, rn) in r.coeffs.iter().enumerate() {
        if Some(n) == resonance {
            obstruction = Some((n, rn.clone()));
            coeffs.push(Rational::zero());
        } else {
            coeffs.push(rn / (int(n as i64) - m));
        }
    }
    (PowerSeries { coeffs }, obstruction)
}

pub fn euler_solve(m: &Rational, r: &PowerSeries) -> SolutionSpace {
    let (v, obstruction) = euler_particular(m, r);
    let homogeneous_basis = match &obstruction {
        Some((e, _)) => vec![PowerSeries::monomial(Rational::one(), *e, r.order())],
        None => Vec::new(),
    };
    let solvable = obstruction.as_ref().is_none_or(|(_, c)| c.is_zero());
    SolutionSpace {
        particular: solvable.then_some(v),
        homogeneous_basis,
        obstruction,
    }
}

/// Lowest common multiple of the denominators of `xs`.
pub fn denominator_lcm<'a, I: IntoIterator<Item = &'a Rational>>(xs: I) -> BigInt {
    xs.into_iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()))
}
