//! Normal-form arithmetic in the algebra generated by `a` and `b` subject to
//! `ab - ba = b^2`, completed in `b`.
//!
//! Elements are stored as `Σ T_j(b) a^j` with the series to the left. Moving
//! `a` past a series uses `a S = S a + b^2 S'`, so `a^i S` expands as
//! `Σ_l C(i,l) D^l(S) a^{i-l}` with `D = b^2 d/db`.

use std::fmt;
use std::ops::{Add, Mul, Sub};

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::series::{rising, PowerSeries, Rational};

#[derive(Clone, PartialEq, Eq)]
pub struct AbElement {
    terms: Vec<PowerSeries>,
}

impl fmt::Debug for AbElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .terms
            .iter()
            .enumerate()
            .filter(|(_, t)| !t.is_zero())
            .map(|(j, t)| format!("[{}] a^{}", t, j))
            .collect();
        write!(f, "{} (order {})", parts.join(" + "), self.order())
    }
}

fn binomial(n: usize, k: usize) -> BigInt {
    (0..k).fold(BigInt::one(), |acc, i| acc * BigInt::from(n - i) / BigInt::from(i + 1))
}

fn accumulate(slot: &mut Option<PowerSeries>, s: PowerSeries) {
    *slot = Some(match slot.take() {
        Some(acc) => &acc + &s,
        None => s,
    });
}

impl AbElement {
    /// `terms[j]` is the series multiplying `a^j`.
    pub fn from_terms(terms: Vec<PowerSeries>) -> Self {
        assert!(!terms.is_empty(), "an element needs at least one term");
        AbElement { terms }
    }

    pub fn series(s: PowerSeries) -> Self {
        AbElement { terms: vec![s] }
    }

    /// `c a^j`.
    pub fn monomial(c: PowerSeries, j: usize) -> Self {
        let order = c.order();
        let mut terms = vec![PowerSeries::zero(order); j];
        terms.push(c);
        AbElement { terms }
    }

    pub fn a(order: usize) -> Self {
        Self::monomial(PowerSeries::one(order), 1)
    }

    pub fn b(order: usize) -> Self {
        Self::series(PowerSeries::monomial(Rational::one(), 1, order))
    }

    /// `a - λ b`.
    pub fn a_minus_lambda_b(lambda: &Rational, order: usize) -> Self {
        AbElement {
            terms: vec![
                PowerSeries::monomial(-lambda.clone(), 1, order),
                PowerSeries::one(order),
            ],
        }
    }

    pub fn terms(&self) -> &[PowerSeries] {
        &self.terms
    }

    pub fn degree(&self) -> usize {
        self.terms.len() - 1
    }

    pub fn order(&self) -> usize {
        self.terms.iter().map(PowerSeries::order).min().unwrap()
    }

    pub fn truncate(&self, order: usize) -> Self {
        AbElement { terms: self.terms.iter().map(|t| t.truncate(order)).collect() }
    }

    pub fn agrees_with(&self, other: &Self) -> bool {
        let n = self.terms.len().max(other.terms.len());
        (0..n).all(|j| match (self.terms.get(j), other.terms.get(j)) {
            (Some(x), Some(y)) => x.agrees_with(y),
            (Some(x), None) | (None, Some(x)) => x.is_zero(),
            (None, None) => true,
        })
    }

    pub fn is_zero(&self) -> bool {
        self.terms.iter().all(PowerSeries::is_zero)
    }

    /// Left multiplication by a series.
    pub fn left_scale(&self, s: &PowerSeries) -> Self {
        AbElement { terms: self.terms.iter().map(|t| t * s).collect() }
    }

    fn trimmed(mut self) -> Self {
        while self.terms.len() > 1 && self.terms.last().unwrap().is_zero() {
            self.terms.pop();
        }
        self
    }

    /// Right division by an element whose top coefficient is exactly `1`.
    pub fn right_div_rem(&self, divisor: &AbElement) -> (AbElement, AbElement) {
        let d = divisor.degree();
        let mut rem = self.clone();
        let order = self.order();
        let mut quot = vec![PowerSeries::zero(order); self.degree().saturating_sub(d) + 1];
        while rem.degree() >= d {
            let top = rem.degree();
            let c = rem.terms[top].clone();
            if !c.is_zero() {
                quot[top - d] = &quot[top - d] + &c;
                let step = ab_mul(&AbElement::monomial(c, top - d), divisor);
                rem = &rem - &step;
            }
            if top == 0 {
                break;
            }
            rem.terms.truncate(top);
        }
        (AbElement { terms: quot }.trimmed(), rem.trimmed())
    }

    /// Lowest `(a,b)`-homogeneous part, with weight `deg_a + deg_b`.
    pub fn initial_form(&self) -> Result<AbElement> {
        let w = self.weighted_valuation()?;
        let terms = self
            .terms
            .iter()
            .enumerate()
            .map(|(j, t)| match w.checked_sub(j) {
                Some(m) if m < t.order() => {
                    PowerSeries::monomial(t.coeffs()[m].clone(), m, t.order())
                }
                _ => PowerSeries::zero(t.order()),
            })
            .collect();
        Ok(AbElement { terms }.trimmed())
    }

    /// `min_j (j + val T_j)`; fails when an all-zero term could still hide a
    /// lower weight beyond its reliable order.
    fn weighted_valuation(&self) -> Result<usize> {
        let w = self
            .terms
            .iter()
            .enumerate()
            .filter_map(|(j, t)| t.valuation().map(|v| j + v))
            .min()
            .ok_or(Error::InsufficientPrecision {
                needed: self.order() + 1,
                available: self.order(),
            })?;
        for (j, t) in self.terms.iter().enumerate() {
            if t.is_zero() && j + t.order() < w {
                return Err(Error::InsufficientPrecision {
                    needed: w - j,
                    available: t.order(),
                });
            }
        }
        Ok(w)
    }

    /// Polynomial `χ(n)` with `init(Q)·b^n e_0 = χ(n) b^{n+w}` in the rank-1
    /// module where `a` acts as `b^2 d/db`; coefficients in increasing degree.
    pub fn indicial_polynomial(&self) -> Result<Vec<Rational>> {
        let w = self.weighted_valuation()?;
        let mut poly = vec![Rational::zero(); self.terms.len()];
        let mut rising_poly = vec![Rational::one()];
        for (j, t) in self.terms.iter().enumerate() {
            if let Some(m) = w.checked_sub(j) {
                if m < t.order() && !t.coeffs()[m].is_zero() {
                    for (i, c) in rising_poly.iter().enumerate() {
                        poly[i] += c * &t.coeffs()[m];
                    }
                }
            }
            // rising_poly *= (n + j)
            let mut next = vec![Rational::zero(); rising_poly.len() + 1];
            for (i, c) in rising_poly.iter().enumerate() {
                next[i + 1] += c;
                next[i] += c * BigInt::from(j);
            }
            rising_poly = next;
        }
        Ok(poly)
    }

    pub fn act_on_rank1(&self, lambda: &Rational, s: &PowerSeries) -> PowerSeries {
        act_on_rank1(self, lambda, s)
    }

    pub fn right_factor_extract(&self, lambda: &Rational) -> Result<(PowerSeries, AbElement)> {
        right_factor_extract(self, lambda)
    }
}

pub fn ab_mul(x: &AbElement, y: &AbElement) -> AbElement {
    let mut out: Vec<Option<PowerSeries>> = vec![None; x.degree() + y.degree() + 1];
    for (j, u) in y.terms.iter().enumerate() {
        // derivs[l] = D^l(u)
        let mut derivs = vec![u.clone()];
        for _ in 0..x.degree() {
            let next = derivs.last().unwrap().b2_derivative();
            derivs.push(next);
        }
        for (i, t) in x.terms.iter().enumerate() {
            if t.is_zero() {
                accumulate(&mut out[i + j], t.truncate(t.order().min(u.order())));
                continue;
            }
            for (l, dl) in derivs.iter().enumerate().take(i + 1) {
                let c = Rational::from_integer(binomial(i, l));
                accumulate(&mut out[i - l + j], (t * dl).scale(&c));
            }
        }
    }
    let order = x.order().min(y.order());
    AbElement {
        terms: out
            .into_iter()
            .map(|s| s.unwrap_or_else(|| PowerSeries::zero(order)))
            .collect(),
    }
    .trimmed()
}

/// `Q·(S e_λ)` in `E_λ`, where `a (U e_λ) = (b^2 U' + λ b U) e_λ`.
pub fn act_on_rank1(q: &AbElement, lambda: &Rational, s: &PowerSeries) -> PowerSeries {
    let mut cur = s.clone();
    let mut acc = &q.terms[0] * &cur;
    for t in &q.terms[1..] {
        cur = &cur.b2_derivative() + &cur.shift(1).scale(lambda);
        acc = &acc + &(t * &cur);
    }
    acc
}

/// Finds a unit `S` with `S(0) = 1` and `Q S = Q' (a - λ b)`, returning `Q'`
/// normalized to top coefficient `1`. Resonant coefficients of `S` are set
/// to zero.
pub fn right_factor_extract(q: &AbElement, lambda: &Rational) -> Result<(PowerSeries, AbElement)> {
    let w = q.weighted_valuation()?;
    let s_order = q
        .terms
        .iter()
        .enumerate()
        .map(|(j, t)| t.order() + j)
        .min()
        .unwrap()
        .saturating_sub(w);
    if s_order == 0 {
        return Err(Error::InsufficientPrecision { needed: w + 1, available: q.order() });
    }
    // coefficient of b^target in Q·(b^n e_λ)
    let risings: Vec<Vec<Rational>> = (0..s_order)
        .map(|n| {
            let base = lambda + Rational::from_integer(BigInt::from(n));
            (0..q.terms.len()).map(|j| rising(&base, j)).collect()
        })
        .collect();
    let column = |n: usize, target: usize| -> Rational {
        let mut acc = Rational::zero();
        for (j, t) in q.terms.iter().enumerate() {
            if let Some(m) = target.checked_sub(n + j) {
                let c = &t.coeffs()[m];
                if !c.is_zero() {
                    acc += c * &risings[n][j];
                }
            }
        }
        acc
    };
    if !column(0, w).is_zero() {
        return Err(Error::NoUnitSolution);
    }
    let mut s = vec![Rational::one()];
    for n in 1..s_order {
        let target = n + w;
        let mut rhs = Rational::zero();
        for (np, sn) in s.iter().enumerate() {
            if !sn.is_zero() {
                rhs -= sn * column(np, target);
            }
        }
        let chi = column(n, target);
        if chi.is_zero() {
            if !rhs.is_zero() {
                return Err(Error::NoUnitSolution);
            }
            s.push(Rational::zero());
        } else {
            s.push(rhs / chi);
        }
    }
    let s = PowerSeries::from_coeffs(s);
    let qs = ab_mul(q, &AbElement::series(s.clone()));
    let divisor = AbElement::a_minus_lambda_b(lambda, qs.order() + 1);
    let (quot, rem) = qs.right_div_rem(&divisor);
    if !rem.is_zero() {
        return Err(Error::NoUnitSolution);
    }
    let lead = quot.terms.last().unwrap().invert()?;
    Ok((s, quot.left_scale(&lead)))
}

impl Add for &AbElement {
    type Output = AbElement;
    fn add(self, rhs: &AbElement) -> AbElement {
        combine(self, rhs, |x, y| x + y)
    }
}

impl Sub for &AbElement {
    type Output = AbElement;
    fn sub(self, rhs: &AbElement) -> AbElement {
        combine(self, rhs, |x, y| x - y)
    }
}

impl Mul for &AbElement {
    type Output = AbElement;
    fn mul(self, rhs: &AbElement) -> AbElement {
        ab_mul(self, rhs)
    }
}

fn combine(x: &AbElement, y: &AbElement, f: impl Fn(&PowerSeries, &PowerSeries) -> PowerSeries) -> AbElement {
    let n = x.terms.len().max(y.terms.len());
    let order = x.order().min(y.order());
    let zero = PowerSeries::zero(order);
    AbElement {
        terms: (0..n)
            .map(|j| f(x.terms.get(j).unwrap_or(&zero), y.terms.get(j).unwrap_or(&zero)))
            .collect(),
    }
    .trimmed()
}
