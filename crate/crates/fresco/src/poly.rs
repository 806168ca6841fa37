//! Dense univariate polynomials over ℚ, just enough to split an indicial
//! polynomial whose roots are known to be rational.

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};

use crate::series::{denominator_lcm, Rational};

/// Coefficients in increasing degree, no trailing zeros.
pub type Poly = Vec<Rational>;

fn trim(mut p: Poly) -> Poly {
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
    p
}

fn degree(p: &Poly) -> usize {
    p.len().saturating_sub(1)
}

pub fn eval(p: &Poly, x: &Rational) -> Rational {
    p.iter().rev().fold(Rational::zero(), |acc, c| acc * x + c)
}

fn monic(p: &Poly) -> Poly {
    let lead = p.last().cloned().unwrap();
    p.iter().map(|c| c / &lead).collect()
}

fn derivative(p: &Poly) -> Poly {
    trim(
        p.iter()
            .enumerate()
            .skip(1)
            .map(|(n, c)| c * BigInt::from(n))
            .collect(),
    )
}

fn div_rem(num: &Poly, den: &Poly) -> (Poly, Poly) {
    let mut rem = num.clone();
    let dd = degree(den);
    let lead = den.last().unwrap().clone();
    if rem.len() < den.len() {
        return (vec![], trim(rem));
    }
    let mut quot = vec![Rational::zero(); rem.len() - dd];
    for i in (0..quot.len()).rev() {
        let c = &rem[i + dd] / &lead;
        for (j, d) in den.iter().enumerate() {
            rem[i + j] -= &c * d;
        }
        quot[i] = c;
    }
    rem.truncate(dd);
    (trim(quot), trim(rem))
}

fn gcd(a: &Poly, b: &Poly) -> Poly {
    let (mut x, mut y) = (trim(a.clone()), trim(b.clone()));
    while !y.is_empty() {
        let (_, r) = div_rem(&x, &y);
        x = y;
        y = r;
    }
    monic(&x)
}

fn to_f64(r: &Rational) -> f64 {
    r.numer().to_f64().unwrap_or(f64::NAN) / r.denom().to_f64().unwrap_or(f64::NAN)
}

/// Largest real root of a square-free polynomial with only real roots,
/// approached by Newton's method from above the Cauchy bound.
fn largest_root_estimate(p: &Poly) -> f64 {
    let m = monic(p);
    let coeffs: Vec<f64> = m.iter().map(to_f64).collect();
    let bound = 1.0 + coeffs[..coeffs.len() - 1].iter().fold(0.0f64, |acc, c| acc.max(c.abs()));
    let eval_f = |x: f64| coeffs.iter().rev().fold(0.0, |acc, c| acc * x + c);
    let dcoeffs: Vec<f64> = (1..coeffs.len()).map(|n| coeffs[n] * n as f64).collect();
    let eval_d = |x: f64| dcoeffs.iter().rev().fold(0.0, |acc, c| acc * x + c);
    let mut x = bound;
    for _ in 0..2000 {
        let d = eval_d(x);
        if d == 0.0 {
            break;
        }
        let step = eval_f(x) / d;
        x -= step;
        if step.abs() <= 1e-13 * x.abs().max(1.0) {
            break;
        }
    }
    x
}

/// The full multiset of roots if `p` splits over ℚ, in decreasing order.
pub fn rational_roots(p: &Poly) -> Option<Vec<Rational>> {
    let mut rest = trim(p.clone());
    if rest.is_empty() {
        return None;
    }
    let mut roots = Vec::new();
    while degree(&rest) > 0 {
        let sqfree = {
            let g = gcd(&rest, &derivative(&rest));
            monic(&div_rem(&rest, &g).0)
        };
        let scale = denominator_lcm(sqfree.iter());
        let approx = largest_root_estimate(&sqfree) * scale.to_f64()?;
        if !approx.is_finite() {
            return None;
        }
        let centre = BigInt::from(approx.round() as i128);
        let root = (-3i32..=3)
            .map(|d| Rational::new(&centre + BigInt::from(d), scale.clone()))
            .find(|r| eval(&sqfree, r).is_zero())?;
        let linear = vec![-root.clone(), Rational::one()];
        loop {
            let (q, r) = div_rem(&rest, &linear);
            if !r.is_empty() {
                break;
            }
            roots.push(root.clone());
            rest = q;
        }
    }
    roots.sort_by(|a, b| b.cmp(a));
    Some(roots)
}

/// Expands `Π (x - r)` for the given roots.
#[cfg(test)]
pub fn from_roots(roots: &[Rational]) -> Poly {
    let mut p = vec![Rational::one()];
    for r in roots {
        let mut next = vec![Rational::zero(); p.len() + 1];
        for (i, c) in p.iter().enumerate() {
            next[i + 1] += c;
            next[i] -= c * r;
        }
        p = next;
    }
    p
}
