//! Isomorphism invariants of frescos: the rank-2 parameter α, the recursive
//! β invariant with two independent rank-3 evaluations, the semi-simplicity
//! stratification and rank-1 normal submodules.

use std::collections::BTreeSet;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::fresco_core::{Element, Fresco};
use crate::linalg;
use crate::series::{as_nonneg_int, euler_particular, euler_solve, int, PowerSeries, Rational};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rank2Class {
    pub lambda1: Rational,
    pub lambda2: Rational,
    pub p: Rational,
    pub alpha: Rational,
}

impl Rank2Class {
    pub fn new(lambda1: Rational, lambda2: Rational, alpha: Rational) -> Self {
        let p = &lambda2 - &lambda1 + int(1);
        Rank2Class { lambda1, lambda2, p, alpha }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rank1Family {
    pub mu: Rational,
    pub particular: Element,
    pub directions: Vec<Element>,
}

impl Rank1Family {
    pub fn dimension(&self) -> usize {
        1 + self.directions.len()
    }

    pub fn members(&self) -> impl Iterator<Item = &Element> {
        std::iter::once(&self.particular).chain(self.directions.iter())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WindowBeta {
    pub start: usize,
    pub end: usize,
    pub beta: Rational,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StratumReport {
    pub level: usize,
    /// Nonzero β values of the first failing window size, if any.
    pub failing: Vec<WindowBeta>,
}

fn require_rank(f: &Fresco, k: usize, what: &str) -> Result<()> {
    if f.rank() != k {
        return Err(Error::PreconditionFailed(format!("{} needs rank {}, got {}", what, k, f.rank())));
    }
    Ok(())
}

pub fn alpha(f: &Fresco) -> Result<Rational> {
    require_rank(f, 2, "alpha")?;
    let p = &f.steps()[0];
    match as_nonneg_int(p) {
        None => Ok(Rational::zero()),
        Some(0) => Ok(Rational::one()),
        Some(p) => Ok(f.connection(1).coeff(p)?.clone()),
    }
}

/// α of the window `(j, j+1)`, 1-based.
pub fn alpha_j(f: &Fresco, j: usize) -> Result<Rational> {
    if j == 0 || j >= f.rank() {
        return Err(Error::PreconditionFailed(format!("alpha_j needs 1 <= j <= k-1, got {}", j)));
    }
    alpha(&f.window(j, j + 1))
}

pub fn alphas(f: &Fresco) -> Result<Vec<Rational>> {
    (1..f.rank()).map(|j| alpha_j(f, j)).collect()
}

/// `e_k + V e_{k-1}` such that `(a - λ_{k-1} b)(a - λ_k b)` sends it into
/// `F_{k-2}`.
pub fn adjusted_generator(f: &Fresco) -> Result<Element> {
    let k = f.rank();
    if k < 3 {
        return Err(Error::PreconditionFailed("adjusted generator needs rank >= 3".into()));
    }
    if !alpha(&f.window(k - 1, k))?.is_zero() {
        return Err(Error::PreconditionFailed(format!(
            "top window ({}, {}) is not semi-simple",
            k - 1,
            k
        )));
    }
    let s = f.connection(k - 1);
    let m = &f.steps()[k - 2] - int(1);
    let rhs = (&PowerSeries::one(s.order()) - s).unshift(1);
    let sol = euler_solve(&m, &rhs);
    let v = sol.particular.ok_or_else(|| {
        Error::PreconditionFailed("obstruction in the top window: alpha does not vanish".into())
    })?;
    let n = v.order();
    let mut coords = vec![PowerSeries::zero(n); k];
    coords[k - 1] = PowerSeries::one(n);
    coords[k - 2] = v;
    let e = Element::new(coords);
    let h = top_pair_image(f, &e);
    if !(h.coord(k).is_zero() && h.coord(k - 1).is_zero()) {
        return Err(Error::PreconditionFailed("adjusted generator postcondition failed".into()));
    }
    Ok(e)
}

/// `(a - λ_{k-1} b)(a - λ_k b) x`.
fn top_pair_image(f: &Fresco, x: &Element) -> Element {
    let k = f.rank();
    let y = f.a_minus(f.lambda_at(k), x);
    f.a_minus(f.lambda_at(k - 1), &y)
}

fn check_beta_domain(f: &Fresco) -> Result<()> {
    let k = f.rank();
    if k < 2 {
        return Err(Error::PreconditionFailed("beta needs rank >= 2".into()));
    }
    if k == 2 {
        return Ok(());
    }
    for (i, j) in [(1, k - 1), (2, k)] {
        let level = stratum_level(&f.window(i, j))?.level;
        if level < k - 1 {
            return Err(Error::PreconditionFailed(format!(
                "window ({}, {}) is not semi-simple (stratum level {} of {})",
                i,
                j,
                level,
                k - 1
            )));
        }
    }
    Ok(())
}

pub fn beta(f: &Fresco) -> Result<Rational> {
    check_beta_domain(f)?;
    beta_unchecked(f)
}

/// β assuming both maximal proper windows are already known semi-simple.
fn beta_unchecked(f: &Fresco) -> Result<Rational> {
    if f.rank() == 2 {
        return alpha(f);
    }
    let e = adjusted_generator(f)?;
    beta_from_generator(f, &e)
}

/// The rank `k-1` fresco generated by `(a - (λ_{k-1} - 1) b) e`, for a
/// generator `e` whose image under the top pair lies in `F_{k-2}`.
pub fn reduced_fresco(f: &Fresco, e: &Element) -> Result<Fresco> {
    let k = f.rank();
    let h = top_pair_image(f, e);
    if !(h.coord(k).is_zero() && h.coord(k - 1).is_zero()) {
        return Err(Error::PreconditionFailed("generator does not reach F_{k-2}".into()));
    }
    let bottom = f.window(1, k - 2);
    let (mut units, top) = bottom.annihilator_presentation(&h.head(k - 2))?;
    units.push(top);
    let mut lambda: Vec<Rational> = f.lambda()[..k - 2].to_vec();
    lambda.push(f.lambda_at(k) + int(1));
    let order = units.iter().map(PowerSeries::order).min().unwrap();
    Fresco::new(lambda, units, order)
}

fn beta_from_generator(f: &Fresco, e: &Element) -> Result<Rational> {
    let g = reduced_fresco(f, e)?;
    check_beta_domain(&g)?;
    beta_unchecked(&g)
}

/// β computed through `ε(τ) = e' + τ b^{p_{k-1}-1} (a - λ_k b) e'`, where
/// `e'` is the adjusted generator.
pub fn beta_at_tau(f: &Fresco, tau: &Rational) -> Result<Rational> {
    check_beta_domain(f)?;
    let k = f.rank();
    if k == 2 {
        return alpha(f);
    }
    let e = adjusted_generator(f)?;
    let p = as_nonneg_int(&f.steps()[k - 2])
        .filter(|p| *p >= 1)
        .ok_or_else(|| Error::PreconditionFailed("top step must be a positive integer".into()))?;
    let lower = f.a_minus(f.lambda_at(k), &e);
    let eps = e.add(&lower.shift(p - 1).scale(tau));
    beta_from_generator(f, &eps)
}

fn rank3_data(f: &Fresco) -> Result<(usize, usize, &PowerSeries, &PowerSeries)> {
    require_rank(f, 3, "rank-3 formula")?;
    let steps = f.integer_steps().unwrap_or_default();
    let (p1, p2) = match steps.as_slice() {
        [p1, p2] if *p1 >= 1 && *p2 >= 1 => (*p1, *p2),
        _ => return Err(Error::PreconditionFailed("steps p1, p2 must be positive integers".into())),
    };
    let (s1, s2) = (f.connection(1), f.connection(2));
    if !s1.coeff(p1)?.is_zero() || !s2.coeff(p2)?.is_zero() {
        return Err(Error::PreconditionFailed("need s1_{p1} = s2_{p2} = 0".into()));
    }
    Ok((p1, p2, s1, s2))
}

/// `p_2 Σ_{j ≠ p_2} s1_{p1+p2-j} s2_j / (p_2 - j)`.
pub fn beta_rank3_closed(f: &Fresco) -> Result<Rational> {
    let (p1, p2, s1, s2) = rank3_data(f)?;
    let total = p1 + p2;
    let mut acc = Rational::zero();
    for j in (0..=total).filter(|&j| j != p2) {
        let term = s1.coeff(total - j)? * s2.coeff(j)?;
        if !term.is_zero() {
            acc += term / (int(p2 as i64) - int(j as i64));
        }
    }
    Ok(acc * int(p2 as i64))
}

/// Coefficient of `b^{p1+p2}` in `V S_1` where `b V' = p_2 (V - S_2)`.
pub fn beta_rank3_ode(f: &Fresco) -> Result<Rational> {
    let (p1, p2, s1, s2) = rank3_data(f)?;
    let m = int(p2 as i64);
    let sol = euler_solve(&m, &s2.scale(&-m.clone()));
    let v = sol
        .particular
        .ok_or_else(|| Error::PreconditionFailed("unexpected obstruction".into()))?;
    Ok((&v * s1).coeff(p1 + p2)?.clone())
}

pub fn p_total(f: &Fresco) -> Result<Rational> {
    let steps = f.steps();
    if steps.iter().any(|p| !(p.is_integer() && p.is_positive())) {
        return Err(Error::PreconditionFailed("all steps p_j must be positive integers".into()));
    }
    Ok(steps.iter().fold(Rational::zero(), |acc, p| acc + p))
}

pub fn rank2_subtheme_class(f: &Fresco) -> Result<Rank2Class> {
    let b = beta(f)?;
    if b.is_zero() {
        return Err(Error::BetaVanishes);
    }
    let k = f.rank();
    Ok(Rank2Class::new(
        f.lambda_at(1).clone(),
        f.lambda_at(k) + int(k as i64 - 2),
        b,
    ))
}

/// `(-1)^k [p_1 (p_1+p_2) ...] / [p_{k-1} (p_{k-2}+p_{k-1}) ...] β`.
pub fn beta_star(f: &Fresco) -> Result<Rational> {
    let b = beta(f)?;
    if b.is_zero() {
        return Ok(b);
    }
    p_total(f)?;
    let k = f.rank();
    let steps = f.steps();
    let mut factor = if k % 2 == 0 { int(1) } else { int(-1) };
    for i in 1..=k.saturating_sub(2) {
        let head: Rational = steps[..i].iter().fold(Rational::zero(), |a, p| a + p);
        let tail: Rational = steps[k - 1 - i..].iter().fold(Rational::zero(), |a, p| a + p);
        factor = factor * head / tail;
    }
    Ok(factor * b)
}

pub fn stratum_level(f: &Fresco) -> Result<StratumReport> {
    let k = f.rank();
    for h in 2..=k {
        let mut failing = Vec::new();
        for i in 1..=k + 1 - h {
            let w = f.window(i, i + h - 1);
            let b = beta_unchecked(&w)?;
            if !b.is_zero() {
                failing.push(WindowBeta { start: i, end: i + h - 1, beta: b });
            }
        }
        if !failing.is_empty() {
            return Ok(StratumReport { level: h - 1, failing });
        }
    }
    Ok(StratumReport { level: k, failing: Vec::new() })
}

pub fn is_semisimple(f: &Fresco) -> Result<bool> {
    Ok(stratum_level(f)?.level == f.rank())
}

/// Rank-1 normal submodules `Ã x ≅ E_μ`, grouped by `μ`.
pub fn rank1_normal_submodules(f: &Fresco) -> Result<Vec<Rank1Family>> {
    let n = f.order();
    let candidates: BTreeSet<Rational> = f
        .lambda()
        .iter()
        .flat_map(|l| (0..n).map(move |q| l + int(q as i64)))
        .collect();
    let mut out = Vec::new();
    for mu in candidates {
        if let Some(family) = eigen_family(f, &mu)? {
            out.push(family);
        }
    }
    Ok(out)
}

/// Solves `(a - μ b) x = 0` top-down. Every homogeneous direction becomes a
/// parameter; divisibility and resonance conditions become linear
/// constraints on those parameters.
fn eigen_family(f: &Fresco, mu: &Rational) -> Result<Option<Rank1Family>> {
    let k = f.rank();
    let n = f.order();
    let mut params: Vec<Vec<PowerSeries>> = Vec::new();
    // constraint rows, indexed by parameter; padded with zeros later
    let mut rows: Vec<Vec<Rational>> = Vec::new();
    let mut unchecked: Option<usize> = None;
    for j in (0..k).rev() {
        let m = mu - f.lambda_at(j + 1);
        let resonance = as_nonneg_int(&m);
        let mut level_order = n;
        if j + 1 < k {
            let s = f.connection(j + 1);
            let mut const_row = Vec::new();
            let mut obs_row = Vec::new();
            for p in params.iter_mut() {
                let prod = s * &p[j + 1];
                const_row.push(prod.constant_term());
                let rhs = -&prod.unshift(1);
                level_order = level_order.min(rhs.order());
                let (v, obs) = euler_particular(&m, &rhs);
                obs_row.push(obs.map(|o| o.1).unwrap_or_else(Rational::zero));
                p[j] = v;
            }
            rows.push(const_row);
            rows.push(obs_row);
        }
        if let Some(r) = resonance {
            if r < level_order {
                let mut coords = vec![PowerSeries::zero(level_order); k];
                coords[j] = PowerSeries::monomial(Rational::one(), r, level_order);
                params.push(coords);
            } else {
                unchecked = Some(unchecked.map_or(r, |u: usize| u.max(r)) + (k - j));
            }
        }
    }
    if params.is_empty() {
        return Ok(None);
    }
    let np = params.len();
    for row in rows.iter_mut() {
        row.resize(np, Rational::zero());
    }
    let basis: Vec<Element> = linalg::kernel(&rows, np)
        .into_iter()
        .map(|w| combine(&params, &w))
        .collect();
    let Some(pos) = basis.iter().position(Element::has_unit_coordinate) else {
        return Ok(None);
    };
    if let Some(needed) = unchecked {
        return Err(Error::InsufficientPrecision { needed, available: n });
    }
    let mut directions = basis;
    let particular = directions.remove(pos);
    Ok(Some(Rank1Family { mu: mu.clone(), particular, directions }))
}

fn combine(params: &[Vec<PowerSeries>], w: &[Rational]) -> Element {
    let k = params[0].len();
    let order = params.iter().flat_map(|p| p.iter().map(PowerSeries::order)).min().unwrap();
    let mut coords = vec![PowerSeries::zero(order); k];
    for (p, c) in params.iter().zip(w) {
        if c.is_zero() {
            continue;
        }
        for j in 0..k {
            coords[j] = &coords[j] + &p[j].scale(c);
        }
    }
    Element::new(coords)
}
