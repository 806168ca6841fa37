//! The principal presentation of a fresco and its basic operations.
//!
//! A fresco of rank `k` is stored as invariants `λ_1..λ_k` and unit
//! connections `S_1..S_{k-1}`. In the basis `e_1..e_k` the action is
//! `a e_j = λ_j b e_j + S_{j-1} e_{j-1}`, with `e_k` the canonical generator.

use std::cmp::Ordering;
use std::fmt;

use num_traits::{One, ToPrimitive, Zero};

use crate::ab_algebra::AbElement;
use crate::error::{Error, Result};
use crate::series::{as_nonneg_int, int, PowerSeries, Rational};

/// A rational modulo `ℤ`, represented in `(0, 1]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct InvariantClass(Rational);

impl InvariantClass {
    pub fn of(x: &Rational) -> Self {
        let floor = x.floor();
        let frac = x - floor;
        InvariantClass(if frac.is_zero() { Rational::one() } else { frac })
    }

    pub fn representative(&self) -> &Rational {
        &self.0
    }
}

/// Classes first (by their representatives in `(0,1]`), then the usual order.
pub fn qorder_compare(x: &Rational, y: &Rational) -> Ordering {
    InvariantClass::of(x)
        .cmp(&InvariantClass::of(y))
        .then_with(|| x.cmp(y))
}

/// Sorts `μ_j + j` under [`qorder_compare`] (stably) and returns `sorted_j - j`.
pub fn principal_invariants(mu: &[Rational]) -> Vec<Rational> {
    let mut shifted: Vec<Rational> =
        mu.iter().enumerate().map(|(j, m)| m + int(j as i64 + 1)).collect();
    shifted.sort_by(qorder_compare);
    shifted
        .into_iter()
        .enumerate()
        .map(|(j, v)| v - int(j as i64 + 1))
        .collect()
}

/// Coordinates `U_1..U_k` in the principal basis.
#[derive(Clone, PartialEq, Eq)]
pub struct Element {
    coords: Vec<PowerSeries>,
}

impl fmt::Debug for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .coords
            .iter()
            .enumerate()
            .map(|(j, u)| format!("[{}]e{}", u, j + 1))
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl Element {
    pub fn new(coords: Vec<PowerSeries>) -> Self {
        Element { coords }
    }

    pub fn zero(rank: usize, order: usize) -> Self {
        Element { coords: vec![PowerSeries::zero(order); rank] }
    }

    /// The basis vector `e_j`, 1-based.
    pub fn basis(rank: usize, j: usize, order: usize) -> Self {
        let mut x = Self::zero(rank, order);
        x.coords[j - 1] = PowerSeries::one(order);
        x
    }

    pub fn rank(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[PowerSeries] {
        &self.coords
    }

    /// `U_j`, 1-based.
    pub fn coord(&self, j: usize) -> &PowerSeries {
        &self.coords[j - 1]
    }

    pub fn order(&self) -> usize {
        self.coords.iter().map(PowerSeries::order).min().unwrap_or(0)
    }

    pub fn add(&self, other: &Element) -> Element {
        Element { coords: self.coords.iter().zip(&other.coords).map(|(x, y)| x + y).collect() }
    }

    pub fn sub(&self, other: &Element) -> Element {
        Element { coords: self.coords.iter().zip(&other.coords).map(|(x, y)| x - y).collect() }
    }

    pub fn scale(&self, c: &Rational) -> Element {
        Element { coords: self.coords.iter().map(|u| u.scale(c)).collect() }
    }

    pub fn mul_series(&self, s: &PowerSeries) -> Element {
        Element { coords: self.coords.iter().map(|u| u * s).collect() }
    }

    pub fn shift(&self, k: usize) -> Element {
        Element { coords: self.coords.iter().map(|u| u.shift(k)).collect() }
    }

    pub fn truncate(&self, order: usize) -> Element {
        Element { coords: self.coords.iter().map(|u| u.truncate(order)).collect() }
    }

    /// The first `m` coordinates, i.e. the element read in `F_m`.
    pub fn head(&self, m: usize) -> Element {
        Element { coords: self.coords[..m].to_vec() }
    }

    /// Coordinates `i..=j` (1-based).
    pub fn slice(&self, i: usize, j: usize) -> Element {
        Element { coords: self.coords[i - 1..j].to_vec() }
    }

    pub fn agrees_with(&self, other: &Element) -> bool {
        self.rank() == other.rank()
            && self.coords.iter().zip(&other.coords).all(|(x, y)| x.agrees_with(y))
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(PowerSeries::is_zero)
    }

    /// True if some coordinate has a nonzero constant term.
    pub fn has_unit_coordinate(&self) -> bool {
        self.coords.iter().any(|u| !u.constant_term().is_zero())
    }
}

#[derive(Clone, PartialEq, Eq)]
pub struct Fresco {
    lambda: Vec<Rational>,
    conn: Vec<PowerSeries>,
    order: usize,
}

impl fmt::Debug for Fresco {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let l: Vec<String> = self.lambda.iter().map(|x| x.to_string()).collect();
        write!(f, "Fresco(λ = ({}), S = {:?}, N = {})", l.join(", "), self.conn, self.order)
    }
}

/// `2 Σ max(p_j, 1) + 2k + 8`, with non-integral steps rounded up.
pub fn default_order(lambda: &[Rational]) -> usize {
    let k = lambda.len();
    let steps: usize = lambda
        .windows(2)
        .map(|w| {
            let p = &w[1] - &w[0] + int(1);
            let p = if p < int(1) { int(1) } else { p };
            p.ceil().to_integer().to_usize().unwrap_or(usize::MAX / 8)
        })
        .sum();
    2 * steps + 2 * k + 8
}

impl Fresco {
    /// Validates and builds a principal presentation. Connections are cut to
    /// `order`; the working order is the smallest order among them.
    pub fn new(lambda: Vec<Rational>, conn: Vec<PowerSeries>, order: usize) -> Result<Self> {
        let k = lambda.len();
        if k == 0 {
            return Err(Error::InvalidPresentation("rank must be at least 1".into()));
        }
        if conn.len() != k - 1 {
            return Err(Error::InvalidPresentation(format!(
                "rank {} needs {} connection series, got {}",
                k,
                k - 1,
                conn.len()
            )));
        }
        for (j, l) in lambda.iter().enumerate() {
            if l + int(j as i64 + 1) <= int(k as i64) {
                return Err(Error::NotGeometric(format!(
                    "geometric condition λ_j + j > k fails at j = {}: λ_{} = {}, k = {}",
                    j + 1,
                    j + 1,
                    l,
                    k
                )));
            }
        }
        for j in 1..k {
            let prev = &lambda[j - 1] + int(j as i64);
            let next = &lambda[j] + int(j as i64 + 1);
            if qorder_compare(&prev, &next) == Ordering::Greater {
                return Err(Error::InvalidPresentation(format!(
                    "not principal: λ_j + j must increase, but λ_{} + {} = {} comes after λ_{} + {} = {}",
                    j,
                    j,
                    prev,
                    j + 1,
                    j + 1,
                    next
                )));
            }
        }
        let conn: Vec<PowerSeries> = conn.into_iter().map(|s| s.truncate(order)).collect();
        for (j, s) in conn.iter().enumerate() {
            if s.order() == 0 || !s.constant_term().is_one() {
                return Err(Error::InvalidPresentation(format!(
                    "connection S_{} must have constant term 1",
                    j + 1
                )));
            }
        }
        let order = conn.iter().map(PowerSeries::order).min().unwrap_or(order).min(order);
        Ok(Fresco { lambda, conn, order })
    }

    /// The presentation with every connection equal to `1`.
    pub fn trivial(lambda: Vec<Rational>, order: usize) -> Result<Self> {
        let k = lambda.len();
        Self::new(lambda, vec![PowerSeries::one(order); k.saturating_sub(1)], order)
    }

    pub fn rank(&self) -> usize {
        self.lambda.len()
    }

    pub fn lambda(&self) -> &[Rational] {
        &self.lambda
    }

    /// `λ_j`, 1-based.
    pub fn lambda_at(&self, j: usize) -> &Rational {
        &self.lambda[j - 1]
    }

    pub fn connections(&self) -> &[PowerSeries] {
        &self.conn
    }

    /// `S_j`, 1-based.
    pub fn connection(&self, j: usize) -> &PowerSeries {
        &self.conn[j - 1]
    }

    pub fn order(&self) -> usize {
        self.order
    }

    /// `p_j = λ_{j+1} - λ_j + 1` for `j = 1..k-1`.
    pub fn steps(&self) -> Vec<Rational> {
        self.lambda.windows(2).map(|w| &w[1] - &w[0] + int(1)).collect()
    }

    pub fn with_order(&self, order: usize) -> Result<Self> {
        Self::new(self.lambda.clone(), self.conn.clone(), order)
    }

    /// Raises the working order by zero-extending the connections; only
    /// meaningful when they are exact polynomials.
    pub fn padded(&self, order: usize) -> Self {
        let conn = self.conn.iter().map(|s| s.padded(order)).collect();
        Fresco { lambda: self.lambda.clone(), conn, order: order.max(self.order) }
    }

    pub fn generator(&self) -> Element {
        Element::basis(self.rank(), self.rank(), self.order)
    }

    /// Component `j` of `a x` is `b^2 U_j' + λ_j b U_j + S_j U_{j+1}`.
    pub fn a_action(&self, x: &Element) -> Element {
        let k = self.rank();
        let coords = (0..k)
            .map(|j| {
                let u = &x.coords[j];
                let mut out = &u.b2_derivative() + &u.shift(1).scale(&self.lambda[j]);
                if j + 1 < k {
                    out = &out + &(&self.conn[j] * &x.coords[j + 1]);
                }
                out
            })
            .collect();
        Element { coords }
    }

    /// `(a - c b) x`.
    pub fn a_minus(&self, c: &Rational, x: &Element) -> Element {
        self.a_action(x).sub(&x.shift(1).scale(c))
    }

    pub fn is_generator(&self, x: &Element) -> bool {
        !x.coords[self.rank() - 1].constant_term().is_zero()
    }

    /// Units `(T_1..T_{k-1}, T_k)` presenting `Ã x` as
    /// `Ã / Ã (a-λ_1 b) T_1^{-1} ... (a-λ_k b) T_k^{-1}`.
    pub fn annihilator_presentation(&self, x: &Element) -> Result<(Vec<PowerSeries>, PowerSeries)> {
        if !self.is_generator(x) {
            return Err(Error::NotAGenerator);
        }
        let k = self.rank();
        let c = x.coords[k - 1].constant_term();
        let mut cur = x.scale(&c.recip());
        let mut units = Vec::with_capacity(k);
        for level in (1..=k).rev() {
            let window = self.window(1, level);
            let top = cur.coords[level - 1].clone();
            let top_c = top.constant_term();
            if top_c.is_zero() {
                return Err(Error::NotAGenerator);
            }
            let t = top.scale(&top_c.recip());
            units.push(t.clone());
            if level == 1 {
                break;
            }
            let y = cur.scale(&top_c.recip()).mul_series(&t.invert()?);
            let next = window.a_minus(&self.lambda[level - 1], &y);
            cur = next.head(level - 1);
        }
        units.reverse();
        let top = units.pop().unwrap();
        Ok((units, top))
    }

    /// The fresco re-presented through the generator `x`.
    pub fn represent_at(&self, x: &Element) -> Result<Fresco> {
        let (units, _) = self.annihilator_presentation(x)?;
        Fresco::new(self.lambda.clone(), units, self.order)
    }

    /// The sub-quotient `F_j / F_{i-1}` of the principal flag (1-based,
    /// inclusive).
    pub fn window(&self, i: usize, j: usize) -> Fresco {
        assert!(1 <= i && i <= j && j <= self.rank(), "window bounds");
        let lambda = self.lambda[i - 1..j].to_vec();
        let conn = self.conn[i - 1..j - 1].to_vec();
        let order = conn.iter().map(PowerSeries::order).min().unwrap_or(self.order).min(self.order);
        Fresco { lambda, conn, order }
    }

    /// `(a - λ_1 b) ... (a - λ_k b)` in normal form.
    pub fn bernstein_element(&self) -> AbElement {
        let n = self.order;
        self.lambda
            .iter()
            .map(|l| AbElement::a_minus_lambda_b(l, n))
            .reduce(|acc, f| &acc * &f)
            .unwrap()
    }

    /// `-(λ_j + j - k)` for each `j`.
    pub fn bernstein_roots(&self) -> Vec<Rational> {
        let k = self.rank() as i64;
        self.lambda
            .iter()
            .enumerate()
            .map(|(j, l)| -(l + int(j as i64 + 1) - int(k)))
            .collect()
    }

    pub fn mu(&self) -> Rational {
        self.lambda.iter().fold(Rational::zero(), |acc, l| acc + l)
    }

    /// `E ⊗ E_δ`: every invariant shifted by `δ`.
    pub fn shift_tensor(&self, delta: &Rational) -> Result<Fresco> {
        Fresco::new(
            self.lambda.iter().map(|l| l + delta).collect(),
            self.conn.clone(),
            self.order,
        )
    }

    pub fn primitive_blocks(&self) -> Vec<(InvariantClass, Vec<usize>)> {
        primitive_blocks(&self.lambda)
    }

    pub fn is_primitive(&self) -> bool {
        self.primitive_blocks().len() == 1
    }

    /// Steps `p_j` as non-negative integers, when they all are.
    pub fn integer_steps(&self) -> Option<Vec<usize>> {
        self.steps().iter().map(as_nonneg_int).collect()
    }
}

/// Maximal runs of consecutive indices (1-based) sharing an invariant class.
pub fn primitive_blocks(lambda: &[Rational]) -> Vec<(InvariantClass, Vec<usize>)> {
    let mut blocks: Vec<(InvariantClass, Vec<usize>)> = Vec::new();
    for (j, l) in lambda.iter().enumerate() {
        let class = InvariantClass::of(l);
        match blocks.last_mut() {
            Some((c, idx)) if *c == class => idx.push(j + 1),
            _ => blocks.push((class, vec![j + 1])),
        }
    }
    blocks
}

/// Multiset normal form for comparing roots.
pub fn sorted(mut xs: Vec<Rational>) -> Vec<Rational> {
    xs.sort();
    xs
}
