//! Transforms that pass through an explicit matrix form of the module:
//! twisted duality and changes of variable, followed by canonicalization
//! back to a principal presentation.

use num_traits::{One, Zero};

use crate::ab_algebra::AbElement;
use crate::error::{Error, Result};
use crate::fresco_core::{qorder_compare, Fresco};
use crate::linalg;
use crate::poly::rational_roots;
use crate::series::{int, PowerSeries, Rational};

/// `a` acting as `M(b) + b^2 d/db` on coordinate columns.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MatrixModule {
    /// `m[i][j]` is the coefficient of `e_i` in `a e_j`.
    m: Vec<Vec<PowerSeries>>,
}

impl MatrixModule {
    pub fn new(m: Vec<Vec<PowerSeries>>) -> Self {
        assert!(m.iter().all(|row| row.len() == m.len()), "matrix must be square");
        MatrixModule { m }
    }

    pub fn rank(&self) -> usize {
        self.m.len()
    }

    pub fn order(&self) -> usize {
        self.m.iter().flatten().map(PowerSeries::order).min().unwrap_or(0)
    }

    pub fn entry(&self, i: usize, j: usize) -> &PowerSeries {
        &self.m[i][j]
    }

    pub fn rows(&self) -> &[Vec<PowerSeries>] {
        &self.m
    }

    pub fn apply_a(&self, u: &[PowerSeries]) -> Vec<PowerSeries> {
        (0..self.rank())
            .map(|i| {
                let mut acc = u[i].b2_derivative();
                for (j, uj) in u.iter().enumerate() {
                    if !self.m[i][j].is_zero() && !uj.is_zero() {
                        acc = &acc + &(&self.m[i][j] * uj);
                    } else {
                        acc = acc.truncate(self.m[i][j].order().min(uj.order()));
                    }
                }
                acc
            })
            .collect()
    }

    fn constant_matrix(&self) -> Vec<Vec<Rational>> {
        self.m.iter().map(|row| row.iter().map(|s| s.constant_term()).collect()).collect()
    }
}

pub fn matrix_presentation(f: &Fresco) -> MatrixModule {
    let k = f.rank();
    let n = f.order();
    let mut m = vec![vec![PowerSeries::zero(n); k]; k];
    for j in 0..k {
        m[j][j] = PowerSeries::monomial(f.lambda_at(j + 1).clone(), 1, n);
        if j + 1 < k {
            m[j][j + 1] = f.connection(j + 1).clone();
        }
    }
    MatrixModule { m }
}

fn mat_mul(x: &[Vec<Rational>], y: &[Vec<Rational>]) -> Vec<Vec<Rational>> {
    let n = x.len();
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| (0..n).fold(Rational::zero(), |acc, l| acc + &x[i][l] * &y[l][j]))
                .collect()
        })
        .collect()
}

fn transpose<T: Clone>(x: &[Vec<T>]) -> Vec<Vec<T>> {
    let n = x.len();
    (0..n).map(|i| (0..n).map(|j| x[j][i].clone()).collect()).collect()
}

/// Index of a basis vector whose image spans `E / (aE + bE)`.
fn find_generator(m: &MatrixModule) -> Result<usize> {
    let k = m.rank();
    let m0 = m.constant_matrix();
    let mut power = m0.clone();
    for _ in 1..k {
        power = mat_mul(&power, &m0);
    }
    if power.iter().flatten().any(|c| !c.is_zero()) {
        return Err(Error::NotMonogenic("a is not nilpotent modulo b".into()));
    }
    let columns = transpose(&m0);
    if linalg::rank(&columns, k) != k - 1 {
        return Err(Error::NotMonogenic("E/(aE+bE) is not one-dimensional".into()));
    }
    (0..k)
        .find(|&i| {
            let mut vs = columns.clone();
            let mut e = vec![Rational::zero(); k];
            e[i] = Rational::one();
            vs.push(e);
            linalg::rank(&vs, k) == k
        })
        .ok_or_else(|| Error::NotMonogenic("no basis vector generates".into()))
}

/// Orders lost by [`canonicalize`] on a rank `k` module: peeling a factor
/// from an annihilator of degree `d` costs `d` orders.
pub fn canonicalization_loss(k: usize) -> usize {
    k * (k + 1) / 2
}

/// Principal presentation of a monogenic geometric module given by a matrix.
pub fn canonicalize(m: &MatrixModule) -> Result<Fresco> {
    let k = m.rank();
    let n = m.order();
    let g = find_generator(m)?;
    let mut vectors = Vec::with_capacity(k + 1);
    let mut cur: Vec<PowerSeries> =
        (0..k).map(|i| if i == g { PowerSeries::one(n) } else { PowerSeries::zero(n) }).collect();
    vectors.push(cur.clone());
    for _ in 0..k {
        cur = m.apply_a(&cur);
        vectors.push(cur.clone());
    }
    let system: Vec<Vec<PowerSeries>> =
        (0..k).map(|i| (0..k).map(|j| vectors[j][i].clone()).collect()).collect();
    let rhs: Vec<PowerSeries> = vectors[k].iter().map(|s| -s).collect();
    let mut terms = linalg::solve_series(&system, &rhs)?;
    terms.push(PowerSeries::one(n));
    let mut q = AbElement::from_terms(terms);

    let chi = q.indicial_polynomial()?;
    let roots = rational_roots(&chi)
        .filter(|r| r.len() == k)
        .ok_or_else(|| Error::NotGeometric("Bernstein polynomial does not split over Q".into()))?;
    if let Some(r) = roots.iter().find(|r| **r <= Rational::zero()) {
        return Err(Error::NotGeometric(format!("Bernstein root {} is not negative", -r)));
    }
    let mut values: Vec<Rational> = roots.iter().map(|r| r + int(k as i64)).collect();
    values.sort_by(qorder_compare);
    let lambda: Vec<Rational> =
        values.iter().enumerate().map(|(j, v)| v - int(j as i64 + 1)).collect();

    let mut conn = vec![PowerSeries::zero(0); k - 1];
    for j in (1..=k).rev() {
        let (s, rest) = q.right_factor_extract(&lambda[j - 1])?;
        if j < k {
            conn[j - 1] = s;
        }
        q = rest;
    }
    if q.degree() != 0 {
        return Err(Error::NotMonogenic("annihilator did not factor completely".into()));
    }
    let order = conn.iter().map(PowerSeries::order).min().unwrap_or(n).min(n);
    Fresco::new(lambda, conn, order)
}

/// `E* ⊗ E_δ`.
pub fn dual_twist(f: &Fresco, delta: &Rational) -> Result<Fresco> {
    let k = f.rank();
    let expected: Vec<Rational> = (1..=k).map(|j| delta - f.lambda_at(k + 1 - j)).collect();
    for (j, mu) in expected.iter().enumerate() {
        if mu + int(j as i64 + 1) <= int(k as i64) {
            return Err(Error::NotGeometric(format!(
                "twist δ = {} too small: dual invariant {} at position {} breaks λ_j + j > k",
                delta,
                mu,
                j + 1
            )));
        }
    }
    let m = matrix_presentation(f);
    let n = m.order();
    let dual: Vec<Vec<PowerSeries>> = (0..k)
        .map(|i| {
            (0..k)
                .map(|j| {
                    let mut s = -m.entry(j, i);
                    if i == j {
                        s = &s + &PowerSeries::monomial(delta.clone(), 1, n);
                    }
                    s
                })
                .collect()
        })
        .collect();
    let out = canonicalize(&MatrixModule::new(dual))?;
    let mut want: Vec<Rational> =
        expected.iter().enumerate().map(|(j, mu)| mu + int(j as i64 + 1)).collect();
    let mut got: Vec<Rational> =
        out.lambda().iter().enumerate().map(|(j, l)| l + int(j as i64 + 1)).collect();
    want.sort();
    got.sort();
    if want != got {
        return Err(Error::InvariantMismatch(format!(
            "dual Bernstein data {:?} differs from expected {:?}",
            got, want
        )));
    }
    Ok(out)
}

/// A change of variable `θ(a) = Σ_{n≥1} θ_n a^n` with `θ_1 ≠ 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChangeOfVariable {
    coeffs: Vec<Rational>,
}

impl ChangeOfVariable {
    /// `coeffs[n]` multiplies `a^n`; `coeffs[0]` must vanish.
    pub fn new(mut coeffs: Vec<Rational>) -> Result<Self> {
        while coeffs.len() > 2 && coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        if coeffs.len() < 2 || !coeffs[0].is_zero() || coeffs[1].is_zero() {
            return Err(Error::PreconditionFailed(
                "change of variable needs zero constant term and nonzero linear term".into(),
            ));
        }
        Ok(ChangeOfVariable { coeffs })
    }

    pub fn linear(c: Rational) -> Result<Self> {
        Self::new(vec![Rational::zero(), c])
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    /// `θ'(0)`.
    pub fn chi(&self) -> &Rational {
        &self.coeffs[1]
    }

    fn is_linear(&self) -> bool {
        self.coeffs.len() == 2
    }

    /// Compositional inverse, to `a^{len-1}`.
    fn inverse(&self, len: usize) -> PowerSeries {
        let theta = PowerSeries::from_sparse(self.coeffs.iter().cloned().enumerate(), len);
        let x = PowerSeries::monomial(Rational::one(), 1, len);
        let mut eta = PowerSeries::monomial(self.chi().recip(), 1, len);
        let dtheta = theta.derivative();
        let mut correct = 2;
        while correct < len {
            let residual = &compose(&theta, &eta) - &x;
            let slope = compose(&dtheta, &eta);
            let step = &residual * &slope.invert().expect("θ'(0) ≠ 0");
            eta = (&eta - &step).truncate(len);
            correct *= 2;
        }
        eta
    }
}

/// `outer(inner(a))` for `inner` without constant term, truncated to
/// `inner.order()`.
fn compose(outer: &PowerSeries, inner: &PowerSeries) -> PowerSeries {
    let len = inner.order();
    let mut acc = PowerSeries::zero(len);
    for c in outer.coeffs().iter().rev() {
        acc = &(&acc * inner) + &PowerSeries::constant(c.clone(), len);
    }
    acc
}

/// Applies `Σ ψ_n a^n`; the sum stops once `a^n x` vanishes to the order.
fn apply_series_in_a(
    m: &MatrixModule,
    psi: &PowerSeries,
    x: &[PowerSeries],
    order: usize,
) -> Result<Vec<PowerSeries>> {
    let mut cur: Vec<PowerSeries> = x.iter().map(|u| u.truncate(order)).collect();
    let mut acc: Vec<PowerSeries> = cur.iter().map(|u| u.scale(&psi.constant_term())).collect();
    for n in 1.. {
        cur = m.apply_a(&cur).into_iter().map(|u| u.truncate(order)).collect();
        if cur.iter().all(PowerSeries::is_zero) {
            return Ok(acc);
        }
        if n >= psi.order() {
            return Err(Error::NonConvergent);
        }
        let c = &psi.coeffs()[n];
        if !c.is_zero() {
            acc = acc.iter().zip(&cur).map(|(s, u)| s + &u.scale(c)).collect();
        }
    }
    unreachable!()
}

/// Pushes the module along `θ`: the annihilator `P(a, b)` becomes
/// `P(θ(a), b θ'(a))`. On the module this means letting `η = θ^{-1}` act:
/// the new `a` is `η(a)` and the new `b` is `b η'(a)`.
pub fn change_variable(f: &Fresco, theta: &ChangeOfVariable) -> Result<Fresco> {
    let m = matrix_presentation(f);
    let k = m.rank();
    let n = m.order();
    if theta.is_linear() {
        let c = theta.chi();
        let inv = c.recip();
        let scaled = m
            .rows()
            .iter()
            .map(|row| row.iter().map(|s| s.rescale_variable(c).scale(&inv)).collect())
            .collect();
        return canonicalize(&MatrixModule::new(scaled));
    }
    // a^{kN} vanishes modulo b^N on a fresco
    let depth = k * n + k + 1;
    let eta = theta.inverse(depth + 1);
    let deta = eta.derivative();
    let b_new = |x: &[PowerSeries]| -> Result<Vec<PowerSeries>> {
        Ok(apply_series_in_a(&m, &deta, x, n)?
            .into_iter()
            .map(|u| u.shift(1).truncate(n))
            .collect())
    };
    let basis_vec = |j: usize| -> Vec<PowerSeries> {
        (0..k).map(|i| if i == j { PowerSeries::one(n) } else { PowerSeries::zero(n) }).collect()
    };
    // powers[p][j] = b_new^p e_j
    let mut powers: Vec<Vec<Vec<PowerSeries>>> = vec![(0..k).map(basis_vec).collect()];
    for p in 1..n {
        let next = powers[p - 1].iter().map(|v| b_new(v)).collect::<Result<Vec<_>>>()?;
        powers.push(next);
    }
    let mut new_m = vec![vec![vec![Rational::zero(); n]; k]; k];
    for i in 0..k {
        let mut target = apply_series_in_a(&m, &eta, &basis_vec(i), n)?;
        for (p, layer) in powers.iter().enumerate() {
            let lead: Vec<Vec<Rational>> = (0..k)
                .map(|row| (0..k).map(|j| layer[j][row].coeffs()[p].clone()).collect())
                .collect();
            let r: Vec<Rational> = target.iter().map(|u| u.coeffs()[p].clone()).collect();
            let c = linalg::solve(&lead, &r)
                .ok_or_else(|| Error::NotMonogenic("new b does not act with full rank".into()))?;
            for (j, cj) in c.iter().enumerate() {
                if cj.is_zero() {
                    continue;
                }
                new_m[j][i][p] = cj.clone();
                target = target.iter().zip(&layer[j]).map(|(t, w)| t - &w.scale(cj)).collect();
            }
        }
    }
    let rows = new_m
        .into_iter()
        .map(|row| row.into_iter().map(PowerSeries::from_coeffs).collect())
        .collect::<Vec<Vec<PowerSeries>>>();
    canonicalize(&MatrixModule::new(rows))
}
