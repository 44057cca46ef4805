//! Compactly supported polynomial approximations of the Dirac delta.
//!
//! `P^{m,k}` has unit mass on [-1, 1], `m` vanishing moments and vanishing
//! derivatives of order `0..=k` at both endpoints. It is stored in the
//! factored form `(1 - x^2)^(k+1) q(x)` with `deg q = m`, so the endpoint
//! conditions hold identically and only the moment conditions are solved for.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::reference::{legendre_and_derivative, lgl_nodes_weights};

/// Moment systems with a condition estimate above this are rejected.
pub const MAX_CONDITION: f64 = 1e12;

#[derive(Debug, Clone)]
pub struct DeltaKernel {
    m: usize,
    k: usize,
    /// Monomial coefficients of the moment factor `q`, lowest degree first.
    q: Vec<f64>,
    /// Legendre coefficients of the full polynomial, degree `m + 2k + 2`.
    legendre: Vec<f64>,
    epsilon: f64,
}

impl DeltaKernel {
    /// Solves for `P^{m,k}`. The support half-width starts at 1.
    pub fn build(m: usize, k: usize) -> Result<Self> {
        if m == 0 {
            return Err(Error::config("delta kernel needs at least one vanishing moment (m >= 1)"));
        }
        let n = m + 1;
        let p = k + 1;
        let mut mat = DMatrix::zeros(n, n);
        for i in 0..n {
            for l in 0..n {
                mat[(i, l)] = weighted_moment(i + l, p);
            }
        }
        let sv = mat.singular_values();
        let condition = sv.max() / sv.min();
        if !condition.is_finite() || condition > MAX_CONDITION {
            return Err(Error::IllConditionedKernel { m, k, condition });
        }
        let mut rhs = DVector::zeros(n);
        rhs[0] = 1.0;
        let q = mat
            .lu()
            .solve(&rhs)
            .ok_or(Error::IllConditionedKernel { m, k, condition: f64::INFINITY })?;
        let mut kernel = Self {
            m,
            k,
            q: q.iter().copied().collect(),
            legendre: Vec::new(),
            epsilon: 1.0,
        };
        kernel.legendre = kernel.project_legendre()?;
        Ok(kernel)
    }

    /// Sets the support half-width (reference-element units).
    pub fn with_epsilon(mut self, epsilon: f64) -> Result<Self> {
        validate_epsilon(epsilon)?;
        self.epsilon = epsilon;
        Ok(self)
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn degree(&self) -> usize {
        self.m + 2 * self.k + 2
    }

    /// Quadrature parameter `N* = 2(ceil(m/2) + k + 1)`; the filter integrals
    /// use the `N* + 1` point LGL rule.
    pub fn n_star(&self) -> usize {
        2 * (self.m.div_ceil(2) + self.k + 1)
    }

    pub fn moment_factor(&self) -> &[f64] {
        &self.q
    }

    pub fn legendre_coefficients(&self) -> &[f64] {
        &self.legendre
    }

    /// `P^{m,k}(x)`; zero outside [-1, 1].
    pub fn poly(&self, x: f64) -> f64 {
        if x.abs() > 1.0 {
            return 0.0;
        }
        (1.0 - x * x).powi(self.k as i32 + 1) * horner(&self.q, x)
    }

    /// `d^order/dx^order P^{m,k}` at `x`, by the Leibniz rule on the factors
    /// `(1 - x)^(k+1) (1 + x)^(k+1) q(x)`. Exact zeros at the endpoints for
    /// `order <= k`.
    pub fn poly_derivative(&self, order: usize, x: f64) -> f64 {
        let a = self.k + 1;
        let mut total = 0.0;
        for r1 in 0..=order.min(a) {
            for r2 in 0..=(order - r1).min(a) {
                let r3 = order - r1 - r2;
                if r3 > self.m {
                    continue;
                }
                let coeff = multinomial(order, r1, r2);
                let f1 = falling(a, r1) * (1.0 - x).powi((a - r1) as i32) * sign(r1);
                let f2 = falling(a, r2) * (1.0 + x).powi((a - r2) as i32);
                let f3 = horner_derivative(&self.q, r3, x);
                total += coeff * f1 * f2 * f3;
            }
        }
        total
    }

    /// Scaled delta sequence `(1/eps) P(x/eps)` for `|x| <= eps`, zero outside.
    pub fn delta(&self, x: f64) -> f64 {
        if x.abs() > self.epsilon {
            return 0.0;
        }
        self.poly(x / self.epsilon) / self.epsilon
    }

    fn project_legendre(&self) -> Result<Vec<f64>> {
        let degree = self.degree();
        // exact for integrands of degree <= 2 * degree
        let (x, w) = lgl_nodes_weights(degree + 1)?;
        let values: Vec<f64> = x.iter().map(|&xi| self.poly(xi)).collect();
        Ok((0..=degree)
            .map(|l| {
                let s: f64 = x
                    .iter()
                    .zip(&w)
                    .zip(&values)
                    .map(|((&xi, &wi), &pi)| wi * pi * legendre_and_derivative(l, xi).0)
                    .sum();
                0.5 * (2.0 * l as f64 + 1.0) * s
            })
            .collect())
    }
}

/// Support half-width `eps = cos(pi ((N - N_d) / 2) / N)`.
pub fn support_width(degree: usize, n_d: f64) -> Result<f64> {
    if degree == 0 {
        return Err(Error::config("support width needs N >= 1"));
    }
    let n = degree as f64;
    let eps = (std::f64::consts::PI * ((n - n_d) / 2.0) / n).cos();
    validate_epsilon(eps).map_err(|_| {
        Error::config(format!(
            "N = {degree}, N_d = {n_d} gives support width {eps:.6}, outside (0, 2]"
        ))
    })?;
    Ok(eps)
}

pub fn validate_epsilon(eps: f64) -> Result<()> {
    if eps.is_finite() && eps > 0.0 && eps <= 2.0 {
        Ok(())
    } else {
        Err(Error::config(format!("support width {eps} outside (0, 2]")))
    }
}

// int_{-1}^{1} x^e (1 - x^2)^p dx
fn weighted_moment(e: usize, p: usize) -> f64 {
    if e % 2 == 1 {
        return 0.0;
    }
    // I(0, p) = 2 * (2p)!! / (2p + 1)!!, I(s, p) = I(s - 1, p) (2s - 1) / (2s + 2p + 1)
    let mut v = 2.0;
    for j in 1..=p {
        v *= (2 * j) as f64 / (2 * j + 1) as f64;
    }
    for s in 1..=e / 2 {
        v *= (2 * s - 1) as f64 / (2 * s + 2 * p + 1) as f64;
    }
    v
}

fn horner(c: &[f64], x: f64) -> f64 {
    c.iter().rev().fold(0.0, |acc, &ci| acc * x + ci)
}

fn horner_derivative(c: &[f64], order: usize, x: f64) -> f64 {
    c.iter()
        .enumerate()
        .skip(order)
        .rev()
        .fold(0.0, |acc, (i, &ci)| acc * x + ci * falling(i, order))
}

fn falling(n: usize, r: usize) -> f64 {
    (0..r).map(|j| (n - j) as f64).product()
}

fn multinomial(n: usize, a: usize, b: usize) -> f64 {
    binomial(n, a) * binomial(n - a, b)
}

fn binomial(n: usize, r: usize) -> f64 {
    (0..r).fold(1.0, |acc, j| acc * (n - j) as f64 / (j + 1) as f64)
}

fn sign(r: usize) -> f64 {
    if r % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    // composite 5-point Gauss-Legendre; independent of the LGL code
    fn gauss_integrate(f: impl Fn(f64) -> f64, a: f64, b: f64, panels: usize) -> f64 {
        let x = [
            0.0,
            -0.538_469_310_105_683_1,
            0.538_469_310_105_683_1,
            -0.906_179_845_938_664,
            0.906_179_845_938_664,
        ];
        let w = [
            0.568_888_888_888_888_9,
            0.478_628_670_499_366_5,
            0.478_628_670_499_366_5,
            0.236_926_885_056_189_1,
            0.236_926_885_056_189_1,
        ];
        let h = (b - a) / panels as f64;
        (0..panels)
            .map(|p| {
                let c = a + (p as f64 + 0.5) * h;
                x.iter().zip(&w).map(|(xi, wi)| wi * f(c + 0.5 * h * xi)).sum::<f64>() * 0.5 * h
            })
            .sum()
    }

    #[test]
    fn m1_k6_unit_mass_and_first_moment() {
        let kern = DeltaKernel::build(1, 6).unwrap();
        assert_abs_diff_eq!(gauss_integrate(|x| kern.poly(x), -1.0, 1.0, 64), 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(gauss_integrate(|x| x * kern.poly(x), -1.0, 1.0, 64), 0.0, epsilon = 1e-12);
    }

    #[test]
    fn m3_k8_second_and_third_moments_vanish() {
        let kern = DeltaKernel::build(3, 8).unwrap();
        for i in 2..=3 {
            let v = gauss_integrate(|x| x.powi(i) * kern.poly(x), -1.0, 1.0, 64);
            assert_abs_diff_eq!(v, 0.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn m5_k8_endpoint_derivatives_vanish() {
        let kern = DeltaKernel::build(5, 8).unwrap();
        for order in 0..=8 {
            assert_abs_diff_eq!(kern.poly_derivative(order, 1.0), 0.0, epsilon = 1e-9);
            assert_abs_diff_eq!(kern.poly_derivative(order, -1.0), 0.0, epsilon = 1e-9);
        }
        // the (k+1)-th derivative is the first one allowed to be nonzero
        assert!(kern.poly_derivative(9, 1.0).abs() > 1.0);
    }

    #[test]
    fn derivative_matches_finite_difference() {
        let kern = DeltaKernel::build(3, 6).unwrap();
        let h = 1e-5;
        for &x in &[-0.7, -0.1, 0.3, 0.85] {
            let fd = (kern.poly(x + h) - kern.poly(x - h)) / (2.0 * h);
            assert_abs_diff_eq!(kern.poly_derivative(1, x), fd, epsilon = 1e-7);
            assert_abs_diff_eq!(kern.poly_derivative(0, x), kern.poly(x), epsilon = 1e-14);
        }
    }

    #[test]
    fn legendre_projection_is_even_and_reproduces_values() {
        let kern = DeltaKernel::build(5, 8).unwrap();
        let c = kern.legendre_coefficients();
        assert_eq!(c.len(), 24);
        assert_abs_diff_eq!(c[0], 0.5, epsilon = 1e-13);
        for l in (1..c.len()).step_by(2) {
            assert!(c[l].abs() < 1e-10, "odd coefficient {l} = {}", c[l]);
        }
        for &x in &[-0.9, -0.2, 0.0, 0.6] {
            let v: f64 = c.iter().enumerate().map(|(l, cl)| cl * legendre_and_derivative(l, x).0).sum();
            assert_abs_diff_eq!(v, kern.poly(x), epsilon = 1e-12);
        }
    }

    #[test]
    fn support_width_values() {
        assert_eq!(support_width(7, 7.0).unwrap(), 1.0);
        assert_abs_diff_eq!(support_width(7, 0.8).unwrap(), 0.178_556_894_798_636_7, epsilon = 1e-12);
        assert_abs_diff_eq!(support_width(7, 4.5).unwrap(), 0.846_724_199_228_284_1, epsilon = 1e-12);
        assert!(support_width(7, 7.0 + 14.0).is_err());
    }

    #[test]
    fn delta_support_mass_and_symmetry() {
        let kern = DeltaKernel::build(5, 8).unwrap().with_epsilon(0.6).unwrap();
        assert_eq!(kern.delta(0.9), 0.0);
        let mass = gauss_integrate(|x| kern.delta(x), -0.6, 0.6, 64);
        assert_abs_diff_eq!(mass, 1.0, epsilon = 1e-10);
        for i in 0..20 {
            let x = 0.03 * i as f64;
            assert_abs_diff_eq!(kern.delta(x), kern.delta(-x), epsilon = 1e-13);
        }
    }

    #[test]
    fn epsilon_validation() {
        let kern = DeltaKernel::build(1, 5).unwrap();
        assert!(kern.clone().with_epsilon(0.0).is_err());
        assert!(kern.clone().with_epsilon(2.5).is_err());
        assert!(kern.with_epsilon(2.0).is_ok());
        assert!(DeltaKernel::build(0, 3).is_err());
    }

    #[test]
    fn huge_moment_count_is_rejected() {
        match DeltaKernel::build(40, 2) {
            Err(Error::IllConditionedKernel { condition, .. }) => assert!(condition > MAX_CONDITION),
            other => panic!("expected ill-conditioning failure, got {other:?}"),
        }
    }

    #[test]
    fn n_star_rounds_odd_m_up() {
        assert_eq!(DeltaKernel::build(3, 6).unwrap().n_star(), 18);
        assert_eq!(DeltaKernel::build(1, 6).unwrap().n_star(), 16);
        assert_eq!(DeltaKernel::build(5, 7).unwrap().n_star(), 22);
    }
}
