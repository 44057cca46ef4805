//! Independent oracles shared by the integration tests: the delta-kernel
//! polynomial solved in exact rational arithmetic, adaptive Simpson
//! quadrature and a brute-force convolution for the filter blocks.

#![allow(dead_code)]

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn falling(p: usize, r: usize) -> BigRational {
    let mut v = BigRational::one();
    for q in 0..r {
        v *= rat((p - q) as i64, 1);
    }
    v
}

/// Exact monomial coefficients of `P^{m,k}`, lowest degree first, from the
/// defining conditions: unit integral, vanishing moments of orders `1..=m`
/// and vanishing derivatives of orders `0..=k` at both endpoints.
pub fn exact_kernel(m: usize, k: usize) -> Vec<BigRational> {
    let n = m + 2 * k + 3;
    let mut rows: Vec<Vec<BigRational>> = Vec::with_capacity(n);
    for i in 0..=m {
        let mut row: Vec<BigRational> = (0..n)
            .map(|p| if (p + i) % 2 == 0 { rat(2, (p + i + 1) as i64) } else { BigRational::zero() })
            .collect();
        row.push(if i == 0 { BigRational::one() } else { BigRational::zero() });
        rows.push(row);
    }
    for r in 0..=k {
        for sign in [1i64, -1] {
            let mut row: Vec<BigRational> = (0..n)
                .map(|p| {
                    if p < r {
                        BigRational::zero()
                    } else {
                        let s = if sign < 0 && (p - r) % 2 == 1 { -BigRational::one() } else { BigRational::one() };
                        falling(p, r) * s
                    }
                })
                .collect();
            row.push(BigRational::zero());
            rows.push(row);
        }
    }
    assert_eq!(rows.len(), n);
    // Gauss-Jordan elimination, exact.
    for col in 0..n {
        let pivot = (col..n).find(|&r| !rows[r][col].is_zero()).expect("singular kernel system");
        rows.swap(col, pivot);
        let inv = BigRational::one() / rows[col][col].clone();
        for v in rows[col].iter_mut() {
            *v = &*v * &inv;
        }
        for r in 0..n {
            if r != col && !rows[r][col].is_zero() {
                let f = rows[r][col].clone();
                let pivot_row = rows[col].clone();
                for (v, p) in rows[r].iter_mut().zip(&pivot_row) {
                    *v = &*v - &f * p;
                }
            }
        }
    }
    rows.into_iter().map(|r| r[n].clone()).collect()
}

/// Exact `d^r/dx^r P(x)` at a rational point.
pub fn exact_derivative(coeffs: &[BigRational], r: usize, x: &BigRational) -> BigRational {
    let mut acc = BigRational::zero();
    for (p, c) in coeffs.iter().enumerate().skip(r).rev() {
        acc = acc * x + c * falling(p, r);
    }
    acc
}

/// Splits the exact kernel as `(1 - x^2)^(k+1) q(x)` by exact polynomial
/// division and returns the coefficients of `q` (lowest degree first).
/// Panics when the division leaves a remainder.
pub fn exact_factor(coeffs: &[BigRational], k: usize) -> Vec<BigRational> {
    // divisor (1 - x^2)^(k+1), built by repeated multiplication
    let mut divisor = vec![BigRational::one()];
    for _ in 0..=k {
        let mut next = vec![BigRational::zero(); divisor.len() + 2];
        for (p, c) in divisor.iter().enumerate() {
            next[p] += c;
            next[p + 2] -= c;
        }
        divisor = next;
    }
    let mut rem = coeffs.to_vec();
    let dd = divisor.len() - 1;
    if rem.len() <= dd {
        panic!("kernel degree below the endpoint factor");
    }
    let mut quotient = vec![BigRational::zero(); rem.len() - dd];
    for p in (0..quotient.len()).rev() {
        let c = &rem[p + dd] / &divisor[dd];
        for (q, d) in divisor.iter().enumerate() {
            rem[p + q] = &rem[p + q] - &c * d;
        }
        quotient[p] = c;
    }
    assert!(rem.iter().all(|c| c.is_zero()), "kernel is not divisible by (1 - x^2)^(k+1)");
    quotient
}

/// Kernel evaluation in the well-conditioned factored form, zero outside `[-1, 1]`.
#[derive(Debug, Clone)]
pub struct FactoredKernel {
    pub k: usize,
    pub q: Vec<f64>,
}

impl FactoredKernel {
    pub fn new(m: usize, k: usize) -> Self {
        Self { k, q: to_f64(&exact_factor(&exact_kernel(m, k), k)) }
    }

    pub fn eval(&self, x: f64) -> f64 {
        if x.abs() > 1.0 {
            return 0.0;
        }
        (1.0 - x * x).powi(self.k as i32 + 1) * self.q.iter().rev().fold(0.0, |acc, c| acc * x + c)
    }
}

pub fn to_f64(coeffs: &[BigRational]) -> Vec<f64> {
    coeffs.iter().map(|c| c.to_f64().unwrap()).collect()
}

pub fn is_exact_zero(v: &BigRational) -> bool {
    v.abs().is_zero()
}

/// Product-form Lagrange basis polynomial `j` on `nodes`.
pub fn lagrange(nodes: &[f64], j: usize, x: f64) -> f64 {
    nodes
        .iter()
        .enumerate()
        .filter(|&(l, _)| l != j)
        .map(|(_, &xl)| (x - xl) / (nodes[j] - xl))
        .product()
}

#[allow(clippy::too_many_arguments)]
fn simpson(f: &dyn Fn(f64) -> f64, a: f64, b: f64, fa: f64, fm: f64, fb: f64, whole: f64, tol: f64, depth: u32) -> f64 {
    let m = 0.5 * (a + b);
    let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
    let (flm, frm) = (f(lm), f(rm));
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    // the floor keeps round-off in the integrand from forcing full depth
    let floor = 1e-16 * (left.abs() + right.abs());
    if depth == 0 || (left + right - whole).abs() <= 15.0 * tol.max(floor) {
        return left + right + (left + right - whole) / 15.0;
    }
    simpson(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) + simpson(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)
}

/// Adaptive Simpson quadrature of `f` over `[a, b]` (zero for `b <= a`).
pub fn adaptive(f: &dyn Fn(f64) -> f64, a: f64, b: f64) -> f64 {
    if b <= a {
        return 0.0;
    }
    let (fa, fm, fb) = (f(a), f(0.5 * (a + b)), f(b));
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    simpson(f, a, b, fa, fm, fb, whole, 1e-15, 40)
}

/// Brute-force `(Phi^{n-1}, Phi^n, Phi^{n+1})` for an element of reference
/// width 2: each basis function sits on its element of a three-element strip
/// and is convolved with `delta_eps(s) = P(s / eps) / eps`.
pub fn brute_force_blocks(nodes: &[f64], kernel: &FactoredKernel, eps: f64) -> [Vec<Vec<f64>>; 3] {
    let np = nodes.len();
    let delta = |s: f64| kernel.eval(s / eps) / eps;
    let mut blocks = [vec![vec![0.0; np]; np], vec![vec![0.0; np]; np], vec![vec![0.0; np]; np]];
    for (b, (lo, hi, shift)) in [(-3.0, -1.0, 2.0), (-1.0, 1.0, 0.0), (1.0, 3.0, -2.0)].into_iter().enumerate() {
        for i in 0..np {
            for j in 0..np {
                let xi = nodes[i];
                let f = |tau: f64| lagrange(nodes, j, tau + shift) * delta(xi - tau);
                let a = (xi - eps).max(lo);
                let c = (xi + eps).min(hi);
                let mid = xi.clamp(a, c.max(a));
                blocks[b][i][j] = adaptive(&f, a, mid) + adaptive(&f, mid, c);
            }
        }
    }
    blocks
}
