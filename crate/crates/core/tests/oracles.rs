mod common;

use num_bigint::BigInt;
use num_rational::BigRational;

use dgsem_siac::filter::MultiElementFilter;
use dgsem_siac::{support_width, DeltaKernel, ReferenceElement};

#[test]
fn rational_kernel_has_expected_degree_and_symmetry() {
    for (m, k) in [(1, 2), (2, 3), (3, 6), (5, 8)] {
        let exact = common::exact_kernel(m, k);
        assert_eq!(exact.len(), m + 2 * k + 3);
        // the unique solution is even: all odd monomial coefficients vanish
        for c in exact.iter().skip(1).step_by(2) {
            assert!(common::is_exact_zero(c), "({m},{k}) has an odd term");
        }
        let top = exact.last().unwrap();
        let leading_degree = if common::is_exact_zero(top) { m + 2 * k + 1 } else { m + 2 * k + 2 };
        let kernel = DeltaKernel::build(m, k).unwrap();
        assert!(kernel.degree() >= leading_degree);
    }
}

#[test]
fn kernel_matches_rational_oracle_pointwise() {
    for (m, k) in [(2, 3), (4, 5), (1, 9)] {
        let exact = common::exact_kernel(m, k);
        let kernel = DeltaKernel::build(m, k).unwrap();
        for s in -40i64..=40 {
            let x = BigRational::new(BigInt::from(s), BigInt::from(40));
            let expected = common::to_f64(&[common::exact_derivative(&exact, 0, &x)])[0];
            let got = kernel.poly(s as f64 / 40.0);
            assert!((got - expected).abs() < 1e-10, "({m},{k}) at {s}/40: {got} vs {expected}");
            let d1 = common::to_f64(&[common::exact_derivative(&exact, 1, &x)])[0];
            assert!((kernel.poly_derivative(1, s as f64 / 40.0) - d1).abs() < 1e-8 * d1.abs().max(1.0));
        }
    }
}

fn check_blocks(degree: usize, m: usize, k: usize, eps: f64) {
    let reference = ReferenceElement::new(degree).unwrap();
    let kernel = DeltaKernel::build(m, k).unwrap().with_epsilon(eps).unwrap();
    let filter = MultiElementFilter::build(&reference, kernel).unwrap();
    let oracle = common::brute_force_blocks(reference.nodes(), &common::FactoredKernel::new(m, k), eps);
    for (b, block) in [filter.phi_left(), filter.phi_center(), filter.phi_right()].into_iter().enumerate() {
        for i in 0..=degree {
            for j in 0..=degree {
                let diff = (block[(i, j)] - oracle[b][i][j]).abs();
                assert!(diff < 1e-10, "block {b} ({i},{j}) for N={degree} ({m},{k}) eps={eps}: {diff:e}");
            }
        }
    }
}

#[test]
fn filter_blocks_match_brute_force_convolution() {
    check_blocks(7, 1, 6, support_width(7, 0.8).unwrap());
    check_blocks(5, 3, 8, 1.4);
    check_blocks(4, 1, 5, 1.4);
}
