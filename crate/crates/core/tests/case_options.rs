use dgsem_siac::cases::{double_mach_case, double_mach_case_smeared, DoubleMachState};
use dgsem_siac::config::RunConfig;

fn initial(case: &dgsem_siac::cases::TestCase, x: f64, y: f64) -> [f64; 4] {
    let mut w = [0.0; 4];
    (case.initial)(x, y, &mut w);
    w
}

#[test]
fn smeared_double_mach_shock_matches_sharp_far_from_the_front() {
    let sharp = double_mach_case(DoubleMachState::Printed);
    let smeared = double_mach_case_smeared(DoubleMachState::Printed, 0.01);
    // the front passes through (1/6, 0) with slope sqrt(3)
    for (x, y) in [(0.05, 0.5), (0.1, 0.9), (2.0, 0.2), (3.0, 0.8)] {
        let (a, b) = (initial(&sharp, x, y), initial(&smeared, x, y));
        for q in 0..4 {
            assert!((a[q] - b[q]).abs() < 1e-9 * a[q].abs().max(1.0), "({x}, {y}) var {q}: {} vs {}", a[q], b[q]);
        }
    }
}

#[test]
fn smeared_double_mach_shock_averages_the_states_on_the_front() {
    let smeared = double_mach_case_smeared(DoubleMachState::Printed, 0.02);
    let y = 0.4;
    let x = 1.0 / 6.0 + y / 3f64.sqrt();
    let left = initial(&smeared, 0.0, 0.9);
    let right = initial(&smeared, 3.0, 0.1);
    let mid = initial(&smeared, x, y);
    for q in 0..4 {
        assert!((mid[q] - 0.5 * (left[q] + right[q])).abs() < 1e-12, "var {q}");
    }
}

#[test]
fn shock_width_is_validated() {
    let ok = RunConfig::from_toml_str("case = \"double-mach\"\ndouble_mach_shock_width = 0.01\n", &[]).unwrap();
    assert!(ok.resolve().is_ok());
    for bad in ["-0.01", "nan", "inf"] {
        let text = format!("case = \"double-mach\"\ndouble_mach_shock_width = {bad}\n");
        let err = RunConfig::from_toml_str(&text, &[]).and_then(|c| c.resolve()).unwrap_err();
        assert!(!err.is_numerical(), "{bad}: {err}");
    }
}

#[test]
fn initial_condition_filtering_is_opt_in() {
    let r = RunConfig::for_case("explosion").resolve().unwrap();
    assert!(!r.filter.unwrap().filter_initial_condition);
    let r = RunConfig::from_toml_str("case = \"explosion\"", &["filter.initial_condition=true".into()])
        .unwrap()
        .resolve()
        .unwrap();
    assert!(r.filter.unwrap().filter_initial_condition);
}
