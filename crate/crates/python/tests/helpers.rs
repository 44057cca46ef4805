use dgsem_siac::cases::ConvergenceDomain;
use dgsem_siac::config::RunConfig;
use dgsem_siac_py::{find_sweep, parse_domain, variable_names};

#[test]
fn domain_names_parse() {
    assert_eq!(parse_domain("unit"), Ok(ConvergenceDomain::Unit));
    assert_eq!(parse_domain("printed"), Ok(ConvergenceDomain::Printed));
    assert!(parse_domain("square").is_err());
}

#[test]
fn sweeps_are_found_by_id() {
    for id in ["table1", "table2", "table3", "table4"] {
        assert_eq!(find_sweep(id).unwrap().id, id);
    }
    assert!(find_sweep("table9").is_err());
}

#[test]
fn variable_names_follow_the_physics() {
    let euler = RunConfig::for_case("explosion").resolve().unwrap();
    assert_eq!(variable_names(&euler).len(), 4);
    let mhd = RunConfig::for_case("orszag-tang").resolve().unwrap();
    let names = variable_names(&mhd);
    assert_eq!(names.len(), 9);
    assert_eq!(names[0], "rho");
}
