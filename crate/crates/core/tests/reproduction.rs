//! Reference values reproduced from the built-in presets.

mod common;

use common::Check;

fn assert_check(c: Check) {
    assert!(c.pass, "{}", c.detail);
}

#[test]
fn coupling_strength() {
    assert_check(common::delta2_reproduction());
}

#[test]
fn squeezing_lambda_bounds() {
    assert_check(common::table2_bounds());
}

#[test]
fn minimum_run_times() {
    assert_check(common::runtimes());
}

#[test]
fn exclusion_curve_rises_beyond_the_separation() {
    assert_check(common::curve_shape());
}

#[test]
fn entanglement_lambda_bounds() {
    assert_check(common::table3_bounds());
}

#[test]
fn quality_factor_requirement() {
    assert_check(common::q_requirement_check());
}

#[test]
fn diosi_penrose_feasibility() {
    assert_check(common::dp_feasibility());
}

#[test]
fn coloured_xray_rescaling() {
    assert_check(common::xray_rescale());
}
