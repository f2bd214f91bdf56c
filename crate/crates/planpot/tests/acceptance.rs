//! Acceptance suite: one test per criterion at the pinned grids and
//! tolerances; each prints its pass/fail line.

use planpot::verify::{self, VerifyConfig};

fn run(f: fn(&VerifyConfig) -> verify::CheckOutcome) {
    let cfg = VerifyConfig::default();
    let out = f(&cfg);
    println!("{}", out.line());
    assert!(out.pass, "{}", out.line());
}

#[test]
fn criterion_01_capacity_exactness() {
    run(verify::criterion_1);
}

#[test]
fn criterion_02_green_capacity_sandwich() {
    run(verify::criterion_2);
}

#[test]
fn criterion_03_fundamental_inequality() {
    run(verify::criterion_3);
}

#[test]
fn criterion_04_frostman_identity() {
    run(verify::criterion_4);
}

#[test]
fn criterion_05_dirichlet_capacity_concentric() {
    run(verify::criterion_5);
}

#[test]
fn criterion_06_grigoryan_bound() {
    run(verify::criterion_6);
}

#[test]
fn criterion_07_potential_upper_bound() {
    run(verify::criterion_7);
}

#[test]
fn criterion_08_green_decay_power() {
    run(verify::criterion_8);
}

#[test]
fn criterion_09_green_decay_logpower() {
    run(verify::criterion_9);
}

#[test]
fn criterion_10_bergman_kernel() {
    run(verify::criterion_10);
}

#[test]
fn criterion_11_simply_connected_bound() {
    run(verify::criterion_11);
}

#[test]
fn criterion_12_bergman_distance() {
    run(verify::criterion_12);
}

#[test]
fn criterion_13_kernel_sublevel_product() {
    run(verify::criterion_13);
}

#[test]
fn criterion_14_zwonek_stability() {
    run(verify::criterion_14);
}

#[test]
fn criterion_15_density_indices() {
    run(verify::criterion_15);
}

#[test]
fn criterion_16_chain_lower_bound() {
    run(verify::criterion_16);
}
