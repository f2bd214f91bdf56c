//! Closed-form accuracy checks for the masked Dirichlet solver.

use planpot::capacity::{dirichlet_capacity, equilibrium_measure, green_capacity};
use planpot::geometry::{domains, CompactSet, PlanarPoint};
use planpot::potential::{
    capacity_potential, flux, green_function, green_potential, solve_dirichlet, BoundaryConstants,
    Contour,
};

#[test]
fn constant_boundary_data_gives_constant_field() {
    let d = domains::unit_disk();
    let f = solve_dirichlet(
        &d,
        &BoundaryConstants {
            ambient: 1.0,
            obstacles: vec![],
        },
        1.0 / 64.0,
    )
    .unwrap();
    for j in 0..f.ny {
        for i in 0..f.nx {
            if let Some(v) = f.get(i, j) {
                assert!((v - 1.0).abs() < 1e-9, "cell ({i},{j}) = {v}");
            }
        }
    }
}

#[test]
fn annulus_harmonic_profile() {
    // values 1 on |z|=rho, 0 on |z|=1 -> log|z| / log rho
    let rho = 0.35;
    let d = domains::annulus(rho);
    let h = 1.0 / 256.0;
    let f = solve_dirichlet(
        &d,
        &BoundaryConstants {
            ambient: 0.0,
            obstacles: vec![1.0],
        },
        h,
    )
    .unwrap();
    let mut max_err = 0.0f64;
    for j in 0..f.ny {
        for i in 0..f.nx {
            if let Some(v) = f.get(i, j) {
                let r = f.center(i, j).norm();
                let exact = r.ln() / rho.ln();
                max_err = max_err.max((v - exact).abs());
            }
        }
    }
    assert!(max_err < 0.02, "annulus max error {max_err}");
}

#[test]
fn missing_obstacle_value_is_config_error() {
    let d = domains::annulus(0.4);
    let r = solve_dirichlet(
        &d,
        &BoundaryConstants {
            ambient: 0.0,
            obstacles: vec![],
        },
        1.0 / 64.0,
    );
    assert!(r.is_err());
}

#[test]
fn green_function_disk_closed_forms() {
    let d = domains::unit_disk();
    let h = 1.0 / 512.0;
    // pole at 0: g = log|z|
    let g0 = green_function(&d, PlanarPoint::ZERO, h).unwrap();
    let v = g0.bilinear(PlanarPoint::new(0.5, 0.0)).unwrap();
    assert!(
        (v - 0.5f64.ln()).abs() < 2e-2,
        "g(0.5; 0) = {v}, expect {}",
        0.5f64.ln()
    );
    // pole at 0.5, probe -0.5: log|z-w| - log|1 - conj(w) z|
    let w = PlanarPoint::new(0.5, 0.0);
    let g = green_function(&d, w, h).unwrap();
    let z = PlanarPoint::new(-0.5, 0.0);
    let exact = (1.0f64).ln() - (1.25f64).ln();
    let v = g.bilinear(z).unwrap();
    assert!((v - exact).abs() < 2e-2, "g(-0.5; 0.5) = {v}, expect {exact}");
}

#[test]
fn green_function_near_boundary_accuracy() {
    // the cut-cell stencil keeps relative accuracy a few cells from the wall
    let d = domains::unit_disk();
    let h = 1.0 / 512.0;
    let w = PlanarPoint::new(0.3, 0.0);
    let g = green_function(&d, w, h).unwrap();
    for delta in [0.1, 0.03, 0.01, 0.004] {
        let z = PlanarPoint::new(0.0, 1.0 - delta);
        let zc = g.nearest_inside_center(z).map(|(i, j)| g.center(i, j)).unwrap();
        let exact = (zc.dist(w)).ln()
            - PlanarPoint::new(1.0 - w.re * zc.re, -w.re * zc.im).norm().ln();
        let v = g.get(g.nearest_inside_center(z).unwrap().0, g.nearest_inside_center(z).unwrap().1).unwrap();
        let rel = (v - exact).abs() / exact.abs();
        assert!(
            rel < 0.05,
            "delta {delta}: g = {v}, exact {exact}, rel {rel}"
        );
    }
}

#[test]
fn green_symmetry_on_random_pairs() {
    let d = domains::slit_disk();
    let h = 1.0 / 256.0;
    let pairs = [
        (PlanarPoint::new(-0.4, 0.2), PlanarPoint::new(0.3, 0.4)),
        (PlanarPoint::new(-0.2, -0.5), PlanarPoint::new(0.5, 0.25)),
        (PlanarPoint::new(0.2, 0.35), PlanarPoint::new(-0.6, -0.1)),
    ];
    for (z, w) in pairs {
        let gz = green_function(&d, z, h).unwrap();
        let gw = green_function(&d, w, h).unwrap();
        let a = gz.bilinear(w).unwrap();
        let b = gw.bilinear(z).unwrap();
        assert!(
            (a - b).abs() / a.abs().max(1e-9) < 0.02,
            "g(w;z)={a} vs g(z;w)={b}"
        );
    }
}

#[test]
fn concentric_capacity_potential_and_flux() {
    let d = domains::unit_disk();
    let h = 1.0 / 256.0;
    let rho = (-1.0f64).exp();
    let k = CompactSet::disk(PlanarPoint::ZERO, rho);
    let phi = capacity_potential(&k, &d, h).unwrap();
    // phi = -log|z| on the annulus; at |z| = e^{-1/2} the value is 1/2
    let probe = PlanarPoint::new((-0.5f64).exp(), 0.0);
    let v = phi.bilinear(probe).unwrap();
    assert!((v - 0.5).abs() < 0.02 * 0.5 + 0.005, "phi = {v} at e^-1/2");
    // flux through a mid circle: -flux = 2pi
    let contour = Contour::circle(PlanarPoint::ZERO, 0.65, 256).unwrap();
    let f = flux(&phi, &contour).unwrap();
    let expect = -std::f64::consts::TAU;
    assert!(
        (f - expect).abs() / expect.abs() < 0.02,
        "flux {f} expect {expect}"
    );
}

#[test]
fn green_pole_flux_is_2pi_and_contour_independent() {
    let d = domains::unit_disk();
    let h = 1.0 / 256.0;
    let w = PlanarPoint::new(0.2, 0.1);
    let g = green_function(&d, w, h).unwrap();
    let mut vals = Vec::new();
    for r in [0.2, 0.35, 0.5] {
        let contour = Contour::circle(w, r, 256).unwrap();
        vals.push(flux(&g, &contour).unwrap());
    }
    for v in &vals {
        assert!(
            (v - std::f64::consts::TAU).abs() / std::f64::consts::TAU < 0.02,
            "pole flux {v}"
        );
    }
    // harmonic away from the pole: a contour not enclosing it sees ~0 flux
    let contour = Contour::circle(PlanarPoint::new(-0.45, -0.3), 0.15, 128).unwrap();
    let f0 = flux(&g, &contour).unwrap();
    assert!(f0.abs() < 0.02 * std::f64::consts::TAU, "empty contour flux {f0}");
}

#[test]
fn concentric_green_and_dirichlet_capacity() {
    let d = domains::unit_disk();
    let h = 1.0 / 256.0;
    let rho = (-1.0f64).exp();
    let k = CompactSet::disk(PlanarPoint::ZERO, rho);
    let g = green_capacity(&k, &d, h, 64).unwrap();
    assert!(
        (g.cap - rho).abs() / rho < 0.02,
        "C_g = {} expect {rho}",
        g.cap
    );
    let dc = dirichlet_capacity(&k, &d, h, 64).unwrap();
    let tau = std::f64::consts::TAU;
    assert!(
        (dc.bridge - tau).abs() / tau < 0.02,
        "bridge C_d = {} expect {tau}",
        dc.bridge
    );
    assert!(
        (dc.energy_route - tau).abs() / tau < 0.02,
        "energy C_d = {} expect {tau}",
        dc.energy_route
    );
}

#[test]
fn green_potential_of_uniform_circle_measure() {
    // uniform measure on |z| = rho in the unit disk: p = log max(|z|, rho)
    let d = domains::unit_disk();
    let h = 1.0 / 256.0;
    let rho = 0.4;
    let k = CompactSet::disk(PlanarPoint::ZERO, rho);
    let mu = equilibrium_measure(&k, 64).unwrap();
    let p = green_potential(&mu, &d, h).unwrap();
    for (probe, expect) in [
        (PlanarPoint::new(0.7, 0.0), 0.7f64.ln()),
        (PlanarPoint::new(0.0, 0.2), rho.ln()),
        (PlanarPoint::new(-0.55, 0.0), 0.55f64.ln()),
    ] {
        let v = p.bilinear(probe).unwrap();
        assert!(
            (v - expect).abs() < 0.02 * expect.abs().max(0.3),
            "p({probe:?}) = {v}, expect {expect}"
        );
    }
}

#[test]
fn slit_k_with_cap_zero_gives_zero_field() {
    use planpot::geometry::ObstaclePrimitive;
    let d = domains::unit_disk();
    let k = CompactSet::from_pieces(vec![ObstaclePrimitive::PointCloud {
        points: vec![PlanarPoint::new(0.3, 0.2)],
    }]);
    let phi = capacity_potential(&k, &d, 1.0 / 128.0).unwrap();
    for j in 0..phi.ny {
        for i in 0..phi.nx {
            if let Some(v) = phi.get(i, j) {
                assert!(v.abs() < 1e-12);
            }
        }
    }
}
