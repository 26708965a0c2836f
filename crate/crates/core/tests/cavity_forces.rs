//! Mode sums and forces of the closed cylinder.

mod common;

use std::f64::consts::PI;

use casimir_core::cavity::{
    checkpoint_force_sums, checkpoint_force_sums_with, dimensionless_force_sums, dimensionless_force_sums_with,
    energy_integrand, force_finite_difference, force_kernel, forces, forces_with, mode_energy_closed, CavityGeometry,
    PlasmaCutoff, Wall,
};
use casimir_core::constants::{REFERENCE_OMEGA_P, REFERENCE_RADIUS, SPEED_OF_LIGHT};
use casimir_core::specfun::{integrate, QuadratureSpec};
use casimir_core::sum_engine::{box_sum, eta, pairwise_sum, shell_sum, Pair, TruncationOrder};
use casimir_core::Exec;
use common::{rel_err, small_zeros};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const Y_P: f64 = 10.0 / 3.0;

/// Reference reduction: collect each shell by an explicit triple loop,
/// reduce it with `pairwise_sum`, and accumulate shells in order.
fn naive_shells<F: Fn(u32, u32, u32) -> Pair>(k_max: u32, term: F) -> Vec<Pair> {
    let mut acc = (0.0, 0.0);
    let mut out = Vec::new();
    for k in 1..=k_max {
        let mut shell = Vec::new();
        for m in 0..=k {
            for n in 1..=k {
                for l in 1..=k {
                    if m.max(n).max(l) == k {
                        let (a, b) = term(m, n, l);
                        shell.push((eta(m) * a, eta(m) * b));
                    }
                }
            }
        }
        let s = pairwise_sum(&shell);
        acc = (acc.0 + s.0, acc.1 + s.1);
        out.push(acc);
    }
    out
}

#[test]
fn shell_order_matches_naive_oracle_bitwise() {
    let zeros = small_zeros(20, 20);
    let alpha = 1.3;
    let term = |m: u32, n: u32, l: u32| {
        let x = zeros.zero(m, n);
        let lf = f64::from(l);
        let kz = lf * (PI * alpha);
        let k = force_kernel(Y_P, (x * x + kz * kz).sqrt());
        (x * x * k, lf * lf * k)
    };
    let oracle = naive_shells(20, term);
    let checkpoints: Vec<usize> = (1..=20).collect();
    let report = checkpoint_force_sums(alpha, Y_P, &checkpoints, &zeros).unwrap();
    let scale = PI * PI * alpha * alpha * alpha;
    for (i, want) in oracle.iter().enumerate() {
        assert_eq!(report.values_a[i].to_bits(), want.0.to_bits(), "I_a at k = {}", i + 1);
        assert_eq!(report.values_b[i].to_bits(), (scale * want.1).to_bits(), "I_b at k = {}", i + 1);
    }
    let generic = |m: u32, n: u32, l: u32| (f64::from(m + 1).recip() + f64::from(n * l).sqrt(), f64::from(l) / f64::from(n));
    let report = shell_sum(generic, &checkpoints, Exec::default()).unwrap();
    for (i, want) in naive_shells(20, generic).iter().enumerate() {
        assert_eq!((report.values_a[i].to_bits(), report.values_b[i].to_bits()), (want.0.to_bits(), want.1.to_bits()));
    }
}

#[test]
fn box_and_shell_orders_agree() {
    let zeros = small_zeros(60, 60);
    for alpha in [0.25, 1.0, 4.0] {
        let report = checkpoint_force_sums(alpha, Y_P, &[30, 60], &zeros).unwrap();
        for k in [30u32, 60] {
            let boxed = dimensionless_force_sums(alpha, Y_P, TruncationOrder::cube(k).unwrap(), &zeros).unwrap();
            let (a, b) = report.value(k as usize).unwrap();
            assert!(rel_err(a, boxed.i_a) < 1e-13 && rel_err(b, boxed.i_b) < 1e-13, "alpha {alpha}, k {k}");
        }
    }
}

#[test]
fn sequential_and_default_execution_are_bitwise_equal() {
    let zeros = small_zeros(70, 70);
    let cps = [10, 55, 70];
    let seq = checkpoint_force_sums_with(1.0, Y_P, &cps, &zeros, Exec::Sequential).unwrap();
    let dflt = checkpoint_force_sums_with(1.0, Y_P, &cps, &zeros, Exec::default()).unwrap();
    assert_eq!(seq, dflt);
    let t = TruncationOrder::new(70, 40, 65).unwrap();
    let a = dimensionless_force_sums_with(0.7, Y_P, t, &zeros, Exec::Sequential).unwrap();
    let b = dimensionless_force_sums_with(0.7, Y_P, t, &zeros, Exec::default()).unwrap();
    assert_eq!(a, b);
}

#[cfg(feature = "parallel")]
#[test]
fn thread_count_does_not_change_bits() {
    let zeros = small_zeros(70, 70);
    let run = |threads: usize| {
        let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap();
        pool.install(|| {
            let report = checkpoint_force_sums_with(1.5, Y_P, &[20, 70], &zeros, Exec::Parallel).unwrap();
            let geom = CavityGeometry::new(1e-7, 8e-8).unwrap();
            let f = forces_with(&geom, &PlasmaCutoff::reference(), TruncationOrder::cube(70).unwrap(), &zeros, Exec::Parallel)
                .unwrap();
            (report, f)
        })
    };
    let one = run(1);
    for threads in [2, 3, 8] {
        let many = run(threads);
        assert_eq!(one.0, many.0);
        assert_eq!(one.1.radial.to_bits(), many.1.radial.to_bits());
        assert_eq!(one.1.axial.to_bits(), many.1.axial.to_bits());
    }
}

#[test]
fn sums_grow_with_truncation() {
    let zeros = small_zeros(80, 80);
    let cps: Vec<usize> = (1..=80).collect();
    for alpha in [0.25, 1.0, 1.5, 4.0] {
        let report = checkpoint_force_sums(alpha, Y_P, &cps, &zeros).unwrap();
        for w in report.values_a.windows(2).chain(report.values_b.windows(2)) {
            assert!(w[1] > w[0], "alpha {alpha}: {} then {}", w[0], w[1]);
        }
    }
}

#[test]
fn dimensionless_and_physical_routes_agree() {
    let zeros = small_zeros(50, 50);
    let trunc = TruncationOrder::cube(50).unwrap();
    for (a, b, omega_p) in [(1e-7, 1e-7, 1e16), (1e-7, 4e-7, 1e16), (2e-7, 5e-8, 3e15), (3e-6, 2e-6, 7e14)] {
        let geom = CavityGeometry::new(a, b).unwrap();
        let cutoff = PlasmaCutoff::new(omega_p).unwrap();
        let phys = forces(&geom, &cutoff, trunc, &zeros).unwrap();
        let dimless = dimensionless_force_sums(geom.alpha_ratio(), cutoff.y_p(&geom), trunc, &zeros)
            .unwrap()
            .to_forces(a);
        assert!(rel_err(phys.radial, dimless.radial) < 1e-12, "radial at ({a}, {b})");
        assert!(rel_err(phys.axial, dimless.axial) < 1e-12, "axial at ({a}, {b})");
    }
}

#[test]
fn analytic_forces_match_finite_differences() {
    let zeros = small_zeros(50, 50);
    let trunc = TruncationOrder::cube(50).unwrap();
    let cutoff = PlasmaCutoff::reference();
    for (a, b) in [(1e-7, 1e-7), (1e-7, 2.5e-7)] {
        let geom = CavityGeometry::new(a, b).unwrap();
        let f = forces(&geom, &cutoff, trunc, &zeros).unwrap();
        for (which, analytic, x) in [(Wall::Radial, f.radial, a), (Wall::Axial, f.axial, b)] {
            let h = 1e-5 * x;
            let fd = force_finite_difference(&geom, &cutoff, trunc, &zeros, which, h).unwrap();
            let fd_half = force_finite_difference(&geom, &cutoff, trunc, &zeros, which, 0.5 * h).unwrap();
            assert!(rel_err(fd, analytic) < 1e-6, "{which:?} at ({a}, {b}): {fd} vs {analytic}");
            assert!(rel_err(fd_half, analytic) < 1e-6, "{which:?} half step: {fd_half} vs {analytic}");
        }
    }
}

#[test]
fn forces_scale_with_cavity_size() {
    let zeros = small_zeros(60, 60);
    let trunc = TruncationOrder::cube(60).unwrap();
    let base = forces(
        &CavityGeometry::new(1e-7, 1e-7).unwrap(),
        &PlasmaCutoff::new(1e16).unwrap(),
        trunc,
        &zeros,
    )
    .unwrap();
    let scaled = forces(
        &CavityGeometry::new(2e-7, 2e-7).unwrap(),
        &PlasmaCutoff::new(5e15).unwrap(),
        trunc,
        &zeros,
    )
    .unwrap();
    assert!(rel_err(scaled.radial, 0.25 * base.radial) < 1e-12);
    assert!(rel_err(scaled.axial, 0.25 * base.axial) < 1e-12);
}

#[test]
fn nominal_cutoff_matches_its_definition() {
    let geom = CavityGeometry::new(REFERENCE_RADIUS, REFERENCE_RADIUS).unwrap();
    let cutoff = PlasmaCutoff::new(REFERENCE_OMEGA_P).unwrap();
    assert!(rel_err(cutoff.y_p(&geom), REFERENCE_OMEGA_P * REFERENCE_RADIUS / SPEED_OF_LIGHT) < 1e-15);
}

#[test]
fn per_mode_energy_closed_form_matches_quadrature() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_cafe);
    let spec = QuadratureSpec::new(1e-300, 1e-13, 60).unwrap();
    for _ in 0..20 {
        let a_mode = 10f64.powf(rng.gen_range(5.0..9.0));
        let u_p = a_mode * 10f64.powf(rng.gen_range(-2.0..2.0));
        let closed = mode_energy_closed(a_mode, u_p);
        let quad = integrate(|u| energy_integrand(u, a_mode), 0.0, u_p, &spec).unwrap();
        assert!(rel_err(quad, closed.full) < 1e-10, "A = {a_mode:e}, u_p = {u_p:e}: {quad} vs {}", closed.full);
        let geometric = integrate(|u| a_mode * a_mode / (u * u + a_mode * a_mode), 0.0, u_p, &spec).unwrap();
        assert!(rel_err(geometric, closed.geometric) < 1e-10);
    }
}

#[test]
fn box_sum_reaches_every_term_once() {
    let t = TruncationOrder::new(7, 5, 9).unwrap();
    let (count, weighted) = box_sum(t, |_, _, _| (1.0, 1.0), Exec::default());
    assert_eq!(weighted, 5.0 * 9.0 * (1.0 + 2.0 * 7.0));
    assert_eq!(count, weighted);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(10_000))]

    #[test]
    fn every_term_is_repulsive(x in 2.4f64..2400.0, kz in 0.07f64..7000.0, y_p in 1e-3f64..1e3) {
        let k = force_kernel(y_p, (x * x + kz * kz).sqrt());
        prop_assert!(k > 0.0, "x = {}, kz = {}, y_p = {}", x, kz, y_p);
        prop_assert!(x * x * k > 0.0);
    }
}
