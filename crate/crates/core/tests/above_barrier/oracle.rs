use barrierlab_core::peaks::local_maxima;
use barrierlab_core::synthesis::synthesize_snapshot;
use barrierlab_core::tdse::{compare, default_time_step, init_state};
use barrierlab_core::{CnState, Error, Scenario, Snapshot, Source, SpatialGrid};
use num_complex::Complex64;
use std::f64::consts::PI;

fn gaussian(grid: SpatialGrid, x0: f64, a: f64, k0: f64) -> Snapshot {
    let scale = (2.0 / (PI * a * a)).powf(0.25);
    let psi = grid
        .points()
        .iter()
        .map(|&x| Complex64::from_polar(scale * (-(x - x0) * (x - x0) / (a * a)).exp(), k0 * x))
        .collect();
    Snapshot::from_psi(0.0, grid, psi).unwrap()
}

fn peak_position(snap: &Snapshot) -> f64 {
    let found = local_maxima(&snap.abs2, 0..snap.abs2.len(), 0.5 * snap.max_abs2(), 5);
    assert_eq!(found.len(), 1);
    snap.grid.xmin() + found[0].0 * snap.grid.dx()
}

#[test]
fn free_packet_follows_the_classical_path() {
    let grid = SpatialGrid::new(-50.0, 50.0, 0.02).unwrap();
    let dt = default_time_step(1.0, grid.dx());
    let mut state = CnState::with_potential(&gaussian(grid, -15.0, 8.0, 3.0), vec![0.0; grid.len()], 1.0, dt).unwrap();
    let times = [0.0, 2.0, 4.0, 6.0, 8.0];
    let snaps = state.run(8.0, &times).unwrap();
    for (t, snap) in times.iter().zip(&snaps) {
        let x = peak_position(snap);
        assert!((x - (-15.0 + 3.0 * t)).abs() < grid.dx(), "t = {t}: peak at {x}");
    }
}

#[test]
fn norm_drift_stays_at_rounding_level() {
    let mut s = Scenario::canonical();
    s.xmin = -50.0;
    s.xmax = 30.0;
    s.dx = 0.02;
    let grid = s.grid().unwrap();
    let mut state = init_state(
        &s.spectrum().unwrap(),
        &s.barrier().unwrap(),
        &s.quadrature(),
        &grid,
        s.time_step().unwrap(),
        Source::ClosedForm,
    )
    .unwrap();
    let start = state.norm();
    let mut previous = start;
    for _ in 0..10_000 {
        state.step();
        let now = state.norm();
        assert!((now - previous).abs() < 1e-12);
        previous = now;
    }
    assert!((previous - start).abs() < 1e-8);
}

/// CN against the spectral packet on a narrow-packet scenario at two resolutions.
fn discrepancy(dx: f64) -> f64 {
    let mut s = Scenario::with_physics(1.0, 2.0, PI / 5f64.sqrt(), 3.0, 6.0, -10.0);
    s.xmin = -36.0;
    s.xmax = 30.0;
    s.dx = dx;
    s.quad_nodes = 1024;
    let (barrier, spectrum, quad, grid) = (s.barrier().unwrap(), s.spectrum().unwrap(), s.quadrature(), s.grid().unwrap());
    let mut state = init_state(&spectrum, &barrier, &quad, &grid, s.time_step().unwrap(), Source::ClosedForm).unwrap();
    let cn = state.run(3.6, &[3.6]).unwrap().pop().unwrap();
    let spectral = synthesize_snapshot(&spectrum, &barrier, &quad, &grid, cn.t, Source::ClosedForm).unwrap();
    compare(&cn, &spectral).unwrap().relative_linf()
}

#[test]
fn halving_dx_and_dt_shrinks_the_discrepancy() {
    let coarse = discrepancy(0.04);
    let fine = discrepancy(0.02);
    assert!(fine < 1e-3);
    assert!(coarse / fine >= 2.0, "coarse {coarse:e}, fine {fine:e}");
}

#[test]
fn reaching_the_wall_is_an_error() {
    let grid = SpatialGrid::new(-20.0, 10.0, 0.02).unwrap();
    let dt = default_time_step(1.0, grid.dx());
    let mut state = CnState::with_potential(&gaussian(grid, -5.0, 2.0, 3.0), vec![0.0; grid.len()], 1.0, dt).unwrap();
    let err = state.run(6.0, &[1.0, 6.0]).unwrap_err();
    assert!(matches!(err, Error::BoundaryContamination { .. }));
    assert!(err.is_numerical_guard());
}
