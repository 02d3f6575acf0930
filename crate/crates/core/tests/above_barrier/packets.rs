use barrierlab_core::grid::norm;
use barrierlab_core::peaks::detect_peaks;
use barrierlab_core::synthesis::{arrival_times, synthesize_snapshot};
use barrierlab_core::{
    BarrierConfig, Family, GaussianSpectrum, PacketIntegrand, QuadratureSpec, Region, Scenario, Snapshot, Source,
    SpatialGrid,
};
use std::f64::consts::PI;

/// Narrower packet on the canonical barrier, cheap enough for many snapshots.
fn short_scenario() -> Scenario {
    let mut s = Scenario::with_physics(1.0, 2.0, PI / 5f64.sqrt(), 3.0, 6.0, -10.0);
    s.xmin = -36.0;
    s.xmax = 30.0;
    s.dx = 0.02;
    s.quad_nodes = 1024;
    s
}

fn parts(s: &Scenario) -> (BarrierConfig, GaussianSpectrum, QuadratureSpec, SpatialGrid) {
    (s.barrier().unwrap(), s.spectrum().unwrap(), s.quadrature(), s.grid().unwrap())
}

#[test]
fn series_packet_is_the_sum_of_its_terms() {
    let s = short_scenario();
    let (barrier, spectrum, quad, grid) = parts(&s);
    let snap = |source| synthesize_snapshot(&spectrum, &barrier, &quad, &grid, 3.6, source).unwrap();
    let series = snap(Source::Series(3));
    let mut total = snap(Source::IncomingOnly).restricted(Region::Before, barrier.length());
    for n in 1..=3 {
        for family in [Family::Reflected, Family::Forward, Family::Backward, Family::Transmitted] {
            total = total.superpose(&snap(Source::Term(family, n))).unwrap();
        }
    }
    // Terms are defined on closed regions, so the barrier edges are counted twice.
    let l = barrier.length();
    for (i, (a, b)) in series.psi.iter().zip(&total.psi).enumerate() {
        let x = grid.x(i);
        if x.abs() < 1e-9 || (x - l).abs() < 1e-9 {
            continue;
        }
        assert!((a - b).norm() < 1e-12, "x = {x}: {a} vs {b}");
    }
}

#[test]
fn closed_form_packet_keeps_unit_norm() {
    let s = short_scenario();
    let (barrier, spectrum, quad, grid) = parts(&s);
    let integrand = PacketIntegrand::new(&spectrum, &barrier, &quad, Source::ClosedForm).unwrap();
    let norms: Vec<f64> = [0.0, 2.5, 3.3, 4.0, 6.0]
        .iter()
        .map(|&t| norm(&integrand.snapshot(&grid, t).unwrap()))
        .collect();
    let expected = 1.0 - spectrum.truncation_deficit();
    for n in &norms {
        assert!((n - norms[0]).abs() < 1e-8, "{norms:?}");
        assert!((n - expected).abs() < 1e-6, "{norms:?} vs {expected}");
    }
}

#[test]
fn doubling_the_nodes_changes_nothing_visible() {
    let s = Scenario::canonical();
    let barrier = s.barrier().unwrap();
    let spectrum = s.spectrum().unwrap();
    let coarse = PacketIntegrand::new(&spectrum, &barrier, &QuadratureSpec::default().with_nodes(1024), Source::ClosedForm).unwrap();
    let fine = PacketIntegrand::new(&spectrum, &barrier, &QuadratureSpec::default(), Source::ClosedForm).unwrap();
    for &(x, t) in &[(-15.0, 0.0), (-1.0, 4.5), (0.7, 5.0), (1.3, 5.6), (3.0, 6.5), (-10.0, 8.0)] {
        assert!((coarse.psi(x, t) - fine.psi(x, t)).norm() < 1e-10, "x = {x}, t = {t}");
    }
}

#[test]
fn free_peak_moves_at_the_group_velocity() {
    let s = Scenario::canonical();
    let barrier = s.barrier().unwrap();
    let spectrum = s.spectrum().unwrap();
    let grid = SpatialGrid::new(-40.0, -0.5, 0.01).unwrap();
    let integrand = PacketIntegrand::new(&spectrum, &barrier, &s.quadrature(), Source::IncomingOnly).unwrap();
    for t in [0.0, 1.0, 3.0] {
        // A grid left of the barrier is enough for the free packet.
        let snap: Snapshot = Snapshot::from_psi(
            t,
            grid,
            grid.points().iter().map(|&x| integrand.psi(x, t)).collect(),
        )
        .unwrap();
        let peaks = detect_peaks(&snap, Region::Before, &barrier, 1e-3).unwrap();
        assert_eq!(peaks.len(), 1);
        assert!((peaks.peaks[0].x - (-15.0 + 3.0 * t)).abs() < 1e-3, "{peaks:?}");
    }
}

#[test]
fn reflected_terms_leave_one_round_trip_apart() {
    let s = Scenario::canonical();
    let barrier = s.barrier().unwrap();
    let spectrum = s.spectrum().unwrap();
    let quad = s.quadrature();
    let first = arrival_times(&spectrum, &barrier, &quad, 0.0, (0.0, 12.0), Source::Term(Family::Reflected, 1)).unwrap();
    let second = arrival_times(&spectrum, &barrier, &quad, 0.0, (0.0, 12.0), Source::Term(Family::Reflected, 2)).unwrap();
    assert_eq!((first.len(), second.len()), (1, 1));
    let round_trip = 2.0 * barrier.length() / 5f64.sqrt();
    assert!(((second[0] - first[0]) / round_trip - 1.0).abs() < 0.05);
    // The first transmitted term leaves the far edge one transit after impact.
    let l = barrier.length();
    let t1 = arrival_times(&spectrum, &barrier, &quad, l, (0.0, 12.0), Source::Term(Family::Transmitted, 1)).unwrap();
    assert!(((t1[0] - s.impact_time()) / (0.5 * round_trip) - 1.0).abs() < 0.05, "{t1:?}");
}
