//! Crank-Nicolson propagation of the time-dependent Schrodinger equation
//!
//! ```text
//! i d(psi)/dt = -(1/2m) d^2(psi)/dx^2 + V(x) psi
//! ```
//!
//! on a uniform grid with hard walls, used as an independent check of the
//! spectral packets. The step `(1 + i dt H/2) psi' = (1 - i dt H/2) psi` is
//! unitary for the discrete Hamiltonian, so the grid norm is conserved to
//! rounding.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::grid::{SpatialGrid, Snapshot};
use crate::scattering::BarrierConfig;
use crate::spectrum::GaussianSpectrum;
use crate::synthesis::{synthesize_snapshot, QuadratureSpec, Source};
use crate::tridiag::TridiagonalLu;

/// Width of the wall band watched for contamination, in grid points.
pub const WALL_BAND: usize = 5;
/// Largest tolerated edge-to-peak ratio of `|psi|^2` at a snapshot.
pub const WALL_TOLERANCE: f64 = 1e-10;
/// Upper cap on the default time step.
pub const MAX_TIME_STEP: f64 = 1e-3;

/// Accuracy limit on the step, `0.25 m dx^2`.
pub fn time_step_limit(mass: f64, dx: f64) -> f64 {
    0.25 * mass * dx * dx
}

/// Default step: the largest `1/N` not exceeding `min(1e-3, 0.25 m dx^2)`, so
/// that whole-number times fall exactly on steps.
pub fn default_time_step(mass: f64, dx: f64) -> f64 {
    let limit = MAX_TIME_STEP.min(time_step_limit(mass, dx));
    1.0 / (1.0 / limit).ceil()
}

/// Samples the barrier on the grid. Nodes that coincide with an edge (to within
/// `1e-6 dx`) get the midpoint value `V0/2`.
pub fn sample_potential(barrier: &BarrierConfig, grid: &SpatialGrid) -> Vec<f64> {
    let eps = 1e-6 * grid.dx();
    let l = barrier.length();
    (0..grid.len())
        .map(|i| {
            let x = grid.x(i);
            if x.abs() <= eps || (x - l).abs() <= eps {
                0.5 * barrier.height()
            } else {
                barrier.potential(x)
            }
        })
        .collect()
}

#[derive(Debug, Clone)]
pub struct CnState {
    grid: SpatialGrid,
    potential: Vec<f64>,
    psi: Vec<Complex64>,
    start: f64,
    steps: u64,
    dt: f64,
    factors: TridiagonalLu,
    explicit_diag: Vec<Complex64>,
    explicit_off: Complex64,
    rhs: Vec<Complex64>,
}

impl CnState {
    /// State holding the snapshot's `psi` under `barrier`. The outermost samples
    /// are pinned to zero.
    pub fn from_snapshot(snapshot: &Snapshot, barrier: &BarrierConfig, dt: f64) -> Result<Self> {
        let potential = sample_potential(barrier, &snapshot.grid);
        Self::with_potential(snapshot, potential, barrier.mass(), dt)
    }

    /// State under an arbitrary sampled potential.
    pub fn with_potential(snapshot: &Snapshot, potential: Vec<f64>, mass: f64, dt: f64) -> Result<Self> {
        let grid = snapshot.grid;
        crate::scattering::positive("mass", mass)?;
        let limit = time_step_limit(mass, grid.dx());
        if !(dt.is_finite() && dt > 0.0) || dt > limit * (1.0 + 1e-12) {
            return Err(Error::TimeStepTooLarge { dt, limit });
        }
        if grid.len() < 3 {
            return Err(Error::InvalidGrid("need at least one interior point".into()));
        }
        if potential.len() != grid.len() || potential.iter().any(|v| !v.is_finite()) {
            return Err(Error::DimensionMismatch(format!(
                "{} potential samples for {} grid points",
                potential.len(),
                grid.len()
            )));
        }
        let kinetic = 1.0 / (mass * grid.dx() * grid.dx());
        let half = Complex64::new(0.0, 0.5 * dt);
        let interior = &potential[1..grid.len() - 1];
        let implicit_diag: Vec<Complex64> =
            interior.iter().map(|&v| 1.0 + half * (kinetic + v)).collect();
        let explicit_diag = interior.iter().map(|&v| 1.0 - half * (kinetic + v)).collect();
        // Off-diagonal of H is -kinetic/2.
        let implicit_off = -half * 0.5 * kinetic;
        let band = vec![implicit_off; interior.len() - 1];
        let factors = TridiagonalLu::new(&band, &implicit_diag, &band)?;
        let interior_len = interior.len();

        let mut psi = snapshot.psi.clone();
        psi[0] = Complex64::new(0.0, 0.0);
        psi[grid.len() - 1] = Complex64::new(0.0, 0.0);
        Ok(Self {
            grid,
            potential,
            psi,
            start: snapshot.t,
            steps: 0,
            dt,
            factors,
            explicit_diag,
            explicit_off: -implicit_off,
            rhs: vec![Complex64::new(0.0, 0.0); interior_len],
        })
    }

    pub fn t(&self) -> f64 {
        self.start + self.steps as f64 * self.dt
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn grid(&self) -> &SpatialGrid {
        &self.grid
    }

    pub fn potential(&self) -> &[f64] {
        &self.potential
    }

    pub fn psi(&self) -> &[Complex64] {
        &self.psi
    }

    /// `sum |psi_i|^2 dx`; equal to the trapezoid rule since the walls are zero.
    pub fn norm(&self) -> f64 {
        self.psi.iter().map(|z| z.norm_sqr()).sum::<f64>() * self.grid.dx()
    }

    pub fn step(&mut self) {
        let n = self.psi.len();
        let (psi, diag, off) = (&self.psi, &self.explicit_diag, self.explicit_off);
        self.factors
            .solve_with(&mut self.rhs, |i| diag[i] * psi[i + 1] + off * (psi[i] + psi[i + 2]))
            .expect("band sized at construction");
        self.psi[1..n - 1].copy_from_slice(&self.rhs);
        self.steps += 1;
    }

    pub fn snapshot(&self) -> Snapshot {
        Snapshot::from_psi(self.t(), self.grid, self.psi.clone()).expect("grid-sized state")
    }

    fn check_walls(&self, snap: &Snapshot) -> Result<()> {
        let n = snap.abs2.len();
        let band = WALL_BAND.min(n);
        let edge = snap.abs2[..band]
            .iter()
            .chain(&snap.abs2[n - band..])
            .copied()
            .fold(0.0, f64::max);
        let peak = snap.max_abs2();
        let ratio = if peak > 0.0 { edge / peak } else { 0.0 };
        if ratio > WALL_TOLERANCE {
            return Err(Error::BoundaryContamination { t: snap.t, ratio });
        }
        Ok(())
    }

    /// Advances to `t_end`, returning a snapshot at the step nearest to each of
    /// `snapshot_times` (which must be sorted and inside `[t, t_end]`).
    pub fn run(&mut self, t_end: f64, snapshot_times: &[f64]) -> Result<Vec<Snapshot>> {
        let now = self.t();
        if !(t_end.is_finite() && t_end >= now) {
            return Err(Error::InvalidParameter {
                name: "t_end",
                value: t_end,
                reason: "must not precede the current time",
            });
        }
        if snapshot_times.windows(2).any(|w| w[0] > w[1])
            || snapshot_times.iter().any(|&t| !(now..=t_end).contains(&t))
        {
            return Err(Error::InvalidParameter {
                name: "snapshot_times",
                value: f64::NAN,
                reason: "must be sorted and lie between the current time and t_end",
            });
        }
        let (start, dt) = (self.start, self.dt);
        let step_of = |t: f64| ((t - start) / dt).round() as u64;
        let mut out = Vec::with_capacity(snapshot_times.len());
        for &t in snapshot_times {
            let target = step_of(t);
            while self.steps < target {
                self.step();
            }
            let snap = self.snapshot();
            self.check_walls(&snap)?;
            out.push(snap);
        }
        let last = step_of(t_end);
        while self.steps < last {
            self.step();
        }
        self.check_walls(&self.snapshot())?;
        Ok(out)
    }
}

/// Starts the propagation from the packet synthesised from `start` at `t = 0`.
/// [`Source::ClosedForm`] gives the exact scattering state. The free packet
/// ([`Source::IncomingOnly`]) ignores the barrier under its leading tail, which
/// seeds broadband lattice waves that reach the walls.
///
/// The packet must sit in region I: its centre at least three spatial standard
/// deviations (`1.5 a`) left of the barrier and at least `4 a` from the left wall.
pub fn init_state(
    spectrum: &GaussianSpectrum,
    barrier: &BarrierConfig,
    quad: &QuadratureSpec,
    grid: &SpatialGrid,
    dt: f64,
    start: Source,
) -> Result<CnState> {
    let width = spectrum.spatial_width();
    let x0 = spectrum.x0;
    if x0 + 3.0 * width > 0.0 || x0 - 8.0 * width < grid.xmin() {
        return Err(Error::PacketTooClose { x0, a: spectrum.a });
    }
    let initial = synthesize_snapshot(spectrum, barrier, quad, grid, 0.0, start)?;
    CnState::from_snapshot(&initial, barrier, dt)
}

/// `l2 = sqrt(sum (|a|^2 - |b|^2)^2 dx)` and `linf = max ||a|^2 - |b|^2|`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Discrepancy {
    pub t: f64,
    pub l2: f64,
    pub linf: f64,
    /// Larger of the two snapshot maxima, for relative comparisons.
    pub peak: f64,
}

impl Discrepancy {
    pub fn relative_linf(&self) -> f64 {
        if self.peak > 0.0 {
            self.linf / self.peak
        } else {
            0.0
        }
    }
}

pub fn compare(a: &Snapshot, b: &Snapshot) -> Result<Discrepancy> {
    if !a.grid.same_as(&b.grid) {
        return Err(Error::GridMismatch);
    }
    if (a.t - b.t).abs() > 1e-9 * (1.0 + a.t.abs()) {
        return Err(Error::TimeMismatch(a.t, b.t));
    }
    let (sum, linf) = a
        .abs2
        .iter()
        .zip(&b.abs2)
        .fold((0.0, 0.0f64), |(sum, linf), (x, y)| {
            let d = x - y;
            (sum + d * d, linf.max(d.abs()))
        });
    Ok(Discrepancy {
        t: a.t,
        l2: (sum * a.grid.dx()).sqrt(),
        linf,
        peak: a.max_abs2().max(b.max_abs2()),
    })
}
