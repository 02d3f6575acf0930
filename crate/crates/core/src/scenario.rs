//! One fully specified run: physical parameters plus numerical settings, and
//! the derived objects every stage needs.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::grid::SpatialGrid;
use crate::scattering::{positive, BarrierConfig};
use crate::spectrum::GaussianSpectrum;
use crate::spm::impact_time;
use crate::synthesis::{QuadratureSpec, Source};
use crate::tdse::default_time_step;

#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub mass: f64,
    pub height: f64,
    pub length: f64,
    pub k0: f64,
    pub a: f64,
    pub x0: f64,
    pub xmin: f64,
    pub xmax: f64,
    /// Requested spacing; the grid shrinks it so both barrier edges are nodes.
    pub dx: f64,
    /// Crank-Nicolson step; `None` picks [`default_time_step`].
    pub dt: Option<f64>,
    pub quad_nodes: usize,
    /// The momentum window is `k0 +- quad_half_width / a`.
    pub quad_half_width: f64,
    pub times: Vec<f64>,
    pub series_terms: usize,
    pub sweep_points: usize,
    pub sweep_k_max: f64,
    pub peak_threshold: f64,
    /// Initial state of the Crank-Nicolson run.
    pub cn_start: Source,
}

impl Scenario {
    /// Numerical defaults around the given physics.
    pub fn with_physics(mass: f64, height: f64, length: f64, k0: f64, a: f64, x0: f64) -> Self {
        let quad = QuadratureSpec::default();
        Self {
            mass,
            height,
            length,
            k0,
            a,
            x0,
            xmin: -60.0,
            xmax: 60.0,
            dx: 0.01,
            dt: None,
            quad_nodes: quad.nodes,
            quad_half_width: quad.half_width,
            times: vec![0.0, 5.0, 8.0, 12.0],
            series_terms: 3,
            sweep_points: 1000,
            sweep_k_max: 5.0,
            peak_threshold: crate::peaks::DEFAULT_THRESHOLD,
            cn_start: Source::ClosedForm,
        }
    }

    /// `m = 1`, `V0 = 2`, `k0 = 3`, `l = pi/sqrt 5` (first transmission
    /// resonance), `a = 8`, `x0 = -15`.
    pub fn canonical() -> Self {
        Self::with_physics(1.0, 2.0, PI / 5f64.sqrt(), 3.0, 8.0, -15.0)
    }

    pub fn barrier(&self) -> Result<BarrierConfig> {
        BarrierConfig::new(self.height, self.length, self.mass)
    }

    pub fn spectrum(&self) -> Result<GaussianSpectrum> {
        GaussianSpectrum::new(self.a, self.k0, self.x0, &self.barrier()?)
    }

    pub fn grid(&self) -> Result<SpatialGrid> {
        SpatialGrid::aligned(self.xmin, self.xmax, self.dx, self.length)
    }

    pub fn quadrature(&self) -> QuadratureSpec {
        QuadratureSpec {
            half_width: self.quad_half_width,
            ..QuadratureSpec::default().with_nodes(self.quad_nodes)
        }
    }

    pub fn time_step(&self) -> Result<f64> {
        match self.dt {
            Some(dt) => positive("dt", dt).map(|_| dt),
            None => Ok(default_time_step(self.mass, self.grid()?.dx())),
        }
    }

    /// Time at which the free incoming peak reaches `x = 0`.
    pub fn impact_time(&self) -> f64 {
        impact_time(self.x0, self.k0, self.mass)
    }

    /// Lower end of the amplitude sweep, just above the barrier threshold.
    pub fn sweep_k_min(&self) -> Result<f64> {
        Ok(1.01 * self.barrier()?.threshold_momentum())
    }

    /// The `sweep_points` momenta `k_min + (k_max - k_min) i / n`, `i = 1..=n`.
    pub fn sweep(&self) -> Result<Vec<f64>> {
        let lo = self.sweep_k_min()?;
        let hi = self.sweep_k_max;
        if !(hi > lo) {
            return Err(Error::InvalidParameter {
                name: "sweep_k_max",
                value: hi,
                reason: "must exceed 1.01 times the barrier threshold momentum",
            });
        }
        if self.sweep_points == 0 {
            return Err(Error::InvalidCount(0));
        }
        let n = self.sweep_points as f64;
        Ok((1..=self.sweep_points).map(|i| lo + (hi - lo) * i as f64 / n).collect())
    }

    /// Checks every derived object and the remaining numerical settings.
    pub fn validate(&self) -> Result<()> {
        let spectrum = self.spectrum()?;
        self.grid()?;
        self.quadrature().rule(&spectrum)?;
        self.time_step()?;
        self.sweep()?;
        if self.series_terms == 0 {
            return Err(Error::InvalidCount(0));
        }
        if !(self.peak_threshold > 0.0 && self.peak_threshold < 1.0) {
            return Err(Error::InvalidParameter {
                name: "peak_threshold",
                value: self.peak_threshold,
                reason: "must lie in (0, 1)",
            });
        }
        if let Some(&t) = self.times.iter().find(|t| !t.is_finite() || **t < 0.0) {
            return Err(Error::InvalidParameter {
                name: "times",
                value: t,
                reason: "must be finite and non-negative",
            });
        }
        if self.times.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidParameter {
                name: "times",
                value: f64::NAN,
                reason: "must be strictly increasing",
            });
        }
        match self.cn_start {
            Source::ClosedForm | Source::IncomingOnly => Ok(()),
            _ => Err(Error::InvalidParameter {
                name: "cn_start",
                value: f64::NAN,
                reason: "must be the closed-form or the incoming packet",
            }),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_derived_objects() {
        let s = Scenario::canonical();
        s.validate().unwrap();
        assert_eq!(s.impact_time(), 5.0);
        let grid = s.grid().unwrap();
        assert!(grid.nearest_index(0.0).is_some());
        assert!((s.length / grid.dx() - 141.0).abs() < 1e-9);
        let dt = s.time_step().unwrap();
        assert!(dt <= 0.25 * grid.dx() * grid.dx());
        for t in &s.times {
            assert!((t / dt - (t / dt).round()).abs() < 1e-6);
        }
        let sweep = s.sweep().unwrap();
        assert_eq!(sweep.len(), 1000);
        assert!(sweep[0] > 2.02 && sweep[999] == 5.0);
    }

    #[test]
    fn validation_failures() {
        let mut s = Scenario::canonical();
        s.times = vec![5.0, 0.0];
        assert!(s.validate().is_err());
        let mut s = Scenario::canonical();
        s.k0 = 1.5;
        assert!(matches!(s.validate(), Err(Error::BelowBarrier { .. })));
        let mut s = Scenario::canonical();
        s.cn_start = Source::Series(3);
        assert!(s.validate().is_err());
        let mut s = Scenario::canonical();
        s.sweep_k_max = 2.0;
        assert!(s.validate().is_err());
    }
}
