//! Wave packets built by integrating the plane-wave solutions against the
//! momentum profile:
//!
//! ```text
//! psi(x, t) = int g(k) u_k(x) exp(-i E t) dk
//! ```
//!
//! where `u_k` is the stationary solution of the chosen source. The integral is
//! discretised once per source with a composite Gauss-Legendre rule; every
//! sample is then a fixed-order sum over the nodes, so results do not depend on
//! how the grid points are distributed across threads.

use std::fmt;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::grid::{Region, SpatialGrid, Snapshot};
use crate::peaks::{local_maxima, DEFAULT_THRESHOLD, MIN_SEPARATION};
use crate::quadrature::CompositeRule;
use crate::scattering::{closed_form_amplitudes, series_partial_sum, series_term, BarrierConfig};
use crate::spectrum::GaussianSpectrum;
use crate::spm::Family;

/// Minimum number of grid points per shortest wavelength in the packet.
pub const POINTS_PER_WAVELENGTH: f64 = 8.0;
/// Default time step for probing arrival times.
pub const DEFAULT_PROBE_DT: f64 = 0.01;

/// Discretisation of the momentum integral.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureSpec {
    /// The window is `k0 -/+ half_width / a`.
    pub half_width: f64,
    pub nodes: usize,
    /// Gauss-Legendre points per panel; `nodes` must be a multiple of it.
    pub panel_order: usize,
    /// Raise the lower window edge to the spectrum cutoff instead of failing.
    pub clip_to_cutoff: bool,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self {
            half_width: 8.0,
            nodes: 2048,
            panel_order: 16,
            clip_to_cutoff: true,
        }
    }
}

impl QuadratureSpec {
    pub fn with_nodes(mut self, nodes: usize) -> Self {
        self.nodes = nodes;
        self
    }

    pub fn window(&self, spectrum: &GaussianSpectrum) -> Result<(f64, f64)> {
        if !(self.half_width.is_finite() && self.half_width > 0.0) {
            return Err(Error::InvalidQuadrature(format!("half width {}", self.half_width)));
        }
        let lower = spectrum.k0 - self.half_width / spectrum.a;
        let upper = spectrum.k0 + self.half_width / spectrum.a;
        if lower < spectrum.kmin && !self.clip_to_cutoff {
            return Err(Error::WindowBelowCutoff {
                lower,
                upper,
                cutoff: spectrum.kmin,
            });
        }
        Ok((lower.max(spectrum.kmin), upper))
    }

    pub fn rule(&self, spectrum: &GaussianSpectrum) -> Result<CompositeRule> {
        if self.nodes < 64 {
            return Err(Error::InvalidQuadrature(format!("{} nodes, need at least 64", self.nodes)));
        }
        if self.panel_order == 0 || !self.nodes.is_multiple_of(self.panel_order) {
            return Err(Error::InvalidQuadrature(format!(
                "{} nodes is not a multiple of the panel order {}",
                self.nodes, self.panel_order
            )));
        }
        let (lower, upper) = self.window(spectrum)?;
        CompositeRule::new(lower, upper, self.nodes / self.panel_order, self.panel_order)
    }
}

/// Which plane-wave solution is integrated.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Source {
    /// Exact amplitudes in all three regions.
    ClosedForm,
    /// Incident wave plus the first `N` bounce terms of every family.
    Series(usize),
    /// A single bounce term, supported only in its own region.
    Term(Family, usize),
    /// The free packet, on the whole line.
    IncomingOnly,
    /// The whole reflected wave `R(k) exp(-ikx)`, in region I only.
    Reflected,
}

impl Source {
    /// Short tag used in file names: `closed`, `series3`, `termR2`, `incoming`.
    pub fn tag(&self) -> String {
        match self {
            Source::ClosedForm => "closed".into(),
            Source::Series(n) => format!("series{n}"),
            Source::Term(f, n) => format!("term{}{n}", f.label()),
            Source::IncomingOnly => "incoming".into(),
            Source::Reflected => "reflected".into(),
        }
    }
}

impl fmt::Display for Source {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.tag())
    }
}

/// Per-node coefficients of the region solutions, already multiplied by the
/// quadrature weight and `g(k)`.
#[derive(Debug, Clone, Copy)]
struct Node {
    k: f64,
    q: f64,
    energy: f64,
    incident: Complex64,
    r: Complex64,
    a: Complex64,
    b: Complex64,
    t: Complex64,
}

/// A source discretised on the momentum rule, ready to be evaluated anywhere.
#[derive(Debug, Clone)]
pub struct PacketIntegrand {
    barrier: BarrierConfig,
    source: Source,
    k_max: f64,
    nodes: Vec<Node>,
}

impl PacketIntegrand {
    pub fn new(
        spectrum: &GaussianSpectrum,
        barrier: &BarrierConfig,
        quad: &QuadratureSpec,
        source: Source,
    ) -> Result<Self> {
        let rule = quad.rule(spectrum)?;
        let zero = Complex64::new(0.0, 0.0);
        let one = Complex64::new(1.0, 0.0);
        match source {
            Source::Series(0) => return Err(Error::InvalidCount(0)),
            Source::Term(_, 0) => return Err(Error::InvalidIndex(0)),
            Source::Term(Family::Incident, _) => {
                return Err(Error::InvalidParameter {
                    name: "source",
                    value: f64::NAN,
                    reason: "the incident wave has no bounce terms",
                })
            }
            _ => {}
        }
        let nodes = rule
            .points()
            .iter()
            .zip(rule.weights())
            .map(|(&k, &w)| {
                let kp = barrier.kinematics(k)?;
                let weight = w * spectrum.amplitude(k);
                let (incident, r, a, b, t) = match source {
                    Source::ClosedForm => {
                        let amp = closed_form_amplitudes(&kp, barrier);
                        (one, amp.r, amp.a, amp.b, amp.t)
                    }
                    Source::Series(n) => {
                        let amp = series_partial_sum(&kp, barrier, n)?;
                        (one, amp.r, amp.a, amp.b, amp.t)
                    }
                    Source::Term(family, n) => {
                        let term = series_term(&kp, barrier, n)?;
                        match family {
                            Family::Reflected => (zero, term.r, zero, zero, zero),
                            Family::Forward => (zero, zero, term.a, zero, zero),
                            Family::Backward => (zero, zero, zero, term.b, zero),
                            Family::Transmitted => (zero, zero, zero, zero, term.t),
                            Family::Incident => unreachable!("rejected above"),
                        }
                    }
                    Source::IncomingOnly => (one, zero, zero, zero, zero),
                    Source::Reflected => {
                        let amp = closed_form_amplitudes(&kp, barrier);
                        (zero, amp.r, zero, zero, zero)
                    }
                };
                Ok(Node {
                    k,
                    q: kp.q,
                    energy: kp.energy,
                    incident: weight * incident,
                    r: weight * r,
                    a: weight * a,
                    b: weight * b,
                    t: weight * t,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            barrier: *barrier,
            source,
            k_max: rule.bounds().1,
            nodes,
        })
    }

    pub fn source(&self) -> Source {
        self.source
    }

    /// Upper edge of the momentum window.
    pub fn k_max(&self) -> f64 {
        self.k_max
    }

    /// `sum_j c_j(x) exp(-i E_j t)` with spatial factors `c_j(x)`.
    fn spatial_factors(&self, x: f64) -> impl Iterator<Item = (f64, Complex64)> + '_ {
        let length = self.barrier.length();
        let region = match self.source {
            Source::IncomingOnly => Region::Before,
            // A lone term is also evaluated on the edge it emerges from.
            Source::Term(family, _) if family.covers(x, length) => family.region(),
            Source::Reflected if x <= 0.0 => Region::Before,
            _ => Region::of(x, length),
        };
        self.nodes.iter().map(move |n| {
            let c = match region {
                Region::Before => {
                    let fwd = Complex64::cis(n.k * x);
                    n.incident * fwd + n.r * fwd.conj()
                }
                Region::Inside => {
                    let fwd = Complex64::cis(n.q * x);
                    n.a * fwd + n.b * fwd.conj()
                }
                Region::After => n.t * Complex64::cis(n.k * x),
            };
            (n.energy, c)
        })
    }

    pub fn psi(&self, x: f64, t: f64) -> Complex64 {
        self.spatial_factors(x)
            .map(|(energy, c)| c * Complex64::cis(-energy * t))
            .sum()
    }

    /// Samples `psi(x, t)` for a list of times at a fixed position.
    pub fn time_series(&self, x: f64, times: &[f64]) -> Vec<Complex64> {
        let factors: Vec<(f64, Complex64)> = self.spatial_factors(x).collect();
        times
            .par_iter()
            .map(|&t| {
                factors
                    .iter()
                    .map(|&(energy, c)| c * Complex64::cis(-energy * t))
                    .sum()
            })
            .collect()
    }

    pub fn snapshot(&self, grid: &SpatialGrid, t: f64) -> Result<Snapshot> {
        check_grid(grid, &self.barrier, self.k_max)?;
        let phases: Vec<Complex64> = self
            .nodes
            .iter()
            .map(|n| Complex64::cis(-n.energy * t))
            .collect();
        let psi = (0..grid.len())
            .into_par_iter()
            .map(|i| {
                self.spatial_factors(grid.x(i))
                    .zip(&phases)
                    .map(|((_, c), &phase)| c * phase)
                    .sum()
            })
            .collect();
        Snapshot::from_psi(t, *grid, psi)
    }
}

fn check_grid(grid: &SpatialGrid, barrier: &BarrierConfig, k_max: f64) -> Result<()> {
    if !(grid.xmin() < 0.0 && barrier.length() < grid.xmax()) {
        return Err(Error::InvalidGrid(format!(
            "[{}, {}] must enclose the barrier [0, {}]",
            grid.xmin(),
            grid.xmax(),
            barrier.length()
        )));
    }
    let limit = 2.0 * std::f64::consts::PI / (POINTS_PER_WAVELENGTH * k_max);
    if grid.dx() > limit {
        return Err(Error::UnresolvedGrid {
            dx: grid.dx(),
            k_max,
            limit,
        });
    }
    Ok(())
}

pub fn synthesize_snapshot(
    spectrum: &GaussianSpectrum,
    barrier: &BarrierConfig,
    quad: &QuadratureSpec,
    grid: &SpatialGrid,
    t: f64,
    source: Source,
) -> Result<Snapshot> {
    if !t.is_finite() {
        return Err(Error::InvalidParameter {
            name: "t",
            value: t,
            reason: "must be finite",
        });
    }
    PacketIntegrand::new(spectrum, barrier, quad, source)?.snapshot(grid, t)
}

/// Times in `[t_start, t_end]` at which `|psi(probe_x, t)|^2` has a local
/// maximum, found on a uniform time grid of spacing `dt` with the same rules as
/// spatial peak detection.
pub fn arrival_times_with(
    integrand: &PacketIntegrand,
    probe_x: f64,
    t_range: (f64, f64),
    dt: f64,
    threshold_fraction: f64,
) -> Result<Vec<f64>> {
    let (t_start, t_end) = t_range;
    if !(t_start.is_finite() && t_end.is_finite() && t_start < t_end) {
        return Err(Error::InvalidParameter {
            name: "t_range",
            value: t_end - t_start,
            reason: "must be a finite, non-empty interval",
        });
    }
    let samples = ((t_end - t_start) / dt).round() as usize + 1;
    let times: Vec<f64> = (0..samples).map(|i| t_start + i as f64 * dt).collect();
    let abs2: Vec<f64> = integrand
        .time_series(probe_x, &times)
        .iter()
        .map(|z| z.norm_sqr())
        .collect();
    let global = abs2.iter().copied().fold(0.0, f64::max);
    let found = local_maxima(&abs2, 0..abs2.len(), threshold_fraction * global, MIN_SEPARATION);
    if global == 0.0 || found.is_empty() {
        return Err(Error::NoPeakFound);
    }
    Ok(found.into_iter().map(|(i, _)| t_start + i * dt).collect())
}

pub fn arrival_times(
    spectrum: &GaussianSpectrum,
    barrier: &BarrierConfig,
    quad: &QuadratureSpec,
    probe_x: f64,
    t_range: (f64, f64),
    source: Source,
) -> Result<Vec<f64>> {
    if let Source::Term(family, _) = source {
        if !family.covers(probe_x, barrier.length()) {
            return Err(Error::InvalidParameter {
                name: "probe_x",
                value: probe_x,
                reason: "outside the region of the requested term",
            });
        }
    }
    let integrand = PacketIntegrand::new(spectrum, barrier, quad, source)?;
    arrival_times_with(&integrand, probe_x, t_range, DEFAULT_PROBE_DT, DEFAULT_THRESHOLD)
}
