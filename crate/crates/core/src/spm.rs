//! Stationary-phase predictions for the packet peaks.
//!
//! Each wave family carries a total phase `theta(k; x, t)`; its peak sits where
//! `d theta / dk` vanishes at the spectral centre `k0`. Applied to the full
//! amplitudes this gives the "naive" delays; applied to each bounce term it gives
//! peaks departing at integer multiples of the in-barrier transit time.

use std::f64::consts::{FRAC_PI_2, PI};
use std::fmt;

use crate::error::{Error, Result};
use crate::grid::Region;
use crate::scattering::{lambda_unwrapped, BarrierConfig, KinematicPoint};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Family {
    Incident,
    Reflected,
    /// Right-moving wave inside the barrier (`A`).
    Forward,
    /// Left-moving wave inside the barrier (`B`).
    Backward,
    Transmitted,
}

impl Family {
    pub const ALL: [Family; 5] = [
        Family::Incident,
        Family::Reflected,
        Family::Forward,
        Family::Backward,
        Family::Transmitted,
    ];

    pub fn label(self) -> &'static str {
        match self {
            Family::Incident => "Inc",
            Family::Reflected => "R",
            Family::Forward => "A",
            Family::Backward => "B",
            Family::Transmitted => "T",
        }
    }

    pub fn from_label(label: &str) -> Option<Family> {
        Family::ALL.into_iter().find(|f| f.label() == label)
    }

    /// Whether `x` lies in the closed region where this family lives. The
    /// barrier edges belong to the families on both sides.
    pub fn covers(self, x: f64, length: f64) -> bool {
        match self {
            Family::Incident | Family::Reflected => x <= 0.0,
            Family::Forward | Family::Backward => (0.0..=length).contains(&x),
            Family::Transmitted => x >= length,
        }
    }

    pub fn region(self) -> Region {
        match self {
            Family::Incident | Family::Reflected => Region::Before,
            Family::Forward | Family::Backward => Region::Inside,
            Family::Transmitted => Region::After,
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// Total phase of one wave family, including the launch phase `-k x0` of the
/// modulation function.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseFamily {
    pub family: Family,
    pub barrier: BarrierConfig,
    pub launch: f64,
}

impl PhaseFamily {
    pub fn new(family: Family, barrier: BarrierConfig) -> Self {
        Self {
            family,
            barrier,
            launch: 0.0,
        }
    }

    pub fn with_launch(mut self, x0: f64) -> Self {
        self.launch = x0;
        self
    }

    pub fn theta(&self, k: f64, x: f64, t: f64) -> Result<f64> {
        theta_eval(self, k, x, t)
    }
}

pub fn theta_eval(phase: &PhaseFamily, k: f64, x: f64, t: f64) -> Result<f64> {
    let barrier = &phase.barrier;
    let kp = barrier.kinematics(k)?;
    let l = barrier.length();
    let lambda = lambda_unwrapped(&kp, l);
    let q = kp.q;
    let free = -kp.energy * t - k * phase.launch;
    let theta = match phase.family {
        Family::Incident => k * x,
        Family::Reflected => lambda - FRAC_PI_2 - k * x,
        Family::Forward => lambda + q * (x - l),
        Family::Backward => lambda + q * (l - x),
        Family::Transmitted => lambda + k * (x - l),
    };
    Ok(theta + free)
}

/// Exact derivative `d lambda / dk`.
pub fn lambda_prime(k: f64, barrier: &BarrierConfig) -> Result<f64> {
    let kp = barrier.kinematics(k)?;
    Ok(lambda_prime_at(&kp, barrier.length()))
}

pub(crate) fn lambda_prime_at(kp: &KinematicPoint, length: f64) -> f64 {
    let (k, q) = (kp.k, kp.q);
    let (k2, q2) = (k * k, q * q);
    let ql = q * length;
    let (s, c) = ql.sin_cos();
    let diff2 = (k2 - q2) * (k2 - q2);
    let numerator = (k2 + q2) * k2 * ql - diff2 * s * c;
    let denominator = 4.0 * k2 * q2 + diff2 * s * s;
    2.0 / q * numerator / denominator
}

/// `lambda'` with the `sin(ql)` terms dropped; exact when `ql` is a multiple of `pi`.
pub fn lambda_prime_resonant(kp: &KinematicPoint, length: f64) -> f64 {
    (kp.k * kp.k + kp.q * kp.q) * length / (2.0 * kp.q * kp.q)
}

/// Time at which a packet launched from `x0` with spectral centre `k0` reaches
/// `x = 0` under free propagation.
pub fn impact_time(x0: f64, k0: f64, mass: f64) -> f64 {
    -mass * x0 / k0
}

/// One-way group transit time through the barrier, `m l / q0`.
pub fn transit_time(kp: &KinematicPoint, barrier: &BarrierConfig) -> f64 {
    barrier.mass() * barrier.length() / kp.q
}

/// A linear peak trajectory `x(t) = emergence_x + velocity (t - emergence_t)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpmPrediction {
    pub family: Family,
    /// `None` for a prediction made from the full amplitude.
    pub term_index: Option<usize>,
    pub velocity: f64,
    pub delay: f64,
    pub emergence_x: f64,
    pub emergence_t: f64,
}

impl SpmPrediction {
    pub fn position(&self, t: f64) -> f64 {
        self.emergence_x + self.velocity * (t - self.emergence_t)
    }
}

/// Delays read off the stationary phase of the full amplitudes, relative to the
/// impact of the incoming peak on `x = 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NaivePredictions {
    pub k0: f64,
    pub q0: f64,
    pub mass: f64,
    pub length: f64,
    pub lambda_prime: f64,
    pub dt_r: f64,
    pub dt_a: f64,
    pub dt_b_at_x0: f64,
    pub t_t: f64,
    /// Set when any of the delays is negative (happens off resonance).
    pub negative_delay: bool,
}

pub fn naive_predictions(k0: f64, barrier: &BarrierConfig) -> Result<NaivePredictions> {
    let kp = barrier.kinematics(k0)?;
    let m = barrier.mass();
    let l = barrier.length();
    let lp = lambda_prime_at(&kp, l);
    let dt_r = m / k0 * lp;
    let dt_a = dt_r - m * l / kp.q;
    // theta_B stationary at x = 0: lambda' + (k/q) l = (k/m) t.
    let dt_b_at_x0 = m / k0 * (lp + k0 / kp.q * l);
    let negative_delay = dt_r < 0.0 || dt_a < 0.0;
    if negative_delay {
        log::warn!("naive stationary phase gives a negative delay at k0 = {k0}: dt_R = {dt_r}, dt_A = {dt_a}");
    }
    Ok(NaivePredictions {
        k0,
        q0: kp.q,
        mass: m,
        length: l,
        lambda_prime: lp,
        dt_r,
        dt_a,
        dt_b_at_x0,
        t_t: dt_r,
        negative_delay,
    })
}

impl NaivePredictions {
    /// Trajectories of the four scattered families, emerging at the barrier edges.
    pub fn trajectories(&self, impact: f64) -> Vec<SpmPrediction> {
        let (k0, q0, m, l) = (self.k0, self.q0, self.mass, self.length);
        let row = |family, velocity, delay, emergence_x| SpmPrediction {
            family,
            term_index: None,
            velocity,
            delay,
            emergence_x,
            emergence_t: impact + delay,
        };
        vec![
            row(Family::Reflected, -k0 / m, self.dt_r, 0.0),
            row(Family::Forward, q0 / m, self.dt_a, 0.0),
            row(Family::Backward, -q0 / m, self.dt_r, l),
            row(Family::Transmitted, k0 / m, self.t_t, l),
        ]
    }

    /// The interval after impact during which none of the scattered families has
    /// a predicted peak anywhere, or `None` when some peak appears immediately.
    pub fn peakless_interval(&self) -> Option<(f64, f64)> {
        // Peaks exist once they emerge at a barrier edge: R and A at x = 0, B and
        // T at x = l. B reaches x = 0 even later.
        let first = self.dt_r.min(self.dt_a).min(self.t_t);
        (first > 0.0).then_some((0.0, first))
    }
}

/// A transmission resonance `q0 l = n pi`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResonanceSpec {
    pub n: u32,
    pub q0: f64,
    pub k0: f64,
}

pub fn resonance_spec(barrier: &BarrierConfig, n: i64) -> Result<ResonanceSpec> {
    if n <= 0 {
        return Err(Error::NonPositiveIndex(n));
    }
    let n = u32::try_from(n).map_err(|_| Error::NonPositiveIndex(n))?;
    let q0 = n as f64 * PI / barrier.length();
    let k0 = (q0 * q0 + 2.0 * barrier.mass() * barrier.height()).sqrt();
    Ok(ResonanceSpec { n, q0, k0 })
}

/// Peak trajectories of the individual bounce terms. Every bounce off a
/// discontinuity is instantaneous, so the delays are whole numbers of one-way
/// transits `m l / q0`: `R_n` leaves `x = 0` after `2(n-1)` of them, `T_n`
/// leaves `x = l` after `2n - 1`.
pub fn per_term_predictions(
    k0: f64,
    barrier: &BarrierConfig,
    n_max: usize,
    impact: f64,
) -> Result<Vec<SpmPrediction>> {
    if n_max < 1 {
        return Err(Error::InvalidCount(n_max));
    }
    let kp = barrier.kinematics(k0)?;
    let m = barrier.mass();
    let l = barrier.length();
    let transit = transit_time(&kp, barrier);
    let mut out = Vec::with_capacity(4 * n_max);
    for n in 1..=n_max {
        let even = 2.0 * (n - 1) as f64 * transit;
        let odd = (2 * n - 1) as f64 * transit;
        for (family, velocity, delay, emergence_x) in [
            (Family::Reflected, -k0 / m, even, 0.0),
            (Family::Forward, kp.q / m, even, 0.0),
            (Family::Backward, -kp.q / m, odd, l),
            (Family::Transmitted, k0 / m, odd, l),
        ] {
            out.push(SpmPrediction {
                family,
                term_index: Some(n),
                velocity,
                delay,
                emergence_x,
                emergence_t: impact + delay,
            });
        }
    }
    Ok(out)
}
