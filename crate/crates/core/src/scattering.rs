//! Plane-wave scattering by a rectangular barrier of height `V0` on `0 < x < l`,
//! for energies above the barrier top (`hbar = 1`).
//!
//! Region solutions for an incident `exp(ikx)`:
//!
//! ```text
//! x < 0      exp(ikx) + R exp(-ikx)
//! 0 < x < l  A exp(iqx) + B exp(-iqx)
//! x > l      T exp(ikx)
//! ```
//!
//! The amplitudes are available in closed form and as the geometric series of
//! bounces between the two discontinuities, with common ratio
//! `rho = ((k - q)/(k + q))^2 exp(2iql)`.

use std::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Relative floor below which `q/k` is treated as degenerate.
pub const DEGENERATE_Q_RATIO: f64 = 1e-6;

/// A rectangular barrier: height `V0`, length `l` and particle mass `m`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BarrierConfig {
    height: f64,
    length: f64,
    mass: f64,
}

impl BarrierConfig {
    pub fn new(height: f64, length: f64, mass: f64) -> Result<Self> {
        positive("V0", height)?;
        positive("l", length)?;
        positive("m", mass)?;
        Ok(Self {
            height,
            length,
            mass,
        })
    }

    pub fn height(&self) -> f64 {
        self.height
    }

    pub fn length(&self) -> f64 {
        self.length
    }

    pub fn mass(&self) -> f64 {
        self.mass
    }

    /// Momentum at which the energy equals the barrier top, `sqrt(2 m V0)`.
    pub fn threshold_momentum(&self) -> f64 {
        (2.0 * self.mass * self.height).sqrt()
    }

    /// Potential energy at `x`. The discontinuities take the midpoint value.
    pub fn potential(&self, x: f64) -> f64 {
        if x > 0.0 && x < self.length {
            self.height
        } else if x == 0.0 || x == self.length {
            0.5 * self.height
        } else {
            0.0
        }
    }

    pub fn kinematics(&self, k: f64) -> Result<KinematicPoint> {
        kinematics(k, self)
    }
}

pub(crate) fn positive(name: &'static str, value: f64) -> Result<()> {
    if value.is_finite() && value > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter {
            name,
            value,
            reason: "must be finite and positive",
        })
    }
}

/// Incident momentum `k`, in-barrier momentum `q` and energy `E = k^2/2m`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KinematicPoint {
    pub k: f64,
    pub q: f64,
    pub energy: f64,
}

pub fn kinematics(k: f64, barrier: &BarrierConfig) -> Result<KinematicPoint> {
    positive("k", k)?;
    let q2 = k * k - 2.0 * barrier.mass * barrier.height;
    if q2 <= 0.0 {
        return Err(Error::BelowBarrier {
            k,
            threshold: barrier.threshold_momentum(),
        });
    }
    let q = q2.sqrt();
    if q < DEGENERATE_Q_RATIO * k {
        return Err(Error::DegenerateMomentum { k, q });
    }
    Ok(KinematicPoint {
        k,
        q,
        energy: k * k / (2.0 * barrier.mass),
    })
}

/// Principal value of `arctan[(k^2 + q^2) tan(ql) / 2kq]`, in `(-pi/2, pi/2)`.
pub fn lambda_principal(kp: &KinematicPoint, length: f64) -> f64 {
    let (k, q) = (kp.k, kp.q);
    ((k * k + q * q) * (q * length).tan() / (2.0 * k * q)).atan()
}

/// Continuous branch of the transmission phase: the principal arctan shifted by
/// `n pi` on the `n`-th branch of `tan(ql)`. It equals `ql` whenever `ql` is a
/// multiple of `pi/2` and increases monotonically with `k`.
pub fn lambda_unwrapped(kp: &KinematicPoint, length: f64) -> f64 {
    let (k, q) = (kp.k, kp.q);
    let phase = q * length;
    let branch = (phase / PI).round();
    let reduced = phase - branch * PI;
    branch * PI + ((k * k + q * q) * reduced.tan() / (2.0 * k * q)).atan()
}

/// `D(k) = sqrt(4 k^2 q^2 + (k^2 - q^2)^2 sin^2(ql))`.
pub fn modulus_factor(kp: &KinematicPoint, length: f64) -> f64 {
    let (k, q) = (kp.k, kp.q);
    let s = (q * length).sin();
    let diff = k * k - q * q;
    (4.0 * k * k * q * q + diff * diff * s * s).sqrt()
}

/// Complex amplitudes at one momentum, together with the modulus `D` and the
/// transmission phase `lambda`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AmplitudeSet {
    pub r: Complex64,
    pub t: Complex64,
    pub a: Complex64,
    pub b: Complex64,
    pub d: f64,
    /// Continuous (unwrapped) branch; the one used to build the amplitudes.
    pub lambda: f64,
    pub lambda_principal: f64,
}

impl AmplitudeSet {
    /// Stationary solution `psi(x)` and its derivative for an incident `exp(ikx)`.
    pub fn stationary_state(&self, kp: &KinematicPoint, length: f64, x: f64) -> (Complex64, Complex64) {
        let i = Complex64::i();
        let (k, q) = (kp.k, kp.q);
        if x < 0.0 {
            let fwd = Complex64::cis(k * x);
            let back = self.r * Complex64::cis(-k * x);
            (fwd + back, i * k * (fwd - back))
        } else if x <= length {
            let fwd = self.a * Complex64::cis(q * x);
            let back = self.b * Complex64::cis(-q * x);
            (fwd + back, i * q * (fwd - back))
        } else {
            let fwd = self.t * Complex64::cis(k * x);
            (fwd, i * k * fwd)
        }
    }

    pub fn reflection_probability(&self) -> f64 {
        self.r.norm_sqr()
    }

    pub fn transmission_probability(&self) -> f64 {
        self.t.norm_sqr()
    }
}

pub fn closed_form_amplitudes(kp: &KinematicPoint, barrier: &BarrierConfig) -> AmplitudeSet {
    let (k, q) = (kp.k, kp.q);
    let l = barrier.length;
    let d = modulus_factor(kp, l);
    let lambda = lambda_unwrapped(kp, l);
    let ql = q * l;

    let a = Complex64::from_polar(k * (k + q) / d, lambda - ql);
    let b = Complex64::from_polar(k * (q - k) / d, lambda + ql);
    let r = Complex64::from_polar((k * k - q * q) * ql.sin() / d, lambda - FRAC_PI_2);
    let t = Complex64::from_polar(2.0 * k * q / d, lambda - k * l);

    AmplitudeSet {
        r,
        t,
        a,
        b,
        d,
        lambda,
        lambda_principal: lambda_principal(kp, l),
    }
}

/// The `n`-th bounce contribution to each amplitude.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesTerm {
    pub n: usize,
    pub r: Complex64,
    pub t: Complex64,
    pub a: Complex64,
    pub b: Complex64,
    pub rho: Complex64,
}

/// Common ratio of successive bounces, `((k - q)/(k + q))^2 exp(2iql)`.
pub fn series_ratio(kp: &KinematicPoint, length: f64) -> Complex64 {
    let ratio = (kp.k - kp.q) / (kp.k + kp.q);
    Complex64::from_polar(ratio * ratio, 2.0 * kp.q * length)
}

/// First terms of the bounce series; `R_2` is returned in the `r` slot alongside
/// `A_1`, `B_1`, `T_1` because the reflected family starts its recursion one
/// index later.
fn leading_terms(kp: &KinematicPoint, length: f64) -> (Complex64, SeriesTerm) {
    let (k, q) = (kp.k, kp.q);
    let sum = k + q;
    let sum2 = sum * sum;
    let r1 = Complex64::new((k - q) / sum, 0.0);
    let a1 = Complex64::new(2.0 * k / sum, 0.0);
    let b1 = Complex64::from_polar(2.0 * k * (q - k) / sum2, 2.0 * q * length);
    let t1 = Complex64::from_polar(4.0 * k * q / sum2, (q - k) * length);
    let r2 = (q / k) * a1 * b1;
    let second = SeriesTerm {
        n: 1,
        r: r2,
        t: t1,
        a: a1,
        b: b1,
        rho: series_ratio(kp, length),
    };
    (r1, second)
}

pub fn series_term(kp: &KinematicPoint, barrier: &BarrierConfig, n: usize) -> Result<SeriesTerm> {
    if n < 1 {
        return Err(Error::InvalidIndex(n));
    }
    let (r1, lead) = leading_terms(kp, barrier.length);
    let rho = lead.rho;
    let scale = rho.powu((n - 1) as u32);
    let r = if n == 1 {
        r1
    } else {
        lead.r * rho.powu((n - 2) as u32)
    };
    Ok(SeriesTerm {
        n,
        r,
        t: lead.t * scale,
        a: lead.a * scale,
        b: lead.b * scale,
        rho,
    })
}

/// Iterator over the bounce terms `n = 1, 2, ...`, built by repeated
/// multiplication with the common ratio.
#[derive(Debug, Clone)]
pub struct SeriesTerms {
    next: SeriesTerm,
    pending_r: Complex64,
}

impl SeriesTerms {
    pub fn new(kp: &KinematicPoint, barrier: &BarrierConfig) -> Self {
        let (r1, lead) = leading_terms(kp, barrier.length);
        Self {
            next: SeriesTerm { r: r1, ..lead },
            pending_r: lead.r,
        }
    }
}

impl Iterator for SeriesTerms {
    type Item = SeriesTerm;

    fn next(&mut self) -> Option<SeriesTerm> {
        let current = self.next;
        let rho = current.rho;
        self.next = SeriesTerm {
            n: current.n + 1,
            r: self.pending_r,
            t: current.t * rho,
            a: current.a * rho,
            b: current.b * rho,
            rho,
        };
        self.pending_r *= rho;
        Some(current)
    }
}

/// Sum of the first `count` bounce terms, in increasing `n`. `d` and `lambda`
/// are the exact values at this momentum.
pub fn series_partial_sum(
    kp: &KinematicPoint,
    barrier: &BarrierConfig,
    count: usize,
) -> Result<AmplitudeSet> {
    if count < 1 {
        return Err(Error::InvalidCount(count));
    }
    let zero = Complex64::new(0.0, 0.0);
    let (r, t, a, b) = SeriesTerms::new(kp, barrier)
        .take(count)
        .fold((zero, zero, zero, zero), |(r, t, a, b), term| {
            (r + term.r, t + term.t, a + term.a, b + term.b)
        });
    let l = barrier.length;
    Ok(AmplitudeSet {
        r,
        t,
        a,
        b,
        d: modulus_factor(kp, l),
        lambda: lambda_unwrapped(kp, l),
        lambda_principal: lambda_principal(kp, l),
    })
}

/// Partial sum of the bounce probabilities and a bound on what remains.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PartitionReport {
    pub terms: usize,
    pub partial_sum: f64,
    /// `sum_{n > N} (|R_n|^2 + |T_n|^2)`, exact for the geometric tail.
    pub tail_bound: f64,
}

pub fn probability_partition(
    kp: &KinematicPoint,
    barrier: &BarrierConfig,
    count: usize,
) -> Result<PartitionReport> {
    if count < 1 {
        return Err(Error::InvalidCount(count));
    }
    let mut terms = SeriesTerms::new(kp, barrier);
    let partial_sum = terms
        .by_ref()
        .take(count)
        .map(|term| term.r.norm_sqr() + term.t.norm_sqr())
        .sum();
    let omitted = terms.next().expect("series is infinite");
    let decay = 1.0 - omitted.rho.norm_sqr();
    Ok(PartitionReport {
        terms: count,
        partial_sum,
        tail_bound: (omitted.r.norm_sqr() + omitted.t.norm_sqr()) / decay,
    })
}

/// Smallest term count whose partition tail bound is below `tolerance`.
pub fn terms_for_tail(
    kp: &KinematicPoint,
    barrier: &BarrierConfig,
    tolerance: f64,
) -> Result<usize> {
    positive("tolerance", tolerance)?;
    let rho2 = series_ratio(kp, barrier.length).norm_sqr();
    let decay = 1.0 - rho2;
    // |rho| < 1 strictly, so the loop terminates; the cap guards rho2 -> 1.
    let mut terms = SeriesTerms::new(kp, barrier).skip(1);
    for count in 1..=100_000 {
        let omitted = terms.next().expect("series is infinite");
        if (omitted.r.norm_sqr() + omitted.t.norm_sqr()) / decay < tolerance {
            return Ok(count);
        }
    }
    Err(Error::InvalidParameter {
        name: "tolerance",
        value: tolerance,
        reason: "series converges too slowly at this momentum",
    })
}
