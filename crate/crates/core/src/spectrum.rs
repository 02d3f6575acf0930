use std::f64::consts::PI;

use num_complex::Complex64;
use statrs::function::erf::erfc;

use crate::error::Result;
use crate::scattering::{positive, BarrierConfig};

/// Minimum `a (k0 - kmin)` below which the truncation is considered visible.
pub const TRUNCATION_MARGIN: f64 = 5.0;
/// Norm deficit above which a warning is raised.
pub const DEFICIT_WARNING: f64 = 1e-8;

/// Complex gaussian momentum profile
/// `g(k) = (a^2 / 8 pi^3)^(1/4) exp[-a^2 (k - k0)^2 / 4] exp[-i k x0]`,
/// truncated to zero below the barrier threshold so that no component tunnels.
/// The truncated profile is not renormalised.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianSpectrum {
    pub a: f64,
    pub k0: f64,
    pub x0: f64,
    pub kmin: f64,
}

impl GaussianSpectrum {
    pub fn new(a: f64, k0: f64, x0: f64, barrier: &BarrierConfig) -> Result<Self> {
        positive("a", a)?;
        positive("k0", k0)?;
        if !x0.is_finite() {
            return Err(crate::Error::InvalidParameter {
                name: "x0",
                value: x0,
                reason: "must be finite",
            });
        }
        let kmin = barrier.threshold_momentum();
        // Validates k0 itself against the barrier.
        barrier.kinematics(k0)?;
        let spectrum = Self { a, k0, x0, kmin };
        if let Some(warning) = spectrum.truncation_warning() {
            log::warn!("{warning}");
        }
        Ok(spectrum)
    }

    pub fn prefactor(&self) -> f64 {
        (self.a * self.a / (8.0 * PI * PI * PI)).powf(0.25)
    }

    /// Real envelope `|g(k)|`.
    pub fn envelope(&self, k: f64) -> f64 {
        if k < self.kmin {
            return 0.0;
        }
        let u = self.a * (k - self.k0);
        self.prefactor() * (-0.25 * u * u).exp()
    }

    pub fn amplitude(&self, k: f64) -> Complex64 {
        Complex64::from_polar(self.envelope(k), -k * self.x0)
    }

    /// `1 - 2 pi int_{kmin}^inf |g|^2 dk`, the probability lost to truncation.
    pub fn truncation_deficit(&self) -> f64 {
        0.5 * erfc(self.a * (self.k0 - self.kmin) / std::f64::consts::SQRT_2)
    }

    pub fn truncation_warning(&self) -> Option<String> {
        let margin = self.a * (self.k0 - self.kmin);
        let deficit = self.truncation_deficit();
        (margin < TRUNCATION_MARGIN || deficit > DEFICIT_WARNING).then(|| {
            format!(
                "spectrum truncated at kmin = {}: a (k0 - kmin) = {margin:.3}, norm deficit {deficit:.3e}",
                self.kmin
            )
        })
    }

    /// Standard deviation of `|psi(x)|^2` for the untruncated free packet at its waist.
    pub fn spatial_width(&self) -> f64 {
        0.5 * self.a
    }
}
