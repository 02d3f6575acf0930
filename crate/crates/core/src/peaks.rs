//! Local-maximum detection on sampled `|psi|^2`, in space or in time.

use crate::error::{Error, Result};
use crate::grid::{Region, Snapshot};
use crate::scattering::BarrierConfig;

/// Default detection threshold relative to the global maximum.
pub const DEFAULT_THRESHOLD: f64 = 1e-3;
/// Minimum separation between reported peaks, in samples.
pub const MIN_SEPARATION: usize = 5;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Peak {
    pub x: f64,
    pub height: f64,
}

/// Peaks sorted by position.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct PeakList {
    pub peaks: Vec<Peak>,
}

impl PeakList {
    pub fn len(&self) -> usize {
        self.peaks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.peaks.is_empty()
    }

    pub fn positions(&self) -> Vec<f64> {
        self.peaks.iter().map(|p| p.x).collect()
    }

    pub fn highest(&self) -> Option<Peak> {
        self.peaks.iter().copied().max_by(|a, b| a.height.total_cmp(&b.height))
    }
}

/// Vertex of the parabola through three equally spaced samples, as an offset
/// in samples from the middle one together with the interpolated height.
pub fn parabolic_vertex(left: f64, centre: f64, right: f64) -> (f64, f64) {
    let curvature = left - 2.0 * centre + right;
    if curvature.abs() <= f64::EPSILON * centre.abs() || curvature >= 0.0 {
        return (0.0, centre);
    }
    let offset = 0.5 * (left - right) / curvature;
    (offset, centre - 0.25 * (left - right) * offset)
}

/// Strict local maxima of `values[range]` above `threshold`, refined by parabolic
/// interpolation. Returned as (fractional index, height), sorted by index. When
/// two maxima are closer than `min_separation` samples the lower is dropped.
pub fn local_maxima(
    values: &[f64],
    range: std::ops::Range<usize>,
    threshold: f64,
    min_separation: usize,
) -> Vec<(f64, f64)> {
    let lo = range.start.max(1);
    let hi = range.end.min(values.len().saturating_sub(1));
    let mut candidates: Vec<usize> = (lo..hi)
        .filter(|&i| values[i] > threshold && values[i] > values[i - 1] && values[i] > values[i + 1])
        .collect();
    candidates.sort_by(|&a, &b| values[b].total_cmp(&values[a]).then(a.cmp(&b)));

    let mut kept: Vec<usize> = Vec::new();
    for i in candidates {
        if kept.iter().all(|&j| i.abs_diff(j) >= min_separation) {
            kept.push(i);
        }
    }
    kept.sort_unstable();
    kept.into_iter()
        .map(|i| {
            let (offset, height) = parabolic_vertex(values[i - 1], values[i], values[i + 1]);
            (i as f64 + offset, height)
        })
        .collect()
}

/// Peaks of `|psi|^2` inside one region. The threshold is relative to the global
/// maximum of the whole snapshot.
pub fn detect_peaks(
    snapshot: &Snapshot,
    region: Region,
    barrier: &BarrierConfig,
    threshold_fraction: f64,
) -> Result<PeakList> {
    if !(threshold_fraction > 0.0 && threshold_fraction < 1.0) {
        return Err(Error::InvalidParameter {
            name: "threshold_fraction",
            value: threshold_fraction,
            reason: "must lie in (0, 1)",
        });
    }
    let range = snapshot.grid.index_range(region, barrier.length());
    if range.is_empty() {
        return Err(Error::EmptyRegion);
    }
    let threshold = threshold_fraction * snapshot.max_abs2();
    let grid = snapshot.grid;
    let peaks = local_maxima(&snapshot.abs2, range, threshold, MIN_SEPARATION)
        .into_iter()
        .map(|(index, height)| Peak {
            x: grid.xmin() + index * grid.dx(),
            height,
        })
        .collect();
    Ok(PeakList { peaks })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::SpatialGrid;
    use num_complex::Complex64;

    fn snapshot_of(grid: SpatialGrid, f: impl Fn(f64) -> f64) -> Snapshot {
        let psi = grid.points().iter().map(|&x| Complex64::new(f(x).sqrt(), 0.0)).collect();
        Snapshot::from_psi(0.0, grid, psi).unwrap()
    }

    fn barrier() -> BarrierConfig {
        BarrierConfig::new(1.0, 1.0, 1.0).unwrap()
    }

    #[test]
    fn parabola_vertex_is_exact_for_quadratics() {
        // y = 3 - (x - 0.3)^2 sampled at -1, 0, 1
        let y = |x: f64| 3.0 - (x - 0.3) * (x - 0.3);
        let (offset, height) = parabolic_vertex(y(-1.0), y(0.0), y(1.0));
        assert!((offset - 0.3).abs() < 1e-14);
        assert!((height - 3.0).abs() < 1e-14);
        assert_eq!(parabolic_vertex(1.0, 1.0, 1.0), (0.0, 1.0));
    }

    #[test]
    fn single_gaussian_bump() {
        let grid = SpatialGrid::new(-20.0, 0.0, 0.01).unwrap();
        let centre = -7.3337;
        let snap = snapshot_of(grid, |x| (-(x - centre) * (x - centre) / 2.0).exp());
        let peaks = detect_peaks(&snap, Region::Before, &barrier(), 1e-3).unwrap();
        assert_eq!(peaks.len(), 1);
        assert!((peaks.peaks[0].x - centre).abs() < grid.dx() / 10.0);
        assert!((peaks.peaks[0].height - 1.0).abs() < 1e-4);
    }

    #[test]
    fn two_separated_gaussians() {
        let grid = SpatialGrid::new(-30.0, 0.0, 0.01).unwrap();
        let bump = |x: f64, c: f64| (-(x - c) * (x - c) / 2.0).exp();
        let snap = snapshot_of(grid, |x| bump(x, -20.0) + 0.5 * bump(x, -10.0));
        let peaks = detect_peaks(&snap, Region::Before, &barrier(), 1e-3).unwrap();
        assert_eq!(peaks.len(), 2);
        assert!((peaks.peaks[0].x + 20.0).abs() < 0.01);
        assert!((peaks.peaks[1].x + 10.0).abs() < 0.01);
        assert!((peaks.highest().unwrap().x + 20.0).abs() < 0.01);
    }

    #[test]
    fn threshold_and_separation_rules() {
        let values = [0.0, 1.0, 0.0, 0.9, 0.0, 0.0, 0.0, 0.0, 0.0, 0.002, 0.0];
        let all = local_maxima(&values, 0..values.len(), 0.001, 1);
        assert_eq!(all.len(), 3);
        let separated = local_maxima(&values, 0..values.len(), 0.001, 5);
        assert_eq!(separated.len(), 2);
        assert_eq!(separated[0].0, 1.0);
        let thresholded = local_maxima(&values, 0..values.len(), 0.01, 1);
        assert_eq!(thresholded.len(), 2);
        // plateaus are not strict maxima
        assert!(local_maxima(&[0.0, 1.0, 1.0, 0.0], 0..4, 0.0, 1).is_empty());
    }

    #[test]
    fn empty_region_and_bad_threshold() {
        let grid = SpatialGrid::new(-5.0, -1.0, 0.1).unwrap();
        let snap = snapshot_of(grid, |x| (-x * x).exp());
        assert_eq!(detect_peaks(&snap, Region::After, &barrier(), 0.1), Err(Error::EmptyRegion));
        assert!(detect_peaks(&snap, Region::Before, &barrier(), 1.0).is_err());
        assert!(detect_peaks(&snap, Region::Before, &barrier(), 0.0).is_err());
    }
}
