use num_complex::Complex64;

use crate::error::{Error, Result};

/// Uniform grid `x_i = xmin + i dx`, `i = 0..len`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpatialGrid {
    xmin: f64,
    dx: f64,
    len: usize,
}

impl SpatialGrid {
    pub fn new(xmin: f64, xmax: f64, dx: f64) -> Result<Self> {
        if !(xmin.is_finite() && xmax.is_finite() && xmin < xmax) {
            return Err(Error::InvalidGrid(format!("bounds [{xmin}, {xmax}]")));
        }
        if !(dx.is_finite() && dx > 0.0) {
            return Err(Error::InvalidGrid(format!("spacing {dx}")));
        }
        let intervals = ((xmax - xmin) / dx).round();
        if intervals < 2.0 {
            return Err(Error::InvalidGrid("fewer than three points".into()));
        }
        Ok(Self {
            xmin,
            dx,
            len: intervals as usize + 1,
        })
    }

    /// Grid whose spacing divides `length` exactly and which contains `x = 0`
    /// and (up to rounding) `x = length` as nodes. The spacing is the largest
    /// value not exceeding `dx`; the bounds are moved to the nearest node.
    pub fn aligned(xmin: f64, xmax: f64, dx: f64, length: f64) -> Result<Self> {
        if !(dx.is_finite() && dx > 0.0 && length.is_finite() && length > 0.0) {
            return Err(Error::InvalidGrid(format!("spacing {dx} for length {length}")));
        }
        let cells = (length / dx).ceil().max(1.0);
        let dx = length / cells;
        let first = (xmin / dx).round();
        let last = (xmax / dx).round();
        Self::new(first * dx, last * dx, dx)
    }

    pub fn xmin(&self) -> f64 {
        self.xmin
    }

    pub fn xmax(&self) -> f64 {
        self.x(self.len - 1)
    }

    pub fn dx(&self) -> f64 {
        self.dx
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn x(&self, i: usize) -> f64 {
        self.xmin + i as f64 * self.dx
    }

    pub fn points(&self) -> Vec<f64> {
        (0..self.len).map(|i| self.x(i)).collect()
    }

    /// Index of the node closest to `x`, if `x` is inside the grid.
    pub fn nearest_index(&self, x: f64) -> Option<usize> {
        let i = ((x - self.xmin) / self.dx).round();
        (i >= 0.0 && (i as usize) < self.len).then_some(i as usize)
    }

    /// Contiguous range of node indices lying in `region`.
    pub fn index_range(&self, region: Region, length: f64) -> std::ops::Range<usize> {
        let start = (0..self.len)
            .find(|&i| region.contains(self.x(i), length))
            .unwrap_or(self.len);
        let end = (start..self.len)
            .find(|&i| !region.contains(self.x(i), length))
            .unwrap_or(self.len);
        start..end
    }

    pub fn same_as(&self, other: &SpatialGrid) -> bool {
        self.len == other.len
            && (self.dx - other.dx).abs() <= 1e-12 * self.dx
            && (self.xmin - other.xmin).abs() <= 1e-9 * self.dx
    }
}

/// The three regions of the barrier problem.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Region {
    /// `x < 0`
    Before,
    /// `0 <= x <= l`
    Inside,
    /// `x > l`
    After,
}

impl Region {
    pub fn contains(self, x: f64, length: f64) -> bool {
        match self {
            Region::Before => x < 0.0,
            Region::Inside => (0.0..=length).contains(&x),
            Region::After => x > length,
        }
    }

    pub fn of(x: f64, length: f64) -> Region {
        if x < 0.0 {
            Region::Before
        } else if x <= length {
            Region::Inside
        } else {
            Region::After
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Region::Before => "I",
            Region::Inside => "II",
            Region::After => "III",
        }
    }

    pub fn from_label(label: &str) -> Option<Region> {
        match label {
            "I" => Some(Region::Before),
            "II" => Some(Region::Inside),
            "III" => Some(Region::After),
            _ => None,
        }
    }
}

/// Wave function sampled on a grid at one time.
#[derive(Debug, Clone, PartialEq)]
pub struct Snapshot {
    pub t: f64,
    pub grid: SpatialGrid,
    pub psi: Vec<Complex64>,
    pub abs2: Vec<f64>,
}

impl Snapshot {
    pub fn from_psi(t: f64, grid: SpatialGrid, psi: Vec<Complex64>) -> Result<Self> {
        if psi.len() != grid.len() {
            return Err(Error::InvalidGrid(format!(
                "{} samples for {} grid points",
                psi.len(),
                grid.len()
            )));
        }
        if psi.iter().any(|z| !z.is_finite()) {
            return Err(Error::InvalidGrid("non-finite wave function sample".into()));
        }
        let abs2 = psi.iter().map(|z| z.norm_sqr()).collect();
        Ok(Self { t, grid, psi, abs2 })
    }

    pub fn max_abs2(&self) -> f64 {
        self.abs2.iter().copied().fold(0.0, f64::max)
    }

    /// Pointwise sum of two snapshots on the same grid.
    pub fn superpose(&self, other: &Snapshot) -> Result<Snapshot> {
        if !self.grid.same_as(&other.grid) {
            return Err(Error::GridMismatch);
        }
        let psi = self.psi.iter().zip(&other.psi).map(|(a, b)| a + b).collect();
        Snapshot::from_psi(self.t, self.grid, psi)
    }

    /// Copy with every sample outside `region` set to zero.
    pub fn restricted(&self, region: Region, length: f64) -> Snapshot {
        let psi = self
            .psi
            .iter()
            .enumerate()
            .map(|(i, &z)| {
                if region.contains(self.grid.x(i), length) {
                    z
                } else {
                    Complex64::new(0.0, 0.0)
                }
            })
            .collect();
        Snapshot::from_psi(self.t, self.grid, psi).expect("same grid, finite samples")
    }
}

/// Trapezoid integral of `|psi|^2` over the grid.
pub fn norm(snapshot: &Snapshot) -> f64 {
    let v = &snapshot.abs2;
    match v.len() {
        0 => 0.0,
        1 => 0.0,
        n => {
            let inner: f64 = v[1..n - 1].iter().sum();
            snapshot.grid.dx() * (inner + 0.5 * (v[0] + v[n - 1]))
        }
    }
}
