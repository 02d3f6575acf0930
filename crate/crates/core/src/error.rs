use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter `{name}` = {value}: {reason}")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },

    /// The momentum does not clear the barrier (`k^2 <= 2 m V0`).
    #[error("k = {k} is not above the barrier (threshold {threshold})")]
    BelowBarrier { k: f64, threshold: f64 },

    /// `q` is positive but so close to zero that the coefficients are ill-conditioned.
    #[error("in-barrier momentum q = {q:e} is degenerate for k = {k}")]
    DegenerateMomentum { k: f64, q: f64 },

    #[error("series term index must be >= 1, got {0}")]
    InvalidIndex(usize),

    #[error("term count must be >= 1, got {0}")]
    InvalidCount(usize),

    #[error("resonance index must be positive, got {0}")]
    NonPositiveIndex(i64),

    #[error("quadrature window [{lower}, {upper}] extends below the cutoff {cutoff}")]
    WindowBelowCutoff { lower: f64, upper: f64, cutoff: f64 },

    #[error("invalid quadrature: {0}")]
    InvalidQuadrature(String),

    #[error("grid spacing {dx} under-resolves k_max = {k_max} (need dx <= {limit})")]
    UnresolvedGrid { dx: f64, k_max: f64, limit: f64 },

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("region contains no grid points")]
    EmptyRegion,

    #[error("no peak above threshold found")]
    NoPeakFound,

    #[error("packet centred at x0 = {x0} with width a = {a} is too close to the barrier or the wall")]
    PacketTooClose { x0: f64, a: f64 },

    #[error("time step {dt:e} exceeds the accuracy limit {limit:e}")]
    TimeStepTooLarge { dt: f64, limit: f64 },

    #[error("wave function reached the wall at t = {t} (edge/peak ratio {ratio:e})")]
    BoundaryContamination { t: f64, ratio: f64 },

    #[error("zero pivot in tridiagonal elimination at row {0}")]
    SingularPivot(usize),

    #[error("band lengths do not match: {0}")]
    DimensionMismatch(String),

    #[error("snapshots are sampled on different grids")]
    GridMismatch,

    #[error("snapshots are taken at different times ({0} vs {1})")]
    TimeMismatch(f64, f64),
}

impl Error {
    /// Errors raised by numerical guards rather than by invalid input.
    pub fn is_numerical_guard(&self) -> bool {
        matches!(
            self,
            Error::DegenerateMomentum { .. }
                | Error::WindowBelowCutoff { .. }
                | Error::UnresolvedGrid { .. }
                | Error::NoPeakFound
                | Error::BoundaryContamination { .. }
        )
    }
}
