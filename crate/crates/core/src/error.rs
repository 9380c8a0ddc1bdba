use crate::geometry::FourierMode;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("not mid-diffusion: need alpha_i < alpha_delta < alpha_e or alpha_e < alpha_delta < alpha_i (got {alpha_i}, {alpha_delta}, {alpha_e})")]
    NotMidDiffusion {
        alpha_i: f64,
        alpha_delta: f64,
        alpha_e: f64,
    },

    #[error("invalid material parameters: {0}")]
    InvalidMaterials(String),

    #[error("invalid geometry: {0}")]
    InvalidGeometry(String),

    #[error("invalid layer split: {0}")]
    InvalidSplit(String),

    #[error("invalid Fourier mode: {0}")]
    InvalidMode(String),

    #[error("resonant forcing term: power {power} is resonant with mode {n} (power + 2 == n)")]
    ResonantForcing { power: u32, n: u32 },

    #[error("resonant mode {mode}: boundary symbol {lambda:e} vanishes at delta = {delta}")]
    ResonantMode {
        mode: FourierMode,
        delta: f64,
        lambda: f64,
    },

    #[error("degenerate geometry: {0}")]
    DegenerateGeometry(String),

    #[error("singular system: {0}")]
    SingularSystem(String),

    #[error("radius {r} outside the domain [{lo}, {hi}]")]
    OutOfDomain { r: f64, lo: f64, hi: f64 },

    #[error("scaled coordinate s = {s} outside {range}")]
    CoordinateOutOfRange { s: f64, range: &'static str },

    #[error("empty interval [{lo}, {hi}]")]
    EmptyInterval { lo: f64, hi: f64 },

    #[error("degenerate ladder: {0}")]
    DegenerateLadder(String),

    #[error("invalid quadrature rule: {0}")]
    InvalidQuadrature(String),

    #[error("unsafe model: {0}")]
    UnsafeModel(String),

    #[error("{path}: {message}")]
    Config { path: String, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    pub fn config(path: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Config {
            path: path.into(),
            message: message.into(),
        }
    }
}
