use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("unknown catalog signal `{0}`")]
    UnknownSignal(String),

    #[error("signal `{signal}`: {message}")]
    InvalidParameter { signal: String, message: String },

    #[error("non-finite argument: {0}")]
    NonFinite(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("signal `{0}` is not causal")]
    NotCausal(String),

    #[error("signal `{0}` is not absolutely integrable; use the truncated transform sequence")]
    NotL1(String),

    #[error("Re s = {s_prime} lies left of the convergence abscissa {lambda0}")]
    LeftOfAbscissa { s_prime: f64, lambda0: f64 },

    #[error("quadrature did not converge on [{a}, {b}]: error estimate {error:e} after {subdivisions} subdivisions")]
    NonConvergence {
        a: f64,
        b: f64,
        error: f64,
        subdivisions: usize,
    },

    #[error("integrand is not finite at t = {0}")]
    NonFiniteIntegrand(f64),

    #[error("transform diverges at the upper end of the bracket (Re s = {0})")]
    DivergentBracket(f64),

    #[error("evaluation at the pole s = -i*{0}")]
    AtPole(f64),

    #[error("contour geometry violated: {0}")]
    Geometry(String),

    #[error("frequency {omega} is not strictly inside the grid [{min}, {max}]")]
    OutsideGrid { omega: f64, min: f64, max: f64 },

    #[error("a tail model is required: neglected tail estimated at {0:e}")]
    TailRequired(f64),

    #[error("degenerate spectrum (zero norm)")]
    Degenerate,
}

pub type Result<T> = std::result::Result<T, Error>;
