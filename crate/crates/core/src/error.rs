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

    #[error("invalid frequency grid: {0}")]
    InvalidGrid(String),

    #[error("invalid chain: {0}")]
    InvalidChain(String),

    /// The closed-loop coefficient `χ⁻¹(Ω) + κ` vanishes: the spring-shifted
    /// oscillator is exactly on resonance.
    #[error("degenerate loop at Ω = {omega}: χ⁻¹ + κ = 0")]
    DegenerateLoop { omega: f64 },

    /// The measured quadrature carries no signal.
    #[error("zero signal transfer at Ω = {omega}")]
    ZeroTransfer { omega: f64 },

    #[error("every point of the band is degenerate ({} points)", omegas.len())]
    DegenerateBand { omegas: Vec<f64> },
}

pub(crate) fn positive(name: &'static str, value: f64) -> Result<f64> {
    if value > 0.0 && value.is_finite() {
        Ok(value)
    } else {
        Err(Error::InvalidParameter {
            name,
            value,
            reason: "must be finite and > 0",
        })
    }
}

pub(crate) fn non_negative(name: &'static str, value: f64) -> Result<f64> {
    if value >= 0.0 && value.is_finite() {
        Ok(value)
    } else {
        Err(Error::InvalidParameter {
            name,
            value,
            reason: "must be finite and >= 0",
        })
    }
}

pub(crate) fn efficiency(name: &'static str, value: f64) -> Result<f64> {
    if value > 0.0 && value <= 1.0 {
        Ok(value)
    } else {
        Err(Error::InvalidParameter {
            name,
            value,
            reason: "must lie in (0, 1]",
        })
    }
}

pub(crate) fn finite(name: &'static str, value: f64) -> Result<f64> {
    if value.is_finite() {
        Ok(value)
    } else {
        Err(Error::InvalidParameter {
            name,
            value,
            reason: "must be finite",
        })
    }
}
