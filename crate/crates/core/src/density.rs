use serde::Serialize;

/// A spectral density that may be undefined at a degenerate point
/// (zero signal transfer, or an exactly resonant closed loop).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum Density {
    Finite(f64),
    Degenerate,
}

impl Density {
    /// The density, or +∞ when degenerate.
    pub fn value(self) -> f64 {
        match self {
            Density::Finite(v) => v,
            Density::Degenerate => f64::INFINITY,
        }
    }

    pub fn finite(self) -> Option<f64> {
        match self {
            Density::Finite(v) => Some(v),
            Density::Degenerate => None,
        }
    }

    pub fn is_degenerate(self) -> bool {
        matches!(self, Density::Degenerate)
    }
}
