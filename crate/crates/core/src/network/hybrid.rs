use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::density::Density;
use crate::elements::{Channel, SourceSpec};
use crate::error::{self, Error, Result};
use crate::grid::FrequencyGrid;

use super::chain::{term_variance, Chain, NoiseSource, NoiseTerm, OpenLoop, Quadrature};

/// Signal channel and auxiliary channel probed by the two arms of a
/// two-mode squeezed source. Each chain owns its mechanical mode, so the
/// channels never share one.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HybridSystem {
    signal: Chain,
    auxiliary: Chain,
    squeezing: f64,
}

/// Force-normalized auto and cross spectra of the two channel outputs. Each
/// channel is referred to the force on its own mechanical mode.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CrossSpectra {
    pub s_i: f64,
    pub s_s: f64,
    pub s_is: f64,
}

impl HybridSystem {
    pub fn new(signal: Chain, auxiliary: Chain, squeezing: f64) -> Result<Self> {
        error::non_negative("r", squeezing)?;
        let signal = signal.with_source(SourceSpec::TwoModeSqueezed {
            r: squeezing,
            partner: Channel::Auxiliary,
        })?;
        let auxiliary = auxiliary.with_source(SourceSpec::TwoModeSqueezed {
            r: squeezing,
            partner: Channel::Signal,
        })?;
        Ok(Self {
            signal,
            auxiliary,
            squeezing,
        })
    }

    pub fn signal(&self) -> &Chain {
        &self.signal
    }

    pub fn auxiliary(&self) -> &Chain {
        &self.auxiliary
    }

    pub fn squeezing(&self) -> f64 {
        self.squeezing
    }

    pub fn cross_spectrum(&self, omega: f64) -> Result<CrossSpectra> {
        HybridLoops::new(self).cross_spectrum(omega)
    }

    /// Output of the Wiener-optimal combination of both channels.
    pub fn sum_noise_spectrum(&self, omega: f64) -> Density {
        HybridLoops::new(self).sum_noise(omega)
    }

    pub fn sum_noise_spectra(&self, grid: &FrequencyGrid) -> Vec<Density> {
        let loops = HybridLoops::new(self);
        grid.points()
            .par_iter()
            .map(|&w| loops.sum_noise(w))
            .collect()
    }
}

struct HybridLoops<'a> {
    system: &'a HybridSystem,
    signal: OpenLoop,
    auxiliary: OpenLoop,
}

impl<'a> HybridLoops<'a> {
    fn new(system: &'a HybridSystem) -> Self {
        Self {
            system,
            signal: system.signal.open_loop(),
            auxiliary: system.auxiliary.open_loop(),
        }
    }

    fn normalized(
        open: &OpenLoop,
        chain: &Chain,
        omega: f64,
    ) -> Result<Vec<(NoiseTerm, Complex64)>> {
        open.close(chain.mechanics().inverse_at(omega), omega)?
            .force_normalized()
    }

    fn cross_spectrum(&self, omega: f64) -> Result<CrossSpectra> {
        let f_i = Self::normalized(&self.signal, &self.system.signal, omega)?;
        let f_s = Self::normalized(&self.auxiliary, &self.system.auxiliary, omega)?;
        let auto = |coeffs: &[(NoiseTerm, Complex64)], source: &SourceSpec| -> f64 {
            coeffs
                .iter()
                .map(|(t, c)| c.norm_sqr() * term_variance(t, source))
                .sum()
        };
        let s_i = auto(&f_i, self.system.signal.source());
        let s_s = auto(&f_s, self.system.auxiliary.source());

        // only the two input fields are correlated, quadrature by quadrature
        let (cross_c, cross_s) = self.system.signal.source().cross_density();
        let input = |coeffs: &[(NoiseTerm, Complex64)], q: Quadrature| {
            coeffs
                .iter()
                .find(|(t, _)| t.source == NoiseSource::Input && t.quadrature == q)
                .map(|(_, c)| *c)
                .unwrap_or_default()
        };
        let s_is = input(&f_i, Quadrature::Cos).conj() * input(&f_s, Quadrature::Cos) * cross_c
            + input(&f_i, Quadrature::Sin).conj() * input(&f_s, Quadrature::Sin) * cross_s;

        Ok(CrossSpectra {
            s_i,
            s_s,
            s_is: s_is.re,
        })
    }

    fn sum_noise(&self, omega: f64) -> Density {
        match self.cross_spectrum(omega) {
            Ok(c) => combine_optimal(c.s_i, c.s_s, c.s_is),
            Err(_) => Density::Degenerate,
        }
    }
}

pub fn cross_spectrum(hybrid: &HybridSystem, omega: f64) -> Result<CrossSpectra> {
    hybrid.cross_spectrum(omega)
}

/// Residual noise of channel I after subtracting the best linear estimate
/// from channel S: `S_I − S_IS²/S_S`.
pub fn combine_optimal(s_i: f64, s_s: f64, s_is: f64) -> Density {
    if s_s > 0.0 {
        Density::Finite(s_i - s_is * s_is / s_s)
    } else {
        Density::Degenerate
    }
}

/// Like [`combine_optimal`] but reports a non-positive auxiliary density as an error.
pub fn try_combine_optimal(s_i: f64, s_s: f64, s_is: f64) -> Result<f64> {
    combine_optimal(s_i, s_s, s_is)
        .finite()
        .ok_or(Error::InvalidParameter {
            name: "s_s",
            value: s_s,
            reason: "auxiliary density must be > 0",
        })
}
