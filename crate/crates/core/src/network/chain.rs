use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::density::Density;
use crate::elements::{Element, SourceSpec};
use crate::error::{self, Error, Result};
use crate::grid::FrequencyGrid;
use crate::quadrature::Carrier;
use crate::susceptibility::Susceptibility;

/// Relative threshold below which a closed-loop coefficient or a signal
/// transfer is treated as exactly zero.
pub const DEGENERACY_RTOL: f64 = 1e-12;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum NoiseSource {
    /// The field entering the chain.
    Input,
    /// Vacuum admitted by the `Loss` element at this index.
    Loss(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Quadrature {
    Cos,
    Sin,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct NoiseTerm {
    pub source: NoiseSource,
    pub quadrature: Quadrature,
}

impl NoiseTerm {
    fn pair(source: NoiseSource) -> [NoiseTerm; 2] {
        [
            NoiseTerm {
                source,
                quadrature: Quadrature::Cos,
            },
            NoiseTerm {
                source,
                quadrature: Quadrature::Sin,
            },
        ]
    }
}

/// Probe beam passing through an ordered list of elements, all optomechanical
/// couplings acting on one mechanical mode, read out by homodyne detection of
/// `b^c·cosζ + b^s·sinζ`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Chain {
    carrier: Carrier,
    elements: Vec<Element>,
    mechanics: Susceptibility,
    homodyne_angle: f64,
    source: SourceSpec,
}

impl Chain {
    pub fn new(
        carrier: Carrier,
        elements: Vec<Element>,
        mechanics: Susceptibility,
        homodyne_angle: f64,
        source: SourceSpec,
    ) -> Result<Self> {
        carrier.validate()?;
        mechanics.validate()?;
        source.validate()?;
        error::finite("homodyne_angle", homodyne_angle)?;
        for e in &elements {
            e.validate()?;
        }
        if !elements
            .iter()
            .any(|e| matches!(e, Element::OmCoupling { .. }))
        {
            return Err(Error::InvalidChain(
                "chain needs at least one optomechanical coupling".into(),
            ));
        }
        Ok(Self {
            carrier,
            elements,
            mechanics,
            homodyne_angle,
            source,
        })
    }

    /// One interaction at carrier phase `phi`, output loss `eta`, sine
    /// quadrature measured. `phi = 0` is the simple position meter; other
    /// phases produce a virtual rigidity.
    pub fn single_pass(
        mechanics: Susceptibility,
        upsilon: f64,
        phi: f64,
        eta: f64,
    ) -> Result<Self> {
        Self::new(
            Carrier::with_phase(phi),
            vec![Element::coupling(upsilon)?, Element::loss(eta)?],
            mechanics,
            std::f64::consts::FRAC_PI_2,
            SourceSpec::Vacuum,
        )
    }

    /// Two interactions with carrier phases `phi + psi` then `phi - psi`,
    /// i.e. a carrier phase shift of `-2psi` between the passes.
    pub fn double_pass(
        mechanics: Susceptibility,
        upsilon: f64,
        phi: f64,
        psi: f64,
        eta: f64,
    ) -> Result<Self> {
        error::finite("psi", psi)?;
        Self::new(
            Carrier::with_phase(phi + psi),
            vec![
                Element::coupling(upsilon)?,
                Element::CarrierPhaseShift { delta: -2.0 * psi },
                Element::coupling(upsilon)?,
                Element::loss(eta)?,
            ],
            mechanics,
            std::f64::consts::FRAC_PI_2,
            SourceSpec::Vacuum,
        )
    }

    pub fn with_source(mut self, source: SourceSpec) -> Result<Self> {
        source.validate()?;
        self.source = source;
        Ok(self)
    }

    pub fn with_homodyne_angle(mut self, zeta: f64) -> Result<Self> {
        self.homodyne_angle = error::finite("homodyne_angle", zeta)?;
        Ok(self)
    }

    pub fn with_element_inserted(&self, index: usize, element: Element) -> Result<Self> {
        let mut elements = self.elements.clone();
        elements.insert(index.min(elements.len()), element);
        Self::new(
            self.carrier,
            elements,
            self.mechanics.clone(),
            self.homodyne_angle,
            self.source,
        )
    }

    pub fn carrier(&self) -> &Carrier {
        &self.carrier
    }

    pub fn elements(&self) -> &[Element] {
        &self.elements
    }

    pub fn mechanics(&self) -> &Susceptibility {
        &self.mechanics
    }

    pub fn homodyne_angle(&self) -> f64 {
        self.homodyne_angle
    }

    pub fn source(&self) -> &SourceSpec {
        &self.source
    }

    /// Propagates the field through the element list. The bad-cavity
    /// optics are frequency independent, so this is done once per chain.
    pub fn open_loop(&self) -> OpenLoop {
        let mut terms = NoiseTerm::pair(NoiseSource::Input).to_vec();
        let mut cos = Form::unit(2, 0);
        let mut sin = Form::unit(2, 1);
        let mut force = Form::zero(2);
        let mut phase = self.carrier.phase;
        let mut coupling_scale = 0.0;

        for (index, element) in self.elements.iter().enumerate() {
            match *element {
                Element::OmCoupling { upsilon } => {
                    let (s, c) = phase.sin_cos();
                    // force sees the field arriving at the mechanics
                    force.add_scaled(&cos, upsilon * c);
                    force.add_scaled(&sin, upsilon * s);
                    cos.position -= upsilon * s;
                    sin.position += upsilon * c;
                    coupling_scale += upsilon;
                }
                Element::CarrierPhaseShift { delta } => phase += delta,
                Element::QuantumPhaseShift { delta } => {
                    let (s, c) = delta.sin_cos();
                    let rotated_cos = cos.combine(c, &sin, -s);
                    let rotated_sin = cos.combine(s, &sin, c);
                    cos = rotated_cos;
                    sin = rotated_sin;
                }
                Element::Loss { eta } => {
                    let n = terms.len();
                    terms.extend(NoiseTerm::pair(NoiseSource::Loss(index)));
                    for form in [&mut cos, &mut sin, &mut force] {
                        form.noise.resize(n + 2, ZERO);
                    }
                    let (t, r) = (eta.sqrt(), (1.0 - eta).sqrt());
                    cos.scale(t);
                    sin.scale(t);
                    cos.noise[n] = Complex64::new(r, 0.0);
                    sin.noise[n + 1] = Complex64::new(r, 0.0);
                }
            }
        }

        let (s, c) = self.homodyne_angle.sin_cos();
        let readout = cos.combine(c, &sin, s);
        OpenLoop {
            terms,
            readout_noise: readout.noise,
            readout_position: readout.position,
            force_noise: force.noise,
            force_position: force.position,
            coupling_scale,
        }
    }

    /// Linear response of the measured quadrature at `omega`.
    pub fn solve(&self, omega: f64) -> Result<ReadoutDecomposition> {
        self.open_loop()
            .close(self.mechanics.inverse_at(omega), omega)
    }

    /// Force-normalized sum-noise density at `omega`.
    pub fn sum_noise_spectrum(&self, omega: f64) -> Density {
        self.open_loop()
            .sum_noise(&self.mechanics, &self.source, omega)
    }

    /// [`Chain::sum_noise_spectrum`] over a grid, evaluated in parallel.
    pub fn sum_noise_spectra(&self, grid: &FrequencyGrid) -> Vec<Density> {
        let open = self.open_loop();
        grid.points()
            .par_iter()
            .map(|&w| open.sum_noise(&self.mechanics, &self.source, w))
            .collect()
    }

    /// Coefficient of −X in the total radiation-pressure force.
    pub fn emergent_spring(&self) -> f64 {
        self.open_loop().spring()
    }
}

/// A linear combination of noise terms plus a multiple of the mechanical
/// coordinate X.
#[derive(Debug, Clone)]
struct Form {
    noise: Vec<Complex64>,
    position: Complex64,
}

impl Form {
    fn zero(n: usize) -> Self {
        Self {
            noise: vec![ZERO; n],
            position: ZERO,
        }
    }

    fn unit(n: usize, k: usize) -> Self {
        let mut f = Self::zero(n);
        f.noise[k] = Complex64::new(1.0, 0.0);
        f
    }

    fn add_scaled(&mut self, other: &Form, k: f64) {
        for (a, b) in self.noise.iter_mut().zip(&other.noise) {
            *a += b * k;
        }
        self.position += other.position * k;
    }

    fn scale(&mut self, k: f64) {
        self.noise.iter_mut().for_each(|a| *a *= k);
        self.position *= k;
    }

    fn combine(&self, a: f64, other: &Form, b: f64) -> Form {
        Form {
            noise: self
                .noise
                .iter()
                .zip(&other.noise)
                .map(|(x, y)| x * a + y * b)
                .collect(),
            position: self.position * a + other.position * b,
        }
    }
}

/// Frequency-independent optical part of a chain: how each noise term and
/// the mechanical coordinate enter the readout and the radiation-pressure force.
#[derive(Debug, Clone, PartialEq)]
pub struct OpenLoop {
    terms: Vec<NoiseTerm>,
    readout_noise: Vec<Complex64>,
    readout_position: Complex64,
    force_noise: Vec<Complex64>,
    force_position: Complex64,
    coupling_scale: f64,
}

impl OpenLoop {
    pub fn terms(&self) -> &[NoiseTerm] {
        &self.terms
    }

    /// Optical spring κ: the force contains −κ·X. Zero imaginary part in the
    /// bad-cavity model, so only the real part is returned.
    pub fn spring(&self) -> f64 {
        -self.force_position.re
    }

    /// Effective coupling: coefficient of X in the measured quadrature.
    pub fn readout_coupling(&self) -> Complex64 {
        self.readout_position
    }

    pub fn has_zero_transfer(&self) -> bool {
        self.readout_position.norm() <= DEGENERACY_RTOL * self.coupling_scale
    }

    /// Closes the mechanical loop `χ⁻¹X = f + F_noise − κX`.
    pub fn close(&self, chi_inverse: f64, omega: f64) -> Result<ReadoutDecomposition> {
        let closed_loop = Complex64::new(chi_inverse, 0.0) - self.force_position;
        let scale = chi_inverse.abs() + self.force_position.norm();
        if closed_loop.norm() <= DEGENERACY_RTOL * scale {
            return Err(Error::DegenerateLoop { omega });
        }
        Ok(ReadoutDecomposition {
            omega,
            terms: self.terms.clone(),
            closed_loop,
            readout_position: self.readout_position,
            readout_noise: self.readout_noise.clone(),
            force_noise: self.force_noise.clone(),
            zero_transfer: self.has_zero_transfer(),
        })
    }

    pub(crate) fn sum_noise(
        &self,
        mechanics: &Susceptibility,
        source: &SourceSpec,
        omega: f64,
    ) -> Density {
        let Ok(decomposition) = self.close(mechanics.inverse_at(omega), omega) else {
            return Density::Degenerate;
        };
        match decomposition.force_normalized() {
            Ok(coeffs) => Density::Finite(
                coeffs
                    .iter()
                    .map(|(term, c)| c.norm_sqr() * term_variance(term, source))
                    .sum(),
            ),
            Err(_) => Density::Degenerate,
        }
    }
}

pub(crate) fn term_variance(term: &NoiseTerm, source: &SourceSpec) -> f64 {
    match term.source {
        NoiseSource::Input => source.variance(),
        NoiseSource::Loss(_) => 0.5,
    }
}

/// Measured output at one frequency written as `t·f + Σ coeff·noise`.
#[derive(Debug, Clone, PartialEq)]
pub struct ReadoutDecomposition {
    omega: f64,
    terms: Vec<NoiseTerm>,
    closed_loop: Complex64,
    readout_position: Complex64,
    readout_noise: Vec<Complex64>,
    force_noise: Vec<Complex64>,
    zero_transfer: bool,
}

impl ReadoutDecomposition {
    pub fn omega(&self) -> f64 {
        self.omega
    }

    /// χ⁻¹ + κ at this frequency.
    pub fn closed_loop(&self) -> Complex64 {
        self.closed_loop
    }

    /// Response of the measured quadrature to the normalized force f.
    pub fn signal_transfer(&self) -> Complex64 {
        self.readout_position / self.closed_loop
    }

    pub fn noise_coeffs(&self) -> Vec<(NoiseTerm, Complex64)> {
        let gain = self.readout_position / self.closed_loop;
        self.terms
            .iter()
            .zip(self.readout_noise.iter().zip(&self.force_noise))
            .map(|(&t, (r, f))| (t, r + gain * f))
            .collect()
    }

    /// Noise coefficients referred to the force, `coeff/t`.
    ///
    /// Computed as `r·(χ⁻¹+κ)/g + F` so it stays exact near mechanical resonance.
    pub fn force_normalized(&self) -> Result<Vec<(NoiseTerm, Complex64)>> {
        if self.zero_transfer {
            return Err(Error::ZeroTransfer { omega: self.omega });
        }
        let ratio = self.closed_loop / self.readout_position;
        Ok(self
            .terms
            .iter()
            .zip(self.readout_noise.iter().zip(&self.force_noise))
            .map(|(&t, (r, f))| (t, r * ratio + f))
            .collect())
    }

    pub fn coefficient(&self, term: NoiseTerm) -> Option<Complex64> {
        self.noise_coeffs()
            .into_iter()
            .find(|(t, _)| *t == term)
            .map(|(_, c)| c)
    }
}

pub fn solve_chain(chain: &Chain, omega: f64) -> Result<ReadoutDecomposition> {
    chain.solve(omega)
}

pub fn extract_spring(chain: &Chain) -> f64 {
    chain.emergent_spring()
}

pub fn sum_noise_spectrum(chain: &Chain, omega: f64) -> Density {
    chain.sum_noise_spectrum(omega)
}
