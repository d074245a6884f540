//! Dimensionless parameter set and single-point evaluation.

use crate::correlators::{closed_form_correlators, CorrelatorSet, DetectorParams, PairGeometry};
use crate::error::{Error, Result};
use crate::measures::{measure, spectrum_general, MeasureSet, Spectrum4};
use crate::state::{assemble_main, InitialState, XDensityMatrix};

/// Every model input in units of the smearing width (σ = 1): `η/σ`, `Ωσ`,
/// `L/σ`, `Δτ/σ`, `τ_A,0/σ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelParams {
    pub theta: f64,
    pub lambda_a: f64,
    pub lambda_b: f64,
    pub eta_a: f64,
    pub eta_b: f64,
    pub omega_a: f64,
    pub omega_b: f64,
    pub separation: f64,
    pub delay: f64,
    pub tau_a0: f64,
}

impl Default for ModelParams {
    /// `θ = π/4`, `λ = η/σ = Ω_Aσ = Ω_Bσ = 1`, `L/σ = Δτ/σ = 3`, `τ_A,0 = 0`.
    fn default() -> Self {
        ModelParams {
            theta: std::f64::consts::FRAC_PI_4,
            lambda_a: 1.0,
            lambda_b: 1.0,
            eta_a: 1.0,
            eta_b: 1.0,
            omega_a: 1.0,
            omega_b: 1.0,
            separation: 3.0,
            delay: 3.0,
            tau_a0: 0.0,
        }
    }
}

/// Everything computed for one parameter point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PointResult {
    pub correlators: CorrelatorSet,
    pub state: XDensityMatrix,
    pub spectrum: Spectrum4,
    pub measures: MeasureSet,
}

impl ModelParams {
    pub fn detectors(&self) -> Result<(DetectorParams, DetectorParams)> {
        let a = DetectorParams::new(self.lambda_a, self.eta_a, self.omega_a, self.tau_a0)?;
        let b = DetectorParams::new(
            self.lambda_b,
            self.eta_b,
            self.omega_b,
            self.tau_a0 + self.delay,
        )?;
        Ok((a, b))
    }

    pub fn geometry(&self) -> Result<PairGeometry> {
        PairGeometry::new(self.separation, self.delay, 1.0)
    }

    pub fn initial_state(&self) -> Result<InitialState> {
        InitialState::new(self.theta)
    }

    pub fn validate(&self) -> Result<()> {
        let all = [
            self.theta,
            self.lambda_a,
            self.lambda_b,
            self.eta_a,
            self.eta_b,
            self.omega_a,
            self.omega_b,
            self.separation,
            self.delay,
            self.tau_a0,
        ];
        if all.iter().any(|v| !v.is_finite()) {
            return Err(Error::Domain("non-finite model parameter".into()));
        }
        self.initial_state()?;
        self.detectors()?;
        self.geometry()?;
        Ok(())
    }

    pub fn correlators(&self) -> Result<CorrelatorSet> {
        let (a, b) = self.detectors()?;
        closed_form_correlators(&a, &b, &self.geometry()?)
    }

    /// `Ω_A τ_A,0 - Ω_B τ_B,0`, the phase carried by `ρ23`.
    pub fn gap_phase_difference(&self) -> f64 {
        self.omega_a * self.tau_a0 - self.omega_b * (self.tau_a0 + self.delay)
    }

    pub fn state(&self) -> Result<XDensityMatrix> {
        assemble_main(
            self.initial_state()?,
            &self.correlators()?,
            self.gap_phase_difference(),
        )
    }

    pub fn evaluate(&self) -> Result<PointResult> {
        let correlators = self.correlators()?;
        let state = assemble_main(
            self.initial_state()?,
            &correlators,
            self.gap_phase_difference(),
        )?;
        Ok(PointResult {
            correlators,
            state,
            spectrum: spectrum_general(&state),
            measures: measure(&state),
        })
    }
}
