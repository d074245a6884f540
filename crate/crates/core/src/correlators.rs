//! Vacuum correlators of two δ-switched detectors with Gaussian smearing.
//!
//! All closed forms are evaluated in units of the smearing width: the
//! inputs are reduced to the dimensionless groups `λ`, `η/σ`, `L/σ`,
//! `Δτ/σ` before any arithmetic.
//!
//! The momentum-space oracle ([`oracle_correlators`]) uses the symmetric
//! Fourier convention `F̃(k) = (2π)^{-3/2} ∫ F(x) e^{-ik·x} d³x`, under which
//! the Gaussian profile transforms to `(2π)^{-3/2} e^{-σ²k²/4}`.

use std::f64::consts::{FRAC_1_SQRT_2, PI};

use crate::error::{Error, Result};
use crate::quadrature;
use crate::special::dawson;

/// Below this separation (in units of σ) the closed forms for κ and ω are
/// replaced by their small-`L` expansions.
pub const SMALL_SEPARATION: f64 = 1e-4;

/// One detector: coupling `λ`, switching weight `η`, gap `Ω` and switch time
/// `τ₀`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DetectorParams {
    pub coupling: f64,
    pub switching_weight: f64,
    pub energy_gap: f64,
    pub switch_time: f64,
}

impl DetectorParams {
    pub fn new(
        coupling: f64,
        switching_weight: f64,
        energy_gap: f64,
        switch_time: f64,
    ) -> Result<Self> {
        let d = DetectorParams {
            coupling,
            switching_weight,
            energy_gap,
            switch_time,
        };
        d.validate()?;
        Ok(d)
    }

    pub fn validate(&self) -> Result<()> {
        let all = [
            self.coupling,
            self.switching_weight,
            self.energy_gap,
            self.switch_time,
        ];
        if all.iter().any(|v| !v.is_finite()) {
            return Err(Error::Domain(format!(
                "non-finite detector parameter in {self:?}"
            )));
        }
        if self.coupling < 0.0 {
            return Err(Error::Domain(format!("coupling {} < 0", self.coupling)));
        }
        if self.switching_weight <= 0.0 {
            return Err(Error::Domain(format!(
                "switching weight {} <= 0",
                self.switching_weight
            )));
        }
        if self.energy_gap < 0.0 {
            return Err(Error::Domain(format!("energy gap {} < 0", self.energy_gap)));
        }
        Ok(())
    }
}

/// Separation `L`, switching delay `Δτ = τ_B,0 - τ_A,0` and smearing width `σ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PairGeometry {
    pub separation: f64,
    pub delay: f64,
    pub smearing_width: f64,
}

impl PairGeometry {
    pub fn new(separation: f64, delay: f64, smearing_width: f64) -> Result<Self> {
        let g = PairGeometry {
            separation,
            delay,
            smearing_width,
        };
        g.validate()?;
        Ok(g)
    }

    /// Geometry whose delay is read off the detectors' switch times.
    pub fn between(
        a: &DetectorParams,
        b: &DetectorParams,
        separation: f64,
        smearing_width: f64,
    ) -> Result<Self> {
        Self::new(separation, b.switch_time - a.switch_time, smearing_width)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.separation.is_finite() && self.delay.is_finite()) {
            return Err(Error::Domain(format!("non-finite geometry {self:?}")));
        }
        check_width(self.smearing_width)?;
        if self.separation < 0.0 {
            return Err(Error::Domain(format!("separation {} < 0", self.separation)));
        }
        Ok(())
    }

    fn check_consistent(&self, a: &DetectorParams, b: &DetectorParams) -> Result<()> {
        let expected = b.switch_time - a.switch_time;
        let scale = 1.0 + a.switch_time.abs() + b.switch_time.abs();
        if (self.delay - expected).abs() > 1e-12 * scale {
            return Err(Error::Domain(format!(
                "delay {} disagrees with switch times (τ_B,0 - τ_A,0 = {expected})",
                self.delay
            )));
        }
        Ok(())
    }
}

/// The five scalars that determine the post-interaction two-detector state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CorrelatorSet {
    pub f_a: f64,
    pub f_b: f64,
    pub kappa: f64,
    pub omega: f64,
    pub gamma: f64,
}

impl CorrelatorSet {
    /// No interaction: unit decay factors and vanishing correlators.
    pub fn decoupled(gamma: f64) -> Self {
        CorrelatorSet {
            f_a: 1.0,
            f_b: 1.0,
            kappa: 0.0,
            omega: 0.0,
            gamma,
        }
    }

    pub fn validate(&self) -> Result<()> {
        for (name, f) in [("f_A", self.f_a), ("f_B", self.f_b)] {
            if !(f > 0.0 && f <= 1.0) {
                return Err(Error::Domain(format!("{name} = {f} outside (0, 1]")));
            }
        }
        if !(self.kappa.is_finite() && self.omega.is_finite() && self.gamma.is_finite()) {
            return Err(Error::Domain(format!("non-finite correlator in {self:?}")));
        }
        Ok(())
    }
}

fn check_width(sigma: f64) -> Result<()> {
    if !(sigma.is_finite() && sigma > 0.0) {
        return Err(Error::Domain(format!("smearing width {sigma} must be > 0")));
    }
    Ok(())
}

/// `f_j = exp(-λ_j² η_j² / (2π² σ²))`.
pub fn decay_factor(d: &DetectorParams, sigma: f64) -> Result<f64> {
    check_width(sigma)?;
    let x = d.coupling * d.switching_weight / sigma;
    Ok((-x * x / (2.0 * PI * PI)).exp())
}

/// Dimensionless strength `λ_A λ_B (η_A/σ)(η_B/σ)`.
fn pair_strength(a: &DetectorParams, b: &DetectorParams, sigma: f64) -> f64 {
    a.coupling * b.coupling * (a.switching_weight / sigma) * (b.switching_weight / sigma)
}

/// Commutator scalar κ (Pauli-Jordan function of the smeared fields).
///
/// Odd in `Δτ`; the two Gaussians coincide at `Δτ = 0`.
pub fn commutator_kappa(a: &DetectorParams, b: &DetectorParams, g: &PairGeometry) -> Result<f64> {
    g.validate()?;
    let sigma = g.smearing_width;
    let c = pair_strength(a, b, sigma);
    let l = g.separation / sigma;
    let t = g.delay / sigma;
    let root = (PI / 2.0).sqrt();
    if l < SMALL_SEPARATION {
        // (e^{-(t+l)²/2} - e^{-(t-l)²/2}) / l = 2g'(t) + l²/3 g'''(t) + O(l⁴)
        let gauss = (-0.5 * t * t).exp();
        let series = -2.0 * t + l * l / 3.0 * (3.0 * t - t * t * t);
        return Ok(c * root / (4.0 * PI * PI) * gauss * series);
    }
    let plus = (-0.5 * (t + l) * (t + l)).exp();
    let minus = (-0.5 * (t - l) * (t - l)).exp();
    Ok(c / (4.0 * PI * PI * l) * root * (plus - minus))
}

/// Anticommutator scalar ω (Hadamard function of the smeared fields).
///
/// Even in `Δτ`; decays like `1/L²` at large separation.
pub fn anticommutator_omega(
    a: &DetectorParams,
    b: &DetectorParams,
    g: &PairGeometry,
) -> Result<f64> {
    g.validate()?;
    let sigma = g.smearing_width;
    let c = pair_strength(a, b, sigma);
    let l = g.separation / sigma;
    let t = g.delay / sigma;
    if l < SMALL_SEPARATION {
        // D(u+h) - D(u-h) = 2h D'(u) + h³/3 D'''(u) + O(h⁵), h = l/√2
        let u = t * FRAC_1_SQRT_2;
        let d = dawson(u)?;
        let d1 = 1.0 - 2.0 * u * d;
        let d3 = 4.0 * u * u - 4.0 + (12.0 * u - 8.0 * u * u * u) * d;
        return Ok(-c / (PI * PI) * (d1 + l * l / 12.0 * d3));
    }
    let diff = dawson((t + l) * FRAC_1_SQRT_2)? - dawson((t - l) * FRAC_1_SQRT_2)?;
    Ok(-c / (2f64.sqrt() * PI * PI * l) * diff)
}

/// `γ = Ω_A τ_A,0 + Ω_B τ_B,0`.
pub fn phase_gamma(a: &DetectorParams, b: &DetectorParams) -> f64 {
    a.energy_gap * a.switch_time + b.energy_gap * b.switch_time
}

/// All five correlators from the Gaussian-smearing closed forms.
pub fn closed_form_correlators(
    a: &DetectorParams,
    b: &DetectorParams,
    g: &PairGeometry,
) -> Result<CorrelatorSet> {
    a.validate()?;
    b.validate()?;
    g.validate()?;
    g.check_consistent(a, b)?;
    let set = CorrelatorSet {
        f_a: decay_factor(a, g.smearing_width)?,
        f_b: decay_factor(b, g.smearing_width)?,
        kappa: commutator_kappa(a, b, g)?,
        omega: anticommutator_omega(a, b, g)?,
        gamma: phase_gamma(a, b),
    };
    set.validate()?;
    Ok(set)
}

/// Upper momentum cutoff (units of 1/σ); `e^{-k²/2} < 1e-18` beyond it.
pub const ORACLE_K_MAX: f64 = 9.1;
/// Absolute tolerance of each radial integral.
pub const ORACLE_TOLERANCE: f64 = 1e-11;
const ORACLE_MAX_PANELS: usize = 20_000;

/// Gaussian smearing profile in momentum space, symmetric convention, σ = 1.
fn smearing_transform(k: f64) -> f64 {
    (2.0 * PI).powf(-1.5) * (-0.25 * k * k).exp()
}

/// `|α_j(k)|` for a detector with coupling `λ` and weight `η` (σ = 1).
fn alpha_modulus(coupling: f64, weight: f64, k: f64) -> f64 {
    2.0 * coupling * weight / (2.0 * k).sqrt() * smearing_transform(k)
}

/// `sin(x)/x` with the removable singularity filled in.
fn sinc(x: f64) -> f64 {
    if x.abs() < 1e-4 {
        1.0 - x * x / 6.0
    } else {
        x.sin() / x
    }
}

/// Correlators by direct radial quadrature of the momentum integrals.
///
/// The angular integral of `e^{-ik·(x_B - x_A)}` is done analytically
/// (`4π sin(kL)/(kL)`); the remaining radial integrals run over
/// `[0, 9.1/σ]` with oscillation-aware initial panels.
pub fn oracle_correlators(
    a: &DetectorParams,
    b: &DetectorParams,
    g: &PairGeometry,
) -> Result<CorrelatorSet> {
    a.validate()?;
    b.validate()?;
    g.validate()?;
    g.check_consistent(a, b)?;
    let sigma = g.smearing_width;
    let (lam_a, eta_a) = (a.coupling, a.switching_weight / sigma);
    let (lam_b, eta_b) = (b.coupling, b.switching_weight / sigma);
    let l = g.separation / sigma;
    let t = g.delay / sigma;

    let four_pi = 4.0 * PI;
    let self_exponent = |lam: f64, eta: f64| -> Result<f64> {
        let r = quadrature::integrate(
            |k| {
                let alpha = alpha_modulus(lam, eta, k);
                four_pi * k * k * alpha * alpha
            },
            0.0,
            ORACLE_K_MAX,
            8,
            ORACLE_TOLERANCE,
            ORACLE_MAX_PANELS,
        )?;
        Ok(0.5 * r.value)
    };
    let f_a = (-self_exponent(lam_a, eta_a)?).exp();
    let f_b = (-self_exponent(lam_b, eta_b)?).exp();

    // ∫d³k α_A*(k) α_B(k) = ∫ 4πk² |α_A||α_B| sinc(kL) e^{ikΔτ} dk
    let frequency = (l + t.abs()).max(1.0);
    let panels = (ORACLE_K_MAX * frequency / PI).ceil() as usize;
    let cross = |k: f64| {
        four_pi
            * k
            * k
            * alpha_modulus(lam_a, eta_a, k)
            * alpha_modulus(lam_b, eta_b, k)
            * sinc(k * l)
    };
    let im = quadrature::integrate(
        |k| cross(k) * (k * t).sin(),
        0.0,
        ORACLE_K_MAX,
        panels,
        ORACLE_TOLERANCE,
        ORACLE_MAX_PANELS,
    )?;
    let re = quadrature::integrate(
        |k| cross(k) * (k * t).cos(),
        0.0,
        ORACLE_K_MAX,
        panels,
        ORACLE_TOLERANCE,
        ORACLE_MAX_PANELS,
    )?;

    let set = CorrelatorSet {
        f_a,
        f_b,
        // κ = (i/4)(I - I*) = -Im(I)/2,  ω = -(I + I*)/2 = -Re(I)
        kappa: -0.5 * im.value,
        omega: -re.value,
        gamma: phase_gamma(a, b),
    };
    set.validate()?;
    Ok(set)
}
