//! Post-interaction two-detector state.
//!
//! The state is always X-shaped in the basis `|gg⟩, |ge⟩, |eg⟩, |ee⟩`
//! (detector A first). It is built by two independent routes:
//!
//! * [`assemble_main`]: the compact element formulas in terms of
//!   `P = 1 + f_A f_B cosh ω`, `Q = f_A + f_B cos 2κ` and their `R`, `S`
//!   counterparts;
//! * [`assemble_appendix`]: the expansion of `ρ` over the initial-state
//!   projectors with every coefficient written through [`f_jklm`] and explicit
//!   gap phases `e^{±iΩ_j τ_j,0}`.
//!
//! The c-number in the BCH phase of `f_jklm` is the commutator scalar κ, so
//! every `e^{±2iγ}` of the operator algebra shows up here as `e^{±2iκ}`.

use std::f64::consts::FRAC_PI_2;

use nalgebra::Matrix4;
use num_complex::Complex64;

use crate::correlators::{CorrelatorSet, DetectorParams};
use crate::error::{Error, Result};

/// Deviations beyond this are reported as errors instead of being clamped.
pub const ENFORCEMENT_TOLERANCE: f64 = 1e-9;

/// `cos θ |gg⟩ + sin θ |ee⟩`, `θ ∈ [0, π/2]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InitialState {
    theta: f64,
}

impl InitialState {
    pub fn new(theta: f64) -> Result<Self> {
        if !(0.0..=FRAC_PI_2).contains(&theta) {
            return Err(Error::Domain(format!("θ = {theta} outside [0, π/2]")));
        }
        Ok(InitialState { theta })
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    /// The initial projector itself, i.e. the state with the field switched
    /// off.
    pub fn density_matrix(&self) -> XDensityMatrix {
        let (s, c) = self.theta.sin_cos();
        XDensityMatrix {
            rho11: c * c,
            rho22: 0.0,
            rho33: 0.0,
            rho44: s * s,
            rho14: Complex64::new(c * s, 0.0),
            rho23: Complex64::new(0.0, 0.0),
        }
    }
}

/// A two-qubit X state: four populations and two coherences.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct XDensityMatrix {
    rho11: f64,
    rho22: f64,
    rho33: f64,
    rho44: f64,
    rho14: Complex64,
    rho23: Complex64,
}

impl XDensityMatrix {
    /// Validates and stores the six independent entries.
    ///
    /// Negative populations within [`ENFORCEMENT_TOLERANCE`] are clamped to
    /// zero; anything worse, a trace off by more than the tolerance, or a
    /// 2×2 block that is not positive semidefinite is an
    /// [`Error::Invariant`].
    pub fn new(
        rho11: f64,
        rho22: f64,
        rho33: f64,
        rho44: f64,
        rho14: Complex64,
        rho23: Complex64,
    ) -> Result<Self> {
        let finite = [
            rho11, rho22, rho33, rho44, rho14.re, rho14.im, rho23.re, rho23.im,
        ]
        .iter()
        .all(|v| v.is_finite());
        if !finite {
            return Err(Error::Invariant {
                quantity: "non-finite entry",
                value: f64::NAN,
            });
        }
        let mut diag = [rho11, rho22, rho33, rho44];
        for d in diag.iter_mut() {
            if *d < -ENFORCEMENT_TOLERANCE {
                return Err(Error::Invariant {
                    quantity: "negative population",
                    value: *d,
                });
            }
            if *d < 0.0 {
                *d = 0.0;
            }
        }
        let trace: f64 = diag.iter().sum();
        if (trace - 1.0).abs() > ENFORCEMENT_TOLERANCE {
            return Err(Error::Invariant {
                quantity: "trace - 1",
                value: trace - 1.0,
            });
        }
        let gap14 = rho14.norm_sqr() - diag[0] * diag[3];
        if gap14 > ENFORCEMENT_TOLERANCE {
            return Err(Error::Invariant {
                quantity: "|ρ14|² - ρ11ρ44",
                value: gap14,
            });
        }
        let gap23 = rho23.norm_sqr() - diag[1] * diag[2];
        if gap23 > ENFORCEMENT_TOLERANCE {
            return Err(Error::Invariant {
                quantity: "|ρ23|² - ρ22ρ33",
                value: gap23,
            });
        }
        Ok(XDensityMatrix {
            rho11: diag[0],
            rho22: diag[1],
            rho33: diag[2],
            rho44: diag[3],
            rho14,
            rho23,
        })
    }

    pub fn rho11(&self) -> f64 {
        self.rho11
    }
    pub fn rho22(&self) -> f64 {
        self.rho22
    }
    pub fn rho33(&self) -> f64 {
        self.rho33
    }
    pub fn rho44(&self) -> f64 {
        self.rho44
    }
    pub fn rho14(&self) -> Complex64 {
        self.rho14
    }
    pub fn rho23(&self) -> Complex64 {
        self.rho23
    }

    pub fn diagonal(&self) -> [f64; 4] {
        [self.rho11, self.rho22, self.rho33, self.rho44]
    }

    pub fn trace(&self) -> f64 {
        self.rho11 + self.rho22 + self.rho33 + self.rho44
    }

    /// Same populations, coherences multiplied by `e^{iφ14}` and `e^{iφ23}`.
    pub fn rephased(&self, phi14: f64, phi23: f64) -> Self {
        XDensityMatrix {
            rho14: self.rho14 * Complex64::cis(phi14),
            rho23: self.rho23 * Complex64::cis(phi23),
            ..*self
        }
    }

    /// Dense 4×4 Hermitian matrix.
    pub fn to_matrix(&self) -> Matrix4<Complex64> {
        let re = |x: f64| Complex64::new(x, 0.0);
        let z = Complex64::new(0.0, 0.0);
        Matrix4::new(
            re(self.rho11),
            z,
            z,
            self.rho14,
            z,
            re(self.rho22),
            self.rho23,
            z,
            z,
            self.rho23.conj(),
            re(self.rho33),
            z,
            self.rho14.conj(),
            z,
            z,
            re(self.rho44),
        )
    }

    /// Largest entrywise distance to another state.
    pub fn max_abs_diff(&self, other: &XDensityMatrix) -> f64 {
        let pops = self
            .diagonal()
            .iter()
            .zip(other.diagonal().iter())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        pops.max((self.rho14 - other.rho14).norm())
            .max((self.rho23 - other.rho23).norm())
    }
}

/// Sign pattern `(j, k, l, m)` of a vacuum overlap `⟨0|X̂†_(j,k) X̂_(l,m)|0⟩`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct FSignature {
    pub j: i8,
    pub k: i8,
    pub l: i8,
    pub m: i8,
}

impl FSignature {
    pub fn new(j: i8, k: i8, l: i8, m: i8) -> Result<Self> {
        if [j, k, l, m].iter().any(|s| s.abs() != 1) {
            return Err(Error::Domain(format!(
                "signature entries must be ±1, got ({j}, {k}, {l}, {m})"
            )));
        }
        Ok(FSignature { j, k, l, m })
    }

    /// Parses a four-character pattern such as `"+-+-"`.
    pub fn parse(pattern: &str) -> Result<Self> {
        let signs: Vec<i8> = pattern
            .chars()
            .map(|ch| match ch {
                '+' => Ok(1),
                '-' => Ok(-1),
                other => Err(Error::Domain(format!("bad sign {other:?} in {pattern:?}"))),
            })
            .collect::<Result<_>>()?;
        match signs[..] {
            [j, k, l, m] => Self::new(j, k, l, m),
            _ => Err(Error::Domain(format!(
                "signature {pattern:?} needs 4 signs"
            ))),
        }
    }

    /// All sixteen patterns.
    pub fn all() -> impl Iterator<Item = FSignature> {
        (0..16u8).map(|bits| {
            let s = |b: u8| if bits & (1 << b) == 0 { 1 } else { -1 };
            FSignature {
                j: s(3),
                k: s(2),
                l: s(1),
                m: s(0),
            }
        })
    }

    /// `jklm = -1`: the eight patterns whose overlap vanishes identically.
    pub fn is_odd(&self) -> bool {
        self.j * self.k * self.l * self.m < 0
    }
}

impl std::fmt::Display for FSignature {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for s in [self.j, self.k, self.l, self.m] {
            f.write_str(if s > 0 { "+" } else { "-" })?;
        }
        Ok(())
    }
}

/// General sixteen-term closed form of the vacuum overlap `f_(jklm)`.
pub fn f_jklm(sig: FSignature, c: &CorrelatorSet) -> Complex64 {
    let (j, k, l, m) = (
        f64::from(sig.j),
        f64::from(sig.k),
        f64::from(sig.l),
        f64::from(sig.m),
    );
    let phase = Complex64::cis(2.0 * c.kappa);
    let constant = 1.0 + j * l + k * m + j * k * l * m;
    let a_term = (1.0 + j * l) * (k + m) * c.f_a;
    let b_term = ((l + j * k * m) * phase + (j + k * l * m) * phase.conj()) * c.f_b;
    let ab_term =
        ((j * k + l * m) * c.omega.exp() + (j * m + k * l) * (-c.omega).exp()) * (c.f_a * c.f_b);
    (constant + a_term + b_term + ab_term) / 16.0
}

/// The four reduced forms of `f_(jklm)` for even patterns, zero for odd ones.
///
/// Independent of [`f_jklm`]; the two must agree for every pattern.
pub fn f_jklm_reduced(sig: FSignature, c: &CorrelatorSet) -> Complex64 {
    if sig.is_odd() {
        return Complex64::new(0.0, 0.0);
    }
    let s = f64::from(sig.j);
    let (sin2k, cos2k) = (2.0 * c.kappa).sin_cos();
    let i = Complex64::i();
    let fab = c.f_a * c.f_b;
    match (sig.j == sig.k, sig.j == sig.l) {
        // (±±±±)
        (true, true) => {
            Complex64::from(0.25 * (1.0 + s * c.f_a + s * c.f_b * cos2k + fab * c.omega.cosh()))
        }
        // (±±∓∓)
        (true, false) => -s * 0.25 * c.f_b * (i * sin2k - s * c.f_a * c.omega.sinh()),
        // (±∓±∓)
        (false, true) => {
            Complex64::from(0.25 * (1.0 - s * c.f_a + s * c.f_b * cos2k - fab * c.omega.cosh()))
        }
        // (±∓∓±)
        (false, false) => -s * 0.25 * c.f_b * (i * sin2k + s * c.f_a * c.omega.sinh()),
    }
}

/// Builds the state from the compact element formulas.
///
/// `gap_phase_difference` is `Ω_A τ_A,0 - Ω_B τ_B,0`; `ρ23` carries
/// `e^{-i(Ω_A τ_A,0 - Ω_B τ_B,0)}` while `ρ14` carries `e^{-iγ}`.
pub fn assemble_main(
    s: InitialState,
    c: &CorrelatorSet,
    gap_phase_difference: f64,
) -> Result<XDensityMatrix> {
    c.validate()?;
    let (sin_t, cos_t) = s.theta.sin_cos();
    let cs = cos_t * sin_t;
    let tilt = 2.0 * cos_t * cos_t - 1.0;
    let (sin_g, cos_g) = c.gamma.sin_cos();
    let (sin2k, cos2k) = (2.0 * c.kappa).sin_cos();
    let fab = c.f_a * c.f_b;
    let (sinh_w, cosh_w) = (c.omega.sinh(), c.omega.cosh());

    let p = 1.0 + fab * cosh_w;
    let q = c.f_a + c.f_b * cos2k;
    let r = 1.0 - fab * cosh_w;
    let d = c.f_a - c.f_b * cos2k;
    let cross_minus = 0.5 * cs * c.f_b * (c.f_a * sinh_w * cos_g - sin2k * sin_g);
    let cross_plus = 0.5 * cs * c.f_b * (c.f_a * sinh_w * cos_g + sin2k * sin_g);

    let rho11 = 0.25 * (p + tilt * q) + cross_minus;
    let rho22 = 0.25 * (r + tilt * d) - cross_minus;
    let rho33 = 0.25 * (r - tilt * d) - cross_plus;
    let rho44 = 0.25 * (p - tilt * q) + cross_plus;

    let shared = 0.25 * c.f_b * Complex64::new(c.f_a * sinh_w, tilt * sin2k);
    let rho14 =
        Complex64::cis(-c.gamma) * (shared + 0.5 * cs * Complex64::new(p * cos_g, q * sin_g));
    let rho23 = Complex64::cis(-gap_phase_difference)
        * (-shared + 0.5 * cs * Complex64::new(r * cos_g, d * sin_g));

    XDensityMatrix::new(rho11, rho22, rho33, rho44, rho14, rho23)
}

/// Builds the state from the projector expansion, with every coefficient an
/// `f_(jklm)` overlap and every phase taken from the detectors' own
/// `Ω_j τ_j,0`.
///
/// `c.gamma` is not read; the phases come from `a` and `b`.
pub fn assemble_appendix(
    s: InitialState,
    a: &DetectorParams,
    b: &DetectorParams,
    c: &CorrelatorSet,
) -> Result<XDensityMatrix> {
    c.validate()?;
    let (sin_t, cos_t) = s.theta.sin_cos();
    let cc = cos_t * cos_t;
    let cs = cos_t * sin_t;
    let ss = sin_t * sin_t;
    let phi_a = a.energy_gap * a.switch_time;
    let phi_b = b.energy_gap * b.switch_time;
    let sum = Complex64::cis(phi_a + phi_b);
    let diff = Complex64::cis(-(phi_a - phi_b));

    let f = |p: &str| f_jklm(FSignature::parse(p).expect("static pattern"), c);
    let (pppp, mmmm) = (f("++++"), f("----"));
    let (mmpp, ppmm) = (f("--++"), f("++--"));
    let (mpmp, pmpm) = (f("-+-+"), f("+-+-"));
    let (pmmp, mppm) = (f("+--+"), f("-++-"));

    let rho11 = cc * pppp + cs * mmpp * sum + cs * ppmm * sum.conj() + ss * mmmm;
    let rho22 = cc * mpmp + cs * pmmp * sum + cs * mppm * sum.conj() + ss * pmpm;
    let rho33 = cc * pmpm + cs * mppm * sum + cs * pmmp * sum.conj() + ss * mpmp;
    let rho44 = cc * mmmm + cs * ppmm * sum + cs * mmpp * sum.conj() + ss * pppp;
    let rho14 = cc * mmpp * sum.conj()
        + cs * pppp
        + cs * mmmm * sum.conj() * sum.conj()
        + ss * ppmm * sum.conj();
    let rho23 = cc * pmmp * diff
        + cs * mpmp * Complex64::cis(2.0 * phi_b)
        + cs * pmpm * Complex64::cis(-2.0 * phi_a)
        + ss * mppm * diff;

    for (quantity, z) in [
        ("Im ρ11", rho11),
        ("Im ρ22", rho22),
        ("Im ρ33", rho33),
        ("Im ρ44", rho44),
    ] {
        if z.im.abs() > ENFORCEMENT_TOLERANCE {
            return Err(Error::Invariant {
                quantity,
                value: z.im,
            });
        }
    }
    XDensityMatrix::new(rho11.re, rho22.re, rho33.re, rho44.re, rho14, rho23)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_PI_4;

    fn corr(f_a: f64, f_b: f64, kappa: f64, omega: f64, gamma: f64) -> CorrelatorSet {
        CorrelatorSet {
            f_a,
            f_b,
            kappa,
            omega,
            gamma,
        }
    }

    #[test]
    fn signatures() {
        assert_eq!(FSignature::all().count(), 16);
        assert_eq!(FSignature::all().filter(|s| s.is_odd()).count(), 8);
        assert_eq!(FSignature::parse("+-+-").unwrap().to_string(), "+-+-");
        assert!(FSignature::parse("+-+").is_err());
        assert!(FSignature::parse("+-+x").is_err());
        assert!(FSignature::new(1, 0, 1, 1).is_err());
    }

    #[test]
    fn f_values_without_interaction() {
        let c = CorrelatorSet::decoupled(0.0);
        assert_eq!(
            f_jklm(FSignature::parse("++++").unwrap(), &c),
            Complex64::new(1.0, 0.0)
        );
        assert_eq!(
            f_jklm(FSignature::parse("-+-+").unwrap(), &c),
            Complex64::new(0.0, 0.0)
        );
    }

    #[test]
    fn f_pp_mm_reduced_form() {
        let c = corr(0.9506, 0.9506, 0.02, -0.01, 0.0);
        let sig = FSignature::parse("++--").unwrap();
        let expected =
            -(c.f_b / 4.0) * (Complex64::i() * (2.0 * c.kappa).sin() - c.f_a * c.omega.sinh());
        assert!((f_jklm(sig, &c) - expected).norm() < 1e-16);
        assert!((f_jklm_reduced(sig, &c) - expected).norm() < 1e-16);
    }

    #[test]
    fn odd_patterns_vanish() {
        let c = corr(0.7, 0.4, 0.3, -0.8, 1.1);
        for p in [
            "+++-", "++-+", "+-++", "-+++", "---+", "--+-", "-+--", "+---",
        ] {
            let sig = FSignature::parse(p).unwrap();
            assert!(sig.is_odd());
            assert_eq!(f_jklm(sig, &c), Complex64::new(0.0, 0.0), "{p}");
        }
    }

    #[test]
    fn general_form_reproduces_reduced_forms() {
        for c in [
            corr(0.9, 0.8, 0.1, -0.2, 0.0),
            corr(0.3, 0.95, -1.4, 0.7, 0.0),
            corr(1.0, 1.0, 0.0, 0.0, 0.0),
        ] {
            for sig in FSignature::all() {
                let d = (f_jklm(sig, &c) - f_jklm_reduced(sig, &c)).norm();
                assert!(d < 1e-15, "{sig}: {d}");
            }
        }
    }

    #[test]
    fn bell_state_untouched_without_coupling() {
        let s = InitialState::new(FRAC_PI_4).unwrap();
        for gamma in [0.0, 0.7, -2.0] {
            let m = assemble_main(s, &CorrelatorSet::decoupled(gamma), 0.3).unwrap();
            assert!((m.rho11() - 0.5).abs() < 1e-15);
            assert!((m.rho44() - 0.5).abs() < 1e-15);
            assert!(m.rho22().abs() < 1e-15 && m.rho33().abs() < 1e-15);
            assert!((m.rho14().norm() - 0.5).abs() < 1e-15);
            assert!(m.rho23().norm() < 1e-15);
        }
    }

    #[test]
    fn ground_and_excited_untouched() {
        let c = CorrelatorSet::decoupled(1.3);
        let g = assemble_main(InitialState::new(0.0).unwrap(), &c, 0.0).unwrap();
        assert_eq!(g.diagonal(), [1.0, 0.0, 0.0, 0.0]);
        assert_eq!(g.rho14().norm() + g.rho23().norm(), 0.0);

        let a = DetectorParams::new(0.0, 1.0, 1.0, 0.0).unwrap();
        let b = DetectorParams::new(0.0, 1.0, 1.0, 1.3).unwrap();
        let e = assemble_appendix(InitialState::new(FRAC_PI_2).unwrap(), &a, &b, &c).unwrap();
        assert!((e.rho44() - 1.0).abs() < 1e-15);
        assert!(e.rho11().abs() + e.rho22().abs() + e.rho33().abs() < 1e-15);
        assert!(e.rho14().norm() + e.rho23().norm() < 1e-15);
    }

    #[test]
    fn appendix_bell_coherence_at_no_interaction() {
        let a = DetectorParams::new(0.0, 1.0, 0.0, 0.0).unwrap();
        let b = DetectorParams::new(0.0, 1.0, 0.0, 0.0).unwrap();
        let m = assemble_appendix(
            InitialState::new(FRAC_PI_4).unwrap(),
            &a,
            &b,
            &CorrelatorSet::decoupled(0.0),
        )
        .unwrap();
        assert!((m.rho14() - Complex64::new(0.5, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn theta_out_of_range() {
        assert!(InitialState::new(-1e-3).is_err());
        assert!(InitialState::new(FRAC_PI_2 + 1e-9).is_err());
        assert!(InitialState::new(FRAC_PI_2).is_ok());
    }

    #[test]
    fn invariant_violations_are_reported() {
        let z = Complex64::new(0.0, 0.0);
        assert!(matches!(
            XDensityMatrix::new(0.6, 0.0, 0.0, 0.6, z, z),
            Err(Error::Invariant {
                quantity: "trace - 1",
                ..
            })
        ));
        assert!(matches!(
            XDensityMatrix::new(1.1, -0.1, 0.0, 0.0, z, z),
            Err(Error::Invariant {
                quantity: "negative population",
                ..
            })
        ));
        assert!(matches!(
            XDensityMatrix::new(0.5, 0.0, 0.0, 0.5, Complex64::new(0.6, 0.0), z),
            Err(Error::Invariant { .. })
        ));
        // round-off dust is clamped
        let m = XDensityMatrix::new(1.0 + 1e-13, -1e-13, 0.0, 0.0, z, z).unwrap();
        assert_eq!(m.rho22(), 0.0);
    }

    #[test]
    fn dense_matrix_is_hermitian() {
        let c = corr(0.8, 0.6, 0.2, -0.1, 0.9);
        let m = assemble_main(InitialState::new(0.4).unwrap(), &c, -0.3).unwrap();
        let dense = m.to_matrix();
        assert_eq!(dense, dense.adjoint());
    }
}
