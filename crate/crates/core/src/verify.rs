//! Self-check suite: every closed form against its independent oracle, plus
//! physical invariants over random parameter grids.

use std::f64::consts::FRAC_PI_2;
use std::fmt;
use std::ops::Range;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::correlators::{closed_form_correlators, oracle_correlators, CorrelatorSet};
use crate::error::Result;
use crate::measures::{
    closed_negativity_applies, negativity_closed, negativity_full, spectrum_closed,
    spectrum_general,
};
use crate::model::ModelParams;
use crate::reference::{dawson_reference, erfi_reference};
use crate::special::{dawson, erfi};
use crate::state::{assemble_appendix, assemble_main, f_jklm, FSignature, XDensityMatrix};

pub const DEFAULT_SEED: u64 = 1;
pub const DEFAULT_POINTS: usize = 200;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct VerifyConfig {
    pub seed: u64,
    /// Base sample count; each check scales it by a fixed factor.
    pub points: usize,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig {
            seed: DEFAULT_SEED,
            points: DEFAULT_POINTS,
        }
    }
}

/// Sampling box for random model parameters (`σ = 1`).
#[derive(Debug, Clone, PartialEq)]
pub struct ParameterRanges {
    pub theta: Range<f64>,
    pub lambda: Range<f64>,
    pub eta: Range<f64>,
    pub omega: Range<f64>,
    pub separation: Range<f64>,
    pub delay: Range<f64>,
    pub tau_a0: Range<f64>,
}

impl ParameterRanges {
    /// The physicality grid: `λ ∈ [0, 8]`, `η ∈ [0.2, 2]`, `Ω ∈ [0, 4]`,
    /// `L ∈ [0.01, 10]`, `Δτ ∈ [-10, 10]`, `θ ∈ [0, π/2]`, `τ_A,0 = 0`.
    pub fn physical() -> Self {
        ParameterRanges {
            theta: 0.0..FRAC_PI_2,
            lambda: 0.0..8.0,
            eta: 0.2..2.0,
            omega: 0.0..4.0,
            separation: 0.01..10.0,
            delay: -10.0..10.0,
            tau_a0: 0.0..0.0,
        }
    }

    /// The quadrature comparison grid: as [`physical`](Self::physical) but
    /// `λ ∈ [0, 5]`.
    pub fn oracle() -> Self {
        ParameterRanges {
            lambda: 0.0..5.0,
            ..Self::physical()
        }
    }

    /// Physical grid with a random time origin, so the phases are exercised.
    pub fn with_time_origin() -> Self {
        ParameterRanges {
            tau_a0: -5.0..5.0,
            ..Self::physical()
        }
    }
}

fn uniform(rng: &mut impl Rng, r: &Range<f64>) -> f64 {
    if r.start == r.end {
        r.start
    } else {
        rng.gen_range(r.clone())
    }
}

/// Independent draws for every parameter, couplings and gaps per detector.
pub fn sample_params(rng: &mut impl Rng, r: &ParameterRanges) -> ModelParams {
    ModelParams {
        theta: uniform(rng, &r.theta),
        lambda_a: uniform(rng, &r.lambda),
        lambda_b: uniform(rng, &r.lambda),
        eta_a: uniform(rng, &r.eta),
        eta_b: uniform(rng, &r.eta),
        omega_a: uniform(rng, &r.omega),
        omega_b: uniform(rng, &r.omega),
        separation: uniform(rng, &r.separation),
        delay: uniform(rng, &r.delay),
        tau_a0: uniform(rng, &r.tau_a0),
    }
}

/// A random valid X matrix, not necessarily reachable by the model.
pub fn sample_x_matrix(rng: &mut impl Rng) -> XDensityMatrix {
    let mut w: [f64; 4] = std::array::from_fn(|_| -rng.gen::<f64>().max(1e-300).ln());
    let total: f64 = w.iter().sum();
    w.iter_mut().for_each(|v| *v /= total);
    let mut coherence = |p: f64, q: f64| {
        let modulus = (p * q).sqrt() * rng.gen::<f64>();
        Complex64::from_polar(
            modulus,
            rng.gen_range(-std::f64::consts::PI..std::f64::consts::PI),
        )
    };
    let rho14 = coherence(w[0], w[3]);
    let rho23 = coherence(w[1], w[2]);
    XDensityMatrix::new(w[0], w[1], w[2], 1.0 - w[0] - w[1] - w[2], rho14, rho23)
        .expect("sampled within the block conditions")
}

/// `|a - b|` relative to `|b|`, or absolute (rescaled to the relative
/// budget) when `|b|` is below `small`.
fn scaled_error(a: f64, b: f64, rel: f64, abs: f64, small: f64) -> f64 {
    if b.abs() < small {
        (a - b).abs() / abs
    } else {
        (a - b).abs() / b.abs() / rel
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CheckReport {
    pub name: &'static str,
    pub samples: usize,
    pub max_error: f64,
    pub tolerance: f64,
    /// Samples excluded from the comparison for a documented reason.
    pub exceptions: usize,
    pub note: String,
}

impl CheckReport {
    fn new(name: &'static str, tolerance: f64) -> Self {
        CheckReport {
            name,
            samples: 0,
            max_error: 0.0,
            tolerance,
            exceptions: 0,
            note: String::new(),
        }
    }

    fn record(&mut self, error: f64) {
        self.samples += 1;
        // NaN must fail, so it is kept rather than folded away by max
        if error.is_nan() || error > self.max_error {
            self.max_error = error;
        }
    }

    pub fn passed(&self) -> bool {
        self.max_error <= self.tolerance
    }
}

impl fmt::Display for CheckReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{:<4} {:<28} samples {:>6}  max error {:.3e}  tolerance {:.1e}",
            if self.passed() { "PASS" } else { "FAIL" },
            self.name,
            self.samples,
            self.max_error,
            self.tolerance
        )?;
        if self.exceptions > 0 {
            write!(f, "  exceptions {}", self.exceptions)?;
        }
        if !self.note.is_empty() {
            write!(f, "  ({})", self.note)?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerifyReport {
    pub config: VerifyConfig,
    pub checks: Vec<CheckReport>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(CheckReport::passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckReport> {
        self.checks.iter().filter(|c| !c.passed())
    }
}

impl fmt::Display for VerifyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "seed {}  points {}",
            self.config.seed, self.config.points
        )?;
        for c in &self.checks {
            writeln!(f, "{c}")?;
        }
        let failed = self.failures().count();
        if failed == 0 {
            write!(f, "all {} checks passed", self.checks.len())
        } else {
            write!(f, "{failed} of {} checks failed", self.checks.len())
        }
    }
}

/// Relative error of `dawson` against the big-integer series on `n`
/// log-spaced points in `[1e-6, 40]`.
pub fn check_dawson(n: usize) -> Result<CheckReport> {
    let mut report = CheckReport::new("dawson vs reference series", 1e-12);
    let n = n.max(2);
    let (lo, hi) = (1e-6f64.ln(), 40f64.ln());
    for i in 0..n {
        let x = (lo + (hi - lo) * i as f64 / (n - 1) as f64).exp();
        let exact = dawson_reference(x)?;
        report.record(((dawson(x)? - exact) / exact).abs());
    }
    Ok(report)
}

/// Relative error of `erfi` against its own big-integer series on `[0.01, 20]`.
pub fn check_erfi(n: usize) -> Result<CheckReport> {
    let mut report = CheckReport::new("erfi vs reference series", 1e-12);
    let n = n.max(2);
    for i in 0..n {
        let x = 0.01 + (20.0 - 0.01) * i as f64 / (n - 1) as f64;
        let exact = erfi_reference(x)?;
        report.record(((erfi(x)? - exact) / exact).abs());
    }
    Ok(report)
}

/// Closed-form correlators against momentum-space quadrature. The error is
/// scaled so that 1 means 1e-6 relative (or 1e-9 absolute below 1e-3).
pub fn check_correlators(rng: &mut impl Rng, n: usize) -> Result<CheckReport> {
    let mut report = CheckReport::new("correlators vs quadrature", 1.0);
    report.note = "scaled: 1 = 1e-6 rel / 1e-9 abs".into();
    let ranges = ParameterRanges::oracle();
    for _ in 0..n {
        let p = sample_params(rng, &ranges);
        let (a, b) = p.detectors()?;
        let g = p.geometry()?;
        let closed = closed_form_correlators(&a, &b, &g)?;
        let oracle = oracle_correlators(&a, &b, &g)?;
        report.record(correlator_error(&closed, &oracle));
    }
    Ok(report)
}

pub fn correlator_error(closed: &CorrelatorSet, oracle: &CorrelatorSet) -> f64 {
    [
        (closed.f_a, oracle.f_a),
        (closed.f_b, oracle.f_b),
        (closed.kappa, oracle.kappa),
        (closed.omega, oracle.omega),
    ]
    .into_iter()
    .map(|(c, o)| scaled_error(c, o, 1e-6, 1e-9, 1e-3))
    .fold(0.0, f64::max)
}

/// Compact element formulas against the projector expansion, plus the
/// vanishing of the odd `f_(jklm)`.
pub fn check_assembly(rng: &mut impl Rng, n: usize) -> Result<CheckReport> {
    let mut report = CheckReport::new("dual-path assembly", 1e-12);
    let ranges = ParameterRanges::with_time_origin();
    let mut odd_max = 0.0f64;
    for _ in 0..n {
        let p = sample_params(rng, &ranges);
        let (a, b) = p.detectors()?;
        let c = p.correlators()?;
        let main = assemble_main(p.initial_state()?, &c, p.gap_phase_difference())?;
        let appendix = assemble_appendix(p.initial_state()?, &a, &b, &c)?;
        for sig in FSignature::all().filter(FSignature::is_odd) {
            odd_max = odd_max.max(f_jklm(sig, &c).norm());
        }
        report.record(main.max_abs_diff(&appendix));
    }
    if odd_max != 0.0 {
        report.record(f64::INFINITY);
        report.note = format!("odd f_jklm reached {odd_max:e}");
    } else {
        report.note = "odd f_jklm identically 0".into();
    }
    Ok(report)
}

/// Closed-form eigenvalues against the block eigen-solve, on arbitrary valid
/// X matrices.
pub fn check_spectrum(rng: &mut impl Rng, n: usize) -> CheckReport {
    let mut report = CheckReport::new("spectrum closed vs general", 1e-12);
    for _ in 0..n {
        let m = sample_x_matrix(rng);
        report.record(spectrum_closed(&m).max_abs_diff(&spectrum_general(&m)));
    }
    report
}

/// Outcome of the model-state grid: physicality and the two negativity paths.
pub struct GridChecks {
    pub trace: CheckReport,
    pub min_eigenvalue: CheckReport,
    pub negativity: CheckReport,
    pub spectrum: CheckReport,
}

/// Evaluates `n` random physical states and checks trace, positivity, the
/// spectral dual path and closed-vs-full negativity.
///
/// States whose second partial-transpose block is not positive are outside
/// the reach of the closed negativity; they are counted as exceptions and
/// compared separately.
pub fn check_grid(rng: &mut impl Rng, n: usize) -> Result<GridChecks> {
    let mut trace = CheckReport::new("trace on physical grid", 1e-12);
    let mut min_eigenvalue = CheckReport::new("min eigenvalue >= -1e-10", 1e-10);
    let mut negativity = CheckReport::new("negativity closed vs full", 1e-12);
    let mut spectrum = CheckReport::new("spectrum on physical grid", 1e-12);
    let mut worst_exception = 0.0f64;
    let ranges = ParameterRanges::physical();
    for _ in 0..n {
        let p = sample_params(rng, &ranges);
        let r = p.evaluate()?;
        trace.record((r.state.trace() - 1.0).abs());
        // recorded as the depth below zero
        min_eigenvalue.record((-r.spectrum.min()).max(0.0));
        spectrum.record(spectrum_closed(&r.state).max_abs_diff(&r.spectrum));
        let gap = (negativity_closed(&r.state) - negativity_full(&r.state)).abs();
        if closed_negativity_applies(&r.state) {
            negativity.record(gap);
        } else {
            negativity.exceptions += 1;
            worst_exception = worst_exception.max(gap);
        }
    }
    if negativity.exceptions > 0 {
        negativity.note = format!(
            "second PT block negative; largest closed/full gap there {worst_exception:.3e}"
        );
    }
    Ok(GridChecks {
        trace,
        min_eigenvalue,
        negativity,
        spectrum,
    })
}

/// Runs the whole suite. Sample counts: dawson `5n/2`, erfi `n`,
/// correlators `n`, assembly `5n`, spectra and the physical grid `50n`.
pub fn run_verify(config: VerifyConfig) -> Result<VerifyReport> {
    let n = config.points.max(1);
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut checks = vec![check_dawson(5 * n / 2)?, check_erfi(n)?];
    checks.push(check_correlators(&mut rng, n)?);
    checks.push(check_assembly(&mut rng, 5 * n)?);
    checks.push(check_spectrum(&mut rng, 50 * n));
    let grid = check_grid(&mut rng, 50 * n)?;
    checks.extend([
        grid.spectrum,
        grid.negativity,
        grid.trace,
        grid.min_eigenvalue,
    ]);
    Ok(VerifyReport { config, checks })
}
