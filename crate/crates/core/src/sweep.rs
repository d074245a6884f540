//! One-dimensional parameter sweeps, figure presets and CSV output.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};
use std::fmt;
use std::io::Write;
use std::str::FromStr;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::model::{ModelParams, PointResult};

/// The parameter a sweep runs over.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Vary {
    /// `L/σ`
    Separation,
    /// `Δτ/σ`
    Delay,
    /// `λ_A = λ_B = λ`
    Coupling,
    /// `Ω_B σ`
    GapB,
}

impl Vary {
    pub const ALL: [Vary; 4] = [Vary::Separation, Vary::Delay, Vary::Coupling, Vary::GapB];

    /// Command-line name, also used in error messages.
    pub fn name(self) -> &'static str {
        match self {
            Vary::Separation => "l",
            Vary::Delay => "dtau",
            Vary::Coupling => "lambda",
            Vary::GapB => "omega-b",
        }
    }

    pub fn apply(self, base: &ModelParams, value: f64) -> ModelParams {
        let mut p = *base;
        match self {
            Vary::Separation => p.separation = value,
            Vary::Delay => p.delay = value,
            Vary::Coupling => {
                p.lambda_a = value;
                p.lambda_b = value;
            }
            Vary::GapB => p.omega_b = value,
        }
        p
    }
}

impl fmt::Display for Vary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Vary {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Vary::ALL
            .into_iter()
            .find(|v| v.name() == s)
            .ok_or_else(|| {
                Error::InvalidSweep(format!(
                    "unknown sweep parameter {s:?} (expected one of l, dtau, lambda, omega-b)"
                ))
            })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepSpec {
    pub vary: Vary,
    pub from: f64,
    pub to: f64,
    pub steps: usize,
    /// All other parameters; the varied field is overwritten per point.
    pub fixed: ModelParams,
}

impl SweepSpec {
    pub fn validate(&self) -> Result<()> {
        if self.steps < 2 {
            return Err(Error::InvalidSweep(format!("steps = {} < 2", self.steps)));
        }
        if !(self.from.is_finite() && self.to.is_finite()) {
            return Err(Error::InvalidSweep("non-finite range".into()));
        }
        if self.from >= self.to {
            return Err(Error::InvalidSweep(format!(
                "empty range: from {} >= to {}",
                self.from, self.to
            )));
        }
        // both endpoints must be valid parameter sets
        self.vary.apply(&self.fixed, self.from).validate()?;
        self.vary.apply(&self.fixed, self.to).validate()?;
        Ok(())
    }

    /// Uniform grid including both endpoints.
    pub fn grid(&self) -> Vec<f64> {
        let last = self.steps - 1;
        let span = self.to - self.from;
        (0..self.steps)
            .map(|i| {
                if i == last {
                    self.to
                } else {
                    self.from + span * (i as f64 / last as f64)
                }
            })
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRow {
    pub value: f64,
    pub point: PointResult,
}

impl SweepRow {
    pub const HEADER: [&'static str; 15] = [
        "vary",
        "f_a",
        "f_b",
        "kappa",
        "omega",
        "gamma",
        "rho11",
        "rho22",
        "rho33",
        "rho44",
        "abs_rho14",
        "abs_rho23",
        "c_l1",
        "c_rec",
        "negativity",
    ];

    pub fn columns(&self) -> [f64; 15] {
        let c = &self.point.correlators;
        let s = &self.point.state;
        let m = &self.point.measures;
        [
            self.value,
            c.f_a,
            c.f_b,
            c.kappa,
            c.omega,
            c.gamma,
            s.rho11(),
            s.rho22(),
            s.rho33(),
            s.rho44(),
            s.rho14().norm(),
            s.rho23().norm(),
            m.c_l1,
            m.c_rec,
            m.negativity,
        ]
    }
}

fn evaluate_at(spec: &SweepSpec, value: f64) -> Result<SweepRow> {
    spec.vary
        .apply(&spec.fixed, value)
        .evaluate()
        .map(|point| SweepRow { value, point })
        .map_err(|e| Error::SweepPoint {
            vary: spec.vary.name(),
            value,
            source: Box::new(e),
        })
}

/// First error in grid order, so the reported point does not depend on
/// scheduling.
fn collect_ordered(results: Vec<Result<SweepRow>>) -> Result<Vec<SweepRow>> {
    results.into_iter().collect()
}

/// Evaluates every grid point in parallel; rows come back in grid order.
pub fn run_sweep(spec: &SweepSpec) -> Result<Vec<SweepRow>> {
    spec.validate()?;
    let results: Vec<_> = spec
        .grid()
        .into_par_iter()
        .map(|v| evaluate_at(spec, v))
        .collect();
    collect_ordered(results)
}

pub fn run_sweep_serial(spec: &SweepSpec) -> Result<Vec<SweepRow>> {
    spec.validate()?;
    let results = spec
        .grid()
        .into_iter()
        .map(|v| evaluate_at(spec, v))
        .collect();
    collect_ordered(results)
}

/// Published figure families.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Figure {
    Fig1,
    Fig2,
    Fig3Top,
    Fig3Bottom,
    Fig4,
}

impl Figure {
    pub const ALL: [Figure; 5] = [
        Figure::Fig1,
        Figure::Fig2,
        Figure::Fig3Top,
        Figure::Fig3Bottom,
        Figure::Fig4,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Figure::Fig1 => "fig1",
            Figure::Fig2 => "fig2",
            Figure::Fig3Top => "fig3-top",
            Figure::Fig3Bottom => "fig3-bottom",
            Figure::Fig4 => "fig4",
        }
    }
}

impl FromStr for Figure {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Figure::ALL
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| Error::UnknownPreset(s.to_string()))
    }
}

/// Points per preset curve.
pub const PRESET_STEPS: usize = 401;

/// One curve of a figure: `file_stem` is `fig<N>_<label>`.
#[derive(Debug, Clone, PartialEq)]
pub struct Curve {
    pub file_stem: String,
    pub spec: SweepSpec,
}

/// `θ = π/4`, `λ = η/σ = Ω_Aσ = Ω_Bσ = 1`, `τ_A,0 = 0`.
fn reference_params(separation: f64, delay: f64) -> ModelParams {
    ModelParams {
        theta: FRAC_PI_4,
        lambda_a: 1.0,
        lambda_b: 1.0,
        eta_a: 1.0,
        eta_b: 1.0,
        omega_a: 1.0,
        omega_b: 1.0,
        separation,
        delay,
        tau_a0: 0.0,
    }
}

const LIGHTLIKE: (f64, f64, &str) = (3.0, 3.0, "lightlike");
const SPACELIKE: (f64, f64, &str) = (5.0, 3.0, "spacelike");

fn curve(file_stem: String, vary: Vary, from: f64, to: f64, fixed: ModelParams) -> Curve {
    Curve {
        file_stem,
        spec: SweepSpec {
            vary,
            from,
            to,
            steps: PRESET_STEPS,
            fixed,
        },
    }
}

/// The sweep family behind one figure.
///
/// Curve families and ranges:
/// fig1 `L/σ ∈ [0.1, 10]` at `Δτ/σ ∈ {0, 2, 4}`; fig2 `Δτ/σ ∈ [0, 10]` at
/// `L/σ ∈ {1, 3, 5}`; fig3 `λ ∈ [0, 12]`; fig4 `Ω_Bσ ∈ [0, 5]`.
pub fn figure_preset(which: Figure) -> Vec<Curve> {
    let cases = [LIGHTLIKE, SPACELIKE];
    match which {
        Figure::Fig1 => [0.0, 2.0, 4.0]
            .into_iter()
            .map(|dtau| {
                curve(
                    format!("fig1_dtau{dtau}"),
                    Vary::Separation,
                    0.1,
                    10.0,
                    reference_params(0.1, dtau),
                )
            })
            .collect(),
        Figure::Fig2 => [1.0, 3.0, 5.0]
            .into_iter()
            .map(|l| {
                curve(
                    format!("fig2_l{l}"),
                    Vary::Delay,
                    0.0,
                    10.0,
                    reference_params(l, 0.0),
                )
            })
            .collect(),
        Figure::Fig3Top => cases
            .into_iter()
            .map(|(l, dtau, label)| {
                curve(
                    format!("fig3_top_{label}"),
                    Vary::Coupling,
                    0.0,
                    12.0,
                    reference_params(l, dtau),
                )
            })
            .collect(),
        Figure::Fig3Bottom => [(0.0, "theta0"), (FRAC_PI_2, "thetapi2")]
            .into_iter()
            .flat_map(|(theta, theta_label)| {
                cases.into_iter().map(move |(l, dtau, label)| {
                    curve(
                        format!("fig3_bottom_{theta_label}_{label}"),
                        Vary::Coupling,
                        0.0,
                        12.0,
                        ModelParams {
                            theta,
                            ..reference_params(l, dtau)
                        },
                    )
                })
            })
            .collect(),
        Figure::Fig4 => cases
            .into_iter()
            .map(|(l, dtau, label)| {
                curve(
                    format!("fig4_{label}"),
                    Vary::GapB,
                    0.0,
                    5.0,
                    reference_params(l, dtau),
                )
            })
            .collect(),
    }
}

/// Writes the header and one line per row, every value with 17 significant
/// digits. Returns the number of bytes written.
pub fn emit_csv<W: Write>(rows: &[SweepRow], mut sink: W) -> Result<usize> {
    if rows.is_empty() {
        return Err(Error::Empty("no sweep rows"));
    }
    let mut written = 0;
    let header = SweepRow::HEADER.join(",") + "\n";
    sink.write_all(header.as_bytes())?;
    written += header.len();
    for row in rows {
        let line = row
            .columns()
            .iter()
            .map(|v| format!("{v:.16e}"))
            .collect::<Vec<_>>()
            .join(",")
            + "\n";
        sink.write_all(line.as_bytes())?;
        written += line.len();
    }
    sink.flush()?;
    Ok(written)
}
