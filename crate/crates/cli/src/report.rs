//! Report documents.
//!
//! A report is one JSON object: fixed metadata, the parameters that were
//! used, and command-specific result fields flattened alongside them with
//! `command` as the discriminant. Exact values are written as `"n/d"`
//! strings and floating-point values as JSON numbers. Observation indices
//! are numbered from 1.

use std::fmt::Write as _;

use ccei_core::{CycleWitness, Scalar};
use serde::{Deserialize, Serialize};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Number {
    Exact(String),
    Float(f64),
}

impl Number {
    pub fn from_scalar<S: Scalar>(v: &S) -> Self {
        if S::EXACT {
            Number::Exact(v.to_string())
        } else {
            Number::Float(v.to_f64())
        }
    }

    pub fn list<S: Scalar>(values: &[S]) -> Vec<Self> {
        values.iter().map(Number::from_scalar).collect()
    }
}

impl std::fmt::Display for Number {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Number::Exact(s) => f.write_str(s),
            Number::Float(v) => write!(f, "{v}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Exact,
    Float,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DatasetInfo {
    pub path: String,
    pub sha256: String,
    pub observations: usize,
    pub goods: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Parameters {
    /// One entry per observation.
    pub efficiency: Vec<Number>,
    pub tol: Number,
    pub samples: usize,
    pub seed: u64,
}

/// A cycle `[a, …, a]` in which the step starting at position
/// `strict_step` is strict.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub cycle: Vec<usize>,
    pub strict_step: usize,
}

impl From<&CycleWitness> for Witness {
    fn from(w: &CycleWitness) -> Self {
        Witness {
            cycle: w.one_based(),
            strict_step: w.strict_edge + 1,
        }
    }
}

impl std::fmt::Display for Witness {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> = self.cycle.iter().map(|v| v.to_string()).collect();
        write!(f, "{} (step {} strict)", parts.join(" -> "), self.strict_step)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SamplingSummary {
    pub observation: usize,
    pub samples: usize,
    pub violations: usize,
    pub seed: u64,
    /// The rejection sampler accepted nothing (ray samples still ran).
    #[serde(default)]
    pub sampling_exhausted: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "command", rename_all = "kebab-case")]
pub enum Results {
    CheckGarp {
        garp_holds: bool,
        weak_edges: usize,
        strict_edges: usize,
        witness: Option<Witness>,
    },
    Ccei {
        ccei_exact: Number,
        ccei_bisect: f64,
        /// `|bisect − exact| ≤ tol`.
        agree: bool,
        attained: bool,
        probe_above: Option<Number>,
        witness_above: Option<Witness>,
        breakpoints: usize,
    },
    Afriat {
        feasible: bool,
        phi: Option<Vec<Number>>,
        lambda: Option<Vec<Number>>,
        inequalities_hold: Option<bool>,
        witness: Option<Witness>,
    },
    Verify {
        feasible: bool,
        phi: Option<Vec<Number>>,
        lambda: Option<Vec<Number>>,
        rationalization_clean: Option<bool>,
        cost_clean: Option<bool>,
        /// Clean verifications imply e-GARP.
        consistent: bool,
        rationalization: Vec<SamplingSummary>,
        cost: Vec<SamplingSummary>,
        witness: Option<Witness>,
    },
    Oracle {
        garp_holds: bool,
        violating_cycles: Vec<Vec<usize>>,
        ordinal_levels: Option<Vec<i64>>,
        ccei: Number,
    },
}

impl Results {
    /// Whether the command's verdict is positive (exit code 0).
    pub fn verdict(&self) -> bool {
        match self {
            Results::CheckGarp { garp_holds, .. } | Results::Oracle { garp_holds, .. } => *garp_holds,
            Results::Ccei { .. } => true,
            Results::Afriat {
                feasible,
                inequalities_hold,
                ..
            } => *feasible && inequalities_hold.unwrap_or(false),
            Results::Verify {
                feasible,
                rationalization_clean,
                cost_clean,
                consistent,
                ..
            } => {
                *feasible
                    && rationalization_clean.unwrap_or(false)
                    && cost_clean.unwrap_or(false)
                    && *consistent
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportDocument {
    pub tool: String,
    pub version: String,
    pub schema_version: u32,
    pub mode: Mode,
    pub dataset: DatasetInfo,
    pub parameters: Parameters,
    #[serde(flatten)]
    pub results: Results,
    pub verdict: bool,
}

impl ReportDocument {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let d = &self.dataset;
        let mode = match self.mode {
            Mode::Exact => "exact",
            Mode::Float => "float",
        };
        let _ = writeln!(out, "dataset: {} ({} observations, {} goods)", d.path, d.observations, d.goods);
        let _ = writeln!(out, "sha256: {}", d.sha256);
        let _ = writeln!(out, "mode: {mode}");
        let e = &self.parameters.efficiency;
        if e.windows(2).all(|w| w[0] == w[1]) {
            let _ = writeln!(out, "efficiency: {}", e[0]);
        } else {
            let _ = writeln!(out, "efficiency: {}", join(e));
        }
        match &self.results {
            Results::CheckGarp {
                garp_holds,
                weak_edges,
                strict_edges,
                witness,
            } => {
                let _ = writeln!(out, "relations: {weak_edges} weak, {strict_edges} strict");
                let _ = writeln!(out, "e-GARP: {}", holds(*garp_holds));
                if let Some(w) = witness {
                    let _ = writeln!(out, "witness: {w}");
                }
            }
            Results::Ccei {
                ccei_exact,
                ccei_bisect,
                agree,
                attained,
                probe_above,
                witness_above,
                breakpoints,
            } => {
                let _ = writeln!(out, "ccei: {ccei_exact} ({})", if *attained { "attained" } else { "supremum, not attained" });
                let _ = writeln!(out, "ccei (bisection): {ccei_bisect} (tol {}, {})", self.parameters.tol, if *agree { "agrees" } else { "disagrees" });
                let _ = writeln!(out, "breakpoints: {breakpoints}");
                if let (Some(p), Some(w)) = (probe_above, witness_above) {
                    let _ = writeln!(out, "violation at {p}: {w}");
                }
            }
            Results::Afriat {
                feasible,
                phi,
                lambda,
                inequalities_hold,
                witness,
            } => {
                let _ = writeln!(out, "afriat: {}", if *feasible { "feasible" } else { "infeasible" });
                write_numbers(&mut out, phi, lambda);
                if let Some(ok) = inequalities_hold {
                    let _ = writeln!(out, "inequalities: {}", holds(*ok));
                }
                if let Some(w) = witness {
                    let _ = writeln!(out, "witness: {w}");
                }
            }
            Results::Verify {
                feasible,
                phi,
                lambda,
                rationalization_clean,
                cost_clean,
                consistent,
                rationalization,
                cost,
                witness,
            } => {
                let _ = writeln!(out, "afriat: {}", if *feasible { "feasible" } else { "infeasible" });
                write_numbers(&mut out, phi, lambda);
                for (name, clean, rows) in [
                    ("rationalization", rationalization_clean, rationalization),
                    ("cost", cost_clean, cost),
                ] {
                    if let Some(clean) = clean {
                        let samples: usize = rows.iter().map(|r| r.samples).sum();
                        let violations: usize = rows.iter().map(|r| r.violations).sum();
                        let _ = writeln!(
                            out,
                            "{name}: {} ({samples} samples, {violations} violations)",
                            if *clean { "clean" } else { "violated" }
                        );
                    }
                }
                if rationalization.iter().chain(cost).any(|r| r.sampling_exhausted) {
                    let _ = writeln!(out, "note: rejection sampling accepted no points at some observations");
                }
                let _ = writeln!(out, "duality consistent with e-GARP: {}", if *consistent { "yes" } else { "no" });
                if let Some(w) = witness {
                    let _ = writeln!(out, "witness: {w}");
                }
            }
            Results::Oracle {
                garp_holds,
                violating_cycles,
                ordinal_levels,
                ccei,
            } => {
                let _ = writeln!(out, "e-GARP (enumeration): {}", holds(*garp_holds));
                let _ = writeln!(out, "violating cycles: {}", violating_cycles.len());
                for c in violating_cycles {
                    let parts: Vec<String> = c.iter().map(|v| v.to_string()).collect();
                    let _ = writeln!(out, "  {}", parts.join(" -> "));
                }
                match ordinal_levels {
                    Some(u) => {
                        let parts: Vec<String> = u.iter().map(|v| v.to_string()).collect();
                        let _ = writeln!(out, "ordinal levels: {}", parts.join(", "));
                    }
                    None => {
                        let _ = writeln!(out, "ordinal levels: none");
                    }
                }
                let _ = writeln!(out, "ccei (enumeration): {ccei}");
            }
        }
        let _ = writeln!(out, "verdict: {}", if self.verdict { "pass" } else { "fail" });
        out
    }
}

fn holds(v: bool) -> &'static str {
    if v {
        "holds"
    } else {
        "violated"
    }
}

fn join(v: &[Number]) -> String {
    v.iter().map(Number::to_string).collect::<Vec<_>>().join(", ")
}

fn write_numbers(out: &mut String, phi: &Option<Vec<Number>>, lambda: &Option<Vec<Number>>) {
    if let (Some(phi), Some(lambda)) = (phi, lambda) {
        let _ = writeln!(out, "phi: {}", join(phi));
        let _ = writeln!(out, "lambda: {}", join(lambda));
    }
}
