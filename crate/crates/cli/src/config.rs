use std::fs;
use std::path::Path;

use intmeasure::families::{family_member, regularity_chain_check, FamilySpec, IndexRange, RegularityReport};
use intmeasure::{find_roots, root_bound, IntPolynomial};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::commands::{convergence_report, enumeration_report, ramsay_report, set_from_value};
use crate::output::{csv_table, CliError, Failure, Report};
use crate::svg::{scatter, Layer};
use crate::{Format, Settings};

/// An experiment file: one experiment plus optional overrides of the
/// global flags.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub experiment: Experiment,
    #[serde(default)]
    pub precision: Option<f64>,
    #[serde(default)]
    pub grid: Option<usize>,
    #[serde(default)]
    pub formats: Option<Vec<Format>>,
}

#[derive(Debug, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum Experiment {
    Convergence {
        family: FamilySpec,
        target: Value,
    },
    Ramsay {
        lambda: u32,
        indices: IndexRange,
    },
    Enumerate {
        set: Value,
        max_degree: usize,
        #[serde(default)]
        budget: Option<u64>,
        /// Exact expected list; the run fails when the result differs.
        #[serde(default)]
        expect: Option<Vec<IntPolynomial>>,
    },
    Regularity {
        family: FamilySpec,
        center: [f64; 2],
        eps: f64,
        /// Root modulus bound; defaults to a per-member bound.
        #[serde(default)]
        lambda: Option<f64>,
    },
}

pub fn check_precision(p: f64) -> Result<(), CliError> {
    if p > 0.0 && p <= 1e-4 {
        Ok(())
    } else {
        Err(CliError::config(format!("precision {p} outside (0, 1e-4]")))
    }
}

pub fn check_grid(g: usize) -> Result<(), CliError> {
    if (1_000..=1_000_000).contains(&g) {
        Ok(())
    } else {
        Err(CliError::config(format!("grid size {g} outside [1000, 1000000]")))
    }
}

pub fn experiment(settings: &mut Settings, path: &Path) -> Result<Report, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::config(format!("{}: {e}", path.display())))?;
    let config: RunConfig =
        serde_json::from_str(&text).map_err(|e| CliError::config(format!("{}: {e}", path.display())))?;
    if let Some(p) = config.precision {
        check_precision(p)?;
        settings.precision = p;
    }
    if let Some(g) = config.grid {
        check_grid(g)?;
        settings.grid = g;
    }
    if let Some(f) = config.formats {
        if f.is_empty() {
            return Err(CliError::config("formats must not be empty"));
        }
        settings.formats = f;
    }
    let bad_config = |e: intmeasure::Error| CliError::config(e.to_string());
    match config.experiment {
        Experiment::Convergence { family, target } => {
            family.validate().map_err(bad_config)?;
            let target = set_from_value(settings, target).map_err(bad_config)?;
            convergence_report(&family, &target)
        }
        Experiment::Ramsay { lambda, indices } => ramsay_report(lambda, indices),
        Experiment::Enumerate {
            set,
            max_degree,
            budget,
            expect,
        } => {
            let e = set_from_value(settings, set).map_err(bad_config)?;
            let budget = budget.unwrap_or(intmeasure::families::DEFAULT_BUDGET);
            enumeration_report(&e, max_degree, budget, expect.as_deref())
        }
        Experiment::Regularity {
            family,
            center,
            eps,
            lambda,
        } => {
            family.validate().map_err(bad_config)?;
            regularity(&family, Complex64::new(center[0], center[1]), eps, lambda)
        }
    }
}

#[derive(Serialize)]
struct RegularityRecord {
    index: u32,
    lambda: f64,
    #[serde(flatten)]
    report: RegularityReport,
    holds: bool,
}

#[derive(Serialize)]
struct RegularityRow {
    index: u32,
    degree: usize,
    squarefree_degree: usize,
    distinct_inside: Option<u32>,
    exponent: Option<u64>,
    log_disc: f64,
    log_upper_bound: Option<f64>,
    holds: bool,
}

#[derive(Serialize)]
struct RegularityOutput {
    family: FamilySpec,
    center: [f64; 2],
    eps: f64,
    records: Vec<RegularityRecord>,
    verdict: bool,
}

fn regularity(f: &FamilySpec, beta: Complex64, eps: f64, lambda: Option<f64>) -> Result<Report, CliError> {
    let mut records = Vec::new();
    let mut last = IntPolynomial::one();
    for idx in f.indices.indices() {
        let p = family_member(f, idx)?;
        let lambda = match lambda {
            Some(l) => l,
            None => root_bound(&p)?.max(0.5),
        };
        let report = regularity_chain_check(&p, beta, eps, lambda)?;
        records.push(RegularityRecord {
            index: idx,
            lambda,
            holds: report.holds(),
            report,
        });
        last = p;
    }
    let failure = records.iter().find(|r| !r.holds).map(|r| Failure {
        index: Some(r.index),
        reason: if r.report.indeterminate {
            "a root disk meets the ball boundary".into()
        } else {
            "discriminant outside the chain".into()
        },
    });
    let csv = csv_table(records.iter().map(|r| RegularityRow {
        index: r.index,
        degree: r.report.degree,
        squarefree_degree: r.report.squarefree_degree,
        distinct_inside: r.report.distinct_inside,
        exponent: r.report.exponent,
        log_disc: r.report.log_disc,
        log_upper_bound: r.report.log_upper_bound,
        holds: r.holds,
    }));
    let roots = find_roots(&last, intmeasure::families::EXPERIMENT_RADIUS)?.expanded();
    let svg = scatter(&[Layer {
        label: "roots",
        color: "#c0392b",
        radius: 3.0,
        points: &roots,
    }]);
    let out = RegularityOutput {
        family: f.clone(),
        center: [beta.re, beta.im],
        eps,
        verdict: failure.is_none(),
        records,
    };
    Ok(Report::new("regularity", out, csv, svg).failing(failure))
}
