use std::fs;

use intmeasure::families::{
    enumerate_complete_sets_with_budget, family_member, ramsay_gap_experiment, run_convergence,
    ConvergenceReport, FamilySpec, IndexRange, RamsayReport,
};
use intmeasure::measure::{energy, is_symmetric, log_det, moments, self_log_disc};
use intmeasure::potential::{capacity_explicit, capacity_leja, equilibrium_discretized, leja_points, weil_height};
use intmeasure::{
    delta_of, find_roots, w1_distance, AtomicMeasure, CapacityEstimate, CompactSetSpec, EnergyMode,
    Error, ExtendedReal, IntPolynomial, RootEntry,
};
use num_complex::Complex64;
use serde::Serialize;
use serde_json::Value;

use crate::output::{csv_table, CliError, Failure, Report};
use crate::svg::{scatter, Layer};
use crate::Settings;

const ROOT_COLOR: &str = "#c0392b";
const SET_COLOR: &str = "#2471a3";

pub fn parse_poly(text: &str) -> Result<IntPolynomial, CliError> {
    let p: IntPolynomial = text.parse().map_err(|e: Error| CliError::input(e.to_string()))?;
    if !p.is_monic() {
        return Err(Error::NotMonic(p.leading().to_string()).into());
    }
    Ok(p)
}

/// Inline JSON when the argument starts like a JSON document, else a file.
pub fn load_json(arg: &str) -> Result<Value, CliError> {
    let trimmed = arg.trim_start();
    let text = if trimmed.starts_with('{') || trimmed.starts_with('[') {
        arg.to_string()
    } else {
        fs::read_to_string(arg).map_err(|e| CliError::input(format!("{arg}: {e}")))?
    };
    serde_json::from_str(&text).map_err(|e| CliError::input(format!("{arg}: {e}")))
}

/// Builds a set, filling in the grid size from the settings when absent.
pub fn set_from_value(settings: &Settings, mut value: Value) -> Result<CompactSetSpec, Error> {
    if let Value::Object(map) = &mut value {
        map.entry("grid_size").or_insert(Value::from(settings.grid));
    }
    CompactSetSpec::from_json(value)
}

fn load_set(settings: &Settings, arg: &str) -> Result<CompactSetSpec, CliError> {
    Ok(set_from_value(settings, load_json(arg)?)?)
}

fn root_rows(entries: &[RootEntry]) -> String {
    csv_table(entries)
}

fn root_plot(label: &str, roots: &[Complex64], set: Option<&[Complex64]>) -> String {
    let mut layers = Vec::new();
    if let Some(points) = set {
        layers.push(Layer {
            label: "set",
            color: SET_COLOR,
            radius: 1.5,
            points,
        });
    }
    layers.push(Layer {
        label,
        color: ROOT_COLOR,
        radius: 3.0,
        points: roots,
    });
    scatter(&layers)
}

#[derive(Serialize)]
struct Analysis {
    polynomial: String,
    degree: usize,
    roots: Vec<RootEntry>,
    det: String,
    disc: String,
    log_det: ExtendedReal,
    #[serde(rename = "D")]
    d: ExtendedReal,
    offdiag_energy: ExtendedReal,
    mahler_height: f64,
    symmetric: bool,
}

pub fn analyze(settings: &Settings, text: &str) -> Result<Report, CliError> {
    let p = parse_poly(text)?;
    let roots = find_roots(&p, settings.precision)?;
    let mu = delta_of(&roots, roots.max_modulus())?;
    let unit = CompactSetSpec::disk(0.0, 1.0, settings.grid)?;
    let analysis = Analysis {
        polynomial: p.to_string(),
        degree: p.degree(),
        roots: roots.entries().to_vec(),
        det: p.determinant()?.value.to_string(),
        disc: p.discriminant()?.value.to_string(),
        log_det: log_det(&mu).value,
        d: self_log_disc(&mu).value,
        offdiag_energy: energy(&mu, EnergyMode::Offdiag).value,
        mahler_height: weil_height(&unit, &roots)?,
        symmetric: is_symmetric(&mu, settings.precision),
    };
    let csv = root_rows(roots.entries());
    let svg = root_plot("roots", &roots.expanded(), Some(unit.discretization()));
    Ok(Report::new("analyze", analysis, csv, svg))
}

#[derive(Serialize)]
struct CapacityOutput {
    set: Value,
    explicit: Option<CapacityEstimate>,
    leja: CapacityEstimate,
}

pub fn capacity(settings: &Settings, set: &str, n: usize) -> Result<Report, CliError> {
    let e = load_set(settings, set)?;
    let explicit = match capacity_explicit(&e) {
        Ok(c) => Some(c),
        Err(Error::UnsupportedShape { .. }) => None,
        Err(err) => return Err(err.into()),
    };
    let leja = capacity_leja(&e, n)?;
    let points = leja_points(&e, n)?;
    let csv = csv_table(explicit.iter().chain([&leja]));
    let svg = root_plot("leja", &points, Some(e.discretization()));
    let out = CapacityOutput {
        set: e.to_json(),
        explicit,
        leja,
    };
    Ok(Report::new("capacity", out, csv, svg))
}

#[derive(Serialize)]
struct EquilibriumOutput {
    set: Value,
    measure: AtomicMeasure,
    moments: Vec<Complex64>,
}

pub fn equilibrium(settings: &Settings, set: &str, n: usize) -> Result<Report, CliError> {
    let e = load_set(settings, set)?;
    let mu = equilibrium_discretized(&e, n)?;
    let svg = root_plot("equilibrium", &mu.locations(), None);
    let out = EquilibriumOutput {
        set: e.to_json(),
        moments: moments(&mu, 6)?,
        measure: mu.clone(),
    };
    Ok(Report::new("equilibrium", out, mu.to_csv(), svg))
}

fn convergence_failure(report: &ConvergenceReport) -> Option<Failure> {
    if report.verdict.passed() {
        return None;
    }
    if let Some(r) = report.records.iter().find(|r| r.failure.is_some()) {
        return Some(Failure {
            index: Some(r.index),
            reason: r.failure.clone().unwrap_or_default(),
        });
    }
    let series: Vec<(u32, f64, f64)> = report
        .records
        .iter()
        .filter_map(|r| r.metrics.as_ref().map(|m| (r.index, m.w1_to_target, m.weil_height)))
        .collect();
    let tol = intmeasure::families::MONOTONE_TOL;
    series
        .windows(2)
        .find(|w| w[1].1 > w[0].1 + tol || w[1].2 > w[0].2 + tol)
        .map(|w| Failure {
            index: Some(w[1].0),
            reason: "metric increased".into(),
        })
}

/// Runs a convergence experiment and plots the last member against the target.
pub fn convergence_report(f: &FamilySpec, target: &CompactSetSpec) -> Result<Report, CliError> {
    let report = run_convergence(f, target)?;
    let failure = convergence_failure(&report);
    let svg = match report.records.iter().rev().find(|r| r.metrics.is_some()) {
        Some(last) => {
            let roots = find_roots(&family_member(f, last.index)?, intmeasure::families::EXPERIMENT_RADIUS)?;
            let reference = equilibrium_discretized(target, roots.degree().max(2))?;
            root_plot("roots", &roots.expanded(), Some(&reference.locations()))
        }
        None => scatter(&[]),
    };
    let csv = report.to_csv();
    Ok(Report::new("converge", report, csv, svg).failing(failure))
}

pub fn converge(settings: &Settings, family: &str, target: &str) -> Result<Report, CliError> {
    let f: FamilySpec =
        serde_json::from_value(load_json(family)?).map_err(|e| CliError::input(format!("family: {e}")))?;
    f.validate()?;
    let target = load_set(settings, target)?;
    convergence_report(&f, &target)
}

pub fn ramsay_report(lambda: u32, indices: IndexRange) -> Result<Report, CliError> {
    let report: RamsayReport = ramsay_gap_experiment(lambda, indices)?;
    let failure = report.records.iter().find(|r| !r.bound_holds).map(|r| Failure {
        index: Some(r.n),
        reason: format!("log ratio {} below {}", r.log_ratio, report.bound),
    });
    let t0: Vec<Complex64> = report.records.iter().map(|r| Complex64::new(r.t0, 0.0)).collect();
    let circle = CompactSetSpec::circle(1.0, 256)?;
    let svg = root_plot("t0", &t0, Some(circle.discretization()));
    let csv = csv_table(&report.records);
    Ok(Report::new("ramsay", report, csv, svg).failing(failure))
}

pub fn ramsay(lambda: u32, start: u32, end: u32) -> Result<Report, CliError> {
    ramsay_report(lambda, IndexRange::new(start, end))
}

#[derive(Serialize)]
struct EnumerationOutput {
    set: Value,
    max_degree: usize,
    count: usize,
    polynomials: Vec<String>,
}

#[derive(Serialize)]
struct EnumerationRow {
    degree: usize,
    polynomial: String,
}

pub fn enumeration_report(
    e: &CompactSetSpec,
    max_degree: usize,
    budget: u64,
    expected: Option<&[IntPolynomial]>,
) -> Result<Report, CliError> {
    let found = enumerate_complete_sets_with_budget(e, max_degree, budget)?;
    let mut roots = Vec::new();
    for p in &found {
        roots.extend(find_roots(p, intmeasure::families::EXPERIMENT_RADIUS)?.expanded());
    }
    let failure = expected.and_then(|want| {
        let same = want.len() == found.len() && want.iter().all(|p| found.contains(p));
        (!same).then(|| Failure {
            index: None,
            reason: format!("found {} polynomials, expected {}", found.len(), want.len()),
        })
    });
    let csv = csv_table(found.iter().map(|p| EnumerationRow {
        degree: p.degree(),
        polynomial: p.to_string(),
    }));
    let svg = root_plot("roots", &roots, Some(e.discretization()));
    let out = EnumerationOutput {
        set: e.to_json(),
        max_degree,
        count: found.len(),
        polynomials: found.iter().map(ToString::to_string).collect(),
    };
    Ok(Report::new("enumerate", out, csv, svg).failing(failure))
}

pub fn enumerate(settings: &Settings, set: &str, degree: usize, budget: u64) -> Result<Report, CliError> {
    let e = load_set(settings, set)?;
    enumeration_report(&e, degree, budget, None)
}

/// A polynomial's root measure, or an atomic measure in JSON.
fn load_measure(settings: &Settings, arg: &str) -> Result<AtomicMeasure, CliError> {
    match arg.parse::<IntPolynomial>() {
        Ok(_) => {
            let p = parse_poly(arg)?;
            let roots = find_roots(&p, settings.precision)?;
            Ok(delta_of(&roots, roots.max_modulus())?)
        }
        Err(parse_error) => {
            let trimmed = arg.trim_start();
            if !trimmed.starts_with('{') && !std::path::Path::new(arg).is_file() {
                return Err(CliError::input(parse_error.to_string()));
            }
            serde_json::from_value(load_json(arg)?).map_err(|e| CliError::input(format!("{arg}: {e}")))
        }
    }
}

#[derive(Serialize)]
struct TransportOutput {
    distance: f64,
    plan: intmeasure::TransportPlan,
}

pub fn wasserstein(settings: &Settings, first: &str, second: &str) -> Result<Report, CliError> {
    let mu = load_measure(settings, first)?;
    let nu = load_measure(settings, second)?;
    let (distance, plan) = w1_distance(&mu, &nu);
    let csv = csv_table(plan.entries.iter().map(|e| (e.source, e.target, e.mass.to_string())));
    let csv = format!("source,target,mass\n{csv}");
    let svg = scatter(&[
        Layer {
            label: "first",
            color: SET_COLOR,
            radius: 3.0,
            points: &mu.locations(),
        },
        Layer {
            label: "second",
            color: ROOT_COLOR,
            radius: 2.0,
            points: &nu.locations(),
        },
    ]);
    Ok(Report::new("wasserstein", TransportOutput { distance, plan }, csv, svg))
}
