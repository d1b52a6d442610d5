//! Explicit polynomial families and the experiments run on them.

use std::sync::atomic::{AtomicU64, Ordering};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{One, Pow, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::intpoly::{bigint_string, IntPolynomial};
use crate::measure::{delta_of, energy, log_det, moments, EnergyMode};
use crate::potential::{equilibrium_discretized, weil_height, CompactSetSpec, Shape};
use crate::roots::{find_roots, DiskCount, RootSet};
use crate::transport::w1_distance;

/// Root radius target used by the experiments.
pub const EXPERIMENT_RADIUS: f64 = 1e-10;

/// Number of moments compared in convergence runs.
pub const MOMENT_COUNT: usize = 6;

/// Atom count of the reference equilibrium used for moment gaps.
const REFERENCE_SIZE: usize = 4096;

/// Tolerance for the non-increasing checks in convergence verdicts.
pub const MONOTONE_TOL: f64 = 1e-12;

/// Node budget for `enumerate_complete_sets`.
pub const DEFAULT_BUDGET: u64 = 50_000_000;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum FamilyKind {
    /// `q^(k idx) - m^(idx deg q)`: roots on the lemniscate `|q|^k = m^deg q`.
    LemniscatePower { q: IntPolynomial, m: u32, k: u32 },
    /// `t^idx + (lambda^(idx-1)/2) t + 2` for even `lambda`.
    Ramsay { lambda: u32 },
    /// `t^idx - 1`.
    RootsOfUnity,
    /// Characteristic polynomial of the path graph on `idx` vertices.
    ChebyshevPath,
}

fn one() -> u32 {
    1
}

/// Indices `start, start + step, ...` up to `end`, or `start, 2 start, ...`
/// when `doubling` is set.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IndexRange {
    pub start: u32,
    pub end: u32,
    #[serde(default = "one")]
    pub step: u32,
    #[serde(default)]
    pub doubling: bool,
}

impl IndexRange {
    pub fn new(start: u32, end: u32) -> Self {
        Self {
            start,
            end,
            step: 1,
            doubling: false,
        }
    }

    pub fn doubling(start: u32, end: u32) -> Self {
        Self {
            start,
            end,
            step: 1,
            doubling: true,
        }
    }

    pub fn contains(&self, idx: u32) -> bool {
        self.start <= idx && idx <= self.end
    }

    pub fn indices(&self) -> Vec<u32> {
        let mut out = Vec::new();
        let mut i = self.start;
        while i <= self.end {
            out.push(i);
            let next = if self.doubling {
                i.checked_mul(2)
            } else {
                i.checked_add(self.step)
            };
            match next {
                Some(n) if n > i => i = n,
                _ => break,
            }
        }
        out
    }

    fn validate(&self) -> Result<()> {
        if self.start > self.end || self.step == 0 || (self.doubling && self.start == 0) {
            return Err(Error::InvalidArgument(format!("bad index range {self:?}")));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FamilySpec {
    pub family: FamilyKind,
    pub indices: IndexRange,
}

impl FamilySpec {
    pub fn new(family: FamilyKind, indices: IndexRange) -> Result<Self> {
        let spec = Self { family, indices };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        self.indices.validate()?;
        match &self.family {
            FamilyKind::LemniscatePower { q, m, k } => {
                if !q.is_monic() || q.degree() == 0 {
                    return Err(Error::NotMonic(q.to_string()));
                }
                if *m == 0 || *k == 0 {
                    return Err(Error::InvalidArgument("m and k must be positive".into()));
                }
            }
            FamilyKind::Ramsay { lambda } => {
                if *lambda < 2 || lambda % 2 != 0 {
                    return Err(Error::InvalidArgument(format!(
                        "ramsay lambda must be even and at least 2, got {lambda}"
                    )));
                }
            }
            FamilyKind::RootsOfUnity | FamilyKind::ChebyshevPath => {}
        }
        Ok(())
    }

    fn min_index(&self) -> u32 {
        match self.family {
            FamilyKind::Ramsay { .. } => 2,
            _ => 1,
        }
    }
}

/// Path-graph polynomials by `P_{k+1} = t P_k - P_{k-1}`.
fn chebyshev_path(n: u32) -> IntPolynomial {
    let t = IntPolynomial::monomial(1);
    let mut prev = IntPolynomial::one();
    let mut cur = t.clone();
    for _ in 1..n {
        let next = cur.mul(&t).checked_sub(&prev).expect("monic recurrence");
        prev = cur;
        cur = next;
    }
    cur
}

/// The member of index `idx`.
pub fn family_member(f: &FamilySpec, idx: u32) -> Result<IntPolynomial> {
    f.validate()?;
    if !f.indices.contains(idx) || idx < f.min_index() {
        return Err(Error::IndexOutOfRange { index: idx });
    }
    let idx_usize = idx as usize;
    match &f.family {
        FamilyKind::LemniscatePower { q, m, k } => {
            let power = q.pow(k * idx)?;
            let c: BigInt = BigInt::from(*m).pow(idx as usize * q.degree());
            power.checked_sub(&IntPolynomial::new(vec![c])?)
        }
        FamilyKind::Ramsay { lambda } => {
            let mid: BigInt = BigInt::from(*lambda).pow(idx - 1) / 2;
            let mut c = vec![BigInt::zero(); idx_usize + 1];
            c[0] = BigInt::from(2);
            c[1] = mid;
            c[idx_usize] = BigInt::one();
            IntPolynomial::new(c)
        }
        FamilyKind::RootsOfUnity => {
            let mut c = vec![BigInt::zero(); idx_usize + 1];
            c[0] = -BigInt::one();
            c[idx_usize] = BigInt::one();
            IntPolynomial::new(c)
        }
        FamilyKind::ChebyshevPath => Ok(chebyshev_path(idx)),
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceMetrics {
    pub w1_to_target: f64,
    pub moment_gaps: Vec<f64>,
    pub weil_height: f64,
    pub offdiag_energy: f64,
    pub log_det: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceRecord {
    pub index: u32,
    pub degree: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub metrics: Option<ConvergenceMetrics>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub failure: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceVerdict {
    /// Every index produced metrics.
    pub complete: bool,
    pub w1_nonincreasing: bool,
    pub height_nonincreasing: bool,
}

impl ConvergenceVerdict {
    pub fn passed(&self) -> bool {
        self.complete && self.w1_nonincreasing && self.height_nonincreasing
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceReport {
    pub family: FamilySpec,
    pub target: CompactSetSpec,
    pub records: Vec<ConvergenceRecord>,
    pub verdict: ConvergenceVerdict,
}

impl ConvergenceReport {
    /// CSV time series, one row per index.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("index,degree,w1_to_target,weil_height,offdiag_energy,log_det");
        for k in 1..=MOMENT_COUNT {
            out.push_str(&format!(",moment_gap_{k}"));
        }
        out.push_str(",failure\n");
        for r in &self.records {
            out.push_str(&format!("{},{}", r.index, r.degree));
            match &r.metrics {
                Some(m) => {
                    out.push_str(&format!(
                        ",{},{},{},{}",
                        m.w1_to_target, m.weil_height, m.offdiag_energy, m.log_det
                    ));
                    for g in &m.moment_gaps {
                        out.push_str(&format!(",{g}"));
                    }
                    out.push_str(",\n");
                }
                None => {
                    out.push_str(&",".repeat(4 + MOMENT_COUNT));
                    out.push_str(&format!(",{}\n", r.failure.as_deref().unwrap_or("")));
                }
            }
        }
        out
    }
}

fn nonincreasing(values: &[f64]) -> bool {
    values.windows(2).all(|w| w[1] <= w[0] + MONOTONE_TOL)
}

fn convergence_metrics(
    p: &IntPolynomial,
    target: &CompactSetSpec,
    reference: &[Complex64],
) -> Result<ConvergenceMetrics> {
    let roots = find_roots(p, EXPERIMENT_RADIUS)?;
    let mu = delta_of(&roots, roots.max_modulus())?;
    let per_target = match target.shape() {
        Shape::Lemniscate { poly, .. } => p.degree().div_ceil(poly.degree()),
        _ => p.degree(),
    };
    let eq = equilibrium_discretized(target, per_target)?;
    let (w1, _) = w1_distance(&mu, &eq);
    let gaps = moments(&mu, MOMENT_COUNT)?
        .iter()
        .zip(reference)
        .map(|(a, b)| (a - b).norm())
        .collect();
    Ok(ConvergenceMetrics {
        w1_to_target: w1,
        moment_gaps: gaps,
        weil_height: weil_height(target, &roots)?,
        offdiag_energy: energy(&mu, EnergyMode::Offdiag).expect_finite(),
        log_det: log_det(&mu).expect_finite(),
    })
}

/// Distance of each family member's root measure to the equilibrium
/// measure of `target`, with heights, energies and moment gaps.
pub fn run_convergence(f: &FamilySpec, target: &CompactSetSpec) -> Result<ConvergenceReport> {
    f.validate()?;
    let reference_n = match target.shape() {
        Shape::Lemniscate { poly, .. } => REFERENCE_SIZE / poly.degree(),
        _ => REFERENCE_SIZE,
    };
    let reference = moments(&equilibrium_discretized(target, reference_n)?, MOMENT_COUNT)?;
    let indices = f.indices.indices();
    let records: Vec<ConvergenceRecord> = indices
        .par_iter()
        .map(|&idx| {
            let p = match family_member(f, idx) {
                Ok(p) => p,
                Err(e) => {
                    return ConvergenceRecord {
                        index: idx,
                        degree: 0,
                        metrics: None,
                        failure: Some(e.to_string()),
                    }
                }
            };
            let (metrics, failure) = match convergence_metrics(&p, target, &reference) {
                Ok(m) => (Some(m), None),
                Err(e) => (None, Some(e.to_string())),
            };
            ConvergenceRecord {
                index: idx,
                degree: p.degree(),
                metrics,
                failure,
            }
        })
        .collect();
    let ok: Vec<&ConvergenceMetrics> = records.iter().filter_map(|r| r.metrics.as_ref()).collect();
    let w1: Vec<f64> = ok.iter().map(|m| m.w1_to_target).collect();
    let h: Vec<f64> = ok.iter().map(|m| m.weil_height).collect();
    let verdict = ConvergenceVerdict {
        complete: ok.len() == records.len(),
        w1_nonincreasing: nonincreasing(&w1),
        height_nonincreasing: nonincreasing(&h),
    };
    Ok(ConvergenceReport {
        family: f.clone(),
        target: target.clone(),
        records,
        verdict,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RamsayRecord {
    pub n: u32,
    pub roots_in_unit_disk: u32,
    /// The root inside the unit disk and its certified radius.
    pub t0: f64,
    pub t0_radius: f64,
    /// `|log|t0|| / n`.
    pub log_ratio: f64,
    /// Integral of `log|z|` over the part of the root measure in the closed
    /// unit disk.
    pub inner_integral: f64,
    pub log_det: f64,
    pub bound_holds: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RamsayReport {
    pub lambda: u32,
    /// `(log lambda) / 2`.
    pub bound: f64,
    pub records: Vec<RamsayRecord>,
    pub verdict: bool,
}

fn ramsay_record(spec: &FamilySpec, n: u32, bound: f64) -> Result<RamsayRecord> {
    let p = family_member(spec, n)?;
    let roots = find_roots(&p, EXPERIMENT_RADIUS)?;
    let failure = |reason: String| Error::ExperimentFailure { index: n, reason };
    match roots.count_in_disk(Complex64::zero(), 1.0) {
        DiskCount::Certain(1) => {}
        DiskCount::Certain(c) => {
            return Err(failure(format!("{c} roots in the open unit disk, expected exactly 1")))
        }
        DiskCount::Indeterminate => {
            return Err(failure("a root disk straddles the unit circle".into()))
        }
    }
    let small = roots
        .entries()
        .iter()
        .find(|e| e.location().norm() < 1.0)
        .expect("one root inside");
    let t0 = small.location();
    let log_ratio = t0.norm().ln().abs() / n as f64;
    let inner_integral = roots
        .entries()
        .iter()
        .filter(|e| e.location().norm() <= 1.0)
        .map(|e| e.multiplicity as f64 * e.location().norm().ln())
        .sum::<f64>()
        / roots.degree() as f64;
    let mu = delta_of(&roots, roots.max_modulus())?;
    Ok(RamsayRecord {
        n,
        roots_in_unit_disk: 1,
        t0: t0.re,
        t0_radius: small.radius,
        log_ratio,
        inner_integral,
        log_det: log_det(&mu).expect_finite(),
        bound_holds: log_ratio >= bound,
    })
}

/// Tracks the single small root of the Ramsay family, whose escape to the
/// origin keeps `log det` from being lower semicontinuous.
pub fn ramsay_gap_experiment(lambda: u32, indices: IndexRange) -> Result<RamsayReport> {
    if lambda < 4 || !lambda.is_multiple_of(2) {
        return Err(Error::InvalidArgument(format!(
            "lambda must be even and at least 4, got {lambda}"
        )));
    }
    if indices.start < 4 {
        return Err(Error::InvalidArgument("indices must be at least 4".into()));
    }
    let spec = FamilySpec::new(FamilyKind::Ramsay { lambda }, indices)?;
    let bound = (lambda as f64).ln() / 2.0;
    let results: Vec<Result<RamsayRecord>> = indices
        .indices()
        .par_iter()
        .map(|&n| ramsay_record(&spec, n, bound))
        .collect();
    let records = results.into_iter().collect::<Result<Vec<_>>>()?;
    let verdict = records.iter().all(|r| r.bound_holds);
    Ok(RamsayReport {
        lambda,
        bound,
        records,
        verdict,
    })
}

/// Lower and upper bounds on the power sum `s_k` of `d` points in `E`,
/// plus the radius used for coefficient bounds.
struct PowerSumBounds {
    lambda: f64,
    shape: BoundShape,
}

enum BoundShape {
    /// Real roots in `[a, b]`.
    Interval { a: f64, b: f64 },
    /// Roots in the closed disk about a real center.
    Disk { center: f64, radius: f64 },
}

impl PowerSumBounds {
    fn for_set(e: &CompactSetSpec) -> Self {
        match e.shape() {
            Shape::Interval { a, b } => Self {
                lambda: a.abs().max(b.abs()),
                shape: BoundShape::Interval { a: *a, b: *b },
            },
            Shape::Disk { center, radius } => Self {
                lambda: center.abs() + radius,
                shape: BoundShape::Disk {
                    center: *center,
                    radius: *radius,
                },
            },
            Shape::Circle { radius } => Self {
                lambda: *radius,
                shape: BoundShape::Disk {
                    center: 0.0,
                    radius: *radius,
                },
            },
            Shape::Lemniscate { poly, level } => {
                // |z| >= 1 and |p(z)| <= R give |z| <= R + sum |a_k|
                let tail: f64 = poly.coeffs()[..poly.degree()]
                    .iter()
                    .map(|c| c.abs().to_f64().unwrap_or(f64::INFINITY))
                    .sum();
                let lambda = (level + tail).max(1.0);
                Self {
                    lambda,
                    shape: BoundShape::Disk {
                        center: 0.0,
                        radius: lambda,
                    },
                }
            }
            Shape::Cloud { points } => {
                let lambda = points.iter().map(|z| z.norm()).fold(0.0, f64::max);
                Self {
                    lambda,
                    shape: BoundShape::Disk {
                        center: 0.0,
                        radius: lambda,
                    },
                }
            }
        }
    }

    /// Admissible range of `s_k` for `d` points, given `s_1..s_{k-1}`
    /// (`s[0] = d`).
    fn range(&self, d: usize, k: usize, s: &[i128]) -> (f64, f64) {
        let df = d as f64;
        match self.shape {
            BoundShape::Interval { a, b } => {
                let mut lo = a.powi(k as i32).min(b.powi(k as i32));
                let mut hi = a.powi(k as i32).max(b.powi(k as i32));
                if a < 0.0 && b > 0.0 {
                    lo = lo.min(0.0);
                    hi = hi.max(0.0);
                }
                let (mut lo, mut hi) = (df * lo, df * hi);
                if k == 2 {
                    // sum (x - c)^2 lies in [(s_1 - d c)^2 / d, d h^2]
                    let (c, h) = ((a + b) / 2.0, (b - a) / 2.0);
                    let s1 = s[1] as f64;
                    let shift = 2.0 * c * s1 - df * c * c;
                    lo = lo.max((s1 - df * c).powi(2) / df + shift);
                    hi = hi.min(df * h * h + shift);
                }
                (lo, hi)
            }
            BoundShape::Disk { center, radius } => {
                if center == 0.0 {
                    let r = df * radius.powi(k as i32);
                    return (-r, r);
                }
                // |sum (z - c)^k| <= d r^k, expanded binomially in s_j
                let mut known = 0.0;
                let mut binom = 1.0;
                for j in 0..k {
                    known += binom * (-center).powi((k - j) as i32) * s[j] as f64;
                    binom = binom * (k - j) as f64 / (j + 1) as f64;
                }
                let r = df * radius.powi(k as i32);
                (-r - known, r - known)
            }
        }
    }
}

struct Search<'a> {
    e: &'a CompactSetSpec,
    bounds: PowerSumBounds,
    found: &'a [IntPolynomial],
    nodes: &'a AtomicU64,
    budget: u64,
    degree: usize,
}

impl Search<'_> {
    fn tick(&self) -> Result<()> {
        if self.nodes.fetch_add(1, Ordering::Relaxed) + 1 > self.budget {
            return Err(Error::BudgetExceeded {
                budget: self.budget,
                degree: self.degree,
                bound: format!(
                    "power sums of {} points within radius {}",
                    self.degree, self.bounds.lambda
                ),
            });
        }
        Ok(())
    }

    /// Depth-first over `c_{d-1}, c_{d-2}, ...` with `c` holding the chosen
    /// coefficients in that order and `s` the resulting power sums.
    fn descend(&self, c: &mut Vec<i128>, s: &mut Vec<i128>, out: &mut Vec<IntPolynomial>) -> Result<()> {
        self.tick()?;
        let d = self.degree;
        let k = c.len() + 1;
        if k > d {
            return self.leaf(c, out);
        }
        // Newton: s_k + sum_{i=1}^{k-1} c_{d-i} s_{k-i} + k c_{d-k} = 0
        let partial: i128 = (1..k).map(|i| c[i - 1] * s[k - i]).sum();
        let (lo, hi) = self.bounds.range(d, k, s);
        let slack = 1e-9 * (1.0 + lo.abs().max(hi.abs()));
        let kf = k as f64;
        let cmin = ((-(hi + slack) - partial as f64) / kf).ceil();
        let cmax = ((-(lo - slack) - partial as f64) / kf).floor();
        if !(cmin <= cmax) {
            return Ok(());
        }
        for ck in cmin as i128..=cmax as i128 {
            let sk = -(k as i128) * ck - partial;
            c.push(ck);
            s.push(sk);
            let r = self.descend(c, s, out);
            c.pop();
            s.pop();
            r?;
        }
        Ok(())
    }

    fn leaf(&self, c: &[i128], out: &mut Vec<IntPolynomial>) -> Result<()> {
        let d = self.degree;
        let mut coeffs: Vec<BigInt> = c.iter().rev().map(|&x| BigInt::from(x)).collect();
        coeffs.push(BigInt::one());
        if coeffs[0].is_zero() && d > 1 {
            // divisible by t, which is either already found or excluded
            return Ok(());
        }
        let p = IntPolynomial::new(coeffs)?;
        if self.found.iter().any(|f| p.is_divisible_by(f)) {
            return Ok(());
        }
        let roots = find_roots(&p, EXPERIMENT_RADIUS * self.bounds.lambda.max(1.0))?;
        if roots
            .entries()
            .iter()
            .all(|r| self.e.disk_meets(r.location(), r.radius))
        {
            out.push(p);
        }
        Ok(())
    }
}

/// Every irreducible monic integer polynomial of degree at most
/// `max_degree` whose roots all lie in `E` (up to their certified radius).
pub fn enumerate_complete_sets(e: &CompactSetSpec, max_degree: usize) -> Result<Vec<IntPolynomial>> {
    enumerate_complete_sets_with_budget(e, max_degree, DEFAULT_BUDGET)
}

/// As [`enumerate_complete_sets`], failing once `budget` search nodes have
/// been visited.
pub fn enumerate_complete_sets_with_budget(
    e: &CompactSetSpec,
    max_degree: usize,
    budget: u64,
) -> Result<Vec<IntPolynomial>> {
    if max_degree == 0 || max_degree > 10 {
        return Err(Error::InvalidArgument("max degree must be in 1..=10".into()));
    }
    let nodes = AtomicU64::new(0);
    let mut found: Vec<IntPolynomial> = Vec::new();
    for degree in 1..=max_degree {
        let search = Search {
            e,
            bounds: PowerSumBounds::for_set(e),
            found: &found,
            nodes: &nodes,
            budget,
            degree,
        };
        // split on the first coefficient for parallelism
        let (lo, hi) = search.bounds.range(degree, 1, &[degree as i128]);
        let slack = 1e-9 * (1.0 + lo.abs().max(hi.abs()));
        let first: Vec<i128> = ((-(hi + slack)).ceil() as i128..=(-(lo - slack)).floor() as i128).collect();
        let parts: Vec<Result<Vec<IntPolynomial>>> = first
            .par_iter()
            .map(|&c1| {
                let mut out = Vec::new();
                let mut c = vec![c1];
                let mut s = vec![degree as i128, -c1];
                search.descend(&mut c, &mut s, &mut out).map(|_| out)
            })
            .collect();
        let mut new = Vec::new();
        for part in parts {
            new.extend(part?);
        }
        found.extend(new);
    }
    Ok(found)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RegularityReport {
    pub degree: usize,
    pub squarefree_degree: usize,
    /// Roots of `p` in the open ball, with multiplicity; absent when a
    /// certified disk straddles the boundary.
    pub inside: Option<u32>,
    pub delta: Option<f64>,
    /// Distinct roots in the ball.
    pub distinct_inside: Option<u32>,
    pub exponent: Option<u64>,
    #[serde(with = "bigint_string")]
    pub disc_abs: BigInt,
    pub log_disc: f64,
    pub log_upper_bound: Option<f64>,
    pub lower_holds: bool,
    pub upper_holds: Option<bool>,
    pub indeterminate: bool,
}

impl RegularityReport {
    pub fn holds(&self) -> bool {
        self.lower_holds && self.upper_holds == Some(true)
    }
}

/// Checks `1 <= |disc q| <= (2 eps)^(k(k-1)) (2 lambda)^(n^2)` for the
/// squarefree part `q` of `p`, of degree `n`, with `k` distinct roots in
/// `B(beta, eps)`.
pub fn regularity_chain_check(
    p: &IntPolynomial,
    beta: Complex64,
    eps: f64,
    lambda: f64,
) -> Result<RegularityReport> {
    if !p.is_monic() {
        return Err(Error::NotMonic(p.leading().to_string()));
    }
    if !(eps > 0.0 && eps < 0.5) {
        return Err(Error::InvalidArgument("eps must lie in (0, 1/2)".into()));
    }
    if !(lambda > 0.0) || !lambda.is_finite() {
        return Err(Error::InvalidArgument("lambda must be positive".into()));
    }
    let roots: RootSet = find_roots(p, EXPERIMENT_RADIUS)?;
    let nearest_modulus = roots
        .entries()
        .iter()
        .map(|e| e.location().norm() - e.radius)
        .fold(0.0, f64::max);
    if nearest_modulus > lambda {
        return Err(Error::InvalidArgument(format!(
            "roots reach modulus {nearest_modulus} beyond lambda = {lambda}"
        )));
    }
    let mut inside = Some((0u32, 0u32));
    for e in roots.entries() {
        let d = (e.location() - beta).norm();
        if d + e.radius < eps {
            inside = inside.map(|(m, k)| (m + e.multiplicity, k + 1));
        } else if d - e.radius < eps {
            inside = None;
            break;
        }
    }
    let n = roots.entries().len();
    let disc = p.discriminant()?;
    let log_disc = disc.ln_abs();
    let exponent = inside.map(|(_, k)| k as u64 * (k as u64).saturating_sub(1));
    let log_upper_bound =
        exponent.map(|a| a as f64 * (2.0 * eps).ln() + (n * n) as f64 * (2.0 * lambda).ln());
    let upper_holds =
        log_upper_bound.map(|b| log_disc <= b + 1e-9 * b.abs().max(1.0));
    Ok(RegularityReport {
        degree: p.degree(),
        squarefree_degree: n,
        inside: inside.map(|(m, _)| m),
        delta: inside.map(|(m, _)| m as f64 / p.degree() as f64),
        distinct_inside: inside.map(|(_, k)| k),
        exponent,
        lower_holds: !disc.value.is_zero() && disc.value.abs() >= BigInt::one(),
        disc_abs: disc.value.abs(),
        log_disc,
        log_upper_bound,
        upper_holds,
        indeterminate: inside.is_none(),
    })
}

#[cfg(test)]
#[path = "families_tests.rs"]
mod tests;
