//! Compact sets symmetric under conjugation, their Green functions,
//! capacities and equilibrium measures.

use std::f64::consts::PI;

use num_complex::Complex64;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::intpoly::IntPolynomial;
use crate::measure::AtomicMeasure;
use crate::roots::{solve_complex, RootSet};

/// Boundary sample size used when none is given.
pub const DEFAULT_GRID: usize = 10_000;

/// Relative tolerance for the conjugation-symmetry check on point clouds.
const SYMMETRY_TOL: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq)]
pub enum Shape {
    /// Closed disk centred on the real axis.
    Disk { center: f64, radius: f64 },
    /// Circle about the origin; its filled hull has the same potential theory.
    Circle { radius: f64 },
    /// Real segment `[a, b]`.
    Interval { a: f64, b: f64 },
    /// Filled lemniscate `{ |p(z)| <= level }`.
    Lemniscate { poly: IntPolynomial, level: f64 },
    /// A finite conjugation-symmetric point set.
    Cloud { points: Vec<Complex64> },
}

impl Shape {
    pub fn name(&self) -> &'static str {
        match self {
            Shape::Disk { .. } => "disk",
            Shape::Circle { .. } => "circle",
            Shape::Interval { .. } => "interval",
            Shape::Lemniscate { .. } => "lemniscate",
            Shape::Cloud { .. } => "cloud",
        }
    }
}

/// A compact set together with a boundary sample.
#[derive(Clone, Debug, PartialEq)]
pub struct CompactSetSpec {
    shape: Shape,
    grid_size: usize,
    discretization: Vec<Complex64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CapacityMethod {
    Explicit,
    Leja,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CapacityEstimate {
    pub value: f64,
    pub method: CapacityMethod,
    #[serde(rename = "n")]
    pub n_points: usize,
    /// Change from the estimate with half as many points.
    pub trend: f64,
}

/// `e^{2 pi i k / m}` with exact values at the real and imaginary axes and
/// exact mirror symmetry.
fn unit_root(k: usize, m: usize) -> Complex64 {
    let k = k % m;
    if 2 * k > m {
        return unit_root(m - k, m).conj();
    }
    if k == 0 {
        return Complex64::new(1.0, 0.0);
    }
    if 2 * k == m {
        return Complex64::new(-1.0, 0.0);
    }
    if 4 * k == m {
        return Complex64::new(0.0, 1.0);
    }
    let theta = 2.0 * PI * k as f64 / m as f64;
    Complex64::new(theta.cos(), theta.sin())
}

fn circle_points(center: f64, radius: f64, m: usize) -> Vec<Complex64> {
    (0..m)
        .map(|k| Complex64::new(center, 0.0) + unit_root(k, m) * radius)
        .collect()
}

fn horner(coeffs: &[Complex64], z: Complex64) -> Complex64 {
    coeffs.iter().rev().fold(Complex64::zero(), |acc, &c| acc * z + c)
}

/// Roots of `p(t) = level * zeta` for the `k` values `zeta = e^{2 pi i j/k}`,
/// pooled. Conjugate targets reuse mirrored roots so the result is exactly
/// symmetric.
fn lemniscate_preimages(poly: &IntPolynomial, level: f64, k: usize) -> Result<Vec<Complex64>> {
    let base = poly.to_complex_coeffs();
    let bound = 1.0 + level.powf(1.0 / poly.degree() as f64);
    let target = 1e-8 * bound;
    let solve = |j: usize| -> Result<Vec<(Complex64, f64)>> {
        let mut c = base.clone();
        c[0] -= unit_root(j, k) * level;
        solve_complex(&c, target)
    };
    let mut out = Vec::with_capacity(k * poly.degree());
    for j in 0..k {
        if 2 * j > k {
            out.extend(solve(k - j)?.into_iter().map(|(z, _)| z.conj()));
        } else if j == 0 || 2 * j == k {
            // real target: snap roots whose disk crosses the axis, mirror the rest
            let roots = solve(j)?;
            let mut sym = Vec::with_capacity(roots.len());
            for &(z, r) in &roots {
                if z.im.abs() <= r {
                    sym.push(Complex64::new(z.re, 0.0));
                } else if z.im > 0.0 {
                    sym.push(z);
                    sym.push(z.conj());
                }
            }
            if sym.len() == roots.len() {
                out.extend(sym);
            } else {
                out.extend(roots.into_iter().map(|(z, _)| z));
            }
        } else {
            out.extend(solve(j)?.into_iter().map(|(z, _)| z));
        }
    }
    Ok(out)
}

impl CompactSetSpec {
    pub fn disk(center: f64, radius: f64, grid_size: usize) -> Result<Self> {
        if !(radius > 0.0) || !center.is_finite() || !radius.is_finite() {
            return Err(Error::InvalidArgument("disk needs a finite center and radius > 0".into()));
        }
        Self::build(Shape::Disk { center, radius }, grid_size)
    }

    pub fn circle(radius: f64, grid_size: usize) -> Result<Self> {
        if !(radius > 0.0) || !radius.is_finite() {
            return Err(Error::InvalidArgument("circle needs radius > 0".into()));
        }
        Self::build(Shape::Circle { radius }, grid_size)
    }

    pub fn interval(a: f64, b: f64, grid_size: usize) -> Result<Self> {
        if !(a < b) || !a.is_finite() || !b.is_finite() {
            return Err(Error::InvalidArgument("interval needs a < b".into()));
        }
        Self::build(Shape::Interval { a, b }, grid_size)
    }

    pub fn lemniscate(poly: IntPolynomial, level: f64, grid_size: usize) -> Result<Self> {
        if !poly.is_monic() {
            return Err(Error::NotMonic(poly.leading().to_string()));
        }
        if poly.degree() == 0 {
            return Err(Error::InvalidArgument("lemniscate needs degree at least 1".into()));
        }
        if !(level > 0.0) || !level.is_finite() {
            return Err(Error::InvalidArgument("lemniscate needs level R > 0".into()));
        }
        Self::build(Shape::Lemniscate { poly, level }, grid_size)
    }

    pub fn cloud(points: Vec<Complex64>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::InvalidArgument("cloud needs at least one point".into()));
        }
        if points.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::InvalidArgument("cloud points must be finite".into()));
        }
        let scale = points.iter().map(|z| z.norm()).fold(1.0, f64::max);
        for z in &points {
            if !points.iter().any(|w| (w - z.conj()).norm() <= SYMMETRY_TOL * scale) {
                return Err(Error::InvalidArgument(format!(
                    "cloud is not symmetric under conjugation: {z} has no mirror"
                )));
            }
        }
        let grid_size = points.len();
        Self::build(Shape::Cloud { points }, grid_size)
    }

    fn build(shape: Shape, grid_size: usize) -> Result<Self> {
        if grid_size < 2 && !matches!(shape, Shape::Cloud { .. }) {
            return Err(Error::InvalidArgument("grid size must be at least 2".into()));
        }
        let discretization = match &shape {
            Shape::Disk { center, radius } => circle_points(*center, *radius, grid_size),
            Shape::Circle { radius } => circle_points(0.0, *radius, grid_size),
            Shape::Interval { a, b } => {
                let (mid, half) = ((a + b) / 2.0, (b - a) / 2.0);
                (0..grid_size)
                    .map(|k| {
                        let x = match k {
                            0 => *b,
                            k if k + 1 == grid_size => *a,
                            k => mid + half * (PI * k as f64 / (grid_size - 1) as f64).cos(),
                        };
                        Complex64::new(x, 0.0)
                    })
                    .collect()
            }
            Shape::Lemniscate { poly, level } => {
                let k = grid_size.div_ceil(poly.degree()).max(2);
                lemniscate_preimages(poly, *level, k)?
            }
            Shape::Cloud { points } => points.clone(),
        };
        Ok(Self {
            shape,
            grid_size,
            discretization,
        })
    }

    pub fn shape(&self) -> &Shape {
        &self.shape
    }

    pub fn grid_size(&self) -> usize {
        self.grid_size
    }

    /// Boundary sample (the points themselves for a cloud).
    pub fn discretization(&self) -> &[Complex64] {
        &self.discretization
    }

    /// Membership in the (filled) set.
    pub fn contains(&self, z: Complex64) -> bool {
        match &self.shape {
            Shape::Disk { center, radius } => (z - center).norm() <= *radius,
            Shape::Circle { radius } => z.norm() <= *radius,
            Shape::Interval { a, b } => z.im == 0.0 && *a <= z.re && z.re <= *b,
            Shape::Lemniscate { poly, level } => horner(&poly.to_complex_coeffs(), z).norm() <= *level,
            Shape::Cloud { points } => points.contains(&z),
        }
    }

    /// Whether the closed disk `B(z, r)` may meet the set.
    pub(crate) fn disk_meets(&self, z: Complex64, r: f64) -> bool {
        if r == 0.0 {
            return self.contains(z);
        }
        match &self.shape {
            Shape::Disk { center, radius } => (z - center).norm() <= radius + r,
            Shape::Circle { radius } => z.norm() <= radius + r,
            Shape::Interval { a, b } => {
                let x = z.re.clamp(*a, *b);
                (z - Complex64::new(x, 0.0)).norm() <= r
            }
            Shape::Lemniscate { poly, level } => {
                // |p(w)| >= |p(z)| - sum_{k>=1} |p^(k)(z)/k!| r^k on the disk
                let mut taylor = poly.to_complex_coeffs();
                let n = taylor.len();
                for i in 0..n {
                    for j in (i..n - 1).rev() {
                        let t = taylor[j + 1] * z;
                        taylor[j] += t;
                    }
                }
                let spread: f64 = taylor[1..]
                    .iter()
                    .enumerate()
                    .map(|(k, c)| c.norm() * r.powi(k as i32 + 1))
                    .sum();
                taylor[0].norm() - spread <= *level
            }
            Shape::Cloud { points } => points.iter().any(|w| (w - z).norm() <= r),
        }
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SpecRecord {
    shape: String,
    #[serde(default)]
    params: serde_json::Map<String, serde_json::Value>,
    #[serde(default)]
    grid_size: Option<usize>,
}

fn param_f64(params: &serde_json::Map<String, serde_json::Value>, key: &str) -> Result<f64> {
    params
        .get(key)
        .and_then(serde_json::Value::as_f64)
        .ok_or_else(|| Error::InvalidArgument(format!("missing numeric parameter `{key}`")))
}

fn check_keys(params: &serde_json::Map<String, serde_json::Value>, allowed: &[&str]) -> Result<()> {
    match params.keys().find(|k| !allowed.contains(&k.as_str())) {
        Some(k) => Err(Error::InvalidArgument(format!("unknown parameter `{k}`"))),
        None => Ok(()),
    }
}

impl CompactSetSpec {
    /// Parses `{shape, params, grid_size}`.
    pub fn from_json(value: serde_json::Value) -> Result<Self> {
        let rec: SpecRecord =
            serde_json::from_value(value).map_err(|e| Error::InvalidArgument(e.to_string()))?;
        let grid = rec.grid_size.unwrap_or(DEFAULT_GRID);
        let p = &rec.params;
        match rec.shape.as_str() {
            "disk" => {
                check_keys(p, &["center", "r"])?;
                let center = if p.contains_key("center") { param_f64(p, "center")? } else { 0.0 };
                Self::disk(center, param_f64(p, "r")?, grid)
            }
            "circle" => {
                check_keys(p, &["r"])?;
                Self::circle(param_f64(p, "r")?, grid)
            }
            "interval" => {
                check_keys(p, &["a", "b"])?;
                Self::interval(param_f64(p, "a")?, param_f64(p, "b")?, grid)
            }
            "lemniscate" => {
                check_keys(p, &["p", "R"])?;
                let poly = match p.get("p") {
                    Some(serde_json::Value::String(s)) => s.parse()?,
                    Some(v) => serde_json::from_value(v.clone())
                        .map_err(|e| Error::InvalidArgument(e.to_string()))?,
                    None => return Err(Error::InvalidArgument("missing parameter `p`".into())),
                };
                Self::lemniscate(poly, param_f64(p, "R")?, grid)
            }
            "cloud" => {
                check_keys(p, &["points"])?;
                let pts: Vec<[f64; 2]> = serde_json::from_value(
                    p.get("points")
                        .cloned()
                        .ok_or_else(|| Error::InvalidArgument("missing parameter `points`".into()))?,
                )
                .map_err(|e| Error::InvalidArgument(e.to_string()))?;
                Self::cloud(pts.into_iter().map(|[re, im]| Complex64::new(re, im)).collect())
            }
            other => Err(Error::InvalidArgument(format!("unknown shape `{other}`"))),
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        use serde_json::json;
        let params = match &self.shape {
            Shape::Disk { center, radius } => json!({"center": center, "r": radius}),
            Shape::Circle { radius } => json!({"r": radius}),
            Shape::Interval { a, b } => json!({"a": a, "b": b}),
            Shape::Lemniscate { poly, level } => json!({"p": poly.to_string(), "R": level}),
            Shape::Cloud { points } => {
                json!({"points": points.iter().map(|z| [z.re, z.im]).collect::<Vec<_>>()})
            }
        };
        json!({"shape": self.shape.name(), "params": params, "grid_size": self.grid_size})
    }
}

impl Serialize for CompactSetSpec {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_json().serialize(s)
    }
}

impl<'de> Deserialize<'de> for CompactSetSpec {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v = serde_json::Value::deserialize(d)?;
        CompactSetSpec::from_json(v).map_err(serde::de::Error::custom)
    }
}

fn unsupported(shape: &Shape, op: &'static str) -> Error {
    Error::UnsupportedShape {
        shape: shape.name(),
        op,
    }
}

/// Green function of the complement of `E` with pole at infinity.
pub fn green_value(e: &CompactSetSpec, z: Complex64) -> Result<f64> {
    if let Shape::Cloud { .. } = e.shape {
        return Err(unsupported(&e.shape, "green_value"));
    }
    if e.contains(z) {
        return Ok(0.0);
    }
    let g = match &e.shape {
        Shape::Disk { center, radius } => ((z - center).norm() / radius).ln(),
        Shape::Circle { radius } => (z.norm() / radius).ln(),
        Shape::Interval { a, b } => {
            let w = (z * 2.0 - (a + b)) / (b - a);
            let s = (w * w - 1.0).sqrt();
            (w + s).norm().max((w - s).norm()).ln()
        }
        Shape::Lemniscate { poly, level } => {
            let v = horner(&poly.to_complex_coeffs(), z).norm();
            (v.ln() - level.ln()) / poly.degree() as f64
        }
        Shape::Cloud { .. } => unreachable!(),
    };
    Ok(g.max(0.0))
}

/// Closed-form logarithmic capacity.
pub fn capacity_explicit(e: &CompactSetSpec) -> Result<CapacityEstimate> {
    let value = match &e.shape {
        Shape::Disk { radius, .. } | Shape::Circle { radius } => *radius,
        Shape::Interval { a, b } => (b - a) / 4.0,
        Shape::Lemniscate { poly, level } => level.powf(1.0 / poly.degree() as f64),
        Shape::Cloud { .. } => return Err(unsupported(&e.shape, "capacity_explicit")),
    };
    Ok(CapacityEstimate {
        value,
        method: CapacityMethod::Explicit,
        n_points: 0,
        trend: 0.0,
    })
}

/// Greedy (Leja) points from the discretization: each new point maximizes
/// the product of distances to those already chosen, with the lowest index
/// winning ties. The first point is discretization index 0.
pub fn leja_points(e: &CompactSetSpec, n: usize) -> Result<Vec<Complex64>> {
    let grid = &e.discretization;
    if n < 2 {
        return Err(Error::InvalidArgument("need at least 2 Leja points".into()));
    }
    if n > grid.len() {
        return Err(Error::InvalidArgument(format!(
            "{n} Leja points requested from a discretization of {}",
            grid.len()
        )));
    }
    let mut score = vec![0.0f64; grid.len()];
    let mut chosen = Vec::with_capacity(n);
    let mut next = 0usize;
    for step in 0..n {
        let z = grid[next];
        chosen.push(z);
        if step + 1 == n {
            break;
        }
        let mut best = f64::NEG_INFINITY;
        let mut best_idx = None;
        for (i, (s, c)) in score.iter_mut().zip(grid).enumerate() {
            *s += (c - z).norm().ln();
            if *s > best {
                best = *s;
                best_idx = Some(i);
            }
        }
        next = best_idx.ok_or_else(|| {
            Error::InvalidArgument("degenerate discretization: no distinct point left".into())
        })?;
    }
    Ok(chosen)
}

/// `exp(2/(n(n-1)) sum_{i<j} log|z_i - z_j|)`.
fn transfinite_estimate(points: &[Complex64]) -> f64 {
    let n = points.len();
    let mut s = 0.0;
    for i in 0..n {
        for j in i + 1..n {
            s += (points[i] - points[j]).norm().ln();
        }
    }
    (2.0 * s / (n * (n - 1)) as f64).exp()
}

/// Transfinite-diameter estimate of the capacity from `n` Leja points.
pub fn capacity_leja(e: &CompactSetSpec, n: usize) -> Result<CapacityEstimate> {
    let pts = leja_points(e, n)?;
    let value = transfinite_estimate(&pts);
    if !(value > 0.0) {
        return Err(Error::InvalidArgument("degenerate discretization".into()));
    }
    let half = n / 2;
    let trend = if half >= 2 && half < n {
        value - transfinite_estimate(&pts[..half])
    } else {
        0.0
    };
    Ok(CapacityEstimate {
        value,
        method: CapacityMethod::Leja,
        n_points: n,
        trend,
    })
}

/// Equal-weight discretization of the equilibrium measure at closed-form
/// quantiles. A lemniscate yields `n * deg p` atoms.
pub fn equilibrium_discretized(e: &CompactSetSpec, n: usize) -> Result<AtomicMeasure> {
    if n == 0 {
        return Err(Error::InvalidArgument("need at least one point".into()));
    }
    let (points, bound) = match &e.shape {
        Shape::Circle { radius } => (circle_points(0.0, *radius, n), *radius),
        Shape::Disk { center, radius } => {
            (circle_points(*center, *radius, n), center.abs() + radius)
        }
        Shape::Interval { a, b } => {
            let (mid, half) = ((a + b) / 2.0, (b - a) / 2.0);
            let pts = (0..n)
                .map(|k| {
                    let x = mid + half * (PI * (k as f64 + 0.5) / n as f64).cos();
                    Complex64::new(x.clamp(*a, *b), 0.0)
                })
                .collect();
            (pts, a.abs().max(b.abs()))
        }
        Shape::Lemniscate { poly, level } => {
            let pts = lemniscate_preimages(poly, *level, n)?;
            let bound = pts.iter().map(|z| z.norm()).fold(0.0, f64::max);
            (pts, bound)
        }
        Shape::Cloud { .. } => return Err(unsupported(&e.shape, "equilibrium_discretized")),
    };
    AtomicMeasure::uniform(&points, bound)
}

/// Average Green value over the root multiset. A root whose certified disk
/// meets `E` contributes zero.
pub fn weil_height(e: &CompactSetSpec, r: &RootSet) -> Result<f64> {
    if let Shape::Cloud { .. } = e.shape {
        return Err(unsupported(&e.shape, "weil_height"));
    }
    let mut total = 0.0;
    for entry in r.entries() {
        let z = entry.location();
        if !e.disk_meets(z, entry.radius) {
            total += entry.multiplicity as f64 * green_value(e, z)?;
        }
    }
    Ok(total / r.degree() as f64)
}

#[cfg(test)]
#[path = "potential_tests.rs"]
mod tests;
