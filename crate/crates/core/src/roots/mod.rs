//! Certified root multisets of integer polynomials.
//!
//! Multiplicities come from an exact squarefree decomposition; only the
//! squarefree factors are solved numerically. Each reported location carries
//! a radius such that the closed disk around it contains exactly
//! `multiplicity` roots of the input polynomial.

mod aberth;

use std::cmp::Ordering;

use num_complex::Complex64;
use num_traits::{Signed, ToPrimitive};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::intpoly::IntPolynomial;

use aberth::{DoubleHorner, Evaluator, ExactDyadic, UNIT_ROUNDOFF};

/// Sweep budget per precision level.
pub const MAX_SWEEPS: usize = 200;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RootEntry {
    pub re: f64,
    pub im: f64,
    #[serde(rename = "mult")]
    pub multiplicity: u32,
    pub radius: f64,
}

impl RootEntry {
    pub fn location(&self) -> Complex64 {
        Complex64::new(self.re, self.im)
    }
}

/// Root multiset of a polynomial, sorted by real then imaginary part.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct RootSet {
    entries: Vec<RootEntry>,
}

/// Result of counting roots in an open disk.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DiskCount {
    /// Number of roots (with multiplicity) certainly inside.
    Certain(u32),
    /// Some inclusion disk straddles the boundary.
    Indeterminate,
}

impl RootSet {
    pub fn entries(&self) -> &[RootEntry] {
        &self.entries
    }

    /// Sum of multiplicities.
    pub fn degree(&self) -> usize {
        self.entries.iter().map(|e| e.multiplicity as usize).sum()
    }

    pub fn max_radius(&self) -> f64 {
        self.entries.iter().map(|e| e.radius).fold(0.0, f64::max)
    }

    /// Upper bound on the modulus of every root.
    pub fn max_modulus(&self) -> f64 {
        self.entries
            .iter()
            .map(|e| e.location().norm() + e.radius)
            .fold(0.0, f64::max)
    }

    /// Every location repeated by its multiplicity.
    pub fn expanded(&self) -> Vec<Complex64> {
        self.entries
            .iter()
            .flat_map(|e| std::iter::repeat_n(e.location(), e.multiplicity as usize))
            .collect()
    }

    /// Roots in the open disk `B(center, radius)`.
    pub fn count_in_disk(&self, center: Complex64, radius: f64) -> DiskCount {
        let mut inside = 0;
        for e in &self.entries {
            let d = (e.location() - center).norm();
            if d + e.radius < radius {
                inside += e.multiplicity;
            } else if d - e.radius < radius {
                return DiskCount::Indeterminate;
            }
        }
        DiskCount::Certain(inside)
    }
}

fn sort_entries(entries: &mut [RootEntry]) {
    entries.sort_by(|a, b| match a.re.total_cmp(&b.re) {
        Ordering::Equal => a.im.total_cmp(&b.im),
        o => o,
    });
}

/// Certified simple roots of a squarefree polynomial with real
/// coefficients given by `eval`; `exact` is used when the double-precision
/// pass cannot certify.
fn solve_real_squarefree(
    double: &dyn Evaluator,
    exact: Option<&dyn Evaluator>,
    target_radius: f64,
) -> Result<Vec<(Complex64, f64)>> {
    let mut z = aberth::newton_polygon_start(&double.log_abs_coeffs());
    let mut sweeps = aberth::iterate(double, &mut z, MAX_SWEEPS);
    let mut attempt = certify_symmetric(double, &z, target_radius);
    if attempt.is_err() {
        if let Some(exact) = exact {
            sweeps += aberth::iterate(exact, &mut z, MAX_SWEEPS);
            attempt = certify_symmetric(exact, &z, target_radius);
        }
    }
    attempt.map_err(|radii| Error::NoConvergence {
        sweeps,
        best_radius: radii.iter().copied().fold(0.0, f64::max),
        radii,
    })
}

fn certify_symmetric(
    ev: &dyn Evaluator,
    z: &[Complex64],
    target_radius: f64,
) -> std::result::Result<Vec<(Complex64, f64)>, Vec<f64>> {
    let mut z = z.to_vec();
    let (mut radii, isolated) = aberth::inclusion_radii(ev, &z);
    if !isolated || !aberth::impose_conjugate_symmetry(&mut z, &mut radii) {
        return Err(radii);
    }
    if radii.iter().any(|&r| r > target_radius) {
        return Err(radii);
    }
    Ok(z.into_iter().zip(radii).collect())
}

/// Certified roots of `p` with every inclusion radius at most
/// `target_radius`.
pub fn find_roots(p: &IntPolynomial, target_radius: f64) -> Result<RootSet> {
    if p.degree() == 0 {
        return Err(Error::InvalidArgument(
            "root finding needs degree at least 1".into(),
        ));
    }
    if !(target_radius > 0.0) {
        return Err(Error::InvalidArgument(
            "target radius must be positive".into(),
        ));
    }
    let mut entries = Vec::with_capacity(p.degree());
    for part in p.squarefree_decomposition()? {
        let mult = part.multiplicity;
        let (zeros, rest) = part.factor.strip_zero_roots();
        if zeros > 0 {
            entries.push(RootEntry {
                re: 0.0,
                im: 0.0,
                multiplicity: mult,
                radius: 0.0,
            });
        }
        match rest.degree() {
            0 => {}
            1 => {
                let c = rest.coeffs();
                let (num, den) = (-&c[0], &c[1]);
                let exact = den.abs() == 1.into() && num.bits() <= 53;
                let value = num.to_f64().unwrap_or(f64::NAN) / den.to_f64().unwrap_or(f64::NAN);
                entries.push(RootEntry {
                    re: value,
                    im: 0.0,
                    multiplicity: mult,
                    radius: if exact { 0.0 } else { 4.0 * UNIT_ROUNDOFF * value.abs() },
                });
            }
            _ => {
                let exact_coeffs = rest.coeffs().iter().all(|c| c.bits() <= 53);
                let double = DoubleHorner::new(
                    rest.to_complex_coeffs(),
                    if exact_coeffs { 0.0 } else { UNIT_ROUNDOFF },
                );
                let exact = ExactDyadic::new(rest.coeffs());
                for (z, r) in solve_real_squarefree(&double, Some(&exact), target_radius)? {
                    entries.push(RootEntry {
                        re: z.re,
                        im: z.im,
                        multiplicity: mult,
                        radius: r,
                    });
                }
            }
        }
    }
    let locs: Vec<Complex64> = entries.iter().map(RootEntry::location).collect();
    let radii: Vec<f64> = entries.iter().map(|e| e.radius).collect();
    if !aberth::disjoint(&locs, &radii) {
        return Err(Error::NoConvergence {
            sweeps: 0,
            best_radius: radii.iter().copied().fold(0.0, f64::max),
            radii,
        });
    }
    sort_entries(&mut entries);
    Ok(RootSet { entries })
}

/// Certified simple roots of a squarefree polynomial with complex double
/// coefficients (taken as exact), in ascending degree order.
pub fn solve_complex(coeffs: &[Complex64], target_radius: f64) -> Result<Vec<(Complex64, f64)>> {
    let mut coeffs = coeffs.to_vec();
    while coeffs.last().is_some_and(|c| *c == Complex64::new(0.0, 0.0)) {
        coeffs.pop();
    }
    if coeffs.len() < 2 {
        return Err(Error::InvalidArgument(
            "root finding needs degree at least 1".into(),
        ));
    }
    let ev = DoubleHorner::new(coeffs, 0.0);
    let mut z = aberth::newton_polygon_start(&ev.log_abs_coeffs());
    let sweeps = aberth::iterate(&ev, &mut z, MAX_SWEEPS);
    let (radii, isolated) = aberth::inclusion_radii(&ev, &z);
    if !isolated || radii.iter().any(|&r| r > target_radius) {
        return Err(Error::NoConvergence {
            sweeps,
            best_radius: radii.iter().copied().fold(0.0, f64::max),
            radii,
        });
    }
    let mut out: Vec<(Complex64, f64)> = z.into_iter().zip(radii).collect();
    out.sort_by(|a, b| match a.0.re.total_cmp(&b.0.re) {
        Ordering::Equal => a.0.im.total_cmp(&b.0.im),
        o => o,
    });
    Ok(out)
}

/// Cauchy bound `1 + max |a_k|` (k < n) on the root moduli of a monic
/// polynomial.
pub fn root_bound(p: &IntPolynomial) -> Result<f64> {
    if !p.is_monic() {
        return Err(Error::NotMonic(p.leading().to_string()));
    }
    let n = p.degree();
    let max = p.coeffs()[..n]
        .iter()
        .map(|c| c.abs())
        .max()
        .unwrap_or_default();
    Ok(1.0 + max.to_f64().unwrap_or(f64::INFINITY))
}

#[cfg(test)]
mod tests;
