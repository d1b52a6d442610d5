//! Exact 1-Wasserstein distance between atomic measures.
//!
//! The transportation problem is solved by the primal simplex method on the
//! bipartite graph of atoms. Masses are integers over the common denominator
//! of all weights, so marginals are met exactly; only costs are floating
//! point. Entering cells come from a block search, switching to Bland's rule
//! while pivots stay degenerate.

use std::collections::VecDeque;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::measure::AtomicMeasure;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PlanEntry {
    pub source: usize,
    pub target: usize,
    #[serde(with = "rational_string")]
    pub mass: BigRational,
}

/// A coupling of two atomic measures, indexed by their atom positions.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TransportPlan {
    pub entries: Vec<PlanEntry>,
    pub cost: f64,
}

mod rational_string {
    use num_rational::BigRational;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(r: &BigRational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&r.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigRational, D::Error> {
        let text = String::deserialize(d)?;
        text.parse().map_err(serde::de::Error::custom)
    }
}

impl TransportPlan {
    /// Mass leaving each source atom.
    pub fn row_sums(&self, rows: usize) -> Vec<BigRational> {
        let mut out = vec![BigRational::zero(); rows];
        for e in &self.entries {
            out[e.source] += &e.mass;
        }
        out
    }

    /// Mass arriving at each target atom.
    pub fn column_sums(&self, cols: usize) -> Vec<BigRational> {
        let mut out = vec![BigRational::zero(); cols];
        for e in &self.entries {
            out[e.target] += &e.mass;
        }
        out
    }
}

fn common_denominator(mu: &AtomicMeasure, nu: &AtomicMeasure) -> BigInt {
    mu.atoms()
        .iter()
        .chain(nu.atoms())
        .fold(BigInt::one(), |l, a| l.lcm(a.weight.denom()))
}

fn scaled(w: &BigRational, l: &BigInt) -> BigInt {
    w.numer() * (l / w.denom())
}

struct Simplex<'a> {
    m: usize,
    n: usize,
    cost: &'a [f64],
    /// Basic cells as flat indices `i * n + j`, with their flows.
    basis: Vec<usize>,
    flow: Vec<BigInt>,
    is_basic: Vec<bool>,
}

impl Simplex<'_> {
    /// Least-cost initial basis; exactly `m + n - 1` cells, degenerate zeros
    /// included, forming a spanning tree.
    fn initial(&mut self, mut supply: Vec<BigInt>, mut demand: Vec<BigInt>) {
        let (m, n) = (self.m, self.n);
        let mut order: Vec<usize> = (0..m * n).collect();
        order.sort_by(|&a, &b| self.cost[a].total_cmp(&self.cost[b]).then(a.cmp(&b)));
        let mut row_live = vec![true; m];
        let mut col_live = vec![true; n];
        let mut rows_left = m;
        for cell in order {
            let (i, j) = (cell / n, cell % n);
            if !row_live[i] || !col_live[j] {
                continue;
            }
            let x = supply[i].clone().min(demand[j].clone());
            supply[i] -= &x;
            demand[j] -= &x;
            self.basis.push(cell);
            self.flow.push(x);
            self.is_basic[cell] = true;
            if supply[i].is_zero() && rows_left > 1 {
                row_live[i] = false;
                rows_left -= 1;
            } else {
                col_live[j] = false;
            }
            if self.basis.len() == m + n - 1 {
                break;
            }
        }
    }

    /// Tree adjacency: node `i` for row `i`, node `m + j` for column `j`;
    /// each edge carries its basis position.
    fn adjacency(&self) -> Vec<Vec<(usize, usize)>> {
        let mut adj = vec![Vec::new(); self.m + self.n];
        for (pos, &cell) in self.basis.iter().enumerate() {
            let (i, j) = (cell / self.n, cell % self.n);
            adj[i].push((self.m + j, pos));
            adj[self.m + j].push((i, pos));
        }
        adj
    }

    fn potentials(&self, adj: &[Vec<(usize, usize)>]) -> (Vec<f64>, Vec<f64>) {
        let mut pot = vec![f64::NAN; self.m + self.n];
        pot[0] = 0.0;
        let mut queue = VecDeque::from([0usize]);
        while let Some(v) = queue.pop_front() {
            for &(w, pos) in &adj[v] {
                if pot[w].is_nan() {
                    pot[w] = self.cost[self.basis[pos]] - pot[v];
                    queue.push_back(w);
                }
            }
        }
        let v = pot.split_off(self.m);
        (pot, v)
    }

    /// Basis positions on the tree path from row `i` to column `j`, in order
    /// starting at the column end.
    fn path(&self, adj: &[Vec<(usize, usize)>], i: usize, j: usize) -> Vec<usize> {
        let total = self.m + self.n;
        let mut parent: Vec<Option<(usize, usize)>> = vec![None; total];
        let mut seen = vec![false; total];
        seen[i] = true;
        let mut queue = VecDeque::from([i]);
        let target = self.m + j;
        while let Some(v) = queue.pop_front() {
            if v == target {
                break;
            }
            for &(w, pos) in &adj[v] {
                if !seen[w] {
                    seen[w] = true;
                    parent[w] = Some((v, pos));
                    queue.push_back(w);
                }
            }
        }
        let mut out = Vec::new();
        let mut v = target;
        while let Some((p, pos)) = parent[v] {
            out.push(pos);
            v = p;
        }
        out
    }

    /// Most negative reduced cost in the first block, scanning cyclically
    /// from `cursor`, that contains any candidate.
    fn block_search(&self, u: &[f64], v: &[f64], tol: f64, cursor: &mut usize) -> Option<usize> {
        let (n, cells) = (self.n, self.m * self.n);
        let block = ((cells as f64).sqrt() as usize).max(64).min(cells);
        let mut best: Option<(usize, f64)> = None;
        for step in 0..cells {
            let cell = (*cursor + step) % cells;
            if !self.is_basic[cell] {
                let r = self.cost[cell] - u[cell / n] - v[cell % n];
                if r < -tol && best.is_none_or(|(_, b)| r < b) {
                    best = Some((cell, r));
                }
            }
            if (step + 1) % block == 0 && best.is_some() {
                *cursor = (cell + 1) % cells;
                break;
            }
        }
        best.map(|(cell, _)| cell)
    }

    fn solve(&mut self) {
        let (m, n) = (self.m, self.n);
        let scale = self.cost.iter().copied().fold(1.0, f64::max);
        let tol = 1e-12 * scale;
        let mut adj = self.adjacency();
        let mut cursor = 0;
        let mut degenerate = 0;
        loop {
            let (u, v) = self.potentials(&adj);
            // Bland's rule during long degenerate runs rules out cycling
            let entering = if degenerate > m + n {
                (0..m * n).find(|&cell| !self.is_basic[cell] && self.cost[cell] - u[cell / n] - v[cell % n] < -tol)
            } else {
                self.block_search(&u, &v, tol, &mut cursor)
            };
            let Some(cell) = entering else { return };
            let (i, j) = (cell / n, cell % n);
            // cycle: entering cell gets +, path cells alternate starting with -
            let path = self.path(&adj, i, j);
            let minus: Vec<usize> = path.iter().copied().step_by(2).collect();
            let theta = minus.iter().map(|&p| &self.flow[p]).min().cloned().unwrap_or_default();
            let leaving = minus
                .iter()
                .copied()
                .filter(|&p| self.flow[p] == theta)
                .min_by_key(|&p| self.basis[p])
                .expect("cycle has a decreasing cell");
            degenerate = if theta.is_zero() { degenerate + 1 } else { 0 };
            for (k, &p) in path.iter().enumerate() {
                if k % 2 == 0 {
                    self.flow[p] -= &theta;
                } else {
                    self.flow[p] += &theta;
                }
            }
            let old = self.basis[leaving];
            let (oi, oj) = (old / n, m + old % n);
            adj[oi].retain(|&(_, pos)| pos != leaving);
            adj[oj].retain(|&(_, pos)| pos != leaving);
            adj[i].push((m + j, leaving));
            adj[m + j].push((i, leaving));
            self.is_basic[old] = false;
            self.is_basic[cell] = true;
            self.basis[leaving] = cell;
            self.flow[leaving] = theta;
        }
    }
}

/// Optimal transport cost and plan under Euclidean ground cost.
pub fn w1_distance(mu: &AtomicMeasure, nu: &AtomicMeasure) -> (f64, TransportPlan) {
    let (xs, ys) = (mu.locations(), nu.locations());
    let (m, n) = (xs.len(), ys.len());
    let l = common_denominator(mu, nu);
    let supply: Vec<BigInt> = mu.atoms().iter().map(|a| scaled(&a.weight, &l)).collect();
    let demand: Vec<BigInt> = nu.atoms().iter().map(|a| scaled(&a.weight, &l)).collect();
    let cost: Vec<f64> = xs
        .iter()
        .flat_map(|x| ys.iter().map(move |y| (x - y).norm()))
        .collect();
    let mut simplex = Simplex {
        m,
        n,
        cost: &cost,
        basis: Vec::with_capacity(m + n - 1),
        flow: Vec::with_capacity(m + n - 1),
        is_basic: vec![false; m * n],
    };
    simplex.initial(supply, demand);
    simplex.solve();

    let mut cells: Vec<(usize, BigInt)> = simplex
        .basis
        .iter()
        .copied()
        .zip(simplex.flow)
        .filter(|(_, f)| !f.is_zero())
        .collect();
    cells.sort_by_key(|(c, _)| *c);
    let entries: Vec<PlanEntry> = cells
        .into_iter()
        .map(|(cell, f)| PlanEntry {
            source: cell / n,
            target: cell % n,
            mass: BigRational::new(f, l.clone()),
        })
        .collect();
    let total = entries
        .iter()
        .map(|e| e.mass.to_f64().unwrap_or(0.0) * cost[e.source * n + e.target])
        .sum();
    (total, TransportPlan { entries, cost: total })
}

/// Distinct support points of `mu` followed by those of `nu` not already
/// present; witnesses are given as values on this list.
pub fn joint_support(mu: &AtomicMeasure, nu: &AtomicMeasure) -> Vec<Complex64> {
    let mut out = mu.locations();
    for z in nu.locations() {
        if !out.contains(&z) {
            out.push(z);
        }
    }
    out
}

/// Evaluates `f` on the joint support.
pub fn witness_from_fn(
    mu: &AtomicMeasure,
    nu: &AtomicMeasure,
    f: impl Fn(Complex64) -> f64,
) -> Vec<f64> {
    joint_support(mu, nu).into_iter().map(f).collect()
}

/// Largest `|int f dmu - int f dnu|` over the witnesses, each checked to be
/// 1-Lipschitz on the joint support.
pub fn kr_dual_bound(mu: &AtomicMeasure, nu: &AtomicMeasure, witnesses: &[Vec<f64>]) -> Result<f64> {
    let support = joint_support(mu, nu);
    let index = |z: Complex64| support.iter().position(|&s| s == z).expect("in support");
    let mu_idx: Vec<usize> = mu.locations().into_iter().map(index).collect();
    let nu_idx: Vec<usize> = nu.locations().into_iter().map(index).collect();
    let (wm, wn) = (mu.float_weights(), nu.float_weights());
    let mut best = 0.0f64;
    for (w, f) in witnesses.iter().enumerate() {
        if f.len() != support.len() {
            return Err(Error::InvalidArgument(format!(
                "witness {w} has {} values for {} support points",
                f.len(),
                support.len()
            )));
        }
        for a in 0..support.len() {
            for b in a + 1..support.len() {
                let dist = (support[a] - support[b]).norm();
                if (f[a] - f[b]).abs() > dist * (1.0 + 1e-12) + 1e-15 {
                    return Err(Error::NotLipschitz {
                        witness: w,
                        first: a,
                        second: b,
                    });
                }
            }
        }
        let int_mu: f64 = mu_idx.iter().zip(&wm).map(|(&k, x)| x * f[k]).sum();
        let int_nu: f64 = nu_idx.iter().zip(&wn).map(|(&k, x)| x * f[k]).sum();
        best = best.max((int_mu - int_nu).abs());
    }
    Ok(best)
}

#[cfg(test)]
#[path = "transport_tests.rs"]
mod tests;
