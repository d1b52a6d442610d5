//! Finitely supported probability measures on C and their functionals.
//!
//! Weights are exact rationals that always sum to exactly one; only the
//! support points are floating point.

use std::fmt;
use std::fmt::Write as _;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::roots::RootSet;

/// Relative distance below which two support points are merged.
pub const MERGE_TOLERANCE: f64 = 1e-9;

/// Slack allowed when checking `|z| <= radius_bound` for points that sit on
/// the bounding circle up to rounding.
const RADIUS_SLACK: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq)]
pub struct Atom {
    pub location: Complex64,
    pub weight: BigRational,
}

/// A probability measure with finitely many atoms, all inside the closed
/// disk of radius `radius_bound`.
#[derive(Clone, Debug, PartialEq)]
pub struct AtomicMeasure {
    atoms: Vec<Atom>,
    radius_bound: f64,
}

/// A real number or one of the two infinities.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ExtendedReal {
    Finite(f64),
    PlusInfinity,
    MinusInfinity,
}

impl ExtendedReal {
    pub fn finite(self) -> Option<f64> {
        match self {
            ExtendedReal::Finite(v) => Some(v),
            _ => None,
        }
    }

    pub fn neg(self) -> Self {
        match self {
            ExtendedReal::Finite(v) => ExtendedReal::Finite(-v),
            ExtendedReal::PlusInfinity => ExtendedReal::MinusInfinity,
            ExtendedReal::MinusInfinity => ExtendedReal::PlusInfinity,
        }
    }
}

impl fmt::Display for ExtendedReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtendedReal::Finite(v) => write!(f, "{v}"),
            ExtendedReal::PlusInfinity => f.write_str("+inf"),
            ExtendedReal::MinusInfinity => f.write_str("-inf"),
        }
    }
}

impl Serialize for ExtendedReal {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            ExtendedReal::Finite(v) => s.serialize_f64(*v),
            ExtendedReal::PlusInfinity => s.serialize_str("+inf"),
            ExtendedReal::MinusInfinity => s.serialize_str("-inf"),
        }
    }
}

impl<'de> Deserialize<'de> for ExtendedReal {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Num(f64),
            Text(String),
        }
        match Repr::deserialize(d)? {
            Repr::Num(v) => Ok(ExtendedReal::Finite(v)),
            Repr::Text(t) if t == "+inf" || t == "inf" => Ok(ExtendedReal::PlusInfinity),
            Repr::Text(t) if t == "-inf" => Ok(ExtendedReal::MinusInfinity),
            Repr::Text(t) => Err(serde::de::Error::custom(format!("not an extended real: {t}"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Functional {
    LogDet,
    LogDisc,
    EnergyTotal,
    EnergyOffdiag,
    FreeEntropy,
    BallMass,
    Moment,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FunctionalValue {
    pub value: ExtendedReal,
    pub functional: Functional,
}

impl FunctionalValue {
    fn finite(value: f64, functional: Functional) -> Self {
        Self {
            value: ExtendedReal::Finite(value),
            functional,
        }
    }

    /// The value when finite, panicking otherwise.
    pub fn expect_finite(&self) -> f64 {
        self.value
            .finite()
            .unwrap_or_else(|| panic!("{:?} is not finite", self.functional))
    }
}

/// Logarithmic energy variants for atomic measures.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EnergyMode {
    /// The full double integral, which diverges on the diagonal.
    Total,
    /// Only pairs of distinct points, i.e. `-D(mu)`.
    Offdiag,
}

fn to_f64(w: &BigRational) -> f64 {
    w.to_f64().unwrap_or(f64::NAN)
}

struct Dsu(Vec<usize>);

impl Dsu {
    fn find(&mut self, mut i: usize) -> usize {
        while self.0[i] != i {
            self.0[i] = self.0[self.0[i]];
            i = self.0[i];
        }
        i
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
            self.0[hi] = lo;
        }
    }
}

fn cmp_location(a: &Complex64, b: &Complex64) -> std::cmp::Ordering {
    a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im))
}

/// Merges atoms closer than `tol`; each cluster keeps the location of its
/// heaviest member (first one on ties) and the summed weight.
fn merge(atoms: Vec<Atom>, tol: f64) -> Vec<Atom> {
    let n = atoms.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| cmp_location(&atoms[a].location, &atoms[b].location));
    let mut dsu = Dsu((0..n).collect());
    for (pos, &i) in order.iter().enumerate() {
        for &j in &order[pos + 1..] {
            if atoms[j].location.re - atoms[i].location.re > tol {
                break;
            }
            if (atoms[j].location - atoms[i].location).norm() <= tol {
                dsu.union(i, j);
            }
        }
    }
    let mut clusters: Vec<Option<(usize, BigRational)>> = vec![None; n];
    for i in 0..n {
        let root = dsu.find(i);
        match &mut clusters[root] {
            None => clusters[root] = Some((i, atoms[i].weight.clone())),
            Some((rep, total)) => {
                *total += &atoms[i].weight;
                if atoms[i].weight > atoms[*rep].weight {
                    *rep = i;
                }
            }
        }
    }
    let mut out: Vec<Atom> = clusters
        .into_iter()
        .flatten()
        .map(|(rep, weight)| Atom {
            location: atoms[rep].location,
            weight,
        })
        .collect();
    out.sort_by(|a, b| cmp_location(&a.location, &b.location));
    out
}

impl AtomicMeasure {
    /// Validates and normalizes a list of atoms: weights must be positive
    /// and sum to exactly one, points must be finite and inside the radius
    /// bound. Points closer than `MERGE_TOLERANCE * radius_bound` are merged.
    pub fn new(atoms: Vec<Atom>, radius_bound: f64) -> Result<Self> {
        if atoms.is_empty() {
            return Err(Error::InvalidMeasure("no atoms".into()));
        }
        if !(radius_bound >= 0.0) || !radius_bound.is_finite() {
            return Err(Error::InvalidMeasure(format!("bad radius bound {radius_bound}")));
        }
        let mut total = BigRational::zero();
        for a in &atoms {
            if !a.weight.is_positive() {
                return Err(Error::InvalidMeasure(format!("non-positive weight {}", a.weight)));
            }
            if !a.location.re.is_finite() || !a.location.im.is_finite() {
                return Err(Error::InvalidMeasure("non-finite location".into()));
            }
            let modulus = a.location.norm();
            if modulus > radius_bound + RADIUS_SLACK * radius_bound.max(1.0) {
                return Err(Error::RadiusBound {
                    modulus,
                    bound: radius_bound,
                });
            }
            total += &a.weight;
        }
        if !total.is_one() {
            return Err(Error::InvalidMeasure(format!("total mass {total} is not 1")));
        }
        Ok(Self {
            atoms: merge(atoms, MERGE_TOLERANCE * radius_bound),
            radius_bound,
        })
    }

    /// Equal weights on the given points (repeats add up).
    pub fn uniform(points: &[Complex64], radius_bound: f64) -> Result<Self> {
        let w = BigRational::new(BigInt::one(), BigInt::from(points.len().max(1)));
        Self::new(
            points
                .iter()
                .map(|&location| Atom {
                    location,
                    weight: w.clone(),
                })
                .collect(),
            radius_bound,
        )
    }

    /// Unit mass at `z`.
    pub fn dirac(z: Complex64) -> Self {
        Self {
            atoms: vec![Atom {
                location: z,
                weight: BigRational::one(),
            }],
            radius_bound: z.norm(),
        }
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn radius_bound(&self) -> f64 {
        self.radius_bound
    }

    /// Same atoms, larger bounding radius.
    pub fn with_radius_bound(mut self, radius_bound: f64) -> Result<Self> {
        if radius_bound < self.radius_bound {
            return Err(Error::InvalidMeasure("radius bound may only grow".into()));
        }
        self.radius_bound = radius_bound;
        Ok(self)
    }

    pub fn locations(&self) -> Vec<Complex64> {
        self.atoms.iter().map(|a| a.location).collect()
    }

    pub fn float_weights(&self) -> Vec<f64> {
        self.atoms.iter().map(|a| to_f64(&a.weight)).collect()
    }

    /// `re,im,weight` rows with a header line.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("re,im,weight\n");
        for a in &self.atoms {
            let _ = writeln!(out, "{},{},{}", a.location.re, a.location.im, to_f64(&a.weight));
        }
        out
    }
}

#[derive(Serialize, Deserialize)]
struct AtomRecord {
    re: f64,
    im: f64,
    num: String,
    den: String,
}

#[derive(Serialize, Deserialize)]
struct MeasureRecord {
    atoms: Vec<AtomRecord>,
    radius_bound: f64,
}

impl Serialize for AtomicMeasure {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        MeasureRecord {
            atoms: self
                .atoms
                .iter()
                .map(|a| AtomRecord {
                    re: a.location.re,
                    im: a.location.im,
                    num: a.weight.numer().to_string(),
                    den: a.weight.denom().to_string(),
                })
                .collect(),
            radius_bound: self.radius_bound,
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for AtomicMeasure {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let rec = MeasureRecord::deserialize(d)?;
        let atoms = rec
            .atoms
            .into_iter()
            .map(|a| {
                let num: BigInt = a.num.parse().map_err(D::Error::custom)?;
                let den: BigInt = a.den.parse().map_err(D::Error::custom)?;
                if den.is_zero() {
                    return Err(D::Error::custom("zero denominator"));
                }
                Ok(Atom {
                    location: Complex64::new(a.re, a.im),
                    weight: BigRational::new(num, den),
                })
            })
            .collect::<std::result::Result<Vec<_>, _>>()?;
        AtomicMeasure::new(atoms, rec.radius_bound).map_err(D::Error::custom)
    }
}

/// The measure equidistributed on a root multiset: weight
/// `multiplicity / degree` at each root.
pub fn delta_of(roots: &RootSet, radius_bound: f64) -> Result<AtomicMeasure> {
    let degree = BigInt::from(roots.degree());
    let atoms = roots
        .entries()
        .iter()
        .map(|e| Atom {
            location: e.location(),
            weight: BigRational::new(BigInt::from(e.multiplicity), degree.clone()),
        })
        .collect();
    AtomicMeasure::new(atoms, radius_bound)
}

/// `integral of log|z|` over the atoms away from the origin.
pub fn log_det(mu: &AtomicMeasure) -> FunctionalValue {
    let value = mu
        .atoms
        .iter()
        .filter(|a| a.location != Complex64::zero())
        .map(|a| to_f64(&a.weight) * a.location.norm().ln())
        .sum();
    FunctionalValue::finite(value, Functional::LogDet)
}

/// `integral of log|z - w|` over pairs of distinct points.
pub fn log_disc(mu: &AtomicMeasure, nu: &AtomicMeasure) -> FunctionalValue {
    let wn = nu.float_weights();
    let mut total = 0.0;
    for a in &mu.atoms {
        let wa = to_f64(&a.weight);
        let mut row = 0.0;
        for (b, &wb) in nu.atoms.iter().zip(&wn) {
            if a.location != b.location {
                row += wb * (a.location - b.location).norm().ln();
            }
        }
        total += wa * row;
    }
    FunctionalValue::finite(total, Functional::LogDisc)
}

/// `D(mu) = log_disc(mu, mu)`.
pub fn self_log_disc(mu: &AtomicMeasure) -> FunctionalValue {
    log_disc(mu, mu)
}

/// Push-forward of `mu x nu` under `(z, w) -> z - w`.
pub fn convolve(mu: &AtomicMeasure, nu: &AtomicMeasure) -> AtomicMeasure {
    let mut atoms = Vec::with_capacity(mu.len() * nu.len());
    for a in &mu.atoms {
        for b in &nu.atoms {
            atoms.push(Atom {
                location: a.location - b.location,
                weight: &a.weight * &b.weight,
            });
        }
    }
    AtomicMeasure::new(atoms, mu.radius_bound + nu.radius_bound)
        .expect("difference measure of valid measures is valid")
}

/// Logarithmic energy. Atoms make the total energy infinite; the
/// off-diagonal variant is `-D(mu)`.
pub fn energy(mu: &AtomicMeasure, mode: EnergyMode) -> FunctionalValue {
    match mode {
        EnergyMode::Total => FunctionalValue {
            value: ExtendedReal::PlusInfinity,
            functional: Functional::EnergyTotal,
        },
        EnergyMode::Offdiag => FunctionalValue::finite(
            -self_log_disc(mu).expect_finite(),
            Functional::EnergyOffdiag,
        ),
    }
}

/// `3/4 + log(2 pi)/2 - I` for an energy value `I`.
pub fn free_entropy(energy: ExtendedReal) -> FunctionalValue {
    let c = 0.75 + (2.0 * std::f64::consts::PI).ln() / 2.0;
    let value = match energy {
        ExtendedReal::Finite(i) => ExtendedReal::Finite(c - i),
        other => other.neg(),
    };
    FunctionalValue {
        value,
        functional: Functional::FreeEntropy,
    }
}

/// Free entropy with the off-diagonal energy of an atomic measure.
pub fn free_entropy_of(mu: &AtomicMeasure) -> FunctionalValue {
    free_entropy(energy(mu, EnergyMode::Offdiag).value)
}

/// `m_k = sum w z^k` for `k = 1..=kmax`.
pub fn moments(mu: &AtomicMeasure, kmax: usize) -> Result<Vec<Complex64>> {
    if kmax == 0 {
        return Err(Error::InvalidArgument("kmax must be at least 1".into()));
    }
    let mut out = vec![Complex64::zero(); kmax];
    for a in &mu.atoms {
        let w = to_f64(&a.weight);
        let mut power = Complex64::one();
        for m in out.iter_mut() {
            power *= a.location;
            *m += power * w;
        }
    }
    Ok(out)
}

/// True when conjugation maps the atoms onto themselves with equal weights,
/// matching locations within `tol`.
pub fn is_symmetric(mu: &AtomicMeasure, tol: f64) -> bool {
    mu.atoms.iter().all(|a| {
        let target = a.location.conj();
        mu.atoms
            .iter()
            .any(|b| b.weight == a.weight && (b.location - target).norm() <= tol)
    })
}

/// Exact mass of the open disk `B(center, eps)`.
pub fn ball_mass(mu: &AtomicMeasure, center: Complex64, eps: f64) -> Result<BigRational> {
    if !(eps > 0.0) {
        return Err(Error::InvalidArgument("ball radius must be positive".into()));
    }
    Ok(mu
        .atoms
        .iter()
        .filter(|a| (a.location - center).norm() < eps)
        .fold(BigRational::zero(), |acc, a| acc + &a.weight))
}

#[cfg(test)]
#[path = "measure_tests.rs"]
mod tests;
