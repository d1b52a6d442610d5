//! Exact univariate polynomials over Z and their algebraic invariants.
//!
//! Everything in this module is exact: coefficients are arbitrary precision
//! integers and no floating point value ever feeds back into a result.

mod modular;
mod parse;

use std::fmt;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_traits::{One, Pow, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

pub(crate) use modular::log2_abs;

/// A nonzero polynomial with integer coefficients, stored in ascending
/// degree order with a nonzero leading coefficient.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IntPolynomial {
    coeffs: Vec<BigInt>,
}

/// Which exact invariant an [`AlgebraicInvariant`] carries.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InvariantKind {
    Determinant,
    Discriminant,
}

/// An exact integer invariant of a monic polynomial.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlgebraicInvariant {
    #[serde(with = "bigint_string")]
    pub value: BigInt,
    pub kind: InvariantKind,
}

impl AlgebraicInvariant {
    /// Natural logarithm of |value|; exact zero maps to `-inf`.
    pub fn ln_abs(&self) -> f64 {
        log2_abs(&self.value) * std::f64::consts::LN_2
    }
}

/// One factor of a squarefree decomposition: `factor` is squarefree,
/// primitive with positive leading coefficient, and divides the input
/// exactly `multiplicity` times.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SquarefreeFactor {
    pub factor: IntPolynomial,
    pub multiplicity: u32,
}

// ---------------------------------------------------------------------------
// dense helpers on ascending coefficient slices; the empty vector is zero

fn trim(v: &mut Vec<BigInt>) {
    while v.last().is_some_and(Zero::is_zero) {
        v.pop();
    }
}

fn add_raw(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let mut out: Vec<BigInt> = (0..a.len().max(b.len()))
        .map(|i| match (a.get(i), b.get(i)) {
            (Some(x), Some(y)) => x + y,
            (Some(x), None) | (None, Some(x)) => x.clone(),
            (None, None) => unreachable!(),
        })
        .collect();
    trim(&mut out);
    out
}

fn neg_raw(a: &[BigInt]) -> Vec<BigInt> {
    a.iter().map(|x| -x).collect()
}

fn mul_raw(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    trim(&mut out);
    out
}

fn derive_raw(a: &[BigInt]) -> Vec<BigInt> {
    let mut out: Vec<BigInt> = a
        .iter()
        .enumerate()
        .skip(1)
        .map(|(k, c)| c * BigInt::from(k))
        .collect();
    trim(&mut out);
    out
}

fn content_raw(a: &[BigInt]) -> BigInt {
    a.iter().fold(BigInt::zero(), |g, c| g.gcd(c))
}

/// Primitive part with positive leading coefficient.
fn primitive_raw(a: &[BigInt]) -> Vec<BigInt> {
    if a.is_empty() {
        return Vec::new();
    }
    let mut g = content_raw(a);
    if a.last().unwrap().is_negative() {
        g = -g;
    }
    if g.is_one() {
        return a.to_vec();
    }
    a.iter().map(|c| c / &g).collect()
}

/// A remainder of `a` by `b` up to a nonzero integer factor.
fn pseudo_rem(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let mut r = a.to_vec();
    let lb = b.last().unwrap();
    while r.len() >= b.len() {
        let lr = r.last().unwrap().clone();
        let shift = r.len() - b.len();
        for c in r.iter_mut() {
            *c *= lb;
        }
        for (k, bk) in b.iter().enumerate() {
            r[shift + k] -= &lr * bk;
        }
        r.pop();
        trim(&mut r);
        if r.is_empty() {
            break;
        }
        let g = content_raw(&r);
        if !g.is_one() {
            for c in r.iter_mut() {
                *c /= &g;
            }
        }
    }
    r
}

/// Primitive gcd over Z[t] with positive leading coefficient.
fn gcd_raw(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    if a.is_empty() {
        return primitive_raw(b);
    }
    if b.is_empty() {
        return primitive_raw(a);
    }
    let (mut a, mut b) = (primitive_raw(a), primitive_raw(b));
    if a.len() < b.len() {
        std::mem::swap(&mut a, &mut b);
    }
    while !b.is_empty() {
        if b.len() == 1 {
            return vec![BigInt::one()];
        }
        let r = pseudo_rem(&a, &b);
        a = b;
        b = primitive_raw(&r);
    }
    a
}

/// Quotient `a / b` when `b` divides `a` in Z[t].
fn div_exact_raw(a: &[BigInt], b: &[BigInt]) -> Option<Vec<BigInt>> {
    if a.is_empty() {
        return Some(Vec::new());
    }
    if b.len() > a.len() {
        return None;
    }
    let lb = b.last().unwrap();
    let mut r = a.to_vec();
    let mut q = vec![BigInt::zero(); a.len() - b.len() + 1];
    for i in (0..q.len()).rev() {
        let c = &r[i + b.len() - 1];
        let (qi, rem) = c.div_rem(lb);
        if !rem.is_zero() {
            return None;
        }
        if !qi.is_zero() {
            for (k, bk) in b.iter().enumerate() {
                r[i + k] -= &qi * bk;
            }
        }
        q[i] = qi;
    }
    if r.iter().all(Zero::is_zero) {
        trim(&mut q);
        Some(q)
    } else {
        None
    }
}

fn compose_raw(outer: &[BigInt], inner: &[BigInt]) -> Vec<BigInt> {
    let mut acc: Vec<BigInt> = Vec::new();
    for c in outer.iter().rev() {
        acc = mul_raw(&acc, inner);
        acc = add_raw(&acc, std::slice::from_ref(c));
    }
    acc
}

/// Sylvester matrix of `a` (degree m) and `b` (degree n), both of degree >= 1.
fn sylvester(a: &[BigInt], b: &[BigInt]) -> Vec<Vec<BigInt>> {
    let m = a.len() - 1;
    let n = b.len() - 1;
    let size = m + n;
    let mut rows = Vec::with_capacity(size);
    for i in 0..n {
        let mut row = vec![BigInt::zero(); size];
        for (k, c) in a.iter().rev().enumerate() {
            row[i + k] = c.clone();
        }
        rows.push(row);
    }
    for i in 0..m {
        let mut row = vec![BigInt::zero(); size];
        for (k, c) in b.iter().rev().enumerate() {
            row[i + k] = c.clone();
        }
        rows.push(row);
    }
    rows
}

fn resultant_raw(a: &[BigInt], b: &[BigInt]) -> BigInt {
    let m = a.len() - 1;
    let n = b.len() - 1;
    if m == 0 {
        return Pow::pow(&a[0], n);
    }
    if n == 0 {
        return Pow::pow(&b[0], m);
    }
    modular::det_multimodular(&sylvester(a, b))
}

/// Resultant of two nonzero integer polynomials, computed exactly as the
/// determinant of their Sylvester matrix.
pub fn resultant(a: &IntPolynomial, b: &IntPolynomial) -> BigInt {
    resultant_raw(&a.coeffs, &b.coeffs)
}

/// Fraction-free (Bareiss) evaluation of the same Sylvester determinant; an
/// independent second route to [`resultant`].
pub fn resultant_bareiss(a: &IntPolynomial, b: &IntPolynomial) -> BigInt {
    let (m, n) = (a.degree(), b.degree());
    if m == 0 {
        return Pow::pow(&a.coeffs[0], n);
    }
    if n == 0 {
        return Pow::pow(&b.coeffs[0], m);
    }
    let mut mat = sylvester(&a.coeffs, &b.coeffs);
    let size = mat.len();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..size - 1 {
        if mat[k][k].is_zero() {
            let Some(r) = (k + 1..size).find(|&r| !mat[r][k].is_zero()) else {
                return BigInt::zero();
            };
            mat.swap(k, r);
            sign = -sign;
        }
        for i in k + 1..size {
            for j in k + 1..size {
                let v = &mat[i][j] * &mat[k][k] - &mat[i][k] * &mat[k][j];
                mat[i][j] = v / &prev;
            }
        }
        prev = mat[k][k].clone();
    }
    sign * &mat[size - 1][size - 1]
}

impl IntPolynomial {
    /// Builds a polynomial from ascending coefficients. Trailing zeros are
    /// dropped; an empty or all-zero sequence is rejected.
    pub fn new(mut coeffs: Vec<BigInt>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::EmptyCoefficients);
        }
        trim(&mut coeffs);
        if coeffs.is_empty() {
            return Err(Error::ZeroPolynomial);
        }
        Ok(Self { coeffs })
    }

    pub fn from_i64s(coeffs: &[i64]) -> Result<Self> {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    fn from_raw(coeffs: Vec<BigInt>) -> Result<Self> {
        if coeffs.is_empty() {
            Err(Error::ZeroPolynomial)
        } else {
            Ok(Self { coeffs })
        }
    }

    /// `t^k`.
    pub fn monomial(k: usize) -> Self {
        let mut coeffs = vec![BigInt::zero(); k + 1];
        coeffs[k] = BigInt::one();
        Self { coeffs }
    }

    /// `t - c`.
    pub fn linear(c: impl Into<BigInt>) -> Self {
        Self {
            coeffs: vec![-c.into(), BigInt::one()],
        }
    }

    pub fn one() -> Self {
        Self::monomial(0)
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn leading(&self) -> &BigInt {
        self.coeffs.last().unwrap()
    }

    pub fn is_monic(&self) -> bool {
        self.leading().is_one()
    }

    fn require_monic(&self) -> Result<()> {
        if self.is_monic() {
            Ok(())
        } else {
            Err(Error::NotMonic(self.leading().to_string()))
        }
    }

    pub fn eval(&self, x: &BigInt) -> BigInt {
        self.coeffs
            .iter()
            .rev()
            .fold(BigInt::zero(), |acc, c| acc * x + c)
    }

    /// Coefficients rounded to the nearest doubles.
    pub fn to_f64_coeffs(&self) -> Vec<f64> {
        self.coeffs
            .iter()
            .map(|c| c.to_f64().unwrap_or(f64::NAN))
            .collect()
    }

    pub fn to_complex_coeffs(&self) -> Vec<Complex64> {
        self.to_f64_coeffs()
            .into_iter()
            .map(|c| Complex64::new(c, 0.0))
            .collect()
    }

    /// The derivative, or `None` for constants.
    pub fn derivative(&self) -> Option<Self> {
        Self::from_raw(derive_raw(&self.coeffs)).ok()
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        Self::from_raw(add_raw(&self.coeffs, &other.coeffs))
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        Self::from_raw(add_raw(&self.coeffs, &neg_raw(&other.coeffs)))
    }

    pub fn neg(&self) -> Self {
        Self {
            coeffs: neg_raw(&self.coeffs),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        Self {
            coeffs: mul_raw(&self.coeffs, &other.coeffs),
        }
    }

    /// `self^k` for `k >= 1`.
    pub fn pow(&self, k: u32) -> Result<Self> {
        if k == 0 {
            return Err(Error::InvalidArgument("power must be at least 1".into()));
        }
        let mut base = self.clone();
        let mut acc: Option<Self> = None;
        let mut e = k;
        loop {
            if e & 1 == 1 {
                acc = Some(match acc {
                    None => base.clone(),
                    Some(a) => a.mul(&base),
                });
            }
            e >>= 1;
            if e == 0 {
                break;
            }
            base = base.mul(&base);
        }
        Ok(acc.unwrap())
    }

    /// `self(inner(t))`.
    pub fn compose(&self, inner: &Self) -> Self {
        Self {
            coeffs: compose_raw(&self.coeffs, &inner.coeffs),
        }
    }

    /// Multiplies by a nonzero integer.
    pub fn scale(&self, c: &BigInt) -> Result<Self> {
        Self::from_raw(if c.is_zero() {
            Vec::new()
        } else {
            self.coeffs.iter().map(|x| x * c).collect()
        })
    }

    pub fn content(&self) -> BigInt {
        content_raw(&self.coeffs)
    }

    /// Content-free associate with positive leading coefficient.
    pub fn primitive_part(&self) -> Self {
        Self {
            coeffs: primitive_raw(&self.coeffs),
        }
    }

    /// Largest k with t^k dividing self.
    pub fn zero_root_multiplicity(&self) -> usize {
        self.coeffs.iter().take_while(|c| c.is_zero()).count()
    }

    /// Splits `self = t^k * rest` with `rest(0) != 0`.
    pub fn strip_zero_roots(&self) -> (usize, Self) {
        let k = self.zero_root_multiplicity();
        (
            k,
            Self {
                coeffs: self.coeffs[k..].to_vec(),
            },
        )
    }

    /// Primitive gcd with positive leading coefficient.
    pub fn gcd(&self, other: &Self) -> Self {
        Self {
            coeffs: gcd_raw(&self.coeffs, &other.coeffs),
        }
    }

    /// Exact quotient in Z[t], if `divisor` divides `self` there.
    pub fn div_exact(&self, divisor: &Self) -> Option<Self> {
        div_exact_raw(&self.coeffs, &divisor.coeffs).and_then(|q| Self::from_raw(q).ok())
    }

    pub fn is_divisible_by(&self, divisor: &Self) -> bool {
        div_exact_raw(&self.coeffs, &divisor.coeffs).is_some()
    }

    fn require_positive_degree(&self) -> Result<()> {
        if self.degree() == 0 {
            Err(Error::InvalidArgument(
                "operation needs a polynomial of degree at least 1".into(),
            ))
        } else {
            Ok(())
        }
    }

    /// Product of the distinct irreducible factors, each once:
    /// `p / gcd(p, p')`, made primitive with positive leading coefficient.
    pub fn squarefree_part(&self) -> Result<Self> {
        self.require_positive_degree()?;
        let p = primitive_raw(&self.coeffs);
        if modular::certainly_squarefree(&p) {
            return Ok(Self { coeffs: p });
        }
        let g = gcd_raw(&p, &derive_raw(&p));
        let q = div_exact_raw(&p, &g).expect("gcd divides its argument");
        Ok(Self {
            coeffs: primitive_raw(&q),
        })
    }

    /// Groups the irreducible factors by multiplicity (gcd chain).
    /// Constant factors are dropped; factors are listed by increasing
    /// multiplicity.
    pub fn squarefree_decomposition(&self) -> Result<Vec<SquarefreeFactor>> {
        self.require_positive_degree()?;
        let p0 = primitive_raw(&self.coeffs);
        if modular::certainly_squarefree(&p0) {
            return Ok(vec![SquarefreeFactor {
                factor: Self { coeffs: p0 },
                multiplicity: 1,
            }]);
        }
        // chain[i] = gcd(chain[i-1], chain[i-1]') until constant
        let mut chain = vec![p0];
        while chain.last().unwrap().len() > 1 {
            let last = chain.last().unwrap();
            let next = gcd_raw(last, &derive_raw(last));
            chain.push(next);
        }
        // q[i] = product of factors of multiplicity > i
        let q: Vec<Vec<BigInt>> = chain
            .windows(2)
            .map(|w| div_exact_raw(&w[0], &w[1]).expect("chain divides"))
            .collect();
        let mut out = Vec::new();
        for i in 0..q.len() {
            let f = match q.get(i + 1) {
                Some(next) => div_exact_raw(&q[i], next).expect("chain divides"),
                None => q[i].clone(),
            };
            let f = primitive_raw(&f);
            if f.len() > 1 {
                out.push(SquarefreeFactor {
                    factor: Self { coeffs: f },
                    multiplicity: (i + 1) as u32,
                });
            }
        }
        Ok(out)
    }

    /// Product of the nonzero roots (with multiplicity) of a monic
    /// polynomial; the empty product is 1.
    pub fn determinant(&self) -> Result<AlgebraicInvariant> {
        self.require_monic()?;
        let (_, rest) = self.strip_zero_roots();
        let mut value = rest.coeffs[0].clone();
        if rest.degree() % 2 == 1 {
            value = -value;
        }
        Ok(AlgebraicInvariant {
            value,
            kind: InvariantKind::Determinant,
        })
    }

    /// Product of `alpha_i - alpha_j` over ordered pairs of distinct roots of
    /// a monic polynomial, i.e. `Res(q, q')` for its squarefree part `q`.
    pub fn discriminant(&self) -> Result<AlgebraicInvariant> {
        self.require_monic()?;
        let value = if self.degree() < 2 {
            BigInt::one()
        } else {
            let q = self.squarefree_part()?;
            if q.degree() < 2 {
                BigInt::one()
            } else {
                let dq = q.derivative().expect("degree >= 2");
                resultant(&q, &dq)
            }
        };
        Ok(AlgebraicInvariant {
            value,
            kind: InvariantKind::Discriminant,
        })
    }

    /// The monic polynomial whose roots are all differences `alpha - beta`
    /// with `self(alpha) = 0` and `other(beta) = 0`, with multiplicity.
    ///
    /// Computed as `Res_y(self(x + y), other(y))`, sampled at integer `x`
    /// and recovered by exact Newton interpolation.
    pub fn composed_difference(&self, other: &Self) -> Result<Self> {
        self.require_monic()?;
        other.require_monic()?;
        let n = self.degree() * other.degree();
        let flip = n % 2 == 1;
        let values: Vec<BigInt> = (0..=n)
            .map(|c| {
                let shifted = compose_raw(&self.coeffs, &[BigInt::from(c), BigInt::one()]);
                let r = resultant_raw(&shifted, &other.coeffs);
                if flip {
                    -r
                } else {
                    r
                }
            })
            .collect();
        let coeffs = interpolate_integer_points(values);
        let out = Self::from_raw(coeffs)?;
        debug_assert!(out.is_monic() && out.degree() == n);
        Ok(out)
    }
}

/// The unique polynomial of degree <= N taking `values[c]` at `x = c`,
/// `c = 0..=N`, assuming its coefficients are integers.
fn interpolate_integer_points(values: Vec<BigInt>) -> Vec<BigInt> {
    let n = values.len() - 1;
    // forward differences: diffs[j] = Delta^j v(0)
    let mut table = values;
    let mut diffs = Vec::with_capacity(n + 1);
    for _ in 0..=n {
        diffs.push(table[0].clone());
        table = table.windows(2).map(|w| &w[1] - &w[0]).collect();
    }
    let mut factorial = BigInt::one();
    let newton: Vec<BigInt> = diffs
        .into_iter()
        .enumerate()
        .map(|(j, d)| {
            if j > 0 {
                factorial *= BigInt::from(j);
            }
            debug_assert!((&d % &factorial).is_zero());
            d / &factorial
        })
        .collect();
    // Horner in the falling-factorial basis
    let mut acc: Vec<BigInt> = vec![newton[n].clone()];
    for j in (0..n).rev() {
        acc = mul_raw(&acc, &[BigInt::from(-(j as i64)), BigInt::one()]);
        acc = add_raw(&acc, std::slice::from_ref(&newton[j]));
    }
    trim(&mut acc);
    acc
}

impl fmt::Display for IntPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let negative = c.is_negative();
            let mag = c.abs();
            if negative {
                f.write_str("-")?;
            } else if !first {
                f.write_str("+")?;
            }
            first = false;
            match k {
                0 => write!(f, "{mag}")?,
                _ => {
                    if !mag.is_one() {
                        write!(f, "{mag}")?;
                    }
                    f.write_str("t")?;
                    if k > 1 {
                        write!(f, "^{k}")?;
                    }
                }
            }
        }
        Ok(())
    }
}

impl Serialize for IntPolynomial {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let strings: Vec<String> = self.coeffs.iter().map(ToString::to_string).collect();
        strings.serialize(s)
    }
}

#[derive(Deserialize)]
#[serde(untagged)]
enum CoeffRepr {
    Text(String),
    Int(i64),
}

#[derive(Deserialize)]
#[serde(untagged)]
enum PolyRepr {
    Text(String),
    Coeffs(Vec<CoeffRepr>),
}

/// Accepts a coefficient array (ascending, strings or integers) or a
/// polynomial string such as `"t^2-2"`.
impl<'de> Deserialize<'de> for IntPolynomial {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = match PolyRepr::deserialize(d)? {
            PolyRepr::Text(s) => return s.parse().map_err(serde::de::Error::custom),
            PolyRepr::Coeffs(c) => c,
        };
        let coeffs = raw
            .into_iter()
            .map(|c| match c {
                CoeffRepr::Int(i) => Ok(BigInt::from(i)),
                CoeffRepr::Text(s) => s
                    .trim()
                    .parse::<BigInt>()
                    .map_err(|e| serde::de::Error::custom(format!("bad coefficient {s:?}: {e}"))),
            })
            .collect::<std::result::Result<Vec<_>, _>>()?;
        IntPolynomial::new(coeffs).map_err(serde::de::Error::custom)
    }
}

pub(crate) mod bigint_string {
    use num_bigint::BigInt;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &BigInt, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&v.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigInt, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests;
