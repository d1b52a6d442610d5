//! Simultaneous (Aberth-Ehrlich) iteration and inclusion-disk certification.

use num_bigint::{BigInt, Sign};
use num_complex::Complex64;
use num_traits::{ToPrimitive, Zero};

pub(crate) const UNIT_ROUNDOFF: f64 = f64::EPSILON / 2.0;

/// Value of p and p' at a point, plus a bound on the absolute error of the
/// computed p.
#[derive(Clone, Copy, Debug)]
pub(crate) struct Evaluation {
    pub value: Complex64,
    pub derivative: Complex64,
    pub error: f64,
}

pub(crate) trait Evaluator: Sync {
    fn leading_abs(&self) -> f64;
    fn eval(&self, z: Complex64) -> Evaluation;
    /// `p(z) / p'(z)`, or `None` when `z` is a root at working accuracy.
    fn newton(&self, z: Complex64) -> Option<Complex64> {
        let e = self.eval(z);
        (e.value.norm() > e.error).then(|| e.value / e.derivative)
    }
    /// log|a_k| per coefficient, `-inf` for zeros.
    fn log_abs_coeffs(&self) -> Vec<f64>;
}

/// Horner's rule in double precision with a running a-priori error bound.
pub(crate) struct DoubleHorner {
    coeffs: Vec<Complex64>,
    abs: Vec<f64>,
    gamma: f64,
}

impl DoubleHorner {
    /// `extra_rel` is the relative error already present in the
    /// coefficients (0 when they are exact doubles).
    pub fn new(coeffs: Vec<Complex64>, extra_rel: f64) -> Self {
        let n = coeffs.len();
        let abs = coeffs.iter().map(|c| c.norm()).collect();
        // complex Horner: each step costs a complex mul-add, about 4n ulps in
        // total, plus the coefficient rounding
        let gamma = (8.0 * n as f64 + 8.0) * UNIT_ROUNDOFF * 1.01 + extra_rel;
        Self { coeffs, abs, gamma }
    }
}

impl Evaluator for DoubleHorner {
    fn leading_abs(&self) -> f64 {
        *self.abs.last().unwrap()
    }

    fn eval(&self, z: Complex64) -> Evaluation {
        let mut p = Complex64::zero();
        let mut dp = Complex64::zero();
        let mut mag = 0.0;
        let r = z.norm();
        for (c, a) in self.coeffs.iter().zip(&self.abs).rev() {
            dp = dp * z + p;
            p = p * z + c;
            mag = mag * r + a;
        }
        Evaluation {
            value: p,
            derivative: dp,
            error: self.gamma * mag,
        }
    }

    fn log_abs_coeffs(&self) -> Vec<f64> {
        self.abs.iter().map(|a| a.ln()).collect()
    }
}

/// Exact evaluation of an integer polynomial at a double-precision point,
/// rounded once at the end.
pub(crate) struct ExactDyadic {
    coeffs: Vec<BigInt>,
    dcoeffs: Vec<BigInt>,
    lead: f64,
}

impl ExactDyadic {
    pub fn new(coeffs: &[BigInt]) -> Self {
        let dcoeffs = coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, c)| c * BigInt::from(k))
            .collect();
        let lead = coeffs.last().unwrap().to_f64().unwrap_or(f64::INFINITY).abs();
        Self {
            coeffs: coeffs.to_vec(),
            dcoeffs,
            lead,
        }
    }
}

/// `x = mantissa * 2^exponent` exactly.
fn decode(x: f64) -> (BigInt, i64) {
    if x == 0.0 {
        return (BigInt::zero(), 0);
    }
    let bits = x.to_bits();
    let sign = if bits >> 63 == 0 { 1i64 } else { -1 };
    let exp_bits = ((bits >> 52) & 0x7ff) as i64;
    let frac = bits & 0xf_ffff_ffff_ffff;
    let (mant, exp) = if exp_bits == 0 {
        (frac, -1074)
    } else {
        (frac | (1u64 << 52), exp_bits - 1075)
    };
    (BigInt::from(sign) * BigInt::from(mant), exp)
}

/// `x * 2^exp2` rounded to a double.
pub(crate) fn scaled_to_f64(x: &BigInt, exp2: i64) -> f64 {
    if x.is_zero() {
        return 0.0;
    }
    let bits = x.bits() as i64;
    let shift = (bits - 64).max(0);
    let (sign, mag) = (x.sign(), x.magnitude());
    let top = (mag >> shift as u64).to_u64().unwrap() as f64;
    let v = ldexp(top, shift + exp2);
    if sign == Sign::Minus {
        -v
    } else {
        v
    }
}

fn ldexp(mut v: f64, mut e: i64) -> f64 {
    while e > 1000 {
        v *= 2f64.powi(1000);
        e -= 1000;
        if v.is_infinite() {
            return v;
        }
    }
    while e < -1000 {
        v *= 2f64.powi(-1000);
        e += 1000;
        if v == 0.0 {
            return v;
        }
    }
    v * 2f64.powi(e as i32)
}

/// `z = (X + iY) 2^-s` with integers `X`, `Y` and `s >= 0`.
fn dyadic_point(z: Complex64) -> (BigInt, BigInt, i64) {
    let (mr, er) = decode(z.re);
    let (mi, ei) = decode(z.im);
    let s = (-er.min(ei)).max(0);
    let x = if mr.is_zero() { mr } else { mr << ((er + s) as usize) };
    let y = if mi.is_zero() { mi } else { mi << ((ei + s) as usize) };
    (x, y, s)
}

fn horner_dyadic(coeffs: &[BigInt], re: &BigInt, im: &BigInt, s: i64) -> (BigInt, BigInt) {
    let n = coeffs.len() - 1;
    let mut a_re = coeffs[n].clone();
    let mut a_im = BigInt::zero();
    for (k, c) in coeffs.iter().enumerate().rev().skip(1) {
        let nr = &a_re * re - &a_im * im;
        let ni = &a_re * im + &a_im * re;
        a_re = nr + (c << ((s * (n - k) as i64) as usize));
        a_im = ni;
    }
    (a_re, a_im)
}

/// `(re + i im) 2^exp` with absolute error at most `err 2^exp`.
struct Scaled {
    re: BigInt,
    im: BigInt,
    exp: i64,
    err: f64,
}

impl Scaled {
    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    fn top_bits(&self) -> i64 {
        self.re.bits().max(self.im.bits()) as i64
    }

    fn to_complex(&self) -> Complex64 {
        Complex64::new(
            scaled_to_f64(&self.re, self.exp),
            scaled_to_f64(&self.im, self.exp),
        )
    }

    /// Mantissa near `2^60` and the power of two restoring it.
    fn normalized(&self) -> (Complex64, i64) {
        let shift = 60 - self.top_bits();
        let m = Complex64::new(scaled_to_f64(&self.re, shift), scaled_to_f64(&self.im, shift));
        (m, self.exp - shift)
    }
}

/// Horner in fixed point with `frac` fractional bits, truncating after each
/// multiplication. The error bound is in units of `2^-frac`.
fn horner_fixed(coeffs: &[BigInt], x: &BigInt, y: &BigInt, s: i64, frac: i64, modulus: f64) -> Scaled {
    let n = coeffs.len() - 1;
    let (s, f) = (s as usize, frac as usize);
    let mut re = &coeffs[n] << f;
    let mut im = BigInt::zero();
    let mut err = 0.0;
    for c in coeffs[..n].iter().rev() {
        let nr = (&re * x - &im * y) >> s;
        let ni = (&re * y + &im * x) >> s;
        re = nr + (c << f);
        im = ni;
        // each floor shift loses less than one unit per component
        err = err * modulus + 1.5;
    }
    Scaled {
        re,
        im,
        exp: -frac,
        err: err * (1.0 + 1e-10),
    }
}

/// Evaluates at `z = (x + i y) 2^-s` to about 54 correct bits, raising the
/// fixed-point precision until the error bound allows it and falling back
/// to exact arithmetic when that is no more expensive.
fn horner_adaptive(coeffs: &[BigInt], x: &BigInt, y: &BigInt, s: i64, modulus: f64) -> Scaled {
    let n = (coeffs.len() - 1) as i64;
    let exact_bits = s * n;
    let growth = (n as f64 * modulus.max(1.0).log2()).ceil() as i64;
    let mut frac = 64 + growth + (64 - (n as u64).leading_zeros() as i64);
    loop {
        if frac >= exact_bits {
            let (re, im) = horner_dyadic(coeffs, x, y, s);
            return Scaled {
                re,
                im,
                exp: -exact_bits,
                err: 0.0,
            };
        }
        let v = horner_fixed(coeffs, x, y, s, frac, modulus);
        let err_bits = v.err.log2().ceil() as i64;
        if !v.is_zero() && v.top_bits() - 1 - err_bits >= 54 {
            return v;
        }
        let deficit = if v.is_zero() { frac } else { 56 + err_bits - (v.top_bits() - 1) };
        frac += deficit.max(32);
    }
}

impl ExactDyadic {
    fn eval_scaled(&self, z: Complex64) -> (Scaled, Option<Scaled>) {
        let (x, y, s) = dyadic_point(z);
        let modulus = z.norm() * (1.0 + 4.0 * UNIT_ROUNDOFF);
        let p = horner_adaptive(&self.coeffs, &x, &y, s, modulus);
        let dp = (!self.dcoeffs.is_empty()).then(|| horner_adaptive(&self.dcoeffs, &x, &y, s, modulus));
        (p, dp)
    }
}

impl Evaluator for ExactDyadic {
    fn leading_abs(&self) -> f64 {
        self.lead
    }

    fn eval(&self, z: Complex64) -> Evaluation {
        let (p, dp) = self.eval_scaled(z);
        let value = p.to_complex();
        Evaluation {
            value,
            derivative: dp.map_or(Complex64::zero(), |d| d.to_complex()),
            error: ldexp(p.err, p.exp) + 4.0 * UNIT_ROUNDOFF * value.norm(),
        }
    }

    fn newton(&self, z: Complex64) -> Option<Complex64> {
        let (p, dp) = self.eval_scaled(z);
        if p.is_zero() {
            return None;
        }
        let Some(dp) = dp.filter(|d| !d.is_zero()) else {
            return Some(Complex64::new(f64::INFINITY, 0.0));
        };
        // ratio of normalized mantissas so that neither part overflows
        let (num, e1) = p.normalized();
        let (den, e2) = dp.normalized();
        Some(num / den * ldexp(1.0, e1 - e2))
    }

    fn log_abs_coeffs(&self) -> Vec<f64> {
        self.coeffs
            .iter()
            .map(|c| crate::intpoly::log2_abs(c) * std::f64::consts::LN_2)
            .collect()
    }
}

/// Starting points on circles read off the upper convex hull of
/// `(k, log|a_k|)`, one circle per hull edge.
pub(crate) fn newton_polygon_start(log_abs: &[f64]) -> Vec<Complex64> {
    let pts: Vec<(usize, f64)> = log_abs
        .iter()
        .enumerate()
        .filter(|(_, l)| l.is_finite())
        .map(|(k, &l)| (k, l))
        .collect();
    let mut hull: Vec<(usize, f64)> = Vec::new();
    for p in pts {
        while hull.len() >= 2 {
            let (a, b) = (hull[hull.len() - 2], hull[hull.len() - 1]);
            // drop b when it lies on or below the segment a -> p
            let cross = (b.0 as f64 - a.0 as f64) * (p.1 - a.1) - (b.1 - a.1) * (p.0 as f64 - a.0 as f64);
            if cross >= 0.0 {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(p);
    }
    let n = log_abs.len() - 1;
    let mut out = Vec::with_capacity(n);
    let low = hull[0].0;
    // zero roots from leading zero coefficients are stripped by callers;
    // keep them near the origin otherwise
    for j in 0..low {
        out.push(Complex64::from_polar(1e-3, 0.5 + j as f64));
    }
    for (e, w) in hull.windows(2).enumerate() {
        let (k0, l0) = w[0];
        let (k1, l1) = w[1];
        let count = k1 - k0;
        let r = ((l0 - l1) / count as f64).exp();
        let r = if r.is_finite() && r > 0.0 { r } else { 1.0 };
        for j in 0..count {
            let angle = std::f64::consts::TAU * j as f64 / count as f64 + 0.4 + 1.3 * e as f64;
            out.push(Complex64::from_polar(r, angle));
        }
    }
    out
}

/// Runs Gauss-Seidel Aberth sweeps until every iterate is either stable to
/// working precision or indistinguishable from a root at the evaluator's
/// accuracy. Returns the number of sweeps used.
pub(crate) fn iterate(ev: &dyn Evaluator, z: &mut [Complex64], max_sweeps: usize) -> usize {
    let n = z.len();
    let mut done = vec![false; n];
    for sweep in 1..=max_sweeps {
        let mut all_done = true;
        for i in 0..n {
            if done[i] {
                continue;
            }
            let Some(newton) = ev.newton(z[i]) else {
                done[i] = true;
                continue;
            };
            let mut sum = Complex64::zero();
            for (j, zj) in z.iter().enumerate() {
                if j != i {
                    sum += (z[i] - zj).inv();
                }
            }
            let step = newton / (Complex64::new(1.0, 0.0) - newton * sum);
            if !step.re.is_finite() || !step.im.is_finite() {
                // perturb off a degenerate configuration
                z[i] += Complex64::new(1e-7, 1e-7) * (1.0 + z[i].norm());
                all_done = false;
                continue;
            }
            z[i] -= step;
            if step.norm() <= 2.0 * UNIT_ROUNDOFF * z[i].norm() {
                done[i] = true;
            } else {
                all_done = false;
            }
        }
        if all_done {
            return sweep;
        }
    }
    max_sweeps
}

/// Inclusion radii: the disk of radius `n |p(z_i)| / (|a_n| prod |z_i - z_j|)`
/// around `z_i`. Pairwise disjoint disks each hold exactly one root.
/// Returns `None` when the disks are not pairwise disjoint.
pub(crate) fn inclusion_radii(ev: &dyn Evaluator, z: &[Complex64]) -> (Vec<f64>, bool) {
    let n = z.len();
    let lead = ev.leading_abs();
    let mut radii = Vec::with_capacity(n);
    for i in 0..n {
        let e = ev.eval(z[i]);
        let residual = e.value.norm() + e.error;
        if residual == 0.0 {
            radii.push(0.0);
            continue;
        }
        let mut log_prod = 0.0;
        let mut coincident = false;
        for (j, zj) in z.iter().enumerate() {
            if j != i {
                let d = (z[i] - zj).norm();
                if d == 0.0 {
                    coincident = true;
                }
                log_prod += d.ln();
            }
        }
        if coincident {
            radii.push(f64::INFINITY);
            continue;
        }
        let log_r = (n as f64).ln() + residual.ln() - lead.ln() - log_prod;
        radii.push(log_r.exp() * (1.0 + 8.0 * n as f64 * UNIT_ROUNDOFF));
    }
    let isolated = disjoint(z, &radii);
    (radii, isolated)
}

pub(crate) fn disjoint(z: &[Complex64], radii: &[f64]) -> bool {
    for i in 0..z.len() {
        if !radii[i].is_finite() {
            return false;
        }
        for j in i + 1..z.len() {
            if (z[i] - z[j]).norm() <= radii[i] + radii[j] {
                return false;
            }
        }
    }
    true
}

/// For a real polynomial with isolated inclusion disks: snaps disks that
/// must contain a real root onto the axis and replaces every lower
/// half-plane disk by the mirror image of an upper one. Returns false when
/// the disk layout does not allow this.
pub(crate) fn impose_conjugate_symmetry(z: &mut [Complex64], radii: &mut [f64]) -> bool {
    let n = z.len();
    let mut real = vec![false; n];
    for i in 0..n {
        if z[i].im.abs() <= radii[i] {
            let center = Complex64::new(z[i].re, 0.0);
            let r = radii[i] + z[i].im.abs();
            let clear = (0..n).all(|j| j == i || (center - z[j]).norm() > r + radii[j]);
            if !clear {
                return false;
            }
            z[i] = center;
            radii[i] = r;
            real[i] = true;
        }
    }
    let upper: Vec<usize> = (0..n).filter(|&i| !real[i] && z[i].im > 0.0).collect();
    let lower: Vec<usize> = (0..n).filter(|&i| !real[i] && z[i].im < 0.0).collect();
    if upper.len() != lower.len() {
        return false;
    }
    let mut taken = vec![false; lower.len()];
    for &u in &upper {
        let target = z[u].conj();
        let best = lower
            .iter()
            .enumerate()
            .filter(|(k, _)| !taken[*k])
            .min_by(|a, b| {
                (z[*a.1] - target)
                    .norm()
                    .total_cmp(&(z[*b.1] - target).norm())
            })
            .map(|(k, &l)| (k, l));
        let Some((k, l)) = best else {
            return false;
        };
        taken[k] = true;
        z[l] = target;
        radii[l] = radii[u];
    }
    true
}
