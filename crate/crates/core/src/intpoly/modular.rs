//! Word-sized prime field arithmetic used for exact resultants (multi-modular
//! determinant plus Chinese remaindering) and for fast squarefree screening.

use std::sync::{Mutex, OnceLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

#[inline]
pub(crate) fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

#[inline]
fn sub_mod(a: u64, b: u64, p: u64) -> u64 {
    if a >= b {
        a - b
    } else {
        a + p - b
    }
}

fn pow_mod(mut base: u64, mut exp: u64, p: u64) -> u64 {
    let mut acc = 1u64;
    base %= p;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, p);
        }
        base = mul_mod(base, base, p);
        exp >>= 1;
    }
    acc
}

pub(crate) fn inv_mod(a: u64, p: u64) -> u64 {
    pow_mod(a, p - 2, p)
}

/// Deterministic Miller-Rabin, exact for all 64-bit inputs.
fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for &b in &BASES {
        if n.is_multiple_of(b) {
            return n == b;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    'witness: for &a in &BASES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

static PRIMES: OnceLock<Mutex<Vec<u64>>> = OnceLock::new();

/// The `i`-th prime below 2^62, counting downwards.
pub(crate) fn prime(i: usize) -> u64 {
    let cell = PRIMES.get_or_init(|| Mutex::new(Vec::new()));
    let mut list = cell.lock().expect("prime table poisoned");
    while list.len() <= i {
        let mut candidate = match list.last() {
            Some(&p) => p - 2,
            None => (1u64 << 62) - 1,
        };
        while !is_prime(candidate) {
            candidate -= 2;
        }
        list.push(candidate);
    }
    list[i]
}

pub(crate) fn reduce(x: &BigInt, p: u64) -> u64 {
    let r = x.mod_floor(&BigInt::from(p));
    let (_, digits) = r.to_u64_digits();
    digits.first().copied().unwrap_or(0)
}

/// Determinant of a square matrix over Z/p by Gaussian elimination.
pub(crate) fn det_mod(mut m: Vec<Vec<u64>>, p: u64) -> u64 {
    let n = m.len();
    let mut det = 1u64;
    for col in 0..n {
        let Some(pivot) = (col..n).find(|&r| m[r][col] != 0) else {
            return 0;
        };
        if pivot != col {
            m.swap(pivot, col);
            det = sub_mod(0, det, p);
        }
        let pv = m[col][col];
        det = mul_mod(det, pv, p);
        let inv = inv_mod(pv, p);
        for r in col + 1..n {
            if m[r][col] == 0 {
                continue;
            }
            let factor = mul_mod(m[r][col], inv, p);
            for c in col..n {
                let t = mul_mod(factor, m[col][c], p);
                m[r][c] = sub_mod(m[r][c], t, p);
            }
        }
    }
    det
}

/// log2 of |x|, accurate to a few ulps even far outside the f64 range.
pub(crate) fn log2_abs(x: &BigInt) -> f64 {
    if x.is_zero() {
        return f64::NEG_INFINITY;
    }
    let bits = x.bits();
    if bits <= 1000 {
        return x.abs().to_f64().map(f64::log2).unwrap_or(f64::NAN);
    }
    let shift = bits - 60;
    let top: BigInt = x.abs() >> shift;
    top.to_f64().map(f64::log2).unwrap_or(f64::NAN) + shift as f64
}

/// Exact determinant of an integer matrix: residues modulo enough primes to
/// exceed twice the Hadamard bound, recombined by Garner's algorithm.
pub(crate) fn det_multimodular(m: &[Vec<BigInt>]) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut log2_bound = 0.0f64;
    for row in m {
        let mut sq = 0.0f64;
        let mut max_log = f64::NEG_INFINITY;
        for x in row {
            max_log = max_log.max(log2_abs(x));
        }
        if max_log == f64::NEG_INFINITY {
            return BigInt::zero();
        }
        for x in row {
            let l = log2_abs(x);
            if l.is_finite() {
                sq += (2.0 * (l - max_log)).exp2();
            }
        }
        log2_bound += max_log + 0.5 * sq.log2();
    }
    let needed_bits = log2_bound + 4.0;

    let mut modulus = BigInt::one();
    let mut value = BigInt::zero();
    let mut have_bits = 0.0f64;
    let mut i = 0;
    while have_bits < needed_bits {
        let p = prime(i);
        i += 1;
        let reduced: Vec<Vec<u64>> = m
            .iter()
            .map(|row| row.iter().map(|x| reduce(x, p)).collect())
            .collect();
        let r = det_mod(reduced, p);
        // Garner step: value += modulus * ((r - value) * modulus^{-1} mod p)
        let v_mod = reduce(&value, p);
        let m_mod = reduce(&modulus, p);
        let t = mul_mod(sub_mod(r, v_mod, p), inv_mod(m_mod, p), p);
        value += &modulus * BigInt::from(t);
        modulus *= BigInt::from(p);
        have_bits += (p as f64).log2();
    }
    let half = &modulus >> 1;
    if value > half {
        value -= modulus;
    }
    value
}

/// Coefficients reduced mod p, ascending, trailing zeros trimmed.
fn poly_mod(coeffs: &[BigInt], p: u64) -> Vec<u64> {
    let mut v: Vec<u64> = coeffs.iter().map(|c| reduce(c, p)).collect();
    while v.last() == Some(&0) {
        v.pop();
    }
    v
}

fn gcd_mod(mut a: Vec<u64>, mut b: Vec<u64>, p: u64) -> Vec<u64> {
    while !b.is_empty() {
        // a <- a mod b
        let inv = inv_mod(*b.last().unwrap(), p);
        while a.len() >= b.len() {
            let shift = a.len() - b.len();
            let factor = mul_mod(*a.last().unwrap(), inv, p);
            for (k, &bk) in b.iter().enumerate() {
                let t = mul_mod(factor, bk, p);
                a[shift + k] = sub_mod(a[shift + k], t, p);
            }
            while a.last() == Some(&0) {
                a.pop();
            }
        }
        std::mem::swap(&mut a, &mut b);
    }
    a
}

/// True when `f` is certainly squarefree over Q: its reduction mod a large
/// prime keeps its degree and is squarefree. False means inconclusive.
pub(crate) fn certainly_squarefree(coeffs: &[BigInt]) -> bool {
    let n = coeffs.len() - 1;
    if n <= 1 {
        return true;
    }
    let p = prime(0);
    let f = poly_mod(coeffs, p);
    if f.len() != coeffs.len() {
        return false;
    }
    let df: Vec<u64> = (1..=n)
        .map(|k| mul_mod(f[k], k as u64 % p, p))
        .collect();
    let mut df = df;
    while df.last() == Some(&0) {
        df.pop();
    }
    if df.len() != n {
        return false;
    }
    gcd_mod(f, df, p).len() == 1
}
