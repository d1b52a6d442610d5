use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;

use super::*;

fn p(c: &[i64]) -> IntPolynomial {
    IntPolynomial::from_i64s(c).unwrap()
}

fn big(v: i64) -> BigInt {
    BigInt::from(v)
}

/// Durand-Kerner in plain f64, used only as a numeric oracle here.
fn numeric_roots(poly: &IntPolynomial) -> Vec<Complex64> {
    let c = poly.to_complex_coeffs();
    let n = poly.degree();
    let lead = c[n];
    let eval = |z: Complex64| c.iter().rev().fold(Complex64::zero(), |acc, &a| acc * z + a) / lead;
    let mut z: Vec<Complex64> = (0..n)
        .map(|k| Complex64::from_polar(1.3, 0.4 + 2.0 * std::f64::consts::PI * k as f64 / n as f64))
        .collect();
    for _ in 0..2000 {
        for i in 0..n {
            let mut den = Complex64::one();
            for j in 0..n {
                if i != j {
                    den *= z[i] - z[j];
                }
            }
            let step = eval(z[i]) / den;
            z[i] -= step;
        }
    }
    z
}

/// Coefficients of the composed difference from exact power sums and
/// Newton's identities; independent of any resultant computation.
fn composed_difference_by_power_sums(a: &IntPolynomial, b: &IntPolynomial) -> IntPolynomial {
    fn power_sums(q: &IntPolynomial, kmax: usize) -> Vec<BigInt> {
        let n = q.degree();
        let c = q.coeffs();
        let coef = |j: isize| -> BigInt {
            if j < 0 {
                BigInt::zero()
            } else {
                c[j as usize].clone()
            }
        };
        let mut s = vec![BigInt::from(n)];
        for k in 1..=kmax {
            let mut acc = coef(n as isize - k as isize) * BigInt::from(k);
            for i in 1..k {
                acc += coef(n as isize - i as isize) * &s[k - i];
            }
            s.push(-acc);
        }
        s
    }
    let n = a.degree() * b.degree();
    let sa = power_sums(a, n);
    let sb = power_sums(b, n);
    let binom = |k: usize, l: usize| -> BigInt {
        (0..l).fold(BigInt::one(), |acc, i| acc * BigInt::from(k - i) / BigInt::from(i + 1))
    };
    let mut s = vec![BigInt::from(n)];
    for k in 1..=n {
        let mut acc = BigInt::zero();
        for l in 0..=k {
            let term = binom(k, l) * &sa[l] * &sb[k - l];
            if (k - l) % 2 == 1 {
                acc -= term;
            } else {
                acc += term;
            }
        }
        s.push(acc);
    }
    let mut e = vec![BigInt::one()];
    for k in 1..=n {
        let mut acc = BigInt::zero();
        for i in 1..=k {
            let term = &e[k - i] * &s[i];
            if i % 2 == 1 {
                acc += term;
            } else {
                acc -= term;
            }
        }
        assert!((&acc % BigInt::from(k)).is_zero());
        e.push(acc / BigInt::from(k));
    }
    let mut coeffs = vec![BigInt::zero(); n + 1];
    for k in 0..=n {
        coeffs[n - k] = if k % 2 == 1 { -e[k].clone() } else { e[k].clone() };
    }
    IntPolynomial::new(coeffs).unwrap()
}

#[test]
fn make_poly_examples() {
    let q = p(&[-2, 0, 1]);
    assert_eq!(q.degree(), 2);
    assert!(q.is_monic());
    let ramsay = p(&[2, 512, 0, 0, 0, 0, 1]);
    assert_eq!(ramsay.to_string(), "t^6+512t+2");
    assert!(ramsay.is_monic());
    assert!(p(&[0, 0, 1]).is_monic());
    assert!(!p(&[1, 2]).is_monic());
    assert_eq!(IntPolynomial::new(vec![]), Err(Error::EmptyCoefficients));
    assert_eq!(IntPolynomial::from_i64s(&[0, 0, 0]), Err(Error::ZeroPolynomial));
    assert_eq!(p(&[3, 1, 0, 0]).degree(), 1);
}

#[test]
fn arithmetic_examples() {
    assert_eq!(p(&[-1, 1]).mul(&p(&[1, 1])), p(&[-1, 0, 1]));
    assert_eq!(p(&[-2, 0, 1]).pow(2).unwrap(), p(&[4, 0, -4, 0, 1]));
    assert_eq!(p(&[0, 0, 1]).compose(&p(&[1, 1])), p(&[1, 2, 1]));
    let q = p(&[1, 2, 3]);
    assert_eq!(q.checked_add(&q.neg()), Err(Error::ZeroPolynomial));
    assert!(q.pow(0).is_err());
    assert_eq!(q.checked_sub(&p(&[0, 0, 3])).unwrap(), p(&[1, 2]));
    assert_eq!(q.mul(&p(&[1, 1])).degree(), q.degree() + 1);
}

#[test]
fn squarefree_examples() {
    assert_eq!(p(&[4, 0, -4, 0, 1]).squarefree_part().unwrap(), p(&[-2, 0, 1]));
    assert_eq!(p(&[-2, 0, 1]).squarefree_part().unwrap(), p(&[-2, 0, 1]));
    assert_eq!(p(&[0, 0, 0, 1]).squarefree_part().unwrap(), p(&[0, 1]));
    assert!(p(&[5]).squarefree_part().is_err());

    // gcd oracle: the square of the output divides the input
    let input = p(&[4, 0, -4, 0, 1]);
    let part = input.squarefree_part().unwrap();
    assert!(input.is_divisible_by(&part.mul(&part)));
    assert_eq!(input.gcd(&input.derivative().unwrap()), p(&[-2, 0, 1]));
}

#[test]
fn squarefree_decomposition_groups_multiplicities() {
    // t^2 (t^2 - 8)
    let d = p(&[0, 0, -8, 0, 1]).squarefree_decomposition().unwrap();
    assert_eq!(d.len(), 2);
    assert_eq!((d[0].factor.clone(), d[0].multiplicity), (p(&[-8, 0, 1]), 1));
    assert_eq!((d[1].factor.clone(), d[1].multiplicity), (p(&[0, 1]), 2));

    // (t-1)^3 (t+2)
    let f = p(&[-1, 1]).pow(3).unwrap().mul(&p(&[2, 1]));
    let d = f.squarefree_decomposition().unwrap();
    let got: Vec<(IntPolynomial, u32)> = d.into_iter().map(|s| (s.factor, s.multiplicity)).collect();
    assert_eq!(got, vec![(p(&[2, 1]), 1), (p(&[-1, 1]), 3)]);
}

#[test]
fn determinant_examples() {
    assert_eq!(p(&[-2, 0, 1]).determinant().unwrap().value, big(-2));
    assert_eq!(p(&[0, -2, 0, 1]).determinant().unwrap().value, big(-2));
    assert_eq!(p(&[0, 0, 0, 1]).determinant().unwrap().value, big(1));
    assert!(matches!(p(&[1, 2]).determinant(), Err(Error::NotMonic(_))));

    // numeric cross-check: product of nonzero roots of t^3 - 2t
    let roots = numeric_roots(&p(&[0, -2, 0, 1]));
    let prod: Complex64 = roots.iter().filter(|z| z.norm() > 1e-8).product();
    assert!((prod.re + 2.0).abs() < 1e-9 && prod.im.abs() < 1e-9);
}

#[test]
fn discriminant_examples() {
    assert_eq!(p(&[-2, 0, 1]).discriminant().unwrap().value, big(-8));
    assert_eq!(p(&[-1, 0, 0, 1]).discriminant().unwrap().value, big(27));
    assert_eq!(p(&[-5, 1]).discriminant().unwrap().value, big(1));
    assert!(p(&[1, 0, 2]).discriminant().is_err());

    // ordered-pair product over numeric roots, rounded
    for c in [&[-1i64, 0, 0, 1][..], &[-2, 0, 1], &[1, 1, 0, 1], &[7, 1, 1]] {
        let q = p(c);
        let roots = numeric_roots(&q);
        let mut prod = Complex64::one();
        for (i, a) in roots.iter().enumerate() {
            for (j, b) in roots.iter().enumerate() {
                if i != j {
                    prod *= a - b;
                }
            }
        }
        assert!(prod.im.abs() < 1e-6);
        assert_eq!(big(prod.re.round() as i64), q.discriminant().unwrap().value, "{q}");
    }
}

#[test]
fn composed_difference_examples() {
    assert_eq!(p(&[-1, 1]).composed_difference(&p(&[-1, 1])).unwrap(), p(&[0, 1]));
    assert_eq!(
        p(&[-2, 0, 1]).composed_difference(&p(&[-2, 0, 1])).unwrap(),
        p(&[0, 0, -8, 0, 1])
    );
    assert_eq!(p(&[-2, 0, 1]).composed_difference(&p(&[0, 1])).unwrap(), p(&[-2, 0, 1]));
    assert!(p(&[1, 2]).composed_difference(&p(&[0, 1])).is_err());
}

#[test]
fn composed_difference_matches_numeric_differences() {
    let a = p(&[1, -3, 0, 1]);
    let b = p(&[2, 1, 1]);
    let cd = a.composed_difference(&b).unwrap();
    let ra = numeric_roots(&a);
    let rb = numeric_roots(&b);
    let c = cd.to_complex_coeffs();
    for x in &ra {
        for y in &rb {
            let z = x - y;
            let v = c.iter().rev().fold(Complex64::zero(), |acc, &k| acc * z + k);
            let scale: f64 = c.iter().enumerate().map(|(k, a)| a.norm() * z.norm().powi(k as i32)).sum();
            assert!(v.norm() <= 1e-10 * scale, "residual {v} at {z}");
        }
    }
}

#[test]
fn resultant_antisymmetry_under_swap() {
    let a = p(&[3, -1, 0, 2, 1]);
    let b = p(&[-7, 0, 5]);
    let ab = resultant(&a, &b);
    let ba = resultant(&b, &a);
    // (-1)^(4*2) = 1
    assert_eq!(ab, ba);
    let c = p(&[1, 1, 1, 1]);
    assert_eq!(resultant(&a, &c), resultant(&c, &a)); // (-1)^12
    let d = p(&[2, 1]);
    assert_eq!(resultant(&c, &d), -resultant(&d, &c)); // (-1)^3
}

#[test]
fn discriminant_and_determinant_are_at_least_one_small_exhaustive() {
    let range = -3i64..=3;
    for deg in 1..=4usize {
        let count = 7usize.pow(deg as u32);
        for idx in 0..count {
            let mut c = Vec::with_capacity(deg + 1);
            let mut r = idx;
            for _ in 0..deg {
                c.push(*range.start() + (r % 7) as i64);
                r /= 7;
            }
            c.push(1);
            let q = p(&c);
            assert!(q.discriminant().unwrap().value.abs() >= BigInt::one(), "{q}");
            assert!(q.determinant().unwrap().value.abs() >= BigInt::one(), "{q}");
        }
    }
}

fn arb_monic(max_deg: usize, bound: i64) -> impl Strategy<Value = IntPolynomial> {
    (1..=max_deg).prop_flat_map(move |d| {
        prop::collection::vec(-bound..=bound, d).prop_map(|mut c| {
            c.push(1);
            IntPolynomial::from_i64s(&c).unwrap()
        })
    })
}

fn arb_poly(max_deg: usize, bound: i64) -> impl Strategy<Value = IntPolynomial> {
    prop::collection::vec(-bound..=bound, 1..=max_deg + 1)
        .prop_filter_map("nonzero", |c| IntPolynomial::from_i64s(&c).ok())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn modular_resultant_matches_bareiss(a in arb_poly(7, 40), b in arb_poly(7, 40)) {
        prop_assert_eq!(resultant(&a, &b), resultant_bareiss(&a, &b));
    }

    #[test]
    fn discriminant_ignores_multiplicity(a in arb_monic(4, 4), b in arb_monic(3, 4), k in 1u32..=3) {
        let f = a.mul(&b.pow(k).unwrap());
        prop_assert_eq!(
            f.discriminant().unwrap().value,
            f.squarefree_part().unwrap().discriminant().unwrap().value
        );
    }

    #[test]
    fn squarefree_decomposition_reassembles(a in arb_monic(3, 3), b in arb_monic(2, 3), c in arb_monic(2, 3)) {
        let f = a.mul(&b.pow(2).unwrap()).mul(&c.pow(3).unwrap());
        let parts = f.squarefree_decomposition().unwrap();
        let rebuilt = parts.iter().fold(IntPolynomial::one(), |acc, s| {
            acc.mul(&s.factor.pow(s.multiplicity).unwrap())
        });
        prop_assert_eq!(rebuilt, f);
        for s in &parts {
            prop_assert!(s.factor.is_monic());
            prop_assert_eq!(s.factor.squarefree_part().unwrap(), s.factor.clone());
        }
    }

    #[test]
    fn composed_difference_matches_power_sums(a in arb_monic(5, 5), b in arb_monic(5, 5)) {
        prop_assert_eq!(a.composed_difference(&b).unwrap(), composed_difference_by_power_sums(&a, &b));
    }

    #[test]
    fn display_parses_back(q in arb_poly(8, 1000)) {
        let text = q.to_string();
        prop_assert_eq!(text.parse::<IntPolynomial>().unwrap(), q.clone());
        let json = serde_json::to_string(&q).unwrap();
        prop_assert_eq!(serde_json::from_str::<IntPolynomial>(&json).unwrap(), q);
    }
}
