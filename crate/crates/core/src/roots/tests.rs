use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::ToPrimitive;
use proptest::prelude::*;

use super::*;

fn p(c: &[i64]) -> IntPolynomial {
    IntPolynomial::from_i64s(c).unwrap()
}

/// Monic polynomial with roots 2cos(j pi/(n+1)), built by the three-term
/// recurrence P_{k+1} = t P_k - P_{k-1}.
fn path_polynomial(n: usize) -> IntPolynomial {
    let mut prev = IntPolynomial::one();
    let mut cur = IntPolynomial::monomial(1);
    for _ in 1..n {
        let next = cur.mul(&IntPolynomial::monomial(1)).checked_sub(&prev).unwrap();
        prev = cur;
        cur = next;
    }
    cur
}

fn check_conjugate_symmetry(r: &RootSet) {
    for e in r.entries() {
        if e.im != 0.0 {
            let mate = r
                .entries()
                .iter()
                .find(|o| o.re == e.re && o.im == -e.im)
                .expect("conjugate partner");
            assert_eq!(mate.multiplicity, e.multiplicity);
            assert_eq!(mate.radius, e.radius);
        }
    }
}

/// Coefficients of prod (t - z) over the expanded root list.
fn expand(roots: &[Complex64]) -> Vec<Complex64> {
    let mut c = vec![Complex64::new(1.0, 0.0)];
    for z in roots {
        let mut next = vec![Complex64::new(0.0, 0.0); c.len() + 1];
        for (k, a) in c.iter().enumerate() {
            next[k + 1] += a;
            next[k] -= a * z;
        }
        c = next;
    }
    c
}

#[test]
fn square_root_of_two() {
    let r = find_roots(&p(&[-2, 0, 1]), 1e-12).unwrap();
    assert_eq!(r.entries().len(), 2);
    let s = std::f64::consts::SQRT_2;
    assert!((r.entries()[0].re + s).abs() < 1e-14 && r.entries()[0].im == 0.0);
    assert!((r.entries()[1].re - s).abs() < 1e-14 && r.entries()[1].im == 0.0);
    assert!(r.max_radius() <= 1e-12);
    assert_eq!(r.degree(), 2);
}

#[test]
fn double_root_at_zero_is_exact() {
    let r = find_roots(&p(&[0, 0, -8, 0, 1]), 1e-10).unwrap();
    let e = r.entries();
    assert_eq!(e.len(), 3);
    assert_eq!((e[1].re, e[1].im, e[1].multiplicity, e[1].radius), (0.0, 0.0, 2, 0.0));
    assert!((e[2].re - 8f64.sqrt()).abs() < 1e-12 && e[2].radius <= 1e-10);
    assert!((e[0].re + 8f64.sqrt()).abs() < 1e-12 && e[0].multiplicity == 1);
}

#[test]
fn ramsay_polynomial_has_one_small_root() {
    let q = p(&[2, 512, 0, 0, 0, 0, 1]);
    let r = find_roots(&q, 1e-12).unwrap();
    assert_eq!(r.count_in_disk(Complex64::new(0.0, 0.0), 1.0), DiskCount::Certain(1));
    let small = r.entries().iter().find(|e| e.location().norm() < 1.0).unwrap();
    assert!((small.re + 3.90625e-3).abs() < 1e-6, "{}", small.re);
    assert_eq!(small.im, 0.0);
    // all roots inside |t| <= 4
    assert!(r.max_modulus() <= 4.0);
    check_conjugate_symmetry(&r);
}

#[test]
fn root_bound_examples() {
    assert_eq!(root_bound(&p(&[-2, 0, 1])).unwrap(), 3.0);
    assert_eq!(root_bound(&p(&[-1, 0, 0, 0, 0, 1])).unwrap(), 2.0);
    assert_eq!(root_bound(&p(&[2, 512, 0, 0, 0, 0, 1])).unwrap(), 513.0);
    assert!(root_bound(&p(&[1, 2])).is_err());
}

#[test]
fn rejects_bad_arguments() {
    assert!(find_roots(&p(&[3]), 1e-10).is_err());
    assert!(find_roots(&p(&[1, 1]), 0.0).is_err());
    assert!(find_roots(&p(&[1, 1]), f64::NAN).is_err());
}

#[test]
fn roots_of_unity_degree_256() {
    let mut c = vec![0i64; 257];
    c[0] = -1;
    c[256] = 1;
    let r = find_roots(&p(&c), 1e-10).unwrap();
    assert_eq!(r.entries().len(), 256);
    for e in r.entries() {
        assert!((e.location().norm() - 1.0).abs() < 1e-13);
    }
    check_conjugate_symmetry(&r);
}

#[test]
fn ill_conditioned_path_polynomial_needs_exact_evaluation() {
    let n = 120;
    let r = find_roots(&path_polynomial(n), 1e-10).unwrap();
    assert_eq!(r.entries().len(), n);
    let mut expected: Vec<f64> = (1..=n)
        .map(|j| 2.0 * (j as f64 * std::f64::consts::PI / (n as f64 + 1.0)).cos())
        .collect();
    expected.sort_by(f64::total_cmp);
    for (e, x) in r.entries().iter().zip(&expected) {
        assert_eq!(e.im, 0.0);
        assert!((e.re - x).abs() <= e.radius.max(1e-13), "{} vs {}", e.re, x);
    }
}

#[test]
fn repeated_factors_get_exact_multiplicities() {
    // (t^2 + 1)^3 (t - 3)^2 (t^2 - 2)
    let f = p(&[1, 0, 1])
        .pow(3)
        .unwrap()
        .mul(&p(&[-3, 1]).pow(2).unwrap())
        .mul(&p(&[-2, 0, 1]));
    let r = find_roots(&f, 1e-12).unwrap();
    assert_eq!(r.degree(), f.degree());
    let mults: Vec<u32> = r.entries().iter().map(|e| e.multiplicity).collect();
    assert_eq!(mults, vec![1, 3, 3, 1, 2]);
    let three = r.entries().last().unwrap();
    assert_eq!((three.re, three.radius), (3.0, 0.0));
    check_conjugate_symmetry(&r);
}

#[test]
fn serializes_as_list_of_records() {
    let r = find_roots(&p(&[0, 1]), 1e-12).unwrap();
    let json = serde_json::to_string(&r).unwrap();
    assert_eq!(json, r#"[{"re":0.0,"im":0.0,"mult":1,"radius":0.0}]"#);
}

#[test]
fn complex_coefficients() {
    // t^2 - i: roots +-(1 + i)/sqrt(2)
    let c = [Complex64::new(0.0, -1.0), Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)];
    let roots = solve_complex(&c, 1e-12).unwrap();
    let h = std::f64::consts::FRAC_1_SQRT_2;
    assert!((roots[0].0 - Complex64::new(-h, -h)).norm() < 1e-14);
    assert!((roots[1].0 - Complex64::new(h, h)).norm() < 1e-14);
}

fn arb_monic(max_deg: usize, bound: i64) -> impl Strategy<Value = IntPolynomial> {
    (1..=max_deg).prop_flat_map(move |d| {
        prop::collection::vec(-bound..=bound, d).prop_map(|mut c| {
            c.push(1);
            IntPolynomial::from_i64s(&c).unwrap()
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(120))]

    #[test]
    fn roots_reproduce_coefficients(q in arb_monic(20, 10)) {
        let r = find_roots(&q, 1e-10).unwrap();
        prop_assert_eq!(r.degree(), q.degree());
        let c = expand(&r.expanded());
        let scale = q.coeffs().iter().map(|x| x.to_f64().unwrap().abs()).fold(1.0, f64::max);
        for (got, want) in c.iter().zip(q.coeffs()) {
            let want = want.to_f64().unwrap();
            prop_assert!((got.re - want).abs() <= 1e-8 * scale.max(want.abs()), "{} vs {}", got, want);
            prop_assert!(got.im.abs() <= 1e-8 * scale);
        }
        check_conjugate_symmetry(&r);
    }

    #[test]
    fn residuals_are_consistent_with_radii(q in arb_monic(12, 10)) {
        let r = find_roots(&q, 1e-10).unwrap();
        let c = q.to_complex_coeffs();
        for e in r.entries() {
            let z = e.location();
            let v = c.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, &a| acc * z + a);
            let mag: f64 = c.iter().enumerate().map(|(k, a)| a.norm() * z.norm().powi(k as i32)).sum();
            // |p(z)| <= |p'|-scale * radius + rounding, with a generous
            // degree-scaled allowance
            let dp: f64 = c.iter().enumerate().skip(1)
                .map(|(k, a)| k as f64 * a.norm() * (z.norm() + e.radius).powi(k as i32 - 1)).sum();
            let allowance = dp * e.radius * 2f64.powi(e.multiplicity as i32) + 64.0 * q.degree() as f64 * f64::EPSILON * mag;
            prop_assert!(v.norm() <= allowance.max(1e-300) || e.multiplicity > 1 && v.norm() <= 1e-6 * mag);
        }
    }

    #[test]
    fn repeated_roots_from_products(a in arb_monic(4, 5), b in arb_monic(3, 5)) {
        let f = a.mul(&b).mul(&b);
        let r = find_roots(&f, 1e-9).unwrap();
        prop_assert_eq!(r.degree(), f.degree());
    }
}

#[test]
fn bigint_coefficients_beyond_double_range_of_exactness() {
    // t^2 - (2^60 + 1): roots are +-sqrt(2^60 + 1)
    let big: BigInt = BigInt::from(1u64 << 60) + 1;
    let c = vec![-big, BigInt::from(0), BigInt::from(1)];
    let q = IntPolynomial::new(c).unwrap();
    let r = find_roots(&q, 1e-6).unwrap();
    let want = ((1u64 << 60) as f64 + 1.0).sqrt();
    assert!((r.entries()[1].re - want).abs() <= r.entries()[1].radius + 1e-6);
}
