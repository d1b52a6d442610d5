use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use proptest::prelude::*;

use super::*;
use crate::intpoly::IntPolynomial;
use crate::roots::find_roots;

fn p(c: &[i64]) -> IntPolynomial {
    IntPolynomial::from_i64s(c).unwrap()
}

fn ratio(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn delta(q: &IntPolynomial) -> AtomicMeasure {
    let r = find_roots(q, 1e-12).unwrap();
    delta_of(&r, r.max_modulus()).unwrap()
}

fn unity(n: usize) -> IntPolynomial {
    let mut c = vec![0i64; n + 1];
    c[0] = -1;
    c[n] = 1;
    p(&c)
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Off-diagonal pair sum over the expanded root list, independent of the
/// atom representation: sum over i != j with distinct roots of log|z_i - z_j|.
fn brute_force_d(roots: &[Complex64]) -> f64 {
    let n = roots.len() as f64;
    let mut s = 0.0;
    for (i, a) in roots.iter().enumerate() {
        for (j, b) in roots.iter().enumerate() {
            if i != j && a != b {
                s += (a - b).norm().ln();
            }
        }
    }
    s / (n * n)
}

#[test]
fn delta_weights_follow_multiplicity() {
    let m = delta(&p(&[-2, 0, 1]));
    assert_eq!(m.len(), 2);
    assert!(m.atoms().iter().all(|a| a.weight == ratio(1, 2)));

    let m = delta(&p(&[0, 0, -8, 0, 1]));
    let w: Vec<_> = m.atoms().iter().map(|a| a.weight.clone()).collect();
    assert_eq!(w, vec![ratio(1, 4), ratio(1, 2), ratio(1, 4)]);
    assert_eq!(m.atoms()[1].location, c(0.0, 0.0));
    assert!((m.atoms()[2].location.re - 8f64.sqrt()).abs() < 1e-12);

    let m = delta(&p(&[-1, 0, 0, 1]));
    assert_eq!(m.len(), 3);
    for a in m.atoms() {
        assert_eq!(a.weight, ratio(1, 3));
        assert!((a.location.norm() - 1.0).abs() < 1e-14);
    }
}

#[test]
fn delta_rejects_small_radius_bound() {
    let r = find_roots(&p(&[-2, 0, 1]), 1e-12).unwrap();
    assert!(matches!(delta_of(&r, 1.0), Err(Error::RadiusBound { .. })));
}

#[test]
fn construction_validates_weights() {
    let atom = |re, n, d| Atom {
        location: c(re, 0.0),
        weight: ratio(n, d),
    };
    assert!(AtomicMeasure::new(vec![], 1.0).is_err());
    assert!(AtomicMeasure::new(vec![atom(0.0, 1, 2)], 1.0).is_err());
    assert!(AtomicMeasure::new(vec![atom(0.0, 3, 2), atom(1.0, -1, 2)], 1.0).is_err());
    let merged = AtomicMeasure::new(vec![atom(0.5, 1, 3), atom(0.5 + 1e-12, 2, 3)], 1.0).unwrap();
    assert_eq!(merged.len(), 1);
    assert_eq!(merged.atoms()[0].weight, BigRational::one());
    // the heavier atom is the representative
    assert_eq!(merged.atoms()[0].location, c(0.5 + 1e-12, 0.0));
}

#[test]
fn log_det_examples() {
    let v = log_det(&delta(&p(&[-2, 0, 1]))).expect_finite();
    assert!((v - 0.5 * 2f64.ln()).abs() < 1e-14);
    assert_eq!(log_det(&delta(&p(&[0, 0, 0, 1]))).expect_finite(), 0.0);
    for n in [3, 7, 16] {
        assert!(log_det(&delta(&unity(n))).expect_finite().abs() < 1e-14);
    }
}

#[test]
fn log_disc_examples() {
    let d = self_log_disc(&delta(&p(&[-2, 0, 1]))).expect_finite();
    assert!((d - 0.25 * 8f64.ln()).abs() < 1e-14);
    let zero = AtomicMeasure::dirac(c(0.0, 0.0));
    let one = AtomicMeasure::dirac(c(1.0, 0.0));
    assert_eq!(log_disc(&zero, &one).expect_finite(), 0.0);
    assert_eq!(self_log_disc(&AtomicMeasure::dirac(c(0.3, 0.4))).expect_finite(), 0.0);
}

#[test]
fn log_disc_is_log_det_of_difference_measure() {
    let a = delta(&p(&[1, -3, 0, 1]));
    let b = delta(&p(&[-2, 1, 1]));
    let lhs = log_disc(&a, &b).expect_finite();
    let rhs = log_det(&convolve(&a, &b)).expect_finite();
    assert!((lhs - rhs).abs() < 1e-12);
}

#[test]
fn convolution_examples() {
    let m = delta(&p(&[-1, 1]));
    let conv = convolve(&m, &m);
    assert_eq!(conv.len(), 1);
    assert_eq!(conv.atoms()[0].location, c(0.0, 0.0));

    let s = delta(&p(&[-2, 0, 1]));
    let conv = convolve(&s, &s);
    let w: Vec<_> = conv.atoms().iter().map(|a| a.weight.clone()).collect();
    assert_eq!(w, vec![ratio(1, 4), ratio(1, 2), ratio(1, 4)]);
    assert!((conv.atoms()[2].location.re - 8f64.sqrt()).abs() < 1e-14);
    assert_eq!(conv.radius_bound(), 2.0 * s.radius_bound());

    let e = convolve(&s, &AtomicMeasure::dirac(c(0.0, 0.0)));
    assert_eq!(e.atoms(), s.atoms());
}

#[test]
fn energy_examples() {
    let s = delta(&p(&[-2, 0, 1]));
    assert_eq!(energy(&s, EnergyMode::Total).value, ExtendedReal::PlusInfinity);
    let off = energy(&s, EnergyMode::Offdiag).expect_finite();
    assert!((off + 0.25 * 8f64.ln()).abs() < 1e-14);
    for n in [2usize, 5, 16, 64] {
        let e = energy(&delta(&unity(n)), EnergyMode::Offdiag).expect_finite();
        let want = -(n as f64).ln() / n as f64;
        assert!((e - want).abs() < 1e-12, "n={n}: {e} vs {want}");
    }
}

#[test]
fn free_entropy_examples() {
    let base = free_entropy(ExtendedReal::Finite(0.0)).expect_finite();
    assert!((base - 1.668939).abs() < 1e-6);
    assert!((base - (0.75 + (2.0 * std::f64::consts::PI).ln() / 2.0)).abs() < 1e-15);
    assert_eq!(
        free_entropy(ExtendedReal::PlusInfinity).value,
        ExtendedReal::MinusInfinity
    );
    let v = free_entropy(ExtendedReal::Finite(-2f64.ln())).expect_finite();
    assert!((v - 2.362086).abs() < 1e-6);
}

#[test]
fn moment_examples() {
    let n = 7;
    let m = moments(&delta(&unity(n)), n).unwrap();
    for (k, mk) in m.iter().enumerate() {
        let want = if k + 1 == n { 1.0 } else { 0.0 };
        assert!((mk - c(want, 0.0)).norm() < 1e-14, "k={} {}", k + 1, mk);
    }
    let two = moments(&AtomicMeasure::dirac(c(2.0, 0.0)), 5).unwrap();
    for (k, mk) in two.iter().enumerate() {
        assert_eq!(*mk, c(2f64.powi(k as i32 + 1), 0.0));
    }
    let s = moments(&delta(&p(&[-2, 0, 1])), 2).unwrap();
    assert!(s[0].norm() < 1e-15 && (s[1] - c(2.0, 0.0)).norm() < 1e-14);
    assert!(moments(&AtomicMeasure::dirac(c(1.0, 0.0)), 0).is_err());
}

#[test]
fn symmetry_examples() {
    assert!(is_symmetric(&delta(&p(&[1, 0, 1])), 1e-12));
    assert!(!is_symmetric(&AtomicMeasure::dirac(c(0.0, 1.0)), 1e-12));
    assert!(is_symmetric(&delta(&p(&[3, -1, 2, 0, -4, 1])), 1e-12));
}

#[test]
fn ball_mass_examples() {
    let s = delta(&p(&[-2, 0, 1]));
    assert_eq!(ball_mass(&s, c(2f64.sqrt(), 0.0), 0.1).unwrap(), ratio(1, 2));
    assert!(ball_mass(&delta(&unity(9)), c(0.0, 0.0), 0.5).unwrap().is_zero());
    let q = delta(&p(&[0, 0, -8, 0, 1]));
    assert_eq!(ball_mass(&q, c(0.0, 0.0), 1.0).unwrap(), ratio(1, 2));
    assert!(ball_mass(&q, c(0.0, 0.0), 0.0).is_err());
}

#[test]
fn json_and_csv_formats() {
    let m = delta(&p(&[0, 0, -8, 0, 1]));
    let json = serde_json::to_value(&m).unwrap();
    assert_eq!(json["atoms"][1]["num"], "1");
    assert_eq!(json["atoms"][1]["den"], "2");
    assert_eq!(json["atoms"][1]["re"], 0.0);
    let back: AtomicMeasure = serde_json::from_value(json).unwrap();
    assert_eq!(back, m);
    let bad = r#"{"atoms":[{"re":0.0,"im":0.0,"num":"1","den":"3"}],"radius_bound":1.0}"#;
    assert!(serde_json::from_str::<AtomicMeasure>(bad).is_err());

    let csv = m.to_csv();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], "re,im,weight");
    assert_eq!(lines[2], "0,0,0.5");

    let ext = serde_json::to_string(&free_entropy(ExtendedReal::PlusInfinity)).unwrap();
    assert_eq!(ext, r#"{"value":"-inf","functional":"free_entropy"}"#);
}

/// Small exhaustive check that D(Delta(p)) is nonnegative and agrees with
/// the integer discriminant.
#[test]
fn d_is_nonnegative_on_small_squarefree_polynomials() {
    let range = -3i64..=3;
    for deg in 1..=4usize {
        let mut c = vec![-3i64; deg];
        loop {
            let mut coeffs = c.clone();
            coeffs.push(1);
            let q = p(&coeffs);
            if q.squarefree_part().unwrap().degree() == deg {
                let d = self_log_disc(&delta(&q)).expect_finite();
                assert!(d >= -1e-12, "{q}: {d}");
                let disc = q.discriminant().unwrap().value;
                let want = disc.abs().to_f64().unwrap().ln() / (deg * deg) as f64;
                assert!((d - want).abs() < 1e-9, "{q}: {d} vs {want}");
            }
            // odometer over coefficient vectors
            let mut i = 0;
            while i < deg && c[i] == *range.end() {
                c[i] = *range.start();
                i += 1;
            }
            if i == deg {
                break;
            }
            c[i] += 1;
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

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn convolution_matches_composed_difference(a in arb_monic(6, 5), b in arb_monic(6, 5)) {
        let (ra, rb) = (find_roots(&a, 1e-12).unwrap(), find_roots(&b, 1e-12).unwrap());
        let ma = delta_of(&ra, ra.max_modulus()).unwrap();
        let mb = delta_of(&rb, rb.max_modulus()).unwrap();
        let conv = convolve(&ma, &mb);
        let diff = a.composed_difference(&b).unwrap();
        let rd = find_roots(&diff, 1e-12).unwrap();
        let md = delta_of(&rd, conv.radius_bound()).unwrap();
        prop_assert_eq!(conv.len(), md.len());
        let mut used = vec![false; md.len()];
        for x in conv.atoms() {
            let j = (0..md.len())
                .filter(|&j| !used[j])
                .min_by(|&i, &j| {
                    let di = (md.atoms()[i].location - x.location).norm();
                    let dj = (md.atoms()[j].location - x.location).norm();
                    di.total_cmp(&dj)
                })
                .unwrap();
            used[j] = true;
            let y = &md.atoms()[j];
            prop_assert!((x.location - y.location).norm() < 1e-8, "{} vs {}", x.location, y.location);
            prop_assert_eq!(&x.weight, &y.weight);
        }
    }

    #[test]
    fn log_det_matches_integer_determinant(q in arb_monic(12, 6)) {
        let m = delta(&q);
        let det = q.determinant().unwrap().value;
        let want = det.abs().to_f64().unwrap().ln() / q.degree() as f64;
        prop_assert!((log_det(&m).expect_finite() - want).abs() < 1e-9);
    }

    #[test]
    fn d_matches_integer_discriminant(q in arb_monic(12, 6)) {
        prop_assume!(q.squarefree_part().unwrap().degree() == q.degree());
        let r = find_roots(&q, 1e-12).unwrap();
        let m = delta_of(&r, r.max_modulus()).unwrap();
        let d = self_log_disc(&m).expect_finite();
        let disc = q.discriminant().unwrap().value;
        let n = q.degree() as f64;
        let want = disc.abs().to_f64().unwrap().ln() / (n * n);
        prop_assert!((d - want).abs() < 1e-9, "{} vs {}", d, want);
        prop_assert!((d - brute_force_d(&r.expanded())).abs() < 1e-12);
    }

    #[test]
    fn moments_of_integer_measures_are_real(q in arb_monic(10, 6)) {
        let m = delta(&q);
        for mk in moments(&m, 8).unwrap() {
            prop_assert!(mk.im.abs() <= 1e-12, "{}", mk);
        }
        prop_assert!(is_symmetric(&m, 1e-12));
    }

    #[test]
    fn total_mass_stays_one(a in arb_monic(5, 4), b in arb_monic(5, 4)) {
        let conv = convolve(&delta(&a), &delta(&b));
        let total = conv.atoms().iter().fold(BigRational::zero(), |s, x| s + &x.weight);
        prop_assert!(total.is_one());
    }
}
