use intmeasure::measure::{energy, log_det, self_log_disc};
use intmeasure::potential::{equilibrium_discretized, green_value, weil_height};
use intmeasure::{
    delta_of, find_roots, w1_distance, AtomicMeasure, CompactSetSpec, EnergyMode, IntPolynomial,
};

const SAMPLES: [&str; 6] = ["t^2-2", "t^3-3t+1", "t^5-t-1", "t^4+t^3+t^2+t+1", "t^6-3t^4+2t+7", "t^7+2"];

#[test]
fn root_measure_functionals_match_exact_invariants() {
    for s in SAMPLES {
        let p: IntPolynomial = s.parse().unwrap();
        let n = p.degree() as f64;
        let roots = find_roots(&p, 1e-12).unwrap();
        let mu = delta_of(&roots, roots.max_modulus()).unwrap();
        let disc = p.discriminant().unwrap().ln_abs();
        let det = p.determinant().unwrap().ln_abs();
        assert!((self_log_disc(&mu).expect_finite() - disc / (n * n)).abs() < 1e-9, "{s}");
        assert!((log_det(&mu).expect_finite() - det / n).abs() < 1e-12, "{s}");
        assert_eq!(
            energy(&mu, EnergyMode::Offdiag).expect_finite(),
            -self_log_disc(&mu).expect_finite()
        );
    }
}

#[test]
fn mahler_measure_from_the_unit_disk_green_function() {
    let disk = CompactSetSpec::disk(0.0, 1.0, 1000).unwrap();
    for s in SAMPLES {
        let p: IntPolynomial = s.parse().unwrap();
        let roots = find_roots(&p, 1e-12).unwrap();
        let direct: f64 = roots
            .expanded()
            .iter()
            .map(|z| z.norm().ln().max(0.0))
            .sum::<f64>()
            / p.degree() as f64;
        assert!((weil_height(&disk, &roots).unwrap() - direct).abs() < 1e-12, "{s}");
        for z in roots.expanded() {
            assert!((green_value(&disk, z).unwrap() - z.norm().ln().max(0.0)).abs() < 1e-12);
        }
    }
}

#[test]
fn json_round_trips() {
    let p: IntPolynomial = "t^3-2".parse().unwrap();
    let roots = find_roots(&p, 1e-12).unwrap();
    let mu = delta_of(&roots, roots.max_modulus()).unwrap();
    let text = serde_json::to_string(&mu).unwrap();
    let back: AtomicMeasure = serde_json::from_str(&text).unwrap();
    assert_eq!(back, mu);

    let e = CompactSetSpec::lemniscate("t^2-2".parse().unwrap(), 4.0, 2000).unwrap();
    let again = CompactSetSpec::from_json(e.to_json()).unwrap();
    assert_eq!(again, e);
}

#[test]
fn lemniscate_preimages_are_their_own_equilibrium() {
    // roots of (t^2 - 2)^k - 4^k lie on |t^2 - 2| = 4 and match the
    // discretized equilibrium with the same number of atoms
    let e = CompactSetSpec::lemniscate("t^2-2".parse().unwrap(), 4.0, 2000).unwrap();
    for k in [2u32, 5] {
        let q: IntPolynomial = "t^2-2".parse().unwrap();
        let p = q
            .pow(k)
            .unwrap()
            .checked_sub(&IntPolynomial::from_i64s(&[4i64.pow(k)]).unwrap())
            .unwrap();
        let roots = find_roots(&p, 1e-12).unwrap();
        let mu = delta_of(&roots, roots.max_modulus()).unwrap();
        let eq = equilibrium_discretized(&e, k as usize).unwrap();
        assert_eq!(eq.len(), 2 * k as usize);
        let (d, _) = w1_distance(&mu, &eq);
        assert!(d < 1e-12, "k = {k}: {d}");
        assert_eq!(weil_height(&e, &roots).unwrap(), 0.0);
    }
}
