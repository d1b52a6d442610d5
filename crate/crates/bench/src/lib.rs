//! Shared inputs for the benchmarks.

use intmeasure::families::{family_member, FamilyKind, FamilySpec, IndexRange};
use intmeasure::{delta_of, find_roots, AtomicMeasure, IntPolynomial};

/// Characteristic polynomial of the path graph on `n` vertices.
pub fn path_polynomial(n: u32) -> IntPolynomial {
    let spec = FamilySpec::new(FamilyKind::ChebyshevPath, IndexRange::new(1, n)).expect("valid family");
    family_member(&spec, n).expect("in range")
}

/// `t^n - 1`.
pub fn cyclotomic_product(n: u32) -> IntPolynomial {
    let spec = FamilySpec::new(FamilyKind::RootsOfUnity, IndexRange::new(1, n)).expect("valid family");
    family_member(&spec, n).expect("in range")
}

/// The root measure of `p`.
pub fn root_measure(p: &IntPolynomial) -> AtomicMeasure {
    let r = find_roots(p, 1e-12).expect("roots");
    delta_of(&r, r.max_modulus()).expect("measure")
}

/// Every monic polynomial of the given degree with lower coefficients in
/// `[-c, c]`, in lexicographic order.
pub fn coefficient_box(degree: usize, c: i64) -> Vec<IntPolynomial> {
    let width = (2 * c + 1) as usize;
    let count = width.pow(degree as u32);
    (0..count)
        .map(|mut code| {
            let mut coeffs = Vec::with_capacity(degree + 1);
            for _ in 0..degree {
                coeffs.push((code % width) as i64 - c);
                code /= width;
            }
            coeffs.push(1);
            IntPolynomial::from_i64s(&coeffs).expect("nonzero")
        })
        .collect()
}
