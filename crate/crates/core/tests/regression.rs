use nalgebra::DMatrix;

use spinorlab::constructors::{random_spinor, SeededSampler};
use spinorlab::harness::{load_spinor, spinor_to_json};
use spinorlab::kahler::{
    binomial, kaehler_spectrum, lowering_defect, project_sigma_r, raising_defect,
    ComplexStructureMatrix,
};
use spinorlab::SpinorSpace;

const GOLDEN: &str = concat!(
    env!("CARGO_MANIFEST_DIR"),
    "/tests/data/random_n4_seed42.json"
);

#[test]
fn seed_42_in_dimension_4_matches_golden_file() {
    let fresh = random_spinor(SpinorSpace::new(4).unwrap(), &mut SeededSampler::new(42));
    let stored = load_spinor(GOLDEN).unwrap();
    for (a, b) in fresh.coeffs().iter().zip(stored.coeffs()) {
        assert_eq!(a.re.to_bits(), b.re.to_bits());
        assert_eq!(a.im.to_bits(), b.im.to_bits());
    }
    assert_eq!(
        spinor_to_json(&fresh),
        std::fs::read_to_string(GOLDEN).unwrap()
    );
}

/// `O J O^T` for a random orthogonal `O` is another orthogonal complex structure.
fn rotated_structure(m: usize, s: &mut SeededSampler) -> ComplexStructureMatrix {
    let n = 2 * m;
    let g = DMatrix::from_fn(n, n, |_, _| s.gaussian());
    let q = g.qr().q();
    let j = ComplexStructureMatrix::standard(m).unwrap();
    ComplexStructureMatrix::new(&q * j.matrix() * q.transpose()).unwrap()
}

#[test]
fn spectrum_and_ladders_for_rotated_structures() {
    let mut s = SeededSampler::new(31);
    for m in 1..=4 {
        let space = SpinorSpace::new(2 * m).unwrap();
        for _ in 0..5 {
            let j = rotated_structure(m, &mut s);
            let spec = kaehler_spectrum(&j).unwrap();
            assert!(spec.max_eigenvalue_residual <= 1e-9);
            for level in &spec.levels {
                assert_eq!(level.multiplicity, binomial(m, level.r));
            }
            for r in 0..=m {
                let psi_r = project_sigma_r(&spec, &random_spinor(space, &mut s), r)
                    .unwrap()
                    .normalized()
                    .unwrap();
                let x = s.unit_real_vector(2 * m);
                assert!(
                    raising_defect(&spec, &j, &x, &psi_r).unwrap() <= 1e-10,
                    "m={m} r={r}"
                );
                assert!(
                    lowering_defect(&spec, &j, &x, &psi_r).unwrap() <= 1e-10,
                    "m={m} r={r}"
                );
            }
        }
    }
}
