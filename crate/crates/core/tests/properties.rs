use nalgebra::DMatrix;
use proptest::prelude::*;

use spinorlab::analysis::{classify, cr_frame, kernel_matrix, nullity, xi_vector};
use spinorlab::clifford::{
    apply_generator, apply_real_vector, chirality_project, inner, Chirality,
};
use spinorlab::constructors::{
    psi_pure, random_chiral_spinor, random_spinor, tensor_spinor, SeededSampler,
};
use spinorlab::harness::{spinor_from_json, spinor_to_json};
use spinorlab::kahler::{alpha_apply, kaehler_spectrum, project_sigma_r, ComplexStructureMatrix};
use spinorlab::{Spinor, SpinorError, SpinorSpace, C64};

fn projector(basis: &[nalgebra::DVector<f64>]) -> DMatrix<f64> {
    let n = basis[0].len();
    basis
        .iter()
        .fold(DMatrix::zeros(n, n), |acc, d| acc + d * d.transpose())
}

/// A spinor with nontrivial nullity in most dimensions.
fn structured(n: usize, family: u8, s: &mut SeededSampler) -> Spinor {
    let space = SpinorSpace::new(n).unwrap();
    match family % 3 {
        0 if n.is_multiple_of(2) => random_chiral_spinor(space, s, Chirality::Negative).unwrap(),
        1 if n >= 4 => tensor_spinor(
            &psi_pure(2).unwrap(),
            &random_spinor(SpinorSpace::new(n - 2).unwrap(), s),
        )
        .unwrap(),
        _ => random_spinor(space, s),
    }
}

fn scalar() -> impl Strategy<Value = C64> {
    (-3.0f64..3.0, 0.0f64..std::f64::consts::TAU)
        .prop_map(|(log_mag, arg)| C64::from_polar(10f64.powf(log_mag), arg))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn classification_is_scale_invariant(n in 2usize..=10, family in 0u8..3, seed in any::<u64>(), c in scalar()) {
        let mut s = SeededSampler::new(seed);
        let psi = structured(n, family, &mut s);
        let scaled = psi.scale(c);
        prop_assert_eq!(classify(&psi).unwrap(), classify(&scaled).unwrap());
        let a = kernel_matrix(&psi).unwrap();
        let b = kernel_matrix(&scaled).unwrap();
        prop_assert!((b - a * c).norm() <= 1e-12 * c.norm() * (n as f64).sqrt());
        match (cr_frame(&psi), cr_frame(&scaled)) {
            (Ok(f), Ok(g)) => {
                let dist = (projector(&f.d_basis) - projector(&g.d_basis)).norm();
                prop_assert!(dist <= 1e-9, "subspace distance {}", dist);
            }
            (Err(SpinorError::EmptyDistribution), Err(SpinorError::EmptyDistribution)) => {}
            (x, y) => prop_assert!(false, "frames disagree: {:?} / {:?}", x.err(), y.err()),
        }
    }

    #[test]
    fn generator_relations(n in 2usize..=12, a in 1usize..=12, b in 1usize..=12, seed in any::<u64>()) {
        prop_assume!(a <= n && b <= n);
        let mut s = SeededSampler::new(seed);
        let space = SpinorSpace::new(n).unwrap();
        let psi = random_spinor(space, &mut s);
        let phi = random_spinor(space, &mut s);
        let ab = apply_generator(a, &apply_generator(b, &psi).unwrap()).unwrap();
        let ba = apply_generator(b, &apply_generator(a, &psi).unwrap()).unwrap();
        let delta = if a == b { 2.0 } else { 0.0 };
        let sum = ab.add_scaled(C64::new(1.0, 0.0), &ba).unwrap().add_scaled(C64::new(delta, 0.0), &psi).unwrap();
        prop_assert!(sum.norm() <= 1e-12);
        prop_assert!((apply_generator(a, &psi).unwrap().norm() - 1.0).abs() <= 1e-13);
        let v = s.unit_real_vector(n);
        let lhs = inner(&apply_real_vector(&v, &phi).unwrap(), &psi).unwrap();
        let rhs = inner(&phi, &apply_real_vector(&v, &psi).unwrap()).unwrap();
        prop_assert!((lhs + rhs).norm() <= 1e-12);
    }

    #[test]
    fn chirality_projections(m in 1usize..=6, seed in any::<u64>()) {
        let mut s = SeededSampler::new(seed);
        let psi = random_spinor(SpinorSpace::new(2 * m).unwrap(), &mut s);
        let plus = chirality_project(&psi, Chirality::Positive).unwrap();
        let minus = chirality_project(&psi, Chirality::Negative).unwrap();
        prop_assert!(plus.add_scaled(C64::new(1.0, 0.0), &minus).unwrap().distance(&psi).unwrap() <= 1e-14);
        prop_assert!(chirality_project(&plus, Chirality::Positive).unwrap().distance(&plus).unwrap() <= 1e-14);
        prop_assert!(inner(&plus, &minus).unwrap().norm() <= 1e-14);
    }

    #[test]
    fn json_round_trip_is_exact(n in 2usize..=8, seed in any::<u64>(), exp in -300i32..300) {
        let mut s = SeededSampler::new(seed);
        let space = SpinorSpace::new(n).unwrap();
        let scale = C64::new(10f64.powi(exp), 0.0);
        let psi = random_spinor(space, &mut s).scale(scale);
        let back = spinor_from_json(&spinor_to_json(&psi)).unwrap();
        prop_assert_eq!(back.space(), psi.space());
        for (x, y) in back.coeffs().iter().zip(psi.coeffs()) {
            prop_assert_eq!(x.re.to_bits(), y.re.to_bits());
            prop_assert_eq!(x.im.to_bits(), y.im.to_bits());
        }
    }

    #[test]
    fn tensor_norm_and_pure_additivity(p in 1usize..=3, nb in 2usize..=6, family in 0u8..3, seed in any::<u64>()) {
        let mut s = SeededSampler::new(seed);
        let phi = structured(nb, family, &mut s).scale(C64::new(0.3, 1.7));
        let a = psi_pure(2 * p).unwrap().scale(C64::new(-2.0, 0.5));
        let t = tensor_spinor(&a, &phi).unwrap();
        prop_assert!((t.norm() - a.norm() * phi.norm()).abs() <= 1e-13 * t.norm());
        prop_assert_eq!(nullity(&t).unwrap().nullity, p + nullity(&phi).unwrap().nullity);
    }

    #[test]
    fn sampler_is_deterministic(seed in any::<u64>(), n in 2usize..=10) {
        let space = SpinorSpace::new(n).unwrap();
        let a = random_spinor(space, &mut SeededSampler::new(seed));
        let b = random_spinor(space, &mut SeededSampler::new(seed));
        prop_assert_eq!(a, b);
    }

    #[test]
    fn xi_is_real_and_dual_to_the_distribution(n in 2usize..=9, family in 0u8..3, seed in any::<u64>()) {
        let mut s = SeededSampler::new(seed);
        let psi = structured(n, family, &mut s);
        let xi = xi_vector(&psi).unwrap();
        if let Ok(frame) = cr_frame(&psi) {
            for d in &frame.d_basis {
                prop_assert!(d.dot(&xi).abs() <= 1e-10);
            }
            prop_assert!((&frame.xi - &xi).norm() <= 1e-12);
        }
    }
}

#[test]
fn alpha_is_skew_hermitian_and_extreme_levels_are_pure() {
    let mut s = SeededSampler::new(12);
    for m in 1..=4 {
        let j = ComplexStructureMatrix::standard(m).unwrap();
        let spec = kaehler_spectrum(&j).unwrap();
        let space = SpinorSpace::new(2 * m).unwrap();
        for _ in 0..20 {
            let psi = random_spinor(space, &mut s);
            let phi = random_spinor(space, &mut s);
            let lhs = inner(&alpha_apply(&j, &psi).unwrap(), &phi).unwrap();
            let rhs = inner(&psi, &alpha_apply(&j, &phi).unwrap()).unwrap();
            assert!((lhs + rhs).norm() <= 1e-12);
            for r in [0, m] {
                let level = project_sigma_r(&spec, &psi, r).unwrap();
                assert_eq!(nullity(&level).unwrap().nullity, m, "m={m} r={r}");
            }
        }
        let top = alpha_apply(&j, &psi_pure(2 * m).unwrap()).unwrap();
        assert!((top.coeffs()[0].norm() - m as f64).abs() < 1e-12);
    }
}

/// Additivity beyond a pure first factor. A chiral first factor is still additive;
/// a general first factor is only superadditive.
#[test]
fn tensor_additivity_exploration() {
    let mut s = SeededSampler::new(2024);
    let mut non_additive = Vec::new();
    for trial in 0..60 {
        let na = [4, 6, 8][trial % 3];
        let nb = 2 + trial % 5;
        let b = structured(nb, (trial % 3) as u8, &mut s);
        let nb_null = nullity(&b).unwrap().nullity;
        let chiral =
            random_chiral_spinor(SpinorSpace::new(na).unwrap(), &mut s, Chirality::Positive)
                .unwrap();
        let t = tensor_spinor(&chiral, &b).unwrap();
        assert_eq!(
            nullity(&t).unwrap().nullity,
            nullity(&chiral).unwrap().nullity + nb_null,
            "chiral first factor, na={na} nb={nb}"
        );
        let general = random_spinor(SpinorSpace::new(na).unwrap(), &mut s);
        let na_null = nullity(&general).unwrap().nullity;
        let t = tensor_spinor(&general, &b).unwrap();
        let got = nullity(&t).unwrap().nullity;
        assert!(got >= na_null + nb_null, "na={na} nb={nb}");
        if got != na_null + nb_null {
            non_additive.push((na, nb, na_null, nb_null, got));
        }
    }
    // e.g. random (n = 4) (x) random (n = 3) is pure in dimension 7
    assert!(!non_additive.is_empty());
    assert!(non_additive
        .iter()
        .all(|&(na, nb, ..)| na == 4 && nb % 2 == 1));
}
