//! Canonical spinors, seeded random samples and tensor-product constructions.

use rand::{Rng, SeedableRng};
use rand_distr::StandardNormal;
use rand_xoshiro::Xoshiro256PlusPlus;

use crate::analysis::nullity;
use crate::clifford::{chirality_project, Chirality, Spinor, SpinorSpace, C64, ONE};
use crate::error::{Result, SpinorError};

/// Name of the pinned generator, recorded in reports so golden data stays tied to it.
pub const SAMPLER_ALGORITHM: &str =
    "xoshiro256++ (seed_from_u64 via splitmix64), standard normal by ziggurat";

/// Deterministic sample stream. Identical seeds give identical streams.
#[derive(Debug, Clone)]
pub struct SeededSampler {
    seed: u64,
    rng: Xoshiro256PlusPlus,
    counter: u64,
}

impl SeededSampler {
    pub fn new(seed: u64) -> Self {
        SeededSampler {
            seed,
            rng: Xoshiro256PlusPlus::seed_from_u64(seed),
            counter: 0,
        }
    }

    /// Independent stream for the `stream`-th consumer of a master seed.
    pub fn derive(seed: u64, stream: u64) -> Self {
        SeededSampler::new(splitmix64(seed ^ splitmix64(stream)))
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Number of scalar draws taken so far.
    pub fn counter(&self) -> u64 {
        self.counter
    }

    pub fn gaussian(&mut self) -> f64 {
        self.counter += 1;
        self.rng.sample(StandardNormal)
    }

    /// Standard complex Gaussian: real and imaginary parts `N(0, 1/2)`.
    pub fn complex_gaussian(&mut self) -> C64 {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        C64::new(self.gaussian() * s, self.gaussian() * s)
    }

    pub fn uniform_index(&mut self, upper: usize) -> usize {
        self.counter += 1;
        self.rng.random_range(0..upper)
    }

    /// Random unit vector of `R^n`.
    pub fn unit_real_vector(&mut self, n: usize) -> Vec<f64> {
        loop {
            let v: Vec<f64> = (0..n).map(|_| self.gaussian()).collect();
            let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
            if norm > 1e-8 {
                return v.into_iter().map(|x| x / norm).collect();
            }
        }
    }
}

/// SplitMix64 finalizer.
pub fn splitmix64(x: u64) -> u64 {
    let mut z = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// `u_{1,...,1}`, the pure spinor of nullity `floor(n/2)`.
pub fn psi_pure(n: usize) -> Result<Spinor> {
    Spinor::basis(SpinorSpace::new(n)?, 0)
}

/// `u_{1,...,1} + u_{-1,...,-1}`, totally impure for `n` outside `{3, 4, 5}`.
pub fn psi_totally_impure(n: usize) -> Result<Spinor> {
    let space = SpinorSpace::new(n)?;
    if (3..=5).contains(&n) {
        return Err(SpinorError::NoTotallyImpure(n));
    }
    let mut coeffs = vec![C64::new(0.0, 0.0); space.dim()];
    coeffs[0] = ONE;
    coeffs[space.dim() - 1] = ONE;
    Spinor::new(space, coeffs)
}

/// Unit spinor with i.i.d. standard complex Gaussian coefficients before normalization.
pub fn random_spinor(space: SpinorSpace, sampler: &mut SeededSampler) -> Spinor {
    loop {
        let coeffs = (0..space.dim())
            .map(|_| sampler.complex_gaussian())
            .collect();
        let psi = Spinor::new(space, coeffs).expect("sampled coefficients are finite");
        if let Ok(unit) = psi.normalized() {
            return unit;
        }
    }
}

/// Unit spinor in one half-spin space (even `n` only).
pub fn random_chiral_spinor(
    space: SpinorSpace,
    sampler: &mut SeededSampler,
    chirality: Chirality,
) -> Result<Spinor> {
    if !space.is_even() {
        return Err(SpinorError::Parity(format!(
            "chiral spinors need even dimension, got {}",
            space.n()
        )));
    }
    loop {
        let projected = chirality_project(&random_spinor(space, sampler), chirality)?;
        if projected.norm() >= 1e-6 {
            return projected.normalized();
        }
    }
}

/// Tensor product `psi_a (x) psi_b` in dimension `n_a + n_b`.
///
/// `psi_a` occupies the trailing tensor slots, which are the ones acted on by
/// `e_1 .. e_{n_a}` of the product space; `psi_b` occupies the leading slots.
/// So the product coefficient at index `(i_b << k_a) | i_a` is `a[i_a] * b[i_b]`.
pub fn tensor_spinor(psi_a: &Spinor, psi_b: &Spinor) -> Result<Spinor> {
    let sa = psi_a.space();
    let sb = psi_b.space();
    if !sa.is_even() {
        return Err(SpinorError::Parity(format!(
            "first tensor factor must have even dimension, got {}",
            sa.n()
        )));
    }
    let space = SpinorSpace::new(sa.n() + sb.n())?;
    debug_assert_eq!(space.k(), sa.k() + sb.k());
    let ka = sa.k();
    let mut coeffs = vec![C64::new(0.0, 0.0); space.dim()];
    for (ib, b) in psi_b.coeffs().iter().enumerate() {
        for (ia, a) in psi_a.coeffs().iter().enumerate() {
            coeffs[(ib << ka) | ia] = a * b;
        }
    }
    Spinor::new(space, coeffs)
}

/// Spinor in dimension `n` whose nullity is exactly `target`.
///
/// Built as `psi_pure(2 * target) (x) psi_totally_impure(n - 2 * target)`, with
/// the endpoints `target = 0` and `n - 2 * target <= 1` handled by the canonical
/// spinors directly. The result is checked against the kernel computation
/// before it is returned.
pub fn construct_with_nullity(n: usize, target: usize) -> Result<Spinor> {
    let space = SpinorSpace::new(n)?;
    if target > space.k() {
        return Err(SpinorError::Range(format!(
            "nullity {target} exceeds floor({n}/2) = {}",
            space.k()
        )));
    }
    let residual = n - 2 * target;
    if (3..=5).contains(&residual) {
        return Err(SpinorError::UnreachableNullity {
            n,
            nullity: target,
            residual,
        });
    }
    let psi = if residual <= 1 {
        psi_pure(n)?
    } else if target == 0 {
        psi_totally_impure(n)?
    } else {
        tensor_spinor(&psi_pure(2 * target)?, &psi_totally_impure(residual)?)?
    };
    let measured = nullity(&psi)?.nullity;
    if measured != target {
        return Err(SpinorError::InternalVerification(format!(
            "constructed spinor in dimension {n} has nullity {measured}, expected {target}"
        )));
    }
    Ok(psi)
}
