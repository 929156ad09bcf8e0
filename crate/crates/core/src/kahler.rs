//! Clifford action of a Kaehler form and the eigenspace splitting it induces.
//!
//! For an orthogonal complex structure `J` on `R^{2m}` the 2-form acts on
//! spinors by `alpha . psi = -1/2 sum_{j=1}^{2m} e_j . (J e_j) . psi`, the sum
//! running over the whole orthonormal frame. The operator is skew-Hermitian
//! with eigenvalues `i (m - 2r)`, `r = 0..m`, each of multiplicity
//! `binomial(m, r)`. For the standard structure it is diagonal in the `u_eps`
//! basis and `r` counts the `+1` signs, so `u_{1,...,1}` sits at `r = m`.
//!
//! Vectors `Z = X - iJX` raise the level by one and their conjugates lower it.

use nalgebra::{DMatrix, DVector};

use crate::clifford::{
    apply_generator, apply_real_vector, apply_vector, inner, ComplexVector, DenseOperator,
    OperatorBasis, Spinor, SpinorSpace, C64, ZERO,
};
use crate::error::{Result, SpinorError};

/// Eigenvalue match tolerance against the lattice `i (m - 2r)`.
pub const SPECTRUM_TOLERANCE: f64 = 1e-9;

/// Relative weight outside a single level beyond which a spinor is not treated as an eigenspinor.
pub const LEVEL_LEAKAGE_TOLERANCE: f64 = 1e-8;

/// An orthogonal complex structure on `R^{2m}`.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexStructureMatrix {
    m: usize,
    matrix: DMatrix<f64>,
}

impl ComplexStructureMatrix {
    /// `J e_{2a-1} = e_{2a}`, `J e_{2a} = -e_{2a-1}`.
    pub fn standard(m: usize) -> Result<Self> {
        if m == 0 {
            return Err(SpinorError::Dimension(
                "complex dimension must be at least 1".into(),
            ));
        }
        let mut matrix = DMatrix::zeros(2 * m, 2 * m);
        for a in 0..m {
            matrix[(2 * a + 1, 2 * a)] = 1.0;
            matrix[(2 * a, 2 * a + 1)] = -1.0;
        }
        Ok(ComplexStructureMatrix { m, matrix })
    }

    /// Validates `J^2 = -Id` and `J^T J = Id`.
    pub fn new(matrix: DMatrix<f64>) -> Result<Self> {
        let n = matrix.nrows();
        if n == 0 || n != matrix.ncols() || !n.is_multiple_of(2) {
            return Err(SpinorError::InvalidComplexStructure(format!(
                "need a square matrix of even size, got {}x{}",
                matrix.nrows(),
                matrix.ncols()
            )));
        }
        let id = DMatrix::<f64>::identity(n, n);
        let square = (&matrix * &matrix + &id).norm();
        let orth = (matrix.transpose() * &matrix - &id).norm();
        if square > 1e-12 || orth > 1e-12 {
            return Err(SpinorError::InvalidComplexStructure(format!(
                "|J^2 + Id| = {square:.3e}, |J^T J - Id| = {orth:.3e}"
            )));
        }
        Ok(ComplexStructureMatrix { m: n / 2, matrix })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        (&self.matrix * DVector::from_column_slice(x))
            .iter()
            .copied()
            .collect()
    }

    fn check_space(&self, space: SpinorSpace) -> Result<()> {
        if !space.is_even() {
            return Err(SpinorError::Parity(format!(
                "Kaehler form needs even dimension, got {}",
                space.n()
            )));
        }
        if space.n() != 2 * self.m {
            return Err(SpinorError::Dimension(format!(
                "complex structure on R^{} acting on spinors of dimension {}",
                2 * self.m,
                space.n()
            )));
        }
        Ok(())
    }
}

/// `alpha . psi = -1/2 sum_j e_j . (J e_j) . psi`.
pub fn alpha_apply(j: &ComplexStructureMatrix, psi: &Spinor) -> Result<Spinor> {
    let space = psi.space();
    j.check_space(space)?;
    let mut acc = Spinor::zeros(space);
    for col in 0..space.n() {
        let je = j.matrix.column(col);
        let inner_step = apply_real_vector(je.as_slice(), psi)?;
        let term = apply_generator(col + 1, &inner_step)?;
        acc = acc.add_scaled(C64::new(-0.5, 0.0), &term)?;
    }
    Ok(acc)
}

/// The `alpha` action as an explicit matrix in the `u_eps` basis.
pub fn alpha_operator(j: &ComplexStructureMatrix) -> Result<DenseOperator> {
    let space = SpinorSpace::new(2 * j.m)?;
    let dim = space.dim();
    let mut matrix = DMatrix::from_element(dim, dim, ZERO);
    for idx in 0..dim {
        let col = alpha_apply(j, &Spinor::basis(space, idx)?)?;
        matrix.column_mut(idx).copy_from_slice(col.coeffs());
    }
    DenseOperator::new(space, OperatorBasis::Spinor, matrix)
}

#[derive(Debug, Clone, PartialEq)]
pub struct KaehlerLevel {
    pub r: usize,
    /// `i (m - 2r)`
    pub eigenvalue: C64,
    pub multiplicity: usize,
    /// Orthonormal basis of the level.
    pub basis: Vec<Spinor>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct KaehlerSpectrum {
    m: usize,
    space: SpinorSpace,
    pub levels: Vec<KaehlerLevel>,
    /// Largest distance of a computed eigenvalue from its lattice point.
    pub max_eigenvalue_residual: f64,
    /// Largest `|alpha v - lambda v|` over the returned eigenvectors.
    pub max_eigenvector_residual: f64,
}

impl KaehlerSpectrum {
    pub fn m(&self) -> usize {
        self.m
    }

    pub fn space(&self) -> SpinorSpace {
        self.space
    }

    pub fn level(&self, r: usize) -> Option<&KaehlerLevel> {
        self.levels.iter().find(|l| l.r == r)
    }
}

pub fn binomial(n: usize, r: usize) -> usize {
    if r > n {
        return 0;
    }
    (0..r).fold(1usize, |acc, i| acc * (n - i) / (i + 1))
}

/// Dense eigendecomposition of `alpha`, matched against `i (m - 2r)`.
pub fn kaehler_spectrum(j: &ComplexStructureMatrix) -> Result<KaehlerSpectrum> {
    let m = j.m;
    let alpha = alpha_operator(j)?;
    let space = alpha.space();
    // i * alpha is Hermitian with eigenvalues 2r - m
    let hermitian = alpha.matrix() * C64::new(0.0, 1.0);
    let eig = hermitian.clone().symmetric_eigen();

    let mut buckets: Vec<Vec<Spinor>> = vec![Vec::new(); m + 1];
    let mut max_eigenvalue_residual = 0.0f64;
    let mut max_eigenvector_residual = 0.0f64;
    for (idx, &lambda) in eig.eigenvalues.iter().enumerate() {
        let r_est = (lambda + m as f64) / 2.0;
        let r = r_est.round();
        let residual = (lambda - (2.0 * r - m as f64)).abs();
        if residual > SPECTRUM_TOLERANCE || r < 0.0 || r > m as f64 {
            return Err(SpinorError::SpectrumMismatch(format!(
                "eigenvalue {lambda:.12} of i*alpha is off the lattice 2r - {m}"
            )));
        }
        max_eigenvalue_residual = max_eigenvalue_residual.max(residual);
        let v = eig.eigenvectors.column(idx).into_owned();
        let target = C64::new(0.0, m as f64 - 2.0 * r);
        let alpha_v = alpha.matrix() * &v;
        max_eigenvector_residual = max_eigenvector_residual.max((alpha_v - &v * target).norm());
        buckets[r as usize].push(Spinor::new(space, v.iter().copied().collect())?);
    }

    let mut levels = Vec::with_capacity(m + 1);
    for (r, basis) in buckets.into_iter().enumerate() {
        let expected = binomial(m, r);
        if basis.len() != expected {
            return Err(SpinorError::SpectrumMismatch(format!(
                "level r = {r} has multiplicity {}, expected {expected}",
                basis.len()
            )));
        }
        levels.push(KaehlerLevel {
            r,
            eigenvalue: C64::new(0.0, m as f64 - 2.0 * r as f64),
            multiplicity: basis.len(),
            basis,
        });
    }
    Ok(KaehlerSpectrum {
        m,
        space,
        levels,
        max_eigenvalue_residual,
        max_eigenvector_residual,
    })
}

/// Orthogonal projection of `psi` onto the level `r`.
pub fn project_sigma_r(spectrum: &KaehlerSpectrum, psi: &Spinor, r: usize) -> Result<Spinor> {
    let level = spectrum
        .level(r)
        .ok_or_else(|| SpinorError::Range(format!("level {r} out of range 0..={}", spectrum.m)))?;
    if psi.space() != spectrum.space {
        return Err(SpinorError::Dimension(
            "spinor and spectrum spaces differ".into(),
        ));
    }
    level
        .basis
        .iter()
        .try_fold(Spinor::zeros(spectrum.space), |acc, b| {
            acc.add_scaled(inner(psi, b)?, b)
        })
}

/// The level holding `psi`, with the relative weight found outside it.
pub fn level_of(spectrum: &KaehlerSpectrum, psi: &Spinor) -> Result<(usize, f64)> {
    let norm = psi.norm();
    if norm == 0.0 {
        return Err(SpinorError::ZeroSpinor);
    }
    let mut best = (0usize, f64::NEG_INFINITY);
    for level in &spectrum.levels {
        let weight = project_sigma_r(spectrum, psi, level.r)?.norm();
        if weight > best.1 {
            best = (level.r, weight);
        }
    }
    let outside = psi.sub(&project_sigma_r(spectrum, psi, best.0)?)?.norm() / norm;
    Ok((best.0, outside))
}

/// Direction of a ladder move.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Ladder {
    /// Multiplication by `X - iJX`, expected to land in level `r + 1`.
    Raise,
    /// Multiplication by `X + iJX`, expected to land in level `r - 1`.
    Lower,
}

/// Weight of `Z . psi_r` outside the level predicted by `ladder`.
///
/// At the end of the ladder there is no target level and the full norm of
/// `Z . psi_r` is returned, which must vanish.
pub fn ladder_defect(
    spectrum: &KaehlerSpectrum,
    j: &ComplexStructureMatrix,
    x: &[f64],
    psi_r: &Spinor,
    ladder: Ladder,
) -> Result<f64> {
    j.check_space(psi_r.space())?;
    if x.len() != 2 * j.m {
        return Err(SpinorError::Dimension(format!(
            "vector of length {} for a structure on R^{}",
            x.len(),
            2 * j.m
        )));
    }
    if x.iter().all(|&v| v == 0.0) {
        return Err(SpinorError::ZeroVector);
    }
    let (r, leakage) = level_of(spectrum, psi_r)?;
    if leakage > LEVEL_LEAKAGE_TOLERANCE {
        return Err(SpinorError::NotAnEigenspinor(leakage));
    }
    let jx = j.apply(x);
    let sign = match ladder {
        Ladder::Raise => -1.0,
        Ladder::Lower => 1.0,
    };
    let z: Vec<C64> = x
        .iter()
        .zip(&jx)
        .map(|(&a, &b)| C64::new(a, sign * b))
        .collect();
    let moved = apply_vector(&ComplexVector::new(z)?, psi_r)?;
    let target = match ladder {
        Ladder::Raise => (r < spectrum.m).then_some(r + 1),
        Ladder::Lower => r.checked_sub(1),
    };
    match target {
        Some(t) => Ok(moved.sub(&project_sigma_r(spectrum, &moved, t)?)?.norm()),
        None => Ok(moved.norm()),
    }
}

pub fn raising_defect(
    spectrum: &KaehlerSpectrum,
    j: &ComplexStructureMatrix,
    x: &[f64],
    psi_r: &Spinor,
) -> Result<f64> {
    ladder_defect(spectrum, j, x, psi_r, Ladder::Raise)
}

pub fn lowering_defect(
    spectrum: &KaehlerSpectrum,
    j: &ComplexStructureMatrix,
    x: &[f64],
    psi_r: &Spinor,
) -> Result<f64> {
    ladder_defect(spectrum, j, x, psi_r, Ladder::Lower)
}
