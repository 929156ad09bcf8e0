//! Isotropic kernels, nullity, purity classes and the almost-CR data of a spinor.
//!
//! For a spinor `psi` the map `C^n -> Sigma_n, Z |-> Z . psi` is assembled as a
//! `2^k x n` matrix whose `j`-th column is `e_j . psi`. Its null space is the
//! isotropic kernel `T_psi` and its dimension is the nullity `N_psi`.
//!
//! The real distribution `D = { X : X . psi = i Y . psi for some real Y }` is
//! taken as a subspace (the zero vector included). Writing a kernel vector as
//! `Z = X + iW` gives `X . psi = i (-W) . psi`, and conversely, so `D` is the
//! real span of the real and imaginary parts of `T_psi`. No nonzero real vector
//! annihilates `psi` (`X . X . psi = -|X|^2 psi`), hence `T_psi` meets its
//! conjugate trivially and `dim_R D = 2 N_psi`. The endomorphism is
//! `J X = -Y`; `Z = X + iJX` then lies in `T_psi`, and isotropy of `Z`
//! forces `|JX| = |X|` and `g(X, JX) = 0`.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::clifford::{apply_generator, apply_vector, inner, ComplexVector, Spinor, C64, I, ZERO};
use crate::error::{Result, SpinorError};

/// Numerical thresholds used by the analysis routines.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct Tolerances {
    /// Singular values below `rank * sigma_max` count as zero.
    pub rank: f64,
    /// Required ratio between the smallest kept and largest discarded singular value.
    pub min_rank_gap: f64,
    /// Relative residual allowed when solving for `J`.
    pub residual: f64,
    /// Imaginary residue allowed in quantities that must be real, relative to `|psi|^2`.
    pub imaginary: f64,
    /// Defect allowed in the multiplication check for `D^perp`.
    pub perp: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            rank: 1e-10,
            min_rank_gap: 1e3,
            residual: 1e-10,
            imaginary: 1e-12,
            perp: 1e-10,
        }
    }
}

/// Nullity of a spinor with the numerical evidence behind it.
#[derive(Debug, Clone, PartialEq)]
pub struct NullityReport {
    pub nullity: usize,
    /// Orthonormal basis of `T_psi`.
    pub kernel_basis: Vec<ComplexVector>,
    /// All `n` singular values of the kernel matrix, descending.
    pub singular_values: Vec<f64>,
    /// Smallest kept over largest discarded singular value; infinite when nothing is discarded.
    pub rank_gap: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ClassTag {
    /// `N_psi = n / 2`.
    Pure,
    /// `0 < N_psi < n / 2` with `dim D = 2 N_psi` confirmed.
    StrictlyPartiallyPure,
    /// `N_psi = 0`.
    TotallyImpure,
    /// `0 < N_psi < n / 2` where the CR data could not confirm `dim D = 2 N_psi`.
    Impure,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Classification {
    pub tag: ClassTag,
    /// `N_psi`; for pure spinors this is `n / 2`.
    pub rank: usize,
}

impl Classification {
    /// `N_psi < n / 2`, i.e. everything except the pure class.
    pub fn is_impure(&self) -> bool {
        self.tag != ClassTag::Pure
    }
}

impl std::fmt::Display for Classification {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self.tag {
            ClassTag::TotallyImpure => write!(f, "TotallyImpure"),
            tag => write!(f, "{tag:?}, rank {}", self.rank),
        }
    }
}

/// The pointwise almost-CR structure `(D, J, D^perp, xi)` carried by a spinor.
#[derive(Debug, Clone, PartialEq)]
pub struct CRFrame {
    /// Orthonormal basis of `D`.
    pub d_basis: Vec<DVector<f64>>,
    /// `J` restricted to `D`, in the `d_basis` coordinates.
    pub j_matrix: DMatrix<f64>,
    /// Orthonormal basis of the orthogonal complement of `D`.
    pub dperp_basis: Vec<DVector<f64>>,
    pub xi: DVector<f64>,
    pub nullity: usize,
    /// Largest relative least-squares residual met while solving for `J`.
    pub j_residual: f64,
    /// Smallest singular value of the real-restricted map `R^n -> Sigma_n`, relative to `|psi|`.
    pub real_sigma_min: f64,
}

impl CRFrame {
    pub fn dim_d(&self) -> usize {
        self.d_basis.len()
    }

    pub fn ambient_dim(&self) -> usize {
        self.xi.len()
    }

    /// Orthogonal projection of `x` onto `D`.
    pub fn project_d(&self, x: &DVector<f64>) -> DVector<f64> {
        self.d_basis
            .iter()
            .fold(DVector::zeros(x.len()), |acc, d| acc + d * d.dot(x))
    }

    /// `J` applied to a vector, after projecting it onto `D`.
    pub fn apply_j(&self, x: &DVector<f64>) -> DVector<f64> {
        let coords = DVector::from_iterator(self.dim_d(), self.d_basis.iter().map(|d| d.dot(x)));
        let image = &self.j_matrix * coords;
        self.d_basis
            .iter()
            .zip(image.iter())
            .fold(DVector::zeros(x.len()), |acc, (d, c)| acc + d * *c)
    }
}

/// The `2^k x n` matrix of `Z |-> Z . psi`; column `j` is `e_{j+1} . psi`.
pub fn kernel_matrix(psi: &Spinor) -> Result<DMatrix<C64>> {
    if psi.is_zero() {
        return Err(SpinorError::ZeroSpinor);
    }
    let space = psi.space();
    let mut m = DMatrix::from_element(space.dim(), space.n(), ZERO);
    for j in 1..=space.n() {
        let col = apply_generator(j, psi)?;
        m.column_mut(j - 1).copy_from_slice(col.coeffs());
    }
    Ok(m)
}

pub fn nullity(psi: &Spinor) -> Result<NullityReport> {
    nullity_with(psi, &Tolerances::default())
}

pub fn nullity_with(psi: &Spinor, tol: &Tolerances) -> Result<NullityReport> {
    let a = kernel_matrix(psi)?;
    let n = a.ncols();
    // Pad with zero rows so the SVD returns a full n x n right factor.
    let a = if a.nrows() < n {
        a.resize_vertically(n, ZERO)
    } else {
        a
    };
    let svd = a.svd(false, true);
    let v_t = svd.v_t.expect("right singular vectors requested");

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&x, &y| svd.singular_values[y].total_cmp(&svd.singular_values[x]));
    let singular_values: Vec<f64> = order.iter().map(|&i| svd.singular_values[i]).collect();

    let sigma_max = singular_values[0];
    let threshold = tol.rank * sigma_max;
    let rank = singular_values
        .iter()
        .take_while(|&&s| s >= threshold)
        .count();
    let nullity = n - rank;

    let rank_gap = if nullity == 0 || rank == 0 {
        f64::INFINITY
    } else {
        let discarded = singular_values[rank];
        if discarded == 0.0 {
            f64::INFINITY
        } else {
            singular_values[rank - 1] / discarded
        }
    };
    if rank_gap < tol.min_rank_gap {
        return Err(SpinorError::IllConditionedRank {
            gap: rank_gap,
            required: tol.min_rank_gap,
        });
    }

    let kernel_basis = order[rank..]
        .iter()
        .map(|&row| ComplexVector::new(v_t.row(row).iter().map(|c| c.conj()).collect()))
        .collect::<Result<Vec<_>>>()?;

    Ok(NullityReport {
        nullity,
        kernel_basis,
        singular_values,
        rank_gap,
    })
}

pub fn classify(psi: &Spinor) -> Result<Classification> {
    classify_with(psi, &Tolerances::default())
}

pub fn classify_with(psi: &Spinor, tol: &Tolerances) -> Result<Classification> {
    let report = nullity_with(psi, tol)?;
    let n = psi.space().n();
    let rank = report.nullity;
    let tag = if rank == 0 {
        ClassTag::TotallyImpure
    } else if 2 * rank == n {
        ClassTag::Pure
    } else {
        match cr_frame_from_report(psi, &report, tol) {
            Ok(frame) if frame.dim_d() == 2 * rank => ClassTag::StrictlyPartiallyPure,
            Ok(_) | Err(SpinorError::Residual { .. }) => ClassTag::Impure,
            Err(e) => return Err(e),
        }
    };
    Ok(Classification { tag, rank })
}

pub fn cr_frame(psi: &Spinor) -> Result<CRFrame> {
    cr_frame_with(psi, &Tolerances::default())
}

pub fn cr_frame_with(psi: &Spinor, tol: &Tolerances) -> Result<CRFrame> {
    let report = nullity_with(psi, tol)?;
    cr_frame_from_report(psi, &report, tol)
}

fn cr_frame_from_report(psi: &Spinor, report: &NullityReport, tol: &Tolerances) -> Result<CRFrame> {
    if report.nullity == 0 {
        return Err(SpinorError::EmptyDistribution);
    }
    let n = psi.space().n();
    let psi_norm = psi.norm();

    // D = span_R { Re Z, Im Z : Z in T_psi }
    let mut parts = DMatrix::<f64>::zeros(n, 2 * report.nullity);
    for (i, z) in report.kernel_basis.iter().enumerate() {
        for (r, c) in z.components().iter().enumerate() {
            parts[(r, 2 * i)] = c.re;
            parts[(r, 2 * i + 1)] = c.im;
        }
    }
    let svd = parts.svd(true, false);
    let u = svd.u.expect("left singular vectors requested");
    let sigma_max = svd.singular_values.max();
    let d_basis: Vec<DVector<f64>> = svd
        .singular_values
        .iter()
        .enumerate()
        .filter(|(_, &s)| s > tol.rank * sigma_max)
        .map(|(i, _)| u.column(i).into_owned())
        .collect();

    // Real least squares for Y in X . psi = i Y . psi:
    // [Re A; Im A] y = [Im(Ax); -Re(Ax)]
    let a = kernel_matrix(psi)?;
    let rows = a.nrows();
    let mut real_a = DMatrix::<f64>::zeros(2 * rows, n);
    for r in 0..rows {
        for c in 0..n {
            real_a[(r, c)] = a[(r, c)].re;
            real_a[(rows + r, c)] = a[(r, c)].im;
        }
    }
    let real_svd = real_a.svd(true, true);
    let real_sigma_min = real_svd.singular_values.min() / psi_norm;

    let project = |x: &DVector<f64>| {
        d_basis
            .iter()
            .fold(DVector::zeros(n), |acc: DVector<f64>, d| acc + d * d.dot(x))
    };

    let dim_d = d_basis.len();
    let mut j_matrix = DMatrix::<f64>::zeros(dim_d, dim_d);
    let mut j_residual = 0.0f64;
    for (col, x) in d_basis.iter().enumerate() {
        let xc = x.map(|v| C64::new(v, 0.0));
        let ax = &a * &xc;
        let mut rhs = DVector::<f64>::zeros(2 * rows);
        for r in 0..rows {
            rhs[r] = ax[r].im;
            rhs[rows + r] = -ax[r].re;
        }
        let y = real_svd
            .solve(&rhs, 0.0)
            .map_err(|e| SpinorError::Residual {
                residual: f64::INFINITY,
                tolerance: tol.residual,
                context: e.to_string(),
            })?;
        let ay = &a * y.map(|v| C64::new(v, 0.0));
        let residual = (ay + ax * I).norm() / (psi_norm * x.norm());
        j_residual = j_residual.max(residual);
        if residual > tol.residual {
            return Err(SpinorError::Residual {
                residual,
                tolerance: tol.residual,
                context: format!("solving for J on basis vector {col} of D"),
            });
        }
        let jx = -y;
        let leak = (&jx - project(&jx)).norm();
        if leak > tol.residual {
            return Err(SpinorError::Residual {
                residual: leak,
                tolerance: tol.residual,
                context: format!("J maps basis vector {col} outside D"),
            });
        }
        for (row, d) in d_basis.iter().enumerate() {
            j_matrix[(row, col)] = d.dot(&jx);
        }
    }

    let dperp_basis = orthogonal_complement(&d_basis, n);
    let xi = xi_vector_with(psi, tol)?;

    Ok(CRFrame {
        d_basis,
        j_matrix,
        dperp_basis,
        xi,
        nullity: report.nullity,
        j_residual,
        real_sigma_min,
    })
}

/// Orthonormal basis of the complement of an orthonormal family in `R^n`.
fn orthogonal_complement(basis: &[DVector<f64>], n: usize) -> Vec<DVector<f64>> {
    let mut q = DMatrix::<f64>::identity(n, n);
    for d in basis {
        q -= d * d.transpose();
    }
    let eig = q.symmetric_eigen();
    let mut picked: Vec<usize> = (0..n).filter(|&i| eig.eigenvalues[i] > 0.5).collect();
    picked.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));
    picked
        .into_iter()
        .map(|i| eig.eigenvectors.column(i).into_owned())
        .collect()
}

/// The characteristic vector, `g(X, xi) = i <X . psi, psi>`.
pub fn xi_vector(psi: &Spinor) -> Result<DVector<f64>> {
    xi_vector_with(psi, &Tolerances::default())
}

pub fn xi_vector_with(psi: &Spinor, tol: &Tolerances) -> Result<DVector<f64>> {
    let n = psi.space().n();
    let scale = psi.norm_sqr();
    let mut xi = DVector::zeros(n);
    for j in 1..=n {
        let value = I * inner(&apply_generator(j, psi)?, psi)?;
        if value.im.abs() > tol.imaginary * scale {
            return Err(SpinorError::ImaginaryResidue {
                index: j,
                imag: value.im,
            });
        }
        xi[j - 1] = value.re;
    }
    Ok(xi)
}

/// Outcome of testing whether `u . psi` is partially pure for the same `(D, J)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PerpCheck {
    pub holds: bool,
    /// `max_X |(X + i JX) . u . psi|` over the `D` basis, for unit `u` and `psi`.
    pub max_defect: f64,
    /// Norm of the projection of the unit vector `u` onto `D`.
    pub d_component: f64,
}

impl PerpCheck {
    /// Whether the multiplication test and the projection test give the same verdict.
    pub fn agrees_with_projection(&self, tol: f64) -> bool {
        self.holds == (self.d_component <= tol)
    }
}

pub fn perp_multiplication_check(psi: &Spinor, u: &[f64]) -> Result<PerpCheck> {
    perp_multiplication_check_with(psi, u, &Tolerances::default())
}

pub fn perp_multiplication_check_with(
    psi: &Spinor,
    u: &[f64],
    tol: &Tolerances,
) -> Result<PerpCheck> {
    let psi = psi.normalized()?;
    let n = psi.space().n();
    if u.len() != n {
        return Err(SpinorError::Dimension(format!(
            "vector of length {} in dimension {n}",
            u.len()
        )));
    }
    let u = DVector::from_column_slice(u);
    let u_norm = u.norm();
    if u_norm == 0.0 {
        return Err(SpinorError::ZeroVector);
    }
    let u = u / u_norm;
    let frame = cr_frame_with(&psi, tol)?;
    let u_psi = apply_vector(&ComplexVector::from_real(u.as_slice()), &psi)?;
    let mut max_defect = 0.0f64;
    for x in &frame.d_basis {
        let jx = frame.apply_j(x);
        let w: Vec<C64> = x
            .iter()
            .zip(jx.iter())
            .map(|(&a, &b)| C64::new(a, b))
            .collect();
        let defect = apply_vector(&ComplexVector::new(w)?, &u_psi)?.norm();
        max_defect = max_defect.max(defect);
    }
    Ok(PerpCheck {
        holds: max_defect <= tol.perp,
        max_defect,
        d_component: frame.project_d(&u).norm(),
    })
}
