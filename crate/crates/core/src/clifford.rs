//! The complex spinor representation of the Clifford algebra `Cl_n`.
//!
//! Spinors live in `C^(2^k)` with `k = floor(n / 2)` and are stored as
//! coefficient vectors over the tensor basis `u_eps = u_{eps_1} (x) ... (x) u_{eps_k}`.
//! Basis index `i` encodes the signs bitwise: `eps_1` is the most significant
//! bit and a sign of `+1` is a `0` bit, so `u_{+1,...,+1}` has index 0.
//!
//! Generators act matrix-free. On the tensor factors the representation is
//! built from
//!
//! ```text
//! g1 = [[i, 0], [0, -i]]   g2 = [[0, i], [i, 0]]   T = [[0, -i], [i, 0]]
//! ```
//!
//! with `e_{2a-1} = Id (x) .. (x) g1 (x) T (x) .. (x) T` (`a - 1` trailing `T`s),
//! `e_{2a}` likewise with `g2`, and for odd `n` the extra generator
//! `e_{2k+1} = i T (x) .. (x) T`. In the `u_eps` basis every generator is a
//! signed permutation: `e_{2a-1}` and `e_{2a}` flip bit `a - 1` of the index
//! and multiply by a unit phase that depends on the lower bits. The dense
//! Kronecker-product matrices are kept only as a test oracle.
//!
//! The Hermitian product is linear in the first slot and conjugate-linear in
//! the second.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Result, SpinorError};

pub type C64 = Complex64;

pub(crate) const ZERO: C64 = C64::new(0.0, 0.0);
pub(crate) const ONE: C64 = C64::new(1.0, 0.0);
pub(crate) const I: C64 = C64::new(0.0, 1.0);

/// Dimension bookkeeping for `Sigma_n = C^(2^k)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SpinorSpace {
    n: usize,
    k: usize,
    dim: usize,
}

/// Largest ambient dimension accepted. Keeps `2^k` addressable and dense
/// oracles bounded.
pub const MAX_DIMENSION: usize = 40;

impl SpinorSpace {
    pub fn new(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(SpinorError::Dimension(format!(
                "ambient dimension must be at least 2, got {n}"
            )));
        }
        if n > MAX_DIMENSION {
            return Err(SpinorError::Dimension(format!(
                "ambient dimension {n} exceeds the supported maximum {MAX_DIMENSION}"
            )));
        }
        let k = n / 2;
        Ok(SpinorSpace { n, k, dim: 1 << k })
    }

    /// Ambient dimension `n`.
    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of tensor factors, `floor(n / 2)`.
    pub fn k(&self) -> usize {
        self.k
    }

    /// Complex dimension of the spinor space, `2^k`.
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_even(&self) -> bool {
        self.n.is_multiple_of(2)
    }

    /// Maps a sign tuple `(eps_1, ..., eps_k)` to its basis index.
    pub fn eps_to_index(&self, eps: &[i8]) -> Result<usize> {
        if eps.len() != self.k {
            return Err(SpinorError::Range(format!(
                "expected {} signs, got {}",
                self.k,
                eps.len()
            )));
        }
        eps.iter().try_fold(0usize, |acc, &e| match e {
            1 => Ok(acc << 1),
            -1 => Ok((acc << 1) | 1),
            other => Err(SpinorError::Range(format!(
                "sign must be +1 or -1, got {other}"
            ))),
        })
    }

    /// Inverse of [`SpinorSpace::eps_to_index`].
    pub fn index_to_eps(&self, index: usize) -> Result<Vec<i8>> {
        if index >= self.dim {
            return Err(SpinorError::Range(format!(
                "basis index {index} out of range 0..{}",
                self.dim
            )));
        }
        Ok((0..self.k)
            .map(|slot| {
                let bit = self.k - 1 - slot;
                if index >> bit & 1 == 0 {
                    1
                } else {
                    -1
                }
            })
            .collect())
    }

    /// Matrix-free description of `e_j`, `1 <= j <= n`.
    pub fn generator(&self, j: usize) -> Result<Generator> {
        if j == 0 || j > self.n {
            return Err(SpinorError::Range(format!(
                "generator index {j} out of range 1..={}",
                self.n
            )));
        }
        if j == 2 * self.k + 1 {
            // i (-1)^k prod(eps) on the diagonal
            let phase = if self.k.is_multiple_of(2) { I } else { -I };
            return Ok(Generator {
                flip: 0,
                sign_mask: self.dim - 1,
                phase,
            });
        }
        let a = j.div_ceil(2);
        let base = if (a - 1).is_multiple_of(2) { ONE } else { -ONE };
        let flip = 1usize << (a - 1);
        if j % 2 == 1 {
            Ok(Generator {
                flip,
                sign_mask: flip - 1,
                phase: I * base,
            })
        } else {
            Ok(Generator {
                flip,
                sign_mask: (flip << 1) - 1,
                phase: base,
            })
        }
    }

    /// Phase `c(n)` of the complex volume element `c(n) e_1 ... e_n`.
    ///
    /// Even `n = 2k`: `i^k`. Odd `n = 2k + 1`: `-i^(k+1)`, which makes the
    /// element act as `+Id` in this representation.
    pub fn volume_phase(&self) -> C64 {
        let ipow = |p: usize| match p % 4 {
            0 => ONE,
            1 => I,
            2 => -ONE,
            _ => -I,
        };
        if self.is_even() {
            ipow(self.k)
        } else {
            -ipow(self.k + 1)
        }
    }
}

/// A generator `e_j` in the `u_eps` basis: `e_j u_i = phase * (-1)^popcount(i & sign_mask) u_{i ^ flip}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Generator {
    flip: usize,
    sign_mask: usize,
    phase: C64,
}

impl Generator {
    #[inline]
    fn factor(&self, index: usize) -> C64 {
        if (index & self.sign_mask).count_ones().is_multiple_of(2) {
            self.phase
        } else {
            -self.phase
        }
    }

    /// `out += scale * e_j * input`
    pub(crate) fn apply_accumulate(&self, input: &[C64], scale: C64, out: &mut [C64]) {
        for (i, &c) in input.iter().enumerate() {
            out[i ^ self.flip] += scale * self.factor(i) * c;
        }
    }

    pub(crate) fn apply_into(&self, input: &[C64], out: &mut [C64]) {
        for (i, &c) in input.iter().enumerate() {
            out[i ^ self.flip] = self.factor(i) * c;
        }
    }
}

/// A spinor: `2^k` complex coefficients over the `u_eps` basis.
#[derive(Debug, Clone, PartialEq)]
pub struct Spinor {
    space: SpinorSpace,
    coeffs: Vec<C64>,
}

impl Spinor {
    pub fn new(space: SpinorSpace, coeffs: Vec<C64>) -> Result<Self> {
        if coeffs.len() != space.dim() {
            return Err(SpinorError::Dimension(format!(
                "spinor in dimension {} needs {} coefficients, got {}",
                space.n(),
                space.dim(),
                coeffs.len()
            )));
        }
        if let Some(i) = coeffs
            .iter()
            .position(|c| !c.re.is_finite() || !c.im.is_finite())
        {
            return Err(SpinorError::Parse(format!("coefficient {i} is not finite")));
        }
        Ok(Spinor { space, coeffs })
    }

    pub fn zeros(space: SpinorSpace) -> Self {
        Spinor {
            space,
            coeffs: vec![ZERO; space.dim()],
        }
    }

    /// The basis spinor `u_eps` with index `index`.
    pub fn basis(space: SpinorSpace, index: usize) -> Result<Self> {
        if index >= space.dim() {
            return Err(SpinorError::Range(format!(
                "basis index {index} out of range 0..{}",
                space.dim()
            )));
        }
        let mut s = Spinor::zeros(space);
        s.coeffs[index] = ONE;
        Ok(s)
    }

    pub fn space(&self) -> SpinorSpace {
        self.space
    }

    pub fn coeffs(&self) -> &[C64] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<C64> {
        self.coeffs
    }

    pub fn norm_sqr(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| *c == ZERO)
    }

    pub fn scale(&self, c: C64) -> Spinor {
        Spinor {
            space: self.space,
            coeffs: self.coeffs.iter().map(|x| x * c).collect(),
        }
    }

    /// Unit-norm copy. Fails on the zero spinor.
    pub fn normalized(&self) -> Result<Spinor> {
        let norm = self.norm();
        if norm == 0.0 {
            return Err(SpinorError::ZeroSpinor);
        }
        Ok(self.scale(C64::new(1.0 / norm, 0.0)))
    }

    /// `self + c * other`
    pub fn add_scaled(&self, c: C64, other: &Spinor) -> Result<Spinor> {
        same_space(self, other)?;
        Ok(Spinor {
            space: self.space,
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a + c * b)
                .collect(),
        })
    }

    pub fn sub(&self, other: &Spinor) -> Result<Spinor> {
        self.add_scaled(-ONE, other)
    }

    /// Euclidean distance between coefficient vectors.
    pub fn distance(&self, other: &Spinor) -> Result<f64> {
        Ok(self.sub(other)?.norm())
    }
}

fn same_space(a: &Spinor, b: &Spinor) -> Result<()> {
    if a.space != b.space {
        return Err(SpinorError::Dimension(format!(
            "spinors live in dimensions {} and {}",
            a.space.n(),
            b.space.n()
        )));
    }
    Ok(())
}

/// A vector of `C^n = R^n (x) C`, components in the standard frame `e_1..e_n`.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexVector {
    components: Vec<C64>,
}

impl ComplexVector {
    pub fn new(components: Vec<C64>) -> Result<Self> {
        if components
            .iter()
            .any(|c| !c.re.is_finite() || !c.im.is_finite())
        {
            return Err(SpinorError::Parse("vector component is not finite".into()));
        }
        Ok(ComplexVector { components })
    }

    pub fn from_real(components: &[f64]) -> Self {
        ComplexVector {
            components: components.iter().map(|&x| C64::new(x, 0.0)).collect(),
        }
    }

    /// The standard basis vector `e_j`, `1 <= j <= n`.
    pub fn unit(n: usize, j: usize) -> Self {
        let mut components = vec![ZERO; n];
        components[j - 1] = ONE;
        ComplexVector { components }
    }

    pub fn len(&self) -> usize {
        self.components.len()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    pub fn components(&self) -> &[C64] {
        &self.components
    }

    pub fn norm(&self) -> f64 {
        self.components
            .iter()
            .map(|c| c.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    pub fn real_part(&self) -> Vec<f64> {
        self.components.iter().map(|c| c.re).collect()
    }

    pub fn imag_part(&self) -> Vec<f64> {
        self.components.iter().map(|c| c.im).collect()
    }
}

/// Clifford multiplication `e_j . psi`, computed in `O(2^k)`.
pub fn apply_generator(j: usize, psi: &Spinor) -> Result<Spinor> {
    let g = psi.space.generator(j)?;
    let mut out = vec![ZERO; psi.space.dim()];
    g.apply_into(&psi.coeffs, &mut out);
    Ok(Spinor {
        space: psi.space,
        coeffs: out,
    })
}

/// Clifford multiplication by a complexified vector, `sum_j v_j e_j . psi`.
pub fn apply_vector(v: &ComplexVector, psi: &Spinor) -> Result<Spinor> {
    let space = psi.space;
    if v.len() != space.n() {
        return Err(SpinorError::Dimension(format!(
            "vector of length {} acting on spinors of dimension {}",
            v.len(),
            space.n()
        )));
    }
    let mut out = vec![ZERO; space.dim()];
    for (idx, &z) in v.components.iter().enumerate() {
        if z == ZERO {
            continue;
        }
        space
            .generator(idx + 1)?
            .apply_accumulate(&psi.coeffs, z, &mut out);
    }
    Ok(Spinor { space, coeffs: out })
}

/// Real-vector convenience wrapper around [`apply_vector`].
pub fn apply_real_vector(v: &[f64], psi: &Spinor) -> Result<Spinor> {
    apply_vector(&ComplexVector::from_real(v), psi)
}

/// Hermitian product, linear in `phi` and conjugate-linear in `psi`.
pub fn inner(phi: &Spinor, psi: &Spinor) -> Result<C64> {
    same_space(phi, psi)?;
    Ok(phi
        .coeffs
        .iter()
        .zip(&psi.coeffs)
        .map(|(a, b)| a * b.conj())
        .sum())
}

/// The complex volume element `c(n) e_1 . e_2 ... e_n` applied to `psi`.
///
/// It squares to the identity; for odd `n` it is the identity.
pub fn volume_element(psi: &Spinor) -> Spinor {
    let space = psi.space;
    let mut cur = psi.coeffs.clone();
    let mut next = vec![ZERO; space.dim()];
    for j in (1..=space.n()).rev() {
        let g = space.generator(j).expect("generator index in range");
        g.apply_into(&cur, &mut next);
        std::mem::swap(&mut cur, &mut next);
    }
    let c = space.volume_phase();
    cur.iter_mut().for_each(|x| *x *= c);
    Spinor { space, coeffs: cur }
}

/// Chirality label of a half-spin space.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Chirality {
    Positive,
    Negative,
}

impl Chirality {
    pub fn sign(self) -> f64 {
        match self {
            Chirality::Positive => 1.0,
            Chirality::Negative => -1.0,
        }
    }
}

/// Projection `(psi +/- omega . psi) / 2` onto a half-spin space (even `n`).
pub fn chirality_project(psi: &Spinor, chirality: Chirality) -> Result<Spinor> {
    if !psi.space.is_even() {
        return Err(SpinorError::Parity(format!(
            "chirality splitting needs even dimension, got {}",
            psi.space.n()
        )));
    }
    let omega = volume_element(psi);
    let s = chirality.sign();
    Ok(Spinor {
        space: psi.space,
        coeffs: psi
            .coeffs
            .iter()
            .zip(&omega.coeffs)
            .map(|(a, b)| (a + b * s) * 0.5)
            .collect(),
    })
}

/// Basis in which a [`DenseOperator`] is written.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OperatorBasis {
    /// Standard basis of `C^2 (x) ... (x) C^2`.
    Standard,
    /// The `u_eps` basis used for spinor coefficients.
    Spinor,
}

/// Explicit `2^k x 2^k` matrix. Used to cross-check the matrix-free kernels.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseOperator {
    space: SpinorSpace,
    basis: OperatorBasis,
    matrix: DMatrix<C64>,
}

impl DenseOperator {
    pub fn new(space: SpinorSpace, basis: OperatorBasis, matrix: DMatrix<C64>) -> Result<Self> {
        if matrix.nrows() != space.dim() || matrix.ncols() != space.dim() {
            return Err(SpinorError::Dimension(format!(
                "operator must be {0}x{0}, got {1}x{2}",
                space.dim(),
                matrix.nrows(),
                matrix.ncols()
            )));
        }
        Ok(DenseOperator {
            space,
            basis,
            matrix,
        })
    }

    pub fn space(&self) -> SpinorSpace {
        self.space
    }

    pub fn basis(&self) -> OperatorBasis {
        self.basis
    }

    pub fn matrix(&self) -> &DMatrix<C64> {
        &self.matrix
    }

    /// The same operator written in the `u_eps` basis, `U^H M U`.
    pub fn to_spinor_basis(&self) -> DenseOperator {
        match self.basis {
            OperatorBasis::Spinor => self.clone(),
            OperatorBasis::Standard => {
                let u = spinor_basis_matrix(self.space);
                DenseOperator {
                    space: self.space,
                    basis: OperatorBasis::Spinor,
                    matrix: u.adjoint() * &self.matrix * u,
                }
            }
        }
    }

    /// Applies the operator to the coefficient vector of `psi`.
    pub fn apply(&self, psi: &Spinor) -> Result<Spinor> {
        if psi.space != self.space {
            return Err(SpinorError::Dimension(
                "operator and spinor spaces differ".into(),
            ));
        }
        let m = match self.basis {
            OperatorBasis::Spinor => std::borrow::Cow::Borrowed(&self.matrix),
            OperatorBasis::Standard => std::borrow::Cow::Owned(self.to_spinor_basis().matrix),
        };
        let v = nalgebra::DVector::from_column_slice(&psi.coeffs);
        let out = m.as_ref() * v;
        Ok(Spinor {
            space: self.space,
            coeffs: out.iter().copied().collect(),
        })
    }

    pub fn mul(&self, other: &DenseOperator) -> Result<DenseOperator> {
        if self.space != other.space || self.basis != other.basis {
            return Err(SpinorError::Dimension(
                "operators are not composable".into(),
            ));
        }
        Ok(DenseOperator {
            space: self.space,
            basis: self.basis,
            matrix: &self.matrix * &other.matrix,
        })
    }
}

fn c2(a: [[C64; 2]; 2]) -> DMatrix<C64> {
    DMatrix::from_row_slice(2, 2, &[a[0][0], a[0][1], a[1][0], a[1][1]])
}

pub(crate) fn factor_g1() -> DMatrix<C64> {
    c2([[I, ZERO], [ZERO, -I]])
}

pub(crate) fn factor_g2() -> DMatrix<C64> {
    c2([[ZERO, I], [I, ZERO]])
}

pub(crate) fn factor_t() -> DMatrix<C64> {
    c2([[ZERO, -I], [I, ZERO]])
}

/// `kappa_n(e_j)` assembled from explicit Kronecker products, in the standard basis.
pub fn dense_generator_matrix(space: SpinorSpace, j: usize) -> Result<DenseOperator> {
    if j == 0 || j > space.n() {
        return Err(SpinorError::Range(format!(
            "generator index {j} out of range 1..={}",
            space.n()
        )));
    }
    let k = space.k();
    let id = DMatrix::<C64>::identity(2, 2);
    // factors[slot - 1], slot 1 leftmost
    let mut factors = vec![id; k];
    let mut scalar = ONE;
    if j == 2 * k + 1 {
        factors.iter_mut().for_each(|f| *f = factor_t());
        scalar = I;
    } else {
        let a = j.div_ceil(2);
        let slot = k - a + 1;
        factors[slot - 1] = if j % 2 == 1 { factor_g1() } else { factor_g2() };
        for f in factors.iter_mut().skip(slot) {
            *f = factor_t();
        }
    }
    let matrix = factors
        .iter()
        .fold(DMatrix::from_element(1, 1, scalar), |acc, f| {
            acc.kronecker(f)
        });
    DenseOperator::new(space, OperatorBasis::Standard, matrix)
}

/// Columns are the basis spinors `u_eps` written in the standard basis.
pub fn spinor_basis_matrix(space: SpinorSpace) -> DMatrix<C64> {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    // u_{+1} = (1, -i)/sqrt2, u_{-1} = (1, i)/sqrt2
    let u1 = DMatrix::from_row_slice(
        2,
        2,
        &[
            C64::new(s, 0.0),
            C64::new(s, 0.0),
            C64::new(0.0, -s),
            C64::new(0.0, s),
        ],
    );
    (0..space.k()).fold(DMatrix::from_element(1, 1, ONE), |acc, _| {
        acc.kronecker(&u1)
    })
}
