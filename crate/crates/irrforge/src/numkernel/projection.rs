use super::{
    c, eigh, fro, hermitian_part, hermitian_residual, identity, pivoted_orthonormal_columns, zeros,
    CMatrix, Tolerances, ONE,
};
use crate::error::{Error, Result};

/// Hermitian idempotent with its rank cached.
#[derive(Debug, Clone, PartialEq)]
pub struct Projection {
    matrix: CMatrix,
    rank: usize,
}

impl Projection {
    /// Validates `m` as an orthogonal projection and stores its Hermitian part.
    pub fn new(m: CMatrix, tol: &Tolerances) -> Result<Self> {
        super::validate_square(&m)?;
        let scale = 1.0 + fro(&m);
        let herm = hermitian_residual(&m);
        if herm > tol.cert_tol * scale {
            return Err(Error::NotProjection(format!(
                "not Hermitian (residual {herm:.3e})"
            )));
        }
        let idem = fro(&(&m * &m - &m));
        if idem > tol.cert_tol * scale {
            return Err(Error::NotProjection(format!(
                "not idempotent (residual {idem:.3e})"
            )));
        }
        let h = hermitian_part(&m);
        let (vals, _) = eigh(&h);
        let mut rank = 0;
        for v in vals {
            let near0 = v.abs() <= tol.cert_tol * scale;
            let near1 = (v - 1.0).abs() <= tol.cert_tol * scale;
            if !(near0 || near1) {
                return Err(Error::NotProjection(format!("eigenvalue {v:.6e}")));
            }
            if (0.75..=1.25).contains(&v) {
                rank += 1;
            }
        }
        Ok(Self { matrix: h, rank })
    }

    /// `Q Q*` for a matrix with orthonormal columns.
    pub fn from_orthonormal_columns(q: &CMatrix) -> Self {
        Self {
            matrix: hermitian_part(&(q * q.adjoint())),
            rank: q.ncols(),
        }
    }

    pub(crate) fn from_parts(matrix: CMatrix, rank: usize) -> Self {
        Self { matrix, rank }
    }

    pub fn zero(n: usize) -> Self {
        Self {
            matrix: zeros(n),
            rank: 0,
        }
    }

    pub fn identity(n: usize) -> Self {
        Self {
            matrix: identity(n),
            rank: n,
        }
    }

    /// Diagonal projection onto the listed coordinate axes.
    pub fn diagonal(n: usize, indices: &[usize]) -> Self {
        let mut m = zeros(n);
        let mut rank = 0;
        for &i in indices {
            if m[(i, i)] != ONE {
                m[(i, i)] = ONE;
                rank += 1;
            }
        }
        Self { matrix: m, rank }
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> CMatrix {
        self.matrix
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn is_zero(&self) -> bool {
        self.rank == 0
    }

    pub fn complement(&self) -> Self {
        let n = self.dim();
        Self {
            matrix: identity(n) - &self.matrix,
            rank: n - self.rank,
        }
    }

    /// Deterministic orthonormal basis of the range (`n x rank`).
    pub fn basis(&self) -> CMatrix {
        pivoted_orthonormal_columns(&self.matrix, self.rank)
    }

    /// Residuals `(||P^2 - P||, ||P - P*||)`.
    pub fn residuals(&self) -> (f64, f64) {
        (
            fro(&(&self.matrix * &self.matrix - &self.matrix)),
            hermitian_residual(&self.matrix),
        )
    }

    /// Sum of pairwise-orthogonal projections; ranks add.
    pub fn orthogonal_sum<'a>(n: usize, parts: impl IntoIterator<Item = &'a Projection>) -> Self {
        let mut m = zeros(n);
        let mut rank = 0;
        for p in parts {
            m += &p.matrix;
            rank += p.rank;
        }
        Self { matrix: m, rank }
    }

    pub fn scaled(&self, s: f64) -> CMatrix {
        &self.matrix * c(s)
    }
}

/// A partial isometry together with its initial (`V*V`) and final (`VV*`)
/// projections.
#[derive(Debug, Clone)]
pub struct PartialIsometry {
    matrix: CMatrix,
    initial: Projection,
    fin: Projection,
}

impl PartialIsometry {
    pub(crate) fn from_parts(matrix: CMatrix, initial: Projection, fin: Projection) -> Self {
        Self {
            matrix,
            initial,
            fin,
        }
    }

    /// Validates `V*V` and `VV*` as projections of equal rank.
    pub fn new(matrix: CMatrix, tol: &Tolerances) -> Result<Self> {
        let initial = Projection::new(matrix.adjoint() * &matrix, tol)?;
        let fin = Projection::new(&matrix * matrix.adjoint(), tol)?;
        if initial.rank() != fin.rank() {
            return Err(Error::RankMismatch(initial.rank(), fin.rank()));
        }
        Ok(Self {
            matrix,
            initial,
            fin,
        })
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    /// `V*V`.
    pub fn initial(&self) -> &Projection {
        &self.initial
    }

    /// `VV*`.
    pub fn final_projection(&self) -> &Projection {
        &self.fin
    }
}
