//! Dense complex linear-algebra kernels.
//!
//! Every decision (rank, clustering, projection validity) goes through
//! [`Tolerances`]. Vectorization is column-major throughout: entry `(i, j)`
//! of an `n x n` matrix sits at index `i + j * n`.

mod projection;
pub mod schur;
mod spectral;
mod tolerances;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};

pub use projection::{PartialIsometry, Projection};
pub use spectral::{cluster_points, hermitian_eig, normal_eig, SpectralDecomposition};
pub use tolerances::{Tolerances, TOL_PROFILE_ENV};

pub type C = Complex64;
pub type CMatrix = DMatrix<C>;
pub type CVector = DVector<C>;

pub const ZERO: C = C::new(0.0, 0.0);
pub const ONE: C = C::new(1.0, 0.0);

pub fn c(re: f64) -> C {
    C::new(re, 0.0)
}

pub fn identity(n: usize) -> CMatrix {
    CMatrix::identity(n, n)
}

pub fn zeros(n: usize) -> CMatrix {
    CMatrix::zeros(n, n)
}

pub fn diag_real(values: &[f64]) -> CMatrix {
    CMatrix::from_diagonal(&CVector::from_iterator(
        values.len(),
        values.iter().map(|&v| c(v)),
    ))
}

pub fn diag(values: &[C]) -> CMatrix {
    CMatrix::from_diagonal(&CVector::from_column_slice(values))
}

/// Builds a matrix from real row-major rows.
pub fn from_real_rows(rows: &[&[f64]]) -> CMatrix {
    let n = rows.len();
    CMatrix::from_fn(n, rows.first().map_or(0, |r| r.len()), |i, j| c(rows[i][j]))
}

/// Square with finite entries and `n >= 1`.
pub fn validate_square(m: &CMatrix) -> Result<()> {
    if m.nrows() != m.ncols() {
        return Err(Error::InvalidMatrix(format!(
            "not square: {}x{}",
            m.nrows(),
            m.ncols()
        )));
    }
    if m.nrows() == 0 {
        return Err(Error::InvalidMatrix("empty matrix".into()));
    }
    if m.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::InvalidMatrix("non-finite entry".into()));
    }
    Ok(())
}

pub(crate) fn check_same_dim(n: usize, m: &CMatrix) -> Result<()> {
    if m.nrows() != n || m.ncols() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: m.nrows(),
        });
    }
    Ok(())
}

/// Frobenius norm.
pub fn fro(m: &CMatrix) -> f64 {
    m.norm()
}

/// Spectral norm (largest singular value).
pub fn op_norm(m: &CMatrix) -> f64 {
    if m.is_empty() {
        return 0.0;
    }
    m.clone()
        .singular_values()
        .iter()
        .cloned()
        .fold(0.0, f64::max)
}

pub fn commutator(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a * b - b * a
}

pub fn hermitian_part(m: &CMatrix) -> CMatrix {
    (m + m.adjoint()) * c(0.5)
}

/// `||M - M*||_F`.
pub fn hermitian_residual(m: &CMatrix) -> f64 {
    fro(&(m - m.adjoint()))
}

/// `||N*N - NN*||_F`.
pub fn normality_residual(m: &CMatrix) -> f64 {
    let a = m.adjoint();
    fro(&(&a * m - m * &a))
}

/// Distance to the nearest scalar multiple of the identity, in Frobenius norm.
pub fn scalar_residual(m: &CMatrix) -> (C, f64) {
    let n = m.nrows();
    let mu = m.trace() / c(n as f64);
    (mu, fro(&(m - identity(n) * mu)))
}

/// Singular value decomposition with singular values sorted descending.
/// `v` holds right singular vectors as columns.
pub(crate) struct Svd {
    pub u: CMatrix,
    pub s: Vec<f64>,
    pub v: CMatrix,
}

pub(crate) fn svd(m: &CMatrix) -> Svd {
    let (rows, cols) = m.shape();
    let k = rows.min(cols);
    if k == 0 {
        return Svd {
            u: CMatrix::zeros(rows, 0),
            s: Vec::new(),
            v: CMatrix::zeros(cols, 0),
        };
    }
    let fm = faer::Mat::<C>::from_fn(rows, cols, |i, j| m[(i, j)]);
    let raw = fm
        .thin_svd()
        .expect("singular value decomposition did not converge");
    let (fu, fs, fv) = (raw.U(), raw.S().column_vector(), raw.V());
    let s: Vec<f64> = (0..k).map(|i| fs[i].re).collect();
    let mut order: Vec<usize> = (0..k).collect();
    order.sort_by(|&a, &b| s[b].total_cmp(&s[a]).then(a.cmp(&b)));
    let u = CMatrix::from_fn(rows, k, |i, j| fu[(i, order[j])]);
    let v = CMatrix::from_fn(cols, k, |i, j| fv[(i, order[j])]);
    let s = order.iter().map(|&i| s[i]).collect();
    Svd { u, s, v }
}

/// Hermitian eigendecomposition with eigenvalues ascending.
pub(crate) fn eigh(h: &CMatrix) -> (Vec<f64>, CMatrix) {
    let e = nalgebra::SymmetricEigen::new(hermitian_part(h));
    let vals: Vec<f64> = e.eigenvalues.iter().cloned().collect();
    let mut order: Vec<usize> = (0..vals.len()).collect();
    order.sort_by(|&a, &b| vals[a].total_cmp(&vals[b]).then(a.cmp(&b)));
    let vecs = CMatrix::from_fn(h.nrows(), order.len(), |i, j| e.eigenvectors[(i, order[j])]);
    (order.iter().map(|&k| vals[k]).collect(), vecs)
}

fn rank_from_singular_values(s: &[f64], tol: &Tolerances) -> usize {
    let smax = s.first().copied().unwrap_or(0.0);
    if smax == 0.0 {
        return 0;
    }
    s.iter().filter(|&&x| x > tol.rank_tol * smax).count()
}

/// Number of singular values above `rank_tol * sigma_max`.
pub fn numeric_rank(m: &CMatrix, tol: &Tolerances) -> usize {
    if m.is_empty() {
        return 0;
    }
    rank_from_singular_values(&svd(m).s, tol)
}

/// Rank with singular values measured against `max(s_max, scale)`, for
/// matrices such as `λI - T` that may be pure roundoff relative to `T`.
pub fn numeric_rank_scaled(m: &CMatrix, scale: f64, tol: &Tolerances) -> usize {
    if m.is_empty() {
        return 0;
    }
    let s = svd(m).s;
    let reference = s.first().copied().unwrap_or(0.0).max(scale);
    if reference == 0.0 {
        return 0;
    }
    s.iter().filter(|&&x| x > tol.rank_tol * reference).count()
}

/// Orthogonal projection onto the numerical column space of `t`.
pub fn range_projection(t: &CMatrix, tol: &Tolerances) -> Projection {
    let n = t.nrows();
    let d = svd(t);
    let r = rank_from_singular_values(&d.s, tol);
    if r == 0 {
        return Projection::zero(n);
    }
    let ur = d.u.columns(0, r).into_owned();
    Projection::from_orthonormal_columns(&ur)
}

/// Polar decomposition `T = V H` with `H = (T*T)^{1/2}` and `V` the partial
/// isometry from `R(T*)` onto `R(T)`.
pub fn polar(t: &CMatrix, tol: &Tolerances) -> (PartialIsometry, CMatrix) {
    let n = t.nrows();
    let d = svd(t);
    let r = rank_from_singular_values(&d.s, tol);
    let sig = diag_real(&d.s);
    let h = hermitian_part(&(&d.v * sig * d.v.adjoint()));
    if r == 0 {
        let z = Projection::zero(n);
        return (PartialIsometry::from_parts(zeros(n), z.clone(), z), h);
    }
    let ur = d.u.columns(0, r).into_owned();
    let vr = d.v.columns(0, r).into_owned();
    let v = &ur * vr.adjoint();
    let initial = Projection::from_orthonormal_columns(&vr);
    let fin = Projection::from_orthonormal_columns(&ur);
    (PartialIsometry::from_parts(v, initial, fin), h)
}

/// Positive semidefinite square root of a Hermitian PSD matrix.
pub fn sqrt_psd(h: &CMatrix, tol: &Tolerances) -> Result<CMatrix> {
    let scale = fro(h);
    let res = hermitian_residual(h);
    if res > tol.cert_tol * (1.0 + scale) {
        return Err(Error::NotHermitian(res));
    }
    let (vals, vecs) = eigh(h);
    let min = vals.first().copied().unwrap_or(0.0);
    if min < -tol.cert_tol * (1.0 + scale) {
        return Err(Error::NotPsd(min));
    }
    let roots: Vec<f64> = vals.iter().map(|&x| x.max(0.0).sqrt()).collect();
    Ok(hermitian_part(
        &(&vecs * diag_real(&roots) * vecs.adjoint()),
    ))
}

/// Stacked matrix of the maps `A -> AX - XA`, one `n^2 x n^2` block per member,
/// under column-major vectorization. Its null space is the commutant of the set.
pub fn commutation_superoperator(set: &[CMatrix]) -> Result<CMatrix> {
    let Some(first) = set.first() else {
        return Err(Error::InvalidArgument(
            "commutation superoperator of an empty set has no dimension".into(),
        ));
    };
    let n = first.nrows();
    for x in set {
        validate_square(x)?;
        check_same_dim(n, x)?;
    }
    Ok(superoperator_blocks(set, n))
}

pub(crate) fn superoperator_blocks(set: &[CMatrix], n: usize) -> CMatrix {
    let n2 = n * n;
    let mut out = CMatrix::zeros(set.len() * n2, n2);
    for (b, x) in set.iter().enumerate() {
        let off = b * n2;
        for j in 0..n {
            for i in 0..n {
                let row = off + i + j * n;
                // (AX)[i,j] = sum_l A[i,l] X[l,j]
                for l in 0..n {
                    out[(row, i + l * n)] += x[(l, j)];
                }
                // (XA)[i,j] = sum_k X[i,k] A[k,j]
                for k in 0..n {
                    out[(row, k + j * n)] -= x[(i, k)];
                }
            }
        }
    }
    out
}

/// Column-major vectorization.
pub fn vec_of(m: &CMatrix) -> CVector {
    CVector::from_column_slice(m.as_slice())
}

/// Inverse of [`vec_of`] for an `n x n` matrix.
pub fn unvec(v: &CVector, n: usize) -> CMatrix {
    CMatrix::from_column_slice(n, n, v.as_slice())
}

/// Orthonormal basis for the span of the columns of `m`, built by
/// Gram-Schmidt with column pivoting (largest residual first, ties to the
/// lowest index), stopping after `r` columns.
pub fn pivoted_orthonormal_columns(m: &CMatrix, r: usize) -> CMatrix {
    let n = m.nrows();
    let mut work: Vec<CVector> = (0..m.ncols()).map(|j| m.column(j).into_owned()).collect();
    let mut basis: Vec<CVector> = Vec::with_capacity(r);
    for _ in 0..r {
        let mut best = 0;
        let mut best_norm = -1.0;
        for (j, w) in work.iter().enumerate() {
            let nr = w.norm();
            if nr > best_norm * (1.0 + 1e-12) {
                best = j;
                best_norm = nr;
            }
        }
        if best_norm <= 0.0 {
            break;
        }
        let mut v = work[best].clone() / c(best_norm);
        for q in &basis {
            let proj = q.dotc(&v);
            v -= q * proj;
        }
        let nv = v.norm();
        if nv == 0.0 {
            break;
        }
        v /= c(nv);
        for w in work.iter_mut() {
            let proj = v.dotc(w);
            *w -= &v * proj;
        }
        basis.push(v);
    }
    let mut out = CMatrix::zeros(n, basis.len());
    for (j, v) in basis.iter().enumerate() {
        out.set_column(j, v);
    }
    out
}

/// Unitary `U` with `U* P U = Q` for equal-rank projections, assembled from
/// pivoted orthonormal bases of both ranges and their complements.
pub fn unitary_linking(p: &Projection, q: &Projection) -> Result<CMatrix> {
    if p.dim() != q.dim() {
        return Err(Error::DimensionMismatch {
            expected: p.dim(),
            found: q.dim(),
        });
    }
    if p.rank() != q.rank() {
        return Err(Error::RankMismatch(p.rank(), q.rank()));
    }
    let wa = adapted_basis(p);
    let wb = adapted_basis(q);
    Ok(wa * wb.adjoint())
}

/// `[basis(P) | basis(I - P)]`, a unitary adapted to `P`.
pub fn adapted_basis(p: &Projection) -> CMatrix {
    let n = p.dim();
    let b1 = p.basis();
    let b2 = p.complement().basis();
    let mut w = CMatrix::zeros(n, n);
    w.columns_mut(0, b1.ncols()).copy_from(&b1);
    w.columns_mut(b1.ncols(), b2.ncols()).copy_from(&b2);
    w
}

/// `W c W*` for a basis `W` (n x k) and a `k x k` corner matrix `c`.
pub fn embed(corner: &CMatrix, basis: &CMatrix) -> CMatrix {
    basis * corner * basis.adjoint()
}

/// `W* m W`.
pub fn compress(m: &CMatrix, basis: &CMatrix) -> CMatrix {
    basis.adjoint() * m * basis
}

/// Inverse via LU; `None` when singular.
pub fn inverse(m: &CMatrix) -> Option<CMatrix> {
    m.clone().try_inverse()
}

/// 2-norm condition number.
pub fn condition_number(m: &CMatrix) -> f64 {
    let s = svd(m).s;
    let smin = s.last().copied().unwrap_or(0.0);
    if smin == 0.0 {
        f64::INFINITY
    } else {
        s[0] / smin
    }
}
