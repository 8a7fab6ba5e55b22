//! The *-algebra calculus on `M_n`: commutants, generation, irreducibility,
//! rank comparison of projections, the projection lattice and matrix units.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::numkernel::{
    self, c, check_same_dim, fro, hermitian_residual, identity, range_projection, svd, unvec,
    validate_square, CMatrix, CVector, Projection, Tolerances, C,
};

/// Orthonormal (trace inner product) basis of a commutant, with the
/// singular-value margin that certifies its dimension.
#[derive(Debug, Clone)]
pub struct CommutantBasis {
    pub dim: usize,
    pub basis: Vec<CMatrix>,
    /// Smallest kept singular value of the superoperator relative to the
    /// largest one; 1.0 when the superoperator vanishes identically.
    pub margin: f64,
    /// Ratio of the smallest kept to the largest dropped singular value.
    pub gap_ratio: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Verdict {
    Irreducible,
    Reducible,
}

#[derive(Debug, Clone, Serialize)]
pub struct IrreducibilityCertificate {
    pub commutant_dim: usize,
    pub margin: f64,
    /// Dimension reached by the word-algebra oracle, when it was run.
    pub word_dim: Option<usize>,
    pub verdict: Verdict,
}

impl IrreducibilityCertificate {
    pub fn is_irreducible(&self) -> bool {
        self.verdict == Verdict::Irreducible
    }
}

/// A 2x2 system of matrix units between two orthogonal equal-rank projections.
#[derive(Debug, Clone)]
pub struct MatrixUnits2 {
    pub e11: Projection,
    pub e22: Projection,
    pub e12: CMatrix,
    pub e21: CMatrix,
}

/// Murray-von Neumann comparison, which in `M_n` is comparison of ranks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum MvOrder {
    StrictlyWeaker,
    Equivalent,
    StrictlyStronger,
}

/// Minimum ratio between the smallest kept and largest dropped singular value.
pub const GAP_RATIO_MIN: f64 = 10.0;

/// Members of the superoperator stack: scalar parts removed, each normalized.
pub(crate) fn normalized_members(set: &[CMatrix], include_adjoints: bool) -> Vec<CMatrix> {
    let mut out = Vec::new();
    for x in set {
        let n = x.nrows();
        let mu = x.trace() / c(n as f64);
        let y = x - identity(n) * mu;
        let ny = fro(&y);
        let nx = fro(x);
        if ny == 0.0 || ny <= 1e-14 * nx {
            continue;
        }
        let y = y / c(ny);
        let non_hermitian = hermitian_residual(&y) > 1e-14;
        if include_adjoints && non_hermitian {
            out.push(y.adjoint());
        }
        out.push(y);
    }
    out
}

/// Commutant of `set` (and of `set*` when `include_adjoints`) in `M_n`.
pub fn commutant(
    n: usize,
    set: &[CMatrix],
    include_adjoints: bool,
    tol: &Tolerances,
) -> Result<CommutantBasis> {
    if n == 0 {
        return Err(Error::InvalidArgument("dimension must be positive".into()));
    }
    for x in set {
        validate_square(x)?;
        check_same_dim(n, x)?;
    }
    let n2 = n * n;
    let members = normalized_members(set, include_adjoints);
    if members.is_empty() {
        let basis = (0..n2)
            .map(|k| {
                let mut e = CMatrix::zeros(n, n);
                e[(k % n, k / n)] = c(1.0);
                e
            })
            .collect();
        return Ok(CommutantBasis {
            dim: n2,
            basis,
            margin: 1.0,
            gap_ratio: f64::INFINITY,
        });
    }
    let mut l = numkernel::superoperator_blocks(&members, n);
    if l.nrows() > 2 * l.ncols() {
        l = l.qr().r();
    }
    let d = svd(&l);
    let s = &d.s;
    let smax = s[0];
    let kept = s.iter().filter(|&&x| x > tol.rank_tol * smax).count();
    let dim = n2 - kept;
    let margin = s[kept - 1] / smax;
    let dropped = if kept < n2 { s[kept] } else { 0.0 };
    let gap_ratio = if dropped > 0.0 {
        s[kept - 1] / dropped
    } else {
        f64::INFINITY
    };
    if margin < tol.gap_min || gap_ratio < GAP_RATIO_MIN {
        return Err(Error::MarginTooSmall {
            margin,
            ratio: gap_ratio,
        });
    }
    let v = d.v;
    let basis = (kept..n2)
        .map(|k| unvec(&CVector::from(v.column(k)), n))
        .collect();
    Ok(CommutantBasis {
        dim,
        basis,
        margin,
        gap_ratio,
    })
}

/// Irreducibility of `T`: the commutant of `{T, T*}` is the scalars.
pub fn is_irreducible(t: &CMatrix, tol: &Tolerances) -> Result<IrreducibilityCertificate> {
    validate_square(t)?;
    let cb = commutant(t.nrows(), std::slice::from_ref(t), true, tol)?;
    Ok(certificate_from(&cb))
}

pub(crate) fn certificate_from(cb: &CommutantBasis) -> IrreducibilityCertificate {
    IrreducibilityCertificate {
        commutant_dim: cb.dim,
        margin: cb.margin,
        word_dim: None,
        verdict: if cb.dim == 1 {
            Verdict::Irreducible
        } else {
            Verdict::Reducible
        },
    }
}

/// Whether `set` generates `M_n` as a *-algebra (trivial commutant of
/// `set` together with its adjoints).
pub fn generates(n: usize, set: &[CMatrix], tol: &Tolerances) -> Result<(bool, CommutantBasis)> {
    let cb = commutant(n, set, true, tol)?;
    Ok((cb.dim == 1, cb))
}

/// Identity of the (possibly non-unital) *-algebra generated by `set`: the
/// join of the range projections of all members and their adjoints.
pub fn w0_identity(n: usize, set: &[CMatrix], tol: &Tolerances) -> Result<Projection> {
    let mut acc = CMatrix::zeros(n, n);
    for x in set {
        validate_square(x)?;
        check_same_dim(n, x)?;
        let nx = fro(x);
        if nx == 0.0 {
            continue;
        }
        let y = x / c(nx);
        acc += &y * y.adjoint() + y.adjoint() * &y;
    }
    Ok(range_projection(&acc, tol))
}

pub fn mv_compare(p: &Projection, q: &Projection) -> Result<MvOrder> {
    if p.dim() != q.dim() {
        return Err(Error::DimensionMismatch {
            expected: p.dim(),
            found: q.dim(),
        });
    }
    Ok(match p.rank().cmp(&q.rank()) {
        std::cmp::Ordering::Less => MvOrder::StrictlyWeaker,
        std::cmp::Ordering::Equal => MvOrder::Equivalent,
        std::cmp::Ordering::Greater => MvOrder::StrictlyStronger,
    })
}

/// `P ≼ Q`.
pub fn mv_weaker_or_equal(p: &Projection, q: &Projection) -> bool {
    p.rank() <= q.rank()
}

pub fn proj_join(p: &Projection, q: &Projection, tol: &Tolerances) -> Result<Projection> {
    if p.dim() != q.dim() {
        return Err(Error::DimensionMismatch {
            expected: p.dim(),
            found: q.dim(),
        });
    }
    Ok(range_projection(&(p.matrix() + q.matrix()), tol))
}

pub fn proj_meet(p: &Projection, q: &Projection, tol: &Tolerances) -> Result<Projection> {
    Ok(proj_join(&p.complement(), &q.complement(), tol)?.complement())
}

/// Matrix units with `E11 = P`, `E22 = Q` and `E12 = sum_i u_i v_i*` over the
/// deterministic bases of `ran P` and `ran Q`.
pub fn matrix_units(p: &Projection, q: &Projection, tol: &Tolerances) -> Result<MatrixUnits2> {
    if p.dim() != q.dim() {
        return Err(Error::DimensionMismatch {
            expected: p.dim(),
            found: q.dim(),
        });
    }
    if p.rank() != q.rank() || p.rank() == 0 {
        return Err(Error::RankMismatch(p.rank(), q.rank()));
    }
    let overlap = fro(&(p.matrix() * q.matrix()));
    if overlap > tol.cert_tol {
        return Err(Error::NotOrthogonal(overlap));
    }
    let e12 = p.basis() * q.basis().adjoint();
    Ok(MatrixUnits2 {
        e11: p.clone(),
        e22: q.clone(),
        e21: e12.adjoint(),
        e12,
    })
}

/// Nontrivial `(a, b, c)` with `aI + bT + cT^2 ≈ 0`, if one exists. The
/// lowest-degree relation is preferred; coefficients have unit norm and the
/// first nonzero one is real positive.
pub fn dependence_i_t_t2(t: &CMatrix, tol: &Tolerances) -> Result<Option<[C; 3]>> {
    validate_square(t)?;
    let n = t.nrows();
    let nt = fro(t);
    let cols = [identity(n), t.clone(), t * t];
    let vecs: Vec<CVector> = cols.iter().map(numkernel::vec_of).collect();
    for (k, bound) in [(2usize, 1.0 + nt), (3usize, 1.0 + nt * nt)] {
        let mut m = CMatrix::zeros(n * n, k);
        for (j, v) in vecs.iter().take(k).enumerate() {
            m.set_column(j, v);
        }
        let d = svd(&m);
        let smin = d.s[k - 1];
        if smin <= tol.cert_tol * bound {
            let mut coeffs = [C::new(0.0, 0.0); 3];
            for (j, co) in coeffs.iter_mut().enumerate().take(k) {
                *co = d.v[(j, k - 1)];
            }
            return Ok(Some(normalize_coefficients(coeffs)));
        }
    }
    Ok(None)
}

fn normalize_coefficients(mut x: [C; 3]) -> [C; 3] {
    let nrm = x.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    let big = x.iter().map(|z| z.norm()).fold(0.0, f64::max);
    if let Some(first) = x.iter().find(|z| z.norm() > 1e-12 * big).copied() {
        let phase = first.conj() / c(first.norm());
        for z in &mut x {
            *z = *z * phase / c(nrm);
        }
    }
    x
}

/// `||aI + bT + cT^2||_F`.
pub fn dependence_residual(t: &CMatrix, coeffs: &[C; 3]) -> f64 {
    let n = t.nrows();
    fro(&(identity(n) * coeffs[0] + t * coeffs[1] + t * t * coeffs[2]))
}

/// All pairwise commutators of the basis vanish.
pub fn is_abelian(b: &CommutantBasis, tol: &Tolerances) -> bool {
    for i in 0..b.basis.len() {
        for j in (i + 1)..b.basis.len() {
            let (x, y) = (&b.basis[i], &b.basis[j]);
            let bound = tol.cert_tol * (1.0 + fro(x) * fro(y));
            if fro(&numkernel::commutator(x, y)) > bound {
                return false;
            }
        }
    }
    true
}
