use serde::Serialize;

use super::normal::{complex_pair, complex_triple};
use crate::error::{Error, Result};
use crate::numkernel::{
    c, cluster_points, compress, eigh, fro, identity, inverse, numeric_rank_scaled, op_norm,
    pivoted_orthonormal_columns, polar, range_projection, schur, unitary_linking, validate_square,
    CMatrix, Projection, Tolerances, C,
};
use crate::staralg::dependence_i_t_t2;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum Reason {
    /// `rank(λI - T) < n/2`.
    Condition1 {
        #[serde(with = "complex_pair")]
        lambda: C,
    },
    /// `{I, T, T^2}` linearly dependent.
    Condition2 {
        #[serde(with = "complex_triple")]
        coeffs: [C; 3],
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum Detection {
    Detected(Reason),
    NotDetected,
}

/// Clustered eigenvalues of `t` from its Schur form.
pub(crate) fn clustered_eigenvalues(t: &CMatrix, tol: &Tolerances) -> Vec<C> {
    let (_, r) = schur::schur(t);
    let pts: Vec<C> = (0..r.nrows()).map(|i| r[(i, i)]).collect();
    cluster_points(&pts, tol.cluster_radius(op_norm(t)))
        .iter()
        .map(|g| g.iter().map(|&i| pts[i]).sum::<C>() / c(g.len() as f64))
        .collect()
}

/// Sufficient conditions for strong reducibility (`n >= 3`): an eigenvalue
/// with `rank(λI - T) < n/2`, or a quadratic relation among `I, T, T^2`.
pub fn strong_reducibility_detect(t: &CMatrix, tol: &Tolerances) -> Result<Detection> {
    validate_square(t)?;
    let n = t.nrows();
    if n < 3 {
        return Err(Error::NotApplicable(format!(
            "detection requires n >= 3, got {n}"
        )));
    }
    for l in clustered_eigenvalues(t, tol) {
        if 2 * numeric_rank_scaled(&(identity(n) * l - t), op_norm(t), tol) < n {
            return Ok(Detection::Detected(Reason::Condition1 { lambda: l }));
        }
    }
    if let Some(coeffs) = dependence_i_t_t2(t, tol)? {
        return Ok(Detection::Detected(Reason::Condition2 { coeffs }));
    }
    Ok(Detection::NotDetected)
}

fn first_axis(n: usize) -> Projection {
    Projection::diagonal(n, &[0])
}

/// Projection onto `span{V q, q : q ∈ ran Q2}`.
fn doubled(v: &CMatrix, q2: &CMatrix) -> Projection {
    let r = q2.ncols();
    let n = q2.nrows();
    let mut both = CMatrix::zeros(n, 2 * r);
    both.columns_mut(0, r).copy_from(&(v * q2));
    both.columns_mut(r, r).copy_from(q2);
    Projection::from_orthonormal_columns(&pivoted_orthonormal_columns(&both, 2 * r))
}

/// Reducing projection for `Y` mapping `I - P1` into `P1` inside
/// `M = [[λ1, Y], [0, λ2]]`-shaped operators: `Q = V Q2 V* + Q2` with `Q2` a
/// spectral projection of `|Y|` on `R(Y*)`.
fn polar_witness(y: &CMatrix, tol: &Tolerances) -> Result<Projection> {
    let n = y.nrows();
    let (v, h) = polar(y, tol);
    let init = v.initial();
    let k = init.basis();
    let hc = compress(&h, &k);
    let (vals, vecs) = eigh(&hc);
    let pts: Vec<C> = vals.iter().map(|&x| c(x)).collect();
    let groups = cluster_points(&pts, tol.cluster_radius(op_norm(&hc)));
    let low = &groups[0];
    let q2 = if groups.len() > 1 && 2 * low.len() < n {
        let sel = CMatrix::from_fn(k.ncols(), low.len(), |i, j| vecs[(i, low[j])]);
        &k * sel
    } else {
        k.columns(0, 1).into_owned()
    };
    let q = doubled(v.matrix(), &q2);
    if q.rank() == 0 || q.rank() >= n {
        return Err(Error::CertificationFailed(format!(
            "witness projection has rank {}",
            q.rank()
        )));
    }
    Ok(q)
}

/// A nontrivial projection commuting with `X T X^{-1}`, built from the
/// detection reason.
pub fn reducing_projection_witness(
    t: &CMatrix,
    x: &CMatrix,
    reason: Option<&Reason>,
    tol: &Tolerances,
) -> Result<Projection> {
    validate_square(t)?;
    let n = t.nrows();
    crate::numkernel::check_same_dim(n, x)?;
    let Some(reason) = reason else {
        return Err(Error::NotApplicable("no detection reason".into()));
    };
    let xi = inverse(x).ok_or_else(|| Error::InvalidArgument("X is singular".into()))?;
    let m = x * t * &xi;
    let scale = 1.0 + op_norm(&m);
    let q = match reason {
        Reason::Condition1 { lambda } => {
            let s = &m - identity(n) * *lambda;
            if fro(&s) <= tol.cert_tol * scale {
                first_axis(n)
            } else {
                let mut both = CMatrix::zeros(n, 2 * n);
                both.columns_mut(0, n).copy_from(&s);
                both.columns_mut(n, n).copy_from(&s.adjoint());
                range_projection(&both, tol)
            }
        }
        Reason::Condition2 { coeffs } => {
            let [a, b, cc] = *coeffs;
            let big = a.norm().max(b.norm()).max(cc.norm());
            if cc.norm() <= 1e-12 * big {
                // Linear relation: T is scalar.
                first_axis(n)
            } else {
                let disc = (b * b - a * cc * c(4.0)).sqrt();
                let l1 = (-b + disc) / (cc * c(2.0));
                let l2 = (-b - disc) / (cc * c(2.0));
                let (l1, l2) = if (l1.re, l1.im) <= (l2.re, l2.im) {
                    (l1, l2)
                } else {
                    (l2, l1)
                };
                if (l1 - l2).norm() <= tol.cluster_radius(op_norm(&m)) {
                    let l = (l1 + l2) / c(2.0);
                    let s = &m - identity(n) * l;
                    if fro(&s) <= tol.cert_tol * scale {
                        first_axis(n)
                    } else {
                        polar_witness(&s, tol)?
                    }
                } else {
                    let e = (&m - identity(n) * l2) / (l1 - l2);
                    let p1 = range_projection(&e, tol);
                    if p1.rank() == 0 || p1.rank() == n {
                        first_axis(n)
                    } else {
                        let y = p1.matrix() * &e * p1.complement().matrix();
                        if fro(&y) <= tol.cert_tol * (1.0 + fro(&e)) {
                            p1
                        } else {
                            polar_witness(&y, tol)?
                        }
                    }
                }
            }
        }
    };
    Ok(q)
}

/// Unitary `U` with `R(X T X^{-1}) = U* R(T) U`.
pub fn rank_similarity_unitary(t: &CMatrix, x: &CMatrix, tol: &Tolerances) -> Result<CMatrix> {
    validate_square(t)?;
    crate::numkernel::check_same_dim(t.nrows(), x)?;
    let xi = inverse(x).ok_or_else(|| Error::InvalidArgument("X is singular".into()))?;
    let p = range_projection(t, tol);
    let q = range_projection(&(x * t * xi), tol);
    unitary_linking(&p, &q)
}
