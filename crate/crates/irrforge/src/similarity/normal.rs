use serde::Serialize;

use super::{irreducible_upper_triangular, partition3, SimilarityResult};
use crate::error::{Error, Result};
use crate::numkernel::{
    c, fro, identity, normal_eig, normality_residual, numeric_rank_scaled, op_norm, schur, CMatrix,
    Tolerances, C,
};
use crate::staralg::{dependence_i_t_t2, dependence_residual};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ObstructionKind {
    EigMultiplicityTooLarge,
    QuadraticDependence,
    ScalarIn2x2,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum Witness {
    /// An eigenvalue with `rank(λI - T) < n/2`, or the scalar of a scalar 2x2.
    Eigenvalue(#[serde(with = "complex_pair")] C),
    /// `(a, b, c)` with `aI + bT + cT^2 ≈ 0`.
    Coefficients(#[serde(with = "complex_triple")] [C; 3]),
}

/// Machine-readable reason why an operator is not similar to an irreducible one.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Obstruction {
    pub kind: ObstructionKind,
    pub witness: Witness,
}

impl Obstruction {
    /// Re-verifies the witness against `t`.
    pub fn verify(&self, t: &CMatrix, tol: &Tolerances) -> bool {
        let n = t.nrows();
        let scale = 1.0 + op_norm(t);
        match (self.kind, self.witness) {
            (ObstructionKind::ScalarIn2x2, Witness::Eigenvalue(l)) => {
                n == 2 && fro(&(t - identity(n) * l)) <= tol.cert_tol * scale
            }
            (ObstructionKind::EigMultiplicityTooLarge, Witness::Eigenvalue(l)) => {
                2 * numeric_rank_scaled(&(identity(n) * l - t), op_norm(t), tol) < n
            }
            (ObstructionKind::QuadraticDependence, Witness::Coefficients(co)) => {
                let nt = fro(t);
                dependence_residual(t, &co) <= tol.cert_tol * (1.0 + nt * nt)
            }
            _ => false,
        }
    }
}

#[derive(Debug, Clone)]
pub enum NormalOutcome {
    Similar(SimilarityResult),
    Obstructed(Obstruction),
}

/// Decides whether a normal matrix is similar to an irreducible one and
/// builds the similarity or the obstruction.
pub fn similar_to_irreducible_normal(nm: &CMatrix, tol: &Tolerances) -> Result<NormalOutcome> {
    crate::numkernel::validate_square(nm)?;
    let n = nm.nrows();
    let scale = op_norm(nm);
    let res = normality_residual(nm);
    if res > tol.cert_tol * (1.0 + scale) * (1.0 + scale) {
        return Err(Error::NotNormal(res));
    }
    if n == 1 {
        return Ok(NormalOutcome::Similar(SimilarityResult::identity(nm, tol)?));
    }
    let sp = normal_eig(nm, tol)?;
    if n == 2 {
        if sp.len() == 1 {
            return Ok(NormalOutcome::Obstructed(Obstruction {
                kind: ObstructionKind::ScalarIn2x2,
                witness: Witness::Eigenvalue(sp.values()[0]),
            }));
        }
        return two_by_two(nm, tol).map(NormalOutcome::Similar);
    }
    for (&l, &m) in sp.values().iter().zip(sp.mults()) {
        if 2 * m > n {
            return Ok(NormalOutcome::Obstructed(Obstruction {
                kind: ObstructionKind::EigMultiplicityTooLarge,
                witness: Witness::Eigenvalue(l),
            }));
        }
    }
    if let Some(co) = dependence_i_t_t2(nm, tol)? {
        return Ok(NormalOutcome::Obstructed(Obstruction {
            kind: ObstructionKind::QuadraticDependence,
            witness: Witness::Coefficients(co),
        }));
    }
    if sp.len() < 3 {
        return Err(Error::CertificationFailed(
            "two eigenvalue clusters but {I, N, N^2} numerically independent".into(),
        ));
    }
    let part = partition3(&sp, tol)?;
    let model = irreducible_upper_triangular(&part, tol)?;
    SimilarityResult::certify(nm, model.x, model.x_inv, tol).map(NormalOutcome::Similar)
}

/// `X = (I + E12/(μ2 - μ1)) Q*` takes `Q diag(μ1, μ2) Q*` to `[[μ1, 1], [0, μ2]]`.
pub(crate) fn two_by_two(t: &CMatrix, tol: &Tolerances) -> Result<SimilarityResult> {
    let (q, r) = schur::schur(t);
    let (m1, m2) = (r[(0, 0)], r[(1, 1)]);
    let mut z = identity(2);
    z[(0, 1)] = c(1.0) / (m2 - m1);
    let mut zi = identity(2);
    zi[(0, 1)] = -z[(0, 1)];
    // Remove any residual upper corner of the Schur form first.
    let mut w = identity(2);
    w[(0, 1)] = -r[(0, 1)] / (m2 - m1);
    let mut wi = identity(2);
    wi[(0, 1)] = -w[(0, 1)];
    let x = &z * &w * q.adjoint();
    let x_inv = &q * &wi * &zi;
    SimilarityResult::certify(t, x, x_inv, tol)
}

pub(crate) mod complex_pair {
    use super::C;
    use serde::Serializer;

    pub fn serialize<S: Serializer>(z: &C, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq([z.re, z.im])
    }
}

pub(crate) mod complex_triple {
    use super::C;
    use serde::Serializer;

    pub fn serialize<S: Serializer>(z: &[C; 3], s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(z.iter().map(|x| [x.re, x.im]))
    }
}
