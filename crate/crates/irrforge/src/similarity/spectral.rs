use serde::Serialize;

use super::normal::two_by_two;
use super::{
    jordan_chevalley, similar_to_irreducible_normal, strong_reducibility_detect, Detection,
    NormalOutcome, Obstruction, ObstructionKind, Reason, SimilarityResult, Witness,
};
use crate::error::{Error, Result};
use crate::numkernel::{diag, op_norm, scalar_residual, validate_square, CMatrix, Tolerances};
use crate::staralg::is_irreducible;

#[derive(Debug, Clone)]
pub enum SpectralOutcome {
    Similar(SimilarityResult),
    Obstructed(Obstruction),
    /// The semisimple part fails a condition but no detector fires on the
    /// input itself.
    Inconclusive(InconclusiveReason),
}

#[derive(Debug, Clone, Serialize)]
pub struct InconclusiveReason {
    pub failed_condition: ObstructionKind,
    pub detail: String,
}

fn obstruction_from(reason: Reason) -> Obstruction {
    match reason {
        Reason::Condition1 { lambda } => Obstruction {
            kind: ObstructionKind::EigMultiplicityTooLarge,
            witness: Witness::Eigenvalue(lambda),
        },
        Reason::Condition2 { coeffs } => Obstruction {
            kind: ObstructionKind::QuadraticDependence,
            witness: Witness::Coefficients(coeffs),
        },
    }
}

/// Similarity to an irreducible operator through the semisimple part of the
/// Jordan-Chevalley decomposition.
pub fn similar_to_irreducible_spectral(t: &CMatrix, tol: &Tolerances) -> Result<SpectralOutcome> {
    validate_square(t)?;
    let n = t.nrows();
    if n == 1 {
        return Ok(SpectralOutcome::Similar(SimilarityResult::identity(
            t, tol,
        )?));
    }
    if n == 2 {
        let (mu, res) = scalar_residual(t);
        if res <= tol.cert_tol * (1.0 + op_norm(t)) {
            return Ok(SpectralOutcome::Obstructed(Obstruction {
                kind: ObstructionKind::ScalarIn2x2,
                witness: Witness::Eigenvalue(mu),
            }));
        }
        if is_irreducible(t, tol)?.is_irreducible() {
            return Ok(SpectralOutcome::Similar(SimilarityResult::identity(
                t, tol,
            )?));
        }
        // A reducible nonscalar 2x2 is unitarily diagonal with distinct eigenvalues.
        return two_by_two(t, tol).map(SpectralOutcome::Similar);
    }
    let jc = jordan_chevalley(t, tol)?;
    let d = diag(&jc.diagonal());
    let failed = if jc.mults.iter().any(|&m| 2 * m > n) {
        Some(ObstructionKind::EigMultiplicityTooLarge)
    } else if jc.values.len() < 3 {
        Some(ObstructionKind::QuadraticDependence)
    } else {
        None
    };
    if let Some(kind) = failed {
        return Ok(match strong_reducibility_detect(t, tol)? {
            Detection::Detected(reason) => SpectralOutcome::Obstructed(obstruction_from(reason)),
            Detection::NotDetected => SpectralOutcome::Inconclusive(InconclusiveReason {
                failed_condition: kind,
                detail: format!(
                    "semisimple part has eigenvalue multiplicities {:?}; no detector fires on the input",
                    jc.mults
                ),
            }),
        });
    }
    let NormalOutcome::Similar(inner) = similar_to_irreducible_normal(&d, tol)? else {
        return Err(Error::CertificationFailed(
            "semisimple part passed both conditions but the normal pipeline obstructed".into(),
        ));
    };
    let x = &inner.x * &jc.y_inv;
    let x_inv = &jc.y * &inner.x_inv;
    SimilarityResult::certify(t, x, x_inv, tol).map(SpectralOutcome::Similar)
}
