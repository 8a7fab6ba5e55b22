//! Similarity to irreducible operators: the three-projection partition, the
//! upper-triangular irreducible model, decision pipelines for normal,
//! spectral and abelian-commutant inputs, strong-reducibility detection with
//! reducing witnesses, and the Jordan-Chevalley decomposition.

mod abelian;
mod dunford;
mod model;
mod normal;
mod partition;
mod reducibility;
mod spectral;

pub use abelian::{abelian_commutant_pipeline, branch_one_operator, AbelianOutcome};
pub use dunford::{jordan_chevalley, DunfordPair};
pub use model::{irreducible_upper_triangular, UpperTriangularModel};
pub use normal::{
    similar_to_irreducible_normal, NormalOutcome, Obstruction, ObstructionKind, Witness,
};
pub use partition::{partition3, partition3_projections, Partition3};
pub use reducibility::{
    rank_similarity_unitary, reducing_projection_witness, strong_reducibility_detect, Detection,
    Reason,
};
pub use spectral::{similar_to_irreducible_spectral, InconclusiveReason, SpectralOutcome};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::numkernel::{condition_number, fro, identity, CMatrix, Tolerances};
use crate::oracle;
use crate::staralg::IrreducibilityCertificate;

/// An invertible `X` with `X * input * X^{-1}` certified irreducible.
#[derive(Debug, Clone)]
pub struct SimilarityResult {
    pub x: CMatrix,
    pub x_inv: CMatrix,
    pub conjugated: CMatrix,
    pub cond: f64,
    pub certificate: IrreducibilityCertificate,
    /// `||X X^{-1} - I||_F`.
    pub inverse_residual: f64,
}

/// Summary numbers of a [`SimilarityResult`], for reports.
#[derive(Debug, Clone, Serialize)]
pub struct SimilaritySummary {
    pub cond: f64,
    pub inverse_residual: f64,
    pub commutant_dim: usize,
    pub word_dim: Option<usize>,
    pub margin: f64,
}

impl SimilarityResult {
    /// Conjugates `input` by `x` and certifies the result with both
    /// irreducibility oracles.
    pub(crate) fn certify(
        input: &CMatrix,
        x: CMatrix,
        x_inv: CMatrix,
        tol: &Tolerances,
    ) -> Result<Self> {
        let n = input.nrows();
        let conjugated = &x * input * &x_inv;
        let certificate = oracle::certify(&conjugated, tol, oracle::default_max_len(n))?;
        if !certificate.is_irreducible() {
            return Err(Error::CertificationFailed(format!(
                "conjugate has commutant dimension {}",
                certificate.commutant_dim
            )));
        }
        let inverse_residual = fro(&(&x * &x_inv - identity(n)));
        Ok(Self {
            cond: condition_number(&x),
            x,
            x_inv,
            conjugated,
            certificate,
            inverse_residual,
        })
    }

    pub(crate) fn identity(input: &CMatrix, tol: &Tolerances) -> Result<Self> {
        let n = input.nrows();
        Self::certify(input, identity(n), identity(n), tol)
    }

    /// `||X * input * X^{-1} - conjugated||_F` recomputed from scratch.
    pub fn conjugation_residual(&self, input: &CMatrix) -> f64 {
        fro(&(&self.x * input * &self.x_inv - &self.conjugated))
    }

    pub fn summary(&self) -> SimilaritySummary {
        SimilaritySummary {
            cond: self.cond,
            inverse_residual: self.inverse_residual,
            commutant_dim: self.certificate.commutant_dim,
            word_dim: self.certificate.word_dim,
            margin: self.certificate.margin,
        }
    }
}
