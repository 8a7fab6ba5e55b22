use super::{irreducible_upper_triangular, partition3_projections, SimilarityResult};
use crate::error::{Error, Result};
use crate::numkernel::{
    c, compress, embed, hermitian_eig, hermitian_part, identity, inverse, op_norm, validate_square,
    CMatrix, Projection, Tolerances, C,
};
use crate::oracle;
use crate::staralg::{commutant, is_abelian, is_irreducible, CommutantBasis};

#[derive(Debug, Clone)]
pub enum AbelianOutcome {
    Similar(SimilarityResult),
    NotApplicable(String),
}

/// Minimal projections of an abelian *-algebra given by a basis, read off
/// from the spectral projections of a fixed generic Hermitian element.
fn minimal_projections(
    alg: &CommutantBasis,
    n: usize,
    tol: &Tolerances,
) -> Result<Vec<Projection>> {
    let mut h = CMatrix::zeros(n, n);
    for (k, b) in alg.basis.iter().enumerate() {
        let w1 = ((2 * k + 2) as f64).sqrt();
        let w2 = ((2 * k + 3) as f64).sqrt() / 3.0;
        h += hermitian_part(b) * c(w1);
        h += hermitian_part(&(b * C::new(0.0, -1.0))) * c(w2);
    }
    let sp = hermitian_eig(&hermitian_part(&h), tol)?;
    if sp.len() != alg.dim {
        return Err(Error::CertificationFailed(format!(
            "{} minimal projections for an algebra of dimension {}",
            sp.len(),
            alg.dim
        )));
    }
    let mut ps = sp.projections().to_vec();
    // Larger ranks first; ties keep the eigenvalue order.
    ps.sort_by_key(|p| std::cmp::Reverse(p.rank()));
    Ok(ps)
}

/// Similarity to an irreducible operator for `T` whose commutant is abelian.
pub fn abelian_commutant_pipeline(t: &CMatrix, tol: &Tolerances) -> Result<AbelianOutcome> {
    validate_square(t)?;
    let n = t.nrows();
    let comm = commutant(n, std::slice::from_ref(t), false, tol)?;
    if !is_abelian(&comm, tol) {
        return Ok(AbelianOutcome::NotApplicable(format!(
            "commutant of dimension {} is not abelian",
            comm.dim
        )));
    }
    if is_irreducible(t, tol)?.is_irreducible() {
        return SimilarityResult::identity(t, tol).map(AbelianOutcome::Similar);
    }
    let alg = commutant(n, std::slice::from_ref(t), true, tol)?;
    let mins = minimal_projections(&alg, n, tol)?;
    let big = &mins[0];
    if 2 * big.rank() >= n {
        let p = big;
        let r = p.rank();
        let lambda = op_norm(t) + 1.0;
        let qb = p.complement().basis();
        let pb = p.basis();
        let v = &qb * pb.columns(0, n - r).adjoint();
        let corner = t * p.matrix() + p.matrix() * c(lambda);
        let t_prime = &corner + &v;
        let cert = oracle::certify(&t_prime, tol, oracle::default_max_len(n))?;
        if !cert.is_irreducible() {
            return Err(Error::CertificationFailed(format!(
                "TP + V + λP has commutant dimension {}",
                cert.commutant_dim
            )));
        }
        let ci = inverse(&compress(&corner, &pb))
            .ok_or_else(|| Error::CertificationFailed("corner block is singular".into()))?;
        let x0 = identity(n) + &v * embed(&ci, &pb);
        let x0_inv = identity(n) * c(2.0) - &x0;
        return SimilarityResult::certify(t, x0, x0_inv, tol).map(AbelianOutcome::Similar);
    }
    let part = partition3_projections(&mins, tol)?;
    let model = irreducible_upper_triangular(&part, tol)?;
    SimilarityResult::certify(t, model.x, model.x_inv, tol).map(AbelianOutcome::Similar)
}

/// `T' = TP + V + λP` for the first branch, exposed for inspection.
pub fn branch_one_operator(t: &CMatrix, p: &Projection) -> CMatrix {
    let n = t.nrows();
    let r = p.rank();
    let lambda = op_norm(t) + 1.0;
    let v = p.complement().basis() * p.basis().columns(0, n - r).adjoint();
    t * p.matrix() + p.matrix() * c(lambda) + v
}
