use crate::error::{Error, Result};
use crate::numkernel::{c, fro, identity, Projection, SpectralDecomposition, Tolerances, C};

/// Three orthogonal projections summing to `I`, each of rank at most `n/2`,
/// with distinct scalars attached.
#[derive(Debug, Clone)]
pub struct Partition3 {
    pub p: [Projection; 3],
    pub alphas: [C; 3],
}

impl Partition3 {
    pub fn new(p: [Projection; 3], alphas: [C; 3], tol: &Tolerances) -> Result<Self> {
        let n = p[0].dim();
        if p.iter().any(|q| q.dim() != n) {
            return Err(Error::PartitionInvalid("dimension mismatch".into()));
        }
        for (i, q) in p.iter().enumerate() {
            if q.is_zero() {
                return Err(Error::PartitionInvalid(format!("part {} is zero", i + 1)));
            }
            if 2 * q.rank() > n {
                return Err(Error::PartitionInvalid(format!(
                    "part {} has rank {} > n/2",
                    i + 1,
                    q.rank()
                )));
            }
        }
        for i in 0..3 {
            for j in (i + 1)..3 {
                let r = fro(&(p[i].matrix() * p[j].matrix()));
                if r > tol.cert_tol {
                    return Err(Error::PartitionInvalid(format!(
                        "parts {} and {} overlap ({r:.3e})",
                        i + 1,
                        j + 1
                    )));
                }
                if (alphas[i] - alphas[j]).norm() < tol.gap_min {
                    return Err(Error::PartitionInvalid("scalars are not distinct".into()));
                }
            }
        }
        let sum = p[0].matrix() + p[1].matrix() + p[2].matrix();
        let r = fro(&(sum - identity(n)));
        if r > tol.cert_tol * (1.0 + (n as f64).sqrt()) {
            return Err(Error::PartitionInvalid(format!(
                "parts do not sum to the identity ({r:.3e})"
            )));
        }
        Ok(Self { p, alphas })
    }

    pub fn dim(&self) -> usize {
        self.p[0].dim()
    }

    /// `Σ α_j P_j`.
    pub fn operator(&self) -> crate::numkernel::CMatrix {
        let mut s = self.p[0].matrix() * self.alphas[0];
        s += self.p[1].matrix() * self.alphas[1];
        s += self.p[2].matrix() * self.alphas[2];
        s
    }
}

/// Groups an ordered list of orthogonal projections (summing to `I`, each of
/// rank at most `n/2`, at least three of them) into three parts.
pub fn partition3_projections(projs: &[Projection], tol: &Tolerances) -> Result<Partition3> {
    if projs.len() < 3 {
        return Err(Error::HypothesisViolated(format!(
            "{} minimal projections, at least 3 required",
            projs.len()
        )));
    }
    let n = projs[0].dim();
    if let Some(i) = projs.iter().position(|p| 2 * p.rank() > n) {
        return Err(Error::HypothesisViolated(format!(
            "projection {i} has rank {} > n/2",
            projs[i].rank()
        )));
    }
    let groups: [Vec<usize>; 3] = if let Some(h) = projs.iter().position(|p| 2 * p.rank() == n) {
        let rest: Vec<usize> = (0..projs.len()).filter(|&i| i != h).collect();
        [vec![h], vec![rest[0]], rest[1..].to_vec()]
    } else {
        let mut acc = 0;
        let mut k = 0;
        while 2 * (acc + projs[k].rank()) <= n {
            acc += projs[k].rank();
            k += 1;
        }
        [(0..k).collect(), vec![k], ((k + 1)..projs.len()).collect()]
    };
    let part = |g: &Vec<usize>| Projection::orthogonal_sum(n, g.iter().map(|&i| &projs[i]));
    Partition3::new(
        [part(&groups[0]), part(&groups[1]), part(&groups[2])],
        [c(1.0), c(2.0), c(3.0)],
        tol,
    )
}

/// Three-part partition of the eigenprojections of a normal matrix.
pub fn partition3(spec: &SpectralDecomposition, tol: &Tolerances) -> Result<Partition3> {
    let n = spec.dim();
    for (v, &m) in spec.values().iter().zip(spec.mults()) {
        if 2 * m > n {
            return Err(Error::HypothesisViolated(format!(
                "eigenvalue {v} has multiplicity {m} > n/2"
            )));
        }
    }
    if spec.len() < 3 {
        return Err(Error::HypothesisViolated(format!(
            "{} distinct eigenvalues, at least 3 required",
            spec.len()
        )));
    }
    partition3_projections(spec.projections(), tol)
}
