use super::{
    c, eigh, fro, hermitian_residual, op_norm, schur, zeros, CMatrix, Projection, Tolerances, C,
};
use crate::error::{Error, Result};

/// Distinct eigenvalues, their multiplicities and orthogonal eigenprojections.
#[derive(Debug, Clone)]
pub struct SpectralDecomposition {
    values: Vec<C>,
    mults: Vec<usize>,
    projections: Vec<Projection>,
}

impl SpectralDecomposition {
    pub(crate) fn from_parts(values: Vec<C>, projections: Vec<Projection>) -> Self {
        let mults = projections.iter().map(Projection::rank).collect();
        Self {
            values,
            mults,
            projections,
        }
    }

    pub fn values(&self) -> &[C] {
        &self.values
    }

    pub fn mults(&self) -> &[usize] {
        &self.mults
    }

    pub fn projections(&self) -> &[Projection] {
        &self.projections
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.mults.iter().sum()
    }

    /// `sum_k lambda_k P_k`.
    pub fn reconstruct(&self) -> CMatrix {
        let n = self.dim();
        let mut out = zeros(n);
        for (l, p) in self.values.iter().zip(&self.projections) {
            out += p.matrix() * *l;
        }
        out
    }
}

/// Single-linkage clustering with the given radius. Clusters are returned
/// sorted lexicographically by their mean (real part, then imaginary part);
/// members within a cluster keep ascending index order.
pub fn cluster_points(points: &[C], radius: f64) -> Vec<Vec<usize>> {
    let n = points.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], mut i: usize) -> usize {
        while p[i] != i {
            p[i] = p[p[i]];
            i = p[i];
        }
        i
    }
    for i in 0..n {
        for j in (i + 1)..n {
            if (points[i] - points[j]).norm() <= radius {
                let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                if a != b {
                    parent[a.max(b)] = a.min(b);
                }
            }
        }
    }
    let mut groups: Vec<Vec<usize>> = Vec::new();
    let mut root_slot = vec![usize::MAX; n];
    for i in 0..n {
        let r = find(&mut parent, i);
        if root_slot[r] == usize::MAX {
            root_slot[r] = groups.len();
            groups.push(Vec::new());
        }
        groups[root_slot[r]].push(i);
    }
    let mean =
        |g: &Vec<usize>| -> C { g.iter().map(|&i| points[i]).sum::<C>() / c(g.len() as f64) };
    groups.sort_by(|a, b| {
        let (ma, mb) = (mean(a), mean(b));
        ma.re.total_cmp(&mb.re).then(ma.im.total_cmp(&mb.im))
    });
    groups
}

fn cluster_means(points: &[C], groups: &[Vec<usize>]) -> Vec<C> {
    groups
        .iter()
        .map(|g| g.iter().map(|&i| points[i]).sum::<C>() / c(g.len() as f64))
        .collect()
}

fn check_separation(means: &[C], tol: &Tolerances, scale: f64) -> Result<()> {
    let min_gap = tol.gap_min * (1.0 + scale);
    for i in 0..means.len() {
        for j in (i + 1)..means.len() {
            let d = (means[i] - means[j]).norm();
            if d < min_gap {
                return Err(Error::ClusterAmbiguous(d));
            }
        }
    }
    Ok(())
}

fn projections_from_vectors(vecs: &CMatrix, groups: &[Vec<usize>]) -> Vec<Projection> {
    groups
        .iter()
        .map(|g| {
            let mut q = CMatrix::zeros(vecs.nrows(), g.len());
            for (k, &i) in g.iter().enumerate() {
                q.set_column(k, &vecs.column(i));
            }
            Projection::from_orthonormal_columns(&q)
        })
        .collect()
}

/// Clustered spectral decomposition of a Hermitian matrix.
pub fn hermitian_eig(h: &CMatrix, tol: &Tolerances) -> Result<SpectralDecomposition> {
    super::validate_square(h)?;
    let scale = op_norm(h);
    let res = hermitian_residual(h);
    if res > tol.cert_tol * scale {
        return Err(Error::NotHermitian(res));
    }
    let (vals, vecs) = eigh(h);
    let pts: Vec<C> = vals.iter().map(|&v| c(v)).collect();
    let groups = cluster_points(&pts, tol.cluster_radius(scale));
    let means: Vec<C> = cluster_means(&pts, &groups)
        .into_iter()
        .map(|m| c(m.re))
        .collect();
    check_separation(&means, tol, scale)?;
    Ok(SpectralDecomposition::from_parts(
        means,
        projections_from_vectors(&vecs, &groups),
    ))
}

/// Clustered spectral decomposition of a normal matrix via its Schur form
/// (which is diagonal for normal input).
pub fn normal_eig(nm: &CMatrix, tol: &Tolerances) -> Result<SpectralDecomposition> {
    super::validate_square(nm)?;
    let scale = op_norm(nm);
    let res = super::normality_residual(nm);
    if res > tol.cert_tol * (1.0 + scale * scale) {
        return Err(Error::NotNormal(res));
    }
    let (q, t) = schur::schur(nm);
    let pts: Vec<C> = (0..t.nrows()).map(|i| t[(i, i)]).collect();
    let groups = cluster_points(&pts, tol.cluster_radius(scale));
    let means = cluster_means(&pts, &groups);
    check_separation(&means, tol, scale)?;
    let sd = SpectralDecomposition::from_parts(means, projections_from_vectors(&q, &groups));
    debug_assert!(fro(&(sd.reconstruct() - nm)) <= 1e-6 * (1.0 + scale));
    Ok(sd)
}
