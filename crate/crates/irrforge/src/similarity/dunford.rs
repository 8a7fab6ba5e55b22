use crate::error::{Error, Result};
use crate::numkernel::{
    c, cluster_points, fro, op_norm, schur, validate_square, CMatrix, Tolerances, C,
};

/// `T = S + K` with `S` diagonalizable, `K` nilpotent and `SK = KS`.
#[derive(Debug, Clone)]
pub struct DunfordPair {
    pub s: CMatrix,
    pub k: CMatrix,
    /// Distinct eigenvalues of `S` (cluster means of the spectrum of `T`).
    pub values: Vec<C>,
    pub mults: Vec<usize>,
    /// Spectral idempotents of `S`, one per value.
    pub idempotents: Vec<CMatrix>,
    /// `S = Y diag(values repeated by mults) Y^{-1}`.
    pub y: CMatrix,
    pub y_inv: CMatrix,
}

/// Relative residuals of a decomposition of `t`.
#[derive(Debug, Clone, Copy, serde::Serialize)]
pub struct DunfordResiduals {
    pub reassembly: f64,
    pub commutation: f64,
    pub nilpotency: f64,
    pub idempotency: f64,
}

impl DunfordPair {
    /// Diagonal of `Y^{-1} S Y`.
    pub fn diagonal(&self) -> Vec<C> {
        self.values
            .iter()
            .zip(&self.mults)
            .flat_map(|(&v, &m)| std::iter::repeat_n(v, m))
            .collect()
    }

    pub fn residuals(&self, t: &CMatrix) -> DunfordResiduals {
        let scale = 1.0 + op_norm(t);
        let m = self.mults.iter().copied().max().unwrap_or(1);
        let mut kp = self.k.clone();
        for _ in 1..m {
            kp = &kp * &self.k;
        }
        let idempotency = self
            .idempotents
            .iter()
            .map(|p| fro(&(p * p - p)) / (1.0 + fro(p)))
            .fold(0.0, f64::max);
        DunfordResiduals {
            reassembly: fro(&(&self.s + &self.k - t)) / scale,
            commutation: fro(&(&self.s * &self.k - &self.k * &self.s)) / (scale * scale),
            nilpotency: fro(&kp) / scale.powi(m as i32),
            idempotency,
        }
    }
}

struct Attempt {
    pair: DunfordPair,
    worst_idempotent: f64,
    nilpotency: f64,
}

/// Block-diagonalizes the clustered Schur form `r` (clusters contiguous,
/// sizes `sizes`) by successive Sylvester solves. Returns `(Z, Z^{-1})`.
fn block_diagonalize(r: &CMatrix, sizes: &[usize]) -> Option<(CMatrix, CMatrix)> {
    let n = r.nrows();
    let mut z = CMatrix::identity(n, n);
    let mut zi = CMatrix::identity(n, n);
    let mut start = 0;
    for &s in &sizes[..sizes.len() - 1] {
        let rest = n - start - s;
        let a = r.view((start, start), (s, s)).into_owned();
        let b = r.view((start + s, start + s), (rest, rest)).into_owned();
        let cc = r.view((start, start + s), (s, rest)).into_owned();
        let y = schur::solve_triangular_sylvester(&a, &b, &(-cc))?;
        // Z_k = I + Y in block (start, start+s); apply on the right.
        let mut zk = CMatrix::identity(n, n);
        zk.view_mut((start, start + s), (s, rest)).copy_from(&y);
        let mut zki = CMatrix::identity(n, n);
        zki.view_mut((start, start + s), (s, rest)).copy_from(&(-y));
        z = &z * zk;
        zi = zki * &zi;
        start += s;
    }
    Some((z, zi))
}

fn attempt(
    t: &CMatrix,
    q: &CMatrix,
    r: &CMatrix,
    radius: f64,
    tol: &Tolerances,
) -> Option<Attempt> {
    let n = t.nrows();
    let scale = 1.0 + op_norm(t);
    let pts: Vec<C> = (0..n).map(|i| r[(i, i)]).collect();
    let groups = cluster_points(&pts, radius);
    let means: Vec<C> = groups
        .iter()
        .map(|g| g.iter().map(|&i| pts[i]).sum::<C>() / c(g.len() as f64))
        .collect();
    for i in 0..means.len() {
        for j in (i + 1)..means.len() {
            if (means[i] - means[j]).norm() <= tol.gap_min * scale {
                return None;
            }
        }
    }
    let mut labels = vec![0; n];
    for (k, g) in groups.iter().enumerate() {
        for &i in g {
            labels[i] = k;
        }
    }
    let (mut q, mut r) = (q.clone(), r.clone());
    schur::reorder_by_label(&mut q, &mut r, &labels);
    let sizes: Vec<usize> = groups.iter().map(|g| g.len()).collect();
    let (z, zi) = block_diagonalize(&r, &sizes)?;
    let y = &q * z;
    let y_inv = zi * q.adjoint();
    let mut idempotents = Vec::with_capacity(sizes.len());
    let mut s = CMatrix::zeros(n, n);
    let mut start = 0;
    let mut values = Vec::with_capacity(sizes.len());
    let mut worst: f64 = 0.0;
    for &sz in &sizes {
        let mu = (start..start + sz).map(|i| r[(i, i)]).sum::<C>() / c(sz as f64);
        let yk = y.columns(start, sz);
        let wk = y_inv.rows(start, sz);
        let p = yk * wk;
        worst = worst.max(op_norm(&p));
        s += &p * mu;
        idempotents.push(p);
        values.push(mu);
        start += sz;
    }
    let k = t - &s;
    let pair = DunfordPair {
        s,
        k,
        values,
        mults: sizes,
        idempotents,
        y,
        y_inv,
    };
    let nilpotency = pair.residuals(t).nilpotency;
    Some(Attempt {
        pair,
        worst_idempotent: worst,
        nilpotency,
    })
}

/// Number of radii tried, each ten times the previous.
const LADDER: i32 = 7;

/// Jordan-Chevalley decomposition via the Schur form: eigenvalues are
/// clustered, clusters are made contiguous by unitary swaps and decoupled by
/// triangular Sylvester solves. The clustering radius starts at the cluster
/// tolerance and grows until no two clusters are within the minimum gap, the
/// spectral idempotents are well conditioned and the radical part is
/// numerically nilpotent.
pub fn jordan_chevalley(t: &CMatrix, tol: &Tolerances) -> Result<DunfordPair> {
    validate_square(t)?;
    let (q, r) = schur::schur(t);
    let base = tol.cluster_radius(op_norm(t));
    let nil_bound = tol.cert_tol.sqrt();
    let mut last = String::from("no admissible clustering");
    for i in 0..LADDER {
        let radius = base * 10f64.powi(i);
        let Some(a) = attempt(t, &q, &r, radius, tol) else {
            last = format!("clusters closer than the minimum gap at radius {radius:.3e}");
            continue;
        };
        if a.worst_idempotent <= 1.0 / tol.gap_min && a.nilpotency <= nil_bound {
            return Ok(a.pair);
        }
        last = format!(
            "radius {radius:.3e}: idempotent norm {:.3e}, nilpotency residual {:.3e}",
            a.worst_idempotent, a.nilpotency
        );
    }
    Err(Error::SpectrumTooClustered(last))
}
