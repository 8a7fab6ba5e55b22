use super::Partition3;
use crate::error::{Error, Result};
use crate::generators::masa_complement_generator;
use crate::numkernel::{c, identity, CMatrix, Projection, Tolerances};
use crate::staralg::is_irreducible;

/// `T = S + A V12 + B V13` together with `S = Σ α_j E_j` and the explicit
/// similarity `X S X^{-1} = T`, where `X^{-1} = 2I - X`.
#[derive(Debug, Clone)]
pub struct UpperTriangularModel {
    pub t: CMatrix,
    pub s: CMatrix,
    pub x: CMatrix,
    pub x_inv: CMatrix,
}

fn columns(w: &CMatrix, idx: std::ops::Range<usize>) -> CMatrix {
    w.columns(idx.start, idx.len()).into_owned()
}

/// `Σ_i (1/(i+1)) b_i b_i*` over the columns of `b`.
fn weighted(b: &CMatrix) -> CMatrix {
    let mut m = CMatrix::zeros(b.nrows(), b.nrows());
    for i in 0..b.ncols() {
        let col = b.columns(i, 1);
        m += col * col.adjoint() * c(1.0 / (i + 1) as f64);
    }
    m
}

/// Builds the irreducible upper-triangular operator similar to `Σ α_j P_j`.
pub fn irreducible_upper_triangular(
    part: &Partition3,
    tol: &Tolerances,
) -> Result<UpperTriangularModel> {
    let n = part.dim();
    let mut order = [0usize, 1, 2];
    order.sort_by(|&a, &b| part.p[b].rank().cmp(&part.p[a].rank()));
    let e = order.map(|i| &part.p[i]);
    let al = order.map(|i| part.alphas[i]);
    let (r1, r2, r3) = (e[0].rank(), e[1].rank(), e[2].rank());
    if !(r3 <= r2 && r2 <= r1 && r1 <= r2 + r3 && r3 >= 1) {
        return Err(Error::ShapeInfeasible(format!(
            "ranks ({r1}, {r2}, {r3}) violate r3 <= r2 <= r1 <= r2 + r3"
        )));
    }
    let w1 = e[0].basis();
    // Corner unitary on ran E1 in the coordinates given by w1.
    let uc = if r1 == 1 {
        identity(1)
    } else {
        let f0: Vec<usize> = if r1 > r2 {
            (r2..r1).collect()
        } else {
            vec![r1 - 1]
        };
        let f0 = Projection::diagonal(r1, &f0);
        masa_complement_generator(&identity(r1), &f0, tol)?.u
    };
    let f1 = columns(&w1, 0..r2);
    let g1p = columns(&w1, (r1 - r3)..r1);
    // G1 = U* G1' U in the corner.
    let g1 = &w1 * uc.adjoint() * columns(&identity(r1), (r1 - r3)..r1);
    debug_assert!(g1p.ncols() == g1.ncols());
    let a = weighted(&f1);
    let b = weighted(&g1);
    let v12 = &f1 * e[1].basis().adjoint();
    let v13 = &g1 * e[2].basis().adjoint();
    let s = e[0].matrix() * al[0] + e[1].matrix() * al[1] + e[2].matrix() * al[2];
    let av = &a * &v12;
    let bv = &b * &v13;
    let t = &s + &av + &bv;
    let x = identity(n) + av / (al[1] - al[0]) + bv / (al[2] - al[0]);
    let x_inv = identity(n) * c(2.0) - &x;
    let cert = is_irreducible(&t, tol)?;
    if !cert.is_irreducible() {
        return Err(Error::CertificationFailed(format!(
            "model operator has commutant dimension {}",
            cert.commutant_dim
        )));
    }
    Ok(UpperTriangularModel { t, s, x, x_inv })
}
