//! Complex Schur form, reordering of diagonal entries by adjacent swaps, and
//! triangular Sylvester solves.

use super::{c, CMatrix, C, ZERO};

/// `T = Q R Q*` with `Q` unitary and `R` upper triangular (entries below the
/// diagonal are zeroed).
pub fn schur(t: &CMatrix) -> (CMatrix, CMatrix) {
    let n = t.nrows();
    if n == 1 {
        return (CMatrix::identity(1, 1), t.clone());
    }
    let (q, mut r) = nalgebra::Schur::new(t.clone()).unpack();
    for j in 0..n {
        for i in (j + 1)..n {
            r[(i, j)] = ZERO;
        }
    }
    (q, r)
}

/// Swaps diagonal entries `k` and `k+1` of the upper-triangular `r` by a
/// unitary rotation, updating `q` so that `q r q*` is unchanged.
pub fn swap_adjacent(q: &mut CMatrix, r: &mut CMatrix, k: usize) {
    let n = r.nrows();
    let t11 = r[(k, k)];
    let t22 = r[(k + 1, k + 1)];
    // Eigenvector of the 2x2 block for t22 is (r12, t22 - t11).
    let a0 = r[(k, k + 1)];
    let b0 = t22 - t11;
    let nrm = (a0.norm_sqr() + b0.norm_sqr()).sqrt();
    if nrm == 0.0 {
        return;
    }
    let a = a0 / c(nrm);
    let b = b0 / c(nrm);
    // z = [[a, -conj(b)], [b, conj(a)]] is unitary with first column (a, b).
    let z = [[a, -b.conj()], [b, a.conj()]];
    // rows k, k+1 <- z* rows
    for j in 0..n {
        let x = r[(k, j)];
        let y = r[(k + 1, j)];
        r[(k, j)] = z[0][0].conj() * x + z[1][0].conj() * y;
        r[(k + 1, j)] = z[0][1].conj() * x + z[1][1].conj() * y;
    }
    // columns k, k+1 <- columns z
    for i in 0..n {
        let x = r[(i, k)];
        let y = r[(i, k + 1)];
        r[(i, k)] = x * z[0][0] + y * z[1][0];
        r[(i, k + 1)] = x * z[0][1] + y * z[1][1];
        let x = q[(i, k)];
        let y = q[(i, k + 1)];
        q[(i, k)] = x * z[0][0] + y * z[1][0];
        q[(i, k + 1)] = x * z[0][1] + y * z[1][1];
    }
    r[(k + 1, k)] = ZERO;
    r[(k, k)] = t22;
    r[(k + 1, k + 1)] = t11;
}

/// Reorders the Schur form so that the diagonal follows `target`, a list of
/// group labels per current diagonal position; on return the diagonal is
/// grouped by ascending label (stable within a label). Returns the labels in
/// their new order.
pub fn reorder_by_label(q: &mut CMatrix, r: &mut CMatrix, labels: &[usize]) -> Vec<usize> {
    let mut lab = labels.to_vec();
    let n = lab.len();
    // Bubble sort with adjacent swaps; stable.
    for pass in 0..n {
        let mut swapped = false;
        for k in 0..n.saturating_sub(1 + pass) {
            if lab[k] > lab[k + 1] {
                swap_adjacent(q, r, k);
                lab.swap(k, k + 1);
                swapped = true;
            }
        }
        if !swapped {
            break;
        }
    }
    lab
}

/// Solves `A Y - Y B = C` for upper-triangular `A` (p x p) and `B` (q x q) by
/// column-wise back substitution. Returns `None` if some `a_ii == b_jj`.
pub fn solve_triangular_sylvester(a: &CMatrix, b: &CMatrix, rhs: &CMatrix) -> Option<CMatrix> {
    let p = a.nrows();
    let qn = b.nrows();
    let mut y = CMatrix::zeros(p, qn);
    for j in 0..qn {
        let mut col: Vec<C> = (0..p).map(|i| rhs[(i, j)]).collect();
        for l in 0..j {
            let blj = b[(l, j)];
            if blj != ZERO {
                for (i, ci) in col.iter_mut().enumerate() {
                    *ci += y[(i, l)] * blj;
                }
            }
        }
        let bjj = b[(j, j)];
        for i in (0..p).rev() {
            let mut s = col[i];
            for k in (i + 1)..p {
                s -= a[(i, k)] * y[(k, j)];
            }
            let d = a[(i, i)] - bjj;
            if d == ZERO {
                return None;
            }
            y[(i, j)] = s / d;
        }
    }
    Some(y)
}
