#![allow(dead_code)]

use irrforge::numkernel::{c, diag, identity, inverse, CMatrix, Projection, C};
use irrforge::oracle::{random_invertible, random_normal, Seed};
use rand::Rng;

/// `k` complex points in the disc of radius 3 with pairwise distance >= `gap`.
pub fn separated_points(k: usize, gap: f64, seed: Seed) -> Vec<C> {
    let mut rng = seed.rng();
    let mut pts: Vec<C> = Vec::with_capacity(k);
    while pts.len() < k {
        let z = C::new(rng.random_range(-3.0..3.0), rng.random_range(-3.0..3.0));
        if z.norm() <= 3.0 && pts.iter().all(|p| (p - z).norm() >= gap) {
            pts.push(z);
        }
    }
    pts
}

/// Random multiplicities summing to `n`, with `d` parts each at most `cap`.
/// Returns `None` when infeasible.
pub fn random_mults(n: usize, d: usize, cap: usize, seed: Seed) -> Option<Vec<usize>> {
    if d == 0 || d > n || d * cap < n {
        return None;
    }
    let mut rng = seed.rng();
    let mut m = vec![1; d];
    let mut left = n - d;
    while left > 0 {
        let i = rng.random_range(0..d);
        if m[i] < cap {
            m[i] += 1;
            left -= 1;
        }
    }
    Some(m)
}

/// Normal matrix with the given multiplicities and separated eigenvalues.
pub fn normal_with_mults(mults: &[usize], gap: f64, seed: Seed) -> (CMatrix, Vec<C>) {
    let vals = separated_points(mults.len(), gap, seed.derive(1));
    (random_normal(&vals, mults, seed.derive(2)).unwrap(), vals)
}

/// Normal matrix satisfying both positive conditions: at least three
/// distinct eigenvalues, multiplicities at most n/2, gaps >= 0.1.
pub fn good_normal(seed: Seed) -> CMatrix {
    let mut rng = seed.rng();
    loop {
        let n: usize = rng.random_range(3..=8);
        let cap = (n / 2).max(1);
        let d = rng.random_range(3.max(n.div_ceil(cap))..=n);
        if let Some(m) = random_mults(n, d, cap, Seed(rng.random())) {
            return normal_with_mults(&m, 0.1, Seed(rng.random())).0;
        }
    }
}

/// Block diagonal Jordan matrix and a conjugate of it.
pub struct JordanData {
    pub t: CMatrix,
    pub j: CMatrix,
    pub y: CMatrix,
    pub values: Vec<C>,
    pub blocks: Vec<Vec<usize>>,
}

pub fn jordan_instance(n: usize, max_block: usize, gap: f64, cond: f64, seed: Seed) -> JordanData {
    let mut rng = seed.rng();
    let mut sizes = Vec::new();
    let mut left = n;
    while left > 0 {
        let s = rng.random_range(1..=max_block.min(left));
        sizes.push(s);
        left -= s;
    }
    let d = rng.random_range(1..=sizes.len());
    let values = separated_points(d, gap, seed.derive(3));
    let mut blocks = vec![Vec::new(); d];
    let mut j = CMatrix::zeros(n, n);
    let mut at = 0;
    for (b, &s) in sizes.iter().enumerate() {
        let v = if b < d { b } else { rng.random_range(0..d) };
        blocks[v].push(s);
        for i in 0..s {
            j[(at + i, at + i)] = values[v];
            if i + 1 < s {
                j[(at + i, at + i + 1)] = c(1.0);
            }
        }
        at += s;
    }
    let y = random_invertible(n, cond, seed.derive(4));
    let t = &y * &j * inverse(&y).unwrap();
    JordanData {
        t,
        j,
        y,
        values,
        blocks,
    }
}

/// Random matrix of prescribed rank.
pub fn random_rank(n: usize, r: usize, seed: Seed) -> CMatrix {
    let a = irrforge::oracle::ginibre(n, seed.derive(1));
    let b = irrforge::oracle::ginibre(n, seed.derive(2));
    a.columns(0, r) * b.rows(0, r)
}

/// Diagonal projections onto consecutive coordinate blocks, rotated by `u`.
pub fn rotated_partition(ranks: &[usize], u: &CMatrix) -> Vec<Projection> {
    let mut start = 0;
    ranks
        .iter()
        .map(|&r| {
            let cols = u.columns(start, r).into_owned();
            start += r;
            Projection::from_orthonormal_columns(&cols)
        })
        .collect()
}

pub fn scalar(n: usize, z: C) -> CMatrix {
    identity(n) * z
}

pub fn diag_c(v: &[C]) -> CMatrix {
    diag(v)
}
