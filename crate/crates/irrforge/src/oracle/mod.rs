//! Brute-force verification oracles and seeded instance generators.
//!
//! Randomness comes from ChaCha20 seeded through `seed_from_u64`, so a
//! given [`Seed`] reproduces the same stream on every platform.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numkernel::{
    c, check_same_dim, diag, fro, identity, validate_square, vec_of, CMatrix, CVector, Tolerances,
    C,
};
use crate::staralg::{self, IrreducibilityCertificate};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Seed(pub u64);

impl Seed {
    pub fn rng(self) -> ChaCha20Rng {
        ChaCha20Rng::seed_from_u64(self.0)
    }

    /// Independent child seed, for drawing several objects from one seed.
    pub fn derive(self, k: u64) -> Seed {
        let mut r = ChaCha20Rng::seed_from_u64(self.0 ^ k.wrapping_mul(0x9E37_79B9_7F4A_7C15));
        Seed(r.random())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WordAlgebraReport {
    /// Span dimension after each word length `1, 2, ...`.
    pub dims: Vec<usize>,
    pub stabilized: bool,
    pub final_dim: usize,
}

/// Residual above which a word counts as a new direction. Words are products
/// of unit-norm factors, so the bound is absolute except for `I`.
fn word_threshold(tol: &Tolerances) -> f64 {
    tol.cert_tol.max(1e-12)
}

/// Dimension of the span of words of length at most `L` in `S ∪ S* ∪ {I}`,
/// for `L = 1..=max_len` or until two consecutive lengths agree.
pub fn word_algebra_dim(
    n: usize,
    set: &[CMatrix],
    max_len: usize,
    tol: &Tolerances,
) -> Result<WordAlgebraReport> {
    if max_len == 0 || n == 0 {
        return Err(Error::InvalidArgument(
            "max_len and dimension must be positive".into(),
        ));
    }
    for x in set {
        validate_square(x)?;
        check_same_dim(n, x)?;
    }
    let gens = staralg::normalized_members(set, true);
    let thr = word_threshold(tol);
    let mut basis: Vec<CVector> = Vec::new();
    let mut frontier: Vec<CMatrix> = Vec::new();
    let push = |m: &CMatrix, basis: &mut Vec<CVector>| -> Option<CMatrix> {
        let v = vec_of(m);
        let nv = v.norm();
        if nv < 1e-300 || basis.len() == n * n {
            return None;
        }
        let mut r = v.clone();
        for _ in 0..2 {
            for b in basis.iter() {
                let ip = b.dotc(&r);
                r -= b * ip;
            }
        }
        let nr = r.norm();
        if nr > thr * nv.max(1.0) {
            let r = r / c(nr);
            basis.push(r.clone());
            Some(crate::numkernel::unvec(&r, n))
        } else {
            None
        }
    };
    for m in std::iter::once(identity(n)).chain(gens.iter().cloned()) {
        if let Some(b) = push(&m, &mut basis) {
            frontier.push(b);
        }
    }
    let mut dims = vec![basis.len()];
    while dims.len() < max_len {
        let mut next = Vec::new();
        for f in &frontier {
            for g in &gens {
                if let Some(b) = push(&(g * f), &mut basis) {
                    next.push(b);
                }
            }
        }
        frontier = next;
        dims.push(basis.len());
        let k = dims.len();
        if dims[k - 1] == dims[k - 2] {
            break;
        }
    }
    let k = dims.len();
    let stabilized = k >= 2 && dims[k - 1] == dims[k - 2];
    let final_dim = dims[k - 1];
    if !stabilized {
        return Err(Error::NotStabilized(max_len));
    }
    Ok(WordAlgebraReport {
        dims,
        stabilized,
        final_dim,
    })
}

/// Default word-length budget: the span of words stabilizes by length `n^2`.
pub fn default_max_len(n: usize) -> usize {
    2 * n * n + 1
}

/// Irreducibility by both oracles; they must agree.
pub fn certify(t: &CMatrix, tol: &Tolerances, max_len: usize) -> Result<IrreducibilityCertificate> {
    validate_square(t)?;
    let n = t.nrows();
    certify_set(n, std::slice::from_ref(t), tol, max_len)
}

/// Generation of `M_n` by `set`, by both oracles.
pub fn certify_set(
    n: usize,
    set: &[CMatrix],
    tol: &Tolerances,
    max_len: usize,
) -> Result<IrreducibilityCertificate> {
    let cb = staralg::commutant(n, set, true, tol)?;
    let words = word_algebra_dim(n, set, max_len, tol)?;
    if (cb.dim == 1) != (words.final_dim == n * n) {
        return Err(Error::OracleDisagreement {
            commutant_dim: cb.dim,
            word_dim: words.final_dim,
        });
    }
    let mut cert = staralg::certificate_from(&cb);
    cert.word_dim = Some(words.final_dim);
    Ok(cert)
}

fn gaussian(rng: &mut ChaCha20Rng) -> C {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    C::new(re, im) / c(std::f64::consts::SQRT_2)
}

/// Complex Ginibre matrix with standard complex Gaussian entries.
pub fn ginibre(n: usize, seed: Seed) -> CMatrix {
    let mut rng = seed.rng();
    ginibre_from(n, &mut rng)
}

fn ginibre_from(n: usize, rng: &mut ChaCha20Rng) -> CMatrix {
    // Fill column by column so the stream order is the column-major layout.
    let mut m = CMatrix::zeros(n, n);
    for j in 0..n {
        for i in 0..n {
            m[(i, j)] = gaussian(rng);
        }
    }
    m
}

fn haar_from(n: usize, rng: &mut ChaCha20Rng) -> CMatrix {
    let qr = ginibre_from(n, rng).qr();
    let (mut q, r) = qr.unpack();
    for j in 0..n {
        let d = r[(j, j)];
        let ph = if d.norm() > 0.0 {
            d / c(d.norm())
        } else {
            c(1.0)
        };
        for i in 0..n {
            q[(i, j)] *= ph;
        }
    }
    q
}

/// Haar-distributed unitary: QR of a Ginibre matrix with the phases of
/// `diag(R)` moved into `Q`.
pub fn random_unitary(n: usize, seed: Seed) -> CMatrix {
    haar_from(n, &mut seed.rng())
}

/// `U diag(values repeated by mults) U*` with Haar `U`.
pub fn random_normal(values: &[C], mults: &[usize], seed: Seed) -> Result<CMatrix> {
    if values.len() != mults.len() || values.is_empty() || mults.contains(&0) {
        return Err(Error::InvalidArgument(
            "values and positive multiplicities must have equal nonzero length".into(),
        ));
    }
    for i in 0..values.len() {
        for j in 0..i {
            if values[i] == values[j] {
                return Err(Error::InvalidArgument("values must be distinct".into()));
            }
        }
    }
    let d: Vec<C> = values
        .iter()
        .zip(mults)
        .flat_map(|(&v, &m)| std::iter::repeat_n(v, m))
        .collect();
    let u = random_unitary(d.len(), seed);
    let n = &u * diag(&d) * u.adjoint();
    Ok(n)
}

/// `U Σ V*` with log-uniform singular values in `[1/√κ, √κ]`.
pub fn random_invertible(n: usize, cond_max: f64, seed: Seed) -> CMatrix {
    assert!(cond_max >= 1.0, "cond_max must be at least 1");
    let mut rng = seed.rng();
    let u = haar_from(n, &mut rng);
    let v = haar_from(n, &mut rng);
    let h = 0.5 * cond_max.ln();
    let s: Vec<C> = (0..n)
        .map(|_| {
            let t: f64 = if h > 0.0 {
                rng.random_range(-h..=h)
            } else {
                0.0
            };
            c(t.exp())
        })
        .collect();
    u * diag(&s) * v.adjoint()
}

/// Seeded random square matrix of Frobenius norm `sqrt(n)`.
pub fn random_matrix(n: usize, seed: Seed) -> CMatrix {
    let g = ginibre(n, seed);
    let nf = fro(&g);
    g * c((n as f64).sqrt() / nf)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numkernel::{condition_number, diag_real, from_real_rows, normality_residual};
    use crate::staralg::Verdict;

    fn tol() -> Tolerances {
        Tolerances::default()
    }

    #[test]
    fn word_dims_examples() {
        let r = word_algebra_dim(3, &[diag_real(&[1.0, 2.0, 3.0])], 20, &tol()).unwrap();
        assert_eq!(r.final_dim, 3);
        assert!(r.stabilized);
        let base = [
            diag_real(&[1.0, 0.0]),
            from_real_rows(&[&[0.5, 0.5], &[0.5, 0.5]]),
        ];
        assert_eq!(word_algebra_dim(2, &base, 20, &tol()).unwrap().final_dim, 4);
        let t = from_real_rows(&[&[1.0, 1.0, 1.0], &[0.0, 2.0, 0.0], &[0.0, 0.0, 3.0]]);
        let r = word_algebra_dim(3, &[t], 40, &tol()).unwrap();
        assert_eq!(r.final_dim, 9);
        assert!(r.dims.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn word_dims_not_stabilized() {
        let t = from_real_rows(&[&[1.0, 1.0, 1.0], &[0.0, 2.0, 0.0], &[0.0, 0.0, 3.0]]);
        assert!(matches!(
            word_algebra_dim(3, &[t], 1, &tol()),
            Err(Error::NotStabilized(1))
        ));
    }

    #[test]
    fn certify_examples() {
        let cert = certify(&(identity(2) * c(3.0)), &tol(), 20).unwrap();
        assert_eq!(cert.verdict, Verdict::Reducible);
        assert_eq!(cert.word_dim, Some(1));
        let cert = certify(&diag_real(&[1.0, 2.0]), &tol(), 20).unwrap();
        assert_eq!((cert.commutant_dim, cert.word_dim), (2, Some(2)));
    }

    #[test]
    fn random_normal_examples() {
        let z = random_normal(&[c(0.0)], &[3], Seed(1)).unwrap();
        assert!(fro(&z) < 1e-15);
        let nm = random_normal(&[c(1.0), c(2.0)], &[1, 1], Seed(42)).unwrap();
        assert!(normality_residual(&nm) <= 1e-12);
        let sp = crate::numkernel::hermitian_eig(&nm, &tol()).unwrap();
        assert!((sp.values()[0] - c(1.0)).norm() < 1e-12);
        assert!((sp.values()[1] - c(2.0)).norm() < 1e-12);
        assert!(random_normal(&[c(1.0), c(1.0)], &[1, 1], Seed(0)).is_err());
    }

    #[test]
    fn random_invertible_examples() {
        let u = random_invertible(4, 1.0, Seed(3));
        assert!(fro(&(u.adjoint() * &u - identity(4))) < 1e-12);
        let x = random_invertible(4, 100.0, Seed(7));
        assert!(condition_number(&x) <= 100.0 * (1.0 + 1e-12));
        assert_eq!(random_invertible(4, 100.0, Seed(7)), x);
    }

    #[test]
    fn seeds_are_reproducible() {
        assert_eq!(random_unitary(3, Seed(9)), random_unitary(3, Seed(9)));
        assert_ne!(random_unitary(3, Seed(9)), random_unitary(3, Seed(10)));
        assert_ne!(Seed(1).derive(0), Seed(1).derive(1));
    }
}
