//! Generator constructions in `M_n`: projection families that generate,
//! the partial-isometry construction behind unitary-conjugation generators,
//! MASA-complement generators, real parts of generators and the
//! ceiling-bound configuration.

use serde::Serialize;

use crate::error::{Error, Necessity, Result};
use crate::numkernel::{
    c, compress, diag_real, embed, fro, hermitian_eig, hermitian_part, hermitian_residual,
    identity, inverse, numeric_rank, op_norm, range_projection, scalar_residual, sqrt_psd,
    unitary_linking, validate_square, zeros, CMatrix, PartialIsometry, Projection, Tolerances,
};
use crate::staralg::{self, CommutantBasis};

/// Two families of rank-one projections, each pairwise orthogonal, that
/// together generate `M_{n1+n2}`.
#[derive(Debug, Clone)]
pub struct PairFamilies {
    pub n1: usize,
    pub n2: usize,
    pub e: Vec<Projection>,
    pub f: Vec<Projection>,
    pub certificate: CommutantBasis,
}

impl PairFamilies {
    pub fn dim(&self) -> usize {
        self.n1 + self.n2
    }

    /// Largest `||X_i X_j||_F` over distinct members of the same family.
    pub fn orthogonality_residual(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for fam in [&self.e, &self.f] {
            for i in 0..fam.len() {
                for j in 0..fam.len() {
                    if i != j {
                        worst = worst.max(fro(&(fam[i].matrix() * fam[j].matrix())));
                    }
                }
            }
        }
        worst
    }
}

#[derive(Debug, Clone)]
pub struct GeneratorBundle {
    pub matrices: Vec<CMatrix>,
    pub ranks: Vec<usize>,
    pub certificate: CommutantBasis,
}

#[derive(Debug, Clone)]
pub struct KeyConstructionResult {
    pub v: PartialIsometry,
    pub p0_prime: Projection,
    pub u: CMatrix,
    pub a0: CMatrix,
    /// Inverse of `A0` on the `P0` corner, zero elsewhere.
    pub b0: CMatrix,
    /// The rescaled generators `A_1, ..., A_N`.
    pub scaled: Vec<CMatrix>,
    pub certificate: CommutantBasis,
}

#[derive(Debug, Clone)]
pub struct ConjugationResult {
    pub u: CMatrix,
    /// Corner generators after padding, embedded in `M_n`.
    pub corner_generators: Vec<CMatrix>,
    pub key: KeyConstructionResult,
    pub certificate: CommutantBasis,
}

#[derive(Debug, Clone)]
pub struct MasaResult {
    pub u: CMatrix,
    /// `U* P U` followed by the minimal projections of the MASA under `I - P`.
    pub generating_set: Vec<CMatrix>,
    pub certificate: CommutantBasis,
}

#[derive(Debug, Clone)]
pub struct RealPartResult {
    pub b: CMatrix,
    pub g: CMatrix,
    pub certificate: CommutantBasis,
}

#[derive(Debug, Clone)]
pub struct CeilingPlan {
    pub m: usize,
    pub p: Projection,
    pub q: Vec<Projection>,
    pub certificate: CommutantBasis,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum FeasibilityVerdict {
    Feasible,
    TooFewParts,
    PartAboveK,
}

fn certify_generation(
    n: usize,
    set: &[CMatrix],
    tol: &Tolerances,
    what: &str,
) -> Result<CommutantBasis> {
    let (ok, cb) = staralg::generates(n, set, tol)?;
    if !ok {
        return Err(Error::CertificationFailed(format!(
            "{what}: commutant dimension {}",
            cb.dim
        )));
    }
    Ok(cb)
}

/// Rank-one projection onto `(u ⊕ 1)/√2` in dimension `d + 1`.
fn extension_projection(u: &CMatrix, d: usize) -> Projection {
    let mut w = CMatrix::zeros(d + 1, 1);
    for i in 0..d {
        w[(i, 0)] = u[(i, 0)];
    }
    w[(d, 0)] = c(1.0);
    w /= c(2f64.sqrt());
    Projection::from_orthonormal_columns(&w)
}

fn grow(fam: &[Projection], d: usize) -> CMatrix {
    // First pivoted basis vector of the complement of the family's span in C^d.
    let mut sum = zeros(d);
    for p in fam {
        sum += p.matrix();
    }
    let comp = Projection::from_parts(
        identity(d) - sum,
        d - fam.iter().map(|p| p.rank()).sum::<usize>(),
    );
    comp.basis().columns(0, 1).into_owned()
}

fn pad(p: &Projection, d: usize) -> Projection {
    let mut m = zeros(d);
    let k = p.dim();
    m.view_mut((0, 0), (k, k)).copy_from(p.matrix());
    Projection::from_parts(m, p.rank())
}

/// Pairwise-orthogonal rank-one families `E` (size `n1`) and `F` (size
/// `n2`) generating `M_{n1+n2}`, grown one dimension at a time from the
/// 2x2 base `E1 = diag(1,0)`, `F1 = ½·ones`.
pub fn pair_families(n1: usize, n2: usize, tol: &Tolerances) -> Result<PairFamilies> {
    if n1 == 0 || n2 == 0 {
        return Err(Error::InvalidArgument(
            "family sizes must be positive".into(),
        ));
    }
    let mut e = vec![Projection::diagonal(2, &[0])];
    let half = CMatrix::from_element(2, 2, c(0.5));
    let mut f = vec![Projection::from_parts(half, 1)];
    let mut d = 2;
    while e.len() < n1 || f.len() < n2 {
        let grow_e = e.len() < n1;
        let u = if grow_e { grow(&e, d) } else { grow(&f, d) };
        e = e.iter().map(|p| pad(p, d + 1)).collect();
        f = f.iter().map(|p| pad(p, d + 1)).collect();
        let new = extension_projection(&u, d);
        if grow_e {
            e.push(new);
        } else {
            f.push(new);
        }
        d += 1;
    }
    let all: Vec<CMatrix> = e
        .iter()
        .chain(f.iter())
        .map(|p| p.matrix().clone())
        .collect();
    let certificate = certify_generation(d, &all, tol, "pair families")?;
    Ok(PairFamilies {
        n1,
        n2,
        e,
        f,
        certificate,
    })
}

/// Positive generators `A_1, ..., A_N` of `M_n` with `rank A_j = ranks[j]`.
pub fn rank_prescribed_generators(ranks: &[usize], tol: &Tolerances) -> Result<GeneratorBundle> {
    if ranks.len() < 2 {
        return Err(Error::InvalidRanks(
            "at least two ranks are required".into(),
        ));
    }
    if ranks.contains(&0) {
        return Err(Error::InvalidRanks("every rank must be positive".into()));
    }
    let n: usize = ranks.iter().sum();
    let n1 = ranks[0];
    let fam = pair_families(n1, n - n1, tol)?;
    let mut matrices = Vec::with_capacity(ranks.len());
    let mut a1 = zeros(n);
    for (i, p) in fam.e.iter().enumerate() {
        a1 += p.scaled((i + 1) as f64);
    }
    matrices.push(a1);
    let mut next = 0;
    for &r in &ranks[1..] {
        let mut a = zeros(n);
        for j in 0..r {
            a += fam.f[next + j].scaled(1.0 / (j + 1) as f64);
        }
        next += r;
        matrices.push(a);
    }
    for (m, &r) in matrices.iter().zip(ranks) {
        let got = numeric_rank(m, tol);
        if got != r {
            return Err(Error::CertificationFailed(format!(
                "generator rank {got}, expected {r}"
            )));
        }
    }
    let certificate = certify_generation(n, &matrices, tol, "rank-prescribed generators")?;
    Ok(GeneratorBundle {
        matrices,
        ranks: ranks.to_vec(),
        certificate,
    })
}

fn check_partition(p0: &Projection, parts: &[Projection], tol: &Tolerances) -> Result<()> {
    let n = p0.dim();
    let mut all = vec![p0];
    all.extend(parts.iter());
    let mut sum = zeros(n);
    for (i, p) in all.iter().enumerate() {
        if p.dim() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: p.dim(),
            });
        }
        if p.is_zero() {
            return Err(Error::PartitionInvalid(format!("member {i} is zero")));
        }
        sum += p.matrix();
        for (j, q) in all.iter().enumerate().take(i) {
            let r = fro(&(p.matrix() * q.matrix()));
            if r > tol.cert_tol {
                return Err(Error::PartitionInvalid(format!(
                    "members {j} and {i} overlap ({r:.3e})"
                )));
            }
        }
    }
    let r = fro(&(sum - identity(n)));
    if r > tol.cert_tol * (1.0 + (n as f64).sqrt()) {
        return Err(Error::PartitionInvalid(format!(
            "members do not sum to the identity ({r:.3e})"
        )));
    }
    Ok(())
}

/// Builds `V = A0 + Σ A_k E12^(k)` with `V V* = P0` and a unitary `U` with
/// `U* P0 U = V* V`, then certifies that `U* P0 U` and the parts generate.
pub fn key_construction(
    p0: &Projection,
    parts: &[Projection],
    gens: &[CMatrix],
    tol: &Tolerances,
) -> Result<KeyConstructionResult> {
    if parts.len() < 2 {
        return Err(Error::NecessityViolated(Necessity::TooFewParts));
    }
    if gens.len() != parts.len() {
        return Err(Error::InvalidArgument(format!(
            "{} generators for {} parts",
            gens.len(),
            parts.len()
        )));
    }
    check_partition(p0, parts, tol)?;
    let n = p0.dim();
    let w = p0.basis();
    let mut corner = Vec::with_capacity(gens.len());
    for (a, p) in gens.iter().zip(parts) {
        validate_square(a)?;
        crate::numkernel::check_same_dim(n, a)?;
        let scale = 1.0 + fro(a);
        if hermitian_residual(a) > tol.cert_tol * scale {
            return Err(Error::NotHermitian(hermitian_residual(a)));
        }
        let leak = fro(&(p0.matrix() * a * p0.matrix() - a));
        if leak > tol.cert_tol * scale {
            return Err(Error::CornerGenerationFailed(format!(
                "generator not supported in the corner ({leak:.3e})"
            )));
        }
        let r = numeric_rank(a, tol);
        if r != p.rank() {
            return Err(Error::RankMismatch(r, p.rank()));
        }
        corner.push(compress(a, &w));
    }
    let k = p0.rank();
    let unit = staralg::w0_identity(k, &corner, tol)?;
    let (ok, cb) = staralg::generates(k, &corner, tol)?;
    if unit.rank() != k || !ok {
        return Err(Error::CornerGenerationFailed(format!(
            "corner unit rank {} of {k}, commutant dimension {}",
            unit.rank(),
            cb.dim
        )));
    }
    let mut scaled = Vec::with_capacity(gens.len());
    let mut sq = zeros(n);
    for (i, a) in gens.iter().enumerate() {
        let h = hermitian_part(a);
        let s = 0.5f64.powi(i as i32 + 1) / op_norm(&h);
        let h = h * c(s);
        sq += &h * &h;
        scaled.push(h);
    }
    // Root taken in the corner so the null directions of P0 stay exactly null.
    let a0c = sqrt_psd(&compress(&(p0.matrix() - sq), &w), tol)?;
    let a0 = embed(&a0c, &w);
    let mut v = a0.clone();
    for (a, p) in scaled.iter().zip(parts) {
        let ra = range_projection(a, tol);
        let e12 = ra.basis() * p.basis().adjoint();
        v += a * e12;
    }
    let v = PartialIsometry::new(v, tol)?;
    let p0_prime = v.initial().clone();
    let u = unitary_linking(p0, &p0_prime)?;
    let b0 = embed(
        &inverse(&a0c).ok_or_else(|| Error::CornerGenerationFailed("A0 singular".into()))?,
        &w,
    );
    let mut set = vec![p0_prime.matrix().clone()];
    set.extend(parts.iter().map(|p| p.matrix().clone()));
    let certificate = certify_generation(n, &set, tol, "conjugated projection and parts")?;
    Ok(KeyConstructionResult {
        v,
        p0_prime,
        u,
        a0,
        b0,
        scaled,
        certificate,
    })
}

/// Necessity conditions for a partition `P0, P1, ..., PN` to admit a unitary
/// with `{U* P0 U, P1, ..., PN}` generating.
pub fn conjugation_necessity(ranks: &[usize], n: usize) -> std::result::Result<(), Necessity> {
    let r0 = ranks[0];
    if r0 > n - r0 {
        return Err(Necessity::P0ExceedsComplement);
    }
    if let Some(j) = ranks[1..].iter().position(|&r| r > r0) {
        return Err(Necessity::PartExceedsP0 { index: j + 1 });
    }
    if ranks.len() < 3 {
        return Err(Necessity::TooFewParts);
    }
    Ok(())
}

/// Split `total` over parts with capacities `caps`: one unit to each of the
/// largest parts first, then greedily to the largest remaining capacity.
fn allocate(caps: &[usize], total: usize) -> Vec<usize> {
    let mut order: Vec<usize> = (0..caps.len()).collect();
    order.sort_by(|&a, &b| caps[b].cmp(&caps[a]).then(a.cmp(&b)));
    let mut m = vec![0; caps.len()];
    let mut left = total;
    for &j in order.iter().take(total.min(caps.len())) {
        m[j] = 1;
        left -= 1;
    }
    while left > 0 {
        let mut best = None;
        for j in 0..caps.len() {
            let room = caps[j] - m[j];
            if room > 0 && best.is_none_or(|b: usize| room > caps[b] - m[b]) {
                best = Some(j);
            }
        }
        let j = best.expect("capacities cover the total");
        m[j] += 1;
        left -= 1;
    }
    m
}

/// Unitary `U` with `{U* P0 U, P1, ..., PN}` generating `M_n`, for a
/// partition `parts = [P0, P1, ..., PN]` of the identity.
pub fn conjugation_generator(parts: &[Projection], tol: &Tolerances) -> Result<ConjugationResult> {
    if parts.is_empty() {
        return Err(Error::PartitionInvalid("empty partition".into()));
    }
    let n = parts[0].dim();
    let ranks: Vec<usize> = parts.iter().map(|p| p.rank()).collect();
    conjugation_necessity(&ranks, n).map_err(Error::NecessityViolated)?;
    let (p0, rest) = (&parts[0], &parts[1..]);
    check_partition(p0, rest, tol)?;
    let k = p0.rank();
    let alloc = allocate(&ranks[1..], k);
    let active: Vec<usize> = (0..alloc.len()).filter(|&j| alloc[j] > 0).collect();
    let mut corner_b: Vec<CMatrix> = vec![zeros(k); alloc.len()];
    if active.len() == 1 {
        corner_b[active[0]] = identity(k);
    } else {
        let sub: Vec<usize> = active.iter().map(|&j| alloc[j]).collect();
        let bundle = rank_prescribed_generators(&sub, tol)?;
        for (&j, m) in active.iter().zip(bundle.matrices) {
            corner_b[j] = m;
        }
    }
    let w = p0.basis();
    let mut gens = Vec::with_capacity(alloc.len());
    for (j, b) in corner_b.iter().enumerate() {
        let extra = ranks[j + 1] - alloc[j];
        let mut a = b.clone();
        if extra > 0 {
            let rb = range_projection(b, tol);
            let q = rb.complement().basis().columns(0, extra).into_owned();
            let qp = Projection::from_orthonormal_columns(&q);
            a += qp.scaled(op_norm(b) + 1.0);
        }
        gens.push(embed(&a, &w));
    }
    let key = key_construction(p0, rest, &gens, tol)?;
    Ok(ConjugationResult {
        u: key.u.clone(),
        corner_generators: gens,
        certificate: key.certificate.clone(),
        key,
    })
}

/// Unitary `U` with `W*(U* P U, A(I - P)) = M_n`, where `A` is the MASA
/// diagonal in the unitary `basis` and `P` lies in `A`.
pub fn masa_complement_generator(
    basis: &CMatrix,
    p: &Projection,
    tol: &Tolerances,
) -> Result<MasaResult> {
    validate_square(basis)?;
    let n = basis.nrows();
    crate::numkernel::check_same_dim(n, p.matrix())?;
    let unit = fro(&(basis.adjoint() * basis - identity(n)));
    if unit > tol.cert_tol * (1.0 + n as f64) {
        return Err(Error::InvalidArgument(format!(
            "basis is not unitary ({unit:.3e})"
        )));
    }
    let d = compress(p.matrix(), basis);
    let mut off = d.clone();
    for i in 0..n {
        off[(i, i)] = c(0.0);
    }
    let leak = fro(&off);
    let in_p: Vec<bool> = (0..n).map(|i| d[(i, i)].re > 0.5).collect();
    let diag_err = (0..n)
        .map(|i| (d[(i, i)] - c(if in_p[i] { 1.0 } else { 0.0 })).norm())
        .fold(0.0, f64::max);
    if leak.max(diag_err) > tol.cert_tol * (1.0 + n as f64) {
        return Err(Error::PNotInMasa(leak.max(diag_err)));
    }
    let r = p.rank();
    if r == 0 || r > n - r {
        return Err(Error::RankCondition { rank: r, n });
    }
    let comp: Vec<usize> = (0..n).filter(|&i| !in_p[i]).collect();
    let minimal: Vec<CMatrix> = comp
        .iter()
        .map(|&i| {
            let col = basis.columns(i, 1).into_owned();
            &col * col.adjoint()
        })
        .collect();
    let u = if n == 2 {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let rot = crate::numkernel::from_real_rows(&[&[s, -s], &[s, s]]);
        basis * rot * basis.adjoint()
    } else {
        let mut chunks: Vec<Vec<usize>> = comp.chunks(r).map(|ch| ch.to_vec()).collect();
        if chunks.len() == 1 {
            let all = chunks.pop().unwrap_or_default();
            let (a, b) = all.split_at(all.len().div_ceil(2));
            chunks = vec![a.to_vec(), b.to_vec()];
        }
        let mut parts = vec![p.clone()];
        for ch in &chunks {
            let cols = CMatrix::from_fn(n, ch.len(), |i, j| basis[(i, ch[j])]);
            parts.push(Projection::from_orthonormal_columns(&cols));
        }
        conjugation_generator(&parts, tol)?.u
    };
    let mut generating_set = vec![u.adjoint() * p.matrix() * &u];
    generating_set.extend(minimal);
    let certificate = certify_generation(n, &generating_set, tol, "MASA complement")?;
    Ok(MasaResult {
        u,
        generating_set,
        certificate,
    })
}

/// Hermitian `B` such that `G = A + iB` generates `M_n`.
pub fn real_part_generator(a: &CMatrix, tol: &Tolerances) -> Result<RealPartResult> {
    validate_square(a)?;
    let n = a.nrows();
    let scale = 1.0 + op_norm(a);
    let herm = hermitian_residual(a);
    if herm > tol.cert_tol * scale {
        return Err(Error::NotHermitian(herm));
    }
    if n == 1 {
        let b = zeros(1);
        let g = a.clone();
        let certificate = staralg::commutant(1, std::slice::from_ref(&g), true, tol)?;
        return Ok(RealPartResult { b, g, certificate });
    }
    if scalar_residual(a).1 <= tol.cert_tol * scale {
        return Err(Error::ScalarInput);
    }
    let sp = hermitian_eig(a, tol)?;
    let mut pick = 0;
    for (k, &m) in sp.mults().iter().enumerate() {
        if m < sp.mults()[pick] {
            pick = k;
        }
    }
    let mut basis = CMatrix::zeros(n, n);
    let mut col = 0;
    let mut p_cols = Vec::new();
    for (k, pk) in sp.projections().iter().enumerate() {
        let b = pk.basis();
        basis.columns_mut(col, b.ncols()).copy_from(&b);
        if k == pick {
            p_cols.extend(col..col + b.ncols());
        }
        col += b.ncols();
    }
    let p = sp.projections()[pick].clone();
    let masa = masa_complement_generator(&basis, &p, tol)?;
    let mut weights = vec![0.0; n];
    let mut w = 1.0;
    for (i, wt) in weights.iter_mut().enumerate() {
        if !p_cols.contains(&i) {
            *wt = w;
            w += 1.0;
        }
    }
    let b = &masa.u * embed(&diag_real(&weights), &basis) * masa.u.adjoint();
    let b = hermitian_part(&b);
    let g = a + &b * crate::numkernel::C::new(0.0, 1.0);
    let certificate = certify_generation(n, std::slice::from_ref(&g), tol, "real part generator")?;
    Ok(RealPartResult { b, g, certificate })
}

/// The smallest number of parts `m = max(2, ⌈n/k⌉ - 1)`.
pub fn ceiling_m(n: usize, k: usize) -> usize {
    2usize.max(n.div_ceil(k) - 1)
}

/// Whether `m` pairwise-orthogonal parts of rank at most `k` can fill the
/// complement of a rank-`k` projection with at least two parts.
pub fn ceiling_feasible(n: usize, k: usize, m: usize) -> FeasibilityVerdict {
    if m < 2 {
        FeasibilityVerdict::TooFewParts
    } else if m * k < n - k {
        FeasibilityVerdict::PartAboveK
    } else {
        FeasibilityVerdict::Feasible
    }
}

/// A rank-`k` projection `P` and `m = max(2, ⌈n/k⌉ - 1)` orthogonal
/// projections `Q_j` of rank at most `k` with `{P} ∪ Q` generating `M_n`.
pub fn ceiling_plan(n: usize, k: usize, tol: &Tolerances) -> Result<CeilingPlan> {
    if k == 0 || 2 * k > n {
        return Err(Error::KTooLarge { n, k });
    }
    let m = ceiling_m(n, k);
    let rest = n - k;
    let (base, extra) = (rest / m, rest % m);
    let mut q = Vec::with_capacity(m);
    let mut start = k;
    for j in 0..m {
        let size = base + usize::from(j < extra);
        let idx: Vec<usize> = (start..start + size).collect();
        q.push(Projection::diagonal(n, &idx));
        start += size;
    }
    let p0 = Projection::diagonal(n, &(0..k).collect::<Vec<_>>());
    let u = if n == 2 {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        crate::numkernel::from_real_rows(&[&[s, -s], &[s, s]])
    } else {
        let mut parts = vec![p0.clone()];
        parts.extend(q.iter().cloned());
        conjugation_generator(&parts, tol)?.u
    };
    let pm = hermitian_part(&(u.adjoint() * p0.matrix() * &u));
    let p = Projection::new(pm, tol)?;
    let mut set = vec![p.matrix().clone()];
    set.extend(q.iter().map(|x| x.matrix().clone()));
    let certificate = certify_generation(n, &set, tol, "ceiling configuration")?;
    Ok(CeilingPlan {
        m,
        p,
        q,
        certificate,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numkernel::from_real_rows;

    fn tol() -> Tolerances {
        Tolerances::default()
    }

    #[test]
    fn pair_families_base_case() {
        let pf = pair_families(1, 1, &tol()).unwrap();
        assert_eq!(pf.e[0].matrix(), &diag_real(&[1.0, 0.0]));
        assert_eq!(
            pf.f[0].matrix(),
            &from_real_rows(&[&[0.5, 0.5], &[0.5, 0.5]])
        );
        assert_eq!(pf.certificate.dim, 1);
    }

    #[test]
    fn pair_families_small() {
        let pf = pair_families(2, 1, &tol()).unwrap();
        assert_eq!(pf.dim(), 3);
        assert_eq!(pf.certificate.dim, 1);
        assert!(pf.orthogonality_residual() <= 1e-12);
        for p in pf.e.iter().chain(&pf.f) {
            assert_eq!(p.rank(), 1);
        }
        let pf = pair_families(2, 3, &tol()).unwrap();
        assert!(pf.orthogonality_residual() <= 1e-12);
    }

    #[test]
    fn rank_prescribed_examples() {
        let b = rank_prescribed_generators(&[1, 1], &tol()).unwrap();
        assert_eq!(b.certificate.dim, 1);
        let b = rank_prescribed_generators(&[2, 2], &tol()).unwrap();
        for (m, &r) in b.matrices.iter().zip(&b.ranks) {
            assert_eq!(numeric_rank(m, &tol()), r);
        }
        assert!(matches!(
            rank_prescribed_generators(&[3], &tol()),
            Err(Error::InvalidRanks(_))
        ));
        assert!(matches!(
            rank_prescribed_generators(&[1, 0], &tol()),
            Err(Error::InvalidRanks(_))
        ));
    }

    #[test]
    fn key_construction_m3() {
        let p0 = Projection::diagonal(3, &[0]);
        let parts = [Projection::diagonal(3, &[1]), Projection::diagonal(3, &[2])];
        let gens = [p0.scaled(0.5), p0.scaled(1.0 / 3.0)];
        let r = key_construction(&p0, &parts, &gens, &tol()).unwrap();
        let vv = r.v.matrix() * r.v.matrix().adjoint();
        assert!(fro(&(vv - p0.matrix())) <= 1e-12);
        let conj = r.u.adjoint() * p0.matrix() * &r.u;
        assert!(fro(&(conj - r.p0_prime.matrix())) <= 1e-9);
        assert_eq!(r.certificate.dim, 1);
        assert!(op_norm(r.v.matrix()) <= 1.0 + 1e-12);
    }

    #[test]
    fn key_construction_rejects_single_part() {
        let p0 = Projection::diagonal(2, &[0]);
        let parts = [Projection::diagonal(2, &[1])];
        let gens = [p0.scaled(0.5)];
        assert_eq!(
            key_construction(&p0, &parts, &gens, &tol()).unwrap_err(),
            Error::NecessityViolated(Necessity::TooFewParts)
        );
    }

    #[test]
    fn key_construction_rank_mismatch() {
        let p0 = Projection::diagonal(4, &[0, 1]);
        let parts = [Projection::diagonal(4, &[2]), Projection::diagonal(4, &[3])];
        let gens = [p0.scaled(1.0), p0.scaled(0.5)];
        assert!(matches!(
            key_construction(&p0, &parts, &gens, &tol()),
            Err(Error::RankMismatch(2, 1))
        ));
    }

    #[test]
    fn conjugation_examples() {
        let parts: Vec<Projection> = (0..3).map(|i| Projection::diagonal(3, &[i])).collect();
        let r = conjugation_generator(&parts, &tol()).unwrap();
        assert_eq!(r.certificate.dim, 1);
        let parts = [
            Projection::diagonal(4, &[0, 1, 2]),
            Projection::diagonal(4, &[3]),
        ];
        assert_eq!(
            conjugation_generator(&parts, &tol()).unwrap_err(),
            Error::NecessityViolated(Necessity::P0ExceedsComplement)
        );
        let parts = [
            Projection::diagonal(3, &[0]),
            Projection::diagonal(3, &[1, 2]),
        ];
        assert_eq!(
            conjugation_generator(&parts, &tol()).unwrap_err(),
            Error::NecessityViolated(Necessity::PartExceedsP0 { index: 1 })
        );
    }

    #[test]
    fn conjugation_larger_corner() {
        let parts = [
            Projection::diagonal(7, &[0, 1, 2]),
            Projection::diagonal(7, &[3, 4]),
            Projection::diagonal(7, &[5, 6]),
        ];
        let r = conjugation_generator(&parts, &tol()).unwrap();
        assert_eq!(r.certificate.dim, 1);
    }

    #[test]
    fn allocation_rule() {
        assert_eq!(allocate(&[1, 1], 1), vec![1, 0]);
        assert_eq!(allocate(&[1, 3, 2], 4), vec![1, 2, 1]);
        assert_eq!(allocate(&[2, 2], 2), vec![1, 1]);
    }

    #[test]
    fn masa_examples() {
        let p = Projection::diagonal(2, &[0]);
        let r = masa_complement_generator(&identity(2), &p, &tol()).unwrap();
        assert_eq!(r.certificate.dim, 1);
        let p = Projection::diagonal(4, &[0, 1]);
        assert!(masa_complement_generator(&identity(4), &p, &tol()).is_ok());
        let p = Projection::diagonal(3, &[0, 1]);
        assert_eq!(
            masa_complement_generator(&identity(3), &p, &tol()).unwrap_err(),
            Error::RankCondition { rank: 2, n: 3 }
        );
        let p = Projection::new(from_real_rows(&[&[0.5, 0.5], &[0.5, 0.5]]), &tol()).unwrap();
        assert!(matches!(
            masa_complement_generator(&identity(2), &p, &tol()),
            Err(Error::PNotInMasa(_))
        ));
    }

    #[test]
    fn real_part_examples() {
        let a = diag_real(&[1.0, 2.0]);
        let r = real_part_generator(&a, &tol()).unwrap();
        let re = hermitian_part(&r.g);
        assert!(fro(&(re - &a)) <= 1e-12);
        assert_eq!(r.certificate.dim, 1);
        assert_eq!(
            real_part_generator(&(identity(3) * c(2.0)), &tol()).unwrap_err(),
            Error::ScalarInput
        );
        let a = diag_real(&[1.0, 1.0, 2.0, 3.0, 3.0]);
        let r = real_part_generator(&a, &tol()).unwrap();
        assert!(fro(&(hermitian_part(&r.g) - &a)) <= 1e-12);
    }

    #[test]
    fn ceiling_examples() {
        assert_eq!(ceiling_m(4, 2), 2);
        assert_eq!(ceiling_m(5, 1), 4);
        let plan = ceiling_plan(6, 3, &tol()).unwrap();
        assert_eq!(plan.m, 2);
        assert_eq!(plan.certificate.dim, 1);
        let plan = ceiling_plan(2, 1, &tol()).unwrap();
        assert_eq!(plan.certificate.dim, 1);
        assert_eq!(
            ceiling_plan(5, 3, &tol()).unwrap_err(),
            Error::KTooLarge { n: 5, k: 3 }
        );
        assert_eq!(ceiling_feasible(5, 1, 3), FeasibilityVerdict::PartAboveK);
        assert_eq!(ceiling_feasible(4, 2, 1), FeasibilityVerdict::TooFewParts);
    }
}
