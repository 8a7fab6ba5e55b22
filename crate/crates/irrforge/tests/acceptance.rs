//! Acceptance criteria. Runs without the libtest harness so that one
//! PASS/FAIL line per criterion is always printed.

mod common;

use std::time::{Duration, Instant};

use common::*;
use irrforge::generators::{
    ceiling_feasible, ceiling_m, ceiling_plan, conjugation_generator, key_construction,
    pair_families, FeasibilityVerdict,
};
use irrforge::numkernel::{
    c, commutator, diag_real, fro, from_real_rows, identity, inverse, numeric_rank, op_norm,
    range_projection, CMatrix, Tolerances, C,
};
use irrforge::oracle::{
    default_max_len, random_invertible, random_matrix, random_unitary, word_algebra_dim, Seed,
};
use irrforge::similarity::{
    jordan_chevalley, rank_similarity_unitary, reducing_projection_witness,
    similar_to_irreducible_normal, similar_to_irreducible_spectral, strong_reducibility_detect,
    Detection, NormalOutcome, ObstructionKind, SimilarityResult, SpectralOutcome,
};
use irrforge::staralg::commutant;
use irrforge::{Error, Necessity};
use rand::Rng;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn tol() -> Tolerances {
    Tolerances::default()
}

fn within(start: Instant, limit: Duration) -> Result<(), String> {
    let el = start.elapsed();
    if el <= limit {
        Ok(())
    } else {
        Err(format!(
            "took {:.1}s, limit {}s",
            el.as_secs_f64(),
            limit.as_secs()
        ))
    }
}

fn pair_families_all() -> Outcome {
    let start = Instant::now();
    let mut worst_orth: f64 = 0.0;
    let mut worst_ratio = f64::INFINITY;
    let mut cases = 0;
    for total in 2..=12 {
        for n1 in 1..total {
            let n2 = total - n1;
            let pf = pair_families(n1, n2, &tol()).map_err(|e| format!("({n1},{n2}): {e}"))?;
            let orth = pf.orthogonality_residual();
            if orth > 1e-12 {
                return Err(format!("({n1},{n2}) orthogonality {orth:e}"));
            }
            if pf.certificate.dim != 1 || pf.certificate.gap_ratio < 10.0 {
                return Err(format!(
                    "({n1},{n2}) dim {} ratio {}",
                    pf.certificate.dim, pf.certificate.gap_ratio
                ));
            }
            worst_orth = worst_orth.max(orth);
            worst_ratio = worst_ratio.min(pf.certificate.gap_ratio);
            cases += 1;
        }
    }
    within(start, Duration::from_secs(60))?;
    Ok(format!(
        "{cases} shapes, max orthogonality {worst_orth:.1e}, min gap ratio {worst_ratio:.1}, {:.1}s",
        start.elapsed().as_secs_f64()
    ))
}

fn normal_positive() -> Outcome {
    let start = Instant::now();
    let mut worst: f64 = 0.0;
    for i in 0..100 {
        let nm = good_normal(Seed(2000).derive(i));
        let n = nm.nrows();
        let r = match similar_to_irreducible_normal(&nm, &tol()) {
            Ok(NormalOutcome::Similar(r)) => r,
            Ok(NormalOutcome::Obstructed(o)) => {
                return Err(format!("instance {i}: obstruction {o:?}"))
            }
            Err(e) => return Err(format!("instance {i}: {e}")),
        };
        if r.certificate.commutant_dim != 1 || r.certificate.word_dim != Some(n * n) {
            return Err(format!("instance {i}: certificate {:?}", r.certificate));
        }
        let bound = 1e-8 * r.cond * op_norm(&nm);
        let res = fro(&(&r.x * &nm * &r.x_inv - &r.conjugated)).max(r.inverse_residual);
        if res > bound {
            return Err(format!("instance {i}: residual {res:e} > {bound:e}"));
        }
        worst = worst.max(res / bound);
    }
    within(start, Duration::from_secs(120))?;
    Ok(format!(
        "100 instances, worst residual/bound {worst:.1e}, {:.1}s",
        start.elapsed().as_secs_f64()
    ))
}

/// Normal matrices violating exactly one of the two conditions.
fn violating_normal(i: u64) -> CMatrix {
    let seed = Seed(3000).derive(i);
    let mut rng = seed.rng();
    if i.is_multiple_of(2) {
        // One multiplicity above n/2, at least three distinct eigenvalues.
        let n = rng.random_range(5..=8);
        let big = n / 2 + 1;
        let rest = n - big;
        let d = rng.random_range(2..=rest);
        let mut mults = vec![big];
        mults.extend(random_mults(rest, d, rest, seed.derive(5)).unwrap());
        normal_with_mults(&mults, 0.1, seed.derive(6)).0
    } else {
        // Exactly two eigenvalues, both of multiplicity n/2.
        let n = [4, 6, 8][rng.random_range(0..3)];
        normal_with_mults(&[n / 2, n / 2], 0.1, seed.derive(6)).0
    }
}

fn normal_negative() -> Outcome {
    let start = Instant::now();
    let mut worst: f64 = 0.0;
    for i in 0..50 {
        let nm = violating_normal(i);
        let n = nm.nrows();
        let o = match similar_to_irreducible_normal(&nm, &tol()) {
            Ok(NormalOutcome::Obstructed(o)) => o,
            Ok(NormalOutcome::Similar(_)) => return Err(format!("instance {i}: no obstruction")),
            Err(e) => return Err(format!("instance {i}: {e}")),
        };
        if !o.verify(&nm, &tol()) {
            return Err(format!("instance {i}: witness does not re-verify"));
        }
        let reason = match strong_reducibility_detect(&nm, &tol()) {
            Ok(Detection::Detected(r)) => r,
            other => return Err(format!("instance {i}: detection {other:?}")),
        };
        for k in 0..20 {
            let x = random_invertible(n, 100.0, Seed(3500).derive(100 * i + k));
            let q = reducing_projection_witness(&nm, &x, Some(&reason), &tol())
                .map_err(|e| format!("instance {i}/{k}: {e}"))?;
            if q.rank() == 0 || q.rank() == n {
                return Err(format!("instance {i}/{k}: trivial projection"));
            }
            let conj = &x * &nm * inverse(&x).unwrap();
            let res = fro(&commutator(&conj, q.matrix()));
            let bound = 1e-8 * op_norm(&nm);
            if res > bound {
                return Err(format!("instance {i}/{k}: commutator {res:e} > {bound:e}"));
            }
            worst = worst.max(res / bound);
        }
    }
    within(start, Duration::from_secs(120))?;
    Ok(format!(
        "50 obstructions re-verified, 1000 witnesses, worst residual/bound {worst:.1e}, {:.1}s",
        start.elapsed().as_secs_f64()
    ))
}

/// Ranks `r0, r1, ..., rN` satisfying the necessary conditions, `n <= 10`.
fn valid_ranks(seed: Seed) -> Vec<usize> {
    let mut rng = seed.rng();
    loop {
        let n = rng.random_range(3..=10);
        let r0 = rng.random_range(1..=n / 2);
        let mut rest = n - r0;
        let mut ranks = vec![r0];
        while rest > 0 {
            let r = rng.random_range(1..=r0.min(rest));
            ranks.push(r);
            rest -= r;
        }
        if ranks.len() >= 3 {
            return ranks;
        }
    }
}

fn key_construction_criterion() -> Outcome {
    let mut worst: f64 = 0.0;
    for i in 0..50 {
        let seed = Seed(4000).derive(i);
        let ranks = valid_ranks(seed);
        let n: usize = ranks.iter().sum();
        let parts = rotated_partition(&ranks, &random_unitary(n, seed.derive(1)));
        let r =
            conjugation_generator(&parts, &tol()).map_err(|e| format!("ranks {ranks:?}: {e}"))?;
        let v = r.key.v.matrix();
        let res = fro(&(v * v.adjoint() - parts[0].matrix()));
        if res > 1e-12 {
            return Err(format!("ranks {ranks:?}: ||VV* - P0|| = {res:e}"));
        }
        if r.certificate.dim != 1 {
            return Err(format!(
                "ranks {ranks:?}: commutant dim {}",
                r.certificate.dim
            ));
        }
        worst = worst.max(res);
    }
    let t = tol();
    let two = rotated_partition(&[2, 2], &identity(4));
    match conjugation_generator(&two, &t) {
        Err(Error::NecessityViolated(Necessity::TooFewParts)) => {}
        other => return Err(format!("N = 1 not rejected: {:?}", other.map(|_| ()))),
    }
    match key_construction(&two[0], &two[1..], &[two[0].matrix().clone()], &t) {
        Err(Error::NecessityViolated(Necessity::TooFewParts)) => {}
        other => {
            return Err(format!(
                "key with N = 1 not rejected: {:?}",
                other.map(|_| ())
            ))
        }
    }
    let big_part = rotated_partition(&[2, 3, 1], &identity(6));
    match conjugation_generator(&big_part, &t) {
        Err(Error::NecessityViolated(Necessity::PartExceedsP0 { index: 1 })) => {}
        other => {
            return Err(format!(
                "rank(P1) > rank(P0) not rejected: {:?}",
                other.map(|_| ())
            ))
        }
    }
    let big_p0 = rotated_partition(&[3, 1, 1], &identity(5));
    match conjugation_generator(&big_p0, &t) {
        Err(Error::NecessityViolated(Necessity::P0ExceedsComplement)) => {}
        other => {
            return Err(format!(
                "rank(P0) > n/2 not rejected: {:?}",
                other.map(|_| ())
            ))
        }
    }
    Ok(format!(
        "50 inputs, max ||VV* - P0|| {worst:.1e}, 3 crafted rejections fire"
    ))
}

fn ceiling_criterion() -> Outcome {
    let mut certified = 0;
    for n in 2..=20usize {
        for k in 1..=n / 2 {
            let expected = 2usize.max(n.div_ceil(k) - 1);
            let m = ceiling_m(n, k);
            if m != expected {
                return Err(format!("n={n} k={k}: m={m}, expected {expected}"));
            }
            if ceiling_feasible(n, k, m) != FeasibilityVerdict::Feasible {
                return Err(format!("n={n} k={k}: m={m} judged infeasible"));
            }
            for mp in 0..m {
                if ceiling_feasible(n, k, mp) == FeasibilityVerdict::Feasible {
                    return Err(format!("n={n} k={k}: m'={mp} < m accepted"));
                }
            }
            if n <= 10 {
                let plan = ceiling_plan(n, k, &tol()).map_err(|e| format!("n={n} k={k}: {e}"))?;
                if plan.m != m || plan.q.len() != m || plan.certificate.dim != 1 {
                    return Err(format!(
                        "n={n} k={k}: plan m={} dim {}",
                        plan.m, plan.certificate.dim
                    ));
                }
                if plan.p.rank() > k || plan.q.iter().any(|q| q.rank() > k) {
                    return Err(format!("n={n} k={k}: a projection exceeds rank k"));
                }
                certified += 1;
            }
        }
    }
    Ok(format!(
        "formula exact for n <= 20, {certified} plans certified for n <= 10"
    ))
}

fn jordan_chevalley_criterion() -> Outcome {
    let mut worst: f64 = 0.0;
    for i in 0..100 {
        let seed = Seed(6000).derive(i);
        let n = seed.rng().random_range(2..=8);
        let data = jordan_instance(n, 3, 0.5, 1e3, seed.derive(1));
        let d = jordan_chevalley(&data.t, &tol()).map_err(|e| format!("instance {i}: {e}"))?;
        let r = d.residuals(&data.t);
        let m = [r.reassembly, r.commutation, r.nilpotency, r.idempotency]
            .into_iter()
            .fold(0.0, f64::max);
        if m > 1e-8 {
            return Err(format!("instance {i}: residuals {r:?}"));
        }
        if d.values.len() != data.values.len() {
            return Err(format!(
                "instance {i}: {} eigenvalues, expected {}",
                d.values.len(),
                data.values.len()
            ));
        }
        worst = worst.max(m);
    }
    Ok(format!(
        "100 instances, worst relative residual {worst:.1e}"
    ))
}

fn mixed_instance(i: u64) -> CMatrix {
    let seed = Seed(7000).derive(i);
    let mut rng = seed.rng();
    let n = rng.random_range(1..=5);
    match i % 5 {
        0 => random_matrix(n, seed.derive(1)),
        1 => {
            let d = rng.random_range(1..=n);
            let mults = random_mults(n, d, n, seed.derive(2)).unwrap();
            normal_with_mults(&mults, 0.1, seed.derive(3)).0
        }
        2 => {
            // Reducible and non-normal: a block-diagonal conjugate by a unitary.
            let k = rng.random_range(1..=n);
            let mut t = CMatrix::zeros(n, n);
            let a = random_matrix(k, seed.derive(4));
            let b = random_matrix(n - k, seed.derive(5));
            t.view_mut((0, 0), (k, k)).copy_from(&a);
            t.view_mut((k, k), (n - k, n - k)).copy_from(&b);
            let u = random_unitary(n, seed.derive(6));
            &u * t * u.adjoint()
        }
        3 => {
            let data = jordan_instance(n, 3, 0.5, 10.0, seed.derive(7));
            data.t
        }
        _ => {
            // Upper triangular with a repeated diagonal entry.
            let mut t = random_matrix(n, seed.derive(8)).upper_triangle();
            if n > 1 {
                t[(n - 1, n - 1)] = t[(0, 0)];
            }
            t
        }
    }
}

fn oracle_agreement() -> Outcome {
    let t = tol();
    let (mut irreducible, mut reducible) = (0, 0);
    for i in 0..200 {
        let m = mixed_instance(i);
        let n = m.nrows();
        let cb = commutant(n, std::slice::from_ref(&m), true, &t)
            .map_err(|e| format!("instance {i}: {e}"))?;
        let words = word_algebra_dim(n, std::slice::from_ref(&m), default_max_len(n), &t)
            .map_err(|e| format!("instance {i}: {e}"))?;
        if (cb.dim == 1) != (words.final_dim == n * n) {
            return Err(format!(
                "instance {i}: commutant dim {} vs word dim {}",
                cb.dim, words.final_dim
            ));
        }
        if cb.dim == 1 {
            irreducible += 1;
        } else {
            reducible += 1;
        }
    }
    Ok(format!(
        "200 instances ({irreducible} irreducible, {reducible} reducible), 0 disagreements"
    ))
}

fn rank_invariance() -> Outcome {
    let t = tol();
    let mut worst: f64 = 0.0;
    for i in 0..100 {
        let seed = Seed(8000).derive(i);
        let mut rng = seed.rng();
        let n = rng.random_range(2..=8);
        let r = rng.random_range(0..=n);
        let tm = random_rank(n, r, seed.derive(1));
        let x = random_invertible(n, 100.0, seed.derive(2));
        let conj = &x * &tm * inverse(&x).unwrap();
        let (ra, rb) = (numeric_rank(&tm, &t), numeric_rank(&conj, &t));
        if ra != r || rb != r {
            return Err(format!("pair {i}: ranks {ra}, {rb}, expected {r}"));
        }
        let u = rank_similarity_unitary(&tm, &x, &t).map_err(|e| format!("pair {i}: {e}"))?;
        let lhs = range_projection(&conj, &t);
        let rhs = u.adjoint() * range_projection(&tm, &t).matrix() * &u;
        let res = fro(&(lhs.matrix() - rhs));
        if res > 1e-8 {
            return Err(format!("pair {i}: ||R(XTX^-1) - U*R(T)U|| = {res:e}"));
        }
        worst = worst.max(res);
    }
    Ok(format!(
        "100 pairs, ranks equal, worst residual {worst:.1e}"
    ))
}

fn fuglede() -> Outcome {
    let t = tol();
    let mut dims = Vec::new();
    for i in 0..50 {
        let seed = Seed(9000).derive(i);
        let mut rng = seed.rng();
        let n = rng.random_range(1..=8);
        let d = rng.random_range(1..=n);
        let mults = random_mults(n, d, n, seed.derive(1)).unwrap();
        let (nm, _) = normal_with_mults(&mults, 0.1, seed.derive(2));
        let a = commutant(n, std::slice::from_ref(&nm), false, &t).map_err(|e| e.to_string())?;
        let b = commutant(n, std::slice::from_ref(&nm), true, &t).map_err(|e| e.to_string())?;
        let expected: usize = mults.iter().map(|m| m * m).sum();
        if a.dim != b.dim || a.dim != expected {
            return Err(format!(
                "instance {i}: dims {} / {} (expected {expected})",
                a.dim, b.dim
            ));
        }
        dims.push(a.dim);
    }
    Ok(format!(
        "50 normals, dims agree (range {}..={})",
        dims.iter().min().unwrap(),
        dims.iter().max().unwrap()
    ))
}

fn check_irreducible_result(r: &SimilarityResult, input: &CMatrix) -> Result<(), String> {
    if !r.certificate.is_irreducible() || r.certificate.word_dim != Some(4) {
        return Err(format!("certificate {:?}", r.certificate));
    }
    let res = r.conjugation_residual(input) + r.inverse_residual;
    if res > 1e-8 * r.cond * (1.0 + op_norm(input)) {
        return Err(format!("residual {res:e}"));
    }
    Ok(())
}

fn two_by_two() -> Outcome {
    let t = tol();
    for i in 0..20 {
        let (nm, _) = normal_with_mults(&[1, 1], 0.1, Seed(10_000).derive(i));
        match similar_to_irreducible_normal(&nm, &t) {
            Ok(NormalOutcome::Similar(r)) => {
                check_irreducible_result(&r, &nm).map_err(|e| format!("normal {i}: {e}"))?
            }
            other => return Err(format!("normal {i}: {:?}", other.map(|_| ()))),
        }
    }
    let crafted = [
        from_real_rows(&[&[1.0, 1.0], &[0.0, 1.0]]),
        from_real_rows(&[&[0.0, 1.0], &[0.0, 0.0]]),
        from_real_rows(&[&[1.0, 2.0], &[3.0, 4.0]]),
        diag_real(&[1.0, -1.0]),
        CMatrix::from_fn(2, 2, |i, j| {
            if i == j {
                C::new(0.0, (i + 1) as f64)
            } else {
                c(1e-3)
            }
        }),
    ];
    for (i, m) in crafted.iter().enumerate() {
        match similar_to_irreducible_spectral(m, &t) {
            Ok(SpectralOutcome::Similar(r)) => {
                check_irreducible_result(&r, m).map_err(|e| format!("crafted {i}: {e}"))?
            }
            other => return Err(format!("crafted {i}: {:?}", other.map(|_| ()))),
        }
    }
    let scalars = [c(2.0), C::new(1.0, 1.0), c(0.0)];
    for z in scalars {
        let s = scalar(2, z);
        let normal = similar_to_irreducible_normal(&s, &t);
        let spectral = similar_to_irreducible_spectral(&s, &t);
        let ok = matches!(&normal, Ok(NormalOutcome::Obstructed(o)) if o.kind == ObstructionKind::ScalarIn2x2 && o.verify(&s, &t))
            && matches!(&spectral, Ok(SpectralOutcome::Obstructed(o)) if o.kind == ObstructionKind::ScalarIn2x2);
        if !ok {
            return Err(format!("scalar {z}: not ScalarIn2x2"));
        }
    }
    Ok("20 normals and 5 crafted inputs certified irreducible, 3 scalars obstructed".into())
}

fn main() {
    let criteria: [Criterion; 10] = [
        (
            "pair families generate M_n for n1 + n2 <= 12",
            pair_families_all,
        ),
        ("normal pipeline, positive side", normal_positive),
        (
            "normal pipeline, obstructions and witnesses",
            normal_negative,
        ),
        (
            "key construction and necessity rejections",
            key_construction_criterion,
        ),
        ("ceiling formula and feasibility", ceiling_criterion),
        ("Jordan-Chevalley residuals", jordan_chevalley_criterion),
        ("oracle agreement", oracle_agreement),
        ("rank invariance under similarity", rank_invariance),
        ("Fuglede dimension equality", fuglede),
        ("2x2 boundary", two_by_two),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let outcome = std::panic::catch_unwind(f).unwrap_or_else(|_| Err("panicked".into()));
        match outcome {
            Ok(detail) => println!("criterion {:>2} PASS  {name}: {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name}: {why}", i + 1);
            }
        }
    }
    println!(
        "{} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
