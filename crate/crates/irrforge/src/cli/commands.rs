use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use super::format::{parse_complex, Format, MatrixFile};
use super::report::Report;
use super::*;
use crate::error::Error;
use crate::generators::{self, FeasibilityVerdict};
use crate::numkernel::{
    commutator, condition_number, fro, identity, inverse, normality_residual, op_norm, CMatrix,
    Projection, Tolerances, C,
};
use crate::oracle::{self, Seed};
use crate::similarity::{
    jordan_chevalley, reducing_projection_witness, similar_to_irreducible_normal,
    similar_to_irreducible_spectral, strong_reducibility_detect, Detection, NormalOutcome,
    SimilarityResult, SpectralOutcome,
};

pub(super) struct Failure {
    pub code: i32,
    pub message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_USAGE,
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Self {
            code: exit_code_for(&e),
            message: e.to_string(),
        }
    }
}

/// Exit code for a library error: bad input is a usage error, violated
/// hypotheses of a construction are rejections, the rest are numerical.
pub fn exit_code_for(e: &Error) -> i32 {
    use Error::*;
    match e {
        DimensionMismatch { .. }
        | InvalidMatrix(_)
        | InvalidTolerances(_)
        | NotHermitian(_)
        | NotPsd(_)
        | NotNormal(_)
        | NotProjection(_)
        | InvalidArgument(_) => EXIT_USAGE,
        RankMismatch(..)
        | NotOrthogonal(_)
        | InvalidRanks(_)
        | NecessityViolated(_)
        | PartitionInvalid(_)
        | PNotInMasa(_)
        | RankCondition { .. }
        | ScalarInput
        | KTooLarge { .. }
        | HypothesisViolated(_)
        | ShapeInfeasible(_)
        | NotApplicable(_) => EXIT_REJECTED,
        ClusterAmbiguous(_)
        | MarginTooSmall { .. }
        | CertificationFailed(_)
        | CornerGenerationFailed(_)
        | SpectrumTooClustered(_)
        | NotStabilized(_)
        | OracleDisagreement { .. } => EXIT_NUMERICAL,
    }
}

type CmdResult = Result<Outcome, Failure>;

struct Ctx<'a> {
    g: &'a Globals,
    tol: Tolerances,
}

impl Ctx<'_> {
    fn report(&self, command: &str, verdict: &str) -> Report {
        Report::new(command, verdict, &self.tol, self.g.seed)
    }

    fn read(&self, path: &Path) -> Result<CMatrix, Failure> {
        MatrixFile::read(path)
            .map(|f| f.matrix)
            .map_err(Failure::usage)
    }

    fn out_dir(&self) -> PathBuf {
        self.g.out.clone().unwrap_or_else(|| PathBuf::from("."))
    }

    fn write_matrix(
        &self,
        report: &mut Report,
        name: &str,
        m: &CMatrix,
        provenance: &str,
    ) -> Result<(), Failure> {
        let dir = self.out_dir();
        std::fs::create_dir_all(&dir)
            .map_err(|e| Failure::usage(format!("{}: {e}", dir.display())))?;
        let path = dir.join(format!("{name}.{}", self.g.format.extension()));
        let mut file = MatrixFile::named(m.clone(), name);
        file.seed = self.g.seed;
        file.provenance = Some(provenance.to_string());
        std::fs::write(&path, file.render(self.g.format))
            .map_err(|e| Failure::usage(format!("{}: {e}", path.display())))?;
        report.files.push(path.display().to_string());
        Ok(())
    }

    fn finish(&self, report: Report, code: i32) -> CmdResult {
        let text = match self.g.format {
            Format::Structured => report.to_json(),
            Format::Text => report.to_text(),
        };
        if let Some(dir) = &self.g.out {
            std::fs::create_dir_all(dir)
                .map_err(|e| Failure::usage(format!("{}: {e}", dir.display())))?;
            let path = dir.join(format!("report.{}", self.g.format.extension()));
            std::fs::write(&path, &text)
                .map_err(|e| Failure::usage(format!("{}: {e}", path.display())))?;
        }
        Ok(Outcome { code, stdout: text })
    }
}

pub(super) fn dispatch(cli: &Cli) -> CmdResult {
    let tol = cli
        .globals
        .tolerances()
        .map_err(|e| Failure::usage(e.to_string()))?;
    let ctx = Ctx {
        g: &cli.globals,
        tol,
    };
    match &cli.command {
        Command::Check { path } => check(&ctx, path),
        Command::Similar { path, spectral } => similar(&ctx, path, *spectral),
        Command::Witness { t, x } => witness(&ctx, t, x.as_deref()),
        Command::Gen(g) => gen(&ctx, g),
        Command::Dunford { path } => dunford(&ctx, path),
        Command::Random(r) => random(&ctx, r),
        Command::Verify { dir } => verify(&ctx, dir),
    }
}

/// Entries as `[[re, im], ...]` rows.
fn matrix_value(m: &CMatrix) -> Value {
    let rows: Vec<Vec<[f64; 2]>> = (0..m.nrows())
        .map(|i| {
            (0..m.ncols())
                .map(|j| [m[(i, j)].re, m[(i, j)].im])
                .collect()
        })
        .collect();
    json!(rows)
}

fn check(ctx: &Ctx, path: &Path) -> CmdResult {
    let t = ctx.read(path)?;
    let cert = oracle::certify(&t, &ctx.tol, oracle::default_max_len(t.nrows()))?;
    let (verdict, code) = if cert.is_irreducible() {
        ("irreducible", EXIT_OK)
    } else {
        ("reducible", EXIT_REDUCIBLE)
    };
    let report = ctx
        .report("check", verdict)
        .residual("commutant_margin", cert.margin)
        .with_payload(&cert);
    ctx.finish(report, code)
}

fn similarity_report(
    ctx: &Ctx,
    command: &str,
    t: &CMatrix,
    r: &SimilarityResult,
) -> Result<Report, Failure> {
    let mut report = ctx
        .report(command, "similar")
        .with_payload(r.summary())
        .residual("conjugation", r.conjugation_residual(t))
        .residual("inverse", r.inverse_residual);
    if ctx.g.emit_matrices {
        ctx.write_matrix(&mut report, "X", &r.x, "similarity")?;
        ctx.write_matrix(&mut report, "X_inv", &r.x_inv, "similarity")?;
        ctx.write_matrix(&mut report, "XTX_inv", &r.conjugated, "similarity")?;
    }
    Ok(report)
}

#[derive(Serialize)]
struct ObstructionPayload<'a> {
    obstruction: &'a crate::similarity::Obstruction,
    verified: bool,
}

fn similar(ctx: &Ctx, path: &Path, spectral: bool) -> CmdResult {
    let t = ctx.read(path)?;
    let command = if spectral {
        "similar --spectral"
    } else {
        "similar"
    };
    let obstructed = |o: &crate::similarity::Obstruction| {
        let payload = ObstructionPayload {
            obstruction: o,
            verified: o.verify(&t, &ctx.tol),
        };
        ctx.report(command, "obstruction").with_payload(payload)
    };
    if spectral {
        match similar_to_irreducible_spectral(&t, &ctx.tol)? {
            SpectralOutcome::Similar(r) => {
                ctx.finish(similarity_report(ctx, command, &t, &r)?, EXIT_OK)
            }
            SpectralOutcome::Obstructed(o) => ctx.finish(obstructed(&o), EXIT_REJECTED),
            SpectralOutcome::Inconclusive(why) => ctx.finish(
                ctx.report(command, "inconclusive").with_payload(why),
                EXIT_INCONCLUSIVE,
            ),
        }
    } else {
        match similar_to_irreducible_normal(&t, &ctx.tol)? {
            NormalOutcome::Similar(r) => ctx.finish(
                similarity_report(ctx, command, &t, &r)?
                    .residual("input_normality", normality_residual(&t)),
                EXIT_OK,
            ),
            NormalOutcome::Obstructed(o) => ctx.finish(obstructed(&o), EXIT_REJECTED),
        }
    }
}

fn witness(ctx: &Ctx, t_path: &Path, x_path: Option<&Path>) -> CmdResult {
    let t = ctx.read(t_path)?;
    let n = t.nrows();
    let (x, x_source) = match (x_path, ctx.g.seed) {
        (Some(p), _) => (ctx.read(p)?, "file"),
        (None, Some(s)) => (
            oracle::random_invertible(n, 100.0, Seed(s)),
            "random_invertible(cond <= 100)",
        ),
        (None, None) => (identity(n), "identity"),
    };
    let reason = match strong_reducibility_detect(&t, &ctx.tol) {
        Ok(Detection::Detected(r)) => r,
        Ok(Detection::NotDetected) => {
            let report = ctx.report("witness", "not_detected").with_payload(json!({
                "explanation": "no eigenvalue has rank(λI - T) < n/2 and I, T, T^2 are linearly independent",
            }));
            return ctx.finish(report, EXIT_REJECTED);
        }
        Err(Error::NotApplicable(why)) => {
            let report = ctx
                .report("witness", "not_applicable")
                .with_payload(json!({ "explanation": why }));
            return ctx.finish(report, EXIT_REJECTED);
        }
        Err(e) => return Err(e.into()),
    };
    let q = reducing_projection_witness(&t, &x, Some(&reason), &ctx.tol)?;
    let xi = inverse(&x).ok_or_else(|| Failure::usage("X is singular"))?;
    let conj = &x * &t * &xi;
    let comm = fro(&commutator(&conj, q.matrix()));
    let mut report = ctx
        .report("witness", "detected")
        .with_payload(json!({
            "reason": reason,
            "x_source": x_source,
            "x_cond": condition_number(&x),
            "projection_rank": q.rank(),
            "projection": matrix_value(q.matrix()),
        }))
        .residual("commutator", comm)
        .residual("commutator_relative", comm / (1.0 + op_norm(&conj)));
    if ctx.g.emit_matrices {
        ctx.write_matrix(&mut report, "Q", q.matrix(), "reducing projection")?;
        ctx.write_matrix(&mut report, "X", &x, x_source)?;
    }
    ctx.finish(report, EXIT_OK)
}

fn cert_payload(cb: &crate::staralg::CommutantBasis) -> Value {
    json!({ "commutant_dim": cb.dim, "margin": cb.margin, "gap_ratio": cb.gap_ratio })
}

fn gen(ctx: &Ctx, g: &GenCommand) -> CmdResult {
    let tol = &ctx.tol;
    match g {
        GenCommand::Pairs { n1, n2 } => {
            let pf = generators::pair_families(*n1, *n2, tol)?;
            let mut report = ctx
                .report("gen pairs", "generated")
                .with_payload(
                    json!({ "n": pf.dim(), "certificate": cert_payload(&pf.certificate) }),
                )
                .residual("orthogonality", pf.orthogonality_residual());
            for (i, e) in pf.e.iter().enumerate() {
                ctx.write_matrix(&mut report, &format!("E{}", i + 1), e.matrix(), "gen pairs")?;
            }
            for (i, f) in pf.f.iter().enumerate() {
                ctx.write_matrix(&mut report, &format!("F{}", i + 1), f.matrix(), "gen pairs")?;
            }
            ctx.finish(report, EXIT_OK)
        }
        GenCommand::Ranks { ranks } => {
            let b = generators::rank_prescribed_generators(ranks, tol)?;
            let mut report = ctx.report("gen ranks", "generated").with_payload(
                json!({ "ranks": b.ranks, "certificate": cert_payload(&b.certificate) }),
            );
            for (i, a) in b.matrices.iter().enumerate() {
                ctx.write_matrix(&mut report, &format!("A{}", i + 1), a, "gen ranks")?;
            }
            ctx.finish(report, EXIT_OK)
        }
        GenCommand::Masa { n, k, basis } => {
            if *k > *n || *n == 0 {
                return Err(Failure::usage("need 0 < n and k <= n"));
            }
            let basis = match basis {
                Some(p) => ctx.read(p)?,
                None => identity(*n),
            };
            crate::numkernel::check_same_dim(*n, &basis)?;
            let p = Projection::from_orthonormal_columns(&basis.columns(0, *k).into_owned());
            let r = generators::masa_complement_generator(&basis, &p, tol)?;
            let mut report = ctx
                .report("gen masa", "generated")
                .with_payload(json!({ "k": k, "certificate": cert_payload(&r.certificate) }));
            ctx.write_matrix(&mut report, "U", &r.u, "gen masa")?;
            for (i, m) in r.generating_set.iter().enumerate() {
                ctx.write_matrix(&mut report, &format!("G{}", i + 1), m, "gen masa")?;
            }
            ctx.finish(report, EXIT_OK)
        }
        GenCommand::Ceiling { n, k } => {
            let plan = generators::ceiling_plan(*n, *k, tol)?;
            let below: Vec<Value> = (1..plan.m)
                .map(|m| json!({ "m": m, "verdict": generators::ceiling_feasible(*n, *k, m) }))
                .collect();
            debug_assert!(
                generators::ceiling_feasible(*n, *k, plan.m) == FeasibilityVerdict::Feasible
            );
            let mut report = ctx.report("gen ceiling", "generated").with_payload(json!({
                "m": plan.m,
                "ranks": plan.q.iter().map(Projection::rank).collect::<Vec<_>>(),
                "rejected_below": below,
                "certificate": cert_payload(&plan.certificate),
            }));
            ctx.write_matrix(&mut report, "P", plan.p.matrix(), "gen ceiling")?;
            for (i, q) in plan.q.iter().enumerate() {
                ctx.write_matrix(
                    &mut report,
                    &format!("Q{}", i + 1),
                    q.matrix(),
                    "gen ceiling",
                )?;
            }
            ctx.finish(report, EXIT_OK)
        }
        GenCommand::Realpart { path } => {
            let a = ctx.read(path)?;
            let r = generators::real_part_generator(&a, tol)?;
            let mut report = ctx
                .report("gen realpart", "generated")
                .with_payload(json!({ "certificate": cert_payload(&r.certificate) }));
            ctx.write_matrix(&mut report, "B", &r.b, "gen realpart")?;
            ctx.write_matrix(&mut report, "G", &r.g, "gen realpart")?;
            ctx.finish(report, EXIT_OK)
        }
        GenCommand::Conjugation { ranks } => {
            let n: usize = ranks.iter().sum();
            if let Err(why) = generators::conjugation_necessity(&ranks[1..], n) {
                let report = ctx
                    .report("gen conjugation", "rejected")
                    .with_payload(json!({ "necessity": why, "explanation": why.to_string() }));
                return ctx.finish(report, EXIT_REJECTED);
            }
            let mut start = 0;
            let parts: Vec<Projection> = ranks
                .iter()
                .map(|&r| {
                    let idx: Vec<usize> = (start..start + r).collect();
                    start += r;
                    Projection::diagonal(n, &idx)
                })
                .collect();
            let r = generators::conjugation_generator(&parts, tol)?;
            let conj = r.u.adjoint() * parts[0].matrix() * &r.u;
            let vv = r.key.v.matrix() * r.key.v.matrix().adjoint();
            let mut report = ctx
                .report("gen conjugation", "generated")
                .with_payload(
                    json!({ "ranks": ranks, "certificate": cert_payload(&r.certificate) }),
                )
                .residual("unitarity", fro(&(r.u.adjoint() * &r.u - identity(n))))
                .residual("key_vv_star_minus_p0", fro(&(vv - parts[0].matrix())));
            ctx.write_matrix(&mut report, "U", &r.u, "gen conjugation")?;
            ctx.write_matrix(&mut report, "UstarP0U", &conj, "gen conjugation")?;
            ctx.finish(report, EXIT_OK)
        }
    }
}

fn dunford(ctx: &Ctx, path: &Path) -> CmdResult {
    let t = ctx.read(path)?;
    let d = jordan_chevalley(&t, &ctx.tol)?;
    let res = d.residuals(&t);
    let values: Vec<[f64; 2]> = d.values.iter().map(|z| [z.re, z.im]).collect();
    let mut report = ctx
        .report("dunford", "decomposed")
        .with_payload(
            json!({ "values": values, "mults": d.mults, "cond_y": condition_number(&d.y) }),
        )
        .residual("reassembly", res.reassembly)
        .residual("commutation", res.commutation)
        .residual("nilpotency", res.nilpotency)
        .residual("idempotency", res.idempotency);
    ctx.write_matrix(&mut report, "S", &d.s, "dunford")?;
    ctx.write_matrix(&mut report, "K", &d.k, "dunford")?;
    ctx.finish(report, EXIT_OK)
}

/// `"1:2,2+i:1"` into values and multiplicities.
fn parse_spectrum(s: &str) -> Result<(Vec<C>, Vec<usize>), String> {
    let mut values = Vec::new();
    let mut mults = Vec::new();
    for item in s.split(',').map(str::trim).filter(|x| !x.is_empty()) {
        let (v, m) = item
            .rsplit_once(':')
            .ok_or_else(|| format!("spectrum item {item:?} is not value:multiplicity"))?;
        values.push(parse_complex(v.trim())?);
        let m: usize = m
            .trim()
            .parse()
            .map_err(|_| format!("bad multiplicity in {item:?}"))?;
        if m == 0 {
            return Err(format!("zero multiplicity in {item:?}"));
        }
        mults.push(m);
    }
    if values.is_empty() {
        return Err("empty spectrum".into());
    }
    Ok((values, mults))
}

fn random(ctx: &Ctx, r: &RandomCommand) -> CmdResult {
    let seed = ctx
        .g
        .seed
        .ok_or_else(|| Failure::usage("random requires --seed"))?;
    let (m, name, provenance) = match r {
        RandomCommand::Normal { spectrum } => {
            let (values, mults) = parse_spectrum(spectrum).map_err(Failure::usage)?;
            let m = oracle::random_normal(&values, &mults, Seed(seed))?;
            (m, "random-normal", format!("random_normal {spectrum}"))
        }
        RandomCommand::Invertible { n, cond } => {
            if *n == 0 || !cond.is_finite() || *cond < 1.0 {
                return Err(Failure::usage("need n > 0 and a finite cond >= 1"));
            }
            let m = oracle::random_invertible(*n, *cond, Seed(seed));
            (
                m,
                "random-invertible",
                format!("random_invertible {n} {cond}"),
            )
        }
    };
    let mut file = MatrixFile::named(m.clone(), name);
    file.seed = Some(seed);
    file.provenance = Some(provenance.clone());
    let text = file.render(ctx.g.format);
    if ctx.g.out.is_none() {
        return Ok(Outcome {
            code: EXIT_OK,
            stdout: text,
        });
    }
    let mut report = ctx
        .report("random", "generated")
        .with_payload(json!({ "generator": provenance }))
        .residual("condition_number", condition_number(&m));
    ctx.write_matrix(&mut report, name, &m, &provenance)?;
    ctx.finish(report, EXIT_OK)
}

#[derive(Serialize)]
struct VerifyEntry {
    file: String,
    verdict: String,
    commutant_dim: Option<usize>,
    word_dim: Option<usize>,
    margin: Option<f64>,
    error: Option<String>,
}

fn verify(ctx: &Ctx, dir: &Path) -> CmdResult {
    let mut paths: Vec<PathBuf> = std::fs::read_dir(dir)
        .map_err(|e| Failure::usage(format!("{}: {e}", dir.display())))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| {
            p.is_file() && matches!(p.extension().and_then(|e| e.to_str()), Some("json" | "txt"))
        })
        .collect();
    paths.sort();
    let tol = ctx.tol;
    let entries: Vec<VerifyEntry> = paths
        .par_iter()
        .map(|p| {
            let file = p
                .file_name()
                .map(|f| f.to_string_lossy().into_owned())
                .unwrap_or_default();
            let blank = |verdict: &str, error: String| VerifyEntry {
                file: file.clone(),
                verdict: verdict.into(),
                commutant_dim: None,
                word_dim: None,
                margin: None,
                error: Some(error),
            };
            let t = match MatrixFile::read(p) {
                Ok(f) => f.matrix,
                Err(e) => return blank("unreadable", e),
            };
            match oracle::certify(&t, &tol, oracle::default_max_len(t.nrows())) {
                Ok(c) => VerifyEntry {
                    file: file.clone(),
                    verdict: if c.is_irreducible() {
                        "irreducible"
                    } else {
                        "reducible"
                    }
                    .into(),
                    commutant_dim: Some(c.commutant_dim),
                    word_dim: c.word_dim,
                    margin: Some(c.margin),
                    error: None,
                },
                Err(e) => blank("numerical_failure", e.to_string()),
            }
        })
        .collect();
    let count = |v: &str| entries.iter().filter(|e| e.verdict == v).count();
    let failures = count("numerical_failure") + count("unreadable");
    let verdict = if failures == 0 {
        "verified"
    } else {
        "failures"
    };
    let report = ctx.report("verify", verdict).with_payload(json!({
        "irreducible": count("irreducible"),
        "reducible": count("reducible"),
        "failures": failures,
        "files": entries,
    }));
    ctx.finish(
        report,
        if failures == 0 {
            EXIT_OK
        } else {
            EXIT_NUMERICAL
        },
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spectrum_strings() {
        let (v, m) = parse_spectrum("1:2, 2+1i:1").unwrap();
        assert_eq!(v, vec![C::new(1.0, 0.0), C::new(2.0, 1.0)]);
        assert_eq!(m, vec![2, 1]);
        assert!(parse_spectrum("1").is_err());
        assert!(parse_spectrum("1:0").is_err());
        assert!(parse_spectrum("").is_err());
    }
}
