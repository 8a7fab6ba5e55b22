//! C ABI over `irrforge`.
//!
//! Matrices cross the boundary as opaque [`IrrMatrix`] handles built from
//! interleaved row-major `(re, im)` doubles. Every function returns an
//! [`IrrStatus`]; on failure [`irr_last_error_message`] describes the cause.
//! Handles returned through out-pointers are owned by the caller and must be
//! released with [`irr_matrix_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use irrforge::numkernel::{CMatrix, Tolerances, C};
use irrforge::similarity::{
    self, NormalOutcome, Obstruction, ObstructionKind, SpectralOutcome, Witness,
};
use irrforge::{staralg, Error};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IrrStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidInput = 2,
    Rejected = 3,
    Numerical = 4,
    Panic = 5,
}

/// Opaque square complex matrix.
pub struct IrrMatrix {
    m: CMatrix,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IrrTolerances {
    pub rank_tol: f64,
    pub cluster_tol: f64,
    pub cert_tol: f64,
    pub gap_min: f64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IrrSimilarOutcome {
    Similar = 0,
    Obstructed = 1,
    Inconclusive = 2,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IrrObstructionKind {
    None = 0,
    EigMultiplicityTooLarge = 1,
    QuadraticDependence = 2,
    ScalarIn2x2 = 3,
}

/// Obstruction data: an eigenvalue (`witness_len == 1`) or the coefficients
/// `(a, b, c)` of `aI + bT + cT^2 = 0` (`witness_len == 3`), stored as
/// interleaved `(re, im)` pairs.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IrrObstruction {
    pub kind: IrrObstructionKind,
    pub witness: [f64; 6],
    pub witness_len: usize,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> IrrStatus {
    use Error::*;
    match e {
        DimensionMismatch { .. }
        | InvalidMatrix(_)
        | InvalidTolerances(_)
        | NotHermitian(_)
        | NotPsd(_)
        | NotNormal(_)
        | NotProjection(_)
        | InvalidArgument(_) => IrrStatus::InvalidInput,
        ClusterAmbiguous(_)
        | MarginTooSmall { .. }
        | CertificationFailed(_)
        | CornerGenerationFailed(_)
        | SpectrumTooClustered(_)
        | NotStabilized(_)
        | OracleDisagreement { .. } => IrrStatus::Numerical,
        _ => IrrStatus::Rejected,
    }
}

fn fail(status: IrrStatus, msg: impl Into<String>) -> IrrStatus {
    set_error(msg.into());
    status
}

/// Runs `f`, recording errors and converting panics into [`IrrStatus::Panic`].
fn guard(f: impl FnOnce() -> Result<(), IrrStatus>) -> IrrStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => IrrStatus::Ok,
        Ok(Err(s)) => s,
        Err(p) => {
            let msg = p
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| p.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".into());
            fail(IrrStatus::Panic, format!("internal panic: {msg}"))
        }
    }
}

fn lib<T>(r: irrforge::Result<T>) -> Result<T, IrrStatus> {
    r.map_err(|e| fail(status_of(&e), e.to_string()))
}

fn tolerances(tol: *const IrrTolerances) -> Result<Tolerances, IrrStatus> {
    if tol.is_null() {
        return lib(Tolerances::from_env());
    }
    let t = unsafe { *tol };
    lib(Tolerances::new(
        t.rank_tol,
        t.cluster_tol,
        t.cert_tol,
        t.gap_min,
    ))
}

fn matrix<'a>(m: *const IrrMatrix) -> Result<&'a CMatrix, IrrStatus> {
    if m.is_null() {
        return Err(fail(IrrStatus::NullPointer, "null matrix handle"));
    }
    Ok(unsafe { &(*m).m })
}

fn out<'a, T>(p: *mut T) -> Result<&'a mut T, IrrStatus> {
    if p.is_null() {
        return Err(fail(IrrStatus::NullPointer, "null output pointer"));
    }
    Ok(unsafe { &mut *p })
}

fn handle(m: CMatrix) -> *mut IrrMatrix {
    Box::into_raw(Box::new(IrrMatrix { m }))
}

/// Message for the last failure on this thread, or null. The pointer stays
/// valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn irr_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(std::ptr::null(), |c| c.as_ptr()))
}

#[no_mangle]
pub extern "C" fn irr_tolerances_default() -> IrrTolerances {
    let t = Tolerances::default();
    IrrTolerances {
        rank_tol: t.rank_tol,
        cluster_tol: t.cluster_tol,
        cert_tol: t.cert_tol,
        gap_min: t.gap_min,
    }
}

/// Builds an `n x n` matrix from `2 n^2` doubles, row-major, `(re, im)`
/// interleaved.
///
/// # Safety
/// `entries` must point to `2 * n * n` readable doubles.
#[no_mangle]
pub unsafe extern "C" fn irr_matrix_new(
    n: usize,
    entries: *const f64,
    out_matrix: *mut *mut IrrMatrix,
) -> IrrStatus {
    guard(|| {
        let slot = out(out_matrix)?;
        if entries.is_null() {
            return Err(fail(IrrStatus::NullPointer, "null entries"));
        }
        if n == 0 {
            return Err(fail(IrrStatus::InvalidInput, "dimension must be positive"));
        }
        let len = n.checked_mul(n).and_then(|x| x.checked_mul(2));
        let Some(len) = len else {
            return Err(fail(IrrStatus::InvalidInput, "dimension overflows"));
        };
        let data = unsafe { std::slice::from_raw_parts(entries, len) };
        if data.iter().any(|x| !x.is_finite()) {
            return Err(fail(IrrStatus::InvalidInput, "non-finite entry"));
        }
        let m = CMatrix::from_fn(n, n, |i, j| {
            C::new(data[2 * (i * n + j)], data[2 * (i * n + j) + 1])
        });
        *slot = handle(m);
        Ok(())
    })
}

/// # Safety
/// `m` must be null or a handle from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn irr_matrix_free(m: *mut IrrMatrix) {
    if !m.is_null() {
        drop(unsafe { Box::from_raw(m) });
    }
}

/// Dimension of `m`, or 0 for a null handle.
///
/// # Safety
/// `m` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn irr_matrix_dim(m: *const IrrMatrix) -> usize {
    if m.is_null() {
        0
    } else {
        unsafe { (*m).m.nrows() }
    }
}

/// Copies the entries of `m` into `buf` in the layout of [`irr_matrix_new`].
///
/// # Safety
/// `buf` must point to `len` writable doubles.
#[no_mangle]
pub unsafe extern "C" fn irr_matrix_entries(
    m: *const IrrMatrix,
    buf: *mut f64,
    len: usize,
) -> IrrStatus {
    guard(|| {
        let m = matrix(m)?;
        if buf.is_null() {
            return Err(fail(IrrStatus::NullPointer, "null buffer"));
        }
        let n = m.nrows();
        if len < 2 * n * n {
            return Err(fail(
                IrrStatus::InvalidInput,
                format!("buffer needs {} doubles", 2 * n * n),
            ));
        }
        let dst = unsafe { std::slice::from_raw_parts_mut(buf, 2 * n * n) };
        for i in 0..n {
            for j in 0..n {
                dst[2 * (i * n + j)] = m[(i, j)].re;
                dst[2 * (i * n + j) + 1] = m[(i, j)].im;
            }
        }
        Ok(())
    })
}

/// Certified irreducibility. `tol` may be null for the default preset.
///
/// # Safety
/// Pointers must be valid; `commutant_dim` may be null.
#[no_mangle]
pub unsafe extern "C" fn irr_is_irreducible(
    m: *const IrrMatrix,
    tol: *const IrrTolerances,
    irreducible: *mut bool,
    commutant_dim: *mut usize,
) -> IrrStatus {
    guard(|| {
        let t = matrix(m)?;
        let tol = tolerances(tol)?;
        let flag = out(irreducible)?;
        let cert = lib(irrforge::oracle::certify(
            t,
            &tol,
            irrforge::oracle::default_max_len(t.nrows()),
        ))?;
        *flag = cert.is_irreducible();
        if !commutant_dim.is_null() {
            unsafe { *commutant_dim = cert.commutant_dim };
        }
        Ok(())
    })
}

/// Whether `count` matrices generate `M_n` as a *-algebra.
///
/// # Safety
/// `set` must point to `count` live handles of equal dimension.
#[no_mangle]
pub unsafe extern "C" fn irr_generates(
    set: *const *const IrrMatrix,
    count: usize,
    tol: *const IrrTolerances,
    generates: *mut bool,
    commutant_dim: *mut usize,
) -> IrrStatus {
    guard(|| {
        let tol = tolerances(tol)?;
        let flag = out(generates)?;
        if set.is_null() || count == 0 {
            return Err(fail(IrrStatus::InvalidInput, "empty generating set"));
        }
        let handles = unsafe { std::slice::from_raw_parts(set, count) };
        let mats: Vec<CMatrix> = handles
            .iter()
            .map(|&h| matrix(h).cloned())
            .collect::<Result<_, _>>()?;
        let n = mats[0].nrows();
        let (ok, cb) = lib(staralg::generates(n, &mats, &tol))?;
        *flag = ok;
        if !commutant_dim.is_null() {
            unsafe { *commutant_dim = cb.dim };
        }
        Ok(())
    })
}

fn encode(o: &Obstruction) -> IrrObstruction {
    let kind = match o.kind {
        ObstructionKind::EigMultiplicityTooLarge => IrrObstructionKind::EigMultiplicityTooLarge,
        ObstructionKind::QuadraticDependence => IrrObstructionKind::QuadraticDependence,
        ObstructionKind::ScalarIn2x2 => IrrObstructionKind::ScalarIn2x2,
    };
    let vals: Vec<C> = match o.witness {
        Witness::Eigenvalue(l) => vec![l],
        Witness::Coefficients(cs) => cs.to_vec(),
    };
    let mut witness = [0.0; 6];
    for (k, z) in vals.iter().enumerate() {
        witness[2 * k] = z.re;
        witness[2 * k + 1] = z.im;
    }
    IrrObstruction {
        kind,
        witness,
        witness_len: vals.len(),
    }
}

const NO_OBSTRUCTION: IrrObstruction = IrrObstruction {
    kind: IrrObstructionKind::None,
    witness: [0.0; 6],
    witness_len: 0,
};

/// Writes the outputs of a similarity search. `x` and `x_inv` are set only
/// for [`IrrSimilarOutcome::Similar`] and are null otherwise.
fn similar_common(
    outcome: *mut IrrSimilarOutcome,
    x: *mut *mut IrrMatrix,
    x_inv: *mut *mut IrrMatrix,
    obstruction: *mut IrrObstruction,
    run: impl FnOnce() -> Result<
        (
            IrrSimilarOutcome,
            Option<similarity::SimilarityResult>,
            IrrObstruction,
        ),
        IrrStatus,
    >,
) -> IrrStatus {
    guard(|| {
        let outcome = out(outcome)?;
        let x = out(x)?;
        let x_inv = out(x_inv)?;
        *x = std::ptr::null_mut();
        *x_inv = std::ptr::null_mut();
        let (kind, res, obs) = run()?;
        *outcome = kind;
        if !obstruction.is_null() {
            unsafe { *obstruction = obs };
        }
        if let Some(r) = res {
            *x = handle(r.x);
            *x_inv = handle(r.x_inv);
        }
        Ok(())
    })
}

/// Similarity of a normal matrix to an irreducible one.
///
/// # Safety
/// Pointers must be valid; `tol` and `obstruction` may be null.
#[no_mangle]
pub unsafe extern "C" fn irr_similar_normal(
    m: *const IrrMatrix,
    tol: *const IrrTolerances,
    outcome: *mut IrrSimilarOutcome,
    x: *mut *mut IrrMatrix,
    x_inv: *mut *mut IrrMatrix,
    obstruction: *mut IrrObstruction,
) -> IrrStatus {
    similar_common(outcome, x, x_inv, obstruction, || {
        let t = matrix(m)?;
        let tol = tolerances(tol)?;
        Ok(
            match lib(similarity::similar_to_irreducible_normal(t, &tol))? {
                NormalOutcome::Similar(r) => (IrrSimilarOutcome::Similar, Some(r), NO_OBSTRUCTION),
                NormalOutcome::Obstructed(o) => (IrrSimilarOutcome::Obstructed, None, encode(&o)),
            },
        )
    })
}

/// Similarity of an arbitrary matrix to an irreducible one through its
/// semisimple part. On [`IrrSimilarOutcome::Inconclusive`] the obstruction
/// kind names the failed condition and carries no witness.
///
/// # Safety
/// Pointers must be valid; `tol` and `obstruction` may be null.
#[no_mangle]
pub unsafe extern "C" fn irr_similar_spectral(
    m: *const IrrMatrix,
    tol: *const IrrTolerances,
    outcome: *mut IrrSimilarOutcome,
    x: *mut *mut IrrMatrix,
    x_inv: *mut *mut IrrMatrix,
    obstruction: *mut IrrObstruction,
) -> IrrStatus {
    similar_common(outcome, x, x_inv, obstruction, || {
        let t = matrix(m)?;
        let tol = tolerances(tol)?;
        Ok(
            match lib(similarity::similar_to_irreducible_spectral(t, &tol))? {
                SpectralOutcome::Similar(r) => {
                    (IrrSimilarOutcome::Similar, Some(r), NO_OBSTRUCTION)
                }
                SpectralOutcome::Obstructed(o) => (IrrSimilarOutcome::Obstructed, None, encode(&o)),
                SpectralOutcome::Inconclusive(why) => {
                    let mut o = encode(&Obstruction {
                        kind: why.failed_condition,
                        witness: Witness::Eigenvalue(C::new(0.0, 0.0)),
                    });
                    o.witness_len = 0;
                    (IrrSimilarOutcome::Inconclusive, None, o)
                }
            },
        )
    })
}

/// `T = S + K` with `S` diagonalizable, `K` nilpotent, `SK = KS`.
///
/// # Safety
/// Pointers must be valid; `tol` may be null.
#[no_mangle]
pub unsafe extern "C" fn irr_dunford(
    m: *const IrrMatrix,
    tol: *const IrrTolerances,
    s: *mut *mut IrrMatrix,
    k: *mut *mut IrrMatrix,
) -> IrrStatus {
    guard(|| {
        let t = matrix(m)?;
        let tol = tolerances(tol)?;
        let s = out(s)?;
        let k = out(k)?;
        let d = lib(similarity::jordan_chevalley(t, &tol))?;
        *s = handle(d.s);
        *k = handle(d.k);
        Ok(())
    })
}
