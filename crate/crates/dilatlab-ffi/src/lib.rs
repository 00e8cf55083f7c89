//! C ABI over the dilatlab spectral laboratory.
//!
//! Handles are opaque pointers created and destroyed here; every function is
//! null-safe and reports failures through [`DlStatus`] plus a thread-local
//! message readable with [`dl_last_error_message`]. Optional numeric
//! parameters (kappa, the working angle, the probe angle) use NaN as the
//! "not set" sentinel, since C has no option type.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;

use dilatlab::bounds::classification_angles;
use dilatlab::config::ExperimentConfig;
use dilatlab::{
    alpha_required, classify, critical_angle, gaussian_norm_closed_form, lp_norm_quadrature,
    BoundParams, ComplexAngle, Error, LPolicy, LTConstants, Potential, TheoremId, Tolerances,
};
use num_complex::Complex64;

/// Outcome of a C ABI call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DlStatus {
    /// The call succeeded.
    Ok = 0,
    /// A required pointer argument was null.
    NullArgument = 1,
    /// Arguments were malformed or outside the supported regime.
    InvalidArgument = 2,
    /// The eigensolver, quadrature, or classifier gave up.
    SolverFailure = 3,
    /// Verification ran to completion and at least one estimate failed.
    Unsatisfied = 4,
    /// The filesystem got in the way.
    IoFailure = 5,
}

/// Opaque potential handle.
pub struct DlPotential {
    inner: Potential,
}

thread_local! {
    static LAST_ERROR: RefCell<String> = const { RefCell::new(String::new()) };
}

fn set_error(message: impl Into<String>) {
    LAST_ERROR.with(|slot| *slot.borrow_mut() = message.into());
}

fn clear_error() {
    LAST_ERROR.with(|slot| slot.borrow_mut().clear());
}

fn fail(err: &Error) -> DlStatus {
    set_error(err.to_string());
    match err {
        Error::Lapack { .. }
        | Error::NoConvergence { .. }
        | Error::ToleranceNotMet { .. }
        | Error::ClassificationUnstable(_) => DlStatus::SolverFailure,
        Error::Io(_) => DlStatus::IoFailure,
        _ => DlStatus::InvalidArgument,
    }
}

fn opt(x: f64) -> Option<f64> {
    if x.is_nan() {
        None
    } else {
        Some(x)
    }
}

unsafe fn write_out<T>(out: *mut T, value: T) -> DlStatus {
    if out.is_null() {
        set_error("output pointer is null");
        return DlStatus::NullArgument;
    }
    out.write(value);
    clear_error();
    DlStatus::Ok
}

unsafe fn handle<'a>(p: *const DlPotential) -> Option<&'a Potential> {
    if p.is_null() {
        set_error("potential handle is null");
        None
    } else {
        Some(&(*p).inner)
    }
}

fn boxed(v: Potential) -> *mut DlPotential {
    Box::into_raw(Box::new(DlPotential { inner: v }))
}

/// Library version as a static string; do not free.
#[no_mangle]
pub extern "C" fn dl_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Release a string allocated by this library. Null is a no-op.
///
/// # Safety
/// `s` must be a pointer previously returned through an out-parameter of
/// this library and not yet freed.
#[no_mangle]
pub unsafe extern "C" fn dl_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Most recent error message on this thread, as a fresh allocation the
/// caller releases with `dl_string_free`. Empty after a successful call.
#[no_mangle]
pub extern "C" fn dl_last_error_message() -> *mut c_char {
    let text = LAST_ERROR.with(|slot| slot.borrow().clone());
    CString::new(text).unwrap_or_default().into_raw()
}

/// The zero potential, giving the free operator.
#[no_mangle]
pub extern "C" fn dl_potential_zero() -> *mut DlPotential {
    clear_error();
    boxed(Potential::finite_well(0.0, 1.0, 1.0).expect("zero well parameters are valid"))
}

/// amplitude * e^(-c x^2) with Re c > 0.
///
/// # Safety
/// `out` must point to writable storage for one pointer.
#[no_mangle]
pub unsafe extern "C" fn dl_potential_gaussian(
    c_re: f64,
    c_im: f64,
    amplitude: f64,
    out: *mut *mut DlPotential,
) -> DlStatus {
    match Potential::gaussian(Complex64::new(c_re, c_im), amplitude) {
        Ok(v) => write_out(out, boxed(v)),
        Err(e) => fail(&e),
    }
}

/// amplitude * c (1+x^2)^(-s) with s > 0.
///
/// # Safety
/// `out` must point to writable storage for one pointer.
#[no_mangle]
pub unsafe extern "C" fn dl_potential_rational(
    c_re: f64,
    c_im: f64,
    s: f64,
    amplitude: f64,
    out: *mut *mut DlPotential,
) -> DlStatus {
    match Potential::rational(Complex64::new(c_re, c_im), s, amplitude) {
        Ok(v) => write_out(out, boxed(v)),
        Err(e) => fail(&e),
    }
}

/// Square well of the given depth on [-halfwidth, halfwidth].
///
/// # Safety
/// `out` must point to writable storage for one pointer.
#[no_mangle]
pub unsafe extern "C" fn dl_potential_finite_well(
    depth: f64,
    halfwidth: f64,
    amplitude: f64,
    out: *mut *mut DlPotential,
) -> DlStatus {
    match Potential::finite_well(depth, halfwidth, amplitude) {
        Ok(v) => write_out(out, boxed(v)),
        Err(e) => fail(&e),
    }
}

/// Destroy a potential handle. Null is a no-op.
///
/// # Safety
/// `p` must come from a constructor in this library and not be used again.
#[no_mangle]
pub unsafe extern "C" fn dl_potential_free(p: *mut DlPotential) {
    if !p.is_null() {
        drop(Box::from_raw(p));
    }
}

/// Analyticity half-width of the dilation strip; may be infinite.
///
/// # Safety
/// `p` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn dl_potential_alpha(p: *const DlPotential, out: *mut f64) -> DlStatus {
    let Some(v) = handle(p) else { return DlStatus::NullArgument };
    write_out(out, v.alpha())
}

/// Value of the dilated potential V(e^(i phi) x).
///
/// # Safety
/// `p` must be a live handle; `out_re` and `out_im` must be writable.
#[no_mangle]
pub unsafe extern "C" fn dl_potential_evaluate(
    p: *const DlPotential,
    phi: f64,
    x: f64,
    out_re: *mut f64,
    out_im: *mut f64,
) -> DlStatus {
    let Some(v) = handle(p) else { return DlStatus::NullArgument };
    if !phi.is_finite() {
        set_error("phi must be finite");
        return DlStatus::InvalidArgument;
    }
    match v.evaluate_dilated(ComplexAngle::new(phi), x) {
        Ok(z) => {
            let status = write_out(out_re, z.re);
            if status != DlStatus::Ok {
                return status;
            }
            write_out(out_im, z.im)
        }
        Err(e) => fail(&e),
    }
}

/// L^p norm of the dilated potential by adaptive quadrature.
///
/// # Safety
/// `p` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn dl_potential_norm(
    p: *const DlPotential,
    phi: f64,
    lp: f64,
    out: *mut f64,
) -> DlStatus {
    let Some(v) = handle(p) else { return DlStatus::NullArgument };
    if !phi.is_finite() {
        set_error("phi must be finite");
        return DlStatus::InvalidArgument;
    }
    match lp_norm_quadrature(v, ComplexAngle::new(phi), lp) {
        Ok(n) => write_out(out, n),
        Err(e) => fail(&e),
    }
}

/// Closed-form L^p norm of the unit dilated Gaussian e^(-c x^2).
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn dl_gaussian_norm_closed_form(
    c_re: f64,
    c_im: f64,
    phi: f64,
    lp: f64,
    out: *mut f64,
) -> DlStatus {
    match gaussian_norm_closed_form(Complex64::new(c_re, c_im), phi, lp) {
        Ok(n) => write_out(out, n),
        Err(e) => fail(&e),
    }
}

/// Angle minimizing the dilated Gaussian norm, for Re c > 0 > Im c.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn dl_critical_angle(c_re: f64, c_im: f64, out: *mut f64) -> DlStatus {
    match critical_angle(Complex64::new(c_re, c_im)) {
        Ok(a) => write_out(out, a),
        Err(e) => fail(&e),
    }
}

/// Semiclassical constant pair for the exponent pair (gamma, d):
/// writes L, its complex companion C, and the norm exponent p.
///
/// # Safety
/// `out_l`, `out_c`, and `out_p` must be writable.
#[no_mangle]
pub unsafe extern "C" fn dl_constants(
    gamma: f64,
    d: u32,
    out_l: *mut f64,
    out_c: *mut f64,
    out_p: *mut f64,
) -> DlStatus {
    let k = match LTConstants::new(gamma, d, LPolicy::Semiclassical) {
        Ok(k) => k,
        Err(e) => return fail(&e),
    };
    for (slot, value) in [(out_l, k.l()), (out_c, k.c()), (out_p, k.p())] {
        let status = write_out(slot, value);
        if status != DlStatus::Ok {
            return status;
        }
    }
    DlStatus::Ok
}

/// Right-hand side of the named estimate for a potential, with gamma and
/// d = 1 semiclassical constants. Pass NaN for an unused kappa or phi.
///
/// # Safety
/// `theorem` must be a NUL-terminated string; `p` must be a live handle;
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn dl_bound_rhs(
    theorem: *const c_char,
    gamma: f64,
    p: *const DlPotential,
    kappa: f64,
    phi: f64,
    out: *mut f64,
) -> DlStatus {
    if theorem.is_null() {
        set_error("theorem tag is null");
        return DlStatus::NullArgument;
    }
    let Some(v) = handle(p) else { return DlStatus::NullArgument };
    let Ok(tag) = CStr::from_ptr(theorem).to_str() else {
        set_error("theorem tag is not UTF-8");
        return DlStatus::InvalidArgument;
    };
    let id = match TheoremId::from_tag(tag) {
        Ok(id) => id,
        Err(e) => return fail(&e),
    };
    let constants = match LTConstants::new(gamma, 1, LPolicy::Semiclassical) {
        Ok(k) => k,
        Err(e) => return fail(&e),
    };
    let params = BoundParams { kappa: opt(kappa), phi: opt(phi), phi_probe: None };
    match dilatlab::rhs(id, &constants, v, &params) {
        Ok(value) => write_out(out, value),
        Err(e) => fail(&e),
    }
}

fn admits(id: TheoremId, v: &Potential, params: &BoundParams) -> bool {
    let required = match alpha_required(id, params) {
        Ok(r) => r,
        Err(_) => return false,
    };
    if required > 0.0 && v.alpha() <= required {
        return false;
    }
    id != TheoremId::NegativeAxis || v.is_real()
}

fn verify_phi(cfg: &ExperimentConfig) -> Result<Option<f64>, Error> {
    if let Some(phi) = cfg.bounds.phi {
        return Ok(Some(phi));
    }
    let phis = cfg.build_angles()?;
    match phis.len() {
        0 => Ok(None),
        1 => Ok(Some(phis[0])),
        _ => Err(Error::validation(
            "bounds.phi",
            "verify needs one working angle: set bounds.phi or a single angles.phi entry",
        )),
    }
}

fn run_verify(text: &str) -> Result<(String, bool), Error> {
    let cfg = ExperimentConfig::from_toml(text)?;
    let hash = dilatlab::report::config_hash(text);
    let potential = cfg.build_potential(Path::new("."))?;
    let grid = cfg.build_grid()?;
    let scheme = cfg.build_scheme()?;
    let tol: Tolerances = cfg.build_tolerances()?;
    let constants = cfg.build_constants()?;
    let params = BoundParams {
        kappa: cfg.bounds.kappa,
        phi: verify_phi(&cfg)?,
        phi_probe: cfg.angles.phi_probe,
    };

    let explicit = cfg.build_theorems()?;
    let ids: Vec<TheoremId> = if explicit.is_empty() {
        TheoremId::ALL.into_iter().filter(|id| admits(*id, &potential, &params)).collect()
    } else {
        explicit
    };
    if ids.is_empty() {
        return Err(Error::validation(
            "bounds.theorems",
            "no estimate is applicable; list them explicitly or adjust parameters",
        ));
    }

    let (phi, probe) = classification_angles(&potential, &params)?;
    let classification = if phi == 0.0 {
        classify(&potential, grid, scheme, 0.0, 0.0, &tol)?
    } else {
        classify(&potential, grid, scheme, phi, probe, &tol)?
    };

    let convergence = if cfg.bounds.box_check {
        Some(dilatlab::box_check(&potential, grid, scheme, &params, &tol, cfg.tol_box())?)
    } else {
        None
    };

    let mut reports = Vec::with_capacity(ids.len());
    for id in ids {
        let mut r = dilatlab::verify_with_classification(
            id,
            &potential,
            grid,
            scheme,
            &constants,
            &params,
            &classification,
            &tol,
        )?;
        r.convergence = convergence;
        reports.push(r);
    }
    let all_satisfied = reports.iter().all(|r| r.satisfied);
    Ok((dilatlab::report::reports_json(&hash, &reports), all_satisfied))
}

/// Run estimate verification for a config document and hand back the full
/// report set as a JSON string (release with `dl_string_free`).
///
/// Returns `Ok` when every estimate holds and `Unsatisfied` when the run
/// completed but at least one failed; the JSON is written in both cases.
///
/// # Safety
/// `config_toml` must be a NUL-terminated string; `out_json` must point to
/// writable storage for one pointer.
#[no_mangle]
pub unsafe extern "C" fn dl_run_verify(
    config_toml: *const c_char,
    out_json: *mut *mut c_char,
) -> DlStatus {
    if config_toml.is_null() {
        set_error("config text is null");
        return DlStatus::NullArgument;
    }
    if out_json.is_null() {
        set_error("output pointer is null");
        return DlStatus::NullArgument;
    }
    let Ok(text) = CStr::from_ptr(config_toml).to_str() else {
        set_error("config text is not UTF-8");
        return DlStatus::InvalidArgument;
    };
    let outcome = catch_unwind(AssertUnwindSafe(|| run_verify(text)));
    match outcome {
        Ok(Ok((json, all_satisfied))) => {
            let Ok(c) = CString::new(json) else {
                set_error("report text contained an interior NUL");
                return DlStatus::SolverFailure;
            };
            out_json.write(c.into_raw());
            clear_error();
            if all_satisfied {
                DlStatus::Ok
            } else {
                set_error("at least one estimate failed; see the report JSON");
                DlStatus::Unsatisfied
            }
        }
        Ok(Err(e)) => fail(&e),
        Err(_) => {
            set_error("internal panic during verification");
            DlStatus::SolverFailure
        }
    }
}
