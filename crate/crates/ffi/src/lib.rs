//! C ABI over the joint-spectra library.
//!
//! Conventions: every function returns a [`JspStatus`]; results travel
//! through out-pointers that are written only on `Ok`. Complex scalars are
//! passed as separate re/im doubles, complex arrays as interleaved
//! `re, im` pairs. Heap objects cross the boundary as opaque handles with
//! explicit `_free` functions. Panics are caught and reported as
//! `InternalError` instead of unwinding across the boundary.

use std::os::raw::c_char;
use std::panic::{catch_unwind, AssertUnwindSafe};

use joint_spectra::analysis::{
    dn_trace_resolvent, fk_det_closed, fk_det_quadrature, homology_coupling, mahler_measure,
    trace_resolvent, winding_number, MahlerPolynomial,
};
use joint_spectra::dynamics::{map_f, map_f1};
use joint_spectra::numerics::{C64, QuadratureConfig};
use joint_spectra::pencil::{ClosedPath, Complex3Point};
use joint_spectra::spectrum::{in_spectrum_dinf, qn_det_identity_check};
use joint_spectra::Error;

/// Status code returned by every API call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum JspStatus {
    /// Success; out parameters are valid.
    Ok = 0,
    /// A required pointer argument was null.
    NullPointer = 1,
    /// An argument was outside the function's domain.
    InvalidArgument = 2,
    /// A matrix was numerically singular.
    SingularMatrix = 3,
    /// Path samples are too coarse for argument tracking.
    SampleTooCoarse = 4,
    /// The path passes through or too near zero.
    PathHitsZero = 5,
    /// Requested tree level exceeds the library cap.
    LevelTooLarge = 6,
    /// The evaluation point is a pole of a summand.
    PoleAtNode = 7,
    /// The point lies in the joint spectrum.
    PointInSpectrum = 8,
    /// 4 - mu^2 is too small for the renormalization identity.
    RenormalizationPole = 9,
    /// A dynamical map was evaluated at one of its poles.
    PoleOfMap = 10,
    /// The library panicked; treat the out parameters as garbage.
    InternalError = 11,
}

fn status_of(e: &Error) -> JspStatus {
    match e {
        Error::SingularMatrix => JspStatus::SingularMatrix,
        Error::SampleTooCoarse => JspStatus::SampleTooCoarse,
        Error::PathHitsZero => JspStatus::PathHitsZero,
        Error::LevelTooLarge { .. } => JspStatus::LevelTooLarge,
        Error::PoleAtNode => JspStatus::PoleAtNode,
        Error::PointInSpectrum => JspStatus::PointInSpectrum,
        Error::RenormalizationPole => JspStatus::RenormalizationPole,
        Error::PoleAtMuSquaredFour | Error::LambdaZero => JspStatus::PoleOfMap,
        Error::ArityMismatch { .. }
        | Error::DomainError(_)
        | Error::UnknownAutomaton(_)
        | Error::DegenerateSlice => JspStatus::InvalidArgument,
    }
}

fn guarded(f: impl FnOnce() -> JspStatus) -> JspStatus {
    catch_unwind(AssertUnwindSafe(f)).unwrap_or(JspStatus::InternalError)
}

/// Closed sampled path in the two slice coordinates; opaque to C.
pub struct JspPath {
    inner: ClosedPath,
}

unsafe fn emit_path(out: *mut *mut JspPath, path: ClosedPath) -> JspStatus {
    *out = Box::into_raw(Box::new(JspPath { inner: path }));
    JspStatus::Ok
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn jsp_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}

/// Fuglede-Kadison determinant of 1 - z1 a - z2 t in closed form.
///
/// # Safety
/// `out` must point to a writable double.
#[no_mangle]
pub unsafe extern "C" fn jsp_fk_det_closed(
    z1_re: f64,
    z1_im: f64,
    z2_re: f64,
    z2_im: f64,
    out: *mut f64,
) -> JspStatus {
    if out.is_null() {
        return JspStatus::NullPointer;
    }
    guarded(|| {
        *out = fk_det_closed(C64::new(z1_re, z1_im), C64::new(z2_re, z2_im));
        JspStatus::Ok
    })
}

/// Fuglede-Kadison determinant by adaptive quadrature.
///
/// `out_converged` reports whether the doubling ladder met `abs_tol`; the
/// value is the last estimate either way.
///
/// # Safety
/// `out_value` and `out_converged` must point to writable storage.
#[no_mangle]
pub unsafe extern "C" fn jsp_fk_det_quadrature(
    z1_re: f64,
    z1_im: f64,
    z2_re: f64,
    z2_im: f64,
    initial_panels: u32,
    abs_tol: f64,
    max_doublings: u32,
    out_value: *mut f64,
    out_converged: *mut bool,
) -> JspStatus {
    if out_value.is_null() || out_converged.is_null() {
        return JspStatus::NullPointer;
    }
    if !(abs_tol > 0.0) {
        return JspStatus::InvalidArgument;
    }
    guarded(|| {
        let cfg = QuadratureConfig {
            initial_panels,
            abs_tol,
            max_doublings,
        };
        let est = fk_det_quadrature(C64::new(z1_re, z1_im), C64::new(z2_re, z2_im), &cfg);
        *out_value = est.value;
        *out_converged = est.converged;
        JspStatus::Ok
    })
}

/// Normalized resolvent trace of 1 - z1 a - z2 t, off the spectrum only.
///
/// # Safety
/// `out_re` and `out_im` must point to writable doubles.
#[no_mangle]
pub unsafe extern "C" fn jsp_trace_resolvent(
    z1_re: f64,
    z1_im: f64,
    z2_re: f64,
    z2_im: f64,
    out_re: *mut f64,
    out_im: *mut f64,
) -> JspStatus {
    if out_re.is_null() || out_im.is_null() {
        return JspStatus::NullPointer;
    }
    guarded(|| {
        match trace_resolvent(
            C64::new(z1_re, z1_im),
            C64::new(z2_re, z2_im),
            &QuadratureConfig::default(),
        ) {
            Ok(q) => {
                *out_re = q.value.re;
                *out_im = q.value.im;
                JspStatus::Ok
            }
            Err(e) => status_of(&e),
        }
    })
}

/// Normalized trace of the inverted D_n pencil via the closed n-term sum.
///
/// # Safety
/// `out_re` and `out_im` must point to writable doubles.
#[no_mangle]
pub unsafe extern "C" fn jsp_dn_trace_resolvent(
    z0_re: f64,
    z0_im: f64,
    z1_re: f64,
    z1_im: f64,
    z2_re: f64,
    z2_im: f64,
    n: u64,
    out_re: *mut f64,
    out_im: *mut f64,
) -> JspStatus {
    if out_re.is_null() || out_im.is_null() {
        return JspStatus::NullPointer;
    }
    let Ok(n) = usize::try_from(n) else {
        return JspStatus::InvalidArgument;
    };
    if n == 0 {
        return JspStatus::InvalidArgument;
    }
    guarded(|| {
        let z = Complex3Point::new(
            C64::new(z0_re, z0_im),
            C64::new(z1_re, z1_im),
            C64::new(z2_re, z2_im),
        );
        match dn_trace_resolvent(z, n) {
            Ok(v) => {
                *out_re = v.re;
                *out_im = v.im;
                JspStatus::Ok
            }
            Err(e) => status_of(&e),
        }
    })
}

/// Membership of (z0, z1, z2) in the dihedral joint spectrum quadric.
///
/// # Safety
/// `out` must point to a writable bool.
#[no_mangle]
pub unsafe extern "C" fn jsp_in_spectrum_dinf(
    z0_re: f64,
    z0_im: f64,
    z1_re: f64,
    z1_im: f64,
    z2_re: f64,
    z2_im: f64,
    tol: f64,
    out: *mut bool,
) -> JspStatus {
    if out.is_null() {
        return JspStatus::NullPointer;
    }
    if !(tol > 0.0) {
        return JspStatus::InvalidArgument;
    }
    guarded(|| {
        let z = Complex3Point::new(
            C64::new(z0_re, z0_im),
            C64::new(z1_re, z1_im),
            C64::new(z2_re, z2_im),
        );
        *out = in_spectrum_dinf(z, tol);
        JspStatus::Ok
    })
}

/// Mahler measure of a polynomial given as `coeff_count` interleaved
/// re/im coefficient pairs in ascending degree.
///
/// # Safety
/// `coeffs` must point to `2 * coeff_count` readable doubles and `out` to
/// a writable double.
#[no_mangle]
pub unsafe extern "C" fn jsp_mahler_measure(
    coeffs: *const f64,
    coeff_count: u64,
    out: *mut f64,
) -> JspStatus {
    if coeffs.is_null() || out.is_null() {
        return JspStatus::NullPointer;
    }
    let Ok(count) = usize::try_from(coeff_count) else {
        return JspStatus::InvalidArgument;
    };
    guarded(|| {
        let raw = std::slice::from_raw_parts(coeffs, 2 * count);
        let poly = MahlerPolynomial {
            coefficients: raw.chunks_exact(2).map(|p| C64::new(p[0], p[1])).collect(),
        };
        *out = mahler_measure(&poly);
        JspStatus::Ok
    })
}

/// One step of the renormalization map F(lambda, mu); fails on the pole
/// mu^2 = 4. `out` receives lambda'_re, lambda'_im, mu'_re, mu'_im.
///
/// # Safety
/// `out` must point to 4 writable doubles.
#[no_mangle]
pub unsafe extern "C" fn jsp_map_f(
    lambda_re: f64,
    lambda_im: f64,
    mu_re: f64,
    mu_im: f64,
    out: *mut f64,
) -> JspStatus {
    if out.is_null() {
        return JspStatus::NullPointer;
    }
    guarded(|| {
        match map_f(C64::new(lambda_re, lambda_im), C64::new(mu_re, mu_im)) {
            Ok((l, m)) => {
                let dst = std::slice::from_raw_parts_mut(out, 4);
                dst.copy_from_slice(&[l.re, l.im, m.re, m.im]);
                JspStatus::Ok
            }
            Err(e) => status_of(&e),
        }
    })
}

/// One step of the polynomial branch map F1 on (z0, z1, z2).
///
/// # Safety
/// `z` must point to 6 readable doubles and `out` to 6 writable doubles.
#[no_mangle]
pub unsafe extern "C" fn jsp_map_f1(z: *const f64, out: *mut f64) -> JspStatus {
    if z.is_null() || out.is_null() {
        return JspStatus::NullPointer;
    }
    guarded(|| {
        let src = std::slice::from_raw_parts(z, 6);
        let p = map_f1(Complex3Point::new(
            C64::new(src[0], src[1]),
            C64::new(src[2], src[3]),
            C64::new(src[4], src[5]),
        ));
        let dst = std::slice::from_raw_parts_mut(out, 6);
        for (slot, v) in dst.chunks_exact_mut(2).zip(p.coords()) {
            slot[0] = v.re;
            slot[1] = v.im;
        }
        JspStatus::Ok
    })
}

/// Residuals of the level-n determinant identities at (lambda, mu).
///
/// `out_renormalization` is set to NaN for n < 2, where the identity has
/// no content.
///
/// # Safety
/// `out_product` and `out_renormalization` must point to writable doubles.
#[no_mangle]
pub unsafe extern "C" fn jsp_qn_identity_residuals(
    lambda_re: f64,
    lambda_im: f64,
    mu_re: f64,
    mu_im: f64,
    n: u32,
    out_product: *mut f64,
    out_renormalization: *mut f64,
) -> JspStatus {
    if out_product.is_null() || out_renormalization.is_null() {
        return JspStatus::NullPointer;
    }
    guarded(|| {
        match qn_det_identity_check(C64::new(lambda_re, lambda_im), C64::new(mu_re, mu_im), n) {
            Ok(r) => {
                *out_product = r.product;
                *out_renormalization = r.renormalization.unwrap_or(f64::NAN);
                JspStatus::Ok
            }
            Err(e) => status_of(&e),
        }
    })
}

/// Build a path handle from `sample_count` samples of 4 doubles each
/// (z1_re, z1_im, z2_re, z2_im). Only closed paths are accepted.
///
/// # Safety
/// `samples` must point to `4 * sample_count` readable doubles and `out`
/// to a writable pointer slot. The handle must be released with
/// [`jsp_path_free`].
#[no_mangle]
pub unsafe extern "C" fn jsp_path_new(
    samples: *const f64,
    sample_count: u64,
    closed: bool,
    out: *mut *mut JspPath,
) -> JspStatus {
    if samples.is_null() || out.is_null() {
        return JspStatus::NullPointer;
    }
    let Ok(count) = usize::try_from(sample_count) else {
        return JspStatus::InvalidArgument;
    };
    if count < 2 || !closed {
        return JspStatus::InvalidArgument;
    }
    guarded(|| {
        let raw = std::slice::from_raw_parts(samples, 4 * count);
        let pts = raw
            .chunks_exact(4)
            .map(|q| (C64::new(q[0], q[1]), C64::new(q[2], q[3])))
            .collect();
        emit_path(out, ClosedPath::new(pts, true))
    })
}

/// Build the built-in loop (1 + e^{i theta}/2, 0) with `samples` >= 3
/// sample points.
///
/// # Safety
/// `out` must point to a writable pointer slot; release the handle with
/// [`jsp_path_free`].
#[no_mangle]
pub unsafe extern "C" fn jsp_path_gamma(samples: u64, out: *mut *mut JspPath) -> JspStatus {
    if out.is_null() {
        return JspStatus::NullPointer;
    }
    let Ok(n) = usize::try_from(samples) else {
        return JspStatus::InvalidArgument;
    };
    if n < 3 {
        return JspStatus::InvalidArgument;
    }
    guarded(|| emit_path(out, ClosedPath::gamma_half_circle(n)))
}

/// Orientation-reversed copy of a path.
///
/// # Safety
/// `path` must be a live handle from this library and `out` a writable
/// pointer slot.
#[no_mangle]
pub unsafe extern "C" fn jsp_path_reversed(
    path: *const JspPath,
    out: *mut *mut JspPath,
) -> JspStatus {
    if path.is_null() || out.is_null() {
        return JspStatus::NullPointer;
    }
    guarded(|| emit_path(out, (*path).inner.reversed()))
}

/// Copy of a path traversed twice.
///
/// # Safety
/// `path` must be a live handle from this library and `out` a writable
/// pointer slot.
#[no_mangle]
pub unsafe extern "C" fn jsp_path_doubled(
    path: *const JspPath,
    out: *mut *mut JspPath,
) -> JspStatus {
    if path.is_null() || out.is_null() {
        return JspStatus::NullPointer;
    }
    guarded(|| emit_path(out, (*path).inner.doubled()))
}

/// Release a path handle. Null is a no-op.
///
/// # Safety
/// `path` must be null or a handle from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn jsp_path_free(path: *mut JspPath) {
    if !path.is_null() {
        drop(Box::from_raw(path));
    }
}

/// Winding number of the slice form along the path about parameter `x`.
///
/// # Safety
/// `path` must be a live handle and `out` a writable 64-bit slot.
#[no_mangle]
pub unsafe extern "C" fn jsp_winding_number(
    path: *const JspPath,
    x: f64,
    out: *mut i64,
) -> JspStatus {
    if path.is_null() || out.is_null() {
        return JspStatus::NullPointer;
    }
    guarded(|| match winding_number(&(*path).inner, x) {
        Ok(w) => {
            *out = w;
            JspStatus::Ok
        }
        Err(e) => status_of(&e),
    })
}

/// Homology coupling of the path: half its winding number about 0.
///
/// # Safety
/// `path` must be a live handle and `out` a writable double.
#[no_mangle]
pub unsafe extern "C" fn jsp_homology_coupling(path: *const JspPath, out: *mut f64) -> JspStatus {
    if path.is_null() || out.is_null() {
        return JspStatus::NullPointer;
    }
    guarded(|| match homology_coupling(&(*path).inner) {
        Ok(v) => {
            *out = v;
            JspStatus::Ok
        }
        Err(e) => status_of(&e),
    })
}
