//! Thin safe wrappers over the system LAPACK routines used by the
//! eigensolver: dense nonsymmetric complex, dense symmetric real, and
//! bisection on symmetric tridiagonal matrices.

use crate::error::{Error, Result};
use ndarray::Array2;
use num_complex::Complex64;
use std::os::raw::c_char;

// Complex64 is repr(C) [re, im], matching LAPACK's complex*16.
extern "C" {
    fn zgeev_(
        jobvl: *const c_char,
        jobvr: *const c_char,
        n: *const i32,
        a: *mut Complex64,
        lda: *const i32,
        w: *mut Complex64,
        vl: *mut Complex64,
        ldvl: *const i32,
        vr: *mut Complex64,
        ldvr: *const i32,
        work: *mut Complex64,
        lwork: *const i32,
        rwork: *mut f64,
        info: *mut i32,
    );

    fn dsyevd_(
        jobz: *const c_char,
        uplo: *const c_char,
        n: *const i32,
        a: *mut f64,
        lda: *const i32,
        w: *mut f64,
        work: *mut f64,
        lwork: *const i32,
        iwork: *mut i32,
        liwork: *const i32,
        info: *mut i32,
    );

    fn dstebz_(
        range: *const c_char,
        order: *const c_char,
        n: *const i32,
        vl: *const f64,
        vu: *const f64,
        il: *const i32,
        iu: *const i32,
        abstol: *const f64,
        d: *const f64,
        e: *const f64,
        m: *mut i32,
        nsplit: *mut i32,
        w: *mut f64,
        iblock: *mut i32,
        isplit: *mut i32,
        work: *mut f64,
        iwork: *mut i32,
        info: *mut i32,
    );

    fn dlamch_(cmach: *const c_char) -> f64;
}

fn dim_i32(n: usize) -> Result<i32> {
    i32::try_from(n).map_err(|_| Error::validation("matrix", "dimension exceeds i32"))
}

// info > 0 signals an iteration cap, info < 0 a bad argument
fn check_info(routine: &'static str, info: i32) -> Result<()> {
    if info == 0 {
        Ok(())
    } else if info > 0 {
        Err(Error::NoConvergence { index: info as usize })
    } else {
        Err(Error::Lapack { routine, info })
    }
}

/// Eigenvalues and right eigenvectors of a dense complex matrix.
///
/// Returns `(values, vectors)` with `vectors[k]` the unit right eigenvector
/// for `values[k]`, in LAPACK output order.
pub fn eig_complex_dense(a: &Array2<Complex64>) -> Result<(Vec<Complex64>, Vec<Vec<Complex64>>)> {
    let n = a.nrows();
    if n == 0 || a.ncols() != n {
        return Err(Error::validation("matrix", "must be square and nonempty"));
    }
    let ni = dim_i32(n)?;

    // LAPACK is column-major; transpose on copy-in.
    let mut cm = vec![Complex64::new(0.0, 0.0); n * n];
    for j in 0..n {
        for i in 0..n {
            cm[i + j * n] = a[[i, j]];
        }
    }

    let mut w = vec![Complex64::new(0.0, 0.0); n];
    let mut vr = vec![Complex64::new(0.0, 0.0); n * n];
    let mut rwork = vec![0.0f64; 2 * n];
    let mut info: i32 = 0;
    let jobvl = b'N' as c_char;
    let jobvr = b'V' as c_char;
    let one: i32 = 1;

    // workspace query
    let mut work_query = [Complex64::new(0.0, 0.0)];
    let lwork_query: i32 = -1;
    unsafe {
        zgeev_(
            &jobvl,
            &jobvr,
            &ni,
            cm.as_mut_ptr(),
            &ni,
            w.as_mut_ptr(),
            std::ptr::null_mut(),
            &one,
            vr.as_mut_ptr(),
            &ni,
            work_query.as_mut_ptr(),
            &lwork_query,
            rwork.as_mut_ptr(),
            &mut info,
        );
    }
    check_info("zgeev", info)?;
    let lwork = (work_query[0].re as i32).max(2 * ni);
    let mut work = vec![Complex64::new(0.0, 0.0); lwork as usize];
    unsafe {
        zgeev_(
            &jobvl,
            &jobvr,
            &ni,
            cm.as_mut_ptr(),
            &ni,
            w.as_mut_ptr(),
            std::ptr::null_mut(),
            &one,
            vr.as_mut_ptr(),
            &ni,
            work.as_mut_ptr(),
            &lwork,
            rwork.as_mut_ptr(),
            &mut info,
        );
    }
    check_info("zgeev", info)?;

    let vectors = (0..n)
        .map(|k| (0..n).map(|i| vr[i + k * n]).collect())
        .collect();
    Ok((w, vectors))
}

/// Eigenvalues (ascending) and orthonormal eigenvectors of a dense real
/// symmetric matrix. Only the lower triangle is referenced.
pub fn eig_real_symmetric(a: &Array2<f64>) -> Result<(Vec<f64>, Vec<Vec<f64>>)> {
    let n = a.nrows();
    if n == 0 || a.ncols() != n {
        return Err(Error::validation("matrix", "must be square and nonempty"));
    }
    let ni = dim_i32(n)?;

    // symmetric, so the row-major buffer doubles as column-major
    let mut buf: Vec<f64> = Vec::with_capacity(n * n);
    for j in 0..n {
        for i in 0..n {
            buf.push(a[[i, j]]);
        }
    }

    let mut w = vec![0.0f64; n];
    let mut info: i32 = 0;
    let jobz = b'V' as c_char;
    let uplo = b'L' as c_char;

    let mut work_query = [0.0f64];
    let mut iwork_query = [0i32];
    let lwork_query: i32 = -1;
    unsafe {
        dsyevd_(
            &jobz,
            &uplo,
            &ni,
            buf.as_mut_ptr(),
            &ni,
            w.as_mut_ptr(),
            work_query.as_mut_ptr(),
            &lwork_query,
            iwork_query.as_mut_ptr(),
            &lwork_query,
            &mut info,
        );
    }
    check_info("dsyevd", info)?;
    let lwork = work_query[0] as i32;
    let liwork = iwork_query[0];
    let mut work = vec![0.0f64; lwork as usize];
    let mut iwork = vec![0i32; liwork as usize];
    unsafe {
        dsyevd_(
            &jobz,
            &uplo,
            &ni,
            buf.as_mut_ptr(),
            &ni,
            w.as_mut_ptr(),
            work.as_mut_ptr(),
            &lwork,
            iwork.as_mut_ptr(),
            &liwork,
            &mut info,
        );
    }
    check_info("dsyevd", info)?;

    let vectors = (0..n)
        .map(|k| (0..n).map(|i| buf[i + k * n]).collect())
        .collect();
    Ok((w, vectors))
}

/// All eigenvalues of a real symmetric tridiagonal matrix by bisection,
/// ascending, refined to around machine precision.
pub fn eig_tridiagonal(diag: &[f64], offdiag: &[f64]) -> Result<Vec<f64>> {
    let n = diag.len();
    if n == 0 || offdiag.len() + 1 != n {
        return Err(Error::validation(
            "matrix",
            "tridiagonal needs n diagonal and n-1 off-diagonal entries",
        ));
    }
    let ni = dim_i32(n)?;

    let range = b'A' as c_char;
    let order = b'E' as c_char;
    let zero_f = 0.0f64;
    let zero_i = 0i32;
    let safe_min = unsafe { dlamch_(&(b'S' as c_char)) };
    let abstol = 2.0 * safe_min;

    let mut m: i32 = 0;
    let mut nsplit: i32 = 0;
    let mut w = vec![0.0f64; n];
    let mut iblock = vec![0i32; n];
    let mut isplit = vec![0i32; n];
    let mut work = vec![0.0f64; 4 * n];
    let mut iwork = vec![0i32; 3 * n];
    let mut info: i32 = 0;

    unsafe {
        dstebz_(
            &range,
            &order,
            &ni,
            &zero_f,
            &zero_f,
            &zero_i,
            &zero_i,
            &abstol,
            diag.as_ptr(),
            offdiag.as_ptr(),
            &mut m,
            &mut nsplit,
            w.as_mut_ptr(),
            iblock.as_mut_ptr(),
            isplit.as_mut_ptr(),
            work.as_mut_ptr(),
            iwork.as_mut_ptr(),
            &mut info,
        );
    }
    check_info("dstebz", info)?;
    if m as usize != n {
        return Err(Error::Lapack { routine: "dstebz", info: -1001 });
    }
    w.truncate(n);
    Ok(w)
}
