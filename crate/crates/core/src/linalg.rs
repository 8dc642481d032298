//! Thin safe wrappers over BLAS-3 products (matrixmultiply) and the LAPACK
//! drivers used by the spectral routines.
//!
//! Every LAPACK wrapper takes a column-major buffer. A row-major buffer of `M`
//! is the column-major buffer of `Mᵀ`, which has the same eigenvalues and
//! singular values; callers that need vectors account for the transpose.

use std::os::raw::{c_char, c_int};

use lapack_sys::__BindgenComplex;
use num_complex::Complex64;

use crate::error::{Result, RmtError};

type Zc = __BindgenComplex<f64>;

fn zc(p: *mut Complex64) -> *mut Zc {
    p.cast()
}

fn ch(b: &'static [u8; 1]) -> *const c_char {
    b.as_ptr().cast()
}

fn dim(n: usize) -> Result<c_int> {
    c_int::try_from(n).map_err(|_| RmtError::InvalidDimension(format!("dimension {n} overflows LAPACK int")))
}

fn check_info(routine: &'static str, info: c_int) -> Result<()> {
    match info {
        0 => Ok(()),
        i if i < 0 => Err(RmtError::ContractViolation(format!(
            "{routine}: argument {} had an illegal value",
            -i
        ))),
        i => Err(RmtError::Convergence {
            routine,
            detail: format!("LAPACK info = {i}; the QR iteration exhausted its sweep budget"),
        }),
    }
}

/// `C ← α·A·B` for real row/column-strided operands; strides are `(row, col)`.
#[allow(clippy::too_many_arguments)]
pub(crate) fn dgemm(
    m: usize,
    k: usize,
    n: usize,
    alpha: f64,
    a: &[f64],
    a_stride: (usize, usize),
    b: &[f64],
    b_stride: (usize, usize),
    c: &mut [f64],
) {
    assert!(c.len() >= m * n);
    // SAFETY: strides and extents were validated by the callers against the
    // buffer lengths; `c` is written row-major with stride (n, 1).
    unsafe {
        matrixmultiply::dgemm(
            m,
            k,
            n,
            alpha,
            a.as_ptr(),
            a_stride.0 as isize,
            a_stride.1 as isize,
            b.as_ptr(),
            b_stride.0 as isize,
            b_stride.1 as isize,
            0.0,
            c.as_mut_ptr(),
            n as isize,
            1,
        );
    }
}

/// Complex analogue of [`dgemm`] with `α = 1`.
pub(crate) fn zgemm(
    m: usize,
    k: usize,
    n: usize,
    a: &[Complex64],
    a_stride: (usize, usize),
    b: &[Complex64],
    b_stride: (usize, usize),
    c: &mut [Complex64],
) {
    assert!(c.len() >= m * n);
    // SAFETY: Complex64 is repr(C) `{re, im}`, layout-identical to `[f64; 2]`.
    unsafe {
        matrixmultiply::zgemm(
            matrixmultiply::CGemmOption::Standard,
            matrixmultiply::CGemmOption::Standard,
            m,
            k,
            n,
            [1.0, 0.0],
            a.as_ptr().cast(),
            a_stride.0 as isize,
            a_stride.1 as isize,
            b.as_ptr().cast(),
            b_stride.0 as isize,
            b_stride.1 as isize,
            [0.0, 0.0],
            c.as_mut_ptr().cast(),
            n as isize,
            1,
        );
    }
}

/// Eigenvalues (ascending) of a real symmetric matrix; optional eigenvectors
/// returned column-major.
pub(crate) fn dsyevd(mut a: Vec<f64>, n: usize, vectors: bool) -> Result<(Vec<f64>, Option<Vec<f64>>)> {
    let nn = dim(n)?;
    let jobz = if vectors { ch(b"V") } else { ch(b"N") };
    let mut w = vec![0.0; n];
    let mut info: c_int = 0;
    let mut wq = [0.0f64];
    let mut iq: [c_int; 1] = [0];
    let query: c_int = -1;
    // SAFETY: workspace query; all pointers reference live buffers of the
    // sizes LAPACK documents for `lwork = -1`.
    unsafe {
        lapack_sys::dsyevd_(
            jobz, ch(b"L"), &nn, a.as_mut_ptr(), &nn, w.as_mut_ptr(),
            wq.as_mut_ptr(), &query, iq.as_mut_ptr(), &query, &mut info,
        );
    }
    check_info("dsyevd", info)?;
    let lwork = wq[0] as c_int;
    let liwork = iq[0];
    let mut work = vec![0.0; lwork.max(1) as usize];
    let mut iwork: Vec<c_int> = vec![0; liwork.max(1) as usize];
    // SAFETY: as above with the queried workspace sizes.
    unsafe {
        lapack_sys::dsyevd_(
            jobz, ch(b"L"), &nn, a.as_mut_ptr(), &nn, w.as_mut_ptr(),
            work.as_mut_ptr(), &lwork, iwork.as_mut_ptr(), &liwork, &mut info,
        );
    }
    check_info("dsyevd", info)?;
    Ok((w, vectors.then_some(a)))
}

/// Eigenvalues (ascending) of a complex Hermitian matrix; optional eigenvectors
/// returned column-major. Only the lower triangle of the column-major buffer is read.
pub(crate) fn zheevd(
    mut a: Vec<Complex64>,
    n: usize,
    vectors: bool,
) -> Result<(Vec<f64>, Option<Vec<Complex64>>)> {
    let nn = dim(n)?;
    let jobz = if vectors { ch(b"V") } else { ch(b"N") };
    let mut w = vec![0.0; n];
    let mut info: c_int = 0;
    let mut wq = [Complex64::new(0.0, 0.0)];
    let mut rq = [0.0f64];
    let mut iq: [c_int; 1] = [0];
    let query: c_int = -1;
    // SAFETY: workspace query.
    unsafe {
        lapack_sys::zheevd_(
            jobz, ch(b"L"), &nn, zc(a.as_mut_ptr()), &nn, w.as_mut_ptr(),
            zc(wq.as_mut_ptr()), &query, rq.as_mut_ptr(), &query, iq.as_mut_ptr(), &query, &mut info,
        );
    }
    check_info("zheevd", info)?;
    let lwork = wq[0].re as c_int;
    let lrwork = rq[0] as c_int;
    let liwork = iq[0];
    let mut work = vec![Complex64::new(0.0, 0.0); lwork.max(1) as usize];
    let mut rwork = vec![0.0; lrwork.max(1) as usize];
    let mut iwork: Vec<c_int> = vec![0; liwork.max(1) as usize];
    // SAFETY: queried workspace sizes.
    unsafe {
        lapack_sys::zheevd_(
            jobz, ch(b"L"), &nn, zc(a.as_mut_ptr()), &nn, w.as_mut_ptr(),
            zc(work.as_mut_ptr()), &lwork, rwork.as_mut_ptr(), &lrwork,
            iwork.as_mut_ptr(), &liwork, &mut info,
        );
    }
    check_info("zheevd", info)?;
    Ok((w, vectors.then_some(a)))
}

/// Eigenvalues of a general real matrix.
pub(crate) fn dgeev(mut a: Vec<f64>, n: usize) -> Result<Vec<Complex64>> {
    let nn = dim(n)?;
    let mut wr = vec![0.0; n];
    let mut wi = vec![0.0; n];
    let mut dummy = [0.0f64];
    let one: c_int = 1;
    let mut info: c_int = 0;
    let mut wq = [0.0f64];
    let query: c_int = -1;
    // SAFETY: workspace query; no vectors requested so VL/VR are never touched.
    unsafe {
        lapack_sys::dgeev_(
            ch(b"N"), ch(b"N"), &nn, a.as_mut_ptr(), &nn, wr.as_mut_ptr(), wi.as_mut_ptr(),
            dummy.as_mut_ptr(), &one, dummy.as_mut_ptr(), &one, wq.as_mut_ptr(), &query, &mut info,
        );
    }
    check_info("dgeev", info)?;
    let lwork = wq[0] as c_int;
    let mut work = vec![0.0; lwork.max(1) as usize];
    // SAFETY: queried workspace size.
    unsafe {
        lapack_sys::dgeev_(
            ch(b"N"), ch(b"N"), &nn, a.as_mut_ptr(), &nn, wr.as_mut_ptr(), wi.as_mut_ptr(),
            dummy.as_mut_ptr(), &one, dummy.as_mut_ptr(), &one, work.as_mut_ptr(), &lwork, &mut info,
        );
    }
    check_info("dgeev", info)?;
    Ok(wr.into_iter().zip(wi).map(|(re, im)| Complex64::new(re, im)).collect())
}

/// Eigenvalues of a general complex matrix.
pub(crate) fn zgeev(mut a: Vec<Complex64>, n: usize) -> Result<Vec<Complex64>> {
    let nn = dim(n)?;
    let mut w = vec![Complex64::new(0.0, 0.0); n];
    let mut dummy = [Complex64::new(0.0, 0.0)];
    let one: c_int = 1;
    let mut rwork = vec![0.0; 2 * n.max(1)];
    let mut info: c_int = 0;
    let mut wq = [Complex64::new(0.0, 0.0)];
    let query: c_int = -1;
    // SAFETY: workspace query; no vectors requested.
    unsafe {
        lapack_sys::zgeev_(
            ch(b"N"), ch(b"N"), &nn, zc(a.as_mut_ptr()), &nn, zc(w.as_mut_ptr()),
            zc(dummy.as_mut_ptr()), &one, zc(dummy.as_mut_ptr()), &one,
            zc(wq.as_mut_ptr()), &query, rwork.as_mut_ptr(), &mut info,
        );
    }
    check_info("zgeev", info)?;
    let lwork = wq[0].re as c_int;
    let mut work = vec![Complex64::new(0.0, 0.0); lwork.max(1) as usize];
    // SAFETY: queried workspace size.
    unsafe {
        lapack_sys::zgeev_(
            ch(b"N"), ch(b"N"), &nn, zc(a.as_mut_ptr()), &nn, zc(w.as_mut_ptr()),
            zc(dummy.as_mut_ptr()), &one, zc(dummy.as_mut_ptr()), &one,
            zc(work.as_mut_ptr()), &lwork, rwork.as_mut_ptr(), &mut info,
        );
    }
    check_info("zgeev", info)?;
    Ok(w)
}

/// Singular values (descending) of a real `m × n` column-major matrix.
pub(crate) fn dgesdd(mut a: Vec<f64>, m: usize, n: usize) -> Result<Vec<f64>> {
    let (mm, nn) = (dim(m)?, dim(n)?);
    let k = m.min(n);
    let mut s = vec![0.0; k];
    let mut dummy = [0.0f64];
    let one: c_int = 1;
    let mut iwork: Vec<c_int> = vec![0; 8 * k.max(1)];
    let mut info: c_int = 0;
    let mut wq = [0.0f64];
    let query: c_int = -1;
    // SAFETY: workspace query, jobz = 'N'.
    unsafe {
        lapack_sys::dgesdd_(
            ch(b"N"), &mm, &nn, a.as_mut_ptr(), &mm, s.as_mut_ptr(), dummy.as_mut_ptr(), &one,
            dummy.as_mut_ptr(), &one, wq.as_mut_ptr(), &query, iwork.as_mut_ptr(), &mut info,
        );
    }
    check_info("dgesdd", info)?;
    let lwork = wq[0] as c_int;
    let mut work = vec![0.0; lwork.max(1) as usize];
    // SAFETY: queried workspace size.
    unsafe {
        lapack_sys::dgesdd_(
            ch(b"N"), &mm, &nn, a.as_mut_ptr(), &mm, s.as_mut_ptr(), dummy.as_mut_ptr(), &one,
            dummy.as_mut_ptr(), &one, work.as_mut_ptr(), &lwork, iwork.as_mut_ptr(), &mut info,
        );
    }
    check_info("dgesdd", info)?;
    Ok(s)
}

/// Singular values (descending) of a complex `m × n` column-major matrix.
pub(crate) fn zgesdd(mut a: Vec<Complex64>, m: usize, n: usize) -> Result<Vec<f64>> {
    let (mm, nn) = (dim(m)?, dim(n)?);
    let k = m.min(n);
    let mut s = vec![0.0; k];
    let mut dummy = [Complex64::new(0.0, 0.0)];
    let one: c_int = 1;
    let mut rwork = vec![0.0; 7 * k.max(1)];
    let mut iwork: Vec<c_int> = vec![0; 8 * k.max(1)];
    let mut info: c_int = 0;
    let mut wq = [Complex64::new(0.0, 0.0)];
    let query: c_int = -1;
    // SAFETY: workspace query, jobz = 'N' (rwork of 7·min(m,n) suffices).
    unsafe {
        lapack_sys::zgesdd_(
            ch(b"N"), &mm, &nn, zc(a.as_mut_ptr()), &mm, s.as_mut_ptr(), zc(dummy.as_mut_ptr()), &one,
            zc(dummy.as_mut_ptr()), &one, zc(wq.as_mut_ptr()), &query, rwork.as_mut_ptr(),
            iwork.as_mut_ptr(), &mut info,
        );
    }
    check_info("zgesdd", info)?;
    let lwork = wq[0].re as c_int;
    let mut work = vec![Complex64::new(0.0, 0.0); lwork.max(1) as usize];
    // SAFETY: queried workspace size.
    unsafe {
        lapack_sys::zgesdd_(
            ch(b"N"), &mm, &nn, zc(a.as_mut_ptr()), &mm, s.as_mut_ptr(), zc(dummy.as_mut_ptr()), &one,
            zc(dummy.as_mut_ptr()), &one, zc(work.as_mut_ptr()), &lwork, rwork.as_mut_ptr(),
            iwork.as_mut_ptr(), &mut info,
        );
    }
    check_info("zgesdd", info)?;
    Ok(s)
}

/// Householder QR of a square column-major real matrix.
/// Returns the explicit `Q` (column-major) and the diagonal of `R`.
pub(crate) fn dgeqrf_q(mut a: Vec<f64>, n: usize) -> Result<(Vec<f64>, Vec<f64>)> {
    let nn = dim(n)?;
    let mut tau = vec![0.0; n];
    let mut info: c_int = 0;
    let mut wq = [0.0f64];
    let query: c_int = -1;
    // SAFETY: workspace query.
    unsafe {
        lapack_sys::dgeqrf_(&nn, &nn, a.as_mut_ptr(), &nn, tau.as_mut_ptr(), wq.as_mut_ptr(), &query, &mut info);
    }
    check_info("dgeqrf", info)?;
    let mut lwork = wq[0] as c_int;
    let mut work = vec![0.0; lwork.max(1) as usize];
    // SAFETY: queried workspace size.
    unsafe {
        lapack_sys::dgeqrf_(&nn, &nn, a.as_mut_ptr(), &nn, tau.as_mut_ptr(), work.as_mut_ptr(), &lwork, &mut info);
    }
    check_info("dgeqrf", info)?;
    let rdiag: Vec<f64> = (0..n).map(|k| a[k * n + k]).collect();
    // SAFETY: workspace query for the explicit Q.
    unsafe {
        lapack_sys::dorgqr_(&nn, &nn, &nn, a.as_mut_ptr(), &nn, tau.as_ptr(), wq.as_mut_ptr(), &query, &mut info);
    }
    check_info("dorgqr", info)?;
    lwork = (wq[0] as c_int).max(lwork);
    work.resize(lwork.max(1) as usize, 0.0);
    // SAFETY: `work` holds at least the queried size.
    unsafe {
        lapack_sys::dorgqr_(&nn, &nn, &nn, a.as_mut_ptr(), &nn, tau.as_ptr(), work.as_mut_ptr(), &lwork, &mut info);
    }
    check_info("dorgqr", info)?;
    Ok((a, rdiag))
}

/// Complex analogue of [`dgeqrf_q`].
pub(crate) fn zgeqrf_q(mut a: Vec<Complex64>, n: usize) -> Result<(Vec<Complex64>, Vec<Complex64>)> {
    let nn = dim(n)?;
    let mut tau = vec![Complex64::new(0.0, 0.0); n];
    let mut info: c_int = 0;
    let mut wq = [Complex64::new(0.0, 0.0)];
    let query: c_int = -1;
    // SAFETY: workspace query.
    unsafe {
        lapack_sys::zgeqrf_(&nn, &nn, zc(a.as_mut_ptr()), &nn, zc(tau.as_mut_ptr()), zc(wq.as_mut_ptr()), &query, &mut info);
    }
    check_info("zgeqrf", info)?;
    let mut lwork = wq[0].re as c_int;
    let mut work = vec![Complex64::new(0.0, 0.0); lwork.max(1) as usize];
    // SAFETY: queried workspace size.
    unsafe {
        lapack_sys::zgeqrf_(&nn, &nn, zc(a.as_mut_ptr()), &nn, zc(tau.as_mut_ptr()), zc(work.as_mut_ptr()), &lwork, &mut info);
    }
    check_info("zgeqrf", info)?;
    let rdiag: Vec<Complex64> = (0..n).map(|k| a[k * n + k]).collect();
    // SAFETY: workspace query for the explicit Q.
    unsafe {
        lapack_sys::zungqr_(
            &nn, &nn, &nn, zc(a.as_mut_ptr()), &nn, tau.as_ptr().cast(), zc(wq.as_mut_ptr()), &query, &mut info,
        );
    }
    check_info("zungqr", info)?;
    lwork = (wq[0].re as c_int).max(lwork);
    work.resize(lwork.max(1) as usize, Complex64::new(0.0, 0.0));
    // SAFETY: `work` holds at least the queried size.
    unsafe {
        lapack_sys::zungqr_(
            &nn, &nn, &nn, zc(a.as_mut_ptr()), &nn, tau.as_ptr().cast(), zc(work.as_mut_ptr()), &lwork, &mut info,
        );
    }
    check_info("zungqr", info)?;
    Ok((a, rdiag))
}

/// Solves `A x = b` for square column-major real `A` by partial-pivoting LU.
pub(crate) fn dgesv(mut a: Vec<f64>, n: usize, mut b: Vec<f64>) -> Result<Vec<f64>> {
    let nn = dim(n)?;
    let one: c_int = 1;
    let mut ipiv: Vec<c_int> = vec![0; n];
    let mut info: c_int = 0;
    // SAFETY: `a` is n×n, `b` has n entries.
    unsafe {
        lapack_sys::dgesv_(&nn, &one, a.as_mut_ptr(), &nn, ipiv.as_mut_ptr(), b.as_mut_ptr(), &nn, &mut info);
    }
    if info > 0 {
        return Err(RmtError::Convergence {
            routine: "dgesv",
            detail: format!("U({info},{info}) is exactly zero; Jacobian singular"),
        });
    }
    check_info("dgesv", info)?;
    Ok(b)
}
