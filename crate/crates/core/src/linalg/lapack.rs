//! Thin safe wrappers over the LAPACK drivers used by the crate.
//!
//! LAPACK is column-major; a row-major buffer handed over unchanged is seen as the
//! transpose, which the wrappers undo on the way out.

use std::os::raw::c_char;

use lapack_sys::{zgees_, zgesvd_, zheevr_};

use super::CMatrix;
use crate::{Error, Result, C64};

const ZERO: C64 = C64 { re: 0.0, im: 0.0 };

fn ch(c: u8) -> c_char {
    c as c_char
}

fn lapack_dim(n: usize) -> Result<i32> {
    i32::try_from(n).map_err(|_| Error::Dimension(format!("dimension {n} exceeds LAPACK range")))
}

/// Eigenvalues (ascending) and orthonormal eigenvectors (columns) of a Hermitian matrix.
///
/// Only the Hermitian part is referenced; callers validate hermiticity.
pub(crate) fn hermitian_eigen(h: &CMatrix) -> Result<(Vec<f64>, CMatrix)> {
    let n = h.rows();
    let ni = lapack_dim(n)?;
    // Row-major h read as column-major is h^T = conj(h): same eigenvalues, conjugated vectors.
    let mut a = h.as_slice().to_vec();
    let mut w = vec![0.0; n];
    let mut z = vec![ZERO; n * n];
    let mut isuppz = vec![0i32; 2 * n];
    let mut m = 0i32;
    let mut info = 0i32;
    let (vl, vu, il, iu, abstol) = (0.0f64, 0.0f64, 0i32, 0i32, 0.0f64);

    let mut work_q = [ZERO];
    let mut rwork_q = [0.0f64];
    let mut iwork_q = [0i32];
    let query = -1i32;
    // SAFETY: workspace query; all pointers reference live buffers of the advertised size.
    unsafe {
        zheevr_(
            &ch(b'V'),
            &ch(b'A'),
            &ch(b'U'),
            &ni,
            a.as_mut_ptr() as *mut _,
            &ni,
            &vl,
            &vu,
            &il,
            &iu,
            &abstol,
            &mut m,
            w.as_mut_ptr(),
            z.as_mut_ptr() as *mut _,
            &ni,
            isuppz.as_mut_ptr(),
            work_q.as_mut_ptr() as *mut _,
            &query,
            rwork_q.as_mut_ptr(),
            &query,
            iwork_q.as_mut_ptr(),
            &query,
            &mut info,
        );
    }
    if info != 0 {
        return Err(Error::NonConvergence { routine: "zheevr", info });
    }
    let lwork = (work_q[0].re as i32).max(2 * ni.max(1));
    let lrwork = (rwork_q[0] as i32).max(24 * ni.max(1));
    let liwork = iwork_q[0].max(10 * ni.max(1));
    let mut work = vec![ZERO; lwork as usize];
    let mut rwork = vec![0.0f64; lrwork as usize];
    let mut iwork = vec![0i32; liwork as usize];
    // SAFETY: buffers sized per the workspace query; a, z are n x n.
    unsafe {
        zheevr_(
            &ch(b'V'),
            &ch(b'A'),
            &ch(b'U'),
            &ni,
            a.as_mut_ptr() as *mut _,
            &ni,
            &vl,
            &vu,
            &il,
            &iu,
            &abstol,
            &mut m,
            w.as_mut_ptr(),
            z.as_mut_ptr() as *mut _,
            &ni,
            isuppz.as_mut_ptr(),
            work.as_mut_ptr() as *mut _,
            &lwork,
            rwork.as_mut_ptr(),
            &lrwork,
            iwork.as_mut_ptr(),
            &liwork,
            &mut info,
        );
    }
    if info != 0 || m != ni {
        return Err(Error::NonConvergence { routine: "zheevr", info });
    }
    // z is column-major: z[i + j n] is component i of vector j (of conj(h)).
    let v = CMatrix::from_fn(n, n, |i, j| z[i + j * n].conj());
    Ok((w, v))
}

/// Complex Schur form `a = z t z†`, returning (t, z) as row-major matrices.
pub(crate) fn schur(a: &CMatrix) -> Result<(CMatrix, CMatrix)> {
    let n = a.rows();
    let ni = lapack_dim(n)?;
    // Hand over the transpose explicitly so LAPACK sees `a` itself.
    let mut buf = a.transpose().into_vec();
    let mut sdim = 0i32;
    let mut w = vec![ZERO; n];
    let mut vs = vec![ZERO; n * n];
    let lwork = (4 * n).max(1) as i32;
    let mut work = vec![ZERO; lwork as usize];
    let mut rwork = vec![0.0; n];
    let mut bwork = vec![0i32; n];
    let mut info = 0i32;
    // SAFETY: buffers sized for an n x n problem; no eigenvalue selection callback.
    unsafe {
        zgees_(
            &ch(b'V'),
            &ch(b'N'),
            None,
            &ni,
            buf.as_mut_ptr() as *mut _,
            &ni,
            &mut sdim,
            w.as_mut_ptr() as *mut _,
            vs.as_mut_ptr() as *mut _,
            &ni,
            work.as_mut_ptr() as *mut _,
            &lwork,
            rwork.as_mut_ptr(),
            bwork.as_mut_ptr(),
            &mut info,
        );
    }
    if info != 0 {
        return Err(Error::NonConvergence { routine: "zgees", info });
    }
    let t = CMatrix::from_fn(n, n, |i, j| buf[i + j * n]);
    let z = CMatrix::from_fn(n, n, |i, j| vs[i + j * n]);
    Ok((t, z))
}

/// Singular values (descending) and optionally the factors `m = u diag(s) vh`.
pub(crate) fn svd(m: &CMatrix, vectors: bool) -> Result<(Vec<f64>, Option<(CMatrix, CMatrix)>)> {
    let (r, c) = (m.rows(), m.cols());
    // Row-major m read column-major is the c x r matrix m^T = u' s vh'; then m = vh'^T s u'^T.
    let (mi, ni) = (lapack_dim(c)?, lapack_dim(r)?);
    let k = r.min(c);
    let mut a = m.as_slice().to_vec();
    let mut s = vec![0.0; k];
    let job = if vectors { ch(b'S') } else { ch(b'N') };
    let mut u = vec![ZERO; if vectors { c * k } else { 1 }];
    let mut vt = vec![ZERO; if vectors { k * r } else { 1 }];
    let ldu = mi.max(1);
    let ldvt = if vectors { k as i32 } else { 1 };
    let mut rwork = vec![0.0; 5 * k.max(1)];
    let mut info = 0i32;
    let mut work_q = [ZERO];
    let query = -1i32;
    // SAFETY: workspace query with live buffers.
    unsafe {
        zgesvd_(
            &job,
            &job,
            &mi,
            &ni,
            a.as_mut_ptr() as *mut _,
            &mi,
            s.as_mut_ptr(),
            u.as_mut_ptr() as *mut _,
            &ldu,
            vt.as_mut_ptr() as *mut _,
            &ldvt,
            work_q.as_mut_ptr() as *mut _,
            &query,
            rwork.as_mut_ptr(),
            &mut info,
        );
    }
    if info != 0 {
        return Err(Error::NonConvergence { routine: "zgesvd", info });
    }
    let lwork = (work_q[0].re as i32).max(1);
    let mut work = vec![ZERO; lwork as usize];
    // SAFETY: buffers sized for the (c x r) problem with economy factors.
    unsafe {
        zgesvd_(
            &job,
            &job,
            &mi,
            &ni,
            a.as_mut_ptr() as *mut _,
            &mi,
            s.as_mut_ptr(),
            u.as_mut_ptr() as *mut _,
            &ldu,
            vt.as_mut_ptr() as *mut _,
            &ldvt,
            work.as_mut_ptr() as *mut _,
            &lwork,
            rwork.as_mut_ptr(),
            &mut info,
        );
    }
    if info != 0 {
        return Err(Error::NonConvergence { routine: "zgesvd", info });
    }
    if !vectors {
        return Ok((s, None));
    }
    // u' is c x k column-major, vh' is k x r column-major.
    // left factor of m: vh'^T (r x k), entry (i, l) = vh'[l, i] = vt[l + i k]
    let left = CMatrix::from_fn(r, k, |i, l| vt[l + i * k]);
    // right factor of m: u'^T (k x c), entry (l, j) = u'[j, l] = u[j + l c]
    let right = CMatrix::from_fn(k, c, |l, j| u[j + l * c]);
    Ok((s, Some((left, right))))
}
