# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled stepping kernels.

Same contracts and, per kernel, the same floating-point operation order as
charax._kernels._numpy; keep the two in sync.
"""

import numpy as np

cimport numpy as cnp
from libc.math cimport fabs as _fabs

cnp.import_array()

cdef double DENOM_FLOOR = 1e-8


cdef inline double _pos(double s) nogil:
    return s if s > 0.0 else 0.0


cdef inline double _neg(double s) nogil:
    return s if s < 0.0 else 0.0


cdef void _fill_pad(double[::1] src, double[::1] dst, bint periodic,
                    double shift, double gl, double gr):
    cdef Py_ssize_t n = src.shape[0]
    cdef Py_ssize_t j
    for j in range(n):
        dst[j + 1] = src[j]
    if periodic:
        dst[0] = src[n - 1] - shift
        dst[n + 1] = src[0] + shift
    else:
        dst[0] = gl
        dst[n + 1] = gr


def step_advective_1d(double[::1] q, double[::1] speed, double eps, double dt,
                      double dx, bint periodic=True, double shift=0.0,
                      double gl=0.0, double gr=0.0):
    cdef Py_ssize_t n = q.shape[0]
    cdef double lam = dt / dx
    cdef double mu = eps * dt / (dx * dx)
    cdef cnp.ndarray[double, ndim=1] qe_arr = np.empty(n + 2)
    cdef cnp.ndarray[double, ndim=1] out_arr = np.empty(n)
    cdef double[::1] qe = qe_arr
    cdef double[::1] out = out_arr
    cdef Py_ssize_t j
    cdef double s, qm1, q0, qp1, adv

    _fill_pad(q, qe, periodic, shift, gl, gr)
    for j in range(n):
        qm1 = qe[j]
        q0 = qe[j + 1]
        qp1 = qe[j + 2]
        s = speed[j]
        adv = _pos(s) * (q0 - qm1) + _neg(s) * (qp1 - q0)
        out[j] = q0 - lam * adv + mu * (qp1 - 2.0 * q0 + qm1)
    return out_arr


def step_conservative_1d(double[::1] q, double[::1] speed, double eps, double dt,
                         double dx, bint periodic=True, double gl=0.0, double gr=0.0,
                         double upwind_weight=1.0):
    cdef Py_ssize_t n = q.shape[0]
    cdef double lam = dt / dx
    cdef double mu = eps * dt / (dx * dx)
    cdef double hw = 0.5 * upwind_weight
    cdef cnp.ndarray[double, ndim=1] qe_arr = np.empty(n + 2)
    cdef cnp.ndarray[double, ndim=1] se_arr = np.empty(n + 2)
    cdef cnp.ndarray[double, ndim=1] fl_arr = np.empty(n + 1)
    cdef cnp.ndarray[double, ndim=1] out_arr = np.empty(n)
    cdef double[::1] qe = qe_arr
    cdef double[::1] se = se_arr
    cdef double[::1] flux = fl_arr
    cdef double[::1] out = out_arr
    cdef Py_ssize_t j
    cdef double si, dq

    _fill_pad(q, qe, periodic, 0.0, gl, gr)
    _fill_pad(speed, se, periodic, 0.0, speed[0], speed[n - 1])
    for j in range(n + 1):
        si = 0.5 * (se[j] + se[j + 1])
        dq = qe[j + 1] - qe[j]
        flux[j] = si * (0.5 * (qe[j] + qe[j + 1])) - hw * _fabs(si) * dq
    for j in range(n):
        out[j] = (qe[j + 1] - lam * (flux[j + 1] - flux[j])
                  + mu * (qe[j + 2] - 2.0 * qe[j + 1] + qe[j]))
    return out_arr


def step_flux_form_1d(double[::1] q, double[::1] fq, double[::1] speed,
                      double eps, double dt, double dx, bint periodic=True,
                      double gl=0.0, double gr=0.0, double fgl=0.0, double fgr=0.0,
                      double upwind_weight=1.0):
    cdef Py_ssize_t n = q.shape[0]
    cdef double lam = dt / dx
    cdef double mu = eps * dt / (dx * dx)
    cdef double hw = 0.5 * upwind_weight
    cdef cnp.ndarray[double, ndim=1] qe_arr = np.empty(n + 2)
    cdef cnp.ndarray[double, ndim=1] fe_arr = np.empty(n + 2)
    cdef cnp.ndarray[double, ndim=1] se_arr = np.empty(n + 2)
    cdef cnp.ndarray[double, ndim=1] fl_arr = np.empty(n + 1)
    cdef cnp.ndarray[double, ndim=1] out_arr = np.empty(n)
    cdef double[::1] qe = qe_arr
    cdef double[::1] fe = fe_arr
    cdef double[::1] se = se_arr
    cdef double[::1] flux = fl_arr
    cdef double[::1] out = out_arr
    cdef Py_ssize_t j
    cdef double ql, qr, dq, si

    _fill_pad(q, qe, periodic, 0.0, gl, gr)
    _fill_pad(fq, fe, periodic, 0.0, fgl, fgr)
    _fill_pad(speed, se, periodic, 0.0, speed[0], speed[n - 1])
    for j in range(n + 1):
        ql = qe[j]
        qr = qe[j + 1]
        dq = qr - ql
        if _fabs(dq) <= DENOM_FLOOR * (1.0 + _fabs(ql) + _fabs(qr)):
            si = 0.5 * (se[j] + se[j + 1])
        else:
            si = (fe[j + 1] - fe[j]) / dq
        flux[j] = 0.5 * (fe[j] + fe[j + 1]) - hw * _fabs(si) * dq
    for j in range(n):
        out[j] = (qe[j + 1] - lam * (flux[j + 1] - flux[j])
                  + mu * (qe[j + 2] - 2.0 * qe[j + 1] + qe[j]))
    return out_arr


def step_flux_form_2d(double[:, ::1] q, double[:, ::1] f1q, double[:, ::1] f2q,
                      double[:, ::1] speed1, double[:, ::1] speed2,
                      double eps, double dt, double dx1, double dx2,
                      double upwind_weight=1.0):
    cdef Py_ssize_t n1 = q.shape[0]
    cdef Py_ssize_t n2 = q.shape[1]
    cdef double lam1 = dt / dx1
    cdef double lam2 = dt / dx2
    cdef double mu1 = eps * dt / (dx1 * dx1)
    cdef double mu2 = eps * dt / (dx2 * dx2)
    cdef double hw = 0.5 * upwind_weight
    cdef cnp.ndarray[double, ndim=2] g1_arr = np.empty((n1 + 1, n2))
    cdef cnp.ndarray[double, ndim=2] g2_arr = np.empty((n1, n2 + 1))
    cdef cnp.ndarray[double, ndim=2] out_arr = np.empty((n1, n2))
    cdef double[:, ::1] g1 = g1_arr
    cdef double[:, ::1] g2 = g2_arr
    cdef double[:, ::1] out = out_arr
    cdef Py_ssize_t i, j, im, ip, jm, jp
    cdef double ql, qr, dq, si, fl, fr, sl, sr, lap1, lap2

    for i in range(n1 + 1):
        im = (i + n1 - 1) % n1
        ip = i % n1
        for j in range(n2):
            ql = q[im, j]
            qr = q[ip, j]
            fl = f1q[im, j]
            fr = f1q[ip, j]
            sl = speed1[im, j]
            sr = speed1[ip, j]
            dq = qr - ql
            if _fabs(dq) <= DENOM_FLOOR * (1.0 + _fabs(ql) + _fabs(qr)):
                si = 0.5 * (sl + sr)
            else:
                si = (fr - fl) / dq
            g1[i, j] = 0.5 * (fl + fr) - hw * _fabs(si) * dq
    for i in range(n1):
        for j in range(n2 + 1):
            jm = (j + n2 - 1) % n2
            jp = j % n2
            ql = q[i, jm]
            qr = q[i, jp]
            fl = f2q[i, jm]
            fr = f2q[i, jp]
            sl = speed2[i, jm]
            sr = speed2[i, jp]
            dq = qr - ql
            if _fabs(dq) <= DENOM_FLOOR * (1.0 + _fabs(ql) + _fabs(qr)):
                si = 0.5 * (sl + sr)
            else:
                si = (fr - fl) / dq
            g2[i, j] = 0.5 * (fl + fr) - hw * _fabs(si) * dq
    for i in range(n1):
        im = i - 1 if i > 0 else n1 - 1
        ip = i + 1 if i < n1 - 1 else 0
        for j in range(n2):
            jm = j - 1 if j > 0 else n2 - 1
            jp = j + 1 if j < n2 - 1 else 0
            lap1 = q[ip, j] - 2.0 * q[i, j] + q[im, j]
            lap2 = q[i, jp] - 2.0 * q[i, j] + q[i, jm]
            out[i, j] = (q[i, j] - lam1 * (g1[i + 1, j] - g1[i, j])
                         - lam2 * (g2[i, j + 1] - g2[i, j])
                         + mu1 * lap1 + mu2 * lap2)
    return out_arr


def step_conservative_2d(double[:, ::1] q, double[:, ::1] speed1,
                         double[:, ::1] speed2, double eps, double dt,
                         double dx1, double dx2, double upwind_weight=1.0):
    cdef Py_ssize_t n1 = q.shape[0]
    cdef Py_ssize_t n2 = q.shape[1]
    cdef double lam1 = dt / dx1
    cdef double lam2 = dt / dx2
    cdef double mu1 = eps * dt / (dx1 * dx1)
    cdef double mu2 = eps * dt / (dx2 * dx2)
    cdef cnp.ndarray[double, ndim=2] g1_arr = np.empty((n1 + 1, n2))
    cdef cnp.ndarray[double, ndim=2] g2_arr = np.empty((n1, n2 + 1))
    cdef cnp.ndarray[double, ndim=2] out_arr = np.empty((n1, n2))
    cdef double[:, ::1] g1 = g1_arr
    cdef double[:, ::1] g2 = g2_arr
    cdef double[:, ::1] out = out_arr
    cdef Py_ssize_t i, j, im, ip, jm, jp
    cdef double si, dq, lap1, lap2
    cdef double hw = 0.5 * upwind_weight

    for i in range(n1 + 1):
        im = (i + n1 - 1) % n1
        ip = i % n1
        for j in range(n2):
            si = 0.5 * (speed1[im, j] + speed1[ip, j])
            dq = q[ip, j] - q[im, j]
            g1[i, j] = si * (0.5 * (q[im, j] + q[ip, j])) - hw * _fabs(si) * dq
    for i in range(n1):
        for j in range(n2 + 1):
            jm = (j + n2 - 1) % n2
            jp = j % n2
            si = 0.5 * (speed2[i, jm] + speed2[i, jp])
            dq = q[i, jp] - q[i, jm]
            g2[i, j] = si * (0.5 * (q[i, jm] + q[i, jp])) - hw * _fabs(si) * dq
    for i in range(n1):
        im = i - 1 if i > 0 else n1 - 1
        ip = i + 1 if i < n1 - 1 else 0
        for j in range(n2):
            jm = j - 1 if j > 0 else n2 - 1
            jp = j + 1 if j < n2 - 1 else 0
            lap1 = q[ip, j] - 2.0 * q[i, j] + q[im, j]
            lap2 = q[i, jp] - 2.0 * q[i, j] + q[i, jm]
            out[i, j] = (q[i, j] - lam1 * (g1[i + 1, j] - g1[i, j])
                         - lam2 * (g2[i, j + 1] - g2[i, j])
                         + mu1 * lap1 + mu2 * lap2)
    return out_arr
