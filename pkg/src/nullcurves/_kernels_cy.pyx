# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot kernels.  Mirror of nullcurves._kernels_py; keep in sync."""

import numpy as np

cimport numpy as cnp

cnp.import_array()

BACKEND = "cython"


def horner_eval(coeffs, z):
    cdef cnp.ndarray[cnp.complex128_t, ndim=2] c = \
        np.ascontiguousarray(coeffs, dtype=np.complex128)
    cdef cnp.ndarray[cnp.complex128_t, ndim=1] zs = \
        np.ascontiguousarray(z, dtype=np.complex128)
    cdef Py_ssize_t ncomp = c.shape[0], width = c.shape[1]
    cdef Py_ssize_t npts = zs.shape[0]
    cdef cnp.ndarray[cnp.complex128_t, ndim=2] out = \
        np.zeros((npts, ncomp), dtype=np.complex128)
    cdef Py_ssize_t m, k, j
    cdef double complex acc, zv
    if width == 0:
        return out
    for m in range(npts):
        zv = zs[m]
        for k in range(ncomp):
            acc = c[k, width - 1]
            for j in range(width - 2, -1, -1):
                acc = acc * zv + c[k, j]
            out[m, k] = acc
    return out


def min_dist2(queries, cloud):
    cdef cnp.ndarray[cnp.complex128_t, ndim=2] q = \
        np.ascontiguousarray(queries, dtype=np.complex128)
    cdef cnp.ndarray[cnp.complex128_t, ndim=2] c = \
        np.ascontiguousarray(cloud, dtype=np.complex128)
    cdef Py_ssize_t nq = q.shape[0], nc = c.shape[0], dim = q.shape[1]
    cdef cnp.ndarray[cnp.float64_t, ndim=1] out = \
        np.empty(nq, dtype=np.float64)
    cdef Py_ssize_t i, p, k
    cdef double best, d2, dre, dim_
    cdef double complex diff
    for i in range(nq):
        best = np.inf
        for p in range(nc):
            d2 = 0.0
            for k in range(dim):
                diff = q[i, k] - c[p, k]
                dre = diff.real
                dim_ = diff.imag
                d2 += dre * dre + dim_ * dim_
            if d2 < best:
                best = d2
        out[i] = best
    return out


def min_dist2_grouped(queries, clouds):
    cdef cnp.ndarray[cnp.complex128_t, ndim=3] q = \
        np.ascontiguousarray(queries, dtype=np.complex128)
    cdef cnp.ndarray[cnp.complex128_t, ndim=3] c = \
        np.ascontiguousarray(clouds, dtype=np.complex128)
    cdef Py_ssize_t ng = q.shape[0], nq = q.shape[1], nc = c.shape[1]
    cdef Py_ssize_t dim = q.shape[2]
    cdef cnp.ndarray[cnp.float64_t, ndim=2] out = \
        np.empty((ng, nq), dtype=np.float64)
    cdef Py_ssize_t g, i, p, k
    cdef double best, d2, dre, dim_
    cdef double complex diff
    for g in range(ng):
        for i in range(nq):
            best = np.inf
            for p in range(nc):
                d2 = 0.0
                for k in range(dim):
                    diff = q[g, i, k] - c[g, p, k]
                    dre = diff.real
                    dim_ = diff.imag
                    d2 += dre * dre + dim_ * dim_
                if d2 < best:
                    best = d2
            out[g, i] = best
    return out


cdef inline void _heap_push(double* hd, Py_ssize_t* hi, Py_ssize_t* n,
                            double d, Py_ssize_t idx) noexcept:
    cdef Py_ssize_t pos = n[0], parent
    n[0] += 1
    hd[pos] = d
    hi[pos] = idx
    while pos > 0:
        parent = (pos - 1) >> 1
        if hd[parent] > hd[pos] or \
                (hd[parent] == hd[pos] and hi[parent] > hi[pos]):
            hd[parent], hd[pos] = hd[pos], hd[parent]
            hi[parent], hi[pos] = hi[pos], hi[parent]
            pos = parent
        else:
            break


cdef inline void _heap_pop(double* hd, Py_ssize_t* hi, Py_ssize_t* n,
                           double* d_out, Py_ssize_t* i_out) noexcept:
    cdef Py_ssize_t pos = 0, child, last
    d_out[0] = hd[0]
    i_out[0] = hi[0]
    n[0] -= 1
    last = n[0]
    hd[0] = hd[last]
    hi[0] = hi[last]
    while True:
        child = 2 * pos + 1
        if child >= last:
            break
        if child + 1 < last and \
                (hd[child + 1] < hd[child] or
                 (hd[child + 1] == hd[child] and hi[child + 1] < hi[child])):
            child += 1
        if hd[child] < hd[pos] or \
                (hd[child] == hd[pos] and hi[child] < hi[pos]):
            hd[pos], hd[child] = hd[child], hd[pos]
            hi[pos], hi[child] = hi[child], hi[pos]
            pos = child
        else:
            break


def dijkstra_polar(w_tan, w_rad, w_dru, w_drl, src_mask):
    cdef cnp.ndarray[cnp.float64_t, ndim=2] wt = \
        np.ascontiguousarray(w_tan, dtype=np.float64)
    cdef cnp.ndarray[cnp.float64_t, ndim=2] wr = \
        np.ascontiguousarray(w_rad, dtype=np.float64)
    cdef cnp.ndarray[cnp.float64_t, ndim=2] wu = \
        np.ascontiguousarray(w_dru, dtype=np.float64)
    cdef cnp.ndarray[cnp.float64_t, ndim=2] wl = \
        np.ascontiguousarray(w_drl, dtype=np.float64)
    cdef cnp.ndarray[cnp.uint8_t, ndim=2] src = \
        np.ascontiguousarray(src_mask, dtype=np.uint8)
    cdef Py_ssize_t nring = wt.shape[0], nang = wt.shape[1]
    cdef Py_ssize_t nnode = nring * nang
    cdef cnp.ndarray[cnp.float64_t, ndim=1] dist = \
        np.full(nnode, np.inf, dtype=np.float64)
    cdef cnp.ndarray[cnp.uint8_t, ndim=1] done = \
        np.zeros(nnode, dtype=np.uint8)
    # heap capacity: every relaxation may push once (8 edges per node)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] heap_d = \
        np.empty(8 * nnode + nnode, dtype=np.float64)
    cdef cnp.ndarray[cnp.intp_t, ndim=1] heap_i = \
        np.empty(8 * nnode + nnode, dtype=np.intp)
    cdef double* hd = <double*> heap_d.data
    cdef Py_ssize_t* hi = <Py_ssize_t*> heap_i.data
    cdef Py_ssize_t heap_n = 0
    cdef Py_ssize_t i, j, idx, nidx, jp, jm
    cdef double d, nd

    for idx in range(nnode):
        if src[idx // nang, idx % nang]:
            dist[idx] = 0.0
            _heap_push(hd, hi, &heap_n, 0.0, idx)

    while heap_n > 0:
        _heap_pop(hd, hi, &heap_n, &d, &idx)
        if done[idx]:
            continue
        done[idx] = 1
        i = idx // nang
        j = idx % nang
        jp = (j + 1) % nang
        jm = j - 1 if j > 0 else nang - 1
        # same-ring edges
        nd = d + wt[i, j]
        nidx = i * nang + jp
        if nd < dist[nidx]:
            dist[nidx] = nd
            _heap_push(hd, hi, &heap_n, nd, nidx)
        nd = d + wt[i, jm]
        nidx = i * nang + jm
        if nd < dist[nidx]:
            dist[nidx] = nd
            _heap_push(hd, hi, &heap_n, nd, nidx)
        if i + 1 < nring:
            nd = d + wr[i, j]
            nidx = (i + 1) * nang + j
            if nd < dist[nidx]:
                dist[nidx] = nd
                _heap_push(hd, hi, &heap_n, nd, nidx)
            nd = d + wu[i, j]
            nidx = (i + 1) * nang + jp
            if nd < dist[nidx]:
                dist[nidx] = nd
                _heap_push(hd, hi, &heap_n, nd, nidx)
            nd = d + wl[i, j]
            nidx = (i + 1) * nang + jm
            if nd < dist[nidx]:
                dist[nidx] = nd
                _heap_push(hd, hi, &heap_n, nd, nidx)
        if i > 0:
            nd = d + wr[i - 1, j]
            nidx = (i - 1) * nang + j
            if nd < dist[nidx]:
                dist[nidx] = nd
                _heap_push(hd, hi, &heap_n, nd, nidx)
            nd = d + wu[i - 1, jm]
            nidx = (i - 1) * nang + jm
            if nd < dist[nidx]:
                dist[nidx] = nd
                _heap_push(hd, hi, &heap_n, nd, nidx)
            nd = d + wl[i - 1, jp]
            nidx = (i - 1) * nang + jp
            if nd < dist[nidx]:
                dist[nidx] = nd
                _heap_push(hd, hi, &heap_n, nd, nidx)
    return np.asarray(dist).reshape(nring, nang)


def pair_scan(ambient, dom, double d_dom, double d_amb):
    cdef cnp.ndarray[cnp.complex128_t, ndim=2] amb = \
        np.ascontiguousarray(ambient, dtype=np.complex128)
    cdef cnp.ndarray[cnp.complex128_t, ndim=1] dm = \
        np.ascontiguousarray(dom, dtype=np.complex128)
    cdef Py_ssize_t n = amb.shape[0], dim = amb.shape[1]
    cdef double d_dom2 = d_dom * d_dom, d_amb2 = d_amb * d_amb
    cdef double best = np.inf
    cdef Py_ssize_t best_i = -1, best_j = -1, flag_i = -1, flag_j = -1
    cdef Py_ssize_t i, j, k
    cdef double dd, sep, re_, im_
    cdef double complex diff
    for i in range(n - 1):
        for j in range(i + 1, n):
            diff = dm[j] - dm[i]
            dd = diff.real * diff.real + diff.imag * diff.imag
            if dd < d_dom2:
                continue
            sep = 0.0
            for k in range(dim):
                diff = amb[j, k] - amb[i, k]
                re_ = diff.real
                im_ = diff.imag
                sep += re_ * re_ + im_ * im_
            if sep < best:
                best = sep
                best_i = i
                best_j = j
            if flag_i < 0 and sep < d_amb2:
                flag_i = i
                flag_j = j
    if best == np.inf:
        return np.inf, -1, -1, -1, -1
    return np.sqrt(best), best_i, best_j, flag_i, flag_j
