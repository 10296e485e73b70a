"""Pure numpy implementations of the hot kernels.

Semantics must match nullcurves._kernels_cy exactly: same evaluation order
inside Horner, same lexicographic tie-breaking in the pair scan and in
Dijkstra.  Keep the two files in sync.
"""

import heapq

import numpy as np

BACKEND = "python"

_CHUNK = 64


def horner_eval(coeffs, z):
    """Evaluate polynomials given by coeffs (C, W) at points z (M,).

    Returns an (M, C) complex array; column j is component j evaluated by
    Horner's scheme in ascending-degree storage.
    """
    coeffs = np.ascontiguousarray(coeffs, dtype=np.complex128)
    z = np.ascontiguousarray(z, dtype=np.complex128)
    ncomp, width = coeffs.shape
    out = np.zeros((z.shape[0], ncomp), dtype=np.complex128)
    if width == 0:
        return out
    acc = np.broadcast_to(coeffs[:, width - 1], (z.shape[0], ncomp)).copy()
    for j in range(width - 2, -1, -1):
        acc *= z[:, None]
        acc += coeffs[:, j]
    return acc


def min_dist2(queries, cloud):
    """Per-query minimum squared euclidean distance to a point cloud.

    queries: (Q, C) complex, cloud: (P, C) complex.  C complex coordinates
    count as 2C real ones.  Returns (Q,) float64.
    """
    queries = np.asarray(queries, dtype=np.complex128)
    cloud = np.asarray(cloud, dtype=np.complex128)
    out = np.empty(queries.shape[0], dtype=np.float64)
    for lo in range(0, queries.shape[0], _CHUNK):
        q = queries[lo:lo + _CHUNK]
        diff = q[:, None, :] - cloud[None, :, :]
        d2 = diff.real ** 2 + diff.imag ** 2
        out[lo:lo + _CHUNK] = d2.sum(axis=2).min(axis=1)
    return out


def min_dist2_grouped(queries, clouds):
    """Groupwise min_dist2: queries (G, Q, C) against clouds (G, P, C)."""
    queries = np.asarray(queries, dtype=np.complex128)
    clouds = np.asarray(clouds, dtype=np.complex128)
    ngroup = queries.shape[0]
    out = np.empty((ngroup, queries.shape[1]), dtype=np.float64)
    for g in range(ngroup):
        out[g] = min_dist2(queries[g], clouds[g])
    return out


def dijkstra_polar(w_tan, w_rad, w_dru, w_drl, src_mask):
    """Multi-source Dijkstra on a polar grid with 8-neighbour stencil.

    Nodes are (ring i, angle j), i in [0, R), j in [0, A) with angular
    wraparound.  Edge weights (all nonnegative):
      w_tan[i, j] : (i, j) -- (i, j+1)
      w_rad[i, j] : (i, j) -- (i+1, j)
      w_dru[i, j] : (i, j) -- (i+1, j+1)
      w_drl[i, j] : (i, j) -- (i+1, j-1)
    src_mask (R, A) marks zero-distance sources.  Returns (R, A) distances
    (inf where unreachable).
    """
    w_tan = np.asarray(w_tan, dtype=np.float64)
    w_rad = np.asarray(w_rad, dtype=np.float64)
    w_dru = np.asarray(w_dru, dtype=np.float64)
    w_drl = np.asarray(w_drl, dtype=np.float64)
    nring, nang = w_tan.shape
    dist = np.full(nring * nang, np.inf, dtype=np.float64)
    done = np.zeros(nring * nang, dtype=bool)
    heap = []
    src = np.flatnonzero(np.asarray(src_mask, dtype=bool).ravel())
    for idx in src:
        dist[idx] = 0.0
        heapq.heappush(heap, (0.0, int(idx)))

    def edges(i, j):
        jp = (j + 1) % nang
        jm = (j - 1) % nang
        yield i, jp, w_tan[i, j]
        yield i, jm, w_tan[i, jm]
        if i + 1 < nring:
            yield i + 1, j, w_rad[i, j]
            yield i + 1, jp, w_dru[i, j]
            yield i + 1, jm, w_drl[i, j]
        if i > 0:
            yield i - 1, j, w_rad[i - 1, j]
            yield i - 1, jm, w_dru[i - 1, jm]
            yield i - 1, jp, w_drl[i - 1, jp]

    while heap:
        d, idx = heapq.heappop(heap)
        if done[idx]:
            continue
        done[idx] = True
        i, j = divmod(idx, nang)
        for ni, nj, w in edges(i, j):
            nidx = ni * nang + nj
            nd = d + w
            if nd < dist[nidx]:
                dist[nidx] = nd
                heapq.heappush(heap, (nd, nidx))
    return dist.reshape(nring, nang)


def pair_scan(ambient, dom, d_dom, d_amb):
    """Exact scan over all sample pairs with domain separation >= d_dom.

    ambient: (N, C) complex image points, dom: (N,) complex domain points.
    Returns (min_sep, min_i, min_j, flag_i, flag_j) where (min_i, min_j) is
    the first pair attaining the minimal ambient separation and
    (flag_i, flag_j) is the first pair with ambient separation < d_amb
    (-1, -1 if none).  "First" is lexicographic in (i, j).
    """
    ambient = np.asarray(ambient, dtype=np.complex128)
    dom = np.asarray(dom, dtype=np.complex128)
    n = ambient.shape[0]
    d_dom2 = d_dom * d_dom
    d_amb2 = d_amb * d_amb
    best = np.inf
    best_i = best_j = -1
    flag_i = flag_j = -1
    for i in range(n - 1):
        ddc = dom[i + 1:] - dom[i]
        dd = ddc.real ** 2 + ddc.imag ** 2
        dac = ambient[i + 1:] - ambient[i]
        sep = (dac.real ** 2 + dac.imag ** 2).sum(axis=1)
        ok = dd >= d_dom2
        if not ok.any():
            continue
        sep = np.where(ok, sep, np.inf)
        jrel = int(np.argmin(sep))
        if sep[jrel] < best:
            best = float(sep[jrel])
            best_i, best_j = i, i + 1 + jrel
        if flag_i < 0:
            hits = np.flatnonzero(sep < d_amb2)
            if hits.size:
                flag_i, flag_j = i, i + 1 + int(hits[0])
    return float(np.sqrt(best)) if np.isfinite(best) else np.inf, \
        best_i, best_j, flag_i, flag_j
