# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot kernels; statement-for-statement port of ``_kernels_py``."""

import numpy as np
cimport numpy as cnp
from libc.math cimport atan2, fabs, fmod, M_PI
from libc.stdlib cimport malloc, realloc, free
from libc.stdint cimport uint64_t, int8_t

cnp.import_array()

BACKEND = "cython"
DEF MAXW = 28
DEF MAXB = 8
DEF SCRATCH = 256
MAX_WORD_LENGTH = MAXW
cdef int LEN_SHIFT = 56

from ._kernels_py import encode, decode


cdef struct Boundary:
    int n[3]
    int w[3][MAXB]
    int winv[3][MAXB]


cdef struct Out:
    Py_ssize_t size
    Py_ssize_t cap
    int8_t* i
    int8_t* j
    uint64_t* code
    double* cosh


cdef inline uint64_t c_encode(const int* w, int n) noexcept nogil:
    cdef uint64_t code = 0
    cdef int k
    for k in range(n):
        code = (code << 2) | <uint64_t>w[k]
    return (<uint64_t>n << LEN_SHIFT) | code


cdef inline int c_lcp_periodic(const int* w, int n, const int* c, int L) noexcept nogil:
    cdef int k = 0
    while k < n and w[k] == c[k % L]:
        k += 1
    return k


cdef inline void c_invert(const int* w, int n, int* out) noexcept nogil:
    cdef int k
    for k in range(n):
        out[k] = w[n - 1 - k] ^ 1


cdef inline int c_power(const int* c, const int* cinv, int L, int m, int* out) noexcept nogil:
    cdef int k, r, n = 0
    cdef const int* src = c if m >= 0 else cinv
    if m < 0:
        m = -m
    for r in range(m):
        for k in range(L):
            out[n] = src[k]
            n += 1
    return n


cdef inline int c_concat(const int* x, int nx, const int* y, int ny, int* out) noexcept nogil:
    cdef int k = 0, t, n = 0
    while k < nx and k < ny and x[nx - 1 - k] == (y[k] ^ 1):
        k += 1
    for t in range(nx - k):
        out[n] = x[t]
        n += 1
    for t in range(k, ny):
        out[n] = y[t]
        n += 1
    return n


cdef int c_left_minimizers(const int* u, int n, const int* c, const int* cinv, int L, int* out) noexcept nogil:
    """Exponents m minimising |c^m u|; writes at most 5, returns count of minimisers."""
    cdef int kpos = c_lcp_periodic(u, n, cinv, L)
    cdef int kneg = c_lcp_periodic(u, n, c, L)
    cdef int cands[5]
    cdef int nc = 1, t, m, k, f, best = 1 << 30, nout = 0
    cands[0] = 0
    if kpos:
        cands[nc] = kpos // L
        cands[nc + 1] = (kpos + L - 1) // L
        nc += 2
    if kneg:
        cands[nc] = -(kneg // L)
        cands[nc + 1] = -((kneg + L - 1) // L)
        nc += 2
    for t in range(nc):
        m = cands[t]
        k = kpos if m > 0 else kneg
        f = n + (m if m > 0 else -m) * L - 2 * min(k, (m if m > 0 else -m) * L)
        if f < best:
            best = f
    for t in range(nc):
        m = cands[t]
        k = kpos if m > 0 else kneg
        f = n + (m if m > 0 else -m) * L - 2 * min(k, (m if m > 0 else -m) * L)
        if f == best:
            # dedupe
            k = 0
            while k < nout and out[k] != m:
                k += 1
            if k == nout:
                out[nout] = m
                nout += 1
    return nout


cdef uint64_t c_double_coset_min(const Boundary* bd, int i, const int* w, int n, int j) noexcept nogil:
    cdef const int* ci = bd.w[i]
    cdef const int* ci_inv = bd.winv[i]
    cdef const int* cj = bd.w[j]
    cdef const int* cj_inv = bd.winv[j]
    cdef int Li = bd.n[i], Lj = bd.n[j]
    cdef int w_inv[MAXW]
    cdef int pw[4 * SCRATCH]
    cdef int u[4 * SCRATCH]
    cdef int u_inv[4 * SCRATCH]
    cdef int v[8 * SCRATCH]
    cdef int ms[5]
    cdef int ns[5]
    cdef int nm, nn, a, b, m, np_, nu, nv, kl, kr, bound, lo, hi
    cdef uint64_t best = <uint64_t>(-1), code
    c_invert(w, n, w_inv)
    kl = max(c_lcp_periodic(w, n, ci_inv, Li), c_lcp_periodic(w, n, ci, Li))
    kr = max(c_lcp_periodic(w_inv, n, cj, Lj), c_lcp_periodic(w_inv, n, cj_inv, Lj))
    cdef bint separable = kl + kr < n
    if separable:
        nm = c_left_minimizers(w, n, ci, ci_inv, Li, ms)
        lo = 0
        hi = nm
    else:
        bound = 2 * n + Li + Lj
        lo = -bound
        hi = bound + 1
    for a in range(lo, hi):
        m = ms[a] if separable else a
        np_ = c_power(ci, ci_inv, Li, m, pw)
        nu = c_concat(pw, np_, w, n, u)
        c_invert(u, nu, u_inv)
        nn = c_left_minimizers(u_inv, nu, cj_inv, cj, Lj, ns)
        for b in range(nn):
            np_ = c_power(cj, cj_inv, Lj, ns[b], pw)
            nv = c_concat(u, nu, pw, np_, v)
            if nv > MAXW:
                continue
            code = c_encode(v, nv)
            if code < best:
                best = code
    return best


cdef inline bint c_shortens_left(const int* w, int n, const int* c, const int* cinv, int L) noexcept nogil:
    cdef int k = max(c_lcp_periodic(w, n, cinv, L), c_lcp_periodic(w, n, c, L))
    return 2 * min(k, L) > L


cdef inline double c_cosh_distance(const double* xi, const double* xj, double ni, double nj,
                                   const double* W) noexcept nogil:
    cdef double a = W[0], b = W[1], c = W[2], d = W[3]
    cdef double p00 = a * xj[0] + b * xj[2]
    cdef double p01 = a * xj[1] + b * xj[3]
    cdef double p10 = c * xj[0] + d * xj[2]
    cdef double p11 = c * xj[1] + d * xj[3]
    cdef double y00 = p00 * d - p01 * c
    cdef double y01 = -p00 * b + p01 * a
    cdef double y10 = p10 * d - p11 * c
    cdef double y11 = -p10 * b + p11 * a
    cdef double tr = xi[0] * y00 + xi[1] * y10 + xi[2] * y01 + xi[3] * y11
    return fabs(tr) / (2.0 * ni * nj)


cdef int out_push(Out* o, int i, int j, uint64_t code, double ch) noexcept nogil:
    cdef Py_ssize_t cap
    if o.size == o.cap:
        cap = o.cap * 2 if o.cap else 1024
        o.i = <int8_t*>realloc(o.i, cap * sizeof(int8_t))
        o.j = <int8_t*>realloc(o.j, cap * sizeof(int8_t))
        o.code = <uint64_t*>realloc(o.code, cap * sizeof(uint64_t))
        o.cosh = <double*>realloc(o.cosh, cap * sizeof(double))
        if o.i == NULL or o.j == NULL or o.code == NULL or o.cosh == NULL:
            return -1
        o.cap = cap
    o.i[o.size] = <int8_t>i
    o.j[o.size] = <int8_t>j
    o.code[o.size] = code
    o.cosh[o.size] = ch
    o.size += 1
    return 0


cdef int c_visit(const Boundary* bd, const int* w, int n, const double* W,
                 const double* axes, const double* norms, Out* o) noexcept nogil:
    cdef int w_inv[MAXW]
    cdef int i, j
    cdef uint64_t code = c_encode(w, n), cc, c2
    c_invert(w, n, w_inv)
    for i in range(3):
        if c_shortens_left(w, n, bd.w[i], bd.winv[i], bd.n[i]):
            continue
        for j in range(i, 3):
            if c_shortens_left(w_inv, n, bd.winv[j], bd.w[j], bd.n[j]):
                continue
            cc = c_double_coset_min(bd, i, w, n, j)
            if i == j:
                c2 = c_double_coset_min(bd, i, w_inv, n, j)
                if c2 < cc:
                    cc = c2
            if cc != code or (i == j and cc == 0):
                continue
            if out_push(o, i, j, code,
                        c_cosh_distance(axes + 4 * i, axes + 4 * j, norms[i], norms[j], W)) < 0:
                return -1
    return 0


cdef int c_enumerate(const Boundary* bd, const double* gens, const double* axes, const double* norms,
                     int max_len, const int* prefix, int plen, Out* o) noexcept nogil:
    cdef int w[MAXW + 1]
    cdef double mats[MAXW + 1][4]
    cdef int nxt[MAXW + 1]
    cdef int k, depth, x
    cdef const double* G
    cdef double* M
    cdef double* P
    mats[0][0] = 1.0; mats[0][1] = 0.0; mats[0][2] = 0.0; mats[0][3] = 1.0
    for k in range(plen):
        w[k] = prefix[k]
        G = gens + 4 * prefix[k]
        P = mats[k]
        M = mats[k + 1]
        M[0] = P[0] * G[0] + P[1] * G[2]
        M[1] = P[0] * G[1] + P[1] * G[3]
        M[2] = P[2] * G[0] + P[3] * G[2]
        M[3] = P[2] * G[1] + P[3] * G[3]
    if plen > max_len:
        return 0
    depth = plen
    if c_visit(bd, w, depth, mats[depth], axes, norms, o) < 0:
        return -1
    nxt[depth] = 0
    while depth >= plen:
        if depth == max_len or nxt[depth] == 4:
            depth -= 1
            if depth >= plen:
                nxt[depth] += 1
            continue
        x = nxt[depth]
        if depth > 0 and w[depth - 1] == (x ^ 1):
            nxt[depth] += 1
            continue
        w[depth] = x
        G = gens + 4 * x
        P = mats[depth]
        M = mats[depth + 1]
        M[0] = P[0] * G[0] + P[1] * G[2]
        M[1] = P[0] * G[1] + P[1] * G[3]
        M[2] = P[2] * G[0] + P[3] * G[2]
        M[3] = P[2] * G[1] + P[3] * G[3]
        depth += 1
        if c_visit(bd, w, depth, mats[depth], axes, norms, o) < 0:
            return -1
        nxt[depth] = 0
    return 0


cdef void fill_boundary(Boundary* bd, bwords) except *:
    cdef int i, k, L
    for i in range(3):
        L = len(bwords[i])
        if L < 1 or L > MAXB:
            raise ValueError("boundary words must have 1..%d letters" % MAXB)
        bd.n[i] = L
        for k in range(L):
            bd.w[i][k] = int(bwords[i][k])
        for k in range(L):
            bd.winv[i][k] = bd.w[i][L - 1 - k] ^ 1


def canonical_code(bwords, int i, w, int j):
    """Compiled twin of ``_kernels_py.canonical_code``."""
    cdef Boundary bd
    cdef int buf[MAXW]
    cdef int ibuf[MAXW]
    cdef int n = len(w), k
    cdef uint64_t best, other
    if n > MAXW:
        raise ValueError("word too long")
    fill_boundary(&bd, bwords)
    for k in range(n):
        buf[k] = int(w[k])
    if i > j:
        i, j = j, i
        c_invert(buf, n, ibuf)
        for k in range(n):
            buf[k] = ibuf[k]
    best = c_double_coset_min(&bd, i, buf, n, j)
    if i == j:
        c_invert(buf, n, ibuf)
        other = c_double_coset_min(&bd, i, ibuf, n, j)
        if other < best:
            best = other
    return i, int(best), j


def enumerate_classes(gens, bwords, axes, norms, int max_len, prefix=()):
    """Compiled twin of ``_kernels_py.enumerate_classes``; runs without the GIL."""
    cdef Boundary bd
    cdef double[:, :, ::1] g = np.ascontiguousarray(gens, dtype=np.float64)
    cdef double[:, :, ::1] ax = np.ascontiguousarray(axes, dtype=np.float64)
    cdef double[::1] nm = np.ascontiguousarray(norms, dtype=np.float64)
    cdef int pre[MAXW]
    cdef int plen = len(prefix), k, status
    cdef Out o
    if max_len > MAXW or plen > MAXW:
        raise ValueError("word length limit is %d" % MAXW)
    fill_boundary(&bd, bwords)
    for k in range(plen):
        pre[k] = int(prefix[k])
    o.size = 0
    o.cap = 0
    o.i = NULL
    o.j = NULL
    o.code = NULL
    o.cosh = NULL
    try:
        with nogil:
            status = c_enumerate(&bd, &g[0, 0, 0], &ax[0, 0, 0], &nm[0], max_len, pre, plen, &o)
        if status < 0:
            raise MemoryError()
        ri = np.empty(o.size, dtype=np.int8)
        rj = np.empty(o.size, dtype=np.int8)
        rc = np.empty(o.size, dtype=np.uint64)
        rh = np.empty(o.size, dtype=np.float64)
        for k in range(o.size):
            ri[k] = o.i[k]
            rj[k] = o.j[k]
            rc[k] = o.code[k]
            rh[k] = o.cosh[k]
        return ri, rj, rc, rh
    finally:
        free(o.i)
        free(o.j)
        free(o.code)
        free(o.cosh)


cdef inline double _mod2pi(double a, double two_pi) noexcept nogil:
    # same as numpy.mod: fmod, then shift negatives by the divisor
    cdef double r = fmod(a, two_pi)
    if r < 0.0:
        r += two_pi
    return r


def crossing_measure(u, v, double x):
    """Compiled twin of ``_kernels_py.crossing_measure``."""
    cdef double[::1] uu = np.ascontiguousarray(u, dtype=np.float64).ravel()
    cdef double[::1] vv = np.ascontiguousarray(v, dtype=np.float64).ravel()
    shape = np.shape(u)
    out = np.empty(uu.shape[0], dtype=np.float64)
    cdef double[::1] o = out
    cdef Py_ssize_t k, n = uu.shape[0]
    cdef double two_pi = 2.0 * M_PI, th0, thx, th1, wl, wr, d, direct, wrapped, t
    with nogil:
        for k in range(n):
            th0 = _mod2pi(2.0 * atan2(-vv[k], -uu[k]), two_pi)
            thx = _mod2pi(2.0 * atan2(-vv[k], x - uu[k]), two_pi)
            th1 = _mod2pi(2.0 * atan2(-vv[k], 1.0 - uu[k]), two_pi)
            wl = _mod2pi(th1 - thx, two_pi)
            wr = th0
            d = _mod2pi(M_PI - thx, two_pi)
            t = min(wl, d + wr) - d
            direct = t if t > 0.0 else 0.0
            t = min(wl, d + wr - two_pi)
            wrapped = t if t > 0.0 else 0.0
            o[k] = 2.0 * (direct + wrapped)
    return out.reshape(shape)
