"""Pure-Python implementations of the hot kernels.

This module is the reference: ``_kernels.pyx`` mirrors it statement for
statement.  Letters are ints ``a=0, A=1, b=2, B=3`` so ``x ^ 1`` inverts.

Word codes pack a reduced word into a uint64 as ``len << 56 | digits`` with
the first letter as the most significant base-4 digit, so integer order on
codes is (length, lexicographic) order on words.
"""

from __future__ import annotations

import math

import numpy as np

MAX_WORD_LENGTH = 28
LEN_SHIFT = 56

__all__ = [
    "BACKEND",
    "MAX_WORD_LENGTH",
    "encode",
    "decode",
    "canonical_code",
    "enumerate_classes",
    "crossing_measure",
]

BACKEND = "python"


def encode(w) -> int:
    code = 0
    for x in w:
        code = (code << 2) | x
    return (len(w) << LEN_SHIFT) | code


def decode(code: int) -> list[int]:
    n = code >> LEN_SHIFT
    digits = code & ((1 << LEN_SHIFT) - 1)
    return [(digits >> (2 * (n - 1 - k))) & 3 for k in range(n)]


def _inv(w):
    return [x ^ 1 for x in reversed(w)]


def _power(c, m):
    return list(c) * m if m >= 0 else _inv(c) * (-m)


def _concat(x, y):
    k = 0
    nx, ny = len(x), len(y)
    while k < nx and k < ny and x[nx - 1 - k] == y[k] ^ 1:
        k += 1
    return x[: nx - k] + y[k:]


def _lcp_periodic(w, c):
    k, n, L = 0, len(w), len(c)
    while k < n and w[k] == c[k % L]:
        k += 1
    return k


def _left_minimizers(u, c, cinv):
    """Exponents m minimising |c^m u|; at most two values."""
    L, n = len(c), len(u)
    kpos = _lcp_periodic(u, cinv)  # cancelled by c^m, m > 0
    kneg = _lcp_periodic(u, c)  # cancelled by c^m, m < 0
    cands = [0]
    if kpos:
        cands += [kpos // L, -(-kpos // L)]
    if kneg:
        cands += [-(kneg // L), -(-(-kneg // L))]
    best, out = None, []
    for m in sorted(set(cands)):
        k = kpos if m > 0 else kneg
        f = n + abs(m) * L - 2 * min(k, abs(m) * L)
        if best is None or f < best:
            best, out = f, [m]
        elif f == best:
            out.append(m)
    return out


def _double_coset_min(ci, w, cj) -> int:
    """Smallest code over ``c_i^m w c_j^n``."""
    ci_inv, cj_inv = _inv(ci), _inv(cj)
    w_inv = _inv(w)
    kl = max(_lcp_periodic(w, ci_inv), _lcp_periodic(w, ci))
    kr = max(_lcp_periodic(w_inv, cj), _lcp_periodic(w_inv, cj_inv))
    if kl + kr < len(w):
        mrange = _left_minimizers(w, ci, ci_inv)
    else:
        bound = 2 * len(w) + len(ci) + len(cj)
        mrange = range(-bound, bound + 1)
    best = None
    for m in mrange:
        u = _concat(_power(ci, m), w)
        u_inv = _inv(u)
        for n in _left_minimizers(u_inv, cj_inv, cj):
            # c_j^-1 ^ n u^-1 = (u c_j^n)^-1
            v = _concat(u, _power(cj, n))
            if len(v) > MAX_WORD_LENGTH:
                continue  # never minimal; the packed code only holds 28 letters
            code = encode(v)
            if best is None or code < best:
                best = code
    return best


def canonical_code(bwords, i: int, w, j: int) -> tuple[int, int, int]:
    """Canonical ``(i, code, j)`` of the class of ``(i, w, j)``; ``i <= j``.

    ``bwords`` holds the three boundary words (cyclically reduced letter lists).
    A result with ``i == j`` and ``code == 0`` marks the degenerate class.
    """
    w = list(w)
    if i > j:
        i, j, w = j, i, _inv(w)
    best = _double_coset_min(bwords[i], w, bwords[j])
    if i == j:
        best = min(best, _double_coset_min(bwords[i], _inv(w), bwords[j]))
    return i, best, j


def _strictly_shortens_left(w, c, cinv) -> bool:
    L = len(c)
    k = max(_lcp_periodic(w, cinv), _lcp_periodic(w, c))
    return 2 * min(k, L) > L


def _cosh_distance(axes, norms, i, j, W) -> float:
    # |tr(X_i W X_j W^-1)| / (2 |X_i| |X_j|) with X the traceless part of c
    xi, xj = axes[i], axes[j]
    a, b, c, d = W[0][0], W[0][1], W[1][0], W[1][1]
    # Y = W X_j W^-1, W^-1 = [[d, -b], [-c, a]]
    p00 = a * xj[0][0] + b * xj[1][0]
    p01 = a * xj[0][1] + b * xj[1][1]
    p10 = c * xj[0][0] + d * xj[1][0]
    p11 = c * xj[0][1] + d * xj[1][1]
    y00 = p00 * d - p01 * c
    y01 = -p00 * b + p01 * a
    y10 = p10 * d - p11 * c
    y11 = -p10 * b + p11 * a
    tr = xi[0][0] * y00 + xi[0][1] * y10 + xi[1][0] * y01 + xi[1][1] * y11
    return abs(tr) / (2.0 * norms[i] * norms[j])


def enumerate_classes(gens, bwords, axes, norms, max_len: int, prefix=()):
    """Emit every orthogeodesic class whose canonical word extends ``prefix``.

    Walks all reduced words ``w`` with ``prefix <= w`` and ``|w| <= max_len``; a
    class ``(i, w, j)`` is emitted exactly when ``w`` is its canonical word.
    Returns arrays ``(i, j, code, cosh_length)``.
    """
    gens = [[[float(v) for v in row] for row in g] for g in np.asarray(gens)]
    axes = [[[float(v) for v in row] for row in x] for x in np.asarray(axes)]
    norms = [float(v) for v in norms]
    bwords = [list(map(int, c)) for c in bwords]
    binv = [_inv(c) for c in bwords]
    out_i, out_j, out_code, out_cosh = [], [], [], []

    def mul(M, G):
        return (
            (M[0][0] * G[0][0] + M[0][1] * G[1][0], M[0][0] * G[0][1] + M[0][1] * G[1][1]),
            (M[1][0] * G[0][0] + M[1][1] * G[1][0], M[1][0] * G[0][1] + M[1][1] * G[1][1]),
        )

    def visit(w, W):
        code = encode(w)
        w_inv = _inv(w)
        for i in range(3):
            if _strictly_shortens_left(w, bwords[i], binv[i]):
                continue
            for j in range(i, 3):
                if _strictly_shortens_left(w_inv, binv[j], bwords[j]):
                    continue
                ci, cc, cj = canonical_code(bwords, i, w, j)
                if cc != code or (i == j and cc == 0):
                    continue
                out_i.append(i)
                out_j.append(j)
                out_code.append(code)
                out_cosh.append(_cosh_distance(axes, norms, i, j, W))

    prefix = list(prefix)
    W = ((1.0, 0.0), (0.0, 1.0))
    for x in prefix:
        W = mul(W, gens[x])
    if len(prefix) <= max_len:
        stack = [(prefix, W)]
        while stack:
            w, W = stack.pop()
            visit(w, W)
            if len(w) < max_len:
                for x in (3, 2, 1, 0):
                    if w and w[-1] == x ^ 1:
                        continue
                    stack.append((w + [x], mul(W, gens[x])))
    return (
        np.asarray(out_i, dtype=np.int8),
        np.asarray(out_j, dtype=np.int8),
        np.asarray(out_code, dtype=np.uint64),
        np.asarray(out_cosh, dtype=np.float64),
    )


def crossing_measure(u, v, x: float) -> np.ndarray:
    """Measure of directions at ``u + iv`` whose geodesic crosses both ``(x, 1)`` and ``(inf, 0)``.

    Directions are read in the disk model centred at the point, where the
    boundary point ``t`` sits at angle ``2 arg(t - z)``.
    """
    u = np.asarray(u, dtype=np.float64)
    v = np.asarray(v, dtype=np.float64)
    two_pi = 2.0 * math.pi
    th0 = np.mod(2.0 * np.arctan2(-v, -u), two_pi)
    thx = np.mod(2.0 * np.arctan2(-v, x - u), two_pi)
    th1 = np.mod(2.0 * np.arctan2(-v, 1.0 - u), two_pi)
    # arc behind L: thx -> th1; arc behind R: 0 (infinity) -> th0, turned by pi
    width_l = np.mod(th1 - thx, two_pi)
    width_r = th0
    d = np.mod(math.pi - thx, two_pi)
    direct = np.maximum(0.0, np.minimum(width_l, d + width_r) - d)
    wrapped = np.maximum(0.0, np.minimum(width_l, d + width_r - two_pi))
    return 2.0 * (direct + wrapped)
