"""Orthospectrum of a hyperbolic pair of pants.

The pants group is free on ``a, b`` with boundary words ``c1 = a``,
``c2 = b``, ``c3 = (ab)^-1``.  Orthogeodesics from boundary ``i`` to boundary
``j`` correspond to double cosets ``<c_i> w <c_j>`` (the trivial coset removed
when ``i == j``), folded by orientation reversal ``(i, w, j) ~ (j, w^-1, i)``.
Each class is stored once, at its canonical word: the smallest word in
(length, lexicographic) order with ``i <= j``.  The length of the class is the
distance between the axis of ``c_i`` and ``W`` applied to the axis of ``c_j``.

Letters are ``a, A, b, B`` with uppercase the inverse, ordered ``a < A < b < B``.
Boundary indices are 1-based in the public API.
"""

from __future__ import annotations

import csv
import io
import itertools
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterator, Sequence

import numpy as np

from . import kernels
from .dilog import rogers_l_array
from .errors import ConstructionError, CrossingError, DomainError, ParameterError
from .hypgeom import (
    Geodesic,
    MoebiusMap,
    common_perpendicular,
    fixed_points,
    geodesic_distance,
    geodesic_through,
    reflect,
    same_side,
    segment_distance,
    translation_length,
)

__all__ = [
    "Word",
    "DEGENERATE",
    "SurfaceSpec",
    "OrthoRecord",
    "Spectrum",
    "build_pants",
    "hexagon_oracle",
    "enumerate_words",
    "canonicalize",
    "ortho_length",
    "spectrum",
    "bridgeman_check",
    "basmajian_check",
    "basmajian_term",
    "spectrum_csv",
    "spectrum_json",
    "SPECTRUM_JSON_SCHEMA",
]

LETTERS = "aAbB"
_LETTER_CODE = {ch: k for k, ch in enumerate(LETTERS)}
PANTS_BOUNDARY_WORDS = ((0,), (2,), (3, 1))
LENGTH_ATOL = 1e-9
# slack subtracted from the numerically minimised wall distance
DELTA_MARGIN = 1e-9


# ---------------------------------------------------------------------------
# words


@dataclass(frozen=True, order=False)
class Word:
    """Freely reduced word in ``a, A, b, B`` (letters stored as ints 0..3)."""

    letters: tuple[int, ...] = ()

    def __post_init__(self):
        letters = tuple(int(x) for x in self.letters)
        for x in letters:
            if not 0 <= x <= 3:
                raise DomainError(f"letter code {x} outside 0..3")
        for x, y in zip(letters, letters[1:]):
            if x == y ^ 1:
                raise DomainError(f"word {_letters_str(letters)!r} is not freely reduced")
        object.__setattr__(self, "letters", letters)

    @classmethod
    def from_string(cls, s: str) -> "Word":
        try:
            return cls(tuple(_LETTER_CODE[ch] for ch in s))
        except KeyError as exc:
            raise DomainError(f"unknown letter {exc.args[0]!r}; use a, A, b, B") from None

    @classmethod
    def reduce(cls, letters: Sequence[int]) -> "Word":
        out: list[int] = []
        for x in letters:
            if out and out[-1] == x ^ 1:
                out.pop()
            else:
                out.append(int(x))
        return cls(tuple(out))

    @classmethod
    def from_code(cls, code: int) -> "Word":
        return cls(tuple(kernels.decode(int(code))))

    def __str__(self):
        return _letters_str(self.letters)

    def __repr__(self):
        return f"Word({str(self)!r})"

    def __len__(self):
        return len(self.letters)

    def __iter__(self):
        return iter(self.letters)

    def inverse(self) -> "Word":
        return Word(tuple(x ^ 1 for x in reversed(self.letters)))

    def __mul__(self, other: "Word") -> "Word":
        return Word.reduce(self.letters + other.letters)

    def __pow__(self, m: int) -> "Word":
        base = self if m >= 0 else self.inverse()
        return Word.reduce(base.letters * abs(m))

    @property
    def code(self) -> int:
        if len(self) > kernels.MAX_WORD_LENGTH:
            raise ParameterError(f"words are limited to {kernels.MAX_WORD_LENGTH} letters")
        return kernels.encode(self.letters)

    def sort_key(self) -> tuple[int, tuple[int, ...]]:
        return len(self.letters), self.letters

    def __lt__(self, other: "Word") -> bool:
        return self.sort_key() < other.sort_key()

    def matrix(self, gens: Sequence[np.ndarray]) -> np.ndarray:
        m = np.eye(2)
        for x in self.letters:
            m = m @ gens[x]
        return m


def _letters_str(letters) -> str:
    return "".join(LETTERS[x] for x in letters)


def enumerate_words(max_len: int) -> Iterator[Word]:
    """All reduced words of length ``<= max_len``, in (length, lexicographic) order."""
    max_len = int(max_len)
    if max_len < 0:
        raise ParameterError("max_len must be nonnegative")
    level: list[tuple[int, ...]] = [()]
    for n in range(max_len + 1):
        yield from (Word(w) for w in level)
        if n == max_len:
            break
        level = [w + (x,) for w in level for x in range(4) if not (w and w[-1] == x ^ 1)]


def word_count(max_len: int) -> int:
    return 1 + sum(4 * 3 ** (n - 1) for n in range(1, max_len + 1))


# ---------------------------------------------------------------------------
# surfaces


def _traceless(m: np.ndarray) -> np.ndarray:
    return m - np.trace(m) / 2.0 * np.eye(2)


@dataclass(frozen=True, eq=False)
class SurfaceSpec:
    """Two-generator Fuchsian group with marked boundary words."""

    A: MoebiusMap
    B: MoebiusMap
    boundary_words: tuple[Word, ...] = tuple(Word(w) for w in PANTS_BOUNDARY_WORDS)
    euler_char: int = -1
    lengths: tuple[float, ...] = field(init=False)

    def __post_init__(self):
        words = tuple(w if isinstance(w, Word) else Word(tuple(w)) for w in self.boundary_words)
        object.__setattr__(self, "boundary_words", words)
        for w in words:
            if not 1 <= len(w) <= 8:
                raise ConstructionError(f"boundary word {w} must have 1..8 letters")
            if w.letters[0] == w.letters[-1] ^ 1:
                raise ConstructionError(f"boundary word {w} is not cyclically reduced")
        try:
            lengths = tuple(translation_length(self.boundary_map(k)) for k in range(len(words)))
        except DomainError as exc:
            raise ConstructionError(f"boundary element is not hyperbolic: {exc}") from None
        object.__setattr__(self, "lengths", lengths)
        axes = self.axes
        for g in axes:
            ends = [e for h in axes if h is not g for e in h.endpoints]
            try:
                ok = same_side(g, *ends)
            except DomainError:
                ok = False
            if not ok:
                raise ConstructionError("boundary axes are not disjoint or do not bound a common region")

    @classmethod
    def from_matrices(cls, A, B, boundary_words=None, euler_char: int = -1) -> "SurfaceSpec":
        """Escape hatch for explicit generators; invariants checked, discreteness not certified."""
        words = PANTS_BOUNDARY_WORDS if boundary_words is None else boundary_words
        words = tuple(Word.from_string(w) if isinstance(w, str) else Word(tuple(w)) for w in words)
        A = A if isinstance(A, MoebiusMap) else MoebiusMap.from_matrix(A)
        B = B if isinstance(B, MoebiusMap) else MoebiusMap.from_matrix(B)
        return cls(A, B, words, int(euler_char))

    @property
    def generators(self) -> tuple[np.ndarray, ...]:
        """Matrices of ``a, A, b, B``."""
        a, b = self.A.matrix, self.B.matrix
        return a, self.A.inverse().matrix, b, self.B.inverse().matrix

    def word_map(self, w: Word) -> MoebiusMap:
        return MoebiusMap.from_matrix(w.matrix(self.generators))

    def boundary_map(self, k: int) -> MoebiusMap:
        return self.word_map(self.boundary_words[k])

    @cached_property
    def axes(self) -> tuple[Geodesic, ...]:
        return tuple(fixed_points(self.boundary_map(k)) for k in range(len(self.boundary_words)))

    @property
    def is_standard_pants(self) -> bool:
        return tuple(w.letters for w in self.boundary_words) == PANTS_BOUNDARY_WORDS

    def kernel_data(self):
        gens = np.ascontiguousarray(np.array(self.generators, dtype=np.float64))
        mats = [self.boundary_map(k).matrix for k in range(len(self.boundary_words))]
        axes = np.ascontiguousarray(np.array([_traceless(m) for m in mats], dtype=np.float64))
        norms = np.array([math.sinh(l / 2.0) for l in self.lengths], dtype=np.float64)
        bwords = [list(w.letters) for w in self.boundary_words]
        return gens, bwords, axes, norms

    @cached_property
    def completeness_constants(self) -> tuple[float, int]:
        """``(delta, offset)`` with ``length >= (|w| - offset) * delta`` for every canonical word ``w``.

        The two right-angled hexagons cut out by the seams form a fundamental
        domain ``D`` whose four seam walls are paired by ``a`` and ``b``.  An
        orthogeodesic whose lift crosses ``k`` walls spends at least ``delta``
        (the minimal distance between distinct walls) in each of the ``k - 1``
        tiles it fully traverses, and its canonical word is at most ``k + 2``
        letters long because every boundary arc of ``D`` lies on a lift
        at most one letter away from the marked axis.
        """
        if not self.is_standard_pants:
            return 0.0, 0
        ax_a, ax_b, ax_c = self.axes
        s12 = common_perpendicular(ax_a, ax_b)
        s13 = common_perpendicular(ax_a, ax_c)
        s23 = common_perpendicular(ax_b, ax_c)
        mirror = geodesic_through(*s12)
        s13r = tuple(complex(reflect(mirror, z)) for z in s13)
        s23r = tuple(complex(reflect(mirror, z)) for z in s23)
        # the side pairings must glue D into the pants
        for g, src, dst in ((self.A, s13r, s13), (self.B.inverse(), s23r, s23)):
            moved = [complex(g(z)) for z in src]
            if max(abs(moved[0] - dst[0]), abs(moved[1] - dst[1])) > 1e-7 * max(1.0, abs(dst[0]), abs(dst[1])):
                raise ConstructionError("seam walls are not paired by the generators")
        walls = (s13, s23, s13r, s23r)
        delta = min(segment_distance(p, q) for p, q in itertools.combinations(walls, 2))
        return max(0.0, delta - DELTA_MARGIN), 3

    def completeness_length(self, max_word_length: int) -> float:
        """Length below which the enumeration at this word bound is certified complete."""
        delta, offset = self.completeness_constants
        return max(0.0, (int(max_word_length) + 1 - offset) * delta)


def build_pants(b1: float, b2: float, b3: float) -> SurfaceSpec:
    """Pants group with ``A`` diagonal and ``|tr B|``, ``|tr AB|`` fixed by the boundary lengths.

    ``B = [[p, 1], [ps - 1, s]]`` with ``tr B = 2 cosh(b2/2)`` and
    ``tr AB = -2 cosh(b3/2)``; the negative sign makes the three axes
    pairwise disjoint and bound a common region.
    """
    bs = tuple(float(b) for b in (b1, b2, b3))
    for b in bs:
        if not (b > 0.0 and math.isfinite(b)):
            raise DomainError(f"boundary lengths must be positive, got {bs}")
    with np.errstate(all="ignore"):
        try:
            lam = math.exp(bs[0] / 2.0)
            t2 = 2.0 * math.cosh(bs[1] / 2.0)
            t3 = -2.0 * math.cosh(bs[2] / 2.0)
            p = (t3 - t2 / lam) / (lam - 1.0 / lam)
            s = t2 - p
            A = MoebiusMap(lam, 0.0, 0.0, 1.0 / lam)
            B = MoebiusMap(p, 1.0, p * s - 1.0, s)
        except (OverflowError, ZeroDivisionError, DomainError) as exc:
            raise ConstructionError(f"trace solve failed for {bs}: {exc}") from None
    spec = SurfaceSpec(A, B)
    for got, want in zip(spec.lengths, bs):
        if not abs(got - want) <= 1e-9 * max(1.0, want):
            raise ConstructionError(f"boundary length {got!r} does not match {want!r}")
    # verified above; keep the exact requested values
    object.__setattr__(spec, "lengths", bs)
    return spec


def hexagon_oracle(b1: float, b2: float, b3: float) -> tuple[float, float, float]:
    """Seam lengths ``(l12, l13, l23)`` of the right-angled hexagon with alternate sides ``b_i/2``."""
    bs = [float(b) for b in (b1, b2, b3)]
    if not all(b > 0.0 for b in bs):
        raise DomainError("boundary lengths must be positive")
    c = [math.cosh(b / 2.0) for b in bs]
    s = [math.sinh(b / 2.0) for b in bs]

    def seam(i, j, k):
        return math.acosh((c[k] + c[i] * c[j]) / (s[i] * s[j]))

    return seam(0, 1, 2), seam(0, 2, 1), seam(1, 2, 0)


# ---------------------------------------------------------------------------
# classes and records


class _Degenerate:
    def __repr__(self):
        return "DEGENERATE"


DEGENERATE = _Degenerate()


def _check_index(k: int, n: int) -> int:
    k = int(k)
    if not 1 <= k <= n:
        raise DomainError(f"boundary index {k} outside 1..{n}")
    return k - 1


def canonicalize(i: int, w, j: int, spec: SurfaceSpec | None = None):
    """Canonical ``(i, word, j)`` of the orthogeodesic class of ``(i, w, j)``, or :data:`DEGENERATE`."""
    words = PANTS_BOUNDARY_WORDS if spec is None else tuple(b.letters for b in spec.boundary_words)
    w = w if isinstance(w, Word) else (Word.from_string(w) if isinstance(w, str) else Word(tuple(w)))
    if len(w) > kernels.MAX_WORD_LENGTH:
        raise ParameterError(f"words are limited to {kernels.MAX_WORD_LENGTH} letters")
    i0, j0 = _check_index(i, len(words)), _check_index(j, len(words))
    ci, code, cj = kernels.canonical_code([list(b) for b in words], i0, list(w.letters), j0)
    if ci == cj and code == 0:
        return DEGENERATE
    return ci + 1, Word.from_code(code), cj + 1


def ortho_length(spec: SurfaceSpec, i: int, w, j: int) -> float:
    """Distance between the axis of ``c_i`` and the image under ``w`` of the axis of ``c_j``.

    Computed through cross-ratios of axis endpoints, independently of the
    trace formula used by the enumeration kernel.
    """
    w = w if isinstance(w, Word) else (Word.from_string(w) if isinstance(w, str) else Word(tuple(w)))
    if canonicalize(i, w, j, spec) is DEGENERATE:
        raise DomainError("degenerate class: the two boundary lifts coincide")
    n = len(spec.boundary_words)
    i0, j0 = _check_index(i, n), _check_index(j, n)
    # distance(axis_i, W1 W2 axis_j) = distance(W1^-1 axis_i, W2 axis_j); splitting
    # the word halves the growth of matrix entries on each side
    half = len(w) // 2
    w1, w2 = Word(w.letters[:half]), Word(w.letters[half:])
    g1 = spec.axes[i0].image(spec.word_map(w1.inverse()))
    g2 = spec.axes[j0].image(spec.word_map(w2))
    try:
        return geodesic_distance(g1, g2)
    except CrossingError as exc:
        raise CrossingError(f"boundary lifts cross; the group is not a pants group ({exc})") from None


@dataclass(frozen=True)
class OrthoRecord:
    i: int
    j: int
    word: Word
    length: float
    summand: float


def basmajian_term(l) -> np.ndarray | float:
    """``2 log coth(l/2)``, the shadow of one orthogeodesic end on the boundary."""
    if np.ndim(l) == 0:
        return 2.0 * math.log1p(2.0 / math.expm1(float(l)))
    return 2.0 * np.log1p(2.0 / np.expm1(np.asarray(l, dtype=float)))


@dataclass(eq=False)
class Spectrum:
    """Sorted orthospectrum up to a word-length bound, held as parallel arrays."""

    surface: SurfaceSpec
    max_word_length: int
    i: np.ndarray  # 1-based boundary indices
    j: np.ndarray
    code: np.ndarray
    length: np.ndarray
    summand: np.ndarray

    def __len__(self):
        return int(self.length.size)

    @property
    def completeness_length(self) -> float:
        return self.surface.completeness_length(self.max_word_length)

    @property
    def rhs(self) -> float:
        return math.pi**2 * abs(self.surface.euler_char) / 2.0

    @cached_property
    def partial_sum(self) -> float:
        return math.fsum(self.summand)

    def cumulative(self) -> np.ndarray:
        return np.cumsum(self.summand)

    def words(self) -> list[Word]:
        return [Word.from_code(int(c)) for c in self.code]

    @property
    def records(self) -> list[OrthoRecord]:
        return [
            OrthoRecord(int(a), int(b), Word.from_code(int(c)), float(l), float(s))
            for a, b, c, l, s in zip(self.i, self.j, self.code, self.length, self.summand)
        ]

    def below(self, cutoff: float) -> np.ndarray:
        return self.length[self.length <= cutoff]

    def keys(self) -> list[tuple[int, int, int]]:
        return list(zip(self.i.tolist(), self.code.tolist(), self.j.tolist()))


def _prefix_jobs(max_len: int) -> list[tuple[tuple[int, ...], int]]:
    depth = min(2, max_len)
    jobs: list[tuple[tuple[int, ...], int]] = []
    if depth > 0:
        jobs.append(((), depth - 1))
    level = [w.letters for w in enumerate_words(depth) if len(w) == depth]
    jobs.extend((p, max_len) for p in level)
    return jobs


def spectrum(spec: SurfaceSpec, max_word_length: int, threads: int | None = None) -> Spectrum:
    """Every orthogeodesic class whose canonical word has at most ``max_word_length`` letters.

    The word tree is split into prefix shards that run concurrently; shards are
    concatenated in a fixed order and then sorted, so the result does not
    depend on ``threads``.
    """
    n = int(max_word_length)
    if not 0 <= n <= kernels.MAX_WORD_LENGTH:
        raise ParameterError(f"max_word_length must lie in 0..{kernels.MAX_WORD_LENGTH}")
    gens, bwords, axes, norms = spec.kernel_data()

    def run(job):
        prefix, limit = job
        return kernels.enumerate_classes(gens, bwords, axes, norms, limit, list(prefix))

    jobs = _prefix_jobs(n)
    workers = max(1, int(threads or os.cpu_count() or 1))
    if workers == 1:
        parts = [run(j) for j in jobs]
    else:
        with ThreadPoolExecutor(workers) as pool:
            parts = list(pool.map(run, jobs))
    i = np.concatenate([p[0] for p in parts]).astype(np.int8) + 1
    j = np.concatenate([p[1] for p in parts]).astype(np.int8) + 1
    code = np.concatenate([p[2] for p in parts]).astype(np.uint64)
    cosh = np.concatenate([p[3] for p in parts])
    length = np.arccosh(np.maximum(cosh, 1.0))
    order = np.lexsort((code, j, i, length))
    i, j, code, length = i[order], j[order], code[order], length[order]
    # L(1/cosh^2(l/2)) with 1/cosh^2(l/2) = 4 e^-l / (1 + e^-l)^2
    e = np.exp(-length)
    summand = rogers_l_array(np.minimum(1.0, 4.0 * e / (1.0 + e) ** 2))
    return Spectrum(spec, n, i, j, code, length, summand)


def bridgeman_check(s: Spectrum) -> tuple[float, float, float]:
    """``(partial_sum, pi^2 |chi| / 2, residual)``."""
    return s.partial_sum, s.rhs, s.rhs - s.partial_sum


def basmajian_check(s: Spectrum) -> tuple[float, float, float]:
    """``(partial_sum, b1 + b2 + b3, residual)``.

    Each unoriented orthogeodesic has two ends, each casting a shadow of
    length ``2 log coth(l/2)`` on the boundary, so every record counts twice.
    """
    partial = 2.0 * math.fsum(basmajian_term(s.length)) if len(s) else 0.0
    rhs = math.fsum(s.surface.lengths)
    return partial, rhs, rhs - partial


# ---------------------------------------------------------------------------
# export


def fmt(v: float) -> str:
    """12 significant digits, locale independent."""
    return format(float(v), ".12g")


def _round12(v: float) -> float:
    return float(fmt(v))


SPECTRUM_CSV_COLUMNS = ("rank", "i", "j", "word", "length", "summand", "cumulative_sum")


def spectrum_csv(s: Spectrum) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(SPECTRUM_CSV_COLUMNS)
    cum = s.cumulative()
    for rank, (a, b, c, l, v, t) in enumerate(zip(s.i, s.j, s.code, s.length, s.summand, cum), start=1):
        w.writerow((rank, int(a), int(b), str(Word.from_code(int(c))), fmt(l), fmt(v), fmt(t)))
    return buf.getvalue()


def _check_triple(check) -> dict:
    partial, rhs, residual = check
    return {"partial": _round12(partial), "rhs": _round12(rhs), "residual": _round12(residual)}


def spectrum_json(s: Spectrum) -> dict:
    b = s.surface.lengths
    return {
        "surface": {
            "b1": _round12(b[0]),
            "b2": _round12(b[1]),
            "b3": _round12(b[2]),
            "euler_char": int(s.surface.euler_char),
        },
        "max_word_length": s.max_word_length,
        "completeness_length": _round12(s.completeness_length),
        "records": [
            {"i": r.i, "j": r.j, "word": str(r.word), "length": _round12(r.length), "summand": _round12(r.summand)}
            for r in s.records
        ],
        "bridgeman": _check_triple(bridgeman_check(s)),
        "basmajian": _check_triple(basmajian_check(s)),
    }


_NUM = {"type": "number"}
_CHECK = {
    "type": "object",
    "required": ["partial", "rhs", "residual"],
    "properties": {"partial": _NUM, "rhs": _NUM, "residual": _NUM},
    "additionalProperties": False,
}
SPECTRUM_JSON_SCHEMA = {
    "type": "object",
    "required": ["surface", "max_word_length", "completeness_length", "records", "bridgeman", "basmajian"],
    "additionalProperties": False,
    "properties": {
        "surface": {
            "type": "object",
            "required": ["b1", "b2", "b3", "euler_char"],
            "properties": {"b1": _NUM, "b2": _NUM, "b3": _NUM, "euler_char": {"type": "integer"}},
            "additionalProperties": False,
        },
        "max_word_length": {"type": "integer", "minimum": 0},
        "completeness_length": {"type": "number", "minimum": 0},
        "records": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["i", "j", "word", "length", "summand"],
                "properties": {
                    "i": {"type": "integer", "minimum": 1, "maximum": 3},
                    "j": {"type": "integer", "minimum": 1, "maximum": 3},
                    "word": {"type": "string", "pattern": "^[aAbB]*$"},
                    "length": {"type": "number", "exclusiveMinimum": 0},
                    "summand": {"type": "number", "exclusiveMinimum": 0},
                },
                "additionalProperties": False,
            },
        },
        "bridgeman": _CHECK,
        "basmajian": _CHECK,
    },
}
