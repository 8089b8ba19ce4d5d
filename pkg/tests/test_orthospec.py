import itertools
import json
import math

import jsonschema
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bridgeman import orthospec as os_
from bridgeman.errors import ConstructionError, DomainError, ParameterError
from bridgeman.orthospec import DEGENERATE, Word

from conftest import pants

HEX_222 = 1.7049128323580136912  # mpmath right-angled hexagon seam
HEX_123 = (2.5870227853823357595, 2.0052899176126356505, 1.2579754911284713179)
# 3 -> 3 orthogeodesic around boundary 1: twice the hexagon's side-to-opposite-seam
# perpendicular, 2 arccosh(sinh(l13) sinh(b1/2)) (mpmath)
SELF_33_123 = 2.5148089326239486022
BWORDS = ((0,), (2,), (3, 1))


# ---------------------------------------------------------------------------
# brute-force canonical form: scan c_i^m w c_j^n over a generous diamond


def _reduce(letters):
    out = []
    for x in letters:
        if out and out[-1] == x ^ 1:
            out.pop()
        else:
            out.append(x)
    return out


def _inv(w):
    return [x ^ 1 for x in reversed(w)]


def _pow(c, m):
    return list(c) * m if m >= 0 else _inv(c) * (-m)


def brute_canonical(i, w, j):
    best = None
    for ii, ww, jj in ((i, list(w), j), (j, _inv(w), i)):
        if ii > jj:
            continue
        ci, cj = BWORDS[ii], BWORDS[jj]
        bound = 2 * len(ww) + len(ci) + len(cj) + 4
        for m in range(-bound, bound + 1):
            for n in range(-(bound - abs(m)), bound - abs(m) + 1):
                v = _reduce(_pow(ci, m) + ww + _pow(cj, n))
                key = (len(v), v, ii, jj)
                if best is None or key < best:
                    best = key
    if best[2] == best[3] and best[0] == 0:
        return DEGENERATE
    return best[2] + 1, Word(tuple(best[1])), best[3] + 1


def random_word(rng, n):
    w = []
    while len(w) < n:
        x = int(rng.integers(4))
        if w and w[-1] == x ^ 1:
            continue
        w.append(x)
    return Word(tuple(w))


# ---------------------------------------------------------------------------
# words


def test_word_basics():
    w = Word.from_string("abAB")
    assert str(w) == "abAB" and len(w) == 4
    assert str(w.inverse()) == "baBA"
    assert str(w * w.inverse()) == ""
    assert str(Word.from_string("ab") * Word.from_string("Ba")) == "aa"
    assert str(Word.from_string("ab") ** -2) == "BABA"
    with pytest.raises(DomainError):
        Word.from_string("aA")
    with pytest.raises(DomainError):
        Word.from_string("ax")


@settings(max_examples=200, deadline=None)
@given(st.lists(st.integers(0, 3), max_size=28), st.lists(st.integers(0, 3), max_size=28))
def test_code_order_is_length_lex_order(a, b):
    u, v = Word.reduce(a), Word.reduce(b)
    assert (u.code < v.code) == (u < v)
    assert Word.from_code(u.code) == u


@pytest.mark.parametrize("n,count", [(0, 1), (1, 5), (3, 53), (6, 1 + 4 * (1 + 3 + 9 + 27 + 81 + 243))])
def test_enumerate_words_counts(n, count):
    words = list(os_.enumerate_words(n))
    assert len(words) == count == os_.word_count(n)
    assert len(set(words)) == count
    assert words == sorted(words)


# ---------------------------------------------------------------------------
# canonical forms


def test_canonical_examples():
    assert os_.canonicalize(1, "a", 1) is DEGENERATE
    assert os_.canonicalize(3, "BABA", 3) is DEGENERATE
    assert os_.canonicalize(1, "", 2) == (1, Word(), 2)
    assert os_.canonicalize(2, "", 1) == (1, Word(), 2)
    assert os_.canonicalize(1, "aab", 2) == (1, Word(), 2)


def test_canonical_matches_brute_force_short_words():
    for w in os_.enumerate_words(4):
        for i, j in itertools.product((1, 2, 3), repeat=2):
            assert os_.canonicalize(i, w, j) == brute_canonical(i - 1, w.letters, j - 1), (i, str(w), j)


def test_canonical_matches_brute_force_random_long_words():
    rng = np.random.default_rng(11)
    for _ in range(60):
        w = random_word(rng, int(rng.integers(5, 10)))
        i, j = (int(t) for t in rng.integers(1, 4, size=2))
        assert os_.canonicalize(i, w, j) == brute_canonical(i - 1, w.letters, j - 1)


def test_orientation_reversal_and_idempotence():
    rng = np.random.default_rng(12)
    for _ in range(100):
        w = random_word(rng, int(rng.integers(0, 12)))
        a = os_.canonicalize(1, w, 2)
        assert os_.canonicalize(2, w.inverse(), 1) == a
        assert os_.canonicalize(*a) == a


def test_canonical_class_members_agree():
    rng = np.random.default_rng(13)
    cw = [Word(c) for c in BWORDS]
    for _ in range(100):
        w = random_word(rng, int(rng.integers(0, 8)))
        i, j = (int(t) for t in rng.integers(1, 4, size=2))
        m, n = (int(t) for t in rng.integers(-3, 4, size=2))
        moved = (cw[i - 1] ** m) * w * (cw[j - 1] ** n)
        assert os_.canonicalize(i, moved, j) == os_.canonicalize(i, w, j)


def test_canonical_rejects_overlong():
    with pytest.raises(ParameterError):
        os_.canonicalize(1, "ab" * 15, 2)


# ---------------------------------------------------------------------------
# surfaces


@pytest.mark.parametrize("b", [(2, 2, 2), (1, 2, 3), (0.3, 0.4, 5.0), (8.0, 8.0, 0.5)])
def test_build_pants_invariants(b):
    spec = os_.build_pants(*b)
    for k in range(3):
        assert abs(os_.translation_length(spec.boundary_map(k)) - b[k]) < 1e-9
    assert spec.euler_char == -1
    for g, h in itertools.combinations(spec.axes, 2):
        assert os_.geodesic_distance(g, h) > 0


def test_build_pants_errors():
    with pytest.raises(DomainError):
        os_.build_pants(1.0, 0.0, 1.0)
    with pytest.raises(ConstructionError):
        os_.build_pants(1.0, 1.0, 5000.0)


def test_escape_hatch():
    spec = pants(2.0, 2.0, 2.0)
    again = os_.SurfaceSpec.from_matrices(spec.A.matrix, spec.B.matrix, ["a", "b", "BA"])
    a = os_.spectrum(again, 4)
    b = os_.spectrum(spec, 4)
    assert np.allclose(a.length, b.length, atol=1e-12)
    # positive trace for AB makes the axes cross
    lam = math.e
    t2 = 2 * math.cosh(1.0)
    p = (t2 - t2 / lam) / (lam - 1 / lam)
    s = t2 - p
    with pytest.raises(ConstructionError):
        os_.SurfaceSpec.from_matrices([[lam, 0], [0, 1 / lam]], [[p, 1], [p * s - 1, s]])


def test_hexagon_oracle():
    l = os_.hexagon_oracle(2, 2, 2)
    assert max(abs(v - HEX_222) for v in l) < 1e-14
    assert np.allclose(os_.hexagon_oracle(1, 2, 3), HEX_123, atol=1e-14)
    spec = pants(1.0, 2.0, 3.0)
    assert abs(os_.geodesic_distance(spec.axes[0], spec.axes[1]) - HEX_123[0]) < 1e-8
    l12 = [os_.hexagon_oracle(1, 2, b3)[0] for b3 in np.linspace(0.5, 6, 12)]
    assert all(b > a for a, b in zip(l12, l12[1:]))
    with pytest.raises(DomainError):
        os_.hexagon_oracle(1, -2, 3)


def test_ortho_length():
    spec = pants(2.0, 2.0, 2.0)
    assert abs(os_.ortho_length(spec, 1, "", 2) - HEX_222) < 1e-8
    with pytest.raises(DomainError):
        os_.ortho_length(spec, 2, "bb", 2)
    for w in os_.enumerate_words(2):
        for i, j in itertools.product((1, 2, 3), repeat=2):
            if os_.canonicalize(i, w, j) is DEGENERATE:
                continue
            assert os_.ortho_length(spec, i, w, j) >= HEX_222 - 1e-9


def test_length_constant_on_classes():
    spec = pants(1.0, 2.0, 3.0)
    rng = np.random.default_rng(21)
    cw = [Word(c) for c in BWORDS]
    done = 0
    while done < 20:
        w = random_word(rng, int(rng.integers(0, 5)))
        i, j = (int(t) for t in rng.integers(1, 4, size=2))
        if os_.canonicalize(i, w, j) is DEGENERATE:
            continue
        base = os_.ortho_length(spec, i, w, j)
        for _ in range(50):
            m, n = (int(t) for t in rng.integers(-2, 3, size=2))
            member = (cw[i - 1] ** m) * w * (cw[j - 1] ** n)
            assert abs(os_.ortho_length(spec, i, member, j) - base) < 1e-9
        done += 1


# ---------------------------------------------------------------------------
# spectra


def test_bound_zero(spec_of):
    s = spec_of((2.0, 2.0, 2.0), 0)
    assert len(s) == 3
    assert sorted(zip(s.i.tolist(), s.j.tolist())) == [(1, 2), (1, 3), (2, 3)]
    assert all(str(w) == "" for w in s.words())
    assert np.allclose(s.length, HEX_222, atol=1e-8)


def test_spectrum_structure(spec_of):
    s = spec_of((1.0, 2.0, 3.0), 6)
    assert np.all(np.diff(s.length) >= 0)
    assert len(set(s.keys())) == len(s)
    assert np.all(s.i <= s.j)
    for (i, j), want in zip(((1, 2), (1, 3), (2, 3)), HEX_123):
        assert abs(s.length[(s.i == i) & (s.j == j)].min() - want) < 1e-8
    rng = np.random.default_rng(5)
    recs = s.records
    for k in rng.choice(len(recs), 200, replace=False):
        r = recs[k]
        assert os_.canonicalize(r.i, r.word, r.j) == (r.i, r.word, r.j)
        assert abs(os_.ortho_length(s.surface, r.i, r.word, r.j) - r.length) < 1e-9 * max(1, r.length)
        assert 0 < r.summand < math.pi**2 / 6


def test_spectrum_matches_brute_enumeration():
    spec = pants(2.0, 2.0, 2.0)
    found = set()
    for w in os_.enumerate_words(5):
        for i, j in itertools.product((1, 2, 3), repeat=2):
            c = os_.canonicalize(i, w, j)
            if c is not DEGENERATE and len(c[1]) <= 5:
                found.add((c[0], c[1].code, c[2]))
    s = os_.spectrum(spec, 5)
    assert set(s.keys()) == found


def test_short_self_orthogeodesic_beats_a_seam(spec_of):
    s = spec_of((1.0, 2.0, 3.0), 4)
    r = s.records[2]
    assert (r.i, str(r.word), r.j) == (3, "a", 3)
    assert abs(r.length - SELF_33_123) < 1e-9
    assert r.length < HEX_123[0]


def test_thread_count_does_not_change_output():
    spec = pants(1.0, 2.0, 3.0)
    a = os_.spectrum(spec, 8, threads=1)
    b = os_.spectrum(spec, 8, threads=3)
    for k in ("i", "j", "code", "length", "summand"):
        assert np.array_equal(getattr(a, k), getattr(b, k))


def test_spectrum_parameters():
    with pytest.raises(ParameterError):
        os_.spectrum(pants(2.0, 2.0, 2.0), -1)
    with pytest.raises(ParameterError):
        os_.spectrum(pants(2.0, 2.0, 2.0), 29)


def test_completeness_constant():
    for b in [(2.0, 2.0, 2.0), (1.0, 2.0, 3.0)]:
        delta, offset = pants(*b).completeness_constants
        # walls joined by a boundary arc are that arc apart; the closest pair is a half boundary or a whole one
        arcs = [b[2] / 2, b[0], b[1]]
        assert offset == 3
        assert delta <= min(arcs) + 1e-9
        assert abs(delta - min(arcs)) < 1e-8


@pytest.mark.parametrize("b", [(2.0, 2.0, 2.0), (1.0, 2.0, 3.0)])
def test_completeness_bound_holds_empirically(spec_of, b):
    s = spec_of(b, 12)
    wl = np.array([int(c) >> 56 for c in s.code])
    for n in range(12):
        t = s.surface.completeness_length(n)
        longer = s.length[wl > n]
        assert longer.size == 0 or longer.min() > t


@pytest.mark.parametrize("b", [(2.0, 2.0, 2.0), (1.0, 2.0, 3.0)])
@pytest.mark.parametrize("n", [6, 8, 10])
def test_stability_between_bounds(spec_of, b, n):
    lo, hi = spec_of(b, n), spec_of(b, n + 2)
    t = lo.completeness_length
    a, c = lo.below(t), hi.below(t)
    assert a.size == c.size and a.size > 0
    assert np.max(np.abs(a - c)) < 1e-9


def test_bridgeman_convergence(spec_of):
    rows = [os_.bridgeman_check(spec_of((2.0, 2.0, 2.0), n)) for n in (4, 8, 12)]
    assert abs(rows[0][1] - 4.9348022005446793) < 1e-12
    partial = [r[0] for r in rows]
    assert partial[0] < partial[1] < partial[2] < math.pi**2 / 2 + 1e-9
    assert all(r[2] > 0 for r in rows)
    assert rows[2][2] < 0.5 * rows[1][2]


def test_basmajian_convergence(spec_of):
    for b in [(2.0, 2.0, 2.0), (1.0, 2.0, 3.0)]:
        rows = [os_.basmajian_check(spec_of(b, n)) for n in (4, 8, 12)]
        assert all(r[1] == 6.0 for r in rows)
        res = [r[2] for r in rows]
        assert res[0] > res[1] > res[2] > 0


def test_basmajian_term():
    l = HEX_222
    assert abs(os_.basmajian_term(l) - 2 * math.log(1 / math.tanh(l / 2))) < 1e-14
    arr = os_.basmajian_term(np.array([l, 3.0]))
    assert abs(arr[1] - 2 * math.log(1 / math.tanh(1.5))) < 1e-14


def test_exports(spec_of):
    s = spec_of((2.0, 2.0, 2.0), 4)
    doc = os_.spectrum_json(s)
    jsonschema.validate(doc, os_.SPECTRUM_JSON_SCHEMA)
    text = json.dumps(doc, separators=(",", ":"))
    assert json.dumps(json.loads(text), separators=(",", ":")) == text
    assert doc["bridgeman"]["rhs"] == 4.93480220054
    lines = os_.spectrum_csv(s).splitlines()
    assert lines[0] == "rank,i,j,word,length,summand,cumulative_sum"
    assert len(lines) == len(s) + 1
    last = lines[-1].split(",")
    assert abs(float(last[-1]) - s.partial_sum) < 1e-10
