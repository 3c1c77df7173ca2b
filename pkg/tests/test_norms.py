import math

import numpy as np
import pytest
from hypothesis import assume, given, settings, strategies as st

from gruss_lab.errors import ConfigError, DomainError
from gruss_lab.linalg import adjoint, identity, op_norm, pad, random_psd, random_unitary, singular_values
from gruss_lab.norms import (
    OPERATOR, CustomGauge, KyFanGauge, SchattenGauge, gauge_norm, identity_norm,
    ky_fan_dominates, parse_gauge, parse_gauges, weak_majorization,
)
from helpers import cgauss, exact_svd_example, seeds

GAUGES = ["op", "kyfan:1", "kyfan:2", "kyfan:3", "schatten:1", "schatten:2", "schatten:3",
          "schatten:inf"]


def numpy_norm(name, A):
    """Oracle built on numpy's own matrix norms and SVD."""
    s = np.linalg.svd(A, compute_uv=False)
    if name in ("op", "schatten:inf"):
        return np.linalg.norm(A, 2)
    if name == "schatten:1":
        return np.linalg.norm(A, "nuc")
    if name == "schatten:2":
        return np.linalg.norm(A, "fro")
    if name.startswith("schatten:"):
        p = float(name.split(":")[1])
        return np.sum(s ** p) ** (1 / p)
    return np.sum(s[: int(name.split(":")[1])])


def test_examples():
    assert gauge_norm("schatten:2", identity(4)) == pytest.approx(2.0, abs=1e-15)
    assert gauge_norm("kyfan:2", np.diag([3, 1, 2])) == 5.0
    M, s = exact_svd_example()
    assert gauge_norm(OPERATOR, M) == pytest.approx(2 + 2 * math.sqrt(3), abs=1e-12)


@settings(max_examples=80, deadline=None)
@given(seeds, st.integers(1, 4), st.sampled_from(GAUGES))
def test_matches_numpy_oracle(seed, d, name):
    A = cgauss(seed, (d, d))
    assert gauge_norm(name, A) == pytest.approx(numpy_norm(name, A), rel=1e-12)


@pytest.mark.parametrize("p", [1, 2, 3, 4])
def test_identity_schatten_exact(p):
    for k in range(1, 17):
        assert abs(identity_norm(SchattenGauge(p), k) - k ** (1 / p)) <= 1e-12
        assert abs(gauge_norm(SchattenGauge(p), identity(k)) - k ** (1 / p)) <= 1e-12


def test_identity_norm_from_ones_vector():
    assert identity_norm("op", 7) == 1.0
    assert identity_norm("kyfan:3", 7) == 3.0
    assert identity_norm("kyfan:9", 7) == 7.0
    g = CustomGauge("l1+max", lambda v: v.sum() + v.max())
    assert identity_norm(g, 4) == 5.0


def test_padding_invariance():
    A = cgauss(2, (3, 3))
    for name in GAUGES:
        assert gauge_norm(name, pad(A, 6)) == gauge_norm(name, A)


def test_custom_gauge_sees_stripped_vector():
    seen = []
    g = CustomGauge("probe", lambda v: (seen.append(v.size), v.sum())[1])
    gauge_norm(g, np.diag([1.0, 0.0, 2.0]))
    assert seen == [2]


@settings(max_examples=300, deadline=None)
@given(seeds, st.integers(1, 4), st.sampled_from(GAUGES))
def test_contractions_bounded_by_identity(seed, n, name):
    K = cgauss(seed, (n, n))
    K = K / op_norm(K)
    assert gauge_norm(name, K) <= gauge_norm(name, identity(n)) + 1e-10


@settings(max_examples=300, deadline=None)
@given(seeds, st.integers(1, 4), st.sampled_from(GAUGES))
def test_two_sided_submultiplicativity(seed, n, name):
    A, X, B = (cgauss(seed + i, (n, n)) for i in range(3))
    lhs = gauge_norm(name, A @ X @ B)
    assert lhs <= op_norm(A) * gauge_norm(name, X) * op_norm(B) * (1 + 1e-10)


@settings(max_examples=100, deadline=None)
@given(seeds, st.integers(1, 4), st.sampled_from(GAUGES))
def test_unitary_invariance(seed, n, name):
    A = cgauss(seed, (n, n))
    U, V = random_unitary(n, seed + 1), random_unitary(n, seed + 2)
    assert gauge_norm(name, U @ A @ V) == pytest.approx(gauge_norm(name, A), rel=1e-10)


# -- majorization --------------------------------------------------------------

def test_ky_fan_dominance_examples():
    A = cgauss(1, (3, 3))
    v = ky_fan_dominates(A, A)
    assert v.holds and np.allclose(v.margins, 0)
    v = ky_fan_dominates(np.diag([1, 1]), np.diag([2, 0]))
    assert v.holds and v.margins[1] == 0.0


@settings(max_examples=100, deadline=None)
@given(seeds, st.integers(1, 4))
def test_weyl_monotonicity(seed, n):
    A = random_psd(n, seed)
    B = A + random_psd(n, seed + 1)
    assert ky_fan_dominates(A, B).holds


def test_weak_majorization_examples():
    for log in (False, True):
        assert weak_majorization([3, 1], [3, 1], log).holds
    v = weak_majorization([4, 1], [3, 3], logarithmic=True)
    assert not v.holds and v.first_violation_index == 0
    with pytest.raises(DomainError):
        weak_majorization([-1], [1], logarithmic=True)


@settings(max_examples=300, deadline=None)
@given(seeds, st.integers(1, 4))
def test_horn_log_majorization(seed, n):
    A, B = cgauss(seed, (n, n)), cgauss(seed + 1, (n, n))
    x = singular_values(A @ B)
    y = singular_values(A) * singular_values(B)
    assert weak_majorization(x, y, logarithmic=True).holds
    assert weak_majorization(x, y).holds


@settings(max_examples=300, deadline=None)
@given(st.lists(st.floats(0.01, 10), min_size=1, max_size=6), st.integers(0, 2**32))
def test_log_majorization_implies_weak(y, seed):
    y = np.sort(np.array(y))[::-1]
    # x = y shrunk multiplicatively by a decreasing factor: log-majorized by y
    f = np.sort(np.random.default_rng(seed).uniform(0.3, 1.0, y.size))[::-1]
    x = np.sort(y * f)[::-1]
    assume(weak_majorization(x, y, logarithmic=True).holds)
    assert weak_majorization(x, y).holds


@settings(max_examples=300, deadline=None)
@given(seeds, st.integers(1, 4))
def test_ky_fan_dominance_implies_every_gauge(seed, n):
    A = cgauss(seed, (n, n))
    B = cgauss(seed + 1, (n, n)) * 2.0
    v = ky_fan_dominates(A, B)
    if not (v.holds and min(v.margins) > 1e-8):
        return
    for name in GAUGES:
        assert gauge_norm(name, A) <= gauge_norm(name, B) + 1e-8


# -- parsing -----------------------------------------------------------------------

def test_parse_round_trip():
    for text in ["op", "kyfan:2", "schatten:1", "schatten:2.5", "schatten:inf"]:
        assert parse_gauge(text).name == text
    assert [g.name for g in parse_gauges("op, kyfan:3")] == ["op", "kyfan:3"]
    assert parse_gauge("schatten:2") == SchattenGauge(2.0)
    assert parse_gauge(KyFanGauge(2)) == KyFanGauge(2)


@pytest.mark.parametrize("text, token", [
    ("kyfan:x", "x"), ("schatten:0.5", "0.5"), ("frob", "frob"), ("kyfan:0", "0"),
    ("lp:2", "lp"), ("schatten:nan", "nan"),
])
def test_parse_errors_name_token(text, token):
    with pytest.raises(ConfigError, match=token):
        parse_gauge(text)
