"""Symmetric gauge functions and the unitarily invariant norms they induce.

A gauge acts on the singular-value vector of a matrix.  Vectors are padded
with zeros on demand, so a matrix ``A`` and ``A (+) 0`` always have the same
norm, and ``|||I_k|||`` for any ``k`` is the gauge of the all-ones vector.
"""
import math
from dataclasses import dataclass, field
from typing import Callable, NamedTuple, Optional

import numpy as np

from .errors import ConfigError, DomainError
from .linalg import singular_values

DEFAULT_TOL = 1e-8


class Gauge:
    """Base class: subclasses implement ``evaluate`` on a nonnegative vector."""

    name = "gauge"

    def evaluate(self, values):
        raise NotImplementedError

    def __call__(self, values):
        v = np.abs(np.asarray(values, dtype=float).ravel())
        return float(self.evaluate(v))

    def __str__(self):
        return self.name


@dataclass(frozen=True)
class OperatorGauge(Gauge):
    def evaluate(self, values):
        return values.max() if values.size else 0.0

    @property
    def name(self):
        return "op"


@dataclass(frozen=True)
class KyFanGauge(Gauge):
    k: int

    def __post_init__(self):
        if not isinstance(self.k, (int, np.integer)) or self.k < 1:
            raise ConfigError(f"Ky Fan order must be a positive integer, got {self.k!r}")

    def evaluate(self, values):
        top = np.sort(values)[::-1][: self.k]
        return top.sum()

    @property
    def name(self):
        return f"kyfan:{self.k}"


@dataclass(frozen=True)
class SchattenGauge(Gauge):
    p: float

    def __post_init__(self):
        if not (self.p >= 1):
            raise ConfigError(f"Schatten exponent must be >= 1, got {self.p!r}")

    def evaluate(self, values):
        if values.size == 0:
            return 0.0
        if math.isinf(self.p):
            return values.max()
        if self.p == 1:
            return values.sum()
        top = values.max()
        if top == 0:
            return 0.0
        if top == 1:
            return np.sum(values ** self.p) ** (1.0 / self.p)
        return top * np.sum((values / top) ** self.p) ** (1.0 / self.p)

    @property
    def name(self):
        p = self.p
        if math.isinf(p):
            return "schatten:inf"
        return f"schatten:{int(p)}" if float(p).is_integer() else f"schatten:{p!r}"


@dataclass(frozen=True)
class CustomGauge(Gauge):
    """User-supplied symmetric gauge; ``fn`` sees a finite nonnegative vector.

    The caller vouches for the gauge axioms (norm, absolute, permutation
    invariant).  Zero padding is handled here: ``fn`` is always called with
    zeros stripped.
    """

    label: str
    fn: Callable = field(compare=False)

    def evaluate(self, values):
        return self.fn(values[values != 0])

    @property
    def name(self):
        return self.label


OPERATOR = OperatorGauge()


def parse_gauge(text):
    """Parse ``"op"``, ``"kyfan:K"`` or ``"schatten:P"``."""
    if isinstance(text, Gauge):
        return text
    token = str(text).strip()
    if token in ("op", "operator"):
        return OPERATOR
    kind, sep, arg = token.partition(":")
    if not sep:
        raise ConfigError(f"unknown gauge {token!r}")
    if kind == "kyfan":
        try:
            k = int(arg)
        except ValueError:
            raise ConfigError(f"bad Ky Fan order {arg!r} in gauge {token!r}") from None
        return KyFanGauge(k)
    if kind == "schatten":
        try:
            p = float(arg)
        except ValueError:
            raise ConfigError(f"bad Schatten exponent {arg!r} in gauge {token!r}") from None
        if math.isnan(p):
            raise ConfigError(f"bad Schatten exponent {arg!r} in gauge {token!r}")
        return SchattenGauge(p)
    raise ConfigError(f"unknown gauge kind {kind!r} in {token!r}")


def parse_gauges(text):
    """Comma-separated list of gauges."""
    return [parse_gauge(t) for t in str(text).split(",") if t.strip()]


DEFAULT_GAUGES = ("op", "kyfan:2", "schatten:1", "schatten:2", "schatten:3")


def gauge_norm(g, A):
    """``|||A||| = g(s(A))``."""
    return parse_gauge(g)(singular_values(A))


def identity_norm(g, k):
    """``|||I_k|||``, computed from the gauge on the all-ones vector."""
    return parse_gauge(g)(np.ones(int(k)))


class MajorizationVerdict(NamedTuple):
    holds: bool
    first_violation_index: Optional[int]
    margins: list


def _desc(x, length):
    v = np.sort(np.asarray(x, dtype=float).ravel())[::-1]
    return np.concatenate([v, np.zeros(length - v.size)])


def _verdict(margins, tol):
    margins = [float(m) for m in margins]
    bad = [i for i, m in enumerate(margins) if m < -tol]
    return MajorizationVerdict(not bad, bad[0] if bad else None, margins)


def weak_majorization(x, y, logarithmic=False, tol=DEFAULT_TOL):
    """Check that ``x`` is weakly (log-)majorized by ``y``.

    Margins are normalized so that ``holds`` iff every margin is ``>= -tol``:
    partial sums use ``(Y_k - X_k) / (1 + Y_k)``, partial products use
    ``(Y_k - X_k) / Y_k``.
    """
    x = np.asarray(x, dtype=float).ravel()
    y = np.asarray(y, dtype=float).ravel()
    length = max(x.size, y.size)
    xs, ys = _desc(x, length), _desc(y, length)
    if not logarithmic:
        X, Y = np.cumsum(xs), np.cumsum(ys)
        return _verdict((Y - X) / (1.0 + np.abs(Y)), tol)
    if (x < 0).any() or (y < 0).any():
        raise DomainError("log-majorization needs nonnegative entries")
    X, Y = np.cumprod(xs), np.cumprod(ys)
    margins = []
    for px, py in zip(X, Y):
        if py > 0:
            margins.append((py - px) / py)
        else:
            margins.append(0.0 if px == 0 else -math.inf)
    return _verdict(margins, tol)


def ky_fan_dominates(A, B, tol=DEFAULT_TOL):
    """Ky Fan norms of ``A`` bounded by those of ``B`` for every order."""
    return weak_majorization(singular_values(A), singular_values(B), False, tol)
