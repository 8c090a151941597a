"""Reset-probability schedules r_n and the survival probability P_t(t).

``r_n`` is the probability of a reset at a step taken when ``n`` gates have
been applied since the last reset.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

EULER_GAMMA = 0.57721566490153286061

# B_2k / (2k)! for the Euler-Maclaurin tail of the zeta sum
_BERNOULLI_OVER_FACTORIAL = [
    1 / 12,
    -1 / 720,
    1 / 30240,
    -1 / 1209600,
    1 / 47900160,
    -691 / 1307674368000,
    1 / 74724249600,
]


class OutOfRange(IndexError):
    pass


class ScheduleParseError(ValueError):
    pass


class ResetSchedule:
    """Base class; subclasses implement :meth:`probs`."""

    def probs(self, count: int) -> np.ndarray:
        """Array ``[r_0, ..., r_{count-1}]``."""
        raise NotImplementedError

    def prob_at(self, n: int) -> float:
        if n < 0:
            raise OutOfRange(f"negative step count {n}")
        return float(self.probs(n + 1)[n])

    def to_string(self) -> str:
        raise NotImplementedError


@dataclass(frozen=True)
class Poisson(ResetSchedule):
    r: float

    def __post_init__(self):
        if not 0.0 <= self.r <= 1.0:
            raise ValueError(f"reset probability r={self.r} outside [0, 1]")

    def probs(self, count):
        return np.full(count, float(self.r))

    def to_string(self):
        return f"poisson:r={self.r!r}"


@dataclass(frozen=True)
class Deterministic(ResetSchedule):
    """Reset with certainty once ``l`` gates have been applied."""

    l: int

    def __post_init__(self):
        if int(self.l) != self.l or self.l < 1:
            raise ValueError(f"deterministic period l={self.l} must be a positive integer")

    def probs(self, count):
        out = np.zeros(count)
        if self.l < count:
            out[self.l] = 1.0
        return out

    def to_string(self):
        return f"deterministic:l={self.l}"


@dataclass(frozen=True)
class PowerLaw(ResetSchedule):
    """r_n = gamma / (n + 1)**alpha."""

    gamma: float
    alpha: float

    def __post_init__(self):
        if not 0.0 <= self.gamma <= 1.0:
            raise ValueError(f"gamma={self.gamma} outside [0, 1]")
        if not self.alpha > 0.0:
            raise ValueError(f"alpha={self.alpha} must be positive")

    def probs(self, count):
        return self.gamma / np.arange(1, count + 1, dtype=float) ** self.alpha

    def to_string(self):
        return f"powerlaw:gamma={self.gamma!r},alpha={self.alpha!r}"


@dataclass(frozen=True)
class Explicit(ResetSchedule):
    values: tuple

    def __post_init__(self):
        vals = tuple(float(v) for v in self.values)
        if any(not 0.0 <= v <= 1.0 for v in vals):
            raise ValueError("explicit reset probabilities must lie in [0, 1]")
        object.__setattr__(self, "values", vals)

    def probs(self, count):
        if count > len(self.values):
            raise OutOfRange(
                f"explicit schedule has {len(self.values)} entries, {count} requested"
            )
        return np.array(self.values[:count], dtype=float)

    def to_string(self):
        return "explicit:" + json.dumps(list(self.values))


def prob_at(s: ResetSchedule, n: int) -> float:
    return s.prob_at(n)


def log_no_reset_prob(s: ResetSchedule, t: int) -> float:
    """log P_t(t); ``-inf`` if some r_j equals 1."""
    if t == 0:
        return 0.0
    r = s.probs(t)
    if np.any(r >= 1.0):
        return -math.inf
    return float(np.sum(np.log1p(-r)))


def no_reset_prob(s: ResetSchedule, t: int) -> float:
    """P_t(t) = prod_{j<t} (1 - r_j), accumulated in log space."""
    return math.exp(log_no_reset_prob(s, t))


def survival(s: ResetSchedule, n_max: int) -> np.ndarray:
    """Array of P_n(n) for n = 0..n_max (probability of n steps without reset)."""
    r = s.probs(n_max)
    out = np.empty(n_max + 1)
    out[0] = 1.0
    with np.errstate(divide="ignore"):
        out[1:] = np.exp(np.cumsum(np.log1p(-r)))
    return out


def zeta(s: float, n_terms: int = 32) -> float:
    """Riemann zeta for real s != 1 by direct summation plus Euler-Maclaurin tail.

    Valid on the analytic continuation as well, so ``zeta(0.5)`` is the usual
    negative value.
    """
    if s == 1.0:
        raise ValueError("zeta has a pole at s = 1")
    n = n_terms
    head = math.fsum(k ** -s for k in range(1, n))
    tail = n ** (1 - s) / (s - 1) + 0.5 * n ** -s
    # rising factorial s (s+1) ... (s + 2k - 2)
    rising = s
    for k, b in enumerate(_BERNOULLI_OVER_FACTORIAL, start=1):
        tail += b * rising * n ** (-s - 2 * k + 1)
        rising *= (s + 2 * k - 1) * (s + 2 * k)
    return head + tail


def _power_sum(s: float, t: int) -> float:
    """Large-t form of sum_{j=1}^t j**-s (any real s > 0)."""
    if s == 1.0:
        return math.log(t) + EULER_GAMMA + 1 / (2 * t) - 1 / (12 * t * t)
    return zeta(s) + t ** (1 - s) / (1 - s) + 0.5 * t ** -s - s * t ** (-s - 1) / 12


def no_reset_log_asymptote(s: PowerLaw, t: int, refined: bool = False) -> float:
    """Logarithm of :func:`no_reset_asymptote`.

    The leading-order forms replace ``log(1 - r_j)`` by ``-r_j``:
    ``-gamma zeta(alpha)`` for alpha > 1, ``-gamma (gamma_E + log t)`` for
    alpha = 1 and ``-gamma t**(1-alpha) / (1-alpha)`` for alpha < 1.

    With ``refined=True`` the full expansion
    ``log(1 - r) = -sum_k r**k / k`` is kept, each power sum being replaced by
    its large-t asymptote.
    """
    if not isinstance(s, PowerLaw):
        raise TypeError("asymptotic survival is defined for power-law schedules only")
    g, a = s.gamma, s.alpha
    if t < 1:
        raise ValueError("asymptote needs t >= 1")
    if not refined:
        if a > 1:
            return -g * zeta(a)
        if a == 1:
            return -g * (EULER_GAMMA + math.log(t))
        return -g * t ** (1 - a) / (1 - a)
    if g == 0:
        return 0.0
    if g >= 1:
        return -math.inf
    total = 0.0
    k = 1
    while g**k / k > 1e-17:
        total -= g**k / k * _power_sum(k * a, t)
        k += 1
    return total


def no_reset_asymptote(s: PowerLaw, t: int, refined: bool = False) -> float:
    """Large-t closed form of P_t(t) for a power-law schedule.

    Leading order: ``exp(-gamma zeta(alpha))`` (alpha > 1),
    ``exp(-gamma gamma_E) t**-gamma`` (alpha = 1),
    ``exp(-gamma t**(1-alpha) / (1-alpha))`` (alpha < 1).
    """
    return math.exp(no_reset_log_asymptote(s, t, refined=refined))


def _parse_params(body: str) -> dict[str, float]:
    out = {}
    for item in filter(None, (p.strip() for p in body.split(","))):
        if "=" not in item:
            raise ScheduleParseError(f"expected key=value, got {item!r}")
        k, v = item.split("=", 1)
        try:
            out[k.strip()] = float(v)
        except ValueError:
            raise ScheduleParseError(f"bad number for {k.strip()!r}: {v!r}") from None
    return out


def parse_schedule(text: str) -> ResetSchedule:
    """Parse ``poisson:r=0.3``, ``powerlaw:gamma=0.2,alpha=2``,
    ``deterministic:l=5`` or ``explicit:[0.1,0.2]``."""
    kind, sep, body = text.strip().partition(":")
    kind = kind.strip().lower()
    if not sep:
        raise ScheduleParseError(f"schedule {text!r} lacks a 'kind:' prefix")
    try:
        if kind == "explicit":
            values = json.loads(body)
            if not isinstance(values, list):
                raise ScheduleParseError("explicit schedule needs a JSON list")
            return Explicit(tuple(values))
        params = _parse_params(body)
        if kind == "poisson":
            return Poisson(params["r"])
        if kind == "powerlaw":
            return PowerLaw(params["gamma"], params["alpha"])
        if kind == "deterministic":
            l = params["l"]
            if l != int(l):
                raise ScheduleParseError(f"deterministic l must be an integer, got {l}")
            return Deterministic(int(l))
    except KeyError as exc:
        raise ScheduleParseError(f"schedule {text!r} is missing parameter {exc}") from None
    except (ValueError, json.JSONDecodeError) as exc:
        if isinstance(exc, ScheduleParseError):
            raise
        raise ScheduleParseError(f"schedule {text!r}: {exc}") from None
    raise ScheduleParseError(f"unknown schedule kind {kind!r}")
