"""Domain types and Bernoulli sampling sources.

Synthetic sources draw one uniform double per Bernoulli draw from a PCG64
generator keyed by ``SeedSequence(seed, spawn_key=stream)`` and emit 1 when
``u < p``. The draw sequence is therefore a function of (PCG64, seed, stream,
p) alone and is identical under any partition of the draws into batches.
"""

from __future__ import annotations

import enum
import io
import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from ._validation import (
    check_finite_real,
    check_nonnegative_int,
    check_positive_int,
    check_probability,
    check_seed,
)

DEFAULT_BUDGET = 10**10
#: largest integer every sample count must stay below to be exactly representable
MAX_SAMPLE_SIZE = 2**53

_CHUNK = 2**20
_WHITESPACE = np.frombuffer(b" \t\n\r\v\f", dtype=np.uint8)


class InvalidSpecError(ValueError):
    """Raised for an (epsilon, alpha) pair outside the admissible region."""


class UnrepresentableSampleSize(OverflowError):
    """Raised when a required sample count exceeds ``MAX_SAMPLE_SIZE``."""

    def __init__(self, method, value):
        self.method = method
        self.value = value
        super().__init__(
            f"{method} sample size {value:.6g} exceeds the largest exactly "
            f"representable count 2**53"
        )


class StreamParseError(ValueError):
    """An external 0/1 stream contained a token other than '0' or '1'."""

    def __init__(self, offset, token):
        self.offset = offset
        self.token = token
        super().__init__(f"invalid token {token!r} at byte offset {offset}")


class StreamExhaustedError(EOFError):
    """An external stream ended before the requested number of draws."""

    def __init__(self, requested, available, successes):
        self.requested = requested
        self.available = available
        self.successes = successes
        super().__init__(
            f"stream exhausted: requested {requested} draws, only {available} "
            f"available ({successes} successes)"
        )


class Method(str, enum.Enum):
    HOEFFDING = "hoeffding"
    CHEBYSHEV = "chebyshev"
    CLT_PAPER = "clt_paper"
    CLT_STANDARD = "clt_standard"


class IntervalMethod(str, enum.Enum):
    WALD = "wald"
    ADJUSTED_WALD = "adjusted_wald"
    ADJUSTED_WALD_STANDARD = "adjusted_wald_standard"
    CLOPPER_PEARSON = "clopper_pearson"
    HOEFFDING_FIXED_WIDTH = "hoeffding_fixed_width"


@dataclass(frozen=True)
class ErrorSpec:
    """Absolute error tolerance ``epsilon`` and uncertainty level ``alpha``."""

    epsilon: float
    alpha: float

    def __post_init__(self):
        for name in ("epsilon", "alpha"):
            value = getattr(self, name)
            if isinstance(value, bool) or not isinstance(value, (int, float)):
                raise InvalidSpecError(f"{name} must be a real number")
            if not math.isfinite(value):
                raise InvalidSpecError(f"{name} must be finite")
        if not self.epsilon > 0:
            raise InvalidSpecError("epsilon must be positive")
        if not 0 < self.alpha < 1:
            raise InvalidSpecError("alpha must lie in (0,1)")
        object.__setattr__(self, "epsilon", float(self.epsilon))
        object.__setattr__(self, "alpha", float(self.alpha))

    @property
    def confidence(self):
        return 1.0 - self.alpha


def make_error_spec(epsilon, alpha):
    """Build a validated :class:`ErrorSpec`.

    Raises :class:`InvalidSpecError` (a ``ValueError``) if ``epsilon <= 0``,
    ``alpha`` is outside ``(0, 1)`` or either value is not finite.
    """
    try:
        epsilon = float(epsilon)
        alpha = float(alpha)
    except (TypeError, ValueError) as exc:
        raise InvalidSpecError(f"epsilon and alpha must be real numbers: {exc}") from None
    return ErrorSpec(epsilon, alpha)


@dataclass(frozen=True)
class SampleSizePlan:
    n: int
    method: Method
    spec: ErrorSpec
    exceeds_budget: bool
    budget: int
    # tolerance actually certified by `budget` draws; set only when capped
    achievable_epsilon: float | None = None

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("n must be >= 1")
        if self.budget < 1:
            raise ValueError("budget must be >= 1")
        if self.exceeds_budget != (self.n > self.budget):
            raise ValueError("exceeds_budget must equal n > budget")


@dataclass(frozen=True)
class EstimateReport:
    """Outcome of one estimation run.

    ``p_hat`` is the correctly rounded value of ``successes / n_used``;
    :attr:`p_hat_exact` gives the rational value.
    """

    p_hat: float
    successes: int
    n_used: int
    plan: SampleSizePlan
    budget_capped: bool
    seed: int | None
    wall_time: float = field(default=0.0, compare=False)

    def __post_init__(self):
        if not 0 <= self.successes <= self.n_used:
            raise ValueError("successes must lie in [0, n_used]")
        if self.p_hat != self.successes / self.n_used:
            raise ValueError("p_hat must equal successes / n_used")
        if self.budget_capped and self.n_used != self.plan.budget:
            raise ValueError("a budget-capped run must use exactly plan.budget draws")

    @property
    def p_hat_exact(self):
        return Fraction(self.successes, self.n_used)

    @property
    def epsilon(self):
        """Tolerance the report certifies at level ``1 - alpha``."""
        if self.budget_capped:
            return self.plan.achievable_epsilon
        return self.plan.spec.epsilon


@dataclass(frozen=True)
class IntervalEstimate:
    lower: float
    upper: float
    point: float
    method: IntervalMethod
    alpha: float

    def __post_init__(self):
        if not 0.0 <= self.lower <= self.point <= self.upper <= 1.0:
            raise ValueError(
                f"interval must satisfy 0 <= lower <= point <= upper <= 1, got "
                f"({self.lower}, {self.point}, {self.upper})"
            )

    @property
    def width(self):
        return self.upper - self.lower

    def __contains__(self, p):
        return self.lower <= p <= self.upper


class BernoulliSource:
    """Single-owner stream of IID {0, 1} draws.

    Subclasses implement :meth:`_draw`; callers use :meth:`draw` or
    :func:`draw_batch`, which keep ``draws_emitted`` current.
    """

    kind = "abstract"
    seed = None

    def __init__(self):
        self.draws_emitted = 0

    def draw(self, count):
        """Draw ``count`` values and return how many of them were 1."""
        count = check_positive_int(count, "count")
        k = self._draw(count)
        self.draws_emitted += count
        return k

    def _draw(self, count):
        raise NotImplementedError


class SyntheticSource(BernoulliSource):
    """Seeded Ber(p) source backed by numpy's PCG64.

    Parameters
    ----------
    p : float
        Success probability in [0, 1].
    seed : int
        64-bit seed.
    stream : tuple of int, optional
        Substream key; sources with different keys are statistically
        independent. Used to give each replication or worker its own stream.
    """

    kind = "synthetic"

    def __init__(self, p, seed, stream=()):
        super().__init__()
        self.p = check_probability(p, "p")
        self.seed = check_seed(seed)
        self.stream = tuple(check_nonnegative_int(s, "stream key") for s in stream)
        seq = np.random.SeedSequence(self.seed, spawn_key=self.stream)
        self._rng = np.random.Generator(np.random.PCG64(seq))
        self._buf = None

    def spawn(self, index):
        """Fresh source with the same p on substream ``stream + (index,)``."""
        return SyntheticSource(self.p, self.seed, self.stream + (index,))

    def _draw(self, count):
        size = min(count, _CHUNK)
        if self._buf is None or self._buf.size < size:
            self._buf = np.empty(size)
        k = 0
        remaining = count
        while remaining:
            m = min(remaining, _CHUNK)
            buf = self._buf[:m]
            self._rng.random(out=buf)
            k += int(np.count_nonzero(buf < self.p))
            remaining -= m
        return k

    def __repr__(self):
        return f"SyntheticSource(p={self.p!r}, seed={self.seed!r}, stream={self.stream!r})"


class StreamSource(BernoulliSource):
    """Bernoulli draws read from a byte stream of whitespace-separated 0/1 tokens.

    Any other token raises :class:`StreamParseError` with its byte offset.
    Running out of input raises :class:`StreamExhaustedError`.
    """

    kind = "external-stream"

    def __init__(self, stream, chunk_size=1 << 16):
        super().__init__()
        if isinstance(stream, (bytes, bytearray)):
            stream = io.BytesIO(bytes(stream))
        elif isinstance(stream, str):
            stream = io.BytesIO(stream.encode("ascii", errors="replace"))
        self._stream = stream
        self._chunk_size = check_positive_int(chunk_size, "chunk_size")
        self._values = np.empty(0, dtype=np.uint8)
        self._pos = 0
        self._offset = 0  # byte offset of the next unread chunk
        self._carry = b""  # trailing token byte awaiting its right delimiter
        self._eof = False

    @classmethod
    def from_array(cls, draws):
        """Wrap an in-memory sequence of 0/1 values."""
        from ._validation import check_binary_array

        src = cls(io.BytesIO(b""))
        src._values = check_binary_array(draws)
        src._eof = True
        return src

    def _available(self):
        return self._values.size - self._pos

    def _fill(self):
        raw = self._stream.read(self._chunk_size)
        if not raw:
            self._eof = True
            data, base = self._carry, self._offset - len(self._carry)
            self._carry = b""
            if data:
                self._append(self._parse(data, base, final=True))
            return
        if isinstance(raw, str):
            raw = raw.encode("ascii", errors="replace")
        data = self._carry + raw
        base = self._offset - len(self._carry)
        self._offset += len(raw)
        self._append(self._parse(data, base, final=False))

    def _append(self, vals):
        if vals.size:
            rest = self._values[self._pos:]
            self._values = np.concatenate([rest, vals])
            self._pos = 0

    def _parse(self, data, base, final):
        arr = np.frombuffer(data, dtype=np.uint8)
        is_ws = np.isin(arr, _WHITESPACE)
        token = ~is_ws
        # a trailing token byte might continue in the next chunk
        if not final and arr.size and token[-1]:
            self._carry = data[-1:]
            arr, is_ws, token = arr[:-1], is_ws[:-1], token[:-1]
        else:
            self._carry = b""
        idx = np.flatnonzero(token)
        if idx.size == 0:
            return np.empty(0, dtype=np.uint8)
        # reject multi-byte tokens, including one that continues into the carry
        follows = np.zeros(arr.size, dtype=bool)
        follows[:-1] = token[1:]
        if self._carry and arr.size:
            follows[-1] = True
        bad = token & (follows | ~np.isin(arr, (48, 49)))
        if bad.any():
            i = int(np.flatnonzero(bad)[0])
            j = i
            while j > 0 and token[j - 1]:
                j -= 1
            end = i
            while end < arr.size and token[end]:
                end += 1
            tok = bytes(arr[j:end]) + (self._carry if end == arr.size else b"")
            raise StreamParseError(base + j, tok.decode("ascii", errors="replace"))
        return arr[idx] - 48

    def _draw(self, count):
        while self._available() < count and not self._eof:
            self._fill()
        avail = self._available()
        if avail < count:
            k = int(self._values[self._pos:].sum())
            raise StreamExhaustedError(count, avail, k)
        vals = self._values[self._pos:self._pos + count]
        self._pos += count
        return int(vals.sum(dtype=np.int64))


def draw_batch(source, count):
    """Draw ``count`` values from ``source`` and return the number of successes."""
    return source.draw(count)


def achievable_epsilon(alpha, n):
    """Smallest tolerance the Hoeffding bound certifies with ``n`` draws at level ``alpha``."""
    alpha = check_finite_real(alpha, "alpha")
    return math.sqrt(math.log(2.0 / alpha) / (2.0 * n))
