"""Integer sequences at which low-height polynomials cannot vanish, and the entry windows.

If ``a_1 > H`` and ``a_l >= 2H * a_{l-1}^d`` then no nonzero integer polynomial
of degree ``<= d`` and height ``<= H`` vanishes at ``(a_1, ..., a_N)``.  The
explicit mode builds the smallest such sequence; the symbolic mode describes
the double-exponential entry windows for an ``m x n`` matrix with ``N = mn``
as ``PowerExpr`` bounds, and checks how they chain.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import List, Optional, Tuple, Union

from .exactmath.poly import Polynomial, poly_eval
from .exactmath.powerexpr import PowerExpr, add, compare, mul, power

DEFAULT_DIGIT_CAP = 10 ** 6
DEFAULT_CHAIN_CAP = 8


class DigitCapExceeded(OverflowError):
    pass


class NonvanishingViolation(AssertionError):
    """A polynomial vanished on an admissible sequence.  This should be impossible."""


@dataclass(frozen=True)
class Window:
    """``low < a <= high`` (or ``low <= a`` when ``low_strict`` is false); ``high=None`` is unbounded."""

    low: PowerExpr
    high: Optional[PowerExpr]
    low_strict: bool = True

    def check(self, a) -> Optional[str]:
        """``None`` if ``a`` lies in the window, else ``"lower"`` or ``"upper"``."""
        c = compare(a, self.low)
        if c < 0 or (c == 0 and self.low_strict):
            return "lower"
        if self.high is not None and compare(a, self.high) > 0:
            return "upper"
        return None

    def nonempty(self) -> bool:
        if self.high is None:
            return True
        c = compare(self.low, self.high)
        return c < 0 or (c == 0 and not self.low_strict)

    def to_json(self) -> dict:
        return {
            "low": self.low.to_json(),
            "high": None if self.high is None else self.high.to_json(),
            "low_strict": self.low_strict,
        }

    @classmethod
    def from_json(cls, data: dict) -> "Window":
        high = data.get("high")
        return cls(PowerExpr.from_json(data["low"]),
                   None if high is None else PowerExpr.from_json(high),
                   bool(data.get("low_strict", True)))


@dataclass(frozen=True)
class WitnessSequence:
    d: int
    H: Union[int, PowerExpr]
    N: int
    values: Optional[Tuple[int, ...]] = None
    windows: Optional[Tuple[Window, ...]] = None

    @property
    def explicit(self) -> bool:
        return self.values is not None

    def admissible(self) -> bool:
        """Re-validate ``a_1 > H`` and ``a_l >= 2H a_{l-1}^d`` on explicit values."""
        if not self.explicit:
            raise ValueError("only explicit sequences can be validated entry by entry")
        a = self.values
        if len(a) != self.N or a[0] <= self.H:
            return False
        return all(a[i] >= 2 * self.H * a[i - 1] ** self.d for i in range(1, self.N))

    def to_json(self) -> dict:
        out = {"d": self.d, "N": self.N,
               "H": self.H.to_json() if isinstance(self.H, PowerExpr) else str(self.H)}
        if self.values is not None:
            out["values"] = [str(v) for v in self.values]
        if self.windows is not None:
            out["windows"] = [w.to_json() for w in self.windows]
        return out


def _digits_at_least(bits: float) -> float:
    return bits * math.log10(2)


def build_sequence(d: int, H: int, N: int, digit_cap: int = DEFAULT_DIGIT_CAP) -> WitnessSequence:
    """Smallest admissible sequence: ``a_1 = H + 1``, ``a_l = 2H a_{l-1}^d``; ``d`` padded to 3."""
    if H < 1 or N < 1:
        raise ValueError("need H >= 1 and N >= 1")
    d = max(d, 3)
    vals = [H + 1]
    for _ in range(1, N):
        prev = vals[-1]
        # bit length of 2H*prev^d is at least d*(bits(prev)-1) + bits(2H)
        est = _digits_at_least(d * (prev.bit_length() - 1) + (2 * H).bit_length() - 1)
        if est > digit_cap:
            raise DigitCapExceeded(f"a_{len(vals) + 1} has more than {digit_cap} digits")
        vals.append(2 * H * prev ** d)
    for i, v in enumerate(vals, start=1):
        if len(str(v)) > digit_cap:
            raise DigitCapExceeded(f"a_{i} has more than {digit_cap} digits")
    seq = WitnessSequence(d, H, N, tuple(vals))
    assert seq.admissible()
    return seq


def check_nonvanish(p: Polynomial, seq: WitnessSequence) -> int:
    """Value of ``p`` at the sequence; raises ``NonvanishingViolation`` if it is zero."""
    if not seq.explicit:
        raise ValueError("check_nonvanish needs an explicit sequence")
    if p.is_zero():
        raise ValueError("p must be nonzero")
    if p.nvars != seq.N:
        raise ValueError(f"p has {p.nvars} variables, sequence has {seq.N} values")
    if p.degree > seq.d:
        raise ValueError(f"deg p = {p.degree} exceeds d = {seq.d}")
    if p.height > seq.H:
        raise ValueError(f"H(p) = {p.height} exceeds H = {seq.H}")
    if not seq.admissible():
        raise ValueError("sequence violates the growth condition")
    v = poly_eval(p, seq.values)
    if v == 0:
        raise NonvanishingViolation(f"{p} vanishes at admissible {seq.values}")
    return v


# -- symbolic windows ------------------------------------------------------

def chain_parameters(N: int) -> Tuple[int, PowerExpr]:
    """``(d, H) = (N^(N-1), N^(2 N^(N^2)))``, the degree and height bounds for topology maps."""
    return N ** (N - 1), power(N, mul(2, power(N, N * N)))


def theorem1_windows(m: int, n: int) -> WitnessSequence:
    """Entry windows for ``a_1..a_N`` with ``N = mn``.

    ``N^(2N^(N^2)) < a_1 <= 2 N^(2N^(N^2))``;
    ``N^(2l N^(N^2+lN-l)) < a_l <= (2N)^(2l N^(N^2+lN-l))`` for ``1 < l < N``;
    ``a_N >= (2N)^(2 N^(2N^2-N+1))``.
    """
    if m < 1 or n < 1:
        raise ValueError("need m, n >= 1")
    N = m * n
    if N < 2:
        raise ValueError("need N = mn >= 2")
    d, H = chain_parameters(N)
    wins = [Window(H, mul(2, H))]
    for l in range(2, N):
        e = mul(2 * l, power(N, N * N + l * N - l))
        wins.append(Window(power(N, e), power(2 * N, e)))
    wins.append(Window(power(2 * N, mul(2, power(N, 2 * N * N - N + 1))), None, low_strict=False))
    return WitnessSequence(d, H, N, windows=tuple(wins))


def concluding_windows(N: int) -> WitnessSequence:
    """Windows ``(2H)^(l d^l) < a_l <= (2H)^(l d^l + 1)`` (``l < N``), ``a_N >= (2H)^(N d^N)``, ``a_1`` in ``(H, 2H]``."""
    if N < 2:
        raise ValueError("need N >= 2")
    d, H = chain_parameters(N)
    two_h = mul(2, H)
    wins = [Window(H, two_h)]
    for l in range(2, N):
        wins.append(Window(power(two_h, l * d ** l), power(two_h, l * d ** l + 1)))
    wins.append(Window(power(two_h, N * d ** N), None, low_strict=False))
    return WitnessSequence(d, H, N, windows=tuple(wins))


def canonical_entries(N: int) -> List[PowerExpr]:
    """One point per window: ``2H``, then ``(2H)^(l d^l + 1)``, and the least admissible ``a_N``."""
    d, H = chain_parameters(N)
    two_h = mul(2, H)
    out = [two_h]
    for l in range(2, N):
        out.append(power(two_h, l * d ** l + 1))
    out.append(theorem1_windows(1, N).windows[-1].low)
    return out


def growth_holds(prev, nxt, d: int, H) -> bool:
    """``nxt >= 2H * prev^d`` exactly."""
    return compare(nxt, mul(2, H, power(prev, d))) >= 0


@dataclass
class ChainCheck:
    name: str
    holds: bool
    detail: str = ""


@dataclass
class ChainReport:
    N: int
    d: int
    H: PowerExpr
    checks: List[ChainCheck] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.holds for c in self.checks)

    def failures(self) -> List[ChainCheck]:
        return [c for c in self.checks if not c.holds]

    def to_json(self) -> dict:
        return {
            "N": self.N, "d": self.d, "H": self.H.to_json(), "passed": self.passed,
            "checks": [{"name": c.name, "holds": c.holds, "detail": c.detail} for c in self.checks],
        }


def _lowest_member_ge(w: Window, bound) -> bool:
    # every a in w satisfies a >= bound
    c = compare(w.low, bound)
    if c >= 0:
        return True
    # a > low with integers means a >= low + 1
    return w.low_strict and compare(add(w.low, 1), bound) >= 0


def verify_concluding_chain(N: int, cap: int = DEFAULT_CHAIN_CAP) -> ChainReport:
    """Check that entries inside the windows satisfy the growth hypotheses.

    Three groups of checks, all exact:

    * ``base``: the ``a_1`` window is exactly ``(H, 2H]``;
    * ``window-chain l``: every ``a_{l+1}`` in its window is ``>= 2H * high_l^d``,
      for the theorem windows (what the conclusion needs);
    * ``inner-chain l`` and ``inner-in-window l``: the same growth for the
      ``(2H)^(l d^l)`` windows, and that those lie inside the theorem windows
      (for ``l = N`` the theorem's lower bound is the larger one, so the check
      is that its window lies inside the inner one).
    """
    if not 2 <= N <= cap:
        raise ValueError(f"N must be in [2, {cap}]")
    d, H = chain_parameters(N)
    rep = ChainReport(N, d, H)
    T = theorem1_windows(1, N).windows
    S = concluding_windows(N).windows
    two_h = mul(2, H)

    base = compare(T[0].low, H) == 0 and compare(T[0].high, two_h) == 0 and T[0].low_strict
    rep.checks.append(ChainCheck("base", base, "a_1 window equals (H, 2H]"))

    for l in range(1, N):
        need = mul(2, H, power(T[l - 1].high, d))
        ok = _lowest_member_ge(T[l], need)
        rep.checks.append(ChainCheck(
            f"window-chain {l}", ok,
            f"low_{l + 1} {'>=' if ok else '<'} 2H*high_{l}^d" + ("" if ok else " (first failing inequality)")))

    for l in range(1, N):
        need = mul(2, H, power(S[l - 1].high, d))
        ok = _lowest_member_ge(S[l], need)
        rep.checks.append(ChainCheck(f"inner-chain {l}", ok, f"(2H)-window {l + 1} vs 2H*high_{l}^d"))

    for l in range(1, N + 1):
        s, t = S[l - 1], T[l - 1]
        if l < N:
            ok = compare(s.low, t.low) >= 0 and compare(s.high, t.high) <= 0
            detail = "inner window inside theorem window"
        else:
            ok = compare(t.low, s.low) >= 0
            detail = "theorem lower bound for a_N is at least the inner one"
        rep.checks.append(ChainCheck(f"inner-in-window {l}", ok, detail))
    return rep


def window_exponent_table(N: int) -> List[Tuple[int, str, str]]:
    """Human-readable bounds per index, for reports."""
    T = theorem1_windows(1, N).windows
    return [(l, str(w.low), "inf" if w.high is None else str(w.high)) for l, w in enumerate(T, start=1)]

