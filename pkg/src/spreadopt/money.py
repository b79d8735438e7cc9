"""Exact fixed-point currency with six decimal places.

Budgets and edge prices are stored as integer micro-units so that sums,
comparisons and budget feasibility checks are exact regardless of the
number of terms or their order.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

SCALE = 10**6


@dataclass(frozen=True, order=True)
class Money:
    """An exact amount, in millionths of a unit."""

    micros: int

    def __post_init__(self) -> None:
        if not isinstance(self.micros, int) or isinstance(self.micros, bool):
            raise TypeError(f"micros must be an int, got {type(self.micros).__name__}")

    @classmethod
    def from_decimal(cls, text: str) -> "Money":
        """Parse a decimal string, rejecting anything finer than six places."""
        s = text.strip()
        if not s:
            raise ValueError("empty amount")
        sign = 1
        if s[0] in "+-":
            sign = -1 if s[0] == "-" else 1
            s = s[1:]
        if not s:
            raise ValueError(f"invalid amount {text!r}")
        whole, _, frac = s.partition(".")
        if whole == "" and frac == "":
            raise ValueError(f"invalid amount {text!r}")
        whole = whole or "0"
        if not whole.isdigit() or (frac != "" and not frac.isdigit()):
            raise ValueError(f"invalid amount {text!r}")
        if len(frac) > 6:
            raise ValueError(
                f"amount {text!r} has more than six decimal places"
            )
        frac = frac.ljust(6, "0")
        return cls(sign * (int(whole) * SCALE + int(frac)))

    @classmethod
    def from_float(cls, value: float) -> "Money":
        """Quantize a float to the nearest micro-unit."""
        return cls(int(round(value * SCALE)))

    def to_float(self) -> float:
        return self.micros / SCALE

    def __add__(self, other: "Money") -> "Money":
        return Money(self.micros + other.micros)

    def __sub__(self, other: "Money") -> "Money":
        return Money(self.micros - other.micros)

    def __neg__(self) -> "Money":
        return Money(-self.micros)

    def __mul__(self, k: int) -> "Money":
        if not isinstance(k, int):
            raise TypeError("Money can only be scaled by an int")
        return Money(self.micros * k)

    __rmul__ = __mul__

    def __str__(self) -> str:
        sign = "-" if self.micros < 0 else ""
        whole, frac = divmod(abs(self.micros), SCALE)
        return f"{sign}{whole}.{frac:06d}"

    def __repr__(self) -> str:
        return f"Money({str(self)})"


ZERO = Money(0)
ONE = Money(SCALE)
TICK = Money(1)


def money_sum(amounts: Iterable[Money]) -> Money:
    """Exact sum of amounts; order never matters."""
    return Money(sum(a.micros for a in amounts))
