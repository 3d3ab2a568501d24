"""Exact scalar fields: the rationals and prime fields GF(p).

Field elements are plain Python values owned by a :class:`Field`:
``fractions.Fraction`` for the rationals and ``int`` in ``[0, p)`` for
GF(p).  Keeping scalars unwrapped lets numpy hold them in arrays directly.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Any

from ..errors import MalformedInput

DEFAULT_PRIME = 32003


def is_prime(p: int) -> bool:
    """Deterministic primality test by trial division (fine below 2**40)."""
    if p < 2:
        return False
    if p % 2 == 0:
        return p == 2
    d = 3
    while d * d <= p:
        if p % d == 0:
            return False
        d += 2
    return True


@dataclass(frozen=True)
class Field:
    """Either QQ (``p is None``) or GF(p) for an odd prime ``p``."""

    p: int | None = None

    def __post_init__(self) -> None:
        if self.p is not None and (self.p == 2 or not is_prime(self.p)):
            raise MalformedInput(f"GF(p) requires an odd prime, got {self.p}")

    @classmethod
    def QQ(cls) -> Field:
        return cls(None)

    @classmethod
    def GF(cls, p: int = DEFAULT_PRIME) -> Field:
        return cls(int(p))

    @classmethod
    def parse(cls, text: str) -> Field:
        """Accept ``QQ``, ``GF(p)``, ``GFp:p`` or ``GF:p``."""
        t = text.strip()
        if t.upper() in ("QQ", "Q"):
            return cls.QQ()
        m = re.fullmatch(r"GF(?:\((\d+)\)|p?:(\d+))", t, flags=re.IGNORECASE)
        if not m:
            raise MalformedInput(f"unknown field specification {text!r}")
        return cls.GF(int(m.group(1) or m.group(2)))

    @property
    def is_rational(self) -> bool:
        return self.p is None

    @property
    def tag(self) -> str:
        return "QQ" if self.p is None else f"GF({self.p})"

    @property
    def characteristic(self) -> int:
        return 0 if self.p is None else self.p

    @property
    def zero(self) -> Any:
        return Fraction(0) if self.p is None else 0

    @property
    def one(self) -> Any:
        return Fraction(1) if self.p is None else 1

    def __call__(self, x: Any) -> Any:
        """Coerce an int, Fraction or decimal/rational string into the field."""
        if isinstance(x, str):
            try:
                x = Fraction(x.strip())
            except (ValueError, ZeroDivisionError) as exc:
                raise MalformedInput(f"bad scalar {x!r}") from exc
        if self.p is None:
            return Fraction(x)
        if isinstance(x, Fraction):
            den = x.denominator % self.p
            if den == 0:
                raise MalformedInput(f"{x} has no image in {self.tag}")
            return x.numerator * pow(den, -1, self.p) % self.p
        return int(x) % self.p

    def inv(self, x: Any) -> Any:
        if not x:
            raise ZeroDivisionError("inverse of zero")
        if self.p is None:
            return 1 / Fraction(x)
        return pow(int(x), -1, self.p)

    def neg(self, x: Any) -> Any:
        return -x if self.p is None else (-x) % self.p

    def format(self, x: Any) -> str:
        return str(Fraction(x)) if self.p is None else str(int(x))

    def __str__(self) -> str:
        return self.tag
