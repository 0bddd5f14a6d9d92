"""Symmetric 2x2 integer matrices, rank-one terms and factorizations."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from typing import Any, Iterable, Literal

__all__ = [
    "Factorization",
    "Method",
    "NegativeEntryError",
    "NotDoublyNonnegativeError",
    "RankOneTerm",
    "SymMat2",
    "det2",
    "is_doubly_nonnegative",
    "require_dnn",
    "subtract_term",
    "sum_terms",
    "verify_factorization",
]

Method = Literal["paper-algorithm", "oracle", "external"]


class NotDoublyNonnegativeError(ValueError):
    """Raised when an operation needs a doubly nonnegative matrix and did not get one."""

    def __init__(self, matrix: SymMat2, reason: str):
        self.matrix = matrix
        self.reason = reason
        super().__init__(f"{matrix.text()} is not doubly nonnegative: {reason}")


class NegativeEntryError(ValueError):
    """Raised by subtract_term when an entry of the difference would go negative."""

    def __init__(self, entry: str, value: int):
        self.entry = entry
        self.value = value
        super().__init__(f"entry {entry} would become {value}")


@dataclass(frozen=True, slots=True)
class SymMat2:
    """The matrix [[a, b], [b, c]]."""

    a: int
    b: int
    c: int

    def __post_init__(self) -> None:
        for name in ("a", "b", "c"):
            if not isinstance(getattr(self, name), int):
                raise TypeError(f"entry {name} must be an int")

    @classmethod
    def parse(cls, text: str) -> SymMat2:
        parts = text.split()
        if len(parts) != 3:
            raise ValueError(f"expected three integers 'a b c', got {len(parts)} tokens")
        return cls(*(int(p) for p in parts))

    def transpose(self) -> SymMat2:
        """Swap the two diagonal entries (conjugation by the coordinate swap)."""
        return SymMat2(self.c, self.b, self.a)

    def is_zero(self) -> bool:
        return self.a == 0 and self.b == 0 and self.c == 0

    def trace(self) -> int:
        return self.a + self.c

    def text(self) -> str:
        return f"{self.a} {self.b} {self.c}"

    def to_dict(self) -> dict[str, int]:
        return {"a": self.a, "b": self.b, "c": self.c}

    def __add__(self, other: SymMat2) -> SymMat2:
        return SymMat2(self.a + other.a, self.b + other.b, self.c + other.c)

    def __str__(self) -> str:
        return f"[[{self.a}, {self.b}], [{self.b}, {self.c}]]"


@dataclass(frozen=True, slots=True, order=True)
class RankOneTerm:
    """The outer product (k, t)(k, t)^T."""

    k: int
    t: int

    def __post_init__(self) -> None:
        if self.k < 0 or self.t < 0:
            raise ValueError(f"term ({self.k}, {self.t}) has a negative coordinate")

    def matrix(self) -> SymMat2:
        return SymMat2(self.k * self.k, self.k * self.t, self.t * self.t)

    def swapped(self) -> RankOneTerm:
        return RankOneTerm(self.t, self.k)

    def is_zero(self) -> bool:
        return self.k == 0 and self.t == 0

    def __iter__(self):
        yield self.k
        yield self.t

    def __str__(self) -> str:
        return f"({self.k}, {self.t})"


def sum_terms(terms: Iterable[RankOneTerm]) -> SymMat2:
    a = b = c = 0
    for r in terms:
        a += r.k * r.k
        b += r.k * r.t
        c += r.t * r.t
    return SymMat2(a, b, c)


@dataclass(frozen=True)
class Factorization:
    source: SymMat2
    terms: tuple[RankOneTerm, ...]
    method: Method = "paper-algorithm"
    trace: Any = field(default=None, compare=False, repr=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "terms", tuple(self.terms))
        for r in self.terms:
            if r.is_zero():
                raise ValueError("a factorization may not contain the zero term (0, 0)")

    def __len__(self) -> int:
        return len(self.terms)

    def multiset(self) -> Counter[RankOneTerm]:
        return Counter(self.terms)

    def residual(self) -> SymMat2:
        """source minus the sum of the terms (entries may be negative)."""
        s = sum_terms(self.terms)
        return SymMat2(self.source.a - s.a, self.source.b - s.b, self.source.c - s.c)

    def to_dict(self) -> dict[str, Any]:
        return {
            "matrix": self.source.to_dict(),
            "method": self.method,
            "terms": [[r.k, r.t] for r in self.terms],
        }

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> Factorization:
        m = data["matrix"]
        return cls(
            SymMat2(int(m["a"]), int(m["b"]), int(m["c"])),
            tuple(RankOneTerm(int(k), int(t)) for k, t in data["terms"]),
            data.get("method", "external"),
        )


def det2(m: SymMat2) -> int:
    return m.a * m.c - m.b * m.b


def dnn_violation(m: SymMat2) -> str | None:
    """Describe why m is not doubly nonnegative, or None if it is."""
    for name in ("a", "b", "c"):
        if getattr(m, name) < 0:
            return f"negative entry {name} = {getattr(m, name)}"
    d = det2(m)
    if d < 0:
        return f"negative determinant {d}"
    return None


def is_doubly_nonnegative(m: SymMat2) -> bool:
    # with a, c >= 0 the trace is nonnegative, so det >= 0 is all PSD needs
    return dnn_violation(m) is None


def require_dnn(m: SymMat2) -> None:
    reason = dnn_violation(m)
    if reason is not None:
        raise NotDoublyNonnegativeError(m, reason)


def subtract_term(m: SymMat2, r: RankOneTerm) -> SymMat2:
    """m - r r^T, provided every entry stays nonnegative.

    The determinant of the result is not checked.
    """
    a = m.a - r.k * r.k
    if a < 0:
        raise NegativeEntryError("a", a)
    b = m.b - r.k * r.t
    if b < 0:
        raise NegativeEntryError("b", b)
    c = m.c - r.t * r.t
    if c < 0:
        raise NegativeEntryError("c", c)
    return SymMat2(a, b, c)


def verify_factorization(f: Factorization) -> bool:
    return sum_terms(f.terms) == f.source
