"""Exact arithmetic in the prime field GF(p) for odd p.

Field elements are plain ints reduced into [0, p).  A ``PrimeField`` carries
the modulus plus the derived data every other module needs: inverses, the
quadratic character and the canonical non-square ``tau`` (the smallest
positive non-residue, fixed so that every canonical form and serialized
table is deterministic).
"""

from __future__ import annotations

MAX_PRIME = 97


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


class PrimeField:
    """GF(p) for an odd prime p with 3 <= p <= 97."""

    def __init__(self, p: int):
        if not is_prime(p):
            raise ValueError(f"p = {p} is not prime")
        if p == 2:
            raise ValueError("p = 2 is not supported; p must be odd")
        if p > MAX_PRIME:
            raise ValueError(f"p = {p} exceeds the supported cap {MAX_PRIME}")
        self.p = p
        self._squares = frozenset((x * x) % p for x in range(1, p))

    def __repr__(self) -> str:
        return f"PrimeField({self.p})"

    def __eq__(self, other: object) -> bool:
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self) -> int:
        return hash(("PrimeField", self.p))

    def reduce(self, a: int) -> int:
        return a % self.p

    def add(self, a: int, b: int) -> int:
        return (a + b) % self.p

    def sub(self, a: int, b: int) -> int:
        return (a - b) % self.p

    def mul(self, a: int, b: int) -> int:
        return (a * b) % self.p

    def neg(self, a: int) -> int:
        return (-a) % self.p

    def inv(self, a: int) -> int:
        """Multiplicative inverse; raises ZeroDivisionError on 0."""
        a %= self.p
        if a == 0:
            raise ZeroDivisionError(f"0 has no inverse mod {self.p}")
        return pow(a, -1, self.p)

    def div(self, a: int, b: int) -> int:
        return (a * self.inv(b)) % self.p

    def half(self, a: int) -> int:
        # division by 2 is always defined since p is odd
        return (a * self.inv(2)) % self.p

    def is_square(self, a: int) -> bool:
        """True iff a is a square in GF(p); 0 counts as a square."""
        a %= self.p
        return a == 0 or a in self._squares

    def legendre(self, a: int) -> int:
        """Quadratic character: 0 on 0, +1 on squares, -1 on non-squares."""
        a %= self.p
        if a == 0:
            return 0
        return 1 if a in self._squares else -1

    @property
    def tau(self) -> int:
        """The canonical non-square: smallest positive non-residue mod p."""
        return self.canonical_nonsquare()

    def canonical_nonsquare(self) -> int:
        for a in range(2, self.p):
            if a not in self._squares:
                return a
        raise AssertionError("every odd prime field has a non-square")

    def units(self) -> range:
        return range(1, self.p)

    def elements(self) -> range:
        return range(self.p)
