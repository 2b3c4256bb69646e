"""Prime-field arithmetic and dense univariate polynomials over Z_p.

Field elements are plain ints in [0, p).  Polynomials are plain lists of
ints, index i holding the coefficient of y**i; the zero polynomial is the
empty list (trailing zeros are tolerated and stripped by normalize()).
Everything here is a pure function of its inputs, so instances are safe to
share between threads.
"""

from __future__ import annotations

from typing import Optional, Sequence

#: Default modulus: the Mersenne prime 2**61 - 1.  Large enough that the
#: false-zero probability of every randomized test in this package is
#: below ~1e-15 at the sizes we handle, yet products of two residues stay
#: well inside native big-int fast paths.
MERSENNE61 = (1 << 61) - 1


class ZeroInverse(ZeroDivisionError):
    """Multiplicative inverse of zero requested."""


class DuplicateNode(ValueError):
    """Interpolation nodes are not pairwise distinct."""


class PrimeField:
    """Arithmetic modulo a prime p, plus dense polynomial helpers."""

    __slots__ = ("p",)

    def __init__(self, p: int = MERSENNE61):
        if p < 2 or pow(2, p, p) != 2:
            raise ValueError(f"modulus {p} fails the base-2 Fermat test")
        self.p = p

    def __repr__(self) -> str:
        return f"PrimeField({self.p})"

    def __eq__(self, other: object) -> bool:
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self) -> int:
        return hash(("PrimeField", self.p))

    # -- scalar operations --------------------------------------------------

    def add(self, a: int, b: int) -> int:
        return (a + b) % self.p

    def sub(self, a: int, b: int) -> int:
        return (a - b) % self.p

    def mul(self, a: int, b: int) -> int:
        return (a * b) % self.p

    def neg(self, a: int) -> int:
        return (-a) % self.p

    def inv(self, a: int) -> int:
        """Multiplicative inverse via a**(p-2); branch-free op count."""
        a %= self.p
        if a == 0:
            raise ZeroInverse("0 has no multiplicative inverse")
        return pow(a, self.p - 2, self.p)

    def div(self, a: int, b: int) -> int:
        return (a * self.inv(b)) % self.p

    # -- polynomial operations ----------------------------------------------

    def normalize(self, q: Sequence[int]) -> list[int]:
        """Reduce coefficients mod p and strip trailing zeros."""
        out = [c % self.p for c in q]
        while out and out[-1] == 0:
            out.pop()
        return out

    def degree(self, q: Sequence[int]) -> Optional[int]:
        """Degree of q, or None for the zero polynomial."""
        for i in range(len(q) - 1, -1, -1):
            if q[i] % self.p:
                return i
        return None

    def min_degree(self, q: Sequence[int]) -> Optional[int]:
        """Lowest index with a nonzero coefficient, or None if q == 0."""
        for i, c in enumerate(q):
            if c % self.p:
                return i
        return None

    def poly_eval(self, q: Sequence[int], y0: int) -> int:
        """Horner evaluation of q at y0."""
        acc = 0
        p = self.p
        for c in reversed(q):
            acc = (acc * y0 + c) % p
        return acc

    def poly_add(self, a: Sequence[int], b: Sequence[int]) -> list[int]:
        p = self.p
        if len(a) < len(b):
            a, b = b, a
        out = [c % p for c in a]
        for i, c in enumerate(b):
            out[i] = (out[i] + c) % p
        return out

    def poly_sub(self, a: Sequence[int], b: Sequence[int]) -> list[int]:
        p = self.p
        out = [c % p for c in a]
        if len(out) < len(b):
            out.extend([0] * (len(b) - len(out)))
        for i, c in enumerate(b):
            out[i] = (out[i] - c) % p
        return out

    def poly_mul(self, a: Sequence[int], b: Sequence[int]) -> list[int]:
        """Schoolbook product; all degrees here are desk-scale."""
        if not a or not b:
            return []
        p = self.p
        out = [0] * (len(a) + len(b) - 1)
        for i, ca in enumerate(a):
            if ca % p == 0:
                continue
            for j, cb in enumerate(b):
                out[i + j] = (out[i + j] + ca * cb) % p
        return out

    def poly_scale(self, q: Sequence[int], c: int) -> list[int]:
        p = self.p
        return [(x * c) % p for x in q]

    def lagrange_basis(self, xs: Sequence[int]) -> list[list[int]]:
        """Coefficient vectors of the Lagrange basis for the nodes xs.

        basis[k] is the polynomial that is 1 at xs[k] and 0 at the other
        nodes, as a dense list of len(xs) coefficients.  Built by dividing
        the master polynomial prod(y - x_j) back out node by node.
        """
        p = self.p
        nodes = [x % p for x in xs]
        if len(set(nodes)) != len(nodes):
            raise DuplicateNode("interpolation nodes must be distinct")
        m = len(nodes)
        master = [1]
        for x in nodes:
            master = [(master[i - 1] if i > 0 else 0) - x * (master[i] if i < len(master) else 0)
                      for i in range(len(master) + 1)]
            master = [c % p for c in master]
        basis: list[list[int]] = []
        for k, x in enumerate(nodes):
            # synthetic division of master by (y - x)
            quot = [0] * m
            carry = master[m]
            for i in range(m - 1, -1, -1):
                quot[i] = carry
                carry = (master[i] + carry * x) % p
            denom = self.poly_eval(quot, x)
            scale = self.inv(denom)
            basis.append([(c * scale) % p for c in quot])
        return basis

    def interpolate(self, xs: Sequence[int], ys: Sequence[int]) -> list[int]:
        """Unique polynomial of degree < len(xs) through the given points."""
        if len(xs) != len(ys):
            raise ValueError("xs and ys must have equal length")
        p = self.p
        out = [0] * len(xs)
        for bk, y in zip(self.lagrange_basis(xs), ys):
            if y % p == 0:
                continue
            for i, c in enumerate(bk):
                out[i] = (out[i] + c * y) % p
        return self.normalize(out)

    def prefix_sum_coeff(self, q: Sequence[int], c: int) -> int:
        """Sum of the coefficients of y**0 .. y**c in q.

        Equals the coefficient of y**c in q * (1 + y + ... + y**L) for any
        L >= c, which is how callers fold "some term of degree <= c is
        nonzero" into a single coefficient query.
        """
        if c < 0:
            raise ValueError("degree must be nonnegative")
        return sum(q[: c + 1]) % self.p
