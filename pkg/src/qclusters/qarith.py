"""Exact Gaussian binomial arithmetic, numeric and as polynomials in q.

All values are exact Python integers; every division in the telescoping
product is checked to be remainder-free.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import NamedTuple

from .errors import BadArgs


def gauss_binom(n: int, k: int, q: int) -> int:
    """Number of k-dimensional subspaces of an n-dimensional space over GF(q).

    Computed by the telescoping product prod_{j<k} (q^(n-j)-1)/(q^(j+1)-1),
    dividing exactly at each step so intermediates stay small.
    """
    if n < 0 or k < 0 or k > n:
        raise BadArgs(f"need 0 <= k <= n, got n={n}, k={k}")
    if q < 2:
        raise BadArgs(f"need q >= 2, got q={q}")
    if k > n - k:
        k = n - k
    value = 1
    for j in range(k):
        value, rem = divmod(value * (q ** (n - j) - 1), q ** (j + 1) - 1)
        if rem:
            raise AssertionError("Gaussian binomial division was not exact")
    return value


@dataclass(frozen=True)
class QPoly:
    """Polynomial in q with integer coefficients, dense, trailing zeros trimmed."""

    coeffs: tuple[int, ...]

    def __post_init__(self) -> None:
        c = self.coeffs
        end = len(c)
        while end > 0 and c[end - 1] == 0:
            end -= 1
        if end != len(c):
            object.__setattr__(self, "coeffs", c[:end])

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def __add__(self, other: "QPoly") -> "QPoly":
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, v in enumerate(b):
            out[i] += v
        return QPoly(tuple(out))

    def __mul__(self, other: "QPoly") -> "QPoly":
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return QPoly(())
        out = [0] * (len(a) + len(b) - 1)
        for i, av in enumerate(a):
            if av:
                for j, bv in enumerate(b):
                    out[i + j] += av * bv
        return QPoly(tuple(out))

    def shift(self, s: int) -> "QPoly":
        """Multiply by q^s."""
        if not self.coeffs:
            return self
        return QPoly((0,) * s + self.coeffs)

    def __call__(self, q: int) -> int:
        value = 0
        for c in reversed(self.coeffs):
            value = value * q + c
        return value


QPOLY_ZERO = QPoly(())
QPOLY_ONE = QPoly((1,))


@lru_cache(maxsize=None)
def gauss_binom_poly(n: int, k: int) -> QPoly:
    """Gaussian binomial as a polynomial in q, via the q-Pascal recurrence.

    gbp(n, k) = q^(n-k) * gbp(n-1, k-1) + gbp(n-1, k).
    """
    if n < 0 or k < 0 or k > n:
        raise BadArgs(f"need 0 <= k <= n, got n={n}, k={k}")
    if k == 0 or k == n:
        return QPOLY_ONE
    return gauss_binom_poly(n - 1, k - 1).shift(n - k) + gauss_binom_poly(n - 1, k)


def star_layer_size(n: int, k: int, i: int, q: int) -> int:
    """Members of a full star whose intersection with a fixed member has dimension i.

    Evaluates q^((k-i)^2) * [k-1, i-1]_q * [n-k, k-i]_q exactly as written.
    """
    if not 1 <= i <= k:
        raise BadArgs(f"layer index must satisfy 1 <= i <= k, got i={i}, k={k}")
    return (
        q ** ((k - i) ** 2)
        * gauss_binom(k - 1, i - 1, q)
        * gauss_binom(n - k, k - i, q)
    )


class StarIdentity(NamedTuple):
    holds: bool
    layer_sum: int
    star_size: int


def verify_star_identity(n: int, k: int, q: int) -> StarIdentity:
    """Check that the star layer sizes sum to the full star count [n-1, k-1]_q."""
    if not 1 <= k <= n / 2:
        raise BadArgs(f"need 1 <= k <= n/2, got n={n}, k={k}")
    layer_sum = sum(star_layer_size(n, k, i, q) for i in range(1, k + 1))
    star_size = gauss_binom(n - 1, k - 1, q)
    return StarIdentity(layer_sum == star_size, layer_sum, star_size)


def verify_pascal(n: int, k: int) -> bool:
    """Symbolic q-Pascal recurrence and symmetry for [n, k]_q.

    Checks [n,k] = q^(n-k) [n-1,k-1] + [n-1,k] and [n,k] = [n,n-k] as exact
    polynomial identities.
    """
    if not 1 <= k <= n - 1:
        raise BadArgs(f"need 1 <= k <= n-1, got n={n}, k={k}")
    lhs = gauss_binom_poly(n, k)
    rhs = gauss_binom_poly(n - 1, k - 1).shift(n - k) + gauss_binom_poly(n - 1, k)
    return lhs == rhs and lhs == gauss_binom_poly(n, n - k)
