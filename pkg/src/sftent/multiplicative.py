"""Binary sequences constrained along geometric fibers i, i*q, i*q^2, ...

The constraint x_k * x_{qk} = 0 splits {1..n} into independent fibers, one per
integer i not divisible by q; each fiber of length L contributes a factor
a_L, where a is the Fibonacci-style count of binary strings with no adjacent
ones (a_1 = 2, a_2 = 3).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

from .errors import BudgetExceeded

_fib_cache = [1, 2, 3]  # a_0 = 1 (empty string), a_1 = 2, a_2 = 3


def fibonacci(k: int) -> int:
    """Count of binary strings of length k without adjacent ones (a_1=2, a_2=3)."""
    if k < 0:
        raise ValueError("index must be >= 0")
    while len(_fib_cache) <= k:
        _fib_cache.append(_fib_cache[-1] + _fib_cache[-2])
    return _fib_cache[k]


class Fiber(NamedTuple):
    i: int        # fiber head, not divisible by q
    length: int   # number of elements i*q^j <= n


class SeriesValue(NamedTuple):
    value: float
    tail_bound: float


@dataclass(frozen=True)
class FiberDecomposition:
    q: int
    n: int
    fibers: tuple[Fiber, ...]

    def __post_init__(self):
        assert sum(f.length for f in self.fibers) == self.n


def fiber_decomposition(n: int, q: int) -> FiberDecomposition:
    """Partition {1..n} into fibers {i, i*q, i*q^2, ...} with q not dividing i."""
    if n < 1 or q < 2:
        raise ValueError("need n >= 1 and q >= 2")
    fibers = []
    for i in range(1, n + 1):
        if i % q == 0:
            continue
        length = 0
        m = i
        while m <= n:       # integer arithmetic only; no float logs
            m *= q
            length += 1
        fibers.append(Fiber(i, length))
    return FiberDecomposition(q, n, tuple(fibers))


def count_multiplicative(n: int, q: int) -> int:
    """Exact number of binary strings x_1..x_n with x_k * x_{qk} = 0."""
    value = 1
    for fiber in fiber_decomposition(n, q).fibers:
        value *= fibonacci(fiber.length)
    return value


def log_count_multiplicative(n: int, q: int) -> float:
    """log of the count, summed over fibers (no bigint materialisation)."""
    lengths: dict[int, int] = {}
    for fiber in fiber_decomposition(n, q).fibers:
        lengths[fiber.length] = lengths.get(fiber.length, 0) + 1
    return sum(mult * math.log(fibonacci(length)) for length, mult in lengths.items())


def count_multiplicative_bruteforce(n: int, q: int, budget: int = 2 ** 24) -> int:
    """Enumerate all binary strings and test the constraint directly."""
    if 2 ** n > budget:
        raise BudgetExceeded(f"2**{n} strings exceed budget {budget}")
    # positions are 1-based; check the pair (k, q*k) once x_{qk} is assigned
    pair_with = [0] * (n + 1)
    for k in range(1, n + 1):
        if k % q == 0 and k // q >= 1:
            pair_with[k] = k // q
    total = 0
    assign = [0] * (n + 1)

    def descend(k: int):
        nonlocal total
        if k > n:
            total += 1
            return
        for bit in (0, 1):
            if bit and pair_with[k] and assign[pair_with[k]]:
                continue
            assign[k] = bit
            descend(k + 1)
        assign[k] = 0

    descend(1)
    return total


def multiplicative_entropy_series(q: int, terms: int) -> SeriesValue:
    """Partial sum of (q-1)^2 * sum_k q^-(k+1) * log a_k, with a tail bound.

    The tail uses log a_k <= k log 2, giving the closed geometric-series bound
    (q-1)^2 log2 * x^(K+2) * ((K+1) - K x) / (1-x)^2 with x = 1/q.
    """
    if terms < 1:
        raise ValueError("need at least one term")
    if q < 2:
        raise ValueError("q must be >= 2")
    value = (q - 1) ** 2 * math.fsum(
        math.log(fibonacci(k)) / q ** (k + 1) for k in range(1, terms + 1)
    )
    x = 1.0 / q
    tail = (q - 1) ** 2 * math.log(2) * x ** (terms + 2) * ((terms + 1) - terms * x) / (1 - x) ** 2
    return SeriesValue(value, tail)
