"""Independent oracles the library is checked against.

Everything here is deliberately written without touching the library's
fast paths: direct O(n^2) transforms, trial-division primality, pure
enumeration loops, and arbitrary-precision products via mpmath.  Values
frozen below were produced by these functions at full size; the slower
oracles are re-run at reduced size inside the tests.
"""

from __future__ import annotations

import cmath
import math
from fractions import Fraction

import numpy as np

# --- frozen oracle outputs -------------------------------------------------

# twin_constant_highprec(10**7, dps=30); truncated product over primes < 1e7
C2_TRUNCATED_1E7 = 1.3203236394309110

# li2_highprec(10**6) via mpmath.quad at dps=25
LI2_1E6 = 6246.97573522187

# linear pair counts at n = 1e6, enumerated with an independent numpy sieve
PAIR_COUNTS_1E6 = {2: 8169, 4: 8144, 6: 16386, 12: 16378}

# twin count at n = 1e7, cross-checked against the published table value
PAIR_COUNT_TWIN_1E7 = 58980

# prime counts, cross-checked against the enumeration oracle below for
# small x and against a deterministic Miller-Rabin sample for large x
PI_VALUES = {10: 4, 100: 25, 1000: 168, 10**4: 1229, 10**5: 9592, 10**6: 78498}


# --- primality / factor oracles --------------------------------------------

def is_prime_naive(m: int) -> bool:
    if m < 2:
        return False
    d = 2
    while d * d <= m:
        if m % d == 0:
            return False
        d += 1
    return True


def phi_naive(m: int) -> int:
    return sum(1 for a in range(1, m + 1) if math.gcd(a, m) == 1)


def mobius_naive(m: int) -> int:
    if m == 1:
        return 1
    count = 0
    for p in range(2, m + 1):
        if m % p == 0:
            if m % (p * p) == 0:
                return 0
            count += 1
            while m % p == 0:
                m //= p
    return (-1) ** count


def coprime_pairs_loop(Q: int, two_k: int) -> int:
    return sum(
        1
        for a in range(Q)
        if math.gcd(a, Q) == 1 and math.gcd(a + two_k, Q) == 1
    )


def ramanujan_naive(q: int, r: int) -> complex:
    if q == 1:
        return complex(1.0)
    total = 0j
    for b in range(1, q + 1):
        if math.gcd(b, q) == 1:
            total += cmath.exp(-2j * cmath.pi * b * r / q)
    return total


# --- prime-pair enumeration oracles ----------------------------------------

def primes_upto_naive(n: int) -> list[int]:
    return [m for m in range(2, n + 1) if is_prime_naive(m)]


def pair_count_linear_naive(n: int, two_k: int) -> int:
    return sum(1 for p in primes_upto_naive(n) if is_prime_naive(p + two_k))


def pair_count_circular_naive(n: int, two_k: int) -> int:
    count = 0
    for x in range(1, n + 1):
        y = (x + two_k - 1) % n + 1
        if is_prime_naive(x) and is_prime_naive(y):
            count += 1
    return count


def sieve_numpy_independent(n: int) -> np.ndarray:
    """Plain (unsegmented) bool sieve used to cross-check the library's
    segmented builder; index i holds primality of i."""
    mask = np.zeros(n + 1, dtype=bool)
    mask[2:] = True
    for p in range(2, math.isqrt(n) + 1):
        if mask[p]:
            mask[p * p :: p] = False
    return mask


# --- transforms -------------------------------------------------------------

def dft_direct(values: np.ndarray) -> np.ndarray:
    """O(n^2) evaluation of sum_x f(x) exp(-2*pi*i*xi*x/n) in residue
    layout, with exactly reduced integer angles."""
    v = np.asarray(values, dtype=np.complex128)
    n = v.shape[0]
    idx = np.arange(n, dtype=np.int64)
    kernel = np.exp((-2j * np.pi / n) * ((idx[:, None] * idx[None, :]) % n))
    return kernel @ v


def cyclic_convolution_naive(f: np.ndarray, g: np.ndarray) -> np.ndarray:
    n = len(f)
    out = np.zeros(n, dtype=np.complex128)
    for x in range(n):
        out[x] = sum(f[y] * g[(x - y) % n] for y in range(n))
    return out


# --- high-precision constants ----------------------------------------------

def twin_constant_highprec(cutoff: int, dps: int = 30):
    """2 * prod_{2 < p < cutoff} p(p-2)/(p-1)^2 via exact rational chunks
    promoted to mpmath floats; the reference for hl_constant(2, cutoff)."""
    import mpmath as mp

    mask = sieve_numpy_independent(cutoff - 1)
    odd_primes = np.flatnonzero(mask)[1:]
    with mp.workdps(dps):
        acc = mp.mpf(2)
        for chunk in np.array_split(odd_primes, max(1, len(odd_primes) // 4000)):
            num = 1
            den = 1
            for p in chunk.tolist():
                num *= p * (p - 2)
                den *= (p - 1) * (p - 1)
            acc *= mp.mpf(num) / mp.mpf(den)
        return float(acc)


def li2_highprec(n: int) -> float:
    import mpmath as mp

    with mp.workdps(25):
        points = [2] + [10**e for e in range(2, 20) if 10**e < n] + [n]
        return float(mp.quad(lambda t: 1 / mp.log(t) ** 2, points))


def singular_series_loop(Q: int, two_k: int) -> Fraction:
    """Divisor-sum singular series by literal divisor enumeration of Q,
    with each Ramanujan value taken from the rounded naive sum."""
    total = Fraction(0)
    for d in range(1, Q + 1):
        if Q % d:
            continue
        if mobius_naive(d) == 0:
            continue
        c_d = ramanujan_naive(d, two_k)
        total += Fraction(round(c_d.real), phi_naive(d) ** 2)
    return total
