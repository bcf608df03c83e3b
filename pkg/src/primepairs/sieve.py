"""Segmented prime sieving and every prime-indicator-derived count.

A PrimeTable is an immutable bitmap of primality on {1..n} with prefix
counts; on top of it sit progression counts, linear and circular pair
counts, twisted progression sums, and the von Mangoldt weight vector.
Construction is a single blocking call; all queries afterwards are
read-only and safe to use from concurrent callers.

Memory model: the bitmap costs 1 byte per entry and the prefix array 4
bytes per entry, so a table of extent n needs about 5*(n+1) bytes plus
transient sieving buffers.  Builds that would exceed the configured byte
budget are rejected up front.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import CacheError, ResourceLimitError, UsageError
from .factored import is_prime_u64

MAX_TABLE_EXTENT = 10**9
DEFAULT_MEMORY_BUDGET = 6 * 2**30  # bytes
SEGMENT_LENGTH = 1 << 20

CACHE_MAGIC = b"PSPC1"

_FNV_OFFSET = 0xCBF29CE484222325
_FNV_PRIME = 0x100000001B3
_U64 = (1 << 64) - 1


def fnv1a64(data: bytes) -> int:
    """64-bit FNV-1a hash of a byte string."""
    h = _FNV_OFFSET
    for byte in data:
        h = ((h ^ byte) * _FNV_PRIME) & _U64
    return h


@dataclass(eq=False)
class PrimeTable:
    """Primality bitmap on {1..n} with prefix counts pi_prefix[x] = pi(x).

    ``is_prime`` has length n+1 and is indexed directly by the integer
    (index 0 is unused and False).  The table identifies Z/nZ with
    {1,...,n}; ``ring_indicator`` lays the prime indicator out by residue,
    i.e. slot j holds the value at x = j for 1 <= j < n and slot 0 holds
    the value at x = n.
    """

    n: int
    is_prime: np.ndarray
    pi_prefix: np.ndarray
    _primes: np.ndarray | None = field(default=None, repr=False)
    _checksum: int | None = field(default=None, repr=False)

    def pi(self, x: int) -> int:
        """Number of primes <= x."""
        if not 0 <= x <= self.n:
            raise UsageError(f"pi(x) requires 0 <= x <= {self.n}, got {x}")
        return int(self.pi_prefix[x])

    def primes(self) -> np.ndarray:
        """All primes <= n as an int64 array (computed once, then cached)."""
        if self._primes is None:
            self._primes = np.flatnonzero(self.is_prime).astype(np.int64)
        return self._primes

    def ring_indicator(self, dtype=np.float64) -> np.ndarray:
        """Prime indicator on Z/nZ in residue layout (slot 0 = value at n)."""
        out = np.empty(self.n, dtype=dtype)
        out[1:] = self.is_prime[1 : self.n]
        out[0] = self.is_prime[self.n]
        return out

    def bitmap_payload(self) -> bytes:
        """Packed bits of is_prime[1..n], MSB-first within each byte."""
        return np.packbits(self.is_prime[1 : self.n + 1]).tobytes()

    def checksum(self) -> int:
        """FNV-1a checksum over the packed bitmap payload."""
        if self._checksum is None:
            self._checksum = fnv1a64(self.bitmap_payload())
        return self._checksum


@dataclass(eq=False)
class ResidueProfile:
    """Per-residue prime counts modulo Q up to extent n.

    ``values[a]`` is the plain count pi(n, Q, a) when ``xi`` is None, or
    the complex twisted sum of exp(-2*pi*i*x*xi/n) over primes x = a mod Q
    when ``xi`` is a frequency in [0, n).
    """

    Q: int
    n: int
    xi: int | None
    values: np.ndarray


def build_table(n: int, memory_budget: int = DEFAULT_MEMORY_BUDGET) -> PrimeTable:
    """Sieve primality on {1..n} with a segmented Eratosthenes pass.

    Rejects n outside [2, 1e9] and builds whose bitmap + prefix arrays
    would exceed ``memory_budget`` bytes.
    """
    if n < 2:
        raise UsageError(f"build_table requires n >= 2, got {n}")
    if n > MAX_TABLE_EXTENT:
        raise ResourceLimitError(f"table extent capped at 1e9, got {n}")
    needed = 5 * (n + 1) + 2 * SEGMENT_LENGTH
    if needed > memory_budget:
        raise ResourceLimitError(
            f"building a table of extent {n} needs about {needed} bytes, "
            f"over the budget of {memory_budget}"
        )
    is_prime = np.zeros(n + 1, dtype=bool)
    is_prime[2:] = True
    root = math.isqrt(n)
    base = _simple_sieve(root)
    for lo in range(0, n + 1, SEGMENT_LENGTH):
        hi = min(lo + SEGMENT_LENGTH, n + 1)
        for p in base:
            p = int(p)
            start = max(p * p, ((lo + p - 1) // p) * p)
            if start < hi:
                is_prime[start:hi:p] = False
    pi_prefix = np.cumsum(is_prime, dtype=np.int32)
    return PrimeTable(n=n, is_prime=is_prime, pi_prefix=pi_prefix)


def _simple_sieve(limit: int) -> np.ndarray:
    if limit < 2:
        return np.empty(0, dtype=np.int64)
    mask = np.ones(limit + 1, dtype=bool)
    mask[:2] = False
    for p in range(2, math.isqrt(limit) + 1):
        if mask[p]:
            mask[p * p :: p] = False
    return np.flatnonzero(mask).astype(np.int64)


def pi_progression(table: PrimeTable, q: int, a: int) -> int:
    """Count of primes m <= n with m = a (mod q)."""
    if not 0 <= a < q:
        raise UsageError(f"residue must satisfy 0 <= a < q, got a={a}, q={q}")
    if q > table.n:
        raise UsageError(f"modulus {q} exceeds table extent {table.n}")
    start = a if a >= 1 else q
    return int(np.count_nonzero(table.is_prime[start :: q]))


def residue_profile(table: PrimeTable, Q: int, xi: int | None = None) -> ResidueProfile:
    """All per-residue counts mod Q in one pass over the sieved primes.

    With ``xi`` given, accumulates the twisted sums instead; requires
    Q | n in that case so that frequencies factor cleanly over residues.
    """
    if Q < 1 or Q > table.n:
        raise UsageError(f"need 1 <= Q <= n, got Q={Q}, n={table.n}")
    primes = table.primes()
    classes = primes % Q
    if xi is None:
        counts = np.bincount(classes, minlength=Q).astype(np.float64)
        return ResidueProfile(Q=Q, n=table.n, xi=None, values=counts)
    if table.n % Q:
        raise UsageError(f"twisted profiles require Q | n, got Q={Q}, n={table.n}")
    if not 0 <= xi < table.n:
        raise UsageError(f"frequency must satisfy 0 <= xi < n, got {xi}")
    phases = np.exp((-2j * np.pi / table.n) * ((primes * xi) % table.n))
    values = np.bincount(classes, weights=phases.real, minlength=Q) + 1j * np.bincount(
        classes, weights=phases.imag, minlength=Q
    )
    return ResidueProfile(Q=Q, n=table.n, xi=xi, values=values)


def twisted_progression_count(table: PrimeTable, xi: int, Q: int, a: int) -> complex:
    """Twisted progression sum: primes x <= n with x = a (mod Q), each
    weighted by exp(-2*pi*i*x*xi/n).  Requires Q | n."""
    if table.n % Q:
        raise UsageError(f"twisted counts require Q | n, got Q={Q}, n={table.n}")
    if not 0 <= a < Q:
        raise UsageError(f"residue must satisfy 0 <= a < Q, got {a}")
    if not 0 <= xi < table.n:
        raise UsageError(f"frequency must satisfy 0 <= xi < n, got {xi}")
    primes = table.primes()
    sel = primes[primes % Q == a]
    if sel.size == 0:
        return 0j
    return complex(np.exp((-2j * np.pi / table.n) * ((sel * xi) % table.n)).sum())


def pair_count_linear(table: PrimeTable, two_k: int) -> int:
    """Count primes p <= n with p + 2k prime, with genuine primality for
    p + 2k > n (no wraparound): the boundary entries are tested directly."""
    n = table.n
    if not 0 <= two_k <= n or two_k % 2:
        raise UsageError(f"need even 0 <= 2k <= n, got 2k={two_k}, n={n}")
    if two_k == 0:
        return table.pi(n)
    ip = table.is_prime
    core = int(np.count_nonzero(ip[1 : n - two_k + 1] & ip[1 + two_k : n + 1]))
    boundary = sum(
        1 for p in range(n - two_k + 1, n + 1) if ip[p] and is_prime_u64(p + two_k)
    )
    return core + boundary


def pair_count_circular(table: PrimeTable, two_k: int) -> int:
    """Circular pair count on Z/nZ = {1..n}: primes x with the shifted
    point ((x + 2k - 1) mod n) + 1 also prime."""
    n = table.n
    if not 0 <= two_k < n or two_k % 2:
        raise UsageError(f"need even 0 <= 2k < n, got 2k={two_k}, n={n}")
    ring = table.ring_indicator(dtype=bool)
    return int(np.count_nonzero(ring & np.roll(ring, -two_k)))


def von_mangoldt_vector(n: int) -> np.ndarray:
    """Von Mangoldt weights Lambda(x) for 1 <= x <= n, natural log, as a
    float64 array of length n+1 (index 0 unused)."""
    if n < 1:
        raise UsageError(f"need n >= 1, got {n}")
    if n > 10**8:
        raise ResourceLimitError(f"von Mangoldt vector capped at n <= 1e8, got {n}")
    lam = np.zeros(n + 1)
    if n < 2:
        return lam
    mask = np.ones(n + 1, dtype=bool)
    mask[:2] = False
    for p in range(2, math.isqrt(n) + 1):
        if mask[p]:
            mask[p * p :: p] = False
    primes = np.flatnonzero(mask)
    lam[primes] = np.log(primes.astype(np.float64))
    for p in primes[primes <= math.isqrt(n)]:
        p = int(p)
        q = p * p
        lp = math.log(p)
        while q <= n:
            lam[q] = lp
            q *= p
    return lam


def save_table(table: PrimeTable, path: str | Path) -> Path:
    """Write the binary cache: magic, n (8-byte LE), packed bitmap payload,
    then an 8-byte LE FNV-1a checksum of the payload."""
    path = Path(path)
    payload = table.bitmap_payload()
    digest = fnv1a64(payload)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "wb") as fh:
        fh.write(CACHE_MAGIC)
        fh.write(table.n.to_bytes(8, "little"))
        fh.write(payload)
        fh.write(digest.to_bytes(8, "little"))
    return path


def load_table(path: str | Path) -> PrimeTable:
    """Read a binary cache written by save_table, verifying structure and
    checksum; raises CacheError on any mismatch."""
    path = Path(path)
    if not path.exists():
        raise CacheError(f"no cache file at {path}")
    blob = path.read_bytes()
    header = len(CACHE_MAGIC) + 8
    if len(blob) < header + 8 or blob[: len(CACHE_MAGIC)] != CACHE_MAGIC:
        raise CacheError(f"{path} is not a prime-table cache (bad magic or truncated)")
    n = int.from_bytes(blob[len(CACHE_MAGIC) : header], "little")
    expected_payload = (n + 7) // 8
    payload = blob[header : header + expected_payload]
    tail = blob[header + expected_payload :]
    if len(payload) != expected_payload or len(tail) != 8:
        raise CacheError(f"{path}: payload length mismatch for extent {n}")
    digest = int.from_bytes(tail, "little")
    if fnv1a64(payload) != digest:
        raise CacheError(f"{path}: checksum mismatch, cache is corrupt")
    bits = np.unpackbits(np.frombuffer(payload, dtype=np.uint8), count=n)
    is_prime = np.zeros(n + 1, dtype=bool)
    is_prime[1:] = bits.astype(bool)
    pi_prefix = np.cumsum(is_prime, dtype=np.int32)
    return PrimeTable(n=n, is_prime=is_prime, pi_prefix=pi_prefix)


def cache_path(cache_dir: str | Path, n: int) -> Path:
    return Path(cache_dir) / f"primetable_{n}.pspc"


def load_or_build(n: int, cache_dir: str | Path | None = None) -> PrimeTable:
    """Fetch a table from the cache directory when a valid file exists,
    otherwise build it (and write the cache when a directory is given).
    Corrupt caches are rebuilt in place."""
    if cache_dir is None:
        return build_table(n)
    path = cache_path(cache_dir, n)
    if path.exists():
        try:
            return load_table(path)
        except CacheError:
            os.remove(path)
    table = build_table(n)
    save_table(table, path)
    return table
