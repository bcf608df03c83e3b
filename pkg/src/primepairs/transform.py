"""Discrete Fourier transform on Z/nZ for arbitrary n.

One sign and normalization convention is fixed package-wide and nothing
downstream may re-derive phases:

    forward:  F(xi) = sum_{x in Z_n} f(x) * exp(-2*pi*i*xi*x/n)
    inverse:  f(x)  = (1/n) * sum_{xi} F(xi) * exp(+2*pi*i*xi*x/n)

Z/nZ is identified with {1,...,n}; arrays are stored in residue layout,
where slot j holds the value at x = j for 1 <= j < n and slot 0 holds the
value at x = n (the phase factors agree because exp(-2*pi*i*xi*n/n) = 1).

The fast path delegates to numpy's pocketfft, which implements exactly
this forward kernel with mixed-radix decomposition plus a Bluestein
chirp-transform fallback for large prime factors, so arbitrary composite
or prime lengths run in O(n log n) without any padding of the ring.
Accumulated transform error is budgeted as 1e-10 * n * max|f|; every
integer-valued identity downstream asserts a rounding residual against
that model.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ResourceLimitError, UsageError

FORWARD_CONVENTION = "forward = sum_x f(x) exp(-2*pi*i*xi*x/n); inverse carries 1/n"
MAX_TRANSFORM_LENGTH = 10**7

DIRECT_CONVOLUTION_LIMIT = 4096


@dataclass(eq=False)
class Spectrum:
    """Length-n complex spectrum under the package-wide convention."""

    n: int
    values: np.ndarray
    convention: str = FORWARD_CONVENTION


def phases(n: int, multiplier: int) -> np.ndarray:
    """The vector exp(-2*pi*i*multiplier*j/n) for j = 0..n-1, with the
    angle reduced mod n in exact integer arithmetic first."""
    j = np.arange(n, dtype=np.int64)
    return np.exp((-2j * np.pi / n) * ((multiplier % n) * j % n))


def as_ring(values_one_indexed: np.ndarray) -> np.ndarray:
    """Re-index a 1-indexed array of length n+1 (entry 0 ignored) into
    residue layout of length n: slot 0 takes the value at x = n."""
    v = np.asarray(values_one_indexed)
    n = v.shape[0] - 1
    if n < 1:
        raise UsageError("need at least one sample on {1..n}")
    out = np.empty(n, dtype=v.dtype)
    out[1:] = v[1:n]
    out[0] = v[n]
    return out


def forward(f: np.ndarray) -> Spectrum:
    """Forward transform of a real or complex vector in residue layout."""
    f = np.asarray(f)
    n = f.shape[0]
    if n < 1:
        raise UsageError("cannot transform an empty vector")
    if n > MAX_TRANSFORM_LENGTH:
        raise ResourceLimitError(f"transform length capped at 1e7, got {n}")
    return Spectrum(n=n, values=np.fft.fft(f))


def inverse(spectrum: Spectrum) -> np.ndarray:
    """Inverse transform (with the 1/n factor), returning a complex vector."""
    if spectrum.values.shape[0] != spectrum.n:
        raise UsageError("spectrum length disagrees with its declared n")
    return np.fft.ifft(spectrum.values)


def cyclic_convolution(f: np.ndarray, g: np.ndarray, method: str = "auto") -> np.ndarray:
    """Cyclic convolution (f * g)(x) = sum_y f(y) g(x - y) on Z/nZ.

    ``method`` is "direct" (O(n^2), used automatically for n <= 4096),
    "fft" (forward/inverse via the convolution theorem), or "auto".
    """
    f = np.asarray(f)
    g = np.asarray(g)
    if f.shape != g.shape or f.ndim != 1:
        raise UsageError(f"convolution needs equal-length vectors, got {f.shape} and {g.shape}")
    n = f.shape[0]
    if method == "auto":
        method = "direct" if n <= DIRECT_CONVOLUTION_LIMIT else "fft"
    if method == "direct":
        out = np.zeros(n, dtype=np.result_type(f.dtype, g.dtype, np.float64))
        for y in range(n):
            fy = f[y]
            if fy != 0:
                out += fy * np.roll(g, y)
        return out
    if method == "fft":
        return inverse(Spectrum(n, forward(f).values * forward(g).values))
    raise UsageError(f"unknown convolution method {method!r}")


def plancherel_residual(f: np.ndarray) -> float:
    """Relative defect of the energy identity (1/n) sum |F(xi)|^2 =
    sum |f(x)|^2; zero input returns 0 exactly."""
    f = np.asarray(f)
    energy = float(np.sum(np.abs(f) ** 2))
    spectral = float(np.sum(np.abs(forward(f).values) ** 2)) / f.shape[0]
    gap = abs(spectral - energy)
    return gap / energy if energy > 0 else gap


def subgroup_slice(spectrum: Spectrum, Q: int, xi: int) -> np.ndarray:
    """The length-Q coset sample r -> F(xi + r*n/Q); requires Q | n and
    0 <= xi < n/Q."""
    n = spectrum.n
    if Q < 1 or n % Q:
        raise UsageError(f"subgroup sampling requires Q | n, got Q={Q}, n={n}")
    step = n // Q
    if not 0 <= xi < step:
        raise UsageError(f"offset must satisfy 0 <= xi < n/Q, got {xi}")
    return spectrum.values[xi::step].copy()
