"""Experiment orchestration: configuration, the mode runner, and prime
table cache administration.

A run is a pure function of its configuration: identical config and code
version produce byte-identical report bodies.  Output and cache
directories are excluded from the config hash, since they locate results
without affecting them.
"""

from __future__ import annotations

import hashlib
import json
import math
import sys
from dataclasses import dataclass, field, asdict
from pathlib import Path

import numpy as np

from . import __version__
from .constants import hl_constant, li2, singular_series_product
from .errors import UsageError
from .factored import primorial
from .reports import write_csv, write_json, write_spectrum_export
from .sieve import (
    PrimeTable,
    build_table,
    cache_path,
    load_or_build,
    load_table,
    pair_count_circular,
    pair_count_linear,
    pi_progression,
    save_table,
    von_mangoldt_vector,
)
from .spectral import (
    decompose,
    half_spectrum_residual,
    main_term_convolution,
    pair_correlation_via_spectrum,
    pair_count_via_spectrum,
    psi_pair_direct,
    psi_pair_via_spectrum,
    rho_identity_check,
)
from .transform import as_ring, forward, inverse, plancherel_residual

MODES = ("identity-suite", "decompose", "constants", "spectrum-export", "hl-ratio-sweep")

# Scale-factor tolerances; each identity documents the scale it multiplies.
DEFAULT_TOLERANCES = {
    "spectral-pair-count": 1e-6,       # x n
    "round-trip": 1e-8,                # x max(1, max|f|)
    "plancherel": 1e-8,                # relative
    "twisted-plancherel": 1e-8,        # relative, per residue class
    "parity-half-spectrum": 1e-6,      # x pi(n)
    "subgroup-restriction": 1e-6,      # x pi(n)
    "decomposition-reconstruction": 1e-6,  # x n
    "main-term-convolution": 1e-6,     # x n/Q
    "psi-spectral-identity": 1e-6,     # x n log^2 n
}

# Experiment schedule for subgroup moduli; kept explicit rather than
# derived from a growth law so that desk-scale runs stay interpretable.
DEFAULT_Z_SCHEDULE = [5, 7, 11, 13]


@dataclass
class ExperimentConfig:
    mode: str
    n_values: list[int] = field(default_factory=lambda: [30, 120, 1009])
    two_k_values: list[int] = field(default_factory=lambda: [2, 4, 6])
    z_schedule: list[int] = field(default_factory=lambda: list(DEFAULT_Z_SCHEDULE))
    cutoff: int = 10**6
    output_dir: str = "."
    cache_dir: str | None = None
    out_format: str = "csv"
    tolerances: dict = field(default_factory=dict)
    stamp: bool = False
    source_function: str = "prime"


CONFIG_KEYS = set(ExperimentConfig.__dataclass_fields__)


def validate_config(config: ExperimentConfig) -> list[str]:
    """Collect every violation; an empty list means the config is valid."""
    problems = []
    if config.mode not in MODES:
        problems.append(f"mode must be one of {list(MODES)}, got {config.mode!r}")
    if not config.n_values:
        problems.append("n_values must not be empty")
    if not config.two_k_values:
        problems.append("two_k_values must not be empty")
    for k in config.two_k_values:
        if not isinstance(k, int) or k < 2 or k % 2:
            problems.append(f"every 2k must be an even integer >= 2, got {k!r}")
    if config.two_k_values and all(isinstance(k, int) for k in config.two_k_values):
        floor = max(config.two_k_values) + 2
        for n in config.n_values:
            if not isinstance(n, int) or n < floor:
                problems.append(f"every n must be an integer >= max(2k)+2 = {floor}, got {n!r}")
    for z in config.z_schedule:
        if not isinstance(z, int) or z < 2:
            problems.append(f"every z must be an integer >= 2, got {z!r}")
    if config.out_format not in ("csv", "json"):
        problems.append(f"format must be csv or json, got {config.out_format!r}")
    if config.source_function not in ("prime", "mangoldt"):
        problems.append(f"source_function must be prime or mangoldt, got {config.source_function!r}")
    if config.cutoff < 3:
        problems.append(f"cutoff must be >= 3, got {config.cutoff}")
    for key, value in config.tolerances.items():
        if key not in DEFAULT_TOLERANCES:
            problems.append(f"unknown tolerance key {key!r} (known: {sorted(DEFAULT_TOLERANCES)})")
        else:
            try:
                ok = float(value) > 0
            except (TypeError, ValueError):
                ok = False
            if not ok:
                problems.append(f"tolerance {key} must be a positive number, got {value!r}")
    return problems


def config_hash(config: ExperimentConfig) -> str:
    payload = asdict(config)
    payload.pop("output_dir")
    payload.pop("cache_dir")
    blob = json.dumps(payload, sort_keys=True).encode()
    return hashlib.sha256(blob).hexdigest()[:16]


def load_config_file(path: str | Path) -> dict:
    try:
        raw = json.loads(Path(path).read_text())
    except FileNotFoundError:
        raise UsageError(f"config file not found: {path}")
    except json.JSONDecodeError as exc:
        raise UsageError(f"config file {path} is not valid JSON: {exc}")
    if not isinstance(raw, dict):
        raise UsageError(f"config file {path} must hold a JSON object")
    unknown = set(raw) - CONFIG_KEYS
    if unknown:
        raise UsageError(f"unknown config keys in {path}: {sorted(unknown)}")
    return raw


def round_up_multiple(n: int, Q: int) -> int:
    """Smallest multiple of Q that is >= n (the extent-adjustment device
    used whenever a subgroup identity needs Q | n)."""
    return ((n + Q - 1) // Q) * Q


@dataclass
class RunResult:
    exit_code: int
    files: list[Path]
    failures: list[str]
    lines: list[str]


def run(config: ExperimentConfig) -> RunResult:
    """Execute one experiment mode, writing reports under output_dir."""
    problems = validate_config(config)
    if problems:
        raise UsageError("invalid config:\n  " + "\n  ".join(problems))
    out = Path(config.output_dir)
    out.mkdir(parents=True, exist_ok=True)
    runner = {
        "identity-suite": _run_identity_suite,
        "decompose": _run_decompose,
        "constants": _run_constants,
        "spectrum-export": _run_spectrum_export,
        "hl-ratio-sweep": _run_sweep,
    }[config.mode]
    return runner(config, out)


def _tol(config: ExperimentConfig, key: str) -> float:
    return float(config.tolerances.get(key, DEFAULT_TOLERANCES[key]))


def _table(config: ExperimentConfig, n: int) -> PrimeTable:
    return load_or_build(n, config.cache_dir)


def _run_identity_suite(config: ExperimentConfig, out: Path) -> RunResult:
    results = []
    lines = []

    def record(identity, n, Q, two_k, residual, tolerance, extra=None):
        passed = bool(residual <= tolerance)
        row = {
            "identity": identity,
            "n": n,
            "Q": Q,
            "two_k": two_k,
            "residual": float(residual),
            "tolerance": float(tolerance),
            "passed": passed,
        }
        if extra:
            row.update(extra)
        results.append(row)
        status = "pass" if passed else "FAIL"
        lines.append(
            f"[{status}] {identity} n={n} Q={Q} 2k={two_k} "
            f"residual={residual:.3e} tolerance={tolerance:.3e}"
        )

    for n in config.n_values:
        table = _table(config, n)
        ring = table.ring_indicator()
        pi_n = table.pi(n)

        spec_tol = _tol(config, "spectral-pair-count")
        for two_k in config.two_k_values:
            raw = pair_correlation_via_spectrum(ring, two_k)
            sieved = pair_count_circular(table, two_k)
            record("spectral-pair-count", n, None, two_k, abs(raw - sieved), spec_tol * n)

        round_trip = float(np.abs(inverse(forward(ring)) - ring).max())
        record("round-trip", n, None, None, round_trip, _tol(config, "round-trip"))

        record("plancherel", n, None, None, plancherel_residual(ring), _tol(config, "plancherel"))

        even_n = n if n % 2 == 0 else n + 1
        parity_table = table if even_n == n else _table(config, even_n)
        record(
            "parity-half-spectrum",
            even_n,
            None,
            None,
            half_spectrum_residual(even_n, parity_table),
            _tol(config, "parity-half-spectrum") * max(parity_table.pi(even_n), 1),
            extra={"requested_n": n},
        )

        for two_k in config.two_k_values:
            gap = abs(
                psi_pair_via_spectrum(n, two_k) - psi_pair_direct(n, two_k)
            )
            record(
                "psi-spectral-identity",
                n,
                None,
                two_k,
                gap,
                _tol(config, "psi-spectral-identity") * n * math.log(n) ** 2,
            )

        for z in config.z_schedule:
            Q = primorial(z).value
            adjusted = round_up_multiple(n, Q)
            sub_table = table if adjusted == n else _table(config, adjusted)
            extra = {
                "requested_n": n,
                "z": z,
                "within_log5": bool(Q <= math.log(adjusted) ** 5),
                "within_log10": bool(Q <= math.log(adjusted) ** 10),
            }
            record(
                "subgroup-restriction",
                adjusted,
                Q,
                None,
                rho_identity_check(adjusted, Q, sub_table, tol=float("inf")),
                _tol(config, "subgroup-restriction") * max(sub_table.pi(adjusted), 1),
                extra=extra,
            )
            # twisted energy identity on a few residue classes: the
            # class-masked spectrum is the twisted progression sum, so its
            # mean power equals the plain class count
            sub_ring = sub_table.ring_indicator()
            slots = np.arange(adjusted, dtype=np.int64) % Q
            worst = 0.0
            for a in {0, 1, Q - 1}:
                masked = np.where(slots == a, sub_ring, 0.0)
                energy = float(np.sum(np.abs(np.fft.fft(masked)) ** 2)) / adjusted
                count = pi_progression(sub_table, Q, a)
                worst = max(worst, abs(energy - count) / max(count, 1))
            record(
                "twisted-plancherel",
                adjusted,
                Q,
                None,
                worst,
                _tol(config, "twisted-plancherel"),
                extra=extra,
            )
            for two_k in config.two_k_values:
                report = decompose(
                    adjusted, Q, two_k, sub_table, constant_cutoff=config.cutoff,
                    tol=float("inf"),
                )
                record(
                    "decomposition-reconstruction",
                    adjusted,
                    Q,
                    two_k,
                    report.reconstruction_residual,
                    _tol(config, "decomposition-reconstruction") * adjusted,
                    extra=extra,
                )
                record(
                    "main-term-convolution",
                    adjusted,
                    Q,
                    two_k,
                    abs(main_term_convolution(adjusted, Q, two_k, sub_table) - report.main_term),
                    _tol(config, "main-term-convolution") * (adjusted / Q),
                    extra=extra,
                )

    failures = sorted({row["identity"] for row in results if not row["passed"]})
    payload = {
        "version": __version__,
        "config_hash": config_hash(config),
        "mode": config.mode,
        "all_passed": not failures,
        "failing_identities": failures,
        "results": results,
    }
    path = write_json(out / "identity_suite.json", payload)
    return RunResult(exit_code=0 if not failures else 2, files=[path], failures=failures, lines=lines)


def _report_meta(config: ExperimentConfig, **extra) -> dict:
    meta = {"version": __version__, "config_hash": config_hash(config)}
    meta.update(extra)
    return meta


def _run_decompose(config: ExperimentConfig, out: Path) -> RunResult:
    files = []
    lines = []
    for z in config.z_schedule:
        Q = primorial(z).value
        for n in config.n_values:
            adjusted = round_up_multiple(n, Q)
            table = _table(config, adjusted)
            for two_k in config.two_k_values:
                report = decompose(
                    adjusted, Q, two_k, table, constant_cutoff=config.cutoff,
                    tol=_tol(config, "decomposition-reconstruction"),
                )
                meta = _report_meta(
                    config,
                    n=adjusted,
                    requested_n=n,
                    Q=Q,
                    z=z,
                    two_k=two_k,
                    prime_table_checksum=f"fnv1a64:{table.checksum():016x}",
                )
                stem = f"decompose_n{adjusted}_Q{Q}_k{two_k}"
                payload = {
                    **meta,
                    "main_term": report.main_term,
                    "predicted_main_log2": report.predicted_main_log2,
                    "predicted_main_li2": report.predicted_main_li2,
                    "reconstruction_residual": report.reconstruction_residual,
                    "pair_count_circular": report.pair_count_circular,
                    "pair_count_linear": pair_count_linear(table, two_k),
                }
                files.append(write_json(out / f"{stem}.json", payload))
                rows = (
                    (xi, t.real, t.imag, abs(t))
                    for xi, t in enumerate(report.error_spectrum)
                )
                files.append(
                    write_csv(
                        out / f"{stem}.csv",
                        meta,
                        ["xi", "re_T", "im_T", "abs_T"],
                        rows,
                        stamp=config.stamp,
                    )
                )
                lines.append(
                    f"decompose n={adjusted} Q={Q} 2k={two_k}: main={report.main_term:.4f} "
                    f"predicted(li2)={report.predicted_main_li2 / adjusted:.4f} "
                    f"pairs={report.pair_count_circular} residual={report.reconstruction_residual:.2e}"
                )
    return RunResult(exit_code=0, files=files, failures=[], lines=lines)


def _run_constants(config: ExperimentConfig, out: Path) -> RunResult:
    files = []
    lines = []
    for two_k in config.two_k_values:
        constant = hl_constant(two_k, config.cutoff)
        trace = []
        for z in config.z_schedule:
            Q = primorial(z)
            trace.append([z, Q.value, float(singular_series_product(Q, two_k))])
        payload = {
            **_report_meta(config),
            "two_k": two_k,
            "cutoff": config.cutoff,
            "value": constant.value,
            "error_bound": constant.error_bound,
            "singular_series_trace": trace,
        }
        files.append(write_json(out / f"constants_k{two_k}.json", payload))
        lines.append(
            f"constants 2k={two_k}: value={constant.value!r} error_bound={constant.error_bound:.3e}"
        )
    return RunResult(exit_code=0, files=files, failures=[], lines=lines)


def _run_spectrum_export(config: ExperimentConfig, out: Path) -> RunResult:
    files = []
    lines = []
    for n in config.n_values:
        if config.source_function == "prime":
            ring = _table(config, n).ring_indicator()
        else:
            ring = as_ring(von_mangoldt_vector(n))
        spectrum = forward(ring)
        meta = _report_meta(config, n=n, source_function=config.source_function)
        csv_path, json_path = write_spectrum_export(
            out / f"spectrum_n{n}_{config.source_function}",
            spectrum.values,
            config.source_function,
            meta,
            stamp=config.stamp,
        )
        files.extend([csv_path, json_path])
        lines.append(f"spectrum n={n} source={config.source_function}: {csv_path.name}")
    return RunResult(exit_code=0, files=files, failures=[], lines=lines)


def _run_sweep(config: ExperimentConfig, out: Path) -> RunResult:
    rows = []
    constants = {k: hl_constant(k, config.cutoff).value for k in config.two_k_values}
    for n in sorted(config.n_values):
        table = _table(config, n)
        li2_n = li2(n)
        for two_k in config.two_k_values:
            count = pair_count_linear(table, two_k)
            predicted = constants[two_k] * li2_n
            rows.append((n, two_k, count, predicted, count / predicted))
    path = write_csv(
        out / "hl_ratio_sweep.csv",
        _report_meta(config, cutoff=config.cutoff),
        ["n", "two_k", "pair_count", "C2k_Li2", "ratio"],
        rows,
        stamp=config.stamp,
    )
    lines = [f"sweep: wrote {len(rows)} rows to {path.name}"]
    return RunResult(exit_code=0, files=[path], failures=[], lines=lines)


def pairs_report(config: ExperimentConfig) -> list[tuple]:
    """Rows (n, 2k, linear, circular, spectral) with all three counts."""
    rows = []
    for n in config.n_values:
        table = _table(config, n)
        for two_k in config.two_k_values:
            rows.append(
                (
                    n,
                    two_k,
                    pair_count_linear(table, two_k),
                    pair_count_circular(table, two_k),
                    pair_count_via_spectrum(n, two_k, table),
                )
            )
    return rows


def cache_admin(action: str, n: int, cache_dir: str | Path) -> str:
    """Administer the binary prime-table cache: build, verify, or purge."""
    path = cache_path(cache_dir, n)
    if action == "build":
        save_table(build_table(n), path)
        return f"built {path}"
    if action == "verify":
        table = load_table(path)
        return f"OK {path} (n={table.n}, checksum fnv1a64:{table.checksum():016x})"
    if action == "purge":
        if path.exists():
            path.unlink()
            return f"purged {path}"
        print(f"warning: no cache at {path}, nothing to purge", file=sys.stderr)
        return f"no-op (missing {path})"
    raise UsageError(f"unknown cache action {action!r}; use build, verify, or purge")
