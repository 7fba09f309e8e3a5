"""Exhaustive noise-free decoder check used by the CLI selftest and the
acceptance suite.

For each small code, every error support up to the capability is enumerated;
random error values of magnitude at least one are injected on clean
codewords and the full decode pipeline (rank-estimated count, locator,
localization, value recovery, correction) must restore the codeword.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

import numpy as np

from . import dft_code, localization
from .threat import complex_normal

DEFAULT_CODES = ((7, 3), (11, 7), (15, 7))


@dataclass(frozen=True)
class SelftestReport:
    codes: tuple
    supports_checked: int
    decodes_run: int
    failures: int

    @property
    def passed(self) -> bool:
        return self.failures == 0


def _random_error_values(rng: np.random.Generator, count: int) -> np.ndarray:
    """Complex values with magnitude in [1, 10] and uniform phase."""
    mags = rng.uniform(1.0, 10.0, size=count)
    phases = rng.uniform(0.0, 2.0 * np.pi, size=count)
    return mags * np.exp(1j * phases)


def run_exhaustive_decode_check(
    codes=DEFAULT_CODES,
    values_per_support: int = 20,
    rel_tol: float = 1e-6,
    seed: int = 2024,
    log=None,
) -> SelftestReport:
    rng = np.random.default_rng(seed)
    supports = 0
    decodes = 0
    failures = 0
    for n, k in codes:
        code = dft_code.build_code(n, k)
        v = code.capability
        message = complex_normal(rng, 0.0, 1.0, k)
        clean = message @ code.generator
        clean_norm = np.linalg.norm(clean)
        code_failures = 0
        for size in range(1, v + 1):
            for support in combinations(range(n), size):
                supports += 1
                support = np.array(support)
                for _ in range(values_per_support):
                    decodes += 1
                    received = clean.copy()
                    received[support] += _random_error_values(rng, size)
                    syn = dft_code.syndrome(code, received)
                    count = dft_code.estimate_error_count(
                        code, syn, mode="rank", rel_tol=rel_tol
                    )
                    ok = count == size
                    if ok:
                        poly = dft_code.locator_polynomial(code, syn, count)
                        detected = localization.independent_localize(poly, count, n)
                        ok = np.array_equal(detected, support)
                    if ok:
                        values = dft_code.recover_error_values(code, syn, detected)
                        corrected = dft_code.correct_codeword(received, detected, values)
                        ok = np.linalg.norm(corrected - clean) <= 1e-6 * clean_norm
                    if not ok:
                        failures += 1
                        code_failures += 1
        if log is not None:
            status = "ok" if code_failures == 0 else f"{code_failures} failures"
            log(f"({n},{k}) v={v}: {status}")
    return SelftestReport(
        codes=tuple(codes), supports_checked=supports, decodes_run=decodes, failures=failures
    )
