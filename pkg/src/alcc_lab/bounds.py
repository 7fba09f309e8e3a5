"""Closed-form localization error-rate bounds and attack objectives.

Everything here evaluates analytical quantities: the pairwise-error lower
bound and its kappa constant, union-style sums over confusable index pairs,
the dominant-neighbor bound and its monotone behavior in the error count,
the strong-collusion objective over the number of all-one rows, and the
confusability terms used by the share-assignment optimizer.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .numeric import ParameterError


def kappa(n: int, a: int, index_gap: int, eta: float) -> float:
    """kappa = 2 / (eta * sum_{l=1..a} (1 - cos(l * 2*pi*gap/n)))."""
    if not 1 <= index_gap <= n - 1:
        raise ParameterError(f"index gap must lie in 1..{n - 1}")
    if a < 1:
        raise ParameterError("degree must be at least 1")
    theta = 2.0 * math.pi * index_gap / n
    total = sum(1.0 - math.cos(l * theta) for l in range(1, a + 1))
    if total <= 0.0:
        raise ZeroDivisionError("all cosine terms are one; kappa undefined")
    return 2.0 / (eta * total)


def sigma_diff_sq(sigma_p_sq: float, a: int, theta_d: float) -> float:
    """Variance of the evaluation difference: sigma_p^2 * (a - sum cos(l*theta))."""
    return sigma_p_sq * (a - sum(math.cos(l * theta_d) for l in range(1, a + 1)))


def locator_gain(n: int, support, probe: int) -> complex:
    """Locator value at the probe root for a g_0 = 1 locator on the support.

    Equals prod_a (1 - gamma^probe / gamma^{q_a}).
    """
    roots = np.exp(-2j * np.pi * np.asarray(support, dtype=int) / n)
    z = np.exp(-2j * np.pi * probe / n)
    return complex(np.prod(1.0 - z / roots))


@dataclass(frozen=True)
class PepContext:
    """Inputs of one pairwise-error bound: code size, degree, noise, and the
    probe/true index pair with its locator-gain constants."""

    n: int
    a: int
    eta: float
    sigma_p_sq: float
    true_index: int
    probe_index: int
    c_re: float
    c_im: float

    def __post_init__(self):
        if self.true_index == self.probe_index:
            raise ParameterError("probe and true index must differ")

    @property
    def gap(self) -> int:
        return abs(self.probe_index - self.true_index)

    @property
    def c_sq(self) -> float:
        return self.c_re**2 + self.c_im**2


def pep_context_from_support(
    n: int, support, probe: int, eta: float, sigma_p_sq: float, true_index: int | None = None
) -> PepContext:
    """Context for (probe, true) with c computed from the true support."""
    support = sorted(int(q) for q in support)
    if true_index is None:
        true_index = support[0]
    c = locator_gain(n, support, probe)
    return PepContext(
        n=n,
        a=len(support),
        eta=eta,
        sigma_p_sq=sigma_p_sq,
        true_index=int(true_index),
        probe_index=int(probe),
        c_re=c.real,
        c_im=c.imag,
    )


def pep_lower_bound(ctx: PepContext) -> float:
    """kappa/(1+kappa) * exp(-eta * c^2 * kappa / (4 sigma^2 (1+kappa))).

    Returns the 0 limit when sigma_p_sq is exactly zero (exponent -> -inf).
    """
    kap = kappa(ctx.n, ctx.a, ctx.gap, ctx.eta)
    ratio = kap / (1.0 + kap)
    if ctx.sigma_p_sq == 0.0:
        return 0.0 if ctx.c_sq > 0.0 else ratio
    exponent = -ctx.eta * ctx.c_sq * ratio / (4.0 * ctx.sigma_p_sq)
    return ratio * math.exp(exponent)


@dataclass(frozen=True)
class UnionBound:
    """A clamped sum of pairwise surrogate terms."""

    value: float
    raw_sum: float
    pair_count: int

    @property
    def clamped(self) -> bool:
        return self.raw_sum > 1.0


def localization_upper_bound(
    n: int, support, sigma_p_sq: float, eta: float
) -> UnionBound:
    """Sum of the pairwise surrogate over all (probe not in support, true in
    support) pairs, clamped to one.

    The per-pair term is a lower bound, so this composite is a surrogate
    objective rather than a certified bound on the empirical rate.
    """
    support = sorted(int(q) for q in support)
    if not support:
        return UnionBound(value=0.0, raw_sum=0.0, pair_count=0)
    others = [j for j in range(n) if j not in support]
    total = 0.0
    for probe in others:
        c = locator_gain(n, support, probe)
        for true_index in support:
            ctx = PepContext(
                n=n,
                a=len(support),
                eta=eta,
                sigma_p_sq=sigma_p_sq,
                true_index=true_index,
                probe_index=probe,
                c_re=c.real,
                c_im=c.imag,
            )
            total += pep_lower_bound(ctx)
    return UnionBound(value=min(total, 1.0), raw_sum=total, pair_count=len(support) * len(others))


def dominant_term_log_bound(
    a_c: int, n: int, sigma_p_sq: float, eta: float, c_sq: float = 1.0
) -> float:
    """log of a_c times the nearest-neighbor (gap 1) pairwise surrogate."""
    if a_c < 1:
        raise ParameterError("degree must be at least 1")
    if sigma_p_sq <= 0.0:
        raise ParameterError("log bound needs sigma_p_sq > 0")
    kap = kappa(n, a_c, 1, eta)
    ratio = kap / (1.0 + kap)
    return math.log(a_c) + math.log(ratio) - eta * c_sq * ratio / (4.0 * sigma_p_sq)


def dominant_term_bound(
    a_c: int, n: int, sigma_p_sq: float, eta: float, c_sq: float = 1.0
) -> float:
    """a_c times the nearest-neighbor pairwise surrogate (dominant-pair bound)."""
    return math.exp(dominant_term_log_bound(a_c, n, sigma_p_sq, eta, c_sq))


def strong_collusion_objective(
    m_rows: int,
    v: int,
    omega: int,
    n: int,
    sigma_p_sq: float,
    eta: float,
    c_sq_full: float = 1.0,
    c_sq_reduced: float = 1.0,
) -> float:
    """Approximate localization-error objective when omega rows are all-one.

    The omega all-one rows collapse into one averaged polynomial whose
    effective noise shrinks by omega (the exponent scales by omega); the
    remaining rows contribute the dominant degree-(v-1) term. omega = 0 means
    no full-degree polynomial exists at all.
    """
    if not 0 <= omega <= m_rows:
        raise ParameterError("omega must lie in 0..m_rows")
    if v < 2:
        raise ParameterError("need v >= 2 so that degree v-1 rows exist")
    if sigma_p_sq <= 0.0:
        raise ParameterError("objective needs sigma_p_sq > 0")
    kap2 = kappa(n, v - 1, 1, eta)
    ratio2 = kap2 / (1.0 + kap2)
    reduced_term = (v - 1) * ratio2 * math.exp(
        -eta * c_sq_reduced * ratio2 / (4.0 * sigma_p_sq)
    )
    if omega == 0:
        return reduced_term
    kap1 = kappa(n, v, 1, eta)
    ratio1 = kap1 / (1.0 + kap1)
    full_term = v * ratio1 * math.exp(
        -omega * eta * c_sq_full * ratio1 / (4.0 * sigma_p_sq)
    )
    share = 1.0 / (m_rows - omega + 1)
    return share * full_term + (m_rows - omega) * share * reduced_term


def gamma_bounds(n: int, a: int, eta: float) -> tuple[float, float]:
    """Exhaustive (min, max) of kappa/(1+kappa) over index gaps 1..n-1."""
    ratios = []
    for gap in range(1, n):
        kap = kappa(n, a, gap, eta)
        ratios.append(kap / (1.0 + kap))
    return min(ratios), max(ratios)


def confusability(support, probe: int, n: int, metric: str = "integer") -> float:
    """Squared product of differences between the probe and the support.

    metric="integer" takes the literal index differences; metric="chord"
    takes root-of-unity differences (rotation invariant).
    """
    support = np.asarray(support, dtype=int)
    if metric == "integer":
        prod = float(np.prod((probe - support).astype(float)))
        return prod * prod
    if metric == "chord":
        roots = np.exp(-2j * np.pi * support / n)
        z = np.exp(-2j * np.pi * probe / n)
        return float(np.abs(np.prod(z - roots)) ** 2)
    raise ParameterError(f"unknown confusability metric {metric!r}")


def assignment_pair_log_bound(
    support, probe: int, n: int, eta: float, gamma_max: float, sigma_p_sq: float,
    metric: str = "integer",
) -> float:
    """Log of exp(-eta * H * gamma_max / (4 sigma^2)) for one (support, probe)."""
    h = confusability(support, probe, n, metric)
    return -eta * h * gamma_max / (4.0 * sigma_p_sq)


def assignment_pair_bound(
    support, probe: int, n: int, eta: float, gamma_max: float, sigma_p_sq: float,
    metric: str = "integer",
) -> float:
    """Dominant confusability term for one (Byzantine support, probe) pair."""
    return math.exp(
        assignment_pair_log_bound(support, probe, n, eta, gamma_max, sigma_p_sq, metric)
    )
