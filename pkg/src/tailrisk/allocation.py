"""Euler risk contributions of portfolio components.

A portfolio is a matrix of joint scenarios (rows) over components
(columns); the total loss is the rowwise sum.  Contributions are the
Euler (marginal) allocations of ES and expectile capital:

- ES:        ES_alpha(L_k | L) = E[L_k | L > q_L(alpha)];
- expectile: e_alpha(L_k | L) =
      (alpha E[L_k 1_{L > e}] + (1-alpha) E[L_k 1_{L <= e}])
      / (alpha + (1-2 alpha) P[L <= e]),   e = e_alpha(L),

both evaluated on the empirical scenario measure.  The expectile
allocation satisfies full allocation exactly (summing the numerators over
k reproduces the first-order condition of the total), and it equals the
convex combination (1-w) ES_{b}(L_k|L) + w E[L_k] with b = P[L <= e] and
w = (1-alpha)/(alpha + (1-2 alpha) b) — re-verified at runtime when
``check=True``.

Only empirical (scenario) portfolios are supported; the asymptotic ratio
helper additionally assumes the components have heavy Frechet-type tails,
an assumption on the data that cannot be verified from finite scenarios.
"""

from __future__ import annotations

import csv
import math
from typing import NamedTuple, Optional, Sequence

import numpy as np

from .distributions import Sample
from .risk_core import _check_expectile_level, _check_var_level, expectile


class Portfolio:
    """Joint scenarios: row i is one scenario across the d components."""

    def __init__(self, components):
        arr = np.asarray(components, dtype=float)
        if arr.ndim == 1:
            arr = arr[:, None]
        if arr.ndim != 2:
            raise ValueError("portfolio data must be a 2-d scenarios x components array")
        if arr.shape[0] < 1 or arr.shape[1] < 1:
            raise ValueError("portfolio needs at least one scenario and one component")
        if not np.isfinite(arr).all():
            raise ValueError("portfolio values must be finite")
        self.components = arr
        self.total = arr.sum(axis=1)

    @property
    def n(self) -> int:
        return self.components.shape[0]

    @property
    def d(self) -> int:
        return self.components.shape[1]

    @classmethod
    def from_csv(cls, path) -> "Portfolio":
        """Read scenarios from CSV: one row per scenario, one column per
        component; a single leading header row is allowed and skipped."""
        rows = []
        with open(path, newline="") as fh:
            reader = csv.reader(fh)
            for lineno, cells in enumerate(reader):
                cells = [c.strip() for c in cells if c.strip() != ""]
                if not cells:
                    continue
                try:
                    rows.append([float(c) for c in cells])
                except ValueError:
                    if lineno == 0 and not rows:
                        continue  # header row
                    raise ValueError(
                        f"non-numeric portfolio data at line {lineno + 1} of {path}"
                    ) from None
        if not rows:
            raise ValueError(f"no scenario rows found in {path}")
        width = len(rows[0])
        if any(len(r) != width for r in rows):
            raise ValueError(f"ragged rows in {path}: expected {width} columns")
        return cls(rows)

    def __repr__(self):
        return f"<Portfolio n={self.n} d={self.d}>"


def es_euler(p: Portfolio, alpha: float) -> np.ndarray:
    """ES contributions: componentwise mean over the strict tail event
    {total > empirical q_alpha}.  Scenarios tied with the quantile are
    excluded by the strict inequality."""
    _check_var_level(alpha)
    q = Sample(p.total).quantile(alpha)
    mask = p.total > q
    if not mask.any():
        raise ValueError(
            f"tail event {{total > q_alpha}} is empty at alpha={alpha} "
            f"(quantile {q:g} ties the sample maximum)"
        )
    return p.components[mask].mean(axis=0)


def expectile_euler(p: Portfolio, alpha: float, check: bool = True) -> np.ndarray:
    """Expectile contributions via the weighted tail/body average.

    Ties with the expectile root are classified as <= within 1e-12
    absolute tolerance.  ``check=True`` re-derives every contribution
    through the ES-combination form and asserts 1e-9 agreement.
    """
    _check_expectile_level(alpha)
    total = Sample(p.total)
    e = expectile(total, alpha)
    le = p.total <= e + 1e-12
    n = p.n
    n_le = int(le.sum())
    body = p.components[le].sum(axis=0) / n
    tail = p.components[~le].sum(axis=0) / n
    den = alpha + (1.0 - 2.0 * alpha) * (n_le / n)
    contrib = (alpha * tail + (1.0 - alpha) * body) / den
    if check and 0 < n_le < n:
        b = n_le / n
        w = (1.0 - alpha) / den
        es_contrib = p.components[~le].mean(axis=0)
        means = p.components.mean(axis=0)
        alt = (1.0 - w) * es_contrib + w * means
        scale = 1.0 + np.abs(contrib)
        if np.any(np.abs(alt - contrib) > 1e-9 * scale):
            raise AssertionError(
                "expectile allocation cross-check failed: weighted average "
                f"{contrib!r} vs ES-combination {alt!r} at alpha={alpha}"
            )
    return contrib


class AsymptoticRatioRow(NamedTuple):
    """One grid point of the expectile/ES contribution ratio diagnostics.

    ``ratios`` is None when the tail event degenerated at this level (the
    reason is in ``note``).
    """

    alpha: float
    ratios: Optional[tuple]
    constant: float
    note: str


def euler_asymptotic_ratio(
    p: Portfolio, eta: float, alphas: Sequence[float]
) -> list:
    """Expectile/ES contribution ratios along an alpha grid.

    For heavy-tailed components with common tail index eta > 1, the
    expectile contribution is asymptotically the ES contribution times
    (eta-1)^((eta-1)/eta)/eta; this emits the empirical ratios next to
    that constant for convergence inspection.  Degenerate tails at large
    alpha are reported per row rather than raised.
    """
    eta = float(eta)
    if not (eta > 1.0):
        raise ValueError(f"asymptotic ratio needs tail index eta > 1, got {eta}")
    constant = (eta - 1.0) ** ((eta - 1.0) / eta) / eta
    rows = []
    for a in alphas:
        try:
            es_c = es_euler(p, a)
            e_c = expectile_euler(p, a, check=False)
            with np.errstate(divide="ignore", invalid="ignore"):
                ratios = tuple(np.asarray(e_c) / np.asarray(es_c))
            rows.append(AsymptoticRatioRow(float(a), ratios, constant, ""))
        except ValueError as exc:
            rows.append(AsymptoticRatioRow(float(a), None, constant, str(exc)))
    return rows
