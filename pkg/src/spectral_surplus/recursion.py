"""Finite checks of the threshold-sum recursions and their closed-form solution."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .spectral import Spectrum, ThresholdProfile

SURPLUS_C = 1.0 / 99.0
REL_TOL = 1e-6


class Status(str, Enum):
    PASS = "pass"
    FAIL = "fail"
    NOT_APPLICABLE = "not-applicable"


def abs_tol(n: int) -> float:
    return 1e-9 * n * n


def geometric_grid(lo: float, hi: float, points: int = 32) -> list[float]:
    if lo <= 0:
        lo = 1.0
    hi = max(hi, lo)
    if points == 1 or hi == lo:
        return [float(lo)]
    grid = np.geomspace(lo, hi, points)
    grid[0] = lo
    return [float(t) for t in grid]


@dataclass
class RecursionReport:
    rows: list = field(default_factory=list)
    status: Status = Status.PASS
    worst_ratio: float = 0.0
    note: str = ""

    @property
    def passed(self) -> bool:
        return self.status is Status.PASS

    def to_dict(self) -> dict:
        return {
            "status": self.status.value,
            "worst_ratio": self.worst_ratio,
            "note": self.note,
            "rows": self.rows,
        }


def _check_grid(prof: ThresholdProfile, grid, factor: float, divisor: float) -> RecursionReport:
    """S_T^2 <= factor * n * S_{T^2 / (divisor * n)} at every grid point."""
    n = prof.spectrum.n
    atol = abs_tol(n)
    report = RecursionReport()
    for T in grid:
        st = prof.S(T)
        inner = prof.S(T * T / (divisor * n))
        lhs = st * st
        rhs = factor * n * inner
        if lhs == 0.0:
            ratio = 0.0
        elif rhs <= 0.0:
            ratio = math.inf
        else:
            ratio = lhs / rhs
        ok = lhs <= rhs * (1.0 + REL_TOL) + atol
        report.rows.append({"T": float(T), "S_T": st, "rhs": rhs, "ratio": ratio, "pass": bool(ok)})
        report.worst_ratio = max(report.worst_ratio, ratio)
        if not ok:
            report.status = Status.FAIL
    return report


def key_recursion_floor(n: int, lambda_min: float) -> float:
    return 4.0 * max(-lambda_min, 0.0) * math.sqrt(n)


def verify_key_recursion(prof: ThresholdProfile, lambda_min: float | None = None, grid=None) -> RecursionReport:
    """Check S_T^2 <= 2n S_{T^2/4n} for thresholds T >= 4(-lambda_n)sqrt(n).

    Grid points below that floor are rejected with ``ValueError``: the
    inequality is not claimed there.
    """
    s = prof.spectrum
    if lambda_min is None:
        lambda_min = s.lambda_min
    floor = key_recursion_floor(s.n, lambda_min)
    if grid is None:
        grid = geometric_grid(floor, s.lambda_max)
    for T in grid:
        if T < floor * (1 - 1e-12):
            raise ValueError(f"T={T:g} below the validity floor 4(-lambda_n)sqrt(n)={floor:g}")
    return _check_grid(prof, grid, factor=2.0, divisor=4.0)


def verify_surplus_recursion(prof: ThresholdProfile, sp_star_upper: float, grid=None, c: float = SURPLUS_C) -> RecursionReport:
    """Check S_T^2 <= 250n S_{T^2/8n} for T >= n^(1-2c), given sp* <= n^(1+c)/2.

    When the certified upper bound on sp* exceeds n^(1+c)/2 the inequality is
    not claimed and the report is ``NOT_APPLICABLE``.
    """
    n = prof.spectrum.n
    gate = 0.5 * n ** (1 + c)
    if sp_star_upper > gate:
        return RecursionReport(
            status=Status.NOT_APPLICABLE,
            note=f"sp* upper bound {sp_star_upper:g} exceeds n^(1+c)/2 = {gate:g}",
        )
    floor = n ** (1 - 2 * c)
    if grid is None:
        grid = geometric_grid(floor, prof.spectrum.lambda_max)
    for T in grid:
        if T < floor * (1 - 1e-12):
            raise ValueError(f"T={T:g} below n^(1-2c)={floor:g}")
    return _check_grid(prof, grid, factor=250.0, divisor=8.0)


@dataclass(frozen=True)
class RecursionParams:
    p: float
    q: float
    r: float
    C: float
    n: int

    def validate(self) -> None:
        if not (0 < self.p < 1 and 0 < self.r < 1):
            raise ValueError("need p, r in (0, 1)")
        if not 1 < self.q < 2:
            raise ValueError("need q in (1, 2)")
        if self.C < 1:
            raise ValueError("need C >= 1")
        if not self.q + max(self.p, self.r) < 2:
            raise ValueError("need q + max(p, r) < 2")
        if self.n < 1:
            raise ValueError("need n >= 1")

    @property
    def s(self) -> float:
        return (self.q - 1.0) / (1.0 - self.r)


def solve_recursion(params: RecursionParams, H: float) -> float:
    """Tail bound (2 C^(1+s) / (1-s)) n^(1+s) H^(1-s) on sum of lambda_i^2 off L_H."""
    params.validate()
    n, s = params.n, params.s
    lo = n ** (params.p + params.q - 1)
    if not lo * (1 - 1e-12) <= H <= n * (1 + 1e-12):
        raise ValueError(f"H={H:g} outside [n^(p+q-1), n] = [{lo:g}, {n}]")
    return 2.0 * params.C ** (1 + s) / (1 - s) * n ** (1 + s) * H ** (1 - s)


@dataclass
class SolverCheck:
    status: Status
    tail: float = 0.0
    bound: float = 0.0
    slack: float = 0.0
    hypotheses: dict = field(default_factory=dict)


def verify_solver_against_spectrum(s: Spectrum, params: RecursionParams, H: float, points: int = 32) -> SolverCheck:
    """Compare the actual tail mass off L_H with :func:`solve_recursion`.

    The hypotheses are evaluated first; if any fails the result is
    ``NOT_APPLICABLE``. Besides the three numbered hypotheses the proof also
    needs n large enough that the negative-eigenvalue mass C^2 n^(p+q) is
    absorbed by half of the bound; that is checked as ``size``.
    """
    params.validate()
    if params.n != s.n:
        raise ValueError("params.n does not match the spectrum")
    n, C, sv = s.n, params.C, params.s
    bound = solve_recursion(params, H)
    prof = ThresholdProfile(s)

    hyp = {}
    hyp["least_eigenvalue"] = -s.lambda_min <= C * n**params.p
    hyp["energy"] = float(np.abs(s.lambdas).sum()) <= C * n**params.q
    lo = C * n**params.r
    grid = geometric_grid(lo, max(C * n, lo), points)
    rec = _check_grid(prof, grid, factor=C, divisor=C)
    hyp["recursion"] = rec.passed
    hyp["size"] = C ** (1 + sv) / (1 - sv) * n ** (1 + sv) * H ** (1 - sv) >= C * C * n ** (params.p + params.q)

    if not all(hyp.values()):
        return SolverCheck(Status.NOT_APPLICABLE, bound=bound, hypotheses=hyp)
    tail = float(np.sum(s.lambdas[s.lambdas < H] ** 2))
    ok = tail <= bound * (1 + REL_TOL) + abs_tol(n)
    return SolverCheck(Status.PASS if ok else Status.FAIL, tail, bound, bound - tail, hyp)


@dataclass
class TopConcentration:
    status: Status
    threshold: float
    mass: float
    bound: float
    note: str = ""


def check_top_concentration(s: Spectrum, eps: float, delta: float) -> TopConcentration:
    """Small-eigenvalue square mass versus delta n^2, gated on lambda_n >= -n^(1/4 - eps).

    The threshold (eps delta)^(1/eps) n is astronomically small for small eps,
    so at desk scale this mostly measures the negative eigenvalues.
    """
    if not (0 < eps < 0.01 and 0 < delta < 0.01):
        raise ValueError("eps and delta must lie in (0, 0.01)")
    n = s.n
    thr = (eps * delta) ** (1.0 / eps) * n
    mass = float(np.sum(s.lambdas[s.lambdas <= thr] ** 2))
    bound = delta * n * n
    if s.lambda_min < -(n ** (0.25 - eps)):
        return TopConcentration(Status.NOT_APPLICABLE, thr, mass, bound, "lambda_n below -n^(1/4 - eps)")
    ok = mass <= bound + abs_tol(n)
    note = "threshold underflows to zero" if thr == 0.0 else ""
    return TopConcentration(Status.PASS if ok else Status.FAIL, thr, mass, bound, note)
