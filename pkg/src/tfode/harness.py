"""Convergence-study harness: step-halving sweeps, error/order reports, CSV.

A :class:`Sweep` names a built-in problem (or defines one inline through
expression strings), a list of ``alpha`` and ``lambda`` values, and a
strictly decreasing list of step sizes.  :func:`run_sweep` produces one
:class:`ConvergenceReport` per (alpha, lambda) pair with the max-norm error
and the consecutive-halving order for every step size.  The five canned
table configurations reproduce the reference error tables exactly as
printed (same T, quadrature degree, stencil size and step lists).

Everything is deterministic: no randomness, fixed iteration order, fixed
CSV formatting.  The per-row wall-clock column is kept out of the table
CSVs so repeated runs are byte-identical.
"""

from __future__ import annotations

import csv
import io
import math
import time
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from . import expr as exprmod
from .problems import BUILTIN_PROBLEMS, builtin_problem
from .solver import BlowUpError, Problem, SolutionTrace, SolverConfig, solve

__all__ = [
    "Sweep",
    "ReportRow",
    "ConvergenceReport",
    "estimate_order",
    "run_sweep",
    "table_sweep",
    "write_report_csv",
    "load_report_csv",
    "write_trace_csv",
    "TABLES",
]


@dataclass(frozen=True)
class Sweep:
    """One convergence study: a problem family x step sizes.

    Either ``problem`` names a built-in, or ``rhs`` (and optionally
    ``exact``) give expression strings in the variables t, u, alpha,
    lambda.  ``taus`` must be strictly decreasing and divide ``b - a``.
    """

    alphas: tuple[float, ...]
    lambdas: tuple[float, ...]
    taus: tuple[float, ...]
    n_interp: int
    problem: str | None = None
    rhs: str | None = None
    exact: str | None = None
    kind: str = "caputo"
    init: tuple[float, ...] | None = None
    a: float = 0.0
    b: float = 1.0
    mu: float = 1.0
    n_quad: int = 20
    split_t0: float | None = None
    n_tilde: int = 40
    start_refine: int = 64
    corrector_iters: int = 1
    exact_start: bool = False

    def __post_init__(self):
        object.__setattr__(self, "alphas", tuple(float(x) for x in self.alphas))
        object.__setattr__(self, "lambdas", tuple(float(x) for x in self.lambdas))
        object.__setattr__(self, "taus", tuple(float(x) for x in self.taus))
        if not self.taus or any(
            t2 >= t1 for t1, t2 in zip(self.taus, self.taus[1:])
        ):
            raise ValueError("taus must be non-empty and strictly decreasing")
        if (self.problem is None) == (self.rhs is None):
            raise ValueError("give exactly one of problem= (builtin) or rhs= (inline)")
        if self.problem is not None and self.problem not in BUILTIN_PROBLEMS:
            raise ValueError(f"unknown builtin problem {self.problem!r}")
        if self.problem is not None and self.a != 0.0:
            raise ValueError("builtin problems start at a = 0")
        if self.init is not None:
            object.__setattr__(self, "init", tuple(float(c) for c in self.init))

    def steps_for(self, tau: float) -> int:
        m = (self.b - self.a) / tau
        steps = round(m)
        if abs(m - steps) > 1e-9 * max(1.0, steps):
            raise ValueError(f"tau={tau} does not divide the interval [{self.a}, {self.b}]")
        return steps

    def make_problem(self, alpha: float, lam: float) -> Problem:
        if self.problem is not None:
            kwargs = {"b": self.b}
            if self.problem in ("example3", "relax"):
                kwargs["mu"] = self.mu
            return builtin_problem(self.problem, alpha, lam, **kwargs)
        rhs_ast = exprmod.parse(self.rhs)

        def rhs(t: float, u: float) -> float:
            return exprmod.evaluate(
                rhs_ast, {"t": t, "u": u, "alpha": alpha, "lambda": lam}
            )

        exact = None
        if self.exact is not None:
            exact_ast = exprmod.parse(self.exact)

            def exact(t: float) -> float:
                return exprmod.evaluate(
                    exact_ast, {"t": t, "alpha": alpha, "lambda": lam}
                )

        n = max(1, math.ceil(alpha))
        init = self.init if self.init is not None else (0.0,) * n
        return Problem(
            kind=self.kind, alpha=alpha, lam=lam, a=self.a, b=self.b,
            init=init, rhs=rhs, exact=exact,
        )

    def make_config(self, tau: float) -> SolverConfig:
        return SolverConfig(
            steps=self.steps_for(tau),
            n_interp=self.n_interp,
            n_quad=self.n_quad,
            start_refine=self.start_refine,
            split_t0=self.split_t0,
            n_tilde=self.n_tilde,
            corrector_iters=self.corrector_iters,
            exact_start=self.exact_start,
        )


@dataclass
class ReportRow:
    tau: float
    max_error: float
    order: float | None
    wall_ms: float


@dataclass
class ConvergenceReport:
    alpha: float
    lam: float
    rows: list[ReportRow]
    meta: dict = field(default_factory=dict)

    @property
    def errors(self) -> list[float]:
        return [r.max_error for r in self.rows]

    @property
    def orders(self) -> list[float | None]:
        return [r.order for r in self.rows[1:]]

    def fitted_order(self) -> float:
        """Order estimate at the finest refinement pair."""
        for r in reversed(self.rows):
            if r.order is not None:
                return r.order
        raise ValueError("report has no computable order entries")


def estimate_order(errors: Sequence[float]) -> list[float | None]:
    """Consecutive log2 error ratios for a halving sequence of step sizes.

    Entries where either error is non-positive or non-finite are flagged
    as ``None`` instead of being computed.
    """
    out: list[float | None] = []
    for prev, cur in zip(errors, errors[1:]):
        ok = (
            math.isfinite(prev) and math.isfinite(cur) and prev > 0.0 and cur > 0.0
        )
        out.append(math.log2(prev / cur) if ok else None)
    return out


def _max_error_vs_reference(trace: SolutionTrace, reference: SolutionTrace) -> float:
    stride = round(reference.config.steps / trace.config.steps)
    if stride * trace.config.steps != reference.config.steps:
        raise ValueError("reference grid does not refine the trace grid")
    ref = reference.values[::stride]
    return float(np.abs(trace.values[1:] - ref[1:]).max())


def run_sweep(sweep: Sweep) -> list[ConvergenceReport]:
    """Run every (alpha, lambda) column of the sweep.

    Columns are solved in the given order and step sizes from coarse to
    fine, so output is deterministic.  A solver blow-up is recorded as an
    infinite error for that row and the sweep continues.  Problems without
    an exact solution are measured against a reference solve at
    ``min(taus) / 4``.
    """
    reports = []
    for alpha in sweep.alphas:
        for lam in sweep.lambdas:
            problem = sweep.make_problem(alpha, lam)
            reference = None
            if problem.exact is None:
                ref_tau = min(sweep.taus) / 4.0
                reference = solve(problem, sweep.make_config(ref_tau))
            rows = []
            for tau in sweep.taus:
                config = sweep.make_config(tau)
                start = time.perf_counter()
                try:
                    trace = solve(problem, config)
                    err = (
                        trace.max_error()
                        if reference is None
                        else _max_error_vs_reference(trace, reference)
                    )
                except BlowUpError:
                    err = math.inf
                wall_ms = 1e3 * (time.perf_counter() - start)
                rows.append(ReportRow(tau=tau, max_error=err, order=None, wall_ms=wall_ms))
            for row, order in zip(rows[1:], estimate_order([r.max_error for r in rows])):
                row.order = order
            meta = {
                "alpha": alpha,
                "lambda": lam,
                "n_interp": sweep.n_interp,
                "n_quad": sweep.n_quad,
                "split_t0": sweep.split_t0,
                "n_tilde": sweep.n_tilde,
                "a": sweep.a,
                "b": sweep.b,
                "problem": sweep.problem or sweep.rhs,
                "error_baseline": "exact" if reference is None else "reference",
            }
            reports.append(ConvergenceReport(alpha=alpha, lam=lam, rows=rows, meta=meta))
    return reports


# ---------------------------------------------------------------------------
# Canned table configurations (T, degrees and step lists as printed)

_T123_TAUS = (1 / 10, 1 / 20, 1 / 40, 1 / 80, 1 / 160)
_T45_TAUS = (1 / 20, 1 / 40, 1 / 80, 1 / 160)

TABLES: dict[int, Sweep] = {
    1: Sweep(problem="example2", alphas=(0.5,), lambdas=(0.0, 2.0, 6.0),
             taus=_T123_TAUS, n_interp=7, n_quad=20, b=1.0),
    2: Sweep(problem="example2", alphas=(1.0,), lambdas=(0.0, 2.0, 6.0),
             taus=_T123_TAUS, n_interp=6, n_quad=20, b=1.0),
    3: Sweep(problem="example2", alphas=(1.5,), lambdas=(0.0, 2.0, 6.0),
             taus=_T123_TAUS, n_interp=6, n_quad=20, b=1.0),
    4: Sweep(problem="example3", alphas=(0.2, 0.9, 1.8), lambdas=(5.0,),
             taus=_T45_TAUS, n_interp=2, n_quad=20, b=1.1, mu=1.0,
             split_t0=0.1, n_tilde=40),
    5: Sweep(problem="example3", alphas=(0.2, 0.9, 1.8), lambdas=(10.0,),
             taus=_T45_TAUS, n_interp=2, n_quad=20, b=1.1, mu=1.0,
             split_t0=0.1, n_tilde=40),
}


def table_sweep(which: int) -> Sweep:
    """The canned sweep reproducing reference table 1-5."""
    try:
        return TABLES[which]
    except KeyError:
        raise ValueError(f"no table {which}; choose from 1-5") from None


# ---------------------------------------------------------------------------
# CSV input/output


def write_report_csv(stream, reports: Sequence[ConvergenceReport], *, wall_ms: bool = True) -> None:
    """Write sweep reports as CSV; fixed formats keep output reproducible."""
    writer = csv.writer(stream, lineterminator="\n")
    header = ["alpha", "lambda", "tau", "max_error", "order"]
    if wall_ms:
        header.append("wall_ms")
    writer.writerow(header)
    for rep in reports:
        for row in rep.rows:
            rec = [
                f"{rep.alpha:.10g}",
                f"{rep.lam:.10g}",
                f"{row.tau:.10g}",
                f"{row.max_error:.6e}",
                "" if row.order is None else f"{row.order:.4f}",
            ]
            if wall_ms:
                rec.append(f"{row.wall_ms:.3f}")
            writer.writerow(rec)


def report_csv_text(reports: Sequence[ConvergenceReport], *, wall_ms: bool = True) -> str:
    buf = io.StringIO()
    write_report_csv(buf, reports, wall_ms=wall_ms)
    return buf.getvalue()


def load_report_csv(stream) -> list[ConvergenceReport]:
    """Read a report CSV back, re-deriving and checking the order column.

    Raises ``ValueError`` if a stored order disagrees with the one
    recomputed from the error column by more than the print precision.
    """
    reader = csv.DictReader(stream)
    grouped: dict[tuple[float, float], list[ReportRow]] = {}
    for rec in reader:
        key = (float(rec["alpha"]), float(rec["lambda"]))
        order = float(rec["order"]) if rec["order"] else None
        grouped.setdefault(key, []).append(
            ReportRow(
                tau=float(rec["tau"]),
                max_error=float(rec["max_error"]),
                order=order,
                wall_ms=float(rec.get("wall_ms") or 0.0),
            )
        )
    reports = []
    for (alpha, lam), rows in grouped.items():
        recomputed = estimate_order([r.max_error for r in rows])
        for row, expect in zip(rows[1:], recomputed):
            stored = row.order
            if (stored is None) != (expect is None):
                raise ValueError(f"order column inconsistent for alpha={alpha}, lam={lam}")
            if stored is not None and abs(stored - expect) > 5e-4:
                raise ValueError(
                    f"order {stored} disagrees with recomputed {expect:.4f} "
                    f"for alpha={alpha}, lam={lam}"
                )
        reports.append(ConvergenceReport(alpha=alpha, lam=lam, rows=rows))
    return reports


def write_trace_csv(stream, trace: SolutionTrace) -> None:
    """Write a solution trace as ``t,u[,u_exact,abs_error]``."""
    writer = csv.writer(stream, lineterminator="\n")
    exact = trace.problem.exact
    if exact is not None:
        writer.writerow(["t", "u", "u_exact", "abs_error"])
        for t, u in zip(trace.times, trace.values):
            ue = exact(float(t))
            writer.writerow([f"{t:.16e}", f"{u:.16e}", f"{ue:.16e}", f"{abs(u - ue):.6e}"])
    else:
        writer.writerow(["t", "u"])
        for t, u in zip(trace.times, trace.values):
            writer.writerow([f"{t:.16e}", f"{u:.16e}"])
