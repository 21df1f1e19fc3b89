"""Jacobi predictor-corrector time stepper for tempered fractional ODEs.

Solves single-term initial value problems

    D^(alpha,lam) u(t) = f(t, u(t)),   t in (a, b],   n-1 < alpha <= n <= 2,

with the derivative taken in the Caputo or Riemann-Liouville tempered
sense, via the equivalent second-kind Volterra equation.  Each step applies
an (n_quad+1)-point Gauss-Lobatto rule whose Jacobi weight absorbs the
kernel singularity; the integrand's RHS values at quadrature times come
from Lagrange interpolation on ``n_interp`` neighbouring grid nodes, which
makes ``n_interp`` the design convergence order.  Cost per step does not
grow with the step index, so a whole solve is O(steps).

The first ``n_interp`` grid values come from a product-trapezoidal
predictor-corrector (fractional Adams) run on a refined auxiliary grid.
For solutions that are non-smooth at the start, :func:`solve_split`
integrates the history over ``[a, t0]`` with a fixed unit-weight
Gauss-Lobatto rule fed by the same refined starting machinery, and only
the smooth tail ``[t0, t]`` with the Jacobi-weight rule.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .quadrature import GaussLobattoRule, gauss_lobatto
from .specfun import rgamma

__all__ = [
    "Problem",
    "SolverConfig",
    "SolutionTrace",
    "SolverError",
    "BlowUpError",
    "volterra_forcing",
    "interpolate_values",
    "starting_values",
    "jpc_step",
    "solve",
    "solve_split",
]

CAPUTO = "caputo"
RIEMANN_LIOUVILLE = "rl"

_KIND_ALIASES = {
    "caputo": CAPUTO,
    "rl": RIEMANN_LIOUVILLE,
    "riemann-liouville": RIEMANN_LIOUVILLE,
    "riemann_liouville": RIEMANN_LIOUVILLE,
}

#: Relative offset used to evaluate quantities that are singular exactly at
#: the lower terminal (Riemann-Liouville forcing with nonzero g-data).
_SINGULAR_SHIFT = 1e-8

_BLOWUP_LIMIT = 1e12


class SolverError(RuntimeError):
    pass


class BlowUpError(SolverError):
    """The numerical solution left the finite range; records the bad step."""

    def __init__(self, step: int, t: float, value: float):
        super().__init__(
            f"solution blew up at step {step} (t = {t:.6g}): u = {value!r}"
        )
        self.step = step
        self.t = t
        self.value = value


@dataclass(frozen=True)
class Problem:
    """One tempered fractional initial value problem.

    ``init`` holds the n = ceil(alpha) initial data: for the Caputo kind the
    values ``d^k/dt^k (e^{lam t} u)`` at ``a`` (k = 0..n-1); for the
    Riemann-Liouville kind the values of the RL derivatives of order
    ``alpha - k - 1`` of ``e^{lam t} u`` at ``a``.  ``rhs(t, u)`` must be
    Lipschitz in ``u`` on the solution's range.
    """

    kind: str
    alpha: float
    lam: float
    a: float
    b: float
    init: tuple[float, ...]
    rhs: Callable[[float, float], float]
    exact: Callable[[float], float] | None = None

    def __post_init__(self):
        kind = _KIND_ALIASES.get(str(self.kind).lower())
        if kind is None:
            raise ValueError(f"unknown derivative kind {self.kind!r}")
        object.__setattr__(self, "kind", kind)
        if not 0.0 < self.alpha < 2.0:
            raise ValueError(f"alpha must lie in (0, 2), got {self.alpha}")
        if self.lam < 0.0:
            raise ValueError(f"tempering rate must be nonnegative, got {self.lam}")
        if not self.b > self.a:
            raise ValueError(f"need b > a, got [{self.a}, {self.b}]")
        object.__setattr__(self, "init", tuple(float(c) for c in self.init))
        if len(self.init) != self.n:
            raise ValueError(
                f"expected {self.n} initial value(s) for alpha={self.alpha}, "
                f"got {len(self.init)}"
            )

    @property
    def n(self) -> int:
        """Smallest integer >= alpha (alpha = 1 is treated with n = 1)."""
        return max(1, math.ceil(self.alpha))


@dataclass(frozen=True)
class SolverConfig:
    """Algorithm parameters for one solve.

    ``steps`` is the number of uniform steps (tau = (b-a)/steps), ``n_quad``
    the Gauss-Lobatto degree, ``n_interp`` the interpolation stencil size
    (the design order).  The starting procedure runs on a grid refined by
    ``start_refine``.  Setting ``split_t0`` switches to the split-interval
    scheme with an ``n_tilde``-degree unit-weight rule on ``[a, split_t0]``.
    With ``exact_start`` (and a problem that has an exact solution) the
    starting values are taken from the exact solution instead.
    """

    steps: int
    n_interp: int
    n_quad: int = 20
    start_refine: int = 64
    split_t0: float | None = None
    n_tilde: int = 40
    corrector_iters: int = 1
    exact_start: bool = False

    def __post_init__(self):
        if self.n_interp < 2:
            raise ValueError("n_interp must be at least 2")
        if self.steps < self.n_interp:
            raise ValueError(
                f"steps ({self.steps}) must be at least n_interp ({self.n_interp})"
            )
        if self.n_quad < self.n_interp:
            raise ValueError("n_quad must be at least n_interp")
        if self.start_refine < 1:
            raise ValueError("start_refine must be at least 1")
        if self.n_tilde < 2:
            raise ValueError("n_tilde must be at least 2")
        if self.corrector_iters < 1:
            raise ValueError("corrector_iters must be at least 1")


@dataclass
class SolutionTrace:
    """Uniform-grid solution: times t_0..t_M, values u_j and f(t_j, u_j)."""

    times: np.ndarray
    values: np.ndarray
    rhs_values: np.ndarray
    problem: Problem
    config: SolverConfig

    @property
    def tau(self) -> float:
        return (self.problem.b - self.problem.a) / self.config.steps

    def errors(self) -> np.ndarray:
        """Absolute errors against the problem's exact solution."""
        if self.problem.exact is None:
            raise ValueError("problem has no exact solution")
        ex = np.array([self.problem.exact(t) for t in self.times])
        return np.abs(self.values - ex)

    def max_error(self) -> float:
        """Max abs error over the grid nodes t_1..t_M (t_0 excluded)."""
        return float(self.errors()[1:].max())


# ---------------------------------------------------------------------------
# Volterra forcing


def _forcing_scaled(problem: Problem, t: np.ndarray | float) -> np.ndarray | float:
    """Initial-data forcing in the scaled variable w = e^{lam (t-a)} u.

    Caputo: sum_k c_k e^{-lam a} (t-a)^k / k!.
    RL:     sum_k g_k e^{-lam a} (t-a)^(alpha-k-1) / Gamma(alpha-k); singular
    at t = a whenever the highest-order datum is nonzero.
    """
    dt = np.asarray(t, dtype=float) - problem.a
    scale = math.exp(-problem.lam * problem.a)
    acc = np.zeros_like(dt)
    if problem.kind == CAPUTO:
        for k, ck in enumerate(problem.init):
            if ck != 0.0:
                acc += ck * scale / math.factorial(k) * dt**k
    else:
        for k, gk in enumerate(problem.init):
            # skip vanishing data so 0 * inf cannot poison the value at dt = 0
            if gk != 0.0:
                expo = problem.alpha - k - 1
                acc += gk * scale * rgamma(problem.alpha - k) * dt**expo
    return acc if acc.shape else float(acc)


def volterra_forcing(problem: Problem, t: float) -> float:
    """Forcing term of the equivalent Volterra equation at time ``t``.

    For Riemann-Liouville problems the forcing is singular at ``t = a``;
    that point is rejected (the solver itself works with a one-sided
    surrogate there, see :func:`solve`).
    """
    if t < problem.a:
        raise ValueError(f"t={t} is before the lower terminal a={problem.a}")
    if problem.kind == RIEMANN_LIOUVILLE and t == problem.a:
        if any(
            gk != 0.0 and problem.alpha - k - 1 < 0
            for k, gk in enumerate(problem.init)
        ):
            raise ValueError("Riemann-Liouville forcing is singular at t = a")
    dt = t - problem.a
    return math.exp(-problem.lam * dt) * float(_forcing_scaled(problem, t))


# ---------------------------------------------------------------------------
# Lagrange interpolation on uniform stencils


def _bary_weights(n_points: int) -> np.ndarray:
    return np.array(
        [(-1.0) ** i * math.comb(n_points - 1, i) for i in range(n_points)]
    )


def _stencil_interp(
    fs: np.ndarray,
    r: np.ndarray,
    last: int,
    n_points: int,
    bw: np.ndarray,
) -> np.ndarray:
    """Interpolate uniform-grid samples ``fs`` at real grid coordinates ``r``.

    Stencils are ``n_points`` consecutive indices within [0, last], centred
    on each target as nearly as possible (ties toward earlier nodes);
    targets beyond ``last`` are extrapolated from the clamped stencil.
    """
    ideal = r - 0.5 * (n_points - 1)
    i0 = np.ceil(ideal - 0.5).astype(int)
    np.clip(i0, 0, last - n_points + 1, out=i0)
    cols = i0[:, None] + np.arange(n_points)[None, :]
    d = r[:, None] - cols
    fv = fs[cols]
    with np.errstate(divide="ignore", invalid="ignore"):
        wd = bw / d
        out = (wd * fv).sum(axis=1) / wd.sum(axis=1)
    hit = np.abs(d) < 1e-9
    rows = np.nonzero(hit.any(axis=1))[0]
    if rows.size:
        out[rows] = fv[rows, np.abs(d[rows]).argmin(axis=1)]
    return out


def interpolate_values(
    times: Sequence[float],
    values: Sequence[float],
    s: float,
    n_points: int,
    extra: tuple[float, float] | None = None,
) -> float:
    """Evaluate the stencil interpolant of uniform-grid samples at ``s``.

    ``extra=(t_next, f_next)`` appends one node one step past the end of
    ``times`` (the corrector's predicted endpoint).  Raises if fewer than
    ``n_points`` nodes are available or ``s`` is outside the covered range.
    """
    times = np.asarray(times, dtype=float)
    values = np.asarray(values, dtype=float)
    if len(times) < 2:
        raise ValueError("need at least two nodes to define the grid")
    tau = times[1] - times[0]
    if np.abs(np.diff(times) - tau).max() > 1e-9 * tau:
        raise ValueError("time nodes must be uniformly spaced")
    if extra is not None:
        t_next, f_next = extra
        if not math.isclose(t_next, times[-1] + tau, rel_tol=0.0, abs_tol=1e-9 * tau):
            raise ValueError("extra node must sit one step past the last time")
        times = np.append(times, t_next)
        values = np.append(values, f_next)
    if len(times) < n_points:
        raise ValueError(
            f"insufficient history: {len(times)} nodes for a {n_points}-point stencil"
        )
    if not times[0] - 1e-9 * tau <= s <= times[-1] + 1e-9 * tau:
        raise ValueError(f"s={s} outside the covered range [{times[0]}, {times[-1]}]")
    r = np.array([(s - times[0]) / tau])
    out = _stencil_interp(values, r, len(times) - 1, n_points, _bary_weights(n_points))
    return float(out[0])


# ---------------------------------------------------------------------------
# Starting procedure: fractional Adams PECE on an auxiliary mesh


def _scaled_rhs(problem: Problem) -> Callable[[float, float], float]:
    """RHS in the scaled variable: G(t, w) = e^{lam (t-a)} f(t, e^{-lam (t-a)} w)."""
    lam, a, f = problem.lam, problem.a, problem.rhs

    def G(t: float, w: float) -> float:
        e = math.exp(lam * (t - a))
        return e * f(t, w / e)

    return G


def _adams_pece_scaled(problem: Problem, mesh: np.ndarray) -> np.ndarray:
    """Product-trapezoidal PECE solve of the scaled Volterra equation.

    Works on an arbitrary strictly increasing ``mesh`` starting at ``a``
    and returns w = e^{lam (t-a)} u at the mesh points.  One predictor
    (product rectangle) and one corrector (product trapezoid) per step.
    """
    alpha = problem.alpha
    rga = rgamma(alpha)
    G = _scaled_rhs(problem)
    npts = len(mesh)

    teval = mesh.copy()
    if problem.kind == RIEMANN_LIOUVILLE:
        teval[0] = mesh[0] + _SINGULAR_SHIFT * (mesh[1] - mesh[0])
    forc = np.asarray(_forcing_scaled(problem, teval), dtype=float)

    w = np.empty(npts)
    gv = np.empty(npts)
    w[0] = forc[0]
    gv[0] = G(teval[0], w[0])
    h = np.diff(mesh)

    for m in range(1, npts):
        T = mesh[m]
        p = T - mesh[:m + 1]
        pa = p**alpha
        # product-rectangle distances: int_{t_j}^{t_{j+1}} (T-s)^(alpha-1) ds
        i1 = (pa[:-1] - pa[1:]) / alpha
        pred = forc[m] + rga * float(i1 @ gv[:m])

        pa1 = pa * p
        i2 = (pa1[:-1] - pa1[1:]) / (alpha + 1.0)
        hm = h[:m]
        w_left = (i2 - p[1:] * i1) / hm
        w_right = (p[:-1] * i1 - i2) / hm
        known = float(w_left @ gv[:m])
        if m > 1:
            known += float(w_right[:-1] @ gv[1:m])
        gp = G(T, pred)
        val = forc[m] + rga * (known + w_right[-1] * gp)
        if not math.isfinite(val) or abs(val) > _BLOWUP_LIMIT:
            raise BlowUpError(m, T, val)
        w[m] = val
        gv[m] = G(T, val)
    return w


def starting_values(
    problem: Problem, config: SolverConfig
) -> list[tuple[float, float]]:
    """Solution values at the first ``n_interp`` coarse grid nodes.

    Computed with the fractional Adams scheme on a grid refined by
    ``start_refine`` over ``[a, a + (n_interp-1) tau]`` and sampled back at
    the coarse nodes; with ``exact_start`` set and an exact solution
    available, taken from the exact solution instead.
    """
    tau = (problem.b - problem.a) / config.steps
    nodes = problem.a + tau * np.arange(config.n_interp)
    if config.exact_start and problem.exact is not None:
        tev = nodes.copy()
        if problem.kind == RIEMANN_LIOUVILLE:
            tev[0] += _SINGULAR_SHIFT * tau
        return [(float(t), float(problem.exact(te))) for t, te in zip(nodes, tev)]
    refine = config.start_refine
    mesh = problem.a + (tau / refine) * np.arange((config.n_interp - 1) * refine + 1)
    w = _adams_pece_scaled(problem, mesh)
    u = np.exp(-problem.lam * (mesh - problem.a)) * w
    return [(float(mesh[j * refine]), float(u[j * refine])) for j in range(config.n_interp)]


# ---------------------------------------------------------------------------
# The predictor-corrector step


class _Stepper:
    """Per-solve state for the Jacobi predictor-corrector iteration.

    Interpolation acts on the exponentially scaled samples
    ``g_i = e^{lam (t_i - a)} f(t_i, u_i)`` (the integrand of the Volterra
    kernel, which is the quantity whose smoothness sets the scheme's order);
    the tempering factor is restored exactly afterwards.
    """

    def __init__(self, problem: Problem, config: SolverConfig, rule: GaussLobattoRule | None = None):
        self.problem = problem
        self.config = config
        self.rule = rule or gauss_lobatto(problem.alpha - 1.0, 0.0, config.n_quad)
        self.bw = _bary_weights(config.n_interp)
        self.tau = (problem.b - problem.a) / config.steps
        self.rga = rgamma(problem.alpha)
        # split-phase context, installed by solve_split
        self.hist_nodes: np.ndarray | None = None
        self.hist_weights: np.ndarray | None = None
        self.hist_f: np.ndarray | None = None

    def _history_part(self, t_next: float) -> float:
        kern = (t_next - self.hist_nodes) ** (self.problem.alpha - 1.0)
        kern *= np.exp(-self.problem.lam * (t_next - self.hist_nodes))
        return self.rga * float(self.hist_weights @ (kern * self.hist_f))

    def step(self, times: np.ndarray, gs: np.ndarray, n1: int) -> float:
        """Advance to times[n1] given scaled history gs[0..n1-1]; gs[n1] is scratch."""
        problem, config = self.problem, self.config
        t_next = float(times[n1])
        origin = problem.a if self.hist_nodes is None else float(config.split_t0)
        decay = math.exp(-problem.lam * (t_next - problem.a))
        base = decay * float(_forcing_scaled(problem, t_next))
        if self.hist_nodes is not None:
            base += self._history_part(t_next)
        half = 0.5 * (t_next - origin)
        s = half * (self.rule.nodes + 1.0) + origin
        pref = decay * half**problem.alpha * self.rga
        r = (s - problem.a) / self.tau
        wts = self.rule.weights

        # predict: every quadrature value interpolated from known history only
        gtil = _stencil_interp(gs, r, n1 - 1, config.n_interp, self.bw)
        u_new = base + pref * float(wts @ gtil)

        # correct: interpolation may use the predicted endpoint value
        for _ in range(config.corrector_iters):
            g_end = problem.rhs(t_next, u_new) / decay
            gs[n1] = g_end
            gtil = _stencil_interp(gs, r[:-1], n1, config.n_interp, self.bw)
            u_new = base + pref * (float(wts[:-1] @ gtil) + wts[-1] * g_end)
        if not math.isfinite(u_new) or abs(u_new) > _BLOWUP_LIMIT:
            raise BlowUpError(n1, t_next, u_new)
        return u_new


def jpc_step(
    problem: Problem,
    config: SolverConfig,
    times: Sequence[float],
    values: Sequence[float],
    rhs_values: Sequence[float],
    rule: GaussLobattoRule | None = None,
) -> float:
    """One predictor-corrector step: u at the node after the known history.

    ``times``/``values``/``rhs_values`` hold the grid and solution through
    t_n (with n >= n_interp - 1); returns u_{n+1} at t_{n+1} = t_n + tau.
    """
    known = len(values)
    if known != len(rhs_values) or known > len(times) - 1:
        raise ValueError("history arrays are inconsistent with the grid")
    if known < config.n_interp:
        raise ValueError("need at least n_interp known values to step")
    stepper = _Stepper(problem, config, rule)
    ts = np.asarray(times, dtype=float)
    gs = np.empty(known + 1)
    gs[:known] = np.exp(problem.lam * (ts[:known] - problem.a)) * np.asarray(
        rhs_values, dtype=float
    )
    return stepper.step(ts, gs, known)


# ---------------------------------------------------------------------------
# Full solves


def _new_trace(problem: Problem, config: SolverConfig) -> SolutionTrace:
    times = problem.a + (problem.b - problem.a) * np.arange(config.steps + 1) / config.steps
    return SolutionTrace(
        times=times,
        values=np.full(config.steps + 1, np.nan),
        rhs_values=np.full(config.steps + 1, np.nan),
        problem=problem,
        config=config,
    )


def solve(problem: Problem, config: SolverConfig) -> SolutionTrace:
    """Solve the problem on the uniform grid with the predictor-corrector.

    Dispatches to :func:`solve_split` when ``config.split_t0`` is set.
    Raises :class:`BlowUpError` (naming the step) if the solution leaves
    the finite range.
    """
    if config.split_t0 is not None:
        return solve_split(problem, config)
    trace = _new_trace(problem, config)
    grow = np.exp(problem.lam * (trace.times - problem.a))
    gs = np.full(config.steps + 1, np.nan)
    for t, u in starting_values(problem, config):
        j = int(round((t - problem.a) / trace.tau))
        trace.values[j] = u
        trace.rhs_values[j] = problem.rhs(t, u)
        gs[j] = grow[j] * trace.rhs_values[j]
    stepper = _Stepper(problem, config)
    for n1 in range(config.n_interp, config.steps + 1):
        u = stepper.step(trace.times, gs, n1)
        trace.values[n1] = u
        trace.rhs_values[n1] = problem.rhs(float(trace.times[n1]), u)
        gs[n1] = grow[n1] * trace.rhs_values[n1]
    return trace


def _merge_meshes(base: np.ndarray, extra: np.ndarray, tol: float) -> np.ndarray:
    merged = np.sort(np.concatenate([base, extra]))
    keep = np.concatenate([[True], np.diff(merged) > tol])
    return merged[keep]


def _nearest_indices(mesh: np.ndarray, targets: np.ndarray, tol: float) -> np.ndarray:
    idx = np.searchsorted(mesh, targets)
    idx = np.clip(idx, 1, len(mesh) - 1)
    left = np.abs(mesh[idx - 1] - targets) <= np.abs(mesh[idx] - targets)
    idx = idx - left.astype(int)
    if np.any(np.abs(mesh[idx] - targets) > tol):
        raise AssertionError("mesh lookup failed; points not on the mesh")
    return idx


def solve_split(problem: Problem, config: SolverConfig) -> SolutionTrace:
    """Split-interval solve for solutions that are non-smooth near ``a``.

    The history integral over ``[a, t0]`` uses a fixed (n_tilde+1)-point
    unit-weight Gauss-Lobatto rule with the kernel inside the integrand;
    the RHS values at those fixed nodes, and the trace values at the grid
    nodes up to ``t0``, come from the refined fractional-Adams starting
    run over ``[a, t0]``.  Beyond ``t0`` the scheme proceeds as in
    :func:`solve` with the Jacobi-weight rule on ``[t0, t]``.
    """
    t0 = config.split_t0
    if t0 is None:
        raise ValueError("solve_split requires config.split_t0")
    if not problem.a < t0 < problem.b:
        raise ValueError(f"split point {t0} must lie inside ({problem.a}, {problem.b})")
    trace = _new_trace(problem, config)
    tau = trace.tau
    j0 = int(round((t0 - problem.a) / tau))
    if j0 < 1 or abs(problem.a + j0 * tau - t0) > 1e-9 * tau:
        raise ValueError(f"split point {t0} is not aligned with the step {tau}")

    lob = gauss_lobatto(0.0, 0.0, config.n_tilde)
    s_hist = 0.5 * (t0 - problem.a) * (lob.nodes + 1.0) + problem.a
    w_hist = 0.5 * (t0 - problem.a) * lob.weights

    n_start = max(j0, config.n_interp - 1)
    base = problem.a + (tau / config.start_refine) * np.arange(
        n_start * config.start_refine + 1
    )
    # 1e-9*tau is far below any legitimate mesh gap but wide enough that a
    # fixed node coinciding with a grid point cannot leave a degenerate panel
    mesh = _merge_meshes(base, s_hist, tol=1e-9 * tau)
    w = _adams_pece_scaled(problem, mesh)
    u_mesh = np.exp(-problem.lam * (mesh - problem.a)) * w

    grow = np.exp(problem.lam * (trace.times - problem.a))
    gs = np.full(config.steps + 1, np.nan)
    grid_idx = _nearest_indices(mesh, trace.times[: n_start + 1], tol=1e-9 * tau)
    for j, im in enumerate(grid_idx):
        trace.values[j] = u_mesh[im]
        trace.rhs_values[j] = problem.rhs(float(trace.times[j]), float(u_mesh[im]))
        gs[j] = grow[j] * trace.rhs_values[j]
    hist_idx = _nearest_indices(mesh, s_hist, tol=1e-9 * tau)
    f_hist = np.array(
        [problem.rhs(float(s), float(u_mesh[im])) for s, im in zip(s_hist, hist_idx)]
    )

    stepper = _Stepper(problem, config)
    stepper.hist_nodes = s_hist
    stepper.hist_weights = w_hist
    stepper.hist_f = f_hist
    for n1 in range(n_start + 1, config.steps + 1):
        u = stepper.step(trace.times, gs, n1)
        trace.values[n1] = u
        trace.rhs_values[n1] = problem.rhs(float(trace.times[n1]), u)
        gs[n1] = grow[n1] * trace.rhs_values[n1]
    return trace
