"""Non-classicality indicator eta = int |W| - 1 for stationary states.

Two deliberately independent routes:

* eta_radial: after the 45-degree rotation and axis rescaling that
  diagonalize y(q, p), the damped Wigner function W_n depends on the single
  variable y and the Jacobian is 1/2 independently of the dissipation
  parameter, so

      eta(n) = (1/2) int_0^inf exp(-y/2) |L_n(y)| dy - 1,

  a 1D integral evaluated with Newton-located Laguerre roots and
  per-interval Gauss-Legendre panels; the tail beyond the last root uses
  the exact total int_0^inf exp(-y/2) L_n(y) dy = 2 (-1)^n.

* eta_grid: adaptive 2D panel quadrature of (|W| - W) over a box, with
  embedded error estimates from one level of panel refinement.  The
  normalization is re-imposed internally (eta = int(|W| - W) / int W), so
  a rescaled input yields the same indicator.

The sequence eta(n) is strictly increasing and lambda-free; the reference
values below anchor n = 0..9.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .errors import BoxTooSmallError, ConvergenceError
from .grid import GridField
from .models import DampedParams, damped_wigner_values, laguerre_pair

# Reference eta(n) for the damped oscillator, n = 0..9 (lambda-independent);
# the acceptance anchor for the radial method at 1e-8 absolute.
ETA_REFERENCE = (
    0.0,
    0.4261226344263795,
    0.7289892587057898,
    0.9766730799293403,
    1.1913424288065964,
    1.3834384856692004,
    1.5588521972493026,
    1.7212933835545317,
    1.873265816082318,
    2.016572434609475,
)


@dataclass(frozen=True)
class NegativityRecord:
    model: str
    n: int
    lam: float
    method: str
    eta: float
    err_estimate: float


@dataclass(frozen=True)
class LambdaScanReport:
    n: int
    tol: float
    radial: NegativityRecord
    grid: tuple
    max_deviation: float
    ok: bool
    lams: tuple = field(default_factory=tuple)


def _max_workers(n_tasks: int) -> int:
    cap = os.environ.get("MOYAL_THREADS", "1")
    try:
        cap = max(1, int(cap))
    except ValueError:
        cap = 1
    return max(1, min(cap, n_tasks))


# ---------------------------------------------------------------------------
# radial method
# ---------------------------------------------------------------------------


def laguerre_roots(n: int) -> np.ndarray:
    """All n roots of L_n, by interlacing brackets plus safeguarded Newton.

    Roots of consecutive Laguerre polynomials interlace, so walking k up
    from 1 gives bracketing intervals in which Newton cannot escape; a
    bisection fallback guards the rare overshoot.
    """
    roots = np.empty(0)
    for k in range(1, n + 1):
        brackets = np.concatenate([[0.0], roots, [4.0 * k + 2.0]])
        new = np.empty(k)
        for j in range(k):
            lo, hi = brackets[j], brackets[j + 1]
            x = 0.5 * (lo + hi)
            for _ in range(100):
                Lk, Lkm1 = laguerre_pair(k, x)
                # y L_k' = k (L_k - L_{k-1})
                deriv = k * (Lk - Lkm1) / x
                if Lk == 0.0:
                    break
                flo, _ = laguerre_pair(k, lo)
                if (Lk > 0) == (flo > 0):
                    lo = x
                else:
                    hi = x
                step = Lk / deriv if deriv != 0.0 else 0.0
                x_new = x - step
                if not lo < x_new < hi:
                    x_new = 0.5 * (lo + hi)
                if abs(x_new - x) <= 1e-15 * max(1.0, x):
                    x = x_new
                    break
                x = x_new
            else:
                raise ConvergenceError(f"Laguerre root iteration stalled (k={k})")
            new[j] = x
        roots = new
    return roots


_GL32 = np.polynomial.legendre.leggauss(32)
_GL64 = np.polynomial.legendre.leggauss(64)


def _signed_interval_integrals(n: int, edges: np.ndarray, rule):
    """int exp(-y/2) L_n(y) dy on each [edges[i], edges[i+1]]."""
    nodes, weights = rule
    lo = edges[:-1]
    hi = edges[1:]
    mid = 0.5 * (lo + hi)[:, None]
    rad = 0.5 * (hi - lo)[:, None]
    y = mid + rad * nodes[None, :]
    Ln, _ = laguerre_pair(n, y)
    vals = np.exp(-0.5 * y) * Ln
    return (vals * weights[None, :] * rad).sum(axis=1)


def eta_radial(n: int, lam: float = 0.0) -> NegativityRecord:
    """eta(n) by the 1D radial route; exactly lambda-free by construction."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    if n == 0:
        return NegativityRecord("damped", 0, lam, "radial", 0.0, 0.0)
    roots = laguerre_roots(n)
    edges = np.concatenate([[0.0], roots])
    parts64 = _signed_interval_integrals(n, edges, _GL64)
    parts32 = _signed_interval_integrals(n, edges, _GL32)
    quad_err = float(np.abs(parts64 - parts32).sum())
    # |L_n| alternates sign starting positive at y=0
    absolute = np.abs(parts64).sum()
    # tail beyond the last root from the exact full-line total 2 (-1)^n
    tail = 2.0 * (-1.0) ** n - parts64.sum()
    absolute += abs(tail)
    eta = float(0.5 * absolute - 1.0)
    err = 0.5 * (quad_err + 1e-14 * (1.0 + abs(eta)))
    return NegativityRecord("damped", n, lam, "radial", eta, float(err))


# ---------------------------------------------------------------------------
# grid method (adaptive 2D panels)
# ---------------------------------------------------------------------------

_GL8 = np.polynomial.legendre.leggauss(8)
_MAX_PANELS = 60_000


def _quarter_boxes(qa, qb, pa, pb):
    qm = 0.5 * (qa + qb)
    pm = 0.5 * (pa + pb)
    return ((qa, qm, pa, pm), (qa, qm, pm, pb),
            (qm, qb, pa, pm), (qm, qb, pm, pb))


class _Panel:
    """One leaf of the adaptive subdivision.

    Holds the refined estimate (sum over the panel's four quarters) and the
    embedded error |refined - coarse| used to rank refinement candidates.
    """

    __slots__ = ("box", "neg", "tot", "err", "quarter_data")

    def __init__(self, box, coarse, quarter_data):
        self.box = box
        self.neg = sum(q[0] for q in quarter_data)
        self.tot = sum(q[1] for q in quarter_data)
        self.err = abs(self.neg - coarse[0])
        self.quarter_data = quarter_data


def _eval_panels(func, boxes):
    """(int(|W|-W), int W) on each box, one vectorized call for all boxes."""
    nodes, weights = _GL8
    boxes = np.asarray(boxes, dtype=float)
    qm = 0.5 * (boxes[:, 0] + boxes[:, 1])
    qr = 0.5 * (boxes[:, 1] - boxes[:, 0])
    pm = 0.5 * (boxes[:, 2] + boxes[:, 3])
    pr = 0.5 * (boxes[:, 3] - boxes[:, 2])
    Q = qm[:, None, None] + qr[:, None, None] * nodes[None, :, None]
    P = pm[:, None, None] + pr[:, None, None] * nodes[None, None, :]
    vals = np.real(func(Q, P))
    w2 = np.outer(weights, weights)[None, :, :] * (qr * pr)[:, None, None]
    neg = ((np.abs(vals) - vals) * w2).sum(axis=(1, 2))
    tot = (vals * w2).sum(axis=(1, 2))
    return neg, tot


def _adaptive_eta(func, box, tol):
    """Globally adaptive quadrature: always refine the worst panel.

    Returns (int(|W|-W), int W, error estimate).  Deterministic: the heap
    is tie-broken by insertion order.
    """
    import heapq

    def make_panels(parent_boxes, coarse_list):
        quarters = [q for b in parent_boxes for q in _quarter_boxes(*b)]
        neg, tot = _eval_panels(func, quarters)
        panels = []
        for i, b in enumerate(parent_boxes):
            data = [(neg[4 * i + j], tot[4 * i + j]) for j in range(4)]
            panels.append(_Panel(b, coarse_list[i], data))
        return panels

    neg0, tot0 = _eval_panels(func, [box])
    root = make_panels([box], [(neg0[0], tot0[0])])[0]
    counter = 0
    heap = [(-root.err, counter, root)]
    total_neg, total_tot, total_err = root.neg, root.tot, root.err
    n_panels = 1
    while total_err > 0.4 * tol and heap:
        _, _, worst = heapq.heappop(heap)
        if n_panels > _MAX_PANELS:
            raise ConvergenceError("adaptive quadrature exceeded panel budget")
        total_neg -= worst.neg
        total_tot -= worst.tot
        total_err -= worst.err
        children = make_panels(list(_quarter_boxes(*worst.box)),
                               worst.quarter_data)
        n_panels += 3
        for child in children:
            counter += 1
            heapq.heappush(heap, (-child.err, counter, child))
            total_neg += child.neg
            total_tot += child.tot
            total_err += child.err
    return total_neg, total_tot, total_err


def _check_tail(func, box, tol):
    qa, qb, pa, pb = box
    volume = (qb - qa) * (pb - pa)
    edge = np.linspace(0.0, 1.0, 33)
    qs = qa + (qb - qa) * edge
    ps = pa + (pb - pa) * edge
    boundary = np.concatenate([
        np.abs(np.real(func(qs, np.full_like(qs, pa)))),
        np.abs(np.real(func(qs, np.full_like(qs, pb)))),
        np.abs(np.real(func(np.full_like(ps, qa), ps))),
        np.abs(np.real(func(np.full_like(ps, qb), ps))),
    ])
    limit = tol / volume
    if boundary.max() > limit:
        grow = 1.5
        required = (qa * grow, qb * grow, pa * grow, pb * grow)
        raise BoxTooSmallError(
            f"boundary magnitude {boundary.max():.3e} exceeds {limit:.3e}; "
            f"a box of at least {required} is needed", required_box=required)


def eta_grid(W, box=None, tol: float = 1e-4, model: str = "custom",
             n: int = 0, lam: float = 0.0) -> NegativityRecord:
    """eta by adaptive 2D quadrature of (|W| - W), renormalized by int W.

    W may be a vectorized callable W(Q, P) with `box` required, or a
    GridField (its own box is used).  The box must contain the support:
    the boundary values are checked against tol/volume and a too-small box
    raises BoxTooSmallError naming a sufficient one.
    """
    if isinstance(W, GridField):
        return _eta_from_gridfield(W, tol, model=model, n=n, lam=lam)
    if box is None:
        raise ValueError("a box is required when W is a callable")
    qa, qb, pa, pb = (float(v) for v in box)
    _check_tail(W, (qa, qb, pa, pb), tol)
    neg, tot, err = _adaptive_eta(W, (qa, qb, pa, pb), tol)
    if tot == 0.0:
        raise ConvergenceError("integral of W over the box vanished")
    eta = neg / tot
    err = err / abs(tot) + 0.1 * tol
    return NegativityRecord(model, n, lam, "grid", float(eta), float(err))


def _cell_integrals(W: np.ndarray, dq: float, dp: float, m: int = 16):
    """(int(|W|-W), int W) by bilinear cells with kink-cell subdivision."""
    c00 = W[:-1, :-1]
    c01 = W[:-1, 1:]
    c10 = W[1:, :-1]
    c11 = W[1:, 1:]
    cell_mean = 0.25 * (c00 + c01 + c10 + c11)
    tot = float(cell_mean.sum() * dq * dp)
    mins = np.minimum(np.minimum(c00, c01), np.minimum(c10, c11))
    maxs = np.maximum(np.maximum(c00, c01), np.maximum(c10, c11))
    peak = np.abs(W).max()
    neg = float((-2.0 * cell_mean[maxs <= 0.0]).sum() * dq * dp)
    # subdivide only genuine sign changes, not tail-level noise
    crossing = (mins < 0.0) & (maxs > 0.0) & (maxs - mins > 1e-13 * peak)
    idx = np.argwhere(crossing)
    if idx.size:
        t = (np.arange(m) + 0.5) / m
        TX = t[None, :, None]
        TY = t[None, None, :]
        i, j = idx[:, 0], idx[:, 1]
        vals = (W[i, j][:, None, None] * (1 - TX) * (1 - TY)
                + W[i, j + 1][:, None, None] * (1 - TX) * TY
                + W[i + 1, j][:, None, None] * TX * (1 - TY)
                + W[i + 1, j + 1][:, None, None] * TX * TY)
        neg += float(-2.0 * np.minimum(vals, 0.0).sum() * dq * dp / (m * m))
    return neg, tot


def _eta_from_gridfield(F: GridField, tol, model, n, lam) -> NegativityRecord:
    """Fixed-sample evaluation with Richardson extrapolation.

    The cell scheme has a clean O(h^2) error dominated by the trapezoid
    boundary-flux term along the nodal set; combining the full grid with a
    2x-coarsened subsample removes it.
    """
    spec = F.spec
    W = F.values.real
    box = (spec.qmin, spec.qmax, spec.pmin, spec.pmax)
    _check_tail(lambda Q, P: _bilinear_lookup(F, Q, P), box, tol)
    neg, tot = _cell_integrals(W, spec.dq, spec.dp)
    if tot == 0.0:
        raise ConvergenceError("integral of W over the grid vanished")
    if spec.nq % 2 == 1 and spec.np % 2 == 1:
        neg2, tot2 = _cell_integrals(W[::2, ::2], 2 * spec.dq, 2 * spec.dp)
        neg_ext = (4.0 * neg - neg2) / 3.0
        tot_ext = (4.0 * tot - tot2) / 3.0
        err = (abs(neg_ext - neg) + abs(tot_ext - tot)) / abs(tot) + 0.05 * tol
        return NegativityRecord(model, n, lam, "grid",
                                float(neg_ext / tot_ext), float(err))
    err = 4.0 * (spec.dq * spec.dp) + 0.1 * tol  # no extrapolation possible
    return NegativityRecord(model, n, lam, "grid", float(neg / tot), float(err))


def _bilinear_lookup(F: GridField, Q, P):
    spec = F.spec
    qi = np.clip((np.asarray(Q) - spec.qmin) / spec.dq, 0, spec.nq - 1.000001)
    pi = np.clip((np.asarray(P) - spec.pmin) / spec.dp, 0, spec.np - 1.000001)
    i0 = qi.astype(int)
    j0 = pi.astype(int)
    tx = qi - i0
    ty = pi - j0
    V = F.values.real
    return (V[i0, j0] * (1 - tx) * (1 - ty) + V[i0, j0 + 1] * (1 - tx) * ty
            + V[i0 + 1, j0] * tx * (1 - ty) + V[i0 + 1, j0 + 1] * tx * ty)


# ---------------------------------------------------------------------------
# damped-model conveniences and sweeps
# ---------------------------------------------------------------------------


def _envelope_radius(mu: float, n: int, c: float, lam: float) -> float:
    """Radius where exp(-mu r^2) times the L_n growth drops below 1e-12."""
    from math import lgamma

    r2 = np.log(1e12) / mu
    if n > 0:
        for _ in range(3):
            y_edge = c * (1.0 + abs(lam)) * r2
            r2 = (np.log(1e12) + max(0.0, n * np.log(max(y_edge, 2.0))
                                     - lgamma(n + 1.0))) / mu
    return float(np.sqrt(r2) * 1.1)


def damped_box(n: int, lam: float) -> tuple:
    """(q, p) box where the damped W_n envelope is below 1e-12 of its peak.

    Derived from the smallest eigenvalue sqrt((1-|lam|)/(1+|lam|)) of the
    exponent quadratic form, with a polynomial-growth allowance.
    """
    mu = np.sqrt((1.0 - abs(lam)) / (1.0 + abs(lam)))
    c = 2.0 / np.sqrt(1.0 - lam ** 2)
    r = _envelope_radius(mu, n, c, lam)
    return (-r, r, -r, r)


def eta_grid_damped(n: int, lam: float, tol: float = 1e-4) -> NegativityRecord:
    """eta_grid applied to the damped W_n via its stable evaluator.

    The quadrature runs in the 45-degree principal frame of the state,
    where the squeezed support is an axis-aligned rectangle; the rotation
    has unit Jacobian so eta is unchanged.
    """
    dp = DampedParams(lam, n)
    inv_sqrt2 = 1.0 / np.sqrt(2.0)

    def rotated(S, T):
        return damped_wigner_values(dp, (S + T) * inv_sqrt2, (S - T) * inv_sqrt2)

    c = 2.0 / np.sqrt(1.0 - lam ** 2)
    rs = _envelope_radius(0.5 * c * (1.0 - lam), n, c, lam)
    rt = _envelope_radius(0.5 * c * (1.0 + lam), n, c, lam)
    rec = eta_grid(rotated, (-rs, rs, -rt, rt), tol,
                   model="damped", n=n, lam=lam)
    return rec


def negativity_table(n_max: int, lam: float = 0.0,
                     method: str = "radial", tol: float = 1e-4) -> list:
    """Records for n = 0..n_max; eta(n) is strictly increasing."""
    if n_max < 0:
        raise ValueError("n_max must be nonnegative")
    if method not in ("radial", "grid"):
        raise ValueError("method must be 'radial' or 'grid'")
    ns = list(range(n_max + 1))
    if method == "radial":
        task = lambda n: eta_radial(n, lam)
    else:
        task = lambda n: eta_grid_damped(n, lam, tol)
    workers = _max_workers(len(ns))
    if workers == 1:
        return [task(n) for n in ns]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(task, ns))


def lambda_scan(n: int, lams, tol: float = 1e-3) -> LambdaScanReport:
    """Cross-method test of lambda independence.

    The radial value is lambda-free by construction, so comparing it with
    the grid value at each lambda is a genuine two-route check.
    """
    lams = tuple(float(v) for v in lams)
    if any(abs(v) >= 1.0 for v in lams):
        raise ValueError("all |lambda| must be < 1")
    radial = eta_radial(n)
    # the quadrature tolerance is clamped to a feasible floor; an
    # unreachable scan tolerance then yields an honest failure report
    grid_tol = min(max(tol / 3.0, 1e-6), 1e-3)
    workers = _max_workers(len(lams))
    task = lambda lam: eta_grid_damped(n, lam, grid_tol)
    if workers == 1:
        grid = [task(lam) for lam in lams]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            grid = list(pool.map(task, lams))
    devs = [abs(rec.eta - radial.eta) for rec in grid]
    max_dev = max(devs) if devs else 0.0
    return LambdaScanReport(n=n, tol=tol, radial=radial, grid=tuple(grid),
                            max_deviation=float(max_dev),
                            ok=bool(max_dev <= tol), lams=lams)
