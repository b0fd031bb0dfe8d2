"""Certified maximum of |0.675 g2^2 - 0.291 g2 g1^2 + 0.033 g1^4| over the torus.

g1 = 1 + e^{i t1} + e^{i t2} and g2 = e^{i(t1+t2)} + e^{i t1} + e^{i t2}.
Two searches: a flat grid reproducing the historical table (period taken
as 6.2832) and a dyadic branch-and-bound on the exact [0, 2 pi]^2 that
keeps every discarded box in a ledger so the certificate can be re-checked.
"""

from __future__ import annotations

import math
import os
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import minimize

from ..errors import BudgetExceeded, CertificateMissing, Inconclusive, OutOfRange

C1, C2, C3 = 0.675, -0.291, 0.033
PERIOD_TABLE = 6.2832
# |g1| <= 3, |g2| <= 3, |dg1| <= 2d, |dg2| <= 4d in the sup-distance d
LIPSCHITZ = abs(C1) * 24 + abs(C2) * 72 + abs(C3) * 216
assert abs(LIPSCHITZ - 44.28) < 1e-12
DEFAULT_BUDGET = 10 ** 11
TIE_BAND = 1e-12


def _g_fast(u1: np.ndarray, u2: np.ndarray) -> np.ndarray:
    g0 = u1 + u2
    g1 = g0 + 1.0
    g2 = g0 + u1 * u2
    g1s = g1 * g1
    return np.abs(C1 * (g2 * g2) + C2 * g2 * g1s + C3 * (g1s * g1s))


def _g_grid(t1: np.ndarray, u1: np.ndarray, t2: np.ndarray, u2: np.ndarray) -> np.ndarray:
    # same operation order as the historical program, so ties break identically
    g0 = u1 + u2
    g1 = g0 + 1.0
    ts = t1 + t2
    g2 = g0 + (np.cos(ts) + 1j * np.sin(ts))
    g1s = g1 * g1
    return np.abs(C1 * (g2 * g2) + C2 * g2 * g1s + C3 * (g1s * g1s))


def appendixC_g(theta1, theta2):
    """Complex value of the objective (its modulus is what is maximised)."""
    u1, u2 = np.exp(1j * np.asarray(theta1, dtype=float)), np.exp(1j * np.asarray(theta2, dtype=float))
    g1 = 1 + u1 + u2
    g2 = u1 * u2 + u1 + u2
    out = C1 * g2 ** 2 + C2 * g2 * g1 ** 2 + C3 * g1 ** 4
    return complex(out) if np.ndim(out) == 0 else out


def appendixC_abs(theta1, theta2):
    return np.abs(appendixC_g(theta1, theta2))


@dataclass(frozen=True, eq=False)
class CertifiedMaximum:
    grid_max: float
    argmax: tuple[float, float]
    lipschitz: float
    step: float
    global_upper_bound: float
    certified_below: float | None
    evaluations: int = 0
    elapsed: float = 0.0
    disproof: bool = False
    ledger: "BoxLedger | None" = field(default=None, repr=False)


def default_workers() -> int:
    return max(1, len(os.sched_getaffinity(0)) if hasattr(os, "sched_getaffinity") else os.cpu_count() or 1)


# -- flat grid ------------------------------------------------------------------

def _grid_nodes(step: float) -> np.ndarray:
    n = int(PERIOD_TABLE / step)
    # node index goes through single precision as in the original program
    return np.arange(n + 1).astype(np.float32).astype(np.float64) * step


def grid_search_appendixC(
    step: float,
    workers: int | None = None,
    budget: int = DEFAULT_BUDGET,
    target: float = 1.0,
    chunk_rows: int = 64,
) -> CertifiedMaximum:
    if not 0 < step <= 1e-2:
        raise OutOfRange("step must lie in (0, 1e-2]")
    t = _grid_nodes(step)
    m = t.size
    if m * m > budget:
        raise BudgetExceeded(f"{m * m} evaluations exceed the budget {budget}")
    u = np.cos(t) + 1j * np.sin(t)
    start = time.perf_counter()

    def work(r0):
        rows = slice(r0, min(r0 + chunk_rows, m))
        vals = _g_fast(u[rows, None], u[None, :])
        # near-ties are re-evaluated in the reference arithmetic
        cand = np.flatnonzero(vals >= vals.max() - TIE_BAND)
        ci, cj = r0 + cand // m, cand % m
        exact = _g_grid(t[ci], u[ci], t[cj], u[cj])
        k = int(np.argmax(exact))
        return float(exact[k]), int(ci[k]), int(cj[k])

    workers = workers or default_workers()
    with ThreadPoolExecutor(max_workers=workers) as pool:
        parts = list(pool.map(work, range(0, m, chunk_rows)))
    # max value, ties to the lexicographically first node
    best = max(parts, key=lambda p: (p[0], -p[1], -p[2]))
    wrap_gap = 2 * np.pi - t[-1]
    radius = max(step, wrap_gap) / 2
    upper = best[0] + LIPSCHITZ * radius
    return CertifiedMaximum(
        grid_max=best[0],
        argmax=(float(t[best[1]]), float(t[best[2]])),
        lipschitz=LIPSCHITZ,
        step=step,
        global_upper_bound=upper,
        certified_below=target if upper < target else None,
        evaluations=m * m,
        elapsed=time.perf_counter() - start,
    )


def appendixC_table_row(res: CertifiedMaximum) -> str:
    """One line in the layout of the historical table."""
    return f" {res.step:19.15f} {res.grid_max:19.15f} {res.argmax[0]:14.10f} {res.argmax[1]:14.10f}"


# -- branch and bound ---------------------------------------------------------------

EVAL_CHUNK = 1 << 18

# |g| is unchanged by swapping the angles and by negating both (real
# coefficients), so only boxes with i <= j and i + j <= 2^level - 1 are
# searched. Every cell has such a representative in its orbit and the
# parent of a canonical box is canonical, so leaves of the canonical tree
# together with their images tile the torus.


def _canonical(level: int, i: np.ndarray, j: np.ndarray) -> np.ndarray:
    return (i <= j) & (i + j <= (1 << level) - 1)


def _start_boxes(level: int):
    ii, jj = np.meshgrid(np.arange(1 << level, dtype=np.int32), np.arange(1 << level, dtype=np.int32), indexing="ij")
    keep = _canonical(level, ii, jj)
    return ii[keep], jj[keep]


def _children(level: int, i: np.ndarray, j: np.ndarray):
    """Canonical children (at level + 1) in a fixed order."""
    ci = (np.repeat(2 * i, 4) + np.tile(np.array([0, 0, 1, 1], np.int32), i.size)).astype(np.int32)
    cj = (np.repeat(2 * j, 4) + np.tile(np.array([0, 1, 0, 1], np.int32), j.size)).astype(np.int32)
    keep = _canonical(level + 1, ci, cj)
    return ci[keep], cj[keep]


def _centers(level, i, j):
    w = 2 * np.pi / np.exp2(level)
    return (i + 0.5) * w, (j + 0.5) * w


def _eval_boxes(level, i, j, pool=None):
    if pool is None or i.size <= EVAL_CHUNK:
        return appendixC_abs(*_centers(level, i, j))
    parts = pool.map(
        lambda s: appendixC_abs(*_centers(level, i[s:s + EVAL_CHUNK], j[s:s + EVAL_CHUNK])),
        range(0, i.size, EVAL_CHUNK),
    )
    return np.concatenate(list(parts))


def _round_down32(x: np.ndarray) -> np.ndarray:
    y = x.astype(np.float32)
    high = y.astype(np.float64) > x
    y[high] = np.nextafter(y[high], np.float32(-np.inf))
    return y


@dataclass(frozen=True, eq=False)
class BoxLedger:
    """Replayable record of a branch-and-bound run.

    ``split[k]`` has one flag per box of level ``start_level + k`` (in the
    order the search visits them); unflagged boxes are leaves. For each
    leaf ``slack`` holds target - bound rounded down to float32, so the
    recorded bound never understates the true one.
    """

    start_level: int
    lipschitz: float
    target: float
    split: list[np.ndarray]
    slack: np.ndarray

    @property
    def leaf_count(self) -> int:
        return int(self.slack.size)

    @property
    def bounds(self) -> np.ndarray:
        return self.target - self.slack.astype(np.float64)

    @property
    def max_level(self) -> int:
        return self.start_level + len(self.split) - 1

    def save(self, path: str) -> str:
        np.savez(
            path,
            start_level=self.start_level,
            lipschitz=self.lipschitz,
            target=self.target,
            sizes=np.array([f.size for f in self.split], dtype=np.int64),
            split=np.packbits(np.concatenate(self.split)),
            slack=self.slack,
        )
        return path if path.endswith(".npz") else path + ".npz"

    @classmethod
    def load(cls, path: str) -> "BoxLedger":
        with np.load(path) as f:
            sizes = f["sizes"]
            flat = np.unpackbits(f["split"], count=int(sizes.sum())).astype(bool)
            split = np.split(flat, np.cumsum(sizes)[:-1])
            return cls(int(f["start_level"]), float(f["lipschitz"]), float(f["target"]), split, f["slack"])


def _polish(theta):
    res = minimize(lambda x: -appendixC_abs(x[0], x[1]), theta, method="Nelder-Mead",
                   options={"xatol": 1e-12, "fatol": 1e-15})
    if -res.fun > appendixC_abs(*theta):
        return tuple(float(v) for v in res.x), float(-res.fun)
    return tuple(float(v) for v in theta), float(appendixC_abs(*theta))


def certified_max_bb(
    objective: str = "appendixC",
    L: float = LIPSCHITZ,
    target: float = 1.0,
    budget: int = 200_000_000,
    workers: int | None = None,
    start_level: int = 4,
    max_level: int = 28,
) -> CertifiedMaximum:
    """Dyadic branch-and-bound over [0, 2 pi]^2 with bound |g(center)| + L * half-width.

    A box is discarded once its bound is below ``target``; the run keeps a
    ``BoxLedger`` so the verdict can be replayed. A center value at or above
    ``target`` ends the search with a disproof. Running out of budget or
    depth raises Inconclusive.
    """
    if objective.lower() != "appendixc":
        raise ValueError("only the 'appendixC' objective is available")
    if L <= 0:
        raise ValueError("Lipschitz constant must be positive")
    start = time.perf_counter()
    level = start_level
    i, j = _start_boxes(level)
    split, slack_out = [], []
    evals = 0
    best_val, best_arg = -np.inf, (0.0, 0.0)
    max_bound = -np.inf
    workers = workers or default_workers()
    with ThreadPoolExecutor(max_workers=workers) as pool:
        while i.size:
            if evals + i.size > budget:
                raise Inconclusive(f"budget of {budget} evaluations reached at depth {level}")
            if level > max_level:
                raise Inconclusive(f"depth limit {max_level} reached")
            vals = _eval_boxes(level, i, j, pool)
            evals += i.size
            k = int(np.argmax(vals))
            if vals[k] > best_val:
                best_val = float(vals[k])
                best_arg = tuple(float(c) for c in _centers(level, i[k], j[k]))
            if best_val >= target:
                arg, val = _polish(np.array(best_arg))
                return CertifiedMaximum(val, arg, L, 2 * np.pi / 2 ** level, math.inf, None,
                                        evals, time.perf_counter() - start, disproof=True)
            bounds = vals + L * (np.pi / 2 ** level)
            go = bounds >= target
            split.append(go)
            if not go.all():
                slack = _round_down32(target - bounds[~go])
                slack_out.append(slack)
                max_bound = max(max_bound, target - float(slack.min()))
            del vals, bounds
            i, j = _children(level, i[go], j[go])
            level += 1
    ledger = BoxLedger(start_level, L, target, split, np.concatenate(slack_out))
    arg, val = _polish(np.array(best_arg))
    return CertifiedMaximum(
        grid_max=val,
        argmax=arg,
        lipschitz=L,
        step=2 * np.pi / 2 ** ledger.max_level,
        global_upper_bound=max_bound,
        certified_below=target if max_bound < target else None,
        evaluations=evals,
        elapsed=time.perf_counter() - start,
        ledger=ledger,
    )


def verify_certificate(ledger: BoxLedger, images: bool = True) -> bool:
    """Replay a ledger independently of the search.

    The box tree is rebuilt from the split flags alone; every leaf (and,
    with ``images``, each of its symmetric images) is re-evaluated, its
    bound recomputed with the ledger's Lipschitz constant (which must be at
    least LIPSCHITZ) and compared
    with the recorded bound and with the target. The tree must close:
    the last level splits nothing and every flag and bound is consumed.
    """
    L, target = ledger.lipschitz, ledger.target
    if not L >= LIPSCHITZ:
        # a smaller constant proves nothing about g
        return False
    level = ledger.start_level
    i, j = _start_boxes(level)
    used = 0
    for k, go in enumerate(ledger.split):
        if go.size != i.size:
            return False
        li, lj = i[~go], j[~go]
        n = li.size
        rec = target - ledger.slack[used:used + n].astype(np.float64)
        if rec.size != n or np.any(rec >= target):
            return False
        used += n
        half = np.pi / 2 ** level
        top = (1 << level) - 1
        variants = [(li, lj)]
        if images:
            variants += [(lj, li), (top - li, top - lj), (top - lj, top - li)]
        for vi, vj in variants:
            for s in range(0, n, EVAL_CHUNK):
                sl = slice(s, s + EVAL_CHUNK)
                b = appendixC_abs(*_centers(level, vi[sl], vj[sl])) + L * half
                if np.any(b >= target) or np.any(b > rec[sl] + 1e-13):
                    return False
        i, j = _children(level, i[go], j[go])
        level += 1
    return i.size == 0 and used == ledger.slack.size


# -- the constant for the second-order Caratheodory data -----------------------------

@dataclass(frozen=True)
class CaratheodoryBound:
    value: float
    certificate: CertifiedMaximum


def caratheodory_gamma2_G3_lower(certificate: CertifiedMaximum | None) -> CaratheodoryBound:
    """sqrt(0.675), available only together with a max-below-1 certificate."""
    if certificate is None or certificate.certified_below is None or certificate.certified_below > 1.0:
        raise CertificateMissing("needs a certificate that the maximum is below 1")
    if certificate.global_upper_bound >= 1.0:
        raise CertificateMissing("certificate bound is not below 1")
    return CaratheodoryBound(math.sqrt(C1), certificate)
