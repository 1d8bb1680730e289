"""Hot numeric kernels: pairwise kernel accumulation and tube variances.

Each kernel has a numba fast path and a pure-numpy fallback. The fallback
is selected automatically when numba is unavailable, or forced by setting
the environment variable SDRKIT_NO_NUMBA=1 before import. Both paths are
importable directly (``*_numba`` / ``*_numpy``) for benchmarking.

Pair lists are always in row-major order over the index set
{(i, j): i = 1..n-1, j = 0..i-1}: (1,0), (2,0), (2,1), (3,0), ...
"""

from __future__ import annotations

import os

import numpy as np

NUMBA_ENV_VAR = "SDRKIT_NO_NUMBA"

# squared duplicate-row threshold: rows closer than 1e-12 share a line
_DEGENERATE_SQ = 1e-24

_disabled = os.environ.get(NUMBA_ENV_VAR, "").strip().lower() in ("1", "true", "yes")
try:
    if _disabled:
        raise ImportError("numba disabled by environment flag")
    from numba import njit

    _HAVE_NUMBA = True
except ImportError:
    njit = None
    _HAVE_NUMBA = False


def using_numba() -> bool:
    """True when the jitted kernel path is active."""
    return _HAVE_NUMBA


def warmup() -> None:
    """Force kernel compilation (a no-op on the numpy path).

    Call before forking worker processes so children load the compiled
    artifacts from the on-disk cache instead of recompiling.
    """
    z = np.array([[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]])
    y = np.array([0.0, 1.0, 2.0])
    tube_variances(z, y, 1.0)
    h_accumulate(z, np.array([1, 2], dtype=np.int64), np.array([0, 0], dtype=np.int64))


def pair_count(n: int) -> int:
    return n * (n - 1) // 2


def pair_index_arrays(n: int) -> tuple[np.ndarray, np.ndarray]:
    """Row-major (i, j) index arrays for all C(n,2) pairs."""
    ii = np.repeat(np.arange(1, n, dtype=np.int64), np.arange(1, n, dtype=np.int64))
    jj = np.arange(pair_count(n), dtype=np.int64) - ii * (ii - 1) // 2
    return ii, jj


def positions_to_pairs(pos: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Map condensed row-major positions back to (i, j) index pairs."""
    pos = np.asarray(pos, dtype=np.int64)
    ii = ((1.0 + np.sqrt(8.0 * pos + 1.0)) // 2).astype(np.int64)
    base = ii * (ii - 1) // 2
    over = base > pos
    ii[over] -= 1
    base[over] = ii[over] * (ii[over] - 1) // 2
    under = pos - base >= ii
    ii[under] += 1
    base[under] = ii[under] * (ii[under] - 1) // 2
    return ii, pos - base


def condensed_abs_diffs(y: np.ndarray) -> np.ndarray:
    """|y_i - y_j| for all pairs, condensed in row-major order."""
    y = np.ascontiguousarray(y, dtype=np.float64)
    n = y.shape[0]
    out = np.empty(pair_count(n))
    pos = 0
    for i in range(1, n):
        out[pos : pos + i] = np.abs(y[i] - y[:i])
        pos += i
    return out


# ---------------------------------------------------------------------------
# kernel accumulation: sum of outer products of selected difference vectors
# ---------------------------------------------------------------------------


def _h_accumulate_loop(x, rows_i, rows_j):
    p = x.shape[1]
    h = np.zeros((p, p))
    d = np.empty(p)
    for m in range(rows_i.shape[0]):
        i = rows_i[m]
        j = rows_j[m]
        for a in range(p):
            d[a] = x[j, a] - x[i, a]
        for a in range(p):
            for b in range(p):
                h[a, b] += d[a] * d[b]
    return h


def h_accumulate_numpy(x, rows_i, rows_j):
    """Sequential accumulation, bitwise-identical to a naive pair loop."""
    p = x.shape[1]
    h = np.zeros((p, p))
    for i, j in zip(rows_i, rows_j):
        d = x[j] - x[i]
        h += np.outer(d, d)
    return h


if _HAVE_NUMBA:
    h_accumulate_numba = njit(cache=True)(_h_accumulate_loop)


def h_accumulate(x, rows_i, rows_j) -> np.ndarray:
    """Sum over listed pairs of (x_j - x_i)(x_j - x_i)^T, in list order.

    Accumulation is strictly sequential so results are bitwise reproducible
    and independent of the execution path.
    """
    x = np.ascontiguousarray(x, dtype=np.float64)
    rows_i = np.ascontiguousarray(rows_i, dtype=np.int64)
    rows_j = np.ascontiguousarray(rows_j, dtype=np.int64)
    if _HAVE_NUMBA:
        return h_accumulate_numba(x, rows_i, rows_j)
    return h_accumulate_numpy(x, rows_i, rows_j)


# ---------------------------------------------------------------------------
# tube variances: response variance inside the rho-tube around each pair line
# ---------------------------------------------------------------------------


def _tube_variances_loop(gram, sq, yc, rho2, rows_i, rows_j):
    n = gram.shape[0]
    m = rows_i.shape[0]
    var = np.empty(m)
    cnt = np.zeros(m, dtype=np.int64)
    for idx in range(m):
        i = rows_i[idx]
        j = rows_j[idx]
        dji = sq[i] + sq[j] - 2.0 * gram[i, j]
        if dji <= _DEGENERATE_SQ:
            var[idx] = np.inf
            continue
        members = 0
        sy = 0.0
        syy = 0.0
        for k in range(n):
            dki = sq[k] + sq[i] - 2.0 * gram[k, i]
            t = gram[k, j] - gram[k, i] - gram[i, j] + sq[i]
            d2 = dki - t * t / dji
            if d2 <= rho2:
                members += 1
                sy += yc[k]
                syy += yc[k] * yc[k]
        mu = sy / members
        v = syy / members - mu * mu
        if v < 0.0:
            v = 0.0
        var[idx] = v
        cnt[idx] = members
    return var, cnt


def tube_variances_numpy(gram, sq, yc, rho2, rows_i, rows_j):
    """Vectorized fallback, blocked over groups of pairs sharing index i."""
    n = gram.shape[0]
    m = rows_i.shape[0]
    var = np.empty(m)
    cnt = np.zeros(m, dtype=np.int64)
    yc2 = yc * yc
    bounds = np.searchsorted(rows_i, np.arange(n + 1))
    for i in range(1, n):
        s, e = bounds[i], bounds[i + 1]
        if s == e:
            continue
        js = rows_j[s:e]
        dji = sq[i] + sq[js] - 2.0 * gram[i, js]
        good = dji > _DEGENERATE_SQ
        dki = sq + sq[i] - 2.0 * gram[:, i]
        t = gram[:, js] - gram[:, i : i + 1] - gram[i, js][None, :] + sq[i]
        with np.errstate(divide="ignore", invalid="ignore"):
            d2 = dki[:, None] - (t * t) / dji[None, :]
        mask = d2 <= rho2
        members = mask.sum(axis=0)
        members_safe = np.maximum(members, 1)
        mu = (yc @ mask) / members_safe
        v = np.maximum((yc2 @ mask) / members_safe - mu * mu, 0.0)
        v[~good] = np.inf
        var[s:e] = v
        cnt[s:e] = np.where(good, members, 0)
    return var, cnt


if _HAVE_NUMBA:
    tube_variances_numba = njit(cache=True)(_tube_variances_loop)


def tube_variances(z, y, rho, rows_i=None, rows_j=None):
    """Response variance within the rho-tube of each listed pair of rows.

    Returns (variances, member_counts) aligned with the pair list (all
    C(n,2) pairs in row-major order by default). Pairs whose endpoints
    coincide get variance inf and count 0. Distances come from the Gram
    matrix, so memory is O(n^2); the variance uses the 1/n_ij divisor on
    the globally centered response.
    """
    z = np.ascontiguousarray(z, dtype=np.float64)
    y = np.ascontiguousarray(y, dtype=np.float64)
    n = z.shape[0]
    if rows_i is None:
        rows_i, rows_j = pair_index_arrays(n)
    rows_i = np.ascontiguousarray(rows_i, dtype=np.int64)
    rows_j = np.ascontiguousarray(rows_j, dtype=np.int64)
    gram = z @ z.T
    sq = np.ascontiguousarray(np.diag(gram))
    yc = y - y.mean()
    rho2 = float(rho) * float(rho)
    if _HAVE_NUMBA:
        return tube_variances_numba(gram, sq, yc, rho2, rows_i, rows_j)
    return tube_variances_numpy(gram, sq, yc, rho2, rows_i, rows_j)
