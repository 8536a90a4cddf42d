"""Compiled inner loops of the split search.

Both kernels scan candidate splits of a column-subset matrix and return the
winner by weighted-SSE decrease, ties broken toward the lowest feature index
and then the lowest threshold (first strict improvement wins, features and
positions scanned in ascending order). They mirror the contracts documented
on tree.find_best_split.
"""

from __future__ import annotations

import numpy as np
from numba import njit


@njit(cache=True)
def best_exact_split(Xs, y, w, min_samples_leaf):
    """Scan midpoints of consecutive distinct sorted values per feature.

    Returns (feature, threshold, decrease); feature is -1 when no legal
    split strictly decreases the weighted SSE.
    """
    m, f = Xs.shape
    tw = 0.0
    twy = 0.0
    for i in range(m):
        tw += w[i]
        twy += w[i] * y[i]
    if tw <= 0.0:
        return -1, 0.0, 0.0
    best_score = -np.inf
    best_j = -1
    best_thr = 0.0
    col = np.empty(m, np.float64)
    for jf in range(f):
        for i in range(m):
            col[i] = Xs[i, jf]
        order = np.argsort(col)
        lw = 0.0
        lwy = 0.0
        for i in range(m - 1):
            k = order[i]
            lw += w[k]
            lwy += w[k] * y[k]
            a = col[order[i]]
            b = col[order[i + 1]]
            if a >= b:
                continue
            if i + 1 < min_samples_leaf or m - i - 1 < min_samples_leaf:
                continue
            rw = tw - lw
            rwy = twy - lwy
            if lw <= 0.0 or rw <= 0.0:
                continue
            score = lwy * lwy / lw + rwy * rwy / rw
            if score > best_score:
                best_score = score
                best_j = jf
                thr = a + (b - a) / 2.0
                if thr >= b:  # no float strictly between; equality-left keeps the partition
                    thr = a
                best_thr = thr
    if best_j < 0:
        return -1, 0.0, 0.0
    decrease = best_score - twy * twy / tw
    if decrease <= 0.0:
        return -1, 0.0, 0.0
    return best_j, best_thr, decrease


@njit(cache=True)
def best_random_split(Xs, y, w, min_samples_leaf, thresholds):
    """Evaluate one pre-drawn threshold per feature; keep the best.

    Returns (feature, decrease); feature is -1 when no legal split strictly
    decreases the weighted SSE. Constant features fail the leaf-size check
    (everything lands left) and drop out naturally.
    """
    m, f = Xs.shape
    tw = 0.0
    twy = 0.0
    for i in range(m):
        tw += w[i]
        twy += w[i] * y[i]
    if tw <= 0.0:
        return -1, 0.0
    best_score = -np.inf
    best_j = -1
    for jf in range(f):
        t = thresholds[jf]
        lw = 0.0
        lwy = 0.0
        ln = 0
        for i in range(m):
            if Xs[i, jf] <= t:
                lw += w[i]
                lwy += w[i] * y[i]
                ln += 1
        if ln < min_samples_leaf or m - ln < min_samples_leaf:
            continue
        rw = tw - lw
        rwy = twy - lwy
        if lw <= 0.0 or rw <= 0.0:
            continue
        score = lwy * lwy / lw + rwy * rwy / rw
        if score > best_score:
            best_score = score
            best_j = jf
    if best_j < 0:
        return -1, 0.0
    decrease = best_score - twy * twy / tw
    if decrease <= 0.0:
        return -1, 0.0
    return best_j, decrease
