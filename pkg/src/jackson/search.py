"""Small shared one-dimensional search helpers."""

from __future__ import annotations

import math

import numpy as np

_GOLDEN = (math.sqrt(5) - 1) / 2


def golden_max(g, lo: np.ndarray, hi: np.ndarray, iters: int = 80) -> np.ndarray:
    """Vectorised golden-section search for a local maximum of ``g`` in each bracket."""
    a, b = np.array(lo, dtype=float), np.array(hi, dtype=float)
    c = b - _GOLDEN * (b - a)
    d = a + _GOLDEN * (b - a)
    gc, gd = g(c), g(d)
    for _ in range(iters):
        left = gc > gd
        a = np.where(left, a, c)
        b = np.where(left, d, b)
        new_c = b - _GOLDEN * (b - a)
        new_d = a + _GOLDEN * (b - a)
        c, d, gc, gd = (np.where(left, new_c, d), np.where(left, c, new_d),
                        np.where(left, g(new_c), gd), np.where(left, gc, g(new_d)))
    return 0.5 * (a + b)
