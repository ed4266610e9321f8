"""Bracketing root finders: sign-change scans, bisection, safeguarded secant.

All routines are deterministic; identical inputs give bit-identical outputs.
"""

from __future__ import annotations

import math
from typing import Callable, List, Sequence, Tuple

from .errors import DomainError, NumericError

Bracket = Tuple[float, float]


def sign_changes(xs: Sequence[float], fs: Sequence[float]) -> List[Bracket]:
    """Brackets [x_i, x_{i+1}] over which ``fs`` changes sign.

    Exact zeros on a grid point produce a degenerate bracket (x, x).
    """
    out: List[Bracket] = []
    for i in range(len(xs) - 1):
        f0, f1 = fs[i], fs[i + 1]
        if not (math.isfinite(f0) and math.isfinite(f1)):
            continue
        if f0 == 0.0:
            out.append((xs[i], xs[i]))
        elif f0 * f1 < 0.0:
            out.append((xs[i], xs[i + 1]))
    if len(fs) and fs[-1] == 0.0:
        out.append((xs[-1], xs[-1]))
    return out


def bisect(f: Callable[[float], float], lo: float, hi: float, xtol: float = 1e-13,
           max_iter: int = 400) -> float:
    if lo == hi:
        return lo
    flo, fhi = f(lo), f(hi)
    if flo == 0.0:
        return lo
    if fhi == 0.0:
        return hi
    if flo * fhi > 0:
        raise DomainError(f"no sign change on [{lo}, {hi}]")
    for _ in range(max_iter):
        mid = 0.5 * (lo + hi)
        if hi - lo <= xtol or mid in (lo, hi):
            return mid
        fm = f(mid)
        if fm == 0.0:
            return mid
        if flo * fm < 0:
            hi, fhi = mid, fm
        else:
            lo, flo = mid, fm
    raise NumericError(f"bisection did not converge on [{lo}, {hi}]", residual=min(abs(flo), abs(fhi)))


def bisect_secant(f: Callable[[float], float], lo: float, hi: float, xtol: float = 1e-12,
                  coarse: float = 1e-3, max_iter: int = 400) -> float:
    """Bisection down to width ``coarse``, then secant steps kept inside the bracket.

    A secant step that leaves the current bracket, or fails to shrink it by
    half over two steps, is replaced by a bisection step.
    """
    if lo > hi:
        lo, hi = hi, lo
    flo, fhi = f(lo), f(hi)
    if flo == 0.0:
        return lo
    if fhi == 0.0:
        return hi
    if flo * fhi > 0:
        raise DomainError(f"no sign change on [{lo}, {hi}]")

    it = 0
    while hi - lo > coarse and it < max_iter:
        mid = 0.5 * (lo + hi)
        fm = f(mid)
        it += 1
        if fm == 0.0:
            return mid
        if flo * fm < 0:
            hi, fhi = mid, fm
        else:
            lo, flo = mid, fm

    x0, f0, x1, f1 = lo, flo, hi, fhi
    width = hi - lo
    while it < max_iter:
        it += 1
        if f1 != f0:
            x2 = x1 - f1 * (x1 - x0) / (f1 - f0)
        else:
            x2 = 0.5 * (lo + hi)
        if not (lo < x2 < hi):
            x2 = 0.5 * (lo + hi)
        f2 = f(x2)
        if f2 == 0.0:
            return x2
        step = abs(x2 - x1)
        if flo * f2 < 0:
            hi, fhi = x2, f2
        else:
            lo, flo = x2, f2
        x0, f0, x1, f1 = x1, f1, x2, f2
        if step <= xtol or hi - lo <= xtol:
            return x2
        if hi - lo > 0.5 * width:
            # Slow one-sided convergence: force a bisection.
            mid = 0.5 * (lo + hi)
            fm = f(mid)
            it += 1
            if fm == 0.0:
                return mid
            if flo * fm < 0:
                hi, fhi = mid, fm
            else:
                lo, flo = mid, fm
            x0, f0, x1, f1 = lo, flo, hi, fhi
        width = hi - lo
    raise NumericError(f"secant refinement did not converge on [{lo}, {hi}]",
                       residual=min(abs(flo), abs(fhi)))
