"""Exact primal simplex over the rationals.

Only the shape needed here is supported: maximize ``c.x`` subject to
``A x <= b`` and ``x >= 0`` with ``b >= 0``, so the all-slack basis is
feasible and no first phase is required. Bland's rule keeps degenerate
problems from cycling.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .errors import BudgetExceeded, DomainError


@dataclass(frozen=True)
class LPSolution:
    value: Fraction
    primal: tuple[Fraction, ...]   # x, one entry per column of A
    dual: tuple[Fraction, ...]     # y >= 0 with A^T y >= c and b.y == value


def maximize(
    c: Sequence[int | Fraction],
    A: Sequence[Sequence[int | Fraction]],
    b: Sequence[int | Fraction],
    max_pivots: int = 100_000,
) -> LPSolution:
    m, n = len(A), len(c)
    if len(b) != m or any(len(row) != n for row in A):
        raise DomainError("LP dimensions do not agree")
    if any(bi < 0 for bi in b):
        raise DomainError("right-hand side must be non-negative")

    width = n + m
    # row i: [A_i | e_i] with rhs b_i; variables n..n+m-1 are slacks
    rows = []
    for i, row in enumerate(A):
        r = [Fraction(a) for a in row] + [Fraction(0)] * m
        r[n + i] = Fraction(1)
        rows.append(r)
    rhs = [Fraction(bi) for bi in b]
    basis = list(range(n, n + m))
    # reduced costs c_j - z_j; optimal once none is positive
    reduced = [Fraction(cj) for cj in c] + [Fraction(0)] * m
    value = Fraction(0)

    for _ in range(max_pivots):
        entering = next((j for j in range(width) if reduced[j] > 0), None)
        if entering is None:
            break
        leaving = None
        best = None
        for i in range(m):
            a = rows[i][entering]
            if a > 0:
                ratio = rhs[i] / a
                if best is None or ratio < best or (ratio == best and basis[i] < basis[leaving]):
                    best, leaving = ratio, i
        if leaving is None:
            raise DomainError("LP is unbounded")

        prow = rows[leaving]
        piv = prow[entering]
        if piv != 1:
            prow = [a / piv for a in prow]
            rows[leaving] = prow
            rhs[leaving] /= piv
        nz = [j for j in range(width) if prow[j]]
        for i in range(m):
            if i == leaving:
                continue
            factor = rows[i][entering]
            if factor:
                r = rows[i]
                for j in nz:
                    r[j] -= factor * prow[j]
                rhs[i] -= factor * rhs[leaving]
        factor = reduced[entering]
        for j in nz:
            reduced[j] -= factor * prow[j]
        value += factor * rhs[leaving]
        basis[leaving] = entering
    else:
        raise BudgetExceeded("simplex", max_pivots)

    x = [Fraction(0)] * width
    for i, var in enumerate(basis):
        x[var] = rhs[i]
    dual = tuple(-reduced[n + i] for i in range(m))
    return LPSolution(value=value, primal=tuple(x[:n]), dual=dual)
