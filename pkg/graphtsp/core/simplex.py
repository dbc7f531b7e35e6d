"""
Exact rational simplex tableau with Bland's rule and column generation
"""
import logging
from fractions import Fraction
from typing import Mapping, Sequence

from graphtsp.core.errors import LpError


logger = logging.getLogger(__name__)


class RationalSimplex:
    """
    Solves max c.z subject to A z <= b, z >= 0 for b >= 0

    The tableau starts from the slack basis, so slack k is column k and
    structural columns follow in the order they were added. Columns can be
    appended after a solve; the current basis stays primal feasible and the
    next solve continues from it.
    """

    def __init__(self, rhs: Sequence[Fraction | int]):
        self.rows = len(rhs)
        self._rhs = [Fraction(b) for b in rhs]
        if any(b < 0 for b in self._rhs):
            raise ValueError("right-hand side must be nonnegative")
        self._tableau = [
            [Fraction(int(i == k)) for k in range(self.rows)] for i in range(self.rows)
        ]
        self._basis = list(range(self.rows))
        self._reduced = [Fraction(0)] * self.rows
        self.value = Fraction(0)
        self.pivots = 0

    @property
    def column_count(self) -> int:
        return len(self._reduced)

    def add_column(self, coeffs: Mapping[int, Fraction | int], objective: Fraction | int) -> int:
        """Append a structural column given as {row: coefficient}; returns its index"""
        # B^-1 is the slack block of the tableau
        for row in self._tableau:
            row.append(sum((row[k] * a for k, a in coeffs.items()), Fraction(0)))
        reduced = sum((self._reduced[k] * a for k, a in coeffs.items()), Fraction(0))
        self._reduced.append(reduced - objective)
        return self.column_count - 1

    def solve(self, max_pivots: int | None = None) -> Fraction:
        start = self.pivots
        while True:
            entering = next((j for j, r in enumerate(self._reduced) if r < 0), None)
            if entering is None:
                return self.value

            leaving = None
            best: tuple[Fraction, int] | None = None
            for i, row in enumerate(self._tableau):
                a = row[entering]
                if a > 0:
                    key = (self._rhs[i] / a, self._basis[i])
                    if best is None or key < best:
                        best, leaving = key, i
            if leaving is None:
                raise LpError(f"objective unbounded along column {entering}")

            self._pivot(leaving, entering)
            if max_pivots is not None and self.pivots - start > max_pivots:
                raise LpError(f"simplex exceeded {max_pivots} pivots")

    def _pivot(self, r: int, j: int) -> None:
        pivot_row = self._tableau[r]
        piv = pivot_row[j]
        if piv != 1:
            pivot_row[:] = [a / piv for a in pivot_row]
            self._rhs[r] /= piv
        nonzero = [k for k, a in enumerate(pivot_row) if a]

        for i, row in enumerate(self._tableau):
            f = row[j]
            if i == r or not f:
                continue
            for k in nonzero:
                row[k] -= f * pivot_row[k]
            self._rhs[i] -= f * self._rhs[r]

        f = self._reduced[j]
        for k in nonzero:
            self._reduced[k] -= f * pivot_row[k]
        self.value -= f * self._rhs[r]
        self._basis[r] = j
        self.pivots += 1

    @property
    def values(self) -> tuple[Fraction, ...]:
        """Values of the structural columns"""
        vals = [Fraction(0)] * (self.column_count - self.rows)
        for i, col in enumerate(self._basis):
            if col >= self.rows:
                vals[col - self.rows] = self._rhs[i]
        return tuple(vals)

    @property
    def prices(self) -> tuple[Fraction, ...]:
        """Row duals, read off the reduced costs of the slack columns"""
        return tuple(self._reduced[: self.rows])
