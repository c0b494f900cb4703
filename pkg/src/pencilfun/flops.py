"""Floating-point operation accounting.

Every kernel charges two ledgers on a per-call counter:

* ``formula`` -- the leading n^3 term of the textbook cost of the kernel
  (the numbers a cost table would quote), used to verify algorithm-level
  flop totals without running at large n.
* exact per-category tallies (``adds``/``muls``/``divs``/``sqrts``) -- the
  operation count of the structure-exploiting reference algorithm the
  kernel implements.  Iterative kernels tally the operations actually
  performed (sweeps, rotations), so count regressions are visible even
  when the vectorised execution computes, e.g., a full product where the
  reference algorithm would fill only one triangle.
"""

from __future__ import annotations

from dataclasses import dataclass


@dataclass
class FlopCounter:
    """Per-call accumulator; never shared between concurrent calls."""

    adds: int = 0
    muls: int = 0
    divs: int = 0
    sqrts: int = 0
    formula: float = 0.0

    @property
    def exact(self) -> int:
        """Total exact flops across all categories."""
        return self.adds + self.muls + self.divs + self.sqrts

    def count(self, adds: int = 0, muls: int = 0, divs: int = 0, sqrts: int = 0) -> None:
        self.adds += int(adds)
        self.muls += int(muls)
        self.divs += int(divs)
        self.sqrts += int(sqrts)

    def charge_formula(self, flops: float) -> None:
        self.formula += float(flops)

    def merge(self, other: "FlopCounter") -> None:
        self.adds += other.adds
        self.muls += other.muls
        self.divs += other.divs
        self.sqrts += other.sqrts
        self.formula += other.formula

    def copy(self) -> "FlopCounter":
        return FlopCounter(self.adds, self.muls, self.divs, self.sqrts, self.formula)


def counter_or_new(flops: FlopCounter | None) -> FlopCounter:
    """Kernels accept an optional shared counter; default is a fresh one."""
    return flops if flops is not None else FlopCounter()
