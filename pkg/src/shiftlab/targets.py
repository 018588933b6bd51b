"""Growth-target sequences (the p_n, a_n, b_n of the constructions).

Presets keep runs declarative: polynomials with nonnegative integer
coefficients, the dyadic log sequence floor(log2(n+1))+1, and explicit
tables for tests.  Each target evaluates exactly on Python ints; the
polynomial and dyadic-log kinds also evaluate on `Big` enclosures so the
slow-entropy ledger can interrogate them at tower scale.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

from shiftlab.bignum import Big
from shiftlab.exactmath import _floor_log2
from fractions import Fraction


@dataclass(frozen=True)
class Target:
    kind: str
    coeffs: tuple[int, ...] = ()
    table: tuple[int, ...] = ()
    name: str = ""

    def __call__(self, n: int) -> int:
        if self.kind == "poly":
            return sum(c * n**i for i, c in enumerate(self.coeffs))
        if self.kind == "log2p1":
            return _floor_log2(Fraction(n + 1)) + 1
        if self.kind == "table":
            if not 1 <= n <= len(self.table):
                raise IndexError(f"table target has no value at n={n}")
            return self.table[n - 1]
        raise ValueError(f"unknown target kind {self.kind!r}")

    def eval_big(self, n: Big) -> Big:
        """Enclosure of the target at a tower-scale argument."""
        if self.kind == "poly":
            if len(self.coeffs) == 3 and self.coeffs[0] == self.coeffs[1] == 0:
                return n.square().mul_int(self.coeffs[2])
            acc: Optional[Big] = None
            power = Big.from_int(1)
            for c in self.coeffs:
                if c:
                    term = power.mul_int(c)
                    acc = term if acc is None else Big(
                        # positive-term sums: direct val adds
                        _val_sum(acc.lo, term.lo, up=False),
                        _val_sum(acc.hi, term.hi, up=True),
                    )
                power = power.mul(n)
            if acc is None:
                raise ValueError("zero polynomial is not a valid target")
            return acc
        if self.kind == "log2p1":
            return n.floor_log2_plus1()
        raise ValueError(f"target kind {self.kind!r} has no tower-scale evaluation")

    def describe(self) -> dict:
        out = {"kind": self.kind}
        if self.kind == "poly":
            out["coeffs"] = list(self.coeffs)
        if self.kind == "table":
            out["table"] = list(self.table)
        if self.name:
            out["name"] = self.name
        return out


def _val_sum(a, b, up: bool):
    from shiftlab.bignum import val_add

    return val_add(a, b, up)


def target_from_config(cfg) -> Target:
    """Build a target from a preset name or a config mapping."""
    if isinstance(cfg, str):
        presets = {
            "square": Target("poly", coeffs=(0, 0, 1), name="n^2"),
            "linear": Target("poly", coeffs=(0, 2), name="2n"),
            "cubic": Target("poly", coeffs=(0, 0, 0, 1), name="n^3"),
            "log2p1": Target("log2p1", name="floor(log2(n+1))+1"),
        }
        if cfg not in presets:
            raise ValueError(f"unknown target preset {cfg!r}")
        return presets[cfg]
    kind = cfg.get("kind")
    if kind == "poly":
        return Target("poly", coeffs=tuple(int(c) for c in cfg["coeffs"]))
    if kind == "log2p1":
        return Target("log2p1")
    if kind == "table":
        return Target("table", table=tuple(int(v) for v in cfg["table"]))
    raise ValueError(f"unknown target kind {kind!r}")
