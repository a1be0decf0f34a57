"""Simultaneous congruences with pairwise-coprime moduli."""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd


class NonCoprimeModuliError(ValueError):
    """A pair of moduli shares a factor; the offending pair is attached."""

    def __init__(self, m1: int, m2: int):
        self.pair = (m1, m2)
        super().__init__(
            f"moduli {m1} and {m2} share the factor {gcd(m1, m2)}"
        )


@dataclass(frozen=True)
class CongruenceSystem:
    """Nonempty list of (residue, modulus) pairs, moduli pairwise coprime."""

    congruences: tuple[tuple[int, int], ...]

    def __post_init__(self):
        if not self.congruences:
            raise ValueError("congruence system must be nonempty")
        for res, mod in self.congruences:
            if mod < 2:
                raise ValueError(f"modulus {mod} must be >= 2")
            if not 0 <= res < mod:
                raise ValueError(f"residue {res} out of range for modulus {mod}")
        mods = [mod for _, mod in self.congruences]
        for i in range(len(mods)):
            for j in range(i + 1, len(mods)):
                if gcd(mods[i], mods[j]) != 1:
                    raise NonCoprimeModuliError(mods[i], mods[j])


@dataclass(frozen=True)
class CrtSolution:
    residue: int
    modulus: int


def _xgcd(a: int, b: int) -> tuple[int, int, int]:
    """(g, x, y) with a*x + b*y = g = gcd(a, b)."""
    old_r, r = a, b
    old_s, s = 1, 0
    old_t, t = 0, 1
    while r:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_s, s = s, old_s - q * s
        old_t, t = t, old_t - q * t
    return old_r, old_s, old_t


def crt_solve(system: CongruenceSystem | list[tuple[int, int]]) -> CrtSolution:
    """Unique residue modulo the product satisfying every congruence.

    Pairwise merging with the extended gcd keeps intermediates below the
    running modulus product; residues are normalized to [0, modulus).
    """
    if not isinstance(system, CongruenceSystem):
        system = CongruenceSystem(tuple(system))
    res, mod = system.congruences[0]
    for r2, m2 in system.congruences[1:]:
        g, u, _ = _xgcd(mod, m2)
        if g != 1:  # unreachable for a validated system; kept as a guard
            raise NonCoprimeModuliError(mod, m2)
        res = res + mod * ((r2 - res) * u % m2)
        mod *= m2
        res %= mod
    for r, m in system.congruences:
        assert res % m == r, (res, r, m)
    return CrtSolution(res, mod)
