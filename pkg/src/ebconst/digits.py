"""Certified binary digits of E = sum_{n>=1} 1/(2**n - 1) = sum d(n)/2**n.

Two independent expansion algorithms (reciprocal series and divisor-sieve
series) plus positional digit extraction. Every emitted digit is certified:
the algorithm tracks an exact integer enclosure [lower, lower + slack] of
the scaled value, and digits are released only when both ends of the
enclosure agree on them after guard bits are discarded. Position 1 is the
first bit after the binary point; the integer part (1 for E) is kept
separately.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import isqrt

import numpy as np

from .divisors import divisor_count, divisor_sieve

# Positional extraction sums the reciprocal series term-by-term, which costs
# O(pos) big-integer divisions; past this point the divisor-tail form of the
# same value (see _frac_divisor_scaled) is the only affordable route.
SERIES_ROUTE_MAX = 1 << 20

_RETRY_CAP = 10


class CertificationError(RuntimeError):
    """Certification failed to converge within the retry cap."""


@dataclass(frozen=True)
class DigitExpansion:
    """Certified fractional bits of E.

    bits[0] is position 1 (first bit after the binary point); certified
    means the lower/upper enclosure of 2**(precision+guard_bits) * E agreed
    on every emitted bit after the guard bits were discarded.
    """

    precision: int
    integer_part: int
    bits: str
    guard_bits: int
    terms_used: int
    method: str
    certified: bool


@dataclass(frozen=True)
class FractionEnclosure:
    """Exact dyadic bracket lower <= frac(2**(n-1) E) <= upper."""

    lower: Fraction
    upper: Fraction

    @property
    def width(self) -> Fraction:
        return self.upper - self.lower

    def membership(self, lo: Fraction, hi: Fraction) -> bool | None:
        """True/False membership in [lo, hi); None when the bracket straddles
        an endpoint and cannot decide."""
        if self.lower >= lo and self.upper < hi:
            return True
        if self.upper < lo or self.lower >= hi:
            return False
        return None


def _ceil_log2(x: int) -> int:
    return (x - 1).bit_length() if x > 1 else 0


def _isqrt_ceil(x: int) -> int:
    r = isqrt(x)
    return r if r * r == x else r + 1


def _initial_guard(n_bits: int) -> int:
    return _ceil_log2(n_bits) + 8


def _emit(scaled_lower: int, slack: int, precision: int, guard: int):
    """Digits shared by the whole enclosure, or None if any guard carry
    could still flip them."""
    if (scaled_lower >> guard) != ((scaled_lower + slack) >> guard):
        return None
    value = scaled_lower >> guard
    integer_part = value >> precision
    bits = format(value & ((1 << precision) - 1), "b").zfill(precision)
    return integer_part, bits


def expand_naive(precision: int, *, guard_bits: int | None = None) -> DigitExpansion:
    """Expansion from sum_a 1/(2**a - 1), one big floor-division per term.

    With K = precision + guard + 1 terms, each floored term loses < 1 ulp
    and the omitted tail is below 2**(1-K) <= 1 ulp, so the true scaled
    value lies in [sum, sum + K + 1]. This is the oracle method; the sieve
    method is the fast path at large precision.
    """
    if precision < 1:
        raise ValueError("precision must be >= 1")
    guard = _initial_guard(precision) if guard_bits is None else guard_bits
    for _ in range(_RETRY_CAP + 1):
        terms = precision + guard + 1
        scale = 1 << (precision + guard)
        lower = 0
        for a in range(1, terms + 1):
            lower += scale // ((1 << a) - 1)
        emitted = _emit(lower, terms + 1, precision, guard)
        if emitted is not None:
            integer_part, bits = emitted
            return DigitExpansion(precision, integer_part, bits, guard,
                                  terms, "naive", True)
        guard *= 2
    raise CertificationError(
        f"naive expansion of {precision} bits failed to certify after "
        f"{_RETRY_CAP} guard doublings"
    )


def _pack_weighted(counts: np.ndarray, m: int) -> int:
    """sum(counts[n] * 2**(m - n) for n in 1..m), exact.

    Bytes are assembled in one vectorized pass: terms are grouped eight to
    a byte position, three-byte group values are added at overlapping
    offsets, and carries are normalized before int.from_bytes.
    """
    c = counts[1 : m + 1].astype(np.int64)[::-1]  # c[i] weights 2**i
    pad = (-len(c)) % 8
    if pad:
        c = np.concatenate([c, np.zeros(pad, np.int64)])
    group = c.reshape(-1, 8) @ (1 << np.arange(8, dtype=np.int64))
    acc = np.zeros(len(group) + 3, np.int64)
    acc[: len(group)] += group & 0xFF
    acc[1 : len(group) + 1] += (group >> 8) & 0xFF
    acc[2 : len(group) + 2] += group >> 16
    while True:
        carry = acc >> 8
        if not carry.any():
            break
        acc &= 0xFF
        acc[1:] += carry[:-1]
    return int.from_bytes(acc.astype(np.uint8).tobytes(), "little")


def expand_sieve(precision: int, *, guard_bits: int | None = None,
                 memory_budget: int | None = None,
                 threads: int = 1) -> DigitExpansion:
    """Expansion from sum_n d(n)/2**n over a divisor-count table.

    The partial sum over n <= precision+guard is exact; the omitted tail
    obeys sum_{n>m} 2*sqrt(n)*2**-n <= 8*sqrt(m)*2**-m (from
    d(n) <= 2*sqrt(n) and sqrt(m+t) <= sqrt(m)+sqrt(t)), compared here as
    exact integers at scale 2**m.
    """
    if precision < 1:
        raise ValueError("precision must be >= 1")
    guard = _initial_guard(precision) if guard_bits is None else guard_bits
    for _ in range(_RETRY_CAP + 1):
        m = precision + guard
        table = divisor_sieve(m, memory_budget=memory_budget, threads=threads)
        lower = _pack_weighted(table.counts, m)
        slack = 8 * _isqrt_ceil(m)
        emitted = _emit(lower, slack, precision, guard)
        if emitted is not None:
            integer_part, bits = emitted
            return DigitExpansion(precision, integer_part, bits, guard,
                                  m, "sieve", True)
        guard *= 2
    raise CertificationError(
        f"sieve expansion of {precision} bits failed to certify after "
        f"{_RETRY_CAP} guard doublings"
    )


def _frac_series_scaled(pos: int, work_bits: int) -> tuple[int, int]:
    """Scaled enclosure of 2**(pos-1) * E before reduction mod 1.

    Since 2**(pos-1) mod (2**a - 1) = 2**((pos-1) mod a), term a of the
    reciprocal series contributes 2**((pos-1) mod a)/(2**a - 1) to the
    fractional part. Summing a = 2..pos+work_bits floored at work_bits
    fractional bits loses < 1 ulp per term, and the omitted tail is below
    2**(pos - (pos+work_bits)) = 1 ulp. Returns (lower, slack) at scale
    2**work_bits.
    """
    top = pos + work_bits
    lower = 0
    for a in range(2, top + 1):
        e = (pos - 1) % a
        if a - e > work_bits:  # floored term is zero; its loss is in slack
            continue
        lower += (1 << (work_bits + e)) // ((1 << a) - 1)
    return lower, top


def _frac_divisor_scaled(pos: int, work_bits: int) -> tuple[int, int]:
    """Same enclosure via frac(2**(pos-1) E) = frac(sum d(pos+l)/2**(l+1)).

    Terms d(t)/2**t with t < pos are integers at this scaling and drop out
    of the fractional part, so only divisor counts near pos matter. The
    partial sum over l < work_bits is exact; with W = work_bits the tail is
    at most sum_{l>=W} sqrt(pos+l)*2**-l <= (2*sqrt(pos+W) + 2) * 2**-W.
    """
    lower = 0
    for offset in range(work_bits):
        lower += divisor_count(pos + offset) << (work_bits - 1 - offset)
    slack = 2 * _isqrt_ceil(pos + work_bits) + 2
    return lower, slack


def _frac_scaled(pos: int, work_bits: int) -> tuple[int, int]:
    if pos <= SERIES_ROUTE_MAX:
        return _frac_series_scaled(pos, work_bits)
    return _frac_divisor_scaled(pos, work_bits)


def digit_window(pos: int, width: int) -> str:
    """Bits of E at positions pos..pos+width-1 without earlier digits.

    Works at whatever fixed-point precision makes the enclosure decide all
    width bits; on a straddle the working precision is enlarged and the
    computation retried.
    """
    if pos < 1 or width < 1:
        raise ValueError("pos and width must be >= 1")
    extra = 0
    for _ in range(_RETRY_CAP + 1):
        if pos <= SERIES_ROUTE_MAX:
            work = width + _ceil_log2(pos + width + 64) + 8 + extra
            work = width + _ceil_log2(pos + work) + 8 + extra
        else:
            work = width + _ceil_log2(2 * _isqrt_ceil(pos) + 2) + 8 + extra
        lower, slack = _frac_scaled(pos, work)
        if (lower >> work) == ((lower + slack) >> work):
            frac_lower = lower - ((lower >> work) << work)
            drop = work - width
            if (frac_lower >> drop) == ((frac_lower + slack) >> drop):
                return format(frac_lower >> drop, "b").zfill(width)
        extra = 8 if extra == 0 else 2 * extra
    raise CertificationError(
        f"window at position {pos} (width {width}) failed to certify"
    )


def fractional_part_enclosure(n: int, precision: int = 32) -> FractionEnclosure:
    """Rigorous enclosure of frac(2**(n-1) * E) of width <= 2**-precision."""
    if n < 1 or precision < 1:
        raise ValueError("n and precision must be >= 1")
    extra = 0
    for _ in range(_RETRY_CAP + 1):
        work = precision + 4 + extra
        if n <= SERIES_ROUTE_MAX:
            work += _ceil_log2(n + work)
            work += _ceil_log2(n + work)  # slack ~ n + work ulps
        else:
            work += _ceil_log2(2 * _isqrt_ceil(n) + 2)
        lower, slack = _frac_scaled(n, work)
        whole = lower >> work
        if whole == ((lower + slack) >> work) and slack <= (1 << (work - precision)):
            base = whole << work
            return FractionEnclosure(
                Fraction(lower - base, 1 << work),
                Fraction(lower + slack - base, 1 << work),
            )
        extra = 8 if extra == 0 else 2 * extra
    raise CertificationError(
        f"fractional enclosure at n={n} failed to reach width 2**-{precision}"
    )


def bits_to_hex(bits: str) -> str:
    """Pack fractional bits four per character, most significant bit first.

    A final partial nibble is zero-padded on the right.
    """
    if not bits:
        return ""
    pad = (-len(bits)) % 4
    padded = bits + "0" * pad
    return format(int(padded, 2), "x").zfill(len(padded) // 4)


def hex_to_bits(hexdigits: str, precision: int) -> str:
    """Inverse of bits_to_hex given the original bit count."""
    if not hexdigits:
        return ""
    bits = format(int(hexdigits, 16), "b").zfill(4 * len(hexdigits))
    return bits[:precision]
