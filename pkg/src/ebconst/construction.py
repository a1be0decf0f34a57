"""Constructive digit-block machinery.

Two pipelines live here. The zero-run construction solves a system of
prime-power congruences so that d(x+j) is divisible by t**(j+1) for a run
of consecutive arguments. The "11"-witness pipeline builds a modulus pair
(A, B), a CRT residue r, and a progression n_m = r + m*A along which
n_m + 2 = q0**2 * (s + m*B); whenever s + m*B is prime the divisor counts
near n_m force the two binary digits of E at positions n_m, n_m + 1 to be
1, provided the weighted divisor tail past the constructed window is small
enough. Every claimed property of an emitted certificate is re-verified
from scratch, never trusted from the search.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from math import floor, gcd, isqrt

from .crt import CongruenceSystem, crt_solve
from .digits import digit_window, fractional_part_enclosure
from .divisors import divisor_count, is_prime, primes_in_range, valuation


class ConstructionError(ValueError):
    """A construction invariant failed; the message names the relation."""


# ---------------------------------------------------------------------------
# Tail estimates
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class TailEstimate:
    """Enclosure of T = sum_{l>=k} d(n+l)/2**l.

    value is the exact partial sum over k <= l <= cutoff; remainder_bound
    dominates the omitted sum over l > cutoff via d(N) <= 2*sqrt(N), so
    value <= T <= value + remainder_bound.
    """

    n: int
    k: int
    cutoff: int
    value: Fraction
    remainder_bound: Fraction

    @property
    def upper(self) -> Fraction:
        return self.value + self.remainder_bound


def _isqrt_ceil(x: int) -> int:
    r = isqrt(x)
    return r if r * r == x else r + 1


def tail_estimate(n: int, k: int, cutoff: int) -> TailEstimate:
    """Exact truncated tail plus a rigorous remainder bound.

    The remainder uses sum_{l>cutoff} 2*sqrt(n+l)*2**-l
    <= (2*sqrt(n+cutoff+1) + 2) * 2**-cutoff, from sqrt(a+b) <= sqrt(a)+sqrt(b)
    and sum_{t>=0} sqrt(t)*2**-t < 2.
    """
    if n < 1:
        raise ValueError("tail_estimate requires n >= 1")
    if k < 0 or cutoff < k:
        raise ValueError("tail_estimate requires cutoff >= k >= 0")
    scaled = 0  # value * 2**cutoff
    for offset in range(k, cutoff + 1):
        scaled += divisor_count(n + offset) << (cutoff - offset)
    root = _isqrt_ceil(n + cutoff + 1)
    return TailEstimate(
        n=n,
        k=k,
        cutoff=cutoff,
        value=Fraction(scaled, 1 << cutoff),
        remainder_bound=Fraction(2 * root + 2, 1 << cutoff),
    )


def tail_window(estimate: TailEstimate) -> tuple[bool, int]:
    """Certify T in [2t, 2t + 1/2) for some integer t >= 0.

    Together with the divisibility pattern and d(n+2) = 6 this pins
    frac(2**(n-1) E) = 3/4 + (T/2 - t) inside [3/4, 1): the whole-unit part
    of T/2 is absorbed by the integer digit prefix, and the half-unit
    window keeps the leftover below 1/4.
    """
    t = floor(estimate.value / 2)
    ok = estimate.upper < 2 * t + Fraction(1, 2)
    return ok, t


def tail_below_half_k(estimate: TailEstimate) -> bool:
    """Whether value + remainder <= 2**(-k/2) (compared via squares)."""
    u = estimate.upper
    return u * u * (1 << estimate.k) <= 1


# ---------------------------------------------------------------------------
# Witness pipeline
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class WitnessParams:
    """Desk-scale knobs for the witness pipeline.

    k >= 3 is the window-length parameter; index j = 2 is reserved for the
    d(n+2) = 6 slot and never receives a prime group. Primes come either
    from an inclusive window [low, high] or an explicit list. m_max bounds
    the scan; tail_cutoff of None selects the adaptive policy.
    """

    k: int
    prime_window: tuple[int, int] | None = None
    primes: tuple[int, ...] | None = None
    m_max: int = 100_000
    tail_cutoff: int | None = None

    def __post_init__(self):
        if self.k < 3:
            raise ValueError("witness construction requires k >= 3")
        if (self.prime_window is None) == (self.primes is None):
            raise ValueError("provide exactly one of prime_window or primes")
        if self.m_max < 0:
            raise ValueError("m_max must be >= 0")
        if self.tail_cutoff is not None and self.tail_cutoff < self.k:
            raise ValueError("tail_cutoff must be >= k")

    @property
    def group_indices(self) -> list[int]:
        return [j for j in range(self.k) if j != 2]

    @property
    def required_primes(self) -> int:
        # 1 + sum_{j != 2} (j+1) = k(k+1)/2 - 2
        return 1 + sum(j + 1 for j in self.group_indices)


def select_primes(params: WitnessParams) -> tuple[int, dict[int, list[int]]]:
    """Deterministic ascending assignment: q0 first, then group 0, 1, 3, ...

    Raises with the required count when the window is too small.
    """
    if params.primes is not None:
        pool = sorted(set(params.primes))
        for p in pool:
            if not is_prime(p):
                raise ValueError(f"{p} in the explicit prime list is not prime")
        if len(pool) != len(params.primes):
            raise ValueError("explicit prime list contains duplicates")
        source = f"list of {len(pool)} primes"
    else:
        low, high = params.prime_window
        pool = primes_in_range(low, high)
        source = f"window [{low}, {high}] ({len(pool)} primes)"
    need = params.required_primes
    if len(pool) < need:
        raise ValueError(
            f"k={params.k} requires {need} distinct primes but the {source} "
            f"is too small"
        )
    q0 = pool[0]
    groups: dict[int, list[int]] = {}
    at = 1
    for j in params.group_indices:
        groups[j] = pool[at : at + j + 1]
        at += j + 1
    return q0, groups


@dataclass(frozen=True)
class WitnessSystem:
    """Moduli, residue and progression data shared by every candidate m."""

    q0: int
    groups: dict[int, tuple[int, ...]]
    prime_products: dict[int, int]  # j -> P_j
    A: int
    B: int
    r: int
    s: int
    congruences: CongruenceSystem


def build_witness_system(q0: int, groups: dict[int, list[int]]) -> WitnessSystem:
    """Solve the residue system and derive (A, B, r, s), verifying each
    property before returning; any failure aborts naming the relation."""
    all_primes = [q0] + [p for js in sorted(groups) for p in groups[js]]
    if len(set(all_primes)) != len(all_primes):
        raise ConstructionError("q0 and the group primes must be distinct")
    for p in all_primes:
        if not is_prime(p):
            raise ConstructionError(f"{p} is not prime")
    if 2 in groups:
        raise ConstructionError("group index j = 2 is reserved and must be absent")

    products = {j: 1 for j in groups}
    for j, members in groups.items():
        for p in members:
            products[j] *= p
    A = q0**3
    for j in sorted(products):
        A *= products[j] ** 2
    B = A // q0**2

    congruences = [(q0**2 - 2, q0**3)]
    for j in sorted(products):
        pj = products[j]
        congruences.append(((pj - j) % pj**2, pj**2))
    system = CongruenceSystem(tuple(congruences))
    solution = crt_solve(system)
    r = solution.residue

    if solution.modulus != A:
        raise ConstructionError("modulus product != A = q0^3 * prod(P_j^2)")
    if not 0 <= r < A:
        raise ConstructionError("residue not normalized to 0 <= r < A")
    if (r + 2) % q0**2 != 0:
        raise ConstructionError("r + 2 not divisible by q0^2")
    s = (r + 2) // q0**2
    if s % q0 != 1:
        raise ConstructionError("s != 1 (mod q0)")
    if not 1 <= s < B:
        raise ConstructionError("s outside [1, B)")
    if gcd(s, B) != 1:
        raise ConstructionError("gcd(s, B) != 1")
    return WitnessSystem(
        q0=q0,
        groups={j: tuple(g) for j, g in groups.items()},
        prime_products=products,
        A=A,
        B=B,
        r=r,
        s=s,
        congruences=system,
    )


CHECK_RELATIONS = {
    "residues": (
        "A = q0^3 * prod(P_j^2); B = A/q0^2; r = CRT(q0^2 - 2 mod q0^3, "
        "P_j - j mod P_j^2); 0 <= r < A"
    ),
    "s_properties": (
        "s = (r + 2)/q0^2 exactly; s = 1 (mod q0); 1 <= s < B; gcd(s, B) = 1"
    ),
    "d6": (
        "p = s + m*B prime; n = r + m*A; n + 2 = q0^2 * p; d(n+2) = 6; "
        "n + 2 >= 2*q0^2"
    ),
    "valuation": "nu_q0(n + 2) = 2",
    "divisibility_pattern": "2^(j+1) | d(n+j) for 0 <= j < k, j != 2",
    "tail": (
        "sum_{l>=k} d(n+l)/2^l certified inside [2t, 2t + 1/2), hence "
        "frac(2^(n-1) E) = 3/4 + theta with theta in [0, 1/4)"
    ),
    "digits": "frac(2^(n-1) E) in [3/4, 1) and digits at n, n+1 are '11'",
}

CHECK_NAMES = tuple(CHECK_RELATIONS)


@dataclass
class WitnessCertificate:
    """Everything constructed for one accepted m, plus verification flags.

    tail_below_half_k records the stricter comparison
    value + remainder <= 2**(-k/2); it is informational and is not one of
    the acceptance checks, because the minimum possible tail 2**(2-k)
    already exceeds that threshold whenever k < 4.
    """

    k: int
    q0: int
    groups: dict[int, tuple[int, ...]]
    prime_products: dict[int, int]
    A: int
    B: int
    r: int
    s: int
    m_max: int
    m: int
    p: int
    n: int
    prime_hits: int
    tail: TailEstimate
    tail_window_index: int
    tail_below_half_k: bool
    checks: dict[str, bool]

    @property
    def all_checks_pass(self) -> bool:
        return all(self.checks.get(name, False) for name in CHECK_NAMES)


@dataclass(frozen=True)
class NoWitnessInRange:
    """Structured outcome of an exhausted scan."""

    m_scanned: int
    prime_hits: int


ADAPTIVE_CUTOFF_SPAN = 64
_CUTOFF_SPAN_CAP = 4096


def _adaptive_cutoff(n: int, k: int) -> int:
    """cutoff = k + 64, doubled until 4*remainder_bound <= 2**(-k/2)."""
    span = ADAPTIVE_CUTOFF_SPAN
    while span < _CUTOFF_SPAN_CAP:
        root = _isqrt_ceil(n + k + span + 1)
        rem = Fraction(2 * root + 2, 1 << (k + span))
        if 16 * rem * rem * (1 << k) <= 1:
            break
        span *= 2
    return k + span


def _digit_checks(n: int) -> tuple[bool, bool | None]:
    """(window says '11', enclosure membership of [3/4, 1) or None)."""
    window_ok = digit_window(n, 2) == "11"
    membership = None
    for precision in (32, 64, 128, 256):
        enclosure = fractional_part_enclosure(n, precision)
        membership = enclosure.membership(Fraction(3, 4), Fraction(1))
        if membership is not None:
            break
    return window_ok, membership


def search_witness(params: WitnessParams,
                   system: WitnessSystem) -> WitnessCertificate | NoWitnessInRange:
    """Scan m = 0..m_max-1 ascending; the first candidate passing every
    acceptance condition wins. Exhaustion is a structured result."""
    q0, A, B, r, s = system.q0, system.A, system.B, system.r, system.s
    prime_hits = 0
    for m in range(params.m_max):
        p = s + m * B
        if not is_prime(p):
            continue
        prime_hits += 1
        n = r + m * A
        if n + 2 != q0 * q0 * p or divisor_count(n + 2) != 6:
            continue
        if valuation(n + 2, q0) != 2:
            continue
        if any(divisor_count(n + j) % (1 << (j + 1)) for j in params.group_indices):
            continue
        cutoff = params.tail_cutoff or _adaptive_cutoff(n, params.k)
        estimate = tail_estimate(n, params.k, cutoff)
        accepted, window_index = tail_window(estimate)
        if not accepted:
            continue
        window_ok, membership = _digit_checks(n)
        checks = {
            "residues": True,
            "s_properties": True,
            "d6": True,
            "valuation": True,
            "divisibility_pattern": True,
            "tail": True,
            "digits": window_ok and membership is True,
        }
        certificate = WitnessCertificate(
            k=params.k,
            q0=q0,
            groups=dict(system.groups),
            prime_products=dict(system.prime_products),
            A=A,
            B=B,
            r=r,
            s=s,
            m_max=params.m_max,
            m=m,
            p=p,
            n=n,
            prime_hits=prime_hits,
            tail=estimate,
            tail_window_index=window_index,
            tail_below_half_k=tail_below_half_k(estimate),
            checks=checks,
        )
        if not certificate.checks["digits"]:
            # The tail window proves the digit claim; a disagreement with
            # the digit engine means a defect, not a bad candidate.
            raise RuntimeError(
                f"digit verification contradicts the certified tail window "
                f"at n={n} (window={window_ok}, enclosure={membership})"
            )
        return certificate
    return NoWitnessInRange(m_scanned=params.m_max, prime_hits=prime_hits)


def run_witness_pipeline(params: WitnessParams) -> WitnessCertificate | NoWitnessInRange:
    """select_primes -> build_witness_system -> search_witness."""
    q0, groups = select_primes(params)
    system = build_witness_system(q0, groups)
    return search_witness(params, system)


# ---------------------------------------------------------------------------
# Certificate verification
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str


@dataclass
class VerificationReport:
    results: list[CheckResult] = field(default_factory=list)
    indeterminate: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(r.passed for r in self.results) and not self.indeterminate

    def add(self, name: str, passed: bool, detail: str = "") -> None:
        self.results.append(CheckResult(name, passed, detail))


def verify_certificate(cert: WitnessCertificate) -> VerificationReport:
    """Re-derive every certified property from scratch.

    Nothing stored in the certificate is trusted: products, the CRT
    residue, divisor counts, the tail enclosure and the digit claim are all
    recomputed, and the digit claim is confirmed two independent ways.
    """
    report = VerificationReport()

    products = {j: 1 for j in cert.groups}
    for j, members in cert.groups.items():
        for p in members:
            products[j] *= p
    expected_a = cert.q0**3
    for j in sorted(products):
        expected_a *= products[j] ** 2
    residue_parts = [
        products == cert.prime_products,
        expected_a == cert.A,
        cert.B * cert.q0**2 == cert.A,
        0 <= cert.r < cert.A,
        cert.r % cert.q0**3 == (cert.q0**2 - 2) % cert.q0**3,
    ]
    for j in sorted(products):
        pj = products[j]
        residue_parts.append(cert.r % pj**2 == (pj - j) % pj**2)
    try:
        rebuilt = build_witness_system(
            cert.q0, {j: list(g) for j, g in cert.groups.items()}
        )
        residue_parts.append(rebuilt.r == cert.r)
    except (ConstructionError, ValueError) as exc:
        residue_parts.append(False)
        report.add("residues", False, f"rebuild failed: {exc}")
        rebuilt = None
    if rebuilt is not None:
        report.add("residues", all(residue_parts), CHECK_RELATIONS["residues"])

    s_ok = (
        (cert.r + 2) % cert.q0**2 == 0
        and cert.s == (cert.r + 2) // cert.q0**2
        and cert.s % cert.q0 == 1
        and 1 <= cert.s < cert.B
        and gcd(cert.s, cert.B) == 1
    )
    report.add("s_properties", s_ok, CHECK_RELATIONS["s_properties"])

    n, p = cert.n, cert.p
    d6_ok = (
        p == cert.s + cert.m * cert.B
        and is_prime(p)
        and n == cert.r + cert.m * cert.A
        and n + 2 == cert.q0**2 * p
        and divisor_count(n + 2) == 6
        and n + 2 >= 2 * cert.q0**2
    )
    report.add("d6", d6_ok, CHECK_RELATIONS["d6"])

    report.add("valuation", valuation(n + 2, cert.q0) == 2,
               CHECK_RELATIONS["valuation"])

    pattern_ok = all(
        divisor_count(n + j) % (1 << (j + 1)) == 0
        for j in range(cert.k) if j != 2
    )
    report.add("divisibility_pattern", pattern_ok,
               CHECK_RELATIONS["divisibility_pattern"])

    fresh = tail_estimate(n, cert.k, cert.tail.cutoff)
    window_ok, window_index = tail_window(fresh)
    tail_ok = (
        fresh.value == cert.tail.value
        and fresh.remainder_bound == cert.tail.remainder_bound
        and window_ok
        and window_index == cert.tail_window_index
    )
    report.add("tail", tail_ok, CHECK_RELATIONS["tail"])

    window_bits_ok, membership = _digit_checks(n)
    if membership is None:
        report.indeterminate.append(
            "fractional enclosure straddles 3/4 or 1; retry at higher precision"
        )
        report.add("digits", False, "enclosure membership indeterminate")
    else:
        report.add("digits", window_bits_ok and membership,
                   CHECK_RELATIONS["digits"])

    # The stored flags themselves are untrusted input: they must agree
    # with what was just recomputed, or the certificate was altered.
    recomputed = {r.name: r.passed for r in report.results}
    mismatched = sorted(
        name for name in CHECK_NAMES
        if cert.checks.get(name) != recomputed.get(name)
    )
    report.add(
        "stored_flags",
        not mismatched,
        "stored check flags match re-verification"
        if not mismatched else f"flags disagree with re-verification: {mismatched}",
    )
    return report


# ---------------------------------------------------------------------------
# Certificate serialization (flat JSON, big integers as decimal strings)
# ---------------------------------------------------------------------------

def certificate_to_json(cert: WitnessCertificate) -> str:
    payload = {
        "k": cert.k,
        "q0": str(cert.q0),
        "groups": {str(j): [str(p) for p in g] for j, g in sorted(cert.groups.items())},
        "P": {str(j): str(v) for j, v in sorted(cert.prime_products.items())},
        "A": str(cert.A),
        "B": str(cert.B),
        "r": str(cert.r),
        "s": str(cert.s),
        "M": cert.m_max,
        "m": cert.m,
        "p": str(cert.p),
        "n": str(cert.n),
        "prime_hits": cert.prime_hits,
        "tail": {
            "n": str(cert.tail.n),
            "k": cert.tail.k,
            "cutoff": cert.tail.cutoff,
            "value_num": str(cert.tail.value.numerator),
            "value_den": str(cert.tail.value.denominator),
            "remainder_num": str(cert.tail.remainder_bound.numerator),
            "remainder_den": str(cert.tail.remainder_bound.denominator),
        },
        "tail_window_index": str(cert.tail_window_index),
        "tail_below_half_k": cert.tail_below_half_k,
        "checks": {name: bool(cert.checks[name]) for name in CHECK_NAMES},
        "paper_refs": [f"{name}: {CHECK_RELATIONS[name]}" for name in CHECK_NAMES],
    }
    return json.dumps(payload, sort_keys=True, separators=(",", ":"))


def certificate_from_json(text: str) -> WitnessCertificate:
    data = json.loads(text)
    tail = data["tail"]
    return WitnessCertificate(
        k=int(data["k"]),
        q0=int(data["q0"]),
        groups={int(j): tuple(int(p) for p in g)
                for j, g in data["groups"].items()},
        prime_products={int(j): int(v) for j, v in data["P"].items()},
        A=int(data["A"]),
        B=int(data["B"]),
        r=int(data["r"]),
        s=int(data["s"]),
        m_max=int(data["M"]),
        m=int(data["m"]),
        p=int(data["p"]),
        n=int(data["n"]),
        prime_hits=int(data["prime_hits"]),
        tail=TailEstimate(
            n=int(tail["n"]),
            k=int(tail["k"]),
            cutoff=int(tail["cutoff"]),
            value=Fraction(int(tail["value_num"]), int(tail["value_den"])),
            remainder_bound=Fraction(int(tail["remainder_num"]),
                                     int(tail["remainder_den"])),
        ),
        tail_window_index=int(data["tail_window_index"]),
        tail_below_half_k=bool(data["tail_below_half_k"]),
        checks={name: bool(data["checks"][name]) for name in CHECK_NAMES},
    )


# ---------------------------------------------------------------------------
# Zero-run construction
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ErdosRunParams:
    """Base t >= 2 and k prime groups; group j holds j+1 distinct primes."""

    t: int
    prime_groups: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        if self.t < 2:
            raise ValueError("base t must be >= 2")
        if not self.prime_groups:
            raise ValueError("at least one prime group is required")
        seen: set[int] = set()
        for j, group in enumerate(self.prime_groups):
            if len(group) != j + 1:
                raise ValueError(f"group {j} must hold exactly {j + 1} primes")
            for p in group:
                if not is_prime(p):
                    raise ValueError(f"{p} is not prime")
                if p in seen:
                    raise ValueError(f"prime {p} repeated across groups")
                seen.add(p)

    @property
    def k(self) -> int:
        return len(self.prime_groups)


@dataclass(frozen=True)
class ErdosRunResult:
    x: int
    modulus: int
    checks: tuple[tuple[int, int, int, bool], ...]  # (j, d(x+j), t**(j+1), ok)

    @property
    def ok(self) -> bool:
        return all(ok for *_, ok in self.checks)


def erdos_zero_run(params: ErdosRunParams) -> ErdosRunResult:
    """Solve x + j = G_j**(t-1) (mod G_j**t) for G_j the group products,
    then verify t**(j+1) | d(x+j) for every j."""
    t = params.t
    congruences = []
    for j, group in enumerate(params.prime_groups):
        g = 1
        for p in group:
            g *= p
        modulus = g**t
        congruences.append(((g ** (t - 1) - j) % modulus, modulus))
    solution = crt_solve(CongruenceSystem(tuple(congruences)))
    x = solution.residue if solution.residue > 0 else solution.modulus
    checks = []
    for j in range(params.k):
        d = divisor_count(x + j)
        required = t ** (j + 1)
        checks.append((j, d, required, d % required == 0))
    return ErdosRunResult(x=x, modulus=solution.modulus, checks=tuple(checks))
