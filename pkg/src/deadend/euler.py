"""High-precision Euler products with certified error bounds.

Evaluates the finite products C_z(S), the full constants C(S), the
regular-prime tail products T(a) = prod_{p >= p0} (1 - a/p^2), and the
alternating inclusion-exclusion sum

    c_dead(b) = sum over subsets S of the base-b digits of
                (-1)^|S| * prod_p (1 - nu_p(S)/p^2),

which is the asymptotic density of dead ends in base b.

Numerical strategy
------------------
* All finite parts are exact ``Fraction`` arithmetic (no rounding at all).
* Tails use the rapidly convergent log identity
  log T(a) = -sum_{k>=1} (a^k/k) * sum_{p>=p0} p^(-2k),
  with the inner prime sums evaluated through the prime zeta function
  P(s) = sum_m mu(m)/m * log zeta(m*s) at even arguments, where zeta is
  computed from exact Bernoulli fractions (or exact-rational direct
  summation for very large arguments).
* Everything non-exact runs in mpmath's interval arithmetic (``mpmath.iv``),
  so every returned HPReal carries a rigorous absolute error bound.
* Subtracting the small-prime terms from P(2k) cancels catastrophically
  (both are ~2^(-2k) while the difference is ~p0^(-2k)), so each such
  evaluation runs at a working precision raised by the number of digits the
  cancellation is known a priori to destroy: 2k*log10(p0/2).
* The alternating sum itself loses ~9 digits in base 10 (O(1) terms, 1e-9
  result); per the cancellation budget the working precision is twice the
  requested digits plus 20 guard digits.
"""

from __future__ import annotations

import itertools
import math
import threading
from contextlib import contextmanager
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Optional

import mpmath
from mpmath import iv, mp

from . import arith, local
from .local import CapacityError, DigitSet

__all__ = [
    "PrecisionError",
    "HPReal",
    "TailTable",
    "zeta_even",
    "prime_power_sum",
    "tail_product",
    "build_tail_table",
    "finite_product",
    "finite_product_fraction",
    "allowed_class_count",
    "subset_constant",
    "dead_end_constant",
    "hp_div",
]


class PrecisionError(Exception):
    """The requested number of certified digits could not be achieved."""


@dataclass(frozen=True)
class HPReal:
    """An arbitrary-precision value with a rigorous absolute error bound:
    the true quantity lies in [value - err, value + err]."""

    value: mpmath.mpf
    err: mpmath.mpf
    precision_digits: int

    def __post_init__(self) -> None:
        if not (mpmath.isfinite(self.err) and self.err >= 0):
            raise ValueError(f"error bound must be finite and >= 0, got {self.err}")

    def interval(self) -> tuple[mpmath.mpf, mpmath.mpf]:
        return self.value - self.err, self.value + self.err

    def certified_digits(self) -> int:
        """Number of significant digits the error bound certifies."""
        if self.value == 0:
            return 0
        if self.err == 0:
            return self.precision_digits
        rel = self.err / abs(self.value)
        if rel >= 1:
            return 0
        return min(self.precision_digits, int(mpmath.floor(-mpmath.log10(rel))))

    def __str__(self) -> str:
        shown = max(1, self.certified_digits())
        return f"{mpmath.nstr(self.value, shown)} +/- {mpmath.nstr(self.err, 2)}"


@contextmanager
def _iv_dps(dps: int) -> Iterator[None]:
    old = iv.dps
    iv.dps = dps
    try:
        yield
    finally:
        iv.dps = old


@contextmanager
def _mp_dps(dps: int) -> Iterator[None]:
    old = mp.dps
    mp.dps = dps
    try:
        yield
    finally:
        mp.dps = old


def _fraction_to_iv(fr: Fraction):
    return iv.mpf(fr.numerator) / iv.mpf(fr.denominator)


def _hp_from_iv(x, precision_digits: int) -> HPReal:
    """Convert an interval to midpoint +/- radius, padding the radius for
    the endpoint conversions themselves."""
    work = max(iv.dps, precision_digits) + 15
    with _mp_dps(work):
        a = mp.mpf(x.a)
        b = mp.mpf(x.b)
        value = (a + b) / 2
        half = (b - a) / 2
        err = half + (abs(value) + half + mp.mpf(10) ** (-work)) * mp.mpf(10) ** (-(work - 5))
    return HPReal(value, err, precision_digits)


def _certify(hp: HPReal, precision: int, what: str) -> HPReal:
    if hp.err > mpmath.mpf(10) ** (-precision):
        raise PrecisionError(
            f"{what}: achieved error bound {mpmath.nstr(hp.err, 3)} exceeds "
            f"requested 1e-{precision}"
        )
    return hp


# ---------------------------------------------------------------------------
# zeta at even integers / direct summation

_BERNOULLI_CUTOFF = 256


def _zeta_even_iv(t: int):
    """Interval for zeta(t), t even >= 2, at the current iv precision.

    Small t: exact closed form zeta(t) = |B_t| (2 pi)^t / (2 t!).
    Large t: exact-rational partial sum plus an integral tail bound (cheaper
    than huge Bernoulli numbers, and only a handful of terms are needed).
    """
    if t <= _BERNOULLI_CUTOFF:
        num, den = mpmath.bernfrac(t)
        c = Fraction(int(num), int(den)) * Fraction((-1) ** (t // 2 + 1) * 2**t, 2 * math.factorial(t))
        return _fraction_to_iv(c) * iv.pi**t
    n_terms = int(math.ceil(10 ** ((iv.dps + 5) / t))) + 1
    lower = Fraction(0)
    for n in range(1, n_terms + 1):
        lower += Fraction(1, n**t)
    tail = Fraction(1, (n_terms + 1) ** t) * (1 + Fraction(n_terms + 1, t - 1))
    return _fraction_to_iv(lower) + iv.mpf([0, 1]) * _fraction_to_iv(tail)


_DIRECT_SUM_CAP = 200_000


def zeta_even(s, precision: int = 30) -> HPReal:
    """zeta(s) for real s >= 2 with err <= 10^-precision.

    Even integers use the exact Bernoulli closed form. Other arguments use
    direct summation; the tail after n_terms terms is sandwiched between the
    integrals from n_terms+1 and from n_terms+1/2 (the latter is an upper
    bound because x^-s is convex). When that would need too many terms a
    PrecisionError explains the limitation."""
    if precision < 1:
        raise ValueError(f"precision must be >= 1, got {precision}")
    s_mp = mpmath.mpf(s)
    if s_mp < 2:
        raise ValueError(f"s must be >= 2, got {s}")
    is_int = s_mp == int(s_mp)
    if is_int and int(s_mp) % 2 == 0:
        with _iv_dps(precision + 10):
            x = _zeta_even_iv(int(s_mp))
            hp = _hp_from_iv(x, precision)
        return _certify(hp, precision, f"zeta({s})")
    s_f = float(s_mp)
    # sandwich width ~ n^-s / 2
    n_terms = math.ceil(10 ** ((precision + 2) / s_f)) + 4
    if n_terms > _DIRECT_SUM_CAP:
        raise PrecisionError(
            f"direct summation for zeta({s}) at {precision} digits needs "
            f"{n_terms} terms (cap {_DIRECT_SUM_CAP}); only even integer "
            "arguments have an exact route"
        )
    with _iv_dps(precision + 10):
        s_iv = iv.mpf(s)
        total = iv.mpf(0)
        if is_int:
            si = int(s_mp)
            for n in range(1, n_terms + 1):
                total += iv.mpf(n) ** (-si)
            upper = (iv.mpf(2 * n_terms + 1) / 2) ** (1 - si) / (s_iv - 1)
            lower = iv.mpf(n_terms + 1) ** (1 - si) / (s_iv - 1)
        else:
            for n in range(1, n_terms + 1):
                total += iv.exp(-s_iv * iv.log(iv.mpf(n)))
            upper = iv.exp((1 - s_iv) * iv.log(iv.mpf(2 * n_terms + 1) / 2)) / (s_iv - 1)
            lower = iv.exp((1 - s_iv) * iv.log(iv.mpf(n_terms + 1))) / (s_iv - 1)
        total += lower + iv.mpf([0, 1]) * (upper - lower)
        hp = _hp_from_iv(total, precision)
    return _certify(hp, precision, f"zeta({s})")


# ---------------------------------------------------------------------------
# prime power sums and tail products


def _pps_iv(k: int, p0: int, precision: int):
    """Interval for sum_{p >= p0 prime} p^(-2k), absolute width <= 10^-precision.

    Computed as P(2k) - sum_{p < p0} p^(-2k) with the small-prime part exact;
    the working precision absorbs the known cancellation (both terms are
    ~2^(-2k), the difference is ~p0^(-2k))."""
    small = arith.primes_up_to(p0 - 1).primes if p0 > 2 else ()
    cancel = max(0, math.ceil(2 * k * math.log10(p0 / 2))) if small else 0
    work = precision + cancel + 12
    with _iv_dps(work):
        m_terms = max(1, math.ceil((precision + cancel + 7) * 3.33 / (2 * k))) + 1
        total = iv.mpf(0)
        for m in range(1, m_terms + 1):
            mu = arith.mobius(m)
            if mu == 0:
                continue
            total += iv.mpf(mu) * iv.log(_zeta_even_iv(2 * k * m)) / iv.mpf(m)
        # |log zeta(t)| <= 2*2^-t for t >= 4, so the dropped m-terms sum to
        # at most 4 * 2^(-2k(m_terms+1)).
        rem = iv.mpf(4) / iv.mpf(2) ** (2 * k * (m_terms + 1))
        total += iv.mpf([-1, 1]) * rem
        if small:
            s = Fraction(0)
            for p in small:
                s += Fraction(1, p ** (2 * k))
            total -= _fraction_to_iv(s)
    return total


def prime_power_sum(k: int, p0: int = 2, precision: int = 30) -> HPReal:
    """sum over primes p >= p0 of p^(-2k), with err <= 10^-precision."""
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    if p0 < 2 or not arith._miller_rabin(p0):
        raise ValueError(f"p0={p0} is not prime")
    with _iv_dps(precision + 12):
        x = _pps_iv(k, p0, precision)
        hp = _hp_from_iv(x, precision)
    return _certify(hp, precision, f"prime_power_sum(k={k}, p0={p0})")


_TAIL_CACHE: dict[tuple[int, int, int], object] = {}
_TAIL_LOCK = threading.Lock()


def _tail_iv(a: int, p0: int, precision: int):
    """Interval for prod_{p >= p0} (1 - a/p^2), width <= ~10^-(precision+6)."""
    if a == 0:
        return iv.mpf(1)
    if a >= p0 * p0:
        raise ValueError(
            f"tail product diverges to a nonpositive factor: a={a} >= p0^2={p0 * p0}"
        )
    key = (a, p0, precision)
    with _TAIL_LOCK:
        cached = _TAIL_CACHE.get(key)
    if cached is not None:
        return cached
    ratio = a / (p0 * p0)
    need = precision + 8 + math.log10((1 + p0) / (1 - ratio))
    k_max = max(1, math.ceil(need / (-math.log10(ratio))) + 1)
    with _iv_dps(precision + 15):
        logsum = iv.mpf(0)
        for k in range(1, k_max + 1):
            pk = precision + math.ceil(k * math.log10(a + 1)) + 8
            logsum -= iv.mpf(a**k) / iv.mpf(k) * _pps_iv(k, p0, pk)
        # Dropped k-terms: 0 <= sum_{k>k_max} (a^k/k) PPS(k)
        #                  <= (1+p0)/(1-ratio) * ratio^(k_max+1)/(k_max+1).
        r_iv = iv.mpf(a) / iv.mpf(p0 * p0)
        rem = (
            iv.mpf(1 + p0)
            / (iv.mpf(1) - r_iv)
            * r_iv ** (k_max + 1)
            / iv.mpf(k_max + 1)
        )
        logsum += iv.mpf([-1, 0]) * rem
        result = iv.exp(logsum)
    with _TAIL_LOCK:
        _TAIL_CACHE[key] = result
    return result


def tail_product(a: int, p0: int, precision: int = 30) -> HPReal:
    """prod over primes p >= p0 of (1 - a/p^2), with err <= 10^-precision.

    Requires a < p0^2 (every factor positive); a = 0 gives exactly 1."""
    if a < 0:
        raise ValueError(f"a must be >= 0, got {a}")
    if p0 < 2 or not arith._miller_rabin(p0):
        raise ValueError(f"p0={p0} is not prime")
    if a == 0:
        return HPReal(mpmath.mpf(1), mpmath.mpf(0), precision)
    with _iv_dps(precision + 15):
        x = _tail_iv(a, p0, precision)
        hp = _hp_from_iv(x, precision)
    return _certify(hp, precision, f"tail_product(a={a}, p0={p0})")


@dataclass(frozen=True)
class TailTable:
    """T(a) for a = 0..b at a fixed first regular prime p0."""

    p0: int
    entries: dict[int, HPReal]

    def __getitem__(self, a: int) -> HPReal:
        return self.entries[a]


def build_tail_table(base: int, p0: Optional[int] = None, precision: int = 30) -> TailTable:
    if p0 is None:
        p0 = local.regular_threshold(base)
    entries = {a: tail_product(a, p0, precision) for a in range(0, base + 1)}
    return TailTable(p0, entries)


# ---------------------------------------------------------------------------
# finite products over small primes


def _nu(p: int, subset: DigitSet) -> int:
    return local.nu(p, subset)


def finite_product_fraction(subset: DigitSet, z: int) -> Fraction:
    """C_z(S) = prod_{p <= z} (1 - nu_p(S)/p^2), exactly."""
    if z < 2:
        raise ValueError(f"z must be >= 2, got {z}")
    fr = Fraction(1)
    for p in arith.primes_up_to(z).primes:
        q = p * p
        fr *= Fraction(q - _nu(p, subset), q)
    return fr


def finite_product(subset: DigitSet, z: int, precision: int = 30) -> HPReal:
    """C_z(S) rendered as HPReal; the only error is output rounding."""
    fr = finite_product_fraction(subset, z)
    with _iv_dps(precision + 10):
        hp = _hp_from_iv(_fraction_to_iv(fr), precision)
    return _certify(hp, precision, f"finite_product(z={z})")


def allowed_class_count(subset: DigitSet, z: int) -> int:
    """G_z(S) = prod_{p <= z} (p^2 - nu_p(S)): the number of residues modulo
    M(z) = (prod_{p <= z} p)^2 avoiding every bad class. Exact integer."""
    if z < 2:
        raise ValueError(f"z must be >= 2, got {z}")
    g = 1
    for p in arith.primes_up_to(z).primes:
        g *= p * p - _nu(p, subset)
    return g


def modulus(z: int) -> int:
    """M(z) = (prod_{p <= z} p)^2."""
    m = 1
    for p in arith.primes_up_to(z).primes:
        m *= p
    return m * m


def subset_constant(subset: DigitSet, precision: int = 30) -> HPReal:
    """C(S) = prod over all primes of (1 - nu_p(S)/p^2): exact factors for
    the irregular primes, tail product T(a) with a = 1 + |S| - [0 in S] for
    the regular ones."""
    base = subset.base
    p0 = local.regular_threshold(base)
    fr = Fraction(1)
    for p in local.irregular_primes(base):
        q = p * p
        fr *= Fraction(q - _nu(p, subset), q)
    a = 1 + len(subset) - (1 if 0 in subset else 0)
    with _iv_dps(precision + 12):
        val = _fraction_to_iv(fr) * _tail_iv(a, p0, precision + 6)
        hp = _hp_from_iv(val, precision)
    return _certify(hp, precision, f"subset_constant({subset})")


# ---------------------------------------------------------------------------
# subset grouping and the dead-end constant


def _digit_sets(base: int, p: int, d: int) -> frozenset[int]:
    return local._digit_residues(p, base, d)


def _subset_groups_direct(base: int) -> dict[tuple[tuple[int, ...], int], int]:
    """Walk all 2^b subsets; group signed counts by (nu vector over the
    irregular primes, tail exponent a). Reference implementation for tests
    and small bases."""
    if base > 16:
        raise CapacityError("direct subset walk capped at base 16; use _subset_groups")
    irr = local.irregular_primes(base)
    per_digit = {
        d: tuple(_digit_sets(base, p, d) for p in irr) for d in range(base)
    }
    groups: dict[tuple[tuple[int, ...], int], int] = {}
    for mask in range(1 << base):
        digits = [d for d in range(base) if mask >> d & 1]
        a = 1 + len(digits) - (1 if mask & 1 else 0)
        nus = []
        for i in range(len(irr)):
            bad = {0}
            for d in digits:
                bad |= per_digit[d][i]
            nus.append(len(bad))
        key = (tuple(nus), a)
        groups[key] = groups.get(key, 0) + (-1) ** len(digits)
    return {k: v for k, v in groups.items() if v}


def _convolve(px: list[int], py: list[int]) -> list[int]:
    out = [0] * (len(px) + len(py) - 1)
    for i, ci in enumerate(px):
        if ci:
            for j, cj in enumerate(py):
                out[i + j] += ci * cj
    return out


def _subset_groups(base: int) -> dict[tuple[tuple[int, ...], int], int]:
    """Same grouping as the direct walk, built by digit-type compression.

    Digits 1..b-1 sharing identical bad-residue signatures across the
    irregular primes are interchangeable: a subset's nu vector depends only
    on which signature types appear (not on the multiplicity), while the
    tail exponent a = 1 + m depends only on the number m of nonzero digits
    chosen. Choosing k >= 1 digits out of a type of size c contributes the
    signed generating polynomial (1-x)^c - 1, so a whole presence pattern
    contributes the product of those polynomials. Digit 0 is tracked
    separately because it is the one digit excluded from the exponent a."""
    irr = local.irregular_primes(base)
    sig = {d: tuple(_digit_sets(base, p, d) for p in irr) for d in range(base)}

    def canon(v: tuple[frozenset[int], ...]) -> tuple[tuple[int, ...], ...]:
        return tuple(tuple(sorted(s)) for s in v)

    type_count: dict[tuple, int] = {}
    type_sets: dict[tuple, tuple[frozenset[int], ...]] = {}
    for d in range(1, base):
        key = canon(sig[d])
        type_count[key] = type_count.get(key, 0) + 1
        type_sets[key] = sig[d]
    types = sorted(type_count)
    polys = {}
    for t in types:
        c = type_count[t]
        polys[t] = [0] + [(-1) ** j * math.comb(c, j) for j in range(1, c + 1)]

    groups: dict[tuple[tuple[int, ...], int], int] = {}
    for zero_in in (0, 1):
        for pattern_bits in range(1 << len(types)):
            chosen = [types[i] for i in range(len(types)) if pattern_bits >> i & 1]
            poly = [1]
            for t in chosen:
                poly = _convolve(poly, polys[t])
            unions = []
            for i in range(len(irr)):
                bad = {0}
                if zero_in:
                    bad |= sig[0][i]
                for t in chosen:
                    bad |= type_sets[t][i]
                unions.append(len(bad))
            nus = tuple(unions)
            sign = -1 if zero_in else 1
            for m, coeff in enumerate(poly):
                if coeff:
                    key = (nus, 1 + m)
                    groups[key] = groups.get(key, 0) + sign * coeff
    return {k: v for k, v in groups.items() if v}


def group_coefficients(base: int) -> dict[int, Fraction]:
    """Collapse the subset groups to exact rationals K_a: the coefficient of
    the tail T(a) in c_dead = sum_a K_a T(a)."""
    irr = local.irregular_primes(base)
    coeffs: dict[int, Fraction] = {}
    for (nus, a), coeff in _subset_groups(base).items():
        fr = Fraction(coeff)
        for p, nu_p in zip(irr, nus):
            q = p * p
            fr *= Fraction(q - nu_p, q)
        coeffs[a] = coeffs.get(a, Fraction(0)) + fr
    return {a: f for a, f in sorted(coeffs.items())}


_DEAD_END_CACHE: dict[tuple[int, int], HPReal] = {}
_DEAD_END_LOCK = threading.Lock()


def dead_end_constant(base: int, precision: int = 30) -> HPReal:
    """The dead-end density constant c_dead(base), certified to
    err <= 10^-precision.

    The 2^b subsets are grouped by (nu vector over irregular primes, tail
    exponent a); each group's finite part is an exact rational, so the only
    approximation lives in the handful of tail products T(a). The working
    precision is 2*precision + 20 digits, absorbing the catastrophic
    cancellation of the alternating sum (O(1) terms, tiny total)."""
    if base < 2:
        raise ValueError(f"base must be >= 2, got {base}")
    if base > local.MAX_BASE:
        raise CapacityError(f"base {base} exceeds cap {local.MAX_BASE}")
    if precision < 1:
        raise ValueError(f"precision must be >= 1, got {precision}")
    key = (base, precision)
    with _DEAD_END_LOCK:
        cached = _DEAD_END_CACHE.get(key)
    if cached is not None:
        return cached

    p0 = local.regular_threshold(base)
    coeffs = group_coefficients(base)
    work = 2 * precision + 20
    tail_precision = precision + 18
    with _iv_dps(work):
        total = iv.mpf(0)
        for a in sorted(coeffs):
            fr = coeffs[a]
            if fr:
                total += _fraction_to_iv(fr) * _tail_iv(a, p0, tail_precision)
        hp = _hp_from_iv(total, precision)
    _certify(hp, precision, f"dead_end_constant({base})")
    if hp.value - hp.err <= 0:
        raise PrecisionError(
            f"dead_end_constant({base}): positivity not certified at "
            f"precision {precision}"
        )
    with _DEAD_END_LOCK:
        _DEAD_END_CACHE[key] = hp
    return hp


def hp_div(x: HPReal, y: HPReal, precision: int = 30) -> HPReal:
    """Interval division of two bounded values (used for model/truth ratios)."""
    with _iv_dps(precision + 15):
        xi = iv.mpf([x.value - x.err, x.value + x.err])
        yi = iv.mpf([y.value - y.err, y.value + y.err])
        hp = _hp_from_iv(xi / yi, precision)
    return hp
