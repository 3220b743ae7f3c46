"""Exact arithmetic helpers: rational string codec, integer roots, certified ceil(ln).

Everything in the core works on `fractions.Fraction`; floats never enter any
computation that feeds a comparison. The helpers here keep the two places
where irrational quantities appear (k-th roots, natural logarithms) certified:
results are either exact or bracketed by rational intervals.
"""

from __future__ import annotations

import math
import re
from fractions import Fraction

import gmpy2

from .errors import InputError

ZERO = Fraction(0)
ONE = Fraction(1)

_RATIONAL_RE = re.compile(r"^(-?\d+)(?:/([1-9]\d*))?$")


def parse_rational(text: str) -> Fraction:
    """Parse a "num/den" (or bare integer) string into an exact Fraction.

    Decimal or float notation is rejected: exactness of every stored quantity
    depends on inputs never passing through binary floating point.
    """
    if not isinstance(text, str):
        raise InputError(f"rational must be a string, got {type(text).__name__}")
    m = _RATIONAL_RE.match(text.strip())
    if m is None:
        raise InputError(f"malformed rational {text!r}; expected 'num/den'")
    num = int(m.group(1))
    den = int(m.group(2)) if m.group(2) else 1
    return Fraction(num, den)


def format_rational(value: Fraction) -> str:
    """Render a Fraction as "num/den", always including the denominator."""
    return f"{value.numerator}/{value.denominator}"


def exact_kth_root(value: Fraction, k: int) -> Fraction | None:
    """Return value**(1/k) if it is rational, else None. Requires value >= 0."""
    if k <= 0:
        raise ValueError("k must be positive")
    if value < 0:
        raise ValueError("value must be nonnegative")
    rn, num_exact = gmpy2.iroot(gmpy2.mpz(value.numerator), k)
    rd, den_exact = gmpy2.iroot(gmpy2.mpz(value.denominator), k)
    if num_exact and den_exact:
        return Fraction(int(rn), int(rd))
    return None


def kth_root_interval(value: Fraction, k: int, digits: int) -> tuple[Fraction, Fraction]:
    """Rational [lo, hi] with lo <= value**(1/k) <= hi, width about 10**-digits."""
    if value < 0:
        raise ValueError("value must be nonnegative")
    if value == 0:
        return ZERO, ZERO
    t = 10**digits
    scaled = value.numerator * t**k
    den = value.denominator
    z_lo = scaled // den
    z_hi = -((-scaled) // den)
    r_lo, _ = gmpy2.iroot(gmpy2.mpz(z_lo), k)
    r_hi, _ = gmpy2.iroot(gmpy2.mpz(z_hi), k)
    return Fraction(int(r_lo), t), Fraction(int(r_hi) + 1, t)


def _e_bounds(terms: int) -> tuple[Fraction, Fraction]:
    """Rational lower/upper bounds on e from the truncated exponential series."""
    acc = ZERO
    fact = 1
    for i in range(terms + 1):
        if i > 0:
            fact *= i
        acc += Fraction(1, fact)
    # tail sum_{i>terms} 1/i! < 1/(terms! * terms)
    return acc, acc + Fraction(1, fact * terms)


def _exp_at_least(m: int, x: Fraction) -> bool:
    """Decide e**m >= x exactly (x rational, so ties only occur at m == 0)."""
    if m == 0:
        return ONE >= x
    terms = 16
    while True:
        lo, hi = _e_bounds(terms)
        if m > 0:
            lo_m, hi_m = lo**m, hi**m
        else:
            lo_m, hi_m = 1 / hi ** (-m), 1 / lo ** (-m)
        if lo_m >= x:
            return True
        if hi_m < x:
            return False
        terms *= 2
        if terms > 4096:  # only reachable if x == e**m, which is impossible
            raise ArithmeticError("failed to separate e**m from rational argument")


def ceil_ln(x: Fraction) -> int:
    """Smallest integer m with e**m >= x, certified with exact rational bounds."""
    if x <= 0:
        raise InputError("logarithm argument must be positive")
    if x == 1:
        return 0
    hint = math.ceil(math.log(x.numerator) - math.log(x.denominator))
    m = int(hint)
    while not _exp_at_least(m, x):
        m += 1
    while _exp_at_least(m - 1, x):
        m -= 1
    return m
