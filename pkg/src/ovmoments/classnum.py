"""Hurwitz class numbers, sums of three squares, and the identities they
satisfy with the even-minus-odd rank count of overpartitions."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import gcd, isqrt
from typing import Sequence

from .genfun import alpha_bar_series, divisor_sigma, spt_series_direct, theta_cubed
from .reports import Report, timed


class ClassNumberError(ValueError):
    pass


# --------------------------------------------------------------------------
# elementary number theory


def factorize(n: int) -> dict[int, int]:
    if n < 1:
        raise ValueError("factorize needs a positive integer")
    out: dict[int, int] = {}
    d = 2
    while d * d <= n:
        while n % d == 0:
            out[d] = out.get(d, 0) + 1
            n //= d
        d += 1 if d == 2 else 2
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def divisors(n: int) -> list[int]:
    ds = [1]
    for p, e in factorize(n).items():
        ds = [d * p**i for d in ds for i in range(e + 1)]
    return sorted(ds)


def mobius(n: int) -> int:
    f = factorize(n)
    if any(e > 1 for e in f.values()):
        return 0
    return -1 if len(f) % 2 else 1


def is_prime(n: int) -> bool:
    return n >= 2 and factorize(n) == {n: 1}


def legendre(a: int, p: int) -> int:
    """Legendre symbol by Euler's criterion; ``(0/p) = 0``."""
    if p < 3 or not is_prime(p):
        raise ValueError(f"legendre needs an odd prime, got {p}")
    r = pow(a % p, (p - 1) // 2, p)
    return -1 if r == p - 1 else r


def jacobi(a: int, n: int) -> int:
    if n <= 0 or n % 2 == 0:
        raise ValueError("jacobi needs a positive odd modulus")
    a %= n
    result = 1
    while a:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                result = -result
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            result = -result
        a %= n
    return result if n == 1 else 0


def kronecker(a: int, n: int) -> int:
    """Kronecker symbol ``(a/n)`` for ``n >= 1`` with the usual conventions:
    ``(a/2) = 0`` for even ``a``, ``1`` for ``a = ±1 (mod 8)``, ``-1`` for ``a = ±3 (mod 8)``."""
    if n < 1:
        raise ValueError("kronecker needs a positive lower argument")
    result = 1
    while n % 2 == 0:
        n //= 2
        if a % 2 == 0:
            return 0
        if a % 8 in (3, 5):
            result = -result
    return result * (jacobi(a, n) if n > 1 else 1)


# --------------------------------------------------------------------------
# discriminants and class numbers


@dataclass(frozen=True)
class Discriminant:
    """``-n = D f^2`` with ``D`` a negative fundamental discriminant."""

    n: int
    D: int
    f: int

    @property
    def fundamental(self) -> bool:
        return self.f == 1


def is_fundamental(D: int) -> bool:
    if D % 4 == 1:
        return _squarefree(abs(D))
    if D % 4 == 0:
        m = D // 4
        return m % 4 in (2, 3) and _squarefree(abs(m))
    return False


def _squarefree(m: int) -> bool:
    return m >= 1 and all(e == 1 for e in factorize(m).values())


def decompose(n: int) -> Discriminant:
    """Write ``-n = D f^2``; requires ``n = 0, 3 (mod 4)``."""
    if n < 1 or n % 4 in (1, 2):
        raise ClassNumberError(f"-{n} is not a discriminant")
    core, f = 1, 1
    for p, e in factorize(n).items():
        f *= p ** (e // 2)
        if e % 2:
            core *= p
    D = -core
    if D % 4 != 1:
        D *= 4
        f //= 2
    assert D * f * f == -n and is_fundamental(D)
    return Discriminant(n, D, f)


def reduced_forms(D: int) -> list[tuple[int, int, int]]:
    """Reduced positive definite forms ``(a, b, c)`` with ``b^2 - 4ac = D``.

    ``|b| <= a <= c`` and ``b >= 0`` whenever ``|b| = a`` or ``a = c``.
    """
    if D >= 0 or D % 4 not in (0, 1):
        raise ClassNumberError(f"{D} is not a negative discriminant")
    forms = []
    a = 1
    while 3 * a * a <= -D:
        for b in range(-a + 1, a + 1):
            num = b * b - D
            if num % (4 * a):
                continue
            c = num // (4 * a)
            if c < a or (a == c and b < 0):
                continue
            forms.append((a, b, c))
        a += 1
    return forms


def class_number(D: int) -> int:
    """Number of primitive reduced forms of discriminant ``D``."""
    return sum(1 for a, b, c in reduced_forms(D) if gcd(gcd(a, b), c) == 1)


def unit_weight(D: int) -> int:
    return {-3: 3, -4: 2}.get(D, 1)


@lru_cache(maxsize=None)
def hurwitz(n: int) -> Fraction:
    """Hurwitz class number via ``H(n) = h(D)/w(D) sum_{d|f} mu(d) (D/d) sigma(f/d)``."""
    if n <= 0:
        raise ClassNumberError("hurwitz(n) is defined here only for n >= 1")
    if n % 4 in (1, 2):
        return Fraction(0)
    disc = decompose(n)
    D, f = disc.D, disc.f
    s = sum(mobius(d) * kronecker(D, d) * divisor_sigma(f // d) for d in divisors(f))
    return Fraction(class_number(D) * s, unit_weight(D))


def hurwitz_by_forms(n: int) -> Fraction:
    """Independent route: all reduced forms of discriminant ``-n``, the
    classes of ``x^2+y^2`` and ``x^2+xy+y^2`` multiples weighted 1/2 and 1/3."""
    if n <= 0:
        raise ClassNumberError("hurwitz(n) is defined here only for n >= 1")
    if n % 4 in (1, 2):
        return Fraction(0)
    total = Fraction(0)
    for a, b, c in reduced_forms(-n):
        if a == b == c:
            total += Fraction(1, 3)
        elif b == 0 and a == c:
            total += Fraction(1, 2)
        else:
            total += 1
    return total


# --------------------------------------------------------------------------
# sums of three squares and the rank parity count


def three_squares_r(n: int) -> int:
    """Ordered signed triples ``(x, y, z)`` with ``x^2 + y^2 + z^2 = n``."""
    if n < 0:
        return 0
    count = 0
    m = isqrt(n)
    for x in range(-m, m + 1):
        rest = n - x * x
        my = isqrt(rest)
        for y in range(-my, my + 1):
            r2 = rest - y * y
            z = isqrt(r2)
            if z * z == r2:
                count += 1 if z == 0 else 2
    return count


def alpha_bar(n: int) -> int:
    return int(alpha_bar_series(n + 1)[n])


def _alpha_values(order: int, alpha: Sequence[int] | None) -> Sequence[int]:
    if alpha is None:
        return list(alpha_bar_series(order).array)
    if len(alpha) < order:
        raise ValueError(f"need alpha values through {order - 1}")
    return alpha


def _at(values: Sequence[int], n: int, step: int) -> int:
    """``values[n/step]``, zero when ``step`` does not divide ``n``."""
    return values[n // step] if n % step == 0 else 0


def class_formula_alpha(n: int) -> Fraction:
    """``(-1)^n alpha(n)`` predicted from class numbers, ``n >= 1``."""
    if n % 4 in (1, 2):
        return -4 * hurwitz(4 * n)
    if n % 8 == 3:
        return -24 * hurwitz(n)
    if n % 8 == 7:
        return -16 * hurwitz(n)
    return -16 * hurwitz(n) - Fraction(three_squares_r(n // 4), 3)


def class_formula_r(n: int) -> Fraction:
    if n % 4 in (1, 2):
        return 12 * hurwitz(4 * n)
    if n % 8 == 3:
        return 24 * hurwitz(n)
    if n % 8 == 7:
        return Fraction(0)
    return Fraction(three_squares_r(n // 4))


def verify_alpha_class_dictionary(N: int, alpha: Sequence[int] | None = None) -> Report:
    rep = Report("dictionary", {"N": N})
    with timed(rep):
        a = _alpha_values(N + 1, alpha)
        for n in range(1, N + 1):
            rep.check(f"n={n}", class_formula_alpha(n), (-1) ** n * a[n])
    return rep


def verify_rofn(N: int, r: Sequence[int] | None = None) -> Report:
    """The case formula for ``r(n)`` and the agreement of brute force with ``Theta^3``."""
    rep = Report("rofn", {"N": N})
    with timed(rep):
        theta = theta_cubed(N + 1)
        if r is None:
            r = [three_squares_r(n) for n in range(N + 1)]
        for n in range(N + 1):
            rep.check(f"Theta^3 q^{n}", theta[n], r[n])
        for n in range(1, N + 1):
            rep.check(f"r({n})", class_formula_r(n), r[n])
    return rep


def _hecke_lhs(values: Sequence[int], ell: int, n: int) -> int:
    sym = legendre(-n, ell)
    return values[ell * ell * n] + sym * values[n] + ell * _at(values, n, ell * ell)


def _check_ell(ell: int) -> None:
    if not is_prime(ell) or ell in (2, 3):
        raise ValueError(f"ell must be a prime other than 2 and 3, got {ell}")


def verify_hecke_exact(ell: int, N: int, alpha: Sequence[int] | None = None) -> Report:
    _check_ell(ell)
    rep = Report("hecke-exact", {"ell": ell, "N": N})
    with timed(rep):
        a = _alpha_values(ell * ell * N + 1, alpha)
        for n in range(N + 1):
            rep.check(f"ell={ell} n={n}", (ell + 1) * a[n], _hecke_lhs(a, ell, n))
    return rep


def spt1_values(order: int) -> list[int]:
    return list(spt_series_direct(order)[0].array)


def verify_spt1_alpha_mod3(N: int, spt1: Sequence[int] | None = None, alpha: Sequence[int] | None = None) -> Report:
    rep = Report("theorem4", {"N": N, "p": 3})
    with timed(rep):
        a = _alpha_values(N + 1, alpha)
        s = spt1 if spt1 is not None else spt1_values(N + 1)
        for n in range(N + 1):
            rep.check(f"n={n}", (kronecker(n, 3) * a[n]) % 3, s[n] % 3)
    return rep


def verify_hecke_mod3(ell: int, N: int, spt1: Sequence[int] | None = None) -> Report:
    _check_ell(ell)
    rep = Report("hecke-mod3", {"ell": ell, "N": N, "p": 3})
    with timed(rep):
        s = spt1 if spt1 is not None else spt1_values(ell * ell * N + 1)
        for n in range(N + 1):
            rep.check(f"ell={ell} n={n}", ((ell + 1) * s[n]) % 3, _hecke_lhs(s, ell, n) % 3)
    return rep
