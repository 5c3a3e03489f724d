"""Generating functions for overpartition ranks, residual cranks and friends.

Every two-variable generating function is built by one routine that only
knows how to multiply by ``(1 + c z^e q^s)``, divide by ``(1 - c z^e q^s)``
and multiply by monomials.  Three coefficient engines implement those
steps:

* :class:`LaurentEngine` keeps the full Laurent polynomial in ``z``
  (a :class:`~ovmoments.series.ZQSeries`); practical up to order ~60.
* :class:`JetEngine` keeps the power sums ``sum_m m^j c(m, n)`` for
  ``j <= K``, i.e. the derivatives ``delta_z^j`` at ``z = 1``.  This is the
  exact truncated expansion around ``z = 1`` and reaches orders in the
  thousands.
* :class:`ScalarEngine` specialises ``z`` to ``+1`` or ``-1``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb
from typing import Callable

import numpy as np

from . import series as S
from .reports import Report, timed
from .series import QSeries, ZQSeries

MAX_TWO_VARIABLE_ORDER = 61
MAX_ONE_VARIABLE_ORDER = 4001

RANK_VARIANTS = ("dyson", "m2")
CRANK_VARIANTS = ("partition", "residual1", "residual2")

# statistic kind -> short moment prefix used in relation names
PREFIX = {"rank": "N", "m2rank": "N2", "crank1": "M", "crank2": "M2"}
KIND_OF_PREFIX = {v: k for k, v in PREFIX.items()}


class GenfunError(ValueError):
    pass


# --------------------------------------------------------------------------
# engines


class LaurentEngine:
    def one(self, order: int) -> ZQSeries:
        return ZQSeries.one(order)

    def zero(self, order: int) -> ZQSeries:
        return ZQSeries([], order)

    def mul_factor(self, x: ZQSeries, c: int, e: int, s: int) -> ZQSeries:
        return x.mul_factor(c, e, s)

    def div_factor(self, x: ZQSeries, c: int, e: int, s: int) -> ZQSeries:
        return x.div_factor(c, e, s)

    def monomial(self, x: ZQSeries, c: int, e: int, s: int) -> ZQSeries:
        return x.shift(e, s, c)

    def add(self, x: ZQSeries, y: ZQSeries) -> ZQSeries:
        return x + y


class ScalarEngine:
    def __init__(self, z0: int):
        if z0 not in (1, -1):
            raise GenfunError("scalar engine only supports z = 1 or z = -1")
        self.z0 = z0

    def one(self, order: int) -> np.ndarray:
        a = np.zeros(order, dtype=object)
        if order:
            a[0] = 1
        return a

    def zero(self, order: int) -> np.ndarray:
        return np.zeros(order, dtype=object)

    def mul_factor(self, x, c, e, s):
        return S.sparse_factor_mul(x, s, c * self.z0 ** (e % 2))

    def div_factor(self, x, c, e, s):
        return S.sparse_factor_div(x, s, c * self.z0 ** (e % 2))

    def monomial(self, x, c, e, s):
        out = np.zeros(len(x), dtype=object)
        if s < len(x):
            out[s:] = x[: len(x) - s] * (c * self.z0 ** (e % 2))
        return out

    def add(self, x, y):
        return x + y


@lru_cache(maxsize=None)
def _zshift_matrix(e: int, K: int) -> np.ndarray:
    """Action of multiplication by ``z**e`` on power sums: ``T[j, i] = C(j, i) e^(j-i)``."""
    T = np.zeros((K + 1, K + 1), dtype=object)
    for j in range(K + 1):
        for i in range(j + 1):
            T[j, i] = comb(j, i) * e ** (j - i)
    T.flags.writeable = False
    return T


class JetEngine:
    """Rows ``j = 0..K`` hold the series ``sum_n (sum_m m^j c(m, n)) q^n``."""

    def __init__(self, K: int):
        self.K = K

    def one(self, order: int) -> np.ndarray:
        a = np.zeros((self.K + 1, order), dtype=object)
        if order:
            a[0, 0] = 1
        return a

    def zero(self, order: int) -> np.ndarray:
        return np.zeros((self.K + 1, order), dtype=object)

    def _apply(self, e: int, block: np.ndarray) -> np.ndarray:
        if e == 0:
            return block
        return _zshift_matrix(e, self.K) @ block

    def mul_factor(self, x, c, e, s):
        out = x.copy()
        n = x.shape[1]
        if s < n:
            out[:, s:] = out[:, s:] + c * self._apply(e, x[:, : n - s])
        return out

    def div_factor(self, x, c, e, s):
        out = x.copy()
        n = x.shape[1]
        for start in range(s, n, s):
            stop = min(start + s, n)
            out[:, start:stop] = out[:, start:stop] + c * self._apply(e, out[:, start - s : stop - s])
        return out

    def monomial(self, x, c, e, s):
        out = np.zeros_like(x)
        n = x.shape[1]
        if s < n:
            out[:, s:] = c * self._apply(e, x[:, : n - s])
        return out

    def add(self, x, y):
        return x + y


# --------------------------------------------------------------------------
# product formulas and the rank dynamic programme


def _crank_build(engine, variant: str, order: int):
    x = engine.one(order)
    if variant == "partition":
        # (q;q)_inf / ((zq;q)_inf (q/z;q)_inf)
        for s in range(1, order):
            x = engine.mul_factor(x, -1, 0, s)
        for s in range(1, order):
            x = engine.div_factor(x, 1, 1, s)
            x = engine.div_factor(x, 1, -1, s)
    elif variant == "residual1":
        # (q^2;q^2)_inf / ((zq;q)_inf (q/z;q)_inf)
        for s in range(2, order, 2):
            x = engine.mul_factor(x, -1, 0, s)
        for s in range(1, order):
            x = engine.div_factor(x, 1, 1, s)
            x = engine.div_factor(x, 1, -1, s)
    elif variant == "residual2":
        # (-q;q)_inf (q^2;q^2)_inf / ((q;q^2)_inf (zq^2;q^2)_inf (q^2/z;q^2)_inf)
        for s in range(1, order):
            x = engine.mul_factor(x, 1, 0, s)
        for s in range(2, order, 2):
            x = engine.mul_factor(x, -1, 0, s)
        for s in range(1, order, 2):
            x = engine.div_factor(x, 1, 0, s)
        for s in range(2, order, 2):
            x = engine.div_factor(x, 1, 1, s)
            x = engine.div_factor(x, 1, -1, s)
    else:
        raise GenfunError(f"unknown crank variant {variant!r}")
    return x


def _rank_build(engine, variant: str, order: int):
    """Sum over overpartitions conditioned on the largest part ``L``.

    Each part contributes ``-1`` to the statistic (the ``n(lambda)`` term),
    except that for the M2-rank odd non-overlined parts are neutral.  The
    largest part contributes ``L`` (Dyson) or ``ceil(L/2) - chi`` (M2).
    ``G`` accumulates the factors of the part sizes below ``L``.
    """
    if variant not in RANK_VARIANTS:
        raise GenfunError(f"unknown rank variant {variant!r}")
    total = engine.one(order)
    G = engine.one(order)
    for L in range(1, order):
        if variant == "dyson":
            top = engine.div_factor(engine.monomial(G, 2, L - 1, L), 1, -1, L)
            G = engine.div_factor(engine.mul_factor(G, 1, -1, L), 1, -1, L)
        elif L % 2:
            # odd largest part: the overlined and plain versions share the weight z^((L-1)/2)
            top = engine.div_factor(engine.monomial(G, 2, (L - 1) // 2, L), 1, 0, L)
            G = engine.div_factor(engine.mul_factor(G, 1, -1, L), 1, 0, L)
        else:
            top = engine.div_factor(engine.monomial(G, 2, L // 2 - 1, L), 1, -1, L)
            G = engine.div_factor(engine.mul_factor(G, 1, -1, L), 1, -1, L)
        total = engine.add(total, top)
    return total


def _check_two_variable(order: int) -> None:
    if order > MAX_TWO_VARIABLE_ORDER:
        raise GenfunError(f"two-variable expansions are capped at order {MAX_TWO_VARIABLE_ORDER}, got {order}")


def _check_one_variable(order: int) -> None:
    if order > MAX_ONE_VARIABLE_ORDER:
        raise GenfunError(f"one-variable expansions are capped at order {MAX_ONE_VARIABLE_ORDER}, got {order}")


def crank_gf(variant: str, order: int) -> ZQSeries:
    """Two-variable crank generating function ``sum M(m, n) z^m q^n``.

    ``partition`` is the Andrews-Garvan crank, ``residual1`` / ``residual2``
    the first and second residual cranks of overpartitions.
    """
    _check_two_variable(order)
    return _crank_build(LaurentEngine(), variant, order)


def rank_gf(variant: str, order: int) -> ZQSeries:
    """Two-variable generating function of the Dyson rank or the M2-rank."""
    _check_two_variable(order)
    return _rank_build(LaurentEngine(), variant, order)


@lru_cache(maxsize=64)
def rank_at(variant: str, z0: int, order: int) -> QSeries:
    """The rank generating function specialised at ``z = z0`` in ``{1, -1}``."""
    _check_one_variable(order)
    return QSeries._wrap(_rank_build(ScalarEngine(z0), variant, order))


def alpha_bar_series(order: int) -> QSeries:
    """Even-rank minus odd-rank overpartition counts, i.e. the Dyson rank at ``z = -1``."""
    return S.cached(f"alpha_bar", order, lambda N: rank_at("dyson", -1, N))


# --------------------------------------------------------------------------
# moments


_STAT_BUILD: dict[str, tuple[Callable, str]] = {
    "rank": (_rank_build, "dyson"),
    "m2rank": (_rank_build, "m2"),
    "crank1": (_crank_build, "residual1"),
    "crank2": (_crank_build, "residual2"),
}

_jet_memo: dict[str, tuple[int, int, np.ndarray]] = {}


def canonical_kind(kind: str) -> str:
    if kind in PREFIX:
        return kind
    if kind in KIND_OF_PREFIX:
        return KIND_OF_PREFIX[kind]
    aliases = {"dyson": "rank", "m2": "m2rank", "residual1": "crank1", "residual2": "crank2"}
    if kind in aliases:
        return aliases[kind]
    raise GenfunError(f"unknown statistic kind {kind!r}")


def moment_jets(kind: str, K: int, order: int) -> np.ndarray:
    """Power-sum rows ``0..K`` of a statistic's generating function (uncached path is exact)."""
    kind = canonical_kind(kind)
    _check_one_variable(order)
    hit = _jet_memo.get(kind)
    if hit is not None and hit[0] >= K and hit[1] >= order:
        return hit[2][: K + 1, :order]
    build, variant = _STAT_BUILD[kind]
    K_eff = max(K, hit[0] if hit else 0)
    rows = build(JetEngine(K_eff), variant, order)
    rows.flags.writeable = False
    _jet_memo[kind] = (K_eff, order, rows)
    return rows[: K + 1]


@dataclass(frozen=True)
class MomentSeries:
    kind: str
    k: int
    series: QSeries

    @property
    def name(self) -> str:
        return f"{PREFIX[self.kind]}_{self.k}"


def moment_series(kind: str, k: int, order: int) -> MomentSeries:
    """``sum_n (sum_m m^k c(m, n)) q^n`` for one of the four statistics.

    Odd moments vanish identically and are refused.
    """
    kind = canonical_kind(kind)
    if k < 0 or k % 2:
        raise GenfunError(f"odd moments (k={k}) vanish identically; only even k are constructed")
    rows = S.cached(
        f"moment-{kind}-{k}",
        order,
        lambda N: QSeries._wrap(np.array(moment_jets(kind, k, N)[k], dtype=object)),
    )
    return MomentSeries(kind, k, rows)


def overpartition_gf(order: int) -> QSeries:
    """``Pbar = (-q;q)_inf / (q;q)_inf``."""
    return S.cached("Pbar", order, lambda N: S.eta_product([(2, 1), (1, -2)], 0, N))


def divisor_sigma(n: int, k: int = 1) -> int:
    return sum(d**k for d in range(1, n + 1) if n % d == 0)


def _sigma_array(order: int, k: int = 1) -> np.ndarray:
    out = np.zeros(order, dtype=object)
    for d in range(1, order):
        out[d::d] += d**k
    return out


def lambert(order: int, weight: Callable[[int, int], int]) -> QSeries:
    """``sum_{d, r >= 1} weight(d, r) q^(d r)``."""
    out = np.zeros(order, dtype=object)
    for d in range(1, order):
        for r in range(1, (order - 1) // d + 1):
            out[d * r] += weight(d, r)
    return QSeries._wrap(out)


def nov_ov_series(order: int) -> tuple[QSeries, QSeries]:
    """Generating functions of ``nov(n)`` and ``ov(n)`` from their product forms."""
    P = overpartition_gf(order)
    nov = P * lambert(order, lambda d, r: d)
    ov = P * lambert(order, lambda d, r: d if r % 2 else -d)
    return nov, ov


def spt_series(order: int) -> tuple[QSeries, QSeries, QSeries]:
    """``(Spt1bar, Spt2bar, Sptbar)`` via second rank and crank moments."""
    P = overpartition_gf(order)
    sig = QSeries._wrap(_sigma_array(order))
    sig2 = S.substitute_q_power(sig, 2)
    N2 = moment_series("rank", 2, order).series
    NN2 = moment_series("m2rank", 2, order).series
    sptbar = P * sig * 2 - N2
    spt2 = P * sig2 * 2 - NN2
    M2 = moment_series("crank1", 2, order).series
    MM2 = moment_series("crank2", 2, order).series
    spt1 = M2 - N2 - MM2 + NN2
    return spt1, spt2, sptbar


def spt_series_direct(order: int) -> tuple[QSeries, QSeries, QSeries]:
    """``(Spt1bar, Spt2bar, Sptbar)`` by conditioning on the smallest part.

    Overpartitions with smallest part ``s`` occurring ``r`` times contribute
    ``2 r q^(r s)`` times the overpartitions into parts larger than ``s``.
    """
    _check_one_variable(order)
    tail = np.array(overpartition_gf(order).array, dtype=object)
    odd = np.zeros(order, dtype=object)
    even = np.zeros(order, dtype=object)
    for s in range(1, order):
        tail = S.sparse_factor_div(S.sparse_factor_mul(tail, s, -1), s, -1)
        term = np.zeros(order, dtype=object)
        term[s:] = 2 * tail[: order - s]
        term = S.sparse_factor_div(S.sparse_factor_div(term, s, 1), s, 1)
        if s % 2:
            odd += term
        else:
            even += term
    return QSeries._wrap(odd), QSeries._wrap(even), QSeries._wrap(odd + even)


def cusp_form_F(order: int) -> QSeries:
    """``F = q (q;q)^6 (q^2;q^2)^9``."""
    return S.cached("F", order, lambda N: S.eta_product([(1, 6), (2, 9)], 1, N))


def theta_cubed(order: int) -> QSeries:
    arr = np.zeros(order, dtype=object)
    m = 0
    while m * m < order:
        arr[m * m] += 1 if m == 0 else 2
        m += 1
    theta = QSeries._wrap(arr)
    return theta * theta * theta


# --------------------------------------------------------------------------
# named series used by relations


def named_series(name: str, order: int) -> QSeries:
    """Resolve a relation term name to its q-series.

    Names: ``P``, ``aF``, ``nov``, ``ov``, ``spt1``, ``spt2``, ``spt``,
    ``alpha``, ``<prefix>_<k>`` for moments (``N_4``, ``M2_6``...), and
    products of moments divided by ``P`` such as ``M_2*M_4/P``.
    """
    if name == "P":
        return overpartition_gf(order)
    if name == "aF":
        return cusp_form_F(order)
    if name in ("nov", "ov"):
        return nov_ov_series(order)[name == "ov"]
    if name in ("spt1", "spt2", "spt"):
        return spt_series(order)[("spt1", "spt2", "spt").index(name)]
    if name == "alpha":
        return alpha_bar_series(order)
    if "*" in name or name.endswith("/P"):
        body, slash, denom = name.partition("/")
        if slash and denom != "P":
            raise GenfunError(f"unsupported divisor in {name!r}")
        result = None
        for factor in body.split("*"):
            f = named_series(factor, order)
            result = f if result is None else result * f
        if slash:
            result = result * S.qs_invert(overpartition_gf(order))
        return result
    prefix, _, k = name.rpartition("_")
    if prefix in KIND_OF_PREFIX and k.isdigit():
        return moment_series(KIND_OF_PREFIX[prefix], int(k), order).series
    raise GenfunError(f"unknown series name {name!r}")


# --------------------------------------------------------------------------
# rank-moment combinations


def rank_combination_terms(variant: str, a: int) -> dict[str, tuple[Fraction, ...]]:
    """Coefficient polynomials in ``n`` of the rank-moment combination for even ``a``.

    The result maps moment names to ``(c0, c1)`` meaning ``c0 + c1*n``; the
    ``n`` part encodes ``delta_q`` applied to that moment series.
    """
    if a < 4 or a % 2:
        raise GenfunError(f"combination needs even a >= 4, got {a}")
    if variant == "dyson":
        prefix, lam = "N", Fraction(2)
    elif variant == "m2":
        prefix, lam = "N2", Fraction(1, 2)
    else:
        raise GenfunError(f"unknown rank variant {variant!r}")
    terms: dict[str, list[Fraction]] = {f"{prefix}_{a}": [Fraction(a * a - 3 * a + 2), Fraction(0)]}
    for i in range(1, a // 2):
        name = f"{prefix}_{a - 2 * i}"
        slot = terms.setdefault(name, [Fraction(0), Fraction(0)])
        slot[1] += lam * comb(a, 2 * i) * (3 ** (2 * i) - 2 ** (2 * i) - 1)
        slot[0] += (
            comb(a, 2 * i) * (2 ** (2 * i) + 1)
            + 2 * comb(a, 2 * i + 1) * (1 - 2 ** (2 * i + 1))
            + Fraction(1, 2) * comb(a, 2 * i + 2) * (3 ** (2 * i + 2) - 2 ** (2 * i + 2) - 1)
        )
    return {name: tuple(c) for name, c in terms.items()}


def evaluate_terms(terms: dict[str, tuple], order: int) -> QSeries:
    """``sum_name sum_i c_i * delta_q^i(series(name))``."""
    total = QSeries([], order)
    for name, poly in terms.items():
        base = named_series(name, order)
        d = base
        for c in poly:
            if c:
                total = total + d * c
            d = S.delta_q(d)
    return total


def rank_combination(variant: str, k: int, order: int) -> QSeries:
    if k < 2:
        raise GenfunError("the rank combination is defined for k >= 2")
    return evaluate_terms(rank_combination_terms(variant, 2 * k), order)


# --------------------------------------------------------------------------
# the two partial differential equations


def _pde_sides(variant: str, order: int, R: ZQSeries) -> tuple[ZQSeries, ZQSeries]:
    L = LaurentEngine()
    theta_like = L.one(order)  # (-zq;q)_inf (-q/z;q)_inf
    for s in range(1, order):
        theta_like = theta_like.mul_factor(1, 1, s).mul_factor(1, -1, s)
    dR = S.delta_z(R)
    ddR = S.delta_z(dR)
    cubic = {0: 1, 1: -1, 2: -1, 3: 1}  # (1+z)(1-z)^2
    if variant == "dyson":
        C = crank_gf("partition", order)
        pref = S.eta_product([(1, 3), (2, -1)], 0, order)  # (q)^2 / (-q)
        lhs = (C * C * C * theta_like * pref).mul_laurent({1: 1, 2: 1})
        rhs = (
            S.delta_q(R).mul_laurent({e: 2 * c for e, c in cubic.items()})
            + R.mul_laurent({1: 1, 2: 1})
            + dR.mul_laurent({1: 2, 2: -2})
            + ddR.mul_laurent({e: Fraction(c, 2) for e, c in cubic.items()})
        )
    elif variant == "m2":
        C2 = S.substitute_q_power(crank_gf("partition", order), 2)
        pref = S.eta_product([(2, 2)], 0, order)
        lhs = (C2 * C2 * C2 * theta_like * pref).mul_laurent({1: 2, 2: 2})
        rhs = (
            S.delta_q(R).mul_laurent(cubic)
            + R.mul_laurent({1: 2, 2: 2})
            + dR.mul_laurent({1: 4, 2: -4})
            + ddR.mul_laurent(cubic)
        )
    else:
        raise GenfunError(f"unknown rank variant {variant!r}")
    return lhs, rhs


def verify_pde(variant: str, n_max: int = 30, perturb: tuple[int, int] | None = None) -> Report:
    """Check the partial differential equation linking the rank and crank functions.

    ``perturb=(n, m)`` adds one to the coefficient of ``z^m q^n`` of the rank
    function before the check (a negative control).
    """
    report = Report("pde", {"variant": variant, "n_max": n_max, "perturb": list(perturb) if perturb else None})
    with timed(report):
        order = n_max + 1
        R = rank_gf(variant, order)
        if perturb is not None:
            pn, pm = perturb
            bumped = [R.coeff(n) for n in range(order)]
            bumped[pn] = S.laurent_add(bumped[pn], {pm: 1})
            R = ZQSeries(bumped, order)
        lhs, rhs = _pde_sides(variant, order, R)
        for n in range(order):
            diff = S.laurent_add(lhs.coeff(n), rhs.coeff(n), -1)
            report.checks += 1
            if diff:
                e = min(diff)
                report.fail(f"q^{n} z^{e}", rhs.coeff(n).get(e, 0), lhs.coeff(n).get(e, 0))
    return report
