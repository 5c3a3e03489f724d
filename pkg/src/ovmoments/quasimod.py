"""Quasimodular forms on Gamma_0(2) and exact relations among moment series.

Quasimodular forms of weight at most ``2k`` on Gamma_0(2) are polynomials
in ``E2`` with coefficients in the free algebra generated by
``V2 = 2 E2(q^2) - E2(q)`` (weight 2) and ``E4`` (weight 4).  The space
``W_k`` used throughout is spanned by ``f - f(0)`` over the nonconstant
monomials ``E2^a V2^b E4^c`` with ``a + b + 2c <= k``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import product
from typing import Iterable, Mapping, Sequence

from . import genfun, linalg
from . import series as S
from .genfun import KIND_OF_PREFIX, PREFIX, QSeries
from .reports import Report, exact_str, timed
from .series import normalize, rational_from_str, rational_to_str

EXPECTED_DIMENSIONS = {1: 2, 2: 6, 3: 12, 4: 21, 5: 33, 6: 49}
DEFAULT_MARGIN = 20
STURM_BOUND_GAMMA0_144_WEIGHT8 = 193  # coefficient count quoted for the mod-3 congruence; not re-derived


def default_n_work(dim: int) -> int:
    return max(3 * dim, 2 * dim + 10)


class QuasiModError(ValueError):
    pass


class DimensionMismatch(QuasiModError):
    pass


class DependentCollection(QuasiModError):
    def __init__(self, message: str, witness: Mapping[str, Fraction]):
        super().__init__(message)
        self.witness = dict(witness)


class BasisTooSmall(QuasiModError):
    pass


# --------------------------------------------------------------------------
# Eisenstein series and monomials


@lru_cache(maxsize=16)
def eisenstein_E2(order: int) -> QSeries:
    return QSeries([1] + [-24 * genfun.divisor_sigma(n) for n in range(1, order)], order)


@lru_cache(maxsize=16)
def eisenstein_E4(order: int) -> QSeries:
    return QSeries([1] + [240 * genfun.divisor_sigma(n, 3) for n in range(1, order)], order)


@lru_cache(maxsize=16)
def weight2_gamma0_2(order: int) -> QSeries:
    """``V2 = 2 E2(q^2) - E2(q)``, the weight-2 modular form on Gamma_0(2)."""
    E2 = eisenstein_E2(order)
    return S.substitute_q_power(E2, 2) * 2 - E2


@dataclass(frozen=True, order=True)
class QuasiMonomial:
    a: int  # power of E2
    b: int  # power of V2
    c: int  # power of E4

    def __post_init__(self):
        if min(self.a, self.b, self.c) < 0:
            raise QuasiModError("monomial exponents must be nonnegative")

    @property
    def weight(self) -> int:
        return 2 * (self.a + self.b + 2 * self.c)

    @property
    def label(self) -> str:
        parts = [f"{g}^{e}" if e > 1 else g for g, e in (("E2", self.a), ("V2", self.b), ("E4", self.c)) if e]
        return "*".join(parts) or "1"

    def expansion(self, order: int) -> QSeries:
        out = QSeries.one(order)
        for base, e in ((eisenstein_E2(order), self.a), (weight2_gamma0_2(order), self.b), (eisenstein_E4(order), self.c)):
            if e:
                out = out * base**e
        return out


def monomials(k: int) -> list[QuasiMonomial]:
    """Nonconstant monomials of weight at most ``2k``."""
    out = []
    for c in range(k // 2 + 1):
        for a in range(k - 2 * c + 1):
            for b in range(k - 2 * c - a + 1):
                if a or b or c:
                    out.append(QuasiMonomial(a, b, c))
    return sorted(out, key=lambda m: (m.weight, m))


@dataclass
class QuasiBasis:
    k: int
    n_work: int
    margin: int
    labels: list[str]
    expansions: list[QSeries]

    @property
    def order(self) -> int:
        return self.n_work + self.margin

    def __len__(self) -> int:
        return len(self.labels)

    def rank(self) -> int:
        return linalg.rank([list(e.array[: self.n_work]) for e in self.expansions])


def build_basis(
    k: int,
    n_work: int | None = None,
    margin: int = DEFAULT_MARGIN,
    extras: Mapping[str, QSeries] | None = None,
) -> QuasiBasis:
    """Constant-free expansions of the monomials spanning ``W_k``.

    The rank is checked against the known dimension; a mismatch signals a
    construction bug and raises :class:`DimensionMismatch`.
    """
    if k not in EXPECTED_DIMENSIONS:
        raise QuasiModError(f"k must be in 1..6, got {k}")
    dim = EXPECTED_DIMENSIONS[k]
    if n_work is None:
        n_work = default_n_work(dim)
    if n_work < 2 * dim + 10:
        raise QuasiModError(f"n_work={n_work} too small for dimension {dim}")
    order = n_work + margin
    labels, rows = [], []
    for mono in monomials(k):
        e = mono.expansion(order)
        labels.append(mono.label)
        rows.append(e - e[0])
    for name, f in (extras or {}).items():
        labels.append(name)
        rows.append(f.truncate(order))
    basis = QuasiBasis(k, n_work, margin, labels, rows)
    r = basis.rank()
    expected = dim + len(extras or {})
    if r != expected:
        raise DimensionMismatch(f"basis for k={k} has rank {r}, expected {expected}")
    return basis


# --------------------------------------------------------------------------
# relations


def _poly_trim(p: Sequence) -> tuple:
    p = list(p)
    while p and p[-1] == 0:
        p.pop()
    return tuple(normalize(x) for x in p)


def _poly_add(p: Sequence, q: Sequence, sign: int = 1) -> tuple:
    n = max(len(p), len(q))
    return _poly_trim([(p[i] if i < len(p) else 0) + sign * (q[i] if i < len(q) else 0) for i in range(n)])


def _poly_mul(p: Sequence, q: Sequence) -> tuple:
    if not p or not q:
        return ()
    out = [0] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        for j, b in enumerate(q):
            out[i + j] += a * b
    return _poly_trim(out)


def _poly_eval(p: Sequence, n: int):
    v = 0
    for c in reversed(p):
        v = v * n + c
    return v


def poly_str(p: Sequence) -> str:
    terms = []
    for i, c in enumerate(p):
        if c == 0:
            continue
        mono = "" if i == 0 else ("n" if i == 1 else f"n^{i}")
        coef = exact_str(Fraction(c))
        if mono and coef in ("1", "-1"):
            coef = coef[:-1]
        terms.append(f"{coef}{'*' if mono and coef not in ('', '-') else ''}{mono}")
    return " + ".join(terms).replace("+ -", "- ") or "0"


def _name_key(name: str):
    prefix, _, k = name.rpartition("_")
    order = {"N": 0, "N2": 1, "aF": 2, "M": 3, "M2": 4}
    if prefix in order and k.isdigit():
        return (order[prefix], int(k), name)
    return (order.get(name, 5), 0, name)


@dataclass(frozen=True)
class LinearRelation:
    """``sum_name poly_name(n) * coeff_name(n) == 0`` for every ``n``.

    ``poly_name`` is a tuple of rationals ``(c0, c1, ...)`` standing for
    ``c0 + c1 n + ...``; a power of ``n`` on a series coefficient is the
    same as that power of ``delta_q`` on the series.
    """

    terms: Mapping[str, tuple]

    def __post_init__(self):
        object.__setattr__(self, "terms", {k: _poly_trim(v) for k, v in self.terms.items() if _poly_trim(v)})

    def scaled(self, c) -> "LinearRelation":
        return LinearRelation({k: _poly_mul(v, (c,)) for k, v in self.terms.items()})

    def normalized(self, target: str) -> "LinearRelation":
        p = self.terms.get(target)
        if not p or len(p) != 1:
            raise QuasiModError(f"{target} does not occur with a constant coefficient")
        return self.scaled(Fraction(1) / Fraction(p[0]))

    def solved_for(self, target: str) -> dict[str, tuple]:
        """Right-hand side of ``target = ...`` (the relation must be normalised)."""
        rel = self.normalized(target)
        return {k: _poly_mul(v, (-1,)) for k, v in rel.terms.items() if k != target}

    def substitute(self, target: str, rhs: Mapping[str, tuple]) -> "LinearRelation":
        """Replace ``target`` using ``target = sum rhs``."""
        p = self.terms.get(target)
        if not p:
            return self
        out = {k: v for k, v in self.terms.items() if k != target}
        for name, q in rhs.items():
            out[name] = _poly_add(out.get(name, ()), _poly_mul(p, q))
        return LinearRelation(out)

    def __add__(self, other: "LinearRelation") -> "LinearRelation":
        out = dict(self.terms)
        for k, v in other.terms.items():
            out[k] = _poly_add(out.get(k, ()), v)
        return LinearRelation(out)

    def names(self) -> list[str]:
        return sorted(self.terms, key=_name_key)

    def evaluate(self, n: int, values: Mapping[str, QSeries]):
        return normalize(sum(_poly_eval(p, n) * values[k][n] for k, p in self.terms.items()))

    def verify(self, n_max: int, values: Mapping[str, QSeries] | None = None, label: str = "relation") -> Report:
        """Check the relation coefficientwise for ``0 <= n <= n_max``."""
        report = Report(label, {"n_max": n_max})
        with timed(report):
            if values is None:
                values = {k: genfun.named_series(k, n_max + 1) for k in self.terms}
            for n in range(n_max + 1):
                report.check(f"n={n}", 0, self.evaluate(n, values))
        return report

    def format(self, target: str | None = None) -> str:
        if target is None:
            return " + ".join(f"({poly_str(self.terms[k])})*{k}" for k in self.names()) + " = 0"
        rhs = self.solved_for(target)
        return f"{target} = " + " + ".join(f"({poly_str(rhs[k])})*{k}" for k in sorted(rhs, key=_name_key))

    def to_dict(self) -> dict:
        return {k: [rational_to_str(c) for c in self.terms[k]] for k in self.names()}

    @classmethod
    def from_dict(cls, d: Mapping[str, Sequence[str]]) -> "LinearRelation":
        return cls({k: tuple(rational_from_str(c) for c in v) for k, v in d.items()})

    @classmethod
    def from_solved(cls, target: str, rhs: Mapping[str, Sequence]) -> "LinearRelation":
        terms = {target: (1,)}
        for k, v in rhs.items():
            terms[k] = _poly_add(terms.get(k, ()), _poly_mul(v, (-1,)))
        return cls(terms)


@dataclass
class RelationReport:
    target: str
    coordinates: dict[str, Fraction]
    checked_to: int
    status: str  # "exact-member" or "not-member"
    first_failure: int | None = None
    relation: LinearRelation | None = None
    solved_for: str | None = None
    notes: list[str] = field(default_factory=list)

    @property
    def is_member(self) -> bool:
        return self.status == "exact-member"

    def to_dict(self) -> dict:
        return {
            "target": self.target,
            "coordinates": {k: rational_to_str(v) for k, v in self.coordinates.items()},
            "checked_to": self.checked_to,
            "status": self.status,
            "first_failure": self.first_failure,
            "relation": self.relation.to_dict() if self.relation else None,
            "solved_for": self.solved_for,
            "notes": list(self.notes),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)

    @classmethod
    def from_dict(cls, d: Mapping) -> "RelationReport":
        return cls(
            target=d["target"],
            coordinates={k: rational_from_str(v) for k, v in d["coordinates"].items()},
            checked_to=d["checked_to"],
            status=d["status"],
            first_failure=d.get("first_failure"),
            relation=LinearRelation.from_dict(d["relation"]) if d.get("relation") else None,
            solved_for=d.get("solved_for"),
            notes=list(d.get("notes", [])),
        )

    @classmethod
    def from_json(cls, s: str) -> "RelationReport":
        return cls.from_dict(json.loads(s))


def _express(
    target: QSeries,
    labels: Sequence[str],
    columns: Sequence[QSeries],
    n_work: int,
    margin: int,
    description: str,
) -> RelationReport:
    order = n_work + margin
    if target.order < order or any(c.order < order for c in columns):
        raise S.TruncationError(f"need expansions to order {order} for n_work={n_work}, margin={margin}")
    cols = [list(c.array[:n_work]) for c in columns]
    try:
        x = linalg.solve(cols, list(target.array[:n_work]))
    except linalg.InconsistentSystem as exc:
        return RelationReport(description, {}, n_work, "not-member", exc.equation)
    coords = dict(zip(labels, x))
    for n in range(n_work, order):
        if sum(c * col[n] for c, col in zip(x, columns)) != target[n]:
            return RelationReport(description, coords, order, "not-member", n)
    return RelationReport(description, coords, order, "exact-member")


def membership(candidate: QSeries, basis: QuasiBasis, description: str = "candidate") -> RelationReport:
    """Is ``candidate`` in the span of ``basis``?  Solved on ``n_work`` coefficients, re-checked on the margin."""
    try:
        return _express(candidate, basis.labels, basis.expansions, basis.n_work, basis.margin, description)
    except linalg.SingularSystem as exc:
        raise QuasiModError(f"basis for k={basis.k} is not independent: {exc.witness}") from exc


def crank_function_labels(k: int) -> list[tuple[str, str, int]]:
    """``(label, moment name, m)`` for ``delta_q^m`` of the crank moments of order ``2j``, ``j + m <= k``."""
    out = []
    for prefix in ("M", "M2"):
        for j in range(1, k + 1):
            for m in range(k - j + 1):
                name = f"{prefix}_{2 * j}"
                label = name if m == 0 else f"delta_q^{m}({name})"
                out.append((label, name, m))
    return out


def _iterate_delta(f: QSeries, m: int) -> QSeries:
    for _ in range(m):
        f = S.delta_q(f)
    return f


@lru_cache(maxsize=32)
def _solve_relation_cached(variant, k, substitutions, extras, eliminate, normalize_, n_work, margin):
    return _solve_relation(variant, k, dict(substitutions), list(extras), eliminate, normalize_, n_work, margin)


def solve_relation(
    variant: str,
    k: int,
    substitutions: Mapping[str, str] | None = None,
    extras: Sequence[str] | None = None,
    eliminate: bool = True,
    normalize: bool = True,
    n_work: int | None = None,
    margin: int = DEFAULT_MARGIN,
) -> RelationReport:
    """Express the rank-moment combination of weight ``2k`` through crank moments.

    The spanning set is ``delta_q^m`` of the crank moments ``C_2j``, ``C2_2j``
    (``j + m <= k``).  ``substitutions`` replaces members of that set by
    other named series (e.g. ``{"delta_q^1(M_4)": "M_2*M_4/P"}``) and
    ``extras`` appends further series (``"aF"`` is added by default for
    ``k = 4``).  With ``eliminate`` the lower rank moments are removed using
    the relations of smaller weight.
    """
    if extras is None:
        extras = ["aF"] if k == 4 else []
    subs = tuple(sorted((substitutions or {}).items()))
    return _solve_relation_cached(variant, k, subs, tuple(extras), eliminate, normalize, n_work, margin)


def _solve_relation(variant, k, substitutions, extras, eliminate, normalize_, n_work, margin) -> RelationReport:
    if variant not in genfun.RANK_VARIANTS:
        raise QuasiModError(f"unknown rank variant {variant!r}")
    if k < 2:
        raise QuasiModError("relations start at k = 2")
    dim = EXPECTED_DIMENSIONS.get(k)
    spanning = crank_function_labels(k)
    count = len(spanning) + len(extras)
    if dim is None or count < dim:
        raise BasisTooSmall(
            f"for k={k} only {count} functions are available but the space has dimension "
            f"{dim if dim is not None else 'unknown'}; the number of functions is smaller than the dimension"
        )
    known = {label for label, _, _ in spanning}
    unknown = set(substitutions) - known
    if unknown:
        raise QuasiModError(f"substitution targets not in the spanning set: {sorted(unknown)}")
    if n_work is None:
        n_work = default_n_work(dim)
    order = n_work + margin

    labels, names, columns = [], [], []
    for label, name, m in spanning:
        if label in substitutions:
            sub = substitutions[label]
            labels.append(sub)
            names.append((sub, 0))
            columns.append(genfun.named_series(sub, order))
        else:
            labels.append(label)
            names.append((name, m))
            columns.append(_iterate_delta(genfun.named_series(name, order), m))
    for extra in extras:
        labels.append(extra)
        names.append((extra, 0))
        columns.append(genfun.named_series(extra, order))

    witness = linalg.dependency([list(c.array[:n_work]) for c in columns])
    if witness is not None:
        dep = {lab: c for lab, c in zip(labels, witness) if c}
        raise DependentCollection(f"spanning functions are linearly dependent: {dep}", dep)

    a = 2 * k
    terms = genfun.rank_combination_terms(variant, a)
    target = genfun.evaluate_terms(terms, order)
    report = _express(target, labels, columns, n_work, margin, f"{variant} combination, weight {a}")
    if not report.is_member:
        return report

    rel = dict(terms)
    for (name, m), label in zip(names, labels):
        poly = [0] * m + [-report.coordinates[label]]
        rel[name] = _poly_add(rel.get(name, ()), poly)
    relation = LinearRelation(rel)
    prefix = "N" if variant == "dyson" else "N2"
    lead = f"{prefix}_{a}"
    if normalize_:
        relation = relation.normalized(lead)
    if eliminate:
        for lower in range(a - 2, 3, -2):
            name = f"{prefix}_{lower}"
            if name in relation.terms:
                sub = solve_relation(variant, lower // 2, eliminate=True)
                relation = relation.substitute(name, sub.relation.solved_for(name))
    report.relation = relation
    report.solved_for = lead
    return report


# --------------------------------------------------------------------------
# congruences


class CongruenceError(QuasiModError):
    pass


def _reduce_exponent(k: int, p: int) -> int:
    while k >= p:
        k -= p - 1
    return k


@dataclass(frozen=True)
class Congruence:
    """``sum_name poly_name(n) * coeff_name(n) == 0 (mod p)``, coefficients in ``0..p-1``."""

    p: int
    terms: Mapping[str, tuple]

    def __post_init__(self):
        clean = {}
        for name, poly in self.terms.items():
            poly = [int(c) % self.p for c in poly]
            reduced = [0] * max(len(poly), 1)
            for i, c in enumerate(poly):
                j = _reduce_exponent(i, self.p) if i else 0
                reduced[j] = (reduced[j] + c) % self.p
            t = _poly_trim(reduced)
            if t:
                clean[name] = t
        object.__setattr__(self, "terms", clean)

    def scaled(self, u: int) -> "Congruence":
        return Congruence(self.p, {k: tuple(c * u for c in v) for k, v in self.terms.items()})

    def at_residue(self, r: int) -> dict[str, int]:
        """Coefficients with ``n`` fixed to the residue ``r`` mod ``p``."""
        return {k: _poly_eval(v, r) % self.p for k, v in self.terms.items() if _poly_eval(v, r) % self.p}

    def equivalent(self, other: "Congruence") -> bool:
        """Same statement for every residue of ``n`` mod ``p``, up to a unit per residue."""
        return self.in_span([other]) and other.in_span([self])

    def in_span(self, others: Sequence["Congruence"]) -> bool:
        """Does this congruence follow from ``others`` residue class by residue class?"""
        p = self.p
        if any(o.p != p for o in others):
            return False
        for r in range(p):
            want = self.at_residue(r)
            have = [o.at_residue(r) for o in others]
            names = sorted(set(want).union(*have))
            found = False
            for coeffs in product(range(p), repeat=len(have)):
                if all((sum(c * h.get(x, 0) for c, h in zip(coeffs, have)) - want.get(x, 0)) % p == 0 for x in names):
                    found = True
                    break
            if not found:
                return False
        return True

    def holds_at(self, n: int, values: Mapping[str, QSeries]) -> bool:
        return sum(_poly_eval(p, n) * values[k][n] for k, p in self.terms.items()) % self.p == 0

    def verify(self, n_max: int, values: Mapping[str, QSeries] | None = None, label: str = "congruence") -> Report:
        report = Report(label, {"p": self.p, "n_max": n_max})
        with timed(report):
            if values is None:
                values = {k: genfun.named_series(k, n_max + 1) for k in self.terms}
            for n in range(n_max + 1):
                lhs = sum(_poly_eval(p, n) * values[k][n] for k, p in self.terms.items())
                report.check(f"n={n}", 0, lhs % self.p)
        return report

    def format(self) -> str:
        body = " + ".join(f"({poly_str(self.terms[k])})*{k}" for k in sorted(self.terms, key=_name_key))
        return f"{body or '0'} == 0 (mod {self.p})"

    @classmethod
    def from_sides(cls, p: int, lhs: Mapping[str, Sequence[int]], rhs: Mapping[str, Sequence[int]]) -> "Congruence":
        """``lhs == rhs (mod p)`` moved to the form ``lhs - rhs == 0``."""
        terms = {k: tuple(v) for k, v in lhs.items()}
        for k, v in rhs.items():
            terms[k] = _poly_add(terms.get(k, ()), v, -1)
        return cls(p, terms)


def congruence_reduce(relation: LinearRelation | RelationReport, p: int, multiplier: int = 1) -> Congruence:
    """Multiply by ``multiplier``, then reduce every coefficient modulo ``p``.

    Denominators prime to ``p`` are inverted mod ``p``; a denominator still
    divisible by ``p`` after scaling raises :class:`CongruenceError`.
    Moment exponents ``k >= p`` are lowered by ``p - 1`` (Fermat), as are
    powers of ``n``.
    """
    if isinstance(relation, RelationReport):
        if relation.relation is None:
            raise CongruenceError("relation report carries no relation")
        relation = relation.relation
    terms: dict[str, tuple] = {}
    for name, poly in relation.terms.items():
        red = []
        for c in poly:
            c = Fraction(c) * multiplier
            if c.denominator % p == 0:
                raise CongruenceError(f"coefficient {exact_str(c)} of {name} has a denominator divisible by {p}")
            red.append(c.numerator * pow(c.denominator, -1, p) % p)
        prefix, _, k = name.rpartition("_")
        if prefix in KIND_OF_PREFIX and k.isdigit():
            name = f"{prefix}_{_reduce_exponent(int(k), p)}"
        terms[name] = _poly_add(terms.get(name, ()), red)
    return Congruence(p, terms)
