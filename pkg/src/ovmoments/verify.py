"""Verification suites: each runs a family of identities or congruences on
exact coefficients and returns a :class:`~ovmoments.reports.Report`.

Every suite accepts an optional :class:`Perturbation`, which changes a single
input value before checking.  A correct suite must then fail and name the
offending location; the acceptance tests rely on this as a negative control.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

import numpy as np

from . import classnum, genfun, published
from . import quasimod as Q
from . import series as S
from .reports import Report, timed
from .series import QSeries


@dataclass(frozen=True)
class Perturbation:
    """Add ``delta`` to one input.

    ``target`` is a series name (``"M_2"``, ``"spt1"``, ``"alpha"``, ``"r"``...)
    with ``index`` the power of q; ``"table:<name>"`` for a stored relation
    coefficient with ``index`` the power of n; ``"rank"`` for the two-variable
    rank function with ``zexp`` the power of z; or ``"dimension"`` with
    ``index`` = k to shift an expected dimension.
    """

    target: str
    index: int
    delta: int = 1
    zexp: int = 0

    @classmethod
    def parse(cls, text: str) -> "Perturbation":
        """``target:index[:delta[:zexp]]``."""
        parts = text.split(":")
        if parts[0] == "table":
            parts = [f"table:{parts[1]}"] + parts[2:]
        if len(parts) < 2:
            raise ValueError(f"perturbation must look like target:index[:delta[:zexp]], got {text!r}")
        nums = [int(x) for x in parts[1:]]
        return cls(parts[0], *nums)

    def __str__(self) -> str:
        return f"{self.target}:{self.index}:{self.delta}:{self.zexp}"


def _bump(f: QSeries, p: Perturbation | None, name: str) -> QSeries:
    if p is None or p.target != name or p.index >= f.order:
        return f
    arr = np.array(f.array, dtype=object)
    arr[p.index] = arr[p.index] + p.delta
    return QSeries._wrap(arr)


def _series(name: str, order: int, p: Perturbation | None = None) -> QSeries:
    return _bump(genfun.named_series(name, order), p, name)


def _values(names, order: int, p: Perturbation | None) -> dict[str, QSeries]:
    return {name: _series(name, order, p) for name in names}


def _bump_table(rhs: dict, p: Perturbation | None) -> dict:
    if p is None or not p.target.startswith("table:"):
        return rhs
    name = p.target[len("table:") :]
    if name not in rhs:
        return rhs
    poly = list(rhs[name]) + [0] * max(0, p.index + 1 - len(rhs[name]))
    poly[p.index] += p.delta
    return {**rhs, name: tuple(poly)}


def _params(p: Perturbation | None, **kw) -> dict:
    if p is not None:
        kw["perturb"] = str(p)
    return kw


# --------------------------------------------------------------------------
# stored relations: coefficient reconstruction plus coefficientwise sweeps


def relation_part(variant: str, k: int, n_max: int, p: Perturbation | None) -> Report:
    target, rhs = published.RELATIONS[(variant, k)]
    rhs = _bump_table(rhs, p)
    rep = Report(f"{variant} k={k}", _params(p, variant=variant, k=k, n_max=n_max))
    with timed(rep):
        derived = Q.solve_relation(variant, k).relation.solved_for(target)
        for name in sorted(set(derived) | set(rhs), key=Q._name_key):
            a, b = Q._poly_trim(derived.get(name, ())), Q._poly_trim(rhs.get(name, ()))
            for i in range(max(len(a), len(b))):
                rep.check(
                    f"coefficient of n^{i}*{name}",
                    Fraction(b[i]) if i < len(b) else 0,
                    Fraction(a[i]) if i < len(a) else 0,
                )
        relation = Q.LinearRelation.from_solved(target, rhs)
        values = _values(relation.terms, n_max + 1, p)
        rep.merge(relation.verify(n_max, values, "sweep"), "sweep ")
    return rep


def _relation_parts(group: str, n_max: int, p):
    return [(relation_part, (v, k, n_max, p)) for v, k in published.SUITE_RELATIONS[group]]


# --------------------------------------------------------------------------
# quasimodular membership


def membership_part(k: int, p: Perturbation | None) -> Report:
    rep = Report(f"k={k}", _params(p, k=k))
    with timed(rep):
        basis = Q.build_basis(k)
        order = basis.order
        inv_P = S.qs_invert(genfun.overpartition_gf(order))
        candidates: list[tuple[str, QSeries]] = []
        for label, name, m in Q.crank_function_labels(k):
            f = _series(name, order, p)
            for _ in range(m):
                f = S.delta_q(f)
            candidates.append((label, f))
        if k >= 2:
            for variant in genfun.RANK_VARIANTS:
                total = QSeries([], order)
                for name, poly in genfun.rank_combination_terms(variant, 2 * k).items():
                    d = _series(name, order, p)
                    for c in poly:
                        if c:
                            total = total + d * c
                        d = S.delta_q(d)
                candidates.append((f"{variant} combination a={2 * k}", total))
        else:
            rep.notes.append("k=1: the rank combinations vanish identically (a=2)")
        for label, f in candidates:
            res = Q.membership(f * inv_P, basis, label)
            rep.checks += 1
            if not res.is_member:
                rep.fail(f"{label} / P at q^{res.first_failure}", "exact-member", res.status)
    return rep


# --------------------------------------------------------------------------
# congruences


def _congruence_sweep(rep: Report, label: str, cong: Q.Congruence, n_max: int, p) -> None:
    values = _values(cong.terms, n_max + 1, p)
    rep.merge(cong.verify(n_max, values, label), f"{label} ")


def _derivation(rep: Report, key: str) -> None:
    entry = published.INTERMEDIATE[key]
    gens = [published.INTERMEDIATE[u]["statement"] for u in entry["uses"]]
    if entry["source"] is not None:
        variant, k, subs, eliminate, normalize, prime, mult = entry["source"]
        rel = Q.solve_relation(variant, k, substitutions=subs or None, eliminate=eliminate, normalize=normalize)
        gens.insert(0, Q.congruence_reduce(rel, prime, mult))
    rep.check(f"{key} derivation", True, entry["statement"].in_span(gens))


def intermediate_part(keys: tuple[str, ...], n_max: int, p) -> Report:
    rep = Report("intermediate", _params(p, n_max=n_max))
    with timed(rep):
        for key in keys:
            _derivation(rep, key)
            _congruence_sweep(rep, key, published.INTERMEDIATE[key]["statement"], n_max, p)
    return rep


NOV_OV_CONGRUENCES = {
    "nov-ov-mod5": Q.Congruence.from_sides(5, {"nov": (2, 1)}, {"ov": (3, 4, 1)}),
    "nov-ov-mod7": Q.Congruence.from_sides(7, {"nov": (1, 0, 1)}, {"ov": (-1, 0, -1, 4)}),
}


def nov_ov_part(n_max: int, p) -> Report:
    rep = Report("statements", _params(p, n_max=n_max))
    with timed(rep):
        for label, cong in NOV_OV_CONGRUENCES.items():
            _congruence_sweep(rep, label, cong, n_max, p)
    return rep


# (label, series, modulus, step, residue): series(step*m + residue) == 0 mod modulus
SPT_PROGRESSIONS = (
    ("spt2(3n)", "spt2", 3, 3, 0),
    ("spt2(3n+1)", "spt2", 3, 3, 1),
    ("spt(3n)", "spt", 3, 3, 0),
    ("spt2(5n+3)", "spt2", 5, 5, 3),
    ("spt1(5n)", "spt1", 5, 5, 0),
)


def spt_values(order: int, p: Perturbation | None) -> dict[str, QSeries]:
    spt1, spt2, spt = genfun.spt_series_direct(order)
    raw = {"spt1": spt1, "spt2": spt2, "spt": spt}
    return {k: _bump(v, p, k) for k, v in raw.items()}


def spt_part(n_max: int, p) -> Report:
    """Progression congruences for arguments ``0 <= n <= n_max``."""
    rep = Report("statements", _params(p, n_max=n_max))
    with timed(rep):
        vals = spt_values(n_max + 1, p)
        for label, name, mod, step, res in SPT_PROGRESSIONS:
            for n in range(res, n_max + 1, step):
                rep.check(f"{label} {name}({n})", 0, vals[name][n] % mod)
    return rep


NOV_OV_INTERMEDIATES = ("crank-mod5", "crank-mod7", "crank4-mod7", "crank-mod7-combined")
SPT_INTERMEDIATES = ("m2rank-mod3", "rank-mod3", "m2rank-mod5", "rank-mod5")


# --------------------------------------------------------------------------
# the rest


def pde_part(variant: str, n_max: int, p) -> Report:
    pert = (p.index, p.zexp) if p is not None and p.target == "rank" else None
    rep = genfun.verify_pde(variant, n_max, pert)
    rep.suite = variant
    return rep


def dictionary_part(which: str, n_max: int, p) -> Report:
    if which == "alpha":
        alpha = list(_series("alpha", n_max + 1, p).array)
        return classnum.verify_alpha_class_dictionary(n_max, alpha)
    r = list(_bump(QSeries([classnum.three_squares_r(n) for n in range(n_max + 1)]), p, "r").array)
    return classnum.verify_rofn(n_max, r)


def hecke_exact_part(ell: int, n_max: int, p) -> Report:
    alpha = list(_series("alpha", ell * ell * n_max + 1, p).array)
    return classnum.verify_hecke_exact(ell, n_max, alpha)


def _spt1(order: int, p) -> list[int]:
    return list(spt_values(order, p)["spt1"].array)


def hecke_mod3_part(ell: int, n_max: int, p) -> Report:
    return classnum.verify_hecke_mod3(ell, n_max, _spt1(ell * ell * n_max + 1, p))


def spt1_alpha_part(n_max: int, p) -> Report:
    alpha = list(_series("alpha", n_max + 1, p).array)
    return classnum.verify_spt1_alpha_mod3(n_max, _spt1(n_max + 1, p), alpha)


def dimensions_part(p) -> Report:
    rep = Report("ranks", _params(p))
    with timed(rep):
        for k, dim in enumerate(published.DIMENSIONS, start=1):
            if p is not None and p.target == "dimension" and p.index == k:
                dim += p.delta
            try:
                r = Q.build_basis(k).rank()
            except Q.DimensionMismatch as exc:
                r = str(exc)
            rep.check(f"k={k}", dim, r)
    return rep


# --------------------------------------------------------------------------
# registry


@dataclass(frozen=True)
class Suite:
    name: str
    kind: str  # "identity", "congruence", "pde", "structure"
    default_n_max: int | None
    parts: Callable[[int | None, Perturbation | None], list]
    description: str


SUITES: dict[str, Suite] = {
    s.name: s
    for s in (
        Suite("corollary1", "identity", 100, lambda n, p: _relation_parts("corollary1", n, p),
              "weight-4 rank moments through crank moments"),
        Suite("corollary2", "identity", 100, lambda n, p: _relation_parts("corollary2", n, p),
              "weight-6 rank moments through crank moments"),
        Suite("corollary3", "identity", 100, lambda n, p: _relation_parts("corollary3", n, p),
              "weight-8 Dyson rank moment through crank moments and the cusp form F"),
        Suite("theorem1", "structure", None, lambda n, p: [(membership_part, (k, p)) for k in (1, 2, 3, 4)],
              "quasimodular membership of crank moments and rank combinations, k <= 4"),
        Suite("theorem2", "congruence", 1000,
              lambda n, p: [(nov_ov_part, (n, p)), (intermediate_part, (NOV_OV_INTERMEDIATES, min(n, 500), p))],
              "nov/ov congruences mod 5 and 7 and the crank congruences behind them"),
        Suite("theorem3", "congruence", 1000,
              lambda n, p: [(spt_part, (n, p)), (intermediate_part, (SPT_INTERMEDIATES, min(n, 500), p))],
              "smallest-parts congruences mod 3 and 5 and the rank/crank congruences behind them"),
        Suite("theorem4", "congruence", 1000, lambda n, p: [(spt1_alpha_part, (n, p))],
              "spt1(n) == (n/3) alpha(n) mod 3"),
        Suite("pde", "pde", 30, lambda n, p: [(pde_part, (v, n, p)) for v in genfun.RANK_VARIANTS],
              "rank/crank partial differential equations"),
        Suite("dictionary", "identity", 500,
              lambda n, p: [(dictionary_part, ("alpha", n, p)), (dictionary_part, ("r", n, p))],
              "alpha(n) and r(n) through Hurwitz class numbers"),
        Suite("hecke-exact", "identity", 40, lambda n, p: [(hecke_exact_part, (ell, n, p)) for ell in (5, 7)],
              "Hecke-type relation for alpha, ell = 5, 7"),
        Suite("hecke-mod3", "congruence", 80, lambda n, p: [(hecke_mod3_part, (ell, n, p)) for ell in (5, 7)],
              "Hecke-type congruence for spt1 mod 3, ell = 5, 7"),
        Suite("dimensions", "structure", None, lambda n, p: [(dimensions_part, (p,))],
              "ranks of the quasimodular spanning sets, k = 1..6"),
    )
}


def _run_part(fn, args) -> Report:
    return fn(*args)


def run_suite(name: str, n_max: int | None = None, perturb: Perturbation | None = None, jobs: int = 1) -> Report:
    """Run a suite; parts are independent and may run in parallel processes."""
    if name not in SUITES:
        raise KeyError(f"unknown suite {name!r}; choose from {', '.join(SUITES)}")
    suite = SUITES[name]
    if n_max is None:
        n_max = suite.default_n_max
    parts = suite.parts(n_max, perturb)
    report = Report(name, _params(perturb, n_max=n_max) if n_max is not None else _params(perturb))
    with timed(report):
        if jobs > 1 and len(parts) > 1:
            with ProcessPoolExecutor(max_workers=min(jobs, len(parts))) as pool:
                results = list(pool.map(_run_part, *zip(*parts)))
        else:
            results = [fn(*args) for fn, args in parts]
        for sub in results:
            report.merge(sub, f"{sub.suite}: ")
    return report
