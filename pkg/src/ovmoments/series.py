"""Exact truncated power series in q, optionally with Laurent coefficients in z.

Coefficients are Python ``int`` or :class:`fractions.Fraction`; nothing here
ever touches floating point.  A series carries its truncation order ``N``,
meaning every coefficient of ``q**n`` with ``n < N`` is known and nothing is
known from ``q**N`` on.
"""

from __future__ import annotations

import json
import os
from fractions import Fraction
from numbers import Rational
from pathlib import Path
from typing import Callable, Iterable, Mapping, Sequence, Union

import numpy as np

Coefficient = Union[int, Fraction]
Laurent = Mapping[int, Coefficient]

_MAX_EXPONENT = 2**63 - 1
CACHE_VERSION = 1
CACHE_ENV = "OVMOMENTS_CACHE_DIR"


class TruncationError(IndexError):
    """Raised when a coefficient beyond the truncation order is requested."""


class SeriesError(ValueError):
    pass


def normalize(x: Coefficient) -> Coefficient:
    """Return ``x`` as an ``int`` whenever it is integral."""
    if isinstance(x, Fraction):
        return x.numerator if x.denominator == 1 else x
    if isinstance(x, (bool, np.bool_)):
        return int(x)
    if isinstance(x, (int, np.integer)):
        return int(x)
    if isinstance(x, Rational):
        return normalize(Fraction(x.numerator, x.denominator))
    raise TypeError(f"inexact coefficient {x!r} ({type(x).__name__})")


def exact_div(a: Coefficient, b: Coefficient) -> Coefficient:
    if b == 0:
        raise ZeroDivisionError("division by zero coefficient")
    if isinstance(a, int) and isinstance(b, int):
        q, r = divmod(a, b)
        return q if r == 0 else Fraction(a, b)
    return normalize(Fraction(a) / Fraction(b))


def _check_order(order: int) -> int:
    order = int(order)
    if order < 0:
        raise SeriesError(f"truncation order must be nonnegative, got {order}")
    if order > _MAX_EXPONENT:
        raise OverflowError("truncation order exceeds 64-bit exponent range")
    return order


def _object_array(values: Iterable[Coefficient], order: int) -> np.ndarray:
    out = np.zeros(order, dtype=object)
    for i, v in enumerate(values):
        if i >= order:
            break
        out[i] = normalize(v)
    return out


class QSeries:
    """Truncated power series ``sum_{n<N} c_n q**n`` with exact coefficients.

    >>> (QSeries([1, 1], 5) * QSeries([1, -1], 5)).coefficients()
    [1, 0, -1, 0, 0]
    """

    __slots__ = ("_c",)

    def __init__(self, coeffs: Iterable[Coefficient] = (), order: int | None = None):
        if isinstance(coeffs, np.ndarray) and coeffs.dtype == object and order is None:
            arr = coeffs.copy()
        else:
            coeffs = list(coeffs)
            n = len(coeffs) if order is None else _check_order(order)
            arr = _object_array(coeffs, n)
        if order is not None and len(arr) != order:
            arr = _object_array(arr, _check_order(order))
        arr.flags.writeable = False
        self._c = arr

    @classmethod
    def _wrap(cls, arr: np.ndarray) -> "QSeries":
        s = cls.__new__(cls)
        arr.flags.writeable = False
        s._c = arr
        return s

    @classmethod
    def one(cls, order: int) -> "QSeries":
        return cls([1], order)

    @classmethod
    def from_function(cls, f: Callable[[int], Coefficient], order: int) -> "QSeries":
        return cls([f(n) for n in range(_check_order(order))], order)

    @property
    def order(self) -> int:
        return len(self._c)

    @property
    def array(self) -> np.ndarray:
        """Read-only view of the coefficient array."""
        return self._c

    def coefficients(self) -> list[Coefficient]:
        return [normalize(x) for x in self._c]

    def __getitem__(self, n: int) -> Coefficient:
        if not isinstance(n, (int, np.integer)):
            raise TypeError("QSeries indices must be integers")
        if n < 0:
            raise IndexError("negative exponent")
        if n >= len(self._c):
            raise TruncationError(f"coefficient of q^{n} requested but series is O(q^{len(self._c)})")
        return normalize(self._c[n])

    def __len__(self) -> int:
        return len(self._c)

    def __iter__(self):
        return (normalize(x) for x in self._c)

    def __repr__(self) -> str:
        head = ", ".join(str(x) for x in self._c[:8])
        more = ", ..." if len(self._c) > 8 else ""
        return f"QSeries([{head}{more}], order={self.order})"

    def truncate(self, order: int) -> "QSeries":
        order = _check_order(order)
        if order > self.order:
            raise TruncationError(f"cannot extend O(q^{self.order}) to O(q^{order})")
        return QSeries._wrap(self._c[:order].copy())

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, QSeries):
            return NotImplemented
        return self.order == other.order and all(a == b for a, b in zip(self._c, other._c))

    __hash__ = None  # type: ignore[assignment]

    def __neg__(self) -> "QSeries":
        return QSeries._wrap(-self._c)

    def __add__(self, other):
        if isinstance(other, QSeries):
            n = min(self.order, other.order)
            return QSeries._wrap(self._c[:n] + other._c[:n])
        if isinstance(other, (int, Fraction)):
            arr = self._c.copy()
            if len(arr):
                arr[0] = normalize(arr[0] + other)
            return QSeries._wrap(arr)
        return NotImplemented

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, (QSeries, int, Fraction)):
            return self + (-other)
        return NotImplemented

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, QSeries):
            return qs_mul(self, other)
        if isinstance(other, (int, Fraction)):
            return qs_scale(self, other)
        return NotImplemented

    __rmul__ = __mul__

    def __pow__(self, e: int) -> "QSeries":
        if e < 0:
            return qs_invert(self) ** (-e)
        result = QSeries.one(self.order)
        base = self
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result

    def shift(self, k: int) -> "QSeries":
        """Multiply by ``q**k`` (k >= 0); the order grows by ``k``."""
        if k < 0:
            raise SeriesError("negative shift")
        arr = np.zeros(self.order + k, dtype=object)
        arr[k:] = self._c
        return QSeries._wrap(arr)

    def valuation(self) -> int | None:
        for i, x in enumerate(self._c):
            if x != 0:
                return i
        return None


def qs_add(a: QSeries, b: QSeries) -> QSeries:
    return a + b


def qs_scale(a: QSeries, c: Coefficient) -> QSeries:
    c = normalize(c)
    return QSeries._wrap(np.array([normalize(x * c) for x in a.array], dtype=object).reshape(-1))


def qs_mul(a: QSeries, b: QSeries) -> QSeries:
    n = min(a.order, b.order)
    if n == 0:
        return QSeries([], 0)
    prod = np.convolve(a.array[:n], b.array[:n])[:n]
    return QSeries._wrap(np.asarray(prod, dtype=object))


def qs_invert(a: QSeries) -> QSeries:
    """Multiplicative inverse; the constant term must be nonzero."""
    n = a.order
    if n == 0:
        return QSeries([], 0)
    a0 = normalize(a.array[0])
    if a0 == 0:
        raise SeriesError("cannot invert a series with zero constant term")
    c = a.array
    out = np.zeros(n, dtype=object)
    out[0] = exact_div(1, a0)
    unit = a0 in (1, -1)
    for k in range(1, n):
        s = np.dot(c[1 : k + 1], out[k - 1 :: -1]) if k > 1 else c[1] * out[0]
        out[k] = -s * a0 if unit else exact_div(-s, a0)
    return QSeries._wrap(out)


def sparse_factor_mul(arr: np.ndarray, s: int, c: Coefficient) -> np.ndarray:
    """Multiply an object array by ``(1 + c q**s)`` in place-free form."""
    out = arr.copy()
    if s < len(arr):
        out[s:] = out[s:] + c * arr[:-s]
    return out


def sparse_factor_div(arr: np.ndarray, s: int, c: Coefficient) -> np.ndarray:
    """Divide an object array by ``(1 - c q**s)``, i.e. ``b[n] = a[n] + c*b[n-s]``."""
    out = arr.copy()
    n = len(out)
    for start in range(s, n, s):
        stop = min(start + s, n)
        out[start:stop] = out[start:stop] + c * out[start - s : stop - s]
    return out


def euler_product(m: int, order: int) -> QSeries:
    """``prod_{n>=1} (1 - q**(m n))`` truncated at ``order``."""
    arr = np.zeros(order, dtype=object)
    if order:
        arr[0] = 1
    step = m
    while step < order:
        arr = sparse_factor_mul(arr, step, -1)
        step += m
    return QSeries._wrap(arr)


def eta_product(spec: Sequence[tuple[int, int]], shift: int, order: int) -> QSeries:
    """``q**shift * prod_m (q^m; q^m)_inf ** e_m`` truncated at ``order``.

    Negative exponents are realised by inverting the product of the
    corresponding positive powers.
    """
    if shift < 0:
        raise SeriesError("negative q-shift is not representable in a power series")
    inner = max(order - shift, 0)
    num = QSeries.one(inner)
    den = QSeries.one(inner)
    for m, e in spec:
        if m < 1:
            raise SeriesError(f"scale must be positive, got {m}")
        if e == 0:
            continue
        f = euler_product(m, inner) ** abs(e)
        if e > 0:
            num = num * f
        else:
            den = den * f
    body = num * qs_invert(den) if any(e < 0 for _, e in spec) else num
    return body.shift(shift).truncate(order) if shift else body


def substitute_q_power(a, m: int):
    """Replace ``q`` by ``q**m``; the truncation order is unchanged."""
    if m < 1:
        raise SeriesError(f"substitution power must be positive, got {m}")
    if isinstance(a, ZQSeries):
        coeffs = [dict() for _ in range(a.order)]
        for n in range(0, a.order, m):
            coeffs[n] = dict(a.coeff(n // m))
        return ZQSeries(coeffs, a.order)
    arr = np.zeros(a.order, dtype=object)
    arr[::m] = a.array[: len(arr[::m])]
    return QSeries._wrap(arr)


def delta_q(a):
    """The operator ``q d/dq``: the coefficient of ``q**n`` is multiplied by ``n``."""
    if isinstance(a, ZQSeries):
        return ZQSeries([{e: c * n for e, c in a.coeff(n).items()} for n in range(a.order)], a.order)
    return QSeries._wrap(a.array * np.arange(a.order, dtype=object))


# --------------------------------------------------------------------------
# Laurent polynomials in z (plain dicts exponent -> coefficient)


def laurent_add(a: Laurent, b: Laurent, sign: int = 1) -> dict[int, Coefficient]:
    out = dict(a)
    for e, c in b.items():
        v = out.get(e, 0) + sign * c
        if v:
            out[e] = v
        else:
            out.pop(e, None)
    return out


def laurent_mul(a: Laurent, b: Laurent) -> dict[int, Coefficient]:
    out: dict[int, Coefficient] = {}
    for e1, c1 in a.items():
        for e2, c2 in b.items():
            out[e1 + e2] = out.get(e1 + e2, 0) + c1 * c2
    return {e: normalize(c) for e, c in out.items() if c}


def laurent_eval(a: Laurent, z0: Coefficient) -> Coefficient:
    total: Coefficient = 0
    for e, c in a.items():
        total += c * (Fraction(z0) ** e if e < 0 else z0**e)
    return normalize(total)


class ZQSeries:
    """Truncated series in q whose coefficients are Laurent polynomials in z."""

    __slots__ = ("_c",)

    def __init__(self, coeffs: Iterable[Laurent], order: int | None = None):
        coeffs = [{int(e): normalize(c) for e, c in d.items() if c} for d in coeffs]
        n = len(coeffs) if order is None else _check_order(order)
        coeffs = coeffs[:n] + [{} for _ in range(n - len(coeffs))]
        self._c = tuple(coeffs)

    @classmethod
    def from_qseries(cls, a: QSeries) -> "ZQSeries":
        return cls([{0: c} if c else {} for c in a], a.order)

    @classmethod
    def one(cls, order: int) -> "ZQSeries":
        return cls([{0: 1}], order)

    @property
    def order(self) -> int:
        return len(self._c)

    def coeff(self, n: int) -> dict[int, Coefficient]:
        if n < 0:
            raise IndexError("negative exponent")
        if n >= len(self._c):
            raise TruncationError(f"coefficient of q^{n} requested but series is O(q^{len(self._c)})")
        return dict(self._c[n])

    def __getitem__(self, key):
        if isinstance(key, tuple):
            n, m = key
            return self.coeff(n).get(m, 0)
        return self.coeff(key)

    def __repr__(self) -> str:
        return f"ZQSeries(order={self.order})"

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ZQSeries):
            return NotImplemented
        return self._c == other._c

    __hash__ = None  # type: ignore[assignment]

    def truncate(self, order: int) -> "ZQSeries":
        if order > self.order:
            raise TruncationError(f"cannot extend O(q^{self.order}) to O(q^{order})")
        return ZQSeries(self._c[:order], order)

    def __neg__(self) -> "ZQSeries":
        return ZQSeries([{e: -c for e, c in d.items()} for d in self._c], self.order)

    def __add__(self, other):
        if isinstance(other, QSeries):
            other = ZQSeries.from_qseries(other)
        if not isinstance(other, ZQSeries):
            return NotImplemented
        n = min(self.order, other.order)
        return ZQSeries([laurent_add(self._c[i], other._c[i]) for i in range(n)], n)

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, QSeries):
            other = ZQSeries.from_qseries(other)
        if not isinstance(other, ZQSeries):
            return NotImplemented
        n = min(self.order, other.order)
        return ZQSeries([laurent_add(self._c[i], other._c[i], -1) for i in range(n)], n)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return ZQSeries([{e: c * other for e, c in d.items()} for d in self._c], self.order)
        if isinstance(other, QSeries):
            other = ZQSeries.from_qseries(other)
        if not isinstance(other, ZQSeries):
            return NotImplemented
        n = min(self.order, other.order)
        out: list[dict[int, Coefficient]] = [dict() for _ in range(n)]
        for i in range(n):
            a = self._c[i]
            if not a:
                continue
            for j in range(n - i):
                b = other._c[j]
                if b:
                    out[i + j] = laurent_add(out[i + j], laurent_mul(a, b))
        return ZQSeries(out, n)

    __rmul__ = __mul__

    def mul_laurent(self, poly: Laurent) -> "ZQSeries":
        """Multiply by a Laurent polynomial in z that does not involve q."""
        return ZQSeries([laurent_mul(d, poly) for d in self._c], self.order)

    def mul_factor(self, c: Coefficient, zexp: int, s: int) -> "ZQSeries":
        """Multiply by ``(1 + c z**zexp q**s)``."""
        out = list(self._c)
        for n in range(s, self.order):
            src = self._c[n - s]
            if src:
                out[n] = laurent_add(out[n], {e + zexp: c * v for e, v in src.items()})
        return ZQSeries(out, self.order)

    def div_factor(self, c: Coefficient, zexp: int, s: int) -> "ZQSeries":
        """Divide by ``(1 - c z**zexp q**s)``."""
        out = list(self._c)
        for n in range(s, self.order):
            src = out[n - s]
            if src:
                out[n] = laurent_add(out[n], {e + zexp: c * v for e, v in src.items()})
        return ZQSeries(out, self.order)

    def shift(self, zexp: int, qexp: int, c: Coefficient = 1) -> "ZQSeries":
        """Multiply by the monomial ``c z**zexp q**qexp``; order is kept."""
        out: list[dict] = [dict() for _ in range(self.order)]
        for n in range(qexp, self.order):
            out[n] = {e + zexp: c * v for e, v in self._c[n - qexp].items()}
        return ZQSeries(out, self.order)

    def z_span(self, n: int) -> tuple[int, int] | None:
        d = self.coeff(n)
        return (min(d), max(d)) if d else None


def delta_z(a: ZQSeries) -> ZQSeries:
    """The operator ``z d/dz``: the ``z**m`` term is scaled by ``m``."""
    return ZQSeries([{e: c * e for e, c in a.coeff(n).items()} for n in range(a.order)], a.order)


def eval_z(a: ZQSeries, z0: int) -> QSeries:
    if z0 not in (1, -1):
        raise SeriesError("only z = 1 and z = -1 are supported")
    return QSeries([laurent_eval(a.coeff(n), z0) for n in range(a.order)], a.order)


# --------------------------------------------------------------------------
# JSON serialisation and the on-disk expansion cache


def rational_to_str(x: Coefficient) -> str:
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


def rational_from_str(s: str) -> Coefficient:
    num, _, den = s.partition("/")
    return normalize(Fraction(int(num), int(den or 1)))


def qseries_to_json(a: QSeries) -> dict:
    return {"order": a.order, "coeffs": [rational_to_str(c) for c in a]}


def qseries_from_json(obj: Mapping) -> QSeries:
    return QSeries([rational_from_str(s) for s in obj["coeffs"]], obj["order"])


class SeriesCache:
    """Versioned JSON cache of expansions keyed by descriptor and order.

    A cached expansion of order ``N`` also serves any request of lower order.
    """

    def __init__(self, directory: str | os.PathLike):
        self.directory = Path(directory)

    @classmethod
    def from_env(cls) -> "SeriesCache | None":
        path = os.environ.get(CACHE_ENV)
        return cls(path) if path else None

    def _path(self, descriptor: str) -> Path:
        safe = "".join(ch if ch.isalnum() or ch in "-_.=" else "_" for ch in descriptor)
        return self.directory / f"{safe}.json"

    def get(self, descriptor: str, order: int) -> QSeries | None:
        path = self._path(descriptor)
        if not path.exists():
            return None
        try:
            obj = json.loads(path.read_text())
        except (OSError, json.JSONDecodeError):
            return None
        if obj.get("version") != CACHE_VERSION or obj.get("descriptor") != descriptor:
            return None
        if obj["series"]["order"] < order:
            return None
        return qseries_from_json(obj["series"]).truncate(order)

    def put(self, descriptor: str, series: QSeries) -> None:
        self.directory.mkdir(parents=True, exist_ok=True)
        path = self._path(descriptor)
        existing = self.get(descriptor, 0)
        if existing is not None and existing.order >= series.order:
            return
        payload = {"version": CACHE_VERSION, "descriptor": descriptor, "series": qseries_to_json(series)}
        tmp = path.with_suffix(".tmp")
        tmp.write_text(json.dumps(payload))
        tmp.replace(path)


def cached(descriptor: str, order: int, build: Callable[[int], QSeries], cache: SeriesCache | None = None) -> QSeries:
    cache = cache if cache is not None else SeriesCache.from_env()
    if cache is not None:
        hit = cache.get(descriptor, order)
        if hit is not None:
            return hit
    series = build(order)
    if cache is not None:
        cache.put(descriptor, series)
    return series
