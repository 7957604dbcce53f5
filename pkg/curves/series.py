"""
Усечённые ряды Лорана над полями решётки.

Ряд хранит валюацию v, коэффициенты при t^v, t^{v+1}, ... (массив (L, m))
и абсолютную точность P: ряд известен по модулю t^P. Точные ряды
(конечные суммы Лорана) имеют точность EXACT.
"""
import logging
from typing import List, Optional, Sequence, Union

import numpy as np

from cli.errors import PrecisionError
from fields.lattice import FieldElement, FiniteField, lcm

logger = logging.getLogger(__name__)

EXACT = 10 ** 9


def _trim_leading(coeffs: np.ndarray) -> int:
    nz = np.nonzero(coeffs.any(axis=1))[0]
    return int(nz[0]) if nz.size else coeffs.shape[0]


class LaurentSeries:
    """Ряд Σ c_k t^k, k >= valuation, известный по модулю t^prec."""

    __slots__ = ("field", "val", "coeffs", "prec")

    def __init__(self, field: FiniteField, val: int, coeffs: np.ndarray, prec: int = EXACT):
        coeffs = np.array(coeffs, dtype=np.int64).reshape(-1, field.degree) % field.p
        prec = min(prec, EXACT)
        # Коэффициенты дальше точности отбрасываются
        keep = max(0, prec - val)
        if coeffs.shape[0] > keep:
            coeffs = coeffs[:keep]
        shift = _trim_leading(coeffs)
        if shift == coeffs.shape[0]:
            coeffs = coeffs[:0]
            val = prec if prec < EXACT else 0
        else:
            coeffs = coeffs[shift:]
            val += shift
            tail = np.nonzero(coeffs.any(axis=1))[0]
            coeffs = coeffs[: int(tail[-1]) + 1] if prec >= EXACT else coeffs
        self.field = field
        self.val = val
        self.coeffs = coeffs
        self.prec = prec

    # --- конструкторы ---

    @classmethod
    def zero(cls, field: FiniteField, prec: int = EXACT) -> "LaurentSeries":
        return cls(field, 0, np.zeros((0, field.degree), dtype=np.int64), prec)

    @classmethod
    def monomial(cls, c: Union[FieldElement, int], k: int, field: FiniteField, prec: int = EXACT) -> "LaurentSeries":
        """c * t^k."""
        if isinstance(c, int):
            c = field.from_int(c)
        m = lcm(field.degree, c.degree)
        big = field.lattice.field(m)
        return cls(big, k, field.lattice.embed(c, m).vec.reshape(1, m), prec)

    @classmethod
    def constant(cls, c: Union[FieldElement, int], field: FiniteField, prec: int = EXACT) -> "LaurentSeries":
        return cls.monomial(c, 0, field, prec)

    @classmethod
    def from_coefficients(
        cls, field: FiniteField, val: int, coeffs: Sequence[FieldElement], prec: int = EXACT
    ) -> "LaurentSeries":
        m = field.degree
        for c in coeffs:
            m = lcm(m, c.degree)
        big = field.lattice.field(m)
        arr = np.zeros((len(coeffs), m), dtype=np.int64)
        for i, c in enumerate(coeffs):
            arr[i] = field.lattice.embed(c, m).vec
        return cls(big, val, arr, prec)

    # --- свойства ---

    @property
    def lattice(self):
        return self.field.lattice

    @property
    def valuation(self) -> int:
        """Первый ненулевой показатель; для неотличимого от нуля ряда - его точность."""
        return self.val if self.coeffs.shape[0] else self.prec

    def is_exact(self) -> bool:
        return self.prec >= EXACT

    def is_zero(self) -> bool:
        """Истина только для точного нуля."""
        return self.coeffs.shape[0] == 0 and self.is_exact()

    def is_regular(self) -> bool:
        """Ряд заведомо без полюса: отрицательные коэффициенты равны нулю и известны."""
        if self.prec < 0:
            raise PrecisionError(f"точности O(t^{self.prec}) не хватает для проверки регулярности")
        return self.valuation >= 0

    def coefficient(self, k: int) -> FieldElement:
        if k >= self.prec:
            raise PrecisionError(f"коэффициент при t^{k} не известен: ряд задан по модулю t^{self.prec}")
        i = k - self.val
        if 0 <= i < self.coeffs.shape[0]:
            return FieldElement(self.field, self.coeffs[i])
        return self.field.zero()

    def block(self, lo: int, hi: int, m: Optional[int] = None) -> np.ndarray:
        """Коэффициенты при t^lo .. t^{hi-1} массивом (hi - lo, m) над полем степени m."""
        if hi > self.prec:
            raise PrecisionError(f"коэффициенты до t^{hi - 1} не известны: ряд задан по модулю t^{self.prec}")
        s = self.embed(m) if m is not None else self
        return s._dense(lo, hi)

    def principal_part(self, s: int) -> List[FieldElement]:
        """Коэффициенты при t^{-s}, ..., t^{-1}."""
        if s < 0:
            raise ValueError(f"порядок главной части должен быть неотрицательным, получено: {s}")
        if self.valuation < -s:
            raise ValueError(f"порядок полюса {-self.valuation} больше запрошенного {s}")
        return [self.coefficient(k) for k in range(-s, 0)]

    # --- приведение полей ---

    def embed(self, m: int) -> "LaurentSeries":
        if m == self.field.degree:
            return self
        arr = self.lattice.embed_array(self.coeffs, self.field.degree, m)
        return LaurentSeries(self.lattice.field(m), self.val, arr, self.prec)

    def _common(self, other: "LaurentSeries"):
        m = lcm(self.field.degree, other.field.degree)
        return self.embed(m), other.embed(m)

    def _lift(self, other) -> Optional["LaurentSeries"]:
        if isinstance(other, LaurentSeries):
            return other
        if isinstance(other, int):
            return LaurentSeries.constant(other % self.field.p, self.field)
        if isinstance(other, FieldElement):
            return LaurentSeries.constant(other, self.field)
        return None

    def _dense(self, start: int, stop: int) -> np.ndarray:
        """Коэффициенты при t^start .. t^{stop-1}."""
        out = np.zeros((max(stop - start, 0), self.field.degree), dtype=np.int64)
        n = self.coeffs.shape[0]
        lo = max(start, self.val)
        hi = min(stop, self.val + n)
        if lo < hi:
            out[lo - start: hi - start] = self.coeffs[lo - self.val: hi - self.val]
        return out

    # --- арифметика ---

    def __add__(self, other) -> "LaurentSeries":
        other = self._lift(other)
        if other is None:
            return NotImplemented
        a, b = self._common(other)
        prec = min(a.prec, b.prec)
        if a.coeffs.shape[0] == 0:
            return LaurentSeries(b.field, b.val, b.coeffs, prec)
        if b.coeffs.shape[0] == 0:
            return LaurentSeries(a.field, a.val, a.coeffs, prec)
        start = min(a.val, b.val)
        stop = max(a.val + a.coeffs.shape[0], b.val + b.coeffs.shape[0])
        if prec < EXACT:
            stop = min(stop, prec)
        if stop <= start:
            return LaurentSeries.zero(a.field, prec)
        return LaurentSeries(a.field, start, a._dense(start, stop) + b._dense(start, stop), prec)

    __radd__ = __add__

    def __neg__(self) -> "LaurentSeries":
        return LaurentSeries(self.field, self.val, -self.coeffs, self.prec)

    def __sub__(self, other) -> "LaurentSeries":
        other = self._lift(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other) -> "LaurentSeries":
        return (-self) + other

    def scale(self, c: Union[FieldElement, int]) -> "LaurentSeries":
        if isinstance(c, int):
            c = c % self.field.p
            if c == 0:
                return LaurentSeries.zero(self.field)
            return LaurentSeries(self.field, self.val, self.coeffs * c, self.prec)
        if c.is_zero():
            return LaurentSeries.zero(self.field)
        m = lcm(self.field.degree, c.degree)
        a = self.embed(m)
        cv = self.lattice.embed(c, m).vec
        return LaurentSeries(a.field, a.val, a.field.scale_rows(a.coeffs, cv), a.prec)

    def __mul__(self, other) -> "LaurentSeries":
        if isinstance(other, (int, FieldElement)):
            return self.scale(other)
        if not isinstance(other, LaurentSeries):
            return NotImplemented
        if self.is_zero() or other.is_zero():
            return LaurentSeries.zero(self.field)
        a, b = self._common(other)
        prec = min(a.prec + b.valuation, b.prec + a.valuation, EXACT)
        if a.coeffs.shape[0] == 0 or b.coeffs.shape[0] == 0:
            return LaurentSeries.zero(a.field, prec)
        val = a.val + b.val
        la, lb = a.coeffs.shape[0], b.coeffs.shape[0]
        if prec < EXACT:
            keep = max(prec - val, 0)
            la, lb = min(la, keep), min(lb, keep)
            if la == 0 or lb == 0:
                return LaurentSeries.zero(a.field, prec)
        prod = a.field.mul_arrays(a.coeffs[:la], b.coeffs[:lb])
        return LaurentSeries(a.field, val, prod, prec)

    __rmul__ = __mul__

    def inverse(self) -> "LaurentSeries":
        if self.coeffs.shape[0] == 0:
            raise ZeroDivisionError("обращение ряда, неотличимого от нуля")
        v = self.val
        rel = self.prec - v if self.prec < EXACT else None
        if rel is None:
            if self.coeffs.shape[0] == 1:
                inv = self.field.inv_vec(self.coeffs[0]).reshape(1, -1)
                return LaurentSeries(self.field, -v, inv)
            raise PrecisionError("обращение точного ряда требует конечной точности")
        g = _inverse_power_series(self.field, self.coeffs, rel)
        return LaurentSeries(self.field, -v, g, -v + rel)

    def with_precision(self, prec: int) -> "LaurentSeries":
        """Огрубление до точности prec (для точных рядов - перевод в усечённые)."""
        return LaurentSeries(self.field, self.val, self.coeffs, min(prec, self.prec))

    def __truediv__(self, other) -> "LaurentSeries":
        if isinstance(other, int):
            return self.scale(pow(other % self.field.p, -1, self.field.p))
        if isinstance(other, FieldElement):
            return self.scale(other.inverse())
        if other.is_exact() and other.coeffs.shape[0] > 1:
            rel = self.prec - self.valuation if not self.is_exact() else None
            if rel is None:
                raise PrecisionError("деление точных рядов требует конечной точности")
            other = other.with_precision(other.valuation + rel)
        return self * other.inverse()

    def __rtruediv__(self, other) -> "LaurentSeries":
        lifted = self._lift(other)
        return lifted / self

    def __pow__(self, k: int) -> "LaurentSeries":
        if k < 0:
            return self.inverse() ** (-k)
        result = LaurentSeries.constant(1, self.field)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def frobenius(self, e: int = 1) -> "LaurentSeries":
        """x -> x^{p^e}: коэффициенты возводятся в степень, показатели умножаются на p^e."""
        p = self.field.p
        step = p ** e
        n = self.coeffs.shape[0]
        m = self.field.degree
        out = np.zeros((max((n - 1) * step + 1, 0), m), dtype=np.int64)
        if n:
            out[::step] = self.field.frob_array(self.coeffs, e)
        prec = self.prec if self.is_exact() else self.prec * step
        return LaurentSeries(self.field, self.val * step, out, prec)

    def compose(self, s: "LaurentSeries") -> "LaurentSeries":
        """Подстановка t -> s(t), v(s) = 1; отрицательные степени через обращение s."""
        if s.valuation != 1:
            raise ValueError(f"подставляемый ряд должен иметь валюацию 1, получено: {s.valuation}")
        if self.coeffs.shape[0] == 0:
            return LaurentSeries.zero(s.field, self.prec)
        lo = self.val
        hi = self.val + self.coeffs.shape[0]
        power = s ** lo if lo != 0 else LaurentSeries.constant(1, s.field)
        acc = None
        for k in range(lo, hi):
            c = FieldElement(self.field, self.coeffs[k - lo])
            if not c.is_zero():
                term = power.scale(c)
                acc = term if acc is None else acc + term
            power = power * s
        if acc is None:
            acc = LaurentSeries.zero(s.field)
        if not self.is_exact():
            acc = acc + LaurentSeries.zero(s.field, self.prec)
        return acc

    def reversion(self) -> "LaurentSeries":
        """Обратный по композиции ряд r с self(r(t)) = t; требуется v = 1."""
        if self.valuation != 1:
            raise ValueError("обращение по композиции определено только для рядов валюации 1")
        if self.is_exact():
            raise PrecisionError("обращение по композиции требует конечной точности")
        prec = self.prec
        a1 = self.coefficient(1)
        t = LaurentSeries.monomial(1, 1, self.field)
        r = LaurentSeries.monomial(a1.inverse(), 1, self.field, prec)
        # Итерация r <- r - (self(r) - t) / a1 добавляет по одному верному коэффициенту
        for _ in range(prec):
            err = self.compose(r) - t
            if err.valuation >= prec:
                break
            r = (r - err.scale(a1.inverse())).with_precision(prec)
        return r

    def __eq__(self, other) -> bool:
        other = self._lift(other)
        if other is None:
            return NotImplemented
        diff = self - other
        return diff.coeffs.shape[0] == 0

    def __hash__(self):
        return hash((self.val, self.coeffs.tobytes(), self.prec))

    def __repr__(self) -> str:
        terms = []
        for i, row in enumerate(self.coeffs):
            if not row.any():
                continue
            c = FieldElement(self.field, row)
            k = self.val + i
            mono = "1" if k == 0 else ("t" if k == 1 else f"t^{k}")
            terms.append(f"({c})*{mono}")
        if not self.is_exact():
            terms.append(f"O(t^{self.prec})")
        return " + ".join(terms) if terms else "0"


def _inverse_power_series(field: FiniteField, A: np.ndarray, length: int) -> np.ndarray:
    """Первые length коэффициентов 1/A(t) для A(0) != 0 (итерация Ньютона)."""
    p = field.p
    g = field.inv_vec(A[0]).reshape(1, -1)
    cur = 1
    two = np.zeros((1, field.degree), dtype=np.int64)
    two[0, 0] = 2 % p
    while cur < length:
        cur = min(2 * cur, length)
        e = field.mul_arrays(A[:cur], g)[:cur]
        corr = (-e) % p
        corr[0] = (corr[0] + two[0]) % p
        g = field.mul_arrays(g, corr)[:cur]
    out = np.zeros((length, field.degree), dtype=np.int64)
    out[: g.shape[0]] = g[:length]
    return out
