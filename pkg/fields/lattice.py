"""
Решётка конечных расширений F_p с согласованными вложениями.

Поле F_{p^m} строится лениво: модуль степени m выбирается детерминированно
по зерну, а вложения F_{p^a} -> F_{p^b} (a | b) вычисляются поиском корней
меньшего модуля в большем поле с проверкой согласованности на всех общих делителях.
"""
import logging
import random
import re
import threading
from math import gcd
from typing import Dict, List, Optional, Sequence, Tuple, Union

import numpy as np
from sympy import isprime
from sympy.polys.domains import ZZ
from sympy.polys.galoistools import gf_gcdex, gf_irreducible_p

from cli.config import MAX_DEGREE, SEED
from cli.errors import DegreeCapError, InputError

logger = logging.getLogger(__name__)


def lcm(a: int, b: int) -> int:
    return a * b // gcd(a, b)


def divisors(m: int) -> List[int]:
    return [d for d in range(1, m + 1) if m % d == 0]


class FiniteField:
    """Поле F_p[z]/(mu) степени m; элементы - векторы коэффициентов длины m."""

    def __init__(self, lattice: "FieldLattice", modulus: Sequence[int]):
        self.lattice = lattice
        self.p = lattice.p
        self.degree = len(modulus) - 1
        self.modulus = tuple(int(c) % self.p for c in modulus)
        self.name = f"z{self.degree}"
        m, p = self.degree, self.p
        # Строки: z^k mod mu для k = m .. 2m-2
        red = np.zeros((max(m - 1, 0), m), dtype=np.int64)
        cur = np.zeros(m, dtype=np.int64)
        if m > 0:
            cur[:] = [(-c) % p for c in self.modulus[:m]]
        for k in range(m - 1):
            red[k] = cur
            top = cur[m - 1]
            cur = np.roll(cur, 1)
            cur[0] = 0
            if top:
                cur = (cur + top * np.array([(-c) % p for c in self.modulus[:m]], dtype=np.int64)) % p
        self._red = red
        self._frob_cache: Dict[int, np.ndarray] = {0: np.eye(m, dtype=np.int64)}
        if m > 1:
            frob = np.zeros((m, m), dtype=np.int64)
            for k in range(m):
                basis = np.zeros(m, dtype=np.int64)
                basis[k] = 1
                frob[:, k] = self.pow_vec(basis, p)
            self._frob_cache[1] = frob

    # --- векторные операции ---

    def reduce_wide(self, P: np.ndarray) -> np.ndarray:
        """Приводит массив (..., k) коэффициентов при z^0..z^{k-1}, k <= 2m-1, по модулю mu."""
        m, p = self.degree, self.p
        k = P.shape[-1]
        if k <= m:
            out = np.zeros(P.shape[:-1] + (m,), dtype=np.int64)
            out[..., :k] = P
            return out % p
        high = P[..., m:] % p
        return (P[..., :m] + high @ self._red[: k - m]) % p

    def mul_vec(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        if self.degree == 1:
            return (a * b) % self.p
        return self.reduce_wide(np.convolve(a, b))

    def mult_matrix(self, c: np.ndarray) -> np.ndarray:
        """Матрица F_p-линейного отображения x -> c*x."""
        m = self.degree
        M = np.zeros((m, m), dtype=np.int64)
        cur = np.array(c, dtype=np.int64) % self.p
        for k in range(m):
            M[:, k] = cur
            if k + 1 < m:
                wide = np.zeros(m + 1, dtype=np.int64)
                wide[1:] = cur
                cur = self.reduce_wide(wide)
        return M

    def scale_rows(self, A: np.ndarray, c: np.ndarray) -> np.ndarray:
        """Умножает каждый элемент массива (..., m) на скаляр c."""
        if self.degree == 1:
            return (A * int(c[0])) % self.p
        return (A @ self.mult_matrix(c).T) % self.p

    def inv_vec(self, a: np.ndarray) -> np.ndarray:
        p, m = self.p, self.degree
        a_hi = [int(c) for c in reversed(list(a))]
        while a_hi and a_hi[0] == 0:
            a_hi.pop(0)
        if not a_hi:
            raise ZeroDivisionError("обращение нуля в конечном поле")
        if m == 1:
            return np.array([pow(a_hi[0], -1, p)], dtype=np.int64)
        s, _, h = gf_gcdex(a_hi, list(reversed(self.modulus)), p, ZZ)
        # gcd нормирован, h == [1]
        out = np.zeros(m, dtype=np.int64)
        for i, c in enumerate(reversed(s)):
            out[i] = int(c) % p
        return out

    def pow_vec(self, a: np.ndarray, k: int) -> np.ndarray:
        m = self.degree
        if k < 0:
            a, k = self.inv_vec(a), -k
        result = np.zeros(m, dtype=np.int64)
        result[0] = 1
        base = np.array(a, dtype=np.int64) % self.p
        while k:
            if k & 1:
                result = self.mul_vec(result, base)
            k >>= 1
            if k:
                base = self.mul_vec(base, base)
        return result

    def frobenius_matrix(self, e: int) -> np.ndarray:
        """Матрица x -> x^{p^e} (e берётся по модулю m)."""
        m = self.degree
        e = e % m if m > 0 else 0
        if e not in self._frob_cache:
            known = max(k for k in self._frob_cache if k < e)
            M = self._frob_cache[known]
            for k in range(known + 1, e + 1):
                M = (self._frob_cache[1] @ M) % self.p
                self._frob_cache[k] = M
        return self._frob_cache[e]

    def frob_array(self, A: np.ndarray, e: int) -> np.ndarray:
        if self.degree == 1:
            return A % self.p
        return (A @ self.frobenius_matrix(e).T) % self.p

    def mul_arrays(self, A: np.ndarray, B: np.ndarray) -> np.ndarray:
        """
        Произведение многочленов (по внешней переменной) с коэффициентами в поле.

        Args:
            A: Массив (la, m)
            B: Массив (lb, m)

        Returns:
            Массив (la + lb - 1, m)
        """
        la, lb, m, p = A.shape[0], B.shape[0], self.degree, self.p
        if la == 0 or lb == 0:
            return np.zeros((0, m), dtype=np.int64)
        if m == 1:
            return np.convolve(A[:, 0], B[:, 0]).reshape(-1, 1) % p
        s = 2 * m - 1
        fa = np.zeros(la * s, dtype=np.int64)
        fb = np.zeros(lb * s, dtype=np.int64)
        fa.reshape(la, s)[:, :m] = A
        fb.reshape(lb, s)[:, :m] = B
        prod = np.convolve(fa, fb) % p
        total = (la + lb - 1) * s
        padded = np.zeros(total + s, dtype=np.int64)
        padded[: prod.size] = prod
        wide = padded[:total].reshape(la + lb - 1, s)
        return self.reduce_wide(wide)

    # --- элементы ---

    def element(self, coeffs) -> "FieldElement":
        vec = np.zeros(self.degree, dtype=np.int64)
        coeffs = list(coeffs)
        vec[: len(coeffs)] = [int(c) for c in coeffs]
        return FieldElement(self, vec % self.p)

    def zero(self) -> "FieldElement":
        return self.element([])

    def one(self) -> "FieldElement":
        return self.element([1])

    def from_int(self, k: int) -> "FieldElement":
        return self.element([k % self.p])

    def gen(self) -> "FieldElement":
        if self.degree == 1:
            return self.element([(-self.modulus[0]) % self.p])
        return self.element([0, 1])

    def elements(self):
        """Перебор всех элементов поля (только для малых полей)."""
        m, p = self.degree, self.p
        for k in range(p ** m):
            digits = []
            for _ in range(m):
                digits.append(k % p)
                k //= p
            yield self.element(digits)

    def __repr__(self) -> str:
        return f"GF({self.p}^{self.degree})"


class FieldElement:
    """Неизменяемый элемент поля решётки."""

    __slots__ = ("field", "vec")

    def __init__(self, field: FiniteField, vec: np.ndarray):
        self.field = field
        vec = np.array(vec, dtype=np.int64)
        vec.setflags(write=False)
        self.vec = vec

    @property
    def degree(self) -> int:
        return self.field.degree

    @property
    def lattice(self) -> "FieldLattice":
        return self.field.lattice

    def _coerce(self, other) -> Tuple["FieldElement", "FieldElement"]:
        if isinstance(other, int):
            return self, self.field.from_int(other)
        if not isinstance(other, FieldElement):
            return NotImplemented, NotImplemented
        if other.field is self.field:
            return self, other
        return self.lattice.common(self, other)

    def __add__(self, other):
        a, b = self._coerce(other)
        if a is NotImplemented:
            return NotImplemented
        return FieldElement(a.field, (a.vec + b.vec) % a.field.p)

    __radd__ = __add__

    def __sub__(self, other):
        a, b = self._coerce(other)
        if a is NotImplemented:
            return NotImplemented
        return FieldElement(a.field, (a.vec - b.vec) % a.field.p)

    def __rsub__(self, other):
        return (-self) + other

    def __neg__(self):
        return FieldElement(self.field, (-self.vec) % self.field.p)

    def __mul__(self, other):
        a, b = self._coerce(other)
        if a is NotImplemented:
            return NotImplemented
        return FieldElement(a.field, a.field.mul_vec(a.vec, b.vec))

    __rmul__ = __mul__

    def inverse(self) -> "FieldElement":
        return FieldElement(self.field, self.field.inv_vec(self.vec))

    def __truediv__(self, other):
        a, b = self._coerce(other)
        if a is NotImplemented:
            return NotImplemented
        return a * b.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, k: int) -> "FieldElement":
        return FieldElement(self.field, self.field.pow_vec(self.vec, k))

    def frobenius(self, e: int = 1) -> "FieldElement":
        """x -> x^{p^e}."""
        return FieldElement(self.field, self.field.frob_array(self.vec, e))

    def is_zero(self) -> bool:
        return not self.vec.any()

    def __bool__(self) -> bool:
        return not self.is_zero()

    def is_one(self) -> bool:
        return int(self.vec[0]) == 1 and not self.vec[1:].any()

    def key(self) -> Tuple[int, ...]:
        """Ключ лексикографического порядка в координатах рабочего поля."""
        return tuple(int(c) for c in self.vec)

    def __eq__(self, other) -> bool:
        if isinstance(other, int):
            other = self.field.from_int(other)
        if not isinstance(other, FieldElement):
            return NotImplemented
        a, b = self._coerce(other)
        return bool(np.array_equal(a.vec, b.vec))

    def __hash__(self) -> int:
        small = self.lattice.descend(self)
        return hash((small.degree, small.key()))

    def __repr__(self) -> str:
        return format_element(self)

    __str__ = __repr__


def format_element(x: FieldElement) -> str:
    """Запись элемента многочленом от образующей z<m>, например '2*z4^3 + z4 + 1'."""
    p = x.field.p
    if x.degree == 1:
        return str(int(x.vec[0]))
    name = x.field.name
    terms = []
    for k in range(x.degree - 1, -1, -1):
        c = int(x.vec[k])
        if c == 0:
            continue
        if k == 0:
            terms.append(str(c))
            continue
        mono = name if k == 1 else f"{name}^{k}"
        terms.append(mono if c == 1 else f"{c}*{mono}")
    return " + ".join(terms) if terms else "0"


_TERM_RE = re.compile(r"^(?:(\d+)\*?)?(?:z(\d+)(?:\^(\d+))?)?$")


def parse_element(text: str, lattice: "FieldLattice") -> FieldElement:
    """
    Разбор записи элемента поля.

    Args:
        text: Строка вида '2*z4^3 + z4 + 1' или целое число
        lattice: Решётка, в которой создаётся элемент

    Returns:
        FieldElement
    """
    s = text.replace(" ", "")
    if not s:
        raise InputError("пустая запись элемента поля")
    s = s.replace("-", "+-")
    result = lattice.field(1).zero()
    for term in s.split("+"):
        if not term:
            continue
        sign = 1
        while term.startswith("-"):
            sign, term = -sign, term[1:]
        match = _TERM_RE.match(term)
        if not match or not term:
            raise InputError(f"не удалось разобрать элемент поля: {text!r}")
        coeff = int(match.group(1)) if match.group(1) else 1
        if match.group(2):
            field = lattice.field(int(match.group(2)))
            exp = int(match.group(3)) if match.group(3) else 1
            value = field.gen() ** exp * (sign * coeff)
        else:
            if match.group(1) is None:
                raise InputError(f"не удалось разобрать элемент поля: {text!r}")
            value = lattice.field(1).from_int(sign * coeff)
        result = result + value
    return result


class FieldLattice:
    """Реестр полей F_{p^m} и согласованных вложений."""

    def __init__(self, p: int, seed: int = SEED, max_degree: int = MAX_DEGREE):
        if not isprime(p):
            raise ValueError(f"характеристика должна быть простым числом, получено: {p}")
        self.p = p
        self.seed = seed
        self.max_degree = max_degree
        self._fields: Dict[int, FiniteField] = {}
        # (a, b) -> матрица (b, a): столбец k - образ z_a^k в F_{p^b}
        self._embeddings: Dict[Tuple[int, int], np.ndarray] = {}
        self._lock = threading.RLock()

    def field(self, m: int) -> FiniteField:
        """
        Возвращает поле степени m, при необходимости регистрируя его
        вместе со всеми делителями.

        Args:
            m: Степень над F_p

        Returns:
            FiniteField
        """
        if m < 1:
            raise ValueError(f"степень поля должна быть положительной, получено: {m}")
        existing = self._fields.get(m)
        if existing is not None:
            return existing
        if m > self.max_degree:
            raise DegreeCapError(
                f"степень расширения {m} превышает предел {self.max_degree} (ASW_MAX_DEGREE)"
            )
        with self._lock:
            for d in divisors(m):
                if d not in self._fields:
                    self._register(d)
        return self._fields[m]

    @property
    def degrees(self) -> List[int]:
        return sorted(self._fields)

    def _choose_modulus(self, m: int) -> List[int]:
        p = self.p
        if m == 1:
            return [0, 1]
        rng = random.Random(f"{self.seed}:{p}:{m}")
        while True:
            low = [rng.randrange(p) for _ in range(m)]
            if low[0] == 0:
                continue
            hi = [1] + list(reversed(low))
            if gf_irreducible_p(hi, p, ZZ):
                return low + [1]

    def _register(self, m: int) -> None:
        """Строит поле и его вложения локально и публикует их одной операцией под замком."""
        modulus = self._choose_modulus(m)
        field = FiniteField(self, modulus)
        fields = dict(self._fields)
        fields[m] = field
        embeddings = dict(self._embeddings)
        embeddings[(m, m)] = np.eye(m, dtype=np.int64)
        for d in sorted(fields):
            if d == m or m % d:
                continue
            embeddings[(d, m)] = self._find_embedding(d, m, fields, embeddings)
        # вложения публикуются раньше поля
        self._embeddings = embeddings
        self._fields = fields
        logger.debug(f"Зарегистрировано поле GF({self.p}^{m}), модуль {modulus}")

    def _find_embedding(
        self,
        d: int,
        m: int,
        fields: Dict[int, FiniteField],
        embeddings: Dict[Tuple[int, int], np.ndarray],
    ) -> np.ndarray:
        from fields.polynomials import roots_in_field

        small, big = fields[d], fields[m]
        candidates = roots_in_field(list(small.modulus), big)
        constraints = [e for e in sorted(fields) if e != d and d % e == 0 and e != m]
        for rho in sorted(candidates, key=lambda r: r.key()):
            matrix = self._powers_matrix(rho, d)
            ok = True
            for e in constraints:
                via = (matrix @ embeddings[(e, d)]) % self.p
                if not np.array_equal(via, embeddings[(e, m)]):
                    ok = False
                    break
            if ok:
                return matrix
        raise RuntimeError(f"не найдено согласованное вложение GF(p^{d}) -> GF(p^{m})")

    def _powers_matrix(self, rho: FieldElement, d: int) -> np.ndarray:
        field = rho.field
        M = np.zeros((field.degree, d), dtype=np.int64)
        cur = field.one().vec
        for k in range(d):
            M[:, k] = cur
            cur = field.mul_vec(cur, rho.vec)
        return M

    def embedding_matrix(self, a: int, b: int) -> np.ndarray:
        if b % a:
            raise ValueError(f"нет вложения GF(p^{a}) -> GF(p^{b})")
        self.field(b)
        return self._embeddings[(a, b)]

    def embed(self, x: FieldElement, b: int) -> FieldElement:
        """Образ x при вложении в поле степени b."""
        if x.degree == b:
            return x
        E = self.embedding_matrix(x.degree, b)
        return FieldElement(self.field(b), (E @ x.vec) % self.p)

    def embed_array(self, A: np.ndarray, a: int, b: int) -> np.ndarray:
        if a == b:
            return A
        E = self.embedding_matrix(a, b)
        return (A @ E.T) % self.p

    def common(self, x: FieldElement, y: FieldElement) -> Tuple[FieldElement, FieldElement]:
        m = lcm(x.degree, y.degree)
        return self.embed(x, m), self.embed(y, m)

    def common_degree(self, elements) -> int:
        m = 1
        for e in elements:
            m = lcm(m, e.degree)
        return m

    def descend(self, x: FieldElement) -> FieldElement:
        """Тот же элемент в наименьшем подполе, которое его содержит."""
        from fields.linalg import solve_modp

        for d in divisors(x.degree):
            if d == x.degree:
                return x
            if not np.array_equal(x.frobenius(d).vec, x.vec):
                continue
            sol = solve_modp(self._embeddings[(d, x.degree)], x.vec, self.p)
            if sol is not None:
                return FieldElement(self._fields[d], sol)
        return x


_lattices: Dict[int, FieldLattice] = {}
_settings = {"seed": SEED, "max_degree": MAX_DEGREE}


def configure(seed: Optional[int] = None, max_degree: Optional[int] = None) -> None:
    """Переопределяет зерно и предел степени; сбрасывает созданные решётки."""
    if seed is not None:
        _settings["seed"] = seed
    if max_degree is not None:
        _settings["max_degree"] = max_degree
    _lattices.clear()


def get_lattice(p: int) -> FieldLattice:
    """Возвращает глобальную решётку для характеристики p."""
    lattice = _lattices.get(p)
    if lattice is None:
        lattice = FieldLattice(p, seed=_settings["seed"], max_degree=_settings["max_degree"])
        _lattices[p] = lattice
        logger.info(f"Создана решётка конечных полей характеристики {p}")
    return lattice


def get_field(lattice: FieldLattice, m: int) -> FiniteField:
    """Поле степени m решётки; создаётся вместе с вложениями при первом обращении."""
    return lattice.field(m)


Scalar = Union[FieldElement, int]
