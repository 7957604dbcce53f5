"""
Усечённые p-типичные векторы Витта.

WittVector работает над любым кольцом характеристики p, элементы которого
поддерживают +, -, *, ** и умножение на целое: элементы полей решётки,
многочлены sympy над GF(p), ряды Лорана, функции на кривой.

Сложение использует разложение v = Σ V^i[v_i] в сумму тейхмюллеровских
слагаемых и двухпеременные многочлены суммы [X] + [Y]; произведение -
тождество V^i[a] * V^j[b] = V^{i+j}[a^{p^j} b^{p^i}].
"""
import logging
from typing import Any, Callable, List, Sequence

from witt.structure import teichmuller_sum_table

logger = logging.getLogger(__name__)


def _is_zero(x: Any) -> bool:
    attr = getattr(x, "is_zero", None)
    if attr is None:
        return x == 0
    return bool(attr()) if callable(attr) else bool(attr)


def _zero_of(x: Any) -> Any:
    return x * 0


def _ppow(x: Any, e: int, p: int) -> Any:
    """x^{p^e} в кольце характеристики p."""
    if e == 0 or isinstance(x, int):
        return x if e == 0 else x ** (p ** e)
    frob = getattr(x, "frobenius", None)
    if callable(frob):
        return frob(e)
    return x ** (p ** e)


def _powers(x: Any, top: int, needed: Sequence[int]) -> dict:
    """Степени x^e для e из needed (1 <= e <= top) последовательным умножением."""
    wanted = set(needed)
    out = {}
    cur = x
    for e in range(1, top + 1):
        if e > 1:
            cur = cur * x
        if e in wanted:
            out[e] = cur
    return out


def _teich_coordinate(terms, a: Any, b: Any, degree: int) -> Any:
    """σ_k(a, b) = Σ c a^e b^{degree-e} по таблице термов."""
    pa = _powers(a, degree, [e for e, _ in terms if e > 0])
    pb = _powers(b, degree, [degree - e for e, _ in terms if e < degree])
    acc = None
    for e, c in terms:
        if e == 0:
            term = pb[degree] * c
        elif e == degree:
            term = pa[degree] * c
        else:
            term = pa[e] * pb[degree - e] * c
        acc = term if acc is None else acc + term
    if acc is None:
        return _zero_of(a)
    return acc


def int_to_witt_digits(k: int, p: int, n: int) -> List[int]:
    """
    Образ k в W_n(F_p) = Z/p^n: цифры a_i с k = Σ p^i ω(a_i) mod p^n,
    где ω - тейхмюллеровский представитель.
    """
    digits = []
    k %= p ** n
    for i in range(n):
        m = n - i
        a = k % p
        digits.append(a)
        w = pow(a, p ** (m - 1), p ** m)
        k = ((k - w) % p ** m) // p
    return digits


def witt_digits_to_int(digits: Sequence[int], p: int) -> int:
    n = len(digits)
    total = 0
    for i, a in enumerate(digits):
        m = n - i
        total += p ** i * pow(int(a) % p, p ** (m - 1), p ** m)
    return total % p ** n


class WittVector:
    """Вектор Витта длины n над кольцом характеристики p."""

    __slots__ = ("p", "coords")

    def __init__(self, coords: Sequence[Any], p: int):
        if not coords:
            raise ValueError("вектор Витта должен иметь хотя бы одну координату")
        self.p = p
        self.coords = tuple(coords)

    @property
    def n(self) -> int:
        return len(self.coords)

    def __len__(self) -> int:
        return len(self.coords)

    def __getitem__(self, i: int) -> Any:
        return self.coords[i]

    def __iter__(self):
        return iter(self.coords)

    @classmethod
    def teichmuller(cls, a: Any, n: int, p: int) -> "WittVector":
        z = _zero_of(a)
        return cls([a] + [z] * (n - 1), p)

    @classmethod
    def from_int(cls, k: int, n: int, p: int, one: Any = 1) -> "WittVector":
        """Элемент W_n(F_p), соответствующий k mod p^n (координаты - целые или кратные one)."""
        return cls([one * a for a in int_to_witt_digits(k, p, n)], p)

    def to_int(self) -> int:
        """Обратное к from_int для векторов над F_p."""
        digits = []
        for c in self.coords:
            if isinstance(c, int):
                digits.append(c % self.p)
            else:
                vec = c.lattice.descend(c).vec
                if len(vec) != 1:
                    raise ValueError(f"координата {c} не лежит в F_p")
                digits.append(int(vec[0]))
        return witt_digits_to_int(digits, self.p)

    def _check(self, other: "WittVector") -> None:
        if not isinstance(other, WittVector):
            raise TypeError(f"ожидался WittVector, получено: {type(other).__name__}")
        if other.p != self.p or other.n != self.n:
            raise ValueError(
                f"несовместимые векторы Витта: (p={self.p}, n={self.n}) и (p={other.p}, n={other.n})"
            )

    def zero_like(self) -> "WittVector":
        z = _zero_of(self.coords[0])
        return WittVector([z] * self.n, self.p)

    def is_zero(self) -> bool:
        return all(_is_zero(c) for c in self.coords)

    # --- сложение ---

    def _add_teich(self, coords: List[Any], k: int, b: Any) -> List[Any]:
        """Прибавляет V^k[b] к вектору с координатами coords."""
        n = len(coords)
        if k >= n or _is_zero(b):
            return coords
        x0 = coords[k]
        if _is_zero(x0):
            coords[k] = b
            return coords
        table = teichmuller_sum_table(self.p, n)
        sig = [_teich_coordinate(table[j], x0, b, self.p ** j) for j in range(n - k)]
        coords[k] = sig[0]
        for j in range(1, n - k):
            coords = self._add_teich(coords, k + j, sig[j])
        return coords

    def __add__(self, other: "WittVector") -> "WittVector":
        self._check(other)
        coords = list(self.coords)
        for i, b in enumerate(other.coords):
            coords = self._add_teich(coords, i, b)
        return WittVector(coords, self.p)

    def __neg__(self) -> "WittVector":
        if self.p != 2:
            return WittVector([-c for c in self.coords], self.p)
        return WittVector([1] * self.n, 2) * self

    def __sub__(self, other: "WittVector") -> "WittVector":
        return self + (-other)

    # --- умножение ---

    def __mul__(self, other) -> "WittVector":
        if isinstance(other, int):
            return self.scale(other)
        self._check(other)
        n, p = self.n, self.p
        base = other.coords[0] if isinstance(self.coords[0], int) else self.coords[0]
        coords = [_zero_of(base)] * n
        for i, a in enumerate(self.coords):
            if _is_zero(a):
                continue
            for j, b in enumerate(other.coords):
                if i + j >= n or _is_zero(b):
                    continue
                term = _ppow(a, j, p) * _ppow(b, i, p)
                coords = self._add_teich(coords, i + j, term)
        return WittVector(coords, p)

    def __rmul__(self, other) -> "WittVector":
        if isinstance(other, int):
            return self.scale(other)
        return NotImplemented

    def scale(self, k: int) -> "WittVector":
        """k * v для k из Z/p^n через умножение на образ k в W_n(F_p)."""
        return WittVector.from_int(k, self.n, self.p) * self

    # --- операторы ---

    def frobenius(self) -> "WittVector":
        """F: покоординатная p-я степень."""
        return WittVector([_ppow(c, 1, self.p) for c in self.coords], self.p)

    def verschiebung(self) -> "WittVector":
        z = _zero_of(self.coords[0])
        return WittVector([z] + list(self.coords[:-1]), self.p)

    def wp(self) -> "WittVector":
        """℘ = F - id."""
        return self.frobenius() - self

    def truncate(self, m: int) -> "WittVector":
        if not 1 <= m <= self.n:
            raise ValueError(f"длина усечения {m} вне диапазона 1..{self.n}")
        return WittVector(self.coords[:m], self.p)

    def extend(self, n: int) -> "WittVector":
        """Дополняет нулями до длины n."""
        z = _zero_of(self.coords[0])
        return WittVector(list(self.coords) + [z] * (n - self.n), self.p)

    def map(self, func: Callable[[Any], Any]) -> "WittVector":
        """Применяет кольцевой гомоморфизм покоординатно."""
        return WittVector([func(c) for c in self.coords], self.p)

    def __eq__(self, other) -> bool:
        if not isinstance(other, WittVector):
            return NotImplemented
        if other.p != self.p or other.n != self.n:
            return False
        return all(_is_zero(a - b) for a, b in zip(self.coords, other.coords))

    def __hash__(self):
        return hash(self.coords)

    def __repr__(self) -> str:
        return "[" + ", ".join(str(c) for c in self.coords) + "]"


def witt_add(v: WittVector, w: WittVector) -> WittVector:
    return v + w


def witt_neg(v: WittVector) -> WittVector:
    return -v


def witt_mul(v: WittVector, w: WittVector) -> WittVector:
    return v * w


def witt_frobenius(v) -> WittVector:
    return v.frobenius()


def witt_verschiebung(v):
    return v.verschiebung()


def wp(v: WittVector) -> WittVector:
    return v.wp()


class IntegerWittVector:
    """
    Вектор Витта над Z; операции через призрачные компоненты
    с точным целочисленным делением.
    """

    __slots__ = ("p", "coords")

    def __init__(self, coords: Sequence[int], p: int):
        self.p = p
        self.coords = tuple(int(c) for c in coords)

    @property
    def n(self) -> int:
        return len(self.coords)

    def ghost(self) -> List[int]:
        p = self.p
        return [
            sum(p ** j * self.coords[j] ** (p ** (i - j)) for j in range(i + 1))
            for i in range(self.n)
        ]

    @classmethod
    def from_ghost(cls, ghosts: Sequence[int], p: int) -> "IntegerWittVector":
        coords: List[int] = []
        for i, w in enumerate(ghosts):
            rest = w - sum(p ** j * coords[j] ** (p ** (i - j)) for j in range(i))
            q, r = divmod(rest, p ** i)
            if r:
                raise ArithmeticError(f"призрачный вектор не из W(Z): остаток {r} в координате {i}")
            coords.append(q)
        return cls(coords, p)

    def _check(self, other: "IntegerWittVector") -> None:
        if other.p != self.p or other.n != self.n:
            raise ValueError("несовместимые векторы Витта над Z")

    def __add__(self, other: "IntegerWittVector") -> "IntegerWittVector":
        self._check(other)
        return IntegerWittVector.from_ghost([a + b for a, b in zip(self.ghost(), other.ghost())], self.p)

    def __neg__(self) -> "IntegerWittVector":
        return IntegerWittVector.from_ghost([-a for a in self.ghost()], self.p)

    def __sub__(self, other: "IntegerWittVector") -> "IntegerWittVector":
        return self + (-other)

    def __mul__(self, other: "IntegerWittVector") -> "IntegerWittVector":
        self._check(other)
        return IntegerWittVector.from_ghost([a * b for a, b in zip(self.ghost(), other.ghost())], self.p)

    def verschiebung(self) -> "IntegerWittVector":
        return IntegerWittVector((0,) + self.coords[:-1], self.p)

    def frobenius(self):
        raise ValueError("покоординатный Фробениус определён только в характеристике p")

    def reduce(self, field) -> WittVector:
        """Редукция по модулю p в W_n(F_p) (координаты - элементы поля field)."""
        return WittVector([field.from_int(c) for c in self.coords], self.p)

    def __eq__(self, other) -> bool:
        if not isinstance(other, IntegerWittVector):
            return NotImplemented
        return self.p == other.p and self.coords == other.coords

    def __hash__(self):
        return hash((self.p, self.coords))

    def __repr__(self) -> str:
        return "[" + ", ".join(str(c) for c in self.coords) + "]"
