"""
Плоские модели кривых над F_q, замкнутые точки и функции поля функций.

Многочлен от x, y хранится словарём {(i, j): коэффициент при x^i y^j}.
Функция - пара (числитель, знаменатель), приведённая по модулю уравнения
кривой до степени по y меньше deg_y модели.
"""
import logging
import re
from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, Iterable, List, Optional, Tuple, Union

import numpy as np
from sympy import Poly, Symbol, fraction, groebner, together
from sympy.parsing.sympy_parser import convert_xor, parse_expr, standard_transformations

from cli.errors import InputError
from fields.lattice import FieldElement, FieldLattice, format_element
from fields.polynomials import as_poly, poly_degree, poly_gcd, roots_of

logger = logging.getLogger(__name__)

BiPoly = Dict[Tuple[int, int], FieldElement]
Scalar = Union[int, FieldElement]


class CurveFamily(str, Enum):
    """Семейство плоской модели."""
    HYPERELLIPTIC = "hyperelliptic"
    SMOOTH_PLANE = "smooth_plane"


# --- двумерные многочлены ---

def bipoly_clean(poly: BiPoly) -> BiPoly:
    return {k: c for k, c in poly.items() if not c.is_zero()}


def bipoly_add(a: BiPoly, b: BiPoly) -> BiPoly:
    out = dict(a)
    for k, c in b.items():
        out[k] = out[k] + c if k in out else c
    return bipoly_clean(out)


def bipoly_neg(a: BiPoly) -> BiPoly:
    return {k: -c for k, c in a.items()}


def bipoly_sub(a: BiPoly, b: BiPoly) -> BiPoly:
    return bipoly_add(a, bipoly_neg(b))


def bipoly_scale(a: BiPoly, c: FieldElement) -> BiPoly:
    return bipoly_clean({k: v * c for k, v in a.items()})


def bipoly_mul(a: BiPoly, b: BiPoly) -> BiPoly:
    out: BiPoly = {}
    for (i1, j1), c1 in a.items():
        for (i2, j2), c2 in b.items():
            k = (i1 + i2, j1 + j2)
            out[k] = out[k] + c1 * c2 if k in out else c1 * c2
    return bipoly_clean(out)


def bipoly_derivative(a: BiPoly, var: int) -> BiPoly:
    """Частная производная по x (var=0) или y (var=1)."""
    out: BiPoly = {}
    for (i, j), c in a.items():
        e = (i, j)[var]
        if e == 0:
            continue
        k = (i - 1, j) if var == 0 else (i, j - 1)
        out[k] = c * e
    return bipoly_clean(out)


def bipoly_total_degree(a: BiPoly) -> int:
    return max((i + j for i, j in a), default=-1)


def bipoly_equal(a: BiPoly, b: BiPoly) -> bool:
    return not bipoly_sub(a, b)


def bipoly_evaluate(a: BiPoly, x, y, one):
    """Σ c x^i y^j для элементов любого кольца (элементы поля, ряды, функции)."""
    if not a:
        return one * 0
    max_i = max(i for i, _ in a)
    max_j = max(j for _, j in a)
    xp = [one]
    for _ in range(max_i):
        xp.append(xp[-1] * x)
    yp = [one]
    for _ in range(max_j):
        yp.append(yp[-1] * y)
    acc = None
    for (i, j), c in sorted(a.items()):
        term = xp[i] * yp[j] * c
        acc = term if acc is None else acc + term
    return acc


def bipoly_frobenius(a: BiPoly, e: int, p: int) -> BiPoly:
    """a^{p^e}: коэффициенты через Фробениус, показатели умножаются на p^e."""
    step = p ** e
    return {(i * step, j * step): c.frobenius(e) for (i, j), c in a.items()}


def format_bipoly(a: BiPoly) -> str:
    """Запись вида 'x^2*y + 2*x + 1': мономы по убыванию полной степени, затем степени x."""
    if not a:
        return "0"
    terms = []
    for (i, j), c in sorted(a.items(), key=lambda kv: (-(kv[0][0] + kv[0][1]), -kv[0][0])):
        parts = []
        if i:
            parts.append("x" if i == 1 else f"x^{i}")
        if j:
            parts.append("y" if j == 1 else f"y^{j}")
        coeff = format_element(c)
        if " " in coeff:
            coeff = f"({coeff})"
        if not parts:
            terms.append(coeff)
        elif coeff == "1":
            terms.append("*".join(parts))
        else:
            terms.append("*".join([coeff] + parts))
    return " + ".join(terms)


def _needs_parens(a: BiPoly) -> bool:
    return len(a) > 1


# --- разбор записи многочленов ---

_Z_RE = re.compile(r"\bz(\d+)\b")


def parse_rational(text: str, lattice: FieldLattice) -> Tuple[BiPoly, BiPoly]:
    """
    Разбирает запись рациональной функции от x, y с коэффициентами из решётки.

    Args:
        text: Например '2/(x + 1)', 'y^2 - x^5 - x^2 - 1' или 'y^2 = x^3 - x'
        lattice: Решётка полей характеристики p

    Returns:
        (числитель, знаменатель)
    """
    if text.count("=") > 1:
        raise InputError(f"в записи {text!r} больше одного знака '='")
    if "=" in text:
        lhs, rhs = text.split("=")
        text = f"({lhs}) - ({rhs})"
    X, Y = Symbol("x"), Symbol("y")
    zs = {f"z{m}": Symbol(f"z{m}") for m in _Z_RE.findall(text)}
    local = {"x": X, "y": Y, **zs}
    try:
        expr = parse_expr(text, local_dict=local, transformations=standard_transformations + (convert_xor,))
    except Exception as e:
        raise InputError(f"не удалось разобрать выражение {text!r}: {e}") from e
    num, den = fraction(together(expr))
    gens = [X, Y] + list(zs.values())
    return _to_bipoly(num, gens, lattice, text), _to_bipoly(den, gens, lattice, text)


def _to_bipoly(expr, gens, lattice: FieldLattice, text: str) -> BiPoly:
    p = lattice.p
    try:
        poly = Poly(expr, *gens)
    except Exception as e:
        raise InputError(f"выражение {text!r} не является многочленом: {e}") from e
    z_fields = [lattice.field(int(str(g)[1:])) for g in gens[2:]]
    out: BiPoly = {}
    base = lattice.field(1)
    for monom, coeff in poly.terms():
        num, den = int(coeff.p), int(coeff.q)
        if den % p == 0:
            raise InputError(f"знаменатель {den} делится на характеристику в {text!r}")
        value = base.from_int(num * pow(den, -1, p))
        for zf, e in zip(z_fields, monom[2:]):
            if e:
                value = value * zf.gen() ** int(e)
        key = (int(monom[0]), int(monom[1]))
        out[key] = out[key] + value if key in out else value
    return bipoly_clean(out)


# --- кривая ---

class CurveModel:
    """
    Плоская модель F(x, y) = 0 над F_q, q = p^base_degree.

    Коэффициент при y^{deg_y} обязан быть ненулевой константой: по нему
    функции приводятся к степени по y меньше deg_y.
    """

    def __init__(
        self,
        lattice: FieldLattice,
        equation: BiPoly,
        family: CurveFamily,
        base_degree: int = 1,
        check_smooth: bool = True,
    ):
        self.lattice = lattice
        self.p = lattice.p
        self.base_degree = base_degree
        self.q = self.p ** base_degree
        self.family = CurveFamily(family)
        self.equation = bipoly_clean(dict(equation))
        if not self.equation:
            raise InputError("уравнение кривой нулевое")
        for c in self.equation.values():
            if base_degree % lattice.descend(c).degree:
                raise InputError(f"коэффициент {c} не лежит в GF({self.q})")
        self.degree = bipoly_total_degree(self.equation)
        self.deg_y = max(j for _, j in self.equation)
        lead = [(i, c) for (i, j), c in self.equation.items() if j == self.deg_y]
        if len(lead) != 1 or lead[0][0] != 0:
            raise InputError("коэффициент при старшей степени y должен быть ненулевой константой")
        self._lead_inv = lead[0][1].inverse()
        self.charts: Dict = {}
        self.fx = bipoly_derivative(self.equation, 0)
        self.fy = bipoly_derivative(self.equation, 1)
        if self.family == CurveFamily.HYPERELLIPTIC:
            self.genus = self._check_hyperelliptic()
        else:
            self.genus = (self.degree - 1) * (self.degree - 2) // 2
            if check_smooth:
                self._check_smooth_plane()
        logger.info(
            f"Кривая {format_bipoly(self.equation)} = 0 над GF({self.q}): "
            f"семейство {self.family.value}, род {self.genus}"
        )

    # --- проверки ---

    def _check_hyperelliptic(self) -> int:
        if self.p == 2:
            raise InputError("гиперэллиптическая модель y^2 = f(x) требует p != 2")
        if self.deg_y != 2 or any(j == 1 for _, j in self.equation):
            raise InputError("гиперэллиптическая модель должна иметь вид c*y^2 - f(x)")
        f = self.hyperelliptic_f()
        deg = max(f)
        if deg % 2 == 0:
            raise InputError(f"степень f должна быть нечётной, получено: {deg}")
        field = self.lattice.field(self.base_degree)
        coeffs = [f.get(i, field.zero()) for i in range(deg + 1)]
        A = as_poly(field, coeffs)
        dA = as_poly(field, [coeffs[i] * i for i in range(1, deg + 1)])
        if poly_degree(poly_gcd(field, A, dA)) > 0:
            raise InputError("многочлен f(x) не свободен от квадратов: кривая особая")
        return (deg - 1) // 2

    def hyperelliptic_f(self) -> Dict[int, FieldElement]:
        """f(x) из y^2 = f(x) (после деления на коэффициент при y^2)."""
        return {i: -(c * self._lead_inv) for (i, j), c in self.equation.items() if j == 0}

    def _check_smooth_plane(self) -> None:
        if any(self.lattice.descend(c).degree != 1 for c in self.equation.values()):
            logger.warning("Коэффициенты модели не из простого поля: проверка гладкости пропущена")
            return
        X, Y, Z = Symbol("x"), Symbol("y"), Symbol("z")
        d = self.degree
        F = sum(int(c.vec[0]) * X ** i * Y ** j * Z ** (d - i - j) for (i, j), c in self.equation.items())
        partials = [F.diff(v) for v in (X, Y, Z)]
        for chart, rest in ((Z, (X, Y)), (Y, (X, Z)), (X, (Y, Z))):
            system = [e.subs(chart, 1) for e in [F] + partials]
            G = groebner(system, *rest, modulus=self.p, order="grevlex")
            if list(G.exprs) != [1]:
                raise InputError(f"плоская модель имеет особую точку (карта {chart} = 1)")
        logger.debug("Сертификат гладкости плоской модели получен")

    # --- приведение ---

    def reduce(self, poly: BiPoly) -> BiPoly:
        """Приведение по модулю уравнения до степени по y меньше deg_y."""
        poly = bipoly_clean(dict(poly))
        d = self.deg_y
        rest = {k: -(c * self._lead_inv) for k, c in self.equation.items() if k[1] < d}
        while True:
            high = [k for k in poly if k[1] >= d]
            if not high:
                return poly
            top = max(k[1] for k in high)
            out = {k: c for k, c in poly.items() if k[1] != top}
            for (i, j), c in poly.items():
                if j != top:
                    continue
                for (a, b), r in rest.items():
                    key = (i + a, j - d + b)
                    val = c * r
                    out[key] = out[key] + val if key in out else val
            poly = bipoly_clean(out)

    def contains(self, x: FieldElement, y: FieldElement) -> bool:
        return bipoly_evaluate(self.equation, x, y, x.field.one()).is_zero()

    # --- функции ---

    def function(self, num: BiPoly, den: Optional[BiPoly] = None) -> "CurveFunction":
        return CurveFunction(self, num, den)

    def constant(self, c: Scalar) -> "CurveFunction":
        if isinstance(c, int):
            c = self.lattice.field(1).from_int(c)
        return CurveFunction(self, {(0, 0): c})

    def x(self) -> "CurveFunction":
        return CurveFunction(self, {(1, 0): self.lattice.field(1).one()})

    def y(self) -> "CurveFunction":
        return CurveFunction(self, {(0, 1): self.lattice.field(1).one()})

    def parse_function(self, text: str) -> "CurveFunction":
        num, den = parse_rational(text, self.lattice)
        if not den:
            raise InputError(f"нулевой знаменатель в {text!r}")
        return CurveFunction(self, num, den)

    def __repr__(self) -> str:
        return f"CurveModel({format_bipoly(self.equation)} = 0 над GF({self.q}))"


@dataclass(frozen=True)
class ClosedPoint:
    """
    Геометрическая точка модели: аффинная (x, y) или бесконечно удалённая
    точка гиперэллиптической кривой. Униформизатор по умолчанию выбирает карта.
    """
    x: Optional[FieldElement] = None
    y: Optional[FieldElement] = None
    at_infinity: bool = False
    uniformiser: Optional["CurveFunction"] = field(default=None, compare=False, hash=False)

    @classmethod
    def infinity(cls) -> "ClosedPoint":
        return cls(at_infinity=True)

    @property
    def label(self) -> str:
        if self.at_infinity:
            return "infinity"
        return f"({self.x}, {self.y})"

    def sort_key(self) -> Tuple:
        if self.at_infinity:
            return (1,)
        x = self.x.lattice.descend(self.x)
        y = self.y.lattice.descend(self.y)
        return (0, max(x.degree, y.degree), x.degree, x.key(), y.degree, y.key())

    def __repr__(self) -> str:
        return self.label


def sorted_points(points: Iterable[ClosedPoint]) -> List[ClosedPoint]:
    return sorted(points, key=lambda P: P.sort_key())


class CurveFunction:
    """Элемент поля функций кривой: num / den по модулю уравнения."""

    __slots__ = ("curve", "num", "den")

    def __init__(self, curve: CurveModel, num: BiPoly, den: Optional[BiPoly] = None):
        self.curve = curve
        one = curve.lattice.field(1).one()
        num = curve.reduce(num)
        den = curve.reduce(den) if den is not None else {(0, 0): one}
        if not den:
            raise ZeroDivisionError("знаменатель функции тождественно равен нулю на кривой")
        if not num:
            den = {(0, 0): one}
        else:
            # Старший коэффициент знаменателя нормируется в 1
            key = max(den, key=lambda k: (k[0] + k[1], k[0]))
            inv = den[key].inverse()
            if not den[key].is_one():
                num = bipoly_scale(num, inv)
                den = bipoly_scale(den, inv)
        self.num = num
        self.den = den

    @property
    def lattice(self) -> FieldLattice:
        return self.curve.lattice

    def _lift(self, other) -> Optional["CurveFunction"]:
        if isinstance(other, CurveFunction):
            return other
        if isinstance(other, (int, FieldElement)):
            return self.curve.constant(other)
        return None

    def is_zero(self) -> bool:
        return not self.num

    def is_constant(self) -> bool:
        return set(self.num) <= {(0, 0)} and set(self.den) == {(0, 0)}

    def __add__(self, other) -> "CurveFunction":
        other = self._lift(other)
        if other is None:
            return NotImplemented
        if bipoly_equal(self.den, other.den):
            return CurveFunction(self.curve, bipoly_add(self.num, other.num), self.den)
        num = bipoly_add(bipoly_mul(self.num, other.den), bipoly_mul(other.num, self.den))
        return CurveFunction(self.curve, num, bipoly_mul(self.den, other.den))

    __radd__ = __add__

    def __neg__(self) -> "CurveFunction":
        return CurveFunction(self.curve, bipoly_neg(self.num), self.den)

    def __sub__(self, other) -> "CurveFunction":
        other = self._lift(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other) -> "CurveFunction":
        return (-self) + other

    def __mul__(self, other) -> "CurveFunction":
        if isinstance(other, int):
            other = self.lattice.field(1).from_int(other)
        if isinstance(other, FieldElement):
            return CurveFunction(self.curve, bipoly_scale(self.num, other), self.den)
        if not isinstance(other, CurveFunction):
            return NotImplemented
        return CurveFunction(self.curve, bipoly_mul(self.num, other.num), bipoly_mul(self.den, other.den))

    __rmul__ = __mul__

    def inverse(self) -> "CurveFunction":
        if self.is_zero():
            raise ZeroDivisionError("обращение нулевой функции")
        return CurveFunction(self.curve, self.den, self.num)

    def __truediv__(self, other) -> "CurveFunction":
        other = self._lift(other)
        if other is None:
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other) -> "CurveFunction":
        return self._lift(other) * self.inverse()

    def __pow__(self, k: int) -> "CurveFunction":
        if k < 0:
            return self.inverse() ** (-k)
        result = self.curve.constant(1)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def frobenius(self, e: int = 1) -> "CurveFunction":
        """f^{p^e}."""
        p = self.curve.p
        return CurveFunction(self.curve, bipoly_frobenius(self.num, e, p), bipoly_frobenius(self.den, e, p))

    def substitute(self, x_image: "CurveFunction", y_image: "CurveFunction") -> "CurveFunction":
        """f(x_image, y_image) - обратный образ при отображении кривой."""
        one = self.curve.constant(1)
        return bipoly_evaluate(self.num, x_image, y_image, one) / bipoly_evaluate(self.den, x_image, y_image, one)

    def __eq__(self, other) -> bool:
        other = self._lift(other)
        if other is None:
            return NotImplemented
        cross = bipoly_sub(bipoly_mul(self.num, other.den), bipoly_mul(other.num, self.den))
        return not self.curve.reduce(cross)

    __hash__ = None

    def __repr__(self) -> str:
        num = format_bipoly(self.num)
        if set(self.den) == {(0, 0)} and self.den[(0, 0)].is_one():
            return num
        den = format_bipoly(self.den)
        if _needs_parens(self.num):
            num = f"({num})"
        if _needs_parens(self.den) or " " in den:
            den = f"({den})"
        return f"{num}/{den}"

    __str__ = __repr__


def equation_coefficients_in_y(curve: CurveModel, x0: FieldElement) -> List[FieldElement]:
    """Коэффициенты F(x0, Y) по возрастанию степени Y."""
    zero = x0.field.zero()
    coeffs = [zero] * (curve.deg_y + 1)
    for (i, j), c in curve.equation.items():
        coeffs[j] = coeffs[j] + c * x0 ** i
    return coeffs


def as_array_poly(curve: CurveModel, coeffs: List[FieldElement]) -> np.ndarray:
    m = curve.lattice.common_degree(coeffs)
    return as_poly(curve.lattice.field(m), coeffs)


def fibre_points(curve: CurveModel, c: FieldElement) -> List[ClosedPoint]:
    """Аффинные точки кривой с x = c (корни F(c, Y) в поле разложения)."""
    m = curve.lattice.common_degree([c] + list(curve.equation.values()))
    c = curve.lattice.embed(c, m)
    coeffs = equation_coefficients_in_y(curve, c)
    roots = roots_of(coeffs, curve.lattice.field(m))
    return [ClosedPoint(curve.lattice.descend(c), curve.lattice.descend(y)) for y in roots]
