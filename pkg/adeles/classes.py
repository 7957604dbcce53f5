"""
Классы аделей по модулю всюду регулярных аделей.

Адель хранится конечным набором компонент {P: ряд Лорана в униформизаторе P};
в остальных точках компонента равна нулю. Компоненты - точные (конечные суммы
Лорана) или усечённые ряды; для класса в H^1(X, O_X) существенны только
главные части.
"""
import logging
from typing import Dict, Iterable, List, Optional, Union

from curves.local import local_chart
from curves.model import ClosedPoint, CurveFunction, CurveModel, sorted_points
from curves.series import LaurentSeries
from fields.lattice import FieldElement, format_element

logger = logging.getLogger(__name__)


class AdeleClass:
    """Адель r = (r_P)_P с конечным носителем."""

    __slots__ = ("curve", "entries")

    def __init__(self, curve: CurveModel, entries: Optional[Dict[ClosedPoint, LaurentSeries]] = None):
        self.curve = curve
        self.entries: Dict[ClosedPoint, LaurentSeries] = {}
        for P, s in (entries or {}).items():
            if not s.is_zero():
                self.entries[P] = s

    # --- конструкторы ---

    @classmethod
    def zero(cls, curve: CurveModel) -> "AdeleClass":
        return cls(curve)

    @classmethod
    def delta(cls, curve: CurveModel, point: ClosedPoint, value: Union[LaurentSeries, CurveFunction], prec: int = 0) -> "AdeleClass":
        """value * δ_P: адель, равная value в P и нулю в остальных точках."""
        if isinstance(value, CurveFunction):
            value = local_chart(curve, point).expand(value, prec)
        return cls(curve, {point: value})

    @classmethod
    def from_principal_parts(cls, curve: CurveModel, parts: Dict[ClosedPoint, List[FieldElement]]) -> "AdeleClass":
        """Адель Σ_P Σ_k c_k t_P^{-k} по спискам (c_{-s}, ..., c_{-1})."""
        entries = {}
        for P, coeffs in parts.items():
            field = local_chart(curve, P).field
            entries[P] = LaurentSeries.from_coefficients(field, -len(coeffs), list(coeffs)) if coeffs else LaurentSeries.zero(field)
        return cls(curve, entries)

    # --- доступ ---

    def support(self) -> List[ClosedPoint]:
        return sorted_points(self.entries)

    def __getitem__(self, point: ClosedPoint) -> LaurentSeries:
        s = self.entries.get(point)
        if s is None:
            return LaurentSeries.zero(local_chart(self.curve, point).field)
        return s

    def pole_order(self, point: ClosedPoint) -> int:
        """max(0, -v_P(r_P))."""
        s = self.entries.get(point)
        if s is None:
            return 0
        s.is_regular()
        return max(0, -s.valuation)

    def principal_part(self, point: ClosedPoint, s: int) -> List[FieldElement]:
        return self[point].principal_part(s)

    def is_regular(self, points: Optional[Iterable[ClosedPoint]] = None) -> bool:
        """Все компоненты (в points или во всём носителе) без полюсов."""
        pts = self.entries if points is None else points
        return all(self[P].is_regular() for P in pts)

    def normalized(self) -> "AdeleClass":
        """Тот же класс без регулярных компонент."""
        return AdeleClass(self.curve, {P: s for P, s in self.entries.items() if not (s.prec >= 0 and s.valuation >= 0)})

    # --- арифметика ---

    def _combine(self, other: "AdeleClass", op) -> "AdeleClass":
        points = set(self.entries) | set(other.entries)
        return AdeleClass(self.curve, {P: op(self[P], other[P]) for P in points})

    def __add__(self, other: "AdeleClass") -> "AdeleClass":
        return self._combine(other, lambda a, b: a + b)

    def __sub__(self, other: "AdeleClass") -> "AdeleClass":
        return self._combine(other, lambda a, b: a - b)

    def __neg__(self) -> "AdeleClass":
        return AdeleClass(self.curve, {P: -s for P, s in self.entries.items()})

    def scale(self, c: Union[int, FieldElement]) -> "AdeleClass":
        return AdeleClass(self.curve, {P: s.scale(c) for P, s in self.entries.items()})

    def __mul__(self, other):
        if isinstance(other, (int, FieldElement)):
            return self.scale(other)
        if isinstance(other, AdeleClass):
            return self._combine(other, lambda a, b: a * b)
        return NotImplemented

    __rmul__ = __mul__

    def frobenius(self, e: int = 1) -> "AdeleClass":
        """Покомпонентное возведение в степень p^e."""
        return AdeleClass(self.curve, {P: s.frobenius(e) for P, s in self.entries.items()})

    def restrict(self, points: Iterable[ClosedPoint]) -> "AdeleClass":
        keep = set(points)
        return AdeleClass(self.curve, {P: s for P, s in self.entries.items() if P in keep})

    def __eq__(self, other) -> bool:
        """Покомпонентное равенство рядов (а не равенство классов)."""
        if not isinstance(other, AdeleClass):
            return NotImplemented
        return all(self[P] == other[P] for P in set(self.entries) | set(other.entries))

    __hash__ = None

    # --- запись ---

    def terms(self) -> List[Dict[str, str]]:
        """Главные части в виде [{'point': ..., 'function': ...}] в порядке точек."""
        out = []
        for P in self.support():
            text = format_principal_part(self.curve, P, self.entries[P])
            if text != "0":
                out.append({"point": P.label, "function": text})
        return out

    def __repr__(self) -> str:
        parts = [f"({t['function']})δ_{t['point']}" for t in self.terms()]
        return " + ".join(parts) if parts else "0"


def format_principal_part(curve: CurveModel, point: ClosedPoint, series: LaurentSeries) -> str:
    """Главная часть ряда как Σ c / u^k с униформизатором u точки, например '2/(x + 1)'."""
    u = str(local_chart(curve, point).uniformiser())
    if " " in u or "/" in u:
        u = f"({u})"
    terms = []
    for k in range(series.valuation, 0):
        c = series.coefficient(k)
        if c.is_zero():
            continue
        c = c.lattice.descend(c)
        coeff = format_element(c)
        if " " in coeff:
            coeff = f"({coeff})"
        denom = u if k == -1 else f"{u}^{-k}"
        terms.append(f"{coeff}/{denom}")
    return " + ".join(terms) if terms else "0"
