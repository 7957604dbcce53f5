"""
Загрузка входных файлов и построение объектов предметной области.

Ошибки чтения и валидации pydantic приводятся к InputError.
"""
import json
import logging
from pathlib import Path
from typing import Any, List, Optional, Sequence, Tuple, Type, TypeVar, Union

from pydantic import BaseModel, ValidationError

from cli.errors import InputError
from curves.model import ClosedPoint, CurveModel, parse_rational
from fields.lattice import FieldElement, FieldLattice, get_lattice, parse_element
from formats.schemas import CurveSpec, Entry, HasseWittSpec, SheafSpec
from sheaves.automorphisms import CurveAutomorphism
from sheaves.modules import SheafModule

logger = logging.getLogger(__name__)

M = TypeVar("M", bound=BaseModel)


def read_json(path: Path) -> Any:
    """
    Читает JSON-файл.

    Raises:
        InputError: Если файл не читается или не является JSON
    """
    try:
        with open(path, "r", encoding="utf-8") as f:
            return json.load(f)
    except OSError as e:
        raise InputError(f"не удалось прочитать {path}: {e}") from e
    except json.JSONDecodeError as e:
        raise InputError(f"файл {path} не является корректным JSON: {e}") from e


def validate(model: Type[M], data: Any, source: str) -> M:
    try:
        return model.model_validate(data)
    except ValidationError as e:
        raise InputError(f"некорректные данные в {source}: {e}") from e


def load_curve_spec(path: Path) -> CurveSpec:
    spec = validate(CurveSpec, read_json(path), str(path))
    logger.info(f"Загружена кривая {spec.name or path.name}: {spec.equation} над GF({spec.p}^{spec.base_degree})")
    return spec


def build_curve(spec: CurveSpec, lattice: Optional[FieldLattice] = None) -> Tuple[CurveModel, List[ClosedPoint]]:
    """
    Модель кривой и точки неспециальной системы по описанию.

    Args:
        spec: Описание кривой
        lattice: Решётка полей (по умолчанию глобальная для p)

    Returns:
        (кривая, точки)
    """
    lattice = lattice or get_lattice(spec.p)
    num, den = parse_rational(spec.equation, lattice)
    if set(den) != {(0, 0)}:
        raise InputError(f"уравнение {spec.equation!r} должно быть многочленом")
    num = {k: c / den[(0, 0)] for k, c in num.items()}
    curve = CurveModel(lattice, num, spec.family, spec.base_degree, check_smooth=spec.check_smooth)
    points = [build_point(curve, p) for p in spec.points]
    return curve, points


def build_point(curve: CurveModel, spec) -> ClosedPoint:
    uniformiser = curve.parse_function(spec.uniformiser) if spec.uniformiser else None
    if spec.at_infinity:
        return ClosedPoint(at_infinity=True, uniformiser=uniformiser)
    lattice = curve.lattice
    x = lattice.descend(parse_element(spec.x, lattice))
    y = lattice.descend(parse_element(spec.y, lattice))
    if not curve.contains(x, y):
        raise InputError(f"точка ({spec.x}, {spec.y}) не лежит на кривой")
    return ClosedPoint(x, y, uniformiser=uniformiser)


def parse_matrix(rows: Sequence[Sequence[Entry]], lattice: FieldLattice) -> List[List[FieldElement]]:
    return [[parse_element(str(e), lattice) for e in row] for row in rows]


def parse_hasse_witt(rows: Sequence[Sequence[Entry]], lattice: FieldLattice) -> List[List[FieldElement]]:
    """
    Матрица Хассе - Витта во входном соглашении: столбец j - координаты F(b_j),
    F(Σ λ_i b_i) = (b_1, ..., b_g) · HW · (λ_i^p).

    Args:
        rows: Строки матрицы из входного файла или --hw
        lattice: Решётка полей

    Returns:
        Транспонированная матрица: строка i - координаты F(b_i)
    """
    matrix = parse_matrix(rows, lattice)
    g = len(matrix)
    if any(len(row) != g for row in matrix):
        raise InputError(f"матрица Хассе - Витта должна быть квадратной, длины строк: {[len(r) for r in matrix]}")
    return [list(column) for column in zip(*matrix)]


def load_hasse_witt(source: Union[str, Path], lattice: FieldLattice) -> List[List[FieldElement]]:
    """
    Матрица Хассе - Витта из JSON-строки ('[[1, 0], [0, 0]]') или файла
    (список строк или объект {"matrix": ...}).
    """
    path = Path(source)
    if path.suffix == ".json" or path.exists():
        data = read_json(path)
        label = str(path)
    else:
        try:
            data = json.loads(str(source))
        except json.JSONDecodeError as e:
            raise InputError(f"матрица Хассе - Витта {source!r} не является JSON: {e}") from e
        label = "--hw"
    if isinstance(data, list):
        data = {"matrix": data}
    spec = validate(HasseWittSpec, data, label)
    return parse_hasse_witt(spec.matrix, lattice)


def load_sheaf(path: Path, curve: CurveModel, n: int) -> Tuple[List[CurveAutomorphism], SheafModule]:
    """
    Образующие Aut(Y|X) и модуль пучка из файла SheafSpec.

    Args:
        path: Файл пучка
        curve: Кривая Y
        n: Уровень

    Returns:
        (автоморфизмы, модуль)
    """
    spec = validate(SheafSpec, read_json(path), str(path))
    automorphisms = [CurveAutomorphism.parse(curve, a.x, a.y, a.name) for a in spec.automorphisms]
    m = spec.module
    module = SheafModule.from_presentation(curve.p, n, m.generators, m.relations, m.actions)
    return automorphisms, module
