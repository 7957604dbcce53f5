"""
Схемы входных файлов: кривая, точки, матрица Хассе - Витта, автоморфизмы и модуль пучка.
"""
from enum import Enum
from pathlib import Path
from typing import List, Optional, Union

from pydantic import BaseModel, Field, field_validator, model_validator
from sympy import isprime

from curves.model import CurveFamily

Entry = Union[int, str]


class Command(str, Enum):
    """Подкоманда CLI."""
    H1 = "h1"
    COVER = "cover"
    SHEAF = "sheaf"
    SELFTEST = "selftest"


class OutputFormat(str, Enum):
    """Формат вывода."""
    JSON = "json"
    TEXT = "text"


class PointSpec(BaseModel):
    """Точка модели кривой."""
    x: Optional[str] = Field(None, description="Координата x (целое или запись вида '2*z2 + 1')")
    y: Optional[str] = Field(None, description="Координата y")
    at_infinity: bool = Field(False, description="Бесконечно удалённая точка гиперэллиптической модели")
    uniformiser: Optional[str] = Field(None, description="Униформизатор (функция от x, y); по умолчанию выбирается картой")

    @field_validator("x", "y", mode="before")
    @classmethod
    def _coordinate_as_text(cls, value):
        return str(value) if isinstance(value, int) else value

    @model_validator(mode="after")
    def _check_coordinates(self):
        if self.at_infinity and (self.x is not None or self.y is not None):
            raise ValueError("у бесконечно удалённой точки не задаются координаты")
        if not self.at_infinity and (self.x is None or self.y is None):
            raise ValueError("у аффинной точки должны быть заданы обе координаты")
        return self


class CurveSpec(BaseModel):
    """Кривая с неспециальной системой точек и (необязательно) матрицей Хассе - Витта."""
    name: str = Field("", description="Имя кривой для отчётов")
    p: int = Field(description="Характеристика")
    base_degree: int = Field(1, ge=1, description="Степень поля констант над F_p")
    family: CurveFamily = Field(description="Семейство модели: hyperelliptic или smooth_plane")
    equation: str = Field(description="Уравнение, например 'y^2 = x^5 + x^2 + 1'")
    points: List[PointSpec] = Field(default_factory=list, description="Неспециальная система из g точек")
    hasse_witt: Optional[List[List[Entry]]] = Field(
        None, description="Матрица Хассе - Витта: столбец j - координаты F(b_j)"
    )
    check_smooth: bool = Field(True, description="Проверять гладкость плоской модели")
    expected_rank: Optional[int] = Field(None, ge=0, description="Ожидаемый ранг H^1_et для selftest")

    @field_validator("p")
    @classmethod
    def _check_prime(cls, value: int) -> int:
        if not isprime(value):
            raise ValueError(f"характеристика должна быть простым числом, получено: {value}")
        return value

    class Config:
        json_schema_extra = {
            "example": {
                "name": "genus2_f3",
                "p": 3,
                "family": "hyperelliptic",
                "equation": "y^2 = x^5 + x^2 + 1",
                "points": [{"x": "0", "y": "2"}, {"x": "2", "y": "2"}],
                "hasse_witt": [[1, 0], [0, 0]],
            }
        }


class HasseWittSpec(BaseModel):
    """Отдельный файл с матрицей Хассе - Витта."""
    matrix: List[List[Entry]] = Field(description="Столбец j - координаты F(b_j) в базисе (1/t_i) δ_{P_i}")


class AutomorphismSpec(BaseModel):
    """Автоморфизм поля функций, заданный образами координат."""
    name: str = Field("", description="Имя для отчётов")
    x: str = Field(description="Образ x")
    y: str = Field(description="Образ y")


class SheafModuleSpec(BaseModel):
    """M = (Z/p^n)^m / <relations> с действием образующих Aut(Y|X)."""
    generators: int = Field(ge=0, description="Число образующих m")
    relations: List[List[int]] = Field(default_factory=list, description="Соотношения Σ r_j e_j = 0")
    actions: List[List[List[int]]] = Field(
        default_factory=list, description="Матрицы m x m образующих: столбец j - образ e_j"
    )

    @model_validator(mode="after")
    def _check_shapes(self):
        m = self.generators
        for r in self.relations:
            if len(r) != m:
                raise ValueError(f"соотношение {r} должно иметь длину {m}")
        for a in self.actions:
            if len(a) != m or any(len(row) != m for row in a):
                raise ValueError(f"матрица действия должна иметь размер {m}x{m}")
        return self


class SheafSpec(BaseModel):
    """Данные пучка: образующие Aut(Y|X) и модуль M."""
    automorphisms: List[AutomorphismSpec] = Field(default_factory=list, description="Образующие Aut(Y|X)")
    module: SheafModuleSpec = Field(description="Модуль общего слоя")

    @model_validator(mode="after")
    def _check_actions(self):
        if len(self.module.actions) != len(self.automorphisms):
            raise ValueError(
                f"число матриц действия ({len(self.module.actions)}) не равно числу автоморфизмов ({len(self.automorphisms)})"
            )
        return self


class JobSpec(BaseModel):
    """Параметры одного запуска."""
    command: Command = Field(description="Подкоманда")
    curve: Optional[Path] = Field(None, description="Файл кривой (CurveSpec)")
    hw: Optional[str] = Field(None, description="Матрица Хассе - Витта: JSON-строка или путь к файлу")
    sheaf: Optional[Path] = Field(None, description="Файл пучка (SheafSpec)")
    n: int = Field(1, ge=1, description="Уровень n")
    out: Optional[Path] = Field(None, description="Файл результата; по умолчанию stdout")
    format: OutputFormat = Field(OutputFormat.JSON, description="Формат вывода")
    seed: Optional[int] = Field(None, description="Зерно выбора модулей полей")
    max_degree: Optional[int] = Field(None, ge=1, description="Предел степени расширения")
    verbose: bool = Field(False, description="Подробное журналирование")

    @model_validator(mode="after")
    def _check_inputs(self):
        if self.command in (Command.H1, Command.COVER, Command.SHEAF) and self.curve is None:
            raise ValueError(f"для команды {self.command.value} нужен файл кривой --curve")
        if self.command == Command.SHEAF and self.sheaf is None:
            raise ValueError("для команды sheaf нужен файл пучка --sheaf")
        return self
