"""
Иерархия исключений конвейера.

InputError соответствует коду выхода 1, InconsistencyError и его потомки - коду 2.
"""


class AswError(Exception):
    """Базовая ошибка вычислений."""


class InputError(AswError):
    """Ошибка чтения или разбора входных данных."""


class InconsistencyError(AswError):
    """Математическая несогласованность входных данных или промежуточных результатов."""


class DegreeCapError(InconsistencyError):
    """Степень расширения превысила настроенный предел."""


class PoleGrowthError(InconsistencyError):
    """Порядок полюса превысил теоретическую оценку."""


class PrecisionError(AswError):
    """Не удалось достичь нужной точности локального разложения."""
