from dotenv import load_dotenv
from pathlib import Path
import os

load_dotenv()


def _int_setting(name: str, default: int) -> int:
    raw = os.getenv(name)
    if raw is None or raw == "":
        return default
    try:
        value = int(raw)
    except ValueError:
        raise ValueError(
            f"{name} должен быть целым числом, получено: {raw!r}. "
            f"Исправьте переменную окружения {name} в .env файле"
        )
    if value <= 0:
        raise ValueError(f"{name} должен быть положительным, получено: {value}")
    return value


# Предел степени расширения в решётке конечных полей
MAX_DEGREE = _int_setting("ASW_MAX_DEGREE", 1_000_000)

# Зерно для детерминированного выбора неприводимых модулей
SEED = _int_setting("ASW_SEED", 20251)

LOG_LEVEL = os.getenv("ASW_LOG_LEVEL", "INFO").upper()

# Точность локальных разложений (начальная и предельная)
INITIAL_PRECISION = _int_setting("ASW_INITIAL_PRECISION", 8)
MAX_PRECISION = _int_setting("ASW_MAX_PRECISION", 4096)

# Каталог с эталонными кривыми для selftest
FIXTURES_DIR = Path(
    os.getenv("ASW_FIXTURES_DIR", str(Path(__file__).resolve().parent.parent / "fixtures"))
)
