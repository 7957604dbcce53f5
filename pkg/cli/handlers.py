import logging
from typing import Callable, Dict, List, Tuple

import numpy as np

from adeles.h1 import H1Basis, h1_basis_from_points
from cli.config import FIXTURES_DIR, SEED
from cli.errors import AswError, InconsistencyError, InputError
from covers.h1et import H1EtBasis, compute_h1_from_hw
from covers.tower import build_tower, tower_polynomials, universal_part
from curves.model import CurveModel
from fields.lattice import FieldElement, configure
from formats.loader import build_curve, load_curve_spec, load_hasse_witt, load_sheaf, parse_hasse_witt
from formats.schemas import Command, JobSpec, OutputFormat
from formats.serializers import (
    complex_to_dict,
    complex_to_text,
    dumps,
    h1_to_dict,
    h1_to_text,
    tower_to_dict,
    tower_to_text,
    write_output,
)
from sheaves.cohomology import compute_cohomology_complex
from sheaves.modules import SheafModule, format_invariants
from witt.vectors import IntegerWittVector

logger = logging.getLogger(__name__)

# Коды выхода
EXIT_OK = 0
EXIT_INPUT = 1
EXIT_INCONSISTENT = 2


def load_h1_inputs(job: JobSpec) -> Tuple[CurveModel, H1Basis, List[List[FieldElement]]]:
    """Кривая, базис H^1(X, O_X) и матрица Хассе - Витта из файлов задания."""
    spec = load_curve_spec(job.curve)
    curve, points = build_curve(spec)
    basis = h1_basis_from_points(curve, points)
    if job.hw is not None:
        matrix = load_hasse_witt(job.hw, curve.lattice)
    elif spec.hasse_witt is not None:
        matrix = parse_hasse_witt(spec.hasse_witt, curve.lattice)
    else:
        raise InputError("матрица Хассе - Витта не задана: используйте --hw или поле hasse_witt")
    return curve, basis, matrix


def compute_h1(job: JobSpec) -> H1EtBasis:
    curve, basis, matrix = load_h1_inputs(job)
    return compute_h1_from_hw(curve, job.n, basis, matrix)


def run_h1(job: JobSpec) -> str:
    h1 = compute_h1(job)
    return h1_to_text(h1) if job.format == OutputFormat.TEXT else dumps(h1_to_dict(h1))


def run_cover(job: JobSpec) -> str:
    tower = build_tower(compute_h1(job))
    return tower_to_text(tower) if job.format == OutputFormat.TEXT else dumps(tower_to_dict(tower))


def run_sheaf(job: JobSpec) -> str:
    h1 = compute_h1(job)
    automorphisms, module = load_sheaf(job.sheaf, h1.curve, job.n)
    cover, cx = compute_cohomology_complex(h1, automorphisms, module)
    return complex_to_text(cx) if job.format == OutputFormat.TEXT else dumps(complex_to_dict(cx, cover))


def _witt_oracle(samples: int = 20) -> List[str]:
    """Гомоморфность отображения призраков на случайных целочисленных векторах."""
    failures = []
    rng = np.random.default_rng(SEED)
    for p in (2, 3, 5):
        for n in range(1, 5):
            for _ in range(samples):
                a = IntegerWittVector([int(v) for v in rng.integers(0, p ** n, size=n)], p)
                b = IntegerWittVector([int(v) for v in rng.integers(0, p ** n, size=n)], p)
                if (a + b).ghost() != [x + y for x, y in zip(a.ghost(), b.ghost())]:
                    failures.append(f"ghost(a + b) при p={p}, n={n}")
                if (a * b).ghost() != [x * y for x, y in zip(a.ghost(), b.ghost())]:
                    failures.append(f"ghost(a * b) при p={p}, n={n}")
    return failures


def run_selftest(job: JobSpec) -> str:
    """
    Проверки на эталонных кривых каталога FIXTURES_DIR: ранг, ℘-сертификаты,
    согласованность H^1 тривиального пучка, а также тождества колец Витта.
    """
    lines, failures = [], _witt_oracle()
    universal = universal_part(tower_polynomials(3, 2)[1], 2)
    t0 = universal.ring.gens[0]
    if universal != -t0 ** 7 + t0 ** 5:
        failures.append(f"универсальная часть второго уравнения при p=3: {universal}")

    fixtures = sorted(FIXTURES_DIR.glob("*.json"))
    if not fixtures:
        raise InputError(f"в каталоге {FIXTURES_DIR} нет эталонных кривых")
    for path in fixtures:
        spec = load_curve_spec(path)
        curve, points = build_curve(spec)
        basis = h1_basis_from_points(curve, points)
        matrix = parse_hasse_witt(spec.hasse_witt or [], curve.lattice)
        try:
            h1 = compute_h1_from_hw(curve, job.n, basis, matrix)
        except InconsistencyError as e:
            failures.append(f"{path.name}: {e}")
            continue
        if spec.expected_rank is not None and h1.rank != spec.expected_rank:
            failures.append(f"{path.name}: ранг {h1.rank}, ожидался {spec.expected_rank}")
        if curve.p ** (job.n * h1.rank) <= 5 ** 3:
            module = SheafModule.trivial(curve.p, job.n, 0)
            _, cx = compute_cohomology_complex(h1, [], module)
            expected = [curve.p ** job.n] * h1.rank
            if cx.h1 != expected:
                failures.append(f"{path.name}: H^1 тривиального пучка {format_invariants(cx.h1)}")
        lines.append(f"{spec.name or path.stem}: H^1_et ≅ (Z/{curve.p ** job.n})^{h1.rank}")

    if failures:
        for f in failures:
            logger.error(f"selftest: {f}")
        raise InconsistencyError(f"selftest: {len(failures)} проверок не пройдено")
    lines.append("Все проверки пройдены")
    return "\n".join(lines)


HANDLERS: Dict[Command, Callable[[JobSpec], str]] = {
    Command.H1: run_h1,
    Command.COVER: run_cover,
    Command.SHEAF: run_sheaf,
    Command.SELFTEST: run_selftest,
}


def handle(job: JobSpec) -> int:
    """
    Выполняет задание и возвращает код выхода: 0 - успех, 1 - ошибка ввода,
    2 - математическая несогласованность.
    """
    configure(seed=job.seed, max_degree=job.max_degree)
    try:
        logger.info(f"Выполнение команды {job.command.value}, n = {job.n}")
        text = HANDLERS[job.command](job)
        write_output(text, job.out)
        return EXIT_OK
    except InputError as e:
        logger.error(f"Ошибка входных данных: {e}", exc_info=True)
        return EXIT_INPUT
    except AswError as e:
        logger.error(f"Вычисление не согласовано: {e}", exc_info=True)
        return EXIT_INCONSISTENT
    except (OSError, ValueError) as e:
        logger.error(f"Ошибка ввода-вывода или аргументов: {e}", exc_info=True)
        return EXIT_INPUT
