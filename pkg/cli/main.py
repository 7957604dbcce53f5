import argparse
import logging
import sys
from typing import List, Optional

from cli.config import LOG_LEVEL
from cli.errors import InputError
from cli.handlers import EXIT_INPUT, handle
from formats.loader import validate
from formats.schemas import Command, JobSpec, OutputFormat

logger = logging.getLogger(__name__)


class ArgumentParser(argparse.ArgumentParser):
    """Ошибки разбора аргументов приводятся к InputError."""

    def error(self, message: str):
        raise InputError(f"{self.prog}: {message}")


def build_parser() -> argparse.ArgumentParser:
    parser = ArgumentParser(
        prog="asw",
        description="H^1_et(X, Z/p^n) кривых над конечными полями и башни Артина - Шрайера - Витта",
    )
    common = ArgumentParser(add_help=False)
    common.add_argument("--curve", help="JSON-файл кривой")
    common.add_argument("--hw", help="Матрица Хассе - Витта: JSON-строка или файл")
    common.add_argument("--n", type=int, default=1, help="Уровень n (по умолчанию 1)")
    common.add_argument("--out", help="Файл результата (по умолчанию stdout)")
    common.add_argument("--format", choices=[f.value for f in OutputFormat], default=OutputFormat.JSON.value)
    common.add_argument("--seed", type=int, help="Зерно выбора неприводимых модулей")
    common.add_argument("--max-degree", type=int, help="Предел степени расширения")
    common.add_argument("--verbose", action="store_true", help="Журналирование уровня DEBUG")

    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser(Command.H1.value, parents=[common], help="Базис H^1_et(X, Z/p^n)")
    sub.add_parser(Command.COVER.value, parents=[common], help="Уравнения максимального накрытия экспоненты p^n")
    sheaf = sub.add_parser(Command.SHEAF.value, parents=[common], help="Когомологии локально постоянного пучка")
    sheaf.add_argument("--sheaf", help="JSON-файл с автоморфизмами и модулем")
    sub.add_parser(Command.SELFTEST.value, parents=[common], help="Проверки на эталонных кривых")
    return parser


def parse_job(argv: Optional[List[str]] = None) -> JobSpec:
    args = vars(build_parser().parse_args(argv))
    data = {k: v for k, v in args.items() if v is not None}
    return validate(JobSpec, data, "аргументах командной строки")


def main(argv: Optional[List[str]] = None) -> int:
    try:
        job = parse_job(argv)
    except InputError as e:
        logging.basicConfig(level=logging.ERROR)
        logger.error(f"{e}")
        return EXIT_INPUT

    # Настройка логирования
    logging.basicConfig(
        level=logging.DEBUG if job.verbose else getattr(logging, LOG_LEVEL, logging.INFO),
        format='%(asctime)s - %(name)s - %(levelname)s - %(message)s'
    )
    return handle(job)


if __name__ == "__main__":
    sys.exit(main())
