"""
Сериализация результатов в JSON и текст.

JSON выводится с сортировкой ключей, поэтому одинаковые входы дают побайтно
одинаковый результат.
"""
import json
import logging
from pathlib import Path
from typing import Any, Dict, List, Optional

from covers.h1et import H1EtBasis
from covers.tower import CoverTower, format_polynomial
from fields.lattice import format_element
from sheaves.automorphisms import CoverGroup
from sheaves.cohomology import CohomologyComplex
from sheaves.modules import format_invariants, group_order

logger = logging.getLogger(__name__)

# Порядок группы, до которого в JSON выводится полная таблица умножения
TABLE_OUTPUT_LIMIT = 64


def dumps(data: Any) -> str:
    return json.dumps(data, indent=2, sort_keys=True, ensure_ascii=False)


def h1_to_dict(h1: H1EtBasis) -> Dict[str, Any]:
    p, n = h1.curve.p, h1.level
    basis = []
    for i in range(h1.rank):
        basis.append({
            "index": i,
            "level_one": [format_element(c.lattice.descend(c)) for c in h1.level_one[i]],
            "representative": h1.representatives[i].terms(),
            "functions": [str(f) for f in h1.functions[i].coords],
        })
    return {
        "curve": repr(h1.curve),
        "p": p,
        "level": n,
        "rank": h1.rank,
        "group": f"(Z/{p ** n})^{h1.rank}",
        "support": [P.label for P in h1.S],
        "basis": basis,
    }


def tower_to_dict(tower: CoverTower) -> Dict[str, Any]:
    return {
        "p": tower.p,
        "level": tower.level,
        "rank": tower.rank,
        "degree": tower.degree,
        "equations": [
            {
                "branch": e.branch,
                "index": e.index,
                "equation": e.equation,
                "universal": format_polynomial(e.universal, tower.p),
            }
            for e in tower.equations
        ],
        "h1": h1_to_dict(tower.h1) if tower.h1 is not None else None,
    }


def complex_to_dict(cx: CohomologyComplex, cover: Optional[CoverGroup] = None) -> Dict[str, Any]:
    group = cx.group
    group_data: Dict[str, Any] = {
        "order": group.order,
        "generators": [str(group.elements[g]) for g in group.generators],
        "right_multiplication": group.right.tolist(),
        "abelian": group.is_abelian(),
    }
    if group.order <= TABLE_OUTPUT_LIMIT:
        group_data["elements"] = [str(e) for e in group.elements]
        group_data["table"] = group.table().tolist()
        group_data["words"] = [group.word(g) for g in range(group.order)]
    data: Dict[str, Any] = {
        "group": group_data,
        "module": {
            "invariants": cx.module.orders,
            "actions": [a.tolist() for a in cx.module.actions],
        },
        "crossed_homomorphisms": {
            "invariants": cx.crossed.invariants,
            "generators": cx.crossed.generators.T.tolist(),
        },
        "differential": cx.differential.tolist(),
        "H0": cx.h0,
        "H1": cx.h1,
    }
    if cover is not None:
        data["lifts"] = [
            {"automorphism": repr(tau), "images": lift.images()}
            for tau, lift in zip(cover.base, cover.lifts)
        ]
    return data


def h1_to_text(h1: H1EtBasis) -> str:
    p, n = h1.curve.p, h1.level
    lines = [f"H^1_et(X, Z/{p}^{n}) ≅ (Z/{p ** n})^{h1.rank}"]
    for i, r in enumerate(h1.representatives):
        lines.append(f"r^({i}) = {r}")
        lines.append(f"h^({i}) = {h1.functions[i]}")
    return "\n".join(lines)


def tower_to_text(tower: CoverTower) -> str:
    lines = [f"Накрытие степени {tower.p}^{tower.level * tower.rank}"]
    branch = None
    for e in tower.equations:
        if e.branch != branch:
            branch = e.branch
            lines.append(f"Ветвь {branch}:")
            if tower.h1 is not None:
                for k, f in enumerate(tower.h1.functions[branch].coords):
                    lines.append(f"  h_{k} = {f}")
        lines.append(f"  {e.equation}")
    return "\n".join(lines)


def complex_to_text(cx: CohomologyComplex) -> str:
    lines: List[str] = [
        f"|G| = {cx.group.order}",
        f"M ≅ {format_invariants(cx.module.orders)}",
        f"Hom_cr(G, M) ≅ {format_invariants(cx.crossed.invariants)}",
        f"H^0 ≅ {format_invariants(cx.h0)}",
        f"H^1 ≅ {format_invariants(cx.h1)} (порядок {group_order(cx.h1)})",
    ]
    return "\n".join(lines)


def write_output(text: str, out: Optional[Path]) -> None:
    """Пишет результат в файл или в stdout."""
    if out is None:
        print(text)
        return
    out.parent.mkdir(parents=True, exist_ok=True)
    out.write_text(text + "\n", encoding="utf-8")
    logger.info(f"Результат записан в {out}")
