"""JSON law and module files.

Rationals are written as strings (``"-3/2"``, ``"5"``) so no value ever
passes through a binary float.

Law file::

    {"format": "leibcoh-law", "version": 1, "dim": 3, "labels": ["e", "h", "f"],
     "brackets": [{"i": 0, "j": 2, "terms": [{"k": 1, "c": "1"}]}, ...],
     "meta": {...}}

Module file::

    {"format": "leibcoh-module", "version": 1, "dim_m": 3,
     "law": "sl2.json" | {law object},
     "left": [[[row, col, "c"], ...] per basis element], "right": [...]}
"""

from __future__ import annotations

import json
import os
from fractions import Fraction
from typing import Any

from .algebra import AlgebraLaw
from .bimodules import Bimodule, check_bimodule
from .errors import BadModule, LeibcohError
from .linalg import SparseMat, as_rational, norm_scalar

LAW_FORMAT = "leibcoh-law"
MODULE_FORMAT = "leibcoh-module"
VERSION = 1


class FormatError(LeibcohError):
    pass


def rational_str(x) -> str:
    return str(Fraction(x))


def parse_rational(s) -> object:
    if isinstance(s, bool) or isinstance(s, float):
        raise FormatError(f"rational must be a string or integer, got {s!r}")
    try:
        return norm_scalar(as_rational(s))
    except (ValueError, TypeError, ZeroDivisionError) as exc:
        raise FormatError(f"bad rational {s!r}") from exc


def law_to_dict(mu: AlgebraLaw) -> dict[str, Any]:
    brackets = []
    for (i, j), terms in sorted(mu.table().items()):
        brackets.append({"i": i, "j": j, "terms": [{"k": k, "c": rational_str(c)} for k, c in sorted(terms.items())]})
    return {"format": LAW_FORMAT, "version": VERSION, "dim": mu.dim, "labels": list(mu.labels),
            "brackets": brackets, "meta": _jsonable(mu.meta)}


def _jsonable(x):
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, Fraction):
        return rational_str(x)
    return x


def law_from_dict(d: dict) -> AlgebraLaw:
    try:
        if d.get("format") != LAW_FORMAT:
            raise FormatError("not a law file")
        dim = int(d["dim"])
        table: dict[tuple[int, int], dict[int, object]] = {}
        for b in d["brackets"]:
            key = (int(b["i"]), int(b["j"]))
            if key in table:
                raise FormatError(f"duplicate bracket {key}")
            terms = {}
            for t in b["terms"]:
                k = int(t["k"])
                if k in terms:
                    raise FormatError(f"duplicate output index {k} in bracket {key}")
                terms[k] = parse_rational(t["c"])
            table[key] = terms
        return AlgebraLaw(dim, table, d.get("labels"), d.get("meta") or {})
    except (KeyError, TypeError, IndexError, ValueError) as exc:
        if isinstance(exc, FormatError):
            raise
        raise FormatError(f"malformed law file: {exc}") from exc


def dumps_law(mu: AlgebraLaw) -> str:
    return json.dumps(law_to_dict(mu), indent=1, sort_keys=True) + "\n"


def loads_law(text: str) -> AlgebraLaw:
    try:
        return law_from_dict(json.loads(text))
    except json.JSONDecodeError as exc:
        raise FormatError(f"invalid JSON: {exc}") from exc


def save_law(mu: AlgebraLaw, path: str) -> None:
    _atomic_write(path, dumps_law(mu))


def load_law(path: str) -> AlgebraLaw:
    with open(path, encoding="utf-8") as fh:
        return loads_law(fh.read())


def _mat_triplets(m: SparseMat) -> list:
    return [[i, j, rational_str(v)] for i, j, v in sorted(m.triplets())]


def _mat_from_triplets(trips, n: int) -> SparseMat:
    entries = {}
    for t in trips:
        i, j, v = t
        if (int(i), int(j)) in entries:
            raise FormatError("duplicate matrix entry")
        entries[(int(i), int(j))] = parse_rational(v)
    return SparseMat.from_entries(n, n, entries)


def module_to_dict(M: Bimodule, law_ref: str | None = None) -> dict[str, Any]:
    return {"format": MODULE_FORMAT, "version": VERSION, "dim_m": M.dim_m, "name": M.name,
            "law": law_ref if law_ref is not None else law_to_dict(M.algebra),
            "left": [_mat_triplets(L) for L in M.left], "right": [_mat_triplets(R) for R in M.right]}


def module_from_dict(d: dict, base_dir: str = ".", law: AlgebraLaw | None = None, strict: bool = True) -> Bimodule:
    try:
        if d.get("format") != MODULE_FORMAT:
            raise FormatError("not a module file")
        if law is None:
            ref = d["law"]
            law = load_law(os.path.join(base_dir, ref)) if isinstance(ref, str) else law_from_dict(ref)
        n = int(d["dim_m"])
        left = [_mat_from_triplets(t, n) for t in d["left"]]
        right = [_mat_from_triplets(t, n) for t in d["right"]]
        M = Bimodule(law, n, left, right, d.get("name", ""))
    except (KeyError, TypeError, IndexError, ValueError) as exc:
        raise FormatError(f"malformed module file: {exc}") from exc
    if strict:
        bad = check_bimodule(M)
        if bad:
            raise BadModule(f"module axiom ({bad[0][0]}) fails on basis triple {bad[0][1]}")
    return M


def dumps_module(M: Bimodule, law_ref: str | None = None) -> str:
    return json.dumps(module_to_dict(M, law_ref), indent=1, sort_keys=True) + "\n"


def loads_module(text: str, base_dir: str = ".", law: AlgebraLaw | None = None, strict: bool = True) -> Bimodule:
    try:
        d = json.loads(text)
    except json.JSONDecodeError as exc:
        raise FormatError(f"invalid JSON: {exc}") from exc
    return module_from_dict(d, base_dir, law, strict)


def save_module(M: Bimodule, path: str, law_ref: str | None = None) -> None:
    _atomic_write(path, dumps_module(M, law_ref))


def load_module(path: str, law: AlgebraLaw | None = None, strict: bool = True) -> Bimodule:
    with open(path, encoding="utf-8") as fh:
        return loads_module(fh.read(), os.path.dirname(os.path.abspath(path)), law, strict)


def _atomic_write(path: str, text: str) -> None:
    tmp = f"{path}.tmp{os.getpid()}"
    with open(tmp, "w", encoding="utf-8") as fh:
        fh.write(text)
    os.replace(tmp, path)
