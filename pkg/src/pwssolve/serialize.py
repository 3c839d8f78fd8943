"""JSON file formats for operators, vectors, sections and reports.

Rationals are written as strings ``"p/q"`` (or ``"p"``) so nothing passes
through floating point.  Univariate even polynomials are coefficient lists
``[c0, c1, ...]`` in ``t``; product-group entries are ``{"terms": [[exps, c], ...]}``.
"""

from __future__ import annotations

import json
from fractions import Fraction
from importlib import resources
from pathlib import Path

import jsonschema

from .fourier import Level2Section, assemble
from .ktypes import KType, parity_compatible
from .polyring import T, AnyPoly, MPoly, Poly, StructuralError, format_rational
from .pws import Level3Operator, Level3Vector


class SchemaError(ValueError):
    """Input does not match a shipped JSON schema or is structurally inconsistent."""


def rational_to_json(c: Fraction) -> str:
    return format_rational(Fraction(c))


def rational_from_json(x) -> Fraction:
    if isinstance(x, bool) or isinstance(x, float):
        raise SchemaError(f"rationals must be integers or 'p/q' strings, got {x!r}")
    try:
        return Fraction(x)
    except (ValueError, TypeError, ZeroDivisionError) as exc:
        raise SchemaError(f"bad rational {x!r}") from exc


def poly_to_json(p: AnyPoly):
    if isinstance(p, Poly):
        return [rational_to_json(c) for c in p.coeffs]
    return {"terms": [[list(e), rational_to_json(c)] for e, c in sorted(p.terms.items())]}


def poly_from_json(x, rank: int = 1) -> AnyPoly:
    if isinstance(x, list):
        p = Poly([rational_from_json(c) for c in x], T)
        if rank == 1:
            return p
        if p.degree() > 0:
            raise SchemaError(f"coefficient lists are ambiguous for rank {rank}; use {{'terms': ...}}")
        return MPoly.constant(p.coeffs[0] if p.coeffs else 0, rank, T)
    if isinstance(x, dict) and "terms" in x:
        if rank == 1:
            raise SchemaError("sparse 'terms' entries are only for product groups")
        try:
            return MPoly([(tuple(e), rational_from_json(c)) for e, c in x["terms"]], rank, T)
        except StructuralError as exc:
            raise SchemaError(str(exc)) from exc
    raise SchemaError(f"cannot read polynomial from {x!r}")


def group_rank(group: str) -> int:
    if group == "sl2r":
        return 1
    if group.startswith("sl2r^"):
        try:
            d = int(group[5:])
        except ValueError:
            d = 0
        if d >= 1:
            return d
    raise SchemaError(f"unknown group {group!r}")


def _ktype_from_json(x, rank: int) -> KType:
    k = KType.of(x)
    if k.rank != rank:
        raise SchemaError(f"K-type {x!r} does not belong to the declared group (rank {rank})")
    return k


def _ktypes_from_json(xs, rank: int) -> list[KType]:
    return [_ktype_from_json(x, rank) for x in xs]


# -- schemas ----------------------------------------------------------------


def load_schema(name: str) -> dict:
    text = resources.files("pwssolve").joinpath("schemas", f"{name}.schema.json").read_text()
    return json.loads(text)


def validate(doc, name: str) -> None:
    try:
        jsonschema.validate(doc, load_schema(name))
    except jsonschema.ValidationError as exc:
        raise SchemaError(f"{name} schema: {exc.message}") from exc


def read_json(path) -> dict:
    try:
        return json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise SchemaError(f"cannot read {path}: {exc}") from exc


# -- operators --------------------------------------------------------------


def operator_to_json(P: Level3Operator) -> dict:
    return {
        "group": P.sources[0].group if P.sources else P.targets[0].group,
        "sources": [k.to_json() for k in P.sources],
        "targets": [k.to_json() for k in P.targets],
        "entries": [[poly_to_json(a) for a in row] for row in P.entries],
    }


def operator_from_json(doc: dict) -> Level3Operator:
    validate(doc, "operator")
    rank = group_rank(doc["group"])
    sources = _ktypes_from_json(doc["sources"], rank)
    targets = _ktypes_from_json(doc["targets"], rank)
    rows = doc["entries"]
    if len(rows) != len(targets) or any(len(r) != len(sources) for r in rows):
        raise SchemaError(f"entries must be {len(targets)}x{len(sources)} (targets x sources)")
    entries = [[poly_from_json(a, rank) for a in row] for row in rows]
    return Level3Operator(sources, targets, entries)


def parity_warnings(P: Level3Operator) -> list[str]:
    """Zero entries forced by parity (``Hom_M`` vanishes there)."""
    out = []
    for i, m in enumerate(P.targets):
        for j, n in enumerate(P.sources):
            if not parity_compatible(n, m):
                out.append(f"entry ({i},{j}): Hom_M({n},{m}) is zero; entry must stay 0")
    return out


# -- vectors ----------------------------------------------------------------


def vector_to_json(v: Level3Vector) -> dict:
    return {
        "group": v.ktype.group,
        "ktype": v.ktype.to_json(),
        "targets": [k.to_json() for k in v.targets],
        "h": [poly_to_json(h) for h in v.h],
    }


def vector_from_json(doc: dict, ktype=None) -> Level3Vector:
    """Read a vector; ``ktype`` overrides (or supplies) the stored K-type."""
    validate(doc, "vector")
    rank = group_rank(doc["group"])
    if ktype is None:
        if "ktype" not in doc:
            raise SchemaError("vector file has no 'ktype'; pass one explicitly")
        ktype = doc["ktype"]
    k = _ktype_from_json(ktype, rank)
    targets = _ktypes_from_json(doc["targets"], rank)
    if len(doc["h"]) != len(targets):
        raise SchemaError("one h entry per target is required")
    return Level3Vector(k, targets, [poly_from_json(h, rank) for h in doc["h"]])


# -- sections ---------------------------------------------------------------


def section_to_json(s: Level2Section) -> dict:
    comps = []
    for mu, v in s.components:
        for m, h in zip(v.targets, v.h):
            comps.append({"mu": mu.to_json(), "target": m.to_json(), "h": poly_to_json(h)})
    group = (s.targets[0] if s.targets else s.ktypes[0]).group if (s.targets or s.components) else "sl2r"
    return {"group": group, "targets": [m.to_json() for m in s.targets], "components": comps}


def section_from_json(doc: dict) -> Level2Section:
    """Components are listed per (mu, target); missing targets default to 0."""
    validate(doc, "section")
    rank = group_rank(doc["group"])
    targets = _ktypes_from_json(doc["targets"], rank)
    index = {m: i for i, m in enumerate(targets)}
    acc: dict[KType, list] = {}
    zero = Poly((), T) if rank == 1 else MPoly((), rank, T)
    for c in doc["components"]:
        mu = _ktype_from_json(c["mu"], rank)
        m = _ktype_from_json(c["target"], rank)
        if m not in index:
            raise SchemaError(f"component target {c['target']!r} is not among the section targets")
        hs = acc.setdefault(mu, [zero] * len(targets))
        hs[index[m]] = hs[index[m]] + poly_from_json(c["h"], rank)
    return assemble({mu: Level3Vector(mu, targets, hs) for mu, hs in acc.items()}, targets)


# -- reports ----------------------------------------------------------------


def report(command: str, inputs: dict, result, diagnostics: list | None = None) -> dict:
    doc = {"command": command, "inputs": inputs, "result": result,
           "diagnostics": list(diagnostics or [])}
    validate(doc, "report")
    return doc
