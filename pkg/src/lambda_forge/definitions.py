"""Definition files (UTF-8 JSON) and the builder-name registry.

Algebra file schema:

    {"kind": "lie" | "associative",
     "super": bool,
     "generators": [{"name": str, "parity": "even"|"odd", "weight": "n"|"p/q"}],
     "table": [{"left": name, "right": name,
                "value": [{"gen": name,
                           "coeff": {"lpow": int, "dpow": int,
                                     "num": int, "den": int}}, ...]}]}

Pairs missing from the table are zero.  Module files use the same envelope
with "basis" instead of "generators", an "algebra" target string, and an
"action" table whose values range over the module basis.

Builder names: virasoro, cur:<preset|file>, semidirect:<preset>, wN:<N>,
kN:<N>, gc:<N>, cend:<N>; a bare path loads a definition file.
"""

from __future__ import annotations

import json
import os
from fractions import Fraction
from importlib import resources

from .builders import build_semidirect, build_virasoro
from .conformal import ConformalAlgebra, add_term
from .gc import build_cend, build_gc
from .modules import ConfModule, build_m_delta_alpha, sl2_adjoint_module, sl2_standard_module, trivial_module
from .poly import Poly
from .superalgebras import build_k, build_w

PRESETS = ("virasoro", "sl2", "mat2")


class DefinitionError(ValueError):
    pass


def _want(obj, key, types, where):
    if key not in obj:
        raise DefinitionError(f"{where}: missing field {key!r}")
    v = obj[key]
    if not isinstance(v, types):
        raise DefinitionError(f"{where}: field {key!r} has wrong type")
    return v


def _parse_weight(v, where):
    if v is None:
        return None
    if isinstance(v, int):
        return Fraction(v)
    if isinstance(v, str):
        try:
            return Fraction(v)
        except ValueError:
            raise DefinitionError(f"{where}: weight {v!r} is not a rational")
    raise DefinitionError(f"{where}: weight must be an int or 'num/den' string")


def _parse_value(value, known, where):
    out = {}
    if not isinstance(value, list):
        raise DefinitionError(f"{where}: value must be a list of terms")
    for k, term in enumerate(value):
        tw = f"{where}, term {k}"
        gen = _want(term, "gen", str, tw)
        if gen not in known:
            raise DefinitionError(f"{tw}: unknown generator {gen!r}")
        coeff = _want(term, "coeff", dict, tw)
        lpow = _want(coeff, "lpow", int, tw)
        dpow = _want(coeff, "dpow", int, tw)
        num = _want(coeff, "num", int, tw)
        den = _want(coeff, "den", int, tw)
        if den <= 0:
            raise DefinitionError(f"{tw}: denominator must be positive")
        if lpow < 0 or dpow < 0:
            raise DefinitionError(f"{tw}: negative exponent")
        mono = Poly.var("l", lpow) * Poly.var("d", dpow) * Fraction(num, den)
        add_term(out, gen, mono)
    return out


def _format_value(elt):
    out = []
    for gen in sorted(elt, key=str):
        for mono, c in sorted(elt[gen].terms.items()):
            powers = dict(mono)
            extra = set(powers) - {"l", "d"}
            if extra:
                raise DefinitionError(
                    f"cannot serialise entry with variables {sorted(extra)}"
                )
            out.append(
                {
                    "gen": gen,
                    "coeff": {
                        "lpow": powers.get("l", 0),
                        "dpow": powers.get("d", 0),
                        "num": c.numerator,
                        "den": c.denominator,
                    },
                }
            )
    return out


def load_algebra(source) -> ConformalAlgebra:
    """Parse and validate an algebra definition (path, dict, or JSON text)."""
    doc, where = _load_doc(source)
    kind = _want(doc, "kind", str, where)
    if kind not in ("lie", "associative"):
        raise DefinitionError(f"{where}: kind must be 'lie' or 'associative'")
    super_ = bool(doc.get("super", False))
    gens_spec = _want(doc, "generators", list, where)
    names, parity, weight = [], {}, {}
    for i, g in enumerate(gens_spec):
        gw = f"{where}, generator {i}"
        name = _want(g, "name", str, gw)
        if name in parity:
            raise DefinitionError(f"{gw}: duplicate generator {name!r}")
        pv = g.get("parity", "even")
        if pv not in ("even", "odd"):
            raise DefinitionError(f"{gw}: parity must be 'even' or 'odd'")
        names.append(name)
        parity[name] = 1 if pv == "odd" else 0
        weight[name] = _parse_weight(g.get("weight"), gw)
    if any(parity.values()) and not super_:
        raise DefinitionError(f"{where}: odd generators in a non-super algebra")
    table = {}
    for i, entry in enumerate(_want(doc, "table", list, where)):
        ew = f"{where}, table entry {i}"
        left = _want(entry, "left", str, ew)
        right = _want(entry, "right", str, ew)
        for nm in (left, right):
            if nm not in parity:
                raise DefinitionError(f"{ew}: unknown generator {nm!r}")
        if (left, right) in table:
            raise DefinitionError(f"{ew}: duplicate pair ({left}, {right})")
        val = _parse_value(entry["value"] if "value" in entry else [], set(names), ew)
        want_par = (parity[left] + parity[right]) % 2
        for g in val:
            if parity[g] != want_par:
                raise DefinitionError(
                    f"{ew}: parity mismatch, {g!r} in the value of "
                    f"({left}, {right})"
                )
        table[(left, right)] = val
    wfun = None
    if all(weight[n] is not None for n in names):
        wfun = lambda g: weight[g]

    return ConformalAlgebra(
        kind,
        lambda a, b: dict(table.get((a, b), {})),
        gens=names,
        parity=lambda g: parity[g],
        weight=wfun,
        super_=super_,
        name=doc.get("name", where),
    )


def save_algebra(A: ConformalAlgebra) -> dict:
    """Serialise a finite algebra back to the file schema."""
    gens = A.generators()
    doc = {
        "kind": A.kind,
        "super": A.super_,
        "name": A.name,
        "generators": [],
        "table": [],
    }
    for g in gens:
        entry = {"name": A.gen_name(g), "parity": "odd" if A.parity(g) else "even"}
        w = A.weight(g)
        if w is not None:
            entry["weight"] = str(w) if w.denominator != 1 else int(w)
        doc["generators"].append(entry)
    for a in gens:
        for b in gens:
            val = A.entry(a, b)
            if val:
                doc["table"].append(
                    {
                        "left": A.gen_name(a),
                        "right": A.gen_name(b),
                        "value": _format_value(
                            {A.gen_name(g): p for g, p in val.items()}
                        ),
                    }
                )
    return doc


def load_module(source, algebra=None) -> ConfModule:
    doc, where = _load_doc(source)
    if algebra is None:
        algebra = resolve_algebra(_want(doc, "algebra", str, where))
    basis_spec = _want(doc, "basis", list, where)
    labels, parity, weight = [], {}, {}
    for i, b in enumerate(basis_spec):
        bw = f"{where}, basis {i}"
        name = _want(b, "name", str, bw)
        if name in parity:
            raise DefinitionError(f"{bw}: duplicate basis label {name!r}")
        labels.append(name)
        parity[name] = 1 if b.get("parity", "even") == "odd" else 0
        weight[name] = _parse_weight(b.get("weight"), bw)
    gen_names = {algebra.gen_name(g): g for g in algebra.generators()}
    action = {}
    for i, entry in enumerate(_want(doc, "action", list, where)):
        ew = f"{where}, action entry {i}"
        left = _want(entry, "left", str, ew)
        right = _want(entry, "right", str, ew)
        if left not in gen_names:
            raise DefinitionError(f"{ew}: unknown generator {left!r}")
        if right not in parity:
            raise DefinitionError(f"{ew}: unknown basis label {right!r}")
        action[(gen_names[left], right)] = _parse_value(
            entry.get("value", []), set(labels), ew
        )
    wfun = None
    if all(weight[n] is not None for n in labels):
        wfun = lambda b: weight[b]
    return ConfModule(
        algebra,
        labels,
        lambda g, b: dict(action.get((g, b), {})),
        parity=lambda b: parity[b],
        weight=wfun,
        name=doc.get("name", where),
    )


def _load_doc(source):
    if isinstance(source, dict):
        return source, "<dict>"
    if isinstance(source, str) and source.lstrip().startswith("{"):
        return json.loads(source), "<json>"
    if not os.path.exists(source):
        raise DefinitionError(f"definition file not found: {source}")
    with open(source, encoding="utf-8") as fh:
        try:
            return json.load(fh), os.path.basename(str(source))
        except json.JSONDecodeError as e:
            raise DefinitionError(f"{source}: invalid JSON ({e})")


def preset_path(name: str) -> str:
    res = resources.files("lambda_forge").joinpath("presets").joinpath(f"{name}.json")
    if not res.is_file():
        raise DefinitionError(f"unknown preset {name!r}")
    return str(res)


def load_preset(name: str) -> ConformalAlgebra:
    return load_algebra(preset_path(name))


def _current_constants(A: ConformalAlgebra):
    """Structure constants of a lambda- and d-free (current) table."""
    basis = [A.gen_name(g) for g in A.generators()]
    constants = {}
    for a in A.generators():
        for b in A.generators():
            val = A.entry(a, b)
            row = {}
            for g, p in val.items():
                if p.variables():
                    raise DefinitionError(
                        f"{A.name}: table entry ({A.gen_name(a)},{A.gen_name(b)}) "
                        "is not a current table"
                    )
                row[A.gen_name(g)] = p.constant()
            if row:
                constants[(A.gen_name(a), A.gen_name(b))] = row
    return basis, constants


def resolve_algebra(target: str, **kwargs) -> ConformalAlgebra:
    """Builder names and definition-file paths to algebras."""
    if target == "virasoro":
        return load_preset("virasoro")
    if target.startswith("cur:"):
        rest = target[4:]
        if rest in PRESETS:
            return load_preset(rest)
        return load_algebra(rest)
    if target.startswith("semidirect:"):
        rest = target[len("semidirect:") :]
        base = load_preset(rest) if rest in PRESETS else load_algebra(rest)
        if base.kind != "lie":
            raise DefinitionError("semidirect needs a Lie current algebra")
        basis, constants = _current_constants(base)
        return build_semidirect(basis, constants, name=f"semidirect:{rest}")
    for prefix, build in (("wN:", build_w), ("kN:", build_k), ("gc:", build_gc), ("cend:", build_cend)):
        if target.startswith(prefix):
            try:
                n = int(target[len(prefix) :])
            except ValueError:
                raise DefinitionError(f"malformed builder name {target!r}")
            return build(n)
    if os.path.exists(target):
        return load_algebra(target)
    raise DefinitionError(f"unknown algebra target {target!r}")


def resolve_module(target: str, algebra=None) -> ConfModule:
    """Module targets: trivial, mda:<D>:<a> (rationals or 'sym'), mu:sl2:standard,
    mu:sl2:adjoint, or a definition-file path."""
    if target == "trivial":
        if algebra is None:
            raise DefinitionError("trivial module needs an ambient algebra")
        return trivial_module(algebra)
    if target.startswith("mda:"):
        parts = target.split(":")
        if len(parts) != 3:
            raise DefinitionError("module target syntax: mda:<Delta>:<alpha>")
        dv = None if parts[1] == "sym" else Fraction(parts[1])
        av = None if parts[2] == "sym" else Fraction(parts[2])
        return build_m_delta_alpha(dv, av)
    if target == "mu:sl2:standard":
        return sl2_standard_module()
    if target == "mu:sl2:adjoint":
        return sl2_adjoint_module()
    if os.path.exists(target):
        return load_module(target, algebra=algebra)
    raise DefinitionError(f"unknown module target {target!r}")
