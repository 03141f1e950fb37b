"""One structured-text format family for every artifact.

Documents are YAML with two fixed header fields: ``format: finsite/1``
and a ``kind`` tag. Parsers reject unknown fields and name the offending
field in the diagnostic. Emission is deterministic: key order is the
construction order, never alphabetical, so golden files are byte-stable.

Field elements are written as integers when possible and as "n/d"
strings for non-integral rationals.
"""

from __future__ import annotations

from fractions import Fraction

import yaml

from .algebras import AlgebraPresheaf, FiniteDimAlgebra, SkewCategoryAlgebra
from .category import FiniteCategory, validate_category
from .errors import EngineError
from .fields import Matrix, field_by_label, matrix
from .groups import FiniteGroup
from .modules import AlgebraModule, ModulePresheaf
from .presheaves import LinearPresheaf, SetPresheaf
from .sieves import Sieve
from .topology import GrothendieckTopology

FORMAT = "finsite/1"


class DocumentError(EngineError):
    pass


def _expect(doc: dict, required: set, optional: set, where: str):
    if not isinstance(doc, dict):
        raise DocumentError(f"{where}: expected a mapping")
    unknown = set(doc) - required - optional
    if unknown:
        raise DocumentError(f"{where}: unknown field {sorted(unknown)[0]!r}")
    missing = required - set(doc)
    if missing:
        raise DocumentError(f"{where}: missing field {sorted(missing)[0]!r}")


def load_text(text: str) -> dict:
    try:
        doc = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        raise DocumentError(f"not valid YAML: {exc}") from None
    if not isinstance(doc, dict):
        raise DocumentError("document is not a mapping")
    if doc.get("format") != FORMAT:
        raise DocumentError(f"missing or unsupported format header "
                            f"(expected {FORMAT!r})")
    if "kind" not in doc:
        raise DocumentError("missing field 'kind'")
    return doc


def dump_text(doc: dict) -> str:
    return yaml.safe_dump(doc, sort_keys=False, default_flow_style=None, width=100)


def _scalar_out(value):
    if isinstance(value, Fraction):
        if value.denominator == 1:
            return int(value)
        return f"{value.numerator}/{value.denominator}"
    return int(value)


def _scalar_in(field, raw):
    if isinstance(raw, str):
        if "/" in raw:
            num, den = raw.split("/", 1)
            return field.of(Fraction(int(num), int(den)))
        return field.of(int(raw))
    if isinstance(raw, bool) or not isinstance(raw, int):
        raise DocumentError(f"bad field element {raw!r}")
    return field.of(raw)


def _matrix_out(m: Matrix) -> list:
    return [[_scalar_out(e) for e in row] for row in m.data]


def _matrix_in(field, raw, rows: int, cols: int, where: str) -> Matrix:
    if not isinstance(raw, list) or len(raw) != rows \
            or any(not isinstance(r, list) or len(r) != cols for r in raw):
        raise DocumentError(f"{where}: expected a {rows}x{cols} matrix")
    return matrix(field, [[_scalar_in(field, e) for e in row] for row in raw],
                  cols=cols)


# -- categories and groups ------------------------------------------------


def category_to_doc(cat: FiniteCategory) -> dict:
    return {"format": FORMAT, "kind": "category", **cat.to_data()}


def category_from_doc(doc: dict) -> FiniteCategory:
    _expect(doc, {"format", "kind", "objects", "morphisms", "identities", "compose"},
            {"name"}, "category")
    body = {k: v for k, v in doc.items() if k not in ("format", "kind")}
    return validate_category(body)


def group_to_doc(group: FiniteGroup) -> dict:
    return {"format": FORMAT, "kind": "group", **group.to_data()}


def group_from_doc(doc: dict) -> FiniteGroup:
    _expect(doc, {"format", "kind", "elements", "table"}, {"name"}, "group")
    return FiniteGroup.from_rows(doc["elements"], doc["table"],
                                 name=doc.get("name", "G"))


# -- topologies ------------------------------------------------------------


def topology_to_doc(top: GrothendieckTopology) -> dict:
    doc = {"format": FORMAT, "kind": "topology"}
    if top.label:
        doc["label"] = top.label
    doc["covering"] = top.to_data()
    return doc


def topology_from_doc(doc: dict, cat: FiniteCategory) -> GrothendieckTopology:
    _expect(doc, {"format", "kind", "covering"}, {"label"}, "topology")
    raw = doc["covering"]
    if set(raw) != set(cat.objects):
        raise DocumentError("topology: covering must list every object exactly once")
    covering = {}
    for x, sieves in raw.items():
        fams = set()
        for members in sieves:
            for m in members:
                if m not in cat.mor_index:
                    raise DocumentError(f"topology: unknown morphism {m!r} at {x!r}")
            fams.add(Sieve(x, frozenset(members)))
        covering[x] = fams
    return GrothendieckTopology(cat, covering, label=doc.get("label"))


# -- presheaves --------------------------------------------------------------


def presheaf_to_doc(f) -> dict:
    if f.flavor == "set":
        # Elements are canonicalised to strings on the way out.
        for x in f.cat.objects:
            if len({str(a) for a in f.at(x)}) != len(f.at(x)):
                raise DocumentError(
                    f"presheaf elements at {x!r} collide as strings")
        return {"format": FORMAT, "kind": "presheaf", "flavor": "set",
                "values": {x: [str(a) for a in f.at(x)] for x in f.cat.objects},
                "maps": {m.name: {str(a): str(f.apply(m.name, a))
                                  for a in f.at(m.cod)}
                         for m in f.cat.morphisms}}
    return {"format": FORMAT, "kind": "presheaf", "flavor": "linear",
            "field": f.field.label,
            "dims": {x: f.at(x) for x in f.cat.objects},
            "maps": {m.name: _matrix_out(f.mat(m.name)) for m in f.cat.morphisms}}


def presheaf_from_doc(doc: dict, cat: FiniteCategory):
    _expect(doc, {"format", "kind", "flavor"},
            {"values", "maps", "field", "dims"}, "presheaf")
    if doc["flavor"] == "set":
        _expect(doc, {"format", "kind", "flavor", "values", "maps"}, set(), "presheaf")
        values = {x: tuple(doc["values"].get(x, ())) for x in cat.objects}
        maps = {}
        for m in cat.morphisms:
            table = doc["maps"].get(m.name)
            if table is None:
                raise DocumentError(f"presheaf: missing map for {m.name!r}")
            maps[m.name] = dict(table)
        return SetPresheaf(cat, values, maps)
    if doc["flavor"] != "linear":
        raise DocumentError(f"presheaf: unknown flavor {doc['flavor']!r}")
    _expect(doc, {"format", "kind", "flavor", "field", "dims", "maps"}, set(),
            "presheaf")
    field = field_by_label(doc["field"])
    dims = {x: int(doc["dims"].get(x, 0)) for x in cat.objects}
    mats = {}
    for m in cat.morphisms:
        raw = doc["maps"].get(m.name)
        if raw is None:
            raise DocumentError(f"presheaf: missing map for {m.name!r}")
        mats[m.name] = _matrix_in(field, raw, dims[m.dom], dims[m.cod],
                                  f"presheaf map {m.name!r}")
    return LinearPresheaf(cat, field, dims, mats)


# -- algebra presheaves -------------------------------------------------------


def _algebra_to_doc(a: FiniteDimAlgebra) -> dict:
    return {"dim": a.dim,
            "labels": [str(l) for l in a.labels],
            "unit": [_scalar_out(c) for c in a.unit],
            "table": [[[_scalar_out(c) for c in cell] for cell in row]
                      for row in a.table]}


def _algebra_from_doc(doc: dict, field, where: str) -> FiniteDimAlgebra:
    _expect(doc, {"dim", "table", "unit"}, {"labels"}, where)
    dim = int(doc["dim"])
    raw = doc["table"]
    if len(raw) != dim or any(len(row) != dim for row in raw):
        raise DocumentError(f"{where}: table must be {dim}x{dim}")
    table = [[[_scalar_in(field, c) for c in cell] for cell in row] for row in raw]
    unit = [_scalar_in(field, c) for c in doc["unit"]]
    labels = doc.get("labels")
    return FiniteDimAlgebra(field, table, unit, labels=labels)


def algebra_presheaf_to_doc(r: AlgebraPresheaf) -> dict:
    return {"format": FORMAT, "kind": "algebra-presheaf",
            "field": r.field.label,
            "algebras": {x: _algebra_to_doc(r.algebra(x)) for x in r.cat.objects},
            "maps": {m.name: _matrix_out(r.mat(m.name)) for m in r.cat.morphisms}}


def algebra_presheaf_from_doc(doc: dict, cat: FiniteCategory) -> AlgebraPresheaf:
    _expect(doc, {"format", "kind", "field", "algebras", "maps"}, set(),
            "algebra-presheaf")
    field = field_by_label(doc["field"])
    if set(doc["algebras"]) != set(cat.objects):
        raise DocumentError("algebra-presheaf: algebras must cover every object")
    at = {x: _algebra_from_doc(doc["algebras"][x], field,
                               f"algebra-presheaf at {x!r}")
          for x in cat.objects}
    maps = {}
    for m in cat.morphisms:
        raw = doc["maps"].get(m.name)
        if raw is None:
            raise DocumentError(f"algebra-presheaf: missing map for {m.name!r}")
        maps[m.name] = _matrix_in(field, raw, at[m.dom].dim, at[m.cod].dim,
                                  f"algebra-presheaf map {m.name!r}")
    return AlgebraPresheaf(cat, at, maps)


# -- modules -------------------------------------------------------------------


def module_presheaf_to_doc(m: ModulePresheaf) -> dict:
    return {"format": FORMAT, "kind": "module-presheaf",
            "field": m.field.label,
            "dims": {x: m.dim(x) for x in m.cat.objects},
            "maps": {mor.name: _matrix_out(m.space.mat(mor.name))
                     for mor in m.cat.morphisms},
            "actions": {x: [_matrix_out(a) for a in m.actions[x]]
                        for x in m.cat.objects}}


def module_presheaf_from_doc(doc: dict, r: AlgebraPresheaf) -> ModulePresheaf:
    _expect(doc, {"format", "kind", "field", "dims", "maps", "actions"}, set(),
            "module-presheaf")
    cat = r.cat
    field = field_by_label(doc["field"])
    if field != r.field:
        raise DocumentError("module-presheaf: field differs from the coefficients")
    dims = {x: int(doc["dims"].get(x, 0)) for x in cat.objects}
    mats = {}
    for m in cat.morphisms:
        raw = doc["maps"].get(m.name)
        if raw is None:
            raise DocumentError(f"module-presheaf: missing map for {m.name!r}")
        mats[m.name] = _matrix_in(field, raw, dims[m.dom], dims[m.cod],
                                  f"module-presheaf map {m.name!r}")
    space = LinearPresheaf(cat, field, dims, mats)
    actions = {}
    for x in cat.objects:
        raw = doc["actions"].get(x)
        if raw is None or len(raw) != r.algebra(x).dim:
            raise DocumentError(f"module-presheaf: need one action matrix per "
                                f"basis element at {x!r}")
        actions[x] = tuple(_matrix_in(field, a, dims[x], dims[x],
                                      f"module-presheaf action at {x!r}")
                           for a in raw)
    return ModulePresheaf(r, space, actions)


def algebra_module_to_doc(n: AlgebraModule) -> dict:
    return {"format": FORMAT, "kind": "algebra-module",
            "field": n.field.label,
            "dim": n.dim,
            "actions": [_matrix_out(a) for a in n.actions]}


def algebra_module_from_doc(doc: dict, algebra: FiniteDimAlgebra) -> AlgebraModule:
    _expect(doc, {"format", "kind", "field", "dim", "actions"}, set(),
            "algebra-module")
    field = field_by_label(doc["field"])
    if field != algebra.field:
        raise DocumentError("algebra-module: field differs from the algebra")
    dim = int(doc["dim"])
    raw = doc["actions"]
    if len(raw) != algebra.dim:
        raise DocumentError("algebra-module: need one action matrix per basis element")
    actions = [_matrix_in(field, a, dim, dim, "algebra-module action") for a in raw]
    return AlgebraModule(algebra, dim, actions)


def skew_algebra_to_doc(a: SkewCategoryAlgebra) -> dict:
    return {"format": FORMAT, "kind": "skew-algebra",
            "field": a.field.label,
            "dim": a.dim,
            "basis": [[f, str(b)] for (f, b) in a.labels],
            "unit": [_scalar_out(c) for c in a.unit],
            "table": [[[_scalar_out(c) for c in cell] for cell in row]
                      for row in a.table]}
