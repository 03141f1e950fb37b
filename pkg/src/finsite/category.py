"""Finite categories presented by explicit composition tables.

The orientation convention used everywhere in this package: the table
entry for ``(g, f)`` is the composite "first f, then g", written ``gf``,
and is defined exactly when ``dom(g) == cod(f)``.

A category is validated exhaustively on construction (identity laws,
totality of composition on composable pairs, associativity on every
composable triple), so downstream code can trust the table blindly.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, NamedTuple

from .errors import EngineError


class Morphism(NamedTuple):
    name: str
    dom: str
    cod: str


class InvalidCategoryError(EngineError):
    """Carries the full list of axiom violations found in a raw table."""

    def __init__(self, problems):
        self.problems = list(problems)
        lines = "\n".join(f"  - {p}" for p in self.problems)
        super().__init__(f"invalid category:\n{lines}")


class EIRequiredError(EngineError):
    pass


_RAW_KEYS = {"objects", "morphisms", "identities", "compose", "name"}


def category_problems(data: dict) -> list[str]:
    """Schema and axiom diagnostics for a raw category description."""
    problems = []
    unknown = set(data) - _RAW_KEYS
    if unknown:
        problems.append(f"unknown fields: {sorted(unknown)}")
        return problems
    for key in ("objects", "morphisms", "identities", "compose"):
        if key not in data:
            problems.append(f"missing field: {key}")
    if problems:
        return problems
    try:
        morphisms = [Morphism(m["id"], m["dom"], m["cod"]) for m in data["morphisms"]]
    except (TypeError, KeyError):
        return ["morphism entries must be {id, dom, cod} records"]
    try:
        pairs = [((c["g"], c["f"]), c["gf"]) for c in data["compose"]]
    except (TypeError, KeyError):
        return ["compose entries must be {g, f, gf} records"]
    compose = {}
    for key, value in pairs:
        if key in compose and compose[key] != value:
            problems.append(f"conflicting composite entries for ({key[0]!r},{key[1]!r})")
        compose[key] = value
    if problems:
        return problems
    return _table_problems(data["objects"], morphisms, data["identities"], compose)


def validate_category(data: dict) -> FiniteCategory:
    """Build a category from its raw description, or raise with every violation."""
    problems = category_problems(data)
    if problems:
        raise InvalidCategoryError(problems)
    morphisms = [Morphism(m["id"], m["dom"], m["cod"]) for m in data["morphisms"]]
    compose = {(c["g"], c["f"]): c["gf"] for c in data["compose"]}
    return FiniteCategory(data["objects"], morphisms, data["identities"], compose,
                          name=data.get("name"))


def _table_problems(objects, morphisms, identity, compose) -> list[str]:
    problems = []
    objects = list(objects)
    if len(set(objects)) != len(objects):
        problems.append("duplicate object identifiers")
    names = [m.name for m in morphisms]
    if len(set(names)) != len(names):
        problems.append("duplicate morphism identifiers")
    obj_set = set(objects)
    mor = {m.name: m for m in morphisms}
    for m in morphisms:
        if m.dom not in obj_set:
            problems.append(f"unknown object {m.dom!r} as dom of {m.name!r}")
        if m.cod not in obj_set:
            problems.append(f"unknown object {m.cod!r} as cod of {m.name!r}")
    for x, i in identity.items():
        if x not in obj_set:
            problems.append(f"identity given for unknown object {x!r}")
        elif i not in mor:
            problems.append(f"bad identity at {x!r}: unknown morphism {i!r}")
        elif mor[i].dom != x or mor[i].cod != x:
            problems.append(f"bad identity at {x!r}: {i!r} is not an endomorphism of {x!r}")
    for x in objects:
        if x not in identity:
            problems.append(f"bad identity at {x!r}: none given")
    for (g, f), gf in compose.items():
        if g not in mor or f not in mor:
            problems.append(f"composite ({g!r},{f!r}) names unknown morphisms")
            continue
        if mor[g].dom != mor[f].cod:
            problems.append(f"stray composite ({g!r},{f!r}): pair is not composable")
            continue
        if gf not in mor:
            problems.append(f"composite ({g!r},{f!r}) maps to unknown morphism {gf!r}")
        elif mor[gf].dom != mor[f].dom or mor[gf].cod != mor[g].cod:
            problems.append(f"ill-typed composite ({g!r},{f!r}) -> {gf!r}")
    if problems:
        return problems

    # Totality on composable pairs.
    for g, f in itertools.product(morphisms, repeat=2):
        if g.dom == f.cod and (g.name, f.name) not in compose:
            problems.append(f"missing composite ({g.name!r},{f.name!r})")
    if problems:
        return problems

    # Identity laws.
    for m in morphisms:
        left = compose[(identity[m.cod], m.name)]
        right = compose[(m.name, identity[m.dom])]
        if left != m.name:
            problems.append(f"bad identity at {m.cod!r}: 1∘{m.name!r} = {left!r}")
        if right != m.name:
            problems.append(f"bad identity at {m.dom!r}: {m.name!r}∘1 = {right!r}")

    # Associativity on every composable triple.
    for h, g, f in itertools.product(morphisms, repeat=3):
        if h.dom == g.cod and g.dom == f.cod:
            a = compose[(h.name, compose[(g.name, f.name)])]
            b = compose[(compose[(h.name, g.name)], f.name)]
            if a != b:
                problems.append(
                    f"associativity failure ({h.name!r},{g.name!r},{f.name!r}): "
                    f"{a!r} != {b!r}")
    return problems


class FiniteCategory:
    """Immutable finite category with exhaustive table validation."""

    def __init__(self, objects: Iterable[str], morphisms, identity: dict, compose: dict,
                 *, name: str | None = None):
        self.name = name
        self.objects = tuple(objects)
        self.morphisms = tuple(m if isinstance(m, Morphism) else Morphism(*m)
                               for m in morphisms)
        self.identity = dict(identity)
        self.compose_table = dict(compose)
        problems = _table_problems(self.objects, self.morphisms, self.identity,
                                   self.compose_table)
        if problems:
            raise InvalidCategoryError(problems)
        self.obj_index = {x: i for i, x in enumerate(self.objects)}
        self.mor_index = {m.name: i for i, m in enumerate(self.morphisms)}
        self._by_name = {m.name: m for m in self.morphisms}
        self._into = {x: tuple(m.name for m in self.morphisms if m.cod == x)
                      for x in self.objects}
        self._out = {x: tuple(m.name for m in self.morphisms if m.dom == x)
                     for x in self.objects}
        self._hom = {}
        for m in self.morphisms:
            self._hom.setdefault((m.dom, m.cod), []).append(m.name)
        self._hom = {k: tuple(v) for k, v in self._hom.items()}

    # -- basic lookups -------------------------------------------------

    def dom(self, f: str) -> str:
        return self._by_name[f].dom

    def cod(self, f: str) -> str:
        return self._by_name[f].cod

    def id_of(self, x: str) -> str:
        return self.identity[x]

    def is_identity(self, f: str) -> bool:
        return self.identity[self.dom(f)] == f and self.dom(f) == self.cod(f)

    def composable(self, g: str, f: str) -> bool:
        return self.dom(g) == self.cod(f)

    def compose(self, g: str, f: str) -> str:
        """The composite "first f, then g"."""
        try:
            return self.compose_table[(g, f)]
        except KeyError:
            raise EngineError(f"morphisms not composable: dom({g!r}) != cod({f!r})") from None

    def hom(self, x: str, y: str) -> tuple[str, ...]:
        return self._hom.get((x, y), ())

    def into(self, x: str) -> tuple[str, ...]:
        return self._into[x]

    def out_of(self, x: str) -> tuple[str, ...]:
        return self._out[x]

    def endos(self, x: str) -> tuple[str, ...]:
        return self.hom(x, x)

    # -- isomorphisms and idempotents -----------------------------------

    def inverse(self, f: str) -> str | None:
        m = self._by_name[f]
        for g in self.hom(m.cod, m.dom):
            if (self.compose(g, f) == self.identity[m.dom]
                    and self.compose(f, g) == self.identity[m.cod]):
                return g
        return None

    def is_iso(self, f: str) -> bool:
        return self.inverse(f) is not None

    def iso_class(self, x: str) -> tuple[str, ...]:
        out = []
        for y in self.objects:
            if y == x or any(self.is_iso(f) for f in self.hom(x, y)):
                out.append(y)
        return tuple(out)

    def idempotents(self) -> tuple[str, ...]:
        return tuple(m.name for m in self.morphisms
                     if m.dom == m.cod and self.compose(m.name, m.name) == m.name)

    # -- derived categories ---------------------------------------------

    def full_subcategory(self, objects: Iterable[str]) -> FiniteCategory:
        keep = set(objects)
        unknown = keep - set(self.objects)
        if unknown:
            raise EngineError(f"unknown objects in subcategory: {sorted(unknown)}")
        objs = tuple(x for x in self.objects if x in keep)
        mors = tuple(m for m in self.morphisms if m.dom in keep and m.cod in keep)
        kept_names = {m.name for m in mors}
        ident = {x: self.identity[x] for x in objs}
        comp = {(g, f): gf for (g, f), gf in self.compose_table.items()
                if g in kept_names and f in kept_names}
        label = ",".join(objs)
        return FiniteCategory(objs, mors, ident, comp,
                              name=f"{self.name or 'C'}[{label}]")

    def same_as(self, other: FiniteCategory) -> bool:
        """Structural equality of the presented data (names included)."""
        return self is other or (
            isinstance(other, FiniteCategory)
            and self.objects == other.objects
            and self.morphisms == other.morphisms
            and self.identity == other.identity
            and self.compose_table == other.compose_table)

    def to_data(self) -> dict:
        data = {
            "objects": list(self.objects),
            "morphisms": [{"id": m.name, "dom": m.dom, "cod": m.cod}
                          for m in self.morphisms],
            "identities": {x: self.identity[x] for x in self.objects},
            "compose": [{"g": g, "f": f, "gf": gf}
                        for (g, f), gf in sorted(
                            self.compose_table.items(),
                            key=lambda kv: (self.mor_index[kv[0][0]],
                                            self.mor_index[kv[0][1]]))],
        }
        if self.name:
            data["name"] = self.name
        return data

    def __repr__(self):
        label = self.name or "FiniteCategory"
        return f"<{label}: {len(self.objects)} objects, {len(self.morphisms)} morphisms>"


@dataclass(frozen=True)
class FullSubcategory:
    """A full subcategory of a fixed parent, determined by its object set."""

    parent: FiniteCategory
    objects: tuple[str, ...]

    def __post_init__(self):
        keep = set(self.objects)
        unknown = keep - set(self.parent.objects)
        if unknown:
            raise EngineError(f"unknown objects in subcategory: {sorted(unknown)}")
        ordered = tuple(x for x in self.parent.objects if x in keep)
        object.__setattr__(self, "objects", ordered)

    @cached_property
    def category(self) -> FiniteCategory:
        return self.parent.full_subcategory(self.objects)

    def is_strictly_full(self) -> bool:
        keep = set(self.objects)
        return all(set(self.parent.iso_class(x)) <= keep for x in self.objects)

    def is_co_ideal(self) -> bool:
        """Closed under "maps in": y in D whenever Hom(y, x) is non-empty, x in D."""
        keep = set(self.objects)
        for x in self.objects:
            for y in self.parent.objects:
                if self.parent.hom(y, x) and y not in keep:
                    return False
        return True

    def __repr__(self):
        return f"FullSubcategory({list(self.objects)})"


def is_ei(cat: FiniteCategory) -> bool:
    """True when every endomorphism is invertible."""
    return all(cat.is_iso(f) for x in cat.objects for f in cat.endos(x))


class SplittingReport(NamedTuple):
    ok: bool
    splittings: dict  # idempotent name -> (retraction r, section s) with s∘r = e, r∘s = id
    unsplit: tuple

    def __bool__(self):
        return self.ok


def karoubian_report(cat: FiniteCategory) -> SplittingReport:
    """Exhaustive search for a splitting of every idempotent endomorphism.

    A splitting of e: x -> x is a pair r: x -> y, s: y -> x with
    compose(s, r) = e and compose(r, s) = id_y.
    """
    splittings = {}
    unsplit = []
    for e in cat.idempotents():
        x = cat.dom(e)
        found = None
        for y in cat.objects:
            for r in cat.hom(x, y):
                for s in cat.hom(y, x):
                    if (cat.compose(s, r) == e
                            and cat.compose(r, s) == cat.id_of(y)):
                        found = (r, s)
                        break
                if found:
                    break
            if found:
                break
        if found:
            splittings[e] = found
        else:
            unsplit.append(e)
    return SplittingReport(not unsplit, splittings, tuple(unsplit))


def is_karoubian(cat: FiniteCategory) -> bool:
    return karoubian_report(cat).ok


def object_subsets(cat: FiniteCategory):
    """All object subsets in (size, index-lex) order, as tuples."""
    for r in range(len(cat.objects) + 1):
        yield from itertools.combinations(cat.objects, r)


def strictly_full_karoubian_subcategories(cat: FiniteCategory) -> list[FullSubcategory]:
    """Every iso-closed object subset whose full subcategory splits its idempotents."""
    out = []
    for objs in object_subsets(cat):
        sub = FullSubcategory(cat, objs)
        if sub.is_strictly_full() and is_karoubian(sub.category):
            out.append(sub)
    return out


class IsoClassPoset:
    """Isomorphism classes of an EI category with the induced partial order."""

    def __init__(self, cat: FiniteCategory, classes, leq):
        self.cat = cat
        self.classes = tuple(tuple(c) for c in classes)
        self.leq = frozenset(leq)  # pairs of class indices, reflexive
        self._class_of = {}
        for i, c in enumerate(self.classes):
            for x in c:
                self._class_of[x] = i

    def class_of(self, x: str) -> int:
        return self._class_of[x]

    def le(self, i: int, j: int) -> bool:
        return (i, j) in self.leq

    def minimal_class_indices(self) -> tuple[int, ...]:
        return tuple(i for i in range(len(self.classes))
                     if not any(self.le(j, i) for j in range(len(self.classes)) if j != i))

    def minimal_objects(self) -> tuple[str, ...]:
        mins = set(self.minimal_class_indices())
        return tuple(x for x in self.cat.objects if self._class_of[x] in mins)

    def below(self, x: str) -> tuple[str, ...]:
        """Objects y with Hom(y, x) non-empty, i.e. the object set of C_<=x."""
        return tuple(y for y in self.cat.objects if self.cat.hom(y, x))

    def down_subcategory(self, x: str) -> FullSubcategory:
        return FullSubcategory(self.cat, self.below(x))

    def minimal_below(self, x: str) -> tuple[str, ...]:
        """Minimal objects of the full subcategory on everything mapping into x."""
        below = set(self.below(x))
        mins = []
        for y in below:
            cls = self._class_of[y]
            if not any(self._class_of[z] != cls and self.le(self._class_of[z], cls)
                       for z in below):
                mins.append(y)
        return tuple(y for y in self.cat.objects if y in mins)


def iso_class_poset(cat: FiniteCategory) -> IsoClassPoset:
    if not is_ei(cat):
        raise EIRequiredError("iso-class order is only defined for EI categories")
    seen = {}
    classes = []
    for x in cat.objects:
        if x in seen:
            continue
        cls = cat.iso_class(x)
        classes.append(cls)
        for y in cls:
            seen[y] = len(classes) - 1
    leq = set()
    for i, ci in enumerate(classes):
        for j, cj in enumerate(classes):
            if cat.hom(ci[0], cj[0]) or i == j:
                leq.add((i, j))
    for i, j in leq:
        if i != j and (j, i) in leq:
            raise EngineError("iso-class relation is not antisymmetric; category not EI?")
    return IsoClassPoset(cat, classes, leq)


def minimal_subcategory(cat: FiniteCategory) -> FullSubcategory:
    """The full subcategory on all minimal objects of an EI category."""
    return FullSubcategory(cat, iso_class_poset(cat).minimal_objects())


def co_ideal_generated_by(cat: FiniteCategory, objects: Iterable[str]) -> FullSubcategory:
    """Downward closure of an object set under "receives a morphism from"."""
    keep = set(objects)
    grew = True
    while grew:
        grew = False
        for x in tuple(keep):
            for y in cat.objects:
                if y not in keep and cat.hom(y, x):
                    keep.add(y)
                    grew = True
    return FullSubcategory(cat, tuple(x for x in cat.objects if x in keep))
