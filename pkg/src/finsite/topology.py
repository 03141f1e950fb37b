"""Grothendieck topologies on finite categories: axiom checking, the
brute-force census, subcategory and dense topologies, and the
classification of topologies by strictly full Karoubian subcategories."""

from __future__ import annotations

import itertools
from typing import NamedTuple

from .category import (FiniteCategory, FullSubcategory,
                       strictly_full_karoubian_subcategories)
from .errors import EngineError
from .sieves import (Sieve, is_sieve, maximal_sieve, pullback_sieve,
                     sieve_sort_key, sieves_on)

CENSUS_GUARD = 2 ** 32


class TopologyViolation(NamedTuple):
    axiom: str      # "maximal-sieve", "stability", "transitivity", "sieve"
    obj: str
    sieve: Sieve
    morphism: str | None

    def __str__(self):
        detail = f" along {self.morphism!r}" if self.morphism else ""
        return (f"{self.axiom} fails at {self.obj!r} for sieve "
                f"{sorted(self.sieve.members)}{detail}")


class ClassificationError(EngineError):
    pass


class GrothendieckTopology:
    """A per-object family of covering sieves on a fixed category.

    Equality and hashing look only at the covering data, so topologies
    from different constructions compare as expected.
    """

    def __init__(self, cat: FiniteCategory, covering: dict, *, label: str | None = None):
        self.cat = cat
        self.covering = {x: frozenset(covering.get(x, ())) for x in cat.objects}
        self.label = label
        extra = set(covering) - set(cat.objects)
        if extra:
            raise EngineError(f"covering data for unknown objects: {sorted(extra)}")
        for x, sieves in self.covering.items():
            for s in sieves:
                if s.target != x:
                    raise EngineError(f"sieve on {s.target!r} filed under {x!r}")

    def sieves_at(self, x: str) -> tuple[Sieve, ...]:
        return tuple(sorted(self.covering[x], key=lambda s: sieve_sort_key(self.cat, s)))

    def covers(self, s: Sieve) -> bool:
        return s in self.covering[s.target]

    def minimal_cover(self, x: str) -> Sieve:
        """The intersection of all covering sieves on x; always itself covering."""
        sieves = self.covering[x]
        if not sieves:
            raise EngineError(f"no covering sieves at {x!r}")
        members = frozenset.intersection(*(s.members for s in sieves))
        least = Sieve(x, members)
        if least not in sieves:
            raise EngineError(
                f"covering sieves at {x!r} are not closed under intersection; "
                "not a Grothendieck topology")
        return least

    def le(self, other: GrothendieckTopology) -> bool:
        """Objectwise containment of covering families."""
        return all(self.covering[x] <= other.covering[x] for x in self.cat.objects)

    def _key(self):
        return tuple((x, frozenset(self.covering[x])) for x in self.cat.objects)

    def __eq__(self, other):
        return (isinstance(other, GrothendieckTopology)
                and self._key() == other._key())

    def __hash__(self):
        return hash(self._key())

    def to_data(self) -> dict:
        cat = self.cat
        doc = {}
        for x in cat.objects:
            doc[x] = [sorted(s.members, key=lambda m: cat.mor_index[m])
                      for s in self.sieves_at(x)]
        return doc

    def __repr__(self):
        label = self.label or "topology"
        sizes = ",".join(str(len(self.covering[x])) for x in self.cat.objects)
        return f"<{label} with covering sizes [{sizes}]>"


def check_topology(cat: FiniteCategory, top) -> list[TopologyViolation]:
    """All axiom violations of a covering assignment, in deterministic order."""
    covering = top.covering if isinstance(top, GrothendieckTopology) else \
        {x: frozenset(top.get(x, ())) for x in cat.objects}
    violations = []
    for x in cat.objects:
        for s in sorted(covering[x], key=lambda s: sieve_sort_key(cat, s)):
            if s.target != x or not is_sieve(cat, x, s.members):
                violations.append(TopologyViolation("sieve", x, s, None))
    if violations:
        return violations
    all_sieves = {x: sieves_on(cat, x) for x in cat.objects}
    for x in cat.objects:
        if maximal_sieve(cat, x) not in covering[x]:
            violations.append(TopologyViolation("maximal-sieve", x,
                                                maximal_sieve(cat, x), None))
    for x in cat.objects:
        for s in sorted(covering[x], key=lambda s: sieve_sort_key(cat, s)):
            for f in cat.into(x):
                if pullback_sieve(cat, s, f) not in covering[cat.dom(f)]:
                    violations.append(TopologyViolation("stability", x, s, f))
    for x in cat.objects:
        for s1 in sorted(covering[x], key=lambda s: sieve_sort_key(cat, s)):
            for s2 in all_sieves[x]:
                if s2 in covering[x]:
                    continue
                if all(pullback_sieve(cat, s2, f) in covering[cat.dom(f)]
                       for f in s1.members):
                    violations.append(TopologyViolation("transitivity", x, s2, None))
    return violations


def is_topology(cat: FiniteCategory, top) -> bool:
    return not check_topology(cat, top)


def minimal_topology(cat: FiniteCategory) -> GrothendieckTopology:
    return GrothendieckTopology(
        cat, {x: {maximal_sieve(cat, x)} for x in cat.objects}, label="J_min")


def maximal_topology(cat: FiniteCategory) -> GrothendieckTopology:
    return GrothendieckTopology(
        cat, {x: set(sieves_on(cat, x)) for x in cat.objects}, label="J_max")


def dense_topology(cat: FiniteCategory) -> GrothendieckTopology:
    """Sieves that meet every incoming morphism after a further precomposition:
    S covers x when every f: y -> x admits g: z -> y with "g then f" in S."""
    covering = {}
    for x in cat.objects:
        chosen = set()
        for s in sieves_on(cat, x):
            ok = True
            for f in cat.into(x):
                y = cat.dom(f)
                if not any(cat.compose(f, g) in s.members for g in cat.into(y)):
                    ok = False
                    break
            if ok:
                chosen.add(s)
        covering[x] = chosen
    return GrothendieckTopology(cat, covering, label="J_den")


def subcategory_topology(cat: FiniteCategory, sub) -> GrothendieckTopology:
    """The topology whose covering sieves on x are those containing every
    morphism into x from an object of the subcategory.

    The subcategory must be strictly full (closed under isomorphism).
    """
    if not isinstance(sub, FullSubcategory):
        sub = FullSubcategory(cat, tuple(sub))
    if not sub.parent.same_as(cat):
        raise EngineError("subcategory belongs to a different category")
    if not sub.is_strictly_full():
        raise EngineError(
            f"object set {list(sub.objects)} is not closed under isomorphism")
    keep = set(sub.objects)
    covering = {}
    for x in cat.objects:
        required = frozenset(t for t in cat.into(x) if cat.dom(t) in keep)
        covering[x] = {s for s in sieves_on(cat, x) if required <= s.members}
    label = "J^{" + ",".join(sub.objects) + "}"
    return GrothendieckTopology(cat, covering, label=label)


def minimal_covering_sieve(top: GrothendieckTopology, x: str) -> Sieve:
    return top.minimal_cover(x)


def topology_from_minimal_covers(cat: FiniteCategory, minimal: dict) -> GrothendieckTopology:
    """Upward closure of one chosen sieve per object (sieves above stay covering)."""
    covering = {}
    for x in cat.objects:
        base = minimal[x]
        base_members = base.members if isinstance(base, Sieve) else frozenset(base)
        covering[x] = {s for s in sieves_on(cat, x) if base_members <= s.members}
    return GrothendieckTopology(cat, covering)


def census_size_bound(cat: FiniteCategory) -> int:
    bound = 1
    for x in cat.objects:
        bound *= 2 ** len(sieves_on(cat, x))
    return bound


def enumerate_topologies(cat: FiniteCategory, *, guard: int = CENSUS_GUARD
                         ) -> list[GrothendieckTopology]:
    """Every Grothendieck topology on the category, deterministically ordered.

    Candidates per object are the upward-closed sieve families containing
    the maximal sieve (covering families are always up-closed), then the
    full axiom checker filters the product. The unpruned subset scan is
    kept in the test suite as an oracle.
    """
    bound = census_size_bound(cat)
    if bound > guard:
        raise EngineError(
            f"topology census search space {bound} exceeds the guard {guard}")
    per_object = []
    for x in cat.objects:
        sieves = sieves_on(cat, x)
        top_sieve = maximal_sieve(cat, x)
        candidates = []
        for r in range(len(sieves) + 1):
            for subset in itertools.combinations(sieves, r):
                family = set(subset)
                if top_sieve not in family:
                    continue
                up_closed = all(t in family
                                for s in family for t in sieves
                                if s.members <= t.members)
                if up_closed:
                    candidates.append(family)
        per_object.append(candidates)
    out = []
    for combo in itertools.product(*per_object):
        covering = {x: fam for x, fam in zip(cat.objects, combo)}
        candidate = GrothendieckTopology(cat, covering)
        if not check_topology(cat, candidate):
            out.append(candidate)
    return out


def classify_topology(cat: FiniteCategory, top: GrothendieckTopology) -> FullSubcategory:
    """The unique strictly full Karoubian subcategory inducing the topology.

    A failure to classify would contradict the classification of
    topologies on a finite category, so it is reported loudly rather
    than absorbed.
    """
    for sub in strictly_full_karoubian_subcategories(cat):
        if subcategory_topology(cat, sub) == top:
            return sub
    raise ClassificationError(
        "no strictly full Karoubian subcategory induces this topology; "
        "the ambient category is likely not Karoubian")


def finest_topology_for(presheaf, cat: FiniteCategory | None = None) -> GrothendieckTopology:
    """The finest topology for which the presheaf satisfies the sheaf
    condition; uniqueness is verified per instance, not assumed."""
    from .sheaves import is_sheaf  # local import to avoid a cycle

    if cat is None:
        cat = presheaf.cat
    good = [t for t in enumerate_topologies(cat) if is_sheaf(presheaf, t)]
    maximal = [t for t in good if not any(t is not u and t.le(u) for u in good)]
    if not maximal:
        raise ClassificationError("no topology admits this presheaf as a sheaf")
    if len(maximal) > 1:
        raise ClassificationError(
            f"{len(maximal)} incomparable maximal topologies admit this presheaf; "
            "the finest one is not unique on this input")
    top = maximal[0]
    return GrothendieckTopology(cat, top.covering, label="J_N")
