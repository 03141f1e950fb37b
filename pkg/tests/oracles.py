"""Independent oracles used by the test suite.

Each of these recomputes a quantity along a different route than the
library: word reduction for the involution presentation, long-form
colimits for half-sheafification, an unpruned topology census, pointwise
coset maps for orbit categories, a direct category-algebra table, and a
searched basis change onto the 2x2 matrix algebra.
"""

from __future__ import annotations

import itertools

from finsite.category import FiniteCategory
from finsite.fields import (Matrix, matrix, matrix_from_cols, rank, solve,
                            unit_vec, vec_sub, zero_vec)
from finsite.sheaves import (linear_matching_families, member_order,
                             set_matching_families)
from finsite.sieves import maximal_sieve, sieve_sort_key, sieves_on
from finsite.topology import GrothendieckTopology, check_topology


# -- word reduction for the involution presentation ------------------------


def involution_words(max_len: int = 6):
    """Close {h: x->x, f: x->y} under h h -> empty, by brute-force reduction.

    Words are tuples of generators applied left to right. Returns the set
    of reduced words per (source, target) pair.
    """
    types = {"h": ("x", "x"), "f": ("x", "y")}

    def word_type(word):
        src = "x"
        at = src
        for gen in word:
            d, c = types[gen]
            if d != at:
                return None
            at = c
        return (src, at)

    def reduce_word(word):
        word = list(word)
        changed = True
        while changed:
            changed = False
            for i in range(len(word) - 1):
                if word[i] == "h" and word[i + 1] == "h":
                    del word[i:i + 2]
                    changed = True
                    break
        return tuple(word)

    reduced = {}
    for length in range(max_len + 1):
        for word in itertools.product(("h", "f"), repeat=length):
            t = word_type(word)
            if t is None:
                continue
            reduced.setdefault(t, set()).add(reduce_word(word))
    return reduced


# -- long-form colimit for half-sheafification ------------------------------


def _restrict_family_set(cat, big_sieve, small_sieve, family):
    big = member_order(cat, big_sieve)
    index = {u: i for i, u in enumerate(big)}
    return tuple(family[index[u]] for u in member_order(cat, small_sieve))


def colimit_families_set(f, top: GrothendieckTopology, x: str):
    """Equivalence classes of (covering sieve, matching family) pairs under
    agreement on a common covering refinement."""
    cat = f.cat
    sieves = sorted(top.covering[x], key=lambda s: sieve_sort_key(cat, s))
    items = []
    for s in sieves:
        for fam in set_matching_families(f, s):
            items.append((s, fam))
    parent = list(range(len(items)))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i, (s1, f1) in enumerate(items):
        for j, (s2, f2) in enumerate(items):
            if j <= i:
                continue
            inter = s1.members & s2.members
            refinement = next((s for s in sieves if s.members == inter), None)
            if refinement is None:
                continue
            if _restrict_family_set(cat, s1, refinement, f1) == \
                    _restrict_family_set(cat, s2, refinement, f2):
                ri, rj = find(i), find(j)
                if ri != rj:
                    parent[max(ri, rj)] = min(ri, rj)
    classes = {}
    for i in range(len(items)):
        classes.setdefault(find(i), []).append(items[i])
    return list(classes.values())


def colimit_dimension_linear(f, top: GrothendieckTopology, x: str) -> int:
    """Dimension of the long-form colimit: the direct sum of the family
    spaces over all covering sieves, divided by the agreement relations."""
    cat, k = f.cat, f.field
    sieves = sorted(top.covering[x], key=lambda s: sieve_sort_key(cat, s))
    spaces = [linear_matching_families(f, s) for s in sieves]
    offsets = []
    total = 0
    for sp in spaces:
        offsets.append(total)
        total += sp.dim
    relations = []
    for i, si in enumerate(sieves):
        big_members = member_order(cat, si)
        big_index = {u: t for t, u in enumerate(big_members)}
        for j, sj in enumerate(sieves):
            if i == j or not sj.members <= si.members:
                continue
            # relation: class of (m in slot i) equals (m restricted in slot j)
            small = member_order(cat, sj)
            for c in range(spaces[i].dim):
                fam = spaces[i].basis.col(c)
                small_vec = []
                for u in small:
                    t = big_index[u]
                    off = spaces[i].offsets[t]
                    small_vec.extend(fam[off:off + spaces[i].block_dims[t]])
                coords = solve(k, spaces[j].basis, small_vec)
                assert coords is not None, "restriction left the family space"
                rel = [k.zero] * total
                rel[offsets[i] + c] = k.one
                for t, val in enumerate(coords):
                    rel[offsets[j] + t] = k.sub(rel[offsets[j] + t], val)
                relations.append(rel)
    if not relations:
        return total
    return total - rank(k, matrix(k, relations, cols=total))


# -- unpruned topology census ------------------------------------------------


def unpruned_topologies(cat: FiniteCategory):
    """Every covering assignment containing the maximal sieve, filtered by
    the axiom checker, with no up-closure pruning at all."""
    per_object = []
    for x in cat.objects:
        sieves = sieves_on(cat, x)
        top_sieve = maximal_sieve(cat, x)
        others = [s for s in sieves if s != top_sieve]
        families = []
        for r in range(len(others) + 1):
            for subset in itertools.combinations(others, r):
                families.append(frozenset(subset) | {top_sieve})
        per_object.append(families)
    out = []
    for combo in itertools.product(*per_object):
        covering = dict(zip(cat.objects, combo))
        cand = GrothendieckTopology(cat, covering)
        if not check_topology(cat, cand):
            out.append(cand)
    return out


# -- pointwise coset maps for orbit categories --------------------------------


def orbit_morphism_function(orbit_cat, name: str) -> dict:
    """The actual map on left cosets induced by an orbit-category morphism."""
    group = orbit_cat.group
    src = orbit_cat.object_subgroup[orbit_cat.dom(name)]
    dst = orbit_cat.object_subgroup[orbit_cat.cod(name)]
    coset = orbit_cat.morphism_coset[name]
    g = min(coset, key=lambda a: group.index[a])
    table = {}
    for x in group.elements:
        src_coset = group.coset(x, src)
        image = group.coset(group.mult(x, g), dst)
        key = frozenset(src_coset)
        if key in table:
            assert table[key] == frozenset(image), "map is not well defined"
        table[key] = frozenset(image)
    return table


# -- direct category algebra table --------------------------------------------


def category_algebra_table(cat: FiniteCategory, field):
    """Structure constants of the category algebra: basis the morphisms,
    product composition-or-zero."""
    k = field
    n = len(cat.morphisms)
    idx = {m.name: i for i, m in enumerate(cat.morphisms)}
    table = []
    for g in cat.morphisms:
        row = []
        for f in cat.morphisms:
            cell = [k.zero] * n
            if g.dom == f.cod:
                cell[idx[cat.compose(g.name, f.name)]] = k.one
            row.append(tuple(cell))
        table.append(tuple(row))
    unit = [k.zero] * n
    for x in cat.objects:
        unit[idx[cat.id_of(x)]] = k.one
    return tuple(table), tuple(unit)


# -- searched basis change onto the matrix algebra ----------------------------


def _left_mul_matrix(alg, v) -> Matrix:
    k = alg.field
    cols = [alg.mul(v, unit_vec(k, alg.dim, j)) for j in range(alg.dim)]
    return matrix_from_cols(k, cols, rows=alg.dim)


def searched_matrix_algebra_isomorphism(skew, target):
    """Brute-force search for a unital algebra isomorphism from a
    4-dimensional skew algebra onto the target matrix algebra.

    Structure-respecting pruning: the two object summand idempotents must
    land on complementary idempotents, the two twisted basis elements
    square to zero, and the image of the last basis element is solved
    linearly from the products with the committed part before the full
    multiplicative check.
    """
    k = skew.field
    assert skew.dim == 4 and target.dim == 4
    elements = [tuple(c) for c in itertools.product(k.elements(), repeat=4)]
    zero = zero_vec(k, 4)
    idempotents = [v for v in elements
                   if target.mul(v, v) == v and v != zero and v != target.unit]
    square_zero = [v for v in elements if target.mul(v, v) == zero and v != zero]

    def committed_ok(images):
        for i in images:
            for j in images:
                prod = skew.mul_basis(i, j)
                if any(c != k.zero and t not in images
                       for t, c in enumerate(prod)):
                    continue  # product leaves the committed span, check later
                lhs = target.mul(images[i], images[j])
                rhs = zero
                for t, c in enumerate(prod):
                    if c != k.zero:
                        rhs = tuple(k.add(a, k.mul(c, b))
                                    for a, b in zip(rhs, images[t]))
                if lhs != rhs:
                    return False
        return True

    def solve_last(images, last):
        """Linear system for phi(b_last) from products with committed parts."""
        rows = []
        rhs = []
        for i in images:
            for (a, b) in ((i, last), (last, i)):
                prod = skew.mul_basis(a, b)
                if prod[last] != k.zero and any(
                        c != k.zero and t != last and t not in images
                        for t, c in enumerate(prod)):
                    return None
                known = zero
                for t, c in enumerate(prod):
                    if t in images and c != k.zero:
                        known = tuple(k.add(u, k.mul(c, v))
                                      for u, v in zip(known, images[t]))
                mult = _left_mul_matrix(target, images[i]) if a == i \
                    else target.right_multiplication_matrix(images[i])
                for rr in range(4):
                    row = list(mult.data[rr])
                    row[rr] = k.sub(row[rr], prod[last])
                    rows.append(row)
                    rhs.append(known[rr])
        sol = solve(k, matrix(k, rows, cols=4), tuple(rhs))
        return sol

    for p in idempotents:
        base = {0: p, 1: vec_sub(k, target.unit, p)}
        if not committed_ok(base):
            continue
        for q in square_zero:
            images = dict(base)
            images[2] = q
            if not committed_ok(images):
                continue
            last = solve_last(images, 3)
            if last is None:
                continue
            images[3] = last
            if not committed_ok(images):
                continue
            change = matrix_from_cols(k, [images[i] for i in range(4)], rows=4)
            if rank(k, change) == 4:
                return change
    return None
