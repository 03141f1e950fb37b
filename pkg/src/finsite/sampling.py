"""Seeded random instances for the property suites.

Random module-like objects are produced by free generation followed by
closure: start from a free module over the relevant algebra, cut down to
the span closure of random vectors (or divide by one), and twist the
result by random basis changes. Everything stays exactly valid by
construction, so no rejection sampling is needed. Random set presheaves
are congruence quotients of coproducts of representables, which are
functorial for the same reason.
"""

from __future__ import annotations

import random

from .algebras import AlgebraPresheaf, FiniteDimAlgebra, constant_algebra_presheaf, \
    field_algebra, skew_category_algebra
from .category import FiniteCategory, FullSubcategory
from .errors import EngineError
from .fields import (Matrix, col_space, hstack, inverse, is_invertible,
                     mat_mul, matrix, matrix_from_cols, solve_matrix,
                     unit_vec, zero_matrix)
from .modules import AlgebraModule, ModulePresheaf, to_module_presheaf, \
    transport_module_back
from .presheaves import LinearPresheaf, SetPresheaf
from .topology import GrothendieckTopology


def random_invertible_matrix(field, n: int, rng: random.Random) -> Matrix:
    if n == 0:
        return zero_matrix(field, 0, 0)
    while True:
        cand = matrix(field, [[field.rand(rng) for _ in range(n)] for _ in range(n)])
        if is_invertible(field, cand):
            return cand


# -- algebra modules ------------------------------------------------------


def regular_module(algebra: FiniteDimAlgebra) -> AlgebraModule:
    acts = [algebra.right_multiplication_matrix(unit_vec(algebra.field, algebra.dim, j))
            for j in range(algebra.dim)]
    return AlgebraModule(algebra, algebra.dim, acts, check=False)


def free_module(algebra: FiniteDimAlgebra, rank: int) -> AlgebraModule:
    k = algebra.field
    reg = regular_module(algebra)
    n = algebra.dim * rank
    acts = []
    for a in reg.actions:
        cells = [[k.zero] * n for _ in range(n)]
        for b in range(rank):
            off = b * algebra.dim
            for i in range(algebra.dim):
                for j in range(algebra.dim):
                    cells[off + i][off + j] = a.entry(i, j)
        acts.append(matrix(k, cells, cols=n))
    return AlgebraModule(algebra, n, acts, check=False)


def _span_closure(n: AlgebraModule, vectors) -> Matrix:
    """Canonical basis of the action-stable span of the given vectors."""
    k = n.field
    span = matrix_from_cols(k, [tuple(v) for v in vectors], rows=n.dim)
    span = col_space(k, span)
    while True:
        moved = [span] + [mat_mul(k, a, span) for a in n.actions]
        bigger = col_space(k, hstack(k, moved))
        if bigger.cols == span.cols:
            return bigger
        span = bigger


def submodule_closure(n: AlgebraModule, vectors) -> AlgebraModule:
    """The submodule generated by the given vectors, in its canonical basis."""
    k = n.field
    span = _span_closure(n, vectors)
    acts = []
    for a in n.actions:
        sol = solve_matrix(k, span, mat_mul(k, a, span))
        if sol is None:
            raise EngineError("span closure is not action-stable")
        acts.append(sol)
    return AlgebraModule(n.algebra, span.cols, acts, check=False)


def quotient_module(n: AlgebraModule, vectors) -> AlgebraModule:
    """The quotient of n by the submodule generated by the vectors."""
    k = n.field
    span = _span_closure(n, vectors)
    complement = []
    current = span
    for i in range(n.dim):
        probe = hstack(k, [current,
                           matrix_from_cols(k, [unit_vec(k, n.dim, i)], rows=n.dim)])
        grown = col_space(k, probe)
        if grown.cols > current.cols:
            complement.append(i)
            current = grown
    basis_cols = [span.col(c) for c in range(span.cols)] + \
                 [unit_vec(k, n.dim, i) for i in complement]
    t = matrix_from_cols(k, basis_cols, rows=n.dim)
    t_inv = inverse(k, t)
    if t_inv is None:
        raise EngineError("complement construction failed")
    q = len(complement)
    proj_rows = t_inv.data[span.cols:]
    proj = Matrix(q, n.dim, proj_rows)
    inc = matrix_from_cols(k, [unit_vec(k, n.dim, i) for i in complement], rows=n.dim)
    acts = [mat_mul(k, proj, mat_mul(k, a, inc)) for a in n.actions]
    return AlgebraModule(n.algebra, q, acts, check=False)


def twist_algebra_module(n: AlgebraModule, p: Matrix) -> AlgebraModule:
    k = n.field
    p_inv = inverse(k, p)
    if p_inv is None:
        raise EngineError("twist matrix is not invertible")
    acts = [mat_mul(k, p, mat_mul(k, a, p_inv)) for a in n.actions]
    return AlgebraModule(n.algebra, n.dim, acts, check=False)


def random_algebra_module(algebra: FiniteDimAlgebra, rng: random.Random,
                          *, max_rank: int = 1) -> AlgebraModule:
    k = algebra.field
    rank = rng.randint(1, max_rank)
    free = free_module(algebra, rank)
    if free.dim == 0:
        return free
    mode = rng.choice(("free", "sub", "quot", "sub", "quot"))
    base = free
    if mode != "free":
        count = rng.randint(1, 2) if mode == "sub" else 1
        vectors = [tuple(k.of(k.rand(rng)) for _ in range(free.dim))
                   for _ in range(count)]
        if all(all(c == k.zero for c in v) for v in vectors):
            vectors[0] = unit_vec(k, free.dim, rng.randrange(free.dim))
        base = submodule_closure(free, vectors) if mode == "sub" \
            else quotient_module(free, vectors)
        if base.dim == 0:
            base = free
    return twist_algebra_module(base, random_invertible_matrix(k, base.dim, rng))


# -- module presheaves ----------------------------------------------------


def twist_module_presheaf(m: ModulePresheaf, twists: dict) -> ModulePresheaf:
    """Conjugate every value by an invertible matrix per object."""
    k = m.field
    invs = {}
    for x, p in twists.items():
        p_inv = inverse(k, p)
        if p_inv is None:
            raise EngineError(f"twist at {x!r} is not invertible")
        invs[x] = p_inv
    mats = {}
    for mor in m.cat.morphisms:
        mats[mor.name] = mat_mul(k, twists[mor.dom],
                                 mat_mul(k, m.space.mat(mor.name), invs[mor.cod]))
    space = LinearPresheaf(m.cat, k, dict(m.space.dims), mats)
    actions = {x: tuple(mat_mul(k, twists[x], mat_mul(k, a, invs[x]))
                        for a in m.actions[x])
               for x in m.cat.objects}
    return ModulePresheaf(m.r, space, actions, check=False)


def random_module_presheaf(r: AlgebraPresheaf, rng: random.Random,
                           *, max_rank: int = 1,
                           skew=None) -> ModulePresheaf:
    if skew is None:
        skew = skew_category_algebra(r.cat, r)
    n = random_algebra_module(skew, rng, max_rank=max_rank)
    m = to_module_presheaf(n, check=False)
    twists = {x: random_invertible_matrix(r.field, m.dim(x), rng)
              for x in r.cat.objects}
    return twist_module_presheaf(m, twists)


def random_sheaf_module(r: AlgebraPresheaf, sub: FullSubcategory,
                        top: GrothendieckTopology, rng: random.Random,
                        *, max_rank: int = 1) -> ModulePresheaf:
    """A random sheaf of modules for a subcategory topology, produced by
    inverse transport from a random module over the subcategory."""
    skew_d = skew_category_algebra(sub.category, r.restrict(sub))
    n = random_algebra_module(skew_d, rng, max_rank=max_rank)
    m = transport_module_back(n, r, sub, top)
    twists = {x: random_invertible_matrix(r.field, m.dim(x), rng)
              for x in r.cat.objects}
    return twist_module_presheaf(m, twists)


def random_linear_presheaf(cat: FiniteCategory, field, rng: random.Random,
                           *, max_rank: int = 1) -> LinearPresheaf:
    """Random functorial linear presheaf: the underlying space of a random
    module presheaf over the constant field coefficients."""
    r = constant_algebra_presheaf(cat, field_algebra(field))
    return random_module_presheaf(r, rng, max_rank=max_rank).space


# -- set presheaves --------------------------------------------------------


def random_set_presheaf(cat: FiniteCategory, rng: random.Random,
                        *, max_generators: int = 2, max_constants: int = 1,
                        max_relations: int = 2) -> SetPresheaf:
    """Quotient of a coproduct of representables and constants by a random
    precomposition-closed congruence; functorial by construction."""
    gens = [rng.choice(cat.objects) for _ in range(rng.randint(1, max_generators))]
    constants = rng.randint(0, max_constants)

    def elements(x):
        out = [("rep", i, u) for i, c in enumerate(gens) for u in cat.hom(x, c)]
        out.extend(("const", s, None) for s in range(constants))
        return out

    def act(f, elem):
        kind, i, u = elem
        if kind == "const":
            return elem
        return ("rep", i, cat.compose(u, f))

    # Random identifications, closed under precomposition (union-find).
    parent = {}

    def find(a):
        parent.setdefault(a, a)
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    def union(a, b):
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[max(ra, rb, key=repr)] = min(ra, rb, key=repr)

    for _ in range(rng.randint(0, max_relations)):
        x = rng.choice(cat.objects)
        pool = elements(x)
        if len(pool) < 2:
            continue
        a, b = rng.sample(pool, 2)
        stack = [(x, a, b)]
        while stack:
            y, p, q = stack.pop()
            if find((y, p)) == find((y, q)):
                continue
            union((y, p), (y, q))
            for v in cat.morphisms:
                if v.cod != y:
                    continue
                stack.append((v.dom, act(v.name, p), act(v.name, q)))

    values = {}
    classes = {}
    for x in cat.objects:
        reps = []
        for elem in elements(x):
            root = find((x, elem))
            if root not in classes:
                classes[root] = f"{x}#{len(reps)}"
                reps.append(root)
        values[x] = tuple(classes[r] for r in reps)
    name_of = {}
    for x in cat.objects:
        for elem in elements(x):
            name_of[(x, elem)] = classes[find((x, elem))]
    maps = {}
    for m in cat.morphisms:
        table = {}
        for elem in elements(m.cod):
            table[name_of[(m.cod, elem)]] = name_of[(m.dom, act(m.name, elem))]
        maps[m.name] = table
    return SetPresheaf(cat, values, maps)
