"""Built-in worked example: the A2 path algebra and its triangular matrix algebra.

A is the path algebra of 1 -> 2; its doubling is the commutative-square
algebra whose modules are triples [X;Y]_f.  The bundle carries both full
module categories, the three extension-closed subcategories

    A_ext = add(P1 + S2),  B_ext = add([P1;0] + [P1;P1]_1 + [S2;0] + [0;P1]),
    C_ext = add(P1),

and the restricted and full six-functor recollements between them, with
every object resolvable by an ASCII label such as "[P1;P1]_1".
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

from .quivrep import Algebra, Arrow, Catalog, Module
from .excat import ExCat, Subcat
from .recol import RecollementData, TriangularData, build_triangular, six_functors

A2_ALGEBRA = Algebra(("1", "2"), (Arrow("a", "1", "2"),))


@dataclass
class FixtureBundle:
    p: int
    bound: int
    a_algebra: Algebra
    lambda_algebra: Algebra
    triangular: TriangularData
    mod_a: Catalog
    mod_lambda: Catalog
    full_a: ExCat
    full_b: ExCat
    full_c: ExCat
    a_ext: ExCat
    b_ext: ExCat
    c_ext: ExCat
    restricted: RecollementData
    full: RecollementData
    a_names: dict[str, int]
    lambda_names: dict[str, int]
    notes: list[str] = field(default_factory=list)

    def resolve(self, token: str, catalog: Catalog) -> int:
        """Catalog index from a label, an integer, or a (d1,d2,...) pattern."""
        names = self.a_names if catalog is self.mod_a else self.lambda_names
        if token in names:
            return names[token]
        if token.startswith("(") and token.endswith(")"):
            dims = tuple(int(t) for t in token[1:-1].split(","))
            hits = [i for i, m in enumerate(catalog.indecs) if m.dims == dims]
            if len(hits) == 1:
                return hits[0]
            raise KeyError(
                f"dimension vector {token} matches {len(hits)} indecomposables")
        try:
            idx = int(token)
        except ValueError:
            raise KeyError(f"unknown object label {token!r}") from None
        if not 0 <= idx < len(catalog):
            raise KeyError(f"catalog index {idx} out of range")
        return idx

    def parse_subcat(self, spec: str, catalog: Catalog) -> Subcat:
        """Comma-separated labels/indices/patterns; '-' or '' is the zero subcategory.

        Commas inside a (d1,d2,...) dimension-vector pattern do not split.
        """
        spec = spec.strip()
        if spec in ("-", "", "0"):
            return Subcat.zero(catalog)
        tokens = []
        depth = 0
        current = ""
        for ch in spec:
            if ch == "(":
                depth += 1
            elif ch == ")":
                depth -= 1
            if ch == "," and depth == 0:
                tokens.append(current)
                current = ""
            else:
                current += ch
        tokens.append(current)
        indices = {self.resolve(tok.strip(), catalog) for tok in tokens if tok.strip()}
        return Subcat.add(catalog, indices)


def _a_label(catalog: Catalog, m: Module) -> str:
    if m.is_zero():
        return "0"
    parts = []
    for idx, mult in sorted(catalog.decompose(m).items()):
        name = {(0, 1): "S2", (1, 0): "S1", (1, 1): "P1"}[catalog.indecs[idx].dims]
        parts.extend([name] * mult)
    return "+".join(parts)


def _lambda_label(bundle_mod_a: Catalog, tri: TriangularData, m: Module) -> str:
    t = tri.module_to_triple(m)
    xname = _a_label(bundle_mod_a, t.x)
    yname = _a_label(bundle_mod_a, t.y)
    if t.f.is_zero():
        sub = "0"
    elif t.f.is_isomorphism():
        sub = "1"
    else:
        sub = "f"
    return f"[{xname};{yname}]_{sub}"


@lru_cache(maxsize=None)
def example51_mod_a(p: int = 2, bound: int = 2):
    """(catalog, labels) for the one-arrow base algebra alone."""
    from .quivrep import enumerate_indecomposables

    mod_a = enumerate_indecomposables(A2_ALGEBRA, bound, p)
    a_names: dict[str, int] = {}
    for i, m in enumerate(mod_a.indecs):
        name = {(0, 1): "S2", (1, 0): "S1", (1, 1): "P1"}.get(m.dims)
        if name:
            a_names[name] = i
    for alias, name in (("P(1)", "P1"), ("S(1)", "S1"), ("S(2)", "S2")):
        if name in a_names:
            a_names[alias] = a_names[name]
    return mod_a, a_names


@lru_cache(maxsize=None)
def example51_mod_lambda(p: int = 2, bound: int = 2):
    """(triangular data, catalog, labels, notes) for the doubled algebra alone."""
    from .quivrep import enumerate_indecomposables

    mod_a, _ = example51_mod_a(p, bound)
    tri = build_triangular(A2_ALGEBRA)
    mod_lambda = enumerate_indecomposables(tri.algebra, bound, p)
    lambda_names: dict[str, int] = {}
    for i, m in enumerate(mod_lambda.indecs):
        lambda_names[_lambda_label(mod_a, tri, m)] = i
    notes = []
    if "[S1;P1]_f" in lambda_names:
        # the epimorphism P1 ->> S1 is often written with its own letter
        lambda_names["[S1;P1]_g"] = lambda_names["[S1;P1]_f"]
    if "[S2;S2]_1" in lambda_names and "[S2;S2]_0" not in lambda_names:
        notes.append(
            "the indecomposable with dimension vector (0,1,0,1) is [S2;S2]_1; "
            "a module [S2;S2]_0 would decompose as [S2;0] + [0;S2]"
        )
    return tri, mod_lambda, lambda_names, notes


@lru_cache(maxsize=None)
def build_example51(p: int = 2, bound: int = 2) -> FixtureBundle:
    """Deterministic bundle for the A2 / triangular-matrix worked example."""
    a_algebra = A2_ALGEBRA
    mod_a, a_names = example51_mod_a(p, bound)
    tri, mod_lambda, lambda_names, notes = example51_mod_lambda(p, bound)

    full_a = ExCat(mod_a, cap=2)
    # the full middle category keeps its conflation list tractable with
    # single-indecomposable ends; the restricted categories use cap 2
    full_b = ExCat(mod_lambda, cap=1)
    full_c = full_a

    a_ext = ExCat(mod_a, {a_names["P1"], a_names["S2"]}, cap=2)
    c_ext = ExCat(mod_a, {a_names["P1"]}, cap=2)
    b_members = {
        lambda_names["[P1;0]_0"],
        lambda_names["[P1;P1]_1"],
        lambda_names["[S2;0]_0"],
        lambda_names["[0;P1]_0"],
    }
    b_ext = ExCat(mod_lambda, b_members, cap=2)

    restricted = six_functors(a_ext, b_ext, c_ext, tri)
    full = six_functors(full_a, full_b, full_c, tri)

    return FixtureBundle(
        p=p, bound=bound,
        a_algebra=a_algebra, lambda_algebra=tri.algebra, triangular=tri,
        mod_a=mod_a, mod_lambda=mod_lambda,
        full_a=full_a, full_b=full_b, full_c=full_c,
        a_ext=a_ext, b_ext=b_ext, c_ext=c_ext,
        restricted=restricted, full=full,
        a_names=a_names, lambda_names=lambda_names,
        notes=notes,
    )
