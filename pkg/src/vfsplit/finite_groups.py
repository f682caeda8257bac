"""Finite groups stored as multiplication tables, and morphisms between them.

Element 0 is always the identity.  Orders in this package are tiny, so
everything is done by exhaustion over the table.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import permutations
from typing import Optional, Sequence


class GroupError(ValueError):
    pass


@dataclass(frozen=True)
class ValidationReport:
    ok: bool
    reason: str = ""
    witness: tuple = ()

    def __bool__(self) -> bool:
        return self.ok


def check_group_axioms(table: Sequence[Sequence[int]]) -> ValidationReport:
    n = len(table)
    if n == 0:
        raise GroupError("empty table")
    for row in table:
        if len(row) != n:
            raise GroupError("table is not square")
        for x in row:
            if not (isinstance(x, int) and 0 <= x < n):
                raise GroupError(f"entry {x!r} out of range")
    for i in range(n):
        if table[0][i] != i or table[i][0] != i:
            return ValidationReport(False, "0 is not a two-sided identity", (i,))
    for i in range(n):
        if not any(table[i][j] == 0 and table[j][i] == 0 for j in range(n)):
            return ValidationReport(False, f"{i} has no inverse", (i,))
    for i in range(n):
        for j in range(n):
            for k in range(n):
                if table[table[i][j]][k] != table[i][table[j][k]]:
                    return ValidationReport(False, "associativity fails", (i, j, k))
    # with identity, inverses and associativity the table is a Latin square
    return ValidationReport(True)


@dataclass(frozen=True, eq=False)
class FiniteGroup:
    table: tuple
    element_names: Optional[tuple] = None
    _inv: tuple = field(default=(), repr=False)

    def __post_init__(self):
        table = tuple(tuple(r) for r in self.table)
        object.__setattr__(self, "table", table)
        report = check_group_axioms(table)
        if not report:
            raise GroupError(f"not a group: {report.reason} {report.witness}")
        n = len(table)
        inv = tuple(next(j for j in range(n) if table[i][j] == 0) for i in range(n))
        object.__setattr__(self, "_inv", inv)
        if self.element_names is not None:
            names = tuple(self.element_names)
            if len(names) != n or len(set(names)) != n:
                raise GroupError("element_names must be distinct, one per element")
            object.__setattr__(self, "element_names", names)

    @property
    def order(self) -> int:
        return len(self.table)

    def mul(self, x: int, y: int) -> int:
        return self.table[x][y]

    def inv(self, x: int) -> int:
        return self._inv[x]

    def element_order(self, x: int) -> int:
        k, y = 1, x
        while y != 0:
            y = self.mul(y, x)
            k += 1
        return k

    def is_trivial(self) -> bool:
        return self.order == 1

    def name(self, x: int) -> str:
        if self.element_names is not None:
            return self.element_names[x]
        return str(x)

    def generated(self, gens: Sequence[int]) -> frozenset:
        seen = {0}
        frontier = [0]
        while frontier:
            nxt = []
            for x in frontier:
                for g in gens:
                    y = self.mul(x, g)
                    if y not in seen:
                        seen.add(y)
                        nxt.append(y)
            frontier = nxt
        return frozenset(seen)

    def to_json(self) -> dict:
        d = {"order": self.order, "table": [list(r) for r in self.table]}
        if self.element_names is not None:
            d["names"] = list(self.element_names)
        return d

    def __eq__(self, other):
        return isinstance(other, FiniteGroup) and self.table == other.table

    def __hash__(self):
        return hash(self.table)

    def __repr__(self):
        return f"FiniteGroup(order={self.order})"


def make_cyclic(n: int) -> FiniteGroup:
    if n < 1:
        raise GroupError("cyclic group order must be positive")
    return FiniteGroup(tuple(tuple((i + j) % n for j in range(n)) for i in range(n)))


def make_symmetric(k: int) -> FiniteGroup:
    """S_k with element 0 the identity permutation."""
    perms = list(permutations(range(k)))
    index = {p: i for i, p in enumerate(perms)}
    # compose: (p*q)(x) = p(q(x))
    table = [[index[tuple(p[q[x]] for x in range(k))] for q in perms] for p in perms]
    return FiniteGroup(tuple(tuple(r) for r in table))


def trivial_group() -> FiniteGroup:
    return make_cyclic(1)


def group_from_json(d: dict) -> FiniteGroup:
    if "cyclic" in d:
        g = make_cyclic(int(d["cyclic"]))
        if "names" in d:
            g = FiniteGroup(g.table, tuple(d["names"]))
        return g
    if "symmetric" in d:
        return make_symmetric(int(d["symmetric"]))
    if "table" in d:
        table = d["table"]
        if "order" in d and d["order"] != len(table):
            raise GroupError("order does not match table size")
        names = tuple(d["names"]) if "names" in d else None
        return FiniteGroup(tuple(tuple(r) for r in table), names)
    raise GroupError(f"cannot read group from {d!r}")


@dataclass(frozen=True, eq=False)
class Morphism:
    source: FiniteGroup
    target: FiniteGroup
    map: tuple

    def __post_init__(self):
        m = tuple(self.map)
        object.__setattr__(self, "map", m)
        if len(m) != self.source.order:
            raise GroupError("morphism map has wrong length")
        if any(not (0 <= x < self.target.order) for x in m):
            raise GroupError("morphism image out of range")
        if m[0] != 0:
            raise GroupError("morphism does not fix the identity")
        s, t = self.source, self.target
        for g in range(s.order):
            for h in range(s.order):
                if m[s.mul(g, h)] != t.mul(m[g], m[h]):
                    raise GroupError(f"not a homomorphism at ({g}, {h})")

    def __call__(self, x: int) -> int:
        return self.map[x]

    def is_injective(self) -> bool:
        return len(set(self.map)) == len(self.map)

    def non_injective_witness(self) -> Optional[tuple]:
        seen = {}
        for g, x in enumerate(self.map):
            if x in seen:
                return (seen[x], g)
            seen[x] = g
        return None

    def image(self) -> frozenset:
        return frozenset(self.map)

    def preimage(self, x: int) -> Optional[int]:
        try:
            return self.map.index(x)
        except ValueError:
            return None

    def is_bijective(self) -> bool:
        return self.is_injective() and self.source.order == self.target.order

    def __eq__(self, other):
        return (isinstance(other, Morphism) and self.source == other.source
                and self.target == other.target and self.map == other.map)

    def __hash__(self):
        return hash(self.map)


def identity_morphism(g: FiniteGroup) -> Morphism:
    return Morphism(g, g, tuple(range(g.order)))


def trivial_morphism(target: FiniteGroup) -> Morphism:
    return Morphism(trivial_group(), target, (0,))


def subgroup_index(m: Morphism) -> int:
    if not m.is_injective():
        raise GroupError("subgroup_index needs an injective morphism")
    return m.target.order // m.source.order


def left_coset_reps(m: Morphism) -> tuple:
    """Smallest element of each left coset x*im(m), in increasing order."""
    image = sorted(m.image())
    g = m.target
    reps, covered = [], set()
    for x in range(g.order):
        if x in covered:
            continue
        reps.append(x)
        covered.update(g.mul(x, h) for h in image)
    return tuple(reps)


def find_embeddings(source: FiniteGroup, target: FiniteGroup) -> list:
    """All injective homomorphisms, by backtracking (tiny orders only)."""
    out = []
    n = source.order

    def extend(assign):
        if len(assign) == n:
            try:
                m = Morphism(source, target, tuple(assign))
            except GroupError:
                return
            if m.is_injective():
                out.append(m)
            return
        used = set(assign)
        for y in range(target.order):
            if y in used:
                continue
            if target.element_order(y) != source.element_order(len(assign)):
                continue
            extend(assign + [y])

    extend([0])
    return out
