"""Graphs of (-2)-curves: extended-Dynkin recognition, extremality of fiber
configurations, Vinberg's finite-index criterion, critical-subgraph
detection, and DOT output.

Vertices are string labels; edges carry positive multiplicities (a double
edge is intersection number 2).  Everything is immutable.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import permutations
from typing import Optional

from . import catalog


class PreconditionViolated(ValueError):
    """Vinberg's criterion was fed a graph outside its hypotheses."""


@dataclass(frozen=True)
class DualGraph:
    vertices: tuple          # sorted labels
    edges: tuple             # sorted ((u, v), m) with u < v, m >= 1

    @staticmethod
    def make(vertices, edge_list) -> "DualGraph":
        vs = set(vertices)
        em: dict = {}
        for u, v, *rest in edge_list:
            m = rest[0] if rest else 1
            if u == v:
                raise ValueError("no self-loops in a dual graph")
            if m < 0:
                raise ValueError("multiplicities are nonnegative")
            if m == 0:
                continue
            key = (u, v) if u < v else (v, u)
            em[key] = em.get(key, 0) + 0  # keep first assignment style simple
            em[key] = m
            vs.add(u)
            vs.add(v)
        return DualGraph(tuple(sorted(vs)),
                         tuple(sorted((k, m) for k, m in em.items())))

    def mult(self, u: str, v: str) -> int:
        if u == v:
            return 0
        key = (u, v) if u < v else (v, u)
        for k, m in self.edges:
            if k == key:
                return m
        return 0

    def neighbors(self, u: str) -> list:
        out = []
        for (a, b), m in self.edges:
            if a == u:
                out.append(b)
            elif b == u:
                out.append(a)
        return out

    def degree(self, u: str) -> int:
        """Number of distinct neighbors (multiplicities not counted)."""
        return len(self.neighbors(u))

    def weighted_degree(self, u: str) -> int:
        return sum(m for (a, b), m in self.edges if u in (a, b))

    def induced(self, subset) -> "DualGraph":
        sub = set(subset)
        edges = [((a, b), m) for (a, b), m in self.edges
                 if a in sub and b in sub]
        return DualGraph(tuple(sorted(sub)), tuple(sorted(edges)))

    def is_connected(self) -> bool:
        if not self.vertices:
            return False
        seen = {self.vertices[0]}
        stack = [self.vertices[0]]
        while stack:
            u = stack.pop()
            for v in self.neighbors(u):
                if v not in seen:
                    seen.add(v)
                    stack.append(v)
        return len(seen) == len(self.vertices)

    def components(self) -> list:
        left = set(self.vertices)
        out = []
        while left:
            start = min(left)
            seen = {start}
            stack = [start]
            while stack:
                u = stack.pop()
                for v in self.neighbors(u):
                    if v in left and v not in seen:
                        seen.add(v)
                        stack.append(v)
            out.append(tuple(sorted(seen)))
            left -= seen
        return out

    def relabel(self, mapping: dict) -> "DualGraph":
        return DualGraph.make([mapping[v] for v in self.vertices],
                              [(mapping[a], mapping[b], m)
                               for (a, b), m in self.edges])

    def max_multiplicity(self) -> int:
        return max((m for _, m in self.edges), default=0)


# ---------------------------------------------------------------------------
# Dynkin classification


@dataclass(frozen=True)
class DynkinLabel:
    family: str   # 'A', 'D', 'E' or the extended 'A~', 'D~', 'E~'
    rank: int

    @property
    def extended(self) -> bool:
        return self.family.endswith("~")

    def vertex_count(self) -> int:
        return self.rank + (1 if self.extended else 0)

    def __str__(self) -> str:
        return f"{self.family}{self.rank}"


NOT_DYNKIN = None  # classify_component returns None for NotDynkin


def classify_component(g: DualGraph, subset=None) -> Optional[DynkinLabel]:
    """Label of the induced subgraph, or None when it is not (extended)
    Dynkin of type A-D-E."""
    sub = g if subset is None else g.induced(subset)
    n = len(sub.vertices)
    if n == 0 or not sub.is_connected():
        return NOT_DYNKIN
    if sub.max_multiplicity() >= 3:
        return NOT_DYNKIN
    doubles = [(k, m) for k, m in sub.edges if m == 2]
    if doubles:
        # the only multiple-edge diagram in range: the A~1 pair
        if n == 2 and len(sub.edges) == 1:
            return DynkinLabel("A~", 1)
        return NOT_DYNKIN
    edge_count = len(sub.edges)
    degs = sorted(sub.degree(v) for v in sub.vertices)
    if edge_count == n:  # exactly one cycle
        if all(d == 2 for d in degs):
            return DynkinLabel("A~", n - 1) if n >= 3 else NOT_DYNKIN
        return NOT_DYNKIN
    if edge_count != n - 1:
        return NOT_DYNKIN
    # a tree
    branch = [v for v in sub.vertices if sub.degree(v) >= 3]
    if not branch:
        return DynkinLabel("A", n)
    if len(branch) == 1:
        v = branch[0]
        if sub.degree(v) == 4:
            return DynkinLabel("D~", 4) if n == 5 else NOT_DYNKIN
        if sub.degree(v) != 3:
            return NOT_DYNKIN
        arms = sorted(_arm_lengths(sub, v), reverse=True)
        if arms[1] == 1 and arms[2] == 1:
            return DynkinLabel("D", n)
        key = tuple(arms)
        table = {(2, 2, 1): DynkinLabel("E", 6),
                 (3, 2, 1): DynkinLabel("E", 7),
                 (4, 2, 1): DynkinLabel("E", 8),
                 (2, 2, 2): DynkinLabel("E~", 6),
                 (3, 3, 1): DynkinLabel("E~", 7),
                 (5, 2, 1): DynkinLabel("E~", 8)}
        return table.get(key, NOT_DYNKIN)
    if len(branch) == 2:
        a, b = branch
        if sub.degree(a) != 3 or sub.degree(b) != 3:
            return NOT_DYNKIN
        arms_a = sorted(_arm_lengths(sub, a))
        arms_b = sorted(_arm_lengths(sub, b))
        if arms_a[0] == arms_a[1] == 1 and arms_b[0] == arms_b[1] == 1:
            return DynkinLabel("D~", n - 1)
        return NOT_DYNKIN
    return NOT_DYNKIN


def _arm_lengths(g: DualGraph, center: str) -> list:
    out = []
    for first in g.neighbors(center):
        length = 1
        prev, cur = center, first
        while True:
            nxt = [w for w in g.neighbors(cur) if w != prev]
            if len(nxt) != 1:
                break
            prev, cur = cur, nxt[0]
            length += 1
        out.append(length)
    return out


def is_extremal_fiber_config(labels) -> bool:
    """Shioda-Tate: the fiber-component lattice has rank 9."""
    total = 0
    for lbl in labels:
        if not lbl.extended:
            raise ValueError("extremality test expects extended labels")
        total += lbl.vertex_count() - 1
    return total + 1 == 9


# ---------------------------------------------------------------------------
# Vinberg's criterion


def _connected_subsets(g: DualGraph, max_size: int):
    """All connected vertex subsets of size 2..max_size, each once."""
    verts = list(g.vertices)
    index = {v: i for i, v in enumerate(verts)}
    for i, start in enumerate(verts):
        # connected subsets whose minimal vertex is `start`
        def grow(current: frozenset, frontier: set, banned: set):
            if len(current) >= 2:
                yield current
            if len(current) == max_size:
                return
            frontier = sorted(frontier)
            local_banned = set(banned)
            for v in frontier:
                if v in local_banned:
                    continue
                new_frontier = {w for w in g.neighbors(v)
                                if index[w] > i and w not in current
                                and w not in local_banned}
                yield from grow(current | {v},
                                (set(frontier) | new_frontier) - current - {v}
                                - local_banned,
                                set(local_banned))
                local_banned.add(v)

        start_frontier = {w for w in g.neighbors(start) if index[w] > i}
        yield from grow(frozenset([start]), start_frontier, set())


def vinberg_check(g: DualGraph, char: int = 0):
    """Finite-index test: every extended-Dynkin subdiagram must induce an
    extremal fibration whose full singular-fiber dual graph sits inside g.

    Returns (True, None) or (False, witness string).
    """
    if g.max_multiplicity() >= 3:
        raise PreconditionViolated("triple edges are outside Vinberg's criterion")
    if not g.vertices:
        raise PreconditionViolated("empty graph has no fiber configuration")
    found_fiber = False
    for subset in _connected_subsets(g, min(13, len(g.vertices))):
        lbl = classify_component(g, subset)
        if lbl is NOT_DYNKIN or not lbl.extended:
            continue
        found_fiber = True
        ok, why = _fiber_complement_check(g, subset, lbl, char)
        if not ok:
            return False, why
    if not found_fiber:
        raise PreconditionViolated("no fiber configuration in the graph")
    return True, None


def _fiber_complement_check(g: DualGraph, fiber_subset, lbl, char):
    fiber = set(fiber_subset)
    rest = []
    for v in g.vertices:
        if v in fiber:
            continue
        if all(g.mult(v, u) == 0 for u in fiber):
            rest.append(v)
    comp_labels = []
    complement = g.induced(rest)
    for comp in complement.components():
        clbl = classify_component(complement, comp)
        if clbl is NOT_DYNKIN or not clbl.extended:
            return False, (f"subdiagram {lbl} at {sorted(fiber)}: companion "
                           f"component {comp} is not a full fiber diagram")
        comp_labels.append(clbl)
    fibers = tuple(sorted(_as_fiber(x) for x in [lbl] + comp_labels))
    entry = _catalog_match(fibers, char)
    if entry is None:
        return False, (f"subdiagram {lbl} at {sorted(fiber)}: fibers "
                       f"{[str(x) for x in [lbl] + comp_labels]} do not form "
                       f"an extremal fibration in characteristic {char}")
    return True, None


def _as_fiber(lbl: DynkinLabel) -> tuple:
    if lbl.family == "A~":
        return ("I", lbl.rank + 1)
    if lbl.family == "D~":
        return ("I*", lbl.rank - 4)
    return ("IV*", 0) if lbl.rank == 6 else (
        ("III*", 0) if lbl.rank == 7 else ("II*", 0))


def _catalog_match(fibers: tuple, char: int):
    """Entry whose visible diagram multiset matches; the III/IV fiber types
    share dual graphs with I2/I3, so both readings are attempted."""
    variants = {fibers}
    # A~1 can be a III fiber, A~2 a IV fiber (graphs cannot tell them apart)
    def expand(fset):
        outs = [[]]
        for sym, n in fset:
            alts = [(sym, n)]
            if (sym, n) == ("I", 2):
                alts.append(("III", 0))
            if (sym, n) == ("I", 3):
                alts.append(("IV", 0))
            outs = [o + [a] for o in outs for a in alts]
        return {tuple(sorted(o)) for o in outs}

    for cand in expand(fibers):
        entry = catalog.entry_for_fibers(cand, char)
        if entry is not None:
            return entry
    return None


# ---------------------------------------------------------------------------
# the seven critical subgraphs (adjacency transcribed from the figures)


def _crit_I() -> DualGraph:
    edges = [("e1", "e2"), ("e2", "e3"), ("e3", "e4"), ("e4", "e5"),
             ("e5", "e6"), ("e6", "e7"), ("e4", "e0"),
             ("n", "e1"), ("n", "e7"), ("n", "b1"), ("b1", "b2", 2)]
    return DualGraph.make([], edges)


def _crit_II() -> DualGraph:
    edges = [("d1", "d3"), ("d2", "d3"), ("d3", "d4"), ("d4", "d5"),
             ("d4", "d6"), ("n", "d5"), ("n", "d6"),
             ("n", "a1"), ("a1", "a2"), ("a2", "a3"), ("a3", "a4"),
             ("a4", "a1")]
    return DualGraph.make([], edges)


def _crit_III() -> DualGraph:
    edges = [("p1", "p2"), ("p2", "p3"), ("p3", "p4"), ("p4", "p1"),
             ("q1", "q2"), ("q2", "q3"), ("q3", "q4"), ("q4", "q1"),
             ("n", "p1"), ("n", "q1"),
             ("n", "c1", 2), ("c1", "c2", 2),
             ("n", "d1", 2), ("d1", "d2", 2)]
    return DualGraph.make([], edges)


def _crit_IV() -> DualGraph:
    edges = [("p1", "p2"), ("p2", "p3"), ("p3", "p4"), ("p4", "p1"),
             ("q1", "q2"), ("q2", "q3"), ("q3", "q4"), ("q4", "q1"),
             ("n", "p1", 2), ("n", "q1"), ("n", "q2"),
             ("n", "c1"), ("c1", "c2", 2),
             ("n", "d1"), ("d1", "d2", 2)]
    return DualGraph.make([], edges)


def _crit_V() -> DualGraph:
    edges = [("f1", "f2"), ("f2", "f3"), ("f3", "f4"), ("f4", "f5"),
             ("f5", "f6"), ("f6", "f1"),
             ("n", "f1"),
             ("n", "t1", 2), ("t1", "t2"), ("t2", "t3"), ("t3", "t1"),
             ("n", "b1"), ("b1", "b2", 2)]
    return DualGraph.make([], edges)


def _crit_VI() -> DualGraph:
    edges = [("g0", "g1"), ("g1", "g2"), ("g0", "g3"), ("g3", "g4"),
             ("g0", "g5"), ("g5", "g6"),
             ("n", "g2", 2),
             ("n", "t1"), ("t1", "t2"), ("t2", "t3"), ("t3", "t1")]
    return DualGraph.make([], edges)


def _crit_VII() -> DualGraph:
    edges = [("k1", "k2"), ("k2", "k3"), ("k3", "k4"), ("k4", "k5"),
             ("k5", "k6"), ("k6", "k7"), ("k7", "k8"), ("k8", "k1"),
             ("n", "k1"), ("n", "k2"), ("n", "b1"), ("b1", "b2", 2)]
    return DualGraph.make([], edges)


CRITICAL_GRAPHS = {
    "I": _crit_I(),
    "II": _crit_II(),
    "III": _crit_III(),
    "IV": _crit_IV(),
    "V": _crit_V(),
    "VI": _crit_VI(),
    "VII": _crit_VII(),
}

# fibration reading of each critical graph: (fiber vertex-sets with type and
# double flag, bisection vertex, contacts)
CRITICAL_ANNOTATIONS = {
    "I": {"bisection": "n",
          "fibers": [
              {"type": ("III*", 0), "double": False,
               "vertices": ("e0", "e1", "e2", "e3", "e4", "e5", "e6", "e7"),
               "contacts": ("e1", "e7")},
              {"type": ("I", 2), "double": True,
               "vertices": ("b1", "b2"), "contacts": ("b1",)}]},
    "II": {"bisection": "n",
           "fibers": [
               {"type": ("I*", 1), "double": False,
                "vertices": ("d1", "d2", "d3", "d4", "d5", "d6"),
                "contacts": ("d5", "d6")},
               {"type": ("I", 4), "double": True,
                "vertices": ("a1", "a2", "a3", "a4"), "contacts": ("a1",)}]},
    "III": {"bisection": "n",
            "fibers": [
                {"type": ("I", 4), "double": True,
                 "vertices": ("p1", "p2", "p3", "p4"), "contacts": ("p1",)},
                {"type": ("I", 4), "double": True,
                 "vertices": ("q1", "q2", "q3", "q4"), "contacts": ("q1",)},
                {"type": ("I", 2), "double": False,
                 "vertices": ("c1", "c2"), "contacts": ("c1", "c1")},
                {"type": ("I", 2), "double": False,
                 "vertices": ("d1", "d2"), "contacts": ("d1", "d1")}]},
    "IV": {"bisection": "n",
           "fibers": [
               {"type": ("I", 4), "double": False,
                "vertices": ("p1", "p2", "p3", "p4"), "contacts": ("p1", "p1")},
               {"type": ("I", 4), "double": False,
                "vertices": ("q1", "q2", "q3", "q4"), "contacts": ("q1", "q2")},
               {"type": ("I", 2), "double": True,
                "vertices": ("c1", "c2"), "contacts": ("c1",)},
               {"type": ("I", 2), "double": True,
                "vertices": ("d1", "d2"), "contacts": ("d1",)}]},
    "V": {"bisection": "n",
          "fibers": [
              {"type": ("I", 6), "double": True,
               "vertices": ("f1", "f2", "f3", "f4", "f5", "f6"),
               "contacts": ("f1",)},
              {"type": ("I", 3), "double": False,
               "vertices": ("t1", "t2", "t3"), "contacts": ("t1", "t1")},
              {"type": ("I", 2), "double": True,
               "vertices": ("b1", "b2"), "contacts": ("b1",)}]},
    "VI": {"bisection": "n",
           "fibers": [
               {"type": ("IV*", 0), "double": False,
                "vertices": ("g0", "g1", "g2", "g3", "g4", "g5", "g6"),
                "contacts": ("g2", "g2")},
               {"type": ("I", 3), "double": True,
                "vertices": ("t1", "t2", "t3"), "contacts": ("t1",)}]},
    "VII": {"bisection": "n",
            "fibers": [
                {"type": ("I", 8), "double": False,
                 "vertices": ("k1", "k2", "k3", "k4", "k5", "k6", "k7", "k8"),
                 "contacts": ("k1", "k2")},
                {"type": ("I", 2), "double": True,
                 "vertices": ("b1", "b2"), "contacts": ("b1",)}]},
}


def type_i_full_graph() -> DualGraph:
    """The 12-vertex graph the type-I pipeline assembles: the critical graph
    plus the second component of the I2 fiber of the induced I8-fibration."""
    base = _crit_I()
    edges = list(base.edges)
    extra = [(("b2", "x"), 2), (("e0", "x"), 2)]
    return DualGraph.make(list(base.vertices) + ["x"],
                          [(a, b, m) for (a, b), m in edges]
                          + [(a, b, m) for (a, b), m in extra])


# ---------------------------------------------------------------------------
# critical-subgraph detection


def find_critical(g: DualGraph) -> set:
    """Which critical configurations embed in g (induced, multiplicities
    preserved)."""
    out = set()
    for tag, crit in CRITICAL_GRAPHS.items():
        if len(crit.vertices) > len(g.vertices):
            continue
        if _induced_embeds(crit, g):
            out.add(tag)
    return out


def _induced_embeds(small: DualGraph, big: DualGraph) -> bool:
    """Backtracking search for an induced multiplicity-preserving embedding."""
    svs = sorted(small.vertices,
                 key=lambda v: (-small.weighted_degree(v), v))
    big_wd = {v: big.weighted_degree(v) for v in big.vertices}
    small_wd = {v: small.weighted_degree(v) for v in svs}

    def backtrack(k: int, assign: dict, used: set) -> bool:
        if k == len(svs):
            return True
        sv = svs[k]
        for bv in big.vertices:
            if bv in used:
                continue
            if big_wd[bv] < small_wd[sv] or big.degree(bv) < small.degree(sv):
                continue
            ok = True
            for prev_sv, prev_bv in assign.items():
                if small.mult(sv, prev_sv) != big.mult(bv, prev_bv):
                    ok = False
                    break
            if not ok:
                continue
            assign[sv] = bv
            used.add(bv)
            if backtrack(k + 1, assign, used):
                return True
            del assign[sv]
            used.discard(bv)
        return False

    return backtrack(0, {}, set())


# ---------------------------------------------------------------------------
# files and DOT


def graph_from_text(text: str) -> DualGraph:
    vertices = []
    edges = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if parts[0] == "vertex":
            if len(parts) != 2:
                raise ValueError(f"line {lineno}: expected 'vertex <label>'")
            vertices.append(parts[1])
            continue
        if len(parts) not in (2, 3):
            raise ValueError(f"line {lineno}: expected 'u v [m]'")
        m = int(parts[2]) if len(parts) == 3 else 1
        if m <= 0:
            raise ValueError(f"line {lineno}: multiplicity must be positive")
        edges.append((parts[0], parts[1], m))
    return DualGraph.make(vertices, edges)


def to_dot(g: DualGraph) -> str:
    lines = ["graph dualgraph {"]
    for v in g.vertices:
        lines.append(f'  "{v}";')
    for (u, v), m in g.edges:
        if m == 1:
            lines.append(f'  "{u}" -- "{v}";')
        else:
            lines.append(f'  "{u}" -- "{v}" [label="{m}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"
