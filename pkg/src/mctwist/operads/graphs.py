"""Tw Gra: graphs with n white labelled vertices and k black vertices.

Vertices 0..n-1 are the white vertices 1..n, vertices n..n+k-1 are black.
Edges are odd and unordered pairs; the orientation is the order of the edge
list.  The canonical form relabels the black vertices to minimise the sorted
edge tuple; its sign is the parity of sorting the relabelled edge list.  A
graph vanishes when it has a multiple edge or an automorphism (fixing the
white vertices) that permutes the edges oddly.

The twisted differential, with the new edge put first, is
  -1/2 (a black vertex replaced by an edge b-b, old edges redistributed),
  -1   (a white vertex i replaced by an edge i-b, old edges redistributed),
  +1   (a new black vertex joined to an existing vertex).
Components c and loop order b1 are preserved, and k = n - c + b1 - d.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations, permutations, product
from typing import NamedTuple

from ..errors import MCTwistError
from .base import Complex, normalize
from .lincomb import perm_sign

HALF = Fraction(1, 2)


class SimpleGraph(NamedTuple):
    n: int
    k: int
    edges: tuple  # sorted pairs (a, b), a < b


def _pair(a, b):
    return (a, b) if a < b else (b, a)


def _black_classes(n: int, k: int, edges) -> list[list[int]]:
    """Black vertices grouped by an iterated neighbourhood invariant, groups in a canonical order."""
    nb: dict = {v: [] for v in range(n + k)}
    for a, b in edges:
        nb[a].append(b)
        nb[b].append(a)
    color = {v: (("w", v) if v < n else ("b",)) for v in range(n + k)}
    for _ in range(3):
        new = {v: (color[v], tuple(sorted(color[w] for w in nb[v]))) for v in range(n + k)}
        ranks = {c: j for j, c in enumerate(sorted(set(new.values())))}
        color = {v: ranks[new[v]] for v in range(n + k)}
    groups: dict = {}
    for v in range(n, n + k):
        groups.setdefault(color[v], []).append(v)
    return [groups[c] for c in sorted(groups)]


def canonical_graph(n: int, k: int, edge_list: list):
    """(SimpleGraph, sign) or (None, 0)."""
    pairs = [_pair(a, b) for a, b in edge_list]
    if len(set(pairs)) != len(pairs) or any(a == b for a, b in pairs):
        return None, 0
    groups = _black_classes(n, k, pairs)
    best = None
    signs = set()
    for choice in product(*[permutations(g) for g in groups]):
        perm = {v: v for v in range(n)}
        target = n
        for img in choice:
            for v in img:
                perm[v] = target
                target += 1
        relabelled = [_pair(perm[a], perm[b]) for a, b in pairs]
        key = tuple(sorted(relabelled))
        s = perm_sign(relabelled)
        if best is None or key < best:
            best, signs = key, {s}
        elif key == best:
            signs.add(s)
    if len(signs) > 1:
        return None, 0
    return SimpleGraph(n, k, best), signs.pop()


def components(g: SimpleGraph) -> int:
    parent = list(range(g.n + g.k))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for a, b in g.edges:
        parent[find(a)] = find(b)
    return len({find(v) for v in range(g.n + g.k)})


def graph_text(g: SimpleGraph) -> str:
    """'n=2 k=1 : 1-3 2-3', vertices numbered 1..n+k with the black ones last."""
    return f"n={g.n} k={g.k} : " + " ".join(f"{a + 1}-{b + 1}" for a, b in g.edges)


def parse_graph(text: str) -> tuple[int, int, list]:
    head, _, body = text.partition(":")
    fields = dict(f.split("=") for f in head.split())
    edges = [tuple(int(x) - 1 for x in e.split("-")) for e in body.split()]
    return int(fields["n"]), int(fields["k"]), edges


class TwGra(Complex):
    id = "twgra"
    gradings = ("c", "b1")

    def arity(self, g) -> int:
        return g.n

    def black(self, g) -> int:
        return g.k

    def degree(self, g) -> int:
        return len(g.edges) - 2 * g.k

    def grading(self, g):
        c = components(g)
        return (c, len(g.edges) - (g.n + g.k) + c)

    def show(self, g) -> str:
        return graph_text(g)

    def parse(self, text: str):
        n, k, edges = parse_graph(text)
        g, s = canonical_graph(n, k, edges)
        if g is None:
            raise MCTwistError(f"the graph {text!r} is zero")
        return g

    def canonicalize(self, g, order=None):
        """g may be a SimpleGraph or (n, k, edge list) in any vertex numbering of the blacks."""
        if isinstance(g, SimpleGraph):
            n, k, edges = g.n, g.k, list(g.edges)
        else:
            n, k, edges = g
        if order is not None:
            edges = [edges[j] for j in order]
        return canonical_graph(n, k, edges)

    def differential(self, g) -> dict:
        n, k = g.n, g.k
        V = n + k
        edges = list(g.edges)
        u = V  # the new black vertex
        terms = []
        for v in range(V):
            inc = [j for j, e in enumerate(edges) if v in e]
            coeff = -HALF if v >= n else -1
            for bits in product((0, 1), repeat=len(inc)):
                new = list(edges)
                for j, bit in zip(inc, bits):
                    if bit:
                        a, b = new[j]
                        new[j] = (u, b) if a == v else (a, u)
                terms.append((n, k + 1, [(v, u)] + new, coeff))
            terms.append((n, k + 1, [(v, u)] + edges, 1))
        out = []
        for nn, kk, el, c in terms:
            h, s = canonical_graph(nn, kk, el)
            if h is not None:
                out.append((h, c * s))
        return normalize(out)

    def _insert(self, n1, k1, e1, v, n2, k2, e2, relabel1, relabel2):
        """Put graph 2 at vertex v of graph 1; relabel maps give final vertex ids."""
        inc = [j for j, e in enumerate(e1) if v in e]
        V2 = n2 + k2
        out = []
        for choice in product(range(V2), repeat=len(inc)):
            new = []
            for j, (a, b) in enumerate(e1):
                if j in inc:
                    w = relabel2[choice[inc.index(j)]]
                    other = b if a == v else a
                    new.append((relabel1[other], w))
                else:
                    new.append((relabel1[a], relabel1[b]))
            new += [(relabel2[a], relabel2[b]) for a, b in e2]
            out.append(new)
        return out

    def compose(self, g1, i: int, g2) -> dict:
        """g1 o_i g2: vertex i of g1 replaced by g2, its edges reattached to any vertex of g2."""
        self.check_index(g1, i)
        n1, k1, n2, k2 = g1.n, g1.k, g2.n, g2.k
        n, k = n1 + n2 - 1, k1 + k2
        v = i - 1
        r1 = {}
        for w in range(n1 + k1):
            if w < v:
                r1[w] = w
            elif v < w < n1:
                r1[w] = w + n2 - 1
            elif w >= n1:
                r1[w] = n + (w - n1)
        r2 = {w: (v + w if w < n2 else n + k1 + (w - n2)) for w in range(n2 + k2)}
        out = []
        for el in self._insert(n1, k1, list(g1.edges), v, n2, k2, list(g2.edges), r1, r2):
            h, s = canonical_graph(n, k, el)
            if h is not None:
                out.append((h, s))
        return normalize(out)

    def act(self, g, perm: dict) -> tuple:
        """Relabel white vertices by perm (old label -> new label), keeping the edge order."""
        m = {v: perm[v + 1] - 1 for v in range(g.n)}
        m.update({v: v for v in range(g.n, g.n + g.k)})
        return canonical_graph(g.n, g.k, [(m[a], m[b]) for a, b in g.edges])

    def differential_by_composition(self, g) -> dict:
        """lambda(alpha, g) - (-1)^{|E|} sum_v g o_v L_v, L_v = (v-b) for white v and 1/2 (b-b) for black v."""
        n, k = g.n, g.k
        V = n + k
        E = len(g.edges)
        out = []
        # lambda(alpha, g): the edge graph with alpha at one end and g at the other
        for v in range(V):
            el = [(V, v)] + list(g.edges)
            h, s = canonical_graph(n, k + 1, el)
            if h is not None:
                out.append((h, s))
        sgn = -1 if E % 2 else 1
        for v in range(V):
            coeff = -HALF if v >= n else -1
            r1 = {w: w for w in range(V)}
            r2 = {0: v, 1: V}
            for el in self._insert(n, k, list(g.edges), v, 1, 1, [(0, 1)], r1, r2):
                h, s = canonical_graph(n, k + 1, el)
                if h is not None:
                    out.append((h, coeff * sgn * s))
        return normalize(out)

    # enumeration -------------------------------------------------------------
    def black_range(self, n, d, grading):
        c, b1 = grading
        k = n - c + b1 - d
        return range(k, k + 1) if k >= 0 and n + k >= 1 else range(0)

    def certificate(self) -> str:
        return "k = n-c+b1-d"

    def _graphs(self, n: int, k: int) -> frozenset:
        """All canonical shapes (zero ones included, as unsigned keys) with n whites and k blacks."""
        key = ("graphs", n, k)
        if key in self._basis_cache:
            return self._basis_cache[key]
        out = set()
        if k == 0:
            pairs = list(combinations(range(n), 2))
            for r in range(len(pairs) + 1):
                for es in combinations(pairs, r):
                    out.add(SimpleGraph(n, 0, es))
        else:
            for g in self._graphs(n, k - 1):
                V = n + k - 1
                for r in range(V + 1):
                    for nbrs in combinations(range(V), r):
                        el = list(g.edges) + [(w, V) for w in nbrs]
                        out.add(_shape_key(n, k, el))
        res = frozenset(out)
        self._basis_cache[key] = res
        return res

    def enumerate_cell(self, n, d, k, grading):
        c, b1 = grading
        E = d + 2 * k
        for g in self._graphs(n, k):
            if len(g.edges) != E:
                continue
            h, s = canonical_graph(n, k, list(g.edges))
            if h is not None and components(h) == c:
                yield h


def _shape_key(n, k, edges):
    """Canonical unsigned shape, defined also for graphs that vanish."""
    groups = _black_classes(n, k, edges)
    best = None
    for choice in product(*[permutations(g) for g in groups]):
        perm = {v: v for v in range(n)}
        target = n
        for img in choice:
            for v in img:
                perm[v] = target
                target += 1
        key = tuple(sorted(_pair(perm[a], perm[b]) for a, b in edges))
        if best is None or key < best:
            best = key
    return SimpleGraph(n, k, best)
