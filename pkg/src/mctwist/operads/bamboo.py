"""Twisted nonsymmetric operads on bamboos: Tw ncGerst and Tw ncBV.

A bamboo is a row of vertices, each white or black, with an optional edge
between neighbours.  White vertices are numbered 1..n from left to right.
Edges are odd (degree 1), black vertices have degree -2.  The orientation is
the left-to-right order of the edges, followed (for tadpole bamboos) by the
tadpoles from left to right.

The twisted differential is the sum of
  (1) a new black vertex attached at the left end,
  (2) a new black vertex attached at the right end,
  (3, 4) a white vertex i replaced by (b-i) or (i-b),
  (5) a black vertex replaced by (b-b),
with the new edge put in the first place of the orientation and moved to its
position, and an extra sign -1 for the splitting rules (3)-(5).  A vertex that
splits hands its left edge to the left new vertex and its right edge to the
right new vertex; its tadpole goes to either of them.
"""

from __future__ import annotations

from itertools import combinations
from typing import NamedTuple

from ..errors import MCTwistError
from .base import Complex, normalize
from .lincomb import perm_sign

W, B = True, False


class Bamboo(NamedTuple):
    colors: tuple  # True = white, False = black
    edges: tuple  # edges[j]: edge between vertex j and j + 1


class TadpoleBamboo(NamedTuple):
    colors: tuple
    edges: tuple
    tads: tuple  # tads[j]: vertex j carries a tadpole


def bamboo_text(g) -> str:
    out = []
    label = 0
    tads = getattr(g, "tads", None)
    for j, c in enumerate(g.colors):
        if c:
            label += 1
            tok = str(label)
        else:
            tok = "b"
        if tads is not None and tads[j]:
            tok += "t"
        out.append(tok)
        if j < len(g.edges):
            out.append("-" if g.edges[j] else " ")
    return "".join(out) if out else "()"


def parse_bamboo(text: str, tadpoles: bool = False):
    """Inverse of bamboo_text: tokens '1', '2', ... (in order) or 'b', suffix 't' for a tadpole."""
    text = text.strip()
    colors, edges, tads = [], [], []
    label = 0
    i = 0
    while i < len(text):
        j = i
        while j < len(text) and text[j] not in "- ":
            j += 1
        tok = text[i:j]
        if not tok:
            raise MCTwistError(f"bad bamboo {text!r}")
        tad = tok.endswith("t")
        if tad:
            tok = tok[:-1]
        if tok == "b":
            colors.append(B)
        else:
            label += 1
            if int(tok) != label:
                raise MCTwistError(f"white labels must read 1..n from left to right in {text!r}")
            colors.append(W)
        tads.append(tad)
        if j < len(text):
            edges.append(text[j] == "-")
        i = j + 1
    if tadpoles:
        return TadpoleBamboo(tuple(colors), tuple(edges), tuple(tads))
    if any(tads):
        raise MCTwistError("tadpoles need a tadpole bamboo")
    return Bamboo(tuple(colors), tuple(edges))


def _white_position(colors: tuple, i: int) -> int:
    seen = 0
    for p, c in enumerate(colors):
        if c:
            seen += 1
            if seen == i:
                return p
    raise IndexError(i)


class _BambooComplex(Complex):
    symmetric = False
    tadpoles = False

    def _make(self, colors, edges, tads):
        if self.tadpoles:
            return TadpoleBamboo(tuple(colors), tuple(edges), tuple(tads))
        return Bamboo(tuple(colors), tuple(edges))

    def _tads(self, g) -> tuple:
        return g.tads if self.tadpoles else (False,) * len(g.colors)

    def arity(self, g) -> int:
        return sum(g.colors)

    def black(self, g) -> int:
        return len(g.colors) - sum(g.colors)

    def degree(self, g) -> int:
        return sum(g.edges) + sum(self._tads(g)) - 2 * self.black(g)

    def show(self, g) -> str:
        return bamboo_text(g)

    def parse(self, text: str):
        return parse_bamboo(text, self.tadpoles)

    def canonicalize(self, g, order=None):
        """(g, sign of the permutation taking `order` to the default order); order lists items
        ('e', j) for the edge after vertex j and ('t', j) for a tadpole at vertex j."""
        if order is None:
            return g, 1
        keys = [(0 if kind == "e" else 1, j) for kind, j in order]
        want = sorted([(0, j) for j, e in enumerate(g.edges) if e] + [(1, j) for j, t in enumerate(self._tads(g)) if t])
        if sorted(keys) != want:
            raise MCTwistError("order does not list the items of the bamboo")
        return g, perm_sign(keys)

    def differential(self, g) -> dict:
        cols, edges, tads = g.colors, g.edges, self._tads(g)
        E = sum(edges)
        terms = [
            (self._make((B,) + cols, (True,) + edges, (False,) + tads), 1),
            (self._make(cols + (B,), edges + (True,), tads + (False,)), -1 if E % 2 else 1),
        ]
        left = 0
        for j, c in enumerate(cols):
            s = 1 if left % 2 else -1
            splits = [(B, W), (W, B)] if c else [(B, B)]
            tsplits = [(True, False), (False, True)] if tads[j] else [(False, False)]
            for pair in splits:
                for tp in tsplits:
                    terms.append(
                        (
                            self._make(
                                cols[:j] + pair + cols[j + 1 :],
                                edges[:j] + (True,) + edges[j:],
                                tads[:j] + tp + tads[j + 1 :],
                            ),
                            s,
                        )
                    )
            if j < len(edges) and edges[j]:
                left += 1
        return normalize(terms)

    def internal_differential(self, g) -> dict:
        """The part of the differential coming from d(alpha): rule (5) alone."""
        cols, edges, tads = g.colors, g.edges, self._tads(g)
        terms = []
        left = 0
        for j, c in enumerate(cols):
            if not c:
                s = 1 if left % 2 else -1
                tsplits = [(True, False), (False, True)] if tads[j] else [(False, False)]
                for tp in tsplits:
                    terms.append(
                        (self._make(cols[:j] + (B, B) + cols[j + 1 :], edges[:j] + (True,) + edges[j:], tads[:j] + tp + tads[j + 1 :]), s)
                    )
            if j < len(edges) and edges[j]:
                left += 1
        return normalize(terms)

    def twist_element(self) -> dict:
        """mu_1^alpha = mu_2(alpha, -) + mu_2(-, alpha) with mu_2 the edge bamboo: (b-1) + (1-b)."""
        return {self.parse("b-1"): 1, self.parse("1-b"): 1}

    def ad_twist(self, g) -> dict:
        """M o_1 g - (-1)^{|g|} sum_i g o_i M for the twisting element M."""
        M = self.twist_element()
        terms = []
        for m, c in M.items():
            terms += [(h, c * v) for h, v in self.compose(m, 1, g).items()]
        s = 1 if self.degree(g) % 2 else -1
        for i in range(1, self.arity(g) + 1):
            for m, c in M.items():
                terms += [(h, s * c * v) for h, v in self.compose(g, i, m).items()]
        return normalize(terms)

    def differential_by_composition(self, g) -> dict:
        return normalize(list(self.internal_differential(g).items()) + list(self.ad_twist(g).items()))

    def compose(self, g1, i: int, g2) -> dict:
        """g1 o_i g2: g2 replaces the i-th white vertex of g1.

        The sign sorts the items of g1 (relabelled) followed by the items of g2
        into the default order.  A tadpole at the replaced vertex becomes a
        tadpole on a tadpole-free vertex of g2 or an edge between two
        consecutive unconnected vertices of g2.
        """
        self.check_index(g1, i)
        p = _white_position(g1.colors, i)
        m2 = len(g2.colors)
        t1, t2 = self._tads(g1), self._tads(g2)
        cols = g1.colors[:p] + g2.colors + g1.colors[p + 1 :]

        def shift(v):
            return v if v < p else v + m2 - 1

        head = [(0, shift(q)) for q, e in enumerate(g1.edges) if e]
        tail_items = [(0, p + u) for u, e in enumerate(g2.edges) if e] + [(1, p + u) for u, t in enumerate(t2) if t]
        options = [[]]
        tad_before = [(1, shift(v)) for v, t in enumerate(t1) if t and v < p]
        tad_after = [(1, shift(v)) for v, t in enumerate(t1) if t and v > p]
        if t1[p]:
            options = [[(1, p + u)] for u in range(m2) if not t2[u]]
            options += [[(0, p + u)] for u in range(m2 - 1) if not g2.edges[u]]
        terms = []
        for opt in options:
            items = head + tad_before + opt + tad_after + tail_items
            sign = perm_sign(items)
            m = len(cols)
            edges = tuple((0, q) in items for q in range(m - 1))
            tads = tuple((1, q) in items for q in range(m))
            terms.append((self._make(cols, edges, tads), sign))
        return normalize(terms)

    def sort_key(self, g):
        return (len(g.colors), g)


class TwNcGerst(_BambooComplex):
    """Twisted ncGerst: bamboos with degree #edges - 2 #black."""

    id = "twncgerst"

    def black_range(self, n, d, grading=()):
        lo = max(0, (-d + 1) // 2)
        return range(lo, n - 1 - d + 1)

    def certificate(self) -> str:
        return "k <= n-1-d"

    def enumerate_cell(self, n, d, k, grading=()):
        m = n + k
        E = d + 2 * k
        if m == 0 or E < 0 or E > m - 1:
            return
        for blacks in combinations(range(m), k):
            cols = tuple(B if j in blacks else W for j in range(m))
            for es in combinations(range(m - 1), E):
                yield Bamboo(cols, tuple(q in es for q in range(m - 1)))


class TwNcBV(_BambooComplex):
    """Twisted ncBV: bamboos with at most one tadpole per vertex; the tadpole count t is preserved."""

    id = "twncbv"
    tadpoles = True
    gradings = ("t",)

    def grading(self, g):
        return (sum(g.tads),)

    def black_range(self, n, d, grading):
        (t,) = grading
        lo = max(0, (t - d + 1) // 2, t - n)
        return range(lo, n - 1 - d + t + 1)

    def certificate(self) -> str:
        return "k <= n-1-d+t"

    def enumerate_cell(self, n, d, k, grading):
        (t,) = grading
        m = n + k
        E = d + 2 * k - t
        if m == 0 or E < 0 or E > m - 1 or t > m:
            return
        for blacks in combinations(range(m), k):
            cols = tuple(B if j in blacks else W for j in range(m))
            for es in combinations(range(m - 1), E):
                edges = tuple(q in es for q in range(m - 1))
                for ts in combinations(range(m), t):
                    yield TadpoleBamboo(cols, edges, tuple(q in ts for q in range(m)))
