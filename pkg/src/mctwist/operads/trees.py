"""Rooted trees: Tw S^-1 RT (non-planar), Tw BT (planar) and the brace suboperad Br.

A tree is a nested tuple (label, (child, child, ...)) with label j >= 1 for
the white vertex j and 0 for a black vertex.  Edges have degree 1 and are
named by their upper vertex.  Orientations:
  non-planar: children sorted by their codes, edges in depth-first preorder;
  planar:     children in their planar order, edges listed bottom to top and
              left to right (breadth first).
A non-planar tree vanishes when a vertex has two equal child subtrees with an
odd number of vertices: swapping them is an odd permutation of the edges.

The twisted differential is the sum of
  (i)   -(black v split into a lower and an upper black vertex),
  (ii)  -(white i split into (i over b) + (b over i)),
  (iii) +(a new black leaf at any vertex, at any planar position),
  (iv)  +(a new black root below the old root),
where in (i) and (ii) the upper edges of the split vertex are redistributed
over the two new vertices in all ways (planar: keeping their order), the
lower vertex keeps the outgoing edge, and the new edge comes first.
"""

from __future__ import annotations

from itertools import combinations_with_replacement, product

from ..errors import MCTwistError, NotClosed
from .base import Complex, normalize
from .lincomb import perm_sign

BLACK = 0


# exploded trees ----------------------------------------------------------


class Shape:
    """Mutable tree: labels[v], kids[v] (ordered), root; vertex ids are arbitrary ints."""

    __slots__ = ("labels", "kids", "root")

    def __init__(self, labels: dict, kids: dict, root: int):
        self.labels = labels
        self.kids = kids
        self.root = root

    def copy(self) -> "Shape":
        return Shape(dict(self.labels), {v: list(c) for v, c in self.kids.items()}, self.root)

    def parent_of(self, v):
        for p, c in self.kids.items():
            if v in c:
                return p
        return None

    def new_id(self) -> int:
        return max(self.labels) + 1


def explode(code) -> tuple[Shape, list]:
    """Shape with ids in preorder, plus the list of non-root ids in preorder."""
    labels, kids = {}, {}

    def walk(node):
        v = len(labels)
        labels[v] = node[0]
        kids[v] = []
        for c in node[1]:
            w = walk(c)
            kids[v].append(w)
        return v

    walk(code)
    pre = []

    def pre_walk(v):
        for w in kids[v]:
            pre.append(w)
            pre_walk(w)

    pre_walk(0)
    return Shape(labels, kids, 0), pre


def _size(code) -> int:
    return 1 + sum(_size(c) for c in code[1])


def nonplanar_code(s: Shape, v=None):
    v = s.root if v is None else v
    return (s.labels[v], tuple(sorted(nonplanar_code(s, w) for w in s.kids[v])))


def planar_code(s: Shape, v=None):
    v = s.root if v is None else v
    return (s.labels[v], tuple(planar_code(s, w) for w in s.kids[v]))


def _nonplanar_scan(s: Shape):
    """(root code, edges in canonical preorder, vanishes?) in one pass."""
    codes: dict = {}
    sizes: dict = {}
    order: dict = {}
    zero = False
    stack = [(s.root, False)]
    while stack:
        v, done = stack.pop()
        if not done:
            stack.append((v, True))
            stack.extend((w, False) for w in s.kids[v])
            continue
        ch = sorted(s.kids[v], key=codes.__getitem__)
        for a, b in zip(ch, ch[1:]):
            if codes[a] == codes[b] and sizes[a] % 2:
                zero = True
        order[v] = ch
        codes[v] = (s.labels[v], tuple(codes[w] for w in ch))
        sizes[v] = 1 + sum(sizes[w] for w in ch)
    out = []
    stack = [s.root]
    while stack:
        v = stack.pop()
        if v != s.root:
            out.append(v)
        stack.extend(reversed(order[v]))
    return codes[s.root], out, zero


def _nonplanar_order(s: Shape) -> tuple[list, bool]:
    """Edges (upper vertex ids) in canonical preorder; flag True when the tree vanishes."""
    _, out, zero = _nonplanar_scan(s)
    return out, zero


def _planar_order(s: Shape) -> list:
    out = []
    layer = [s.root]
    while layer:
        nxt = []
        for v in layer:
            out.extend(s.kids[v])
            nxt.extend(s.kids[v])
        layer = nxt
    return out


def canonical_nonplanar(s: Shape, orientation: list):
    """(code, sign) or (None, 0) when the tree vanishes."""
    code, canon, zero = _nonplanar_scan(s)
    if zero:
        return None, 0
    pos = {v: j for j, v in enumerate(canon)}
    return code, perm_sign([pos[v] for v in orientation])


def canonical_planar(s: Shape, orientation: list):
    canon = _planar_order(s)
    pos = {v: j for j, v in enumerate(canon)}
    return planar_code(s), perm_sign([pos[v] for v in orientation])


# text notation -------------------------------------------------------------


def tree_text(code) -> str:
    """Nested parentheses: a vertex is '1', '2', ... or 'b', followed by its children in brackets."""
    lab = "b" if code[0] == BLACK else str(code[0])
    if not code[1]:
        return lab
    return lab + "(" + " ".join(tree_text(c) for c in code[1]) + ")"


def parse_tree(text: str):
    text = text.strip()
    pos = 0

    def node():
        nonlocal pos
        j = pos
        while pos < len(text) and text[pos] not in "() ":
            pos += 1
        tok = text[j:pos]
        if not tok:
            raise MCTwistError(f"bad tree {text!r}")
        lab = BLACK if tok == "b" else int(tok)
        kids = []
        if pos < len(text) and text[pos] == "(":
            pos += 1
            while True:
                while text[pos] == " ":
                    pos += 1
                if text[pos] == ")":
                    pos += 1
                    break
                kids.append(node())
        return (lab, tuple(kids))

    out = node()
    if pos != len(text):
        raise MCTwistError(f"trailing text in tree {text!r}")
    return out


def _labels(code) -> list:
    return [code[0]] + [x for c in code[1] for x in _labels(c)]


def _relabel(code, f):
    return (f(code[0]) if code[0] != BLACK else BLACK, tuple(_relabel(c, f) for c in code[1]))


# the complexes -------------------------------------------------------------


class _TreeComplex(Complex):
    planar = False

    def _canon(self, s: Shape, orientation: list):
        return canonical_planar(s, orientation) if self.planar else canonical_nonplanar(s, orientation)

    def _code(self, s: Shape):
        return planar_code(s) if self.planar else nonplanar_code(s)

    def arity(self, g) -> int:
        return sum(1 for x in _labels(g) if x != BLACK)

    def black(self, g) -> int:
        return sum(1 for x in _labels(g) if x == BLACK)

    def degree(self, g) -> int:
        V = _size(g)
        return V - 1 - 2 * self.black(g)

    def show(self, g) -> str:
        return tree_text(g)

    def parse(self, text: str):
        return parse_tree(text)

    def canonicalize(self, g, order=None):
        """Canonical form and sign of a tree given in any child order, with edges listed in
        `order` (preorder positions of upper vertices in g as written; default preorder)."""
        s, pre = explode(g)
        if order is not None:
            orientation = [pre[j] for j in order]
        elif self.planar:
            orientation = _planar_order(s)
        else:
            orientation = pre
        return self._canon(s, orientation)

    def is_zero(self, g) -> bool:
        return self.canonicalize(g)[0] is None

    # distributing upper edges over a two-vertex tree (lower L, upper U)
    def _distributions(self, children: list):
        """Yield (kids of lower before U, kids of U, kids of lower after U)."""
        m = len(children)
        if self.planar:
            for slots in combinations_with_replacement(range(3), m):
                yield (
                    [c for c, t in zip(children, slots) if t == 0],
                    [c for c, t in zip(children, slots) if t == 1],
                    [c for c, t in zip(children, slots) if t == 2],
                )
        else:
            for bits in product((0, 1), repeat=m):
                yield [c for c, t in zip(children, bits) if t == 0], [c for c, t in zip(children, bits) if t == 1], []

    def _split(self, s: Shape, orient: list, v: int, lower_label: int, upper_label: int, keep_lower: bool):
        """Replace v by a lower and an upper vertex; v's id goes to the lower one if keep_lower."""
        out = []
        u = s.new_id()
        lo, up = (v, u) if keep_lower else (u, v)
        parent = s.parent_of(v)
        for a, b, c in self._distributions(s.kids[v]):
            t = s.copy()
            t.labels[lo], t.labels[up] = lower_label, upper_label
            t.kids[lo] = a + [up] + c
            t.kids[up] = b
            if parent is None:
                t.root = lo
            elif not keep_lower:
                pk = t.kids[parent]
                pk[pk.index(v)] = lo
            orientation = [up] + [lo if x == v else x for x in orient]
            out.append((t, orientation))
        return out

    def differential(self, g) -> dict:
        s, pre = explode(g)
        orient = _planar_order(s) if self.planar else pre
        terms = []
        for v in list(s.labels):
            lab = s.labels[v]
            if lab == BLACK:
                cands = self._split(s, orient, v, BLACK, BLACK, True)
            else:
                cands = self._split(s, orient, v, BLACK, lab, False) + self._split(s, orient, v, lab, BLACK, True)
            for t, o in cands:
                terms.append((t, o, -1))
            u = s.new_id()
            positions = range(len(s.kids[v]) + 1) if self.planar else [len(s.kids[v])]
            for p in positions:
                t = s.copy()
                t.labels[u] = BLACK
                t.kids[u] = []
                t.kids[v].insert(p, u)
                terms.append((t, [u] + orient, 1))
        t = s.copy()
        u = s.new_id()
        t.labels[u] = BLACK
        t.kids[u] = [s.root]
        t.root = u
        terms.append((t, [s.root] + orient, 1))
        out = []
        for t, o, c in terms:
            code, sign = self._canon(t, o)
            if code is not None:
                out.append((code, c * sign))
        return normalize(out)

    # composition -------------------------------------------------------------
    def _insert(self, s1: Shape, o1: list, v: int, s2: Shape, o2: list):
        """All (shape, orientation) obtained by putting s2 at vertex v of s1 (labels untouched)."""
        off = max(s1.labels) + 1
        ids2 = {w: w + off for w in s2.labels}
        root2 = ids2[s2.root]
        parent = s1.parent_of(v)
        children = s1.kids[v]
        base = s1.copy()
        del base.labels[v]
        del base.kids[v]
        for w in s2.labels:
            base.labels[ids2[w]] = s2.labels[w]
            base.kids[ids2[w]] = [ids2[x] for x in s2.kids[w]]
        if parent is None:
            base.root = root2
        else:
            pk = base.kids[parent]
            pk[pk.index(v)] = root2
        orientation = [root2 if x == v else x for x in o1] + [ids2[x] for x in o2]
        out = []
        if self.planar:
            corners = []  # (vertex, position) in walk order

            def walk(w):
                kids = base.kids[w]
                for j, x in enumerate(kids):
                    corners.append((w, j))
                    walk(x)
                corners.append((w, len(kids)))

            walk(root2)
            for choice in combinations_with_replacement(range(len(corners)), len(children)):
                t = base.copy()
                groups: dict = {}
                for c, idx in zip(children, choice):
                    groups.setdefault(idx, []).append(c)
                for idx in sorted(groups, reverse=True):
                    w, j = corners[idx]
                    t.kids[w][j:j] = groups[idx]
                out.append((t, orientation))
        else:
            verts = list(ids2.values())
            for choice in product(verts, repeat=len(children)):
                t = base.copy()
                for c, w in zip(children, choice):
                    t.kids[w].append(c)
                out.append((t, orientation))
        return out

    def _oriented(self, g):
        s, pre = explode(g)
        return s, (_planar_order(s) if self.planar else pre)

    def compose(self, g1, i: int, g2, signed: bool = True) -> dict:
        """g1 o_i g2.  signed=False drops the orientation signs (the unshifted RT operad)."""
        self.check_index(g1, i)
        m = self.arity(g2)
        g1r = _relabel(g1, lambda j: j if j < i else (j + m - 1 if j > i else -1))
        g2r = _relabel(g2, lambda j: j + i - 1)
        s1, o1 = self._oriented(g1r)
        s2, o2 = self._oriented(g2r)
        v = next(w for w, lab in s1.labels.items() if lab == -1)
        out = []
        for t, o in self._insert(s1, o1, v, s2, o2):
            if signed:
                code, sign = self._canon(t, o)
            else:
                code, sign = self._code(t), 1
            if code is not None:
                out.append((code, sign))
        return normalize(out)

    def _insert_pieces(self, g, black: bool) -> list:
        """-(-1)^{|E(g)|} sum_v g o_v L_v over black (or white) vertices v, with L_v = (b over b)
        for a black v and (v over b) + (b over v) for a white v."""
        s, o = self._oriented(g)
        E = len(o)
        out = []
        for v in list(s.labels):
            lab = s.labels[v]
            if (lab == BLACK) != black:
                continue
            if lab == BLACK:
                pieces = [Shape({0: BLACK, 1: BLACK}, {0: [1], 1: []}, 0)]
            else:
                pieces = [Shape({0: lab, 1: BLACK}, {0: [1], 1: []}, 0), Shape({0: BLACK, 1: lab}, {0: [1], 1: []}, 0)]
            for p in pieces:
                for t, ori in self._insert(s, o, v, p, [1]):
                    code, sign = self._canon(t, ori)
                    if code is not None:
                        out.append((code, -sign * (-1) ** E))
        return out

    def internal_differential(self, g) -> dict:
        """The part of the differential coming from d(alpha): every black vertex split."""
        return normalize(self._insert_pieces(g, True))

    def twist_element(self) -> dict:
        """lambda(alpha, -) = (b over 1) + (1 over b)."""
        return {(BLACK, ((1, ()),)): 1, (1, ((BLACK, ()),)): 1}

    def ad_twist(self, g) -> dict:
        """lambda(alpha, g) - (-1)^{|E(g)|} sum over white v of g o_v lambda(alpha, -)."""
        s, o = self._oriented(g)
        out = []
        # lambda(alpha, g): alpha below g and alpha above g (grafted onto g's corners)
        for lower_is_black in (True, False):
            lam = Shape({0: BLACK if lower_is_black else -1, 1: -1 if lower_is_black else BLACK}, {0: [1], 1: []}, 0)
            hole = 1 if lower_is_black else 0
            for t, ori in self._insert(lam, [1], hole, s, o):
                code, sign = self._canon(t, ori)
                if code is not None:
                    out.append((code, sign))
        return normalize(out + self._insert_pieces(g, False))

    def differential_by_composition(self, g) -> dict:
        """d0 + ad of the twisting element, every term built by insertion of trees."""
        return normalize(self._insert_pieces(g, True) + list(self.ad_twist(g).items()))

    def act(self, g, perm: dict):
        """Relabel white vertices by perm (old -> new), keeping the edge order; (code, sign)."""
        s, o = self._oriented(g)
        for v, lab in s.labels.items():
            if lab != BLACK:
                s.labels[v] = perm[lab]
        return self._canon(s, o)

    # enumeration ---------------------------------------------------------------
    def black_range(self, n, d, grading=()):
        k = n - 1 - d
        return range(k, k + 1) if k >= 0 and n + k >= 1 else range(0)

    def certificate(self) -> str:
        return "k = n-1-d"

    def _trees(self, n: int, k: int) -> frozenset:
        """All tree codes (zero ones included) with whites 1..n and k blacks."""
        key = ("trees", n, k)
        if key in self._basis_cache:
            return self._basis_cache[key]
        out = set()
        if n + k == 1:
            out.add((1 if n else BLACK, ()))
        elif n + k > 1:
            sources = []
            if k > 0:
                sources += [(t, BLACK) for t in self._trees(n, k - 1)]
            if n > 0:
                for t in self._trees(n - 1, k):
                    for j in range(1, n + 1):
                        sources.append((_relabel(t, lambda x, j=j: x if x < j else x + 1), j))
            for t, lab in sources:
                s, _ = explode(t)
                u = s.new_id()
                for v in list(s.labels):
                    positions = range(len(s.kids[v]) + 1) if self.planar else [0]
                    for p in positions:
                        c = s.copy()
                        c.labels[u] = lab
                        c.kids[u] = []
                        c.kids[v].insert(p, u)
                        out.add(self._code(c))
        res = frozenset(out)
        self._basis_cache[key] = res
        return res

    def keep(self, g) -> bool:
        return True

    def enumerate_cell(self, n, d, k, grading=()):
        if n + k == 0 or self.degree_of(n, k) != d:
            return
        for t in self._trees(n, k):
            if self.keep(t) and (self.planar or self.canonicalize(t)[0] is not None):
                yield t

    @staticmethod
    def degree_of(n, k) -> int:
        return n - 1 - k

    def sort_key(self, g):
        return g


class TwSRT(_TreeComplex):
    """Twisted S^-1 RT: non-planar rooted trees, edges of degree 1, black vertices of degree -2."""

    id = "twsrt"


class TwBT(_TreeComplex):
    """Twisted brace trees: planar rooted trees."""

    id = "twbt"
    planar = True


class Br(TwBT):
    """Braces: planar trees whose black vertices have at least two children."""

    id = "br"

    def keep(self, g) -> bool:
        return is_brace(g)

    def differential(self, g) -> dict:
        out = super().differential(g)
        for h in out:
            if not is_brace(h):
                raise NotClosed(f"d({tree_text(g)}) has the term {tree_text(h)} outside Br")
        return out


def is_brace(g) -> bool:
    if g[0] == BLACK and len(g[1]) < 2:
        return False
    return all(is_brace(c) for c in g[1])


class RPL(TwSRT):
    """The quotient of Tw PreLie by the ideal generated by the black-black edge.

    Tw PreLie is the operadic suspension of Tw S^-1 RT; the suspension only
    rescales basis trees by signs, and a tree has an odd automorphism in one
    model exactly when it has one in the other (swapping two blocks of m
    vertices permutes m edges and m black vertices alike).  Ranks, hence all
    dimensions below, agree, and the computation runs on Tw S^-1 RT.  Degree
    in the pre-Lie grading is -k.
    """

    id = "rpl"

    def ideal_basis(self, n: int, k: int) -> list:
        """Spanning vectors of the ideal in C(n, k): g o_i X for g in C(n+1, k-2), X the black-black edge."""
        X = (BLACK, ((BLACK, ()),))
        if k < 2:
            return []
        vectors = []
        for g in self.basis(n + 1, n + 1 - 1 - (k - 2), k - 2):
            for i in range(1, n + 2):
                vec = self.compose(g, i, X)
                if vec:
                    vectors.append(vec)
        return vectors
