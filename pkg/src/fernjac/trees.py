"""Rooted plane trees, their labelings, and the tree expansion of the formal inverse.

Vertices are addressed by their preorder index (root = 0).  A vertex's
"degree" is its number of children, so a d-regular tree is one in which every
vertex has d children or none.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from math import comb
from typing import Iterator, Mapping, Sequence

from .polyring import Polynomial, VarSpec, mul, poly_sum, power, truncate_x_degree


class NoPathError(ValueError):
    """The tree is too shallow for the requested leftmost path."""


@dataclass(frozen=True)
class PlaneTree:
    children: tuple["PlaneTree", ...] = ()

    @staticmethod
    def leaf() -> "PlaneTree":
        return _LEAF

    @cached_property
    def size(self) -> int:
        return 1 + sum(c.size for c in self.children)

    @cached_property
    def height(self) -> int:
        return 1 + max(c.height for c in self.children) if self.children else 0

    @property
    def is_leaf(self) -> bool:
        return not self.children

    def is_regular(self, d: int) -> bool:
        return len(self.children) in (0, d) and all(c.is_regular(d) for c in self.children)

    @cached_property
    def structure(self) -> tuple[tuple[int | None, tuple[int, ...]], ...]:
        """Per preorder vertex: (parent index, child indices)."""
        out: list[list] = []

        def walk(node: PlaneTree, parent: int | None) -> int:
            idx = len(out)
            out.append([parent, []])
            for c in node.children:
                out[idx][1].append(walk(c, idx))
            return idx

        walk(self, None)
        return tuple((p, tuple(ch)) for p, ch in out)

    @cached_property
    def edges(self) -> tuple[tuple[int, int], ...]:
        return tuple((p, v) for v, (p, _) in enumerate(self.structure) if p is not None)

    @cached_property
    def leaves(self) -> tuple[int, ...]:
        return tuple(v for v, (_, ch) in enumerate(self.structure) if not ch)

    @cached_property
    def internal(self) -> tuple[int, ...]:
        return tuple(v for v, (_, ch) in enumerate(self.structure) if ch)

    def depths(self) -> list[int]:
        out = [0] * self.size
        for v, (p, _) in enumerate(self.structure):
            if p is not None:
                out[v] = out[p] + 1
        return out

    def to_string(self, labels: Mapping[int, int] | Sequence[int] | None = None) -> str:
        """Nested-parentheses form; unlabeled vertices print as ``_``."""
        st = self.structure

        def lab(v: int) -> str:
            if labels is None:
                return "_"
            if isinstance(labels, Mapping):
                return str(labels[v]) if v in labels else "_"
            return str(labels[v])

        def render(v: int) -> str:
            ch = st[v][1]
            if not ch:
                return lab(v)
            return lab(v) + "(" + ",".join(render(c) for c in ch) + ")"

        return render(0)

    def __str__(self) -> str:
        return self.to_string()


_LEAF = PlaneTree(())


_TREE_TOKEN = re.compile(r"\s*(\d+|_|[(),])")


def parse_tree(text: str) -> tuple[PlaneTree, dict[int, int]]:
    """Parse ``1(2,3(1,1))``; returns the tree and the preorder label map."""
    tokens = _TREE_TOKEN.findall(text)
    if "".join(tokens) != re.sub(r"\s+", "", text):
        raise ValueError(f"malformed tree string {text!r}")
    pos = 0
    labels: dict[int, int] = {}
    counter = itertools.count()

    def node() -> PlaneTree:
        nonlocal pos
        if pos >= len(tokens) or tokens[pos] in "(),":
            raise ValueError(f"expected a vertex label in {text!r}")
        tok = tokens[pos]
        pos += 1
        idx = next(counter)
        if tok != "_":
            labels[idx] = int(tok)
        kids = []
        if pos < len(tokens) and tokens[pos] == "(":
            pos += 1
            kids.append(node())
            while pos < len(tokens) and tokens[pos] == ",":
                pos += 1
                kids.append(node())
            if pos >= len(tokens) or tokens[pos] != ")":
                raise ValueError(f"unbalanced parentheses in {text!r}")
            pos += 1
        return PlaneTree(tuple(kids))

    tree = node()
    if pos != len(tokens):
        raise ValueError(f"trailing input in {text!r}")
    return tree, labels


@dataclass(frozen=True)
class Labeling:
    """A total labeling, stored in preorder."""

    tree: PlaneTree
    labels: tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.labels) != self.tree.size:
            raise ValueError("labeling must assign every vertex exactly one label")
        if any(v < 1 for v in self.labels):
            raise ValueError("labels are positive integers")

    def __str__(self) -> str:
        return self.tree.to_string(self.labels)


@dataclass(frozen=True)
class RootLeafLabeling:
    tree: PlaneTree
    labels: Mapping[int, int] = field(hash=False)

    def __post_init__(self) -> None:
        domain = {0} | set(self.tree.leaves)
        if set(self.labels) != domain:
            raise ValueError("root-leaf labeling must label exactly the root and the leaves")

    def __hash__(self) -> int:
        return hash((self.tree, tuple(sorted(self.labels.items()))))

    def __str__(self) -> str:
        return self.tree.to_string(self.labels)


def fuss_catalan(d: int, k: int) -> int:
    """Number of d-regular plane trees with k internal vertices."""
    return comb(d * k, k) // (k * (d - 1) + 1)


@lru_cache(maxsize=None)
def _regular_trees(d: int, k: int) -> tuple[PlaneTree, ...]:
    if k == 0:
        return (_LEAF,)
    out = []
    for split in _compositions(k - 1, d):
        for kids in itertools.product(*(_regular_trees(d, s) for s in split)):
            out.append(PlaneTree(tuple(kids)))
    return tuple(out)


def _compositions(total: int, parts: int) -> Iterator[tuple[int, ...]]:
    # weak compositions in lexicographic order
    if parts == 1:
        yield (total,)
        return
    for first in range(total + 1):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


def enumerate_d_regular_trees(d: int, k: int) -> list[PlaneTree]:
    """All plane trees with k internal vertices of out-degree d.

    Order: child internal-vertex counts in lexicographic order, then the
    children themselves recursively in the same order.
    """
    if d < 1 or k < 0:
        raise ValueError("need d >= 1 and k >= 0")
    return list(_regular_trees(d, k))


# ---------------------------------------------------------------------------
# weights
# ---------------------------------------------------------------------------

def _a_spec(n: int) -> VarSpec:
    return VarSpec(n)


def _edge_exponents(tree: PlaneTree, labels: Sequence[int], n: int) -> list[int]:
    e = [0] * (n * n)
    for p, v in tree.edges:
        e[(labels[p] - 1) * n + labels[v] - 1] += 1
    return e


def tree_weight(L: Labeling, spec: VarSpec | None = None) -> Polynomial:
    """Product over edges of a[label(parent), label(child)]."""
    spec = spec or _a_spec(max(L.labels))
    if max(L.labels) > spec.n:
        raise ValueError("label exceeds ring dimension")
    n = spec.n
    e = _edge_exponents(L.tree, L.labels, n) + [0] * (spec.nvars - n * n)
    return Polynomial._raw(spec, {tuple(e): 1})


def z_value(RL: RootLeafLabeling, n: int, spec: VarSpec | None = None) -> Polynomial:
    """Sum of tree weights over every completion of a root-leaf labeling.

    Brute force: all n**(#internal non-root vertices) completions are visited.
    """
    spec = spec or _a_spec(n)
    if spec.n != n:
        raise ValueError("ring dimension differs from label range")
    if any(not 1 <= v <= n for v in RL.labels.values()):
        raise ValueError(f"labels must lie in [1, {n}]")
    tree = RL.tree
    free = [v for v in tree.internal if v != 0]
    labels = [0] * tree.size
    for v, lab in RL.labels.items():
        labels[v] = lab
    pad = (0,) * (spec.nvars - n * n)
    acc: dict[tuple[int, ...], int] = {}
    for choice in itertools.product(range(1, n + 1), repeat=len(free)):
        for v, lab in zip(free, choice):
            labels[v] = lab
        m = tuple(_edge_exponents(tree, labels, n)) + pad
        acc[m] = acc.get(m, 0) + 1
    return Polynomial._raw(spec, acc)


# ---------------------------------------------------------------------------
# ferns
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Fern:
    """The d-regular tree whose n internal vertices form a leftmost spine."""

    d: int
    n: int
    tree: PlaneTree
    spine: tuple[int, ...]  # preorder indices of v_0..v_n

    def side_children(self, k: int) -> tuple[int, ...]:
        """Children of v_k other than the spine continuation (all children for k = n-1)."""
        ch = self.tree.structure[self.spine[k]][1]
        return ch if k == self.n - 1 else ch[1:]


def build_fern(d: int, n: int) -> Fern:
    if d < 1 or n < 1:
        raise ValueError("need d >= 1 and n >= 1")
    node = PlaneTree((_LEAF,) * d)
    for _ in range(n - 1):
        node = PlaneTree((node,) + (_LEAF,) * (d - 1))
    # the leftmost child always follows its parent in preorder
    return Fern(d, n, node, tuple(range(n + 1)))


@dataclass(frozen=True)
class FernLabeling:
    """Root label, (d-1)-tuples for the side leaves of v_0..v_{n-2}, and the d-tuple under v_{n-1}."""

    root: int
    side_tuples: tuple[tuple[int, ...], ...]
    last_tuple: tuple[int, ...]

    @property
    def n(self) -> int:
        return len(self.side_tuples) + 1

    @property
    def d(self) -> int:
        return len(self.last_tuple)

    def validate(self, n: int, d: int) -> "FernLabeling":
        if len(self.side_tuples) != n - 1:
            raise ValueError(f"expected {n} tuples for n={n}, got {len(self.side_tuples) + 1}")
        for k, t in enumerate(self.side_tuples):
            if len(t) != d - 1:
                raise ValueError(f"tuple t_{k} must have {d - 1} entries, got {len(t)}")
        if len(self.last_tuple) != d:
            raise ValueError(f"last tuple must have {d} entries, got {len(self.last_tuple)}")
        for lab in (self.root, *itertools.chain(*self.side_tuples), *self.last_tuple):
            if not 1 <= lab <= n:
                raise ValueError(f"label {lab} outside [1, {n}]")
        return self

    def to_root_leaf(self, fern: Fern | None = None) -> RootLeafLabeling:
        fern = fern or build_fern(self.d, self.n)
        labels = {0: self.root}
        for k, t in enumerate(self.side_tuples):
            labels.update(zip(fern.side_children(k), t))
        labels.update(zip(fern.side_children(self.n - 1), self.last_tuple))
        return RootLeafLabeling(fern.tree, labels)

    def __str__(self) -> str:
        parts = [str(self.root)]
        parts += ["(" + ",".join(map(str, t)) + ")" for t in self.side_tuples]
        parts.append("(" + ",".join(map(str, self.last_tuple)) + ")")
        return ";".join(parts)


def fern_mu(i: int, j: int, l: int, d: int, n: int) -> FernLabeling:
    """Root i, spine end v_n labeled j, every other leaf labeled l."""
    return FernLabeling(i, ((l,) * (d - 1),) * (n - 1), (j,) + (l,) * (d - 1))


_FERN_PART = re.compile(r"^\((\s*\d+\s*(?:,\s*\d+\s*)*)?\)$")


def parse_fern_labeling(s: str, n: int, d: int) -> FernLabeling:
    """Parse ``r;(t_0);...;(t_{n-1})`` and validate arities and label ranges."""
    parts = [p.strip() for p in s.strip().split(";")]
    if len(parts) < 2:
        raise ValueError(f"fern labeling needs a root and at least one tuple: {s!r}")
    try:
        root = int(parts[0])
    except ValueError:
        raise ValueError(f"bad root label {parts[0]!r}") from None
    tuples = []
    for p in parts[1:]:
        m = _FERN_PART.match(p)
        if not m:
            raise ValueError(f"bad tuple {p!r} in {s!r}")
        body = m.group(1)
        tuples.append(tuple(int(v) for v in body.split(",")) if body else ())
    return FernLabeling(root, tuple(tuples[:-1]), tuples[-1]).validate(n, d)


def all_fern_labelings(d: int, n: int) -> Iterator[FernLabeling]:
    """Every root-leaf labeling of fern_{d,n}, in lexicographic order."""
    nleaves = n * (d - 1) + 1
    for root in range(1, n + 1):
        for leaves in itertools.product(range(1, n + 1), repeat=nleaves):
            sides = tuple(leaves[k * (d - 1):(k + 1) * (d - 1)] for k in range(n - 1))
            yield FernLabeling(root, sides, leaves[(n - 1) * (d - 1):])


def z_fern(labeling: FernLabeling, spec: VarSpec | None = None) -> Polynomial:
    return z_value(labeling.to_root_leaf(), labeling.n, spec)


# ---------------------------------------------------------------------------
# formal inverse
# ---------------------------------------------------------------------------

def inverse_spec(n: int, d: int) -> VarSpec:
    return VarSpec(n, d, includes_x=True)


def _check_inverse_args(n: int, d: int, N: int) -> None:
    if n < 1 or N < 1:
        raise ValueError("need n >= 1 and N >= 1")
    if d < 2:
        # every tree has a single leaf when d = 1, so no x-degree bound truncates the sum
        raise ValueError("the x-degree truncation is finite only for d >= 2")


def formal_inverse_tree_sum(n: int, d: int, i: int, N: int) -> Polynomial:
    """Component g_i of the formal inverse up to x-degree N, summed over labeled trees."""
    _check_inverse_args(n, d, N)
    spec = inverse_spec(n, d)
    if not 1 <= i <= n:
        raise ValueError(f"component {i} outside [1, {n}]")
    nn = n * n
    acc: dict[tuple[int, ...], int] = {}
    k = 0
    while k * (d - 1) + 1 <= N:
        for tree in _regular_trees(d, k):
            edges = tree.edges
            leaves = tree.leaves
            labels = [i] * tree.size
            for choice in itertools.product(range(1, n + 1), repeat=tree.size - 1):
                labels[1:] = choice
                e = [0] * spec.nvars
                for p, v in edges:
                    e[(labels[p] - 1) * n + labels[v] - 1] += 1
                for v in leaves:
                    e[nn + labels[v] - 1] += 1
                m = tuple(e)
                acc[m] = acc.get(m, 0) + 1
        k += 1
    return Polynomial._raw(spec, acc)


def formal_inverse_fixed_point(n: int, d: int, N: int) -> list[Polynomial]:
    """Iterate g <- x + (A g)^d modulo x-degree N + 1 until it stabilises."""
    _check_inverse_args(n, d, N)
    spec = inverse_spec(n, d)
    xs = [spec.x(i) for i in range(1, n + 1)]
    a = [[spec.a(i, j) for j in range(1, n + 1)] for i in range(1, n + 1)]
    g = list(xs)
    for _ in range(N + 2):
        new = []
        for i in range(n):
            lin = poly_sum((mul(a[i][j], g[j], N) for j in range(n)), spec)
            new.append(xs[i] + truncate_x_degree(power(lin, d, N), N))
        if new == g:
            return g
        g = new
    raise AssertionError("fixed-point iteration failed to stabilise")


def build_inverse_check(n: int, d: int, g: Sequence[Polynomial], N: int) -> list[Polynomial]:
    """f_i(g) - x_i modulo x-degree N + 1; all zero when g inverts f."""
    spec = inverse_spec(n, d)
    out = []
    for i in range(1, n + 1):
        lin = poly_sum((mul(spec.a(i, j), g[j - 1], N) for j in range(1, n + 1)), spec)
        f_of_g = g[i - 1] - truncate_x_degree(power(lin, d, N), N)
        out.append(truncate_x_degree(f_of_g, N) - spec.x(i))
    return out


# ---------------------------------------------------------------------------
# leftmost path and the fern factorization
# ---------------------------------------------------------------------------

def leftmost_n_path(T: PlaneTree, n: int) -> tuple[int, ...]:
    """Preorder indices of the leftmost root path with n edges."""
    if n < 0:
        raise ValueError("path length must be nonnegative")
    depths = T.depths()
    for v in range(T.size):  # preorder visits leftmost paths first
        if depths[v] == n:
            path = [v]
            while path[-1] != 0:
                path.append(T.structure[path[-1]][0])
            return tuple(reversed(path))
    raise NoPathError(f"tree of height {T.height} has no path of {n} edges")


@dataclass(frozen=True)
class Factorization:
    sum: Polynomial
    fern_part: Polynomial
    cofactor: Polynomial
    fern_labeling: FernLabeling

    @property
    def holds(self) -> bool:
        return self.sum == mul(self.fern_part, self.cofactor)


def class_sum_and_factor(L: Labeling, n: int) -> Factorization:
    """Sum of weights over the labelings that differ from L only inside the leftmost n-path.

    The sum is enumerated directly; ``fern_part`` is the z-value of the fern
    labeling read off the path's children and ``cofactor`` is the product of
    the weights of every edge not hanging from a path vertex.
    """
    T = L.tree
    d = len(T.children)
    if d == 0 or not T.is_regular(d):
        raise ValueError("class sums are defined for d-regular trees with at least one edge")
    if any(not 1 <= v <= n for v in L.labels):
        raise ValueError(f"labels must lie in [1, {n}]")
    path = leftmost_n_path(T, n)
    spec = _a_spec(n)
    st = T.structure

    interior = path[1:-1]
    labels = list(L.labels)
    acc: dict[tuple[int, ...], int] = {}
    for choice in itertools.product(range(1, n + 1), repeat=len(interior)):
        for v, lab in zip(interior, choice):
            labels[v] = lab
        m = tuple(_edge_exponents(T, labels, n))
        acc[m] = acc.get(m, 0) + 1
    total = Polynomial._raw(spec, acc)

    sides = []
    for k in range(n - 1):
        sides.append(tuple(L.labels[c] for c in st[path[k]][1] if c != path[k + 1]))
    last_kids = st[path[n - 1]][1]
    last = (L.labels[path[n]],) + tuple(L.labels[c] for c in last_kids if c != path[n])
    fl = FernLabeling(L.labels[0], tuple(sides), last)
    fern_part = z_fern(fl)

    on_path = set(path[:-1])
    e = [0] * (n * n)
    for p, v in T.edges:
        if p not in on_path:
            e[(L.labels[p] - 1) * n + L.labels[v] - 1] += 1
    cofactor = Polynomial._raw(spec, {tuple(e): 1})
    return Factorization(total, fern_part, cofactor, fl)
