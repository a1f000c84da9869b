"""Random d-regular labeled trees for the factorization checks."""

import itertools
import random

from fernjac.polyring import VarSpec, poly_sum
from fernjac.trees import Labeling, PlaneTree, leftmost_n_path, tree_weight


def random_regular_tree(rng: random.Random, d: int, internal: int) -> PlaneTree:
    # grow by expanding a uniformly chosen leaf
    def grow(node, target):
        leaves = []

        def walk(t, path):
            if not t.children:
                leaves.append(path)
            for k, c in enumerate(t.children):
                walk(c, path + (k,))

        walk(node, ())
        path = rng.choice(leaves)

        def rebuild(t, p):
            if not p:
                return PlaneTree((PlaneTree(),) * d)
            kids = list(t.children)
            kids[p[0]] = rebuild(kids[p[0]], p[1:])
            return PlaneTree(tuple(kids))

        return rebuild(node, path)

    t = PlaneTree()
    for _ in range(internal):
        t = grow(t, internal)
    return t


def random_labeled_tree(rng: random.Random, d: int, n: int, min_height: int, max_internal: int = 6):
    while True:
        t = random_regular_tree(rng, d, rng.randint(n, max_internal))
        if t.height >= min_height:
            return Labeling(t, tuple(rng.randint(1, n) for _ in range(t.size)))


def brute_force_class_sum(L: Labeling, n: int):
    """Sum of weights over labelings agreeing with L off the interior of the leftmost n-path."""
    path = leftmost_n_path(L.tree, n)
    interior = path[1:-1]
    spec = VarSpec(n)
    weights = []
    for choice in itertools.product(range(1, n + 1), repeat=len(interior)):
        labels = list(L.labels)
        for v, lab in zip(interior, choice):
            labels[v] = lab
        weights.append(tree_weight(Labeling(L.tree, tuple(labels)), spec))
    return poly_sum(weights, spec)
