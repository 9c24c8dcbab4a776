#!/usr/bin/env python3
"""Writes the corpus JSON files next to this script.

Every datum here has one of two shapes:

* trivial: the group acts trivially on X (or X is a point), so every fixed
  locus of every tuple is X itself;
* isolated: the fixed locus of any tuple containing a non-identity element is
  the same union F of components, and all structure maps between such loci
  are identities, inclusions F_c -> X, or identities on X.

Run from anywhere: `python3 corpus/generate.py`.
"""

import itertools
import json
import os
from fractions import Fraction as Fr

HERE = os.path.dirname(os.path.abspath(__file__))


def q(x):
    return str(Fr(x))


class Algebra:
    def __init__(self, name, dim, basis, products, unit="1"):
        # basis: list of (label, p, n, odd); products: {(a, b): {c: coef}}
        self.name = name
        self.dim = dim
        self.basis = basis
        self.products = products
        self.unit = unit
        self.labels = [b[0] for b in basis]

    def size(self):
        return len(self.basis)

    def doc(self):
        basis = []
        for label, p, n, odd in self.basis:
            b = {"label": label, "p": q(p), "n": n}
            if odd != (n % 2 == 1):
                b["odd"] = odd
            basis.append(b)
        products = []
        for (a, b), out in sorted(self.products.items(), key=lambda kv: (self.labels.index(kv[0][0]), self.labels.index(kv[0][1]))):
            for c, coef in out.items():
                if coef != 0:
                    products.append([a, b, c, q(coef)])
        d = {"dim": self.dim, "basis": basis, "products": products}
        if self.unit != "1":
            d["unit"] = self.unit
        return d


def with_unit(labels, rest):
    """Adds the unit rows `1 * x = x * 1 = x` to a product dictionary."""
    out = dict(rest)
    for x in labels:
        out[("1", x)] = {x: 1}
        out[(x, "1")] = {x: 1}
    return out


def point_algebra(name="point"):
    return Algebra(name, 0, [("1", 0, 0, False)], with_unit(["1"], {}))


def identity(n):
    return [[1 if r == c else 0 for c in range(n)] for r in range(n)]


def matrix_doc(m):
    return [[q(x) for x in row] for row in m]


# ---------------------------------------------------------------- groups


def cycle_notation(p):
    seen = [False] * len(p)
    out = ""
    for start in range(len(p)):
        if seen[start] or p[start] == start:
            continue
        out += "("
        i = start
        while not seen[i]:
            seen[i] = True
            out += str(i + 1)
            i = p[i]
        out += ")"
    return out or "e"


class Group:
    def __init__(self, table, names, doc):
        self.table = table
        self.names = names
        self.doc = doc
        self.order = len(table)

    @staticmethod
    def cyclic(n, names):
        table = [[(a + b) % n for b in range(n)] for a in range(n)]
        return Group(table, names, {"table": table, "names": names})

    @staticmethod
    def permutations(gens):
        # Same closure, ordering and naming as the loader.
        compose = lambda s, t: tuple(s[i] for i in t)
        ident = tuple(range(len(gens[0])))
        found = {ident}
        queue = [ident]
        while queue:
            p = queue.pop(0)
            for g in gens:
                r = compose(p, tuple(g))
                if r not in found:
                    found.add(r)
                    queue.append(r)
        perms = sorted(found)
        table = [[perms.index(compose(s, t)) for t in perms] for s in perms]
        names = [cycle_notation(p) for p in perms]
        return Group(table, names, {"permutations": gens})

    def mul(self, a, b):
        return self.table[a][b]

    def inv(self, a):
        return next(b for b in range(self.order) if self.table[a][b] == 0)


# ---------------------------------------------------------------- data


class Component:
    def __init__(self, alg, pull, push, normal):
        # pull: rows over alg basis, columns over X basis (restriction).
        # push: rows over X basis, columns over alg basis (Gysin map).
        self.alg = alg
        self.pull = pull
        self.push = push
        self.normal = normal


class Model:
    def __init__(self, name, description, group, x, comps=None, eigen=None, x_action=None):
        self.name = name
        self.description = description
        self.group = group
        self.x = x
        self.comps = comps  # None: trivial shape
        self.eigen = eigen or {}
        self.x_action = x_action or {}

    def loci(self, elems):
        if self.comps is None or all(g == 0 for g in elems):
            return [None]
        return list(range(len(self.comps)))

    def alg(self, c):
        return self.x if c is None else self.comps[c].alg

    def edge(self, c_src, target_elems, push):
        targets = self.loci(target_elems)
        src = self.alg(c_src)
        if c_src is None:
            comp, pull, fwd = 0, identity(self.x.size()), identity(self.x.size())
        elif targets == [None]:
            comp, pull, fwd = 0, self.comps[c_src].pull, self.comps[c_src].push
        else:
            comp, pull, fwd = c_src, identity(src.size()), identity(src.size())
        e = {"component": comp, "pullback": matrix_doc(pull)}
        if push:
            e["pushforward"] = matrix_doc(fwd)
        return e

    def name_of(self, g):
        return self.group.names[g]

    def key(self, elems):
        return [self.name_of(g) for g in elems]

    def document(self):
        G = self.group
        n = G.order
        elems = range(n)
        algebras = {self.x.name: self.x.doc()}
        if self.comps:
            for c in self.comps:
                algebras[c.alg.name] = c.alg.doc()

        def sector_block(level):
            out = []
            for t in itertools.product(elems, repeat=level):
                for i, c in enumerate(self.loci(t)):
                    out.append({"key": self.key(t), "component": i, "algebra": self.alg(c).name})
            return out

        sigma, double, triple, normal, eigen = [], [], [], [], []
        for g in elems:
            for i, c in enumerate(self.loci((g,))):
                sigma.append({
                    "sector": {"key": self.key((g,)), "component": i},
                    "component": i,
                    "pullback": matrix_doc(identity(self.alg(c).size())),
                })
        for g1, g2 in itertools.product(elems, repeat=2):
            for i, c in enumerate(self.loci((g1, g2))):
                double.append({
                    "sector": {"key": self.key((g1, g2)), "component": i},
                    "e1": self.edge(c, (g1,), False),
                    "e2": self.edge(c, (g2,), False),
                    "mu": self.edge(c, (G.mul(g1, g2),), True),
                })
        for g1, g2, g3 in itertools.product(elems, repeat=3):
            for i, c in enumerate(self.loci((g1, g2, g3))):
                triple.append({
                    "sector": {"key": self.key((g1, g2, g3)), "component": i},
                    "e12": self.edge(c, (g1, g2), False),
                    "e23": self.edge(c, (g2, g3), False),
                    "mu12_3": self.edge(c, (G.mul(g1, g2), g3), True),
                    "mu1_23": self.edge(c, (g1, G.mul(g2, g3)), True),
                })
        if self.comps:
            for level in (1, 2, 3):
                for t in itertools.product(elems, repeat=level):
                    for i, c in enumerate(self.loci(t)):
                        if c is not None and self.comps[c].normal:
                            normal.append({
                                "sector": {"key": self.key(t), "component": i},
                                "lines": lines_doc(self.comps[c].normal),
                            })
        for g in elems:
            if g == 0:
                continue
            for i, c in enumerate(self.loci((g,))):
                entries = [] if c is None else self.eigen[g][c]
                eigen.append({
                    "sector": {"key": self.key((g,)), "component": i},
                    "entries": [{"alpha": q(a), "lines": lines_doc(ls)} for a, ls in entries],
                })
        gaction = []
        for h in elems:
            maps = []
            hinv = G.inv(h)
            for g in elems:
                conj = G.mul(G.mul(hinv, g), h)
                for i, c in enumerate(self.loci((g,))):
                    if c is None:
                        m = self.x_action.get(h, identity(self.x.size()))
                    else:
                        m = identity(self.alg(c).size())
                    maps.append({
                        "source": {"key": self.key((g,)), "component": i},
                        "component": i,
                        "pullback": matrix_doc(m),
                    })
                    assert self.loci((conj,)) == self.loci((g,))
            gaction.append({"element": self.name_of(h), "maps": maps})

        return {
            "name": self.name,
            "description": self.description,
            "group": G.doc,
            "algebras": algebras,
            "sectors": sector_block(1),
            "double_sectors": sector_block(2),
            "triple_sectors": sector_block(3),
            "correspondences": {"sigma": sigma, "double": double, "triple": triple},
            "normal": normal,
            "eigen": eigen,
            "gaction": gaction,
        }


def lines_doc(lines):
    return [{"root": {k: q(v) for k, v in root.items()}, "mult": q(m)} for root, m in lines]


# ---------------------------------------------------------------- models


def bg(name, group, description):
    return Model(name, description, group, point_algebra())


def affine_plane(name, group, alphas, description):
    """C^2 with CH = span{1}; the origin is the only fixed point."""
    x = Algebra("plane", 2, [("1", 0, 0, False)], with_unit(["1"], {}))
    origin = Component(point_algebra("origin"), [[1]], [[0]], [({}, 2)])
    eigen = {g: [[(a, [({}, 1)]) for a in alphas[g]]] for g in alphas}
    # merge equal angles into one entry with multiplicity
    for g in eigen:
        merged = {}
        for a, ls in eigen[g][0]:
            merged[a] = merged.get(a, 0) + 1
        eigen[g] = [[(a, [({}, m)]) for a, m in sorted(merged.items())]]
    return Model(name, description, group, x, [origin], eigen)


def projective_plane(name, group, line_alpha, point_alpha, description):
    x = Algebra(
        "plane",
        2,
        [("1", 0, 0, False), ("H", 1, 0, False), ("H2", 2, 0, False)],
        with_unit(["1", "H", "H2"], {("H", "H"): {"H2": 1}}),
    )
    line = Algebra("line", 1, [("1", 0, 0, False), ("h", 1, 0, False)], with_unit(["1", "h"], {}))
    comps = [
        Component(line, [[1, 0, 0], [0, 1, 0]], [[0, 0], [1, 0], [0, 1]], [({"h": 1}, 1)]),
        Component(point_algebra(), [[1, 0, 0]], [[0], [0], [1]], [({}, 2)]),
    ]
    eigen = {}
    for g in line_alpha:
        eigen[g] = [
            [(line_alpha[g], [({"h": 1}, 1)])],
            [(point_alpha[g], [({}, 2)])],
        ]
    return Model(name, description, group, x, comps, eigen)


def exterior_labels():
    subsets = []
    for k in range(5):
        subsets.extend(itertools.combinations(range(1, 5), k))
    return subsets


def subset_label(s):
    return "".join(f"a{i}" for i in s) or "1"


def abelian_surface_algebra():
    basis = []
    products = {}
    subsets = exterior_labels()
    for s in subsets:
        k = len(s)
        basis.append((subset_label(s), Fr(k, 2), 0, k % 2 == 1))
    for s in subsets:
        for t in subsets:
            if set(s) & set(t):
                continue
            merged = list(s) + list(t)
            inversions = sum(1 for i in range(len(merged)) for j in range(i + 1, len(merged)) if merged[i] > merged[j])
            products[(subset_label(s), subset_label(t))] = {subset_label(tuple(sorted(merged))): (-1) ** inversions}
    return Algebra("abelian_surface", 2, basis, products), subsets


def kummer():
    group = Group.cyclic(2, ["e", "g"])
    x, subsets = abelian_surface_algebra()
    top = subsets.index((1, 2, 3, 4))
    size = x.size()
    pt = point_algebra()
    comps = []
    for _ in range(16):
        pull = [[1 if c == 0 else 0 for c in range(size)]]
        push = [[1 if r == top else 0] for r in range(size)]
        comps.append(Component(pt, pull, push, [({}, 2)]))
    eigen = {1: [[(Fr(1, 2), [({}, 2)])] for _ in range(16)]}
    sign = [[((-1) ** len(s) if r == c else 0) for c, s in enumerate(subsets)] for r in range(size)]
    return Model(
        "kummer",
        "Z/2 acting by -1 on an abelian surface, cohomology presentation; 16 isolated fixed points",
        group,
        x,
        comps,
        eigen,
        {1: sign},
    )


def sign_fixture():
    group = Group.cyclic(2, ["e", "g"])
    x = Algebra(
        "odd_pair",
        2,
        [("1", 0, 0, False), ("a", 1, 1, True), ("b", 1, 1, True), ("ab", 2, 2, False)],
        with_unit(["1", "a", "b", "ab"], {("a", "b"): {"ab": 1}, ("b", "a"): {"ab": -1}}),
    )
    return Model(
        "sign_z2",
        "trivial Z/2 action on a bigraded algebra with two odd generators of bidegree (1,1)",
        group,
        x,
    )


def kummer_resolution():
    pairs = [(1, 2), (1, 3), (1, 4), (2, 3), (2, 4), (3, 4)]
    labels = ["1"] + [subset_label(p) for p in pairs] + [f"E{i}" for i in range(1, 17)] + ["pt"]
    basis = [("1", 0, 0, False)]
    basis += [(subset_label(p), 1, 0, False) for p in pairs]
    basis += [(f"E{i}", 1, 0, False) for i in range(1, 17)]
    basis += [("pt", 2, 0, False)]
    products = {}
    for s in pairs:
        for t in pairs:
            if set(s) & set(t):
                continue
            merged = list(s) + list(t)
            inversions = sum(1 for i in range(4) for j in range(i + 1, 4) if merged[i] > merged[j])
            products[(subset_label(s), subset_label(t))] = {"pt": (-1) ** inversions}
    for i in range(1, 17):
        products[(f"E{i}", f"E{i}")] = {"pt": -2}
    alg = Algebra("k3", 2, basis, with_unit(labels, products))
    return {
        "name": "kummer_resolution",
        "description": "rational cohomology ring of the Kummer K3 surface; the six classes coming from the abelian surface are rescaled so their pairing is the hyperbolic one",
        "resolution": alg.doc(),
    }


def kummer_skeleton():
    pairs = [{"orbifold": "e#0:1", "resolution": "1"}]
    for p in [(1, 2), (1, 3), (1, 4), (2, 3), (2, 4), (3, 4)]:
        pairs.append({"orbifold": f"e#0:{subset_label(p)}", "resolution": subset_label(p)})
    pairs.append({"orbifold": "e#0:a1a2a3a4", "resolution": "pt"})
    scalable = []
    for c in range(16):
        pairs.append({"orbifold": f"g#{c}:1", "resolution": f"E{c + 1}"})
        scalable.append(f"g#{c}:1")
    return {"pairs": pairs, "scalable": scalable}


def models():
    z2 = Group.cyclic(2, ["e", "g"])
    z3 = Group.cyclic(3, ["e", "g", "g2"])
    s3 = Group.permutations([[1, 0, 2], [0, 2, 1]])
    half = Fr(1, 2)
    third, two_thirds = Fr(1, 3), Fr(2, 3)
    return [
        bg("bg_z2", z2, "classifying stack of Z/2: a point with trivial action"),
        bg("bg_s3", s3, "classifying stack of S3: a point with trivial action"),
        affine_plane("c2_z2", z2, {1: [half, half]}, "A1 singularity: Z/2 acting on C^2 by -1"),
        affine_plane(
            "c2_z3",
            z3,
            {1: [third, two_thirds], 2: [two_thirds, third]},
            "A2 singularity: Z/3 acting on C^2 by diag(w, w^2)",
        ),
        projective_plane(
            "p2_z2", z2, {1: half}, {1: half}, "Z/2 acting on P^2 by [x:y:z] -> [x:y:-z]"
        ),
        projective_plane(
            "p2_z3",
            z3,
            {1: third, 2: two_thirds},
            {1: two_thirds, 2: third},
            "Z/3 acting on P^2 by [x:y:z] -> [x:y:wz]",
        ),
        kummer(),
        sign_fixture(),
    ]


def dumps(v, indent=0):
    """JSON with one line per scalar list, so matrices stay readable."""
    pad = " " * indent
    if isinstance(v, dict):
        if not v:
            return "{}"
        items = [f'{pad} {json.dumps(k)}: {dumps(x, indent + 1)}' for k, x in v.items()]
        return "{\n" + ",\n".join(items) + "\n" + pad + "}"
    if isinstance(v, list):
        if all(not isinstance(x, (dict, list)) for x in v):
            return json.dumps(v)
        if all(isinstance(x, list) and all(not isinstance(y, (dict, list)) for y in x) for x in v):
            return "[" + ", ".join(json.dumps(x) for x in v) + "]"
        items = [pad + " " + dumps(x, indent + 1) for x in v]
        return "[\n" + ",\n".join(items) + "\n" + pad + "]"
    return json.dumps(v)


def main():
    def write(name, doc):
        with open(os.path.join(HERE, name + ".json"), "w") as f:
            f.write(dumps(doc))
            f.write("\n")

    for m in models():
        write(m.name, m.document())
    write("kummer_resolution", kummer_resolution())
    write("kummer_skeleton", kummer_skeleton())


if __name__ == "__main__":
    main()
