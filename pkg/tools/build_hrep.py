"""Regenerate ``src/bellforge/data/pd_hrep_eps_1_4.json.gz``.

Facet enumeration of the (2,2;2,2) conditional PD polytope at eps = 1/4, run
once offline.  The polytope has 1296 vertices and tens of thousands of
facets, too many for a direct double-description run, so this uses
adjacency decomposition:

* the symmetry group (outcome flips per input, input swaps, party swap) has
  128 elements and acts on the vertices by permutation;
* starting from one facet, every facet orbit is visited once; the ridges of
  a representative facet are computed recursively (small faces go straight
  to Normaliz), and each ridge is rotated exactly to the neighbouring facet;
* faces are memoised by their canonical vertex set under the full group.

Everything is integer arithmetic on the vertices scaled by 16.  The result
is checked by ``bellforge.hrep.validate_hrep`` before it is written.

    pip install PyNormaliz
    python tools/build_hrep.py
"""

import gzip
import itertools
import json
import sys
import time
from fractions import Fraction
from math import gcd
from pathlib import Path

import numpy as np
import PyNormaliz

from bellforge.hrep import DATA_FILE, project, validate_hrep
from bellforge.vertices import pd_conditional_vertices

SCALE = 16
SMALL_FACE = 150      # faces with at most this many vertices go to Normaliz
PRIME = (1 << 61) - 1
OUT = Path(__file__).resolve().parents[1] / "src" / "bellforge" / "data" / DATA_FILE

EPS = Fraction(1, 4)
VERTS = [tuple(int(t * SCALE) for t in v.values) for v in pd_conditional_vertices(EPS, EPS)]
XH = np.array([list(r) + [1] for r in VERTS], dtype=np.int64)   # homogenised
XO = XH.astype(object)


# ---------------------------------------------------------------- symmetry


def _idx(a, b, x, y):
    return 4 * (2 * x + y) + 2 * a + b


def _coord_perm(f):
    p = [0] * 16
    for a, b, x, y in itertools.product((0, 1), repeat=4):
        p[_idx(a, b, x, y)] = _idx(*f(a, b, x, y))
    return tuple(p)


def symmetry_group():
    """Pairs (vertex permutation, coordinate permutation)."""
    gens = [
        _coord_perm(lambda a, b, x, y: (a ^ (x == 0), b, x, y)),
        _coord_perm(lambda a, b, x, y: (a ^ (x == 1), b, x, y)),
        _coord_perm(lambda a, b, x, y: (a, b ^ (y == 0), x, y)),
        _coord_perm(lambda a, b, x, y: (a, b ^ (y == 1), x, y)),
        _coord_perm(lambda a, b, x, y: (a, b, 1 - x, y)),
        _coord_perm(lambda a, b, x, y: (a, b, x, 1 - y)),
        _coord_perm(lambda a, b, x, y: (b, a, y, x)),
    ]
    group = {tuple(range(16))}
    frontier = list(group)
    while frontier:
        fresh = []
        for g in frontier:
            for h in gens:
                c = tuple(g[h[i]] for i in range(16))
                if c not in group:
                    group.add(c)
                    fresh.append(c)
        frontier = fresh
    pos = {r: i for i, r in enumerate(VERTS)}
    elems, seen = [], set()
    for g in sorted(group):
        img = []
        for r in VERTS:
            r2 = [0] * 16
            for k in range(16):
                r2[g[k]] = r[k]
            img.append(pos[tuple(r2)])  # KeyError here means g is not a symmetry
        if tuple(img) not in seen:
            seen.add(tuple(img))
            elems.append((np.array(img), g))
    return elems


GROUP = symmetry_group()


def map_functional(f, g):
    out = [0] * 17
    for k in range(16):
        out[g[k]] = f[k]
    out[16] = f[16]
    return reduce(out)


# ---------------------------------------------------------------- integer helpers


def primitive(v):
    den = 1
    for t in v:
        den = den * Fraction(t).denominator // gcd(den, Fraction(t).denominator)
    w = [int(Fraction(t) * den) for t in v]
    g = 0
    for t in w:
        g = gcd(g, t)
    return tuple(t // g for t in w) if g else tuple(w)


def reduce(f):
    # use sum_ab p(ab|xy) = SCALE to zero the p(00|xy) coefficients
    f = list(f)
    for k in range(4):
        t = f[4 * k]
        if t:
            for j in range(4):
                f[4 * k + j] -= t
            f[16] += SCALE * t
    return primitive(f)


def values(f, Q):
    if max(abs(int(t)) for t in f) < 1 << 40:
        return XH[Q] @ np.array(f, dtype=np.int64)
    return XO[Q] @ np.array(f, dtype=object)


def independent_rows(Q):
    """Rows independent over GF(PRIME), hence over Q; at most 13."""
    basis, chosen = [], []
    for i in Q:
        v = [int(t) % PRIME for t in XH[i]]
        for p, b in basis:
            if v[p]:
                c = v[p]
                v = [(x - c * y) % PRIME for x, y in zip(v, b)]
        nz = next((k for k, t in enumerate(v) if t), None)
        if nz is not None:
            inv = pow(v[nz], PRIME - 2, PRIME)
            basis.append((nz, [(t * inv) % PRIME for t in v]))
            chosen.append(i)
            if len(chosen) == 13:
                break
    return chosen


def dim(Q):
    return len(independent_rows(Q)) - 1


def nullspace(rows):
    rows = [[Fraction(int(t)) for t in r] for r in rows]
    ncol = len(rows[0])
    piv, r = [], 0
    for c in range(ncol):
        p = next((i for i in range(r, len(rows)) if rows[i][c]), None)
        if p is None:
            continue
        rows[r], rows[p] = rows[p], rows[r]
        inv = 1 / rows[r][c]
        rows[r] = [t * inv for t in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c]:
                m = rows[i][c]
                rows[i] = [a - m * b for a, b in zip(rows[i], rows[r])]
        piv.append(c)
        r += 1
    out = []
    for fc in (c for c in range(ncol) if c not in piv):
        v = [Fraction(0)] * ncol
        v[fc] = Fraction(1)
        for i, c in enumerate(piv):
            v[c] = -rows[i][fc]
        out.append(v)
    return out


def facet_functional(Z, Qa):
    """Smallest basis functional that vanishes on the facet Z of Q and is >= 0 on Q."""
    Zs = sorted(Z)
    best = None
    for v in nullspace([XH[i] for i in independent_rows(Zs)]):
        f = reduce(primitive(v))
        vals = values(f, Qa)
        if not vals.any():
            continue
        if vals.min() < 0:
            f, vals = tuple(-t for t in f), -vals
        assert vals.min() >= 0 and not values(f, np.array(Zs)).any()
        size = max(abs(t) for t in f)
        if best is None or size < best[0]:
            best = (size, f)
    return best[1]


# ---------------------------------------------------------------- faces


def canonical(Z, elems):
    Za = np.fromiter(Z, dtype=np.int64)
    best, arg = None, None
    for e in elems:
        t = tuple(np.sort(e[0][Za]).tolist())
        if best is None or t < best:
            best, arg = t, e
    return best, arg


def normaliz_facets(Q):
    Qa = np.array(sorted(Q))
    cone = PyNormaliz.Cone(polytope=[list(VERTS[i]) for i in Qa])
    out = []
    for h in cone.SupportHyperplanes():
        f = reduce(int(t) for t in h)
        vals = values(f, Qa)
        assert vals.min() >= 0
        out.append((f, frozenset(Qa[vals == 0].tolist())))
    return out


def rotate(f, h, Qa):
    """Neighbouring facet of Q across the ridge where h vanishes on facet {f = 0}."""
    fv, hv = values(f, Qa), values(h, Qa)
    m = fv > 0
    ratios = -hv[m].astype(float) / fv[m].astype(float)
    top = ratios.max()
    near = np.nonzero(ratios >= top - 1e-9 * max(1.0, abs(top)))[0]
    lam = max(Fraction(-int(hv[m][j]), int(fv[m][j])) for j in near)
    g = reduce(primitive([Fraction(a) + lam * b for a, b in zip(h, f)]))
    gv = values(g, Qa)
    assert gv.min() >= 0
    return frozenset(Qa[gv == 0].tolist())


def initial_facet(Q, d):
    Qa = np.array(sorted(Q))
    for k in range(16):
        e = [0] * 17
        e[k] = 1
        vals = values(e, Qa)
        Z = frozenset(Qa[vals == vals.min()].tolist())
        if len(Z) < len(Q) and dim(sorted(Z)) == d - 1:
            return Z
    raise RuntimeError("no coordinate facet to start from")


_memo = {}


def facets(Q, depth=0):
    """All facets of conv(VERTS[Q]) as (functional >= 0, zero set)."""
    key, (vp, cp) = canonical(Q, GROUP)
    if key not in _memo:
        _memo[key] = _facets(frozenset(key), depth)
    inv = np.empty_like(vp)
    inv[vp] = np.arange(len(vp))
    cinv = [0] * 16
    for k in range(16):
        cinv[cp[k]] = k
    return [(map_functional(f, cinv), frozenset(inv[np.fromiter(Z, dtype=np.int64)].tolist()))
            for f, Z in _memo[key]]


def _facets(Q, depth):
    Qs = sorted(Q)
    d = dim(Qs)
    if len(Q) <= SMALL_FACE or d <= 4:
        return normaliz_facets(Q)
    Qa = np.array(Qs)
    elems = [e for e in GROUP if frozenset(e[0][Qa].tolist()) == Q]
    Z0 = initial_facet(Q, d)
    k0, _ = canonical(Z0, elems)
    reps = {k0: [None, Z0]}
    todo = [k0]
    t0 = time.time()
    while todo:
        todo.sort(key=len, reverse=True)
        key = todo.pop()
        Z = reps[key][1]
        f = reps[key][0] = facet_functional(Z, Qa)
        for h, _ in facets(Z, depth + 1):
            Zn = rotate(f, h, Qa)
            k, _ = canonical(Zn, elems)
            if k not in reps:
                reps[k] = [None, Zn]
                todo.append(k)
        if depth == 0:
            print(f"orbits {len(reps)}, open {len(todo)}, {time.time() - t0:.0f}s", file=sys.stderr)
    out = {}
    for f, Z in reps.values():
        for vp, cp in elems:
            Zi = frozenset(vp[np.fromiter(Z, dtype=np.int64)].tolist())
            if Zi not in out:
                out[Zi] = map_functional(f, cp)
    if depth == 0:
        print(f"{len(reps)} orbits, {len(out)} facets", file=sys.stderr)
    return [(f, Z) for Z, f in out.items()]


def to_row(f):
    # f . (SCALE p) + f_16 >= 0 with zero p(00|xy) coefficients  ->  a . x <= b
    a = [-SCALE * f[4 * k + j] for k in range(4) for j in (1, 2, 3)]
    return list(primitive([f[16], *a]))


def main():
    result = facets(frozenset(range(len(VERTS))))
    rows = sorted(to_row(f) for f, _ in result)
    points = [project(list(v)) for v in pd_conditional_vertices(EPS, EPS)]
    print(f"validated: {validate_hrep(np.array(rows, dtype=object), [[Fraction(t) for t in p] for p in points])}",
          file=sys.stderr)
    payload = {
        "eps": "1/4",
        "coordinates": "p(01|xy), p(10|xy), p(11|xy) for xy = 00, 01, 10, 11",
        "row_format": "[b, a_1, ..., a_12] meaning a . x <= b",
        "inequalities": rows,
    }
    data = json.dumps(payload, separators=(",", ":")).encode("utf-8") + b"\n"
    OUT.write_bytes(gzip.compress(data, mtime=0))
    print(f"wrote {OUT}", file=sys.stderr)


if __name__ == "__main__":
    main()
