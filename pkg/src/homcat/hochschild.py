"""The standard (bar) resolution and Hochschild-Mitchell cohomology.

Degree-n cochains live on (n+1)-tuples of objects: the component at a
tuple (q_1,...,q_{n+1}) is Hom_K(C(q_1,q_2) x ... x C(q_n,q_{n+1}),
X(q_1,q_{n+1})) for a bimodule coefficient X.  This is the reduced model
obtained from Hom out of the standard resolution by the hom-tensor
adjunction; the bimodule terms themselves are only materialized at low
degree, for the oracle cross-checks.

The differential composes adjacent tensor slots with alternating signs;
the outer two slots act on the coefficient through the enveloping
category action.  The unnormalized complex is used throughout (identity
tensor factors are not stripped).  Tuples are enumerated in lexicographic
object order so all matrices are reproducible.
"""

from __future__ import annotations

from itertools import product as iproduct

from .exactla import Mat, complex_cohomology_dims, kernel_basis, unit_vector, vkron
from .kcat import enveloping, pair_object
from .modcat import BaseMismatch, FreeResolution, regular_bimodule


class InvalidCoefficient(BaseMismatch):
    pass


class BarTerm:
    """Dimension summary of one bar term: per-tuple inner dimensions and
    the total dimension as a bimodule."""

    def __init__(self, degree, tuples, total):
        self.degree = degree
        self.tuples = tuples          # list of (tuple, inner_dim, bimodule_dim)
        self.total = total

    def __repr__(self):
        return f"BarTerm(degree={self.degree}, total={self.total})"


class CochainComplex:

    def __init__(self, field, dims, diffs):
        self.field = field
        self.dims = list(dims)        # degrees 0..L
        self.diffs = list(diffs)      # diffs[n]: dims[n] -> dims[n+1]

    def verify_dd(self):
        """Indices n with d^{n+1} o d^n != 0 (empty = complex)."""
        bad = []
        for n in range(len(self.diffs) - 1):
            if not self.diffs[n + 1].mul(self.diffs[n]).is_zero():
                bad.append(n)
        return bad

    def cohomology(self, upto):
        if upto >= len(self.diffs):
            raise ValueError("complex too short for the requested degree")
        return complex_cohomology_dims(self.dims, self.diffs, upto)


def _tuples(objects, n):
    return list(iproduct(objects, repeat=n))


def _inner_basis(c, tup):
    """Index tuples for the basis of C(q_1,q_2) x ... x C(q_n,q_{n+1})."""
    ranges = [range(c.dim(tup[i], tup[i + 1])) for i in range(len(tup) - 1)]
    return list(iproduct(*ranges))


def bar_dims(c, max_deg):
    """Dimension summaries of the bar terms, nothing materialized."""
    out = []
    for n in range(max_deg + 1):
        tuples = []
        total = 0
        for tup in _tuples(c.objects, n + 1):
            inner = 1
            for i in range(n):
                inner *= c.dim(tup[i], tup[i + 1])
            if inner == 0:
                continue
            bim = 0
            for c1 in c.objects:
                for c2 in c.objects:
                    bim += c.dim(c1, tup[0]) * inner * c.dim(tup[-1], c2)
            tuples.append((tup, inner, bim))
            total += bim
        out.append(BarTerm(n, tuples, total))
    return out


def bar_resolution(c, length, env=None, regular=None):
    """The standard resolution, materialized as a free resolution over
    the enveloping category (generator objects are the outer pairs)."""
    if env is None:
        env = enveloping(c)
    if regular is None:
        regular = regular_bimodule(c, env)
    field = c.field
    gens = []
    images = []
    layouts = []      # per degree: list of (tuple, inner index tuple)
    for n in range(length + 1):
        layout = []
        for tup in _tuples(c.objects, n + 1):
            for w in _inner_basis(c, tup):
                layout.append((tup, w))
        layouts.append(layout)
        gens.append([(pair_object(tup[0], tup[-1]),
                      env.id_coords(pair_object(tup[0], tup[-1])))
                     for tup, _ in layout])
    # augmentation: generator (p,) at object (p,p) maps to 1_p in C(p,p)
    images.append([c.id_coords(tup[0]) for tup, _ in layouts[0]])
    res = FreeResolution(env, regular, gens, images)
    for n in range(1, length + 1):
        prev_layout = layouts[n - 1]
        prev_index = {}
        offset = 0
        offsets = []
        for tup, w in prev_layout:
            prev_index[(tup, w)] = len(offsets)
            offsets.append(offset)
            offset += 1
        level_images = []
        for tup, w in layouts[n]:
            vec = _bar_differential_image(c, env, res, n, tup, w, prev_layout)
            level_images.append(vec)
        images.append(level_images)
    return res


def _bar_differential_image(c, env, res, n, tup, w, prev_layout):
    """Image of the generator (tup, w) of S_n under d_n, as a vector in
    S_{n-1} evaluated at the outer pair of tup."""
    field = c.field
    y = pair_object(tup[0], tup[-1])
    # P_{n-1}(y) basis: for each previous generator j at object x_j, the
    # basis of env(x_j, y)
    gen_objs = res.gens[n - 1]
    dim_total = sum(env.dim(x, y) for x, _ in gen_objs)
    vec = [field.zero()] * dim_total
    offsets = []
    off = 0
    for x, _ in gen_objs:
        offsets.append(off)
        off += env.dim(x, y)

    def add(j, coords, scale):
        base = offsets[j]
        for t, a in enumerate(coords):
            if a:
                vec[base + t] = field.add(vec[base + t], field.mul(scale, a))

    index_of = {key: j for j, key in enumerate(prev_layout)}
    # i = 0: first inner morphism becomes the outer-left component
    sub_tup = tup[1:]
    sub_w = w[1:]
    j = index_of[(sub_tup, sub_w)]
    f1 = unit_vector(field, c.dim(tup[0], tup[1]), w[0])
    coords = vkron(field, f1, c.id_coords(tup[-1]))
    add(j, coords, field.one())
    # 1 <= i <= n-1: compose adjacent inner morphisms
    for i in range(1, n):
        s = field.one() if i % 2 == 0 else field.neg(field.one())
        comp = c.compose_basis(tup[i - 1], tup[i], tup[i + 1], w[i - 1], w[i])
        new_tup = tup[:i] + tup[i + 1:]
        outer = vkron(field, c.id_coords(tup[0]), c.id_coords(tup[-1]))
        for h, a in enumerate(comp):
            if not a:
                continue
            new_w = w[:i - 1] + (h,) + w[i + 1:]
            j = index_of[(new_tup, new_w)]
            add(j, outer, s)
    # i = n: last inner morphism becomes the outer-right component
    s = field.one() if n % 2 == 0 else field.neg(field.one())
    sub_tup = tup[:-1]
    sub_w = w[:-1]
    j = index_of[(sub_tup, sub_w)]
    fn = unit_vector(field, c.dim(tup[-2], tup[-1]), w[-1])
    coords = vkron(field, c.id_coords(tup[0]), fn)
    add(j, coords, s)
    return tuple(vec)


# ---------------------------------------------------------------------------
# the reduced cochain complex

class _Layout:

    def __init__(self, c, coeff, n):
        self.components = []   # (tuple, inner basis list, coeff obj, coeff dim, offset)
        off = 0
        for tup in _tuples(c.objects, n + 1):
            inner = _inner_basis(c, tup)
            if not inner:
                continue
            cobj = pair_object(tup[0], tup[-1])
            cdim = coeff.dims[cobj]
            self.components.append((tup, inner, cobj, cdim, off))
            off += len(inner) * cdim
        self.dim = off
        self.index = {}
        for comp_i, (tup, inner, cobj, cdim, off) in enumerate(self.components):
            pos = {w: k for k, w in enumerate(inner)}
            self.index[tup] = (comp_i, pos)

    def offset(self, tup, w, cdim):
        comp_i, pos = self.index[tup]
        _, _, _, _, off = self.components[comp_i]
        return off + pos[w] * cdim


def hochschild_cochain_complex(c, coeff, max_deg):
    """Cochain spaces and differentials with bimodule coefficients, for
    degrees 0..max_deg+1 (so cohomology is available through max_deg)."""
    if coeff.side != "left":
        raise InvalidCoefficient("coefficient must be a left module over the enveloping category")
    env = coeff.base
    if env.product_of is None:
        raise InvalidCoefficient("coefficient base is not an enveloping category")
    for x in c.objects:
        if pair_object(x, x) not in env.objects:
            raise InvalidCoefficient("coefficient does not match the category's enveloping")
    field = c.field
    layouts = [_Layout(c, coeff, n) for n in range(max_deg + 2)]
    diffs = []
    for n in range(max_deg + 1):
        src = layouts[n]
        tgt = layouts[n + 1]
        grid = [[field.zero()] * src.dim for _ in range(tgt.dim)]
        for tup, inner, cobj, cdim, toff in tgt.components:
            if cdim == 0:
                continue
            for wi, w in enumerate(inner):
                row0 = toff + wi * cdim
                # term 0: f_1 moves onto the coefficient through the
                # contravariant slot
                sub = tup[1:]
                if sub in src.index:
                    scobj = pair_object(sub[0], sub[-1])
                    scdim = coeff.dims[scobj]
                    if scdim:
                        f1 = unit_vector(field, c.dim(tup[0], tup[1]), w[0])
                        coords = vkron(field, f1, c.id_coords(tup[-1]))
                        mat = coeff.act_vec(scobj, cobj, coords)
                        col0 = src.offset(sub, w[1:], scdim)
                        _accumulate(grid, row0, col0, mat, field, field.one())
                # middle terms: compose adjacent inner slots
                for i in range(1, n + 1):
                    s = field.one() if i % 2 == 0 else field.neg(field.one())
                    comp = c.compose_basis(tup[i - 1], tup[i], tup[i + 1],
                                           w[i - 1], w[i])
                    new_tup = tup[:i] + tup[i + 1:]
                    if new_tup not in src.index:
                        continue
                    for h, a in enumerate(comp):
                        if not a:
                            continue
                        new_w = w[:i - 1] + (h,) + w[i + 1:]
                        col0 = src.offset(new_tup, new_w, cdim)
                        for r in range(cdim):
                            grid[row0 + r][col0 + r] = field.add(
                                grid[row0 + r][col0 + r], field.mul(s, a))
                # last term: f_{n+1} acts through the covariant slot
                s = field.one() if (n + 1) % 2 == 0 else field.neg(field.one())
                sub = tup[:-1]
                if sub in src.index:
                    scobj = pair_object(sub[0], sub[-1])
                    scdim = coeff.dims[scobj]
                    if scdim:
                        fn = unit_vector(field, c.dim(tup[-2], tup[-1]), w[-1])
                        coords = vkron(field, c.id_coords(tup[0]), fn)
                        mat = coeff.act_vec(scobj, cobj, coords)
                        col0 = src.offset(sub, w[:-1], scdim)
                        _accumulate(grid, row0, col0, mat, field, s)
        diffs.append(Mat(field, tgt.dim, src.dim, tuple(tuple(r) for r in grid)))
    return CochainComplex(field, [l.dim for l in layouts], diffs)


def _accumulate(grid, row0, col0, mat, field, scale):
    for r in range(mat.rows):
        row = grid[row0 + r]
        for s in range(mat.cols):
            if mat.data[r][s]:
                row[col0 + s] = field.add(row[col0 + s], field.mul(scale, mat.data[r][s]))


def hochschild_cohomology(c, max_deg=4, coeff=None, env=None):
    """H^0..H^max_deg with regular coefficients (or any given bimodule)."""
    if coeff is None:
        coeff = regular_bimodule(c, env)
    complex_ = hochschild_cochain_complex(c, coeff, max_deg)
    return complex_.cohomology(max_deg)


def center(c):
    """Families (z_x in C(x,x)) commuting with every basis morphism; the
    dimension equals H^0 with regular coefficients."""
    field = c.field
    offsets = {}
    total = 0
    for x in c.objects:
        offsets[x] = total
        total += c.dim(x, x)
    rows = []
    for x in c.objects:
        for y in c.objects:
            dxy = c.dim(x, y)
            if not dxy:
                continue
            for i in range(dxy):
                # z_y o f - f o z_x = 0 as linear conditions on z
                for r in range(dxy):
                    row = [field.zero()] * total
                    for j in range(c.dim(y, y)):
                        val = c.compose_basis(x, y, y, i, j)[r]
                        if val:
                            row[offsets[y] + j] = field.add(row[offsets[y] + j], val)
                    for j in range(c.dim(x, x)):
                        val = c.compose_basis(x, x, y, j, i)[r]
                        if val:
                            row[offsets[x] + j] = field.sub(row[offsets[x] + j], val)
                    rows.append(row)
    system = Mat.from_rows(field, rows, cols=total)
    basis = kernel_basis(system)
    families = []
    for k in range(basis.cols):
        col = basis.col(k)
        families.append({x: tuple(col[offsets[x] + t] for t in range(c.dim(x, x)))
                         for x in c.objects})
    return basis.cols, families
