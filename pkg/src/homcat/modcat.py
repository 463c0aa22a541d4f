"""Modules over a finite K-linear category and their homological algebra.

A CatModule assigns a dimension to every object and a matrix to every
basis morphism (covariant for left modules, contravariant for right
ones).  Bimodules over C are uniformly left modules over enveloping(C),
so the regular bimodule, ideal bimodules and their quotients all live in
one module category and share the resolution machinery.

Resolutions are presentations by projective summands: a term is a finite
coproduct of summands C(x,-) o e cut out of representables by the
orthogonal identity decompositions the category carries, and a
differential is the list of generator images in the previous term.  Ext
and Tor complexes then come out of the Yoneda identifications
Hom(C(x,-) o e, N) = e-invariants of N(x) and its tensor analogue, which
keeps the cochain spaces small, the covers minimal, and all bases
canonical.
"""

from __future__ import annotations

from .exactla import (
    ComplementData, EchelonSpace, Mat, block_diag, column_space_basis,
    complex_cohomology_dims, kernel_basis, kron, rank, solve,
    unit_vector, vzero,
)
from .kcat import (InvalidModule, UnknownObject, enveloping, opposite,
                   pair_object, tensor_category)


class BaseMismatch(ValueError):
    pass


class CatModule:

    def __init__(self, base, side, dims, act, check=True):
        if side not in ("left", "right"):
            raise ValueError("side must be 'left' or 'right'")
        self.base = base
        self.side = side
        self.dims = {x: int(dims.get(x, 0)) for x in base.objects}
        self.act = dict(act)
        if check:
            self.validate()

    def dim(self, x):
        return self.dims[x]

    def total_dim(self):
        return sum(self.dims.values())

    def is_zero(self):
        return all(d == 0 for d in self.dims.values())

    def _shape(self, x, y):
        if self.side == "left":
            return self.dims[y], self.dims[x]
        return self.dims[x], self.dims[y]

    def act_mat(self, x, y, i):
        m = self.act.get((x, y, i))
        if m is None:
            r, c = self._shape(x, y)
            m = Mat.zeros(self.base.field, r, c)
        return m

    def act_vec(self, x, y, coords):
        r, c = self._shape(x, y)
        out = Mat.zeros(self.base.field, r, c)
        for i, a in enumerate(coords):
            if a:
                out = out.add(self.act_mat(x, y, i).scale(a))
        return out

    def validate(self):
        c = self.base
        for (x, y, i), m in self.act.items():
            if (x, y) not in c.hom_basis or i >= c.dim(x, y):
                raise InvalidModule(f"action for unknown basis morphism ({x},{y},{i})")
            if m.shape != self._shape(x, y):
                raise InvalidModule(
                    f"action at ({x},{y},{i}) has shape {m.shape}, expected {self._shape(x, y)}")
        for x in c.objects:
            if self.act_vec(x, x, c.id_coords(x)) != Mat.identity(c.field, self.dims[x]):
                raise InvalidModule(f"identity at {x} does not act as the identity")
        for x in c.objects:
            for y in c.objects:
                dxy = c.dim(x, y)
                if not dxy:
                    continue
                for z in c.objects:
                    dyz = c.dim(y, z)
                    if not dyz:
                        continue
                    for i in range(dxy):
                        for j in range(dyz):
                            gf = c.compose_basis(x, y, z, i, j)
                            lhs = self.act_vec(x, z, gf)
                            if self.side == "left":
                                rhs = self.act_mat(y, z, j).mul(self.act_mat(x, y, i))
                            else:
                                rhs = self.act_mat(x, y, i).mul(self.act_mat(y, z, j))
                            if lhs != rhs:
                                raise InvalidModule(
                                    f"action not functorial at ({x},{y},{z}) basis ({i},{j})")
        return True

    def __eq__(self, other):
        if not isinstance(other, CatModule):
            return NotImplemented
        if self.base != other.base or self.side != other.side or self.dims != other.dims:
            return False
        keys = set(self.act) | set(other.act)
        return all(self.act_mat(*k) == other.act_mat(*k) for k in keys)

    __hash__ = None

    def __repr__(self):
        return f"CatModule({self.side}, dims={self.dims})"


class ModuleMap:

    def __init__(self, source, target, comp, check=True):
        if source.base != target.base or source.side != target.side:
            raise BaseMismatch("module map between incompatible modules")
        self.source = source
        self.target = target
        self.comp = {x: comp.get(x, Mat.zeros(source.base.field,
                                              target.dims[x], source.dims[x]))
                     for x in source.base.objects}
        if check:
            self.validate()

    def mat_at(self, x):
        return self.comp[x]

    def validate(self):
        c = self.source.base
        for x, m in self.comp.items():
            if m.shape != (self.target.dims[x], self.source.dims[x]):
                raise InvalidModule(f"component at {x} has wrong shape")
        for x in c.objects:
            for y in c.objects:
                for i in range(c.dim(x, y)):
                    if self.source.side == "left":
                        lhs = self.target.act_mat(x, y, i).mul(self.comp[x])
                        rhs = self.comp[y].mul(self.source.act_mat(x, y, i))
                    else:
                        lhs = self.target.act_mat(x, y, i).mul(self.comp[y])
                        rhs = self.comp[x].mul(self.source.act_mat(x, y, i))
                    if lhs != rhs:
                        raise InvalidModule(f"not natural at morphism ({x},{y},{i})")
        return True

    def then(self, other):
        """self followed by other."""
        comp = {x: other.comp[x].mul(self.comp[x]) for x in self.comp}
        return ModuleMap(self.source, other.target, comp, check=False)

    def is_zero(self):
        return all(m.is_zero() for m in self.comp.values())

    def flatten(self):
        out = []
        for x in self.source.base.objects:
            for row in self.comp[x].data:
                out.extend(row)
        return tuple(out)


# ---------------------------------------------------------------------------
# basic modules

def zero_module(c, side="left"):
    return CatModule(c, side, {}, {}, check=False)


def representable(c, x, side="left"):
    """C(x,-) as a left module / C(-,x) as a right module."""
    if x not in c.objects:
        raise UnknownObject(x)
    if side == "left":
        dims = {y: c.dim(x, y) for y in c.objects}
        act = {}
        for y in c.objects:
            for z in c.objects:
                for j in range(c.dim(y, z)):
                    act[(y, z, j)] = c.post_matrix_basis(x, y, z, j)
        return CatModule(c, "left", dims, act, check=False)
    dims = {y: c.dim(y, x) for y in c.objects}
    act = {}
    for y in c.objects:
        for z in c.objects:
            for i in range(c.dim(y, z)):
                act[(y, z, i)] = c.pre_matrix_basis(y, z, x, i)
    return CatModule(c, "right", dims, act, check=False)


def simple(c, x, side="left"):
    """The one-dimensional module supported at x.

    The scalar through which End(x) acts is trace/dim of left
    multiplication, which is the correct algebra map exactly when End(x)
    is local (identity plus nilpotents); anything else fails validation.
    """
    f = c.field
    d = c.dim(x, x)
    scalars = []
    for i in range(d):
        post = c.post_matrix_basis(x, x, x, i)
        tr = f.zero()
        for k in range(d):
            tr = f.add(tr, post.data[k][k])
        scalars.append(f.div(tr, f.of(d)))
    dims = {y: 1 if y == x else 0 for y in c.objects}
    act = {(x, x, i): Mat.from_rows(f, [[s]]) for i, s in enumerate(scalars)}
    try:
        return CatModule(c, side, dims, act)
    except InvalidModule as exc:
        raise InvalidModule(f"no simple module supported at {x}: {exc}") from exc


def direct_sum(modules):
    if not modules:
        raise ValueError("direct sum of nothing")
    base, side = modules[0].base, modules[0].side
    for m in modules:
        if m.base != base or m.side != side:
            raise BaseMismatch("direct sum of incompatible modules")
    dims = {x: sum(m.dims[x] for m in modules) for x in base.objects}
    act = {}
    for x in base.objects:
        for y in base.objects:
            for i in range(base.dim(x, y)):
                blocks = [m.act_mat(x, y, i) for m in modules]
                key = (x, y, i)
                if side == "left":
                    act[key] = block_diag(base.field, blocks, dims[y], dims[x])
                else:
                    act[key] = block_diag(base.field, blocks, dims[x], dims[y])
    return CatModule(base, side, dims, act, check=False)


def dualize(m):
    """Value-wise linear dual with transposed actions (opposite side)."""
    side = "right" if m.side == "left" else "left"
    act = {k: mat.transpose() for k, mat in m.act.items()}
    return CatModule(m.base, side, dict(m.dims), act, check=False)


def as_left_over_op(m, base_op=None):
    """A right C-module is the same thing as a left module over C^op."""
    if m.side != "right":
        raise BaseMismatch("expected a right module")
    if base_op is None:
        base_op = opposite(m.base)
    act = {(y, x, i): mat for (x, y, i), mat in m.act.items()}
    return CatModule(base_op, "left", dict(m.dims), act, check=False)


def as_right_over_op(m, base_op=None):
    """A left C-module is the same thing as a right module over C^op."""
    if m.side != "left":
        raise BaseMismatch("expected a left module")
    if base_op is None:
        base_op = opposite(m.base)
    act = {(y, x, i): mat for (x, y, i), mat in m.act.items()}
    return CatModule(base_op, "right", dict(m.dims), act, check=False)


def restrict_module(m, fun):
    """Pull a module back along a K-functor (the functor's source acts
    through its images)."""
    if m.base != fun.target:
        raise BaseMismatch("module does not live over the functor target")
    src = fun.source
    dims = {x: m.dims[fun.on_object(x)] for x in src.objects}
    act = {}
    for x in src.objects:
        for y in src.objects:
            for i in range(src.dim(x, y)):
                image = fun.on_coords(x, y, unit_vector(src.field, src.dim(x, y), i))
                act[(x, y, i)] = m.act_vec(fun.on_object(x), fun.on_object(y), image)
    return CatModule(src, m.side, dims, act, check=False)


def swap_product_module(m, swapped_base=None):
    """Transport a left module over A tensor B to one over B tensor A."""
    ab = m.base.product_of
    if ab is None:
        raise BaseMismatch("module base is not a tensor product category")
    a, b = ab
    if swapped_base is None:
        swapped_base = tensor_category(b, a)
    dims = {}
    for alpha in a.objects:
        for beta in b.objects:
            dims[pair_object(beta, alpha)] = m.dims[pair_object(alpha, beta)]
    act = {}
    for a1 in a.objects:
        for b1 in b.objects:
            for a2 in a.objects:
                for b2 in b.objects:
                    da = a.dim(a1, a2)
                    db = b.dim(b1, b2)
                    src = pair_object(b1, a1)
                    tgt = pair_object(b2, a2)
                    for j in range(db):
                        for i in range(da):
                            act[(src, tgt, j * da + i)] = m.act_mat(
                                pair_object(a1, b1), pair_object(a2, b2), i * db + j)
    return CatModule(swapped_base, "left", dims, act, check=False)


# ---------------------------------------------------------------------------
# submodules, quotients, generators

def _orbit_closure(m, seeds):
    """Echelon spans of the submodule generated by (object, vector) seeds."""
    c = m.base
    spaces = {x: EchelonSpace(c.field, m.dims[x]) for x in c.objects}
    out_arrows = {x: [] for x in c.objects}
    for x in c.objects:
        for y in c.objects:
            for i in range(c.dim(x, y)):
                if m.side == "left":
                    out_arrows[x].append((y, m.act_mat(x, y, i)))
                else:
                    out_arrows[y].append((x, m.act_mat(x, y, i)))
    work = list(seeds)
    while work:
        x, vec = work.pop()
        if not spaces[x].add(vec):
            continue
        for y, mat in out_arrows[x]:
            work.append((y, mat.mul_vec(vec)))
    return spaces


def module_generators(m):
    """An irredundant generating set [(object, vector)], deterministic in
    the object and basis orders.  Greedy collection followed by
    redundancy pruning; over a finite-dimensional category irredundant
    generating sets are minimal (Nakayama), which keeps resolutions from
    ballooning."""
    c = m.base
    spaces = {x: EchelonSpace(c.field, m.dims[x]) for x in c.objects}
    gens = []
    for x in c.objects:
        for b in range(m.dims[x]):
            e = unit_vector(c.field, m.dims[x], b)
            if spaces[x].contains(e):
                continue
            gens.append((x, e))
            grown = _orbit_closure(m, [(x, e)])
            for y in c.objects:
                for row in grown[y].rows:
                    spaces[y].add(tuple(row))
    # prune: earlier generators may become redundant once later ones are in
    changed = True
    while changed and len(gens) > 1:
        changed = False
        for i in range(len(gens) - 1, -1, -1):
            others = gens[:i] + gens[i + 1:]
            closure = _orbit_closure(m, others)
            x, vec = gens[i]
            if closure[x].contains(vec):
                gens.pop(i)
                changed = True
    return gens


def submodule_module(m, spans):
    """The submodule with the given (canonical) column spans."""
    c = m.base
    dims = {x: spans[x].cols for x in c.objects}
    act = {}
    for (x, y) in [(x, y) for x in c.objects for y in c.objects]:
        for i in range(c.dim(x, y)):
            if m.side == "left":
                big = m.act_mat(x, y, i).mul(spans[x])
                restricted = solve(spans[y], big)
            else:
                big = m.act_mat(x, y, i).mul(spans[y])
                restricted = solve(spans[x], big)
            if restricted is None:
                raise InvalidModule(f"spans are not a submodule at ({x},{y},{i})")
            act[(x, y, i)] = restricted
    return CatModule(m.base, m.side, dims, act, check=False)


def quotient_module(m, spans):
    """Quotient by the submodule with the given spans, with the canonical
    complement bases."""
    c = m.base
    comps = {x: ComplementData(spans[x]) for x in c.objects}
    dims = {x: comps[x].dim for x in c.objects}
    act = {}
    for x in c.objects:
        for y in c.objects:
            for i in range(c.dim(x, y)):
                if m.side == "left":
                    if solve(spans[y], m.act_mat(x, y, i).mul(spans[x])) is None:
                        raise InvalidModule(f"spans not stable at ({x},{y},{i})")
                    act[(x, y, i)] = comps[y].proj.mul(m.act_mat(x, y, i)).mul(comps[x].section)
                else:
                    if solve(spans[x], m.act_mat(x, y, i).mul(spans[y])) is None:
                        raise InvalidModule(f"spans not stable at ({x},{y},{i})")
                    act[(x, y, i)] = comps[x].proj.mul(m.act_mat(x, y, i)).mul(comps[y].section)
    return CatModule(m.base, m.side, dims, act, check=False)


def quotient_representable(c, ideal, x, side="left"):
    """C(x,-)/I(x,-) (left) or C(-,x)/I(-,x) (right)."""
    rep = representable(c, x, side)
    if side == "left":
        spans = {y: ideal.span[(x, y)] for y in c.objects}
    else:
        spans = {y: ideal.span[(y, x)] for y in c.objects}
    return quotient_module(rep, spans)


# ---------------------------------------------------------------------------
# Hom and tensor

class HomBasis:
    """Basis of natural transformations between two modules, computed as
    the kernel of the intertwining system.  Column order is canonical."""

    def __init__(self, source, target):
        if source.base != target.base or source.side != target.side:
            raise BaseMismatch("Hom between incompatible modules")
        self.source = source
        self.target = target
        c = source.base
        f = c.field
        offsets = {}
        total = 0
        for x in c.objects:
            offsets[x] = total
            total += target.dims[x] * source.dims[x]
        self.offsets = offsets
        self.unknowns = total
        rows = []
        for x in c.objects:
            for y in c.objects:
                for i in range(c.dim(x, y)):
                    if source.side == "left":
                        a = target.act_mat(x, y, i)   # target(x) -> target(y)
                        b = source.act_mat(x, y, i)
                        src_obj, tgt_obj = x, y
                    else:
                        a = target.act_mat(x, y, i)   # target(y) -> target(x)
                        b = source.act_mat(x, y, i)
                        src_obj, tgt_obj = y, x
                    # a * C_src - C_tgt * b = 0
                    ns, ms = target.dims[src_obj], source.dims[src_obj]
                    nt = target.dims[tgt_obj]
                    mt = source.dims[tgt_obj]
                    for r in range(nt):
                        for cc in range(ms):
                            row = [f.zero()] * total
                            for s in range(ns):
                                if a.data[r][s]:
                                    row[offsets[src_obj] + s * ms + cc] = a.data[r][s]
                            for t in range(mt):
                                if b.data[t][cc]:
                                    idx = offsets[tgt_obj] + r * mt + t
                                    row[idx] = f.sub(row[idx], b.data[t][cc])
                            rows.append(row)
        system = Mat.from_rows(f, rows, cols=total)
        self.basis_matrix = kernel_basis(system)
        self.dim = self.basis_matrix.cols

    def map_at(self, k):
        vec = self.basis_matrix.col(k)
        return self._unflatten(vec)

    def maps(self):
        return [self.map_at(k) for k in range(self.dim)]

    def _unflatten(self, vec):
        c = self.source.base
        comp = {}
        for x in c.objects:
            r, cc = self.target.dims[x], self.source.dims[x]
            off = self.offsets[x]
            comp[x] = Mat(c.field, r, cc,
                          tuple(tuple(vec[off + i * cc + j] for j in range(cc))
                                for i in range(r)))
        return ModuleMap(self.source, self.target, comp, check=False)

    def coords_of(self, module_map):
        vec = module_map.flatten()
        target = Mat.from_cols(self.source.base.field, [vec], rows=self.unknowns)
        sol = solve(self.basis_matrix, target)
        if sol is None:
            raise InvalidModule("map does not satisfy the intertwining system")
        return sol.col(0)


def module_hom(m, n):
    """Basis of Hom_{Mod}(m, n)."""
    return HomBasis(m, n)


class TensorSpace:
    """The coend (direct sum of pointwise tensors modulo the bimodule
    relations) of a right module with a left module."""

    def __init__(self, n, m):
        if n.base != m.base:
            raise BaseMismatch("tensor over different base categories")
        if n.side != "right" or m.side != "left":
            raise BaseMismatch("tensor_over_cat takes (right, left)")
        self.n = n
        self.m = m
        c = n.base
        f = c.field
        offsets = {}
        total = 0
        for x in c.objects:
            offsets[x] = total
            total += n.dims[x] * m.dims[x]
        self.offsets = offsets
        self.ambient = total
        relations = []
        for x in c.objects:
            for y in c.objects:
                for i in range(c.dim(x, y)):
                    na = n.act_mat(x, y, i)    # n(y) -> n(x)
                    ma = m.act_mat(x, y, i)    # m(x) -> m(y)
                    for u in range(n.dims[y]):
                        for v in range(m.dims[x]):
                            vec = [f.zero()] * total
                            for s in range(n.dims[x]):
                                if na.data[s][u]:
                                    idx = offsets[x] + s * m.dims[x] + v
                                    vec[idx] = f.add(vec[idx], na.data[s][u])
                            for t in range(m.dims[y]):
                                if ma.data[t][v]:
                                    idx = offsets[y] + u * m.dims[y] + t
                                    vec[idx] = f.sub(vec[idx], ma.data[t][v])
                            relations.append(tuple(vec))
        span = Mat.from_cols(f, relations, rows=total)
        # reduce to a basis of the relation space for the complement
        sp = EchelonSpace(f, total)
        for col in relations:
            sp.add(col)
        self.comp = ComplementData(sp.basis_matrix())
        self.dim = self.comp.dim
        self.proj = self.comp.proj
        self.section = self.comp.section

    def pure_index(self, x, i, j):
        return self.offsets[x] + i * self.m.dims[x] + j


def tensor_over_cat(n, m):
    return TensorSpace(n, m)


def hom_space_dim(m, n):
    return HomBasis(m, n).dim


# ---------------------------------------------------------------------------
# bimodule-style constructions

def regular_bimodule(c, env=None):
    """C as a left module over its enveloping category: value C(x',x),
    with (f^op tensor g) acting by h -> g o h o f."""
    if env is None:
        env = enveloping(c)
    dims = {}
    for x1 in c.objects:
        for x2 in c.objects:
            dims[pair_object(x1, x2)] = c.dim(x1, x2)
    act = {}
    for x1 in c.objects:
        for x2 in c.objects:
            src = pair_object(x1, x2)
            for y1 in c.objects:
                for y2 in c.objects:
                    tgt = pair_object(y1, y2)
                    d_f = c.dim(y1, x1)     # C^op(x1, y1)
                    d_g = c.dim(x2, y2)
                    for i in range(d_f):
                        pre = c.pre_matrix_basis(y1, x1, x2, i)
                        for j in range(d_g):
                            post = c.post_matrix_basis(y1, x2, y2, j)
                            act[(src, tgt, i * d_g + j)] = post.mul(pre)
    return CatModule(env, "left", dims, act, check=False)


def ideal_bimodule(c, ideal, env=None, regular=None):
    """The ideal as a sub-bimodule of the regular one, together with the
    inclusion map (spans are the ideal's canonical bases)."""
    if regular is None:
        regular = regular_bimodule(c, env)
    env = regular.base
    spans = {pair_object(x1, x2): ideal.span[(x1, x2)]
             for x1 in c.objects for x2 in c.objects}
    sub = submodule_module(regular, spans)
    incl = ModuleMap(sub, regular, {p: spans[p] for p in spans}, check=False)
    return sub, incl


def outer_tensor(m, n, env=None):
    """(m outer-tensor n)(x',x) = m(x') tensor n(x) over enveloping(C)."""
    if m.base != n.base:
        raise BaseMismatch("outer tensor over different bases")
    if m.side != "right" or n.side != "left":
        raise BaseMismatch("outer_tensor takes (right, left)")
    c = m.base
    if env is None:
        env = enveloping(c)
    dims = {}
    for x1 in c.objects:
        for x2 in c.objects:
            dims[pair_object(x1, x2)] = m.dims[x1] * n.dims[x2]
    act = {}
    for x1 in c.objects:
        for x2 in c.objects:
            src = pair_object(x1, x2)
            for y1 in c.objects:
                for y2 in c.objects:
                    tgt = pair_object(y1, y2)
                    d_f = c.dim(y1, x1)
                    d_g = c.dim(x2, y2)
                    for i in range(d_f):
                        ma = m.act_mat(y1, x1, i)    # m(x1) -> m(y1)
                        for j in range(d_g):
                            na = n.act_mat(x2, y2, j)
                            act[(src, tgt, i * d_g + j)] = kron(ma, na)
    return CatModule(env, "left", dims, act, check=False)


def hom_module(f, h, product=None):
    """Hom_K(f(-), h(?)) as a left module over C^op tensor D for a left
    C-module f and a left D-module h.  Value basis at (x,d) is the
    row-major flattening of the matrix space."""
    if f.side != "left" or h.side != "left":
        raise BaseMismatch("hom_module takes two left modules")
    cop = opposite(f.base)
    if product is None:
        product = tensor_category(cop, h.base)
    c, d = f.base, h.base
    dims = {}
    for x in c.objects:
        for dd in d.objects:
            dims[pair_object(x, dd)] = h.dims[dd] * f.dims[x]
    act = {}
    for x in c.objects:
        for dd in d.objects:
            src = pair_object(x, dd)
            for y in c.objects:
                for dd2 in d.objects:
                    tgt = pair_object(y, dd2)
                    d_phi = c.dim(y, x)      # C^op(x,y)
                    d_psi = d.dim(dd, dd2)
                    for i in range(d_phi):
                        fa = f.act_mat(y, x, i)     # f(y) -> f(x)
                        for j in range(d_psi):
                            ha = h.act_mat(dd, dd2, j)
                            act[(src, tgt, i * d_psi + j)] = kron(ha, fa.transpose())
    return CatModule(product, "left", dims, act, check=False)


def boxtimes(f, g, out_base=None):
    """Mitchell's box tensor: contract a left C-module (or a module over
    E^op tensor C) against a module over C^op tensor D.

    Returns a left D-module in the plain case and a left module over
    E^op tensor D in the bimodule case."""
    prod = g.base.product_of
    if prod is None:
        raise BaseMismatch("second factor must live over a tensor product category")
    c_op, d = prod
    c = opposite(c_op)
    if f.base.product_of is not None and f.base.product_of[1] == c:
        return _boxtimes_bimodule(f, g, c, d, out_base)
    if f.base != c:
        raise BaseMismatch("first factor is not a module over the contracted category")
    if f.side != "left" or g.side != "left":
        raise BaseMismatch("boxtimes takes left modules")

    def g_right_slice(dd):
        dims = {x: g.dims[pair_object(x, dd)] for x in c.objects}
        act = {}
        for x in c.objects:
            for y in c.objects:
                dxy = c.dim(x, y)
                d_id = d.dim(dd, dd)
                for i in range(dxy):
                    # f: x->y acting on the right = C^op basis i at (y,x)
                    coords = vzero(c.field, c.dim(x, y) * d_id)
                    coords = list(coords)
                    idc = d.id_coords(dd)
                    for t, a in enumerate(idc):
                        coords[i * d_id + t] = a
                    act[(x, y, i)] = g.act_vec(pair_object(y, dd), pair_object(x, dd),
                                               tuple(coords))
        return CatModule(c, "right", dims, act, check=False)

    slices = {dd: tensor_over_cat(g_right_slice(dd), f) for dd in d.objects}
    dims = {dd: slices[dd].dim for dd in d.objects}
    act = {}
    for dd in d.objects:
        for dd2 in d.objects:
            for j in range(d.dim(dd, dd2)):
                blocks = []
                for x in c.objects:
                    psi = unit_vector(d.field, d.dim(dd, dd2), j)
                    coords = vzero(c.field, c.dim(x, x) * d.dim(dd, dd2))
                    coords = list(coords)
                    for s, a in enumerate(c.id_coords(x)):
                        for t in range(d.dim(dd, dd2)):
                            if psi[t] and a:
                                coords[s * d.dim(dd, dd2) + t] = c.field.mul(a, psi[t])
                    gmap = g.act_vec(pair_object(x, dd), pair_object(x, dd2), tuple(coords))
                    blocks.append(kron(gmap, Mat.identity(c.field, f.dims[x])))
                big = block_diag(c.field, blocks, slices[dd2].ambient, slices[dd].ambient)
                act[(dd, dd2, j)] = slices[dd2].proj.mul(big).mul(slices[dd].section)
    return CatModule(d, "left", dims, act)


def _boxtimes_bimodule(f, g, c, d, out_base):
    e_op = f.base.product_of[0]
    if out_base is None:
        out_base = tensor_category(e_op, d)

    def f_left_slice(eps):
        dims = {x: f.dims[pair_object(eps, x)] for x in c.objects}
        act = {}
        for x in c.objects:
            for y in c.objects:
                for i in range(c.dim(x, y)):
                    d_e = e_op.dim(eps, eps)
                    coords = [c.field.zero()] * (d_e * c.dim(x, y))
                    for s, a in enumerate(e_op.id_coords(eps)):
                        coords[s * c.dim(x, y) + i] = a
                    act[(x, y, i)] = f.act_vec(pair_object(eps, x), pair_object(eps, y),
                                               tuple(coords))
        return CatModule(c, "left", dims, act, check=False)

    def g_right_slice(dd):
        dims = {x: g.dims[pair_object(x, dd)] for x in c.objects}
        act = {}
        for x in c.objects:
            for y in c.objects:
                for i in range(c.dim(x, y)):
                    d_id = d.dim(dd, dd)
                    coords = [c.field.zero()] * (c.dim(x, y) * d_id)
                    for t, a in enumerate(d.id_coords(dd)):
                        coords[i * d_id + t] = a
                    act[(x, y, i)] = g.act_vec(pair_object(y, dd), pair_object(x, dd),
                                               tuple(coords))
        return CatModule(c, "right", dims, act, check=False)

    f_slices = {eps: f_left_slice(eps) for eps in e_op.objects}
    g_slices = {dd: g_right_slice(dd) for dd in d.objects}
    spaces = {(eps, dd): tensor_over_cat(g_slices[dd], f_slices[eps])
              for eps in e_op.objects for dd in d.objects}
    dims = {pair_object(eps, dd): spaces[(eps, dd)].dim
            for eps in e_op.objects for dd in d.objects}
    act = {}
    for eps in e_op.objects:
        for dd in d.objects:
            src = pair_object(eps, dd)
            for eps2 in e_op.objects:
                for dd2 in d.objects:
                    tgt = pair_object(eps2, dd2)
                    d_eta = e_op.dim(eps, eps2)
                    d_psi = d.dim(dd, dd2)
                    for ii in range(d_eta):
                        for jj in range(d_psi):
                            blocks = []
                            for x in c.objects:
                                gco = [c.field.zero()] * (c.dim(x, x) * d_psi)
                                for s, a in enumerate(c.id_coords(x)):
                                    gco[s * d_psi + jj] = a
                                gmap = g.act_vec(pair_object(x, dd), pair_object(x, dd2),
                                                 tuple(gco))
                                fco = [c.field.zero()] * (d_eta * c.dim(x, x))
                                for t, a in enumerate(c.id_coords(x)):
                                    fco[ii * c.dim(x, x) + t] = a
                                fmap = f.act_vec(pair_object(eps, x), pair_object(eps2, x),
                                                 tuple(fco))
                                blocks.append(kron(gmap, fmap))
                            big = block_diag(c.field, blocks,
                                             spaces[(eps2, dd2)].ambient,
                                             spaces[(eps, dd)].ambient)
                            act[(src, tgt, ii * d_psi + jj)] = (
                                spaces[(eps2, dd2)].proj.mul(big).mul(spaces[(eps, dd)].section))
    return CatModule(out_base, "left", dims, act)


# ---------------------------------------------------------------------------
# free resolutions by split projective summands

class _Summand:
    """The projective summand C(x,-) o e cut out by an idempotent e in
    End(x): values are images of the precomposition idempotent, with a
    canonical image basis and the projection onto it."""

    def __init__(self, c, x, e_coords):
        self.c = c
        self.x = x
        self.e = e_coords
        self.basis = {}
        self.proj = {}
        for y in c.objects:
            rho = c.pre_matrix(x, x, y, e_coords)
            b = column_space_basis(rho)
            self.basis[y] = b
            p = solve(b, rho)
            if p is None:
                raise InvalidModule("precomposition idempotent has inconsistent image")
            self.proj[y] = p

    def dim(self, y):
        return self.basis[y].cols


_summand_cache = {}


def _summand(c, x, e_coords):
    key = (id(c), x, e_coords)
    s = _summand_cache.get(key)
    if s is None:
        s = _Summand(c, x, e_coords)
        _summand_cache[key] = s
    return s


class FreeResolution:
    """A chain of projective presentations P_len -> ... -> P_0 -> M -> 0.

    gens[k] lists the summands of P_k as (object, idempotent coords)
    pairs; images[0] holds the augmentation images inside M, images[k]
    (k >= 1) the generator images inside P_{k-1}, as coordinate vectors in
    the split bases at the generator's object.
    """

    def __init__(self, base, module, gens, images):
        self.base = base
        self.module = module
        self.gens = gens
        self.images = images
        self._terms = {}

    @property
    def length(self):
        return len(self.gens) - 1

    def summand(self, k, j):
        x, e = self.gens[k][j]
        return _summand(self.base, x, e)

    def term_dim(self, k, y):
        return sum(self.summand(k, j).dim(y) for j in range(len(self.gens[k])))

    def term(self, k):
        if k not in self._terms:
            self._terms[k] = _split_module(self.base,
                                           [self.summand(k, j)
                                            for j in range(len(self.gens[k]))])
        return self._terms[k]

    def aug_matrix(self, y):
        c = self.base
        cols = []
        for j, (xj, _) in enumerate(self.gens[0]):
            img = self.images[0][j]
            fb = self.summand(0, j).basis[y]
            for b in range(fb.cols):
                cols.append(self.module.act_vec(xj, y, fb.col(b)).mul_vec(img))
        return Mat.from_cols(c.field, cols, rows=self.module.dims[y])

    def map_matrix(self, k, y):
        """Matrix of d_k: P_k(y) -> P_{k-1}(y)."""
        c = self.base
        prev = self.term(k - 1)
        cols = []
        for j, (xj, _) in enumerate(self.gens[k]):
            img = self.images[k][j]
            fb = self.summand(k, j).basis[y]
            for b in range(fb.cols):
                cols.append(prev.act_vec(xj, y, fb.col(b)).mul_vec(img))
        return Mat.from_cols(c.field, cols, rows=prev.dims[y])

    def module_map(self, k):
        """d_k as a validated ModuleMap (k = 0 gives the augmentation)."""
        if k == 0:
            comp = {y: self.aug_matrix(y) for y in self.base.objects}
            return ModuleMap(self.term(0), self.module, comp)
        comp = {y: self.map_matrix(k, y) for y in self.base.objects}
        return ModuleMap(self.term(k), self.term(k - 1), comp)

    def verify(self, up_to=None):
        """Composite-zero, surjectivity and rank-exactness checks; returns
        a list of failure strings (empty = certified exact)."""
        if up_to is None:
            up_to = self.length
        up_to = min(up_to, self.length)
        failures = []
        c = self.base
        for y in c.objects:
            mats = [self.aug_matrix(y)] + [self.map_matrix(k, y)
                                           for k in range(1, up_to + 1)]
            if rank(mats[0]) != self.module.dims[y]:
                failures.append(f"augmentation not surjective at {y}")
            for k in range(1, up_to + 1):
                prod = mats[k - 1].mul(mats[k])
                if not prod.is_zero():
                    failures.append(f"d_{k-1} o d_{k} nonzero at {y}")
                if mats[k - 1].cols - rank(mats[k - 1]) != rank(mats[k]):
                    failures.append(f"not exact at degree {k-1}, object {y}")
        return failures


def _split_module(c, summands):
    dims = {y: sum(s.dim(y) for s in summands) for y in c.objects}
    act = {}
    for y in c.objects:
        for z in c.objects:
            for i in range(c.dim(y, z)):
                blocks = [s.proj[z].mul(c.post_matrix_basis(s.x, y, z, i)).mul(s.basis[y])
                          for s in summands]
                act[(y, z, i)] = block_diag(c.field, blocks, dims[z], dims[y])
    return CatModule(c, "left", dims, act, check=False)


def _free_module(c, gen_objects):
    dims = {y: sum(c.dim(xj, y) for xj in gen_objects) for y in c.objects}
    act = {}
    for y in c.objects:
        for z in c.objects:
            for i in range(c.dim(y, z)):
                blocks = [c.post_matrix_basis(xj, y, z, i) for xj in gen_objects]
                act[(y, z, i)] = block_diag(c.field, blocks, dims[z], dims[y])
    return CatModule(c, "left", dims, act, check=False)


def minimal_split_generators(m):
    """Generators split along the identity summands of their objects and
    pruned to an irredundant (hence minimal) homogeneous set.  Returns
    [(object, idempotent coords, component vector)]."""
    c = m.base
    comps = []
    for x, vec in module_generators(m):
        for e in c.identity_summands[x]:
            comp = m.act_vec(x, x, e).mul_vec(vec)
            if any(comp):
                comps.append((x, e, comp))
    changed = True
    while changed and len(comps) > 1:
        changed = False
        for i in range(len(comps) - 1, -1, -1):
            others = [(x, v) for k, (x, _, v) in enumerate(comps) if k != i]
            closure = _orbit_closure(m, others)
            x, _, vec = comps[i]
            if closure[x].contains(vec):
                comps.pop(i)
                changed = True
    return comps


def projective_resolution(m, length):
    """Resolution by idempotent-cut summands of representables, built on
    minimal generating sets of successive kernels."""
    if m.side != "left":
        raise BaseMismatch("resolutions are computed for left modules; transport first")
    c = m.base
    comps = minimal_split_generators(m)
    gens = [[(x, e) for x, e, _ in comps]]
    images = [[v for *_, v in comps]]
    res = FreeResolution(c, m, gens, images)
    for k in range(1, length + 1):
        if not gens[k - 1]:
            gens.append([])
            images.append([])
            continue
        if k == 1:
            mats = {y: res.aug_matrix(y) for y in c.objects}
        else:
            mats = {y: res.map_matrix(k - 1, y) for y in c.objects}
        spans = {y: kernel_basis(mats[y]) for y in c.objects}
        if all(spans[y].cols == 0 for y in c.objects):
            gens.append([])
            images.append([])
            continue
        prev = res.term(k - 1)
        ker_mod = submodule_module(prev, spans)
        kcomps = minimal_split_generators(ker_mod)
        gens.append([(x, e) for x, e, _ in kcomps])
        images.append([spans[x].mul_vec(v) for x, e, v in kcomps])
    return res


# ---------------------------------------------------------------------------
# Ext and Tor

class _InvariantData:
    """Per-summand invariant subspaces of a coefficient module: the image
    of the idempotent action, with basis and projection."""

    def __init__(self, coeff):
        self.coeff = coeff
        self._cache = {}

    def get(self, x, e):
        key = (x, e)
        if key not in self._cache:
            a = self.coeff.act_vec(x, x, e)
            b = column_space_basis(a)
            p = solve(b, a)
            if p is None:
                raise InvalidModule("idempotent action has inconsistent image")
            self._cache[key] = (b, p)
        return self._cache[key]


class ExtComplexData:
    """Cochain spaces, differentials and per-summand invariant bases for
    Hom(P_., coeff) through Hom(C(x,-) o e, N) = e-invariants of N(x)."""

    def __init__(self, dims, diffs, inv):
        self.dims = dims
        self.diffs = diffs
        self.inv = inv       # inv[k] = list of (x, basis, proj) per summand


def _level_gens(res, k):
    return res.gens[k] if k <= res.length else []


def ext_data(res, coeff, upto):
    c = res.base
    f = c.field
    invariants = _InvariantData(coeff)
    inv = []
    dims = []
    for k in range(upto + 2):
        level = []
        for x, e in _level_gens(res, k):
            b, p = invariants.get(x, e)
            level.append((x, b, p))
        inv.append(level)
        dims.append(sum(b.cols for _, b, _ in level))
    diffs = []
    for k in range(upto + 1):
        tgt = _level_gens(res, k + 1)
        src = _level_gens(res, k)
        rows, cols = dims[k + 1], dims[k]
        grid = [[f.zero()] * cols for _ in range(rows)]
        roff = 0
        for j, (xt, _) in enumerate(tgt):
            _, bt, pt = inv[k + 1][j]
            img = res.images[k + 1][j]
            pos = 0
            coff = 0
            for i, (xs, _) in enumerate(src):
                _, bs, _ = inv[k][i]
                fb = res.summand(k, i).basis[xt]
                acc = Mat.zeros(f, coeff.dims[xt], coeff.dims[xs])
                for b in range(fb.cols):
                    a = img[pos]
                    pos += 1
                    if a:
                        acc = acc.add(coeff.act_vec(xs, xt, fb.col(b)).scale(a))
                blk = pt.mul(acc).mul(bs)
                for r in range(blk.rows):
                    row = grid[roff + r]
                    for s in range(blk.cols):
                        if blk.data[r][s]:
                            row[coff + s] = f.add(row[coff + s], blk.data[r][s])
                coff += bs.cols
            roff += bt.cols
        diffs.append(Mat(f, rows, cols, tuple(tuple(r) for r in grid)))
    return ExtComplexData(dims, diffs, inv)


def tor_data(res, coeff, upto):
    """Chain spaces and differentials of coeff tensor P_. through
    N tensor (C(x,-) o e) = e-invariants of N(x) (coeff is right)."""
    c = res.base
    f = c.field
    invariants = _InvariantData(coeff)
    inv = []
    dims = []
    for k in range(upto + 2):
        level = []
        for x, e in _level_gens(res, k):
            b, p = invariants.get(x, e)
            level.append((x, b, p))
        inv.append(level)
        dims.append(sum(b.cols for _, b, _ in level))
    boundaries = []
    for k in range(1, upto + 2):
        tgt = _level_gens(res, k)
        src = _level_gens(res, k - 1)
        rows, cols = dims[k - 1], dims[k]
        grid = [[f.zero()] * cols for _ in range(rows)]
        coff = 0
        for j, (xt, _) in enumerate(tgt):
            _, bt, _ = inv[k][j]
            img = res.images[k][j]
            pos = 0
            roff = 0
            for i, (xs, _) in enumerate(src):
                _, bs, ps = inv[k - 1][i]
                fb = res.summand(k - 1, i).basis[xt]
                acc = Mat.zeros(f, coeff.dims[xs], coeff.dims[xt])
                for b in range(fb.cols):
                    a = img[pos]
                    pos += 1
                    if a:
                        acc = acc.add(coeff.act_vec(xs, xt, fb.col(b)).scale(a))
                blk = ps.mul(acc).mul(bt)
                for r in range(blk.rows):
                    row = grid[roff + r]
                    for s in range(blk.cols):
                        if blk.data[r][s]:
                            row[coff + s] = f.add(row[coff + s], blk.data[r][s])
                roff += bs.cols
            coff += bt.cols
        boundaries.append(Mat(f, rows, cols, tuple(tuple(r) for r in grid)))
    return dims, boundaries


def ext(m, n, max_deg=4, res=None):
    """Ext^0..Ext^max_deg dimensions over Mod(base)."""
    if m.base != n.base or m.side != n.side:
        raise BaseMismatch("ext needs two modules of the same base and side")
    if m.side == "right":
        base_op = opposite(m.base)
        m = as_left_over_op(m, base_op)
        n = as_left_over_op(n, base_op)
    if res is None:
        res = projective_resolution(m, max_deg + 1)
    data = ext_data(res, n, max_deg)
    return complex_cohomology_dims(data.dims, data.diffs, max_deg)


def tor(n, m, max_deg=4, res=None):
    """Tor_0..Tor_max_deg dimensions (n right, m left, same base)."""
    if n.base != m.base:
        raise BaseMismatch("tor over different bases")
    if n.side != "right" or m.side != "left":
        raise BaseMismatch("tor takes (right, left)")
    if res is None:
        res = projective_resolution(m, max_deg + 1)
    dims, boundaries = tor_data(res, n, max_deg)
    ranks = [rank(b) for b in boundaries]
    out = []
    for k in range(max_deg + 1):
        h = dims[k]
        if k >= 1:
            h -= ranks[k - 1]
        h -= ranks[k]
        out.append(h)
    return out


def is_projective(m):
    """Splitting test: build a cover by representables on a generating
    set and solve for a natural section (an epimorphism from a projective
    splits exactly when the target is projective)."""
    if m.is_zero():
        return True
    work = m if m.side == "left" else as_left_over_op(m)
    c = work.base
    f = c.field
    gens = module_generators(work)
    gen_objs = [x for x, _ in gens]
    p = _free_module(c, gen_objs)
    eps = {}
    for y in c.objects:
        cols = []
        for j, xj in enumerate(gen_objs):
            img = gens[j][1]
            for fi in range(c.dim(xj, y)):
                cols.append(work.act_mat(xj, y, fi).mul_vec(img))
        eps[y] = Mat.from_cols(f, cols, rows=work.dims[y])
    offsets = {}
    total = 0
    for x in c.objects:
        offsets[x] = total
        total += p.dims[x] * work.dims[x]
    rows = []
    rhs = []
    # naturality: P.act(f) sigma_x - sigma_y M.act(f) = 0
    for x in c.objects:
        for y in c.objects:
            for i in range(c.dim(x, y)):
                a = p.act_mat(x, y, i)
                b = work.act_mat(x, y, i)
                for r in range(p.dims[y]):
                    for cc in range(work.dims[x]):
                        row = [f.zero()] * total
                        for s in range(p.dims[x]):
                            if a.data[r][s]:
                                row[offsets[x] + s * work.dims[x] + cc] = a.data[r][s]
                        for t in range(work.dims[y]):
                            if b.data[t][cc]:
                                idx = offsets[y] + r * work.dims[y] + t
                                row[idx] = f.sub(row[idx], b.data[t][cc])
                        rows.append(row)
                        rhs.append(f.zero())
    # splitting: eps_y sigma_y = id
    one = f.one()
    for y in c.objects:
        for r in range(work.dims[y]):
            for cc in range(work.dims[y]):
                row = [f.zero()] * total
                for s in range(p.dims[y]):
                    if eps[y].data[r][s]:
                        row[offsets[y] + s * work.dims[y] + cc] = eps[y].data[r][s]
                rows.append(row)
                rhs.append(one if r == cc else f.zero())
    system = Mat.from_rows(f, rows, cols=total)
    target = Mat.from_cols(f, [tuple(rhs)], rows=len(rhs))
    return solve(system, target) is not None


def big_ext_functor(c, ideal, m, max_deg=4):
    """Per-object Ext and Tor tables of the quotient representables
    against a left module m."""
    if m.base != c or m.side != "left":
        raise BaseMismatch("coefficient must be a left module over the category")
    ext_rows = {}
    for x in c.objects:
        q = quotient_representable(c, ideal, x, "left")
        ext_rows[x] = ext(q, m, max_deg)
    res = projective_resolution(m, max_deg + 1)
    tor_rows = {}
    for x in c.objects:
        r = quotient_representable(c, ideal, x, "right")
        tor_rows[x] = tor(r, m, max_deg, res=res)
    return {"ext": ext_rows, "tor": tor_rows}


# ---------------------------------------------------------------------------
# seeded random modules (quotients of representable sums)

def random_module(c, rng, side="left", max_summands=2, max_killed=2):
    summands = [representable(c, rng.choice(c.objects), side)
                for _ in range(rng.randrange(1, max_summands + 1))]
    p = direct_sum(summands)
    seeds = []
    for _ in range(rng.randrange(0, max_killed + 1)):
        x = rng.choice(c.objects)
        if p.dims[x] == 0:
            continue
        vec = tuple(c.field.of(rng.randrange(-2, 3)) for _ in range(p.dims[x]))
        seeds.append((x, vec))
    if not seeds:
        return p
    spans = _orbit_closure(p, seeds)
    return quotient_module(p, {x: spans[x].basis_matrix() for x in c.objects})
