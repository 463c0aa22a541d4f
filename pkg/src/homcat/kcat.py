"""Finite K-linear categories and the constructions on them.

A category is stored by structure constants: ordered objects, an ordered
basis for every Hom space, a composition tensor per object triple, and
identity coordinate vectors.  Conventions used throughout the package:

  * morphisms compose right-to-left: comp[(x,y,z)][i][j] holds the
    coordinates of g_j o f_i for f_i in Hom(x,y), g_j in Hom(y,z);
  * all orderings (objects, bases, tensor pairs) are explicit, so every
    matrix derived downstream is reproducible;
  * categories are validated eagerly -- an invalid composition table is
    rejected at construction, never repaired.

Tensor products, opposites, enveloping categories, quotients by ideals,
triangular matrix categories and one-point extensions are all built here.
"""

from __future__ import annotations

from .exactla import (
    FieldMismatch, Mat, unit_vector, vadd, vkron, vscale, vzero,
    ComplementData,
)


class InvalidCategory(ValueError):
    def __init__(self, report):
        super().__init__(str(report))
        self.report = report


class UnknownObject(KeyError):
    pass


class NotTriangular(ValueError):
    pass


class InvalidBimodule(ValueError):
    pass


class InvalidModule(ValueError):
    pass


class InvalidFunctor(ValueError):
    pass


class ValidationReport:
    """Accumulated axiom violations; empty report means the data is a
    genuine K-linear category."""

    def __init__(self):
        self.failures = []

    @property
    def ok(self):
        return not self.failures

    def fail(self, kind, where, message):
        self.failures.append((kind, where, message))

    def __str__(self):
        if self.ok:
            return "valid"
        lines = [f"{kind} at {where}: {msg}" for kind, where, msg in self.failures]
        return f"{len(self.failures)} violation(s):\n  " + "\n  ".join(lines)

    def __len__(self):
        return len(self.failures)


class FiniteKCategory:

    def __init__(self, field, objects, hom_basis, comp, identity,
                 check=True, product_of=None, triangular=None, paths=None,
                 identity_summands=None):
        self.field = field
        self.objects = tuple(objects)
        self.hom_basis = {k: tuple(v) for k, v in hom_basis.items()}
        for pair in [(x, y) for x in self.objects for y in self.objects]:
            self.hom_basis.setdefault(pair, ())
        self.comp = comp
        self.identity = identity
        self.product_of = product_of
        self.triangular = triangular
        self.paths = paths
        # orthogonal idempotents summing to the identity, used to split
        # representables into smaller projective summands during
        # resolutions; the trivial decomposition is always legal
        if identity_summands is None:
            identity_summands = {x: (identity[x],) for x in self.objects}
        self.identity_summands = identity_summands
        self._post_cache = {}
        self._pre_cache = {}
        if len(set(self.objects)) != len(self.objects) or not self.objects:
            raise InvalidCategory(_quick_report("objects", "object list empty or duplicated"))
        for (x, y), labels in self.hom_basis.items():
            if len(set(labels)) != len(labels):
                raise InvalidCategory(_quick_report((x, y), "duplicate basis labels"))
        if check:
            report = self.validate()
            if not report.ok:
                raise InvalidCategory(report)
            self._check_summands()

    def _check_summands(self):
        for x, summands in self.identity_summands.items():
            total = vzero(self.field, self.dim(x, x))
            for i, e in enumerate(summands):
                total = vadd(self.field, total, e)
                for j, f in enumerate(summands):
                    prod = self.compose(x, x, x, e, f)
                    expect = e if i == j else vzero(self.field, self.dim(x, x))
                    if prod != expect:
                        raise InvalidCategory(_quick_report(
                            x, f"identity summands {i},{j} are not orthogonal idempotents"))
            if total != self.id_coords(x):
                raise InvalidCategory(_quick_report(x, "identity summands do not sum to 1"))

    # -- basic accessors ---------------------------------------------------

    def dim(self, x, y):
        return len(self.hom_basis[(x, y)])

    def total_dim(self):
        return sum(len(v) for v in self.hom_basis.values())

    def id_coords(self, x):
        if x not in self.identity:
            raise UnknownObject(x)
        return self.identity[x]

    def basis_morphisms(self):
        """Yield (x, y, index, label) over all Hom-space bases."""
        for x in self.objects:
            for y in self.objects:
                for i, label in enumerate(self.hom_basis[(x, y)]):
                    yield x, y, i, label

    def compose_basis(self, x, y, z, i, j):
        """Coordinates of g_j o f_i."""
        return self.comp[(x, y, z)][i][j]

    def compose(self, x, y, z, f_coords, g_coords):
        """Bilinear extension of the composition table."""
        out = vzero(self.field, self.dim(x, z))
        table = self.comp.get((x, y, z))
        if table is None:
            return out
        for i, a in enumerate(f_coords):
            if not a:
                continue
            row = table[i]
            for j, b in enumerate(g_coords):
                if not b:
                    continue
                out = vadd(self.field, out, vscale(self.field, self.field.mul(a, b), row[j]))
        return out

    def post_matrix_basis(self, x, y, z, j):
        """Matrix of (g_j o -): Hom(x,y) -> Hom(x,z)."""
        key = (x, y, z, j)
        m = self._post_cache.get(key)
        if m is None:
            table = self.comp.get((x, y, z))
            if table is None:
                m = Mat.zeros(self.field, self.dim(x, z), self.dim(x, y))
            else:
                cols = [table[i][j] for i in range(self.dim(x, y))]
                m = Mat.from_cols(self.field, cols, rows=self.dim(x, z))
            self._post_cache[key] = m
        return m

    def pre_matrix_basis(self, x, y, z, i):
        """Matrix of (- o f_i): Hom(y,z) -> Hom(x,z) for f_i in Hom(x,y)."""
        key = (x, y, z, i)
        m = self._pre_cache.get(key)
        if m is None:
            table = self.comp.get((x, y, z))
            if table is None:
                m = Mat.zeros(self.field, self.dim(x, z), self.dim(y, z))
            else:
                cols = [table[i][j] for j in range(self.dim(y, z))]
                m = Mat.from_cols(self.field, cols, rows=self.dim(x, z))
            self._pre_cache[key] = m
        return m

    def post_matrix(self, x, y, z, g_coords):
        m = Mat.zeros(self.field, self.dim(x, z), self.dim(x, y))
        for j, b in enumerate(g_coords):
            if b:
                m = m.add(self.post_matrix_basis(x, y, z, j).scale(b))
        return m

    def pre_matrix(self, x, y, z, f_coords):
        m = Mat.zeros(self.field, self.dim(x, z), self.dim(y, z))
        for i, a in enumerate(f_coords):
            if a:
                m = m.add(self.pre_matrix_basis(x, y, z, i).scale(a))
        return m

    # -- validation --------------------------------------------------------

    def validate(self):
        report = ValidationReport()
        objs = self.objects
        for x in objs:
            if x not in self.identity or len(self.identity[x]) != self.dim(x, x):
                report.fail("identity", x, "missing or wrong-length identity coordinates")
        for (x, y, z), table in self.comp.items():
            if len(table) != self.dim(x, y):
                report.fail("comp-shape", (x, y, z), "wrong first index range")
                continue
            for row in table:
                if len(row) != self.dim(y, z) or any(len(v) != self.dim(x, z) for v in row):
                    report.fail("comp-shape", (x, y, z), "wrong table shape")
        if not report.ok:
            return report
        for x in objs:
            for y in objs:
                if (x, y, y) not in self.comp and self.dim(x, y) and self.dim(y, y):
                    report.fail("comp-missing", (x, y, y), "no composition table")
        # unit laws
        for x, y, i, label in self.basis_morphisms():
            f = unit_vector(self.field, self.dim(x, y), i)
            left = self.compose(x, y, y, f, self.id_coords(y))
            if left != f:
                report.fail("unit-left", (x, y), f"1_{y} o {label} != {label}")
            right = self.compose(x, x, y, self.id_coords(x), f)
            if right != f:
                report.fail("unit-right", (x, y), f"{label} o 1_{x} != {label}")
        # associativity on basis triples
        for x in objs:
            for y in objs:
                dxy = self.dim(x, y)
                if not dxy:
                    continue
                for z in objs:
                    dyz = self.dim(y, z)
                    if not dyz:
                        continue
                    for w in objs:
                        dzw = self.dim(z, w)
                        if not dzw:
                            continue
                        for i in range(dxy):
                            f = unit_vector(self.field, dxy, i)
                            for j in range(dyz):
                                gf = self.compose_basis(x, y, z, i, j)
                                g = unit_vector(self.field, dyz, j)
                                for k in range(dzw):
                                    h = unit_vector(self.field, dzw, k)
                                    lhs = self.compose(x, z, w, gf, h)
                                    hg = self.compose(y, z, w, g, h)
                                    rhs = self.compose(x, y, w, f, hg)
                                    if lhs != rhs:
                                        report.fail(
                                            "associativity", (x, y, z, w),
                                            f"(h o g) o f != h o (g o f) at basis ({i},{j},{k})")
        return report

    # -- comparisons ---------------------------------------------------------

    def __eq__(self, other):
        return (isinstance(other, FiniteKCategory)
                and self.field == other.field
                and self.objects == other.objects
                and self.hom_basis == other.hom_basis
                and self.comp == other.comp
                and self.identity == other.identity)

    __hash__ = None

    def __repr__(self):
        return (f"FiniteKCategory({len(self.objects)} objects, "
                f"total hom dim {self.total_dim()}, over {self.field})")


def _quick_report(where, message):
    r = ValidationReport()
    r.fail("structure", where, message)
    return r


def validate_category(c):
    return c.validate()


# ---------------------------------------------------------------------------
# basic constructions

def unit_category(field):
    """One object '*', Hom = K with 1*1 = 1."""
    one = field.one()
    return FiniteKCategory(
        field, ("*",), {("*", "*"): ("e",)},
        {("*", "*", "*"): (((one,),),)},
        {"*": (one,)})


def category_from_tables(field, objects, hom_basis, comp_entries, identities):
    """Build a category from sparse composition data.

    comp_entries maps (x,y,z) -> nested list [i][j] of coordinate lists;
    missing triples default to zero composition (only legal when it is,
    validation decides).
    """
    comp = {}
    hb = {k: tuple(v) for k, v in hom_basis.items()}
    for x in objects:
        for y in objects:
            hb.setdefault((x, y), ())
    for x in objects:
        for y in objects:
            dxy = len(hb[(x, y)])
            if not dxy:
                continue
            for z in objects:
                dyz = len(hb[(y, z)])
                if not dyz:
                    continue
                dxz = len(hb[(x, z)])
                given = comp_entries.get((x, y, z))
                table = []
                for i in range(dxy):
                    row = []
                    for j in range(dyz):
                        if given is not None:
                            row.append(tuple(field.of(v) for v in given[i][j]))
                        else:
                            row.append(vzero(field, dxz))
                    table.append(tuple(row))
                comp[(x, y, z)] = tuple(table)
    ids = {x: tuple(field.of(v) for v in identities[x]) for x in objects}
    return FiniteKCategory(field, objects, hb, comp, ids)


def opposite(c):
    """Same objects and labels, reversed Hom spaces and composition."""
    hom = {(x, y): c.hom_basis[(y, x)] for x in c.objects for y in c.objects}
    comp = {}
    for (z, y, x), table in c.comp.items():
        # op-composition of f in op(x,y)=C(y,x), g in op(y,z)=C(z,y)
        dxy = len(table[0]) if table else 0
        new = tuple(tuple(table[j][i] for j in range(len(table)))
                    for i in range(dxy))
        comp[(x, y, z)] = new
    return FiniteKCategory(c.field, c.objects, hom, comp, dict(c.identity),
                           check=False,
                           identity_summands=dict(c.identity_summands))


def pair_object(a, b):
    return f"({a},{b})"


def pair_label(f, g):
    return f"{f}#{g}"


def tensor_category(c, d):
    """Mitchell's tensor product category: objects are pairs, Hom spaces
    are tensor products, composition is componentwise."""
    if c.field != d.field:
        raise FieldMismatch("tensor product over different fields")
    field = c.field
    objects = [pair_object(a, b) for a in c.objects for b in d.objects]
    source = {pair_object(a, b): (a, b) for a in c.objects for b in d.objects}
    hom = {}
    for o1, (a, b) in source.items():
        for o2, (a2, b2) in source.items():
            hom[(o1, o2)] = tuple(pair_label(f, g)
                                  for f in c.hom_basis[(a, a2)]
                                  for g in d.hom_basis[(b, b2)])
    comp = {}
    for o1, (a, b) in source.items():
        for o2, (a2, b2) in source.items():
            d1 = len(hom[(o1, o2)])
            if not d1:
                continue
            for o3, (a3, b3) in source.items():
                d2 = len(hom[(o2, o3)])
                if not d2:
                    continue
                dc2 = d.dim(b, b2)
                dd2 = d.dim(b2, b3)
                table = []
                for i in range(d1):
                    ic, id_ = divmod(i, dc2)
                    row = []
                    for j in range(d2):
                        jc, jd = divmod(j, dd2)
                        cf = c.compose_basis(a, a2, a3, ic, jc)
                        dg = d.compose_basis(b, b2, b3, id_, jd)
                        row.append(vkron(field, cf, dg))
                    table.append(tuple(row))
                comp[(o1, o2, o3)] = tuple(table)
    identity = {pair_object(a, b): vkron(field, c.id_coords(a), d.id_coords(b))
                for a in c.objects for b in d.objects}
    summands = {pair_object(a, b): tuple(vkron(field, e, f)
                                         for e in c.identity_summands[a]
                                         for f in d.identity_summands[b])
                for a in c.objects for b in d.objects}
    return FiniteKCategory(field, objects, hom, comp, identity,
                           check=False, product_of=(c, d),
                           identity_summands=summands)


def enveloping(c):
    """C^e = C^op tensor C; bimodules over C are left modules over it."""
    return tensor_category(opposite(c), c)


# ---------------------------------------------------------------------------
# functors

class KFunctor:
    """A K-linear functor given by an object map and a matrix per Hom pair
    (columns = images of the source basis in the target basis)."""

    def __init__(self, source, target, object_map, morphism_map, check=True):
        self.source = source
        self.target = target
        self.object_map = dict(object_map)
        self.morphism_map = dict(morphism_map)
        if check:
            self.validate()

    def on_object(self, x):
        return self.object_map[x]

    def on_coords(self, x, y, coords):
        return self.morphism_map[(x, y)].mul_vec(coords)

    def validate(self):
        s, t = self.source, self.target
        for x in s.objects:
            if self.object_map.get(x) not in t.objects:
                raise InvalidFunctor(f"object {x} not mapped into the target")
        for x in s.objects:
            fx = self.object_map[x]
            if self.on_coords(x, x, s.id_coords(x)) != t.id_coords(fx):
                raise InvalidFunctor(f"identity at {x} not preserved")
        for x in s.objects:
            for y in s.objects:
                dxy = s.dim(x, y)
                if not dxy:
                    continue
                for z in s.objects:
                    dyz = s.dim(y, z)
                    if not dyz:
                        continue
                    for i in range(dxy):
                        fi = self.on_coords(x, y, unit_vector(s.field, dxy, i))
                        for j in range(dyz):
                            gf = s.compose_basis(x, y, z, i, j)
                            gj = self.on_coords(y, z, unit_vector(s.field, dyz, j))
                            lhs = self.on_coords(x, z, gf)
                            rhs = t.compose(self.object_map[x], self.object_map[y],
                                            self.object_map[z], fi, gj)
                            if lhs != rhs:
                                raise InvalidFunctor(
                                    f"composition not preserved at ({x},{y},{z}) basis ({i},{j})")
        return True


def identity_functor(c):
    mm = {(x, y): Mat.identity(c.field, c.dim(x, y))
          for x in c.objects for y in c.objects}
    return KFunctor(c, c, {x: x for x in c.objects}, mm, check=False)


def opposite_functor(fun):
    """F^op: source^op -> target^op, same data on transposed Hom keys."""
    s_op = opposite(fun.source)
    t_op = opposite(fun.target)
    mm = {(x, y): fun.morphism_map[(y, x)] for x in s_op.objects for y in s_op.objects}
    return KFunctor(s_op, t_op, dict(fun.object_map), mm)


def tensor_functor(f, g):
    """F tensor G between the tensor product categories."""
    src = tensor_category(f.source, g.source)
    tgt = tensor_category(f.target, g.target)
    om = {}
    mm = {}
    from .exactla import kron
    for a in f.source.objects:
        for b in g.source.objects:
            om[pair_object(a, b)] = pair_object(f.on_object(a), g.on_object(b))
    for a in f.source.objects:
        for b in g.source.objects:
            for a2 in f.source.objects:
                for b2 in g.source.objects:
                    mm[(pair_object(a, b), pair_object(a2, b2))] = kron(
                        f.morphism_map[(a, a2)], g.morphism_map[(b, b2)])
    return KFunctor(src, tgt, om, mm)


# ---------------------------------------------------------------------------
# quotient by a two-sided ideal

def quotient_category(c, ideal):
    """C/I together with the projection functor.

    Hom bases of the quotient are canonical complements of the ideal spans
    inside the standard bases of C, so quotient basis labels are the
    surviving labels of C.
    """
    if ideal.parent is not c and ideal.parent != c:
        raise ValueError("ideal does not live in this category")
    field = c.field
    comps = {}
    for x in c.objects:
        for y in c.objects:
            span = ideal.span[(x, y)]
            comps[(x, y)] = ComplementData(span)
    hom = {}
    for (x, y), comp_data in comps.items():
        labels = c.hom_basis[(x, y)]
        hom[(x, y)] = tuple(labels[i] for i in comp_data.free)
    comp = {}
    for x in c.objects:
        for y in c.objects:
            cxy = comps[(x, y)]
            if not cxy.dim:
                continue
            for z in c.objects:
                cyz = comps[(y, z)]
                if not cyz.dim:
                    continue
                cxz = comps[(x, z)]
                table = []
                for i in range(cxy.dim):
                    fi = cxy.section.col(i)
                    row = []
                    for j in range(cyz.dim):
                        gj = cyz.section.col(j)
                        composite = c.compose(x, y, z, fi, gj)
                        row.append(cxz.proj.mul_vec(composite))
                    table.append(tuple(row))
                comp[(x, y, z)] = tuple(table)
    identity = {x: comps[(x, x)].proj.mul_vec(c.id_coords(x)) for x in c.objects}
    zero_of = {x: vzero(field, comps[(x, x)].dim) for x in c.objects}
    summands = {}
    for x in c.objects:
        projected = [comps[(x, x)].proj.mul_vec(e) for e in c.identity_summands[x]]
        summands[x] = tuple(e for e in projected if e != zero_of[x]) or (identity[x],)
    quot = FiniteKCategory(field, c.objects, hom, comp, identity,
                           identity_summands=summands)
    proj = KFunctor(c, quot, {x: x for x in c.objects},
                    {pair: comps[pair].proj for pair in comps})
    return quot, proj


# ---------------------------------------------------------------------------
# bimodules and the triangular matrix category

class Bimodule:
    """An additive K-functor M from U tensor T^op to vector spaces.

    dims[(U,T)] is the dimension of M(U,T); lact[(U,U',i,T)] is the matrix
    of the U-morphism basis element i acting M(U,T) -> M(U',T); and
    ract[(T,T',j,U)] is the matrix of the T-morphism basis element j
    acting contravariantly M(U,T') -> M(U,T).
    """

    def __init__(self, u, t, dims, lact, ract, check=True):
        if u.field != t.field:
            raise FieldMismatch("bimodule factors over different fields")
        self.u = u
        self.t = t
        self.field = u.field
        self.dims = {}
        for U in u.objects:
            for T in t.objects:
                self.dims[(U, T)] = int(dims.get((U, T), 0))
        self.lact = dict(lact)
        self.ract = dict(ract)
        if check:
            self.validate()

    def dim(self, U, T):
        return self.dims[(U, T)]

    def lact_mat(self, U, U2, i, T):
        m = self.lact.get((U, U2, i, T))
        if m is None:
            m = Mat.zeros(self.field, self.dims[(U2, T)], self.dims[(U, T)])
        return m

    def ract_mat(self, T, T2, j, U):
        m = self.ract.get((T, T2, j, U))
        if m is None:
            m = Mat.zeros(self.field, self.dims[(U, T)], self.dims[(U, T2)])
        return m

    def lact_vec(self, U, U2, coords, T):
        out = Mat.zeros(self.field, self.dims[(U2, T)], self.dims[(U, T)])
        for i, a in enumerate(coords):
            if a:
                out = out.add(self.lact_mat(U, U2, i, T).scale(a))
        return out

    def ract_vec(self, T, T2, coords, U):
        out = Mat.zeros(self.field, self.dims[(U, T)], self.dims[(U, T2)])
        for j, a in enumerate(coords):
            if a:
                out = out.add(self.ract_mat(T, T2, j, U).scale(a))
        return out

    def validate(self):
        u, t = self.u, self.t
        for U in u.objects:
            for T in t.objects:
                d = self.dims[(U, T)]
                if self.lact_vec(U, U, u.id_coords(U), T) != Mat.identity(self.field, d):
                    raise InvalidBimodule(f"U-identity does not act as identity at ({U},{T})")
                if self.ract_vec(T, T, t.id_coords(T), U) != Mat.identity(self.field, d):
                    raise InvalidBimodule(f"T-identity does not act as identity at ({U},{T})")
        # functoriality of the left action
        for U1 in u.objects:
            for U2 in u.objects:
                for i in range(u.dim(U1, U2)):
                    for U3 in u.objects:
                        for j in range(u.dim(U2, U3)):
                            comp = u.compose_basis(U1, U2, U3, i, j)
                            for T in t.objects:
                                lhs = self.lact_vec(U1, U3, comp, T)
                                rhs = self.lact_mat(U2, U3, j, T).mul(self.lact_mat(U1, U2, i, T))
                                if lhs != rhs:
                                    raise InvalidBimodule(
                                        f"left action not functorial at ({U1},{U2},{U3}) x {T}")
        # contravariant functoriality of the right action
        for T1 in t.objects:
            for T2 in t.objects:
                for i in range(t.dim(T1, T2)):
                    for T3 in t.objects:
                        for j in range(t.dim(T2, T3)):
                            comp = t.compose_basis(T1, T2, T3, i, j)
                            for U in u.objects:
                                lhs = self.ract_vec(T1, T3, comp, U)
                                rhs = self.ract_mat(T1, T2, i, U).mul(self.ract_mat(T2, T3, j, U))
                                if lhs != rhs:
                                    raise InvalidBimodule(
                                        f"right action not functorial at ({T1},{T2},{T3}) x {U}")
        # the two actions commute
        for U1 in u.objects:
            for U2 in u.objects:
                for i in range(u.dim(U1, U2)):
                    for T1 in t.objects:
                        for T2 in t.objects:
                            for j in range(t.dim(T1, T2)):
                                a = self.lact_mat(U1, U2, i, T1).mul(self.ract_mat(T1, T2, j, U1))
                                b = self.ract_mat(T1, T2, j, U2).mul(self.lact_mat(U1, U2, i, T2))
                                if a != b:
                                    raise InvalidBimodule(
                                        f"actions do not commute at ({U1},{U2}) x ({T1},{T2})")
        return True

    @classmethod
    def zero(cls, u, t):
        return cls(u, t, {}, {}, {}, check=False)

    @classmethod
    def from_left_module(cls, u, module, t=None):
        """Reinterpret a left U-module as a (U, unit)-bimodule."""
        if t is None:
            t = unit_category(u.field)
        star = t.objects[0]
        dims = {(U, star): module.dims[U] for U in u.objects}
        lact = {}
        for (x, y, i), mat in module.act.items():
            lact[(x, y, i, star)] = mat
        ract = {}
        for U in u.objects:
            ract[(star, star, 0, U)] = Mat.identity(u.field, module.dims[U]).scale(
                t.id_coords(star)[0])
        # the unit category may present its identity as any single basis
        # vector; scale accordingly (coords length is 1)
        return cls(u, t, dims, lact, ract)

    @classmethod
    def from_right_module(cls, t, module, u=None):
        """Reinterpret a right T-module as a (unit, T)-bimodule."""
        if u is None:
            u = unit_category(t.field)
        star = u.objects[0]
        dims = {(star, T): module.dims[T] for T in t.objects}
        ract = {}
        for (x, y, i), mat in module.act.items():
            # right module act: M(y) -> M(x) for f in Hom(x,y)
            ract[(x, y, i, star)] = mat
        lact = {}
        for T in t.objects:
            lact[(star, star, 0, T)] = Mat.identity(t.field, module.dims[T]).scale(
                u.id_coords(star)[0])
        return cls(u, t, dims, lact, ract)


def triangular_object(T, U):
    return f"[{T};{U}]"


def triangular_matrix(t, u, m):
    """The triangular matrix category with underlying bimodule M.

    Objects are pairs [T;U]; Hom([T;U],[T';U']) is the direct sum of
    Hom_T(T,T'), M(U',T) and Hom_U(U,U'), composed block-triangularly
    (the corner receives m2 after t1 plus u2 acting on m1).
    """
    if t.field != u.field:
        raise FieldMismatch("triangular factors over different fields")
    if m.u is not u and m.u != u:
        raise InvalidBimodule("bimodule U-factor mismatch")
    if m.t is not t and m.t != t:
        raise InvalidBimodule("bimodule T-factor mismatch")
    field = t.field
    objects = []
    src = {}
    for T in t.objects:
        for U in u.objects:
            o = triangular_object(T, U)
            objects.append(o)
            src[o] = (T, U)

    def blocks(o1, o2):
        T, U = src[o1]
        T2, U2 = src[o2]
        return t.dim(T, T2), m.dim(U2, T), u.dim(U, U2)

    hom = {}
    for o1 in objects:
        for o2 in objects:
            T, U = src[o1]
            T2, U2 = src[o2]
            labels = (tuple(f"t:{l}" for l in t.hom_basis[(T, T2)])
                      + tuple(f"m{k}" for k in range(m.dim(U2, T)))
                      + tuple(f"u:{l}" for l in u.hom_basis[(U, U2)]))
            hom[(o1, o2)] = labels

    z = field.zero()

    def embed(dt, dm, du, tpart=None, mpart=None, upart=None):
        vec = [z] * (dt + dm + du)
        if tpart is not None:
            vec[:dt] = tpart
        if mpart is not None:
            vec[dt:dt + dm] = mpart
        if upart is not None:
            vec[dt + dm:] = upart
        return tuple(vec)

    comp = {}
    for o1 in objects:
        T, U = src[o1]
        for o2 in objects:
            T2, U2 = src[o2]
            d1t, d1m, d1u = blocks(o1, o2)
            d1 = d1t + d1m + d1u
            if not d1:
                continue
            for o3 in objects:
                T3, U3 = src[o3]
                d2t, d2m, d2u = blocks(o2, o3)
                d2 = d2t + d2m + d2u
                if not d2:
                    continue
                dct, dcm, dcu = blocks(o1, o3)
                table = [[vzero(field, dct + dcm + dcu) for _ in range(d2)]
                         for _ in range(d1)]
                # f = t-basis i, g = t-basis j
                for i in range(d1t):
                    for j in range(d2t):
                        table[i][j] = embed(dct, dcm, dcu,
                                            tpart=t.compose_basis(T, T2, T3, i, j))
                    # f = t-basis i, g = m-basis k: corner = m2 after t1
                    rmat = m.ract_vec(T, T2, unit_vector(field, d1t, i), U3)
                    for k in range(d2m):
                        table[i][d2t + k] = embed(dct, dcm, dcu, mpart=rmat.col(k))
                # f = m-basis k, g = u-basis j: corner = u2 acting on m1
                for j in range(d2u):
                    lmat = m.lact_vec(U2, U3, unit_vector(field, d2u, j), T)
                    for k in range(d1m):
                        table[d1t + k][d2t + d2m + j] = embed(dct, dcm, dcu,
                                                              mpart=lmat.col(k))
                # f = u-basis i, g = u-basis j
                for i in range(d1u):
                    for j in range(d2u):
                        table[d1t + d1m + i][d2t + d2m + j] = embed(
                            dct, dcm, dcu, upart=u.compose_basis(U, U2, U3, i, j))
                comp[(o1, o2, o3)] = tuple(tuple(row) for row in table)
    identity = {}
    summands = {}
    for o in objects:
        T, U = src[o]
        dt, dm, du = blocks(o, o)
        identity[o] = embed(dt, dm, du, tpart=t.id_coords(T), upart=u.id_coords(U))
        # the canonical splitting 1 = e_T + e_U, refined by the factors
        summands[o] = tuple(
            [embed(dt, dm, du, tpart=e) for e in t.identity_summands[T]]
            + [embed(dt, dm, du, upart=e) for e in u.identity_summands[U]])
    return FiniteKCategory(field, objects, hom, comp, identity,
                           triangular={"t": t, "u": u, "m": m, "source": src},
                           identity_summands=summands)


def one_point_extension(u, module):
    """Triangular matrix category over the unit category, with the left
    module reinterpreted as a bimodule."""
    if module.base is not u and module.base != u:
        raise InvalidModule("module is not over the given category")
    if module.side != "left":
        raise InvalidModule("one-point extension takes a left module")
    bim = Bimodule.from_left_module(u, module)
    return triangular_matrix(bim.t, u, bim)
