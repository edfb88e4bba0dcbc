"""Finite-dimensional dg algebras and right dg modules.

A DgAlgebra is a normalized quotient kQ/I with a basis of path classes,
structure constants, and a differential.  DgModules are finite-dimensional
right dg modules over it, closed under shifts, direct sums and mapping
cones.  Cohomology is computed per (degree, vertex) slice; the slice
decomposition is canonical because the differential and the idempotent
actions commute.

Sign conventions (fixed once, validated by the triangle-exactness tests):
the shift x[k] leaves the right action alone and rescales the differential
by (-1)^k; the cone of f: x -> y is x[1] (+) y with differential
[[-d_x, 0], [f, d_y]]; the cocone is cone(f)[-1].
"""

from __future__ import annotations

from dataclasses import dataclass

from .linalg import nullspace, reduce_mod_span, rref, solve, sparse_rank
from .presentation import ValidationError


@dataclass(frozen=True)
class AlgebraClass:
    """One basis class of kQ/I: the class of a chosen representative path."""

    name: str
    src: str
    tgt: str
    degree: int
    length: int
    path: tuple


def _sp_add(field, a, b):
    out = dict(a)
    for k, v in b.items():
        s = field.add(out.get(k, field.zero()), v)
        if field.is_zero(s):
            out.pop(k, None)
        else:
            out[k] = s
    return out


def _sp_scale(field, a, c):
    if field.is_zero(c):
        return {}
    return {k: field.mul(c, v) for k, v in a.items()}


def _sp_apply(field, cols, vec):
    """Apply a sparse column map (j -> {i: c}) to a sparse vector."""
    out = {}
    for j, c in vec.items():
        col = cols.get(j)
        if not col or field.is_zero(c):
            continue
        for i, x in col.items():
            s = field.add(out.get(i, field.zero()), field.mul(c, x))
            if field.is_zero(s):
                out.pop(i, None)
            else:
                out[i] = s
    return out


def _sp_compose(field, second, first):
    """second after first, both sparse column maps."""
    out = {}
    for j, col in first.items():
        img = _sp_apply(field, second, col)
        if img:
            out[j] = img
    return out


class DgAlgebra:
    """Normalized dg quotient of a path algebra, on a basis of path classes."""

    def __init__(self, field, vertices, arrows, classes, diff_map, presentation,
                 acyclic, quiver_path_length):
        self.field = field
        self.vertices = vertices
        self.arrows = arrows
        self.arrow_map = {a.name: a for a in arrows}
        self.classes = classes
        self.diff = diff_map  # class index -> sparse vector
        self.presentation = presentation
        self.acyclic = acyclic
        self.quiver_path_length = quiver_path_length
        self.idem = {}
        for i, c in enumerate(classes):
            if c.length == 0:
                self.idem[c.src] = i
        for v in vertices:
            if v not in self.idem:
                raise ValidationError(f"vertex idempotent e_{v} missing from basis")
        self.aug_indices = [i for i, c in enumerate(classes) if c.length >= 1]
        self.amplitude = max((-c.degree for c in classes), default=0)
        self._mult = {}  # filled by presentation.normalize
        self._arrow_class = None
        self._h0 = None

    @property
    def dim(self):
        return len(self.classes)

    def mult(self, i, j):
        """Structure constants: product of basis classes i and j."""
        return self._mult.get((i, j), {})

    def mult_vec(self, vec_a, vec_b):
        out = {}
        for i, ca in vec_a.items():
            for j, cb in vec_b.items():
                prod = self.mult(i, j)
                if not prod:
                    continue
                c = self.field.mul(ca, cb)
                out = _sp_add(self.field, out, _sp_scale(self.field, prod, c))
        return out

    def arrow_class_vec(self, name):
        """The (possibly reduced) class of a length-1 path, as a sparse vector.

        Filled in by presentation.normalize; an arrow eliminated by a
        length-1 relation reduces to a combination of other classes.
        """
        if self._arrow_class is None or name not in self._arrow_class:
            raise ValidationError(f"no class data for arrow {name!r}")
        return self._arrow_class[name]

    def diff_vec(self, vec):
        out = {}
        for i, c in vec.items():
            img = self.diff.get(i)
            if img:
                out = _sp_add(self.field, out, _sp_scale(self.field, img, c))
        return out

    # -- validation -------------------------------------------------------

    def _validate_structure(self):
        f = self.field
        # d^2 = 0 on every basis class
        for i in range(self.dim):
            img = self.diff.get(i)
            if img and self.diff_vec(img):
                raise ValidationError(f"d^2 != 0 on basis class {self.classes[i].name}")
        # d(e_v) = 0 and degree bookkeeping
        for i, c in enumerate(self.classes):
            if c.length == 0 and self.diff.get(i):
                raise ValidationError(f"d(e_{c.src}) != 0")
            for k in self.diff.get(i, {}):
                if self.classes[k].degree != c.degree + 1:
                    raise ValidationError("differential is not of degree +1")
        # the positive-length span must be nilpotent
        span = []
        for i in self.aug_indices:
            row = [f.zero()] * self.dim
            row[i] = f.one()
            span.append(row)
        rows, pivots = rref(f, span, self.dim)
        while rows:
            nxt = []
            for row in rows:
                vec = {i: x for i, x in enumerate(row) if not f.is_zero(x)}
                for j in self.aug_indices:
                    prod = self.mult_vec(vec, {j: f.one()})
                    if prod:
                        dense = [f.zero()] * self.dim
                        for k, x in prod.items():
                            dense[k] = x
                        nxt.append(dense)
            new_rows, new_pivots = rref(f, nxt, self.dim)
            if len(new_rows) >= len(rows):
                raise ValidationError(
                    "augmentation ideal is not nilpotent: a degree-0 oriented cycle "
                    "survives the relation ideal")
            rows, pivots = new_rows, new_pivots

    def check_associativity(self):
        f = self.field
        for i in range(self.dim):
            for j in range(self.dim):
                ij = self.mult(i, j)
                if not ij and self.classes[i].tgt != self.classes[j].src:
                    continue
                for k in range(self.dim):
                    left = self.mult_vec(ij, {k: f.one()})
                    right = self.mult_vec({i: f.one()}, self.mult(j, k))
                    if left != right:
                        raise ValidationError(
                            f"associativity fails on ({self.classes[i].name}, "
                            f"{self.classes[j].name}, {self.classes[k].name})")

    def check_leibniz(self):
        f = self.field
        for i in range(self.dim):
            for j in range(self.dim):
                if self.classes[i].tgt != self.classes[j].src:
                    continue
                lhs = self.diff_vec(self.mult(i, j))
                rhs = self.mult_vec(self.diff.get(i, {}), {j: f.one()})
                sign = f.one() if self.classes[i].degree % 2 == 0 else f.neg(f.one())
                rhs = _sp_add(f, rhs, _sp_scale(
                    f, self.mult_vec({i: f.one()}, self.diff.get(j, {})), sign))
                if lhs != rhs:
                    raise ValidationError(
                        f"Leibniz rule fails on ({self.classes[i].name}, "
                        f"{self.classes[j].name})")

    def check_idempotents(self):
        f = self.field
        for v in self.vertices:
            for w in self.vertices:
                prod = self.mult(self.idem[v], self.idem[w])
                expected = {self.idem[v]: f.one()} if v == w else {}
                if prod != expected:
                    raise ValidationError("vertex idempotents are not orthogonal")

    def self_check(self):
        self.check_idempotents()
        self.check_associativity()
        self.check_leibniz()

    # -- canonical modules --------------------------------------------------

    def free_module(self, v, shift=0):
        """The dg module e_v A, optionally shifted."""
        if v not in self.idem:
            raise ValidationError(f"unknown vertex {v!r}")
        idxs = [i for i, c in enumerate(self.classes) if c.src == v]
        m = DgModule.from_class_span(self, idxs, name=f"free({v})")
        return m.shift(shift) if shift else m

    def regular_module(self):
        """A as a right module over itself."""
        idxs = list(range(self.dim))
        return DgModule.from_class_span(self, idxs, name="A")

    def simple_module(self, v):
        """The simple H^0(A)-module at vertex v, viewed as a dg module."""
        if v not in self.idem:
            raise ValidationError(f"unknown vertex {v!r}")
        m = DgModule(self, [(f"s_{v}", v, 0)], {}, {}, name=f"simple({v})")
        return m

    def simples_sum(self):
        mods = [self.simple_module(v) for v in self.vertices]
        out = direct_sum(mods)
        out.name = "simples_sum"
        return out

    def h0(self):
        if self._h0 is None:
            self._h0 = H0Algebra(self)
        return self._h0


class DgModule:
    """Finite-dimensional right dg module on a labelled graded basis."""

    def __init__(self, algebra, basis, arrow_action, diff, name=None):
        self.algebra = algebra
        self.basis = list(basis)  # (label, vertex, degree)
        self.act = arrow_action  # arrow name -> sparse column map
        self.diff = diff  # sparse column map
        self.name = name
        self._slices = None
        self._class_act = {}
        self._coh_cache = {}
        self._rank_cache = {}

    @property
    def dim(self):
        return len(self.basis)

    @property
    def field(self):
        return self.algebra.field

    def degrees(self):
        return sorted({deg for _, _, deg in self.basis})

    def min_degree(self):
        return min((deg for _, _, deg in self.basis), default=0)

    def max_degree(self):
        return max((deg for _, _, deg in self.basis), default=0)

    @staticmethod
    def from_class_span(algebra, class_indices, name=None):
        """Module spanned by algebra basis classes closed under right action."""
        pos = {ci: j for j, ci in enumerate(class_indices)}
        basis = [(algebra.classes[ci].name, algebra.classes[ci].tgt,
                  algebra.classes[ci].degree) for ci in class_indices]
        act = {}
        f = algebra.field
        for a in algebra.arrows:
            avec = algebra.arrow_class_vec(a.name)
            cols = {}
            for ci, j in pos.items():
                img = algebra.mult_vec({ci: f.one()}, avec)
                col = {}
                for k, c in img.items():
                    if k not in pos:
                        raise ValidationError("class span is not action-closed")
                    col[pos[k]] = c
                if col:
                    cols[j] = col
            if cols:
                act[a.name] = cols
        diff = {}
        for ci, j in pos.items():
            img = algebra.diff.get(ci)
            if img:
                col = {}
                for k, c in img.items():
                    if k not in pos:
                        raise ValidationError("class span is not differential-closed")
                    col[pos[k]] = c
                if col:
                    diff[j] = col
        return DgModule(algebra, basis, act, diff, name=name)

    # -- algebra action -----------------------------------------------------

    def act_arrow(self, name):
        return self.act.get(name, {})

    def act_class(self, ci):
        """Sparse column map for the action of algebra basis class ci."""
        if ci in self._class_act:
            return self._class_act[ci]
        cls = self.algebra.classes[ci]
        f = self.field
        if cls.length == 0:
            cols = {}
            for j, (_, v, _) in enumerate(self.basis):
                if v == cls.src:
                    cols[j] = {j: f.one()}
        else:
            cols = None
            for a in cls.path:
                step = self.act_arrow(a)
                cols = step if cols is None else _sp_compose(f, step, cols)
        self._class_act[ci] = cols or {}
        return self._class_act[ci]

    def act_vec(self, vec, avec):
        """Right action of an algebra element (sparse over classes) on a vector."""
        f = self.field
        out = {}
        for ci, c in avec.items():
            img = _sp_apply(f, self.act_class(ci), vec)
            out = _sp_add(f, out, _sp_scale(f, img, c))
        return out

    def diff_vec(self, vec):
        return _sp_apply(self.field, self.diff, vec)

    # -- validation ---------------------------------------------------------

    def validate(self):
        f = self.field
        amap = self.algebra.arrow_map
        for name, cols in self.act.items():
            if name not in amap:
                raise ValidationError(f"action for unknown arrow {name!r}")
            a = amap[name]
            for j, col in cols.items():
                lbl, v, deg = self.basis[j]
                if v != a.src and col:
                    raise ValidationError(
                        f"{lbl}.{name} must vanish: {lbl} sits at vertex {v}, "
                        f"{name} starts at {a.src}")
                for i in col:
                    lbl2, v2, deg2 = self.basis[i]
                    if v2 != a.tgt or deg2 != deg + a.degree:
                        raise ValidationError(
                            f"{lbl}.{name} lands outside the ({a.tgt}, deg "
                            f"{deg + a.degree}) slice")
        for j, col in self.diff.items():
            _, v, deg = self.basis[j]
            for i in col:
                _, v2, deg2 = self.basis[i]
                if v2 != v or deg2 != deg + 1:
                    raise ValidationError("module differential is not of degree +1 "
                                          "or mixes vertex slices")
        # d^2 = 0
        for j in range(self.dim):
            if self.diff_vec(self.diff.get(j, {})):
                raise ValidationError(f"d^2 != 0 on module basis element {self.basis[j][0]}")
        # module Leibniz on (basis element, arrow)
        for a in self.algebra.arrows:
            avec = self.algebra.arrow_class_vec(a.name)
            davec = self.algebra.diff_vec(avec)
            for j in range(self.dim):
                m = {j: f.one()}
                lhs = self.diff_vec(self.act_vec(m, avec))
                sign = f.one() if self.basis[j][2] % 2 == 0 else f.neg(f.one())
                rhs = _sp_add(f, self.act_vec(self.diff_vec(m), avec),
                              _sp_scale(f, self.act_vec(m, davec), sign))
                if lhs != rhs:
                    raise ValidationError(
                        f"module Leibniz rule fails on ({self.basis[j][0]}, {a.name})")
        # relation generators act by zero
        pres = self.algebra.presentation
        if pres is not None:
            for expr in pres.relations:
                for j in range(self.dim):
                    m = {j: f.one()}
                    total = {}
                    for coeff, path in expr:
                        img = dict(m)
                        for name in path:
                            img = _sp_apply(f, self.act_arrow(name), img)
                            if not img:
                                break
                        total = _sp_add(f, total, _sp_scale(f, img, f.parse(coeff)))
                    if total:
                        raise ValidationError(
                            "relation does not act by zero on module basis element "
                            f"{self.basis[j][0]}")

    # -- constructions ------------------------------------------------------

    def shift(self, k):
        """x[k]: degrees drop by k, differential rescales by (-1)^k."""
        if k == 0:
            return self
        f = self.field
        basis = [(lbl, v, deg - k) for lbl, v, deg in self.basis]
        sign = f.one() if k % 2 == 0 else f.neg(f.one())
        diff = {j: _sp_scale(f, col, sign) for j, col in self.diff.items()}
        m = DgModule(self.algebra, basis, {a: {j: dict(c) for j, c in cols.items()}
                                           for a, cols in self.act.items()},
                     diff, name=_shift_name(self.name, k))
        return m

    def zero_like(self):
        return DgModule(self.algebra, [], {}, {}, name="0")

    # -- cohomology ---------------------------------------------------------

    def slice_indices(self, degree, vertex=None):
        if self._slices is None:
            self._slices = {}
            for i, (_, v, deg) in enumerate(self.basis):
                self._slices.setdefault((deg, v), []).append(i)
        if vertex is not None:
            return self._slices.get((degree, vertex), [])
        out = []
        for v in self.algebra.vertices:
            out.extend(self._slices.get((degree, v), []))
        return out

    def cohomology_slice(self, degree, vertex):
        """CohomologySlice at one (degree, vertex); cached (modules are immutable)."""
        key = (degree, vertex)
        if key not in self._coh_cache:
            self._coh_cache[key] = CohomologySlice(self, degree, vertex)
        return self._coh_cache[key]

    def _block_rank(self, degree, vertex):
        """Rank of d restricted to the (degree, vertex) slice (sparse)."""
        key = (degree, vertex)
        if key not in self._rank_cache:
            src = self.slice_indices(degree, vertex)
            tgt = set(self.slice_indices(degree + 1, vertex))
            cols = []
            for j in src:
                col = {i: c for i, c in self.diff.get(j, {}).items() if i in tgt}
                if col:
                    cols.append(col)
            self._rank_cache[key] = sparse_rank(self.field, cols)
        return self._rank_cache[key]

    def h_dim(self, degree, vertex=None):
        if vertex is None:
            return sum(self.h_dim(degree, v) for v in self.algebra.vertices)
        n_here = len(self.slice_indices(degree, vertex))
        if n_here == 0:
            return 0
        return n_here - self._block_rank(degree, vertex) - self._block_rank(degree - 1, vertex)

    def cohomology_table(self):
        """degree -> dim H^degree, omitting zeros."""
        table = {}
        for n in range(self.min_degree() - 1, self.max_degree() + 2):
            d = self.h_dim(n)
            if d:
                table[n] = d
        return table

    def is_acyclic(self):
        return not self.cohomology_table()

    def top_h_degree(self):
        """Largest n with H^n != 0, or None for an acyclic module."""
        table = self.cohomology_table()
        return max(table) if table else None

    def truncate_above_zero(self):
        """The submodule tau_{<=0}: degrees < 0 plus degree-0 cycles.

        Quasi-isomorphic inclusion when H^{>0} = 0; requires A concentrated
        in degrees <= 0 (always true here).
        """
        f = self.field
        keep_cols = {}  # new index -> sparse vector over old basis
        new_basis = []
        for i, (lbl, v, deg) in enumerate(self.basis):
            if deg < 0:
                keep_cols[len(new_basis)] = {i: f.one()}
                new_basis.append((lbl, v, deg))
        for v in self.algebra.vertices:
            idxs = self.slice_indices(0, v)
            if not idxs:
                continue
            tgt_idxs = self.slice_indices(1, v)
            rows = []
            for ti in tgt_idxs:
                rows.append([self.diff.get(j, {}).get(ti, f.zero()) for j in idxs])
            kernel = nullspace(f, rows, len(idxs))
            for kv in kernel:
                vec = {idxs[t]: c for t, c in enumerate(kv) if not f.is_zero(c)}
                keep_cols[len(new_basis)] = vec
                new_basis.append((f"z{len(new_basis)}", v, 0))
        return _submodule_from_columns(self, new_basis, keep_cols)

    def h0_classes(self):
        """Per-vertex cohomology slices at degree 0."""
        return {v: self.cohomology_slice(0, v) for v in self.algebra.vertices}


def _shift_name(name, k):
    if name is None:
        return None
    return f"{name}[{k}]"


def _submodule_from_columns(m, new_basis, cols):
    """Module structure on a subspace given by sparse columns (must be closed).

    Returns (submodule, inclusion DgModuleMap).
    """
    f = m.field
    # express an old-coordinates vector in the span of the columns
    order = list(range(len(new_basis)))
    dense_cols = []
    for j in order:
        dense_cols.append(cols[j])

    def coords(vec):
        # solve sum_j x_j cols[j] = vec by elimination over the support
        support = sorted({i for c in dense_cols for i in c} | set(vec))
        a = [[dense_cols[j].get(i, f.zero()) for j in order] for i in support]
        b = [vec.get(i, f.zero()) for i in support]
        x = solve(f, a, b)
        if x is None:
            raise ValidationError("subspace is not closed (internal error)")
        return {j: c for j, c in enumerate(x) if not f.is_zero(c)}

    act = {}
    for a in m.algebra.arrows:
        colmap = {}
        for j in order:
            img = m.act_vec(cols[j], m.algebra.arrow_class_vec(a.name))
            if img:
                colmap[j] = coords(img)
        if colmap:
            act[a.name] = colmap
    diff = {}
    for j in order:
        img = m.diff_vec(cols[j])
        if img:
            diff[j] = coords(img)
    sub = DgModule(m.algebra, new_basis, act, diff, name=m.name)
    incl = DgModuleMap(sub, m, {j: dict(cols[j]) for j in order})
    return sub, incl


class SemifreeData:
    """A finite semifree right module presented by generators and a connection.

    Generator j sits at vertex gens[j][0] in degree gens[j][1] and spans a
    free summand e_v A shifted accordingly; the differential is

        d(g_j) = sum_i g_i . conn[(i, j)]  +  (internal differential of A),

    with conn[(i, j)] a sparse algebra element in e_{v_i} A e_{v_j} of degree
    gens[j][1] + 1 - gens[i][1].  Iterated mapping cones of free covers
    produce exactly this shape; the generator degrees realize the layers of
    an (Add A) * (Add A)[1] * ... filtration.
    """

    def __init__(self, algebra, gens, conn):
        self.algebra = algebra
        self.gens = list(gens)  # (vertex, degree)
        self.conn = {k: dict(v) for k, v in conn.items() if v}

    def layer_multiplicities(self):
        """degree -> vertex -> number of generators (the witness layers)."""
        out = {}
        for v, deg in self.gens:
            out.setdefault(-deg, {}).setdefault(v, 0)
            out[-deg][v] += 1
        return out

    def shift(self, k):
        """Semifree model of F[k]: generator degrees drop, connection rescales."""
        f = self.algebra.field
        sign = f.one() if k % 2 == 0 else f.neg(f.one())
        gens = [(v, deg - k) for v, deg in self.gens]
        conn = {key: _sp_scale(f, vec, sign) for key, vec in self.conn.items()}
        return SemifreeData(self.algebra, gens, conn)

    def basis_layout(self):
        """[(gen index, algebra class index)] in block order, plus positions."""
        layout = []
        pos = {}
        for j, (v, _) in enumerate(self.gens):
            for ci, cls in enumerate(self.algebra.classes):
                if cls.src == v:
                    pos[(j, ci)] = len(layout)
                    layout.append((j, ci))
        return layout, pos

    def to_module(self):
        alg = self.algebra
        f = alg.field
        layout, pos = self.basis_layout()
        basis = []
        for j, ci in layout:
            cls = alg.classes[ci]
            basis.append((f"g{j}.{cls.name}", cls.tgt, self.gens[j][1] + cls.degree))
        act = {}
        for a in alg.arrows:
            avec = alg.arrow_class_vec(a.name)
            cols = {}
            for j, ci in layout:
                img = alg.mult_vec({ci: f.one()}, avec)
                col = {}
                for k, c in img.items():
                    col[pos[(j, k)]] = c
                if col:
                    cols[pos[(j, ci)]] = col
            if cols:
                act[a.name] = cols
        diff = {}
        by_src_gen = {}
        for (i, j), vec in self.conn.items():
            by_src_gen.setdefault(j, []).append((i, vec))
        for j, ci in layout:
            col = {}
            # connection part: d(g_j) . b
            for i, vec in by_src_gen.get(j, ()):
                prod = alg.mult_vec(vec, {ci: f.one()})
                for k, c in prod.items():
                    key = pos[(i, k)]
                    s = f.add(col.get(key, f.zero()), c)
                    if f.is_zero(s):
                        col.pop(key, None)
                    else:
                        col[key] = s
            # internal part: (-1)^{deg g_j} g_j . d(b)
            dimg = alg.diff.get(ci)
            if dimg:
                sign = f.one() if self.gens[j][1] % 2 == 0 else f.neg(f.one())
                for k, c in dimg.items():
                    key = pos[(j, k)]
                    s = f.add(col.get(key, f.zero()), f.mul(sign, c))
                    if f.is_zero(s):
                        col.pop(key, None)
                    else:
                        col[key] = s
            if col:
                diff[pos[(j, ci)]] = col
        m = DgModule(alg, basis, act, diff, name="semifree")
        m.semifree = self
        return m


def module_from_presentation(algebra, pres):
    """Build and validate a DgModule from a parsed module presentation."""
    f = algebra.field
    label_pos = {}
    basis = []
    for label, v, deg in pres.basis:
        if v not in algebra.idem:
            raise ValidationError(f"module basis {label!r} sits at unknown vertex {v!r}")
        label_pos[label] = len(basis)
        basis.append((label, v, deg))
    act = {}
    for arrow, per_label in pres.actions.items():
        if arrow not in algebra.arrow_map:
            raise ValidationError(f"module action for unknown arrow {arrow!r}")
        cols = {}
        for src_label, combo in per_label.items():
            col = {}
            for coeff, lbl in combo:
                c = f.parse(coeff)
                if f.is_zero(c):
                    continue
                i = label_pos[lbl]
                col[i] = f.add(col.get(i, f.zero()), c)
            col = {i: c for i, c in col.items() if not f.is_zero(c)}
            if col:
                cols[label_pos[src_label]] = col
        if cols:
            act[arrow] = cols
    diff = {}
    for label, combo in pres.differentials.items():
        col = {}
        for coeff, lbl in combo:
            c = f.parse(coeff)
            i = label_pos[lbl]
            col[i] = f.add(col.get(i, f.zero()), c)
        col = {i: c for i, c in col.items() if not f.is_zero(c)}
        if col:
            diff[label_pos[label]] = col
    m = DgModule(algebra, basis, act, diff, name=pres.name)
    m.validate()
    return m


def resolve_builtin(algebra, designator):
    """Materialize a parsed builtin designator tuple as a DgModule."""
    kind = designator[0]
    if kind == "simples_sum":
        return algebra.simples_sum()
    if kind == "simple":
        return algebra.simple_module(designator[1])
    if kind == "free":
        return algebra.free_module(designator[1], designator[2])
    raise ValidationError(f"unknown builtin designator {designator!r}")


class DgModuleMap:
    """Degree-0 chain map of right dg modules, as sparse columns."""

    def __init__(self, src, tgt, cols):
        self.src = src
        self.tgt = tgt
        self.cols = cols

    def apply(self, vec):
        return _sp_apply(self.src.field, self.cols, vec)

    def validate(self):
        f = self.src.field
        if self.src.algebra is not self.tgt.algebra:
            raise ValidationError("chain map between modules over different algebras")
        for j, col in self.cols.items():
            _, v, deg = self.src.basis[j]
            for i in col:
                _, v2, deg2 = self.tgt.basis[i]
                if v2 != v or deg2 != deg:
                    raise ValidationError("map is not degree-0 vertex-preserving")
        for j in range(self.src.dim):
            m = {j: f.one()}
            if self.tgt.diff_vec(self.apply(m)) != self.apply(self.src.diff_vec(m)):
                raise ValidationError("not a chain map")
        for a in self.src.algebra.arrows:
            avec = self.src.algebra.arrow_class_vec(a.name)
            for j in range(self.src.dim):
                m = {j: f.one()}
                lhs = self.apply(self.src.act_vec(m, avec))
                rhs = self.tgt.act_vec(self.apply(m), avec)
                if lhs != rhs:
                    raise ValidationError("map does not commute with the action")

    def compose(self, other):
        """self after other."""
        if other.tgt is not self.src:
            raise ValidationError("maps do not compose")
        return DgModuleMap(other.src, self.tgt,
                           _sp_compose(self.src.field, self.cols, other.cols))


def zero_map(src, tgt):
    return DgModuleMap(src, tgt, {})


def direct_sum(mods):
    """Direct sum of dg modules over a common algebra."""
    if not mods:
        raise ValidationError("direct sum of no modules")
    algebra = mods[0].algebra
    f = algebra.field
    basis = []
    offsets = []
    off = 0
    for k, m in enumerate(mods):
        if m.algebra is not algebra:
            raise ValidationError("direct sum over different algebras")
        offsets.append(off)
        for lbl, v, deg in m.basis:
            basis.append((f"{lbl}#{k}" if len(mods) > 1 else lbl, v, deg))
        off += m.dim
    act = {}
    for a in algebra.arrows:
        cols = {}
        for k, m in enumerate(mods):
            for j, col in m.act_arrow(a.name).items():
                cols[offsets[k] + j] = {offsets[k] + i: c for i, c in col.items()}
        if cols:
            act[a.name] = cols
    diff = {}
    for k, m in enumerate(mods):
        for j, col in m.diff.items():
            diff[offsets[k] + j] = {offsets[k] + i: c for i, c in col.items()}
    return DgModule(algebra, basis, act, diff,
                    name="+".join(str(m.name) for m in mods))


def cone(fmap):
    """Mapping cone x[1] (+) y of f: x -> y, with its triangle maps.

    Returns (cone module, iota: y -> cone, pi: cone -> x[1]).
    """
    x, y = fmap.src, fmap.tgt
    f = x.field
    amp = x.algebra
    basis = [(f"c({lbl})", v, deg - 1) for lbl, v, deg in x.basis]
    basis += [(lbl, v, deg) for lbl, v, deg in y.basis]
    nx = x.dim
    act = {}
    for a in amp.arrows:
        cols = {}
        for j, col in x.act_arrow(a.name).items():
            cols[j] = dict(col)
        for j, col in y.act_arrow(a.name).items():
            cols[nx + j] = {nx + i: c for i, c in col.items()}
        if cols:
            act[a.name] = cols
    diff = {}
    neg = f.neg(f.one())
    for j in range(x.dim):
        col = {}
        for i, c in x.diff.get(j, {}).items():
            col[i] = f.mul(neg, c)
        for i, c in fmap.cols.get(j, {}).items():
            col[nx + i] = c
        if col:
            diff[j] = col
    for j, coly in y.diff.items():
        diff[nx + j] = {nx + i: c for i, c in coly.items()}
    cne = DgModule(amp, basis, act, diff, name=f"cone({x.name}->{y.name})")
    iota = DgModuleMap(y, cne, {j: {nx + j: f.one()} for j in range(y.dim)})
    xs = x.shift(1)
    pi = DgModuleMap(cne, xs, {j: {j: f.one()} for j in range(x.dim)})
    return cne, iota, pi


def cocone(fmap):
    """cone(f)[-1] together with the projection to the source of f.

    For f: M -> x this is the object x' in the triangle x' -> M -> x -> x'[1].
    """
    cne, _, _ = cone(fmap)
    cc = cne.shift(-1)
    proj = DgModuleMap(cc, fmap.src,
                       {j: {j: fmap.src.field.one()} for j in range(fmap.src.dim)})
    return cc, proj


class CohomologySlice:
    """H^degree of one vertex slice, with canonical representatives."""

    def __init__(self, module, degree, vertex):
        self.module = module
        self.degree = degree
        self.vertex = vertex
        f = module.field
        idxs = module.slice_indices(degree, vertex)
        self.idxs = idxs
        nxt = module.slice_indices(degree + 1, vertex)
        prv = module.slice_indices(degree - 1, vertex)
        rows = [[module.diff.get(j, {}).get(ti, f.zero()) for j in idxs] for ti in nxt]
        cycles = nullspace(f, rows, len(idxs))
        bnd = []
        for pj in prv:
            col = module.diff.get(pj, {})
            bnd.append([col.get(i, f.zero()) for i in idxs])
        bred, bpiv = rref(f, bnd, len(idxs)) if bnd else ([], [])
        self._bred, self._bpiv = bred, bpiv
        reps = []
        rows_acc, piv_acc = list(bred), list(bpiv)
        for v in cycles:
            w = reduce_mod_span(f, rows_acc, piv_acc, v)
            if all(f.is_zero(c) for c in w):
                continue
            lead = next(i for i, c in enumerate(w) if not f.is_zero(c))
            inv = f.inv(w[lead])
            w = [f.mul(inv, c) for c in w]
            reps.append(w)
            rows_acc, piv_acc = rref(f, rows_acc + [w], len(idxs))
        self.reps = reps  # dense over idxs
        self.dim = len(reps)

    def rep_vectors(self):
        """Representative cycles as sparse vectors over the module basis."""
        f = self.module.field
        out = []
        for w in self.reps:
            out.append({self.idxs[t]: c for t, c in enumerate(w) if not f.is_zero(c)})
        return out

    def coords(self, vec):
        """Coordinates of a cycle's class in the representative basis."""
        f = self.module.field
        dense = [vec.get(i, f.zero()) for i in self.idxs]
        for i in vec:
            if i not in self.idxs and not f.is_zero(vec[i]):
                raise ValidationError("vector outside the slice")
        cols = [[self._bred[r][t] for r in range(len(self._bred))] +
                [self.reps[r][t] for r in range(len(self.reps))]
                for t in range(len(self.idxs))]
        x = solve(f, cols, dense)
        if x is None:
            raise ValidationError("vector is not a cycle modulo boundaries (internal)")
        nb = len(self._bred)
        return [x[nb + r] for r in range(len(self.reps))]


def h_map(fmap, degree, vertex):
    """Matrix of H^degree(f) on the vertex slice, in representative bases."""
    f = fmap.src.field
    s_src = fmap.src.cohomology_slice(degree, vertex)
    s_tgt = fmap.tgt.cohomology_slice(degree, vertex)
    cols = []
    for rep in s_src.rep_vectors():
        img = fmap.apply(rep)
        cols.append(s_tgt.coords(img))
    # transpose to rows
    rows = [[cols[j][i] for j in range(len(cols))] for i in range(s_tgt.dim)]
    return rows


class H0Algebra:
    """H^0(A) with its radical and simple modules.

    The radical is the image of the positive-length degree-0 classes; this is
    validated by construction (the positive-length span of A is nilpotent).
    """

    def __init__(self, algebra):
        self.algebra = algebra
        f = algebra.field
        deg0 = [i for i, c in enumerate(algebra.classes) if c.degree == 0]
        degm1 = [i for i, c in enumerate(algebra.classes) if c.degree == -1]
        self.deg0 = deg0
        pos = {i: t for t, i in enumerate(deg0)}
        bnd = []
        for j in degm1:
            col = algebra.diff.get(j, {})
            bnd.append([col.get(i, f.zero()) for i in deg0])
        self._bred, self._bpiv = rref(f, bnd, len(deg0)) if bnd else ([], [])
        # representatives: canonical complement, idempotents always survive
        reps = []
        rows_acc, piv_acc = list(self._bred), list(self._bpiv)
        rep_class = []
        for i in deg0:
            v = [f.zero()] * len(deg0)
            v[pos[i]] = f.one()
            w = reduce_mod_span(f, rows_acc, piv_acc, v)
            if all(f.is_zero(c) for c in w):
                continue
            lead = next(t for t, c in enumerate(w) if not f.is_zero(c))
            inv = f.inv(w[lead])
            w = [f.mul(inv, c) for c in w]
            reps.append(w)
            rep_class.append(i)
            rows_acc, piv_acc = rref(f, rows_acc + [w], len(deg0))
        self.reps = reps
        self.rep_class = rep_class  # algebra class index whose reduction gave the rep
        self.dim = len(reps)
        self.rad_positions = [t for t, i in enumerate(rep_class)
                              if algebra.classes[i].length >= 1]
        self.vertex_of_rep = [algebra.classes[i].src if algebra.classes[i].length == 0
                              else None for i in rep_class]

    def coords(self, vec_deg0):
        """Class of a degree-0 algebra vector in the representative basis."""
        f = self.algebra.field
        pos = {i: t for t, i in enumerate(self.deg0)}
        dense = [f.zero()] * len(self.deg0)
        for i, c in vec_deg0.items():
            dense[pos[i]] = c
        cols = [[self._bred[r][t] for r in range(len(self._bred))] +
                [self.reps[r][t] for r in range(len(self.reps))]
                for t in range(len(self.deg0))]
        x = solve(f, cols, dense)
        if x is None:
            raise ValidationError("not representable in H^0 (internal)")
        nb = len(self._bred)
        return [x[nb + r] for r in range(self.dim)]

    def mult_table(self):
        """Structure constants of H^0(A) in the representative basis."""
        f = self.algebra.field
        table = {}
        for a, ia in enumerate(self.rep_class):
            for b, ib in enumerate(self.rep_class):
                prod = self.algebra.mult(ia, ib)
                prod0 = {i: c for i, c in prod.items()
                         if self.algebra.classes[i].degree == 0}
                if prod0:
                    coeffs = self.coords(prod0)
                    entry = {t: c for t, c in enumerate(coeffs) if not f.is_zero(c)}
                    if entry:
                        table[(a, b)] = entry
        return table

    def rad_generator_classes(self):
        """Positive-length degree-0 algebra classes; their images span rad."""
        return [i for i, c in enumerate(self.algebra.classes)
                if c.degree == 0 and c.length >= 1]

    def radical_is_nilpotent(self):
        # guaranteed: the positive-length span of A is nilpotent and rad is a
        # quotient image of its degree-0 part
        return True

    def semisimple_rank(self):
        return len(self.algebra.vertices)
