"""Exact linear algebra over Q and F_p, plus graded spaces and cochain complexes.

Everything downstream (algebra normalization, cohomology, Ext windows,
dimension chains) reduces to rank/kernel/image computations here.  All
arithmetic is exact: Q uses fractions.Fraction, F_p uses ints in [0, p).
Floating point is never used.
"""

from __future__ import annotations

from fractions import Fraction


class LinalgError(Exception):
    """Structural misuse: dimension mismatches, invalid complexes."""


# ---------------------------------------------------------------------------
# fields


class Rationals:
    """The field Q.  Elements are fractions.Fraction."""

    name = "Q"
    char = 0

    def zero(self):
        return Fraction(0)

    def one(self):
        return Fraction(1)

    def of_int(self, n):
        return Fraction(n)

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def mul(self, a, b):
        return a * b

    def neg(self, a):
        return -a

    def inv(self, a):
        if a == 0:
            raise ZeroDivisionError("inverse of 0")
        return 1 / a

    def is_zero(self, a):
        return a == 0

    def eq(self, a, b):
        return a == b

    def parse(self, text):
        try:
            return Fraction(text)
        except (ValueError, ZeroDivisionError) as exc:
            raise LinalgError(f"not a rational scalar: {text!r}") from exc

    def to_str(self, a):
        return str(a)

    def __repr__(self):
        return "Q"

    def __eq__(self, other):
        return isinstance(other, Rationals)

    def __hash__(self):
        return hash("Q")


class PrimeField:
    """The field F_p for a prime p < 2**31.  Elements are ints in [0, p)."""

    def __init__(self, p):
        if not isinstance(p, int) or p < 2 or p >= 2**31:
            raise LinalgError(f"field order must be a prime < 2^31, got {p}")
        if not _is_prime(p):
            raise LinalgError(f"field order must be prime, got {p}")
        self.p = p
        self.name = f"F{p}"
        self.char = p

    def zero(self):
        return 0

    def one(self):
        return 1 % self.p

    def of_int(self, n):
        return n % self.p

    def add(self, a, b):
        return (a + b) % self.p

    def sub(self, a, b):
        return (a - b) % self.p

    def mul(self, a, b):
        return (a * b) % self.p

    def neg(self, a):
        return (-a) % self.p

    def inv(self, a):
        if a % self.p == 0:
            raise ZeroDivisionError("inverse of 0")
        return pow(a, self.p - 2, self.p)

    def is_zero(self, a):
        return a % self.p == 0

    def eq(self, a, b):
        return (a - b) % self.p == 0

    def parse(self, text):
        text = text.strip()
        if "/" in text:
            num, _, den = text.partition("/")
            return self.mul(self.of_int(int(num)), self.inv(self.of_int(int(den))))
        try:
            return self.of_int(int(text))
        except ValueError as exc:
            raise LinalgError(f"not an F_{self.p} scalar: {text!r}") from exc

    def to_str(self, a):
        return str(a % self.p)

    def __repr__(self):
        return self.name

    def __eq__(self, other):
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self):
        return hash(("F", self.p))


def _is_prime(n):
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


def field_from_spec(spec):
    """Parse a field designator: "Q" or "F<p>" (e.g. "F5")."""
    spec = spec.strip()
    if spec == "Q":
        return Rationals()
    if spec.startswith("F") and spec[1:].isdigit():
        return PrimeField(int(spec[1:]))
    raise LinalgError(f"unknown field spec {spec!r}; expected Q or F<p>")


# ---------------------------------------------------------------------------
# dense matrices (list of rows)


def zeros(field, nrows, ncols):
    z = field.zero()
    return [[z] * ncols for _ in range(nrows)]


def identity(field, n):
    m = zeros(field, n, n)
    one = field.one()
    for i in range(n):
        m[i][i] = one
    return m


def mat_mul(field, a, b):
    if a and b and len(a[0]) != len(b):
        raise LinalgError(f"matrix shapes do not compose: {len(a)}x{len(a[0])} * {len(b)}x{len(b[0])}")
    if not a or not b:
        return zeros(field, len(a), len(b[0]) if b else 0)
    nr, nk, nc = len(a), len(b), len(b[0])
    out = zeros(field, nr, nc)
    for i in range(nr):
        row = a[i]
        acc = out[i]
        for k in range(nk):
            aik = row[k]
            if field.is_zero(aik):
                continue
            brow = b[k]
            for j in range(nc):
                if not field.is_zero(brow[j]):
                    acc[j] = field.add(acc[j], field.mul(aik, brow[j]))
    return out


def mat_vec(field, a, v):
    if a and len(a[0]) != len(v):
        raise LinalgError("matrix/vector shapes do not compose")
    out = []
    for row in a:
        s = field.zero()
        for x, y in zip(row, v):
            if not field.is_zero(x) and not field.is_zero(y):
                s = field.add(s, field.mul(x, y))
        out.append(s)
    return out


def rref(field, rows, ncols=None):
    """Reduced row echelon form.  Returns (new rows, pivot column list)."""
    m = [list(r) for r in rows]
    if ncols is None:
        ncols = len(m[0]) if m else 0
    pivots = []
    r = 0
    for c in range(ncols):
        pr = None
        for i in range(r, len(m)):
            if not field.is_zero(m[i][c]):
                pr = i
                break
        if pr is None:
            continue
        m[r], m[pr] = m[pr], m[r]
        inv = field.inv(m[r][c])
        m[r] = [field.mul(inv, x) for x in m[r]]
        for i in range(len(m)):
            if i != r and not field.is_zero(m[i][c]):
                f = m[i][c]
                m[i] = [field.sub(x, field.mul(f, y)) for x, y in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m[:r], pivots


def rank_of(field, rows, ncols=None):
    _, pivots = rref(field, rows, ncols)
    return len(pivots)


def nullspace(field, rows, ncols):
    """Basis of {v : rows @ v = 0}, as a list of length-ncols vectors.

    Free variables are set to 1 one at a time, in increasing column order,
    so the basis is canonical for a fixed row set.
    """
    red, pivots = rref(field, rows, ncols)
    pivot_set = set(pivots)
    free = [c for c in range(ncols) if c not in pivot_set]
    basis = []
    zero = field.zero()
    one = field.one()
    for fc in free:
        v = [zero] * ncols
        v[fc] = one
        for ri, pc in enumerate(pivots):
            v[pc] = field.neg(red[ri][fc])
        basis.append(v)
    return basis


def image_pivot_columns(field, rows, ncols=None):
    """Indices of a canonical column basis of the image (pivot columns)."""
    _, pivots = rref(field, rows, ncols)
    return pivots


def in_span(field, basis_rows, v):
    """Whether v lies in the row span of basis_rows (all length-n vectors)."""
    red, pivots = rref(field, basis_rows, len(v))
    w = list(v)
    for ri, pc in enumerate(pivots):
        if not field.is_zero(w[pc]):
            f = w[pc]
            w = [field.sub(x, field.mul(f, y)) for x, y in zip(w, red[ri])]
    return all(field.is_zero(x) for x in w)


def reduce_mod_span(field, reduced_rows, pivots, v):
    """Reduce v against an rref span; returns the canonical remainder."""
    w = list(v)
    for ri, pc in enumerate(pivots):
        if not field.is_zero(w[pc]):
            f = w[pc]
            w = [field.sub(x, field.mul(f, y)) for x, y in zip(w, reduced_rows[ri])]
    return w


def solve(field, a, b):
    """One solution x of a @ x = b, or None if inconsistent."""
    nr = len(a)
    nc = len(a[0]) if a else 0
    aug = [list(a[i]) + [b[i]] for i in range(nr)]
    red, pivots = rref(field, aug, nc + 1)
    if nc in pivots:
        return None
    x = [field.zero()] * nc
    for ri, pc in enumerate(pivots):
        x[pc] = red[ri][nc]
    return x


def sparse_rank(field, columns):
    """Rank of a matrix given as an iterable of sparse columns {row: coeff}.

    Column-echelon elimination with smallest-row pivots; intended for the
    very sparse differentials of bar complexes and chain modules.
    """
    ech = {}
    rank = 0
    for col in columns:
        col = {r: c for r, c in col.items() if not field.is_zero(c)}
        while col:
            lead = min(col)
            if lead in ech:
                f0 = col[lead]
                for r, c in ech[lead].items():
                    s = field.sub(col.get(r, field.zero()), field.mul(f0, c))
                    if field.is_zero(s):
                        col.pop(r, None)
                    else:
                        col[r] = s
            else:
                inv = field.inv(col[lead])
                ech[lead] = {r: field.mul(inv, c) for r, c in col.items()}
                rank += 1
                break
    return rank


# ---------------------------------------------------------------------------
# graded spaces, graded maps, cochain complexes


class GradedVectorSpace:
    """Finite-dimensional Z-graded space: degree -> ordered basis labels."""

    def __init__(self, components):
        self.components = {n: list(labels) for n, labels in components.items() if labels}

    def dim(self, n):
        return len(self.components.get(n, ()))

    def degrees(self):
        return sorted(self.components)

    def total_dim(self):
        return sum(len(v) for v in self.components.values())

    def labels(self, n):
        return list(self.components.get(n, ()))

    def __eq__(self, other):
        return isinstance(other, GradedVectorSpace) and self.components == other.components

    def __repr__(self):
        dims = {n: len(v) for n, v in sorted(self.components.items())}
        return f"GradedVectorSpace({dims})"


class GradedLinearMap:
    """Degree-homogeneous linear map between graded spaces.

    The block at degree n is a dim(target, n+shift) x dim(source, n) matrix
    whose columns are the images of the source basis.
    """

    def __init__(self, source, target, shift, blocks):
        self.source = source
        self.target = target
        self.shift = shift
        self.blocks = {}
        for n, block in blocks.items():
            nr = target.dim(n + shift)
            nc = source.dim(n)
            if len(block) != nr or any(len(r) != nc for r in block):
                raise LinalgError(
                    f"block at degree {n} has shape {len(block)}x"
                    f"{len(block[0]) if block else 0}, expected {nr}x{nc}"
                )
            if nr and nc:
                self.blocks[n] = [list(r) for r in block]

    def block(self, field, n):
        if n in self.blocks:
            return self.blocks[n]
        return zeros(field, self.target.dim(n + self.shift), self.source.dim(n))

    def apply(self, field, n, v):
        return mat_vec(field, self.block(field, n), v)


def rank_kernel_image(field, m):
    """Per-degree rank, kernel basis and image basis of a GradedLinearMap.

    The image basis consists of the columns of the block at its pivot
    positions (the images of the corresponding source basis vectors).
    Rank-nullity is asserted exactly.
    """
    out = {}
    for n in sorted(set(m.source.degrees()) | set(k for k in m.blocks)):
        nc = m.source.dim(n)
        if nc == 0:
            continue
        block = m.block(field, n)
        _, pivots = rref(field, block, nc)
        ker = nullspace(field, block, nc)
        if len(pivots) + len(ker) != nc:
            raise LinalgError("rank-nullity violated (internal error)")
        image = [[block[i][j] for i in range(len(block))] for j in pivots]
        out[n] = (len(pivots), ker, image)
    return out


class CochainComplex:
    """A graded space with a square-zero differential of degree +1."""

    def __init__(self, field, space, differential):
        self.field = field
        self.space = space
        self.d = differential
        if differential.shift != 1:
            raise LinalgError("differential must have degree +1")

    def check_differential(self):
        for n in self.space.degrees():
            if self.space.dim(n) == 0:
                continue
            dn = self.d.block(self.field, n)
            dn1 = self.d.block(self.field, n + 1)
            sq = mat_mul(self.field, dn1, dn)
            for row in sq:
                for x in row:
                    if not self.field.is_zero(x):
                        raise LinalgError(f"differential does not square to zero at degree {n}")

    def cohomology(self, n):
        """(dimension, representative cycles) of H^n.

        Representatives are kernel basis vectors reduced against the image of
        the incoming differential; the choice is canonical for the basis order.
        """
        field = self.field
        dim_n = self.space.dim(n)
        if dim_n == 0:
            return 0, []
        dn = self.d.block(field, n)
        cycles = nullspace(field, dn, dim_n)
        prev = self.d.block(field, n - 1)
        boundaries = []
        for j in range(self.space.dim(n - 1)):
            boundaries.append([prev[i][j] for i in range(dim_n)])
        red, pivots = rref(field, boundaries, dim_n) if boundaries else ([], [])
        reps = []
        chosen_rows = list(red)
        chosen_pivots = list(pivots)
        for v in cycles:
            w = reduce_mod_span(field, chosen_rows, chosen_pivots, v)
            if all(field.is_zero(x) for x in w):
                continue
            # normalize the new representative and fold it into the span so
            # later cycles reduce against it (canonical complement)
            lead = next(i for i, x in enumerate(w) if not field.is_zero(x))
            inv = field.inv(w[lead])
            w = [field.mul(inv, x) for x in w]
            reps.append(w)
            merged = chosen_rows + [w]
            chosen_rows, chosen_pivots = rref(field, merged, dim_n)
        dim_ker = len(cycles)
        dim_im = len(pivots)
        if len(reps) != dim_ker - dim_im:
            raise LinalgError("cohomology dimension bookkeeping failed (internal error)")
        return len(reps), reps

    def cohomology_table(self):
        """degree -> dim H^n over the full support of the space."""
        table = {}
        degs = self.space.degrees()
        if not degs:
            return table
        for n in range(min(degs) - 1, max(degs) + 2):
            dim, _ = self.cohomology(n)
            if dim:
                table[n] = dim
        return table
