"""Projective and global dimension via iterated minimal free covers.

pd(x) runs the approximation chain: normalize x so its top cohomology sits
in degree 0, take the minimal free cover of H^0 (a projective cover over
H^0(A) lifted along cycle representatives), pass to the cocone, and repeat
until the stage is acyclic.  The terminated chain is reassembled into a
semifree module (iterated cones of the covers) together with a strict
quasi-isomorphism onto the normalized input: the witness that x lies in
Add A * Add A[1] * ... * Add A[n].

Every Exact answer is cross-checked against the bar-complex Ext table: the
top nonvanishing Ext^m(x, s) for m <= n+1 must equal n.  A disagreement is
a ConsistencyError (exit code 2 in the CLI); Exact is never claimed from
Ext vanishing alone, and cutoff provenance is recorded on every result.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field

from .core import DgModuleMap, SemifreeData, cocone
from .derived import ext_window
from .linalg import rref, reduce_mod_span
from .presentation import ValidationError


class ConsistencyError(Exception):
    """The approximation chain and the Ext oracle disagree."""


MINUS_INFINITY = "minus_infinity"
EXACT = "exact"
AT_LEAST = "at_least"

DEFAULT_CYCLIC_CUTOFF = 32


@dataclass
class PdResult:
    kind: str
    value: int = None  # Exact value, or the exceeded cutoff for AT_LEAST
    shift: int = 0  # normalization shift applied to the input
    chain_length: int = None  # termination level of the normalized chain
    layers: list = dc_field(default_factory=list)  # per level: {vertex: mult}
    witness: SemifreeData = None
    witness_map: DgModuleMap = None  # semifree model -> normalized input
    witness_target: object = None
    ext_check: dict = None  # Ext^m(x_norm, s) dims on [0, chain_length + 1]

    def is_exact(self):
        return self.kind == EXACT

    def to_payload(self):
        out = {"kind": self.kind}
        if self.kind == EXACT:
            out["value"] = self.value
        elif self.kind == AT_LEAST:
            out["cutoff"] = self.value
        out["normalization_shift"] = self.shift
        if self.layers:
            out["witness_layers"] = [
                {v: m for v, m in sorted(layer.items())} for layer in self.layers
            ]
        if self.ext_check is not None:
            out["ext_check"] = {str(k): v for k, v in sorted(self.ext_check.items())}
        return out


@dataclass
class GdResult:
    kind: str
    value: int = None
    pd_of_simples: PdResult = None
    ext_diagnostic: object = None  # ExtTable, or None when skipped
    cutoff: int = None
    cutoff_provenance: str = None  # "acyclic_bound" | "user" | "default"
    warning: str = None

    def is_exact(self):
        return self.kind == EXACT

    def to_payload(self):
        out = {"kind": self.kind}
        if self.kind == EXACT:
            out["value"] = self.value
        else:
            out["cutoff"] = self.value
        out["cutoff"] = self.cutoff
        out["cutoff_provenance"] = self.cutoff_provenance
        if self.pd_of_simples is not None:
            out["pd_of_simples"] = self.pd_of_simples.to_payload()
        if self.ext_diagnostic is not None:
            out["ext_diagnostic"] = self.ext_diagnostic.to_payload()
        if self.warning:
            out["warning"] = self.warning
        return out


def _top_cover_data(x):
    """Minimal cover of H^0(x): generator vertices and lifted cycle columns.

    Chooses cycle representatives whose classes project to a basis of
    H^0(x) / H^0(x).rad over H^0(A); the rad span is computed from the
    positive-length degree-0 classes acting on representatives.
    """
    alg = x.algebra
    f = alg.field
    h0 = alg.h0()
    rad_classes = h0.rad_generator_classes()
    gens = []  # (vertex, cycle sparse vector)
    for v in alg.vertices:
        sl = x.cohomology_slice(0, v)
        if sl.dim == 0:
            continue
        # span of rad-translates inside this slice, in rep coordinates
        rad_rows = []
        for w in alg.vertices:
            sl_w = x.cohomology_slice(0, w)
            if sl_w.dim == 0:
                continue
            for rep in sl_w.rep_vectors():
                for ci in rad_classes:
                    cls = alg.classes[ci]
                    if cls.src != w or cls.tgt != v:
                        continue
                    img = x.act_vec(rep, {ci: f.one()})
                    if img:
                        rad_rows.append(sl.coords(img))
        red, piv = rref(f, rad_rows, sl.dim) if rad_rows else ([], [])
        rows_acc, piv_acc = list(red), list(piv)
        for t, rep in enumerate(sl.rep_vectors()):
            unit = [f.zero()] * sl.dim
            unit[t] = f.one()
            rem = reduce_mod_span(f, rows_acc, piv_acc, unit)
            if all(f.is_zero(c) for c in rem):
                continue
            gens.append((v, rep))
            rows_acc, piv_acc = rref(f, rows_acc + [rem], sl.dim)
    return gens


def _cover(x):
    """(cover SemifreeData, cover module, cover map lambda: M -> x)."""
    alg = x.algebra
    f = alg.field
    gens = _top_cover_data(x)
    data = SemifreeData(alg, [(v, 0) for v, _ in gens], {})
    mod = data.to_module()
    layout, pos = data.basis_layout()
    cols = {}
    for t, (j, ci) in enumerate(layout):
        _, cycle = gens[j]
        img = x.act_vec(cycle, {ci: f.one()})
        if img:
            cols[t] = img
    lam = DgModuleMap(mod, x, cols)
    return data, mod, lam


def pd(x, cutoff, check=True):
    """Projective dimension of a finite-dimensional dg module.

    Returns Exact(n) from a terminated chain of minimal covers, AtLeast(cutoff)
    when the chain outruns the cutoff, or MinusInfinity for an acyclic input.
    """
    if cutoff is not None and cutoff < 0:
        raise ValidationError(f"cutoff must be nonnegative, got {cutoff}")
    if x.is_acyclic():
        return PdResult(MINUS_INFINITY)
    top = x.top_h_degree()
    x_norm = x.shift(top) if top != 0 else x
    x0, _ = x_norm.truncate_above_zero()

    steps = []  # (cover data, cover module, lambda, cocone_full, incl of next)
    current = x0
    level = 0
    terminated_at = None
    while level <= cutoff:
        data, mod, lam = _cover(current)
        nxt_full, _ = cocone(lam)
        if nxt_full.is_acyclic():
            steps.append((data, mod, lam, nxt_full, None))
            terminated_at = level
            break
        nxt, incl = nxt_full.truncate_above_zero()
        steps.append((data, mod, lam, nxt_full, incl))
        current = nxt
        level += 1

    if terminated_at is None:
        return PdResult(AT_LEAST, value=cutoff - top, shift=-top,
                        layers=[_layer_of(d) for d, *_ in steps])

    witness, wmap = _reassemble(steps, x0)
    layers = [_layer_of(d) for d, *_ in steps]
    result = PdResult(EXACT, value=terminated_at - top, shift=-top,
                      chain_length=terminated_at, layers=layers,
                      witness=witness, witness_map=wmap, witness_target=x0)
    if check:
        _two_oracle_check(x0, result)
    return result


def _layer_of(data):
    out = {}
    for v, _ in data.gens:
        out[v] = out.get(v, 0) + 1
    return out


def _reassemble(steps, x0):
    """Fold the chain back into a semifree model F ~ x0 with a strict map.

    Backward from the last cover: F_n = M_n with the cover map itself; then
    F_k = cone(psi: F_{k+1} -> M_k) with psi the cocone projection composed
    through the comparison map, and the comparison to x_k sends the shifted
    part to the x_k-component of the cocone coordinates and m to -lambda(m).
    """
    alg = x0.algebra
    f = alg.field
    n = len(steps) - 1
    data_n, mod_n, lam_n, _, _ = steps[n]
    fdata = data_n
    fmod = mod_n
    q = lam_n  # F_n -> x_n, a quasi-isomorphism because the cocone is acyclic
    for k in range(n - 1, -1, -1):
        data_k, mod_k, lam_k, cocone_full, incl = steps[k]
        x_k = lam_k.tgt
        nm = mod_k.dim
        # psi: F -> M_k through the cocone projection
        into_cocone = incl.compose(q) if incl is not None else q
        psi_cols = {}
        ups_cols = {}
        for j in range(fmod.dim):
            img = into_cocone.apply({j: f.one()})
            pc = {i: c for i, c in img.items() if i < nm}
            uc = {i - nm: c for i, c in img.items() if i >= nm}
            if pc:
                psi_cols[j] = pc
            if uc:
                ups_cols[j] = uc
        # new semifree data: F[1] block plus the new free layer
        old_gens = len(fdata.gens)
        gens = [(v, deg - 1) for v, deg in fdata.gens] + list(data_k.gens)
        conn = {}
        for (i, j), vec in fdata.conn.items():
            conn[(i, j)] = {ci: f.neg(c) for ci, c in vec.items()}
        # psi components: d(s g_j) gains the M_k part
        _, pos_f = fdata.basis_layout()
        layout_m, pos_m = data_k.basis_layout()
        gen_basis_f = {j: pos_f[(j, alg.idem[v])] for j, (v, _) in enumerate(fdata.gens)}
        for j, (v, _) in enumerate(fdata.gens):
            col = psi_cols.get(gen_basis_f[j], {})
            acc = {}
            for t, c in col.items():
                gi, ci = layout_m[t]
                acc.setdefault(gi, {})
                cur = acc[gi].get(ci, f.zero())
                acc[gi][ci] = f.add(cur, c)
            for gi, vec in acc.items():
                vec = {ci: c for ci, c in vec.items() if not f.is_zero(c)}
                if vec:
                    conn[(old_gens + gi, j)] = vec
        fdata = SemifreeData(alg, gens, conn)
        new_fmod = fdata.to_module()
        # comparison map: shifted part via the x_k component, layer via -lambda
        new_layout, _ = fdata.basis_layout()
        cols = {}
        for t, (gj, ci) in enumerate(new_layout):
            if gj < old_gens:
                old_t = pos_f[(gj, ci)]
                col = ups_cols.get(old_t)
                if col:
                    cols[t] = dict(col)
            else:
                mt = pos_m[(gj - old_gens, ci)]
                img = lam_k.cols.get(mt)
                if img:
                    cols[t] = {i: f.neg(c) for i, c in img.items()}
        q = DgModuleMap(new_fmod, x_k, cols)
        fmod = new_fmod
    return fdata, q


def _two_oracle_check(x0, result):
    """Exact(n) must match the top nonvanishing Ext^m(x, s) for m <= n+1."""
    alg = x0.algebra
    s = alg.simples_sum()
    n = result.chain_length
    table = ext_window(x0, s, 0, n + 1)
    result.ext_check = dict(table.dims)
    top = table.top_nonzero()
    if top != n:
        raise ConsistencyError(
            f"approximation chain terminated at {n} but Ext^m(x, s) tops out at "
            f"{top}: the two oracles disagree")


def gd(algebra, cutoff=None, diagnostics=True, check=True):
    """Global dimension via pd of the sum of simples.

    For an acyclic quiver the cutoff l(d+1) is guaranteed sufficient, so the
    answer is always Exact; otherwise a user cutoff (default 32) bounds the
    chain and AtLeast results carry a warning.
    """
    s = algebra.simples_sum()
    warning = None
    if algebra.acyclic and algebra.quiver_path_length is not None:
        bound = algebra.quiver_path_length * (algebra.amplitude + 1)
        provenance = "acyclic_bound"
        c = bound
        if cutoff is not None and cutoff != bound:
            c = cutoff
            provenance = "user"
    elif cutoff is not None:
        c = cutoff
        provenance = "user"
    else:
        c = DEFAULT_CYCLIC_CUTOFF
        provenance = "default"
        warning = ("quiver has oriented cycles and no cutoff was given: results "
                   f"above the default cutoff {c} are reported as AtLeast")
    p = pd(s, c, check=check)
    ext_diag = None
    if diagnostics:
        from .derived import WindowTooLarge

        try:
            ext_diag = ext_window(s, s, 0, c + 1)
        except WindowTooLarge:
            warning = (warning + "; " if warning else "") + \
                "ext diagnostic window exceeded the word budget and was skipped"
    if p.kind == MINUS_INFINITY:
        # H^0(A) always contains the vertex idempotents, so s is never zero
        raise ConsistencyError("simples_sum is acyclic: corrupted algebra data")
    kind = EXACT if p.kind == EXACT else AT_LEAST
    value = p.value
    if kind == EXACT and ext_diag is not None:
        above = [m for m, d in ext_diag.dims.items() if m > value and d]
        if above:
            raise ConsistencyError(
                f"gd terminated at {value} but Ext^{min(above)}(s, s) != 0")
    return GdResult(kind, value=value, pd_of_simples=p, ext_diagnostic=ext_diag,
                    cutoff=c, cutoff_provenance=provenance, warning=warning)


def per_membership(x, cutoff, check=True):
    """True when a finite semifree filtration exists, None when unknown.

    Exact pd is precisely a finite Add A * ... * Add A[n] chain; an acyclic
    module is the zero object and lies in per A trivially.
    """
    p = pd(x, cutoff, check=check)
    if p.kind == MINUS_INFINITY:
        return True, p
    if p.kind == EXACT:
        return True, p
    return None, p
