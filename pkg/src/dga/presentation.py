"""Presentation language for dg quiver algebras and dg modules.

Line-oriented grammar ('#' starts a comment):

    field Q | F<p>
    vertices <id> <id> ...
    arrow <name> : <v> -> <v> deg <int<=0>
    rel <linear combination of '*'-composed paths>
    diff <arrow> = <linear combination of paths>
    max_path_length <N>

Module files:

    module <name>
    basis <label> vertex <v> deg <int>
    act <arrow> : <label> -> <coeff>*<label> [+ ...]
    diff <label> = ...

Coefficients are integers or fractions p/q, interpreted in the algebra's
field when the presentation is normalized.  normalize() turns an algebra
presentation into a dga.core.DgAlgebra with a basis of path classes.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field as dc_field

from .linalg import field_from_spec, rref, reduce_mod_span


class ParseError(Exception):
    """Syntax error with position information."""

    def __init__(self, message, line=None, col=None, expected=None):
        self.line = line
        self.col = col
        self.expected = expected or []
        loc = ""
        if line is not None:
            loc = f"line {line}" + (f", col {col}" if col is not None else "") + ": "
        exp = f" (expected {', '.join(self.expected)})" if self.expected else ""
        super().__init__(f"{loc}{message}{exp}")


class ValidationError(Exception):
    """Semantic rejection: non-homogeneous relation, bad degree, d^2 != 0, ..."""


# ---------------------------------------------------------------------------
# data model


@dataclass(frozen=True)
class Arrow:
    name: str
    src: str
    tgt: str
    degree: int


# an expression is a list of (coefficient string, path) where a path is a
# tuple of arrow names (always nonempty: trivial paths are not expressible)
Expr = list


@dataclass
class AlgebraPresentation:
    field_spec: str
    vertices: list
    arrows: list
    relations: list = dc_field(default_factory=list)
    differentials: dict = dc_field(default_factory=dict)
    max_path_length: int = None

    def arrow(self, name):
        for a in self.arrows:
            if a.name == name:
                return a
        raise KeyError(name)

    def to_text(self):
        lines = [f"field {self.field_spec}", "vertices " + " ".join(self.vertices)]
        for a in self.arrows:
            lines.append(f"arrow {a.name} : {a.src} -> {a.tgt} deg {a.degree}")
        for r in self.relations:
            lines.append("rel " + format_expr(r))
        for name in sorted(self.differentials):
            lines.append(f"diff {name} = " + format_expr(self.differentials[name]))
        if self.max_path_length is not None:
            lines.append(f"max_path_length {self.max_path_length}")
        return "\n".join(lines) + "\n"


@dataclass
class ModulePresentation:
    name: str
    basis: list = dc_field(default_factory=list)  # (label, vertex, degree)
    actions: dict = dc_field(default_factory=dict)  # arrow -> {label: [(coeff, label)]}
    differentials: dict = dc_field(default_factory=dict)  # label -> [(coeff, label)]
    builtin: str = None

    def to_text(self):
        lines = [f"module {self.name}"]
        for label, v, deg in self.basis:
            lines.append(f"basis {label} vertex {v} deg {deg}")
        for arrow in sorted(self.actions):
            for label in sorted(self.actions[arrow]):
                combo = self.actions[arrow][label]
                lines.append(f"act {arrow} : {label} -> " + format_label_combo(combo))
        for label in sorted(self.differentials):
            lines.append(f"diff {label} = " + format_label_combo(self.differentials[label]))
        return "\n".join(lines) + "\n"


def format_expr(expr):
    parts = []
    for coeff, path in expr:
        term = "*".join(path)
        if coeff.lstrip("-") not in ("1", ""):
            term = f"{coeff.lstrip('-')}*{term}" if not coeff.startswith("-") else f"{coeff[1:]}*{term}"
        neg = coeff.startswith("-")
        if not parts:
            parts.append(("-" if neg else "") + term)
        else:
            parts.append(("- " if neg else "+ ") + term)
    return " ".join(parts) if parts else "0"


def format_label_combo(combo):
    return format_expr([(c, (lbl,)) for c, lbl in combo])


# ---------------------------------------------------------------------------
# lexer


_TOKEN_RE = re.compile(
    r"(?P<ws>\s+)|(?P<arrowop>->)|(?P<int>\d+)|(?P<name>[A-Za-z_][A-Za-z_0-9]*)"
    r"|(?P<op>[:*+\-=/()\[\]])"
)


def _tokenize_line(text, lineno):
    tokens = []
    pos = 0
    stripped = text.split("#", 1)[0]
    while pos < len(stripped):
        m = _TOKEN_RE.match(stripped, pos)
        if m is None:
            raise ParseError(f"unexpected character {stripped[pos]!r}", lineno, pos + 1)
        if m.lastgroup != "ws":
            tokens.append((m.lastgroup, m.group(), lineno, pos + 1))
        pos = m.end()
    return tokens


class _TokenStream:
    def __init__(self, tokens, lineno):
        self.tokens = tokens
        self.i = 0
        self.lineno = lineno

    def peek(self):
        return self.tokens[self.i] if self.i < len(self.tokens) else None

    def next(self, kind=None, text=None, what=None):
        tok = self.peek()
        if tok is None:
            raise ParseError("unexpected end of line", self.lineno,
                             expected=[what or text or kind or "token"])
        if (kind and tok[0] != kind) or (text and tok[1] != text):
            raise ParseError(f"unexpected {tok[1]!r}", tok[2], tok[3],
                             expected=[what or text or kind])
        self.i += 1
        return tok

    def done(self):
        tok = self.peek()
        if tok is not None:
            raise ParseError(f"trailing input {tok[1]!r}", tok[2], tok[3])

    def at(self, kind=None, text=None):
        tok = self.peek()
        return tok is not None and (kind is None or tok[0] == kind) and (text is None or tok[1] == text)


def _parse_int(ts, what="integer"):
    sign = 1
    if ts.at("op", "-"):
        ts.next()
        sign = -1
    tok = ts.next("int", what=what)
    return sign * int(tok[1])


def _parse_coeff_and_path(ts, name_kind="path"):
    """One term: optional coefficient (int or int/int) then a '*'-joined path."""
    coeff = "1"
    if ts.at("int"):
        num = ts.next("int")[1]
        if ts.at("op", "/"):
            ts.next()
            den = ts.next("int", what="denominator")[1]
            coeff = f"{num}/{den}"
        else:
            coeff = num
        ts.next("op", "*", what="'*' between coefficient and " + name_kind)
    names = [ts.next("name", what=name_kind)[1]]
    while ts.at("op", "*"):
        ts.next()
        names.append(ts.next("name", what=name_kind)[1])
    return coeff, tuple(names)


def _parse_expr(ts, name_kind="path"):
    terms = []
    negate = False
    if ts.at("op", "-"):
        ts.next()
        negate = True
    while True:
        coeff, path = _parse_coeff_and_path(ts, name_kind)
        if negate:
            coeff = coeff[1:] if coeff.startswith("-") else "-" + coeff
        terms.append((coeff, path))
        if ts.at("op", "+"):
            ts.next()
            negate = False
        elif ts.at("op", "-"):
            ts.next()
            negate = True
        else:
            break
    return terms


# ---------------------------------------------------------------------------
# parser


def parse(text):
    """Parse presentation source into an Algebra- or ModulePresentation."""
    lines = text.splitlines()
    first_kw = None
    for lineno, raw in enumerate(lines, 1):
        toks = _tokenize_line(raw, lineno)
        if toks:
            first_kw = toks[0]
            break
    if first_kw is None:
        raise ParseError("empty presentation", 1)
    if first_kw[1] == "module":
        return _parse_module(lines)
    return _parse_algebra(lines)


def _parse_algebra(lines):
    field_spec = None
    vertices = None
    arrows = []
    arrow_names = {}
    relations = []
    differentials = {}
    max_path_length = None

    for lineno, raw in enumerate(lines, 1):
        toks = _tokenize_line(raw, lineno)
        if not toks:
            continue
        ts = _TokenStream(toks, lineno)
        kw = ts.next("name", what="keyword")[1]
        if kw == "field":
            tok = ts.peek()
            if tok is None:
                raise ParseError("missing field designator", lineno, expected=["Q", "F<p>"])
            ts.next()
            field_spec = tok[1]
            ts.done()
            try:
                field_from_spec(field_spec)
            except Exception as exc:
                raise ParseError(str(exc), lineno, tok[3]) from None
        elif kw == "vertices":
            vertices = []
            while ts.peek() is not None:
                tok = ts.next()
                if tok[0] not in ("name", "int"):
                    raise ParseError(f"bad vertex id {tok[1]!r}", tok[2], tok[3])
                if tok[1] in vertices:
                    raise ParseError(f"duplicate vertex {tok[1]!r}", tok[2], tok[3])
                vertices.append(tok[1])
        elif kw == "arrow":
            name_tok = ts.next("name", what="arrow name")
            ts.next("op", ":")
            src = ts.next(what="source vertex")[1]
            ts.next("arrowop", what="->")
            tgt = ts.next(what="target vertex")[1]
            deg_kw = ts.next("name", what="deg")
            if deg_kw[1] != "deg":
                raise ParseError(f"unexpected {deg_kw[1]!r}", deg_kw[2], deg_kw[3], expected=["deg"])
            degree = _parse_int(ts, "arrow degree")
            ts.done()
            if vertices is None:
                raise ParseError("arrow before vertices line", lineno)
            if src not in vertices:
                raise ParseError(f"unknown vertex {src!r}", lineno)
            if tgt not in vertices:
                raise ParseError(f"unknown vertex {tgt!r}", lineno)
            if name_tok[1] in arrow_names:
                raise ParseError(f"duplicate arrow {name_tok[1]!r}", name_tok[2], name_tok[3])
            if degree > 0:
                raise ParseError(f"arrow degree must be <= 0, got {degree}",
                                 name_tok[2], name_tok[3])
            arrow = Arrow(name_tok[1], src, tgt, degree)
            arrows.append(arrow)
            arrow_names[arrow.name] = arrow
        elif kw == "rel":
            expr = _parse_expr(ts)
            ts.done()
            relations.append((expr, lineno))
        elif kw == "diff":
            name_tok = ts.next("name", what="arrow name")
            ts.next("op", "=")
            expr = _parse_expr(ts)
            ts.done()
            if name_tok[1] in differentials:
                raise ParseError(f"duplicate diff for arrow {name_tok[1]!r}",
                                 name_tok[2], name_tok[3])
            differentials[name_tok[1]] = (expr, lineno)
        elif kw == "max_path_length":
            max_path_length = _parse_int(ts, "positive integer")
            ts.done()
            if max_path_length <= 0:
                raise ParseError("max_path_length must be positive", lineno)
        else:
            raise ParseError(f"unknown keyword {kw!r}", lineno, toks[0][3],
                             expected=["field", "vertices", "arrow", "rel", "diff",
                                       "max_path_length"])

    if field_spec is None:
        raise ParseError("missing field line", 1, expected=["field Q", "field F<p>"])
    if vertices is None:
        raise ParseError("missing vertices line", 1, expected=["vertices ..."])

    pres = AlgebraPresentation(field_spec, vertices, arrows)
    _check_algebra_exprs(pres, relations, differentials)
    pres.max_path_length = max_path_length
    return pres


def _expr_endpoints_degree(pres, expr, lineno, what):
    """Validate one expression: known arrows, composable paths, homogeneity.

    Returns (src, tgt, degree) shared by every term.
    """
    sig = None
    for coeff, path in expr:
        deg = 0
        for i, name in enumerate(path):
            try:
                arrow = pres.arrow(name)
            except KeyError:
                raise ParseError(f"unknown arrow {name!r} in {what}", lineno) from None
            if i > 0 and pres.arrow(path[i - 1]).tgt != arrow.src:
                raise ParseError(
                    f"path {'*'.join(path)} does not compose at {name!r}", lineno)
            deg += arrow.degree
        term_sig = (pres.arrow(path[0]).src, pres.arrow(path[-1]).tgt, deg)
        if sig is None:
            sig = term_sig
        elif sig != term_sig:
            raise ValidationError(
                f"line {lineno}: {what} is not homogeneous: term {'*'.join(path)} "
                f"has (src, tgt, deg) = {term_sig}, expected {sig}")
    return sig


def _check_algebra_exprs(pres, relations, differentials):
    for expr, lineno in relations:
        _expr_endpoints_degree(pres, expr, lineno, "relation")
        pres.relations.append(expr)
    for name, (expr, lineno) in differentials.items():
        try:
            arrow = pres.arrow(name)
        except KeyError:
            raise ParseError(f"diff for unknown arrow {name!r}", lineno) from None
        sig = _expr_endpoints_degree(pres, expr, lineno, f"d({name})")
        if sig[:2] != (arrow.src, arrow.tgt):
            raise ValidationError(
                f"line {lineno}: d({name}) terms are not parallel to {name}")
        if sig[2] != arrow.degree + 1:
            raise ValidationError(
                f"line {lineno}: d({name}) must have degree {arrow.degree + 1}, "
                f"got {sig[2]}" + (" (no positive-degree paths exist)" if arrow.degree == 0 else ""))
        pres.differentials[name] = expr


def _parse_module(lines):
    name = None
    basis = []
    labels = {}
    actions = {}
    differentials = {}

    for lineno, raw in enumerate(lines, 1):
        toks = _tokenize_line(raw, lineno)
        if not toks:
            continue
        ts = _TokenStream(toks, lineno)
        kw = ts.next("name", what="keyword")[1]
        if kw == "module":
            name = ts.next(what="module name")[1]
            ts.done()
        elif kw == "basis":
            label = ts.next("name", what="basis label")[1]
            v_kw = ts.next("name", what="vertex")
            if v_kw[1] != "vertex":
                raise ParseError(f"unexpected {v_kw[1]!r}", v_kw[2], v_kw[3], expected=["vertex"])
            vertex = ts.next(what="vertex id")[1]
            d_kw = ts.next("name", what="deg")
            if d_kw[1] != "deg":
                raise ParseError(f"unexpected {d_kw[1]!r}", d_kw[2], d_kw[3], expected=["deg"])
            degree = _parse_int(ts, "degree")
            ts.done()
            if label in labels:
                raise ParseError(f"duplicate basis label {label!r}", lineno)
            labels[label] = (vertex, degree)
            basis.append((label, vertex, degree))
        elif kw == "act":
            arrow = ts.next("name", what="arrow name")[1]
            ts.next("op", ":")
            src_label = ts.next("name", what="basis label")[1]
            ts.next("arrowop", what="->")
            combo = _parse_expr(ts, name_kind="basis label")
            ts.done()
            flat = [(c, p[0]) for c, p in combo]
            for c, p in combo:
                if len(p) != 1:
                    raise ParseError("module action images are label combinations, not paths", lineno)
            actions.setdefault(arrow, {})
            if src_label in actions[arrow]:
                raise ParseError(f"duplicate act for ({arrow}, {src_label})", lineno)
            actions[arrow][src_label] = flat
        elif kw == "diff":
            label = ts.next("name", what="basis label")[1]
            ts.next("op", "=")
            combo = _parse_expr(ts, name_kind="basis label")
            ts.done()
            flat = []
            for c, p in combo:
                if len(p) != 1:
                    raise ParseError("module differentials are label combinations", lineno)
                flat.append((c, p[0]))
            if label in differentials:
                raise ParseError(f"duplicate diff for {label!r}", lineno)
            differentials[label] = flat
        else:
            raise ParseError(f"unknown keyword {kw!r}", lineno, toks[0][3],
                             expected=["module", "basis", "act", "diff"])

    if name is None:
        raise ParseError("missing module line", 1)
    for arrow, acts in actions.items():
        for src_label, combo in acts.items():
            if src_label not in labels:
                raise ParseError(f"act references unknown label {src_label!r}")
            for _, lbl in combo:
                if lbl not in labels:
                    raise ParseError(f"act references unknown label {lbl!r}")
    for label, combo in differentials.items():
        if label not in labels:
            raise ParseError(f"diff references unknown label {label!r}")
        for _, lbl in combo:
            if lbl not in labels:
                raise ParseError(f"diff references unknown label {lbl!r}")
    return ModulePresentation(name, basis, actions, differentials)


_BUILTIN_RE = re.compile(
    r"^(?:(?P<simples>simples_sum)|(?P<kind>simple|free)\((?P<v>[A-Za-z_0-9]+)\)"
    r"(?:\[(?P<shift>-?\d+)\])?)$"
)


def parse_builtin(text):
    """Parse a CLI builtin module designator.

    Returns ("simples_sum",), ("simple", v), or ("free", v, shift).
    """
    m = _BUILTIN_RE.match(text.strip())
    if m is None:
        raise ParseError(f"not a builtin module designator: {text!r}",
                         expected=["simple(<v>)", "free(<v>)[k]", "simples_sum"])
    if m.group("simples"):
        return ("simples_sum",)
    kind = m.group("kind")
    if kind == "simple":
        if m.group("shift") is not None:
            raise ParseError("simple(<v>) takes no shift")
        return ("simple", m.group("v"))
    return ("free", m.group("v"), int(m.group("shift") or 0))


# ---------------------------------------------------------------------------
# normalization: presentation -> DgAlgebra


def _detect_cycle(vertices, arrows):
    out = {v: [] for v in vertices}
    for a in arrows:
        out[a.src].append(a.tgt)
    WHITE, GRAY, BLACK = 0, 1, 2
    color = {v: WHITE for v in vertices}

    def visit(v):
        color[v] = GRAY
        for w in out[v]:
            if color[w] == GRAY:
                return True
            if color[w] == WHITE and visit(w):
                return True
        color[v] = BLACK
        return False

    return any(visit(v) for v in vertices if color[v] == WHITE)


_PATH_CAP = 120_000


def _enumerate_paths(pres, max_len):
    """All paths of length <= max_len as (src, tgt, degree, arrows tuple)."""
    paths = [(v, v, 0, ()) for v in pres.vertices]
    frontier = list(paths)
    by_src = {}
    for a in pres.arrows:
        by_src.setdefault(a.src, []).append(a)
    for _ in range(max_len):
        nxt = []
        for (src, tgt, deg, arrows) in frontier:
            for a in by_src.get(tgt, ()):
                nxt.append((src, a.tgt, deg + a.degree, arrows + (a.name,)))
        paths.extend(nxt)
        if len(paths) > _PATH_CAP:
            raise ValidationError(
                f"presentation too large: more than {_PATH_CAP} paths of length <= {max_len}")
        if not nxt:
            break
        frontier = nxt
    return paths


def path_name(path, vertex=None):
    return "*".join(path) if path else f"e_{vertex}"


def normalize(pres):
    """Build the finite-dimensional dg algebra kQ/I presented by `pres`.

    Ideal membership is by exhaustive spanning of u*r*v inside the
    length-bounded path space; the quotient basis consists of path classes
    ordered by (source, target, degree, length, path name).
    """
    from . import core  # deferred import: core depends on nothing here

    field = field_from_spec(pres.field_spec)
    acyclic = not _detect_cycle(pres.vertices, pres.arrows)

    d_rel = max((len(p) for expr in pres.relations for _, p in expr), default=0)
    d_diff = max((len(p) for expr in pres.differentials.values() for _, p in expr), default=0)

    if acyclic:
        paths = _enumerate_paths(pres, _PATH_CAP)  # finite: bounded by longest path
        quiver_len = max((len(p[3]) for p in paths), default=0)
        basis_len_bound = quiver_len
        work_len = quiver_len
    else:
        if pres.max_path_length is None:
            raise ValidationError(
                "quiver has an oriented cycle and no max_path_length was given: "
                "the algebra is not finite-dimensional")
        n = pres.max_path_length
        work_len = max(n, 2 * (n - 1)) + d_rel + d_diff
        paths = _enumerate_paths(pres, work_len)
        if len(paths) > 20_000:
            raise ValidationError(
                f"presentation too large: {len(paths)} paths up to the working "
                f"length {work_len}; tighten relations or max_path_length")
        quiver_len = None
        basis_len_bound = n - 1

    # group paths into (src, tgt, degree) pieces; columns ordered so that
    # elimination pivots prefer longer paths (short paths survive as basis)
    pieces = {}
    for p in paths:
        src, tgt, deg, arrows = p
        pieces.setdefault((src, tgt, deg), []).append(p)
    piece_data = {}
    for key, plist in pieces.items():
        plist = sorted(plist, key=lambda p: (-len(p[3]), path_name(p[3], p[0])))
        index = {p[3]: i for i, p in enumerate(plist)}
        piece_data[key] = {"paths": plist, "index": index, "rows": [], "pivots": []}

    # ideal spanning set: u * r * v for each relation generator r
    paths_by_tgt = {}
    paths_by_src = {}
    for p in paths:
        paths_by_tgt.setdefault(p[1], []).append(p)
        paths_by_src.setdefault(p[0], []).append(p)

    ideal_vectors = {}
    for expr in pres.relations:
        r_src = pres.arrow(expr[0][1][0]).src
        r_tgt = pres.arrow(expr[0][1][-1]).tgt
        r_deg = sum(pres.arrow(a).degree for a in expr[0][1])
        r_maxlen = max(len(p) for _, p in expr)
        for u in paths_by_tgt.get(r_src, ()):
            for w in paths_by_src.get(r_tgt, ()):
                if len(u[3]) + r_maxlen + len(w[3]) > work_len:
                    continue
                key = (u[0], w[1], u[2] + r_deg + w[2])
                data = piece_data.get(key)
                if data is None:
                    continue
                vec = [field.zero()] * len(data["paths"])
                for coeff, rpath in expr:
                    full = u[3] + rpath + w[3]
                    j = data["index"].get(full)
                    if j is None:
                        raise ValidationError("internal: ideal component outside path table")
                    vec[j] = field.add(vec[j], field.parse(coeff))
                ideal_vectors.setdefault(key, []).append(vec)

    for key, vecs in ideal_vectors.items():
        rows, pivots = rref(field, vecs, len(piece_data[key]["paths"]))
        piece_data[key]["rows"] = rows
        piece_data[key]["pivots"] = pivots

    # finite-dimensionality: every path at or beyond the bound must die
    if not acyclic:
        n = pres.max_path_length
        for key, data in piece_data.items():
            for j, p in enumerate(data["paths"]):
                if len(p[3]) < n:
                    continue
                vec = [field.zero()] * len(data["paths"])
                vec[j] = field.one()
                rem = reduce_mod_span(field, data["rows"], data["pivots"], vec)
                if any(not field.is_zero(x) for x in rem):
                    raise ValidationError(
                        f"not finite-dimensional: path {path_name(p[3])} of length "
                        f"{len(p[3])} >= max_path_length {n} does not lie in the relation ideal")

    # surviving classes: non-pivot columns of length within the basis bound
    survivors = []
    for key, data in piece_data.items():
        pivot_set = set(data["pivots"])
        keep = []
        for j, p in enumerate(data["paths"]):
            if j in pivot_set:
                continue
            if len(p[3]) > basis_len_bound:
                # dead weight beyond the quotient bound (cyclic case only);
                # consistency was already checked above
                continue
            keep.append(p)
        data["survivors"] = keep
        survivors.extend(keep)

    vindex = {v: i for i, v in enumerate(pres.vertices)}
    survivors.sort(key=lambda p: (vindex[p[0]], vindex[p[1]], p[2], len(p[3]),
                                  path_name(p[3], p[0])))

    classes = []
    class_index = {}
    for p in survivors:
        src, tgt, deg, arrows = p
        name = path_name(arrows, src)
        class_index[arrows if arrows else ("", src)] = len(classes)
        classes.append(core.AlgebraClass(name=name, src=src, tgt=tgt,
                                         degree=deg, length=len(arrows), path=arrows))

    def class_of_path(arrows, src):
        key = arrows if arrows else ("", src)
        return class_index.get(key)

    # reduction of an arbitrary path-supported vector to basis class coords
    def reduce_paths(term_list):
        """term_list: [(scalar, path tuple, src vertex)] -> {class index: scalar}."""
        by_piece = {}
        for scal, arrows, src in term_list:
            if field.is_zero(scal):
                continue
            if arrows:
                tgt = pres.arrow(arrows[-1]).tgt
                deg = sum(pres.arrow(a).degree for a in arrows)
                src_v = pres.arrow(arrows[0]).src
            else:
                tgt, deg, src_v = src, 0, src
            key = (src_v, tgt, deg)
            by_piece.setdefault(key, []).append((scal, arrows))
        out = {}
        for key, terms in by_piece.items():
            data = piece_data.get(key)
            if data is None:
                raise ValidationError("internal: path outside path table")
            vec = [field.zero()] * len(data["paths"])
            for scal, arrows in terms:
                j = data["index"].get(arrows)
                if j is None:
                    raise ValidationError(
                        f"internal: path {path_name(arrows, key[0])} exceeds the working "
                        f"length bound {work_len}")
                vec[j] = field.add(vec[j], scal)
            rem = reduce_mod_span(field, data["rows"], data["pivots"], vec)
            for j, x in enumerate(rem):
                if field.is_zero(x):
                    continue
                p = data["paths"][j]
                ci = class_of_path(p[3], p[0])
                if ci is None:
                    raise ValidationError(
                        "internal: reduction produced a non-basis path "
                        f"{path_name(p[3], p[0])}")
                out[ci] = field.add(out.get(ci, field.zero()), x)
        return {k: v for k, v in out.items() if not field.is_zero(v)}

    # differential on the ambient path algebra, by the Leibniz rule
    diff_exprs = {name: [(field.parse(c), p) for c, p in expr]
                  for name, expr in pres.differentials.items()}

    def d_path_terms(arrows, src):
        terms = []
        for i, a in enumerate(arrows):
            dexpr = diff_exprs.get(a)
            if not dexpr:
                continue
            sign_deg = sum(pres.arrow(b).degree for b in arrows[:i])
            sign = field.one() if sign_deg % 2 == 0 else field.neg(field.one())
            for scal, dpath in dexpr:
                terms.append((field.mul(sign, scal), arrows[:i] + dpath + arrows[i:][1:], src))
        return terms

    # d(I) subset I: check each relation generator
    for expr in pres.relations:
        acc = []
        for coeff, rpath in expr:
            scal = field.parse(coeff)
            for s2, arrows, src in d_path_terms(rpath, pres.arrow(rpath[0]).src):
                acc.append((field.mul(scal, s2), arrows, src))
        if acc and reduce_paths(acc):
            raise ValidationError(
                "differential does not preserve the relation ideal: "
                f"d({format_expr(expr)}) is nonzero in the quotient")

    diff_map = {}
    for i, cls in enumerate(classes):
        if cls.length == 0:
            continue
        terms = d_path_terms(cls.path, cls.src)
        img = reduce_paths(terms)
        if img:
            diff_map[i] = img

    algebra = core.DgAlgebra(field, list(pres.vertices), list(pres.arrows),
                             classes, diff_map, pres, acyclic, quiver_len)
    algebra._arrow_class = {
        a.name: reduce_paths([(field.one(), (a.name,), a.src)]) for a in pres.arrows
    }

    # multiplication table via path concatenation + reduction
    mult = {}
    for i, ci in enumerate(classes):
        for j, cj in enumerate(classes):
            if ci.tgt != cj.src:
                continue
            if ci.length == 0:
                prod = {j: field.one()}
            elif cj.length == 0:
                prod = {i: field.one()}
            else:
                prod = reduce_paths([(field.one(), ci.path + cj.path, ci.src)])
            if prod:
                mult[(i, j)] = prod
    algebra._mult = mult

    algebra._validate_structure()
    return algebra
