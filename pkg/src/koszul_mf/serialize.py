"""JSON object files (format version 1).

Layout::

    {"version": 1,
     "tower": {"field": "Q" | {"Fp": p}, "e": int, "u": elem},
     "kind": "one" | "two" | "mf",
     "min_degree": int, "ranks": [int, ...],           # modules only
     "matrices": {"d": [...], "h": [...]}}             # or h1/h2

Kind ``"matrix"`` holds a bare matrix (``"field"``, ``"ranks": [rows, cols]``,
``"matrix"``); the self-test uses it for reproducers.

A polynomial is a list of coefficients (lowest degree first); over Q each
coefficient is ``["num", "den"]`` in decimal, over F_p a plain int in
``[0, p)``. Module matrices are lists (one per degree from ``min_degree``) of
row lists; factorizations store a single matrix per name. Morphism files have
kind ``"map"`` or ``"mf_map"`` and embed their source and target objects.
"""

from __future__ import annotations

import json
from typing import Any

from gmpy2 import mpq

from .dg import DgMorphism, KoszulModule, OneHomotopyModule, TwoHomotopyModule
from .mf import MatrixFactorization, MfMorphism
from .ring import FieldSpec, PolyMatrix
from .ring.poly import t_strip
from .tower import RingTower

VERSION = 1


class ParseError(ValueError):
    """Malformed input; ``where`` is a JSON path or a ``line:col`` position."""

    def __init__(self, message: str, where: str = "$"):
        super().__init__(f"{where}: {message}")
        self.where = where


# -- encoding -----------------------------------------------------------------------


def _enc_elem(F: FieldSpec, x):
    if F.p:
        return int(x)
    x = mpq(x)
    return [str(x.numerator), str(x.denominator)]


def _enc_matrix(M: PolyMatrix) -> list:
    F = M.field
    return [[[_enc_elem(F, c) for c in M.raw(i, j)] for j in range(M.cols)] for i in range(M.rows)]


def _enc_field(F: FieldSpec):
    return "Q" if F.p == 0 else {"Fp": F.p}


def _enc_tower(T: RingTower) -> dict:
    return {"field": _enc_field(T.field), "e": T.e, "u": _enc_elem(T.field, T.u)}


def to_obj(x) -> dict:
    if isinstance(x, KoszulModule):
        names = ["h"] if x.n_homotopies == 1 else ["h1", "h2"]
        mats = {"d": [_enc_matrix(m) for m in x.d]}
        for name, h in zip(names, x.hs):
            mats[name] = [_enc_matrix(m) for m in h]
        return {
            "version": VERSION,
            "tower": _enc_tower(x.tower),
            "kind": "one" if x.n_homotopies == 1 else "two",
            "min_degree": x.min_degree,
            "ranks": list(x.ranks),
            "matrices": mats,
        }
    if isinstance(x, MatrixFactorization):
        return {
            "version": VERSION,
            "tower": _enc_tower(x.tower),
            "kind": "mf",
            "ranks": [x.rank0, x.rank1],
            "matrices": {"d": _enc_matrix(x.d), "h": _enc_matrix(x.h)},
        }
    if isinstance(x, DgMorphism):
        return {
            "version": VERSION,
            "kind": "map",
            "degree": x.degree,
            "source": to_obj(x.source),
            "target": to_obj(x.target),
            "components": {str(j): _enc_matrix(m) for j, m in x.as_dict().items()},
        }
    if isinstance(x, MfMorphism):
        return {
            "version": VERSION,
            "kind": "mf_map",
            "source": to_obj(x.source),
            "target": to_obj(x.target),
            "components": {"phi0": _enc_matrix(x.phi0), "phi1": _enc_matrix(x.phi1)},
        }
    if isinstance(x, PolyMatrix):
        return {"version": VERSION, "kind": "matrix", "field": _enc_field(x.field), "ranks": [x.rows, x.cols], "matrix": _enc_matrix(x)}
    raise TypeError(f"cannot serialize {type(x).__name__}")


def dumps(x, indent: int | None = None) -> str:
    return json.dumps(to_obj(x), indent=indent, sort_keys=True)


def dump(x, path: str):
    with open(path, "w") as f:
        f.write(dumps(x, indent=1))
        f.write("\n")


# -- decoding -----------------------------------------------------------------------


def _req(obj: dict, key: str, where: str, typ=None):
    if not isinstance(obj, dict):
        raise ParseError("expected an object", where)
    if key not in obj:
        raise ParseError(f"missing key {key!r}", where)
    v = obj[key]
    if typ is not None and (not isinstance(v, typ) or (typ is int and isinstance(v, bool))):
        raise ParseError(f"{key!r} must be {typ.__name__}", f"{where}.{key}")
    return v


def _dec_elem(F: FieldSpec, x, where: str):
    if F.p:
        if not isinstance(x, int) or isinstance(x, bool) or not 0 <= x < F.p:
            raise ParseError(f"F_{F.p} coefficient must be an int in [0, {F.p})", where)
        return x
    if isinstance(x, list) and len(x) == 2 and all(isinstance(t, str) for t in x):
        try:
            num, den = int(x[0]), int(x[1])
        except ValueError:
            raise ParseError("rational parts must be decimal strings", where) from None
        if den == 0:
            raise ParseError("zero denominator", where)
        return mpq(num, den)
    raise ParseError('rational coefficient must be ["num", "den"]', where)


def _dec_matrix(F: FieldSpec, data, rows: int, cols: int, where: str) -> PolyMatrix:
    if not isinstance(data, list) or len(data) != rows:
        raise ParseError(f"expected {rows} rows", where)
    entries = []
    for i, row in enumerate(data):
        if not isinstance(row, list) or len(row) != cols:
            raise ParseError(f"expected {cols} entries", f"{where}[{i}]")
        for j, p in enumerate(row):
            w = f"{where}[{i}][{j}]"
            if not isinstance(p, list):
                raise ParseError("polynomial must be a list of coefficients", w)
            entries.append(t_strip([_dec_elem(F, c, f"{w}[{k}]") for k, c in enumerate(p)]))
    return PolyMatrix._make(F, rows, cols, tuple(entries))


def _dec_field(fld, where: str) -> FieldSpec:
    if fld == "Q":
        F = FieldSpec(0)
    elif isinstance(fld, dict) and isinstance(fld.get("Fp"), int):
        try:
            F = FieldSpec(fld["Fp"])
        except ValueError as exc:
            raise ParseError(str(exc), f"{where}.field") from None
    else:
        raise ParseError('field must be "Q" or {"Fp": p}', f"{where}.field")
    return F


def _dec_tower(data, where: str) -> RingTower:
    F = _dec_field(_req(data, "field", where), where)
    e = _req(data, "e", where, int)
    u = _dec_elem(F, _req(data, "u", where), f"{where}.u")
    try:
        return RingTower(F, e, u)
    except ValueError as exc:
        raise ParseError(str(exc), where) from None


def from_obj(data: Any, where: str = "$"):
    if not isinstance(data, dict):
        raise ParseError("top level must be an object", where)
    version = _req(data, "version", where, int)
    if version != VERSION:
        raise ParseError(f"unsupported format version {version}", f"{where}.version")
    kind = _req(data, "kind", where, str)
    if kind == "matrix":
        F = _dec_field(_req(data, "field", where), where)
        shape = _req(data, "ranks", where, list)
        if len(shape) != 2 or not all(isinstance(r, int) and r >= 0 for r in shape):
            raise ParseError("matrix ranks must be [rows, cols]", f"{where}.ranks")
        return _dec_matrix(F, _req(data, "matrix", where), shape[0], shape[1], f"{where}.matrix")
    if kind in ("map", "mf_map"):
        src = from_obj(_req(data, "source", where), f"{where}.source")
        tgt = from_obj(_req(data, "target", where), f"{where}.target")
        comps = _req(data, "components", where, dict)
        F = src.field
        w = f"{where}.components"
        if kind == "mf_map":
            if not isinstance(src, MatrixFactorization) or not isinstance(tgt, MatrixFactorization):
                raise ParseError("mf_map needs factorization endpoints", where)
            p0 = _dec_matrix(F, _req(comps, "phi0", w), tgt.rank0, src.rank0, f"{w}.phi0")
            p1 = _dec_matrix(F, _req(comps, "phi1", w), tgt.rank1, src.rank1, f"{w}.phi1")
            return MfMorphism(src, tgt, p0, p1)
        if not isinstance(src, KoszulModule) or type(src) is not type(tgt):
            raise ParseError("map endpoints must be modules of the same kind", where)
        n = _req(data, "degree", where, int)
        out = {}
        for key, m in comps.items():
            try:
                j = int(key)
            except ValueError:
                raise ParseError("component keys must be integer degrees", w) from None
            out[j] = _dec_matrix(F, m, tgt.rank(j + n), src.rank(j), f"{w}.{key}")
        return DgMorphism(src, tgt, n, out)
    T = _dec_tower(_req(data, "tower", where), f"{where}.tower")
    F = T.field
    mats = _req(data, "matrices", where, dict)
    w = f"{where}.matrices"
    if kind == "mf":
        ranks = _req(data, "ranks", where, list)
        if len(ranks) != 2 or not all(isinstance(r, int) and r >= 0 for r in ranks):
            raise ParseError("mf ranks must be [rank0, rank1]", f"{where}.ranks")
        r0, r1 = ranks
        d = _dec_matrix(F, _req(mats, "d", w), r1, r0, f"{w}.d")
        h = _dec_matrix(F, _req(mats, "h", w), r0, r1, f"{w}.h")
        return MatrixFactorization(T, d, h)
    if kind not in ("one", "two"):
        raise ParseError(f"unknown kind {kind!r}", f"{where}.kind")
    n0 = _req(data, "min_degree", where, int)
    ranks = _req(data, "ranks", where, list)
    if not all(isinstance(r, int) and not isinstance(r, bool) and r >= 0 for r in ranks):
        raise ParseError("ranks must be nonnegative ints", f"{where}.ranks")
    rk = lambda i: ranks[i] if 0 <= i < len(ranks) else 0  # noqa: E731
    names = ["h"] if kind == "one" else ["h1", "h2"]

    def per_degree(name, shape):
        seq = _req(mats, name, w, list)
        if len(seq) != len(ranks):
            raise ParseError(f"expected {len(ranks)} matrices (one per degree)", f"{w}.{name}")
        return [_dec_matrix(F, m, *shape(i), f"{w}.{name}[{i}]") for i, m in enumerate(seq)]

    d = per_degree("d", lambda i: (rk(i + 1), rk(i)))
    hs = [per_degree(name, lambda i: (rk(i - 1), rk(i))) for name in names]
    cls = OneHomotopyModule if kind == "one" else TwoHomotopyModule
    return cls(T, n0, ranks, d, hs)


def loads(text: str):
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, f"line {exc.lineno} column {exc.colno}") from None
    return from_obj(data)


def load(path: str):
    with open(path) as f:
        return loads(f.read())
