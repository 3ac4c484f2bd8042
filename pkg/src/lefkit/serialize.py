"""JSON documents for every instance type.

Every top-level document carries ``"lefkit_schema": 1`` and a ``"kind"``
naming its type.  Rationals are strings "a/b" (or "a"); matrices are lists
of rows; graded blocks are dicts keyed by the degree as a string.
"""

from __future__ import annotations

import json
from fractions import Fraction

from .errors import ContractError
from .graded import GradedMap, GradedSpace
from .lefschetz import LefschetzModule
from .ratlinalg import RatMatrix, qstr

SCHEMA = 1


def dumps(doc) -> str:
    """Canonical text: sorted keys, two-space indent, trailing newline."""
    return json.dumps(doc, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


# -- scalar helpers


def q(x, where="value") -> Fraction:
    if isinstance(x, bool) or isinstance(x, float):
        raise ContractError(f"{where}: rationals must be strings or integers, got {x!r}")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        try:
            return Fraction(x.strip())
        except (ValueError, ZeroDivisionError):
            raise ContractError(f"{where}: not a rational {x!r}") from None
    raise ContractError(f"{where}: expected a rational, got {type(x).__name__}")


def vec_to_json(v) -> list:
    return [qstr(x) for x in v]


def vec_from_json(v, where="vector") -> tuple:
    if not isinstance(v, list):
        raise ContractError(f"{where}: expected a list")
    return tuple(q(x, f"{where}[{k}]") for k, x in enumerate(v))


def matrix_from_json(m, ncols=None, where="matrix") -> RatMatrix:
    if isinstance(m, RatMatrix):
        return m
    if not isinstance(m, list) or any(not isinstance(r, list) for r in m):
        raise ContractError(f"{where}: expected a list of rows")
    rows = [vec_from_json(r, f"{where}[{k}]") for k, r in enumerate(m)]
    if ncols is None:
        if not rows:
            raise ContractError(f"{where}: cannot infer the width of an empty matrix")
        ncols = len(rows[0])
    if any(len(r) != ncols for r in rows):
        raise ContractError(f"{where}: rows must have {ncols} entries")
    return RatMatrix(rows, ncols)


def _int(x, where):
    if isinstance(x, bool) or not isinstance(x, int):
        raise ContractError(f"{where}: expected an integer")
    return x


def _degkey(k, where):
    try:
        return int(k)
    except (TypeError, ValueError):
        raise ContractError(f"{where}: degree key {k!r} is not an integer") from None


def dims_from_json(d, where="dims") -> dict:
    if not isinstance(d, dict):
        raise ContractError(f"{where}: expected an object")
    out = {}
    for k, v in d.items():
        v = _int(v, f"{where}.{k}")
        if v < 0:
            raise ContractError(f"{where}.{k}: negative dimension")
        if v:
            out[_degkey(k, where)] = v
    return out


def dims_to_json(sp) -> dict:
    dims = sp.dims if isinstance(sp, GradedSpace) else sp
    return {str(k): v for k, v in sorted(dims.items())}


def blocks_from_json(d, src: GradedSpace, tgt: GradedSpace, shift: int, where: str) -> dict:
    if d is None:
        return {}
    if not isinstance(d, dict):
        raise ContractError(f"{where}: expected an object of blocks")
    out = {}
    for k, m in d.items():
        i = _degkey(k, where)
        M = matrix_from_json(m, src.dim(i), f"{where}.{k}")
        if M.nrows != tgt.dim(i + shift):
            raise ContractError(f"{where}.{k}: expected {tgt.dim(i + shift)} rows")
        out[i] = M
    return out


def blocks_to_json(blocks: dict) -> dict:
    return {str(i): m.to_json() for i, m in sorted(blocks.items())}


def map_to_json(f: GradedMap) -> dict:
    return blocks_to_json({i: m for i, m in f.blocks.items() if m.nrows and m.ncols})


def basis_to_json(basis: dict) -> dict:
    """Graded list of column vectors."""
    return {str(i): [vec_to_json(v) for v in vs] for i, vs in sorted(basis.items())}


def basis_from_json(d, sp: GradedSpace, where="basis") -> dict:
    if d is None:
        return {}
    if not isinstance(d, dict):
        raise ContractError(f"{where}: expected an object")
    out = {}
    for k, vs in d.items():
        i = _degkey(k, where)
        if not isinstance(vs, list):
            raise ContractError(f"{where}.{k}: expected a list of vectors")
        cols = [vec_from_json(v, f"{where}.{k}[{a}]") for a, v in enumerate(vs)]
        if any(len(c) != sp.dim(i) for c in cols):
            raise ContractError(f"{where}.{k}: vectors must have {sp.dim(i)} entries")
        out[i] = cols
    return out


def _need(doc, key, where):
    if not isinstance(doc, dict):
        raise ContractError(f"{where}: expected an object")
    if key not in doc:
        raise ContractError(f"{where}: missing field {key!r}")
    return doc[key]


def _header(kind: str) -> dict:
    return {"lefkit_schema": SCHEMA, "kind": kind}


def check_header(doc) -> str:
    if not isinstance(doc, dict):
        raise ContractError("document: top level must be an object")
    if doc.get("lefkit_schema") != SCHEMA:
        raise ContractError(f"document: field 'lefkit_schema' must be {SCHEMA}")
    kind = doc.get("kind", "empty")
    if not isinstance(kind, str):
        raise ContractError("document: 'kind' must be a string")
    return kind


# -- Lefschetz modules


def module_to_json(M: LefschetzModule) -> dict:
    return {"n": M.n, "dims": dims_to_json(M.space), "L": map_to_json(M.L)}


def module_from_json(d, where="module") -> LefschetzModule:
    n = _int(_need(d, "n", where), f"{where}.n")
    sp = GradedSpace(dims_from_json(_need(d, "dims", where), f"{where}.dims"))
    L = GradedMap(sp, sp, 1, blocks_from_json(d.get("L"), sp, sp, 1, f"{where}.L"))
    return LefschetzModule(sp, L, n)


def pairing_to_json(P) -> dict:
    return P.to_json()


def pairing_from_json(d, sp: GradedSpace, where="pairing"):
    from .pairing import GradedPairing
    t = _int(_need(d, "total", where), f"{where}.total")
    raw = d.get("blocks") or {}
    if not isinstance(raw, dict):
        raise ContractError(f"{where}.blocks: expected an object")
    blocks = {}
    for k, m in raw.items():
        i = _degkey(k, f"{where}.blocks")
        M = matrix_from_json(m, sp.dim(t - i), f"{where}.blocks.{k}")
        if M.nrows != sp.dim(i):
            raise ContractError(f"{where}.blocks.{k}: expected {sp.dim(i)} rows")
        blocks[i] = M
    return GradedPairing(sp, t, blocks)


# -- exact sequences and filtered modules


def exact_sequence_to_json(s) -> dict:
    doc = _header("exact_sequence")
    doc.update({"U": module_to_json(s.U), "V": module_to_json(s.V), "W": module_to_json(s.W),
                "eps": map_to_json(s.eps), "eta": map_to_json(s.eta)})
    return doc


def exact_sequence_from_json(doc):
    from .splitting import ExactSequence
    U = module_from_json(_need(doc, "U", "U"), "U")
    V = module_from_json(_need(doc, "V", "V"), "V")
    W = module_from_json(_need(doc, "W", "W"), "W")
    eps = GradedMap(U.space, V.space, 0, blocks_from_json(doc.get("eps"), U.space, V.space, 0, "eps"))
    eta = GradedMap(V.space, W.space, 0, blocks_from_json(doc.get("eta"), V.space, W.space, 0, "eta"))
    return ExactSequence(U, V, W, eps, eta)


def filtered_to_json(F, pairing=None, eps=None) -> dict:
    doc = _header("filtered")
    doc.update(module_to_json(F.V))
    doc["F1"] = basis_to_json({i: v for i, v in F.F1.items() if v})
    doc["F2"] = basis_to_json({i: v for i, v in F.F2.items() if v})
    if pairing is not None:
        doc["pairing"] = pairing.to_json()
    if eps is not None:
        doc["eps"] = map_to_json(eps)
    return doc


def filtered_from_json(doc):
    """(FilteredLefschetzModule, pairing or None, eps or None)."""
    from .splitting import FilteredLefschetzModule
    V = module_from_json(doc, "document")
    sp = V.space
    F = FilteredLefschetzModule(V, basis_from_json(doc.get("F1"), sp, "F1"),
                                basis_from_json(doc.get("F2"), sp, "F2"))
    P = pairing_from_json(doc["pairing"], sp) if "pairing" in doc else None
    eps = GradedMap(sp, sp, 1, blocks_from_json(doc["eps"], sp, sp, 1, "eps")) if "eps" in doc else None
    return F, P, eps


def lefschetz_doc(M: LefschetzModule, pairing=None) -> dict:
    doc = _header("lefschetz")
    doc.update(module_to_json(M))
    if pairing is not None:
        doc["pairing"] = pairing.to_json()
    return doc


def lefschetz_from_json(doc):
    M = module_from_json(doc, "document")
    P = pairing_from_json(doc["pairing"], M.space) if "pairing" in doc else None
    return M, P


# -- local fibers


def fiber_to_json(f) -> dict:
    doc = _header("fiber")
    doc.update(f.to_json())
    return doc


def _fiber_body(d, where):
    from .local import SpecialFiberData
    n = _int(_need(d, "n", where), f"{where}.n")
    hi = dims_from_json(_need(d, "A_high", where), f"{where}.A_high")
    lo = dims_from_json(_need(d, "A_low", where), f"{where}.A_low")
    H = GradedSpace(hi)
    Lw = GradedSpace({n + 1 - k: v for k, v in lo.items()})
    Al = GradedSpace(lo)

    def mats(key, ncols_of, nrows_of):
        raw = d.get(key) or {}
        if not isinstance(raw, dict):
            raise ContractError(f"{where}.{key}: expected an object")
        out = {}
        for k, m in raw.items():
            i = _degkey(k, f"{where}.{key}")
            M = matrix_from_json(m, ncols_of(i), f"{where}.{key}.{k}")
            if M.nrows != nrows_of(i):
                raise ContractError(f"{where}.{key}.{k}: expected {nrows_of(i)} rows")
            out[i] = M
        return out

    conn = mats("conn", Lw.dim, H.dim)
    Lh = mats("L_high", H.dim, lambda p: H.dim(p + 1))
    Ll = mats("L_low", Al.dim, lambda k: Al.dim(k - 1))
    pair = mats("pair", Al.dim, H.dim)
    cap = mats("cap", H.dim, lambda q: Al.dim(n - q))
    return SpecialFiberData(n, hi, lo, conn, Lh, Ll, pair, cap)


def fiber_from_json(doc):
    return _fiber_body(doc, "document")


def cycles_to_json(cycles: dict) -> dict:
    return {name: {"p": p, "coords": vec_to_json(c)} for name, (p, c) in sorted(cycles.items())}


def cycles_from_json(d, where="cycles") -> dict:
    if d is None:
        return {}
    if not isinstance(d, dict):
        raise ContractError(f"{where}: expected an object")
    out = {}
    for name, c in d.items():
        p = _int(_need(c, "p", f"{where}.{name}"), f"{where}.{name}.p")
        out[name] = (p, vec_from_json(_need(c, "coords", f"{where}.{name}"), f"{where}.{name}.coords"))
    return out


def local_model_to_json(m, cycles=None) -> dict:
    doc = _header("local_model")
    doc.update(m.fiber.to_json())
    doc.update({
        "Zhat": dims_to_json(m.Zhat),
        "generic": dims_to_json(m.generic),
        "i_star": map_to_json(m.i_star),
        "omega": map_to_json(m.omega),
        "eta_restrict": map_to_json(m.eta_restrict),
        "zpair": blocks_to_json(m.zpair.blocks),
    })
    if cycles:
        doc["cycles"] = cycles_to_json(cycles)
    return doc


def local_model_from_json(doc):
    """(LocalModel, named cycles)."""
    from .local import LocalModel
    f = _fiber_body(doc, "document")
    Z = GradedSpace(dims_from_json(_need(doc, "Zhat", "document"), "Zhat"))
    gen = GradedSpace(dims_from_json(doc.get("generic", {}), "generic"))
    n = f.n
    m = LocalModel(
        f, Z.dims,
        blocks_from_json(doc.get("i_star"), f.low, Z, 0, "i_star"),
        blocks_from_json(doc.get("omega"), Z, f.A_high, 0, "omega"),
        blocks_from_json(doc.get("eta_restrict"), Z, gen, 0, "eta_restrict"),
        gen.dims,
        _pair_blocks(doc.get("zpair"), Z, n + 1, "zpair"),
    )
    return m, cycles_from_json(doc.get("cycles"))


def _pair_blocks(d, sp, total, where):
    if d is None:
        return {}
    out = {}
    for k, mm in d.items():
        i = _degkey(k, where)
        M = matrix_from_json(mm, sp.dim(total - i), f"{where}.{k}")
        if M.nrows != sp.dim(i):
            raise ContractError(f"{where}.{k}: expected {sp.dim(i)} rows")
        out[i] = M
    return out


# -- global data


def arakelov_to_json(d, cycles=None) -> dict:
    doc = _header("arakelov")
    doc.update({
        "n": d.n,
        "dims": dims_to_json(d.Chbar),
        "L": map_to_json(d.L),
        "pairing": d.pair.to_json(),
        "F1": basis_to_json({i: v for i, v in d.F1.items() if v}),
        "B": basis_to_json({i: v for i, v in d.B.items() if v}),
        "eps_class": vec_to_json(d.eps_class),
        "eps_op": map_to_json(d.eps_op),
        "generic_dims": dims_to_json(d.generic),
        "gen_proj": map_to_json(d.gen_proj),
        "class_dims": dims_to_json(d.classes),
        "cls": map_to_json(d.cls),
        "places": [f.to_json() for f in d.places],
    })
    if cycles:
        doc["cycles"] = cycles_to_json(cycles)
    return doc


def arakelov_from_json(doc):
    """(ArakelovData, named cycles of the generic fiber)."""
    from .arakelov import ArakelovData
    n = _int(_need(doc, "n", "document"), "n")
    sp = GradedSpace(dims_from_json(_need(doc, "dims", "document")))
    gen = GradedSpace(dims_from_json(doc.get("generic_dims", {}), "generic_dims"))
    cl = GradedSpace(dims_from_json(doc.get("class_dims", {}), "class_dims"))
    places = doc.get("places") or []
    if not isinstance(places, list):
        raise ContractError("places: expected a list")
    d = ArakelovData(
        n, sp.dims,
        blocks_from_json(doc.get("L"), sp, sp, 1, "L"),
        pairing_from_json(_need(doc, "pairing", "document"), sp),
        basis_from_json(doc.get("F1"), sp, "F1"),
        basis_from_json(doc.get("B"), sp, "B"),
        vec_from_json(_need(doc, "eps_class", "document"), "eps_class"),
        blocks_from_json(doc.get("eps_op"), sp, sp, 1, "eps_op"),
        gen.dims,
        blocks_from_json(doc.get("gen_proj"), sp, gen, 0, "gen_proj"),
        cl.dims,
        blocks_from_json(doc.get("cls"), gen, cl, 0, "cls"),
        tuple(_fiber_body(f, f"places[{k}]") for k, f in enumerate(places)),
    )
    return d, cycles_from_json(doc.get("cycles"))


def empty_doc() -> dict:
    return {"lefkit_schema": SCHEMA}


LOADERS = {
    "empty": lambda doc: None,
    "lefschetz": lefschetz_from_json,
    "exact_sequence": exact_sequence_from_json,
    "filtered": filtered_from_json,
    "fiber": fiber_from_json,
    "local_model": local_model_from_json,
    "arakelov": arakelov_from_json,
}


def load(doc):
    """(kind, object) from a parsed document."""
    kind = check_header(doc)
    if kind not in LOADERS:
        raise ContractError(f"document: unknown kind {kind!r}")
    return kind, LOADERS[kind](doc)


# -- strata of a strictly semistable fiber


def strata_to_json(s) -> dict:
    doc = _header("strata")
    doc["n"] = s.n
    doc["components"] = [dict(module_to_json(c.module), pairing=c.pairing.to_json()) for c in s.components]
    doc["doubles"] = [
        dict(module_to_json(st.module), i=i, j=j, pairing=st.pairing.to_json(),
             restrict=[map_to_json(r) for r in s.restrict[(i, j)]],
             gysin=[map_to_json(g) for g in s.gysin[(i, j)]])
        for (i, j), st in sorted(s.doubles.items())
    ]
    return doc


def strata_from_json(doc):
    from .graded import GradedMap
    from .models import StrataData, Stratum
    n = _int(_need(doc, "n", "document"), "n")
    comps = []
    for k, c in enumerate(doc.get("components") or []):
        M = module_from_json(c, f"components[{k}]")
        comps.append(Stratum(M, pairing_from_json(_need(c, "pairing", f"components[{k}]"), M.space,
                                                  f"components[{k}].pairing")))
    doubles, res, gys = {}, {}, {}
    for k, c in enumerate(doc.get("doubles") or []):
        w = f"doubles[{k}]"
        i, j = _int(_need(c, "i", w), f"{w}.i"), _int(_need(c, "j", w), f"{w}.j")
        if not (0 <= i < len(comps) and 0 <= j < len(comps)):
            raise ContractError(f"{w}: component index out of range")
        M = module_from_json(c, w)
        doubles[(i, j)] = Stratum(M, pairing_from_json(_need(c, "pairing", w), M.space, f"{w}.pairing"))
        r = _need(c, "restrict", w)
        g = _need(c, "gysin", w)
        if not (isinstance(r, list) and len(r) == 2 and isinstance(g, list) and len(g) == 2):
            raise ContractError(f"{w}: 'restrict' and 'gysin' must be pairs of block maps")
        Yi, Yj = comps[i].module.space, comps[j].module.space
        res[(i, j)] = (GradedMap(Yi, M.space, 0, blocks_from_json(r[0], Yi, M.space, 0, f"{w}.restrict[0]")),
                       GradedMap(Yj, M.space, 0, blocks_from_json(r[1], Yj, M.space, 0, f"{w}.restrict[1]")))
        gys[(i, j)] = (GradedMap(M.space, Yi, 1, blocks_from_json(g[0], M.space, Yi, 1, f"{w}.gysin[0]")),
                       GradedMap(M.space, Yj, 1, blocks_from_json(g[1], M.space, Yj, 1, f"{w}.gysin[1]")))
    return StrataData(n, comps, doubles, res, gys)


LOADERS["strata"] = strata_from_json
