"""Command-line front door.  JSON in, JSON out; errors are data.

Output is always ``{"status": ..., "payload": ..., "diagnostics": [...]}``
with exit code 0 (ok), 2 (hypothesis_violation) or 3 (contract_error).
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction
from pathlib import Path

from . import arakelov as ara
from . import lefschetz as lef
from . import local as loc
from . import models
from . import pairing as pr
from . import serialize as ser
from . import splitting as spl
from .errors import ContractError, HypothesisViolation
from .ratlinalg import qstr

EXIT = {"ok": 0, "hypothesis_violation": 2, "contract_error": 3}


class _ArgError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _ArgError(message)


def fixture_dir() -> Path:
    env = os.environ.get("LEFKIT_FIXTURES")
    return Path(env) if env else Path(__file__).parent / "fixtures"


def resolve(path: str) -> Path:
    """Paths are taken as given, then looked up by name in the fixture directory."""
    p = Path(path)
    if p.is_file():
        return p
    alt = fixture_dir() / p.name
    if alt.is_file():
        return alt
    raise ContractError(f"{path}: no such file (also looked in the fixture directory)")


def read_doc(path: str):
    p = resolve(path)
    text = p.read_text(encoding="utf-8")
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise ContractError(f"{p.name}: malformed JSON at line {e.lineno}, column {e.colno}: {e.msg}") from None
    return ser.load(doc)


def _expect(kind, obj, allowed, what):
    if kind not in allowed:
        raise ContractError(f"{what} needs a document of kind {' or '.join(allowed)}, got {kind!r}")
    return obj


# -- rendering helpers (serialization only)


def _basis(b):
    return ser.basis_to_json({i: v for i, v in b.items()}) if b is not None else None


def _map(f):
    return ser.map_to_json(f)


def _vec(v):
    return ser.vec_to_json(v)


# -- argument helpers


def parse_vector(text: str) -> tuple:
    try:
        return tuple(Fraction(x.strip()) for x in text.split(",") if x.strip())
    except (ValueError, ZeroDivisionError):
        raise ContractError(f"cannot parse coordinates {text!r}") from None


def parse_cycle(text: str, named: dict, where: str):
    """A name from the document, or "p:c1,c2,..."."""
    if text is None:
        raise ContractError(f"{where} is required")
    if text in named:
        p, c = named[text]
        return p, c
    if ":" in text:
        head, tail = text.split(":", 1)
        try:
            p = int(head)
        except ValueError:
            raise ContractError(f"{where}: bad degree in {text!r}") from None
        return p, parse_vector(tail)
    raise ContractError(f"{where}: unknown cycle {text!r}; known: {sorted(named)}")


# -- subcommands


def cmd_validate(a):
    kind, obj = read_doc(a.file)
    payload = {"kind": kind}
    return payload, []


def _module(a):
    kind, obj = read_doc(a.file)
    if kind == "filtered":
        return obj[0].V, obj[1]
    M, P = _expect(kind, obj, ("lefschetz",), "lefschetz")
    return M, P


def cmd_lefschetz(a):
    M, _ = _module(a)
    if a.op == "check":
        r = lef.check_hard_lefschetz(M)
        return {"holds": r.holds, "failures": list(r.failures)}, []
    D = lef.primitive_parts(M)
    if a.op == "primitive":
        return {"primitive": _basis(D.primitive_bases),
                "basis": {str(i): m.to_json() for i, m in sorted(D.basis.items())}}, []
    Lam = lef.lambda_operator(M, D)
    defect = lef.commutator_defect(M, Lam)
    return {"Lambda": _map(Lam), "sl2_holds": all(m.is_zero() for m in defect.values())}, []


def cmd_split(a):
    kind, obj = read_doc(a.file)
    if a.op == "two-step":
        seq = _expect(kind, obj, ("exact_sequence",), "split two-step")
        return {"alpha": _map(spl.two_step_lift(seq))}, []
    if a.op == "lambda":
        seq = _expect(kind, obj, ("exact_sequence",), "split lambda")
        alpha, beta = spl.lambda_equivariant_split(seq)
        return {"alpha": _map(alpha), "beta": _map(beta)}, []
    F, _, _ = _expect(kind, obj, ("filtered",), "split three-step")
    S = spl.three_step_split(F)
    return {"alpha0": _map(S.alpha0), "alpha1": _map(S.alpha1), "alpha2": _map(S.alpha2),
            "beta": _map(S.beta), "block_form": spl.verify_block_form(F, S)}, []


def cmd_pairing(a):
    kind, obj = read_doc(a.file)
    if a.op in ("adjoint", "hodge") and kind == "lefschetz":
        M, P = obj
        if P is None:
            raise ContractError("document has no pairing")
        if a.op == "adjoint":
            return {"adjoint": pr.check_adjoint(P, M.L)}, []
        return pr.hodge_index_check(M, P).to_json(), []
    F, P, eps = _expect(kind, obj, ("filtered",), f"pairing {a.op}")
    if P is None:
        raise ContractError("document has no pairing")
    if a.op == "adjoint":
        return {"adjoint": pr.check_adjoint(P, F.V.L)}, []
    if a.op == "blockform":
        S = spl.three_step_split(F)
        return {"block_form": pr.block_form_check(F, P, S)}, []
    if a.op == "hodge":
        return pr.hodge_equivalence_check(F, P).to_json(), []
    if eps is None:
        raise ContractError("pairing twist needs an 'eps' operator in the document")
    c = pr.find_polarization_twist(F, P, eps)
    return {"c": qstr(c)}, []


def _local(a):
    kind, obj = read_doc(a.file)
    if kind == "strata":
        return models.bgs_assemble(obj).fiber, None, {}
    if kind == "fiber":
        return obj, None, {}
    m, cycles = _expect(kind, obj, ("local_model",), f"local {a.op}")
    return m.fiber, m, cycles


def cmd_local(a):
    f, m, cycles = _local(a)
    if a.op == "vanishing":
        vn = loc.vanishing_nearby(f)
        return {"A_phi": _basis(vn.A_phi), "A_psi": _basis(vn.A_psi), "psi_low": _basis(vn.psi_low),
                "phi_low_harmonic": _basis(vn.phi_low_harmonic)}, []
    if a.op == "harmonic":
        return {"harmonic": _basis(loc.harmonic_split(f))}, []
    if a.op == "report":
        r = loc.conjecture_report(f)
        return dict(r.to_json(), all_hold=r.all_hold), []
    if m is None:
        raise ContractError(f"local {a.op} needs a local_model document")
    if a.op == "height":
        z = m.cycle(*parse_cycle(a.z, cycles, "--z"))
        w = m.cycle(*parse_cycle(a.w, cycles, "--w"))
        return {"value": qstr(loc.local_height(m, z, w))}, []
    z = m.cycle(*parse_cycle(a.cycle, cycles, "--cycle"))
    if a.op == "lift":
        lift = loc.arakelov_lift(m, z)
        return {"p": z.p, "lift": _vec(lift.coords), "correction": _vec(loc.arakelov_correction(m, z))
                if f.low_dim(z.p) else [], "admissible": loc.is_admissible(m, lift)}, []
    lift = loc.bb_lift(m, z)
    return {"p": z.p, "lift": _vec(lift.coords)}, []


def _fmt_multiple(v, base, name):
    """Render v as "c·name" when v = c·base."""
    r = ara._ratio(v, base)
    return f"{qstr(r)}·{name}" if r is not None else _vec(v)


def cmd_global(a):
    kind, obj = read_doc(a.file)
    d, cycles = _expect(kind, obj, ("arakelov",), f"global {a.op}")
    if a.op == "equiv":
        return ara.gs_beilinson_equivalence(d).to_json(), []
    if a.op in ("divisors", "zerocycles"):
        s = ara.DivisorSlice.from_data(d)
        if a.op == "divisors":
            ds = ara.divisor_decomposition(s)
            return {"h": qstr(ds.h), "alpha0": ds.alpha0.to_json(), "alpha1": ds.alpha1.to_json(),
                    "alpha2": ds.alpha2.to_json(), "index_signature": list(ds.index_signature),
                    "local_index": [ara.local_index_check(f) for f in d.places]}, []
        zs = ara.zero_cycle_decomposition(s)
        return {"C1": [_vec(v) for v in zs.C1], "Cn": [_vec(v) for v in zs.Cn],
                "BC": [_vec(v) for v in zs.BC], "l_injective": zs.l_injective,
                "direct_sum": zs.direct_sum, "alpha0_top": _vec(zs.alpha0_top)}, []
    S = ara.decompose(d)
    if a.op == "decompose":
        out = {"alpha0": _map(S.splitting.alpha0), "alpha1": _map(S.splitting.alpha1),
               "alpha2": _map(S.splitting.alpha2), "beta": _map(S.splitting.beta)}
        if S.h_L is not None:
            out["h_L"] = qstr(S.h_L)
            out["beta_XK"] = _fmt_multiple(S.beta_XK(), d.eps_class, "X_eps")
            out["L0"] = _map(S.L0)
            X = d.fundamental_class()
            out["c1_L0_top"] = qstr(d.pair.value(0, X, S.L0.power_block(0, d.n + 1) @ X))
        return out, []
    if a.op == "llift":
        p, z = parse_cycle(a.cycle, cycles, "--cycle")
        r = ara.l_lift_full(d, S, p, z)
        return {"p": p, "lift": _vec(r.value), "y0": _vec(r.y0), "y1": _vec(r.y1)}, []
    p, z1 = parse_cycle(a.z, cycles, "--z")
    q, z2 = parse_cycle(a.w, cycles, "--w")
    if p + q != d.n + 1:
        raise ContractError("global lpair needs complementary degrees")
    r = ara.l_pairing_report(d, S, p, z1, z2)
    if not r.agree:
        raise HypothesisViolation(f"L-pairing {r.value} differs from the height pairing {r.bb_value}")
    return {"value": qstr(r.value), "bb_value": qstr(r.bb_value)}, []


def _json_arg(text, where):
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        raise ContractError(f"{where}: malformed JSON at column {e.colno}: {e.msg}") from None


def cmd_gen(a):
    if a.op == "pn":
        M, P = models.projective_space_module(a.n)
        return ser.lefschetz_doc(M, P), []
    if a.op == "graph":
        if a.name:
            g = {"cyc2": models.cyc2_graph, "chain3": models.chain3_graph}.get(a.name)
            if g is None:
                raise ContractError(f"unknown graph {a.name!r}")
            g = g()
        else:
            if a.matrix is None:
                raise ContractError("gen graph needs a name or --matrix")
            M = ser.matrix_from_json(_json_arg(a.matrix, "--matrix"), where="--matrix")
            degs = parse_vector(a.degrees) if a.degrees else (1,) * M.nrows
            g = models.ReductionGraph(M, degs)
        _, m = models.reduction_graph_model(g)
        return ser.local_model_to_json(m, models.graph_cycles(g)), []
    if a.op == "toy":
        nt = _json_arg(a.nt, "--nt") if a.nt else []
        d = models.arithmetic_surface_toy(Fraction(a.dK), Fraction(a.Lsq),
                                          ser.matrix_from_json(nt, len(nt[0]) if nt else 0, "--nt"))
        return ser.arakelov_to_json(d, models.toy_cycles(d)), []
    seed = a.seed if a.seed is not None else 0
    if a.kind == "lefschetz":
        return ser.lefschetz_doc(models.random_lefschetz_module(seed)), []
    inst = models.random_filtered_instance(seed, p_flip=a.p_flip)
    if a.kind == "arakelov":
        return ser.arakelov_to_json(models.arakelov_from_filtered(inst.filtered, inst.pairing, inst.eps)), []
    return ser.filtered_to_json(inst.filtered, inst.pairing, inst.eps), []


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="lefkit", description="Lefschetz modules, canonical splittings and heights.")
    sub = p.add_subparsers(dest="group", required=True)

    def common(sp, cycles=False):
        sp.add_argument("file")
        sp.add_argument("--out")
        if cycles:
            sp.add_argument("--cycle")
            sp.add_argument("--z")
            sp.add_argument("--w")

    v = sub.add_parser("validate")
    common(v)
    v.set_defaults(fn=cmd_validate, op="validate")
    for name, ops, fn, cyc in (
        ("lefschetz", ("check", "primitive", "lambda"), cmd_lefschetz, False),
        ("split", ("two-step", "lambda", "three-step"), cmd_split, False),
        ("pairing", ("adjoint", "blockform", "hodge", "twist"), cmd_pairing, False),
        ("local", ("vanishing", "harmonic", "report", "lift", "height", "bblift"), cmd_local, True),
        ("global", ("decompose", "llift", "lpair", "equiv", "divisors", "zerocycles"), cmd_global, True),
    ):
        g = sub.add_parser(name)
        gs = g.add_subparsers(dest="op", required=True)
        for op in ops:
            common(gs.add_parser(op), cyc)
        g.set_defaults(fn=fn)
    g = sub.add_parser("gen")
    gs = g.add_subparsers(dest="op", required=True)
    x = gs.add_parser("pn")
    x.add_argument("--n", type=int, required=True)
    x = gs.add_parser("graph")
    x.add_argument("name", nargs="?")
    x.add_argument("--matrix")
    x.add_argument("--degrees")
    x = gs.add_parser("toy")
    x.add_argument("--dK", default="2")
    x.add_argument("--Lsq", default="6")
    x.add_argument("--nt", default="[[-1]]")
    x = gs.add_parser("random")
    x.add_argument("--kind", choices=("filtered", "lefschetz", "arakelov"), default="filtered")
    x.add_argument("--p-flip", type=float, default=0.3)
    for x in gs.choices.values():
        x.add_argument("--seed", type=int)
        x.add_argument("--out")
    g.set_defaults(fn=cmd_gen)
    return p


def result(status, payload, diagnostics) -> dict:
    out = {"status": status, "diagnostics": list(diagnostics)}
    if status == "ok":
        out["payload"] = payload
    return out


def execute(argv) -> tuple[int, dict, object]:
    """(exit code, CommandResult, args or None) without touching stdout."""
    args = None
    try:
        args = build_parser().parse_args(argv)
        if args.group != "gen" and getattr(args, "seed", None) is not None and args.seed < 0:
            raise ContractError("--seed must be non-negative")
        payload, diags = args.fn(args)
        res = result("ok", payload, diags)
    except _ArgError as e:
        res = result("contract_error", None, [f"usage: {e}"])
    except HypothesisViolation as e:
        res = result("hypothesis_violation", None, [f"{type(e).__name__}: {d}" for d in e.diagnostics])
    except ContractError as e:
        res = result("contract_error", None, [f"{type(e).__name__}: {d}" for d in e.diagnostics])
    except (OSError, UnicodeDecodeError) as e:
        res = result("contract_error", None, [f"cannot read input: {e}"])
    return EXIT[res["status"]], res, args


def run(argv=None, stdout=None) -> int:
    code, res, args = execute(sys.argv[1:] if argv is None else argv)
    out = stdout or sys.stdout
    text = ser.dumps(res)
    out.write(text)
    if args is not None and getattr(args, "out", None) and res["status"] == "ok":
        Path(args.out).write_text(ser.dumps(res["payload"]), encoding="utf-8")
    return code


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
