"""Command-line front end: JSON workspaces in, JSON (or text) reports out.

Exit codes: 0 verified, 1 property failed, 2 input or usage error.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field as dc_field
from importlib import resources
from pathlib import Path as FsPath

from .algebra import AlgebraError, Quiver, RelationSet, bound_quiver_algebra, structure_algebra
from .exactla import ExactMatrix, FieldSpec
from .derived import WindowError
from .homology import BoundedComplex, ComplexError, ext_dim
from .repmod import (
    FdModule,
    ModuleError,
    canonical_modules,
    decompose,
    direct_sum,
    end_algebra,
    rep_module,
)

COMMANDS = ("check-tilting", "good-tilt", "ext", "tor", "endo", "class", "miyashita", "lemma13", "dagger",
            "derived-counit", "derived-unit", "e-member", "classical-probe", "equivalence")


class WorkspaceError(ValueError):
    pass


class UsageError(ValueError):
    pass


@dataclass
class Workspace:
    field: FieldSpec
    algebra: object
    modules: dict
    complexes: dict
    tilting: dict = dc_field(default_factory=dict)
    path: str = ""
    contexts: dict = dc_field(default_factory=dict, repr=False)


def _module_from_json(name: str, desc: dict, alg, modules: dict) -> FdModule:
    kind = desc.get("kind", "rep")
    where = f"modules.{name}"
    if kind == "rep":
        m = rep_module(alg, desc.get("vertex_dims", {}), desc.get("arrow_mats", {}), name=name)
    elif kind == "action":
        mats = desc.get("matrices")
        if not isinstance(mats, list) or len(mats) != alg.dim:
            raise WorkspaceError(f"{where}: need {alg.dim} action matrices")
        d = int(desc.get("dim", len(mats[0]) if mats and mats[0] else 0))
        arr = alg.field.zeros((alg.dim, d, d))
        for i, M in enumerate(mats):
            if d:
                arr[i] = ExactMatrix(alg.field, M).a
        m = FdModule(alg, arr, name=name)
    elif kind == "canonical":
        can = canonical_modules(alg)
        key = desc.get("name", "")
        table = {"R": can.regular}
        for i, (p, q, s) in enumerate(zip(can.projectives, can.injectives, can.simples)):
            table[f"P{i + 1}"], table[f"I{i + 1}"], table[f"S{i + 1}"] = p, q, s
        if key not in table:
            raise WorkspaceError(f"{where}: unknown canonical module {key!r}")
        src = table[key]
        m = FdModule(alg, src.action, name=name)
    elif kind == "sum":
        parts = []
        for ref in desc.get("of", []):
            if ref not in modules:
                raise WorkspaceError(f"{where}: unresolved reference {ref!r}")
            parts.append(modules[ref])
        m, _, _ = direct_sum(parts, algebra=alg)
        m.name = name
    else:
        raise WorkspaceError(f"{where}: unknown module kind {kind!r}")
    try:
        m.validate()
    except ModuleError as exc:
        raise WorkspaceError(f"{where}: {exc}") from exc
    return m


def _complex_from_json(name: str, desc: dict, alg, modules: dict) -> BoundedComplex:
    where = f"complexes.{name}"
    terms = []
    for ref in desc.get("terms", []):
        if ref not in modules:
            raise WorkspaceError(f"{where}: unresolved reference {ref!r}")
        terms.append(modules[ref])
    if not terms:
        raise WorkspaceError(f"{where}: complex has no terms")
    diffs = []
    for k, M in enumerate(desc.get("diffs", [])):
        a, b = terms[k].dim, terms[k + 1].dim if k + 1 < len(terms) else 0
        diffs.append(ExactMatrix(alg.field, M) if a and b else ExactMatrix.zeros(alg.field, a, b))
    try:
        c = BoundedComplex(alg, int(desc.get("low", 0)), terms, diffs, name=name)
        c.validate()
    except (ComplexError, ModuleError) as exc:
        raise WorkspaceError(f"{where}: {exc}") from exc
    return c


def workspace_from_dict(obj: dict, path: str = "") -> Workspace:
    try:
        f = FieldSpec.from_json(obj["field"])
    except (KeyError, ValueError, TypeError) as exc:
        raise WorkspaceError(f"field: {exc}") from exc
    aj = obj.get("algebra")
    if not isinstance(aj, dict):
        raise WorkspaceError("algebra: missing description")
    try:
        if aj.get("kind") == "bound_quiver":
            q = Quiver.build([str(v) for v in aj["vertices"]],
                             [(a["name"], str(a["src"]), str(a["tgt"])) for a in aj.get("arrows", [])])
            rels = RelationSet.build([[(c, tuple(p)) for c, p in rel] for rel in aj.get("relations", [])])
            alg = bound_quiver_algebra(q, rels, f)
        elif aj.get("kind") == "structure_constants":
            alg = structure_algebra(f, aj["structconst"], aj["unit"], aj.get("labels"))
        else:
            raise WorkspaceError(f"algebra: unknown kind {aj.get('kind')!r}")
    except AlgebraError as exc:
        raise WorkspaceError(f"algebra: {exc}") from exc
    except KeyError as exc:
        raise WorkspaceError(f"algebra: missing key {exc}") from exc
    modules: dict = {}
    for name, desc in obj.get("modules", {}).items():
        modules[name] = _module_from_json(name, desc, alg, modules)
    complexes = {name: _complex_from_json(name, desc, alg, modules) for name, desc in obj.get("complexes", {}).items()}
    return Workspace(f, alg, modules, complexes, obj.get("tilting", {}), path)


def load(path) -> Workspace:
    text = FsPath(path).read_text()
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise WorkspaceError(f"parse error at line {exc.lineno}, column {exc.colno}: {exc.msg}") from exc
    return workspace_from_dict(obj, str(path))


def fixture_path(name: str) -> str:
    return str(resources.files("tiltlab") / "fixtures" / f"{name}.json")


def load_fixture(name: str) -> Workspace:
    return load(fixture_path(name))


# ---------------------------------------------------------------------------
# commands


def _module(ws: Workspace, name: str | None) -> FdModule:
    if not name:
        raise UsageError("--module is required")
    if name in ws.modules:
        return ws.modules[name]
    can = canonical_modules(ws.algebra)
    for i, (p, q, s) in enumerate(zip(can.projectives, can.injectives, can.simples)):
        for pre, m in (("P", p), ("I", q), ("S", s)):
            if name == f"{pre}{i + 1}":
                return m
    if name == "R":
        return can.regular
    raise UsageError(f"unknown module {name!r}")


def _context(ws: Workspace, args):
    from .tiltcore import certify_tilting

    if args.n in ws.contexts:
        return ws.contexts[args.n]
    tname = ws.tilting.get("module", "T")
    n = args.n if args.n is not None else ws.tilting.get("n")
    if n is None:
        raise UsageError("tilting degree unknown: pass --n or set tilting.n in the workspace")
    T = _module(ws, tname)
    ctx = certify_tilting(ws.algebra, T, int(n))
    ws.contexts[args.n] = ctx
    return ctx


def _s_module(ctx, name: str) -> FdModule:
    """Canonical S-modules named ``S:P1``, ``S:S1``, ``S:I1`` or ``S:S`` (the regular module)."""
    if name.startswith("S:"):
        key = name[2:]
        can = canonical_modules(ctx.S)
        for i, (p, q, s) in enumerate(zip(can.projectives, can.injectives, can.simples)):
            for pre, m in (("P", p), ("I", q), ("S", s)):
                if key == f"{pre}{i + 1}":
                    return m
        if key == "S":
            return can.regular
        raise UsageError(f"unknown S-module {name!r}")
    raise UsageError(f"not an S-module name: {name!r}")


def _resolve_s(ws, ctx, name: str) -> FdModule:
    from .tiltcore import ext_module, functor_H

    if name.startswith("S:"):
        return _s_module(ctx, name)
    if name.startswith("H:"):
        return functor_H(ctx, _module(ws, name[2:])).module
    if name.startswith("E") and ":" in name:
        deg, base = name[1:].split(":", 1)
        if not deg.isdigit():
            raise UsageError(f"bad S-module name {name!r}")
        return ext_module(ctx, _module(ws, base), int(deg))
    raise UsageError(f"S-side modules are named S:P1, H:M or E1:M, got {name!r}")


def _window(args):
    if not args.window:
        return None
    try:
        lo, hi = args.window.split(":")
        return int(lo), int(hi)
    except ValueError as exc:
        raise UsageError(f"bad --window {args.window!r}, expected LO:HI") from exc


def _r_complex(ws, args) -> BoundedComplex:
    if args.complex:
        if args.complex not in ws.complexes:
            raise UsageError(f"unknown complex {args.complex!r}")
        return ws.complexes[args.complex]
    return BoundedComplex.stalk(_module(ws, args.module), args.degree or 0)


def _s_complex(ws, ctx, args) -> BoundedComplex:
    if args.complex:
        raise UsageError("workspace complexes live over R; name an S-module with --module")
    if not args.module:
        raise UsageError("--module is required")
    return BoundedComplex.stalk(_resolve_s(ws, ctx, args.module), args.degree or 0)


def cmd_check_tilting(ws, args):
    from .tiltcore import CertificationFailure, certify_tilting

    T = _module(ws, args.module or ws.tilting.get("module", "T"))
    n = args.n if args.n is not None else ws.tilting.get("n")
    if n is None:
        raise UsageError("--n is required")
    try:
        ctx = certify_tilting(ws.algebra, T, int(n))
    except CertificationFailure as exc:
        return dict(exc.report, failure=str(exc)), False
    return ctx.report, True


def cmd_good_tilt(ws, args):
    from .tiltcore import FormalExactSequence, good_tilt_formal

    syms = [s.strip() for s in (args.symbols or "").split(",") if s.strip()]
    if not syms:
        raise UsageError("--symbols is required, e.g. T0,T1,T2")
    res = good_tilt_formal(FormalExactSequence.from_symbols(syms))
    return res.to_json(), True


def cmd_ext(ws, args):
    ctx = _context(ws, args)
    m = _module(ws, args.module)
    degs = [args.degree] if args.degree is not None else list(range(ctx.n + 1))
    dims = {str(i): ext_dim(ctx.T, m, i, ctx.proj_res_T) for i in degs}
    return {"module": m.name, "ext_dims": dims}, True


def cmd_tor(ws, args):
    from .tiltcore import tor_T

    ctx = _context(ws, args)
    nm = _resolve_s(ws, ctx, args.module or "")
    degs = [args.degree] if args.degree is not None else list(range(ctx.n + 1))
    return {"module": args.module, "tor_dims": {str(i): tor_T(ctx, nm, i).dim for i in degs}}, True


def cmd_endo(ws, args):
    m = _module(ws, args.module)
    S, _, _ = end_algebra(m)
    d = decompose(m)
    return {"module": m.name, "dim": m.dim, "end_dim": S.dim,
            "summand_dims": [rep.dim for rep, _ in d.classes], "multiplicities": d.multiplicities()}, True


def cmd_class(ws, args):
    from .tiltcore import ke_index, kt_index

    ctx = _context(ws, args)
    name = args.module or ""
    if name[:2] in ("S:", "H:") or (name.startswith("E") and ":" in name):
        rep = kt_index(ctx, _resolve_s(ws, ctx, name))
    else:
        rep = ke_index(ctx, _module(ws, name))
    return rep.to_json(), rep.index is not None


def cmd_miyashita(ws, args):
    from .tiltcore import miyashita_roundtrip, miyashita_roundtrip_s

    ctx = _context(ws, args)
    name = args.module or ""
    if name[:2] in ("S:", "H:") or (name.startswith("E") and ":" in name):
        rep = miyashita_roundtrip_s(ctx, _resolve_s(ws, ctx, name))
    else:
        rep = miyashita_roundtrip(ctx, _module(ws, name))
    return rep.to_json(), rep.passed


def cmd_lemma13(ws, args):
    from .tiltcore import lemma13_check

    ctx = _context(ws, args)
    m = _module(ws, args.module or ws.tilting.get("module", "T"))
    projs = canonical_modules(ctx.S).projectives
    rows = []
    for k, p in enumerate(projs):
        r = lemma13_check(ctx, m, p)
        rows.append({"projective": f"S:P{k + 1}", **r})
    return {"module": m.name, "checks": rows}, all(r["passed"] for r in rows)


def cmd_dagger(ws, args):
    ctx = _context(ws, args)
    d = ctx.dagger
    out = {"length": d.length, "exact": d.exact, "projective_terms": d.projective_terms,
           "double_end_ok": d.double_end_ok, "end_dim": d.end_dim, "R_dim": ctx.R.dim,
           "term_dims": [t.dim for t in d.complex.terms]}
    return out, d.exact and d.projective_terms and d.double_end_ok and d.length <= ctx.n


def cmd_derived_counit(ws, args):
    from .derived import counit_check

    ctx = _context(ws, args)
    rep = counit_check(ctx, _r_complex(ws, args), seed=args.seed)
    return rep.to_json(), rep.passed


def cmd_derived_unit(ws, args):
    from .derived import unit_check

    ctx = _context(ws, args)
    rep = unit_check(ctx, _s_complex(ws, ctx, args), seed=args.seed)
    return rep.to_json(), rep.passed


def cmd_e_member(ws, args):
    from .derived import e_membership, has_homology, lg
    from .homology import homology_dim

    ctx = _context(ws, args)
    nc = _s_complex(ws, ctx, args)
    window = _window(args)
    out = lg(ctx, nc, window)
    member = e_membership(ctx, nc)
    dims = {str(j): homology_dim(out.complex, j) for j in range(out.window[0], out.window[1] + 1)}
    # membership is a report, not a property: a classical context has E = 0
    return {"in_E": member, "lg_homology_dims": dims, "window": list(out.window)}, member == (not has_homology(nc))


def cmd_classical_probe(ws, args):
    from .derived import classical_probe, random_complex

    ctx = _context(ws, args)
    can = canonical_modules(ctx.S)
    tests = [BoundedComplex.stalk(s) for s in can.simples + can.projectives]
    seed = args.seed or 0
    tests += [random_complex(ctx.S, seed + k) for k in range(args.count)]
    rep = classical_probe(ctx, tests)
    rep["seed"] = seed
    return rep, rep["passed"]


def cmd_equivalence(ws, args):
    from .tiltcore import certify_tilting, equivalence_check

    ctx = _context(ws, args)
    T2 = _module(ws, args.module)
    n2 = args.n if args.n is not None else ctx.n
    ctx2 = certify_tilting(ws.algebra, T2, max(n2, 0))
    rep = equivalence_check(ctx, ctx2)
    return rep, rep["equivalent"]


HANDLERS = {
    "check-tilting": cmd_check_tilting, "good-tilt": cmd_good_tilt, "ext": cmd_ext, "tor": cmd_tor,
    "endo": cmd_endo, "class": cmd_class, "miyashita": cmd_miyashita, "lemma13": cmd_lemma13,
    "dagger": cmd_dagger, "derived-counit": cmd_derived_counit, "derived-unit": cmd_derived_unit,
    "e-member": cmd_e_member, "classical-probe": cmd_classical_probe, "equivalence": cmd_equivalence,
}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="tiltlab", description="Certify tilting modules and check derived equivalences.")
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("--workspace", help="workspace JSON file (or fixture:a2 / fixture:n3 / fixture:reg)")
    p.add_argument("--module")
    p.add_argument("--complex")
    p.add_argument("--n", type=int)
    p.add_argument("--degree", type=int)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--window")
    p.add_argument("--symbols")
    p.add_argument("--count", type=int, default=20, help="random complexes for classical-probe")
    fmt = p.add_mutually_exclusive_group()
    fmt.add_argument("--json", dest="fmt", action="store_const", const="json")
    fmt.add_argument("--text", dest="fmt", action="store_const", const="text")
    p.set_defaults(fmt="json")
    return p


def _load_ws(desc: str | None) -> Workspace | None:
    if desc is None:
        return None
    if desc.startswith("fixture:"):
        return load_fixture(f"fix_{desc.split(':', 1)[1]}")
    return load(desc)


def run(argv) -> tuple[dict, int]:
    """Parse ``argv`` and run one command; returns ``(report, exit code)``."""
    try:
        args = build_parser().parse_args(argv)
    except UsageError as exc:
        return {"error": "usage", "message": str(exc)}, 2
    try:
        ws = _load_ws(args.workspace)
        if ws is None and args.command != "good-tilt":
            raise UsageError("--workspace is required")
        if args.window is not None and args.command != "e-member":
            _window(args)
        report, ok = HANDLERS[args.command](ws, args)
    except (UsageError, WorkspaceError, WindowError, FileNotFoundError) as exc:
        return {"error": "input", "message": str(exc)}, 2
    except Exception as exc:  # certification failure while building a context, etc.
        from .tiltcore import CertificationFailure

        if isinstance(exc, CertificationFailure):
            return {"error": "certification", "message": str(exc), "report": exc.report}, 1
        raise
    report = {"command": args.command, "verdict": "verified" if ok else "falsified", "report": report}
    return report, 0 if ok else 1


def _text(obj, indent=0) -> str:
    pad = "  " * indent
    if isinstance(obj, dict):
        lines = []
        for k, v in obj.items():
            if isinstance(v, (dict, list)) and v and not all(isinstance(x, (int, str, bool)) for x in v):
                lines.append(f"{pad}{k}:")
                lines.append(_text(v, indent + 1))
            else:
                lines.append(f"{pad}{k}: {v}")
        return "\n".join(lines)
    if isinstance(obj, list):
        return "\n".join(_text(x, indent) if isinstance(x, (dict, list)) else f"{pad}- {x}" for x in obj)
    return f"{pad}{obj}"


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    report, code = run(argv)
    fmt = "text" if "--text" in argv else "json"
    if fmt == "text":
        print(_text(report))
    else:
        print(json.dumps(report, indent=2, ensure_ascii=False))
    return code


if __name__ == "__main__":
    sys.exit(main())
