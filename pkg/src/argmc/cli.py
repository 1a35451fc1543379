"""Command-line front end.

Exit codes: 0 success (and a satisfied verdict for ``check``/``verify``),
1 violated verdict or failed claim (or a violating seed for ``mine``),
2 input or usage error, 3 resource cap or search budget exceeded.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
import tempfile
import time
from pathlib import Path

from . import __version__
from ._backend import BACKEND
from .af import AFSyntaxError, Semantics, extensions, load_af
from .argcore import enumerate_arguments
from .attacks import Relation, build_framework, check_all_properties
from .formula import FormulaSyntaxError, UniverseError, dnf_text
from .kb import KBError, KnowledgeBase, SweepConfig, load_kb, mc_subsets, min_inconsistent_subsets
from .limits import CapExceeded, Limits
from .mcext import (
    Instance,
    check_bijection,
    coverage,
    default_claims_text,
    parse_claims,
    skeptical_infer,
    verify_claims,
)

SCHEMA_VERSION = 1
EXIT_OK, EXIT_VIOLATED, EXIT_INPUT, EXIT_CAP = 0, 1, 2, 3


class InputError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


def _read(path: str) -> tuple[str, str]:
    try:
        data = Path(path).read_bytes()
    except OSError as e:
        raise InputError(f"cannot read {path}: {e.strerror}") from None
    try:
        return data.decode("utf-8"), hashlib.sha256(data).hexdigest()[:16]
    except UnicodeDecodeError:
        raise InputError(f"{path} is not UTF-8") from None


def _limits(ns) -> Limits:
    try:
        return Limits(ns.max_atoms, ns.max_arguments, ns.max_nodes, ns.max_nodes_enum, ns.budget)
    except ValueError as e:
        raise InputError(str(e)) from None


def _kb(ns) -> tuple[KnowledgeBase, str]:
    if ns.kb is None:
        raise InputError("--kb is required")
    text, digest = _read(ns.kb)
    return load_kb(text), digest


def _names(kb: KnowledgeBase, mask: int) -> list[str]:
    return kb.describe(mask)


def _result(command, digest, verdict, witnesses=(), stats=None, lines=(), code=EXIT_OK):
    doc = {"command": command, "input_digest": digest, "verdict": verdict, "witnesses": list(witnesses),
           "stats": stats or {}, "version": {"schema": SCHEMA_VERSION, "package": __version__}}
    return doc, list(lines), code


# ------------------------------------------------------------------ commands

def cmd_mc(ns):
    kb, digest = _kb(ns)
    fam = mc_subsets(kb)
    lines = ["{" + ", ".join(_names(kb, s)) + "}" for s in fam]
    return _result("mc", digest, "ok", [{"subset": kb.indices(s), "formulas": _names(kb, s)} for s in fam],
                   {"count": len(fam), "formulas": kb.m, "atoms": kb.n}, lines)


def cmd_mus(ns):
    kb, digest = _kb(ns)
    fam = min_inconsistent_subsets(kb)
    lines = ["{" + ", ".join(_names(kb, s)) + "}" for s in fam] or ["(consistent: no minimal conflicts)"]
    return _result("mus", digest, "ok", [{"subset": kb.indices(s), "formulas": _names(kb, s)} for s in fam],
                   {"count": len(fam)}, lines)


def cmd_args(ns):
    kb, digest = _kb(ns)
    args = enumerate_arguments(kb, _limits(ns))
    rows = [{"id": a.id, "support": kb.indices(a.support), "conclusion": dnf_text(a.conclusion, kb.universe)}
            for a in args]
    lines = [f"{a.id}: {args.format(a)}" for a in args]
    return _result("args", digest, "ok", rows, {"arguments": len(args), "supports": len(args.by_support)}, lines)


def cmd_af(ns):
    kb, digest = _kb(ns)
    fw = build_framework(kb, ns.relation, _limits(ns))
    af = fw.af
    edges = af.edges()
    stats = {"relation": fw.relation.value, "arguments": af.n, "attacks": len(edges),
             "self_attacks": sum(1 for a, b in edges if a == b)}
    lines = [f"{k}: {v}" for k, v in stats.items()]
    witnesses = []
    if ns.edges:
        witnesses = [{"attacker": a, "attacked": b} for a, b in edges]
        lines += [f"{a} -> {b}" for a, b in edges]
    return _result("af", digest, "ok", witnesses, stats, lines)


def cmd_solve(ns):
    limits = _limits(ns)
    sem = Semantics.parse(ns.semantics)
    if (ns.af is None) == (ns.kb is None):
        raise InputError("solve needs exactly one of --kb or --af")
    if ns.af is not None:
        text, digest = _read(ns.af)
        af = load_af(text)
        fam = extensions(af, sem, limits)
        show = lambda e: af.names(e)  # noqa: E731
    else:
        if ns.relation is None:
            raise InputError("solve --kb needs --relation")
        kb, digest = _kb(ns)
        fw = build_framework(kb, ns.relation, limits)
        af = fw.af
        fam = extensions(af, sem, limits)
        show = lambda e: [str(i) for i in fw.args.ids_of(e)]  # noqa: E731
    witnesses = [{"extension": show(e)} for e in fam]
    lines = ["{" + ", ".join(show(e)) + "}" for e in fam] or ["(no extensions)"]
    return _result("solve", digest, "ok", witnesses, {"semantics": sem.value, "nodes": af.n,
                                                      "extensions": len(fam)}, lines)


def cmd_check(ns):
    kb, digest = _kb(ns)
    rep = check_bijection(Instance(kb, _limits(ns)), ns.relation, ns.semantics)
    body = rep.to_json()
    stats = {k: body[k] for k in ("kb_digest", "relation", "semantics", "mc_count", "extension_count",
                                  "extension_count_exact")}
    stats["mc_subsets"] = body["mc_subsets"]
    lines = [f"{rep.relation.value} / {rep.semantics.value}: {rep.verdict}",
             f"|MC| = {len(rep.mc)}, extensions listed = {len(rep.extensions)}"
             + ("" if rep.exhaustive else " (family is larger)")]
    lines += rep.describe()
    return _result("check", digest, rep.verdict, body["witnesses"], stats, lines,
                   EXIT_OK if rep.satisfied else EXIT_VIOLATED)


def cmd_props(ns):
    kb, digest = _kb(ns)
    verdicts = check_all_properties(ns.relation, kb, _limits(ns))
    rows = [v.to_json() for v in verdicts]
    overall = "holds-within-bound" if all(v.holds for v in verdicts) else "violated"
    lines = [f"{v.name}: {v.verdict}" for v in verdicts]
    return _result("props", digest, overall, rows, {"relation": Relation.parse(ns.relation).value}, lines)


def cmd_infer(ns):
    kb, digest = _kb(ns)
    answer = skeptical_infer(Instance(kb, _limits(ns)), ns.formula, ns.mode)
    verdict = "entailed" if answer else "not-entailed"
    return _result("infer", digest, verdict, [], {"formula": ns.formula, "mode": ns.mode}, [verdict])


def _sweep(ns) -> SweepConfig:
    if ns.sweep <= 0 or ns.atoms <= 0 or ns.max_formulas <= 0 or ns.max_depth < 0:
        raise InputError("sweep parameters must be positive")
    return SweepConfig(ns.sweep, ns.first_seed, ns.atoms, ns.max_formulas, ns.max_depth)


def _sweep_digest(sweep: SweepConfig, extra: str = "") -> str:
    key = f"{sweep.count}:{sweep.first_seed}:{sweep.atoms}:{sweep.max_formulas}:{sweep.max_depth}:{extra}"
    return hashlib.sha256(key.encode()).hexdigest()[:16]


def cmd_mine(ns):
    sweep = _sweep(ns)
    limits = _limits(ns)
    rel, sem = Relation.parse(ns.relation), Semantics.parse(ns.semantics)
    digest = _sweep_digest(sweep, f"{rel.value}:{sem.value}")
    tried = 0
    for seed, kb in sweep.kbs():
        tried += 1
        rep = check_bijection(Instance(kb, limits), rel, sem)
        if not rep.satisfied:
            body = rep.to_json()
            stats = {"seed": seed, "tried": tried, "kb": list(kb.texts), "relation": rel.value,
                     "semantics": sem.value, "first_seed": sweep.first_seed, "count": sweep.count}
            lines = [f"seed {seed} violates {rel.value}/{sem.value}:"] + [f"  {t}" for t in kb.texts]
            lines += rep.describe()
            return _result("mine", digest, "violated", body["witnesses"], stats, lines, EXIT_VIOLATED)
    stats = {"seed": None, "tried": tried, "relation": rel.value, "semantics": sem.value,
             "first_seed": sweep.first_seed, "count": sweep.count}
    return _result("mine", digest, "none-found", [], stats, [f"no violation in {tried} seeds"])


def cmd_verify(ns):
    if ns.claims is None:
        text = default_claims_text()
        digest = hashlib.sha256(text.encode()).hexdigest()[:16]
    else:
        text, digest = _read(ns.claims)
    try:
        claims = parse_claims(text)
    except ValueError as e:
        raise InputError(str(e)) from None
    gaps = [f"{r.value}/{s.value}" for (r, s), ids in coverage(claims).items() if len(ids) != 1]
    sweep = _sweep(ns)
    t0 = time.perf_counter()
    report = verify_claims(claims, sweep, _limits(ns))
    rows = [r.to_json() for r in report.results]
    ok = report.passed and not gaps
    stats = {"claims": len(claims), "passed": sum(r.passed for r in report.results),
             "runs": sum(r.runs for r in report.results), "coverage_gaps": gaps,
             "sweep": {"count": sweep.count, "first_seed": sweep.first_seed, "atoms": sweep.atoms,
                       "max_formulas": sweep.max_formulas, "max_depth": sweep.max_depth},
             "seconds": round(time.perf_counter() - t0, 3), "backend": BACKEND}
    lines = [f"{'PASS' if r.passed else 'FAIL'} {r.claim.id} ({r.runs} runs)" for r in report.results]
    for r in report.results:
        lines += [f"  {e}" for e in r.evidence[:5]]
    if gaps:
        lines.append("coverage gaps: " + ", ".join(gaps))
    return _result("verify", digest, "passed" if ok else "failed", rows, stats, lines,
                   EXIT_OK if ok else EXIT_VIOLATED)


# ------------------------------------------------------------------ parser

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("text", "json"), default="text")
    common.add_argument("--output", "-o", help="write the report here instead of stdout")
    common.add_argument("--max-atoms", type=int, default=Limits.max_atoms)
    common.add_argument("--max-arguments", type=int, default=Limits.max_arguments)
    common.add_argument("--max-nodes", type=int, default=Limits.max_nodes_light,
                        help="node cap for grounded and stable")
    common.add_argument("--max-nodes-enum", type=int, default=Limits.max_nodes_enum,
                        help="node cap for the enumerating semantics")
    common.add_argument("--budget", type=int, default=Limits.search_budget, help="search node budget")

    kb = argparse.ArgumentParser(add_help=False)
    kb.add_argument("--kb", help="knowledge base file, one formula per line")

    sweep = argparse.ArgumentParser(add_help=False)
    sweep.add_argument("--sweep", type=int, default=200, metavar="N", help="number of seeded KBs")
    sweep.add_argument("--first-seed", type=int, default=1)
    sweep.add_argument("--atoms", type=int, default=3)
    sweep.add_argument("--max-formulas", type=int, default=4)
    sweep.add_argument("--max-depth", type=int, default=2)

    p = _Parser(prog="argmc", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"argmc {__version__}")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    sub.add_parser("mc", parents=[common, kb], help="maximal consistent subsets").set_defaults(func=cmd_mc)
    sub.add_parser("mus", parents=[common, kb], help="minimal inconsistent subsets").set_defaults(func=cmd_mus)
    sub.add_parser("args", parents=[common, kb], help="canonical argument core").set_defaults(func=cmd_args)

    s = sub.add_parser("af", parents=[common, kb], help="build a framework and report its size")
    s.add_argument("--relation", required=True)
    s.add_argument("--edges", action="store_true", help="also list every attack")
    s.set_defaults(func=cmd_af)

    s = sub.add_parser("solve", parents=[common, kb], help="extensions of a KB framework or an AF file")
    s.add_argument("--af", help="abstract framework in arg/att syntax")
    s.add_argument("--relation")
    s.add_argument("--semantics", required=True)
    s.set_defaults(func=cmd_solve)

    s = sub.add_parser("check", parents=[common, kb], help="MC subsets versus extensions on one KB")
    s.add_argument("--relation", required=True)
    s.add_argument("--semantics", required=True)
    s.set_defaults(func=cmd_check)

    s = sub.add_parser("props", parents=[common, kb], help="relation properties on one KB")
    s.add_argument("--relation", required=True)
    s.set_defaults(func=cmd_props)

    s = sub.add_parser("infer", parents=[common, kb], help="skeptical inference over MC subsets")
    s.add_argument("--formula", required=True)
    s.add_argument("--mode", choices=("direct", "argumentation"), default="direct")
    s.set_defaults(func=cmd_infer)

    s = sub.add_parser("mine", parents=[common, sweep], help="first seeded KB violating the correspondence")
    s.add_argument("--relation", required=True)
    s.add_argument("--semantics", required=True)
    s.set_defaults(func=cmd_mine)

    s = sub.add_parser("verify", parents=[common, sweep], help="replay the claim table")
    s.add_argument("--claims", help="claim table (default: the shipped one)")
    s.set_defaults(func=cmd_verify)
    return p


def _emit(doc: dict, lines: list[str], fmt: str, output: str | None) -> None:
    text = json.dumps(doc, indent=2, sort_keys=True) + "\n" if fmt == "json" else "\n".join(lines) + "\n"
    if output is None:
        sys.stdout.write(text)
        return
    target = Path(output)
    fd, tmp = tempfile.mkstemp(dir=target.parent or ".", prefix=f".{target.name}.")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(text)
        os.replace(tmp, target)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def run(argv: list[str] | None = None) -> int:
    parser = build_parser()
    ns = parser.parse_args(argv)
    try:
        doc, lines, code = ns.func(ns)
    except CapExceeded as e:
        print(f"argmc: cap exceeded: {e}", file=sys.stderr)
        return EXIT_CAP
    except (InputError, FormulaSyntaxError, UniverseError, KBError, AFSyntaxError, ValueError) as e:
        print(f"argmc: input error: {e}", file=sys.stderr)
        return EXIT_INPUT
    try:
        _emit(doc, lines, ns.format, ns.output)
    except OSError as e:
        print(f"argmc: cannot write output: {e}", file=sys.stderr)
        return EXIT_INPUT
    return code


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
