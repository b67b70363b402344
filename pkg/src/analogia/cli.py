"""Command-line front end.

Exit status: 0 success, 1 bad input (parse/validation/inapplicable rule),
2 a numeric check failed, 64 usage error.
"""

from __future__ import annotations

import argparse
import json
import sys
from collections.abc import Sequence
from pathlib import Path
from typing import Any

from analogia import case_studies, determination, multiple_analogy, selection, similarity, typicality
from analogia.case_studies import CorroborationReport
from analogia.data import fixture_text
from analogia.model import KnowledgeBase, KnowledgeBaseError, load_knowledge_base, value_to_json

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_CHECK_FAILED = 2
EXIT_USAGE = 64

BUNDLED = "bundled:"


class UsageError(Exception):
    pass


class InputError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _read(path: str) -> str:
    if path.startswith(BUNDLED):
        try:
            return fixture_text(path[len(BUNDLED):])
        except KeyError as exc:
            raise InputError(str(exc.args[0])) from None
    p = Path(path)
    if not p.is_file():
        raise InputError(f"no such file: {path}")
    return p.read_text(encoding="utf-8")


def _kb(args) -> KnowledgeBase:
    if not args.kb:
        raise UsageError("--kb is required for this subcommand")
    return load_knowledge_base(_read(args.kb))


def _grid(text: str) -> tuple[float, ...]:
    try:
        values = tuple(float(x) for x in text.split(",") if x.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a comma-separated list of reals: {text!r}") from None
    if not values:
        raise argparse.ArgumentTypeError("empty grid")
    return values


def _locals(pairs: Sequence[str]) -> dict[str, similarity.LocalIndexKind]:
    out = {}
    for item in pairs:
        aspect, sep, kind = item.partition("=")
        if not sep:
            raise UsageError(f"--local expects aspect=kind, got {item!r}")
        try:
            out[aspect] = similarity.LocalIndexKind(kind)
        except ValueError:
            raise UsageError(f"unknown local index {kind!r}") from None
    return out


def _num(x: float | None) -> str:
    return "-" if x is None else format(x, ".12g")


def _corroboration(r: CorroborationReport) -> dict[str, Any]:
    return {"kind": "corroboration", **r.to_dict()}


def _corroboration_rows(reports: Sequence[CorroborationReport]) -> list[str]:
    rows = ["check\tK\tresidual\ttolerance\tresult\tdetail"]
    for r in reports:
        rows.append(f"{r.check}\t{r.K}\t{_num(r.residual)}\t{_num(r.tolerance)}\t{'PASS' if r.passed else 'FAIL'}\t{r.detail}")
    return rows


# --------------------------------------------------------------------------
# subcommands; each returns (reports, table lines, exit status)


def cmd_sim(args):
    kb = _kb(args)
    locals_ = _locals(args.local)
    ids = [i.id for i in kb.instances]
    matrix: list[list[float | None]] = []
    for a in kb.instances:
        row = []
        for b in kb.instances:
            try:
                row.append(similarity.global_sim(args.index, a, b, kb.aspects, locals_))
            except KnowledgeBaseError:
                row.append(None)
        matrix.append(row)
    lines = ["\t" + "\t".join(ids)]
    lines += [ids[k] + "\t" + "\t".join(_num(v) for v in row) for k, row in enumerate(matrix)]
    report = {"kind": "similarity-matrix", "index": args.index, "ids": ids, "matrix": matrix}
    return [report], lines, EXIT_OK


def cmd_audit(args):
    kb = _kb(args)
    if len(kb.instances) < 3:
        raise InputError("the audit needs at least three instances")
    rep = similarity.audit_metric_axioms(
        args.index, similarity.ordered_triples(kb.instances), kb.aspects, _locals(args.local)
    )
    lines = [f"index\t{rep.index}", f"triples\t{rep.triples_checked}"]
    out = []
    for r in rep.results:
        witness = ",".join(r.witness) if r.witness else "-"
        lines.append(f"{r.axiom}\t{'PASS' if r.passed else 'FAIL'}\t{witness}\t{r.detail}")
        out.append({"axiom": r.axiom, "passed": r.passed, "witness": list(r.witness) if r.witness else None, "detail": r.detail})
    report = {"kind": "metric-audit", "index": rep.index, "triples": rep.triples_checked, "axioms": out}
    return [report], lines, EXIT_OK


def cmd_rank(args):
    kb = _kb(args)
    if not args.target or args.j is None:
        raise UsageError("rank needs --target and --j")
    target = _instance(kb, args.target)
    if args.candidates:
        candidates = [_instance(kb, c) for c in args.candidates.split(",")]
    else:
        candidates = [i for i in kb.instances if i.id != target.id]
    ranked = selection.rank_sources(target, candidates, args.j)
    lines = ["source\ts\tm\tj\tprobability"]
    rows = []
    for r in ranked:
        lines.append(f"{r.source.id}\t{r.stats.s}\t{r.stats.m}\t{r.stats.j}\t{_num(r.probability)}")
        rows.append({"source": r.source.id, "s": r.stats.s, "m": r.stats.m, "j": r.stats.j, "probability": r.probability})
    return [{"kind": "source-ranking", "target": target.id, "ranking": rows}], lines, EXIT_OK


def cmd_determine(args):
    kb = _kb(args)
    lines = ["connection\tstatus\tconsulted\twitness"]
    rows = []
    for c in kb.connections:
        chk = determination.check_dependency(kb, c)
        witness = ",".join(chk.witness) if chk.witness else "-"
        lines.append(f"{c.label}\t{chk.status.value}\t{len(chk.consulted)}\t{witness}")
        rows.append({
            "connection": c.label, "P": list(c.P), "Q": c.Q, "status": chk.status.value,
            "consulted": list(chk.consulted), "witness": list(chk.witness) if chk.witness else None,
        })
    return [{"kind": "connections", "connections": rows}], lines, EXIT_OK


def _instance(kb, id):
    try:
        return kb.instance(id)
    except KeyError:
        raise InputError(f"unknown instance {id!r}") from None


def _pick_connection(kb: KnowledgeBase, args):
    if args.connection is not None:
        for k, c in enumerate(kb.connections):
            if args.connection in (c.label, c.id, str(k)):
                return c
        raise InputError(f"no connection {args.connection!r}")
    candidates = [c for c in kb.connections if args.aspect in (None, c.Q)]
    if len(candidates) != 1:
        raise UsageError("choose a connection with --connection (or a unique --aspect)")
    return candidates[0]


def cmd_infer(args):
    kb = _kb(args)
    if not args.rule or not args.source or not args.target:
        raise UsageError("infer needs --rule, --source and --target")
    S, T = _instance(kb, args.source), _instance(kb, args.target)
    if args.rule == "typ":
        if not args.aspect:
            raise UsageError("--rule typ needs --aspect")
        if args.concept:
            concept = args.concept
        else:
            owners = [c for c in kb.concepts if S.id in c.members and T.id in c.members]
            if len(owners) != 1:
                raise UsageError("choose a concept with --concept")
            concept = owners[0]
        conclusion = typicality.apply_typ(kb, concept, S, T, args.aspect)
    else:
        c = _pick_connection(kb, args)
        fn = determination.apply_det1 if args.rule == "det1" else determination.apply_det2
        conclusion = fn(kb, c, S, T)
    d = conclusion.to_dict()
    value = ",".join(d["value"]) if isinstance(d["value"], list) else _num(d["value"])
    lines = [
        "target\taspect\tvalue\tmodality\trule\tsources\tvia\tconflict",
        f"{d['target']}\t{d['aspect']}\t{value}\t{d['modality']}\t{d['rule']}\t{','.join(d['sources'])}\t{d['via']}\t{d['conflict']}",
    ]
    lines += [f"note\t{n}" for n in d["notes"]]
    return [{"kind": "conclusion", **d}], lines, EXIT_OK


def cmd_typicality(args):
    kb = _kb(args)
    concepts = [kb.concept(args.concept)] if args.concept else list(kb.concepts)
    lines = ["concept\tvalid\twitness\texceptions\tmaximal\ttypical"]
    rows = []
    for c in concepts:
        v = typicality.validate_order(c)
        if v.valid:
            exc = sorted(typicality.exceptions(c))
            mx = sorted(typicality.maximal_elements(c))
            typ = sorted(typicality.typical_examples(c))
        else:
            exc = mx = typ = []
        witness = ",".join(v.witness) if v.witness else "-"
        lines.append(f"{c.id}\t{v.valid}\t{witness}\t{','.join(exc)}\t{','.join(mx)}\t{','.join(typ)}")
        rows.append({
            "concept": c.id, "valid": v.valid, "witness": list(v.witness) if v.witness else None,
            "exceptions": exc, "maximal": mx, "typical": typ,
        })
    return [{"kind": "typicality", "concepts": rows}], lines, EXIT_OK


def cmd_euler(args):
    n = args.n if args.n is not None else 10_000
    if n < 2:
        raise UsageError("--n must be at least 2")
    reports = case_studies.run_euler(n=n, K=args.K, grid=args.grid or case_studies.DEFAULT_GRID, tolerance=args.tolerance)
    status = EXIT_OK if all(r.passed for r in reports) else EXIT_CHECK_FAILED
    return [_corroboration(r) for r in reports], _corroboration_rows(reports), status


def cmd_grandi(args):
    blocks = args.n if args.n is not None else 1000
    if blocks < 1:
        raise UsageError("--n must be positive")
    reports = case_studies.run_grandi(blocks=blocks)
    status = EXIT_OK if all(r.passed for r in reports) else EXIT_CHECK_FAILED
    return [_corroboration(r) for r in reports], _corroboration_rows(reports), status


def cmd_multi(args):
    if not args.problem:
        raise UsageError("multi needs --problem")
    doc = multiple_analogy.load_problem(_read(args.problem))
    reports: list[dict[str, Any]] = []
    lines: list[str] = []
    status = EXIT_OK
    h = multiple_analogy.hypothesis_from_document(doc)
    if h is not None:
        lines.append(f"hypothesis\t{h.id}\t{h.reading}")
        lines.append("interpretation\tscore\tsupport")
        for interp, sources in h.support.items():
            lines.append(f"{interp}\t{len(sources)}\t{','.join(sorted(sources))}")
        lines.append("source\troles\tlabel")
        for s, roles in sorted(h.provenance.items()):
            lines.append(f"{s}\t{','.join(sorted(roles))}\t{doc.source_labels.get(s, '')}")
        reports.append({"kind": "hypothesis", **h.to_dict()})
    if doc.problem.conditions and doc.corpus.instances:
        steps = multiple_analogy.heuristic_loop(doc.problem, doc.corpus, args.max_iterations)
        lines.append("step\tselected\tcovered\topen sub-hypotheses")
        for st in steps:
            lines.append(f"{st.iteration}\t{st.selected or '-'}\t{','.join(st.covered)}\t{'; '.join(st.open_hypotheses)}")
        all_reports = [r for st in steps for r in st.reports]
        if all_reports:
            lines += _corroboration_rows(all_reports)
            if not all(r.passed for r in all_reports):
                status = EXIT_CHECK_FAILED
        reports.append({"kind": "heuristic-trace", "problem": doc.problem.id, "steps": [st.to_dict() for st in steps]})
    return reports, lines, status


COMMANDS = {
    "sim": cmd_sim,
    "audit": cmd_audit,
    "rank": cmd_rank,
    "determine": cmd_determine,
    "infer": cmd_infer,
    "typicality": cmd_typicality,
    "euler": cmd_euler,
    "grandi": cmd_grandi,
    "multi": cmd_multi,
}


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--kb", help="knowledge-base JSON file (or bundled:<name>)")
    common.add_argument("--problem", help="problem JSON file (or bundled:<name>)")
    common.add_argument("--K", type=int, help="number of product factors / series terms")
    common.add_argument("--n", type=int, help="partial-sum length (euler) or block horizon (grandi)")
    common.add_argument("--grid", type=_grid, help="comma-separated evaluation points")
    common.add_argument("--tolerance", type=float, help="override residual tolerances")
    common.add_argument("--format", choices=("table", "structured"), default="table")
    common.add_argument("--rule", choices=("det1", "det2", "typ"))
    common.add_argument("--index", default="city-block", choices=[k.value for k in similarity.GlobalIndexKind])
    common.add_argument("--local", action="append", default=[], metavar="ASPECT=KIND",
                        help="local index per aspect, repeatable")
    common.add_argument("--source")
    common.add_argument("--target")
    common.add_argument("--aspect")
    common.add_argument("--connection")
    common.add_argument("--concept")
    common.add_argument("--candidates", help="comma-separated candidate ids (rank)")
    common.add_argument("--j", type=int, help="number of relevant aspects (rank)")
    common.add_argument("--max-iterations", type=int, default=10)

    parser = _Parser(prog="analogia", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    helps = {
        "sim": "pairwise global similarity matrix",
        "audit": "check symmetry, triangle inequality and minimality",
        "rank": "rank sources by relevant-match probability",
        "determine": "verify connections as total or incomplete",
        "infer": "apply DET1, DET2 or TYP",
        "typicality": "exceptions, maximal and typical members",
        "euler": "Basel problem reconstruction and corroboration checks",
        "grandi": "Grandi-series regrouping and finite control",
        "multi": "multiple-source hypothesis support and heuristic loop",
    }
    for name, text in helps.items():
        sub.add_parser(name, parents=[common], help=text)
    return parser


def run(argv: Sequence[str] | None = None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        reports, lines, status = COMMANDS[args.command](args)
    except UsageError as exc:
        parser.print_usage(stderr)
        print(f"analogia: error: {exc}", file=stderr)
        return EXIT_USAGE
    except (InputError, KnowledgeBaseError, ValueError, TypeError, KeyError) as exc:
        print(f"analogia: error: {exc}", file=stderr)
        return EXIT_INPUT
    if args.format == "structured":
        stdout.write(json.dumps({"reports": reports}, indent=2, sort_keys=True, default=value_to_json) + "\n")
    else:
        stdout.write("\n".join(lines) + "\n")
    return status


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
