"""Command-line interface.

Exit codes: 0 success, 1 domain error, 2 usage error. With --json all
report output on stdout is machine-parseable JSON; diagnostics go to
stderr.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import jsonio, store, workflow
from .errors import StagegateError
from .model import (
    Severity,
    lint_model,
    load_model,
    seed_model_path,
)
from .planner import render_benchmark
from .scoring import (
    Answer,
    DEGREE_WORDS,
    EXCUSE_POLICY,
    DEFAULT_POLICY,
    NotApplicable,
)

EXIT_OK = 0
EXIT_DOMAIN = 1
EXIT_USAGE = 2


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="stagegate",
        description="Staged maturity assessment for IT service outsourcing",
    )
    p.add_argument("--workspace", metavar="DIR",
                   help=f"workspace directory (default: ${store.ENV_HOME} or ~/.stagegate)")
    p.add_argument("--json", action="store_true", help="emit JSON on stdout")
    p.add_argument("--policy", choices=["strict", "excuse"], default="strict",
                   help="not-applicable handling (default: strict)")
    sub = p.add_subparsers(dest="command", required=True)

    model_p = sub.add_parser("model", help="model file operations")
    model_sub = model_p.add_subparsers(dest="model_command", required=True)
    validate_p = model_sub.add_parser("validate", help="lint a model definition file")
    validate_p.add_argument("path", help="model JSON file")

    assess_p = sub.add_parser("assess", help="assessment workflow")
    assess_sub = assess_p.add_subparsers(dest="assess_command", required=True)

    init_p = assess_sub.add_parser("init", help="create an assessment")
    init_p.add_argument("--institution", required=True)
    init_p.add_argument("--model", metavar="FILE", help="model file (default: bundled seed)")
    init_p.add_argument("--id", help="assessment id (default: generated)")

    answer_p = assess_sub.add_parser("answer", help="record one answer")
    answer_p.add_argument("--id", help="assessment id (default: most recent)")
    answer_p.add_argument("--interactive", action="store_true",
                          help="walk the questionnaire item by item")
    answer_p.add_argument("code", nargs="?", help="indicator code, e.g. FA2b")
    answer_p.add_argument("value", nargs="?",
                          help='yes|no|none|low|medium|high|na:"reason"')

    score_p = assess_sub.add_parser("score", help="compute the maturity level")
    score_p.add_argument("--id", help="assessment id (default: most recent)")

    gap_p = assess_sub.add_parser("gap", help="set a target and list the gaps")
    gap_p.add_argument("--id", help="assessment id (default: most recent)")
    gap_p.add_argument("--target", type=int, required=True, metavar="N")
    gap_p.add_argument("--rationale", default="")

    plan_p = assess_sub.add_parser("plan", help="recommend improvement actions")
    plan_p.add_argument("--id", help="assessment id (default: most recent)")

    rem_p = assess_sub.add_parser("remeasure", help="close the cycle with a fresh score")
    rem_p.add_argument("--id", help="assessment id (default: most recent)")

    cmp_p = assess_sub.add_parser("compare", help="benchmark assessments")
    cmp_p.add_argument("ids", nargs="+", metavar="ID")

    serve_p = sub.add_parser("serve", help="run the HTTP service")
    serve_p.add_argument("--port", type=int, default=8734)
    serve_p.add_argument("--host", default="127.0.0.1")
    serve_p.add_argument("--model", metavar="FILE", help="model file (default: bundled seed)")

    return p


def parse_answer_value(raw: str):
    lowered = raw.lower()
    if lowered == "yes":
        return True
    if lowered == "no":
        return False
    if lowered in DEGREE_WORDS:
        return DEGREE_WORDS[lowered]
    if lowered.startswith("na:"):
        return NotApplicable(justification=raw[3:].strip().strip('"'))
    raise ValueError(
        f"invalid answer value {raw!r}: expected yes|no|none|low|medium|high|na:\"reason\"")


def _policy(args):
    return EXCUSE_POLICY if args.policy == "excuse" else DEFAULT_POLICY


def _workspace(args) -> store.Workspace:
    return store.open_workspace(args.workspace)


def _resolve_id(ws: store.Workspace, explicit: str | None) -> str:
    if explicit:
        return explicit
    index = store.list_assessments(ws)
    if not index:
        raise StagegateError("no assessments in workspace (run 'assess init' first)")
    return list(index)[-1]


def _emit(args, payload: dict, text: str) -> None:
    if args.json:
        print(json.dumps(payload, indent=2))
    else:
        print(text)


# --- commands --------------------------------------------------------------

def cmd_model_validate(args) -> int:
    path = Path(args.path)
    if not path.exists():
        print(f"error: no such file: {path}", file=sys.stderr)
        return EXIT_USAGE
    model = load_model(path)
    findings = lint_model(model)
    if args.json:
        print(json.dumps({"findings": [
            {"severity": f.severity.value, "message": f.message} for f in findings
        ]}, indent=2))
    else:
        for f in findings:
            print(f"{f.severity.value}: {f.message}")
        print(f"{len(findings)} finding(s) for {model.ref}")
    has_errors = any(f.severity is Severity.ERROR for f in findings)
    return EXIT_DOMAIN if has_errors else EXIT_OK


def cmd_init(args) -> int:
    root = args.workspace or store.default_root()
    ws = store.init_workspace(root)
    model = load_model(args.model) if args.model else load_model(seed_model_path())
    aid, version = workflow.create_assessment(ws, model, args.institution,
                                              assessment_id=args.id,
                                              policy=_policy(args))
    _emit(args, {"assessment_id": aid, "version": version, "model": model.ref},
          f"created assessment {aid} for {args.institution} against {model.ref}")
    return EXIT_OK


def cmd_answer(args) -> int:
    ws = _workspace(args)
    aid = _resolve_id(ws, args.id)
    if args.interactive:
        return _interactive_answers(ws, aid)
    if not args.code or not args.value:
        print("error: answer requires CODE and VALUE (or --interactive)", file=sys.stderr)
        return EXIT_USAGE
    try:
        value = parse_answer_value(args.value)
    except ValueError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    version = workflow.record_answer(ws, aid, Answer(indicator_code=args.code, value=value))
    _emit(args, {"assessment_id": aid, "code": args.code, "version": version},
          f"recorded {args.code} (version {version})")
    return EXIT_OK


def _interactive_answers(ws: store.Workspace, aid: str) -> int:
    model = workflow.model_for(ws, aid)
    print("Enter an answer for each item, or press Enter to skip.", file=sys.stderr)
    for concept in model.concepts:
        if not concept.indicators:
            continue
        print(f"\n== {concept.name} ==", file=sys.stderr)
        for ind in concept.indicators:
            hint = "yes/no" if ind.response_kind.value == "boolean" else "none/low/medium/high"
            while True:
                raw = input(f"{ind.code} [{hint}]: {ind.question}\n> ").strip()
                if not raw:
                    break
                try:
                    value = parse_answer_value(raw)
                    workflow.record_answer(ws, aid, Answer(indicator_code=ind.code, value=value))
                    break
                except (ValueError, StagegateError) as e:
                    print(f"  {e}", file=sys.stderr)
    return EXIT_OK


def cmd_score(args) -> int:
    ws = _workspace(args)
    aid = _resolve_id(ws, args.id)
    report = workflow.current_score(ws, aid, _policy(args))
    if args.json:
        print(json.dumps(jsonio.score_to_dict(report), indent=2))
        return EXIT_OK
    print(f"level: {report.overall_level}")
    for cid, level in report.per_concept_levels.items():
        flag = " (vacuous)" if cid in report.vacuous_concepts else ""
        print(f"  {cid}: {level}{flag}")
    return EXIT_OK


def cmd_gap(args) -> int:
    ws = _workspace(args)
    aid = _resolve_id(ws, args.id)
    workflow.set_target(ws, aid, args.target, args.rationale)
    report = workflow.identify_gaps(ws, aid, _policy(args))
    if args.json:
        print(json.dumps(jsonio.gap_to_dict(report), indent=2))
        return EXIT_OK
    state = "already met" if report.already_met else f"{len(report.gaps)} gap(s)"
    print(f"current level {report.current_level}, target {report.target.rank}: {state}")
    for item in report.gaps:
        print(f"  [{item.sub.rank}] {item.sub.code} ({item.concept_id}): {item.status.value}")
    return EXIT_OK


def cmd_plan(args) -> int:
    ws = _workspace(args)
    aid = _resolve_id(ws, args.id)
    plan = workflow.recommend_actions(ws, aid, _policy(args))
    if args.json:
        print(json.dumps(jsonio.plan_to_dict(plan), indent=2))
        return EXIT_OK
    if not plan.items:
        print("no gaps; nothing to plan")
    for item in plan.items:
        print(f"{item.concept_name} (level {item.level} plan; gaps: {', '.join(item.gap_codes)})")
        print(f"  objective: {item.objective}")
        for action in item.actions:
            print(f"  action: {action}")
        if item.no_plan_entry:
            print("  (no plan entry published)")
    return EXIT_OK


def cmd_remeasure(args) -> int:
    ws = _workspace(args)
    aid = _resolve_id(ws, args.id)
    score, delta = workflow.remeasure(ws, aid, _policy(args))
    if args.json:
        print(json.dumps({"score": jsonio.score_to_dict(score),
                          "delta": jsonio.delta_to_dict(delta)}, indent=2))
        return EXIT_OK
    print(f"level: {delta.level_before} -> {delta.level_after}")
    for t in delta.transitions:
        print(f"  {t.sub.code}@{t.sub.rank}: {t.before.value} -> {t.after.value}")
    return EXIT_OK


def cmd_compare(args) -> int:
    ws = _workspace(args)
    table = workflow.benchmark(ws, args.ids, _policy(args))
    if args.json:
        print(json.dumps(jsonio.benchmark_to_dict(table), indent=2))
    else:
        print(render_benchmark(table))
    return EXIT_OK


def cmd_serve(args) -> int:
    import socket

    import uvicorn

    from .model import load_model as _load
    from .service import create_app

    root = args.workspace or store.default_root()
    ws = store.init_workspace(root)
    model = _load(args.model) if args.model else _load(seed_model_path())
    store.save_model(ws, model)

    sock = socket.socket(socket.AF_INET, socket.SOCK_STREAM)
    sock.setsockopt(socket.SOL_SOCKET, socket.SO_REUSEADDR, 1)
    try:
        sock.bind((args.host, args.port))
    except OSError as e:
        print(f"error: cannot bind {args.host}:{args.port}: {e}", file=sys.stderr)
        sock.close()
        return EXIT_DOMAIN
    port = sock.getsockname()[1]
    print(f"listening on http://{args.host}:{port}", flush=True)

    app = create_app(ws, model)
    config = uvicorn.Config(app, log_level="warning")
    server = uvicorn.Server(config)
    sock.listen(128)
    server.run(sockets=[sock])
    return EXIT_OK


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "model":
            return cmd_model_validate(args)
        if args.command == "serve":
            return cmd_serve(args)
        dispatch = {
            "init": cmd_init,
            "answer": cmd_answer,
            "score": cmd_score,
            "gap": cmd_gap,
            "plan": cmd_plan,
            "remeasure": cmd_remeasure,
            "compare": cmd_compare,
        }
        return dispatch[args.assess_command](args)
    except StagegateError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_DOMAIN


def entrypoint() -> None:
    raise SystemExit(main())


if __name__ == "__main__":
    entrypoint()
