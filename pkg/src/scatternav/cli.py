"""Batch entry points: synthesize datasets, build and validate trees, replay
scripted sessions, compare samplers, and serve the HTTP API.

Exit codes: 0 success, 1 usage error, 2 data error, 3 internal error.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .data import load_dataset, save_dataset
from .errors import ScatterNavError
from .layout import Explorer, ScaleParams
from .metrics import evaluate_samplers, write_report
from .sampling import GridConfig
from .synth import make_blobs
from .tree import BuildConfig, build_tree, load_tree, save_tree, validate_tree

USAGE_ERROR, DATA_ERROR, INTERNAL_ERROR = 1, 2, 3


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):  # argparse defaults to exit code 2
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(USAGE_ERROR)


def _build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="scatternav", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("synth", help="generate a seeded blob dataset")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--blobs", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--output", required=True)
    p.add_argument("--format", choices=["csv", "jsonl"], default="csv")
    p.add_argument("--features", type=int, default=0, help="optional feature vector length")
    p.add_argument("--spread", type=float, default=1.0)

    p = sub.add_parser("build", help="build a cluster tree from a dataset")
    p.add_argument("--input", required=True)
    p.add_argument("--format", choices=["csv", "jsonl"], default="csv")
    p.add_argument("--k", type=float, required=True)
    p.add_argument("--alpha", type=int, default=1)
    p.add_argument("--pi", type=int, default=200)
    p.add_argument("--output", required=True)

    p = sub.add_parser("validate", help="check a tree file against its dataset")
    p.add_argument("--input", required=True)
    p.add_argument("--format", choices=["csv", "jsonl"], default="csv")
    p.add_argument("--tree", required=True)

    p = sub.add_parser("replay", help="run a scripted focus session, exporting one frame per step")
    p.add_argument("--input", required=True)
    p.add_argument("--format", choices=["csv", "jsonl"], default="csv")
    p.add_argument("--tree", required=True)
    p.add_argument("--script", required=True)
    p.add_argument("--output-dir", required=True)
    p.add_argument("--delta-px", type=float, default=100.0)
    p.add_argument("--viewport-px", type=float, default=1000.0)

    p = sub.add_parser("metrics", help="compare sampler coverage/redundancy")
    p.add_argument("--input", required=True)
    p.add_argument("--format", choices=["csv", "jsonl"], default="csv")
    p.add_argument("--samplers", default="grid,reservoir")
    p.add_argument("--k", type=float, required=True)
    p.add_argument("--alpha", type=int, default=1)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--output", required=True)

    p = sub.add_parser("serve", help="serve the HTTP API")
    p.add_argument("--port", type=int, default=8000)
    p.add_argument("--host", default="127.0.0.1")
    return parser


def _cmd_synth(args) -> int:
    dataset = make_blobs(args.n, args.blobs, args.seed, spread=args.spread, features=args.features)
    save_dataset(dataset, args.output, args.format)
    print(f"wrote {len(dataset)} points to {args.output}")
    return 0


def _cmd_build(args) -> int:
    dataset = load_dataset(args.input, args.format)
    config = BuildConfig(grid=GridConfig(k=args.k, alpha=args.alpha), pi=args.pi)
    root = build_tree(dataset, config)
    save_tree(root, dataset, config, args.output)
    n_nodes = sum(1 for _ in root.walk())
    depth = max(n.level for n in root.walk()) - 1
    print(f"wrote tree with {n_nodes} nodes (depth {depth}) to {args.output}")
    return 0


def _cmd_validate(args) -> int:
    dataset = load_dataset(args.input, args.format)
    root, config = load_tree(args.tree, dataset)
    report = validate_tree(root, dataset, config.pi)
    if report.ok:
        print(f"ok: {sum(1 for _ in root.walk())} nodes, {len(report.collapsed)} collapsed leaves")
        return 0
    for violation in report.violations:
        print(f"violation: {violation}", file=sys.stderr)
    return DATA_ERROR


def _parse_script(path: Path) -> list[tuple[int, str, int | None]]:
    """Returns (line number, op, argument) triples; errors name the line."""
    steps: list[tuple[int, str, int | None]] = []
    for line_no, raw in enumerate(path.read_text(encoding="utf-8").splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        op = parts[0]
        if op in ("request", "compare", "set_global_level"):
            if len(parts) != 2 or not parts[1].lstrip("-").isdigit():
                raise ScatterNavError(f"script line {line_no}: {op} needs one integer argument")
            steps.append((line_no, op, int(parts[1])))
        elif op in ("resolve", "resolve_comparison"):
            if len(parts) != 1:
                raise ScatterNavError(f"script line {line_no}: {op} takes no argument")
            steps.append((line_no, op, None))
        else:
            raise ScatterNavError(f"script line {line_no}: unknown op {op!r}")
    return steps


def _cmd_replay(args) -> int:
    dataset = load_dataset(args.input, args.format)
    root, _config = load_tree(args.tree, dataset)
    steps = _parse_script(Path(args.script))
    params = ScaleParams.for_dataset(dataset, delta_px=args.delta_px, viewport_px=args.viewport_px)
    explorer = Explorer(root, dataset, params)

    out_dir = Path(args.output_dir)
    out_dir.mkdir(parents=True, exist_ok=True)

    def dump(step: int, frame) -> None:
        (out_dir / f"frame_{step:04d}.json").write_text(frame.to_json(), encoding="utf-8")

    dump(0, explorer.frame)
    for step, (line_no, op, arg) in enumerate(steps, start=1):
        try:
            if op == "request":
                frame = explorer.request_focus(arg)
            elif op == "compare":
                frame = explorer.compare_focus(arg)
            elif op == "resolve":
                frame = explorer.resolve_focus()
            elif op == "resolve_comparison":
                frame = explorer.resolve_comparison()
            else:
                frame = explorer.set_global_level(arg)
        except ScatterNavError as exc:
            raise ScatterNavError(f"script line {line_no}: {exc}") from None
        dump(step, frame)
    print(f"wrote {len(steps) + 1} frames to {out_dir}")
    return 0


def _cmd_metrics(args) -> int:
    dataset = load_dataset(args.input, args.format)
    samplers = [s.strip() for s in args.samplers.split(",") if s.strip()]
    reports = evaluate_samplers(
        dataset,
        GridConfig(k=args.k, alpha=args.alpha),
        samplers=samplers,
        seed=args.seed,
    )
    write_report(reports, args.output)
    print(f"wrote {len(reports)} report rows to {args.output}")
    return 0


def _cmd_serve(args) -> int:
    import uvicorn

    from .service import create_app

    uvicorn.run(create_app(), host=args.host, port=args.port)
    return 0


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    handlers = {
        "synth": _cmd_synth,
        "build": _cmd_build,
        "validate": _cmd_validate,
        "replay": _cmd_replay,
        "metrics": _cmd_metrics,
        "serve": _cmd_serve,
    }
    try:
        return handlers[args.command](args)
    except ScatterNavError as exc:
        print(f"error [{exc.code}]: {exc}", file=sys.stderr)
        return DATA_ERROR
    except Exception as exc:  # unexpected
        print(f"internal error: {exc}", file=sys.stderr)
        return INTERNAL_ERROR


if __name__ == "__main__":
    sys.exit(main())
