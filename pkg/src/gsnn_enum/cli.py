"""Command-line front end.

Exit codes: 0 ok, 1 verification failure, 2 usage or input error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import sys
from dataclasses import dataclass, replace
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import linalg
from .architect import (
    SCHEMA,
    SNNInstance,
    architecture_to_json,
    enumerate_architectures,
    find,
    sample_instance,
    type_counts,
)
from .cohomology import cohomology_dot, cohomology_group
from .config import DEFAULT_MAX_ORDER, DEFAULT_TOL, EXACT, MODES, Tolerances
from .errors import GroupSpecError, GsnnError, NonOrthogonalGenerator, OrderBoundExceeded
from .groups import FiniteGroup, pair_classes, subgroup_classes
from .morphisms import morphism_graph
from .presets import REFERENCE_GROUPS, group_from_spec, load_group_file
from .verify import invariance_report

log = logging.getLogger("gsnn_enum")

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


@dataclass(frozen=True)
class RunConfig:
    command: str
    group: str | None = None
    group_file: str | None = None
    mode: str = EXACT
    eps: float | None = None
    out: str | None = None
    seed: int = 0
    trials: int = 100
    max_order: int = DEFAULT_MAX_ORDER
    arch: str | None = None
    groups: tuple[str, ...] = ()
    instance: str | None = None

    def __post_init__(self):
        if self.mode not in MODES:
            raise GroupSpecError(f"mode must be one of {MODES}")
        if self.eps is not None and self.eps <= 0:
            raise GroupSpecError("eps must be positive")
        if self.max_order < 1:
            raise GroupSpecError("max order must be at least 1")
        if self.trials < 0:
            raise GroupSpecError("trials must be non-negative")

    @property
    def tol(self) -> Tolerances:
        if self.eps is None:
            return DEFAULT_TOL
        return replace(DEFAULT_TOL, rank=self.eps, equal=self.eps, invariance=self.eps)


def dumps(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def load_group(cfg: RunConfig, spec: str | None = None) -> FiniteGroup:
    exact = None if cfg.mode == EXACT else False
    kw = dict(max_order=cfg.max_order, tol=cfg.tol, exact=exact)
    if spec is not None:
        return group_from_spec(spec, **kw)
    if cfg.group_file:
        try:
            return load_group_file(cfg.group_file, **kw)
        except (OSError, json.JSONDecodeError) as exc:
            raise GroupSpecError(f"cannot read group file: {exc}") from exc
    if cfg.group:
        return group_from_spec(cfg.group, **kw)
    raise GroupSpecError("a group is required (--group or --group-file)")


def _out_dir(cfg: RunConfig) -> Path | None:
    if cfg.out is None:
        return None
    p = Path(cfg.out)
    p.mkdir(parents=True, exist_ok=True)
    return p


def _write(path: Path, text: str):
    path.write_text(text)
    log.info("wrote %s", path)


def summary_csv(archs) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["name", "H_order", "K_order", "type", "hidden"])
    for a in archs:
        w.writerow([a.name, a.H.order, a.K.order, a.type, a.hidden])
    return buf.getvalue()


def cmd_enumerate(cfg: RunConfig) -> int:
    G = load_group(cfg)
    archs = enumerate_architectures(G)
    out = _out_dir(cfg)
    table = summary_csv(archs)
    if out is not None:
        for a in archs:
            _write(out / f"arch_{a.name}.json", dumps(architecture_to_json(a)))
        _write(out / "summary.csv", table)
    sys.stdout.write(table)
    return EXIT_OK


def describe_group(G: FiniteGroup) -> dict:
    classes = subgroup_classes(G)
    return {
        "schema": SCHEMA,
        "group": G.name,
        "order": G.order,
        "dim": G.dim,
        "mode": G.mode,
        "subgroups": len(G.subgroups),
        "subgroup_classes": [
            {"order": c[0].order, "size": len(c), "representative": list(c[0].members)} for c in classes
        ],
        "pair_classes": len(pair_classes(G)),
        "cohomology": [cohomology_group(G, c[0]).to_json() for c in classes],
        "architectures": [a.name for a in enumerate_architectures(G)],
    }


def cmd_describe(cfg: RunConfig) -> int:
    G = load_group(cfg)
    if cfg.arch is None:
        doc = describe_group(G)
    else:
        doc = architecture_to_json(find(enumerate_architectures(G), cfg.arch))
    text = dumps(doc)
    out = _out_dir(cfg)
    if out is not None:
        _write(out / (f"describe_{cfg.arch}.json" if cfg.arch else "describe.json"), text)
    sys.stdout.write(text)
    return EXIT_OK


def _parse_num(x, exact: bool):
    if exact and isinstance(x, (int, str)):
        return Fraction(x)
    return float(x)


def load_instance(path: str, exact: bool) -> tuple[str, SNNInstance]:
    """Instance file: {"schema": 1, "architecture": name, "W", "a", "b", "c", "d"}.

    Integers and fraction strings stay exact for exact groups.
    """
    with open(path) as fh:
        data = json.load(fh)
    if data.get("schema") != SCHEMA:
        raise GroupSpecError(f"unsupported instance schema {data.get('schema')!r}")
    flat = [x for row in data["W"] for x in row] + data["a"] + data["b"] + data["c"] + [data["d"]]
    ex = exact and all(isinstance(x, (int, str)) for x in flat)

    def arr(v):
        vals = [_parse_num(x, ex) for x in v]
        return linalg.exact_array(vals) if ex else np.array(vals, dtype=float)

    W = np.stack([arr(r) for r in data["W"]])
    return data["architecture"], SNNInstance(W, arr(data["a"]), arr(data["b"]), arr(data["c"]), _parse_num(data["d"], ex))


def instance_to_json(name: str, inst: SNNInstance) -> dict:
    def num(x):
        if isinstance(x, Fraction):
            return int(x) if x.denominator == 1 else str(x)
        return float(x)

    return {
        "schema": SCHEMA,
        "architecture": name,
        "W": [[num(x) for x in row] for row in inst.W],
        "a": [num(x) for x in inst.a],
        "b": [num(x) for x in inst.b],
        "c": [num(x) for x in inst.c],
        "d": num(inst.d),
    }


def cmd_verify(cfg: RunConfig) -> int:
    G = load_group(cfg)
    archs = enumerate_architectures(G)
    if cfg.trials == 0:
        log.warning("zero trials requested: the check passes vacuously")
    jobs = []
    if cfg.instance:
        name, inst = load_instance(cfg.instance, G.exact)
        jobs.append((find(archs, name), inst))
    else:
        sel = archs if cfg.arch is None else [find(archs, cfg.arch)]
        for a in sel:
            # exact groups get an exact instance so the gap is computed without rounding
            inst = sample_instance(a, a=1, b=1, unit_normalize=not G.exact)
            jobs.append((a, inst))
    eps = cfg.tol.invariance
    reports = []
    for arch, inst in jobs:
        gap = invariance_report(arch, inst, cfg.trials, cfg.seed)
        reports.append(
            {"architecture": arch.name, "trials": cfg.trials, "max_gap": float(gap), "pass": bool(gap <= eps)}
        )
    doc = {"schema": SCHEMA, "group": G.name, "eps": eps, "seed": cfg.seed, "reports": reports}
    text = dumps(doc)
    out = _out_dir(cfg)
    if out is not None:
        _write(out / "verify.json", text)
    sys.stdout.write(text)
    return EXIT_OK if all(r["pass"] for r in reports) else EXIT_FAIL


def cmd_graph(cfg: RunConfig) -> int:
    G = load_group(cfg)
    archs = enumerate_architectures(G)
    graph = morphism_graph(archs)
    dot = graph.to_dot()
    out = _out_dir(cfg)
    if out is not None:
        _write(out / "morphisms.dot", dot)
        _write(out / "morphisms.json", dumps(graph.to_json()))
        for a in archs:
            _write(out / f"cohomology_{a.name}.dot", cohomology_dot(a.rep, f"{G.name} {a.name}"))
    sys.stdout.write(dot)
    return EXIT_OK


TABLE_HEADER = ["group", "order", "type1", "type2", "type1_pair_classes", "type2_pair_classes"]


def table_rows(cfg: RunConfig, names) -> tuple[list[list], list[str]]:
    rows, failures = [], []
    for name in names:
        try:
            G = load_group(cfg, name)
            c = type_counts(G)
            rows.append([name, G.order, c.ratio(1), c.ratio(2), c.ratio(1, True), c.ratio(2, True)])
        except GsnnError as exc:
            log.error("%s: %s", name, exc)
            failures.append(name)
    return rows, failures


def render_markdown(rows) -> str:
    lines = ["| " + " | ".join(TABLE_HEADER) + " |", "|" + "---|" * len(TABLE_HEADER)]
    lines += ["| " + " | ".join(str(x) for x in r) + " |" for r in rows]
    return "\n".join(lines) + "\n"


def cmd_table(cfg: RunConfig) -> int:
    names = cfg.groups if cfg.groups else REFERENCE_GROUPS
    if cfg.groups == ("",):
        names = ()
    rows, failures = table_rows(cfg, names)
    md = render_markdown(rows)
    out = _out_dir(cfg)
    if out is not None:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(TABLE_HEADER)
        w.writerows(rows)
        _write(out / "table.csv", buf.getvalue())
        _write(out / "table.md", md)
    sys.stdout.write(md)
    return EXIT_FAIL if failures else EXIT_OK


COMMANDS = {
    "enumerate": cmd_enumerate,
    "describe": cmd_describe,
    "verify": cmd_verify,
    "graph": cmd_graph,
    "table": cmd_table,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    src = common.add_mutually_exclusive_group()
    src.add_argument("--group", help="preset name (e.g. C6, D6-rot, Q8) or inline JSON spec")
    src.add_argument("--group-file", help="path to a JSON group spec")
    common.add_argument("--mode", choices=MODES, default=EXACT, help="arithmetic for permutation groups")
    common.add_argument("--eps", type=float, default=None, help="float tolerance override")
    common.add_argument("--out", default=None, help="output directory")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--trials", type=int, default=100)
    common.add_argument("--max-order", type=int, default=DEFAULT_MAX_ORDER)
    common.add_argument("-v", "--verbose", action="store_true")

    p = argparse.ArgumentParser(prog="gsnn-enum", description="Enumerate G-invariant shallow ReLU architectures.")
    sub = p.add_subparsers(dest="command", required=True)
    sub.add_parser("enumerate", parents=[common], help="write one JSON per architecture and a summary CSV")
    d = sub.add_parser("describe", parents=[common], help="group or single-architecture report")
    d.add_argument("--arch", help="architecture name i.j")
    v = sub.add_parser("verify", parents=[common], help="empirical invariance check")
    v.add_argument("--arch", help="only this architecture")
    v.add_argument("--instance", help="JSON instance file to check instead of sampled ones")
    sub.add_parser("graph", parents=[common], help="morphism graph and cohomology illustrations as DOT")
    t = sub.add_parser("table", parents=[common], help="admissible/total counts per type")
    t.add_argument("--groups", default=None, help="comma separated preset names (default: the 14 reference groups)")
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s: %(message)s")
    try:
        cfg = RunConfig(
            command=args.command,
            group=args.group,
            group_file=args.group_file,
            mode=args.mode,
            eps=args.eps,
            out=args.out,
            seed=args.seed,
            trials=args.trials,
            max_order=args.max_order,
            arch=getattr(args, "arch", None),
            groups=tuple(args.groups.split(",")) if getattr(args, "groups", None) is not None else (),
            instance=getattr(args, "instance", None),
        )
        return COMMANDS[cfg.command](cfg)
    except (GroupSpecError, NonOrthogonalGenerator, OrderBoundExceeded, KeyError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except GsnnError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
