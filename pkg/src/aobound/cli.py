"""Command-line front end: ``aobound bounds|oracle|decompose|report <path> [options]``.

Exit codes:
    0  success
    1  unreadable file or other I/O failure
    2  usage error (argparse)
    3  malformed input (model, evidence or ordering file)
    4  exact count aborted at the configured node limit
    5  batch finished with at least one failed instance
    6  internal consistency failure (bound below the exact count, invalid decomposition)
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass
from pathlib import Path

from .bounds import BoundReport, best_bounds, evaluate_ordering
from .decomposition import (
    build_bucket_tree,
    check_hypertree_condition,
    tree_width,
    verify_tree_decomposition,
)
from .graph import Ordering, OrderingError, build_primal_graph, parse_ordering, triangulate
from .model import ModelError, apply_evidence, read_evidence, read_model
from .oracle import DEFAULT_NODE_LIMIT, NodeLimitExceeded, count_context_minimal
from . import report as fmt

EXIT_OK = 0
EXIT_IO = 1
EXIT_INPUT = 3
EXIT_LIMIT = 4
EXIT_PARTIAL = 5
EXIT_INCONSISTENT = 6

DEFAULT_SEED = 20090101
DEFAULT_ORDERINGS = 100


@dataclass
class RunConfig:
    command: str
    path: Path
    evidence: Path | None = None
    num_orderings: int = DEFAULT_ORDERINGS
    seed: int = DEFAULT_SEED
    ordering_file: Path | None = None
    include_ancestors: bool = True
    zero_epsilon: float = 0.0
    output: str = "table"
    log10: bool = False
    node_limit: int = DEFAULT_NODE_LIMIT

    def __post_init__(self):
        if self.num_orderings < 1:
            raise ValueError("--orderings must be >= 1")
        if self.node_limit < 1:
            raise ValueError("--node-limit must be >= 1")
        if self.zero_epsilon < 0:
            raise ValueError("--zero-epsilon must be >= 0")


class CliError(Exception):
    def __init__(self, message: str, code: int):
        super().__init__(message)
        self.code = code


def instance_name(path: Path) -> str:
    name = path.name
    return name[:-4] if name.endswith(".uai") else name


def find_evidence(path: Path) -> Path | None:
    """``<file>.evid`` first, then ``<stem>.evid``."""
    for cand in (path.with_name(path.name + ".evid"), path.with_name(instance_name(path) + ".evid")):
        if cand.is_file():
            return cand
    return None


def load(cfg: RunConfig, path: Path, evidence: Path | None):
    try:
        model = read_model(path, cfg.zero_epsilon)
        if evidence is None:
            evidence = find_evidence(path)
        if evidence is not None:
            model = apply_evidence(model, read_evidence(evidence))
    except ModelError as exc:
        raise CliError(f"{path}: {exc}", EXIT_INPUT) from None
    except OSError as exc:
        raise CliError(f"{exc}", EXIT_IO) from None
    return model


def load_ordering(cfg: RunConfig, n: int) -> Ordering | None:
    if cfg.ordering_file is None:
        return None
    try:
        ordering = parse_ordering(cfg.ordering_file.read_text())
        ordering.validate(n)
    except OrderingError as exc:
        raise CliError(f"{cfg.ordering_file}: {exc}", EXIT_INPUT) from None
    except OSError as exc:
        raise CliError(f"{exc}", EXIT_IO) from None
    return ordering


def select_report(cfg: RunConfig, model) -> BoundReport:
    """Report for the ordering file if given, else the best minfill ordering."""
    ordering = load_ordering(cfg, model.n)
    if ordering is not None:
        return evaluate_ordering(model, ordering, cfg.include_ancestors)
    return best_bounds(model, cfg.num_orderings, cfg.seed, cfg.include_ancestors).best


def render(cfg: RunConfig, rows, extra=None, with_cm=False) -> str:
    if cfg.output == "csv":
        return fmt.to_csv(rows, cfg.log10, with_cm)
    if cfg.output == "json":
        return fmt.to_json(extra)
    return fmt.to_table(rows, cfg.log10, with_cm)


def cmd_bounds(cfg: RunConfig, out) -> int:
    model = load(cfg, cfg.path, cfg.evidence)
    rep = select_report(cfg, model)
    row = fmt.Row.from_report(instance_name(cfg.path), model, rep)
    out.write(render(cfg, [row], fmt.row_dict(row, rep)))
    return EXIT_OK


def cmd_oracle(cfg: RunConfig, out) -> int:
    model = load(cfg, cfg.path, cfg.evidence)
    rep = select_report(cfg, model)
    tree = build_bucket_tree(model, triangulate(build_primal_graph(model), rep.ordering)[0], rep.ordering)
    try:
        result = count_context_minimal(model, tree, cfg.node_limit)
    except NodeLimitExceeded as exc:
        raise CliError(str(exc), EXIT_LIMIT) from None
    row = fmt.Row.from_report(instance_name(cfg.path), model, rep, result.total)
    chain_ok = result.total <= rep.hwb <= rep.twb <= rep.asymptotic
    data = fmt.row_dict(row, rep)
    data["per_layer_cm"] = result.per_layer
    data["chain_ok"] = chain_ok
    text = render(cfg, [row], data, with_cm=True)
    if cfg.output == "table":
        text += f"check cm <= hwb <= twb <= asymptotic: {'ok' if chain_ok else 'FAILED'}\n"
    out.write(text)
    return EXIT_OK if chain_ok else EXIT_INCONSISTENT


def cmd_decompose(cfg: RunConfig, out) -> int:
    model = load(cfg, cfg.path, cfg.evidence)
    rep = select_report(cfg, model)
    filled, width = triangulate(build_primal_graph(model), rep.ordering)
    tree = build_bucket_tree(model, filled, rep.ordering)
    valid, violations = verify_tree_decomposition(tree, model)
    holds, hw = check_hypertree_condition(tree, model)
    if cfg.output == "json":
        out.write(fmt.to_json({
            "instance": instance_name(cfg.path),
            "ordering": list(rep.ordering.sequence),
            "w": tree_width(tree),
            "clusters": [
                {
                    "variable": c.variable,
                    "chi": sorted(c.chi),
                    "psi": sorted(c.psi),
                    "parent": -1 if c.parent is None else c.parent,
                }
                for c in (tree.clusters[x] for x in rep.ordering.sequence)
            ],
            "valid": valid,
            "violations": violations,
            "hypertree": holds,
            "hypertree_width": hw,
        }))
    else:
        out.write(tree.export())
        out.write(f"# ordering: {' '.join(map(str, rep.ordering.sequence))}\n")
        out.write(f"# w: {width}\n")
        out.write(f"# hypertree condition: {'holds, hw ' + str(hw) if holds else 'fails'}\n")
        out.write(f"# validation: {'valid' if valid else 'INVALID'}\n")
        for v in violations:
            out.write(f"#   {v}\n")
    return EXIT_OK if valid else EXIT_INCONSISTENT


def cmd_report(cfg: RunConfig, out, err) -> int:
    if not cfg.path.is_dir():
        raise CliError(f"{cfg.path}: not a directory", EXIT_IO)
    files = sorted(p for p in cfg.path.iterdir() if p.is_file() and p.suffix == ".uai")
    if not files:
        raise CliError(f"{cfg.path}: no .uai instances found", EXIT_INPUT)
    rows, items, failed = [], [], False
    for path in files:
        name = instance_name(path)
        try:
            model = load(cfg, path, None)
            rep = best_bounds(model, cfg.num_orderings, cfg.seed, cfg.include_ancestors).best
            row = fmt.Row.from_report(name, model, rep)
            items.append(fmt.row_dict(row))
        except CliError as exc:
            failed = True
            err.write(f"error: {exc}\n")
            row = fmt.Row.failed(name, str(exc))
            items.append(fmt.row_dict(row))
        rows.append(row)
    out.write(render(cfg, rows, items))
    return EXIT_PARTIAL if failed else EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="aobound", description=__doc__.split("\n")[0])
    p.add_argument("command", choices=["bounds", "oracle", "decompose", "report"])
    p.add_argument("path", type=Path, help="instance file, or directory for 'report'")
    p.add_argument("--evidence", type=Path, help="evidence file (default: <instance>.evid if present)")
    p.add_argument("--orderings", type=int, default=DEFAULT_ORDERINGS, help="minfill orderings to try")
    p.add_argument("--seed", type=int, default=DEFAULT_SEED, help="base seed; ordering i uses seed + i")
    p.add_argument("--ordering-file", type=Path, help="fixed ordering, bypasses minfill")
    p.add_argument("--no-ancestors", action="store_true", help="cover with bucket functions only")
    p.add_argument("--zero-epsilon", type=float, default=0.0)
    p.add_argument("--log10", action="store_true", help="print bounds as log10 with 2 decimals")
    p.add_argument("--format", dest="output", choices=["table", "csv", "json"], default=None)
    p.add_argument("--node-limit", type=int, default=DEFAULT_NODE_LIMIT)
    return p


def main(argv=None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    args = build_parser().parse_args(argv)
    output = args.output or ("csv" if args.command == "report" else "table")
    try:
        cfg = RunConfig(
            command=args.command,
            path=args.path,
            evidence=args.evidence,
            num_orderings=args.orderings,
            seed=args.seed,
            ordering_file=args.ordering_file,
            include_ancestors=not args.no_ancestors,
            zero_epsilon=args.zero_epsilon,
            output=output,
            log10=args.log10,
            node_limit=args.node_limit,
        )
    except ValueError as exc:
        err.write(f"error: {exc}\n")
        return 2
    try:
        if cfg.command == "bounds":
            return cmd_bounds(cfg, out)
        if cfg.command == "oracle":
            return cmd_oracle(cfg, out)
        if cfg.command == "decompose":
            return cmd_decompose(cfg, out)
        return cmd_report(cfg, out, err)
    except CliError as exc:
        err.write(f"error: {exc}\n")
        return exc.code


if __name__ == "__main__":
    sys.exit(main())
