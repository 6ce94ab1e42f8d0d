"""``mls`` command-line entry point.

Exit codes: 0 success / positive verdict, 1 negative verdict (invalid,
non-separable, not paratopic, ...), 2 usage or parameter error, 3 resource
limit.  ``--json`` prints one JSON object (see ``schema/result.schema.json``)
instead of the plain-text output.
"""
from __future__ import annotations

import argparse
import json
import logging
import sys
from dataclasses import dataclass

import numpy as np

from . import classification, completion, core, equivalence, separability
from .errors import MultiLatinError, ResourceLimit, UnsupportedOrder, UnsupportedParameters, ValidationError
from .io import (
    format_oa,
    format_semi_latin,
    format_square,
    parse_map,
    parse_mls,
    parse_oa,
    parse_sls,
    read_file,
)

EXIT_OK, EXIT_NO, EXIT_USAGE, EXIT_LIMIT = 0, 1, 2, 3


@dataclass
class RunConfig:
    jobs: int = 1
    node_limit: int = classification.DEFAULT_NODE_LIMIT
    long_run: bool = False
    seed: int = 0

    def __post_init__(self):
        if self.jobs < 1:
            raise ValueError("jobs must be >= 1")
        if self.node_limit < 1:
            raise ValueError("node_limit must be >= 1")


class Result:
    """What a subcommand produced: text for stdout, an exit code and a JSON payload."""

    def __init__(self, command, code=EXIT_OK, text="", verdict=None, message="", **extra):
        self.command = command
        self.code = code
        self.text = text
        self.verdict = verdict
        self.message = message
        self.extra = extra

    def payload(self):
        out = {"command": self.command, "exit_code": self.code, "verdict": self.verdict, "message": self.message}
        out.update(self.extra)
        return out


def _load_square(path, require_complete=False):
    return parse_mls(read_file(path), require_complete=require_complete)


# -- subcommands ---------------------------------------------------------------
def cmd_validate(args, cfg):
    try:
        parse_mls(read_file(args.file), require_complete=args.complete)
        report = core.ValidationReport()
    except ValidationError as exc:
        report = exc.report
    violations = [
        {"kind": v.kind.value, "row": v.row, "col": v.col, "symbol": v.symbol, "observed": v.observed}
        for v in report.violations
    ]
    msg = "valid" if report.valid else report.summary(limit=len(report.violations))
    return Result("validate", EXIT_OK if report.valid else EXIT_NO, msg + "\n", report.valid, msg, violations=violations)


def _generate(args, cfg):
    fam = args.family
    if fam == "Ln":
        return separability.construct_Ln(_need(args.n, "--n"))
    if fam == "Uk":
        k = _need(args.k, "--k")
        return separability.construct_Uk(k, separability.idempotent_quasigroup(k))
    if fam == "Uks":
        k, s = _need(args.k, "--k"), _need(args.s, "--s")
        if not 1 <= s <= k - 1:
            raise UnsupportedParameters(f"need 1 <= s <= k - 1, got s={s}")
        return separability.construct_Uks(
            k, s, separability.idempotent_quasigroup(k), separability.idempotent_quasigroup(s + 2)
        )
    if fam == "cyclic":
        return core.cyclic_simple(_need(args.n, "--n"), _need(args.k, "--k"))
    if fam == "inflate":
        return core.inflate(core.cyclic_latin(_need(args.n, "--n")), _need(args.k, "--k"))
    if fam == "random":
        from .corpus import random_square

        return random_square(_need(args.n, "--n"), _need(args.k, "--k"), np.random.default_rng(cfg.seed))
    raise AssertionError(fam)


def _need(value, flag):
    if value is None:
        raise UnsupportedParameters(f"{flag} is required for this family")
    return value


def cmd_gen(args, cfg):
    sq = _generate(args, cfg)
    text = format_square(sq)
    return Result("gen", text=text, square=text)


def cmd_complete(args, cfg):
    sq = completion.complete_rectangle(_load_square(args.file))
    text = format_square(sq)
    return Result("complete", text=text, square=text)


def cmd_embed(args, cfg):
    sq = completion.embed_partial(_load_square(args.file), args.order)
    text = format_square(sq)
    return Result("embed", text=text, square=text)


def _witness_result(command, ok, witness, what):
    if ok:
        w = format_square(witness.sub)
        rest = format_square(witness.complement())
        msg = f"{what} (sub-square of index {witness.l})"
        return Result(command, EXIT_OK, f"{msg}\n{w}\n{rest}", True, msg, witness=w, complement=rest)
    msg = f"non-{what}"
    return Result(command, EXIT_NO, msg + "\n", False, msg, witness=None)


def cmd_separate(args, cfg):
    ok, w = separability.is_separable(_load_square(args.file, True))
    return _witness_result("separate", ok, w, "separable")


def cmd_erode(args, cfg):
    ok, w = separability.is_erodable(_load_square(args.file, True))
    return _witness_result("erode", ok, w, "erodable")


def cmd_fullsep(args, cfg):
    layers = separability.is_fully_separable(_load_square(args.file, True))
    if layers is None:
        return Result("fullsep", EXIT_NO, "not fully separable\n", False, "not fully separable", layers=None)
    texts = [format_square(x) for x in layers]
    msg = f"fully separable into {len(layers)} latin squares"
    return Result("fullsep", EXIT_OK, msg + "\n" + "\n".join(texts), True, msg, layers=texts)


def cmd_convert(args, cfg):
    text = read_file(args.file)
    if args.to:
        sq = parse_mls(text, require_complete=True)
        if args.to == "oa":
            out = format_oa(equivalence.to_orthogonal_array(sq))
        else:
            out = format_semi_latin(equivalence.expand_to_semi_latin(sq))
    else:
        if args.source == "oa":
            sq = equivalence.from_orthogonal_array(parse_oa(text))
        else:
            sls = parse_sls(text)
            f = parse_map(read_file(args.map), sls.order) if args.map else None
            sq = equivalence.collapse_semi_latin(sls, f)
        out = format_square(sq)
    return Result("convert", text=out, output=out)


def cmd_canon(args, cfg):
    cf = classification.canonical_form(_load_square(args.file, True))
    text = str(cf)
    return Result("canon", text=text, square=text)


def cmd_paratopic(args, cfg):
    a = _load_square(args.a, True)
    b = _load_square(args.b, True)
    same = classification.are_paratopic(a, b)
    msg = "paratopic" if same else "not paratopic"
    return Result("paratopic", EXIT_OK if same else EXIT_NO, msg + "\n", same, msg)


def cmd_enumerate(args, cfg):
    reps = classification.enumerate_main_classes(
        args.n, args.k, node_limit=cfg.node_limit, long_run=cfg.long_run, jobs=cfg.jobs
    )
    if args.census:
        row = classification.census(args.n, args.k, representatives=reps)
        census_obj = dict(zip(("n", "k", "classes", "erodable", "separable", "simple"),
                              (row.n, row.k, *row.as_tuple())))
        return Result("enumerate", text=row.tsv() + "\n", message=f"{len(reps)} main classes", census=census_obj)
    texts = [format_square(sq) for sq in reps]
    return Result("enumerate", text="\n".join(texts), message=f"{len(reps)} main classes", representatives=texts)


# -- parser --------------------------------------------------------------------
def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="print a JSON result object")
    common.add_argument("--seed", type=int, default=0, help="seed for randomized output")
    common.add_argument("-v", "--verbose", action="store_true")

    p = argparse.ArgumentParser(prog="mls", description="Multi-latin square toolkit")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("validate", parents=[common], help="check the latin constraints of a file")
    s.add_argument("file")
    s.add_argument("--complete", action="store_true", help="also require every cell to be full")
    s.set_defaults(func=cmd_validate)

    s = sub.add_parser("gen", parents=[common], help="construct a square from a named family")
    s.add_argument("--family", required=True, choices=["Ln", "Uk", "Uks", "cyclic", "inflate", "random"])
    s.add_argument("--n", type=int)
    s.add_argument("--k", type=int)
    s.add_argument("--s", type=int)
    s.set_defaults(func=cmd_gen)

    s = sub.add_parser("complete", parents=[common], help="complete a k-latin rectangle")
    s.add_argument("file")
    s.set_defaults(func=cmd_complete)

    s = sub.add_parser("embed", parents=[common], help="embed a partial square in a larger order")
    s.add_argument("--order", type=int, required=True)
    s.add_argument("file")
    s.set_defaults(func=cmd_embed)

    for name, func, help_ in (
        ("separate", cmd_separate, "test separability"),
        ("erode", cmd_erode, "test erodability"),
        ("fullsep", cmd_fullsep, "decompose into latin squares"),
        ("canon", cmd_canon, "print the canonical main-class representative"),
    ):
        s = sub.add_parser(name, parents=[common], help=help_)
        s.add_argument("file")
        s.set_defaults(func=func)

    s = sub.add_parser("convert", parents=[common], help="convert to/from orthogonal arrays and semi-latin squares")
    g = s.add_mutually_exclusive_group(required=True)
    g.add_argument("--to", choices=["oa", "semi"])
    g.add_argument("--from", dest="source", choices=["oa", "semi"])
    s.add_argument("--map", help="collapse map file (with --from semi)")
    s.add_argument("file")
    s.set_defaults(func=cmd_convert)

    s = sub.add_parser("paratopic", parents=[common], help="exit 0 iff two squares are paratopic")
    s.add_argument("a")
    s.add_argument("b")
    s.set_defaults(func=cmd_paratopic)

    s = sub.add_parser("enumerate", parents=[common], help="list main classes or print a census row")
    s.add_argument("-n", type=int, required=True)
    s.add_argument("-k", type=int, required=True)
    s.add_argument("--census", action="store_true")
    s.add_argument("--long-run", action="store_true")
    s.add_argument("--jobs", type=int, default=None)
    s.add_argument("--node-limit", type=int, default=classification.DEFAULT_NODE_LIMIT)
    s.set_defaults(func=cmd_enumerate)
    return p


def run(argv=None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # argparse exits 2 on usage errors, 0 on --help
        return int(exc.code or 0)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, stream=stderr)

    jobs = getattr(args, "jobs", None)
    if jobs is None:
        jobs = classification.default_jobs()
    try:
        cfg = RunConfig(
            jobs=jobs,
            node_limit=getattr(args, "node_limit", classification.DEFAULT_NODE_LIMIT),
            long_run=getattr(args, "long_run", False),
            seed=args.seed,
        )
    except ValueError as exc:
        print(f"mls: {exc}", file=stderr)
        return EXIT_USAGE

    try:
        result = args.func(args, cfg)
    except ResourceLimit as exc:
        result = Result(args.command, EXIT_LIMIT, "", None, str(exc))
    except (MultiLatinError, OSError) as exc:
        result = Result(args.command, EXIT_USAGE, "", None, str(exc))
        if isinstance(exc, UnsupportedOrder):
            result.message = f"unsupported order: {exc}"

    if args.json:
        stdout.write(json.dumps(result.payload(), sort_keys=True) + "\n")
    elif result.text:
        stdout.write(result.text)
    if result.code in (EXIT_USAGE, EXIT_LIMIT):
        print(f"mls {args.command}: {result.message}", file=stderr)
    stdout.flush()
    return result.code


def main(argv=None):
    sys.exit(run(argv))


if __name__ == "__main__":  # pragma: no cover
    main()
