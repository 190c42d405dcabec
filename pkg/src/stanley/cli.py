"""Command-line interface.

Every subcommand prints one record.  ``--format json`` (the default) gives
``{"command", "parameters", "result", "timing"}``; ``plain`` and ``csv``
print only the result fields, one per line.  Exit status is 0 on success,
1 when a verification or detection comes out negative, 2 on bad usage.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
import time
from dataclasses import dataclass
from typing import Optional

from . import basic, gaps, modular, search, structure
from .core import greedy_stanley
from .errors import StanleyError


class UsageError(Exception):
    pass


@dataclass
class OutputRecord:
    command: str
    parameters: dict
    result: dict
    timing: float

    def to_json(self) -> str:
        return json.dumps({"command": self.command, "parameters": self.parameters,
                           "result": self.result, "timing": self.timing})

    @classmethod
    def from_json(cls, text: str) -> "OutputRecord":
        data = json.loads(text)
        return cls(data["command"], data["parameters"], data["result"], data["timing"])


def parse_set(text: str) -> list[int]:
    try:
        return [int(v) for v in text.replace(" ", "").split(",") if v != ""]
    except ValueError:
        raise UsageError(f"expected comma-separated integers, got {text!r}") from None


def _flatten(value, key=""):
    if isinstance(value, dict):
        for k, v in value.items():
            yield from _flatten(v, f"{key}.{k}" if key else k)
    elif isinstance(value, (list, tuple)) and any(isinstance(v, (list, tuple, dict)) for v in value):
        for i, v in enumerate(value):
            yield from _flatten(v, f"{key}.{i}")
    else:
        yield key, value


def _cell(v) -> str:
    if v is None:
        return "none"
    if isinstance(v, bool):
        return "true" if v else "false"
    return str(v)


def render(record: OutputRecord, fmt: str) -> str:
    if fmt == "json":
        return record.to_json()
    rows = [(k, v if isinstance(v, (list, tuple)) else [v]) for k, v in _flatten(record.result)]
    if fmt == "plain":
        if len(rows) == 1:
            return " ".join(map(_cell, rows[0][1]))
        return "\n".join(" ".join([f"{k}:", *map(_cell, vals)]) for k, vals in rows)
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    for k, vals in rows:
        writer.writerow([k, *map(_cell, vals)])
    return buf.getvalue().rstrip("\n")


# -- input helpers -----------------------------------------------------------

def _seed(args) -> dict:
    if not args.seed_file:
        return {}
    with open(args.seed_file) as fh:
        return json.load(fh)


def _generators(args) -> list[int]:
    if args.set is not None:
        return parse_set(args.set)
    seed = _seed(args)
    for key in ("generators", "residues", "terms"):
        if key in seed:
            return [int(v) for v in seed[key]]
    raise UsageError("give --set or --seed-file")


def _mset(args, verified=True) -> modular.ModularSet:
    seed = _seed(args)
    if args.set is not None:
        if args.modulus is None:
            raise UsageError("--modulus is required with --set")
        return modular.ModularSet(tuple(parse_set(args.set)), args.modulus, args.p, verified)
    if "residues" in seed:
        return modular.ModularSet.from_dict({"p": args.p, **seed}, verified)
    raise UsageError("give --set with --modulus, or a --seed-file with residues")


def _basis(args) -> basic.Basis:
    if args.head is not None or args.tail is not None:
        if args.tail is None:
            raise UsageError("--tail is required with --head")
        return basic.Basis(tuple(parse_set(args.head or "")), args.tail, args.p)
    seed = _seed(args)
    if "tail_start" in seed:
        return basic.Basis.from_dict({"p": args.p, **seed})
    raise UsageError("give --head/--tail or a --seed-file with a basis")


# -- commands ----------------------------------------------------------------
# each returns (result dict, ok flag)

def cmd_gen(args):
    seq = greedy_stanley(_generators(args), args.p, args.count)
    return {"terms": list(seq.terms)}, True


def cmd_verify(args):
    mset = _mset(args, verified=False)
    report = modular.verify_modular_set(mset.residues, mset.modulus, mset.p)
    witness = report.freeness_witness
    return {"valid": report.valid, "uncovered": list(report.uncovered),
            "witness": list(witness.elements) if witness else []}, report.valid


def cmd_expand(args):
    return {"terms": list(modular.expand(_mset(args), args.count).terms)}, True


def cmd_scale(args):
    out = modular.scale(_mset(args), args.alpha)
    return {"modulus": out.modulus, "residues": list(out.residues)}, True


def cmd_product(args):
    first = _mset(args)
    second = modular.ModularSet(tuple(parse_set(args.with_set)), args.with_modulus, args.p)
    out = modular.product(first, second)
    return {"modulus": out.modulus, "residues": list(out.residues)}, True


def cmd_detect(args):
    seq = greedy_stanley(_generators(args), args.p, args.count)
    report = structure.detect_structure(seq)
    return report.to_dict(), report.found


def cmd_build_pseudo(args):
    gens = structure.build_pseudomodular(_mset(args), args.k, args.c, args.sigma)
    return {"generators": list(gens)}, True


def cmd_basis(args):
    if args.action == "validate":
        check = basic.validate_basis(_basis(args))
        return {"valid": check.valid, "index": check.index, "reason": check.reason}, check.valid
    if args.action == "gen":
        return {"terms": list(basic.basis_sequence(_basis(args), args.count).terms)}, True
    b, completion = basic.complete(_generators(args))
    return {"head": list(b.head), "tail_start": b.tail_start, "completion": list(completion)}, True


def cmd_gaps(args):
    if args.action == "family":
        mset = gaps.gap_family(args.m)
        return {"modulus": mset.modulus, "verified": mset.verified,
                "residues": list(mset.residues)}, True
    if args.modulus is not None or "modulus" in _seed(args):
        seq = modular.expand(_mset(args), args.count)
    else:
        seq = greedy_stanley(_generators(args), args.p, args.count)
    burn = args.burn_in if args.burn_in is not None else args.count // 8
    return gaps.gap_profile(seq, burn).to_dict(), True


def cmd_search(args):
    if args.resume:
        result = search.resume_search(args.resume, args.threads, time_budget=args.budget)
    else:
        if args.modulus is None:
            raise UsageError("search needs --modulus")
        task = search.SearchTask(args.modulus, args.p, args.size_min, args.size_max,
                                 args.symmetry, args.limit)
        result = search.search_modular_sets(task, args.threads, args.nodes, args.budget)
    if args.checkpoint:
        search.save_checkpoint(result, args.checkpoint)
    if args.census:
        with open(args.census, "w", newline="") as fh:
            search.write_census_csv(result.sets, fh)
    return {"complete": result.complete, "count": len(result),
            "sets": [list(s.residues) for s in result]}, True


def cmd_scan(args):
    entries = search.scan_generators(args.p, args.m_max, args.count, args.threads)
    modular_m = [e.m for e in entries if e.modular]
    return {"modular": modular_m, "failed": [e.m for e in entries if e.error]}, True


def cmd_classify(args):
    seq = greedy_stanley(_generators(args), args.p, args.count)
    verdict = structure.classify_growth(seq, args.threshold)
    return {"classification": verdict.classification, "band": list(verdict.band),
            "fit_quality": verdict.fit_quality, "coefficient": verdict.coefficient,
            "structure": verdict.structure.kind}, True


# -- parser ------------------------------------------------------------------

DEFAULT_COUNT = {"scan": 4096, "classify": 2048, "gaps": 512}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--p", type=int, default=3, help="odd prime (default 3)")
    common.add_argument("--count", type=int, help="number of terms (default depends on the command)")
    common.add_argument("--format", choices=("json", "csv", "plain"), default="json")
    common.add_argument("--seed-file", help="JSON file with generators, a modular set or a basis")
    common.add_argument("--out", help="write output here instead of stdout")
    common.add_argument("--threads", type=int, default=1)
    common.add_argument("--budget", type=float, help="wall-clock budget in seconds")

    def with_set(sp, modulus=False):
        sp.add_argument("--set", help="comma-separated integers")
        if modulus:
            sp.add_argument("--modulus", type=int)

    parser = argparse.ArgumentParser(prog="stanley", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("gen", parents=[common], help="greedy Stanley sequence")
    with_set(sp)
    sp.set_defaults(func=cmd_gen)

    sp = sub.add_parser("verify", parents=[common], help="check a modular set")
    with_set(sp, True)
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("expand", parents=[common], help="A + N*S(0)")
    with_set(sp, True)
    sp.set_defaults(func=cmd_expand)

    sp = sub.add_parser("scale", parents=[common], help="alpha*A + N*S(0) as a modular set")
    with_set(sp, True)
    sp.add_argument("--alpha", type=int, required=True)
    sp.set_defaults(func=cmd_scale)

    sp = sub.add_parser("product", parents=[common], help="A + M*B modulo M*N")
    with_set(sp, True)
    sp.add_argument("--with-set", required=True)
    sp.add_argument("--with-modulus", type=int, required=True)
    sp.set_defaults(func=cmd_product)

    sp = sub.add_parser("detect", parents=[common], help="structural parameters")
    with_set(sp)
    sp.set_defaults(func=cmd_detect)

    sp = sub.add_parser("build-pseudo", parents=[common], help="translate one block")
    with_set(sp, True)
    sp.add_argument("--k", type=int, required=True)
    sp.add_argument("--c", type=int, required=True)
    sp.add_argument("--sigma", type=int, default=0)
    sp.set_defaults(func=cmd_build_pseudo)

    sp = sub.add_parser("basis", parents=[common], help="basic sequences")
    sp.add_argument("action", choices=("validate", "gen", "complete"))
    with_set(sp)
    sp.add_argument("--head", help="comma-separated head elements")
    sp.add_argument("--tail", type=int, help="first element of the geometric tail")
    sp.set_defaults(func=cmd_basis)

    sp = sub.add_parser("gaps", parents=[common], help="large-gap family and gap profiles")
    sp.add_argument("action", choices=("family", "profile"))
    with_set(sp, True)
    sp.add_argument("--m", type=int, default=0)
    sp.add_argument("--burn-in", type=int)
    sp.set_defaults(func=cmd_gaps)

    sp = sub.add_parser("search", parents=[common], help="exhaustive search for modular sets")
    sp.add_argument("--modulus", type=int)
    sp.add_argument("--size-min", type=int, default=1)
    sp.add_argument("--size-max", type=int)
    sp.add_argument("--symmetry", action="store_true", help="one set per affine orbit")
    sp.add_argument("--limit", type=int)
    sp.add_argument("--nodes", type=int, help="node budget")
    sp.add_argument("--checkpoint", help="write a resumable checkpoint here")
    sp.add_argument("--resume", help="resume from this checkpoint")
    sp.add_argument("--census", help="write a cardinality census CSV here")
    sp.set_defaults(func=cmd_search)

    sp = sub.add_parser("scan", parents=[common], help="modular detection for S_p(0, m)")
    sp.add_argument("--m-max", type=int, default=100)
    sp.set_defaults(func=cmd_scan)

    sp = sub.add_parser("classify", parents=[common], help="growth classification")
    with_set(sp)
    sp.add_argument("--threshold", type=float, default=0.99)
    sp.set_defaults(func=cmd_classify)
    return parser


def _params(args) -> dict:
    skip = {"func", "format", "out", "command"}
    return {k: v for k, v in vars(args).items() if k not in skip and v is not None}


def main(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    if args.count is None:
        args.count = DEFAULT_COUNT.get(args.command, 64)
    start = time.perf_counter()
    try:
        result, ok = args.func(args)
    except (UsageError, StanleyError, ValueError, TypeError, OSError) as exc:
        print(f"stanley {args.command}: {exc}", file=sys.stderr)
        return 2
    record = OutputRecord(args.command, _params(args), result, time.perf_counter() - start)
    text = render(record, args.format)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)
    return 0 if ok else 1


if __name__ == "__main__":
    sys.exit(main())
