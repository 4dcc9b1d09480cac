"""Command-line pipeline: simulate, kn-table, perms, relations, gf, optimize, bound.

Reports go to stdout (JSON or plain tables); progress goes to stderr.
Every JSON artifact is written with sorted keys so reruns are byte-identical.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
import time
from dataclasses import dataclass, field
from pathlib import Path

from . import __version__
from .asymptotics import (
    bound_constant,
    growth_per_element,
    optimize_weights,
    rationalize_weights,
    weighted_growth,
)
from .game import ILLEGAL, MAX_LETTERS, apply_move, final_state, parse_moves, state_of_permutation
from .gf import cluster_gf, letter_weights, uniform_weights, univariate_series
from .perms import DEFAULT_MAX_STATES, generable_perms, kn_table
from .poly import RationalGF
from .relations import (
    discover_relations,
    derive_forbidden,
    first_invalid_rule,
    load_rules,
    rules_document,
    save_rules,
)

log = logging.getLogger("stacksort")


def dump(obj) -> str:
    return json.dumps(obj, indent=1, sort_keys=True) + "\n"


def write_json(path: Path, obj) -> None:
    path.write_text(dump(obj))
    log.info("wrote %s", path)


def parse_permutation(text: str) -> tuple[int, ...]:
    text = text.strip()
    parts = text.replace(" ", ",").split(",") if ("," in text or " " in text) else list(text)
    try:
        return tuple(int(p) for p in parts if p)
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad permutation {text!r}") from None


def parse_groups(text: str) -> list[list[int]]:
    """'13,2' -> [[0, 2], [1]]: letters sharing one weight variable."""
    groups = []
    for chunk in text.split(","):
        if not chunk or not chunk.isdigit():
            raise argparse.ArgumentTypeError(f"bad identification {text!r}")
        groups.append([int(ch) - 1 for ch in chunk])
    return groups


def parse_ints(text: str) -> list[int]:
    try:
        return [int(t) for t in text.split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad integer list {text!r}") from None


# -- simulate ---------------------------------------------------------------


def cmd_simulate(args) -> int:
    perm = args.permutation
    moves = parse_moves(args.moves, args.k)
    state = state_of_permutation(perm, args.k)
    print(f"0\t-\t{state.to_text()}")
    for step, ch in enumerate(moves, 1):
        state = apply_move(int(ch), state)
        print(f"{step}\tm{ch}\t{state.to_text()}")
        if state is ILLEGAL:
            print(f"illegal move at step {step}")
            return 1
    ok = state == final_state(len(perm), args.k)
    print("sorted" if ok else "not sorted")
    return 0 if ok else 1


# -- kn-table and perms -----------------------------------------------------


def cmd_kn_table(args) -> int:
    rows = kn_table(args.max_n, args.max_states)
    if args.format == "json":
        sys.stdout.write(dump([r.to_record() for r in rows]))
    else:
        print("n\tk_n")
        for r in rows:
            print(f"{r.n}\t{r.k_n if r.status == 'ok' else r.status}")
    if args.json:
        write_json(Path(args.json), [r.to_record() for r in rows])
    return 0 if all(r.status == "ok" for r in rows) else 3


def cmd_perms(args) -> int:
    perms = sorted(generable_perms(args.n, args.k, args.max_states))
    if args.count:
        print(len(perms))
    else:
        for p in perms:
            print("".join(map(str, p)) if args.n < 10 else ",".join(map(str, p)))
    return 0


# -- relations ----------------------------------------------------------------


def cmd_relations_discover(args) -> int:
    t0 = time.perf_counter()
    rules = discover_relations(args.max_len, args.k, exhaustive=args.exhaustive)
    log.info("discovery took %.1fs", time.perf_counter() - t0)
    if args.out:
        save_rules(args.out, rules, args.k, args.max_len)
        sys.stdout.write(dump({"count": len(rules), "path": str(args.out)}))
    else:
        sys.stdout.write(dump(rules_document(rules, args.k, args.max_len)))
    return 0


def cmd_relations_verify(args) -> int:
    rules, header = load_rules(args.rules_file)
    k = args.k if args.k is not None else header.get("k", 2)
    bad = first_invalid_rule(rules, k)
    if bad:
        rule, why = bad
        sys.stdout.write(dump({"valid": False, "rule": rule.to_record(), "problem": why, "count": len(rules)}))
        return 1
    sys.stdout.write(dump({"valid": True, "count": len(rules)}))
    return 0


# -- gf and optimize ----------------------------------------------------------


def _forbidden_from_args(args) -> list[str]:
    if args.rules_file:
        rules, _ = load_rules(args.rules_file)
        return derive_forbidden(rules)
    return sorted(set(args.forbidden.split(",")), key=lambda w: (len(w), w))


def _weights(args, num_letters: int):
    if args.uniform:
        return uniform_weights(num_letters)
    return letter_weights(num_letters, args.identify)


def gf_record(gf: RationalGF, forbidden_count: int) -> dict:
    rec = gf.to_json()
    rec["text"] = str(gf)
    rec["forbidden_count"] = forbidden_count
    return rec


def cmd_gf(args) -> int:
    forbidden = _forbidden_from_args(args)
    gf = cluster_gf(forbidden, _weights(args, args.k + 1))
    if args.substitute:
        gf = gf.substitute(args.substitute)
    rec = gf_record(gf, len(forbidden))
    if args.series is not None:
        if gf.nvars != 1:
            log.error("--series needs a univariate result (use --uniform or --substitute)")
            return 2
        rec["series"] = univariate_series(gf, args.series)
    sys.stdout.write(dump(rec))
    return 0


def cmd_optimize(args) -> int:
    gf = RationalGF.from_json(json.loads(Path(args.gf_file).read_text()))
    if args.identify:
        result = optimize_weights(gf.denominator, identify=args.identify)
    else:
        result = optimize_weights(gf.denominator, multiplicities=args.multiplicities)
    rec = result.to_record()
    rec["weights"] = list(rationalize_weights(result.point, args.max_weight))
    sys.stdout.write(dump(rec))
    return 0


# -- bound pipeline -----------------------------------------------------------


@dataclass
class PipelineConfig:
    k: int = 2
    max_relation_len: int = 4
    mode: str = "uniform"
    identify: list[list[int]] | None = None
    ell: int | None = None
    max_weight: int = 8
    out_dir: Path = field(default_factory=lambda: Path("bound-out"))
    rules_file: Path | None = None

    def __post_init__(self):
        if self.k < 1 or self.k + 1 > MAX_LETTERS:
            raise ValueError(f"k must be between 1 and {MAX_LETTERS - 1}")
        if self.max_relation_len < 1 or self.max_weight < 1:
            raise ValueError("caps must be positive")
        if self.ell is None:
            self.ell = self.k


class StageFailed(RuntimeError):
    def __init__(self, stage: str, cause: Exception):
        super().__init__(f"stage {stage!r} failed: {cause}")
        self.stage = stage


def _stage(name):
    def wrap(fn):
        def run(*a, **kw):
            log.info("stage %s", name)
            t0 = time.perf_counter()
            try:
                out = fn(*a, **kw)
            except Exception as exc:
                raise StageFailed(name, exc) from exc
            log.info("stage %s done in %.2fs", name, time.perf_counter() - t0)
            return out

        return run

    return wrap


def _per_letter(alpha, groups, letters: int) -> list[int]:
    if not groups:
        return list(alpha)
    out = [0] * letters
    for a, g in zip(alpha, groups):
        for i in g:
            out[i] = a
    return out


def run_bound(cfg: PipelineConfig) -> dict:
    """Rules -> forbidden words -> generating function -> growth -> bound constant.

    Each stage's result is written to ``cfg.out_dir`` before the next starts.
    """
    out = cfg.out_dir
    out.mkdir(parents=True, exist_ok=True)
    letters = cfg.k + 1

    @_stage("relations")
    def relations():
        if cfg.rules_file:
            rules, header = load_rules(cfg.rules_file)
            if header.get("k", cfg.k) != cfg.k:
                raise ValueError(f"rules file is for k={header['k']}")
            bad = first_invalid_rule(rules, cfg.k)
            if bad:
                raise ValueError(f"rule {bad[0]} is invalid: {bad[1]}")
            max_len = header.get("max_len", max((len(r.source) for r in rules), default=0))
        else:
            rules = discover_relations(cfg.max_relation_len, cfg.k)
            max_len = cfg.max_relation_len
        save_rules(out / "rules.json", rules, cfg.k, max_len)
        return rules

    @_stage("forbidden")
    def forbidden(rules):
        words = derive_forbidden(rules)
        write_json(out / "forbidden.json", {"count": len(words), "words": words})
        return words

    @_stage("gf")
    def gen_fn(words):
        weights = uniform_weights(letters) if cfg.mode == "uniform" else letter_weights(letters, cfg.identify)
        gf = cluster_gf(words, weights)
        write_json(out / "gf.json", gf_record(gf, len(words)))
        return gf

    rules = relations()
    words = forbidden(rules)
    gf = gen_fn(words)
    report = {
        "mode": cfg.mode,
        "k": cfg.k,
        "ell": cfg.ell,
        "rule_count": len(rules),
        "forbidden_count": len(words),
        "denominator": str(gf.denominator),
    }

    if cfg.mode == "uniform":

        @_stage("growth")
        def growth():
            return growth_per_element(gf, letters)

        g = growth()
        b = bound_constant(cfg.ell, g.per_element_growth)
        report.update(lambda_min=g.lambda_min, b=g.per_element_growth, constant=b.constant)
    else:
        mult = [len(g) for g in cfg.identify] if cfg.identify else [1] * letters

        @_stage("optimize")
        def optimize():
            res = optimize_weights(gf.denominator, multiplicities=mult)
            alpha = rationalize_weights(res.point, cfg.max_weight)
            rec = res.to_record()
            rec["weights"] = list(alpha)
            write_json(out / "optimum.json", rec)
            return res, alpha

        res, alpha = optimize()
        integer = weighted_growth(gf, alpha, mult)
        cont = bound_constant(cfg.ell, res.objective)
        report.update(
            b=res.objective,
            constant=cont.constant,
            point=list(res.point),
            integer_weights=list(alpha),
            integer_weights_per_letter=_per_letter(alpha, cfg.identify, letters),
            integer_lambda_min=integer.lambda_min,
            integer_b=integer.per_element_growth,
            integer_constant=bound_constant(cfg.ell, integer.per_element_growth).constant,
        )
    report["constant_5dp"] = f"{report['constant']:.5f}"
    write_json(out / "bound.json", report)
    return report


def cmd_bound(args) -> int:
    cfg = PipelineConfig(
        k=args.k,
        max_relation_len=args.max_len,
        mode=args.weights,
        identify=args.identify,
        ell=args.ell,
        max_weight=args.max_weight,
        out_dir=Path(args.out),
        rules_file=Path(args.rules_file) if args.rules_file else None,
    )
    try:
        report = run_bound(cfg)
    except StageFailed as exc:
        log.error("%s (partial artifacts in %s)", exc, cfg.out_dir)
        return 2
    sys.stdout.write(dump(report))
    return 0


# -- argument parsing -----------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="stacksort", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=__version__)
    p.add_argument("-v", "--verbose", action="count", default=0, help="progress on stderr (-vv for debug)")
    p.add_argument("--workers", type=int, default=1, help="accepted for compatibility; work runs in one process")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("simulate", help="trace a move string on a permutation")
    s.add_argument("permutation", type=parse_permutation, help="e.g. 4231 or 4,2,3,1")
    s.add_argument("moves", help="digit string, e.g. 121121232333")
    s.add_argument("--k", type=int, default=2)
    s.set_defaults(func=cmd_simulate)

    s = sub.add_parser("kn-table", help="minimal number of stacks sorting all of S_n")
    s.add_argument("max_n", type=int)
    s.add_argument("--max-states", type=int, default=DEFAULT_MAX_STATES)
    s.add_argument("--format", choices=["text", "json"], default="text")
    s.add_argument("--json", help="also write the table as JSON to this file")
    s.set_defaults(func=cmd_kn_table)

    s = sub.add_parser("perms", help="list P(n, k)")
    s.add_argument("n", type=int)
    s.add_argument("k", type=int)
    s.add_argument("--count", action="store_true")
    s.add_argument("--max-states", type=int, default=DEFAULT_MAX_STATES)
    s.set_defaults(func=cmd_perms)

    r = sub.add_parser("relations", help="discover or verify string relations")
    rsub = r.add_subparsers(dest="action", required=True)
    s = rsub.add_parser("discover")
    s.add_argument("--max-len", type=int, required=True)
    s.add_argument("--k", type=int, default=2)
    s.add_argument("--exhaustive", action="store_true", help="probe all words, not only avoiding ones")
    s.add_argument("--out", type=Path)
    s.set_defaults(func=cmd_relations_discover)
    s = rsub.add_parser("verify")
    s.add_argument("rules_file", type=Path)
    s.add_argument("--k", type=int)
    s.set_defaults(func=cmd_relations_verify)

    s = sub.add_parser("gf", help="cluster generating function of a forbidden set")
    src = s.add_mutually_exclusive_group(required=True)
    src.add_argument("--rules-file", type=Path)
    src.add_argument("--forbidden", help="comma-separated words, e.g. 13,1232,1223")
    s.add_argument("--k", type=int, default=2)
    s.add_argument("--uniform", action="store_true", help="one variable for all letters")
    s.add_argument("--identify", type=parse_groups, help="letters sharing a variable, e.g. 13,2")
    s.add_argument("--substitute", type=parse_ints, help="x_j -> x^a_j, e.g. 1,2,1")
    s.add_argument("--series", type=int, help="also print coefficients up to this degree")
    s.set_defaults(func=cmd_gf)

    s = sub.add_parser("optimize", help="optimal weights for a gf.json denominator")
    s.add_argument("gf_file", type=Path)
    s.add_argument("--identify", type=parse_groups)
    s.add_argument("--multiplicities", type=parse_ints)
    s.add_argument("--max-weight", type=int, default=8)
    s.set_defaults(func=cmd_optimize)

    s = sub.add_parser("bound", help="full pipeline from relations to a lower-bound constant")
    s.add_argument("--max-len", type=int, default=4)
    s.add_argument("--k", type=int, default=2)
    s.add_argument("--weights", choices=["uniform", "optimized"], default="uniform")
    s.add_argument("--identify", type=parse_groups, help="e.g. 13,2 to give m1 and m3 one weight")
    s.add_argument("--ell", type=int, help="stacks per group (default k)")
    s.add_argument("--max-weight", type=int, default=8)
    s.add_argument("--rules-file", help="reuse a rules.json instead of discovering")
    s.add_argument("--out", default="bound-out")
    s.set_defaults(func=cmd_bound)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    level = [logging.WARNING, logging.INFO, logging.DEBUG][min(args.verbose, 2)]
    logging.basicConfig(level=level, stream=sys.stderr, format="%(levelname)s %(name)s: %(message)s")
    if args.workers > 1:
        log.info("--workers %d: computation is single-process", args.workers)
    try:
        return args.func(args)
    except (ValueError, OSError) as exc:
        log.error("%s", exc)
        return 2
