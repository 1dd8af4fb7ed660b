"""
compgraph: competition graphs of multipartite tournaments.

  oracle 5 4 4            does some orientation have a complete competition graph?
  witness 5 4 4           build one (DMT, JSON or DOT)
  check FILE              validate a tournament and evaluate every condition
  search 2 2 2 1 1        exhaustive search with pruning
  refute 3 3 2 2          counting refutation, then search when within caps
  dump-witness A7         print an embedded construction
  verify-paper            run the verification suite

Exit codes: 0 yes/witness/ok, 1 no/exhausted/failed, 2 usage, 3 inconclusive, 4 I/O or parse error.
"""
import argparse
import json
import logging
import sys
from pathlib import Path

from config import get_config
from core.analysis import check_conditions, refute_by_counting
from core.digraph import validate
from core.errors import CompgraphError, ConstructionError, FormatError, WitnessDataError
from core.oracle import exists_complete_orientation, synthesize_witness
from core.parser import format_tournament, parse_sizes, parse_tournament
from core.search import EXHAUSTED, SEARCH_RULES, WITNESS, SearchConfig, exhaustive_search
from core.verify import DEFAULT_SEED, LEVELS, verify_paper
from core.witnesses import WitnessId, load_witness

log = logging.getLogger('compgraph')

EXIT_OK = 0
EXIT_NO = 1
EXIT_USAGE = 2
EXIT_INCONCLUSIVE = 3
EXIT_IO = 4

_SEARCH_EXIT = {WITNESS: EXIT_OK, EXHAUSTED: EXIT_NO}


def _emit(args, data: dict, text: str) -> None:
    if args.json:
        print(json.dumps(data, indent=2))
    else:
        print(text)


def _sizes(args) -> tuple[int, ...]:
    return parse_sizes(' '.join(args.sizes))


def _prune_rules(value: str) -> frozenset:
    if value == 'all':
        return frozenset(SEARCH_RULES)
    if value == 'none':
        return frozenset()
    rules = frozenset(r.strip().upper() for r in value.split(',') if r.strip())
    unknown = rules - set(SEARCH_RULES)
    if unknown:
        raise argparse.ArgumentTypeError(
            f"unknown rule(s) {', '.join(sorted(unknown))}; choose from {', '.join(SEARCH_RULES)}")
    return rules


def _read_text(path: str) -> str:
    try:
        if path == '-':
            return sys.stdin.read()
        return Path(path).read_text(encoding='utf-8')
    except UnicodeDecodeError as e:
        raise FormatError(f"input is not UTF-8 text (byte {e.start})") from None


def _search_config(args) -> SearchConfig:
    workers = args.workers if args.workers is not None else get_config().SEARCH_WORKERS
    return SearchConfig(prune=args.prune, max_nodes=args.max_nodes, workers=workers,
                        symmetry_fix=args.symmetry)


def _search_text(outcome) -> str:
    lines = [f"{outcome.status}: K_{outcome.sizes}, {outcome.nodes_explored} nodes, {outcome.wall_time:.2f}s"]
    for rule, count in sorted(outcome.prunes_by_rule.items()):
        lines.append(f"  pruned by {rule}: {count}")
    if outcome.symmetry_reduced:
        lines.append("  (symmetry-reduced)")
    if outcome.witness is not None:
        lines.append(format_tournament(outcome.witness, 'dmt').rstrip())
    return '\n'.join(lines)


# ─────────────────────────────────────────────────────────────────────────────
# SUBCOMMANDS
# ─────────────────────────────────────────────────────────────────────────────

def cmd_oracle(args) -> int:
    verdict = exists_complete_orientation(_sizes(args))
    _emit(args, verdict.to_dict(), str(verdict))
    return EXIT_OK if verdict.exists else EXIT_NO


def cmd_witness(args) -> int:
    sizes = _sizes(args)
    t = synthesize_witness(sizes)
    if t is None:
        verdict = exists_complete_orientation(sizes)
        print(f"no orientation of K_{sizes} has a complete competition graph ({verdict.clause})", file=sys.stderr)
        return EXIT_NO
    fmt = 'json' if args.json else args.format
    sys.stdout.write(format_tournament(t, fmt, comment=f"witness for K_{sizes}"))
    return EXIT_OK


def cmd_dump_witness(args) -> int:
    witness = WitnessId.parse(args.id)
    fmt = 'json' if args.json else args.format
    sys.stdout.write(format_tournament(load_witness(witness), fmt, comment=witness.value))
    return EXIT_OK


def cmd_check(args) -> int:
    t = parse_tournament(_read_text(args.file))
    violations = validate(t)
    if violations:
        _emit(args, {"valid": False, "violations": [str(v) for v in violations]},
              '\n'.join(["invalid tournament:"] + [f"  {v}" for v in violations]))
        return EXIT_NO

    report = check_conditions(t)
    lines = [f"K_{t.sizes}: {t.n} vertices, {t.d.arc_count} arcs"]
    for r in report.results:
        status = {True: 'pass', False: 'FAIL', None: 'n/a'}[r.status]
        lines.append(f"  {r.condition:<15} {status:<5} {r.detail if r.status is False else ''}".rstrip())
    if report.complete:
        lines.append("competition graph: complete")
    else:
        u, v = report.non_competing_pair
        lines.append(f"competition graph: not complete ({u} and {v} share no prey)")
    _emit(args, {"valid": True, **report.to_dict()}, '\n'.join(lines))
    return EXIT_OK if report.complete and report.passed else EXIT_NO


def cmd_search(args) -> int:
    outcome = exhaustive_search(_sizes(args), _search_config(args))
    _emit(args, outcome.to_dict(), _search_text(outcome))
    return _SEARCH_EXIT.get(outcome.status, EXIT_INCONCLUSIVE)


def cmd_refute(args) -> int:
    sizes = _sizes(args)
    verdict = refute_by_counting(sizes)
    if verdict.refuted:
        text = '\n'.join([f"refuted by counting: K_{sizes}"]
                         + [f"  {rule}: {detail}" for rule, detail in verdict.fired])
        _emit(args, {"method": "counting", **verdict.to_dict()}, text)
        return EXIT_NO

    if sum(sizes) > get_config().SEARCH_MAX_SUM:
        _emit(args, {"method": "counting", **verdict.to_dict()},
              f"inconclusive: counting does not refute K_{sizes} and it exceeds the search cap")
        return EXIT_INCONCLUSIVE

    log.info("counting inconclusive for K_%s, falling back to search", sizes)
    outcome = exhaustive_search(sizes, _search_config(args))
    _emit(args, {"method": "search", **outcome.to_dict()}, _search_text(outcome))
    return _SEARCH_EXIT.get(outcome.status, EXIT_INCONCLUSIVE)


def cmd_verify(args) -> int:
    report = verify_paper(args.level, args.seed)
    lines = [f"verification ({report.level}, seed {report.seed})"]
    for r in report.results:
        lines.append(f"  [{'ok' if r.passed else 'FAIL'}] {r.name}: {r.detail} ({r.seconds:.1f}s)")
    _emit(args, report.to_dict(), '\n'.join(lines))
    return EXIT_OK if report.passed else EXIT_NO


# ─────────────────────────────────────────────────────────────────────────────
# ARGUMENT PARSING
# ─────────────────────────────────────────────────────────────────────────────

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog='compgraph', description=__doc__,
                                     formatter_class=argparse.RawDescriptionHelpFormatter)
    parser.add_argument('-v', '--verbose', action='count', default=0,
                        help="more logging on stderr (-vv for debug)")
    sub = parser.add_subparsers(dest='command', required=True)

    def command(name, handler, help_text):
        p = sub.add_parser(name, help=help_text)
        p.add_argument('--json', action='store_true', help="machine-readable output")
        p.set_defaults(handler=handler)
        return p

    def search_options(p):
        p.add_argument('--prune', type=_prune_rules, default=frozenset(SEARCH_RULES),
                       help="all, none, or a comma list of " + ', '.join(SEARCH_RULES))
        p.add_argument('--max-nodes', type=int, default=None)
        p.add_argument('--workers', type=int, default=None)
        p.add_argument('--symmetry', action='store_true',
                       help="fix vertex 0's arcs up to part symmetry (marks the outcome symmetry-reduced)")

    p = command('oracle', cmd_oracle, "decide existence from the part sizes")
    p.add_argument('sizes', nargs='+')

    p = command('witness', cmd_witness, "synthesize a witness")
    p.add_argument('sizes', nargs='+')
    p.add_argument('--format', choices=('dmt', 'json', 'dot'), default='dmt')

    p = command('check', cmd_check, "validate a DMT/JSON file and report every condition")
    p.add_argument('file', help="path, or - for stdin")

    p = command('search', cmd_search, "exhaustive search")
    p.add_argument('sizes', nargs='+')
    search_options(p)

    p = command('refute', cmd_refute, "counting refutation, then search")
    p.add_argument('sizes', nargs='+')
    search_options(p)

    p = command('dump-witness', cmd_dump_witness, "print an embedded construction")
    p.add_argument('id', help=', '.join(w.value for w in WitnessId))
    p.add_argument('--format', choices=('dmt', 'json', 'dot'), default='dmt')

    p = command('verify-paper', cmd_verify, "run the verification suite")
    p.add_argument('--level', choices=LEVELS, default='quick')
    p.add_argument('--seed', type=int, default=DEFAULT_SEED)
    return parser


def _configure_logging(verbose: int) -> None:
    level = get_config().LOG_LEVEL
    if verbose >= 2:
        level = 'DEBUG'
    elif verbose == 1:
        level = 'INFO'
    logging.basicConfig(level=level, stream=sys.stderr,
                        format='%(asctime)s %(levelname)s %(name)s: %(message)s')


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else EXIT_USAGE
    _configure_logging(args.verbose)

    try:
        return args.handler(args)
    except (FormatError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_IO
    except (ConstructionError, WitnessDataError):
        raise
    except (CompgraphError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE


run = main

if __name__ == '__main__':
    sys.exit(main())
