"""Command-line front end.

Exit codes: 0 ok, 2 spec/parse error, 3 unsupported input, 4 internal
invariant violation (a theorem-backed cross-check failed; always a bug).
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Optional

from . import equivalence as eq
from . import report as report_mod
from .correspondence import unitary_equivalence_of_systems, verify_block_witness
from .errors import (
    BoundRequiredError,
    DegenerateGeneratorError,
    InternalInvariantError,
    InvalidLetterError,
    MonoshiftError,
    UnsupportedError,
)
from .ideals import GeneratorPattern, MonomialIdeal, from_generators
from .quantised import digraph_to_dot, graph_of_ideal, quantised_system
from .words import parse_word

PARSE_ERROR, UNSUPPORTED, INVARIANT_VIOLATION = 2, 3, 4


def load_ideal(path: str) -> MonomialIdeal:
    """Read the JSON ideal spec: {"d": int, "generators": [...], "patterns": [...]}."""
    try:
        raw = json.loads(Path(path).read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise SpecError(f"cannot read spec {path}: {exc}") from exc
    if not isinstance(raw, dict) or "d" not in raw:
        raise SpecError(f"spec {path} must be an object with a 'd' field")
    try:
        d = int(raw["d"])
        generators = [parse_word(g, d) for g in raw.get("generators", [])]
        patterns = [
            GeneratorPattern(
                parse_word(p["u"], d), parse_word(p["v"], d), parse_word(p["w"], d)
            )
            for p in raw.get("patterns", [])
        ]
        return from_generators(d, generators, patterns)
    except (KeyError, TypeError, ValueError) as exc:
        raise SpecError(f"malformed spec {path}: {exc}") from exc
    except (InvalidLetterError, DegenerateGeneratorError) as exc:
        raise SpecError(f"invalid spec {path}: {exc}") from exc


class SpecError(MonoshiftError):
    pass


def _emit(payload: dict, fmt: str) -> None:
    if fmt == "json":
        print(json.dumps(payload, indent=2, ensure_ascii=False))
    else:
        for line in _text_lines(payload, prefix=""):
            print(line)


def _text_lines(value, prefix: str):
    if isinstance(value, dict):
        for key, sub in value.items():
            if isinstance(sub, (dict, list)):
                yield f"{prefix}{key}:"
                yield from _text_lines(sub, prefix + "  ")
            else:
                yield f"{prefix}{key}: {sub}"
    elif isinstance(value, list):
        for sub in value:
            if isinstance(sub, (dict, list)):
                yield from _text_lines(sub, prefix + "  ")
            else:
                yield f"{prefix}- {sub}"
    else:
        yield f"{prefix}{value}"


def _effective_bound(args) -> Optional[int]:
    return None if args.bound == 0 else args.bound


def cmd_analyze(args) -> int:
    ideal = load_ideal(args.spec)
    bound = _effective_bound(args)
    if not ideal.is_finite_type and bound is None:
        raise UnsupportedError("infinite-type ideal needs --bound > 0")
    payload = report_mod.analyze(ideal, fock_depth=args.fock_depth, bound=bound)
    if args.out_dir:
        out = Path(args.out_dir)
        out.mkdir(parents=True, exist_ok=True)
        (out / "report.json").write_text(
            json.dumps(payload, indent=2, ensure_ascii=False) + "\n", encoding="utf-8"
        )
        system = quantised_system(ideal, bound=None if ideal.is_finite_type else bound)
        (out / "classes.csv").write_text(report_mod.classes_csv(system), encoding="utf-8")
        graph = graph_of_ideal(system)
        (out / "graph.dot").write_text(digraph_to_dot(graph), encoding="utf-8")
        from .plotting import render_digraph

        render_digraph(graph, str(out / "graph.png"), title="quantised dynamics")
        print(f"wrote report.json, classes.csv, graph.dot, graph.png to {out}")
    else:
        _emit(payload, args.format)
    return 0


def compare_payload(
    ideal_a: MonomialIdeal, ideal_b: MonomialIdeal, bound: Optional[int]
) -> dict:
    """All four verdicts with witnesses, plus theorem-backed consistency."""
    sys_a = quantised_system(ideal_a, bound=None if ideal_a.is_finite_type else bound)
    sys_b = quantised_system(ideal_b, bound=None if ideal_b.is_finite_type else bound)

    perm = eq.permutation_equal(ideal_a, ideal_b)
    conj = eq.conjugate(sys_a, sys_b)
    local = eq.locally_conjugate(sys_a, sys_b)
    unitary = unitary_equivalence_of_systems(sys_a, sys_b)

    if (conj is None) != (perm is None):
        raise InternalInvariantError(
            "conjugacy and permutation equality disagreed"
        )
    if conj is not None and local is None:
        raise InternalInvariantError("conjugate systems failed local conjugacy")
    if (local is None) != (unitary is None):
        raise InternalInvariantError(
            "local conjugacy and unitary equivalence disagreed"
        )
    if conj is not None and not eq.verify_conjugacy(sys_a, sys_b, conj):
        raise InternalInvariantError("conjugacy witness failed validation")
    if local is not None and not eq.verify_local(sys_a, sys_b, local):
        raise InternalInvariantError("local witness failed validation")
    if unitary is not None and not verify_block_witness(sys_a, sys_b, unitary):
        raise InternalInvariantError("block witness failed validation")

    payload = {
        "d": [ideal_a.d, ideal_b.d],
        "bounded": not (sys_a.certified and sys_b.certified),
        "permutation_equal": {
            "holds": perm is not None,
            "permutation": list(perm) if perm is not None else None,
        },
        "conjugate": {
            "holds": conj is not None,
            "witness": None
            if conj is None
            else {
                "label_permutation": list(conj.label_permutation),
                "vertex_map": list(conj.vertex_map),
            },
        },
        "locally_conjugate": {
            "holds": local is not None,
            "witness": None
            if local is None
            else {
                "vertex_map": list(local.vertex_map),
                "letter_bijections": [
                    {str(i): j for i, j in pairs}
                    for pairs in local.letter_bijections
                ],
            },
        },
        "unitarily_equivalent": {
            "holds": unitary is not None,
            "witness": None
            if unitary is None
            else {
                "vertex_map": list(unitary.vertex_map),
                "blocks": {
                    str(i): {
                        str(j): sorted(unitary.blocks[i - 1][j - 1])
                        for j in range(1, ideal_b.d + 1)
                        if unitary.blocks[i - 1][j - 1]
                    }
                    for i in range(1, ideal_b.d + 1)
                },
            },
        },
    }
    return payload


def cmd_compare(args) -> int:
    ideal_a = load_ideal(args.spec_a)
    ideal_b = load_ideal(args.spec_b)
    bound = _effective_bound(args)
    for ideal in (ideal_a, ideal_b):
        if not ideal.is_finite_type and bound is None:
            raise UnsupportedError("infinite-type ideal needs --bound > 0")
    payload = compare_payload(ideal_a, ideal_b, bound)
    _emit(payload, args.format)
    return 0


def cmd_export_dot(args) -> int:
    ideal = load_ideal(args.spec)
    bound = _effective_bound(args)
    if not ideal.is_finite_type and bound is None:
        raise UnsupportedError("infinite-type ideal needs --bound > 0")
    system = quantised_system(ideal, bound=None if ideal.is_finite_type else bound)
    graph = graph_of_ideal(system)
    Path(args.out).write_text(digraph_to_dot(graph), encoding="utf-8")
    if args.render:
        from .plotting import render_digraph

        render_digraph(graph, args.render, title="quantised dynamics")
    return 0


def cmd_corpus(args) -> int:
    """Cross-check the theorem-backed oracles over small enumerated ideals."""
    import itertools
    import random

    from .quantised import forbidden_via_dynamics

    rng = random.Random(args.seed)
    ideals: list[MonomialIdeal] = []
    for d in range(1, args.max_d + 1):
        letters = range(1, d + 1)
        length2 = [tuple(p) for p in itertools.product(letters, repeat=2)]
        for r in range(len(length2) + 1):
            for combo in itertools.combinations(length2, r):
                ideals.append(from_generators(d, combo))
    if len(ideals) > args.sample:
        ideals = rng.sample(ideals, args.sample)
    systems = {id(i): quantised_system(i) for i in ideals}

    violations = 0
    pairs = [
        (rng.choice(ideals), rng.choice(ideals)) for _ in range(args.pairs)
    ]
    for a, b in pairs:
        sys_a, sys_b = systems[id(a)], systems[id(b)]
        perm = eq.permutation_equal(a, b)
        conj = eq.conjugate(sys_a, sys_b)
        if (perm is None) != (conj is None):
            violations += 1
    for ideal in ideals:
        system = systems[id(ideal)]
        for word in itertools.chain.from_iterable(
            itertools.product(range(1, ideal.d + 1), repeat=n) for n in range(4)
        ):
            if forbidden_via_dynamics(system, word) != ideal.is_forbidden(word):
                violations += 1
    print(
        f"checked {len(ideals)} ideals and {len(pairs)} pairs: "
        f"{violations} violation(s)"
    )
    return 0 if violations == 0 else INVARIANT_VIOLATION


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="monoshift",
        description="Invariants of monomial ideals in noncommuting variables",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--bound", type=int, default=8, metavar="B",
                       help="exploration bound for infinite-type ideals (0 disables)")
        p.add_argument("--format", choices=("json", "text"), default="json")

    p_analyze = sub.add_parser("analyze", help="full analysis report for one ideal")
    p_analyze.add_argument("spec")
    p_analyze.add_argument("--fock-depth", type=int, default=6, metavar="L")
    p_analyze.add_argument("--out-dir", default=None,
                           help="write report.json, classes.csv, graph.dot, graph.png here")
    common(p_analyze)
    p_analyze.set_defaults(func=cmd_analyze)

    p_compare = sub.add_parser("compare", help="decide all equivalences for a pair")
    p_compare.add_argument("spec_a")
    p_compare.add_argument("spec_b")
    common(p_compare)
    p_compare.set_defaults(func=cmd_compare)

    p_dot = sub.add_parser("export-dot", help="DOT graph of the quantised dynamics")
    p_dot.add_argument("spec")
    p_dot.add_argument("out")
    p_dot.add_argument("--render", default=None, metavar="PNG",
                       help="also render the graph with matplotlib")
    common(p_dot)
    p_dot.set_defaults(func=cmd_export_dot)

    p_corpus = sub.add_parser("corpus", help="run oracle cross-checks on small ideals")
    p_corpus.add_argument("--max-d", type=int, default=2)
    p_corpus.add_argument("--sample", type=int, default=200)
    p_corpus.add_argument("--pairs", type=int, default=100)
    p_corpus.add_argument("--seed", type=int, default=91)
    p_corpus.set_defaults(func=cmd_corpus)

    return parser


def main(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except SpecError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return PARSE_ERROR
    except (UnsupportedError, BoundRequiredError) as exc:
        print(f"unsupported: {exc}", file=sys.stderr)
        return UNSUPPORTED
    except InternalInvariantError as exc:
        print(f"internal invariant violated: {exc}", file=sys.stderr)
        return INVARIANT_VIOLATION


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
