"""Command-line front end.

Exit codes: 0 when the tool ran and any verdict it checked holds, 1 when a
checked property is verified false, 2 on usage, parse, or capacity errors.
All output is deterministic given the flags and seed.
"""

from __future__ import annotations

import argparse
import json
import sys
from math import comb

from . import hgio
from .ab import IsolatedVertexError, check_skew_cross_intersecting, run_ab
from .constructions import (
    Prediction,
    StarMap,
    build_complete,
    build_filled_mf,
    build_k2e,
    build_l_family,
    build_mf,
    build_mstar,
    predict_complete,
    predict_filled_mf,
    predict_k2e,
    predict_l_family,
    predict_mf,
    predict_mstar,
)
from .core import (
    CapacityError,
    ConsistencyError,
    Multihypergraph,
    blocking_set_exists,
    classify_components,
    disjointness_graph,
    has_mutually_disjoint_edges,
    neighborhood_partition,
    verify_almost_intersecting,
    verify_almost_t_intersecting,
)
from .search import (
    SearchParams,
    SearchReport,
    brute_force_oracle,
    exhaustive_max,
    verify_extremal_claim,
)
from .sunflower import core_bound_check, core_multihypergraph, decompose


def _emit(args, payload: dict) -> None:
    if getattr(args, "format", "json") == "text":
        body = "\n".join(f"{key}: {json.dumps(payload[key], sort_keys=True)}"
                         for key in sorted(payload)) + "\n"
    else:
        body = json.dumps(payload, indent=2, sort_keys=True) + "\n"
    out = getattr(args, "output", None)
    if out:
        with open(out, "w", encoding="ascii") as fh:
            fh.write(body)
    else:
        sys.stdout.write(body)


def _family_payload(family: Multihypergraph) -> dict:
    return {
        "hg": hgio.dumps(family),
        "distinct_edges": family.num_distinct,
        "total_instances": family.total_instances,
    }


def _witness_payload(verdict) -> list:
    out = []
    for w in verdict.witnesses:
        if hasattr(w, "edge"):
            out.append({"instance": w.instance, "edge": list(w.edge), "count": w.count})
        else:
            out.append({"kind": w.kind, "i": w.i, "j": w.j})
    return out


def _star_map_from_args(args) -> StarMap:
    if args.map:
        return StarMap.load_json(args.k, args.s, args.map)
    return StarMap.random(args.k, args.s, args.seed, args.pool)


# ---------------------------------------------------------------------------
# Subcommands
# ---------------------------------------------------------------------------


def _require_flags(args, *names) -> None:
    missing = [name for name in names if getattr(args, name) is None]
    if missing:
        raise ValueError(
            f"construct {args.family} requires --" + ", --".join(missing)
        )


def cmd_construct(args) -> int:
    kind = args.family
    if kind == "l-family":
        _require_flags(args, "k", "s")
        family = build_l_family(args.k, args.s)
        prediction = predict_l_family(args.k, args.s)
    elif kind == "mf":
        _require_flags(args, "k", "s")
        family = build_mf(_star_map_from_args(args))
        prediction = predict_mf(args.k, args.s)
    elif kind == "mstar":
        _require_flags(args, "k", "s")
        family = build_mstar(args.k, args.s)
        prediction = predict_mstar(args.k, args.s)
    elif kind == "complete":
        _require_flags(args, "n", "k")
        family = build_complete(args.n, args.k)
        prediction = predict_complete(args.n, args.k)
    elif kind == "k2e":
        _require_flags(args, "s")
        family = build_k2e(args.s)
        prediction = predict_k2e(args.s)
    else:  # filled-mf
        _require_flags(args, "k", "s")
        family = build_filled_mf(_star_map_from_args(args))
        prediction = predict_filled_mf(args.k, args.s)

    _self_check(kind, family, prediction)
    if args.output:
        hgio.save(family, args.output)
        summary = {
            "construction": kind,
            "output": args.output,
            "uniformity": family.k,
            "ground_size": family.max_vertex(),
            "distinct_edges": family.num_distinct,
            "total_instances": family.total_instances,
            "predicted_size": prediction.size,
            "predicted_disjoint_range": [prediction.min_disjoint, prediction.max_disjoint],
        }
        args.format = "json"
        args.output = None
        _emit(args, summary)
    else:
        sys.stdout.write(hgio.dumps(family))
    return 0


def _self_check(kind: str, family: Multihypergraph, prediction: Prediction) -> None:
    if family.total_instances != prediction.size:
        raise ConsistencyError(
            f"{kind} built {family.total_instances} instances, predicted "
            f"{prediction.size}"
        )
    verdict = verify_almost_intersecting(
        family, prediction.min_disjoint, prediction.max_disjoint
    )
    if not verdict.holds:
        raise ConsistencyError(
            f"{kind} fails its predicted disjoint-degree range "
            f"[{prediction.min_disjoint}, {prediction.max_disjoint}]"
        )


def cmd_verify(args) -> int:
    family = hgio.load(args.file)
    if args.t is not None:
        verdict = verify_almost_t_intersecting(
            family, args.a, args.b, args.t, args.witness_cap
        )
    else:
        verdict = verify_almost_intersecting(family, args.a, args.b, args.witness_cap)
    payload = {
        "file": args.file,
        "a": args.a,
        "b": args.b,
        "holds": verdict.holds,
        "witnesses": _witness_payload(verdict),
    }
    if args.t is not None:
        payload["t"] = args.t
    _emit(args, payload)
    return 0 if verdict.holds else 1


def cmd_ab(args) -> int:
    family = hgio.load(args.file)
    graph = disjointness_graph(family)
    strategy = "lex" if args.lex else "random"
    try:
        trace = run_ab(graph, strategy, args.seed)
    except IsolatedVertexError as exc:
        _emit(args, {
            "file": args.file,
            "error": "isolated-instance",
            "instance": exc.instance,
            "edge": list(exc.edge),
        })
        return 1
    verdict = check_skew_cross_intersecting(trace.sequence)
    payload = {
        "file": args.file,
        "strategy": trace.strategy,
        "steps": len(trace.sequence),
        "pairs": [[list(a), list(b)] for a, b in trace.sequence],
        "eliminated_per_step": list(trace.eliminated_per_step),
        "certificate_bound": comb(2 * family.k, family.k),
        "skew_cross_intersecting": verdict.holds,
        "violations": _witness_payload(verdict),
    }
    _emit(args, payload)
    return 0 if verdict.holds else 1


def cmd_sunflower(args) -> int:
    family = hgio.load(args.file)
    collapsed = not family.is_simple
    if collapsed:
        family = family.collapsed()
    threshold = args.threshold
    if args.paper_threshold:
        if threshold is not None:
            raise ValueError("--threshold and --paper-threshold are exclusive")
        threshold = family.k ** family.k * args.r ** family.k
    decomposition = decompose(family, args.r, threshold)
    s = args.s
    if s is None:
        s = disjointness_graph(family).max_degree
    bound = core_bound_check(decomposition, s)

    core_sizes: dict[str, int] = {}
    padded = 0
    for sf in decomposition.sunflowers:
        key = str(len(sf.core))
        core_sizes[key] = core_sizes.get(key, 0) + 1
        if len(sf.core) < family.k - 1:
            padded += 1
    payload = {
        "file": args.file,
        "r": decomposition.r,
        "threshold": decomposition.threshold,
        "collapsed_multiplicities": collapsed,
        "sunflowers": len(decomposition.sunflowers),
        "leftover": len(decomposition.leftover),
        "core_statistics": {
            "size_histogram": core_sizes,
            "padded_cores": padded,
            "distinct_cores": len({sf.core.mask for sf in decomposition.sunflowers}),
        },
        "core_bound": {
            "s": bound.s,
            "coefficient": bound.coefficient,
            "budget": bound.budget,
            "max_disjoint_cores": bound.max_disjoint_cores,
            "min_disjoint_cores": bound.min_disjoint_cores,
            "all_within_bound": bound.all_within_bound,
            "every_core_has_disjoint_core": bound.every_core_has_disjoint_core,
            "stated_threshold": bound.stated_threshold,
        },
    }
    if args.emit_cores:
        hgio.save(core_multihypergraph(decomposition), args.emit_cores)
        payload["cores_written"] = args.emit_cores
    _emit(args, payload)
    return 0


def _report_payload(report: SearchReport) -> dict:
    params = report.params
    return {
        "params": {
            "k": params.k,
            "a": params.a,
            "b": params.b,
            "n_max": params.n_max,
            "edge_cap": params.edge_cap,
            "simple": params.simple,
            "require_no_blocking_set": params.require_no_blocking_set,
        },
        "max_edges": report.max_edges,
        "complete": report.complete,
        "nodes_explored": report.nodes_explored,
        "extremal_families": [
            _family_payload(f) for f in report.extremal_families
        ],
    }


def cmd_search(args) -> int:
    params = SearchParams(
        k=args.k,
        a=args.a,
        b=args.b,
        n_max=args.max_n,
        edge_cap=args.max_edges,
        simple=not args.multi,
        require_no_blocking_set=args.no_blocking_t,
    )
    report = brute_force_oracle(params) if args.oracle else exhaustive_max(params)
    payload = _report_payload(report)
    payload["engine"] = "oracle" if args.oracle else "exhaustive"
    if args.plot:
        from .plotting import render_search_figure

        render_search_figure(payload, args.plot)
        payload["figure"] = args.plot
    _emit(args, payload)
    return 0


def cmd_claim(args) -> int:
    report = verify_extremal_claim(args.claim, args.s, args.max_n, args.max_edges)
    payload = {
        "claim": report.claim,
        "s": report.s,
        "expected_max": report.expected_max,
        "observed_max": report.observed_max,
        "bound_matches": report.bound_matches,
        "unique_extremal_matches": report.unique_extremal_matches,
        "matches": report.matches,
        "complete": report.complete,
        "s_within_theorem_range": report.s_within_theorem_range,
        "reference_family": report.reference_form.decode("ascii"),
        "observed_families": [f.decode("ascii") for f in report.observed_forms],
        "params": {
            "n_max": report.params.n_max,
            "edge_cap": report.params.edge_cap,
        },
    }
    _emit(args, payload)
    if report.matches is None:
        return 0
    return 0 if report.matches else 1


def cmd_analyze(args) -> int:
    family = hgio.load(args.file)
    graph = disjointness_graph(family)
    histogram: dict[str, int] = {}
    for d in graph.degrees:
        histogram[str(d)] = histogram.get(str(d), 0) + 1
    classification = classify_components(graph)
    nbhd = neighborhood_partition(graph)
    blocking = []
    for t in range(1, family.k):
        any_exists, _ = blocking_set_exists(family, t)
        within, _ = blocking_set_exists(family, t, restrict_to_edges=True)
        blocking.append({"t": t, "any_subset": any_exists, "within_edge": within})
    found, witness = has_mutually_disjoint_edges(family, family.k) if family.num_distinct else (False, ())
    payload = {
        "uniformity": family.k,
        "ground_size": len(family.ground),
        "distinct_edges": family.num_distinct,
        "total_instances": family.total_instances,
        "degree_histogram": histogram,
        "almost_intersecting_range": {
            "a": graph.min_degree,
            "b": graph.max_degree,
        },
        "components": {
            "counts": classification.tag_counts(),
            "isolated_instances": len(classification.isolated),
        },
        "neighborhoods": {
            "classes": len(nbhd.classes),
            "max_overlap": nbhd.max_overlap,
        },
        "blocking_sets": blocking,
        "mutually_disjoint_edges": {
            "j": family.k,
            "found": found,
            "witness": [list(e) for e in witness],
        },
    }
    if args.plot:
        from .plotting import render_analysis_figure

        render_analysis_figure(payload, args.plot)
        payload["figure"] = args.plot
    _emit(args, payload)
    return 0


# ---------------------------------------------------------------------------
# Parser
# ---------------------------------------------------------------------------


def _add_output_flags(sub) -> None:
    sub.add_argument("-o", "--output", help="write the report here instead of stdout")
    sub.add_argument("--format", choices=("json", "text"), default="json")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="almint",
        description="Construct, verify, certify and search almost-intersecting "
        "uniform hypergraphs (.hg files).",
    )
    subs = parser.add_subparsers(dest="command", required=True)

    con = subs.add_parser("construct", help="build a named family")
    con.add_argument(
        "family",
        choices=("l-family", "mf", "mstar", "complete", "k2e", "filled-mf"),
    )
    con.add_argument("--k", type=int, help="uniformity")
    con.add_argument("--s", type=int, help="disjointness parameter")
    con.add_argument("--n", type=int, help="ground-set size (complete only)")
    con.add_argument("--seed", type=int, default=0, help="seed for a random petal map")
    con.add_argument("--pool", type=int, default=None, help="petal pool size for random maps")
    con.add_argument("--map", help="JSON file with an explicit core-to-petal table")
    con.add_argument("-o", "--output", help="write the .hg file here")
    con.set_defaults(func=cmd_construct)

    ver = subs.add_parser("verify", help="check the [a,b]-almost-intersecting property")
    ver.add_argument("file")
    ver.add_argument("--a", type=int, required=True)
    ver.add_argument("--b", type=int, required=True)
    ver.add_argument("--witness-cap", type=int, default=10)
    ver.set_defaults(func=cmd_verify, t=None)
    _add_output_flags(ver)

    vert = subs.add_parser(
        "verify-t", help="check the [a,b]-almost t-intersecting property"
    )
    vert.add_argument("file")
    vert.add_argument("--a", type=int, required=True)
    vert.add_argument("--b", type=int, required=True)
    vert.add_argument("--t", type=int, required=True)
    vert.add_argument("--witness-cap", type=int, default=10)
    vert.set_defaults(func=cmd_verify)
    _add_output_flags(vert)

    ab = subs.add_parser("ab", help="run the elimination procedure and certify it")
    ab.add_argument("file")
    mode = ab.add_mutually_exclusive_group()
    mode.add_argument("--seed", type=int, default=0)
    mode.add_argument("--lex", action="store_true")
    ab.set_defaults(func=cmd_ab)
    _add_output_flags(ab)

    sun = subs.add_parser("sunflower", help="decompose into sunflowers")
    sun.add_argument("file")
    sun.add_argument("--r", type=int, required=True, help="petals per sunflower")
    sun.add_argument("--threshold", type=int, default=None,
                     help="stop once fewer edges remain (default k!(r-1)^k + 1)")
    sun.add_argument("--paper-threshold", action="store_true",
                     help="use the coarser k^k * r^k stopping bound instead")
    sun.add_argument("--emit-cores", help="write the padded core family here")
    sun.add_argument("--s", type=int, default=None,
                     help="disjointness budget for the core bound "
                     "(default: measured maximum)")
    sun.set_defaults(func=cmd_sunflower)
    _add_output_flags(sun)

    sea = subs.add_parser("search", help="exhaustive maximum-size search")
    sea.add_argument("--k", type=int, required=True)
    sea.add_argument("--a", type=int, required=True)
    sea.add_argument("--b", type=int, required=True)
    sea.add_argument("--max-n", type=int, required=True)
    sea.add_argument("--max-edges", type=int, required=True)
    sea.add_argument("--multi", action="store_true",
                     help="search multihypergraphs instead of simple families")
    sea.add_argument("--no-blocking-t", type=int, default=None,
                     help="require that no t vertices meet every edge")
    sea.add_argument("--oracle", action="store_true",
                     help="use the naive enumeration oracle instead")
    sea.add_argument("--plot", help="render extremal family sizes to this image")
    sea.set_defaults(func=cmd_search)
    _add_output_flags(sea)

    clm = subs.add_parser("claim", help="compare a search against a named claim")
    clm.add_argument("--claim", required=True, help="claim id (thm4.1 or thm4.2)")
    clm.add_argument("--s", type=int, required=True)
    clm.add_argument("--max-n", type=int, default=None)
    clm.add_argument("--max-edges", type=int, default=None)
    clm.set_defaults(func=cmd_claim)
    _add_output_flags(clm)

    ana = subs.add_parser("analyze", help="structural report on a family")
    ana.add_argument("file")
    ana.add_argument("--plot", help="render the report figures to this image")
    ana.set_defaults(func=cmd_analyze)
    _add_output_flags(ana)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConsistencyError as exc:
        print(f"almint: internal consistency alarm: {exc}", file=sys.stderr)
        return 2
    except (CapacityError, ValueError, OSError) as exc:
        print(f"almint: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
