"""Command-line front end.

Commands bind the library into reproducible one-liners: build and inspect
groups, check or solve transfer instances, sweep every oriented connection
set of a small group, and replay the shipped certificate suite. All output is
deterministic for a fixed seed; --format json emits sorted keys.

Exit codes: 0 success, 2 validation error, 3 verification failure,
4 size-limit refusal.
"""
from __future__ import annotations

import argparse
import concurrent.futures
import json
import re
import shlex
import sys

import numpy as np

from .cayley import (
    CayleyGraph,
    adjacency_matrix,
    adjacency_to_csv,
    cayley_graph,
    enumerate_oriented_class_unions,
    graph_to_dot,
    is_connected,
    spectrum,
    spectrum_report,
)
from .characters import (
    character_table_for,
    character_table_to_json_str,
    export_character_table,
    galois_stabilizers,
    load_character_table,
)
from .config import DEFAULT_CONFIG, RunConfig
from .engine import (
    TIME_TAGS,
    check_imported_claim,
    check_pst_pair,
    compute_S_e,
    nonexistence_witness,
    parse_time,
    solvable_exclusion_report,
    solve_pst_time,
    time_rationality_check,
    verdict_document,
)
from .errors import (
    CorruptTableError,
    GroupValidationError,
    InconsistencyError,
    InvalidParameterError,
    InvariantBreachError,
    NumericalFailureError,
    OrientationError,
    SchemaError,
    SizeLimitError,
    VerificationFailure,
)
from .families import (
    build_group_from_spec,
    dual_verify,
    load_fixture_certificates,
)
from .groups import conjugacy, group_to_json_str, save_group
from .oracle import (
    build_hermitian_operator,
    build_operator,
    evolve_column,
    fidelity,
    fidelity_series_csv,
    scan_pst,
)

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_VERIFICATION = 3
EXIT_SIZE = 4

DEFAULT_SWEEP_LIMIT = 16


def parse_group_spec(text: str) -> dict:
    """Group mini-language -> constructor spec dict.

    Compact forms: z:<r>, z<r>^<n>, extraspecial3:<n>[:<exp>], m2:<n>,
    wreath:<base>:<n>, file:<path>. Spaced forms mirror the `group build`
    positional grammar, e.g. "extraspecial3 1 --exponent 9" or
    "wreath --base z:3 --n 2".
    """
    tokens = shlex.split(text.strip())
    if not tokens:
        raise InvalidParameterError("empty group spec")
    if len(tokens) == 1:
        tok = tokens[0]
        m = re.fullmatch(r"z:(\d+)", tok)
        if m:
            return {"family": "cyclic", "r": int(m.group(1))}
        m = re.fullmatch(r"z(\d+)\^(\d+)", tok)
        if m:
            return {"family": "abelian", "r": int(m.group(1)), "n": int(m.group(2))}
        m = re.fullmatch(r"extraspecial3:(\d+)(?::(\d+))?", tok)
        if m:
            return {"family": "extraspecial3", "n": int(m.group(1)),
                    "exponent": int(m.group(2) or 3)}
        m = re.fullmatch(r"m2:(\d+)", tok)
        if m:
            return {"family": "m2", "n": int(m.group(1))}
        if tok.startswith("wreath:"):
            base, _, n = tok[len("wreath:"):].rpartition(":")
            if not base or not n.isdigit():
                raise InvalidParameterError(f"bad wreath spec {tok!r}")
            return {"family": "wreath", "base": parse_group_spec(base), "n": int(n)}
        if tok.startswith("file:"):
            return {"family": "file", "path": tok[len("file:"):]}
        raise InvalidParameterError(f"unrecognized group spec {tok!r}")

    head, rest = tokens[0], tokens[1:]
    if head == "extraspecial3":
        exponent = 3
        if "--exponent" in rest:
            i = rest.index("--exponent")
            if i + 1 >= len(rest):
                raise InvalidParameterError("--exponent needs a value")
            exponent = int(rest[i + 1])
            rest = rest[:i] + rest[i + 2:]
        if len(rest) != 1:
            raise InvalidParameterError("extraspecial3 takes exactly one rank argument")
        return {"family": "extraspecial3", "n": int(rest[0]), "exponent": exponent}
    if head == "m2":
        if len(rest) != 1:
            raise InvalidParameterError("m2 takes exactly one exponent argument")
        return {"family": "m2", "n": int(rest[0])}
    if head == "wreath":
        base_spec = n_val = None
        i = 0
        while i < len(rest):
            if rest[i] == "--base" and i + 1 < len(rest):
                base_spec = rest[i + 1]
                i += 2
            elif rest[i] == "--n" and i + 1 < len(rest):
                n_val = int(rest[i + 1])
                i += 2
            else:
                raise InvalidParameterError(f"unexpected wreath argument {rest[i]!r}")
        if base_spec is None or n_val is None:
            raise InvalidParameterError("wreath needs --base <spec> and --n <k>")
        return {"family": "wreath", "base": parse_group_spec(base_spec), "n": n_val}
    if head == "file":
        if len(rest) != 1:
            raise InvalidParameterError("file takes exactly one path argument")
        return {"family": "file", "path": rest[0]}
    raise InvalidParameterError(f"unrecognized group family {head!r}")


def _config_from_args(args: argparse.Namespace) -> RunConfig:
    cfg = DEFAULT_CONFIG
    updates = {}
    if args.tolerance is not None:
        if args.tolerance <= 0:
            raise InvalidParameterError("tolerance must be positive")
        updates["value_tol"] = args.tolerance
        updates["residual_tol"] = args.tolerance
    for name, key in (("candidate_bound", "candidate_factor"),
                      ("max_order", "max_order"),
                      ("oracle_max_order", "oracle_max_order"),
                      ("threads", "threads"), ("seed", "seed")):
        val = getattr(args, name, None)
        if val is not None:
            if key != "seed" and val <= 0:
                raise InvalidParameterError(f"--{name.replace('_', '-')} must be positive")
            updates[key] = val
    return cfg.with_updates(**updates) if updates else cfg


def _load_group(args: argparse.Namespace, config: RunConfig, spec_text: str):
    spec = parse_group_spec(spec_text)
    group = build_group_from_spec(spec, config.max_order)
    return group, conjugacy(group)


def _resolve_classes(group, conj, text: str) -> tuple[int, ...]:
    """Comma list of class indices (bare integers) or element labels."""
    out = set()
    for tok in text.split(","):
        tok = tok.strip()
        if not tok:
            continue
        if re.fullmatch(r"\d+", tok):
            c = int(tok)
            if not 0 <= c < len(conj.classes):
                raise InvalidParameterError(
                    f"class index {c} out of range 0..{len(conj.classes) - 1}")
            out.add(c)
        else:
            out.add(int(conj.class_of[group.index_of(tok)]))
    if not out:
        raise InvalidParameterError("no connection classes given")
    return tuple(sorted(out))


def _resolve_element(group, text: str) -> int:
    tok = text.strip()
    if re.fullmatch(r"\d+", tok):
        g = int(tok)
        if not 0 <= g < group.order:
            raise InvalidParameterError(f"element index {g} out of range")
        return g
    return group.index_of(tok)


def _emit(doc, fmt: str) -> None:
    if fmt == "json":
        print(json.dumps(doc, sort_keys=True, indent=2, default=_json_default))
    else:
        _print_text(doc)


def _json_default(obj):
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.floating,)):
        return float(obj)
    raise TypeError(f"not JSON serializable: {type(obj)!r}")


def _print_text(doc, indent: int = 0) -> None:
    pad = "  " * indent
    if isinstance(doc, dict):
        for key in doc:
            val = doc[key]
            if isinstance(val, (dict, list)) and val:
                print(f"{pad}{key}:")
                _print_text(val, indent + 1)
            else:
                print(f"{pad}{key}: {_scalar(val)}")
    elif isinstance(doc, list):
        for val in doc:
            if isinstance(val, (dict, list)):
                _print_text(val, indent)
                print()
            else:
                print(f"{pad}- {_scalar(val)}")
    else:
        print(f"{pad}{_scalar(doc)}")


def _scalar(val) -> str:
    if isinstance(val, float):
        return f"{val:.12g}"
    if isinstance(val, (list, dict)) and not val:
        return "[]" if isinstance(val, list) else "{}"
    return str(val)


# ---------------------------------------------------------------------------
# group commands

def _group_summary(group, conj) -> dict:
    return {
        "family": group.family_tag,
        "order": group.order,
        "classes": len(conj.classes),
        "center": len(conj.center),
        "exponent": conj.exponent,
    }


def cmd_group(args: argparse.Namespace, config: RunConfig) -> int:
    group, conj = _load_group(args, config, " ".join(args.spec))
    if args.group_cmd == "build":
        doc = _group_summary(group, conj)
        if args.out:
            save_group(group, args.out)
            doc["saved"] = args.out
        _emit(doc, args.format)
        return EXIT_OK
    if args.group_cmd == "info":
        doc = _group_summary(group, conj)
        report = solvable_exclusion_report(group)
        doc["solvable"] = report.solvable
        doc["derived_series"] = list(report.series)
        doc["excluded_transfer_sizes"] = list(report.excluded_sizes)
        doc["class_sizes"] = conj.sizes.tolist()
        _emit(doc, args.format)
        return EXIT_OK
    # export
    if args.characters:
        table = character_table_for(group, conj, seed=config.seed,
                                    tol=config.value_tol)
        payload = character_table_to_json_str(export_character_table(table, conj))
    else:
        payload = group_to_json_str(group)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(payload)
        _emit({"saved": args.out}, args.format)
    else:
        print(payload)
    return EXIT_OK


# ---------------------------------------------------------------------------
# pst commands

def cmd_pst(args: argparse.Namespace, config: RunConfig) -> int:
    group, conj = _load_group(args, config, args.group)

    if args.pst_cmd == "nonexist":
        table = character_table_for(group, conj, seed=config.seed,
                                    tol=config.value_tol)
        z = _resolve_element(group, args.target)
        galois = galois_stabilizers(table, conj)
        witness = nonexistence_witness(conj, table, galois, z)
        doc = {"group": group.family_tag, "z": z, "z_label": group.label_of(z),
               "witness_found": witness is not None}
        if witness is not None:
            doc["characters"] = list(witness.char_indices)
            doc["exponent"] = witness.exponent
        _emit(doc, args.format)
        return EXIT_OK

    classes = _resolve_classes(group, conj, args.classes)
    oriented = not getattr(args, "undirected", False)
    graph = cayley_graph(group, conj, classes, oriented=oriented)

    if args.pst_cmd == "oracle":
        return _cmd_pst_oracle(args, config, graph)

    table = character_table_for(group, conj, seed=config.seed, tol=config.value_tol)

    if args.pst_cmd == "check":
        a = _resolve_element(group, args.source) if args.source else group.identity
        b = _resolve_element(group, args.target)
        t = parse_time(args.time)
        res = check_pst_pair(graph, table, a, b, t, config.residual_tol)
        _emit({"group": group.family_tag, "connection_classes": list(classes),
               "source": a, "target": b, "time": t, "accepted": res.accepted,
               "residual": res.residual, "reason": res.reason}, args.format)
        return EXIT_OK

    if args.pst_cmd == "solve":
        z = _resolve_element(group, args.target)
        outcome = solve_pst_time(graph, table, z, config,
                                 period_mode=args.period)
        doc = {"group": group.family_tag, "connection_classes": list(classes),
               "target": z, "found": outcome.certificate is not None}
        if outcome.certificate is not None:
            cert = outcome.certificate
            doc.update(tau=cert.tau, residual=cert.residual, k=cert.k)
        else:
            doc.update(near_miss_residual=outcome.near_miss_residual,
                       near_miss_time=outcome.near_miss_time)
        _emit(doc, args.format)
        return EXIT_OK

    # mst
    report = compute_S_e(graph, table, config)
    oracle_fid = None
    if group.order <= config.oracle_max_order and report.generator is not None:
        op = build_operator(adjacency_matrix(graph))
        oracle_fid, _ = fidelity(op, report.minimal_time, group.identity,
                                 report.generator)
    witnesses = []
    if args.witnesses:
        galois = galois_stabilizers(table, conj)
        for z in conj.center:
            if z == group.identity or z in report.S_e:
                continue
            w = nonexistence_witness(conj, table, galois, z)
            if w is not None:
                witnesses.append(w)
    doc = verdict_document(graph, report, oracle_fid, is_connected(graph),
                           witnesses)
    doc["S_e_labels"] = [group.label_of(z) for z in report.S_e]
    _emit(doc, args.format)
    return EXIT_OK


def _cmd_pst_oracle(args: argparse.Namespace, config: RunConfig, graph) -> int:
    group = graph.group
    if group.order > config.oracle_max_order:
        raise SizeLimitError(
            f"group order {group.order} exceeds the oracle cap "
            f"{config.oracle_max_order}; raise --oracle-max-order to override")
    a_mat = adjacency_matrix(graph)
    build = build_operator if graph.conn.oriented else build_hermitian_operator
    op = build(a_mat)
    source = _resolve_element(group, args.source) if args.source else group.identity

    if args.scan:
        t_max = args.t_max
        if args.format == "csv":
            print(fidelity_series_csv(op, source, t_max or 4.0 * np.pi), end="")
            return EXIT_OK
        hits = scan_pst(op, source, t_max=t_max)
        doc = {"group": group.family_tag, "source": source,
               "hits": [{"time": h.time, "target": h.target,
                         "target_label": group.label_of(h.target),
                         "fidelity": h.fidelity} for h in hits]}
        _emit(doc, args.format)
        return EXIT_OK

    if args.time is None:
        raise InvalidParameterError("oracle needs --time or --scan")
    t = parse_time(args.time)
    col = evolve_column(op, t, source)
    mags = np.abs(col)
    if args.target is not None:
        b = _resolve_element(group, args.target)
    else:
        off = mags.copy()
        off[source] = -1.0
        b = int(np.argmax(off))
    doc = {"group": group.family_tag, "source": source, "time": t,
           "target": b, "target_label": group.label_of(b),
           "fidelity": float(mags[b]),
           "entry": [float(col[b].real), float(col[b].imag)],
           "return_fidelity": float(mags[source])}
    _emit(doc, args.format)
    return EXIT_OK


# ---------------------------------------------------------------------------
# sweep

def cmd_sweep(args: argparse.Namespace, config: RunConfig) -> int:
    group, conj = _load_group(args, config, args.group)
    limit = args.limit if args.limit is not None else DEFAULT_SWEEP_LIMIT
    if group.order > limit:
        raise SizeLimitError(
            f"group order {group.order} exceeds the sweep limit {limit}; "
            f"raise --limit to allow it")
    table = character_table_for(group, conj, seed=config.seed, tol=config.value_tol)
    histogram: dict[int, int] = {}
    certificates = []
    tested = 0
    for conn in enumerate_oriented_class_unions(conj, max_classes=args.max_classes):
        graph = CayleyGraph(group=group, conj=conj, conn=conn)
        if args.connected_only and not is_connected(graph):
            continue
        tested += 1
        report = compute_S_e(graph, table, config)
        histogram[report.size] = histogram.get(report.size, 0) + 1
        if report.size > 1:
            certificates.append({
                "connection_classes": list(conn.class_indices),
                "size": report.size,
                "tau": report.minimal_time,
                "generator": report.generator,
            })
    doc = {"group": group.family_tag, "sets_tested": tested,
           "histogram": {str(k): histogram[k] for k in sorted(histogram)},
           "certificates": certificates}
    _emit(doc, args.format)
    return EXIT_OK


# ---------------------------------------------------------------------------
# verify

def _verify_line(rep) -> str:
    parts = [f"{'ok ' if rep.ok else 'FAIL'} {rep.name:24s}"]
    if rep.criterion_residual is not None:
        parts.append(f"residual={rep.criterion_residual:.3e}")
    if rep.oracle_fidelity is not None:
        parts.append(f"fidelity={rep.oracle_fidelity:.12f}")
    if rep.mst is not None and rep.mst.minimal_time is not None:
        rational = time_rationality_check(rep.mst.minimal_time, rep.mst.size)
        if rational.ok:
            parts.append(f"tau={rational.p}/{rational.q}*{rational.multiplier}")
        else:
            parts.append(f"tau={rep.mst.minimal_time:.12g}")
        parts.append(f"size={rep.mst.size}")
    return " ".join(parts)


def cmd_verify(args: argparse.Namespace, config: RunConfig) -> int:
    certs = load_fixture_certificates(args.fixtures)
    if args.only:
        wanted = set(args.only)
        unknown = wanted - {c.name for c in certs}
        if unknown:
            raise InvalidParameterError(f"unknown fixture names: {sorted(unknown)}")
        certs = [c for c in certs if c.name in wanted]
    if not certs:
        raise InvalidParameterError("no fixtures selected")

    if config.threads > 1:
        with concurrent.futures.ThreadPoolExecutor(max_workers=config.threads) as ex:
            reports = list(ex.map(lambda c: dual_verify(c, config), certs))
    else:
        reports = [dual_verify(c, config) for c in certs]

    failures = []
    json_docs = []
    for rep in reports:
        if args.format != "json":
            print(_verify_line(rep))
            for msg in rep.messages:
                print(f"     - {msg}")
        json_docs.append({
            "name": rep.name, "ok": rep.ok, "messages": rep.messages,
            "criterion_residual": rep.criterion_residual,
            "oracle_fidelity": rep.oracle_fidelity,
            "connected": rep.connected,
            "verdict": rep.verdict,
        })
        if not rep.ok:
            failures.append(rep.name)

    import_docs = []
    for path in args.import_table or []:
        imported = load_character_table(path, config.value_tol)
        if not imported.claims:
            import_docs.append({"path": path, "claims": [],
                                "note": "table valid, no claims shipped"})
            if args.format != "json":
                print(f"ok   import {path}: table valid, no claims")
            continue
        claim_results = []
        for claim in imported.claims:
            result = check_imported_claim(imported, claim, config.residual_tol)
            claim_results.append(result)
            if not result["accepted"]:
                failures.append(f"import:{path}")
            if args.format != "json":
                status = "ok  " if result["accepted"] else "FAIL"
                print(f"{status} import {path}: z_class={result['z_class']} "
                      f"t={result['time']:.12g} residual={result['residual']:.3e}")
        import_docs.append({"path": path, "claims": claim_results})

    if args.format == "json":
        _emit({"certificates": json_docs, "imports": import_docs,
               "failures": failures, "ok": not failures}, "json")
    else:
        print(f"verified {len(reports)} certificates, "
              f"{len(args.import_table or [])} imports: "
              f"{'all ok' if not failures else f'{len(failures)} FAILED'}")
    if failures:
        raise VerificationFailure(f"failed: {', '.join(failures)}")
    return EXIT_OK


# ---------------------------------------------------------------------------
# graph exports (dot / csv / spectrum)

def cmd_graph(args: argparse.Namespace, config: RunConfig) -> int:
    group, conj = _load_group(args, config, args.group)
    classes = _resolve_classes(group, conj, args.classes)
    graph = cayley_graph(group, conj, classes, oriented=not args.undirected)
    if args.format == "dot":
        print(graph_to_dot(graph), end="")
        return EXIT_OK
    if args.format == "csv":
        print(adjacency_to_csv(adjacency_matrix(graph)), end="")
        return EXIT_OK
    doc = {"group": group.family_tag, "connection_classes": list(classes),
           "order": group.order, "connected": is_connected(graph),
           "arcs": len(graph.conn.elements) * group.order}
    if graph.conn.oriented:
        table = character_table_for(group, conj, seed=config.seed,
                                    tol=config.value_tol)
        doc["spectrum"] = spectrum_report(table, spectrum(graph, table))
    _emit(doc, args.format)
    return EXIT_OK


# ---------------------------------------------------------------------------
# parser wiring

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="caywalk",
        description="State transfer on oriented normal Cayley graphs.")
    parser.add_argument("--seed", type=int, default=None,
                        help="RNG seed for numerical character tables (default 42)")
    parser.add_argument("--tolerance", type=float, default=None,
                        help="override the residual/value tolerance")
    parser.add_argument("--candidate-bound", dest="candidate_bound", type=int,
                        default=None, help="phase winding bound factor K/|G|")
    parser.add_argument("--max-order", dest="max_order", type=int, default=None,
                        help="largest group order any constructor may build")
    parser.add_argument("--oracle-max-order", dest="oracle_max_order", type=int,
                        default=None,
                        help="largest order the matrix oracle will exponentiate")
    parser.add_argument("--threads", type=int, default=None,
                        help="worker cap for the verify command")
    parser.add_argument("--format", choices=("text", "json", "csv", "dot"),
                        default="text", help="output format")

    sub = parser.add_subparsers(dest="command", required=True)

    p_group = sub.add_parser("group", help="build, inspect, or export groups")
    gsub = p_group.add_subparsers(dest="group_cmd", required=True)
    for name, extra in (("build", "construct a group and print its summary"),
                        ("info", "order, classes, center, exponent, solvability"),
                        ("export", "write the group table (or --characters) as JSON")):
        pg = gsub.add_parser(name, help=extra)
        if name in ("build", "export"):
            pg.add_argument("--out", default=None, help="write JSON to this path")
        if name == "export":
            pg.add_argument("--characters", action="store_true",
                            help="export the character table instead of the group")
        # REMAINDER so description-internal flags (--exponent, --base, --n)
        # pass through; command options like --out must come first.
        pg.add_argument("spec", nargs=argparse.REMAINDER,
                        help="group spec, e.g. z:8, z4^2, extraspecial3 1, "
                             "m2 5, wreath --base z:3 --n 2, file <path>")

    p_pst = sub.add_parser("pst", help="check, solve, and survey state transfer")
    psub = p_pst.add_subparsers(dest="pst_cmd", required=True)

    def add_common(p, classes_required=True):
        p.add_argument("--group", required=True, help="group spec")
        if classes_required:
            p.add_argument("--classes", required=True,
                           help="comma list: class indices or element labels")

    p_check = psub.add_parser("check", help="test transfer at a given time")
    add_common(p_check)
    p_check.add_argument("--target", required=True)
    p_check.add_argument("--time", required=True,
                         help=f"float or one of {sorted(TIME_TAGS)} or solved:<x>")
    p_check.add_argument("--source", default=None,
                         help="start vertex (default: identity)")

    p_solve = psub.add_parser("solve", help="minimal transfer time to a target")
    add_common(p_solve)
    p_solve.add_argument("--target", required=True)
    p_solve.add_argument("--period", action="store_true",
                         help="solve for a return time (target = identity)")

    p_mst = psub.add_parser("mst", help="full transfer-set verdict")
    add_common(p_mst)
    p_mst.add_argument("--witnesses", action="store_true",
                       help="include nonexistence witnesses for excluded targets")

    p_oracle = psub.add_parser("oracle", help="matrix-exponential verification")
    add_common(p_oracle)
    p_oracle.add_argument("--time", default=None)
    p_oracle.add_argument("--scan", action="store_true",
                          help="scan [0, t-max] for high-fidelity events")
    p_oracle.add_argument("--t-max", dest="t_max", type=float, default=None)
    p_oracle.add_argument("--source", default=None)
    p_oracle.add_argument("--target", default=None)
    p_oracle.add_argument("--undirected", action="store_true",
                          help="symmetric connection set, hermitian walk")

    p_nx = psub.add_parser("nonexist",
                           help="character witness ruling out transfer to a target")
    p_nx.add_argument("--group", required=True)
    p_nx.add_argument("--target", required=True)

    p_sweep = sub.add_parser("sweep",
                             help="try every oriented connection set of a small group")
    p_sweep.add_argument("--group", required=True)
    p_sweep.add_argument("--limit", type=int, default=None,
                         help=f"group order cap (default {DEFAULT_SWEEP_LIMIT})")
    p_sweep.add_argument("--max-classes", dest="max_classes", type=int, default=None,
                         help="cap on connection classes per set")
    p_sweep.add_argument("--connected-only", action="store_true",
                         help="skip disconnected graphs")

    p_verify = sub.add_parser("verify",
                              help="replay the shipped certificate suite")
    p_verify.add_argument("--fixtures", default=None,
                          help="directory of fixture JSON (default: shipped)")
    p_verify.add_argument("--import-table", dest="import_table", action="append",
                          help="also check claims in an imported character table")
    p_verify.add_argument("--only", action="append",
                          help="restrict to named fixtures (repeatable)")

    p_graph = sub.add_parser("graph", help="adjacency, DOT, and spectrum exports")
    p_graph.add_argument("--group", required=True)
    p_graph.add_argument("--classes", required=True)
    p_graph.add_argument("--undirected", action="store_true")

    return parser


_HANDLERS = {
    "group": cmd_group,
    "pst": cmd_pst,
    "sweep": cmd_sweep,
    "verify": cmd_verify,
    "graph": cmd_graph,
}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        config = _config_from_args(args)
        return _HANDLERS[args.command](args, config)
    except (InvalidParameterError, OrientationError, GroupValidationError,
            SchemaError, CorruptTableError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except (VerificationFailure, InvariantBreachError, InconsistencyError,
            NumericalFailureError) as exc:
        print(f"verification failure: {exc}", file=sys.stderr)
        return EXIT_VERIFICATION
    except SizeLimitError as exc:
        print(f"size limit: {exc}", file=sys.stderr)
        return EXIT_SIZE


if __name__ == "__main__":
    sys.exit(main())
