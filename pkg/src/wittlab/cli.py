"""``wittlab`` command line.

Every subcommand reads JSON, calls the library and writes a JSON (or CSV)
report. Exit codes: 0 success, 1 usage or parse error, 2 validation or
precondition failure, 3 acceptance-suite failure.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import os
import sys
from typing import Any, Callable, Sequence

from . import acceptance, intmat
from .homology import DEFAULT_PI1_BUDGET, connectivity_report, homology, is_lcm, is_wcm, prop25_harness
from .ka import (
    SMALL_COMPLEX_LIMIT,
    build_ka,
    cancellation_witness,
    certified_stable_witt,
    ka_stats,
    theorem32_evidence,
    transitivity_witness,
    vertex_from_images,
)
from .quadratic import (
    QModMorphism,
    arf_invariant,
    orthogonal_complement,
    stable_witt_lower_bound,
    witt_index_lower_bound,
)
from .reduction import HVector, apply_word, orbit_search, reducing_word, word_to_json
from .serialize import (
    FormatError,
    complex_from_json,
    dumps,
    encode_matrix,
    encode_vector,
    flatten,
    matrix_from_json,
    module_from_json,
    module_to_json,
    param_from_json,
    param_from_label,
    vector_from_json,
)
from .simplicial import SimplicialComplex

log = logging.getLogger("wittlab")

EXIT_OK, EXIT_USAGE, EXIT_INVALID, EXIT_SUITE = 0, 1, 2, 3


class UsageError(Exception):
    pass


class InvalidInput(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):  # argparse exits with 2 by default
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def thread_cap() -> int:
    """``WITTLAB_THREADS`` (default 1). Work runs serially, so this caps at 1."""
    raw = os.environ.get("WITTLAB_THREADS", "1")
    try:
        n = int(raw)
    except ValueError:
        raise UsageError(f"WITTLAB_THREADS must be a positive integer, got {raw!r}") from None
    if n < 1:
        raise UsageError("WITTLAB_THREADS must be positive")
    return 1


def _read(arg: str) -> Any:
    """JSON from a file path, or inline JSON when the argument looks like JSON."""
    text = arg.strip()
    if text[:1] in "[{":
        try:
            return json.loads(text)
        except json.JSONDecodeError as exc:
            raise FormatError(f"inline JSON: {exc}") from None
    try:
        with open(arg, encoding="utf-8") as fh:
            return json.load(fh)
    except json.JSONDecodeError as exc:
        raise FormatError(f"{arg}: {exc}") from None
    except OSError as exc:
        raise FormatError(f"{arg}: {exc.strerror}") from None


def _module(arg: str):
    return module_from_json(_read(arg))


def _valid_module(arg: str):
    M = _module(arg)
    v = M.validate()
    if not v:
        raise InvalidInput(f"module violates {v.invariant}: {v.detail}")
    return M


# --- commands -----------------------------------------------------------------


def cmd_validate(args) -> tuple[dict, int]:
    M = _module(args.path)
    v = M.validate()
    report = {"ok": v.ok, "invariant": v.invariant, "detail": v.detail, "rank": M.rank, "param": M.param.label}
    return report, EXIT_OK if v.ok else EXIT_INVALID


def cmd_reduce(args) -> tuple[dict, int]:
    data = _read(args.path)
    if isinstance(data, dict) and "epsilon" in data:
        param = param_from_json(data["epsilon"], data.get("lambda"))
    else:
        param = param_from_label(args.param)
    try:
        v = HVector(param, vector_from_json(data))
    except ValueError as exc:
        raise FormatError(str(exc)) from None
    content = intmat.content(v.coords)
    if args.target is not None:
        try:
            w = HVector(param, vector_from_json(_read(args.target)))
        except ValueError as exc:
            raise FormatError(str(exc)) from None
        if len(w.coords) != len(v.coords):
            raise InvalidInput("source and target have different lengths")
        tc = intmat.content(w.coords)
        if tc != content:
            report = {
                "found": False,
                "reason": "gcd obstruction",
                "detail": f"moves preserve the gcd of coordinates: {content} != {tc}",
                "vector": encode_vector(v.coords),
                "target": encode_vector(w.coords),
            }
            return report, EXIT_OK
        word = orbit_search(v, w, args.depth)
        report = {
            "found": word is not None,
            "vector": encode_vector(v.coords),
            "target": encode_vector(w.coords),
            "depth": args.depth,
            "word": word_to_json(word) if word is not None else None,
        }
        return report, EXIT_OK
    if content != 1:
        raise InvalidInput(f"gcd obstruction: the vector has content {content}, not unimodular")
    try:
        word = reducing_word(v, args.depth)
    except LookupError as exc:
        raise InvalidInput(str(exc)) from None
    res = apply_word(word, v)
    return {
        "vector": encode_vector(v.coords),
        "param": param.label,
        "word": word_to_json(word),
        "length": len(word),
        "result": encode_vector(res.coords),
    }, EXIT_OK


def cmd_witt(args) -> tuple[dict, int]:
    M = _valid_module(args.path)
    g, w = witt_index_lower_bound(M, args.bound)
    report = {
        "rank": M.rank,
        "bound": args.bound,
        "witt_lower_bound": g,
        "witness": {"matrix": encode_matrix(w.matrix)},
        "stable_lower_bounds": {str(k): stable_witt_lower_bound(M, k, args.bound) for k in range(args.stable_k + 1)},
    }
    return report, EXIT_OK


def cmd_arf(args) -> tuple[dict, int]:
    M = _valid_module(args.path)
    try:
        a = arf_invariant(M)
    except ValueError as exc:
        raise InvalidInput(str(exc)) from None
    return {"rank": M.rank, "arf": a}, EXIT_OK


def cmd_complement(args) -> tuple[dict, int]:
    data = _read(args.path)
    if not isinstance(data, dict) or not {"source", "target", "matrix"} <= set(data):
        raise FormatError("complement input needs 'source', 'target' and 'matrix'")
    S, T = module_from_json(data["source"]), module_from_json(data["target"])
    f = QModMorphism(S, T, matrix_from_json(data["matrix"]))
    try:
        c = orthogonal_complement(f)
    except ValueError as exc:
        raise InvalidInput(str(exc)) from None
    return {
        "complement": module_to_json(c.module),
        "basis": encode_matrix(c.basis),
        "change_of_basis": encode_matrix(c.change_of_basis),
        "verified": c.verify(f),
    }, EXIT_OK


def cmd_ka(args) -> tuple[dict, int]:
    M = _valid_module(args.path)
    K = build_ka(M, args.bound)
    stats = ka_stats(K, args.max_degree)
    report: dict = {"bound": args.bound, "stats": stats.to_json()}
    if len(K) == 0:
        report["empty"] = True
    if len(K) <= SMALL_COMPLEX_LIMIT:
        H = homology(K.to_simplicial_complex(), args.max_degree)
        report["homology"] = H.to_json()
    else:
        report["homology"] = None
    g = args.g if args.g is not None else max(certified_stable_witt(M, args.bound), 0)
    report["g"] = g
    report["evidence"] = [r.to_json() for r in theorem32_evidence(M, g, args.bound, args.max_degree, args.pi1_budget, K)]
    return report, EXIT_OK


def _complex(arg: str):
    return complex_from_json(_read(arg))


def cmd_homology(args) -> tuple[dict, int]:
    X = _complex(args.path)
    H = homology(X, args.max_degree)
    report: dict = {
        "groups": H.to_json(),
        "reduced": [H.reduced(k).to_json() for k in range(-1, args.max_degree + 1)],
        "euler_characteristic_truncated": H.euler_characteristic(),
    }
    if isinstance(X, SimplicialComplex):
        report["connectivity"] = connectivity_report(X, args.max_degree, args.pi1_budget).to_json()
    return report, EXIT_OK


def _simplicial(arg: str) -> SimplicialComplex:
    X = _complex(arg)
    if not isinstance(X, SimplicialComplex):
        raise InvalidInput("this command needs a simplicial complex")
    return X


def cmd_wcm(args) -> tuple[dict, int]:
    res = is_wcm(_simplicial(args.path), args.n, args.pi1_budget)
    return {"n": args.n, "ok": res.ok, "witness": None if res.witness is None else list(res.witness)}, EXIT_OK


def cmd_lcm(args) -> tuple[dict, int]:
    res = is_lcm(_simplicial(args.path), args.n, args.pi1_budget)
    return {"n": args.n, "ok": res.ok, "witness": None if res.witness is None else list(res.witness)}, EXIT_OK


def cmd_prop25(args) -> tuple[dict, int]:
    X = _simplicial(args.path)
    Y = [int(v) for v in args.y.split(",") if v.strip()]
    return prop25_harness(X, Y, args.n, args.pi1_budget).to_json(), EXIT_OK


def cmd_transitivity(args) -> tuple[dict, int]:
    data = _read(args.path)
    if not isinstance(data, dict) or not {"module", "h0", "h1"} <= set(data):
        raise FormatError("transitivity input needs 'module', 'h0' and 'h1'")
    M = module_from_json(data["module"])
    try:
        hs = []
        for key in ("h0", "h1"):
            A = matrix_from_json(data[key])
            hs.append(vertex_from_images(M, [r[0] for r in A], [r[1] for r in A]))
    except (ValueError, IndexError) as exc:
        raise InvalidInput(f"bad vertex: {exc}") from None
    w = transitivity_witness(M, hs[0], hs[1], args.bound)
    if w is None:
        return {"found": False, "bound": args.bound}, EXIT_OK
    return {
        "found": True,
        "bound": args.bound,
        "automorphism": encode_matrix(w.automorphism),
        "path": [encode_matrix(v.matrix) for v in w.path],
    }, EXIT_OK


def cmd_cancel(args) -> tuple[dict, int]:
    data = _read(args.path)
    if not isinstance(data, dict) or not {"M", "N", "phi"} <= set(data):
        raise FormatError("cancellation input needs 'M', 'N' and 'phi'")
    M, N = module_from_json(data["M"]), module_from_json(data["N"])
    try:
        c = cancellation_witness(M, N, matrix_from_json(data["phi"]), args.bound)
    except ValueError as exc:
        raise InvalidInput(str(exc)) from None
    if c is None:
        return {"found": False, "bound": args.bound}, EXIT_OK
    return {
        "found": True,
        "bound": args.bound,
        "isomorphism": {"matrix": encode_matrix(c.isomorphism.matrix)},
        "inverse": {"matrix": encode_matrix(c.inverse.matrix)},
    }, EXIT_OK


def cmd_suite(args) -> tuple[dict, int]:
    if args.profile not in acceptance.PROFILES:
        raise UsageError(f"unknown profile {args.profile!r}; known: {', '.join(acceptance.PROFILES)}")
    only = [int(x) for x in args.only.split(",")] if args.only else None
    if only and any(n not in acceptance.CRITERIA for n in only):
        raise UsageError(f"criteria are numbered 1..{max(acceptance.CRITERIA)}")

    def show(r: acceptance.CriterionResult) -> None:
        if not args.quiet:
            status = "PASS" if r.ok else "FAIL"
            budget = "-" if r.budget_s is None else f"{r.budget_s:g}s"
            print(f"  [{status}] {r.number:2d} {r.name:<32s} {r.elapsed_s:7.1f}s / {budget}", file=sys.stderr)

    first = acceptance.run_suite(args.seed, args.golden, args.pi1_budget, only, show)
    text1 = dumps(acceptance.report_json(first, args.seed, args.profile))
    second = acceptance.run_suite(args.seed, args.golden, args.pi1_budget, only)
    text2 = dumps(acceptance.report_json(second, args.seed, args.profile))
    det = acceptance.CriterionResult(
        10, "determinism", text1 == text2, None, {"runs": 2, "identical": text1 == text2}
    )
    show(det)
    results = first + [det]
    report = acceptance.report_json(results, args.seed, args.profile)
    failed = [r for r in results if not r.ok]
    for r in failed:
        print(f"wittlab suite: criterion {r.number} ({r.name}) failed", file=sys.stderr)
    return report, EXIT_OK if not failed else EXIT_SUITE


# --- plumbing -----------------------------------------------------------------


def _to_csv(report: dict) -> str:
    rows = [flatten(c) for c in report["criteria"]] if "criteria" in report else [flatten(report)]
    cols: list[str] = []
    for r in rows:
        cols += [c for c in r if c not in cols]
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=cols, lineterminator="\n")
    w.writeheader()
    for r in rows:
        w.writerow(r)
    return buf.getvalue()


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--bound", type=int, default=1, help="coefficient bound for searches (default 1)")
    common.add_argument("--max-degree", type=int, default=3, help="top homology degree (default 3)")
    common.add_argument("--pi1-budget", type=int, default=DEFAULT_PI1_BUDGET, help="Tietze move budget")
    common.add_argument("--seed", type=int, default=0, help="random seed (default 0)")
    common.add_argument("--format", choices=("json", "csv"), default="json")
    common.add_argument("--out", help="write the report here instead of stdout")
    common.add_argument("-v", "--verbose", action="store_true")

    p = _Parser(prog="wittlab", description="Quadratic modules, hyperbolic reduction and complexes of hyperbolic morphisms.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add(name: str, fn: Callable, help: str, path: bool = True):
        sp = sub.add_parser(name, parents=[common], help=help)
        if path:
            sp.add_argument("path", help="input JSON file (or inline JSON)")
        sp.set_defaults(func=fn)
        return sp

    add("validate", cmd_validate, "check the axioms of a quadratic module")
    sp = add("reduce", cmd_reduce, "reduce a unimodular vector of H^(n+1) into the first block")
    sp.add_argument("--param", default="even", help="form parameter: sym, even, all or (eps,lambda)")
    sp.add_argument("--target", help="search for a word to this vector instead")
    sp.add_argument("--depth", type=int, default=12, help="search depth (default 12)")
    sp = add("witt", cmd_witt, "bounded Witt index with witness")
    sp.add_argument("--stable-k", type=int, default=1, help="largest stabilization k (default 1)")
    add("arf", cmd_arf, "Arf invariant of a (-1, even) module")
    add("complement", cmd_complement, "orthogonal complement of a morphism image")
    sp = add("ka", cmd_ka, "truncated complex of hyperbolic morphisms")
    sp.add_argument("--g", type=int, help="claimed stable Witt index (default: certified lower bound)")
    add("homology", cmd_homology, "integral homology of a complex")
    for name, fn in (("wcm", cmd_wcm), ("lcm", cmd_lcm)):
        sp = add(name, fn, f"{'weakly' if name == 'wcm' else 'locally weakly'} Cohen-Macaulay check")
        sp.add_argument("--n", type=int, required=True, help="dimension")
    sp = add("prop25", cmd_prop25, "link hypothesis and relative homology for a full subcomplex")
    sp.add_argument("--y", required=True, help="comma-separated vertices of the full subcomplex")
    sp.add_argument("--n", type=int, required=True)
    add("transitivity", cmd_transitivity, "automorphism carrying h0 to h1")
    add("cancel", cmd_cancel, "cancel a hyperbolic summand from an isomorphism")
    sp = add("suite", cmd_suite, "run the acceptance suite", path=False)
    sp.add_argument("--profile", default="desk")
    sp.add_argument("--golden", help="golden homology file (default: packaged copy)")
    sp.add_argument("--only", help="comma-separated criterion numbers")
    sp.add_argument("--quiet", action="store_true", help="no progress table")
    return p


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(name)s: %(message)s")
    try:
        thread_cap()
        report, code = args.func(args)
    except (UsageError, FormatError) as exc:
        print(f"wittlab {args.command}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (InvalidInput, ValueError) as exc:
        print(f"wittlab {args.command}: {exc}", file=sys.stderr)
        return EXIT_INVALID
    text = _to_csv(report) if args.format == "csv" else dumps(report)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
