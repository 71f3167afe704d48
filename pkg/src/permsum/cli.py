"""Command-line interface: ``permsum <subcommand> [flags]``.

Exit codes: 0 success, 1 domain error, 2 size cap exceeded, 64 usage error.
"""
from __future__ import annotations

import argparse
import csv
import dataclasses
import io
import json
import math
import sys
from typing import Any, Callable, Sequence

from . import __version__
from .errors import DomainError, NumericError, PermsumError, ResourceError

EXIT_OK, EXIT_DOMAIN, EXIT_RESOURCE, EXIT_USAGE = 0, 1, 2, 64


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str) -> None:  # type: ignore[override]
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise UsageError(message)


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise DomainError(f"cannot read {path}: {exc.strerror}") from exc


def _dump_json(obj: Any) -> str:
    return json.dumps(obj, separators=(",", ":"))


def _dump_csv(header: Sequence[str], rows: Sequence[Sequence[Any]]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for r in rows:
        w.writerow([repr(v) if isinstance(v, float) else v for v in r])
    return buf.getvalue()


def _emit(args, obj: dict, header=None, rows=None) -> str:
    if args.format == "csv":
        if header is None:
            header = list(obj)
            rows = [[obj[k] for k in header]]
        return _dump_csv(header, rows)
    return _dump_json(obj)


def _int_range(text: str) -> list[int]:
    out: list[int] = []
    for part in text.split(","):
        if ".." in part:
            lo, hi = part.split("..")
            out.extend(range(int(lo), int(hi) + 1))
        elif part:
            out.append(int(part))
    return out


def _cx(z: complex) -> dict:
    return {"re": float(z.real) + 0.0, "im": float(z.imag) + 0.0}


# --- subcommands ---------------------------------------------------------------


def cmd_encode(args) -> str:
    from .circuit import extract, read_circuit
    from .encode import encode_polynomial, export_graph
    from .poly import read_polynomial

    if bool(args.poly) == bool(args.circuit):
        raise DomainError("give exactly one of --poly or --circuit")
    if args.poly:
        poly = read_polynomial(_read(args.poly))
        scale = 1.0
    else:
        circ = read_circuit(_read(args.circuit))
        sop = extract(circ, args.inp or "0" * circ.q, args.out or "0" * circ.q)
        if not sop.feasible:
            raise DomainError("boundary conditions are contradictory; the amplitude is 0")
        poly, scale = sop.poly, sop.scale
    g = encode_polynomial(poly, cubic_variant=args.cubic, keep_clause_free=bool(args.circuit))
    if args.dense:
        return export_graph(g, "dense").rstrip("\n")
    text = export_graph(g, "json")
    if args.circuit:
        data = json.loads(text)
        data["meta"]["scale"] = scale
        text = _dump_json(data)
    return text


def cmd_permanent(args) -> str:
    from .permanent import permanent, read_matrix

    a = read_matrix(_read(args.matrix))
    value = permanent(a, args.method or "ryser", threads=args.threads)
    return _emit(args, _cx(value))


def cmd_amplitude(args) -> str:
    from .circuit import amplitude_direct, read_circuit
    from .encode import amplitude_via_graph

    circ = read_circuit(_read(args.circuit))
    a = args.inp or "0" * circ.q
    b = args.out or "0" * circ.q
    if args.via == "graph":
        amp = amplitude_via_graph(circ, a, b, method=args.method or "sparse")
    else:
        amp = amplitude_direct(circ, a, b, threads=args.threads)
    out = _cx(amp)
    out.update({"prob": abs(amp) ** 2, "via": args.via})
    return _emit(args, out)


def cmd_gadget_gen(args) -> str:
    from .gadgets import export_constraints, generate_constraints

    system = generate_constraints(args.degree, args.inner)
    lines = export_constraints(system, args.theta).splitlines()
    pairs = list(zip(lines[0::2], lines[1::2]))
    if args.format == "csv":
        return _dump_csv(["tag", "equation"], [(t[2:], e) for t, e in pairs]).rstrip("\n")
    if args.format == "json":
        return _dump_json(
            {
                "d": system.d,
                "k": system.k,
                "num_symbols": system.num_symbols,
                "equations": [{"tag": t[2:], "equation": e} for t, e in pairs],
            }
        )
    return "\n".join(lines)


def cmd_gadget_verify(args) -> str:
    from .gadgets import gadget_matrix, verify_gadget

    thetas = args.theta or [0.0, math.pi / 8, math.pi / 4, math.pi / 2, math.pi, 1.234]
    reports = [
        verify_gadget(gadget_matrix(args.degree, t, variant=args.variant), t, args.tol).to_dict()
        for t in thetas
    ]
    if args.format == "csv":
        rows = [[r["theta"], e["tag"], e["residual"], e["ok"]] for r in reports for e in r["equations"]]
        return _dump_csv(["theta", "tag", "residual", "ok"], rows)
    return _dump_json(
        {
            "degree": args.degree,
            "variant": args.variant,
            "passed": all(r["passed"] for r in reports),
            "reports": reports,
        }
    )


def cmd_analyze(args) -> str:
    from .circuit import IqpCircuit, amplitude_direct, read_circuit
    from .encode import encode_zero_zero, predicted_node_count
    from .permanent import spectral_norm
    from .resources import (
        ccz_threshold,
        log2_alpha,
        norm_bound_check,
        plan_estimation,
        resource_table,
        success_prob_klm,
    )
    from .circuit import gate_counts

    circ = read_circuit(_read(args.circuit))
    if not isinstance(circ, IqpCircuit):
        raise DomainError("analyze expects an IQP circuit")
    counts = gate_counts(circ)
    g, scale = encode_zero_zero(circ)
    norm = spectral_norm(g.adjacency) if g.n else 1.0
    p_s, log2_ps = success_prob_klm(counts)
    amp = amplitude_direct(circ, [0] * circ.q, [0] * circ.q)
    la = log2_alpha(counts, norm, g.n)
    nb = norm_bound_check(g, counts)
    thr = ccz_threshold(counts.q, counts.x, counts.y)
    plan = plan_estimation(args.epsilon, args.delta, counts, norm, g.n)
    pred = predicted_node_count(circ)
    report = {
        "counts": dataclasses.asdict(counts),
        "resources": resource_table(counts),
        "klm_success_prob": p_s,
        "klm_success_log2": log2_ps,
        "vertices": g.n,
        "predicted_vertices": pred.M,
        "rudolph_vertices": pred.rudolph,
        "graph_norm": norm,
        "norm_bounds": {"lower": nb.lower, "upper": nb.upper, "passed": nb.passed},
        "log2_alpha": la,
        "alpha_lt_1": la < 0,
        "ccz_threshold": {"t": thr.t, "c_x": thr.c_x, "c_y": thr.c_y, "c_q": thr.c_q},
        "amplitude": _cx(amp),
        "prob": abs(amp) ** 2,
        "estimation": {
            "epsilon": plan.epsilon_target,
            "delta": plan.delta,
            "eps_graph": plan.eps_graph,
            "eps_klm": plan.eps_klm,
            "n_graph": plan.n_graph,
            "n_klm": plan.n_klm,
        },
    }
    return _dump_json(report)


def cmd_prob_curve(args) -> str:
    from .resources import prob_alpha_lt_1, prob_fewer_photons

    mode = {"exact": "exact_bigint", "log": "log_float"}.get(args.mode, args.mode)
    rows = []
    for q in _int_range(args.q):
        if args.theorem == "alpha":
            p = prob_alpha_lt_1(q, mode, coefficients=args.coefficients)
        else:
            p = prob_fewer_photons(q, mode, variant=args.variant)
        rows.append([q, p])
    if args.format == "json":
        return _dump_json({"theorem": args.theorem, "points": [{"q": q, "prob": p} for q, p in rows]})
    return _dump_csv(["q", "prob"], rows).rstrip("\n")


def cmd_simulate(args) -> str:
    from .circuit import IqpCircuit, read_circuit
    from .resources import hoeffding_samples
    from .sampling import scheme_model, simulate_estimation

    circ = read_circuit(_read(args.circuit))
    if not isinstance(circ, IqpCircuit):
        raise DomainError("simulate expects an IQP circuit")
    model = scheme_model(args.scheme, circ)
    shots = args.shots or hoeffding_samples(args.epsilon, args.delta)
    base = args.seed if args.seed is not None else 0
    rows = []
    for s in range(base, base + args.runs):
        est = simulate_estimation(args.scheme, circ, shots, s, model=model)
        rows.append([s, shots, est.n_post, est.estimate])
    if args.format == "json":
        return _dump_json(
            {
                "scheme": args.scheme,
                "p_accept": model.p_accept,
                "rescale": model.rescale,
                "target": model.target,
                "runs": [dict(zip(["seed", "N", "N_post", "estimate"], r)) for r in rows],
            }
        )
    return _dump_csv(["seed", "N", "N_post", "estimate"], rows).rstrip("\n")


def cmd_boost(args) -> str:
    from .permanent import permanent, read_matrix
    from .sampling import BoostSetup, boost_recover

    a = read_matrix(_read(args.matrix))
    if args.evaluations:
        eps, ys = [], []
        for row in csv.reader(io.StringIO(_read(args.evaluations))):
            if not row or row[0].strip().startswith("#"):
                continue
            try:
                e, y = float(row[0]), float(row[1])
            except (ValueError, IndexError):
                continue  # header line
            eps.append(e)
            ys.append(y)
        setup = BoostSetup(a, tuple(eps))
        res = boost_recover(setup, ys)
    else:
        setup = BoostSetup.default(a) if not args.epsilons else BoostSetup(
            a, tuple(float(x) for x in args.epsilons.split(","))
        )
        res = boost_recover(setup)
    out = {"abs2_per": res.value, "condition": res.condition, "warning": res.warning}
    if a.shape[0] <= 20 and not args.evaluations:
        out["reference"] = abs(permanent(a, "ryser")) ** 2
    return _emit(args, out)


def cmd_stats(args) -> str:
    from .resources import ensemble_stats

    rows = []
    for q in _int_range(args.q):
        st = ensemble_stats(q)
        rows.append([q, st.size, st.log2_size, st.expected_photons])
    if args.format == "csv":
        return _dump_csv(["q", "size", "log2_size", "expected_photons"], rows).rstrip("\n")
    items = [dict(zip(["q", "size", "log2_size", "expected_photons"], r)) for r in rows]
    return _dump_json(items[0] if len(items) == 1 else items)


# --- parser --------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--format", choices=("json", "csv"), default=None)
    common.add_argument("--seed", type=int, default=None)
    common.add_argument("--method", default=None)
    common.add_argument("--threads", type=int, default=1)

    p = _Parser(prog="permsum", description="Exponential sums as permanents of gadget graphs.")
    p.add_argument("--version", action="version", version=f"permsum {__version__}")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add(name: str, fn: Callable, help_: str, fmt: str = "json") -> argparse.ArgumentParser:
        sp = sub.add_parser(name, parents=[common], help=help_)
        sp.set_defaults(func=fn, default_format=fmt)
        return sp

    sp = add("encode", cmd_encode, "encode a polynomial or circuit amplitude as a graph")
    sp.add_argument("--poly")
    sp.add_argument("--circuit")
    sp.add_argument("--in", dest="inp")
    sp.add_argument("--out")
    sp.add_argument("--dense", action="store_true", help="dense matrix text instead of JSON")
    sp.add_argument("--cubic", choices=("repaired", "published"), default="repaired")

    sp = add("permanent", cmd_permanent, "permanent of a matrix file")
    sp.add_argument("--matrix", required=True)

    sp = add("amplitude", cmd_amplitude, "<out|C|in> of a circuit")
    sp.add_argument("--circuit", required=True)
    sp.add_argument("--in", dest="inp")
    sp.add_argument("--out")
    sp.add_argument("--via", choices=("graph", "direct"), default="direct")

    sp = add("gadget-gen", cmd_gadget_gen, "export a gadget constraint system", fmt="text")
    sp.add_argument("--degree", type=int, required=True)
    sp.add_argument("--inner", type=int, required=True)
    sp.add_argument("--theta", type=float, default=None, help="numeric phase; omit for symbol T")

    sp = add("gadget-verify", cmd_gadget_verify, "verify a built-in gadget")
    sp.add_argument("--degree", type=int, required=True)
    sp.add_argument("--theta", type=float, action="append")
    sp.add_argument("--variant", choices=("published", "repaired"), default="published")
    sp.add_argument("--tol", type=float, default=1e-9)

    sp = add("analyze", cmd_analyze, "resource report for an IQP circuit")
    sp.add_argument("--circuit", required=True)
    sp.add_argument("--epsilon", type=float, default=0.01)
    sp.add_argument("--delta", type=float, default=0.05)

    sp = add("prob-curve", cmd_prob_curve, "ensemble probability curve", fmt="csv")
    sp.add_argument("--theorem", choices=("alpha", "photons"), required=True)
    sp.add_argument("--q", required=True, help="e.g. 6..12 or 10,20,30")
    sp.add_argument("--mode", choices=("exact", "log", "exact_bigint", "log_float"), default="exact")
    sp.add_argument("--coefficients", choices=("derived", "published"), default="derived")
    sp.add_argument("--variant", choices=("proof", "seven"), default="proof")

    sp = add("simulate", cmd_simulate, "simulate an estimation scheme", fmt="csv")
    sp.add_argument("--circuit", required=True)
    sp.add_argument("--scheme", choices=("graph", "klm"), required=True)
    sp.add_argument("--shots", type=int, default=None)
    sp.add_argument("--epsilon", type=float, default=0.01)
    sp.add_argument("--delta", type=float, default=0.05)
    sp.add_argument("--runs", type=int, default=1)

    sp = add("boost", cmd_boost, "recover |per A|^2 from shifted permanents")
    sp.add_argument("--matrix", required=True)
    sp.add_argument("--evaluations", help="CSV of eps,value rows")
    sp.add_argument("--epsilons", help="comma-separated list")

    sp = add("stats", cmd_stats, "size of the circuit ensemble and mean photon count")
    sp.add_argument("--q", required=True)
    return p


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError:
        return EXIT_USAGE
    if args.format is None:
        args.format = args.default_format
    try:
        out = args.func(args)
    except ResourceError as exc:
        print(f"permsum: resource limit: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    except (DomainError, NumericError, PermsumError) as exc:
        print(f"permsum: error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    sys.stdout.write(out if out.endswith("\n") else out + "\n")
    return EXIT_OK


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
