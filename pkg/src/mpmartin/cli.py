"""Command-line interface: ``mpmartin <command> ...``.

Reads kernels, vectors, families and graphs as JSON, writes JSON reports
(or plain tables with ``--format table``). The exit code is 0 exactly when
every verdict the command computes passes.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import corpus, formats
from .errors import DivergentStar, MaxPlusError, NotDistanceLike, NotHarmonic, NotSuperharmonic
from .geodesics import min_parameter_at, min_parameter_kernel, min_parameter_u, rebase, witness_geodesic
from .harmonic import represents
from .kernels import MartinInstance, build_point_set, finite_martin_space, minimal_martin_space
from .measures import mu_min
from .metric import (
    graph_metric,
    greatest_nu,
    horofunction_limit,
    inf_representation_check,
    is_distance_like,
    rieffel_threshold,
)
from .semiring import DEFAULT_TOL, kleene_plus, star_from_plus


class Failure(Exception):
    """A computed verdict failed; carries the report to print."""

    def __init__(self, payload):
        self.payload = payload
        super().__init__("verdict failed")


def _load(path):
    with open(path) as fh:
        return json.load(fh)


def _kernel(args):
    A, base = formats.kernel_from_json(_load(args.kernel))
    return A, getattr(args, "basepoint", None) or base


def _instance(args):
    A, base = _kernel(args)
    if base is None:
        raise SystemExit("a basepoint is required (--basepoint or in the kernel file)")
    return MartinInstance(A, base, args.tol)


def _family(args):
    return formats.family_from_json(_load(args.family)) if getattr(args, "family", None) else None


def _u(args, inst):
    data = _load(args.u)
    u = formats.vector_from_json(data, list(inst.states))
    interior = data.get("interior")
    return u, (inst.A.idx(interior) if interior is not None else None)


def _check_positions(inst, ps, family):
    """Window positions where representation verdicts are asserted."""
    if family is None or family.core is None:
        return None
    pos = {s: k for k, s in enumerate(ps.window)}
    return [pos[i] for i in inst.A.idx(family.core)]


def cmd_star(args):
    A, _ = _kernel(args)
    try:
        plus = kleene_plus(A, args.tol)
    except DivergentStar as exc:
        raise Failure(
            {"error": "DivergentStar", "cycle": exc.cycle, "weight": exc.weight}
        ) from None
    star = star_from_plus(plus)
    return {"Aplus": formats.kernel_to_json(plus), "Astar": formats.kernel_to_json(star)}


def cmd_martin(args):
    inst = _instance(args)
    points = finite_martin_space(inst)
    return {
        "basepoint": inst.basepoint,
        "states": list(inst.states),
        "K": inst.K,
        "points": {p.name: {"witnesses": p.witnesses, "vector": p.vector} for p in points},
    }


def cmd_minimal_space(args):
    inst = _instance(args)
    ps = build_point_set(inst, _family(args), None, args.tol)
    minimal = minimal_martin_space(inst, ps, args.tol)
    return {"points": list(ps.names), "minimal": minimal}


def cmd_measures(args):
    inst = _instance(args)
    family = _family(args)
    u, interior = _u(args, inst)
    try:
        res = mu_min(inst, u, family, tol=args.tol, interior=interior)
    except NotSuperharmonic as exc:
        raise Failure({"error": "NotSuperharmonic", "report": exc.report}) from None
    cols = _check_positions(inst, res.ps, family)
    rep_max = res.represents(res.mumax, cols)
    rep_min = res.represents(res.mumin, cols)
    out = {
        "points": res.report(),
        "harmonic": res.harmonic,
        "represents": {"mumax": rep_max.verdict, "mumin": rep_min.verdict},
        "worst_residual": {"mumax": rep_max.worst(), "mumin": rep_min.worst()},
    }
    if not (rep_max.verdict and rep_min.verdict):
        raise Failure(out)
    return out


def cmd_represent(args):
    inst = _instance(args)
    family = _family(args)
    u, _ = _u(args, inst)
    mu = formats.measure_from_json(_load(args.measure))
    ps = build_point_set(inst, family, None, args.tol)
    cols = _check_positions(inst, ps, family)
    cols = np.arange(len(ps.window)) if cols is None else np.asarray(cols)
    pts = [(ps.vectors[k, cols], n) for k, n in enumerate(ps.names)]
    labels = [inst.states[ps.window[c]] for c in cols]
    rep = represents(pts, mu, u[[ps.window[c] for c in cols]], args.tol, labels, family is not None)
    out = formats.report_to_json(rep)
    if not rep.verdict:
        raise Failure(out)
    return out


def cmd_geodesic_certify(args):
    if args.u:
        A, base = _kernel(args)
        u = formats.vector_from_json(_load(args.u), list(A.states))
        beta = min_parameter_u(A, u, args.path)
        kind, ref = "u_relative", "u"
    else:
        inst = _instance(args)
        beta = min_parameter_kernel(inst, args.path)
        kind, ref = "kernel", inst.basepoint
    ok = args.beta is None or beta <= args.beta + args.tol
    out = {"path": args.path, "kind": kind, "beta": beta, "reference": ref, "checks": {"prefix_ok": ok}}
    if not ok:
        raise Failure(out)
    return out


def cmd_geodesic_rebase(args):
    inst = _instance(args)
    beta = args.beta if args.beta is not None else min_parameter_kernel(inst, args.path)
    moved = rebase(inst, args.path, beta, args.new_base)
    least = min_parameter_at(inst, args.path, args.new_base)
    return {
        "path": args.path,
        "beta": beta,
        "new_base": args.new_base,
        "rebased_beta": moved,
        "least_beta_at_new_base": least,
        "bound_holds": bool(least <= moved + args.tol),
    }


def cmd_geodesic_witness(args):
    inst = _instance(args)
    u, interior = _u(args, inst)
    try:
        cert = witness_geodesic(
            inst, u, args.start, args.delta, args.eps, args.horizon, interior=interior, tol=args.tol
        )
    except (NotHarmonic, NotSuperharmonic) as exc:
        raise Failure({"error": type(exc).__name__, "report": exc.report}) from None
    out = formats.to_json(cert)
    ok = cert.checks["prefix_ok"] and cert.checks["gap"] <= args.delta + args.tol
    if not ok:
        raise Failure(out)
    return out


def _metric(args):
    data = _load(args.graph)
    return graph_metric(data["nodes"], data["edges"], data.get("basepoint"), args.tol)


def _window_f(args, m):
    labels, f = formats.vector_from_json(_load(args.f))
    return labels, f


def cmd_metric_distance_like(args):
    m = _metric(args)
    labels, f = _window_f(args, m)
    rep = is_distance_like(m, f, labels, tol=args.tol, margin=args.window_margin)
    out = {
        "verdict": rep.verdict,
        "checked": rep.checked,
        "violations": [list(v) for v in rep.violations],
        "skipped": len(rep.skipped),
        "empty_levels": len(rep.empty_levels),
    }
    if not rep.verdict:
        raise Failure(out)
    return out


def cmd_metric_horolimit(args):
    m = _metric(args)
    h = horofunction_limit(m, args.ray, args.window, args.tol, args.name)
    return formats.horofunctions_to_json([h])


def cmd_metric_rieffel(args):
    m = _metric(args)
    N = rieffel_threshold(m, args.path, args.eps)
    ok = N is not None and len(args.path) - N >= max(2, len(args.path) // 2)
    out = {"eps": args.eps, "threshold": N, "samples": len(args.path), "verdict": ok}
    if not ok:
        raise Failure(out)
    return out


def cmd_metric_represent(args):
    m = _metric(args)
    horos = formats.horofunctions_from_json(_load(args.horofunctions))
    nu = formats.nu_from_json(_load(args.nu))
    window = horos[0].window
    values = dict(zip(*_window_f(args, m)))
    f = np.array([values[s] for s in window])
    rep = inf_representation_check(f, horos, nu, args.tol, window)
    out = formats.report_to_json(rep)
    if not rep.verdict:
        raise Failure(out)
    return out


def cmd_metric_greatest_nu(args):
    m = _metric(args)
    horos = formats.horofunctions_from_json(_load(args.horofunctions))
    f = formats.vector_from_json(_load(args.f), list(m.states))
    try:
        nu = greatest_nu(m, f, horos, tol=args.tol, margin=args.window_margin)
    except NotDistanceLike as exc:
        raise Failure(
            {"error": "NotDistanceLike", "violations": [list(v) for v in exc.report.violations]}
        ) from None
    window = horos[0].window
    rep = inf_representation_check(f[m.idx(window)], horos, nu, args.tol, window)
    out = {"nu": nu, "represents": rep.verdict}
    if not rep.verdict:
        raise Failure(out)
    return out


def _params(pairs):
    out = {}
    for p in pairs or []:
        k, _, v = p.partition("=")
        out[k] = int(v)
    return out


def cmd_corpus_export(args):
    outdir = Path(args.output_dir)
    outdir.mkdir(parents=True, exist_ok=True)
    params = _params(args.param)
    written = []

    def put(name, obj):
        (outdir / name).write_text(formats.dumps(obj))
        written.append(name)

    if args.name in ("example1", "example2"):
        ex = getattr(corpus, args.name)(**params)
        states = list(ex.inst.states)
        put("kernel.json", formats.kernel_to_json(ex.inst.A, ex.inst.basepoint))
        put("u.json", formats.vector_to_json(states, ex.u, ex.interior))
        put("family.json", formats.family_to_json(ex.family))
    else:
        size = params.pop("size", 20)
        t = corpus.metric_templates(args.name, size, **params)
        put("graph.json", formats.graph_to_json(t.nodes, t.edges, t.metric.basepoint))
        horos = [
            horofunction_limit(t.metric, t.rays[n], t.window, args.tol, n) for n in sorted(t.rays)
        ]
        put("horofunctions.json", formats.horofunctions_to_json(horos))
    return {"name": args.name, "written": written, "directory": str(outdir)}


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--tol", type=float, default=DEFAULT_TOL)
    common.add_argument("--window-margin", type=float, default=0.0)
    common.add_argument("--horizon", type=int, default=100)
    common.add_argument("--output", "-o", help="write the report here instead of stdout")
    common.add_argument("--format", choices=("json", "table"), default="json")

    p = argparse.ArgumentParser(prog="mpmartin", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    def add(parent, name, func, *arguments, help=None):
        sp = parent.add_parser(name, parents=[common], help=help)
        for a in arguments:
            a(sp)
        sp.set_defaults(func=func)
        return sp

    kernel = lambda sp: sp.add_argument("kernel", help="kernel JSON")  # noqa: E731
    base = lambda sp: sp.add_argument("--basepoint")  # noqa: E731
    family = lambda sp: sp.add_argument("--family", help="boundary family JSON")  # noqa: E731
    uvec = lambda sp: sp.add_argument("u", help="vector JSON")  # noqa: E731
    graph = lambda sp: sp.add_argument("graph", help="graph JSON")  # noqa: E731
    fvec = lambda sp: sp.add_argument("f", help="function JSON on the window")  # noqa: E731

    add(sub, "star", cmd_star, kernel, help="Kleene closures A+ and A*")
    add(sub, "martin", cmd_martin, kernel, base, help="Martin kernel and finite Martin space")
    add(sub, "minimal-space", cmd_minimal_space, kernel, base, family, help="minimal Martin space")
    add(sub, "measures", cmd_measures, kernel, uvec, base, family, help="mu_max, m_u and mu_min report")
    add(
        sub,
        "represent",
        cmd_represent,
        kernel,
        uvec,
        lambda sp: sp.add_argument("measure", help="measure JSON"),
        base,
        family,
        help="check that a measure represents u",
    )

    geo = sub.add_parser("geodesic", help="almost-geodesics").add_subparsers(dest="action", required=True)
    path = lambda sp: sp.add_argument("--path", nargs="+", required=True)  # noqa: E731
    add(
        geo,
        "certify",
        cmd_geodesic_certify,
        kernel,
        base,
        path,
        lambda sp: sp.add_argument("--u", help="vector JSON for the u-relative parameter"),
        lambda sp: sp.add_argument("--beta", type=float, help="claimed parameter to verify"),
    )
    add(
        geo,
        "rebase",
        cmd_geodesic_rebase,
        kernel,
        base,
        path,
        lambda sp: sp.add_argument("--beta", type=float),
        lambda sp: sp.add_argument("--new-base", required=True),
    )
    add(
        geo,
        "witness",
        cmd_geodesic_witness,
        kernel,
        uvec,
        base,
        lambda sp: sp.add_argument("--start", required=True),
        lambda sp: sp.add_argument("--delta", type=float, default=0.5),
        lambda sp: sp.add_argument("--eps", type=float, default=1.0),
    )

    met = sub.add_parser("metric", help="graph metrics and horofunctions").add_subparsers(
        dest="action", required=True
    )
    horos = lambda sp: sp.add_argument("horofunctions", help="horofunctions JSON")  # noqa: E731
    add(met, "distance-like", cmd_metric_distance_like, graph, fvec)
    add(
        met,
        "horolimit",
        cmd_metric_horolimit,
        graph,
        lambda sp: sp.add_argument("--ray", nargs="+", required=True),
        lambda sp: sp.add_argument("--window", nargs="+"),
        lambda sp: sp.add_argument("--name", default="h"),
    )
    add(
        met,
        "rieffel",
        cmd_metric_rieffel,
        graph,
        path,
        lambda sp: sp.add_argument("--eps", type=float, required=True),
    )
    add(
        met,
        "represent",
        cmd_metric_represent,
        graph,
        fvec,
        horos,
        lambda sp: sp.add_argument("nu", help="nu JSON"),
    )
    add(met, "greatest-nu", cmd_metric_greatest_nu, graph, fvec, horos)

    cor = sub.add_parser("corpus", help="worked examples").add_subparsers(dest="action", required=True)
    add(
        cor,
        "export",
        cmd_corpus_export,
        lambda sp: sp.add_argument(
            "name", choices=("example1", "example2", *sorted(corpus.TEMPLATES))
        ),
        lambda sp: sp.add_argument("--param", nargs="*", help="key=value integers, e.g. J=50"),
        lambda sp: sp.add_argument("--output-dir", required=True),
    )
    return p


def _emit(args, payload):
    text = formats.table(formats.clean(payload)) + "\n" if args.format == "table" else formats.dumps(payload)
    if args.output:
        Path(args.output).write_text(text)
    else:
        sys.stdout.write(text)


def main(argv=None):
    args = build_parser().parse_args(argv)
    if not args.tol > 0:
        print("error: --tol must be positive", file=sys.stderr)
        return 2
    try:
        payload = args.func(args)
    except Failure as exc:
        _emit(args, exc.payload)
        return 1
    except (MaxPlusError, KeyError, ValueError, OSError, json.JSONDecodeError) as exc:
        _emit(args, {"error": type(exc).__name__, "message": str(exc)})
        return 1
    _emit(args, payload)
    return 0


if __name__ == "__main__":
    sys.exit(main())
