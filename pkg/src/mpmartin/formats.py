"""JSON encodings shared by the command line and the corpus export.

Numbers are written with 12 significant digits, infinities as the strings
``"-inf"`` and ``"+inf"``, and keys are sorted so identical inputs give
byte-identical output.
"""

from __future__ import annotations

import json
import math

import numpy as np

from .geodesics import GeodesicCertificate
from .harmonic import Measure, Report
from .kernels import BoundaryFamily
from .semiring import NEG_INF, Kernel


def num(x):
    x = float(x)
    if math.isnan(x):
        raise ValueError("nan is not a max-plus scalar")
    if x == math.inf:
        return "+inf"
    if x == -math.inf:
        return "-inf"
    x = float("%.12g" % x)
    return 0.0 if x == 0 else x


def parse_num(v):
    if isinstance(v, str):
        s = v.strip().lower()
        if s in ("-inf", "-infinity"):
            return NEG_INF
        if s in ("inf", "+inf", "infinity", "+infinity"):
            return math.inf
    return float(v)


def clean(obj):
    """Recursively convert to JSON-ready values with encoded numbers."""
    if isinstance(obj, dict):
        return {str(k): clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [clean(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return clean(obj.tolist())
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        return num(obj)
    if isinstance(obj, (Kernel, BoundaryFamily, Measure, GeodesicCertificate, Report)):
        return clean(to_json(obj))
    return obj


def dumps(obj):
    return json.dumps(clean(obj), sort_keys=True, indent=2) + "\n"


def to_json(obj):
    if isinstance(obj, Kernel):
        return kernel_to_json(obj)
    if isinstance(obj, BoundaryFamily):
        return family_to_json(obj)
    if isinstance(obj, Measure):
        return {"domain": obj.domain, "density": dict(obj.density)}
    if isinstance(obj, GeodesicCertificate):
        return {
            "path": list(obj.path),
            "kind": obj.kind,
            "beta": obj.beta,
            "reference": obj.reference,
            "checks": dict(obj.checks),
        }
    if isinstance(obj, Report):
        return report_to_json(obj)
    raise TypeError("no JSON form for %s" % type(obj).__name__)


def kernel_to_json(A, basepoint=None):
    out = {"states": list(A.states), "entries": [[i, j, w] for i, j, w in A.entries()]}
    if basepoint is not None:
        out["basepoint"] = str(basepoint)
    return out


def kernel_from_json(data):
    """Returns ``(Kernel, basepoint or None)``."""
    entries = [(i, j, parse_num(w)) for i, j, w in data.get("entries", [])]
    return Kernel.from_entries(data["states"], entries), data.get("basepoint")


def vector_to_json(states, u, interior=None):
    out = {"values": {s: float(v) for s, v in zip(states, u)}}
    if interior is not None:
        out["interior"] = list(interior)
    return out


def vector_from_json(data, states=None, default=NEG_INF):
    """Values aligned with ``states`` (labels absent from the file get ``default``)."""
    values = {str(k): parse_num(v) for k, v in data["values"].items()}
    if states is None:
        return list(values), np.array(list(values.values()), dtype=float)
    return np.array([values.get(s, default) for s in states], dtype=float)


def family_to_json(fam):
    return {
        "window": list(fam.window),
        "points": {k: v.tolist() for k, v in fam.points.items()},
        "rep_sequences": dict(fam.rep_sequences),
        "accumulation": [[list(n), lim] for n, lim in fam.accumulation],
        "tol": fam.tol,
        "core": fam.core,
        "column_states": fam.column_states,
    }


def family_from_json(data):
    return BoundaryFamily(
        window=data["window"],
        points={k: [parse_num(x) for x in v] for k, v in data["points"].items()},
        rep_sequences=data.get("rep_sequences", {}),
        accumulation=[(n, lim) for n, lim in data.get("accumulation", [])],
        tol=parse_num(data.get("tol", 1e-9)),
        core=data.get("core"),
        column_states=data.get("column_states"),
    )


def measure_from_json(data):
    dens = {str(k): parse_num(v) for k, v in data["density"].items()}
    return Measure(dens, data.get("domain", "points"))


def graph_to_json(nodes, edges, basepoint=None):
    out = {"nodes": list(nodes), "edges": [[a, b, float(w)] for a, b, w in edges]}
    if basepoint is not None:
        out["basepoint"] = str(basepoint)
    return out


def nu_from_json(data):
    return {str(k): parse_num(v) for k, v in data.items()}


def horofunctions_to_json(horos):
    return {
        h.name: {"window": list(h.window), "h": h.h.tolist(), "ray": list(h.source_sequence)}
        for h in horos
    }


def horofunctions_from_json(data):
    from .metric import HorofunctionWindow

    return [
        HorofunctionWindow(
            [str(s) for s in v["window"]],
            np.array([parse_num(x) for x in v["h"]], dtype=float),
            [str(s) for s in v.get("ray", [])],
            str(name),
        )
        for name, v in sorted(data.items())
    ]


def report_to_json(rep):
    return {
        "kind": rep.kind,
        "verdict": rep.verdict,
        "tol": rep.tol,
        "window": rep.window,
        "residuals": dict(zip(rep.labels, rep.residuals.tolist())),
        "failures": rep.failures(),
    }


def table(obj, indent=0):
    """Plain-text rendering of a (nested) report."""
    pad = "  " * indent
    lines = []
    if isinstance(obj, dict):
        for k in sorted(obj):
            v = obj[k]
            if isinstance(v, (dict, list)) and v and not _flat(v):
                lines.append("%s%s:" % (pad, k))
                lines.append(table(v, indent + 1))
            else:
                lines.append("%s%-24s %s" % (pad, k, _cell(v)))
    elif isinstance(obj, list):
        for v in obj:
            lines.append(table(v, indent) if isinstance(v, dict) else pad + _cell(v))
    else:
        lines.append(pad + _cell(obj))
    return "\n".join(lines)


def _flat(v):
    return isinstance(v, list) and all(not isinstance(x, (dict, list)) for x in v)


def _cell(v):
    if isinstance(v, list):
        return " ".join(_cell(x) for x in v)
    return str(v)
