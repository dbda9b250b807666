"""Deterministic report serialization: JSON and CSV with fixed float width.

All floating-point values are written with 17 significant digits, which
round-trips float64 exactly and makes identical runs produce byte-identical
files (no timestamps anywhere in report payloads).
"""

from __future__ import annotations

import math

import numpy as np

__all__ = [
    "format_float",
    "dumps_json",
    "write_json",
    "profile_to_csv",
    "read_profile_csv",
    "write_text",
    "branches_to_csv",
    "classification_to_csv",
]


def format_float(x: float) -> str:
    if math.isnan(x):
        return "null"
    if math.isinf(x):
        return '"inf"' if x > 0 else '"-inf"'
    return format(float(x), ".17g")


def _encode(obj, out: list, indent: int) -> None:
    pad = " " * indent
    if obj is None:
        out.append("null")
    elif obj is True:
        out.append("true")
    elif obj is False:
        out.append("false")
    elif isinstance(obj, str):
        out.append('"' + obj.replace("\\", "\\\\").replace('"', '\\"') + '"')
    elif isinstance(obj, (int, np.integer)) and not isinstance(obj, bool):
        out.append(str(int(obj)))
    elif isinstance(obj, (float, np.floating)):
        out.append(format_float(float(obj)))
    elif isinstance(obj, dict):
        if not obj:
            out.append("{}")
            return
        out.append("{\n")
        items = list(obj.items())
        for i, (k, v) in enumerate(items):
            out.append(pad + '  "' + str(k) + '": ')
            _encode(v, out, indent + 2)
            out.append(",\n" if i < len(items) - 1 else "\n")
        out.append(pad + "}")
    elif isinstance(obj, (list, tuple, np.ndarray)):
        seq = list(obj)
        if not seq:
            out.append("[]")
            return
        out.append("[\n")
        for i, v in enumerate(seq):
            out.append(pad + "  ")
            _encode(v, out, indent + 2)
            out.append(",\n" if i < len(seq) - 1 else "\n")
        out.append(pad + "]")
    else:
        raise TypeError(f"cannot serialize {type(obj)!r}")


def dumps_json(obj) -> str:
    out: list = []
    _encode(obj, out, 0)
    out.append("\n")
    return "".join(out)


def write_json(path, obj) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps_json(obj))


def write_text(path, text: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(text if text.endswith("\n") else text + "\n")


def profile_to_csv(profile) -> str:
    lines = ["t,u,du"]
    for t, u, du in zip(profile.grid, profile.u, profile.du):
        lines.append(f"{t:.17g},{u:.17g},{du:.17g}")
    return "\n".join(lines) + "\n"


def read_profile_csv(path):
    """Read back a profile CSV; returns (t, u, du) arrays, bit-exact."""
    data = np.loadtxt(path, delimiter=",", skiprows=1)
    return data[:, 0], data[:, 1], data[:, 2]


def branches_to_csv(branches) -> str:
    lines = ["branch,status,lambda,s,k,class,u0,u_min,u_max,boundary_miss"]
    for bi, br in enumerate(branches):
        for p in br.points:
            lines.append(
                f"{bi},{br.status},{p.lam:.17g},{p.s:.17g},{p.k},{p.class_label},"
                f"{p.s:.17g},{p.u_min:.17g},{p.u_max:.17g},{p.boundary_miss:.17g}"
            )
    return "\n".join(lines) + "\n"


def classification_to_csv(reports) -> str:
    """Zeros and critical points of one or more classification reports."""
    lines = ["solution,type,t,value,extra"]
    for si, rep in enumerate(reports):
        for z in rep.zeros:
            lines.append(
                f"{si},zero,{z.tau:.17g},{z.phi_slope:.17g},{'simple' if z.simple else 'tangential'}"
            )
        for t, u in rep.maxima:
            lines.append(f"{si},maximum,{t:.17g},{u:.17g},")
        for t, u in rep.minima:
            lines.append(f"{si},minimum,{t:.17g},{u:.17g},")
        if rep.eta is not None:
            lines.append(f"{si},eta,{rep.eta:.17g},0,")
    return "\n".join(lines) + "\n"
