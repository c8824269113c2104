"""Structured-text instance files and DOT export.

All files are JSON with sorted keys, two-space indentation, and a
trailing newline; every rational is a "numerator/denominator" string,
never a float.  Exports are deterministic: identical data produces
byte-identical files.
"""

from __future__ import annotations

import json
from fractions import Fraction
from typing import Optional

from .core import (FiniteGroupoid, InputError, UnitSpace, frac, frac_str)
from .groups import FiniteGroup
from .hnn_group import HnnPresentation
from .hnn_model import DescentData
from .splitting import CentralExtensionInstance


def dumps(obj: dict) -> str:
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


def load_file(path: str) -> dict:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            obj = json.load(fh)
    except json.JSONDecodeError as e:
        raise InputError(f"{path}: line {e.lineno} column {e.colno}: {e.msg}")
    except OSError as e:
        raise InputError(f"{path}: {e}")
    if not isinstance(obj, dict) or "kind" not in obj:
        raise InputError(f"{path}: expected an object with a 'kind' field")
    return obj


def save_file(path: str, obj: dict) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps(obj))


def _field(obj: dict, name: str, kind: str):
    if name not in obj:
        raise InputError(f"{kind} file is missing field {name!r}")
    return obj[name]


# --- groupoids ---------------------------------------------------------------


def groupoid_to_obj(G: FiniteGroupoid) -> dict:
    return {
        "kind": "groupoid",
        "mode": G.units.mode,
        "units": [{"label": G.units.labels[x], "weight": frac_str(G.weight(x))}
                  for x in G.points()],
        "arrows": [[G.range_[g], G.source[g], G.inverse[g]] for g in G.arrows()],
        "arrow_labels": list(G.arrow_labels),
        "unit_arrows": list(G.unit_of),
        "compose": sorted([g, h, k] for (g, h), k in G.compose_table.items()),
    }


def groupoid_from_obj(obj: dict) -> FiniteGroupoid:
    units = UnitSpace([frac(u["weight"]) for u in _field(obj, "units", "groupoid")],
                      _field(obj, "mode", "groupoid"),
                      [u.get("label", str(i))
                       for i, u in enumerate(obj["units"])])
    arrows = _field(obj, "arrows", "groupoid")
    for i, triple in enumerate(arrows):
        if len(triple) != 3:
            raise InputError(f"arrow entry {i} is not a [range, source, inverse] triple")
    compose = {}
    for entry in _field(obj, "compose", "groupoid"):
        if len(entry) != 3:
            raise InputError("compose entries must be [g, h, gh] index triples")
        compose[(entry[0], entry[1])] = entry[2]
    return FiniteGroupoid(
        units,
        [a[0] for a in arrows],
        [a[1] for a in arrows],
        [a[2] for a in arrows],
        _field(obj, "unit_arrows", "groupoid"),
        compose,
        obj.get("arrow_labels"))


# --- descent data ------------------------------------------------------------


def descent_to_obj(d: DescentData) -> dict:
    return {
        "kind": "descent",
        "p": d.p,
        "q": d.q,
        "z": {"mode": d.z_space.mode,
              "weights": [frac_str(w) for w in d.z_space.weights]},
        "plus": {"mode": d.plus_space.mode,
                 "weights": [frac_str(w) for w in d.plus_space.weights],
                 "sigma": list(d.sigma_plus), "t_down": list(d.t_down)},
        "minus": {"mode": d.minus_space.mode,
                  "weights": [frac_str(w) for w in d.minus_space.weights],
                  "sigma": list(d.sigma_minus), "t_up": list(d.t_up)},
    }


def descent_from_obj(obj: dict) -> DescentData:
    z = _field(obj, "z", "descent")
    plus = _field(obj, "plus", "descent")
    minus = _field(obj, "minus", "descent")
    return DescentData(
        _field(obj, "p", "descent"), _field(obj, "q", "descent"),
        UnitSpace([frac(w) for w in z["weights"]], z.get("mode", "probability")),
        UnitSpace([frac(w) for w in plus["weights"]], plus.get("mode", "probability")),
        UnitSpace([frac(w) for w in minus["weights"]], minus.get("mode", "probability")),
        plus["sigma"], minus["sigma"], plus["t_down"], minus["t_up"])


# --- presentations ------------------------------------------------------------


def presentation_to_obj(p: HnnPresentation) -> dict:
    return {
        "kind": "presentation",
        "nu": p.nu,
        "minus_basis": [list(col) for col in p.minus.hnf],
        "plus_basis": [list(col) for col in p.plus.hnf],
        "tau": [[frac_str(v) for v in row] for row in p.tau],
    }


def presentation_from_obj(obj: dict) -> HnnPresentation:
    return HnnPresentation(_field(obj, "minus_basis", "presentation"),
                           _field(obj, "plus_basis", "presentation"),
                           [[frac(v) for v in row]
                            for row in _field(obj, "tau", "presentation")])


# --- compound instances --------------------------------------------------------


def treeing_instance_to_obj(G: FiniteGroupoid, psi_plus, y_units) -> dict:
    return {"kind": "treeing-instance", "groupoid": groupoid_to_obj(G),
            "psi_plus": sorted(psi_plus), "y_units": sorted(y_units)}


def treeing_instance_from_obj(obj: dict):
    G = groupoid_from_obj(_field(obj, "groupoid", "treeing-instance"))
    return G, obj.get("psi_plus", []), obj.get("y_units", [])


def quotient_instance_to_obj(G: FiniteGroupoid, sub_arrows) -> dict:
    return {"kind": "quotient-instance", "groupoid": groupoid_to_obj(G),
            "subgroupoid": sorted(sub_arrows)}


def quotient_instance_from_obj(obj: dict):
    G = groupoid_from_obj(_field(obj, "groupoid", "quotient-instance"))
    return G, _field(obj, "subgroupoid", "quotient-instance")


def quotient_result_to_obj(res) -> dict:
    return {
        "kind": "quotient-result",
        "quotient": groupoid_to_obj(res.Q),
        "theta_points": list(res.theta_point),
        "theta_arrows": list(res.theta_arrow),
        "star": sorted([z, j, k, l] for (z, j, k), l in res.star.items()),
        "unit_index": sorted([z, j] for z, j in res.unit_index.items()),
        "inverse_index": sorted([z, j, k]
                                for (z, j), k in res.inverse_index.items()),
    }


def splitting_instance_to_obj(inst: CentralExtensionInstance) -> dict:
    obj = {
        "kind": "splitting-instance",
        "h_table": [list(r) for r in inst.h.table],
        "h_names": list(inst.h.names),
        "e": sorted(inst.e),
        "x_weights": [frac_str(w) for w in inst.x_units.weights],
        "x_mode": inst.x_units.mode,
        "act": [list(a) for a in inst.act],
    }
    if inst.n is not None:
        obj["n_table"] = [list(r) for r in inst.n.table]
        obj["phi"] = list(inst.phi)
        obj["e_in_n"] = list(inst.e_in_n)
    return obj


def splitting_instance_from_obj(obj: dict) -> CentralExtensionInstance:
    h = FiniteGroup(_field(obj, "h_table", "splitting-instance"),
                    obj.get("h_names"))
    inst = CentralExtensionInstance(
        h, frozenset(_field(obj, "e", "splitting-instance")),
        UnitSpace([frac(w) for w in _field(obj, "x_weights", "splitting-instance")],
                  obj.get("x_mode", "probability")),
        tuple(tuple(a) for a in _field(obj, "act", "splitting-instance")))
    if "n_table" in obj:
        inst.n = FiniteGroup(obj["n_table"])
        inst.phi = tuple(_field(obj, "phi", "splitting-instance"))
        inst.e_in_n = tuple(_field(obj, "e_in_n", "splitting-instance"))
    return inst


# --- DOT export ----------------------------------------------------------------


def ball_to_dot(n_vertices: int, edges, labels=None, depth=None,
                title: str = "ball") -> str:
    """Rooted oriented tree in DOT form; labels become tooltips."""
    lines = [f'digraph "{title}" {{', '  rankdir=TB;']
    for v in range(n_vertices):
        attrs = [f'label="{v}"']
        if labels is not None:
            safe = str(labels[v]).replace('"', "'")
            attrs.append(f'tooltip="{safe}"')
        if depth is not None:
            attrs.append(f'rank={depth[v]}')
        lines.append(f'  n{v} [{", ".join(attrs)}];')
    for a, b in sorted(edges):
        lines.append(f'  n{a} -> n{b};')
    lines.append('}')
    return "\n".join(lines) + "\n"


def induction_to_dot(state, x: int) -> str:
    """One fiber of the parent with slide edges dashed and surviving edges solid."""
    G = state.parent
    verts = [g for g in G.fiber_r(x) if state.d[g] is not None]
    lines = [f'digraph "fiber_{x}" {{']
    for g in verts:
        shape = "doublecircle" if G.source[g] in state.y_units else "circle"
        lines.append(f'  a{g} [label="{G.arrow_labels[g]}", shape={shape}];')
    drawn = set()
    for g in verts:
        for h in verts:
            step = G.compose(G.inverse[g], h)
            if step in state.graphing.psi_plus and (g, h) not in drawn:
                drawn.add((g, h))
                style = "dashed" if step in state.psi0 else "solid"
                color = "gray" if step in state.psi0 else "black"
                lines.append(f'  a{g} -> a{h} [style={style}, color={color}];')
    lines.append('}')
    return "\n".join(lines) + "\n"
