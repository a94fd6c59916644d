"""JSON system-spec documents.

A graph system::

    {"graph": {"n": 4, "edges": [[1, 2], [2, 3], [3, 4], [1, 4]]},
     "thresholds": {"uniform": {"kup": 1, "kdown": 3}},
     "update": {"mode": "seq", "pi": [1, 2, 3, 4]}}

``thresholds`` may instead be ``{"per_vertex": [{"v": 1, "kup": 1, "kdown": 2}, ...]}``
or ``{"rule": "kdown_deg_plus_1", "kup": 1}``. A weighted system replaces the
graph and thresholds by ``{"weighted": {"A": [["1", "1/2"], ...], "kup": [...],
"kdown": [...]}}``; rationals are written as strings.
"""

from __future__ import annotations

import json
from fractions import Fraction
from pathlib import Path

from .dynamics import System, ThresholdAssignment, UpdateScheme, WeightedSystem
from .errors import BithreshError, InvalidInput
from .graphs import Graph


class SpecError(BithreshError, ValueError):
    """Malformed spec document; the message carries a location when known."""


def _thresholds(doc, graph: Graph) -> ThresholdAssignment:
    if not isinstance(doc, dict) or len(doc) == 0:
        raise SpecError("'thresholds' must be an object")
    if "uniform" in doc:
        u = doc["uniform"]
        return ThresholdAssignment.uniform(graph.n, int(u["kup"]), int(u["kdown"]))
    if "per_vertex" in doc:
        table = {}
        for entry in doc["per_vertex"]:
            v = int(entry["v"])
            if v in table:
                raise SpecError(f"vertex {v} listed twice in per_vertex thresholds")
            table[v] = (int(entry["kup"]), int(entry["kdown"]))
        return ThresholdAssignment.from_mapping(graph.n, table)
    if doc.get("rule") == "kdown_deg_plus_1":
        return ThresholdAssignment.degree_rule(graph, int(doc.get("kup", 1)))
    raise SpecError(f"unrecognised thresholds block: {sorted(doc)}")


def _update(doc) -> UpdateScheme:
    if doc is None:
        return UpdateScheme()
    mode = doc.get("mode")
    if mode == "sync":
        return UpdateScheme()
    if mode == "seq":
        if "pi" not in doc:
            raise SpecError("sequential update needs a 'pi' list")
        return UpdateScheme(tuple(int(v) for v in doc["pi"]))
    raise SpecError(f"update mode must be 'sync' or 'seq', got {mode!r}")


def system_from_dict(doc: dict):
    """Build a :class:`System` or :class:`WeightedSystem` from a parsed document."""
    if not isinstance(doc, dict):
        raise SpecError("spec document must be a JSON object")
    try:
        if "weighted" in doc:
            w = doc["weighted"]
            if _update(doc.get("update")).pi is not None:
                raise SpecError("weighted systems support synchronous update only")
            return WeightedSystem([[Fraction(str(v)) for v in row] for row in w["A"]],
                                  [Fraction(str(v)) for v in w["kup"]],
                                  [Fraction(str(v)) for v in w.get("kdown", w["kup"])],
                                  allow_asymmetric=bool(w.get("allow_asymmetric", False)))
        graph = Graph.from_dict(doc["graph"])
        return System(graph, _thresholds(doc["thresholds"], graph), _update(doc.get("update")))
    except SpecError:
        raise
    except KeyError as exc:
        raise SpecError(f"missing key {exc}") from exc
    except (BithreshError, TypeError, ValueError) as exc:
        raise SpecError(str(exc)) from exc


def system_to_dict(system) -> dict:
    if isinstance(system, WeightedSystem):
        return {"weighted": {
            "A": [[str(v) for v in row] for row in system.a],
            "kup": [str(v) for v in system.kup],
            "kdown": [str(v) for v in system.kdown],
            "allow_asymmetric": not system.symmetric,
        }, "update": {"mode": "sync"}}
    t = system.thresholds
    if len(set(t.kup)) == 1 and len(set(t.kdown)) == 1:
        thresholds = {"uniform": {"kup": t.kup[0], "kdown": t.kdown[0]}}
    else:
        thresholds = {"per_vertex": [{"v": v, "kup": t.up(v), "kdown": t.down(v)}
                                     for v in system.graph.vertices]}
    if system.scheme.pi is None:
        update = {"mode": "sync"}
    else:
        update = {"mode": "seq", "pi": list(system.scheme.pi)}
    return {"graph": system.graph.to_dict(), "thresholds": thresholds, "update": update}


def parse_spec(text: str, source: str = "<spec>"):
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SpecError(f"{source}:{exc.lineno}:{exc.colno}: {exc.msg}") from exc
    try:
        return system_from_dict(doc)
    except SpecError as exc:
        raise SpecError(f"{source}: {exc}") from exc


def load_spec(path) -> object:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise InvalidInput(f"cannot read spec {path}: {exc}") from exc
    return parse_spec(text, str(path))


def dump_spec(system) -> str:
    return json.dumps(system_to_dict(system), indent=2) + "\n"
