"""Instance file format and deterministic result serialization.

Instances are line-oriented text, version-tagged, trivially diffable::

    flowgame 1
    # capacities are integers, p/q fractions, or exact decimals
    node s
    node a
    node t
    source s
    sink t
    arc sa s a 2
    arc at a t 3/2

Identifiers are whitespace-free tokens; arc labels additionally must not
contain ``,`` or ``=`` (they appear in command-line coalition and
allocation syntax).  Rationals are always rendered ``p/q`` (bare integer
when the denominator is 1) — no floats anywhere.

Structured output is JSON with sorted keys, so identical inputs yield
byte-identical documents.
"""

from __future__ import annotations

import json
from fractions import Fraction
from typing import Mapping, Optional

from .errors import (
    DuplicateArcLabel,
    NegativeCapacity,
    ParseError,
    SelfLoop,
    SourceEqualsSink,
    UnknownVertex,
)
from .network import Arc, FlowNetwork, StPath
from .recognition import (
    Certificate,
    DiagnosticsReport,
    Verdict,
    Witness,
)

FORMAT_TAG = "flowgame 1"


def format_rational(value: Fraction) -> str:
    value = Fraction(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def parse_rational(text: str) -> Fraction:
    return Fraction(text)


def _check_identifier(token: str, line: int, what: str) -> str:
    if "," in token or "=" in token:
        raise ParseError(line, f"{what} {token!r} may not contain ',' or '='")
    return token


def parse_network(text: str) -> FlowNetwork:
    """Parse an instance document.

    Total over arbitrary input: every failure is a structured error
    carrying the offending line number, never a crash.
    """
    vertices: list[str] = []
    declared: set[str] = set()
    arcs: list[Arc] = []
    labels: set[str] = set()
    source: Optional[str] = None
    sink: Optional[str] = None
    saw_tag = False
    line_no = 0
    for raw in text.splitlines():
        line_no += 1
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if not saw_tag:
            if line != FORMAT_TAG:
                raise ParseError(line_no, f"expected {FORMAT_TAG!r} header, got {line!r}")
            saw_tag = True
            continue
        tokens = line.split()
        directive, rest = tokens[0], tokens[1:]
        if directive == "node":
            if len(rest) != 1:
                raise ParseError(line_no, "node takes exactly one identifier")
            v = _check_identifier(rest[0], line_no, "vertex")
            if v in declared:
                raise ParseError(line_no, f"vertex {v!r} declared twice")
            declared.add(v)
            vertices.append(v)
        elif directive in ("source", "sink"):
            if len(rest) != 1:
                raise ParseError(line_no, f"{directive} takes exactly one identifier")
            v = rest[0]
            if v not in declared:
                raise UnknownVertex(v, directive, line=line_no)
            if directive == "source":
                if source is not None:
                    raise ParseError(line_no, "source declared twice")
                source = v
            else:
                if sink is not None:
                    raise ParseError(line_no, "sink declared twice")
                sink = v
            if source is not None and source == sink:
                raise SourceEqualsSink(source, line=line_no)
        elif directive == "arc":
            if len(rest) != 4:
                raise ParseError(line_no, "arc takes label, tail, head, capacity")
            label, tail, head, cap_text = rest
            _check_identifier(label, line_no, "arc label")
            if label in labels:
                raise DuplicateArcLabel(label, line=line_no)
            if tail not in declared:
                raise UnknownVertex(tail, f"tail of arc {label!r}", line=line_no)
            if head not in declared:
                raise UnknownVertex(head, f"head of arc {label!r}", line=line_no)
            if tail == head:
                raise SelfLoop(label, tail, line=line_no)
            try:
                cap = parse_rational(cap_text)
            except (ValueError, ZeroDivisionError):
                raise ParseError(line_no, f"bad capacity {cap_text!r}") from None
            if cap < 0:
                raise NegativeCapacity(label, cap, line=line_no)
            labels.add(label)
            arcs.append(Arc(label, tail, head, cap))
        else:
            raise ParseError(line_no, f"unknown directive {directive!r}")
    if not saw_tag:
        raise ParseError(max(line_no, 1), "empty document")
    if source is None:
        raise ParseError(line_no, "missing source declaration")
    if sink is None:
        raise ParseError(line_no, "missing sink declaration")
    return FlowNetwork(vertices, arcs, source, sink)


def serialize_network(network: FlowNetwork) -> str:
    """Canonical text form; ``parse_network`` round-trips it exactly."""
    lines = [FORMAT_TAG]
    lines.extend(f"node {v}" for v in network.vertices)
    lines.append(f"source {network.source}")
    lines.append(f"sink {network.sink}")
    lines.extend(
        f"arc {a.label} {a.tail} {a.head} {format_rational(a.capacity)}"
        for a in network.arcs
    )
    return "\n".join(lines) + "\n"


# -- structured documents ------------------------------------------------


def _path_obj(path: StPath) -> dict:
    return {"arcs": list(path.arcs), "capacity": format_rational(path.capacity)}


def _witness_obj(witness: Witness) -> dict:
    obj = {"kind": witness.kind}
    if witness.kind == "cycle":
        obj["arcs"] = list(witness.arcs)
    elif witness.kind == "shared_bottleneck":
        obj["arc"] = witness.arc
        obj["paths"] = [_path_obj(p) for p in witness.paths]
    elif witness.kind == "capacity_deficit":
        obj["arc"] = witness.arc
        obj["capacity"] = format_rational(witness.capacity)
        obj["required"] = format_rational(witness.required)
        obj["paths"] = [_path_obj(p) for p in witness.paths]
    elif witness.kind == "dummy_arc_retained":
        obj["arc"] = witness.arc
    return obj


def _certificate_obj(certificate: Certificate) -> dict:
    return {"paths": [_path_obj(p) for p in certificate.paths]}


def _diagnostics_obj(report: DiagnosticsReport) -> dict:
    return {
        c.name: {
            "passed": c.passed,
            "detail": c.detail,
        }
        for c in report.checks
    }


def verdict_document(
    verdict: Verdict, diagnostics: Optional[DiagnosticsReport] = None
) -> dict:
    doc = {
        "verdict": "convex" if verdict.convex else "not_convex",
        "removed_dummies": list(verdict.removed_dummies),
    }
    if verdict.certificate is not None:
        doc["certificate"] = _certificate_obj(verdict.certificate)
    if verdict.witness is not None:
        doc["witness"] = _witness_obj(verdict.witness)
    if diagnostics is not None:
        doc["diagnostics"] = _diagnostics_obj(diagnostics)
    return doc


def allocation_document(allocation: Mapping[str, Fraction]) -> dict:
    return {"allocation": {lbl: format_rational(x) for lbl, x in allocation.items()}}


def coalition_key(coalition) -> str:
    return ",".join(sorted(coalition))


def dividends_document(table: Mapping) -> dict:
    """Nonzero unanimity coordinates, keyed by comma-joined sorted members."""
    return {
        "dividends": {
            coalition_key(coal): format_rational(x)
            for coal, x in table.items()
            if x != 0
        }
    }


def pmas_document(scheme: Mapping) -> dict:
    return {
        "pmas": {
            coalition_key(coal): {lbl: format_rational(x) for lbl, x in alloc.items()}
            for coal, alloc in scheme.items()
        }
    }


def network_document(network: FlowNetwork) -> dict:
    return {
        "vertices": list(network.vertices),
        "source": network.source,
        "sink": network.sink,
        "arcs": [
            {
                "label": a.label,
                "tail": a.tail,
                "head": a.head,
                "capacity": format_rational(a.capacity),
            }
            for a in network.arcs
        ],
    }


def to_json(doc: dict) -> str:
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


# -- human-readable renderings --------------------------------------------


def verdict_text(verdict: Verdict) -> str:
    lines = []
    if verdict.convex:
        lines.append("convex")
        cert = verdict.certificate
        if cert.paths:
            lines.append("decomposition (one unanimity game per path):")
            for p in cert.paths:
                lines.append(
                    f"  {' -> '.join(p.arcs)}  capacity {format_rational(p.capacity)}"
                )
        else:
            lines.append("the game is identically zero (no source-sink path)")
    else:
        w = verdict.witness
        if w.kind == "cycle":
            lines.append(f"not convex: directed cycle {' -> '.join(w.arcs)}")
        elif w.kind == "shared_bottleneck":
            lines.append(f"not convex: bottleneck arc {w.arc} lies on several paths")
            for p in w.paths:
                lines.append(f"  path {' -> '.join(p.arcs)}")
        elif w.kind == "capacity_deficit":
            lines.append(
                f"not convex: arc {w.arc} has capacity "
                f"{format_rational(w.capacity)} but its paths need "
                f"{format_rational(w.required)}"
            )
            for p in w.paths:
                lines.append(
                    f"  path {' -> '.join(p.arcs)}  capacity {format_rational(p.capacity)}"
                )
        else:
            lines.append(f"not convex: dummy arc {w.arc} retained")
    if verdict.removed_dummies:
        lines.append("removed dummy arcs: " + ", ".join(verdict.removed_dummies))
    return "\n".join(lines) + "\n"


def allocation_text(allocation: Mapping[str, Fraction]) -> str:
    lines = [
        f"{lbl} = {format_rational(x)}" for lbl, x in sorted(allocation.items())
    ]
    return "\n".join(lines) + "\n"


def diagnostics_text(report: DiagnosticsReport) -> str:
    lines = []
    for c in report.checks:
        status = "pass" if c.passed else ("skip" if c.passed is None else "FAIL")
        lines.append(f"[{status}] {c.name}: {c.detail}")
    if report.removed_dummies:
        lines.append("removed dummy arcs: " + ", ".join(report.removed_dummies))
    return "\n".join(lines) + "\n"
