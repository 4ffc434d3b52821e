"""Reading and writing spaces, maps, reports and traces.

A space document is JSON::

    {"points": ["x1", "x2", "x3"],
     "dist": [["0", "1", "5/2"], ["1", "0", "2"], ["5/2", "2", "0"]],
     "map": [["x1", "x2"], ["x2", "x2"], ["x3", "x1"]]}

``map`` is optional.  Distances may be integers or ``"p/q"`` strings.  A CSV
alternative holds a square matrix whose first row and first column carry the
labels.  Rationals are always written as ``"p/q"`` (or ``"p"`` when
integral); an infinite coefficient is written ``"inf"``.
"""
from __future__ import annotations

import csv
import io
import json
import math
from fractions import Fraction

from .classifiers import ClassificationReport
from .exceptions import StructureError
from .iteration import CauchyCertificate, IterationTrace
from .mappings import SelfMap
from .metric import FiniteMetricSpace, as_rational, default_labels

__all__ = [
    "RawDocument",
    "certificate_to_doc",
    "fmt",
    "parse_document",
    "report_to_doc",
    "space_to_doc",
    "to_space",
    "trace_to_table",
]


def fmt(value) -> str:
    if isinstance(value, float) and math.isinf(value):
        return "inf"
    return str(as_rational(value))


class RawDocument:
    """A parsed but unvalidated space document."""

    def __init__(self, points, matrix, mapping=None):
        self.points = list(points)
        self.matrix = matrix
        self.mapping = mapping

    def __repr__(self):
        return f"RawDocument(points={self.points!r})"


def _parse_csv(text: str) -> RawDocument:
    rows = [r for r in csv.reader(io.StringIO(text)) if any(c.strip() for c in r)]
    if not rows:
        raise StructureError("empty CSV document")
    header = [c.strip() for c in rows[0][1:]]
    body = rows[1:]
    if len(body) != len(header):
        raise StructureError(f"CSV has {len(header)} column labels but {len(body)} rows")
    labels, matrix = [], []
    for r in body:
        labels.append(r[0].strip())
        matrix.append([as_rational(c) for c in r[1:]])
    if labels != header:
        raise StructureError("CSV row labels do not match the column labels")
    return RawDocument(labels, matrix)


def parse_document(text: str) -> RawDocument:
    """Parse JSON or CSV text; the metric axioms are not checked here."""
    stripped = text.lstrip()
    if not stripped.startswith("{"):
        return _parse_csv(text)
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise StructureError(f"malformed JSON: {e}") from None
    if not isinstance(doc, dict) or "dist" not in doc:
        raise StructureError("space document needs a 'dist' field")
    dist = doc["dist"]
    if not isinstance(dist, list) or not all(isinstance(r, list) for r in dist):
        raise StructureError("'dist' must be a list of rows")
    try:
        matrix = [[as_rational(v) for v in row] for row in dist]
    except (TypeError, ValueError) as e:
        raise StructureError(f"bad distance entry: {e}") from None
    points = doc.get("points") or list(default_labels(len(matrix)))
    mapping = doc.get("map")
    if mapping is not None:
        try:
            mapping = {str(a): str(b) for a, b in mapping}
        except (TypeError, ValueError):
            raise StructureError("'map' must be a list of [label, image] pairs") from None
    return RawDocument(points, matrix, mapping)


def to_space(raw: RawDocument) -> tuple[FiniteMetricSpace, SelfMap | None]:
    """Validate a raw document into a space and, if present, its map."""
    space = FiniteMetricSpace.from_matrix(raw.matrix, raw.points)
    if raw.mapping is None:
        return space, None
    try:
        return space, SelfMap.from_labels(space, raw.mapping)
    except (KeyError, ValueError) as e:
        raise StructureError(str(e)) from None


def space_to_doc(space: FiniteMetricSpace, f: SelfMap | None = None) -> dict:
    doc = {
        "points": list(space.points),
        "dist": [[fmt(v) for v in row] for row in space.dist],
    }
    if f is not None:
        doc["map"] = [list(pair) for pair in f.labelled()]
    return doc


def report_to_doc(report: ClassificationReport, space: FiniteMetricSpace,
                  approx: bool = False) -> dict:
    doc = {
        "class": report.class_name,
        "n": report.n,
        "min_coefficient": fmt(report.min_coefficient),
        "bound": fmt(report.bound),
        "member": report.member,
        "witness": [space.points[i] for i in report.witness],
    }
    if approx:
        doc["min_coefficient_approx"] = float(report.min_coefficient)
    return doc


def certificate_to_doc(cert: CauchyCertificate) -> dict:
    a = cert.analysis
    return {
        "n": cert.n,
        "lambda": fmt(cert.lam),
        "rho": fmt(cert.rho),
        "rho_min": fmt(a.rho_min),
        "P": fmt(a.P),
        "gap_condition": cert.gap_ok,
        "envelope": cert.envelope.holds,
        "first_envelope_violation": cert.envelope.first_violation,
        "tail_bound": cert.tail_bound(),
        "holds": cert.holds,
    }


def trace_to_table(trace: IterationTrace, space: FiniteMetricSpace) -> str:
    """CSV with one row per iterate: step, point label, gap to the next iterate."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["step", "point", "gap"])
    for step, p in enumerate(trace.points):
        gap = fmt(trace.gaps[step]) if step < len(trace.gaps) else ""
        w.writerow([step, space.points[p], gap])
    return buf.getvalue()
