"""
JSON documents for instances and solution paths.

Scalars are written as ``[numerator, denominator]`` pairs so documents
round-trip exactly. On input a scalar may also be an int or a ``"p/q"``
string.

Instance document::

    {"losses": [
        {"abs": {"a": 1, "weight": 2}},
        {"quantile": {"a": 0, "tau": "1/2"}},
        {"pwl": {"breakpoints": [0, 4], "slopes": [-1, 0, 1], "offset": 0}},
        {"convex_grid": {"samples": [1, 0, 1], "l": -1, "eps": 1, "M": 100}}
     ],
     "scale": 1}

``abs`` is ``weight * |x - a|``; ``quantile`` is the check loss with slopes
``tau - 1`` and ``tau``; ``convex_grid`` interpolates samples taken at
``l, l + eps, ...`` (an optional ``u`` must match the sample count) with
outer slopes ``-M`` and ``M``. Every compiled loss is multiplied by
``scale``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Any

from .errors import InvalidPWL, OverlappingInsert, ParseError
from .fusing import FusingSchedule
from .instance import ProblemInstance
from .path import (Insertion, IntervalMap, ReducedProblem, Segment, SolutionPath,
                   group_table)
from .pwl import ConvexPWL, as_scalar, linearize_samples, make_pwl, scale_pwl

FORMAT_VERSION = 1
LOSS_KINDS = ("pwl", "abs", "quantile", "convex_grid")


def encode_scalar(v) -> list:
    v = Fraction(v)
    return [v.numerator, v.denominator]


def decode_scalar(raw: Any, where: str) -> Fraction:
    if isinstance(raw, bool):
        raise ParseError("expected a number, got a boolean", where)
    if isinstance(raw, list):
        if len(raw) != 2 or not all(isinstance(c, int) and not isinstance(c, bool) for c in raw):
            raise ParseError("a scalar pair must be [numerator, denominator] of ints", where)
        if raw[1] == 0:
            raise ParseError("zero denominator", where)
        return Fraction(raw[0], raw[1])
    try:
        return as_scalar(raw)
    except (TypeError, ValueError, ZeroDivisionError) as exc:
        raise ParseError(f"not a scalar: {raw!r} ({exc})", where) from None


def _field(obj: dict, key: str, where: str, required: bool = True):
    if not isinstance(obj, dict):
        raise ParseError("expected an object", where)
    if key not in obj:
        if required:
            raise ParseError(f"missing field {key!r}", where)
        return None
    return obj[key]


def _scalar_list(raw, where: str) -> list:
    if not isinstance(raw, list):
        raise ParseError("expected a list", where)
    return [decode_scalar(v, f"{where}[{i}]") for i, v in enumerate(raw)]


def _loads(text) -> Any:
    if isinstance(text, (dict, list)):
        return text
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc.msg}", f"line {exc.lineno} column {exc.colno}") from None


@dataclass(frozen=True)
class LossSpec:
    """One normalised loss descriptor: ``kind`` plus its exact parameters."""

    kind: str
    params: tuple  # sorted (name, value) pairs; lists become tuples

    def get(self, name, default=None):
        return dict(self.params).get(name, default)

    def compile(self) -> ConvexPWL:
        p = dict(self.params)
        if self.kind == "pwl":
            return make_pwl(p["breakpoints"], p["slopes"], p.get("offset", 0))
        if self.kind == "abs":
            w = p.get("weight", Fraction(1))
            if w <= 0:
                raise InvalidPWL(f"abs weight must be positive, got {w}")
            return make_pwl([p["a"]], [-w, w], 0)
        if self.kind == "quantile":
            tau = p["tau"]
            if not 0 < tau < 1:
                raise InvalidPWL(f"tau must lie in (0, 1), got {tau}")
            return make_pwl([p["a"]], [tau - 1, tau], 0)
        if self.kind == "convex_grid":
            samples, l, eps = p["samples"], p["l"], p["eps"]
            u = p.get("u")
            if u is not None and u != l + (len(samples) - 1) * eps:
                raise InvalidPWL(f"u = {u} does not match {len(samples)} samples from l = {l}")
            return linearize_samples(samples, l, eps, p["M"])
        raise ValueError(self.kind)  # pragma: no cover

    def to_json(self) -> dict:
        body = {}
        for name, v in self.params:
            body[name] = [encode_scalar(x) for x in v] if isinstance(v, tuple) else encode_scalar(v)
        return {self.kind: body}


_REQUIRED = {
    "pwl": ("breakpoints", "slopes"),
    "abs": ("a",),
    "quantile": ("a", "tau"),
    "convex_grid": ("samples", "l", "eps", "M"),
}
_OPTIONAL = {"pwl": ("offset",), "abs": ("weight",), "quantile": (), "convex_grid": ("u",)}
_LISTS = {"breakpoints", "slopes", "samples"}


def _parse_loss(raw, where: str) -> LossSpec:
    if not isinstance(raw, dict) or len(raw) != 1:
        raise ParseError(f"a loss must be an object with exactly one of {LOSS_KINDS}", where)
    (kind, body), = raw.items()
    if kind not in LOSS_KINDS:
        raise ParseError(f"unknown loss kind {kind!r}", where)
    where = f"{where}.{kind}"
    if not isinstance(body, dict):
        raise ParseError("expected an object", where)
    allowed = _REQUIRED[kind] + _OPTIONAL[kind]
    extra = sorted(set(body) - set(allowed))
    if extra:
        raise ParseError(f"unknown field(s) {extra}", where)
    params = []
    for name in allowed:
        value = _field(body, name, where, required=name in _REQUIRED[kind])
        if value is None:
            continue
        loc = f"{where}.{name}"
        if name in _LISTS:
            params.append((name, tuple(_scalar_list(value, loc))))
        else:
            params.append((name, decode_scalar(value, loc)))
    return LossSpec(kind, tuple(sorted(params)))


@dataclass(frozen=True)
class InstanceDocument:
    losses: tuple
    scale: Fraction = Fraction(1)

    def compile(self) -> ProblemInstance:
        out = []
        for i, spec in enumerate(self.losses):
            try:
                f = spec.compile()
            except InvalidPWL as exc:
                raise type(exc)(f"losses[{i}]: {exc}") from None
            out.append(f if self.scale == 1 else scale_pwl(f, self.scale))
        return ProblemInstance(out)

    def to_json(self) -> dict:
        return {"losses": [s.to_json() for s in self.losses], "scale": encode_scalar(self.scale)}

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=1)


def parse_instance_document(text) -> InstanceDocument:
    """Validate and normalise an instance document (string or decoded JSON)."""
    doc = _loads(text)
    if not isinstance(doc, dict):
        raise ParseError("an instance document must be an object", "$")
    extra = sorted(set(doc) - {"losses", "scale"})
    if extra:
        raise ParseError(f"unknown field(s) {extra}", "$")
    losses = _field(doc, "losses", "$")
    if not isinstance(losses, list) or not losses:
        raise ParseError("expected a non-empty list", "$.losses")
    specs = tuple(_parse_loss(raw, f"$.losses[{i}]") for i, raw in enumerate(losses))
    scale = decode_scalar(doc.get("scale", 1), "$.scale")
    if scale <= 0:
        raise ParseError("scale must be positive", "$.scale")
    return InstanceDocument(specs, scale)


def parse_instance(text) -> ProblemInstance:
    """Instance document to a compiled :class:`ProblemInstance`."""
    return parse_instance_document(text).compile()


def pwl_spec(f: ConvexPWL) -> LossSpec:
    return LossSpec("pwl", (("breakpoints", tuple(f.breakpoints)), ("offset", f.offset),
                            ("slopes", tuple(f.slopes))))


def instance_document(inst: ProblemInstance) -> InstanceDocument:
    """Every loss written out as an explicit ``pwl`` descriptor."""
    return InstanceDocument(tuple(pwl_spec(f) for f in inst.losses))


# -- path documents ---------------------------------------------------------

def path_to_json(path: SolutionPath) -> dict:
    sched = path.schedule
    segs = []
    for seg in path.segments:
        segs.append({
            "lambda": seg.lo,
            "hi": seg.hi,
            "scan_hi": seg.scan_hi,
            "group": list(seg.reduced.group),
            "table": list(seg.tb),
            "supernodes": [
                [[lo, hi, encode_scalar(v)] for lo, hi, v in tree] for tree in seg.trees
            ],
            "events": [
                [k, [[e.node, e.lo, e.hi] for e in seg.events[k]]] for k in sorted(seg.events)
            ],
            "thresholds": sorted(seg.boundaries),
        })
    return {
        "format": FORMAT_VERSION,
        "instance": instance_document(path.inst).to_json(),
        "lambda_max": sched.lambda_max,
        "n_solves": sched.n_solves,
        "segments": segs,
    }


def dump_path(path: SolutionPath) -> str:
    return json.dumps(path_to_json(path), indent=1)


def _int(raw, where: str, allow_none: bool = False):
    if raw is None and allow_none:
        return None
    if isinstance(raw, bool) or not isinstance(raw, int):
        raise ParseError("expected an integer", where)
    return raw


def load_path(text) -> SolutionPath:
    """Rebuild a :class:`SolutionPath` from :func:`dump_path` output."""
    try:
        return _load_path(text)
    except ParseError:
        raise
    except (TypeError, ValueError, KeyError, IndexError) as exc:
        raise ParseError(f"malformed path document ({exc})", "$") from None


def _load_path(text) -> SolutionPath:
    doc = _loads(text)
    if not isinstance(doc, dict):
        raise ParseError("a path document must be an object", "$")
    if doc.get("format") != FORMAT_VERSION:
        raise ParseError(f"unsupported format {doc.get('format')!r}", "$.format")
    inst = parse_instance(_field(doc, "instance", "$"))
    raw_segs = _field(doc, "segments", "$")
    if not isinstance(raw_segs, list) or not raw_segs:
        raise ParseError("expected a non-empty list", "$.segments")
    segments, entries = [], []
    for j, rs in enumerate(raw_segs):
        where = f"$.segments[{j}]"
        lo = _int(_field(rs, "lambda", where), f"{where}.lambda")
        hi = _int(_field(rs, "hi", where), f"{where}.hi", allow_none=True)
        group = tuple(_int(b, f"{where}.group") for b in _field(rs, "group", where))
        if len(group) != inst.n:
            raise ParseError(f"group has {len(group)} bits for {inst.n} nodes", f"{where}.group")
        table = [_int(t, f"{where}.table") for t in _field(rs, "table", where)]
        if table != group_table(group):
            raise ParseError("table does not match group", f"{where}.table")
        trees = []
        for I, raw_tree in enumerate(_field(rs, "supernodes", where)):
            tree = IntervalMap()
            for m, item in enumerate(raw_tree):
                loc = f"{where}.supernodes[{I}][{m}]"
                if not isinstance(item, list) or len(item) != 3:
                    raise ParseError("expected [lo, hi, value]", loc)
                try:
                    tree.insert(_int(item[0], loc), _int(item[1], loc, True),
                                decode_scalar(item[2], loc))
                except OverlappingInsert as exc:
                    raise ParseError(str(exc), loc) from None
            trees.append(tree)
        if len(trees) != table[-1] + 1:
            raise ParseError("one interval list per super-node expected", f"{where}.supernodes")
        events = {}
        for k, lst in _field(rs, "events", where):
            k = _int(k, f"{where}.events")
            value = inst.events[k].value
            events[k] = [Insertion(k, a, b, c, value) for a, b, c in lst]
        reduced = ReducedProblem(j, lo, hi, group, table)
        scan_hi = _int(_field(rs, "scan_hi", where), f"{where}.scan_hi")
        boundaries = set(_field(rs, "thresholds", where))
        segments.append(Segment(reduced, trees, events, boundaries, scan_hi, []))
        entries.append((lo, group))
    schedule = FusingSchedule(entries, _int(doc.get("lambda_max", 0), "$.lambda_max"),
                              _int(doc.get("n_solves", 0), "$.n_solves"))
    return SolutionPath(inst, schedule, segments)


def path_csv_rows(path: SolutionPath) -> list:
    """Step table rows ``(node, lambda_lo, lambda_hi, value)``; ``hi`` empty when unbounded."""
    rows = []
    for i in range(path.n):
        for lo, hi, v in path.node_path(i):
            rows.append((i, lo, "" if hi is None else hi, str(v)))
    return rows
