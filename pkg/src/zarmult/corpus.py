"""Regression corpus: schema, loading and verification.

A corpus is a JSON document ``{"entries": [...]}``.  Every number is a
string so rationals survive untouched.  Each entry names the law it checks;
``run_verify`` evaluates the entry with the matching calculator and compares
against the stored integers.
"""

import json
import re
import time
from dataclasses import dataclass, field
from importlib import resources

import jsonschema

from .errors import ResourceLimitError, SchemaError, ZarMultError
from .fields import FieldDescriptor
from .macaulay import intersection_multiplicity_oracle
from .multiplicity import (CoverSpec, MapSpec, algebraic_multiplicity_cover,
                           algebraic_multiplicity_curve, intersection_multiplicity,
                           line_cover, zariski_multiplicity)
from .parser import parse_point, parse_polynomial, parse_rational
from .poly import MultiPoly
from .specialisation import is_infinitesimally_near

_NUM = {"type": "string", "pattern": r"^-?\d+(/\d+)?$"}
_NAT = {"type": "string", "pattern": r"^\d+$"}
_VAR = {"type": "string", "pattern": r"^[a-z][a-z0-9]*$"}

_INPUTS = {
    "cover": {
        "type": "object",
        "required": ["F", "fiber", "base", "basePoint", "fiberPoint"],
        "properties": {"F": {"type": "string"}, "fiber": _VAR,
                       "base": {"type": "array", "items": _VAR, "minItems": 1, "maxItems": 3},
                       "basePoint": {"type": "array", "items": _NUM},
                       "fiberPoint": _NUM},
    },
    "intersection": {
        "type": "object",
        "required": ["p1", "p2", "point"],
        "properties": {"p1": {"type": "string"}, "p2": {"type": "string"},
                       "point": {"type": "array", "items": _NUM, "minItems": 2, "maxItems": 2},
                       "variables": {"type": "array", "items": _VAR,
                                     "minItems": 2, "maxItems": 2}},
    },
    "composition": {
        "type": "object",
        "required": ["f", "g", "point"],
        "properties": {"f": {"type": "string"}, "g": {"type": "string"},
                       "source": {"type": "string"},
                       "point": {"type": "array", "items": _NUM, "minItems": 1, "maxItems": 2}},
    },
    "tower": {
        "type": "object",
        "required": ["point", "base"],
        "properties": {"point": {"type": "string"}, "base": {"type": "string"}},
    },
}

ENTRY_SCHEMA = {
    "type": "object",
    "required": ["name", "characteristic", "kind", "inputs", "expected"],
    "properties": {
        "name": {"type": "string"},
        "characteristic": _NAT,
        "kind": {"enum": sorted(_INPUTS)},
        "inputs": {"type": "object"},
        "expected": {"type": "object", "additionalProperties": _NAT, "minProperties": 1},
        "provenance": {"type": "string"},
    },
}

CORPUS_SCHEMA = {
    "type": "object",
    "required": ["entries"],
    "properties": {"entries": {"type": "array", "items": ENTRY_SCHEMA}},
}

LAWS = {
    "cover": "Zariski multiplicity equals algebraic multiplicity, d = e * p^n",
    "intersection": "resultant order equals local length",
    "composition": "multiplicity is multiplicative over composition",
    "tower": "specialisation composes along the tower",
}


@dataclass(frozen=True)
class CorpusEntry:
    index: int
    name: str
    characteristic: int
    kind: str
    inputs: dict
    expected: dict
    provenance: str = ""

    @property
    def field(self):
        return FieldDescriptor(self.characteristic).domain


@dataclass
class EntryResult:
    index: int
    name: str
    kind: str
    passed: bool
    seconds: float
    law: str
    computed: dict = field(default_factory=dict)
    mismatches: list = field(default_factory=list)
    error: str = ""

    def as_dict(self):
        return {"index": self.index, "name": self.name, "kind": self.kind,
                "passed": self.passed, "seconds": round(self.seconds, 6), "law": self.law,
                "computed": self.computed, "mismatches": self.mismatches, "error": self.error}


@dataclass
class VerificationReport:
    results: list
    warnings: list = field(default_factory=list)

    @property
    def passed(self):
        return sum(r.passed for r in self.results)

    @property
    def failed(self):
        return len(self.results) - self.passed

    @property
    def exit_status(self):
        return 0 if self.failed == 0 else 1

    def as_dict(self):
        return {"passed": self.passed, "failed": self.failed, "warnings": self.warnings,
                "entries": [r.as_dict() for r in self.results]}


def _schema_path(err):
    return "/".join(str(p) for p in err.absolute_path) or "<root>"


def validate_corpus(doc):
    """Check the document against the schema; raise SchemaError naming entry and field."""
    try:
        jsonschema.validate(doc, CORPUS_SCHEMA)
    except jsonschema.ValidationError as err:
        raise SchemaError(f"corpus schema violation at {_schema_path(err)}: {err.message}") \
            from None
    entries = []
    for i, raw in enumerate(doc["entries"]):
        kind = raw["kind"]
        try:
            jsonschema.validate(raw["inputs"], _INPUTS[kind])
        except jsonschema.ValidationError as err:
            where = "/".join(str(p) for p in err.absolute_path)
            field_path = f"inputs/{where}" if where else "inputs"
            raise SchemaError(f"corpus entry {i}: {field_path}: {err.message}") from None
        char = int(raw["characteristic"])
        try:
            FieldDescriptor(char)
        except ZarMultError as err:
            raise SchemaError(f"corpus entry {i}: characteristic: {err}") from None
        entries.append(CorpusEntry(i, raw["name"], char, kind, raw["inputs"],
                                   {k: int(v) for k, v in raw["expected"].items()},
                                   raw.get("provenance", "")))
    return entries


def load_corpus(path=None):
    if path is None:
        text = resources.files("zarmult").joinpath("data/corpus.json").read_text("utf-8")
    else:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as err:
        raise SchemaError(f"corpus is not valid JSON: {err}") from None
    return validate_corpus(doc)


def names_in(*texts):
    out = set()
    for t in texts:
        out |= set(re.findall(r"[a-z][a-z0-9]*", t))
    return sorted(out)


def build_cover(entry):
    inp = entry.inputs
    fiber, base = inp["fiber"], list(inp["base"])
    if len(inp["basePoint"]) != len(base):
        raise SchemaError(f"corpus entry {entry.index}: basePoint length does not match base")
    dom = entry.field
    F = parse_polynomial(inp["F"], sorted(set(base) | {fiber}), dom)
    return CoverSpec(F, fiber, base, [parse_rational(a, dom) for a in inp["basePoint"]],
                     parse_rational(inp["fiberPoint"], dom))


def _evaluate(entry, oracle):
    dom = entry.field
    inp = entry.inputs
    if entry.kind == "cover":
        cover = build_cover(entry)
        rep = zariski_multiplicity(cover)
        out = {"zariski": rep.zariski, "algebraic": rep.algebraic,
               "insepExponent": rep.insep_exponent}
        try:
            out["algebraicOracle"] = algebraic_multiplicity_cover(cover)
        except ResourceLimitError:
            out["algebraicOracle"] = None
        return out
    if entry.kind == "intersection":
        vs = tuple(inp.get("variables", ["x", "y"]))
        p1 = parse_polynomial(inp["p1"], vs, dom)
        p2 = parse_polynomial(inp["p2"], vs, dom)
        pt = [parse_rational(a, dom) for a in inp["point"]]
        out = {"intersection": intersection_multiplicity(p1, p2, pt, vs)}
        if oracle:
            out["oracle"] = intersection_multiplicity_oracle(p1, p2, pt, vs)
        return out
    if entry.kind == "composition":
        return _evaluate_composition(entry, dom)
    if entry.kind == "tower":
        near = is_infinitesimally_near(parse_point(inp["point"], dom), parse_point(inp["base"], dom))
        return {"near": int(near)}
    raise SchemaError(f"unknown kind {entry.kind!r}")


def _evaluate_composition(entry, dom):
    inp = entry.inputs
    point = [parse_rational(a, dom) for a in inp["point"]]
    g = parse_polynomial(inp["g"], ["u"], dom)
    if "source" in inp:
        src = parse_polynomial(inp["source"], ["x", "y"], dom)
        f = parse_polynomial(inp["f"], ["x", "y"], dom)
        fmap = MapSpec([f], point, source=src)
    else:
        f = parse_polynomial(inp["f"], ["x"], dom)
        fmap = MapSpec([f], point)
    b = fmap.image()[0]
    gmap = MapSpec([g], [b], source_vars=("u",))
    comp = fmap.compose(gmap)
    out = {"f": algebraic_multiplicity_curve(fmap), "g": algebraic_multiplicity_curve(gmap),
           "composite": algebraic_multiplicity_curve(comp)}
    if "source" not in inp:
        # Zariski side on the covers f(x) - u, g(u) - w and their composite
        X = MultiPoly.var("x", ("x",), dom)
        gf = g.subs({"u": f.with_variables(("x",))}) if g.variables else g
        ze = zariski_multiplicity(line_cover(f, "x", "u", point[0])).zariski
        zg = zariski_multiplicity(line_cover(g, "u", "w", b)).zariski
        zc = zariski_multiplicity(line_cover(gf.with_variables(X.variables), "x", "w",
                                             point[0])).zariski
        out["zariskiProduct"] = int(zc == ze * zg)
    return out


def check_entry(entry, oracle=False):
    start = time.perf_counter()
    law = LAWS[entry.kind]
    try:
        computed = _evaluate(entry, oracle)
    except ZarMultError as err:
        return EntryResult(entry.index, entry.name, entry.kind, False,
                           time.perf_counter() - start, law, error=f"{type(err).__name__}: {err}")
    mismatches = []
    for key, want in entry.expected.items():
        got = computed.get(key)
        if got != want:
            mismatches.append({"field": key, "expected": want, "computed": got})
    if entry.kind == "cover" and computed.get("algebraicOracle") not in (None,
                                                                          computed["algebraic"]):
        mismatches.append({"field": "algebraicOracle", "expected": computed["algebraic"],
                           "computed": computed["algebraicOracle"]})
    if "oracle" in computed and computed["oracle"] != computed["intersection"]:
        mismatches.append({"field": "oracle", "expected": computed["intersection"],
                           "computed": computed["oracle"]})
    if computed.get("zariskiProduct") == 0:
        mismatches.append({"field": "zariskiProduct", "expected": 1, "computed": 0})
    return EntryResult(entry.index, entry.name, entry.kind, not mismatches,
                       time.perf_counter() - start, law, computed, mismatches)


def run_verify(path=None, oracle=False):
    """Evaluate every corpus entry; the report's exit status is 0 iff all pass."""
    entries = load_corpus(path)
    report = VerificationReport([check_entry(e, oracle) for e in entries])
    if not entries:
        report.warnings.append("no entries")
    return report
