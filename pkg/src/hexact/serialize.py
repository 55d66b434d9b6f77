"""JSON instance files: parsing with located errors, and a canonical serializer.

A file is one JSON document::

    {
      "ring": "Z" | "Q" | {"Zp": 5},
      "variant": "unbounded",                      # optional
      "complexes": {"A": {"modules": {"0": 1, "1": {"gens": 2, "relations": [[2], [0]]}},
                          "differentials": {"1": [[1, 2]]}}},
      "maps": {"f": {"source": "A", "target": "B", "components": {"0": [[3]]}}},
      "homotopies": {"alpha": {"source": "X", "target": "Y", "start": "0", "end": "g.f",
                               "components": {"0": [[1]]}}},
      "sequences": {"S": {"f": "f", "g": "g", "alpha": "alpha"},
                    "T": {"cofibre": "f"}, "U": {"fibre": "g"}}
    }

Module entries are a rank (free module) or ``{"gens", "relations"}`` with the
relation columns spanning the submodule. Degrees are string keys. Matrix
entries are JSON integers, decimal strings or ``"p/q"`` strings. Homotopy
endpoints are ``"0"`` or a composite ``"g.f"`` of named maps (rightmost applied
first). Everything is validated on load.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from fractions import Fraction

from .bounded import BoundedVariant
from .chain import ChainComplex, ChainMap, Homotopy, compose, identity, validate, zero_map
from .exactness import HDiffSequence
from .linalg import ExactMatrix
from .modules import PresentedModule
from .rings import Ring

FORMAT_VERSION = 1


class InstanceError(ValueError):
    """Input error with the file and JSON-pointer location of each problem."""

    def __init__(self, problems: list[tuple[str, str]], file: str = "<input>"):
        self.problems = problems
        self.file = file
        super().__init__("\n".join(located(file, loc, msg) for loc, msg in problems))


def located(file: str, loc: str, msg: str) -> str:
    return f"{file}:{loc}: {msg}" if loc else f"{file}: {msg}"


@dataclass
class Instance:
    ring: Ring
    variant: BoundedVariant | None = None
    complexes: dict[str, ChainComplex] = field(default_factory=dict)
    maps: dict[str, ChainMap] = field(default_factory=dict)
    homotopies: dict[str, Homotopy] = field(default_factory=dict)
    sequences: dict[str, HDiffSequence] = field(default_factory=dict)
    # how each sequence was written, so templates survive a round trip
    sequence_specs: dict[str, dict] = field(default_factory=dict)

    def same_as(self, other: "Instance") -> bool:
        if self.ring != other.ring or str(self.variant) != str(other.variant):
            return False
        if self.complexes != other.complexes:
            return False
        for mine, theirs in ((self.maps, other.maps), (self.homotopies, other.homotopies)):
            if mine.keys() != theirs.keys():
                return False
            for k in mine:
                if not _same_graded(mine[k], theirs[k]):
                    return False
        if self.sequences.keys() != other.sequences.keys():
            return False
        for k, s in self.sequences.items():
            t = other.sequences[k]
            if not (_same_graded(s.f, t.f) and _same_graded(s.g, t.g) and _same_graded(s.alpha, t.alpha)):
                return False
        return True


def _same_graded(a, b) -> bool:
    return a.source == b.source and a.target == b.target and a.same_matrices(b)


# ---------------------------------------------------------------------------
# parsing


class _Parser:
    def __init__(self, file: str):
        self.file = file
        self.problems: list[tuple[str, str]] = []

    def fail(self, loc: str, msg: str) -> None:
        self.problems.append((loc, msg))

    def entry(self, ring: Ring, x, loc: str):
        if isinstance(x, bool) or not isinstance(x, (int, str)):
            raise _Bad(loc, f"matrix entry {x!r} is not an integer or a 'p/q' string")
        try:
            if isinstance(x, str):
                x = Fraction(x.strip())
            return ring(x)
        except (ValueError, ZeroDivisionError, TypeError) as e:
            raise _Bad(loc, f"bad matrix entry {x!r}: {e}") from None

    def matrix(self, ring: Ring, data, rows: int, cols: int, loc: str) -> ExactMatrix:
        if not isinstance(data, list) or any(not isinstance(r, list) for r in data):
            raise _Bad(loc, "matrix must be an array of row arrays")
        if rows == 0:
            if data not in ([], [[]]) and any(data):
                raise _Bad(loc, f"expected 0 rows, got {len(data)}")
            return ExactMatrix.zeros(ring, 0, cols)
        if len(data) != rows:
            raise _Bad(loc, f"expected {rows} rows, got {len(data)}")
        for i, r in enumerate(data):
            if len(r) != cols:
                raise _Bad(f"{loc}/{i}", f"expected {cols} columns, got {len(r)}")
        return ExactMatrix(ring, rows, cols, [[self.entry(ring, x, f"{loc}/{i}/{j}") for j, x in enumerate(r)]
                                              for i, r in enumerate(data)])

    def degrees(self, obj, loc: str) -> dict[int, object]:
        if not isinstance(obj, dict):
            raise _Bad(loc, "expected an object keyed by degree")
        out = {}
        for k, v in obj.items():
            try:
                out[int(k)] = v
            except ValueError:
                raise _Bad(f"{loc}/{k}", f"degree key {k!r} is not an integer") from None
        return out

    def module(self, ring: Ring, spec, loc: str) -> PresentedModule:
        if isinstance(spec, int) and not isinstance(spec, bool):
            if spec < 0:
                raise _Bad(loc, "rank must be non-negative")
            return PresentedModule.free(ring, spec)
        if isinstance(spec, dict) and "gens" in spec:
            g = spec["gens"]
            if isinstance(g, bool) or not isinstance(g, int) or g < 0:
                raise _Bad(f"{loc}/gens", "gens must be a non-negative integer")
            rel = spec.get("relations", [])
            if rel == []:
                return PresentedModule.free(ring, g)
            cols = len(rel[0]) if rel and isinstance(rel, list) and isinstance(rel[0], list) else 0
            return PresentedModule(ring, self.matrix(ring, rel, g, cols, f"{loc}/relations"))
        raise _Bad(loc, "module must be a rank or {\"gens\", \"relations\"}")

    def complex(self, ring: Ring, spec, loc: str) -> ChainComplex:
        if not isinstance(spec, dict) or "modules" not in spec:
            raise _Bad(loc, "complex needs a \"modules\" object")
        mods = {n: self.module(ring, m, f"{loc}/modules/{n}") for n, m in self.degrees(spec["modules"], f"{loc}/modules").items()}
        diffs = {}
        for n, d in self.degrees(spec.get("differentials", {}), f"{loc}/differentials").items():
            src, tgt = mods.get(n), mods.get(n - 1)
            rows, cols = (tgt.gens if tgt else 0), (src.gens if src else 0)
            diffs[n] = self.matrix(ring, d, rows, cols, f"{loc}/differentials/{n}")
        try:
            C = ChainComplex(ring, mods, diffs)
        except ValueError as e:
            raise _Bad(loc, str(e)) from None
        for diag in validate(C):
            self.fail(f"{loc}/differentials/{diag.degree}", f"{diag.kind}: {diag.message}")
        return C

    def components(self, ring: Ring, spec, source: ChainComplex, target: ChainComplex, degree: int, loc: str) -> dict:
        comps = {}
        for n, m in self.degrees(spec, loc).items():
            comps[n] = self.matrix(ring, m, target.gens(n + degree), source.gens(n), f"{loc}/{n}")
        return comps


class _Bad(Exception):
    def __init__(self, loc: str, msg: str):
        self.loc, self.msg = loc, msg


def loads(text: str, file: str = "<input>") -> Instance:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise InstanceError([(f"{e.lineno}:{e.colno}", f"invalid JSON: {e.msg}")], file) from None
    return from_document(doc, file)


def load(path: str) -> Instance:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as e:
        raise InstanceError([("", f"cannot read file: {e.strerror}")], path) from None
    return loads(text, path)


def from_document(doc, file: str = "<input>") -> Instance:
    P = _Parser(file)
    if not isinstance(doc, dict):
        raise InstanceError([("/", "top level must be a JSON object")], file)
    try:
        ring = Ring.from_json(doc.get("ring", "Z"))
    except ValueError as e:
        raise InstanceError([("/ring", str(e))], file) from None
    variant = None
    if "variant" in doc:
        try:
            variant = BoundedVariant.parse(str(doc["variant"]))
        except ValueError as e:
            raise InstanceError([("/variant", str(e))], file) from None
    inst = Instance(ring, variant)
    unknown = set(doc) - {"ring", "variant", "complexes", "maps", "homotopies", "sequences", "format"}
    for k in sorted(unknown):
        P.fail(f"/{k}", "unknown top-level key")

    def guarded(loc, fn):
        try:
            return fn()
        except _Bad as b:
            P.fail(b.loc, b.msg)
        except ValueError as e:
            P.fail(loc, str(e))
        return None

    for name, spec in _section(doc, "complexes", P).items():
        C = guarded(f"/complexes/{name}", lambda: P.complex(ring, spec, f"/complexes/{name}"))
        if C is not None:
            inst.complexes[name] = C

    def complex_ref(ref, loc):
        if isinstance(ref, str):
            if ref not in inst.complexes:
                raise _Bad(loc, f"unresolved complex {ref!r}")
            return inst.complexes[ref]
        return P.complex(ring, ref, loc)

    for name, spec in _section(doc, "maps", P).items():
        loc = f"/maps/{name}"
        if "." in name or name in ("0", "1", "id"):
            P.fail(loc, "map names may not contain '.' or be '0', '1', 'id'")
            continue

        def build_map(spec=spec, loc=loc):
            _need(spec, ("source", "target"), loc)
            A, B = complex_ref(spec["source"], f"{loc}/source"), complex_ref(spec["target"], f"{loc}/target")
            f = ChainMap(A, B, P.components(ring, spec.get("components", {}), A, B, 0, f"{loc}/components"))
            for d in validate(f):
                P.fail(f"{loc}/components/{d.degree}", f"{d.kind}: {d.message}")
            return f

        f = guarded(loc, build_map)
        if f is not None:
            inst.maps[name] = f

    def endpoint(expr, A, B, loc) -> ChainMap:
        if expr in ("0", 0):
            return zero_map(A, B)
        if expr in ("1", "id"):
            if A != B:
                raise _Bad(loc, "identity endpoint needs equal source and target")
            return identity(A)
        if not isinstance(expr, str):
            raise _Bad(loc, "endpoint must be \"0\" or a composite like \"g.f\"")
        names = [s.strip() for s in expr.split(".")]
        f = None
        for nm in reversed(names):
            if nm not in inst.maps:
                raise _Bad(loc, f"unresolved map {nm!r}")
            m = inst.maps[nm]
            if f is not None and not m.source == f.target:
                raise _Bad(loc, f"{nm!r} does not compose with the maps to its right")
            f = m if f is None else compose(m, f)
        if f.source != A or f.target != B:
            raise _Bad(loc, f"endpoint {expr!r} does not run between the declared source and target")
        return f

    for name, spec in _section(doc, "homotopies", P).items():
        loc = f"/homotopies/{name}"

        def build_h(spec=spec, loc=loc):
            _need(spec, ("source", "target", "start", "end"), loc)
            A, B = complex_ref(spec["source"], f"{loc}/source"), complex_ref(spec["target"], f"{loc}/target")
            start = endpoint(spec["start"], A, B, f"{loc}/start")
            end = endpoint(spec["end"], A, B, f"{loc}/end")
            h = Homotopy(start, end, P.components(ring, spec.get("components", {}), A, B, 1, f"{loc}/components"))
            for d in validate(h):
                P.fail(f"{loc}/components/{d.degree}", f"{d.kind}: {d.message}")
            return h

        h = guarded(loc, build_h)
        if h is not None:
            inst.homotopies[name] = h

    for name, spec in _section(doc, "sequences", P).items():
        loc = f"/sequences/{name}"

        def build_s(spec=spec, loc=loc):
            return _sequence(inst, spec, loc)

        s = guarded(loc, build_s)
        if s is not None:
            inst.sequences[name] = s
            inst.sequence_specs[name] = dict(spec)
    if inst.variant is not None:
        for name, C in inst.complexes.items():
            if not inst.variant.contains(C):
                P.fail(f"/complexes/{name}", f"support {C.support} lies outside the {inst.variant} variant")
    if P.problems:
        raise InstanceError(P.problems, file)
    return inst


def _section(doc, key, P) -> dict:
    sec = doc.get(key, {})
    if not isinstance(sec, dict):
        P.fail(f"/{key}", "expected an object keyed by name")
        return {}
    return sec


def _need(spec, keys, loc) -> None:
    if not isinstance(spec, dict):
        raise _Bad(loc, "expected an object")
    for k in keys:
        if k not in spec:
            raise _Bad(loc, f"missing field {k!r}")


def _sequence(inst: Instance, spec, loc: str) -> HDiffSequence:
    if not isinstance(spec, dict):
        raise _Bad(loc, "expected an object")
    variant = inst.variant or BoundedVariant("unbounded")

    def get_map(key):
        ref = spec[key]
        if ref not in inst.maps:
            raise _Bad(f"{loc}/{key}", f"unresolved map {ref!r}")
        return inst.maps[ref]

    if "cofibre" in spec:
        f = get_map("cofibre")
        hc = variant.hcok(f)
        return HDiffSequence(f, hc.c, hc.gamma)
    if "fibre" in spec:
        g = get_map("fibre")
        hk = variant.hker(g)
        return HDiffSequence(hk.k, g, hk.kappa)
    _need(spec, ("f", "g", "alpha"), loc)
    f, g = get_map("f"), get_map("g")
    a = spec["alpha"]
    if a not in inst.homotopies:
        raise _Bad(f"{loc}/alpha", f"unresolved homotopy {a!r}")
    alpha = inst.homotopies[a]
    if f.target != g.source:
        raise _Bad(loc, "f and g are not composable")
    if not alpha.start.is_zero():
        raise _Bad(f"{loc}/alpha", "alpha must start at the zero map")
    if alpha.source != f.source or alpha.target != g.target or not alpha.end.equals(compose(g, f)):
        raise _Bad(f"{loc}/alpha", "alpha must end at g.f")
    return HDiffSequence(f, g, alpha)


# ---------------------------------------------------------------------------
# serialization


def entry_json(ring: Ring, x):
    if ring.kind == "Q":
        q = Fraction(int(x.numerator), int(x.denominator))
        return int(q) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"
    return int(x)


def matrix_json(m: ExactMatrix) -> list:
    return [[entry_json(m.ring, x) for x in row] for row in m.data]


def complex_json(C: ChainComplex) -> dict:
    mods = {}
    for n in C.support:
        M = C.module(n)
        mods[str(n)] = M.gens if M.is_free_presentation else {"gens": M.gens, "relations": matrix_json(M.relations)}
    return {"modules": mods, "differentials": {str(n): matrix_json(C.d(n)) for n in C.support if n - 1 in C.support}}


def components_json(h) -> dict:
    return {str(n): matrix_json(m) for n, m in sorted(h.components().items())}


class _Namer:
    def __init__(self, named: dict[str, ChainComplex]):
        self.named = named

    def ref(self, C: ChainComplex):
        for k, v in self.named.items():
            if v == C:
                return k
        return complex_json(C)


def to_document(inst: Instance) -> dict:
    doc: dict = {"format": FORMAT_VERSION, "ring": inst.ring.to_json()}
    if inst.variant is not None:
        doc["variant"] = str(inst.variant)
    names = _Namer(inst.complexes)
    doc["complexes"] = {k: complex_json(C) for k, C in inst.complexes.items()}
    doc["maps"] = {k: {"source": names.ref(f.source), "target": names.ref(f.target), "components": components_json(f)}
                   for k, f in inst.maps.items()}
    homs = {}
    for k, h in inst.homotopies.items():
        homs[k] = {"source": names.ref(h.source), "target": names.ref(h.target),
                   "start": _endpoint_json(inst, h.start), "end": _endpoint_json(inst, h.end),
                   "components": components_json(h)}
    doc["homotopies"] = homs
    doc["sequences"] = {k: dict(inst.sequence_specs.get(k) or _sequence_spec(inst, k)) for k in inst.sequences}
    return doc


def _endpoint_json(inst: Instance, f: ChainMap) -> str:
    if f.is_zero():
        return "0"
    for k, m in inst.maps.items():
        if _same_graded(m, f):
            return k
    for k1, m1 in inst.maps.items():
        for k2, m2 in inst.maps.items():
            if m2.target == m1.source and _same_graded(compose(m1, m2), f):
                return f"{k1}.{k2}"
    raise ValueError("homotopy endpoint is not expressible through named maps")


def _sequence_spec(inst: Instance, name: str) -> dict:
    s = inst.sequences[name]
    out = {}
    for key, obj, pool in (("f", s.f, inst.maps), ("g", s.g, inst.maps), ("alpha", s.alpha, inst.homotopies)):
        for k, v in pool.items():
            if v is obj or _same_graded(v, obj):
                out[key] = k
                break
        else:
            raise ValueError(f"sequence {name!r} refers to an unnamed {key}")
    return out


_LEAF_ARRAY = re.compile(r"\[\s*([^\[\]{}]*?)\s*\]", re.S)


def pretty_json(doc) -> str:
    """Indented JSON with every innermost array (a matrix row) on one line."""
    text = json.dumps(doc, indent=2, ensure_ascii=False)
    return _LEAF_ARRAY.sub(lambda m: "[" + re.sub(r",\s+", ", ", m.group(1)) + "]", text) + "\n"


def dumps(inst: Instance) -> str:
    return pretty_json(to_document(inst))


def instance_of(ring: Ring, sequences: dict[str, HDiffSequence], variant: BoundedVariant | None = None) -> Instance:
    """Name the parts of each sequence ``S`` as ``S_X``, ``S_A``, ``S_Y``, ``S_f``, ``S_g``, ``S_alpha``."""
    inst = Instance(ring, variant)
    for name, s in sequences.items():
        inst.complexes.update({f"{name}_X": s.X, f"{name}_A": s.A, f"{name}_Y": s.Y})
        inst.maps.update({f"{name}_f": s.f, f"{name}_g": s.g})
        inst.homotopies[f"{name}_alpha"] = s.alpha
        inst.sequences[name] = s
        inst.sequence_specs[name] = {"f": f"{name}_f", "g": f"{name}_g", "alpha": f"{name}_alpha"}
    return inst
