"""Command-line front end: ``hexact <command> FILE ...``.

Exit status is 0 on success, 1 when ``--assert`` is given and the verdict is
negative, and 2 on input errors. ``--json`` prints the versioned report
format; otherwise results are aligned tables. ``HEXACT_COLOR`` (``always``,
``never`` or ``auto``) controls colouring of table verdicts and nothing else.
"""

from __future__ import annotations

import argparse
import os
import sys
import time

from . import __version__
from .arrow import ArrowSequence, arrow_classify
from .bounded import BoundedVariant, UNBOUNDED
from .chain import ChainComplex, HomotopyEquivalence, compose, homology, is_contractible, validate
from .constructions import fibre_cofibre_sequence
from .exactness import FLAG_NAMES, HDiffSequence, classify_exactness, homotopical_homology
from .generators import random_sequence, rng_from
from .rings import Ring
from .serialize import (
    Instance,
    InstanceError,
    complex_json,
    components_json,
    dumps,
    instance_of,
    load,
    located,
    matrix_json,
    pretty_json,
)

REPORT_SCHEMA = "hexact-report/1"


class UsageError(Exception):
    """Bad request against a well-formed file; reported with a location, exit 2."""

    def __init__(self, location: str, message: str):
        self.location, self.message = location, message
        super().__init__(f"{location}: {message}")


# ---------------------------------------------------------------------------
# output helpers


def _use_color(stream) -> bool:
    mode = os.environ.get("HEXACT_COLOR", "auto").lower()
    if mode == "always":
        return True
    if mode == "never":
        return False
    return hasattr(stream, "isatty") and stream.isatty()


def _cell(x, color: bool) -> str:
    if x is True or x is False:
        text = "yes" if x else "no"
        if color:
            return f"\033[{32 if x else 31}m{text}\033[0m"
        return text
    if x is None:
        return "-"
    return str(x)


def table(headers: list[str], rows: list[list], color: bool = False) -> str:
    plain = [[_cell(x, False) for x in r] for r in rows]
    shown = [[_cell(x, color) for x in r] for r in rows]
    widths = [max([len(h)] + [len(r[i]) for r in plain]) for i, h in enumerate(headers)]
    lines = ["  ".join(h.ljust(w) for h, w in zip(headers, widths)).rstrip()]
    lines.append("  ".join("-" * w for w in widths))
    for p, s in zip(plain, shown):
        lines.append("  ".join(c + " " * (w - len(pc)) for c, pc, w in zip(s, p, widths)).rstrip())
    return "\n".join(lines)


def _summary(C: ChainComplex) -> str:
    if C.is_empty:
        return "0"
    return " ".join(f"{n}:{C.module(n).describe()}" for n in C.support)


def _equivalence_json(w: HomotopyEquivalence) -> dict:
    return {"inverse": components_json(w.g), "alpha": components_json(w.alpha), "beta": components_json(w.beta)}


def _witness_json(w):
    if isinstance(w, HomotopyEquivalence):
        return _equivalence_json(w)
    if isinstance(w, tuple):
        return [_witness_json(x) for x in w]
    return {"components": components_json(w)}


# ---------------------------------------------------------------------------
# lookup


def _variant(args, inst: Instance) -> BoundedVariant:
    if getattr(args, "variant", None):
        try:
            return BoundedVariant.parse(args.variant)
        except ValueError as e:
            raise UsageError("--variant", str(e)) from None
    return inst.variant or UNBOUNDED


def _get(pool: dict, name: str, kind: str, section: str):
    if name not in pool:
        raise UsageError(f"/{section}/{name}", f"unresolved {kind} {name!r}")
    return pool[name]


def _check_variant(V: BoundedVariant, loc: str, *objs) -> None:
    try:
        V.check(*objs)
    except ValueError as e:
        raise UsageError(loc, f"variant mismatch: {e}") from None


# ---------------------------------------------------------------------------
# commands; each returns (results, verdict)


def cmd_validate(args, inst: Instance):
    rows = []
    for kind, pool in (("complex", inst.complexes), ("map", inst.maps), ("homotopy", inst.homotopies)):
        for name, x in pool.items():
            rows.append({"kind": kind, "name": name, "diagnostics": [str(d) for d in validate(x)]})
    for name, s in inst.sequences.items():
        rows.append({"kind": "sequence", "name": name, "diagnostics": [str(d) for d in s.validate()]})
    ok = all(not r["diagnostics"] for r in rows)
    text = table(["kind", "name", "valid"], [[r["kind"], r["name"], not r["diagnostics"]] for r in rows], args.color)
    return {"entities": rows, "valid": ok}, ok, text


def cmd_homology(args, inst: Instance):
    C = _get(inst.complexes, args.object, "complex", "complexes")
    rows = []
    for n in C.support:
        H = homology(C, n)
        free, tors = H.invariants()
        rows.append({"degree": n, "homology": H.describe(), "rank": free, "torsion": [abs(int(d)) for d in tors]})
    acyclic = all(r["rank"] == 0 and not r["torsion"] for r in rows)
    text = table(["degree", "homology"], [[f"H{r['degree']}", r["homology"]] for r in rows], args.color)
    return {"object": args.object, "homology": rows, "acyclic": acyclic}, acyclic, text


def cmd_hker(args, inst: Instance):
    return _fibre_or_cofibre(args, inst, "hker")


def cmd_hcok(args, inst: Instance):
    return _fibre_or_cofibre(args, inst, "hcok")


def _fibre_or_cofibre(args, inst: Instance, which: str):
    f = _get(inst.maps, args.map, "map", "maps")
    V = _variant(args, inst)
    _check_variant(V, f"/maps/{args.map}", f)
    if which == "hker":
        data = V.hker(f)
        struct, hom = data.k, data.kappa
        identity_holds = hom.end.equals(compose(f, struct))
        names = ("k", "kappa")
    else:
        data = V.hcok(f)
        struct, hom = data.c, data.gamma
        identity_holds = hom.end.equals(compose(struct, f))
        names = ("c", "gamma")
    ok = identity_holds and not validate(data.object) and not validate(struct) and not validate(hom)
    C = data.object
    res = {"map": args.map, "variant": str(V), "construction": which, "object": complex_json(C),
           names[0]: components_json(struct), names[1]: components_json(hom), "valid": ok}
    rows = [[n, C.module(n).describe(), C.gens(n)] for n in C.support]
    text = f"{which}({args.map}) in the {V} variant\n" + table(["degree", "module", "generators"], rows, args.color)
    text += "\n" + table(["check", "holds"], [["structure identities", ok]], args.color)
    return res, ok, text


def cmd_sequence(args, inst: Instance):
    f = _get(inst.maps, args.map, "map", "maps")
    if args.left < 0 or args.right < 0:
        raise UsageError("--left/--right", "window sizes must be non-negative")
    seq = fibre_cofibre_sequence(f, args.left, args.right)
    rows, res_rows = [], []
    all_ok = True
    for i in range(seq.first, seq.last + 1):
        C = seq.objects[i]
        exact = None
        if i - 1 in seq.homotopies:
            a, b, h = seq.window(i - 1)
            rep = classify_exactness(HDiffSequence(a, b, h), UNBOUNDED)
            exact = rep.flags["strong"] and rep.flags["h"]
            all_ok &= exact
        rows.append([i, _summary(C), exact])
        res_rows.append({"position": i, "object": complex_json(C), "strongly_h_exact_here": exact})
    text = table(["position", "object", "strongly h-exact here"], rows, args.color)
    return {"map": args.map, "first": seq.first, "last": seq.last, "positions": res_rows,
            "all_windows_strongly_h_exact": all_ok}, all_ok, text


def cmd_hh(args, inst: Instance):
    res_all, verdict, texts = [], True, []
    for name in args.seq:
        s = _get(inst.sequences, name, "sequence", "sequences")
        V = _variant(args, inst)
        _check_variant(V, f"/sequences/{name}", s.f, s.g)
        hh = homotopical_homology(s, V)
        H = hh.H
        contractible = is_contractible(H) is not None
        hom = [{"degree": n, "homology": homology(H, n).describe()} for n in H.support]
        res_all.append({"sequence": name, "variant": str(V), "H": complex_json(H), "homology": hom,
                        "contractible": contractible})
        verdict &= contractible
        rows = [[n, H.module(n).describe(), homology(H, n).describe()] for n in H.support]
        texts.append(f"H({name}) in the {V} variant\n" + table(["degree", "module", "homology"], rows, args.color)
                     + "\n" + table(["check", "holds"], [["H contractible", contractible]], args.color))
    return res_all, verdict, "\n\n".join(texts)


def _report_json(name: str, rep) -> dict:
    return {"sequence": name, "variant": str(rep.variant), "flags": {k: rep.flags[k] for k in FLAG_NAMES},
            "weak_conditions": dict(rep.weak_conditions), "cross_checks": dict(rep.cross_checks),
            "refutations": dict(sorted(rep.refutations.items())),
            "witnesses": {k: _witness_json(v) for k, v in sorted(rep.witnesses.items()) if k != "w"}}


def _classify_output(args, names, reports):
    flag = args.assert_flag or "h"
    results, rows, verdict = [], [], True
    for name, rep in zip(names, reports):
        results.append(_report_json(name, rep))
        rows.append([name] + [rep.flags[k] for k in FLAG_NAMES])
        verdict &= bool(rep.flags[flag])
    text = table(["sequence"] + list(FLAG_NAMES), rows, args.color)
    checks = [[name, k, v] for name, rep in zip(names, reports) for k, v in rep.cross_checks.items()]
    if checks:
        text += "\n" + table(["sequence", "cross-check", "holds"], checks, args.color)
    return results, verdict, text


def cmd_classify(args, inst: Instance):
    V = _variant(args, inst)
    reports = []
    for name in args.seq:
        s = _get(inst.sequences, name, "sequence", "sequences")
        _check_variant(V, f"/sequences/{name}", s.f, s.g)
        reports.append(classify_exactness(s, V))
    return _classify_output(args, args.seq, reports)


def cmd_arrow_classify(args, inst: Instance):
    reports = []
    for name in args.seq:
        s = _get(inst.sequences, name, "sequence", "sequences")
        try:
            a = ArrowSequence.from_chain(s)
        except ValueError as e:
            raise UsageError(f"/sequences/{name}", f"not a sequence of arrows: {e}") from None
        reports.append(arrow_classify(a))
    results, verdict, text = _classify_output(args, args.seq, reports)
    for r, rep in zip(results, reports):
        wd = rep.witnesses["w"]
        r["w"] = {"source": wd.w.top.describe(), "target": wd.w.bottom.describe(),
                  "matrix": matrix_json(wd.w.boundary.matrix), "is_iso": rep.flags["h"]}
    return results, verdict, text


# ---------------------------------------------------------------------------
# entry point


def _parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="print the machine-readable report")
    common.add_argument("--assert", dest="assert_", action="store_true",
                        help="exit 1 when the verdict is negative")
    common.add_argument("--timing", action="store_true", help="include wall-clock timing in the report")

    p = argparse.ArgumentParser(prog="hexact", description="Exactness in homotopical algebra over Z, Q and Z/p.")
    p.add_argument("--version", action="version", version=f"hexact {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("validate", parents=[common], help="check every entity of an instance file")
    s.add_argument("file")
    s = sub.add_parser("homology", parents=[common], help="homology table of a complex")
    s.add_argument("file")
    s.add_argument("--object", required=True)
    for name in ("hker", "hcok"):
        s = sub.add_parser(name, parents=[common], help=f"{'homotopy kernel' if name == 'hker' else 'homotopy cokernel'} of a map")
        s.add_argument("file")
        s.add_argument("--map", required=True)
        s.add_argument("--variant")
    s = sub.add_parser("sequence", parents=[common], help="fibre-cofibre sequence of a map")
    s.add_argument("file")
    s.add_argument("--map", required=True)
    s.add_argument("--left", type=int, default=3)
    s.add_argument("--right", type=int, default=3)
    s = sub.add_parser("hh", parents=[common], help="homotopical homology of a sequence")
    s.add_argument("file")
    s.add_argument("--seq", required=True, action="append")
    s.add_argument("--variant")
    s = sub.add_parser("classify", parents=[common], help="exactness flags of a sequence")
    s.add_argument("file")
    s.add_argument("--seq", required=True, action="append")
    s.add_argument("--variant")
    s.add_argument("--flag", dest="assert_flag", choices=FLAG_NAMES, help="flag checked by --assert (default h)")
    s = sub.add_parser("arrow", help="commands for sequences of arrows (complexes on [0, 1])")
    asub = s.add_subparsers(dest="arrow_command", required=True)
    a = asub.add_parser("classify", parents=[common], help="classify a sequence of arrows through w")
    a.add_argument("file")
    a.add_argument("--seq", required=True, action="append")
    a.add_argument("--flag", dest="assert_flag", choices=FLAG_NAMES)
    s = sub.add_parser("random", help="write a random instance file")
    s.add_argument("--seed", type=int, required=True)
    s.add_argument("--ring", default="Z", help="Z, Q or a prime p for Z/p")
    s.add_argument("--variant", default="unbounded")
    s.add_argument("--count", type=int, default=3)
    return p


COMMANDS = {
    "validate": cmd_validate,
    "homology": cmd_homology,
    "hker": cmd_hker,
    "hcok": cmd_hcok,
    "sequence": cmd_sequence,
    "hh": cmd_hh,
    "classify": cmd_classify,
}


def _ring(text: str) -> Ring:
    if text in ("Z", "Q"):
        return Ring(text)
    return Ring("Zp", int(text))


def _random(args, out) -> int:
    try:
        R = _ring(args.ring)
        V = BoundedVariant.parse(args.variant)
    except ValueError as e:
        print(f"hexact: error: {e}", file=sys.stderr)
        return 2
    rng = rng_from(args.seed)
    seqs = {f"S{i}": random_sequence(R, rng, V).sequence for i in range(args.count)}
    out.write(dumps(instance_of(R, seqs, V)))
    return 0


def main(argv: list[str] | None = None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    try:
        args = _parser().parse_args(argv)
    except SystemExit as e:
        return 0 if e.code == 0 else 2
    if args.command == "random":
        return _random(args, out)
    args.color = _use_color(out)
    if not hasattr(args, "assert_flag"):
        args.assert_flag = None
    command = "arrow classify" if args.command == "arrow" else args.command
    try:
        inst = load(args.file)
        fn = cmd_arrow_classify if args.command == "arrow" else COMMANDS[args.command]
        t0 = time.perf_counter()
        results, verdict, text = fn(args, inst)
        elapsed = time.perf_counter() - t0
    except InstanceError as e:
        problems = e.problems
    except UsageError as e:
        problems = [(e.location, e.message)]
    else:
        problems = None
    if problems is not None:
        for loc, msg in problems:
            print(located(args.file, loc, msg), file=err)
        if args.json:
            out.write(pretty_json({"schema": REPORT_SCHEMA, "version": __version__, "command": command,
                                   "file": args.file, "verdict": None,
                                   "errors": [{"location": loc, "message": msg} for loc, msg in problems]}))
        return 2
    if args.json:
        doc = {"schema": REPORT_SCHEMA, "version": __version__, "command": command, "file": args.file,
               "ring": inst.ring.to_json(), "verdict": bool(verdict), "results": results}
        if args.timing:
            doc["timing_ms"] = round(elapsed * 1000, 3)
        out.write(pretty_json(doc))
    else:
        out.write(text + "\n")
        if args.timing:
            out.write(f"time: {elapsed * 1000:.1f} ms\n")
    return 1 if args.assert_ and not verdict else 0


def main_entry() -> None:
    sys.exit(main())


if __name__ == "__main__":  # pragma: no cover
    main_entry()
