"""Command line front end: ``qshape COMMAND WORKSPACE [options]``.

Exit codes: 0 success, 2 when a predicate command (validate, is-exact,
is-weq, perfect) computed a false verdict, 1 on any error.  JSON output
has sorted keys, so identical inputs give identical bytes.
"""

import argparse
import json
import os
import sys

from .category import WindowError, validate_setup
from .dsl import DSLError, column_of, nilpotency_hint, parse_field, parse_workspace, realize
from .homology import cohom, hom_tor, is_exact, is_weq, ext_qa, min_proj_resolution
from .labels import format_label, parse_label
from .stable import (
    classify_morphism, cone, dq_hom, is_stably_zero, is_strictly_perfect, perfect_witness,
    semiproj_resolution, stable_hom, stably_isomorphic, suspension_power, PreconditionError,
    UnsupportedError, certify_semiprojective,
)

PREDICATES = ("validate", "is-exact", "is-weq", "perfect")


class Report:
    def __init__(self, payload, verdict=None, text_extra=()):
        self.payload = payload
        self.verdict = verdict
        self.text_extra = list(text_extra)

    @property
    def exit_code(self):
        return 2 if self.verdict is False else 0


# ---------------------------------------------------------------------------
# output


def emit(report, fmt="json"):
    if fmt == "json":
        return (json.dumps(report.payload, sort_keys=True, indent=2) + "\n").encode()
    lines = list(report.text_extra)
    _text_lines(report.payload, 0, lines)
    return ("\n".join(lines) + "\n").encode()


def _scalar_text(v):
    if v is True:
        return "true"
    if v is False:
        return "false"
    if v is None:
        return "-"
    if isinstance(v, list) and all(not isinstance(x, (dict, list)) for x in v):
        return "[" + ", ".join(_scalar_text(x) for x in v) + "]"
    return str(v)


def _text_lines(value, depth, out):
    pad = "  " * depth
    for k in sorted(value):
        v = value[k]
        if isinstance(v, dict) and v:
            out.append(f"{pad}{k}:")
            _text_lines(v, depth + 1, out)
        elif isinstance(v, list) and any(isinstance(x, (dict, list)) for x in v):
            out.append(f"{pad}{k}:")
            for x in v:
                out.append(f"{pad}  - {json.dumps(x, sort_keys=True)}")
        else:
            out.append(f"{pad}{k}: {_scalar_text(v)}")


def label_json(q):
    return q if isinstance(q, int) else format_label(q)


def dims_json(X):
    return {format_label(q): n for q, n in X.dim_vector().items()}


def rep_json(X, full):
    return X.to_json() if full else dims_json(X)


# ---------------------------------------------------------------------------
# commands


def _cmd_validate(R, args):
    rep = validate_setup(R.cat)
    out = rep.to_json()
    out["category"] = R.cat.spec.describe()
    out["field"] = R.cat.field.tag
    out["window"] = list(R.window) if R.window else None
    return Report(out, rep.all_pass)


def _cmd_homology(R, args):
    X = R.rep(args.rep)
    q = _object(R, args.q)
    fn = hom_tor if args.tor else cohom
    return Report(fn(q, args.i, X).to_json())


def _cmd_is_exact(R, args):
    X = R.rep(args.rep)
    ok, bad = is_exact(X, witness=True)
    wit = None if ok else {"q": label_json(bad), "i": 1, "dim": cohom(bad, 1, X).dim}
    return Report({"verdict": ok, "witness": wit}, ok)


def _cmd_is_weq(R, args):
    phi = R.mor(args.mor)
    ok, bad = is_weq(phi, witness=True)
    wit = None if ok else {"q": label_json(bad[0]), "i": bad[1]}
    return Report({"verdict": ok, "witness": wit}, ok)


def _cmd_ext(R, args):
    X, Y = R.rep(args.source), R.rep(args.target)
    return Report({"i": args.i, "from": args.source, "to": args.target, "dim": ext_qa(args.i, X, Y)})


def _cmd_suspend(R, args):
    P = R.rep(args.rep)
    S = suspension_power(P, args.power)
    iso = stably_isomorphic(S, P)
    out = {
        "rep": args.rep, "power": args.power, "result": rep_json(S, args.full),
        "stably_isomorphic_to": {
            "rep": args.rep, "verdict": bool(iso),
            "removed_projective_summands": {
                "result": [format_label(q) for q, _ in iso.removed_X],
                "rep": [format_label(q) for q, _ in iso.removed_Y],
            },
        },
    }
    if args.full and iso:
        out["stably_isomorphic_to"]["isomorphism"] = iso.iso.to_json()
    line = f"stably isomorphic to {args.rep}: {'true' if iso else 'false'}"
    return Report(out, None, [line])


def _cmd_stable_hom(R, args):
    H = stable_hom(R.rep(args.source), R.rep(args.target))
    out = H.to_json(args.full)
    out.update({"from": args.source, "to": args.target})
    return Report(out)


def _cmd_dq_hom(R, args):
    X, Y = R.rep(args.source), R.rep(args.target)
    rx, ry = semiproj_resolution(X), semiproj_resolution(Y)
    out = dq_hom(X, Y).to_json(args.full)
    out.update({"from": args.source, "to": args.target})
    out["resolutions"] = {
        side: {"certificate": r.certificate.reason, "truncated_at": r.truncated_at, "dims": dims_json(r.P)}
        for side, r in (("from", rx), ("to", ry))
    }
    return Report(out)


def _cmd_cone(R, args):
    T = cone(R.mor(args.mor))
    out = {"mor": args.mor, "cone": rep_json(T.C, args.full), "suspension": rep_json(T.SX, args.full),
           "cone_stably_zero": is_stably_zero(T.C)}
    if args.full:
        out["legs"] = {"g": T.g.to_json(), "h": T.h.to_json()}
    return Report(out)


def _cmd_classify(R, args):
    out = classify_morphism(R.mor(args.mor), args.structure)
    out["mor"] = args.mor
    return Report(out)


def _cmd_perfect(R, args):
    X = R.rep(args.rep)
    if args.witness:
        K, phi = R.rep(args.witness), R.mor(args.mor)
        ok = perfect_witness(X, K, phi)
        return Report({"verdict": ok, "witness": {"object": args.witness, "mor": args.mor} if ok else None}, ok)
    if is_strictly_perfect(X) and certify_semiprojective(X):
        return Report({"verdict": True, "witness": {"object": args.rep, "dims": dims_json(X)}}, True)
    res = semiproj_resolution(X)
    if res.truncated_at is not None:
        wit = {"reason": "semiprojective resolution still growing at the window top",
               "truncated_at": res.truncated_at}
        return Report({"verdict": False, "witness": wit}, False)
    ok = is_strictly_perfect(res.P)
    wit = {"object": "resolution", "dims": dims_json(res.P)} if ok else None
    return Report({"verdict": ok, "witness": wit}, ok)


def _cmd_resolve(R, args):
    X = R.rep(args.rep)
    res = min_proj_resolution(X, args.degree)
    multi = len(X.alg.vertices) > 1

    def gen(o):
        q, v = o
        return f"{format_label(q)}@{v}" if multi else format_label(q)

    layers = [[gen(o) for o in res.layers[n]] for n in range(args.degree + 1)]
    return Report({"rep": args.rep, "degree": args.degree, "layers": layers, "minimal": res.is_minimal()})


COMMANDS = {
    "validate": (_cmd_validate, lambda a: 4, ()),
    "homology": (_cmd_homology, lambda a: a.i, ("rep",)),
    "is-exact": (_cmd_is_exact, lambda a: 1, ("rep",)),
    "is-weq": (_cmd_is_weq, lambda a: 2, ("mor",)),
    "ext": (_cmd_ext, lambda a: a.i, ("source", "target")),
    "suspend": (_cmd_suspend, lambda a: a.power, ("rep",)),
    "stable-hom": (_cmd_stable_hom, lambda a: 1, ("source", "target")),
    "dq-hom": (_cmd_dq_hom, lambda a: 2, ("source", "target")),
    "cone": (_cmd_cone, lambda a: 2, ("mor",)),
    "classify": (_cmd_classify, lambda a: 2, ("mor",)),
    "perfect": (_cmd_perfect, lambda a: 2, ("rep", "witness", "mor")),
    "resolve": (_cmd_resolve, lambda a: a.degree, ("rep",)),
}


def _object(R, text):
    q = parse_label(text)
    if q not in R.cat:
        raise KeyError(f"object {text} is not in the realized category")
    return q


# ---------------------------------------------------------------------------
# windows


def parse_window(text):
    try:
        lo, hi = (int(x) for x in text.split(".."))
    except ValueError:
        raise argparse.ArgumentTypeError("window must look like LO..HI") from None
    if hi <= lo:
        raise argparse.ArgumentTypeError("window must be nonempty")
    return (lo, hi)


def auto_window(ws, names, max_i, extra=(), field=None):
    """Support hull of the named objects padded by nilpotency × (max i + 2)."""
    cols = [column_of(q) for q in list(ws.labels_used(names)) + list(extra)]
    cols = [c for c in cols if c is not None] or [0]
    N = nilpotency_hint(ws, field) or 2
    pad = N * (max_i + 2)
    return (min(cols) - pad, max(cols) + pad)


def run(command, ws, args, field=None, retries=3):
    """Realize the workspace on a suitable window and execute one command."""
    fn, depth, refs = COMMANDS[command]
    names = [getattr(args, r) for r in refs if getattr(args, r, None)]
    extra = [parse_label(args.q)] if command == "homology" else []
    fixed = args.window or ws.window
    if not ws.category.windowed or fixed:
        R = realize(ws, fixed, field, only=names if command != "validate" else None)
        return fn(R, args)
    lo, hi = auto_window(ws, names if command != "validate" else None, depth(args), extra, field)
    for attempt in range(retries + 1):
        R = realize(ws, (lo, hi), field, only=names if command != "validate" else None)
        try:
            return fn(R, args)
        except WindowError:
            if attempt == retries:
                raise
            span = hi - lo
            lo, hi = lo - span // 2, hi + span // 2


# ---------------------------------------------------------------------------
# argument parsing


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("workspace", help="workspace file (.qs), or - for stdin")
    common.add_argument("--format", choices=("json", "text"), default="json")
    common.add_argument("--full", action="store_true", help="include matrices in the report")
    common.add_argument("--window", type=parse_window, default=None, metavar="LO..HI",
                        help="realize infinite categories on exactly this window")

    p = argparse.ArgumentParser(prog="qshape", description="Homological algebra over quiver-shaped categories.")
    sub = p.add_subparsers(dest="command", required=True)
    sub.add_parser("validate", parents=[common], help="check the standing hypotheses")
    s = sub.add_parser("homology", parents=[common], help="H^i_[q] (or H_i^[q] with --tor)")
    s.add_argument("--rep", required=True)
    s.add_argument("--q", required=True)
    s.add_argument("--i", type=int, required=True)
    s.add_argument("--tor", action="store_true")
    s = sub.add_parser("is-exact", parents=[common])
    s.add_argument("--rep", required=True)
    s = sub.add_parser("is-weq", parents=[common])
    s.add_argument("--mor", required=True)
    s = sub.add_parser("ext", parents=[common])
    s.add_argument("--i", type=int, required=True)
    s.add_argument("--from", dest="source", required=True)
    s.add_argument("--to", dest="target", required=True)
    s = sub.add_parser("suspend", parents=[common])
    s.add_argument("--rep", required=True)
    s.add_argument("--power", type=int, default=1)
    for name in ("stable-hom", "dq-hom"):
        s = sub.add_parser(name, parents=[common])
        s.add_argument("--from", dest="source", required=True)
        s.add_argument("--to", dest="target", required=True)
    s = sub.add_parser("cone", parents=[common])
    s.add_argument("--mor", required=True)
    s = sub.add_parser("classify", parents=[common])
    s.add_argument("--mor", required=True)
    s.add_argument("--structure", choices=("projective", "injective"), default="projective")
    s = sub.add_parser("perfect", parents=[common])
    s.add_argument("--rep", required=True)
    s.add_argument("--witness", default=None, help="name of a strictly perfect K")
    s.add_argument("--mor", default=None, help="name of a morphism K -> X")
    s = sub.add_parser("resolve", parents=[common])
    s.add_argument("--rep", required=True)
    s.add_argument("--degree", type=int, required=True)
    return p


def _validate_args(args):
    if args.command == "perfect" and bool(args.witness) != bool(args.mor):
        raise ValueError("argument --witness: give --witness and --mor together")
    if args.command == "suspend" and args.power < 1:
        raise ValueError("argument --power: must be at least 1")
    for key in ("i", "degree"):
        if getattr(args, key, 0) is not None and getattr(args, key, 0) < 0:
            raise ValueError(f"argument --{key}: must be nonnegative")


def _join_window(argv):
    # argparse reads "-3..3" as an option, so glue it to the flag
    out, k = [], 0
    while k < len(argv):
        if argv[k] == "--window" and k + 1 < len(argv):
            out.append("--window=" + argv[k + 1])
            k += 2
        else:
            out.append(argv[k])
            k += 1
    return out


def main(argv=None, stdout=None, stderr=None):
    stdout = stdout or sys.stdout.buffer
    stderr = stderr or sys.stderr
    args = build_parser().parse_args(_join_window(sys.argv[1:] if argv is None else list(argv)))
    source = args.workspace
    try:
        _validate_args(args)
        if source == "-":
            text, source = sys.stdin.read(), "<stdin>"
        else:
            with open(source, encoding="utf-8") as fh:
                text = fh.read()
        env = os.environ.get("QSHAPE_FIELD")
        try:
            field = parse_field(env) if env else None
        except DSLError as e:
            raise ValueError(f"QSHAPE_FIELD={env!r}: {e.bare}") from None
        ws = parse_workspace(text)
        report = run(args.command, ws, args, field)
    except DSLError as e:
        print(f"error: {source}:{e.line}:{e.col}: {e.bare}"
              + (f" (expected one of: {', '.join(e.expected)})" if e.expected else ""), file=stderr)
        return 1
    except (OSError, ValueError, KeyError, WindowError, PreconditionError, UnsupportedError,
            RuntimeError) as e:
        msg = e.args[0] if e.args else type(e).__name__
        print(f"error: {source}: {args.command}: {msg}", file=stderr)
        return 1
    stdout.write(emit(report, args.format))
    return report.exit_code


if __name__ == "__main__":
    sys.exit(main())
