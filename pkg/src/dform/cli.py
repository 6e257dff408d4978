"""Command line front end.

Subcommands build one job document and hand it to the shared job
runner, so a CLI invocation and an HTTP request describing the same job
produce byte-identical output.

Exit codes: 0 on success, 1 on any user error (bad flag, malformed
expression, chain that fails kind checking), 2 on internal errors.
"""

from __future__ import annotations

import argparse
import json
import sys

import uvicorn

from .config import DEFAULT, load_config
from .errors import DFormError, ParseError
from .jobs import KINDS, OUTPUT_KINDS, ZOOM_MODES, check_chain, run_job
from .service import create_app

_N_COMPONENTS = {"form0": 1, "form1": 2, "form2": 1, "vf": 2}

# flags whose values may legitimately begin with "-" (expressions such
# as -x*cos(y), ranges such as -5:5, or "-" for stdout); argparse would
# otherwise read the value as another flag
_DASH_VALUE_FLAGS = {"--comp", "--range", "--xrange", "--yrange", "--target",
                     "--levels", "--out"}


def _fold_dash_values(argv: list[str]) -> list[str]:
    out = []
    i = 0
    while i < len(argv):
        tok = argv[i]
        nxt = argv[i + 1] if i + 1 < len(argv) else None
        if (tok in _DASH_VALUE_FLAGS and nxt is not None
                and nxt.startswith("-") and not nxt.startswith("--")):
            out.append(f"{tok}={nxt}")
            i += 2
            continue
        out.append(tok)
        i += 1
    return out


class _Parser(argparse.ArgumentParser):
    """argparse exits with 2 on bad flags; the contract here is 1."""

    def error(self, message):
        raise DFormError(message)


def _split_range(text: str) -> tuple[float, float]:
    lo, sep, hi = text.partition(":")
    if not sep:
        raise DFormError(f"range must look like a:b, got {text!r}")
    try:
        a, b = float(lo), float(hi)
    except ValueError:
        raise DFormError(f"range endpoints must be numbers, got {text!r}")
    if not a < b:
        raise DFormError(f"range must satisfy a < b, got {text!r}")
    return a, b


def _split_chain(text: str) -> list[dict]:
    """op[,op...] where each op is name[:key=val...]."""
    steps = []
    for token in text.split(","):
        token = token.strip()
        if not token:
            raise DFormError("empty operation in chain")
        name, *pairs = token.split(":")
        step: dict = {"op": name}
        for pair in pairs:
            key, sep, val = pair.partition("=")
            if not sep:
                raise DFormError(
                    f"chain argument must look like key=val, got {pair!r}")
            try:
                step[key] = float(val)
            except ValueError:
                raise DFormError(f"chain argument {key} must be a number")
        steps.append(step)
    return steps


def _add_object_flags(sp, with_style=True):
    sp.add_argument("--kind", required=True, choices=KINDS)
    sp.add_argument("--comp", action="append", default=[],
                    metavar="EXPR", help="component expression; repeat for "
                    "two-component kinds")
    sp.add_argument("--range", default=None, metavar="A:B",
                    help="both axes (default -5:5)")
    sp.add_argument("--xrange", default=None, metavar="A:B")
    sp.add_argument("--yrange", default=None, metavar="A:B")
    sp.add_argument("--n", type=int, default=31, help="points per axis")
    if with_style:
        sp.add_argument("--style", default=None, metavar="FILE",
                        help="style JSON file")
        sp.add_argument("--max-sheets", type=int, default=None)
        sp.add_argument("--color", default=None)
        sp.add_argument("--levels", default=None,
                        help="level count or comma-separated values")
        sp.add_argument("--labels", action="store_true",
                        help="label contour lines")
        sp.add_argument("--log-scale", action="store_true")
        sp.add_argument("--no-arrowheads", action="store_true")
        sp.add_argument("--out", default="-", metavar="PATH|-")
        sp.add_argument("--format", choices=OUTPUT_KINDS, default=None,
                        help="inferred from --out extension when omitted")


def _build_parser() -> _Parser:
    p = _Parser(prog="dform", description="plot and transform differential "
                "forms and vector fields on the plane")
    p.add_argument("--config", default=None, metavar="FILE",
                   help="engine config JSON (also via DFORM_CONFIG)")
    sub = p.add_subparsers(dest="command", required=True)

    plot = sub.add_parser("plot", help="render an object as it is")
    _add_object_flags(plot)

    op = sub.add_parser("op", help="apply an operation chain, then render")
    _add_object_flags(op)
    op.add_argument("--chain", required=True,
                    help="op[,op...]; per-op args as op:key=val")

    zm = sub.add_parser("zoom", help="render with a magnified inset")
    _add_object_flags(zm)
    zm.add_argument("--chain", default=None)
    zm.add_argument("--target", default="0:0", metavar="X:Y")
    zm.add_argument("--mag", type=float, default=2.0)
    zm.add_argument("--dpd", type=int, default=9,
                    help="inset grid points per axis")
    zm.add_argument("--insize", type=float, default=0.3)
    zm.add_argument("--mode", choices=ZOOM_MODES, default="zoom")

    chk = sub.add_parser("check", help="type-check a chain without computing")
    chk.add_argument("--kind", required=True, choices=KINDS)
    chk.add_argument("--chain", required=True)

    srv = sub.add_parser("serve", help="run the HTTP service")
    srv.add_argument("--port", type=int, default=None)
    srv.add_argument("--bind", default="127.0.0.1")
    return p


def _object_section(args) -> dict:
    n = _N_COMPONENTS[args.kind]
    if len(args.comp) != n:
        raise DFormError(f"{args.kind} takes exactly {n} --comp "
                         f"expression(s), got {len(args.comp)}")
    shared = _split_range(args.range) if args.range else (-5.0, 5.0)
    xr = _split_range(args.xrange) if args.xrange else shared
    yr = _split_range(args.yrange) if args.yrange else shared
    if args.n < 2:
        raise DFormError("--n must be at least 2")
    return {"kind": args.kind,
            "grid": {"x": {"min": xr[0], "max": xr[1], "n": args.n},
                     "y": {"min": yr[0], "max": yr[1], "n": args.n}},
            "components": [{"expr": e} for e in args.comp]}


def _style_section(args) -> dict | None:
    style: dict = {}
    if args.style:
        with open(args.style, "r", encoding="utf-8") as fh:
            loaded = json.load(fh)
        if not isinstance(loaded, dict):
            raise DFormError("style file must contain a JSON object")
        style.update(loaded)
    if args.max_sheets is not None:
        style["max_sheets"] = args.max_sheets
    if args.color is not None:
        style["color"] = args.color
    if args.levels is not None:
        if "," in args.levels:
            style["levels"] = [float(v) for v in args.levels.split(",")]
        else:
            style["levels"] = int(args.levels)
    if args.labels:
        style["contour_labels"] = True
    if args.log_scale:
        style["log_scaling"] = True
    if args.no_arrowheads:
        style["arrowheads"] = False
    return style or None


def _output_kind(args) -> str:
    if args.format:
        return args.format
    if args.out.endswith(".svg"):
        return "svg"
    return "scene-json"


def _emit(payload: str, out: str) -> None:
    if out == "-":
        sys.stdout.write(payload)
        return
    with open(out, "w", encoding="utf-8", newline="") as fh:
        fh.write(payload)


def _job_from_args(args) -> dict:
    job = {"object": _object_section(args), "output": _output_kind(args)}
    style = _style_section(args)
    if style:
        job["style"] = style
    chain = getattr(args, "chain", None)
    if chain:
        job["chain"] = _split_chain(chain)
    if args.command == "zoom":
        tx, ty = args.target.split(":")
        try:
            target = [float(tx), float(ty)]
        except ValueError:
            raise DFormError(f"zoom target must look like X:Y, "
                             f"got {args.target!r}")
        job["zoom"] = {"target": target, "mag": args.mag, "dpd": args.dpd,
                       "insize": args.insize, "mode": args.mode}
    return job


def main(argv=None) -> int:
    try:
        if argv is None:
            argv = sys.argv[1:]
        args = _build_parser().parse_args(_fold_dash_values(list(argv)))
        config = load_config(args.config) if args.config else load_config()
        if args.command == "check":
            final = check_chain(args.kind, _split_chain(args.chain))
            print(final)
            return 0
        if args.command == "serve":
            uvicorn.run(create_app(config), host=args.bind,
                        port=args.port or config.default_port)
            return 0
        payload, _ = run_job(_job_from_args(args), config)
        _emit(payload, args.out)
        return 0
    except ParseError as exc:
        print(f"error: {exc.message} (offset {exc.offset})", file=sys.stderr)
        return 1
    except DFormError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except Exception as exc:  # noqa: BLE001 - contract: internal errors exit 2
        print(f"internal error: {exc!r}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
