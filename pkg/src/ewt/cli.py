"""Command-line front end: ``ewt make | classify | detect | sweep | spa | schmidt``.

Exit codes: 0 success, 2 usage or invalid parameters, 3 malformed input,
4 dimension mismatch.
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from . import __version__, catalog
from . import classify as clf
from .io import MalformedFile, MatrixFile, load, save
from .linalg import schmidt_decompose
from .optimize import CERT_TOL

EXIT_OK, EXIT_USAGE, EXIT_MALFORMED, EXIT_DIMS = 0, 2, 3, 4


class CliError(Exception):
    def __init__(self, code, message):
        super().__init__(message)
        self.code = code


def _emit(payload, as_json, out=None):
    out = sys.stdout if out is None else out
    if as_json:
        out.write(json.dumps(payload, sort_keys=True, default=_default) + "\n")
        return
    for key in sorted(payload):
        val = payload[key]
        if isinstance(val, (dict, list)):
            val = json.dumps(val, sort_keys=True, default=_default)
        out.write(f"{key}: {val}\n")


def _default(x):
    if isinstance(x, np.integer):
        return int(x)
    if isinstance(x, np.floating):
        return float(x)
    if isinstance(x, np.bool_):
        return bool(x)
    raise TypeError(f"cannot serialize {type(x).__name__}")


def _load(path):
    try:
        return load(path)
    except MalformedFile as exc:
        raise CliError(EXIT_MALFORMED, str(exc)) from None


def _require_hermitian(mf):
    if mf.kind == "vector":
        raise CliError(EXIT_MALFORMED, "expected an operator file, got a vector")
    if np.abs(mf.data - mf.data.conj().T).max() > 1e-10:
        raise CliError(EXIT_MALFORMED, "operator is not Hermitian")


def _build(family, params):
    try:
        raw = catalog.parse_params(params)
        return catalog.build(family, raw)
    except KeyError:
        raise CliError(EXIT_USAGE, f"unknown family {family!r}; known: {', '.join(sorted(catalog.FAMILIES))}") from None
    except (ValueError, AssertionError) as exc:
        raise CliError(EXIT_USAGE, f"invalid parameters for {family}: {exc}") from None


# -- commands -------------------------------------------------------------------

def cmd_make(args):
    M, dims, kind, params, extra = _build(args.family, args.params)
    mf = MatrixFile(dims[0], dims[1], kind, M, {"family": args.family, "params": params, **extra})
    text = save(args.out, mf)
    if args.out in (None, "-"):
        sys.stdout.write(text)
    else:
        _emit({"written": args.out, "family": args.family, "d_a": dims[0], "d_b": dims[1], "kind": kind},
              args.json)


def _parse_states(items):
    out = {}
    for item in items or []:
        name, _, path = item.partition("=")
        if not path:
            name, path = item, item
        mf = _load(path)
        out[name] = mf
    return out


def cmd_classify(args):
    mf = _load(args.witness)
    _require_hermitian(mf)
    states = {}
    for name, st in _parse_states(args.state).items():
        if st.data.shape != mf.data.shape:
            raise CliError(EXIT_DIMS, f"state {name} does not match the witness dimension")
        states[name] = st.data
    report = clf.classify_witness(mf.data, mf.dims, seed=args.seed, restarts=args.restarts,
                                  meta=mf.meta, states=states, spanning=not args.no_spanning,
                                  cert_tol=args.tol)
    _emit(report.to_dict(), args.json)


def cmd_detect(args):
    W, rho = _load(args.witness), _load(args.state)
    _require_hermitian(W)
    if W.dims != rho.dims or W.data.shape != rho.data.shape:
        raise CliError(EXIT_DIMS, f"witness dims {W.dims} and state dims {rho.dims} differ")
    val = clf.detect(W.data, rho.data)
    _emit({"trace": val, "verdict": "detected" if val < -args.tol else "not detected"}, args.json)


def _grid(spec):
    try:
        start, stop, num = spec.split(":")
        return np.linspace(float(start), float(stop), int(num))
    except ValueError:
        raise CliError(EXIT_USAGE, "range must be start:stop:num") from None


def _zero_crossings(xs, ys):
    out = []
    for i in range(len(xs) - 1):
        y0, y1 = ys[i], ys[i + 1]
        if y0 == 0:
            out.append(float(xs[i]))
        elif y0 * y1 < 0:
            out.append(float(xs[i] - y0 * (xs[i + 1] - xs[i]) / (y1 - y0)))
    if ys and ys[-1] == 0:
        out.append(float(xs[-1]))
    return out


def cmd_sweep(args):
    if args.witness:
        W = _load(args.witness)
        _require_hermitian(W)
        Wm, wdims = W.data, W.dims
    elif args.witness_family:
        Wm, wdims, _, _, _ = _build(args.witness_family, args.witness_params)
    else:
        raise CliError(EXIT_USAGE, "sweep needs --witness or --witness-family")
    fixed = args.params
    rows = []
    for x in map(float, _grid(args.range)):
        params = f"{fixed},{args.param}={x!r}" if fixed else f"{args.param}={x!r}"
        rho, dims, _, _, _ = _build(args.family, params)
        if tuple(dims) != tuple(wdims):
            raise CliError(EXIT_DIMS, f"state dims {dims} and witness dims {wdims} differ")
        rows.append([float(x), clf.detect(Wm, rho)])
    xs, ys = [r[0] for r in rows], [r[1] for r in rows]
    if args.json:
        _emit({"param": args.param, "rows": rows, "zero_crossings": _zero_crossings(xs, ys)}, True)
    else:
        sys.stdout.write(f"{args.param}\ttrace\n")
        for x, y in rows:
            sys.stdout.write(f"{x!r}\t{y!r}\n")


def cmd_spa(args):
    mf = _load(args.witness)
    _require_hermitian(mf)
    try:
        r = clf.spa(mf.data, mf.dims)
    except ValueError as exc:
        raise CliError(EXIT_USAGE, str(exc)) from None
    _emit({"p_star": r.p_star, "ppt": bool(r.ppt[0]), "min_pt_eigenvalue": r.ppt[1],
           "ccnr_sum": r.ccnr[0], "ccnr_flag": bool(r.ccnr[1]), "note": r.note}, args.json)


def cmd_schmidt(args):
    mf = _load(args.vector)
    if mf.kind == "vector":
        psi = mf.data
    else:
        w, V = np.linalg.eigh((mf.data + mf.data.conj().T) / 2)
        if np.sum(w > 1e-10 * max(w[-1], 1e-300)) != 1:
            raise CliError(EXIT_MALFORMED, "schmidt needs a vector or a rank-one operator")
        psi = V[:, -1] * np.sqrt(w[-1])
    try:
        sd = schmidt_decompose(psi, mf.dims)
    except ValueError as exc:
        raise CliError(EXIT_MALFORMED, str(exc)) from None
    _emit({"coefficients": [float(s) for s in sd.coefficients], "rank": sd.rank}, args.json)


# -- parser ---------------------------------------------------------------------------

def _common():
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--seed", type=int, default=argparse.SUPPRESS, help="RNG seed (default 0)")
    p.add_argument("--restarts", type=int, default=argparse.SUPPRESS,
                   help="optimizer restarts (default 50*max(d_A, d_B))")
    p.add_argument("--tol", type=float, default=argparse.SUPPRESS,
                   help=f"certification tolerance (default {CERT_TOL:g})")
    p.add_argument("--json", action="store_true", default=argparse.SUPPRESS, help="JSON output")
    return p


def build_parser():
    common = _common()
    parser = argparse.ArgumentParser(prog="ewt", parents=[common],
                                     description="Entanglement witness toolkit")
    parser.add_argument("--version", action="version", version=f"ewt {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("make", parents=[common], help="build a catalog state or witness")
    p.add_argument("--family", required=True)
    p.add_argument("--params", default="")
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_make)

    p = sub.add_parser("classify", parents=[common], help="classify a witness file")
    p.add_argument("witness")
    p.add_argument("--state", action="append", help="NAME=PATH of a state to test for detection")
    p.add_argument("--no-spanning", action="store_true", help="skip the spanning-dimension harvest")
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("detect", parents=[common], help="evaluate tr(W rho)")
    p.add_argument("witness")
    p.add_argument("state")
    p.set_defaults(func=cmd_detect)

    p = sub.add_parser("sweep", parents=[common], help="tabulate tr(W rho(x)) over a parameter")
    p.add_argument("--family", required=True, help="state family")
    p.add_argument("--param", required=True)
    p.add_argument("--range", required=True, help="start:stop:num")
    p.add_argument("--params", default="", help="fixed state parameters")
    p.add_argument("--witness", default=None)
    p.add_argument("--witness-family", default=None)
    p.add_argument("--witness-params", default="")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("spa", parents=[common], help="structural physical approximation")
    p.add_argument("witness")
    p.set_defaults(func=cmd_spa)

    p = sub.add_parser("schmidt", parents=[common], help="Schmidt decomposition of a vector file")
    p.add_argument("vector")
    p.set_defaults(func=cmd_schmidt)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    for name, default in (("seed", 0), ("restarts", None), ("tol", CERT_TOL), ("json", False)):
        if not hasattr(args, name):
            setattr(args, name, default)
    try:
        args.func(args)
    except CliError as exc:
        sys.stderr.write(f"ewt: error: {exc}\n")
        return exc.code
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
