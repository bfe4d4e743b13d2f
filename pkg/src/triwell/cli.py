"""Command line entry point: ``triwell <command> --input job.json``.

Exit codes: 0 ok, 2 parse error, 3 domain error.  Errors are written in the
same place as results, as ``{"error": code, "detail": message}``.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Any, Optional, Sequence

import jsonschema
import numpy as np

from . import plane as pg
from . import sym2
from ._validation import check_sym2_array, check_wells
from .errors import DomainError, ParseError, TriwellError
from .hulls import CurvedPatch, HullStatus, Point, Segment, Triangle, WellSet, outer_bound, quasiconvex_hull
from .svg import render_svg
from .sym2 import Sym2
from .verify.campaign import oracle_report

COMMANDS = ("classify", "hull", "bound", "member", "verify", "plot")
EXIT_OK, EXIT_PARSE, EXIT_DOMAIN = 0, 2, 3

_NUM = {"type": "number"}
MATRIX_SCHEMA = {
    "oneOf": [
        {
            "type": "array",
            "minItems": 2,
            "maxItems": 2,
            "items": {"type": "array", "minItems": 2, "maxItems": 2, "items": _NUM},
        },
        {
            "type": "object",
            "properties": {"xx": _NUM, "yy": _NUM, "xy": _NUM},
            "required": ["xx", "yy", "xy"],
            "additionalProperties": False,
        },
    ]
}

JOB_SCHEMA = {
    "type": "object",
    "properties": {
        "wells": {"type": "array", "minItems": 3, "maxItems": 3, "items": MATRIX_SCHEMA},
        "command": {"enum": list(COMMANDS)},
        "queryPoints": {"type": "array", "items": MATRIX_SCHEMA},
        "oracle": {
            "type": "object",
            "properties": {
                "N": {"type": "integer", "minimum": 2},
                "L": {"type": "integer", "minimum": 2},
                "seed": {"type": "integer", "minimum": 0},
            },
            "additionalProperties": False,
        },
        "output": {"type": "string"},
        "tolerances": {
            "type": "object",
            "properties": {"det_rel": {"type": "number", "exclusiveMinimum": 0}},
            "additionalProperties": False,
        },
    },
    "required": ["wells"],
    "additionalProperties": False,
}

OUTPUT_SCHEMA = {
    "type": "object",
    "oneOf": [
        {"required": ["command", "result"]},
        {"required": ["error", "detail"], "properties": {"error": {"type": "string"}, "detail": {"type": "string"}}},
    ],
}


def _reject_constant(name: str):
    raise ParseError(f"non-finite number {name} in input")


def parse_job(data: bytes | str) -> dict:
    """Validate a job document; returns it with wells and query points as Sym2."""
    if isinstance(data, bytes):
        try:
            data = data.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise ParseError(f"input is not UTF-8: {exc}") from exc
    try:
        doc = json.loads(data, parse_constant=_reject_constant)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}") from exc
    try:
        jsonschema.validate(doc, JOB_SCHEMA)
    except jsonschema.ValidationError as exc:
        where = "/".join(str(p) for p in exc.absolute_path) or "<root>"
        raise ParseError(f"field {where}: {exc.message}") from exc
    job = dict(doc)
    job["wells"] = check_wells([_as_matrix(m) for m in doc["wells"]])
    queries = [_as_matrix(m) for m in doc.get("queryPoints", [])]
    job["queryPoints"] = [Sym2.from_components(c) for c in check_sym2_array(queries, "queryPoints")] if queries else []
    return job


def _as_matrix(m: Any) -> list:
    if isinstance(m, dict):
        return [[m["xx"], m["xy"]], [m["xy"], m["yy"]]]
    return m


# -- output helpers --------------------------------------------------------


def _mat(u: Optional[Sym2]):
    return None if u is None else u.as_nested()


def _frame_doc(ws: WellSet) -> Optional[dict]:
    try:
        f = ws.frame
    except DomainError:
        return None
    return {
        "origin": _mat(ws.origin()),
        "E_a": _mat(f.e_a),
        "E_n": _mat(f.e_n),
        "a": [float(x) for x in f.a],
        "n": [float(x) for x in f.n],
        "crossSq": f.cross_sq,
    }


def _xy(ws: WellSet, pts: Sequence[Sym2]) -> Optional[list]:
    try:
        f = ws.frame
    except DomainError:
        return None
    return pg.plane_coords_array(sym2.stack(pts), ws.origin(), f).tolist()


def _region_doc(ws: WellSet, region) -> list:
    out = []
    for piece in region.pieces:
        if isinstance(piece, CurvedPatch):
            kind = "curved_patch"
        elif isinstance(piece, Triangle):
            kind = "triangle"
        elif isinstance(piece, Segment):
            kind = "segment"
        else:
            assert isinstance(piece, Point)
            kind = "point"
        out.append({"type": kind, "vertices": [_mat(v) for v in piece.vertices], "frameCoords": _xy(ws, piece.vertices)})
    return out


def _classify(ws: WellSet, job: dict) -> dict:
    wc = ws.wclass
    return {
        "kind": wc.kind.value,
        "perm": list(wc.perm),
        "dets": list(wc.dets),
        "rankOnePairs": [list(p) for p in wc.rank_one_pairs],
        "spanDim": wc.span_dim,
    }


def _hull(ws: WellSet, job: dict) -> dict:
    res = quasiconvex_hull(ws)
    return {
        "kind": ws.wclass.kind.value,
        "status": res.status.value,
        "U0": _mat(ws.u0),
        "frame": _frame_doc(ws),
        "lamination": _region_doc(ws, res.inner),
        "outer": _region_doc(ws, res.outer),
    }


def _bound(ws: WellSet, job: dict) -> dict:
    ws.require_plane()
    b = outer_bound(ws)
    a, bx, dy, const = b.h_coeffs
    xi, eta, gamma, zeta = b.frame_coords
    return {
        "kind": ws.wclass.kind.value,
        "status": HullStatus.BOUND_ONLY.value,
        "C": _mat(b.c),
        "U0": _mat(b.u0),
        "detC": sym2.det(b.c),
        "hCoeffs": {"xy": a, "x": bx, "y": dy, "const": const},
        "wellFrameCoords": {"xi": xi, "eta": eta, "gamma": gamma, "zeta": zeta},
        "frame": _frame_doc(ws),
        "region": _region_doc(ws, b.region),
    }


def _member(ws: WellSet, job: dict) -> dict:
    res = quasiconvex_hull(ws)
    pts = job["queryPoints"]
    if not pts:
        raise ParseError("member needs at least one entry in queryPoints")
    comps = sym2.stack(pts)
    inner = res.inner.contains_array(comps)
    outer = res.outer.contains_array(comps)
    xy = _xy(ws, pts)
    rows = []
    for i, u in enumerate(pts):
        rows.append(
            {
                "point": _mat(u),
                "frameCoords": None if xy is None else xy[i],
                "inLe": bool(inner[i]),
                "inOuter": bool(outer[i]),
                "compatWithEachWell": [sym2.compat(u, w, ws.tol).kind.value for w in ws.wells],
            }
        )
    return {"kind": ws.wclass.kind.value, "status": res.status.value, "points": rows}


def _verify(ws: WellSet, job: dict) -> dict:
    o = job["oracle"]
    rep = oracle_report(ws.wells, o["N"], o["L"], o["seed"], ws.tol)
    rep["frame"] = _frame_doc(ws)
    return rep


RUNNERS = {"classify": _classify, "hull": _hull, "bound": _bound, "member": _member, "verify": _verify}


def run_job(job: dict, command: str) -> dict:
    tol = job.get("tolerances", {}).get("det_rel")
    ws = WellSet(job["wells"], tol)
    return {"command": command, "result": RUNNERS[command](ws, job)}


def dumps(doc: dict) -> str:
    """JSON with shortest round-trip float repr; non-finite values are refused."""
    return json.dumps(_plain(doc), indent=2, sort_keys=True, allow_nan=False) + "\n"


def _plain(x):
    if isinstance(x, dict):
        return {str(k): _plain(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_plain(v) for v in x]
    if isinstance(x, (np.bool_, bool)):
        return bool(x)
    if isinstance(x, np.integer):
        return int(x)
    if isinstance(x, (np.floating, float)):
        v = float(x) + 0.0  # folds -0.0 into 0.0
        return v if np.isfinite(v) else None
    if isinstance(x, np.ndarray):
        return _plain(x.tolist())
    return x


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="triwell", description="Hulls of three symmetric 2x2 wells.")
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("--input", required=True, help="job JSON file, or - for stdin")
    p.add_argument("--output", help="output file (JSON, or SVG for plot); default stdout")
    p.add_argument("--seed", type=int, help="oracle seed (verify)")
    p.add_argument("--grid", type=int, help="barycentric grid resolution N (verify)")
    p.add_argument("--lambda-steps", type=int, help="lamination steps L (verify)")
    p.add_argument("--tol", type=float, help="relative determinant tolerance")
    return p


def _read_input(path: str) -> bytes:
    if path == "-":
        return sys.stdin.buffer.read()
    try:
        with open(path, "rb") as fh:
            return fh.read()
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc.strerror}") from exc


def _write(text: str, path: Optional[str]) -> None:
    if path is None:
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)


def _merge_flags(job: dict, args: argparse.Namespace) -> None:
    if "command" in job and job["command"] != args.command:
        raise ParseError(f"job says command {job['command']!r} but {args.command!r} was requested")
    oracle = {"N": 100, "L": 64, "seed": 0}
    oracle.update(job.get("oracle", {}))
    for key, flag in (("N", args.grid), ("L", args.lambda_steps), ("seed", args.seed)):
        if flag is not None:
            oracle[key] = flag
    if oracle["N"] < 2 or oracle["L"] < 2 or oracle["seed"] < 0:
        raise ParseError("grid and lambda steps must be at least 2, seed non-negative")
    job["oracle"] = oracle
    if args.tol is not None:
        if not (args.tol > 0 and np.isfinite(args.tol)):
            raise ParseError("--tol must be a positive finite number")
        job.setdefault("tolerances", {})["det_rel"] = args.tol


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    out_path = args.output
    try:
        job = parse_job(_read_input(args.input))
        out_path = args.output or job.get("output")
        _merge_flags(job, args)
        if args.command == "plot":
            text = render_svg(job["wells"], job.get("tolerances", {}).get("det_rel"))
        else:
            text = dumps(run_job(job, args.command))
    except ParseError as exc:
        _write(dumps({"error": exc.code, "detail": str(exc)}), out_path if _is_json(out_path) else None)
        return EXIT_PARSE
    except TriwellError as exc:
        _write(dumps({"error": exc.code, "detail": str(exc)}), out_path if _is_json(out_path) else None)
        return EXIT_DOMAIN
    _write(text, out_path)
    return EXIT_OK


def _is_json(path: Optional[str]) -> bool:
    return path is not None and not path.lower().endswith(".svg")


if __name__ == "__main__":
    sys.exit(main())
