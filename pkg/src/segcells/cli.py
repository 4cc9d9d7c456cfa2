"""Command-line front end: solve, verify, render, generate and benchmark."""

from __future__ import annotations

import argparse
import json
import math
import sys
import time
from fractions import Fraction

from . import allcells, connection, generate, io, render, separation
from .errors import ParamsError, SegCellsError
from .verify import verify_result

COMMANDS = {
    "separate": "separation",
    "separate-polygon": "separation-polygon",
    "connect-oracle": "connection",
    "connect-fpt": "connection",
    "connect-polygon": "connection-polygon",
    "allcells": "allcells",
}


def _read(path) -> bytes:
    if path in (None, "-"):
        return sys.stdin.buffer.read()
    with open(path, "rb") as fh:
        return fh.read()


def _write(path, text):
    if path in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)


def _need_polygon(inst):
    if inst.polygon is None:
        raise ParamsError("this command needs an instance with a polygon")


def _need_points(inst):
    if inst.a is None:
        raise ParamsError("this command needs points a and b")


def solve_command(command, inst, args) -> dict:
    """Run one solver and return the result document (without timings)."""
    out = {"command": command, "problem": COMMANDS[command]}
    if command == "separate":
        _need_points(inst)
        res = separation.solve(inst.segments, inst.a, inst.b, threads=args.threads)
        out.update(cost=res.weight, segments=list(res.segments), certificate=res.certificate,
                   witness={"root": res.witness[0], "edge": list(res.witness[1])}, stats=res.stats)
    elif command == "separate-polygon":
        _need_points(inst)
        _need_polygon(inst)
        res = separation.solve_in_polygon(inst.polygon, inst.segments, inst.a, inst.b, threads=args.threads)
        out.update(cost=res.weight, segments=list(res.segments), certificate=res.certificate,
                   witness={"root": res.witness[0], "edge": list(res.witness[1])}, stats=res.stats)
    elif command == "connect-oracle":
        _need_points(inst)
        res = connection.brute_force(inst.segments, inst.a, inst.b, clip=inst.polygon,
                                     guard=args.guard or connection.DEFAULT_GUARD)
        if inst.polygon is not None:
            out["problem"] = "connection-polygon"
        out.update(cost=res.cost, segments=list(res.segments), certificate=res.certificate, stats=res.stats)
    elif command == "connect-fpt":
        _need_points(inst)
        res = connection.fpt_crossings(inst.segments, inst.a, inst.b)
        out.update(cost=res.cost, segments=list(res.segments), certificate=res.certificate, stats=res.stats)
    elif command == "connect-polygon":
        _need_points(inst)
        _need_polygon(inst)
        res = connection.solve_polygon(inst.polygon, inst.segments, inst.a, inst.b,
                                       hole_guard=args.guard or connection.DEFAULT_HOLE_GUARD)
        out.update(cost=res.cost, segments=list(res.segments), certificate=res.certificate, stats=res.stats)
    elif command == "allcells":
        res = allcells.solve_all_cells(inst.segments, args.mode, guard=args.guard or allcells.DEFAULT_GUARD)
        out.update(cost=len(res.removed), segments=list(res.removed), certificate=None,
                   mode=res.mode.value, stats=res.stats)
    return out


def result_to_json(doc: dict, inst) -> dict:
    out = dict(doc)
    out["cost"] = io.scalar_str(Fraction(doc["cost"]))
    out["certificate"] = io.polyline_json(doc["certificate"])
    out["instance"] = io.instance_to_json(inst)
    return out


def _error_record(exc: SegCellsError) -> str:
    return io.dumps({"error": {"code": exc.code, "exit": exc.exit_status, "message": str(exc)}})


def cmd_solve(args) -> int:
    inst = io.parse_instance(_read(args.input))
    t0 = time.perf_counter()
    doc = solve_command(args.command, inst, args)
    if args.timings:
        doc["stats"] = dict(doc["stats"], seconds=round(time.perf_counter() - t0, 6))
    text = io.dumps(result_to_json(doc, inst))
    _write(args.output, text)
    if args.svg:
        _write(args.svg, render.render_svg(inst, doc["segments"], doc["certificate"]))
    return 0


def cmd_verify(args) -> int:
    raw = _read(args.input)
    result = io.parse_result(raw)
    if "instance" not in result:
        raise ParamsError("result file carries no instance")
    inst = io.parse_instance(json.dumps(result["instance"]))
    verify_result(inst, result)
    if args.svg:
        _write(args.svg, render.render_svg(inst, result["segments"], result["certificate"]))
    _write(args.output, io.dumps({"verified": True, "problem": result["problem"]}))
    return 0


def cmd_gen(args) -> int:
    params = {"n": args.n}
    for key in ("box", "h", "levels", "sides", "crossing", "weights"):
        val = getattr(args, key)
        if val is not None:
            params[key] = val
    if args.no_triple:
        params["allow_triple"] = False
    inst = generate.generate(args.family, args.seed, **params)
    problems = generate.validate_family(inst)
    if problems:
        raise ParamsError("generated instance violates its family: " + "; ".join(problems))
    _write(args.output, io.emit_instance(inst))
    if args.svg:
        _write(args.svg, render.render_svg(inst))
    return 0


def parse_sizes(text) -> list:
    """"64..512" doubles from 64 to 512; "10,20,40" lists sizes."""
    try:
        if ".." in text:
            lo, hi = (int(x) for x in text.split(".."))
            if lo < 1 or hi < lo:
                raise ValueError
            out = []
            while lo <= hi:
                out.append(lo)
                lo *= 2
            return out
        return [int(x) for x in text.split(",")]
    except ValueError:
        raise ParamsError(f"bad size list {text!r}") from None


def cmd_bench(args) -> int:
    if args.family != "random":
        raise ParamsError("bench supports the random family only")
    rows = []
    for n in parse_sizes(args.n_range):
        inst = generate.bench_instance(n, args.seed)
        G = separation.intersection_graph(inst.segments)
        t0 = time.perf_counter()
        try:
            separation.solve(inst.segments, inst.a, inst.b, threads=args.threads)
        except SegCellsError:
            pass
        dt = time.perf_counter() - t0
        model = n * G.k + n * n * math.log2(n)
        rows.append({"n": n, "k": G.k, "seconds": round(dt, 4), "per_unit_us": round(1e6 * dt / model, 4)})
    lines = [f"{'n':>6} {'k':>8} {'seconds':>10} {'us/(nk+n^2 log n)':>18}"]
    lines += [f"{r['n']:>6} {r['k']:>8} {r['seconds']:>10.4f} {r['per_unit_us']:>18.4f}" for r in rows]
    if args.output:
        _write(args.output, io.dumps({"rows": rows}))
    print("\n".join(lines))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="segcells", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, solver=True):
        p.add_argument("--input", "-i", help="input file (default: stdin)")
        p.add_argument("--output", "-o", help="output file (default: stdout)")
        p.add_argument("--svg", help="write an SVG drawing here")
        if solver:
            p.add_argument("--threads", type=int, default=1, help="worker threads (separation roots)")
            p.add_argument("--guard", type=int, default=None, help="size guard for exponential solvers")
            p.add_argument("--seed", type=int, default=0, help="accepted for uniformity; solvers are deterministic")
            p.add_argument("--timings", action="store_true", help="record wall time in the result")

    for name in COMMANDS:
        p = sub.add_parser(name, help=f"solve a {COMMANDS[name]} instance")
        common(p)
        if name == "allcells":
            p.add_argument("--mode", choices=[m.value for m in allcells.Mode], default="exact")
        p.set_defaults(func=cmd_solve)

    p = sub.add_parser("verify", help="re-check a result file's certificate")
    common(p, solver=False)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("gen", help="generate a seeded instance")
    p.add_argument("--family", choices=generate.FAMILIES, required=True)
    p.add_argument("--n", type=int, default=8)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--box", type=int)
    p.add_argument("--h", type=int, help="holes (polygon-restricted)")
    p.add_argument("--levels", type=int, help="rings (nested-polygons)")
    p.add_argument("--sides", type=int, help="ring size (nested-polygons)")
    p.add_argument("--crossing", type=int, help="allowed crossing pairs (contact-grid)")
    p.add_argument("--weights", choices=["unit", "rational", "01"])
    p.add_argument("--no-triple", action="store_true", help="reject points on three segments (random)")
    p.add_argument("--output", "-o")
    p.add_argument("--svg")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("bench", help="time the separation solver")
    p.add_argument("--family", default="random")
    p.add_argument("--n", dest="n_range", default="64..512")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--output", "-o")
    p.set_defaults(func=cmd_bench)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "threads", 1) < 1:
        parser.error("--threads must be at least 1")
    try:
        return args.func(args)
    except SegCellsError as exc:
        sys.stdout.write(_error_record(exc))
        return exc.exit_status
    except OSError as exc:
        err = ParamsError(f"{exc.filename}: {exc.strerror}")
        sys.stdout.write(_error_record(err))
        return err.exit_status


if __name__ == "__main__":
    sys.exit(main())
