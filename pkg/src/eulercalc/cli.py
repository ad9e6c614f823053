"""Command-line front end: ``eulercalc <command> [options]``."""

from __future__ import annotations

import argparse
import os
import sys
import tempfile
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import io
from .bundles import RamificationData, bundle_chi_via_inclusion_exclusion, riemann_hurwitz
from .complex import barycentric_subdivide, chi_cellset, product_cellset
from .constructible import euler_integral, euler_integral_levelsets, integrate_over_cover, pushforward
from .errors import EulerCalcError, FormatError, LocalTrivialityError
from .homology import betti_numbers
from .raster import (
    Raster,
    chi_upper_set,
    enumerate_targets,
    random_scene,
    rasterize_shapes,
)

COMMANDS = (
    "chi", "homology", "subdivide", "product", "integrate", "cover-integrate",
    "pushforward", "synth", "enumerate", "bundle-check", "rh",
)

# number of -i files each command reads
_N_INPUTS = {
    "chi": 1, "homology": 1, "subdivide": 1, "product": 2, "integrate": 1,
    "cover-integrate": 2, "pushforward": 2, "bundle-check": 1, "enumerate": 1,
}


@dataclass
class RunConfig:
    command: str
    inputs: list[str] = field(default_factory=list)
    output: str | None = None
    seed: int = 0
    emit_json: bool = False
    options: dict = field(default_factory=dict)


def _ctx(path):
    return io._Ctx(path)


def _chi(cfg: RunConfig):
    (path,) = cfg.inputs
    cells = io.cells_from_json(io.load_json(path), _ctx(path))
    counts = cells.counts_by_dim()
    value = chi_cellset(cells)
    return {"chi": value, "cell_counts": counts}, str(value)


def _homology(cfg: RunConfig):
    (path,) = cfg.inputs
    cells = io.cells_from_json(io.load_json(path), _ctx(path))
    betti = betti_numbers(cells)
    chi = sum(b if d % 2 == 0 else -b for d, b in enumerate(betti))
    report = {"betti": betti, "chi": chi, "chi_cells": chi_cellset(cells)}
    text = f"betti: {' '.join(map(str, betti))}\nchi: {chi}"
    return report, text


def _subdivide(cfg: RunConfig):
    (path,) = cfg.inputs
    k = io.read_complex(path)
    times = cfg.options.get("times", 1)
    for _ in range(times):
        k = barycentric_subdivide(k, max_simplices=cfg.options.get("max_simplices"))
    report = io.complex_to_json(k)
    report.update(cell_counts=k.counts_by_dim(), chi=chi_cellset(k))
    text = f"cell counts: {' '.join(map(str, k.counts_by_dim()))}\nchi: {chi_cellset(k)}"
    return report, text


def _product(cfg: RunConfig):
    a, b = (io.cells_from_json(io.load_json(p), _ctx(p)) for p in cfg.inputs)
    summary = product_cellset(a, b)
    factors = [chi_cellset(a), chi_cellset(b)]
    report = {"cell_counts": list(summary.cell_counts), "chi": summary.chi, "chi_factors": factors}
    text = (
        f"cell counts: {' '.join(map(str, summary.cell_counts))}\n"
        f"chi: {summary.chi} = {factors[0]} * {factors[1]}"
    )
    return report, text


def _integrate(cfg: RunConfig):
    (path,) = cfg.inputs
    h = io.cf_from_json(io.load_json(path), _ctx(path))
    value = euler_integral(h)
    report = {"integral": value}
    lines = [f"integral: {value}"]
    if cfg.options.get("method") in ("levelset", "both"):
        report["levelset_integral"] = euler_integral_levelsets(h)
        lines.append(f"level-set integral: {report['levelset_integral']}")
    return report, "\n".join(lines)


def _cover_integrate(cfg: RunConfig):
    cf_path, cover_path = cfg.inputs
    h = io.cf_from_json(io.load_json(cf_path), _ctx(cf_path))
    cover = io.cover_from_json(io.load_json(cover_path), _ctx(cover_path), h.ambient)
    value = integrate_over_cover(h, cover)
    direct = euler_integral(h)
    report = {"cover_integral": value, "integral": direct, "pieces": len(cover)}
    return report, f"cover integral: {value}\nintegral: {direct}"


def _pushforward(cfg: RunConfig):
    map_path, cf_path = cfg.inputs
    p = io.map_from_json(io.load_json(map_path), _ctx(map_path))
    h = io.cf_from_json(io.load_json(cf_path), _ctx(cf_path), p.source)
    out = pushforward(p, h)
    report = io.cf_to_json(out)
    report.update(integral_source=euler_integral(h), integral_target=euler_integral(out))
    lines = [f"{list(s)}: {c}" for s, c in sorted(out.coeffs.items())]
    lines.append(f"integral: {report['integral_target']} (source {report['integral_source']})")
    return report, "\n".join(lines)


def _load_field(path):
    if Path(path).suffix.lower() == ".json":
        width, height, shapes = io.scene_from_json(io.load_json(path), _ctx(path))
        return rasterize_shapes(shapes, width, height)
    return io.read_raster(path)


def _synth(cfg: RunConfig):
    opts = cfg.options
    if cfg.inputs:
        width, height, shapes = io.scene_from_json(io.load_json(cfg.inputs[0]), _ctx(cfg.inputs[0]))
    else:
        width, height = opts.get("width", 256), opts.get("height", 256)
        kinds = tuple(opts.get("kinds") or ("disk", "rectangle"))
        rng = np.random.default_rng(cfg.seed)
        shapes = random_scene(rng, opts.get("count", 3), width, height, kinds=kinds)
    raster = rasterize_shapes(shapes, width, height)
    extra = {}
    if opts.get("save_scene"):
        extra[opts["save_scene"]] = io.dumps(io.scene_to_json(width, height, shapes))
    fmt = "pgm" if cfg.output and cfg.output.lower().endswith(".pgm") else "csv"
    text = io.raster_to_pgm(raster) if fmt == "pgm" else io.raster_to_csv(raster)
    return None, text.rstrip("\n"), extra


def _enumerate(cfg: RunConfig):
    (path,) = cfg.inputs
    raster = _load_field(path)
    n = cfg.options.get("support_chi", 1)
    result = enumerate_targets(raster, n)
    report = result.as_dict()
    report["value"] = str(result.value)
    extra = {}
    if cfg.options.get("threshold") is not None:
        s = cfg.options["threshold"]
        report["threshold"] = s
        report["chi_upper_set"] = chi_upper_set(raster, s)
        if cfg.options.get("dump_level"):
            level = (raster.values >= s).astype(np.int64)
            extra[cfg.options["dump_level"]] = io.raster_to_pgm(Raster(level))
    if result.consistent:
        text = f"count: {result.count}"
    else:
        text = f"inconsistent field: integral / N = {result.integral} / {n} = {result.value}"
    text += f"\nintegral: {result.integral}"
    if "threshold" in report:
        text += f"\nchi(h >= {report['threshold']}): {report['chi_upper_set']}"
    return report, text, extra


def _bundle_check(cfg: RunConfig):
    (path,) = cfg.inputs
    spec = io.bundle_from_json(io.load_json(path), _ctx(path))
    try:
        result = bundle_chi_via_inclusion_exclusion(spec)
    except LocalTrivialityError as exc:
        rows = [
            f"  J={[i + 1 for i in r.subset]} chi(B_J)={r.chi_base_piece} "
            f"chi(p^-1(B_J))={r.chi_preimage} expected={r.expected} {'ok' if r.passed else 'FAIL'}"
            for r in exc.report.rows
        ]
        raise EulerCalcError(str(exc) + "\n" + "\n".join(rows)) from exc
    report = {
        "trace": [r.as_dict() for r in result.trace],
        "summary": {
            "chi": result.chi,
            "chi_total": result.chi_total,
            "chi_base": result.chi_base,
            "fiber_chi": result.fiber_chi,
            "recomputed": result.recomputed_sum(),
            "holds": result.chi == result.chi_base * result.fiber_chi,
        },
    }
    return report, "\n".join(result.equation_lines())


def _rh(cfg: RunConfig):
    opts = cfg.options
    if opts.get("sheets") is None or opts.get("base_chi") is None:
        raise EulerCalcError("rh needs --sheets and --base-chi")
    data = RamificationData(opts["sheets"], opts["base_chi"], tuple(opts.get("ram") or ()))
    value = riemann_hurwitz(data)
    report = {"chi": value, "sheets": data.sheets, "base_chi": data.base_chi, "indices": list(data.indices)}
    return report, str(value)


_HANDLERS = {
    "chi": _chi, "homology": _homology, "subdivide": _subdivide, "product": _product,
    "integrate": _integrate, "cover-integrate": _cover_integrate, "pushforward": _pushforward,
    "synth": _synth, "enumerate": _enumerate, "bundle-check": _bundle_check, "rh": _rh,
}


def run(cfg: RunConfig) -> tuple[int, str, dict]:
    """Execute one command.

    Returns ``(status, text, extra_files)`` where ``text`` is the report to
    write and ``extra_files`` maps paths to contents of side outputs.  Status
    is 0 on success, 1 for domain errors and 2 for I/O or format errors.
    """
    if cfg.command not in _HANDLERS:
        return 2, f"error: unknown command {cfg.command!r}", {}
    want = _N_INPUTS.get(cfg.command)
    if want is not None and len(cfg.inputs) != want:
        return 2, f"error: {cfg.command} needs {want} input file(s) (-i), got {len(cfg.inputs)}", {}
    try:
        out = _HANDLERS[cfg.command](cfg)
    except FormatError as exc:
        return 2, f"error: {exc}", {}
    except OSError as exc:
        return 2, f"error: {exc}", {}
    except EulerCalcError as exc:
        return 1, f"error: {exc}", {}
    report, text = out[0], out[1]
    extra = out[2] if len(out) > 2 else {}
    if cfg.emit_json and report is not None:
        text = io.dumps(report).rstrip("\n")
    return 0, text, extra


def _write_atomic(path: str, content: str) -> None:
    target = Path(path)
    fd, tmp = tempfile.mkstemp(dir=target.parent or ".", prefix=f".{target.name}.")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(content)
        os.replace(tmp, target)
    except BaseException:
        os.unlink(tmp)
        raise


def _int_list_arg(text: str) -> list[int]:
    try:
        return [int(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="eulercalc", description="Exact Euler calculus on finite complexes.")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("-i", "--input", action="append", default=[], help="input file (repeatable)")
    common.add_argument("-o", "--output", help="write the report here instead of stdout")
    common.add_argument("--json", action="store_true", help="emit a JSON report")
    common.add_argument("--seed", type=int, default=0)
    sub = parser.add_subparsers(dest="command", required=True, metavar="command")

    sub.add_parser("chi", parents=[common], help="χ of a complex or cell set")
    sub.add_parser("homology", parents=[common], help="rational Betti numbers and χ")
    p = sub.add_parser("subdivide", parents=[common], help="iterated barycentric subdivision")
    p.add_argument("--times", type=int, default=1)
    p.add_argument("--max-simplices", type=int, default=100_000)
    sub.add_parser("product", parents=[common], help="cell counts of a product (two -i)")
    p = sub.add_parser("integrate", parents=[common], help="Euler integral of a constructible function")
    p.add_argument("--method", choices=["cell", "levelset", "both"], default="cell")
    sub.add_parser("cover-integrate", parents=[common], help="integral by inclusion–exclusion (-i cf -i cover)")
    sub.add_parser("pushforward", parents=[common], help="pushforward along a simplicial map (-i map -i cf)")
    p = sub.add_parser("synth", parents=[common], help="rasterize a scene (or a random one)")
    p.add_argument("--width", type=int, default=256)
    p.add_argument("--height", type=int, default=256)
    p.add_argument("--count", type=int, default=3)
    p.add_argument("--kinds", type=lambda s: s.split(","), default=None)
    p.add_argument("--save-scene")
    p = sub.add_parser("enumerate", parents=[common], help="count targets in a sensor field")
    p.add_argument("--support-chi", type=int, default=1)
    p.add_argument("--threshold", type=int)
    p.add_argument("--dump-level", help="write {h >= threshold} as PGM")
    sub.add_parser("bundle-check", parents=[common], help="χ(E) = χ(B)·χ(F) by inclusion–exclusion")
    p = sub.add_parser("rh", parents=[common], help="Riemann–Hurwitz arithmetic")
    p.add_argument("--sheets", type=int)
    p.add_argument("--base-chi", type=int)
    p.add_argument("--ram", type=_int_list_arg, default=[])
    return parser


def config_from_args(args: argparse.Namespace) -> RunConfig:
    skip = {"command", "input", "output", "json", "seed"}
    options = {k: v for k, v in vars(args).items() if k not in skip}
    return RunConfig(args.command, list(args.input), args.output, args.seed, args.json, options)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    cfg = config_from_args(args)
    status, text, extra = run(cfg)
    if status != 0:
        print(text, file=sys.stderr)
        return status
    try:
        for path, content in extra.items():
            _write_atomic(path, content)
        if cfg.output:
            _write_atomic(cfg.output, text + "\n")
        else:
            sys.stdout.write(text + "\n")
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
