"""``owmf`` command line: add-noise, denoise, road-map and bench.

Exit codes: 0 success, 1 usage error, 2 I/O error, 3 validation error.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from pathlib import Path

import numpy as np

from . import bench, corpus
from .detect import DetectParams, j_map, road_map, roadg_map
from .grid import WindowSpec
from .imagefile import ImageFormatError, quantize, read_image, write_image
from .metrics import quality
from .noise import NoiseSpec, add_mixed
from .trilateral import TrifParams, trif_denoise
from .weights import OwmfParams, owf_denoise, owmf_denoise

EXIT_OK, EXIT_USAGE, EXIT_IO, EXIT_VALIDATION = 0, 1, 2, 3

log = logging.getLogger("owmf")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _add_noise_flags(p, defaults=True):
    p.add_argument("--sigma", type=float, default=0.0 if defaults else None,
                   help="Gaussian noise standard deviation (intensity units)")
    p.add_argument("--p", type=float, default=0.0, help="impulse probability in [0, 1]")
    p.add_argument("--impulse-lo", type=float, default=0.0)
    p.add_argument("--impulse-hi", type=float, default=255.0)
    p.add_argument("--seed", type=int, default=0)


def _add_filter_flags(p):
    p.add_argument("--search-radius", type=int, default=None, help="default: 6, or 2 for --method trif")
    p.add_argument("--patch-radius", type=int, default=12)
    p.add_argument("--detect-radius", type=int, default=2)
    p.add_argument("--K", type=int, default=12)
    p.add_argument("--H1", type=float, default=None)
    p.add_argument("--H2", type=float, default=None)
    p.add_argument("--kernel", choices=("kappa0", "uniform", "gaussian"), default="kappa0")
    p.add_argument("--h-g", type=float, default=12.0, help="bandwidth of the gaussian patch kernel")
    p.add_argument("--iterations", type=int, default=1)
    p.add_argument("--sigma-floor", type=float, default=3.0)
    p.add_argument("--plain-normalizer", action="store_true",
                   help="normalise weighted patch distances by kernel mass only")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="owmf", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("add-noise", help="synthesise seeded Gaussian/impulse noise")
    p.add_argument("input")
    p.add_argument("output")
    _add_noise_flags(p)
    p.add_argument("--mask", help="also write the impulse mask as a 0/255 image")
    p.add_argument("--raw", action="store_true", help="write unclamped float64 raw output")

    p = sub.add_parser("denoise", help="restore an image with owmf, owf or trif")
    p.add_argument("input")
    p.add_argument("output")
    p.add_argument("--method", choices=("owmf", "owf", "trif"), default="owmf")
    p.add_argument("--sigma", type=float, required=True)
    p.add_argument("--p", type=float, default=0.0, help="impulse probability hint for H1/H2")
    _add_filter_flags(p)
    p.add_argument("--sigma-s", type=float, default=0.5)
    p.add_argument("--sigma-r", type=float, default=None, help="default: twice --sigma")
    p.add_argument("--sigma-i", type=float, default=40.0)
    p.add_argument("--sigma-j", type=float, default=50.0)
    p.add_argument("--truth", help="ground-truth image; enables the quality report")
    p.add_argument("--report", help="write the quality report here instead of stdout")
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.add_argument("--quantized-psnr", action="store_true",
                   help="score the 8-bit quantised output instead of the real-valued one")
    p.add_argument("--raw", action="store_true")

    p = sub.add_parser("road-map", help="dump ROAD, ROADG or J maps")
    p.add_argument("input")
    p.add_argument("output")
    p.add_argument("--stat", choices=("road", "roadg", "j"), default="roadg")
    p.add_argument("--sigma", type=float, default=0.0)
    p.add_argument("--detect-radius", type=int, default=2)
    p.add_argument("--K", type=int, default=12)
    p.add_argument("--H", type=float, default=None, help="J shape parameter (required for --stat j)")
    p.add_argument("--format", choices=("csv", "image"), default=None,
                   help="default: csv for .csv outputs, image otherwise")

    p = sub.add_parser("bench", help="reproduce the benchmark tables on a corpus")
    p.add_argument("--suite", choices=("gaussian", "impulse", "mixed", "all"), default="mixed")
    p.add_argument("--corpus", default=None, help=f"corpus directory (default: ${corpus.CORPUS_ENV} or ./corpus)")
    p.add_argument("--images", nargs="*")
    p.add_argument("--sigmas", type=float, nargs="*")
    p.add_argument("--ps", type=float, nargs="*")
    p.add_argument("--method", dest="methods", action="append", choices=bench.METHODS)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--repeats", type=int, default=1)
    p.add_argument("--impulse-lo", type=float, default=0.0)
    p.add_argument("--impulse-hi", type=float, default=255.0)
    p.add_argument("--iterations", type=int, default=None)
    p.add_argument("--no-trif-sweep", action="store_true")
    p.add_argument("--report", help="report path (default: stdout)")
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.add_argument("--threads", default="1", help="worker processes, or 'auto'")
    return parser


def _window(args) -> WindowSpec:
    h = 6 if args.search_radius is None else args.search_radius
    return WindowSpec(h, args.patch_radius, args.detect_radius)


def _owmf_params(args) -> OwmfParams:
    return OwmfParams(
        window=_window(args),
        K=args.K,
        H1=args.H1,
        H2=args.H2,
        kernel=args.kernel,
        h_g=args.h_g,
        iterations=args.iterations,
        sigma_floor=args.sigma_floor,
        j_normalizer=not args.plain_normalizer,
    )


def _emit(text: str, path=None):
    if path:
        Path(path).write_text(text)
    else:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")


def cmd_add_noise(args) -> int:
    spec = NoiseSpec(args.sigma, args.p, args.impulse_lo, args.impulse_hi, args.seed)
    img = read_image(args.input)
    noisy, mask = add_mixed(img, spec)
    write_image(args.output, noisy, raw=args.raw)
    if args.mask:
        write_image(args.mask, mask.astype(np.float64) * 255.0)
    sidecar = Path(str(args.output) + ".json")
    sidecar.write_text(json.dumps({"schema": bench.SCHEMA, "input": str(args.input), "noise": spec.to_dict()},
                                  indent=2, sort_keys=True) + "\n")
    log.info("wrote %s (%d impulse pixels)", args.output, int(mask.sum()))
    return EXIT_OK


def cmd_denoise(args) -> int:
    img = read_image(args.input)
    truth = read_image(args.truth) if args.truth else None
    if truth is not None and truth.shape != img.shape:
        raise ValueError(f"truth shape {truth.shape} does not match input shape {img.shape}")
    if args.method == "owmf":
        params = _owmf_params(args)
        out = owmf_denoise(img, args.sigma, args.p, params)
    elif args.method == "owf":
        out = owf_denoise(img, args.sigma, _window(args))
    else:
        tp = TrifParams(
            sigma_S=args.sigma_s,
            sigma_R=args.sigma_r if args.sigma_r is not None else max(2.0 * args.sigma, 1.0),
            sigma_I=args.sigma_i,
            sigma_J=args.sigma_j,
            search_radius=2 if args.search_radius is None else args.search_radius,
            iterations=args.iterations,
        )
        out = trif_denoise(img, tp)
    write_image(args.output, out, raw=args.raw)
    if truth is not None:
        scored = quantize(out).astype(np.float64) if args.quantized_psnr else out
        q = quality(truth, scored)
        record = {"schema": bench.SCHEMA, "method": args.method, "sigma": args.sigma, "p": args.p,
                  "quantized": bool(args.quantized_psnr), **q.to_dict()}
        if args.format == "json":
            text = json.dumps(record, sort_keys=True)
        else:
            keys = sorted(record)
            text = ",".join(keys) + "\n" + ",".join("" if record[k] is None else str(record[k]) for k in keys)
        _emit(text, args.report)
    return EXIT_OK


def cmd_road_map(args) -> int:
    img = read_image(args.input)
    if args.stat == "road":
        field = road_map(img, args.detect_radius, args.K)
    else:
        field = roadg_map(img, DetectParams(args.detect_radius, args.K, args.sigma))
        if args.stat == "j":
            if args.H is None:
                raise UsageError("--stat j needs --H")
            field = j_map(field, args.H)
    fmt = args.format or ("csv" if str(args.output).lower().endswith(".csv") else "image")
    if fmt == "csv":
        height, width = field.shape
        lines = ["col,row,value"]
        for r in range(height):
            for c in range(width):
                lines.append(f"{c},{r},{float(field[r, c])!r}")
        Path(args.output).write_text("\n".join(lines) + "\n")
    else:
        top = float(field.max())
        scaled = field * (255.0 / top) if top > 0 else np.zeros_like(field)
        write_image(args.output, scaled)
    return EXIT_OK


def _threads(value: str) -> int:
    if value == "auto":
        return os.cpu_count() or 1
    try:
        n = int(value)
    except ValueError:
        raise UsageError(f"--threads must be an integer or 'auto', got {value!r}") from None
    if n < 1:
        raise UsageError("--threads must be >= 1")
    return n


def cmd_bench(args) -> int:
    cells = bench.select_cells(args.suite, args.images, args.sigmas, args.ps, args.methods)
    if not cells:
        raise UsageError("no benchmark cells match the given filters")
    overrides = {"iterations": args.iterations} if args.iterations else None
    report = bench.run_bench(
        cells,
        corpus_directory=args.corpus,
        seed=args.seed,
        repeats=args.repeats,
        threads=_threads(args.threads),
        impulse_range=(args.impulse_lo, args.impulse_hi),
        owmf_overrides=overrides,
        trif_sweep=not args.no_trif_sweep,
    )
    text = report.to_json() if args.format == "json" else report.to_csv()
    _emit(text, args.report)
    if report.rows:
        sys.stderr.write(report.table() + "\n")
    for failure in report.failures:
        sys.stderr.write(f"skipped {failure['image_id']}: {failure['error']}\n")
    return EXIT_OK if report.rows else EXIT_IO


COMMANDS = {
    "add-noise": cmd_add_noise,
    "denoise": cmd_denoise,
    "road-map": cmd_road_map,
    "bench": cmd_bench,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return COMMANDS[args.command](args)
    except UsageError as exc:
        sys.stderr.write(f"owmf: usage error: {exc}\n")
        return EXIT_USAGE
    except (OSError, ImageFormatError) as exc:
        sys.stderr.write(f"owmf: I/O error: {exc}\n")
        return EXIT_IO
    except ValueError as exc:
        sys.stderr.write(f"owmf: invalid input: {exc}\n")
        return EXIT_VALIDATION


if __name__ == "__main__":
    sys.exit(main())
