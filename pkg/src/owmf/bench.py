"""Benchmark harness: seeded noise, filtering and PSNR over table-style grids of cells."""

from __future__ import annotations

import csv
import hashlib
import io
import json
import logging
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field, replace
from typing import Optional

import numpy as np

from . import corpus
from .grid import WindowSpec
from .metrics import psnr_from_mse, mse as mse_of
from .noise import NoiseSpec, add_mixed
from .trilateral import TrifParams, sweep_grid, trif_denoise
from .weights import OwmfParams, owf_denoise, owmf_denoise

log = logging.getLogger(__name__)

SCHEMA = 1
METHODS = ("owmf", "owf", "trif", "noisy-baseline")


@dataclass(frozen=True)
class Cell:
    image_id: str
    sigma: float
    p: float
    methods: tuple = ("owmf",)
    patch_radius: int = 12


SUITES = {
    "gaussian": [
        Cell(img, s, 0.0, ("owmf",), 12 if s == 15 else 13)
        for s in (15, 20, 25)
        for img in ("lena", "barbara", "boat", "house")
    ],
    "impulse": [
        Cell(img, 0, p, ("owmf",))
        for img in ("baboon", "bridge", "lena", "pentagon")
        for p in (0.2, 0.4)
    ],
    "mixed": [
        Cell(img, s, p, ("trif", "owmf"))
        for s in (10, 20, 30)
        for img in ("lena", "bridge", "boat", "barbara")
        for p in (0.2, 0.3, 0.4, 0.5)
    ],
}


def default_owmf_params(cell: Cell, **overrides) -> OwmfParams:
    base = dict(window=WindowSpec(6, cell.patch_radius, 2))
    base.update(overrides)
    return OwmfParams(**base)


@dataclass
class BenchRow:
    image_id: str
    width: int
    height: int
    noise: dict
    method: str
    params_digest: str
    psnr_db: Optional[float]
    mse: float
    wall_seconds: float
    seed: int
    published_psnr_db: Optional[float] = None
    params: dict = field(default_factory=dict)


@dataclass
class BenchReport:
    rows: list = field(default_factory=list)
    failures: list = field(default_factory=list)
    schema: int = SCHEMA

    def to_json(self) -> str:
        return json.dumps(
            {"schema": self.schema, "rows": [asdict(r) for r in self.rows], "failures": self.failures},
            indent=2,
            sort_keys=True,
        )

    def to_csv(self) -> str:
        buf = io.StringIO()
        fields = [
            "schema", "image_id", "width", "height", "sigma", "p", "impulse_lo", "impulse_hi",
            "method", "params_digest", "psnr_db", "mse", "wall_seconds", "seed", "published_psnr_db",
        ]
        writer = csv.DictWriter(buf, fieldnames=fields, lineterminator="\n")
        writer.writeheader()
        for r in self.rows:
            writer.writerow({
                "schema": self.schema,
                "image_id": r.image_id, "width": r.width, "height": r.height,
                "sigma": r.noise["sigma"], "p": r.noise["p"],
                "impulse_lo": r.noise["impulse_lo"], "impulse_hi": r.noise["impulse_hi"],
                "method": r.method, "params_digest": r.params_digest,
                "psnr_db": "" if r.psnr_db is None else f"{r.psnr_db:.4f}",
                "mse": f"{r.mse:.6f}", "wall_seconds": f"{r.wall_seconds:.3f}", "seed": r.seed,
                "published_psnr_db": "" if r.published_psnr_db is None else r.published_psnr_db,
            })
        return buf.getvalue()

    def table(self) -> str:
        """Human-readable table: one line per (image, sigma, p) with a column per method."""
        cells = {}
        methods = []
        for r in self.rows:
            key = (r.image_id, r.noise["sigma"], r.noise["p"])
            cells.setdefault(key, {})[r.method] = r
            if r.method not in methods:
                methods.append(r.method)
        head = f"{'image':<10}{'sigma':>6}{'p%':>5}" + "".join(f"{m:>16}" for m in methods) + f"{'published':>11}"
        lines = [head, "-" * len(head)]
        for (img, s, p), by_method in cells.items():
            line = f"{img:<10}{s:>6g}{100 * p:>5.0f}"
            published = None
            for m in methods:
                r = by_method.get(m)
                if r is None:
                    line += f"{'':>16}"
                    continue
                value = "inf" if r.psnr_db is None else f"{r.psnr_db:.2f}db"
                line += f"{value:>16}"
                if m == "owmf":
                    published = r.published_psnr_db
            line += f"{'' if published is None else f'{published:.2f}db':>11}"
            lines.append(line)
        return "\n".join(lines)


def params_digest(params: dict) -> str:
    blob = json.dumps(params, sort_keys=True, default=str).encode()
    return hashlib.sha256(blob).hexdigest()[:12]


def _describe(params) -> dict:
    return asdict(params)


def run_method(method: str, noisy: np.ndarray, cell: Cell, owmf_params: Optional[OwmfParams] = None,
               trif_params=None):
    """Denoise ``noisy`` with ``method``; returns ``(output, params-dict)``."""
    if method == "owmf":
        params = owmf_params or default_owmf_params(cell)
        return owmf_denoise(noisy, cell.sigma, cell.p, params), _describe(params)
    if method == "owf":
        window = WindowSpec(6, cell.patch_radius, 2)
        return owf_denoise(noisy, cell.sigma, window), _describe(window)
    if method == "trif":
        params = trif_params or TrifParams.default_for(cell.sigma)
        return trif_denoise(noisy, params), _describe(params)
    if method == "noisy-baseline":
        return noisy, {}
    raise ValueError(f"unknown method {method!r}")


def run_cell(cell: Cell, clean: np.ndarray, seed: int, impulse_range=(0.0, 255.0),
             owmf_overrides: Optional[dict] = None, trif_sweep: bool = True) -> list[BenchRow]:
    spec = NoiseSpec(cell.sigma, cell.p, impulse_range[0], impulse_range[1], seed)
    noisy, _ = add_mixed(clean, spec)
    height, width = clean.shape
    rows = []
    for method in ("noisy-baseline",) + tuple(cell.methods):
        start = time.perf_counter()
        if method == "trif" and trif_sweep:
            best = None
            for tp in sweep_grid(cell.sigma):
                out, desc = run_method("trif", noisy, cell, trif_params=tp)
                value = mse_of(clean, out)
                if best is None or value < best[0]:
                    best = (value, desc)
            value, desc = best
        else:
            owmf_params = default_owmf_params(cell, **(owmf_overrides or {})) if method == "owmf" else None
            out, desc = run_method(method, noisy, cell, owmf_params=owmf_params)
            value = mse_of(clean, out)
        elapsed = time.perf_counter() - start
        psnr = psnr_from_mse(value)
        published = None
        key = (cell.image_id, cell.sigma, cell.p)
        if method in ("owmf", "owf"):
            published = corpus.PUBLISHED_OWMF.get(key)
        elif method == "trif":
            published = corpus.PUBLISHED_TRIF.get(key)
        rows.append(BenchRow(
            image_id=cell.image_id, width=width, height=height, noise=spec.to_dict(),
            method=method, params_digest=params_digest(desc),
            psnr_db=None if math.isinf(psnr) else psnr, mse=value,
            wall_seconds=elapsed, seed=seed, published_psnr_db=published, params=desc,
        ))
    return rows


def select_cells(suite: str, images=None, sigmas=None, ps=None, methods=None) -> list[Cell]:
    if suite == "all":
        cells = [c for name in ("gaussian", "impulse", "mixed") for c in SUITES[name]]
    elif suite in SUITES:
        cells = list(SUITES[suite])
    else:
        raise ValueError(f"unknown suite {suite!r}; choose from {sorted(SUITES)} or 'all'")
    if images:
        wanted = {i.lower() for i in images}
        cells = [c for c in cells if c.image_id in wanted]
    if sigmas is not None:
        cells = [c for c in cells if any(math.isclose(c.sigma, s) for s in sigmas)]
    if ps is not None:
        cells = [c for c in cells if any(math.isclose(c.p, p) for p in ps)]
    if methods:
        cells = [replace(c, methods=tuple(methods)) for c in cells]
    return cells


def _job(args):
    cell, path, seed, impulse_range, overrides, trif_sweep = args
    from .imagefile import read_image

    clean = read_image(path)
    return run_cell(cell, clean, seed, impulse_range, overrides, trif_sweep)


def run_bench(cells, corpus_directory=None, seed: int = 0, repeats: int = 1, threads: int = 1,
              impulse_range=(0.0, 255.0), owmf_overrides=None, trif_sweep: bool = True) -> BenchReport:
    """Run every cell ``repeats`` times with seeds ``seed, seed+1, ...``.

    Cells whose image is missing from the corpus are recorded in
    ``report.failures`` and skipped.
    """
    report = BenchReport()
    jobs = []
    for cell in cells:
        try:
            path = corpus.find_image(cell.image_id, corpus_directory)
        except FileNotFoundError as exc:
            log.warning("skipping %s: %s", cell, exc)
            report.failures.append({"image_id": cell.image_id, "sigma": cell.sigma, "p": cell.p, "error": str(exc)})
            continue
        for r in range(repeats):
            jobs.append((cell, str(path), seed + r, tuple(impulse_range), owmf_overrides, trif_sweep))
    if threads > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(_job, jobs))
    else:
        results = [_job(j) for j in jobs]
    for rows in results:
        report.rows.extend(rows)
    return report
