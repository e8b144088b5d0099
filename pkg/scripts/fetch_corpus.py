"""Populate a corpus directory with the test images that ship inside public sdists.

Only Lena (bm3d examples, converted from RGB with BT.601 luma) and Barbara
(pyunlocbox tutorials) are obtainable this way; the other standard images
must be copied into the directory by hand as ``<name>.pgm`` or ``<name>.png``.

    python scripts/fetch_corpus.py [--dest DIR]

``DIR`` defaults to ``$OWMF_CORPUS`` or ``./corpus``.
"""

from __future__ import annotations

import argparse
import subprocess
import sys
import tarfile
import tempfile
from pathlib import Path

from owmf.corpus import corpus_dir
from owmf.imagefile import read_png, write_pgm

SOURCES = {
    "lena": ("bm3d==4.0.3", "bm3d-4.0.3/examples/image_Lena512rgb.png"),
    "barbara": ("pyunlocbox==0.6.1", "pyunlocbox-0.6.1/doc/tutorials/barbara.png"),
}


def fetch(dest: Path, workdir: Path) -> list[Path]:
    dest.mkdir(parents=True, exist_ok=True)
    written = []
    for name, (requirement, member) in SOURCES.items():
        target = dest / f"{name}.pgm"
        if target.exists():
            print(f"{target} exists, keeping it")
            written.append(target)
            continue
        subprocess.run(
            [sys.executable, "-m", "pip", "download", "--no-deps", "--no-binary", ":all:",
             "-d", str(workdir), requirement],
            check=True,
        )
        pkg = requirement.split("==")[0]
        archive = next(workdir.glob(f"{pkg}-*.tar.gz"))
        with tarfile.open(archive) as tar:
            data = tar.extractfile(member).read()
        png = workdir / f"{name}.png"
        png.write_bytes(data)
        img = read_png(png)
        write_pgm(target, img)
        print(f"wrote {target} {img.shape[1]}x{img.shape[0]}")
        written.append(target)
    return written


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--dest", default=None)
    args = ap.parse_args(argv)
    with tempfile.TemporaryDirectory() as tmp:
        fetch(corpus_dir(args.dest), Path(tmp))
    return 0


if __name__ == "__main__":
    sys.exit(main())
