"""Finite-window Riesz evidence for several Heisenberg translate systems.

For each preset the extreme Gramian eigenvalues are scanned over a midpoint
lambda grid and doubling windows; the per-window CSV is plot-ready.
"""

import argparse
import sys
from dataclasses import dataclass, field
from pathlib import Path

from heisenberg_frames.cli import preset
from heisenberg_frames.gramian import riesz_scan


@dataclass
class ScanConfig:
    presets: list = field(default_factory=lambda: ["example33:p=3", "example33:p=5",
                                                    "prop34:bspline:n=3", "example35:n=2"])
    windows: list = field(default_factory=lambda: [(1, 1), (2, 2), (4, 4), (8, 8)])
    grid_size: int = 64
    eps: float = 1e-10
    out_dir: Path = Path("results")


def run(cfg: ScanConfig):
    cfg.out_dir.mkdir(parents=True, exist_ok=True)
    summary = []
    for name in cfg.presets:
        rep = riesz_scan(preset(name), cfg.windows, cfg.grid_size, cfg.eps)
        stem = name.replace(":", "_").replace("=", "")
        (cfg.out_dir / f"riesz_{stem}.csv").write_text(rep.to_csv())
        summary.append((name, rep.A_est, rep.B_est, rep.verdict))
    return summary


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--grid", type=int, default=64)
    ap.add_argument("--out-dir", type=Path, default=Path("results"))
    ap.add_argument("presets", nargs="*")
    a = ap.parse_args(argv)
    cfg = ScanConfig(grid_size=a.grid, out_dir=a.out_dir)
    if a.presets:
        cfg.presets = a.presets
    for name, lo, hi, verdict in run(cfg):
        print(f"{name:22s} A_est={lo:10.6f}  B_est={hi:10.6f}  {verdict}")


if __name__ == "__main__":
    sys.exit(main())
