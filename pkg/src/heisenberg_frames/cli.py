"""Command-line entry point.

Exit codes: 0 success, 1 a verification command found a violated invariant,
2 invalid input.
"""

from __future__ import annotations

import argparse
import json
import re
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

from . import analysis, bspline, gramian, moment
from .heisenberg import SeparableGenerator
from .piecewise_poly import PiecewisePolynomial
from .profiles import FrequencyIndicator

COMMANDS = ("bspline", "riesz-classical", "gramian", "riesz-heisenberg",
            "frame-check", "margin", "oblique-dual", "verify-dual")

BIORTH_TOL = 1e-10
RECON_TOL = 1e-8

CSV_HELP = {
    "bspline": "t, value",
    "riesz-classical": "lambda, phi_value",
    "gramian": "lambda, window_size, min_eig, max_eig",
    "riesz-heisenberg": "lambda, window_size, min_eig, max_eig",
    "frame-check": "ratio",
    "margin": "lambda, A_p, margin (with --scan)",
    "oblique-dual": "k, l, m, d",
    "verify-dual": "k, l, m, inner_product",
}


class ConfigError(ValueError):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise ConfigError(message)


def preset(name: str) -> SeparableGenerator:
    """Named generators: ``example33:p=P``, ``prop34:bspline:n=N``,
    ``prop34:freq:p=P``, ``example35:n=N`` and ``example43``."""
    c2 = PiecewisePolynomial.indicator(0, 2)
    c1 = PiecewisePolynomial.indicator(0, 1)
    m = re.fullmatch(r"example33:p=(\d+)", name)
    if m:
        return SeparableGenerator(c2, c2, FrequencyIndicator(int(m.group(1))))
    m = re.fullmatch(r"(?:prop34:bspline|example35):n=(\d+)", name)
    if m:
        return SeparableGenerator(c2, c1, bspline.bspline_profile(int(m.group(1))))
    m = re.fullmatch(r"prop34:freq:p=(\d+)", name)
    if m:
        return SeparableGenerator(c2, c1, FrequencyIndicator(int(m.group(1))))
    if name == "example43":
        return SeparableGenerator(c2, c1, bspline.bspline_profile(3))
    raise ConfigError(f"unknown preset {name!r}")


def _profile(text: str):
    m = re.fullmatch(r"bspline:n=(\d+)", text)
    if m:
        return bspline.bspline_profile(int(m.group(1)))
    m = re.fullmatch(r"freq:p=(\d+)", text)
    if m:
        return FrequencyIndicator(int(m.group(1)))
    raise ConfigError(f"unknown profile {text!r}")


@dataclass
class RunConfig:
    command: str
    generator: Optional[SeparableGenerator] = None
    profile: object = None
    lam: Optional[float] = None
    grid_size: int = 512
    eps: float = 1e-10
    window: tuple = (4, 4)
    trials: int = 20
    seed: int = 0
    p: int = 3
    n: int = 3
    scan: bool = False
    method: str = "symbol"
    out: Optional[str] = None
    format: str = "json"
    extras: dict = field(default_factory=dict)


def _build_parser() -> _Parser:
    parser = _Parser(prog="heisenberg-frames",
                     description="Gramians, Riesz bounds and oblique duals for "
                                 "left translates on the Heisenberg group.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    for cmd in COMMANDS:
        sp = sub.add_parser(cmd, help=f"CSV columns: {CSV_HELP[cmd]}",
                            description=f"CSV columns: {CSV_HELP[cmd]}")
        sp.add_argument("--preset")
        sp.add_argument("--generator", "--phi", dest="generator", metavar="FILE")
        sp.add_argument("--profile", help="bspline:n=N or freq:p=P")
        sp.add_argument("--lambda", dest="lam", type=float)
        sp.add_argument("--grid", type=int, default=None)
        sp.add_argument("--eps", type=float, default=1e-10)
        sp.add_argument("--window", default=None, help="KxL")
        sp.add_argument("--p", type=int, default=3)
        sp.add_argument("--n", type=int, default=3)
        sp.add_argument("--trials", type=int, default=20)
        sp.add_argument("--seed", type=int, default=0)
        sp.add_argument("--scan", action="store_true")
        sp.add_argument("--method", choices=("symbol", "direct"), default="symbol")
        sp.add_argument("--out")
        sp.add_argument("--format", choices=("json", "csv"), default="json")
    return parser


def parse_config(args) -> RunConfig:
    """Validate arguments into a :class:`RunConfig`; raises :class:`ConfigError`."""
    ns = _build_parser().parse_args(list(args))
    cfg = RunConfig(command=ns.command, eps=ns.eps, trials=ns.trials, seed=ns.seed,
                    p=ns.p, n=ns.n, scan=ns.scan, method=ns.method, out=ns.out,
                    format=ns.format, lam=ns.lam)
    if ns.eps <= 0:
        raise ConfigError("--eps must be positive")
    if ns.trials < 1:
        raise ConfigError("--trials must be positive")
    if ns.p < 1 or ns.n < 1:
        raise ConfigError("--p and --n must be positive")
    if ns.command == "margin" and ns.p < 3 and not ns.scan:
        raise ConfigError("margin needs --p >= 3")
    if ns.grid is not None:
        if ns.grid < 2:
            raise ConfigError("--grid must be at least 2")
        cfg.grid_size = ns.grid
    elif ns.command in ("gramian", "riesz-heisenberg", "frame-check"):
        cfg.grid_size = {"riesz-heisenberg": 64, "frame-check": 8}.get(ns.command, 512)
    if ns.window is not None:
        try:
            cfg.window = gramian.parse_window(ns.window)
        except ValueError:
            raise ConfigError(f"bad --window {ns.window!r}, expected KxL") from None
    if ns.lam is not None and not 0 < ns.lam <= 1:
        raise ConfigError("--lambda must lie in (0, 1]")
    if ns.command == "gramian" and ns.lam is None:
        raise ConfigError("gramian needs --lambda")
    if ns.preset and ns.generator:
        raise ConfigError("give either --preset or --generator, not both")
    if ns.preset:
        cfg.generator = preset(ns.preset)
    elif ns.generator:
        try:
            cfg.generator = SeparableGenerator.from_json(json.loads(Path(ns.generator).read_text()))
        except (OSError, ValueError, KeyError, TypeError) as exc:
            raise ConfigError(f"cannot read generator {ns.generator}: {exc}") from None
    if ns.profile:
        cfg.profile = _profile(ns.profile)
    needs_gen = ("gramian", "riesz-heisenberg", "frame-check", "oblique-dual", "verify-dual")
    if ns.command in needs_gen and cfg.generator is None:
        if ns.command in ("oblique-dual", "verify-dual"):
            cfg.generator = preset("example43")
        else:
            raise ConfigError(f"{ns.command} needs --preset or --generator")
    if ns.command == "riesz-classical" and cfg.profile is None:
        cfg.profile = (cfg.generator.t_part if cfg.generator
                       else bspline.bspline_profile(ns.n))
    if ns.command in ("oblique-dual", "verify-dual"):
        try:
            moment.support_box(cfg.generator)
        except (TypeError, ValueError) as exc:
            raise ConfigError(str(exc)) from None
    return cfg


def _windows_up_to(K: int, L: int) -> list:
    out, s = [], 1
    while True:
        w = (min(s, K), min(s, L))
        if not out or w != out[-1]:
            out.append(w)
        if w == (K, L):
            return out
        s *= 2


def _dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


def _frac(x) -> str:
    from fractions import Fraction
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


def _run(cfg: RunConfig) -> tuple[str, int]:
    cmd = cfg.command
    if cmd == "bspline":
        b = bspline.bspline(cfg.n)
        if cfg.format == "csv":
            pts = cfg.grid_size
            rows = ["t,value"]
            for i in range(pts + 1):
                t = cfg.n * i / pts
                rows.append(f"{t!r},{float(b(t))!r}")
            return "\n".join(rows) + "\n", 0
        return _dumps({"n": cfg.n, "bspline": b.to_json(), "status": "exact"}), 0

    if cmd == "riesz-classical":
        rep = bspline.riesz_bounds_classical(cfg.profile, cfg.grid_size, cfg.eps, cfg.method)
        if cfg.format == "csv":
            return rep.to_csv(), 0
        return _dumps(json.loads(rep.to_json())), 0

    if cmd == "gramian":
        G = gramian.assemble_gramian(cfg.generator, cfg.window, cfg.lam, cfg.eps)
        lo, hi = gramian.eig_bounds(G)
        K, L = cfg.window
        if cfg.format == "csv":
            return f"lambda,window_size,min_eig,max_eig\n{cfg.lam!r},{K}x{L},{lo!r},{hi!r}\n", 0
        out = G.to_json()
        out.update(min_eig=lo, max_eig=hi, generator=cfg.generator.to_json(),
                   status={"entries": "estimated" if G.tail_bound else "exact-sum",
                           "min_eig": "estimated", "max_eig": "estimated"})
        return _dumps(out), 0

    if cmd == "riesz-heisenberg":
        rep = gramian.riesz_scan(cfg.generator, _windows_up_to(*cfg.window),
                                 cfg.grid_size, cfg.eps)
        if cfg.format == "csv":
            return rep.to_csv(), 0
        return _dumps(json.loads(rep.to_json())), 0

    if cmd == "frame-check":
        grid = bspline.midpoint_grid(cfg.grid_size)
        rep = gramian.frame_check(cfg.generator, cfg.window, grid, cfg.trials, cfg.eps, cfg.seed)
        if cfg.format == "csv":
            return "ratio\n" + "".join(f"{r!r}\n" for r in rep.ratios), 0
        return _dumps(json.loads(rep.to_json())), 0

    if cmd == "margin":
        if cfg.scan:
            return analysis.margin_scan(cfg.p), 0
        res = analysis.margin_min(cfg.p)
        out = json.loads(res.to_json())
        out["status"] = {"lambda0": "estimated", "margin": "estimated", "curvature": "estimated"}
        return _dumps(out), 0

    # oblique-dual / verify-dual
    phi = cfg.generator
    dual = moment.oblique_dual(phi)
    rep = moment.verify_biorthogonality(phi, dual)
    tag = "exact" if dual.exact else "estimated"
    if cmd == "oblique-dual":
        if cfg.format == "csv":
            rows = ["k,l,m,d"] + [f"{i.k},{i.l},{i.m},{_frac(d) if dual.exact else repr(float(d))}"
                                  for i, d in dual.coefficients.items()]
            return "\n".join(rows) + "\n", 0
        out = {
            "coefficients": [{"k": i.k, "l": i.l, "m": i.m,
                              "d": _frac(d) if dual.exact else float(d)}
                             for i, d in dual.coefficients.items()],
            "dual_t_poly": dual.t_poly.to_json() if dual.dual is not None else None,
            "biorthogonality_max_dev": rep.max_deviation,
            "status": {"coefficients": tag, "dual_t_poly": tag,
                       "biorthogonality_max_dev": "exact" if rep.exact else "estimated"},
        }
        return _dumps(out), 0
    # verify-dual
    import numpy as np
    rng = np.random.default_rng(cfg.seed)
    support = [moment.TranslateIndex(k, l, m) for k in (-1, 0, 1)
               for l in (-1, 0, 1) for m in (-1, 0, 1)]
    cache = moment.reconstruction_matrix(phi, dual, support)
    residuals = [moment.verify_reconstruction(phi, dual, dict(zip(support, rng.standard_normal(27))), cache)
                 for _ in range(cfg.trials)]
    ok = rep.max_deviation <= BIORTH_TOL and max(residuals) <= RECON_TOL
    if cfg.format == "csv":
        rows = ["k,l,m,inner_product"]
        for key, val in rep.values.items():
            k, l, m = key.strip("()").split(",")
            rows.append(f"{k},{l},{m},{float(val)!r}")
        return "\n".join(rows) + "\n", 0 if ok else 1
    out = {"biorthogonality_max_dev": rep.max_deviation,
           "reconstruction_max_residual": max(residuals),
           "passed": ok,
           "status": {"biorthogonality_max_dev": "exact" if rep.exact else "estimated",
                      "reconstruction_max_residual": "estimated"}}
    return _dumps(out), 0 if ok else 1


def execute(cfg: RunConfig) -> int:
    try:
        text, code = _run(cfg)
    except (ValueError, TypeError, RuntimeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    if cfg.out:
        Path(cfg.out).write_text(text)
    else:
        sys.stdout.write(text)
    return code


def main(argv=None) -> int:
    try:
        cfg = parse_config(sys.argv[1:] if argv is None else argv)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    return execute(cfg)


if __name__ == "__main__":
    sys.exit(main())
