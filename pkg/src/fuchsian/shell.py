"""Command-line interface: validate | build | simulate | census | rates.

Exit codes: 0 success, 1 validation failure, 2 usage error, 3 numeric failure.
"""
from __future__ import annotations

import argparse
import json
import logging
import sys
from dataclasses import dataclass, field
from pathlib import Path

from . import __version__
from .awgnsim import ChannelConfig, reports_csv, run_trials
from .codec import PRESETS, ball_census, build_codebook, census_csv, expand_squared, load_group, metrics
from .errors import FuchsianError
from .quatalg import admissible_prime, cyclo_degree, cyclo_rate_bound, rate_lower_bound
from .svg import constellation_svg, domain_svg
from .takeuchi import LABELS, format_word, get_triple, validate, validate_csv

EXIT_OK, EXIT_VALIDATION, EXIT_USAGE, EXIT_NUMERIC = 0, 1, 2, 3

log = logging.getLogger("fuchsian")


@dataclass
class RunConfig:
    command: str
    groups: list = field(default_factory=list)
    preset: str = "four_nuf"
    tol: float = 1e-9
    budget: int = 5000
    radii: tuple = (1.0, 0.5)
    sigmas: tuple = (0.001,)
    trials: int = 1000
    seed: int = 0
    out_dir: Path | None = None

    def header(self, **extra) -> str:
        parts = [f"fuchsian {__version__}", f"command={self.command}", f"tol={self.tol:g}"]
        parts += [f"{k}={v}" for k, v in extra.items()]
        return "# " + " ".join(parts)


def _group_label(text: str) -> str:
    label = text.strip().upper()
    if label not in LABELS:
        raise argparse.ArgumentTypeError(f"unknown group {text!r} (choose from {', '.join(LABELS)})")
    return label


def _odd_prime(text: str) -> int:
    try:
        p = int(text)
        cyclo_degree(p)
    except ValueError:
        raise argparse.ArgumentTypeError(f"{text!r} is not an odd prime") from None
    return p


def _parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="fuchsian", description=__doc__.splitlines()[0])
    ap.add_argument("--version", action="version", version=f"fuchsian {__version__}")
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p, groups=True, many=False):
        if groups:
            p.add_argument("--group", type=_group_label, action="append" if many else "store",
                           required=not many, help="registry label T1..T7")
        p.add_argument("--tol", type=float, default=1e-9)
        p.add_argument("--out-dir", type=Path)

    common(sub.add_parser("validate", help="trace-triple and relation checks"), groups=False)
    p = sub.add_parser("build", help="domain, codebook and figures for one group")
    common(p)
    p.add_argument("--preset", choices=sorted(PRESETS), default="four_nuf")
    p = sub.add_parser("simulate", help="AWGN Monte-Carlo")
    common(p)
    p.add_argument("--preset", choices=sorted(PRESETS), default="four_nuf")
    p.add_argument("--sigma", type=float, action="append")
    p.add_argument("--trials", type=int, default=1000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--ml-fallback", action="store_true")
    p = sub.add_parser("census", help="codeword counts in origin-centered balls")
    common(p, many=True)
    p.add_argument("--budget", type=int, default=5000)
    p.add_argument("--radius", type=float, action="append")
    p.add_argument("--positive-products", action="store_true",
                   help="enumerate products of the generators only (no inverses)")
    p = sub.add_parser("rates", help="cyclotomic degree, rate bound and admissible prime")
    p.add_argument("primes", type=_odd_prime, nargs="+")
    p.add_argument("--out-dir", type=Path)
    return ap


def _emit(cfg: RunConfig, name: str, text: str):
    if cfg.out_dir is None:
        sys.stdout.write(text)
        return
    cfg.out_dir.mkdir(parents=True, exist_ok=True)
    (cfg.out_dir / name).write_text(text)
    log.info("wrote %s", cfg.out_dir / name)


def cmd_validate(cfg: RunConfig) -> int:
    rows, ok = validate(cfg.tol)
    _emit(cfg, "validate.csv", validate_csv(rows, cfg.header()))
    return EXIT_OK if ok else EXIT_VALIDATION


def cmd_build(cfg: RunConfig) -> int:
    label = cfg.groups[0]
    pres, dom = load_group(label)
    cb = build_codebook(label, cfg.preset)
    m = metrics(cb)
    ddict = dom.to_dict()
    ddict["meta"] = {"version": __version__, "group": label, "tol": cfg.tol}
    for w, wd in zip(dom.walls, ddict["walls"]):
        wd["word_text"] = format_word(expand_squared(w.word))
    cdict = cb.to_dict()
    cdict["meta"] = {"version": __version__, "preset": cfg.preset, "tol": cfg.tol,
                     "min_distance": m.min_distance, "avg_energy": m.avg_energy, "code_depth": m.code_depth}
    title = f"{label} {cfg.preset}"
    if cfg.out_dir is None:
        sys.stdout.write(json.dumps({"domain": ddict, "codebook": cdict}, indent=1) + "\n")
        return EXIT_OK
    _emit(cfg, f"domain_{label}.json", json.dumps(ddict, indent=1) + "\n")
    _emit(cfg, f"codebook_{label}_{cfg.preset}.json", json.dumps(cdict, indent=1) + "\n")
    _emit(cfg, f"{label}_{cfg.preset}_disk.svg", domain_svg(dom, cb, title=f"{title}, disk model"))
    _emit(cfg, f"{label}_{cfg.preset}_constellation.svg", constellation_svg(cb, title=f"{title}, half-plane"))
    print(f"{label}: {len(dom.walls)} walls, area {dom.area:.12g}, {len(cb)} codewords, "
          f"d_min {m.min_distance:.6g}, depth {m.code_depth}")
    return EXIT_OK


def cmd_simulate(cfg: RunConfig, workers: int = 1, ml_fallback: bool = False) -> int:
    label = cfg.groups[0]
    cb = build_codebook(label, cfg.preset)
    rows = []
    for s in cfg.sigmas:
        rep = run_trials(cb, ChannelConfig(s, cfg.seed, cfg.trials), ml_fallback=ml_fallback, workers=workers)
        rows.append(rep.row(label, cfg.preset))
    hdr = cfg.header(seed=cfg.seed, trials=cfg.trials, ml_fallback=ml_fallback,
                     noise="circular per-dimension sigma; snr=avg_energy/(2 sigma^2)")
    _emit(cfg, f"simulate_{label}_{cfg.preset}.csv", reports_csv(rows, hdr))
    return EXIT_OK


def _rate(label: str) -> int:
    return rate_lower_bound(1 if get_triple(label).d == 0 else 2)


def cmd_census(cfg: RunConfig, positive: bool = False) -> int:
    reports = [ball_census(g, cfg.budget, cfg.radii, inverses=not positive, tol=cfg.tol) for g in cfg.groups]
    hdr = cfg.header(budget=cfg.budget, mode="positive_products" if positive else "closure",
                     rates="/".join(f"{g}:{_rate(g)}" for g in cfg.groups))
    _emit(cfg, "census.csv", census_csv(reports, hdr))
    return EXIT_OK


def cmd_rates(cfg: RunConfig, primes) -> int:
    lines = [cfg.header(), "p,degree,rate_bound,admissible_prime"]
    for p in primes:
        q = admissible_prime(p) if p % 4 == 1 else "n/a"
        lines.append(f"{p},{cyclo_degree(p)},{cyclo_rate_bound(p)},{q}")
    _emit(cfg, "rates.csv", "\n".join(lines) + "\n")
    return EXIT_OK


def main(argv=None) -> int:
    ap = _parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        # argparse exits 0 for --help/--version and 2 for bad usage
        return EXIT_OK if not exc.code else EXIT_USAGE
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")
    groups = args.group if isinstance(getattr(args, "group", None), list) else [getattr(args, "group", None)]
    cfg = RunConfig(
        command=args.command,
        groups=[g for g in groups if g] or list(LABELS),
        preset=getattr(args, "preset", "four_nuf"),
        tol=getattr(args, "tol", 1e-9),
        budget=getattr(args, "budget", 5000),
        radii=tuple(getattr(args, "radius", None) or (1.0, 0.5)),
        sigmas=tuple(getattr(args, "sigma", None) or (0.001,)),
        trials=getattr(args, "trials", 1000),
        seed=getattr(args, "seed", 0),
        out_dir=args.out_dir,
    )
    try:
        if cfg.command == "validate":
            return cmd_validate(cfg)
        if cfg.command == "build":
            return cmd_build(cfg)
        if cfg.command == "simulate":
            return cmd_simulate(cfg, args.workers, args.ml_fallback)
        if cfg.command == "census":
            if cfg.budget < 6 or any(r <= 0 for r in cfg.radii):
                ap.print_usage(sys.stderr)
                print("fuchsian: budget must be >= 6 and radii positive", file=sys.stderr)
                return EXIT_USAGE
            return cmd_census(cfg, args.positive_products)
        if cfg.command == "rates":
            return cmd_rates(cfg, args.primes)
    except (FuchsianError, ArithmeticError) as exc:
        print(f"fuchsian: numeric failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except ValueError as exc:
        print(f"fuchsian: {exc}", file=sys.stderr)
        return EXIT_USAGE
    return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
