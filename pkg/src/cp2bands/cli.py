"""Command-line driver.

Usage:
    cp2bands spectrum   [--config PATH] [--n N] [--lambda L ...] [--out DIR]
    cp2bands verify     [--config PATH] [--n N] [--out DIR]
    cp2bands chern      [--config PATH] --lambda L --bands 1,2 [--out DIR]
    cp2bands degeneracy [--config PATH] [--pair 2,3] [--out DIR]
    cp2bands symmetry   [--config PATH] [--n N] [--out DIR]

Every command writes its files into the output directory and prints the
path of the main output. ``verify`` exits with status 1 when any predicted
band count disagrees with the diagonalization; module failures in ``chern``
and ``degeneracy`` are written as ``{"error": {"code", "message"}}`` and exit
with status 2.
"""

from __future__ import annotations

import argparse
import csv
import json
import logging
import sys
from dataclasses import replace
from pathlib import Path

from . import __version__
from .chern import chern_report
from .config import SCHEMA_VERSION, RunConfig, dump_config, load_config
from .errors import CP2BandsError
from .index import predicted_count
from .quantum import auto_gap_factor, band_spectrum, sweep
from .symbol import degeneracy_lambda_window, min_gap_over_phase_space
from .symmetry import BANDS, band_o3_content, band_td_content, format_o3, format_td, multiset_dimension

log = logging.getLogger("cp2bands")

VERIFY_SETUPS = (
    (0.2, (("T1", (1,)), ("T2", (2,)), ("T3", (3,)))),
    (0.9, (("Orth", (1, 2)), ("Line", (3,)))),
)


def _write_json(path: Path, payload: dict) -> None:
    path.write_text(json.dumps(payload, indent=2) + "\n")


def _error_payload(exc: CP2BandsError) -> dict:
    return {"code": exc.code, "message": str(exc)}


def _gap_factor(cfg: RunConfig) -> float:
    return cfg.gap_factor if cfg.gap_factor is not None else auto_gap_factor(cfg.N)


def cmd_spectrum(cfg: RunConfig) -> int:
    out = Path(cfg.out)
    out.mkdir(parents=True, exist_ok=True)
    gf = _gap_factor(cfg)
    records = sweep(cfg.N, cfg.lambda_grid(), gf)
    with open(out / "spectrum.csv", "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["lambda", "level_index", "energy"])
        for rec in records:
            for k, e in enumerate(rec.energies):
                w.writerow([repr(rec.lam), k, repr(float(e))])
    _write_json(
        out / "bands.json",
        {
            "schema_version": SCHEMA_VERSION,
            "N": cfg.N,
            "gap_factor": gf,
            "records": [
                {"lambda": r.lam, "counts": r.counts, "ambiguous": r.ambiguous} for r in records
            ],
        },
    )
    print(out / "spectrum.csv")
    return 0


def cmd_verify(cfg: RunConfig) -> int:
    out = Path(cfg.out)
    out.mkdir(parents=True, exist_ok=True)
    ccfg = cfg.chern()
    groups, errors = [], []
    ok = True
    for lam, bands in VERIFY_SETUPS:
        observed = band_spectrum(cfg.N, lam, _gap_factor(cfg)).counts
        if len(observed) != len(bands):
            log.warning("lambda=%s: %d clusters for %d band groups", lam, len(observed), len(bands))
            observed = [None] * len(bands)
        records = []
        for (name, sel), obs in zip(bands, observed):
            log.info("lambda=%s band %s: computing Chern class", lam, name)
            try:
                c = chern_report(lam, sel, ccfg).chern
            except CP2BandsError as exc:
                errors.append({"lambda": lam, "band": name, **_error_payload(exc)})
                records.append(
                    {"band": name, "r": len(sel), "A": None, "B": None,
                     "predicted": None, "observed": obs, "match": False}
                )
                ok = False
                continue
            pred = predicted_count(c, cfg.N)
            match = obs is not None and pred == obs
            ok &= match
            records.append(
                {"band": name, "r": c.r, "A": c.A, "B": c.B,
                 "predicted": pred, "observed": obs, "match": match}
            )
        groups.append({"lambda": lam, "records": records})
    _write_json(
        out / "verify.json",
        {"schema_version": SCHEMA_VERSION, "N": cfg.N, "groups": groups, "errors": errors, "ok": ok},
    )
    print(out / "verify.json")
    return 0 if ok else 1


def cmd_chern(cfg: RunConfig, lam: float, bands: tuple[int, ...]) -> int:
    out = Path(cfg.out)
    out.mkdir(parents=True, exist_ok=True)
    ccfg = cfg.chern()
    payload = {"schema_version": SCHEMA_VERSION, "lambda": lam, "bands": list(bands)}
    status = 0
    try:
        rep = chern_report(lam, bands, ccfg)
    except CP2BandsError as exc:
        payload["error"] = _error_payload(exc)
        status = 2
    else:
        payload.update(
            {
                "r": rep.chern.r,
                "A_raw": rep.c1_line.raw,
                "A": rep.chern.A,
                "A_plaquette_raw": rep.c1_plaquette.raw,
                "ch2_raw": rep.ch2.raw,
                "ch2": rep.ch2.rounded,
                "B_raw": rep.B_raw,
                "B": rep.chern.B,
                "residuals": {"A": rep.c1_line.residual, "ch2": rep.ch2.residual},
                "grids": {"line": list(rep.c1_line.grid), "volume": list(rep.ch2.grid)},
            }
        )
    _write_json(out / "chern.json", payload)
    print(out / "chern.json")
    return status


def cmd_degeneracy(cfg: RunConfig, pair: tuple[int, int]) -> int:
    out = Path(cfg.out)
    out.mkdir(parents=True, exist_ok=True)
    search = cfg.search()
    windows = degeneracy_lambda_window(pair, cfg.gap_tol, cfg.degeneracy_resolution, search)
    samples = []
    for lo, hi in windows:
        for lam in sorted({lo, 0.5 * (lo + hi), hi}):
            m = min_gap_over_phase_space(lam, pair, search)
            samples.append(
                {"lambda": lam, "gap": m.gap, "z": [[float(c.real), float(c.imag)] for c in m.argmin.z]}
            )
    _write_json(
        out / "degeneracy.json",
        {
            "schema_version": SCHEMA_VERSION,
            "pair": list(pair),
            "tol": cfg.gap_tol,
            "resolution": cfg.degeneracy_resolution,
            "windows": [list(w) for w in windows],
            "samples": samples,
        },
    )
    print(out / "degeneracy.json")
    return 0


def symmetry_table(N: int) -> dict:
    table = {}
    for band in BANDS:
        td = band_td_content(band, N)
        o3 = band_o3_content(band, N)
        table[band] = {
            "td": format_td(td),
            "td_multiplicities": td,
            "o3": format_o3(o3),
            "dimension": multiset_dimension(td),
        }
    return table


def cmd_symmetry(cfg: RunConfig) -> int:
    out = Path(cfg.out)
    out.mkdir(parents=True, exist_ok=True)
    _write_json(
        out / "symmetry.json",
        {"schema_version": SCHEMA_VERSION, "N": cfg.N, "bands": symmetry_table(cfg.N)},
    )
    print(out / "symmetry.json")
    return 0


def _int_tuple(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(x) for x in text.replace(" ", "").split(",") if x)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cp2bands",
        description="Band topology of a three-level system coupled to a 1:1:1 oscillator polyad.",
    )
    parser.add_argument("--version", action="version", version=__version__)
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--config", help="flat JSON config file")
        p.add_argument("--out", help="output directory")
        p.add_argument("--n", type=int, help="polyad quantum number")
        p.add_argument("--dump-config", action="store_true", help="also write the effective config.json")

    p = sub.add_parser("spectrum", help="diagonalize across a lambda grid")
    common(p)
    p.add_argument("--lambda", dest="lam", type=float, nargs="+", help="explicit lambda values")

    p = sub.add_parser("verify", help="compare index-formula counts with the quantum spectrum")
    common(p)

    p = sub.add_parser("chern", help="Chern class of one band group")
    common(p)
    p.add_argument("--lambda", dest="lam", type=float, required=True)
    p.add_argument("--bands", type=_int_tuple, required=True, help="e.g. 3 or 1,2")

    p = sub.add_parser("degeneracy", help="lambda window where two consecutive bands touch")
    common(p)
    p.add_argument("--pair", type=_int_tuple, default=(2, 3), help="1,2 or 2,3")

    p = sub.add_parser("symmetry", help="O(3) and T_d content of both bands")
    common(p)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")
    try:
        cfg = load_config(args.config)
        overrides = {}
        if args.n is not None:
            overrides["N"] = args.n
        if args.out is not None:
            overrides["out"] = args.out
        if args.command == "spectrum" and args.lam:
            overrides["lambdas"] = args.lam
        if overrides:
            cfg = replace(cfg, **overrides)
    except CP2BandsError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    if args.dump_config:
        Path(cfg.out).mkdir(parents=True, exist_ok=True)
        dump_config(cfg, Path(cfg.out) / "config.json")

    if args.command == "spectrum":
        return cmd_spectrum(cfg)
    if args.command == "verify":
        return cmd_verify(cfg)
    if args.command == "chern":
        return cmd_chern(cfg, args.lam, args.bands)
    if args.command == "degeneracy":
        if len(args.pair) != 2:
            print("--pair needs two indices", file=sys.stderr)
            return 2
        return cmd_degeneracy(cfg, args.pair)
    return cmd_symmetry(cfg)


if __name__ == "__main__":
    sys.exit(main())
