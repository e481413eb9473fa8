"""Command line front end: ``ecstates {maya,extension,verify,uncertainty}``."""
from __future__ import annotations

import argparse
import csv
import json
import math
import re
import sys
from dataclasses import dataclass, field
from pathlib import Path

from .coherent import QuadratureConfig, annihilator_eigencheck, time_grid, uncertainty
from .hermite import normalized_pw
from .partition_maya import (
    MayaDiagram,
    Partition,
    bound_state_indices,
    dim_tableaux,
    hooklengths,
    is_krein_adler_regular,
    is_q_core,
    maya_from_partition,
    multi_flip,
    partition_from_maya,
    threshold_degree,
)
from .rational_ext import ladder, potential_display
from .verify import verify_partition

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class InputError(ValueError):
    pass


@dataclass
class CliConfig:
    command: str
    maya: MayaDiagram
    partition: Partition
    alphas: list = field(default_factory=list)
    times: list = field(default_factory=list)
    out: Path | None = None
    fmt: str = "text"
    quad: QuadratureConfig = QuadratureConfig()
    q: int | None = None
    expect_fail: bool = False


def parse_int_list(text: str, what: str) -> list[int]:
    text = text.strip()
    if not text:
        return []
    out = []
    pos = 0
    for tok in text.split(","):
        s = tok.strip()
        if not re.fullmatch(r"[+-]?\d+", s):
            raise InputError(f"{what}: cannot parse {tok!r} at position {pos}")
        out.append(int(s))
        pos += len(tok) + 1
    return out


def parse_partition(text: str) -> Partition:
    parts = parse_int_list(text, "partition")
    try:
        return Partition(tuple(parts))
    except ValueError as e:
        raise InputError(f"partition: {e}") from None


def parse_index_set(text: str) -> MayaDiagram:
    K = parse_int_list(text, "index set")
    if len(set(K)) != len(K):
        raise InputError(f"index set: repeated entries in {K}")
    return MayaDiagram.from_index_set(K)


_NUM = r"(?:\d+(?:\.\d*)?|\.\d+)(?:[eE][+-]?\d+)?"


def parse_time_value(text: str) -> float:
    """Numbers with an optional ``pi`` factor: ``0``, ``1.5``, ``pi``, ``2*pi``, ``pi/2``, ``3*pi/4``."""
    s = text.strip().replace(" ", "")
    m = re.fullmatch(rf"([+-]?)(?:({_NUM})\*?)?(pi)?(?:/({_NUM}))?", s)
    if not s or not m or (m.group(2) is None and m.group(3) is None):
        raise InputError(f"time value: cannot parse {text!r}")
    sign = -1.0 if m.group(1) == "-" else 1.0
    val = float(m.group(2)) if m.group(2) else 1.0
    if m.group(3):
        val *= math.pi
    if m.group(4):
        val /= float(m.group(4))
    return sign * val


def parse_time_grid(text: str) -> list[float]:
    pieces = text.split(":")
    if len(pieces) != 3:
        raise InputError(f"time grid must be start:stop:count, got {text!r}")
    start, stop = parse_time_value(pieces[0]), parse_time_value(pieces[1])
    try:
        count = int(pieces[2])
    except ValueError:
        raise InputError(f"time grid count must be an integer, got {pieces[2]!r}") from None
    if count < 2:
        raise InputError("time grid count must be >= 2")
    return [float(t) for t in time_grid(start, stop, count)]


def parse_alphas(text: str) -> list[float]:
    out = []
    for tok in text.split(","):
        try:
            a = float(tok)
        except ValueError:
            raise InputError(f"alpha: cannot parse {tok!r}") from None
        if not a > 0:
            raise InputError(f"alpha must be positive, got {a}")
        out.append(a)
    return out


def resolve_diagram(args) -> tuple[MayaDiagram, Partition]:
    if (args.partition is None) == (args.index_set is None):
        raise InputError("give exactly one of --partition / --index-set")
    if args.partition is not None:
        lam = parse_partition(args.partition)
        return maya_from_partition(lam), lam
    M = parse_index_set(args.index_set)
    return M, partition_from_maya(M)


def config_from_args(args) -> CliConfig:
    M, lam = resolve_diagram(args)
    cfg = CliConfig(args.command, M, lam, fmt=args.format)
    if args.command == "uncertainty":
        cfg.alphas = parse_alphas(args.alpha)
        cfg.times = parse_time_grid(args.t)
        cfg.out = Path(args.out) if args.out else Path(".")
        cfg.quad = QuadratureConfig(half_width=args.quad_halfwidth, tol=args.quad_tol)
    if args.command == "verify":
        cfg.q, cfg.expect_fail = args.q, args.expect_fail
        if cfg.expect_fail and cfg.q is None:
            raise InputError("--expect-fail needs --q")
    return cfg


# -- reports ---------------------------------------------------------------


def maya_report(M: MayaDiagram, lam: Partition) -> dict:
    qc = threshold_degree(lam)
    crit = [q for q in range(1, qc + 5) if is_q_core(M, q)]
    return {
        "partition": lam.to_json(),
        "maya": M.to_json(),
        "sigma": M.index,
        "index_set": list(M.index_set()),
        "dim_tableaux": dim_tableaux(lam),
        "hooklengths": [[i, j, h] for (i, j), h in sorted(hooklengths(lam).items())],
        "threshold_degree": qc,
        "critical_degrees": crit,
        "regular": is_krein_adler_regular(M),
    }


def extension_report(M: MayaDiagram, lam: Partition) -> dict:
    qc = threshold_degree(lam)
    bound = bound_state_indices(M, 6)
    ann = {}
    for q in range(max(qc, 1), qc + 4):
        if is_q_core(M, q):
            ann[str(q)] = ladder(M, q).order
    return {
        "partition": lam.to_json(),
        "index_set": list(M.index_set()),
        "sigma": M.index,
        "regular": is_krein_adler_regular(M),
        "potential": potential_display(M),
        "H_hat": normalized_pw(M).render(),
        "bound_states": bound,
        "exceptional": {str(m): normalized_pw(multi_flip(M, [m])).render() for m in bound},
        "annihilator_orders": ann,
    }


def _emit(report: dict, fmt: str, out):
    if fmt == "json":
        out.write(json.dumps(report, indent=2, sort_keys=False) + "\n")
        return
    for k, v in report.items():
        if isinstance(v, dict):
            out.write(f"{k}:\n")
            for kk, vv in v.items():
                out.write(f"  {kk}: {vv}\n")
        else:
            out.write(f"{k}: {v}\n")


def cmd_maya(cfg: CliConfig, args, out) -> int:
    _emit(maya_report(cfg.maya, cfg.partition), cfg.fmt, out)
    return EXIT_OK


def cmd_extension(cfg: CliConfig, args, out) -> int:
    M, lam = cfg.maya, cfg.partition
    if not is_krein_adler_regular(M):
        print(f"warning: {M} is not Krein-Adler regular; U_M has real poles", file=sys.stderr)
    rep = extension_report(M, lam)
    if cfg.fmt == "text" and not args.verbose:
        out.write(rep["potential"] + "\n")
        return EXIT_OK
    _emit(rep, cfg.fmt, out)
    return EXIT_OK


def cmd_verify(cfg: CliConfig, args, out) -> int:
    M, lam = cfg.maya, cfg.partition
    if cfg.expect_fail:
        res = annihilator_eigencheck(lam, cfg.q, M.index)
        ok = not res.ok
        summary = {
            "partition": lam.to_json(),
            "q": cfg.q,
            "expect_fail": True,
            "ok": ok,
            "checks": [res.to_json()],
        }
    else:
        results = verify_partition(lam, cfg.q)
        ok = all(r.ok for r in results)
        summary = {
            "partition": lam.to_json(),
            "q": cfg.q,
            "expect_fail": False,
            "ok": ok,
            "checks": [r.to_json() for r in results],
        }
    if cfg.fmt == "json":
        out.write(json.dumps(summary, indent=2) + "\n")
    else:
        for c in summary["checks"]:
            tag = "PASS" if c["ok"] else ("FAIL (expected)" if cfg.expect_fail else "FAIL")
            out.write(f"{tag}  {c['name']}  {c.get('detail', '')}".rstrip() + "\n")
        out.write(f"overall: {'PASS' if ok else 'FAIL'}\n")
    return EXIT_OK if ok else EXIT_FAIL


def format_float(v: float) -> str:
    return format(v, ".17g")


def csv_name(lam: Partition, alpha: float) -> str:
    tag = "-".join(map(str, lam.parts)) or "empty"
    return f"uncertainty_lambda-{tag}_alpha-{format(alpha, 'g')}.csv"


def write_csv(report, path: Path):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["t", "var_x", "var_p", "product", "alpha", "lambda"])
        for t, vx, vp, pr, a, lam in report.rows():
            w.writerow([format_float(t), format_float(vx), format_float(vp), format_float(pr), format_float(a), lam])


def cmd_uncertainty(cfg: CliConfig, args, out) -> int:
    M, lam = cfg.maya, cfg.partition
    if not is_krein_adler_regular(M):
        print(
            f"error: {M} is not Krein-Adler regular (an odd block of members); "
            "the potential is singular on the real line and the integrals diverge",
            file=sys.stderr,
        )
        return EXIT_USAGE
    outdir = cfg.out
    outdir.mkdir(parents=True, exist_ok=True)
    summary = []
    for a in cfg.alphas:
        rep = uncertainty(lam, a, cfg.times, cfg.quad, sigma=M.index)
        path = outdir / csv_name(lam, a)
        write_csv(rep, path)
        summary.append(
            {
                "alpha": a,
                "file": str(path),
                "min_product": min(rep.product),
                "max_deviation": rep.max_deviation(),
            }
        )
    if cfg.fmt == "json":
        out.write(json.dumps(summary, indent=2) + "\n")
    else:
        for s in summary:
            out.write(
                f"alpha={format(s['alpha'], 'g')} min_product={format_float(s['min_product'])} "
                f"max_dev={format_float(s['max_deviation'])} -> {s['file']}\n"
            )
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="ecstates", description=__doc__)
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, formats=("text", "json")):
        sp.add_argument("--partition", help="comma separated parts, e.g. 2,2 (empty string for the trivial one)")
        sp.add_argument("--index-set", dest="index_set", help="comma separated integers, negatives allowed")
        sp.add_argument("--format", choices=formats, default=formats[0])

    sp = sub.add_parser("maya", help="Maya diagram / partition combinatorics")
    common(sp)
    sp.set_defaults(func=cmd_maya)

    sp = sub.add_parser("extension", help="rational extension: potential, exceptional polynomials")
    common(sp)
    sp.add_argument("-v", "--verbose", action="store_true", help="full report instead of the potential only")
    sp.set_defaults(func=cmd_extension)

    sp = sub.add_parser("verify", help="run the exact identity checks")
    common(sp)
    sp.add_argument("--q", type=int, default=None, help="extra annihilator degree to check")
    sp.add_argument("--expect-fail", dest="expect_fail", action="store_true", help="the --q check must fail")
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("uncertainty", help="uncertainty products of the coherent states as CSV")
    common(sp, formats=("text", "json", "csv"))
    sp.add_argument("--alpha", default="2", help="comma separated positive amplitudes")
    sp.add_argument("--t", default="0:pi:201", help="start:stop:count, pi allowed")
    sp.add_argument("--out", default=None, help="output directory for the CSV files")
    sp.add_argument("--quad-tol", dest="quad_tol", type=float, default=1e-10)
    sp.add_argument("--quad-halfwidth", dest="quad_halfwidth", type=float, default=None)
    sp.set_defaults(func=cmd_uncertainty)
    return p


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(config_from_args(args), args, out)
    except InputError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
