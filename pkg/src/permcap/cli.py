"""Command-line interface.

Subcommands expose the library computations and emit machine-readable
records.  JSON is the canonical format (floats at 17 significant digits, so
output is byte-identical across runs with the same flags and round-trips to
the same doubles); CSV and a human-readable table are also available.

Exit codes: 0 success, 2 usage error, 3 input parse error, 4 numeric failure.
"""

from __future__ import annotations

import argparse
import math
import sys
from dataclasses import dataclass, field

import numpy as np

from . import capfun, discrepancy, families, sampling, volumes
from .geometry import CenteredConfiguration, center_project

USAGE_EXIT = 2
PARSE_EXIT = 3
NUMERIC_EXIT = 4


@dataclass
class OutputRecord:
    command: str
    params: dict
    results: dict
    table: list[dict] = field(default_factory=list)


def _fmt(x, digits: int) -> str:
    if isinstance(x, bool):
        return "true" if x else "false"
    if x is None:
        return "null"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if isinstance(x, (float, np.floating)):
        x = float(x)
        if math.isnan(x):
            return '"nan"'
        if math.isinf(x):
            return '"inf"' if x > 0 else '"-inf"'
        return format(x, f".{digits}g")
    if isinstance(x, str):
        return '"' + x.replace("\\", "\\\\").replace('"', '\\"') + '"'
    if isinstance(x, (list, tuple, np.ndarray)):
        return "[" + ", ".join(_fmt(v, digits) for v in x) + "]"
    if isinstance(x, dict):
        inner = ", ".join(f'"{k}": {_fmt(v, digits)}' for k, v in x.items())
        return "{" + inner + "}"
    raise TypeError(f"cannot serialize {type(x)!r}")


def to_json(rec: OutputRecord, digits: int = 17) -> str:
    body = {
        "command": rec.command,
        "params": rec.params,
        "results": rec.results,
    }
    if rec.table:
        body["table"] = rec.table
    return _fmt(body, digits)


def _csv_cell(v) -> str:
    s = _fmt(v, 17).strip('"')
    if "," in s or '"' in s:
        s = '"' + s.replace('"', '""') + '"'
    return s


def to_csv(rec: OutputRecord) -> str:
    rows = rec.table if rec.table else [rec.results]
    keys = list(rows[0].keys())
    out = [",".join(keys)]
    for row in rows:
        out.append(",".join(_csv_cell(row.get(k)) for k in keys))
    return "\n".join(out)


def to_human(rec: OutputRecord) -> str:
    lines = [f"# {rec.command}"]
    for k, v in rec.params.items():
        lines.append(f"  {k} = {_fmt(v, 6)}")
    lines.append("")
    for k, v in rec.results.items():
        lines.append(f"  {k}: {_fmt(v, 6)}")
    if rec.table:
        keys = list(rec.table[0].keys())
        lines.append("")
        lines.append("  " + "  ".join(f"{k:>12}" for k in keys))
        for row in rec.table:
            lines.append("  " + "  ".join(f"{_fmt(row.get(k), 6):>12}" for k in keys))
    return "\n".join(lines)


def emit(rec: OutputRecord, fmt: str) -> None:
    if fmt == "json":
        sys.stdout.write(to_json(rec) + "\n")
    elif fmt == "csv":
        sys.stdout.write(to_csv(rec) + "\n")
    else:
        sys.stdout.write(to_human(rec) + "\n")


def _mc_dict(est: sampling.McEstimate) -> dict:
    return {"value": est.value, "std_error": est.std_error, "n": est.n, "seed": est.seed}


def read_configuration(path: str) -> CenteredConfiguration:
    """Parse a configuration file: one real per line, or one comma-separated
    line.  The vector is centered and sorted, with a warning when the input
    was not already."""
    values: list[float] = []
    try:
        with open(path) as fh:
            lines = [ln.strip() for ln in fh]
    except OSError as e:
        raise FileParseError(str(e), 0) from e
    data_lines = [(i + 1, ln) for i, ln in enumerate(lines) if ln and not ln.startswith("#")]
    if len(data_lines) == 1 and "," in data_lines[0][1]:
        lineno, ln = data_lines[0]
        for piece in ln.split(","):
            try:
                values.append(float(piece))
            except ValueError:
                raise FileParseError(f"bad number {piece.strip()!r}", lineno) from None
    else:
        for lineno, ln in data_lines:
            try:
                values.append(float(ln))
            except ValueError:
                raise FileParseError(f"bad number {ln!r}", lineno) from None
    if len(values) < 2:
        raise FileParseError("need at least 2 entries", len(lines))
    arr = np.asarray(values, dtype=float)
    if np.any(np.diff(arr) < 0) or abs(arr.sum()) > 1e-9 * max(1.0, np.abs(arr).max()):
        sys.stderr.write("note: input centered and sorted (orbit is translation-invariant)\n")
    return center_project(arr)


class FileParseError(Exception):
    def __init__(self, msg: str, lineno: int):
        super().__init__(msg)
        self.lineno = lineno


def cmd_config(args) -> OutputRecord:
    tag = families.FamilyTag(args.family)
    results: dict = {}
    if tag is families.FamilyTag.REGULAR:
        y = families.regular(args.q)
    elif tag is families.FamilyTag.MAXIMAL:
        y, w = families.maximal(args.q)
        results["b"] = list(w.b)
        results["a_hat"] = list(w.a_hat)
        results["norm_a"] = w.norm_a
    elif tag is families.FamilyTag.NORMAL:
        y, w = families.normal(args.q)
        results["a_breve"] = list(w.a_breve)
        results["norm_a"] = w.norm_a
    else:
        raise ValueError(f"config does not build family {args.family!r}")
    results = {"entries": list(y.entries), "norm": y.norm, **results}
    return OutputRecord(
        command="config",
        params={"family": tag.value, "q": args.q},
        results=results,
    )


def _report_dict(rep: discrepancy.DiscrepancyReport) -> dict:
    return {
        "q": rep.q,
        "family": rep.family,
        "t_star": rep.t_star,
        "lecd": rep.lecd,
        "lecad": rep.lecad,
        "wendel_upper": rep.wendel_upper,
        "gaussian_lower": rep.gaussian_lower,
        "argmin_rays": list(rep.argmin_rays),
    }


def cmd_discrepancy(args) -> OutputRecord:
    if args.input:
        y = read_configuration(args.input)
        family = "custom"
    else:
        y = families.configuration(args.family, args.q)
        family = args.family
    rep = discrepancy.lecd_report(y, family=family)
    return OutputRecord(
        command="discrepancy",
        params={"family": family, "q": y.q},
        results=_report_dict(rep),
    )


def cmd_table1(args) -> OutputRecord:
    q_list = args.q_list
    rows = []
    for q in q_list:
        for fam in ("regular", "maximal", "normal"):
            y = families.configuration(fam, q)
            rep = discrepancy.lecd_report(y, family=fam)
            rows.append(
                {
                    "q": q,
                    "family": fam,
                    "lecd": rep.lecd,
                    "lecad": rep.lecad,
                    "marginal_distance": discrepancy.marginal_distance(fam, q),
                }
            )
    trends = {}
    for fam in ("regular", "maximal", "normal"):
        vals = [r["lecd"] for r in rows if r["family"] == fam]
        angs = [r["lecad"] for r in rows if r["family"] == fam]
        trends[f"{fam}_lecd_trend"] = (
            "decreasing" if all(b <= a + 1e-15 for a, b in zip(vals, vals[1:])) else "mixed"
        )
        trends[f"{fam}_lecad_trend"] = (
            "increasing" if all(b >= a - 1e-15 for a, b in zip(angs, angs[1:])) else "mixed"
        )
    return OutputRecord(
        command="table1",
        params={"q_list": list(q_list)},
        results=trends,
        table=rows,
    )


def cmd_volume(args) -> OutputRecord:
    tag = families.FamilyTag(args.family)
    results: dict = {}
    if tag is families.FamilyTag.REGULAR:
        rr = volumes.regular_ratio(args.q)
        results.update(
            {
                "hull_volume": volumes.regular_volume(args.q) if args.q <= 140 else None,
                "log_hull_volume": volumes.regular_volume_log(args.q),
                "ball_volume": volumes.ball_volume(args.q, families.common_norm(args.q))
                if args.q <= 100
                else None,
                "log_ball_volume": volumes.ball_volume_log(args.q, families.common_norm(args.q)),
                "ratio_exact": rr.exact,
                "paper_asymptote": rr.paper_asymptote,
                "exact_over_asymptote": rr.ratio,
                "cube_ratio": volumes.cube_ratio(args.q),
            }
        )
        if args.samples:
            est = volumes.mc_volume_ratio(tag, args.q, args.samples, args.seed)
            results["mc_ratio"] = _mc_dict(est)
    else:
        if not args.samples:
            raise UsageError(f"family {tag.value!r} has no closed form; pass --samples")
        est = volumes.mc_volume_ratio(tag, args.q, args.samples, args.seed)
        results.update(
            {
                "log_ball_volume": volumes.ball_volume_log(args.q, families.common_norm(args.q)),
                "mc_ratio": _mc_dict(est),
            }
        )
    return OutputRecord(
        command="volume",
        params={"family": tag.value, "q": args.q, "samples": args.samples, "seed": args.seed},
        results=results,
    )


class UsageError(Exception):
    pass


def cmd_mc(args) -> OutputRecord:
    sub = args.mc_command
    if sub == "ape":
        spec = sampling.coverage_spec(args.family, args.q)
        res = sampling.ape_coverage(spec, args.n, args.seed)
        return OutputRecord(
            command="mc ape",
            params={"family": args.family, "q": args.q, "n": args.n, "seed": args.seed},
            results={
                "coverage": _mc_dict(res.estimate),
                "complement": res.complement,
                "coordinate_threshold": res.coordinate_threshold,
                "cap_area_single": res.cap_area_single,
                "empty_exact": res.empty_exact,
                "empty_margin": res.empty_margin,
                "pass": res.empty_exact,
            },
        )
    if sub == "hypotest":
        res = sampling.hypothesis_test(args.q, args.n, args.seed)
        return OutputRecord(
            command="mc hypotest",
            params={"q": args.q, "n": args.n, "seed": args.seed},
            results={
                "size": _mc_dict(res.size),
                "power": res.power,
                "threshold": res.threshold,
                "pass": res.power == 1.0,
            },
        )
    if sub == "subindep":
        rng = np.random.default_rng(np.random.Philox(key=np.array([args.seed % 2**64, 2**32], dtype=np.uint64)))
        if args.thresholds:
            thr = [float(v) for v in args.thresholds.split(",")]
            if len(thr) != args.n_dim:
                raise UsageError("--thresholds must list n-dim values")
        else:
            thr = list(0.05 + 0.9 * rng.random(args.n_dim) * 2.0 / math.sqrt(args.n_dim))
        rep = sampling.subindependence_check(args.n_dim, thr, args.trials, args.seed, check_splits=True)
        return OutputRecord(
            command="mc subindep",
            params={"n_dim": args.n_dim, "trials": args.trials, "seed": args.seed},
            results={
                "thresholds": list(rep.thresholds),
                "p_joint": _mc_dict(rep.p_joint),
                "p_product": rep.p_product,
                "diff_se": rep.diff_se,
                "holds": rep.holds,
                "splits_ok": rep.splits_ok,
                "pass": rep.holds and (rep.splits_ok is not False),
            },
        )
    if sub == "slepian":
        thr = args.threshold
        if thr is None:
            thr = families.common_norm(args.q) * math.sqrt(3.0 / (args.q + 1.0))
        rep = sampling.slepian_halfspace_check(args.q, thr, args.trials, args.seed)
        return OutputRecord(
            command="mc slepian",
            params={"q": args.q, "threshold": thr, "trials": args.trials, "seed": args.seed},
            results={
                "p_vertex_halfspaces": _mc_dict(rep.p_vertex_halfspaces),
                "p_ortho_halfspaces": _mc_dict(rep.p_ortho_halfspaces),
                "analytic_product": rep.analytic_product,
                "ordered": rep.ordered,
                "product_bound_ok": rep.product_bound_ok,
                "pass": rep.ordered and rep.product_bound_ok,
            },
        )
    if sub == "nscd":
        if args.input:
            y = read_configuration(args.input)
            family = "custom"
        else:
            y = families.configuration(args.family, args.q)
            family = args.family
        est = discrepancy.nscd_lower_bound(y, args.directions, args.seed)
        return OutputRecord(
            command="mc nscd",
            params={"family": family, "q": y.q, "directions": args.directions, "seed": args.seed},
            results={"nscd_lower_bound": _mc_dict(est)},
        )
    raise UsageError(f"unknown mc subcommand {sub!r}")


def _int_list(text: str) -> list[int]:
    return [int(v) for v in text.split(",") if v]


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="permcap", description=__doc__)
    p.add_argument("--format", choices=("json", "csv", "human"), default="json")
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("config", help="emit a configuration vector and its weights")
    c.add_argument("--family", required=True, choices=("regular", "maximal", "normal"))
    c.add_argument("--q", type=int, required=True)

    d = sub.add_parser("discrepancy", help="largest-empty-cap report")
    d.add_argument("--family", choices=("regular", "maximal", "normal", "simplex"))
    d.add_argument("--q", type=int)
    d.add_argument("--input", help="custom configuration file")

    t = sub.add_parser("table1", help="LECD/LECAD/marginal-distance summary per family and q")
    t.add_argument("--q-list", type=_int_list, required=True)

    v = sub.add_parser("volume", help="hull and ball volumes and their ratio")
    v.add_argument("--family", required=True, choices=("regular", "maximal", "normal"))
    v.add_argument("--q", type=int, required=True)
    v.add_argument("--samples", type=int, default=0)
    v.add_argument("--seed", type=int, default=0)

    m = sub.add_parser("mc", help="seeded Monte Carlo experiments")
    msub = m.add_subparsers(dest="mc_command", required=True)

    ape = msub.add_parser("ape", help="empty-cap union coverage")
    ape.add_argument("--family", required=True, choices=("regular", "normal"))
    ape.add_argument("--q", type=int, required=True)
    ape.add_argument("--n", type=int, required=True)
    ape.add_argument("--seed", type=int, required=True)

    hyp = msub.add_parser("hypotest", help="spherical-uniformity test size and power")
    hyp.add_argument("--q", type=int, required=True)
    hyp.add_argument("--n", type=int, required=True)
    hyp.add_argument("--seed", type=int, required=True)

    si = msub.add_parser("subindep", help="coordinate-halfspace subindependence")
    si.add_argument("--n-dim", type=int, required=True)
    si.add_argument("--trials", type=int, required=True)
    si.add_argument("--seed", type=int, required=True)
    si.add_argument("--thresholds", help="comma-separated; random draw when omitted")

    sl = msub.add_parser("slepian", help="halfspace-intersection comparison")
    sl.add_argument("--q", type=int, required=True)
    sl.add_argument("--trials", type=int, required=True)
    sl.add_argument("--seed", type=int, required=True)
    sl.add_argument("--threshold", type=float)

    ns = msub.add_parser("nscd", help="sampled lower bound for the cap discrepancy")
    ns.add_argument("--family", choices=("regular", "maximal", "normal", "simplex"))
    ns.add_argument("--q", type=int)
    ns.add_argument("--input", help="custom configuration file")
    ns.add_argument("--directions", type=int, required=True)
    ns.add_argument("--seed", type=int, required=True)
    return p


_HANDLERS = {
    "config": cmd_config,
    "discrepancy": cmd_discrepancy,
    "table1": cmd_table1,
    "volume": cmd_volume,
    "mc": cmd_mc,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command in ("discrepancy",) or (args.command == "mc" and args.mc_command == "nscd"):
        if not args.input and (args.family is None or args.q is None):
            parser.error("provide --family and --q, or --input FILE")
    try:
        rec = _HANDLERS[args.command](args)
    except UsageError as e:
        sys.stderr.write(f"error: {e}\n")
        return USAGE_EXIT
    except FileParseError as e:
        sys.stderr.write(f"parse error at line {e.lineno}: {e}\n")
        return PARSE_EXIT
    except capfun.NumericError as e:
        sys.stderr.write(f"numeric failure: {e}\n")
        return NUMERIC_EXIT
    except (ValueError, IndexError) as e:
        sys.stderr.write(f"error: {e}\n")
        return USAGE_EXIT
    emit(rec, args.format)
    return 0


if __name__ == "__main__":
    sys.exit(main())
