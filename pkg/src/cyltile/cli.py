"""Command-line interface: ``cyltile <command> --disk ... [options]``.

``--disk`` takes a disk file, the name of a shipped example (see
``cyltile info --list``) or ``rect:WxH``.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from . import gallery
from .board import Disk, DiskError, disk_info, format_disk, load_disk, plug_count, rectangle
from .cylinder import (
    BudgetExceeded,
    TilingError,
    count_tilings,
    default_budget,
    format_tiling,
    parse_tiling,
    sample_tiling,
)
from .floorplan import count_loops

SCHEMA_VERSION = 1


@dataclass
class RunConfig:
    command: str
    disk: Optional[str]
    heights: list
    seed: Optional[int]
    budget: int
    search_budget: int
    pad: int
    fmt: str
    jobs: int


class ValidationFailed(Exception):
    pass


def resolve_disk(spec: str) -> Disk:
    if os.path.exists(spec):
        return load_disk(spec)
    if spec.startswith("rect:"):
        w, _, h = spec[5:].partition("x")
        return rectangle(int(w), int(h))
    if spec in gallery.example_names():
        return gallery.example_disk(spec)
    raise DiskError(f"unknown disk {spec!r}: not a file, an example name or rect:WxH")


def _need_disk(cfg: RunConfig) -> Disk:
    if not cfg.disk:
        raise SystemExit("--disk is required for this command")
    return resolve_disk(cfg.disk)


def _need_seed(cfg: RunConfig) -> int:
    if cfg.seed is None:
        raise SystemExit("--seed is required for sampling commands")
    return cfg.seed


def _jsonable(x):
    if isinstance(x, Fraction):
        return {"num": str(x.numerator), "den": str(x.denominator)}
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    return x


def emit(cfg: RunConfig, payload: dict, text: Optional[str] = None, rows: Optional[list] = None) -> str:
    if cfg.fmt == "json":
        return json.dumps({"schema": SCHEMA_VERSION, "command": cfg.command, **_jsonable(payload)}, indent=2)
    if cfg.fmt == "csv":
        from .walks import rows_to_csv

        if rows is None:
            rows = [{k: v for k, v in payload.items() if not isinstance(v, (dict, list))}]
        return rows_to_csv(rows).rstrip("\n")
    if text is not None:
        return text.rstrip("\n")
    return "\n".join(f"{k}: {v}" for k, v in payload.items())


# commands ----------------------------------------------------------------


def cmd_info(cfg: RunConfig) -> str:
    d = _need_disk(cfg)
    info = disk_info(d)
    info["plugs"] = plug_count(d)
    info["loops"] = count_loops(d) if d.balanced else 0
    return emit(cfg, info, format_disk(d) + "\n".join(f"{k}: {v}" for k, v in info.items()))


def cmd_count(cfg: RunConfig) -> str:
    d = _need_disk(cfg)
    rows = [{"height": n, "tilings": count_tilings(d, n)} for n in cfg.heights]
    text = "\n".join(f"N={r['height']}: {r['tilings']}" for r in rows)
    return emit(cfg, {"counts": rows}, text, rows)


def cmd_sample(cfg: RunConfig) -> str:
    d = _need_disk(cfg)
    seed = _need_seed(cfg)
    out = []
    for n in cfg.heights:
        t = sample_tiling(d, n, seed)
        back = parse_tiling(format_tiling(t), d.parity)
        if back.floors != t.floors:
            raise ValidationFailed("sampled tiling does not survive a text round trip")
        out.append({"height": n, "seed": seed, "tiling": format_tiling(t)})
    text = "\n".join(f"N={r['height']} seed={seed}\n{r['tiling']}" for r in out)
    return emit(cfg, {"samples": out}, text, out)


def cmd_components(cfg: RunConfig) -> str:
    from .flipdyn import flip_components

    d = _need_disk(cfg)
    reports = [flip_components(d, n, cfg.budget) for n in cfg.heights]
    payload = {
        "reports": [
            {"height": r.height, "total": r.total, "isolated": r.isolated, "components": r.components} for r in reports
        ]
    }
    rows = [
        {"height": r.height, "rank": k, "size": c["size"], "twist": c["twist"]}
        for r in reports
        for k, c in enumerate(r.components)
    ]
    text = "\n".join(
        f"N={r.height}: {r.total} tilings, {len(r.components)} components, {r.isolated} isolated, sizes {r.sizes[:12]}"
        + (" ..." if len(r.sizes) > 12 else "")
        for r in reports
    )
    return emit(cfg, payload, text, rows)


def cmd_twist_histogram(cfg: RunConfig) -> str:
    from .flipdyn import twist_histogram

    d = _need_disk(cfg)
    rows = []
    for n in cfg.heights:
        for tw, c in twist_histogram(d, n, cfg.budget).items():
            rows.append({"height": n, "twist": str(tw), "count": c})
    text = "\n".join(f"N={r['height']} twist {r['twist']}: {r['count']}" for r in rows)
    return emit(cfg, {"histogram": rows}, text, rows)


def cmd_phi(cfg: RunConfig, tiling_path: Optional[str] = None, boxed: Optional[int] = None) -> str:
    from .duplex import boxed_tiling, format_word, phi_normal, phi_thin, thin_length

    if boxed is not None:
        d = _need_disk(cfg)
        t = boxed_tiling(thin_length(d), boxed)
    elif tiling_path:
        d = _need_disk(cfg) if cfg.disk else rectangle(3, 2)
        with open(tiling_path) as fh:
            t = parse_tiling(fh.read(), d.parity)
    else:
        d = _need_disk(cfg)
        t = sample_tiling(d, cfg.heights[0], _need_seed(cfg))
    L = thin_length(t.disk)
    word = phi_thin(t)
    normal = phi_normal(t)
    payload = {
        "L": L,
        "height": t.height,
        "tiling": format_tiling(t),
        "word": [list(x) for x in word],
        "normal_form": [list(x) for x in normal],
        "text": format_word(normal),
    }
    return emit(cfg, payload, f"{format_tiling(t)}phi = {format_word(word)}\nnormal form = {format_word(normal)}")


def cmd_irregularity(cfg: RunConfig) -> str:
    from .homf2 import irregularity_report

    d = _need_disk(cfg)
    rep = irregularity_report(d, heights=cfg.heights, budget=cfg.budget, search_single=True)
    failed = []
    for a in rep["anchors"]:
        if not a["witnesses"]["ok"]:
            failed.append(f"{a['scheme']}: witnesses")
        inv = a["invariance"]
        if inv["window_violations"] or any(s.get("violations") for s in inv["sweeps"]):
            failed.append(f"{a['scheme']}: invariance")
    lines = [format_disk(d).rstrip("\n")]
    if not rep["anchors"]:
        lines.append("no scheme applies")
    for a in rep["anchors"]:
        inv = a["invariance"]
        sweeps = ", ".join(
            f"N={s['height']}: {s['violations']}/{s['edges']}" if "edges" in s else f"N={s['height']}: skipped"
            for s in inv["sweeps"]
        )
        lines.append(
            f"{a['scheme']}: witnesses a (height {a['witnesses']['a']['height']}), "
            f"b (height {a['witnesses']['b']['height']}); window violations {inv['window_violations']}/{inv['windows']}; "
            f"sweep violations {sweeps}"
        )
    for r in rep["rejected"]:
        lines.append(f"rejected {r['scheme']} at {r['where']}: {r['reason']}")
    out = emit(cfg, rep, "\n".join(lines))
    if failed:
        print(out)
        raise ValidationFailed("; ".join(failed))
    return out


def _load_tiling(spec: str, parity: int = 0):
    if os.path.exists(spec):
        with open(spec) as fh:
            return parse_tiling(fh.read(), parity)
    return gallery.example_tiling(spec)


def cmd_equivalent(cfg: RunConfig, first: str, second: str) -> str:
    """Stable equivalence of two tilings, padding by up to ``--pad`` floors."""
    from .flipdyn import stable_equivalent, twist

    parity = resolve_disk(cfg.disk).parity if cfg.disk else 0
    t1 = _load_tiling(first, parity)
    t2 = _load_tiling(second, parity)
    v = stable_equivalent(t1, t2, max_pad=cfg.pad, budget=cfg.search_budget)
    payload = {
        "verdict": v.kind,
        "pad": v.pad,
        "explored": v.explored,
        "twists": [twist(t1), twist(t2)],
        "max_pad": cfg.pad,
        "search_budget": cfg.search_budget,
    }
    text = f"{v.kind}" + (f" at pad {v.pad}" if v.pad is not None else "") + f" ({v.explored} nodes explored)"
    return emit(cfg, payload, text)


def cmd_walks(cfg: RunConfig, s_text: str = "1/9", samples: int = 50) -> str:
    import random

    from . import walks as W

    s = Fraction(s_text)
    T = max(cfg.heights)
    rng = random.Random(cfg.seed if cfg.seed is not None else 0)
    gam = [W.gamma(n) for n in range(T + 1)]
    rec = W.gamma_recurrence(T)
    rows = []
    ok = gam == rec
    for t in range(1, T + 1):
        p_series = W.return_probability(t, s)
        p_dp = W.probability_table(t, s)[0]
        bound = W.decay_holds(p_series, t, s)
        ok &= p_series == p_dp and bound
        rows.append({"t": t, "P0": p_series, "P0_matches_ball": p_series == p_dp, "decay_bound_holds": bound})
    dom = 0
    for _ in range(samples):
        t = rng.randint(1, min(T, 5))
        y = [W.random_word(rng, 3) for _ in range(t + 1)]
        m = rng.randint(1, 6)
        dom += W.dominance_holds(y, t, s, m)
    ok &= dom == samples
    payload = {"s": s, "gamma": gam, "gamma_recurrence_agrees": gam == rec, "rows": rows, "dominance": f"{dom}/{samples}"}
    text = [f"s = {s}", f"gamma(0..{T}) = {gam}  (recurrence agrees: {gam == rec})"]
    text += [f"t={r['t']}: P(0,t) = {float(r['P0']):.6g}  ball DP agrees: {r['P0_matches_ball']}  bound: {r['decay_bound_holds']}" for r in rows]
    text.append(f"interleaved dominance: {dom}/{samples}")
    out = emit(cfg, payload, "\n".join(text), [{**r, "P0": str(r["P0"])} for r in rows])
    if not ok:
        print(out)
        raise ValidationFailed("random-walk checks failed")
    return out


def cmd_thm1(cfg: RunConfig, samples: int = 500) -> str:
    from .walks import theorem1_experiment

    d = _need_disk(cfg)
    rows = theorem1_experiment(
        d, cfg.heights, samples, _need_seed(cfg), budget=cfg.budget, search_budget=cfg.search_budget, jobs=cfg.jobs
    )
    if cfg.fmt == "text":
        cfg.fmt = "csv"
    return emit(cfg, {"rows": rows}, rows=rows)


# entry point -------------------------------------------------------------


def _heights(text: str) -> list:
    return [int(x) for x in text.split(",") if x]


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--disk", help="disk file, example name or rect:WxH")
    common.add_argument("--height", default="2", help="height or comma-separated heights")
    common.add_argument("--seed", type=int, default=None)
    common.add_argument("--pad", type=int, default=4, help="largest padding for stable-equivalence searches")
    common.add_argument(
        "--budget", type=int, default=None, help="enumeration cap (default: CYLTILE_BUDGET or 10**6)"
    )
    common.add_argument("--search-budget", type=int, default=200_000, help="node cap for flip searches")
    common.add_argument("--format", choices=("text", "json", "csv"), default="text")
    common.add_argument("--jobs", type=int, default=os.cpu_count() or 1)

    p = argparse.ArgumentParser(prog="cyltile", description="Domino tilings of cylinders D x [0,N].")
    sub = p.add_subparsers(dest="command", required=True)
    info = sub.add_parser("info", parents=[common], help="squares, balance, plugs and loops")
    info.add_argument("--list", action="store_true", help="list the shipped example disks")
    sub.add_parser("count", parents=[common], help="number of tilings")
    sub.add_parser("sample", parents=[common], help="uniform random tiling")
    sub.add_parser("components", parents=[common], help="flip-connected components")
    sub.add_parser("twist-histogram", parents=[common], help="twist distribution")
    phi = sub.add_parser("phi", parents=[common], help="invariant of a thin-rectangle tiling")
    phi.add_argument("--tiling", help="tiling file (text form)")
    phi.add_argument("--boxed", type=int, help="use the boxed generator tiling of this wind")
    sub.add_parser("irregularity", parents=[common], help="anchors, witnesses, invariance checks")
    eq = sub.add_parser("equivalent", parents=[common], help="stable equivalence of two tilings")
    eq.add_argument("first", help="tiling file or shipped tiling name")
    eq.add_argument("second", help="tiling file or shipped tiling name")
    walks = sub.add_parser("walks", parents=[common], help="free-group random walk checks")
    walks.add_argument("--s", default="1/9", help="step probability, rational in (0, 1/8)")
    walks.add_argument("--samples", type=int, default=50)
    thm1 = sub.add_parser("thm1", parents=[common], help="Monte Carlo coincidence rates")
    thm1.add_argument("--samples", type=int, default=500)
    return p


def main(argv: Optional[list] = None) -> int:
    args = build_parser().parse_args(argv)
    budget = args.budget if args.budget is not None else default_budget()
    if budget <= 0 or args.search_budget <= 0 or args.jobs <= 0:
        print("budgets and --jobs must be positive", file=sys.stderr)
        return 2
    cfg = RunConfig(
        command=args.command,
        disk=args.disk,
        heights=_heights(args.height),
        seed=args.seed,
        budget=budget,
        search_budget=args.search_budget,
        pad=args.pad,
        fmt=args.format,
        jobs=args.jobs,
    )
    try:
        if args.command == "info" and args.list:
            out = "\n".join(gallery.example_names())
        elif args.command == "info":
            out = cmd_info(cfg)
        elif args.command == "count":
            out = cmd_count(cfg)
        elif args.command == "sample":
            out = cmd_sample(cfg)
        elif args.command == "components":
            out = cmd_components(cfg)
        elif args.command == "twist-histogram":
            out = cmd_twist_histogram(cfg)
        elif args.command == "phi":
            out = cmd_phi(cfg, args.tiling, args.boxed)
        elif args.command == "irregularity":
            out = cmd_irregularity(cfg)
        elif args.command == "equivalent":
            out = cmd_equivalent(cfg, args.first, args.second)
        elif args.command == "walks":
            out = cmd_walks(cfg, args.s, args.samples)
        else:
            out = cmd_thm1(cfg, args.samples)
    except ValidationFailed as e:
        print(f"validation failed: {e}", file=sys.stderr)
        return 1
    except (DiskError, TilingError, BudgetExceeded, ValueError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    print(out)
    return 0


if __name__ == "__main__":
    sys.exit(main())
