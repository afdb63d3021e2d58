"""Command-line surface: experiments, manifests, reproducible runs.

Every run writes a manifest.json plus data files into its output
directory; data files are written atomically and contain no timestamps,
so `heightlab replay manifest.json` reproduces them byte for byte.
"""

from __future__ import annotations

import argparse
import datetime
import hashlib
import json
import os
import subprocess
import sys
import tempfile
from fractions import Fraction

from . import __version__, kernels
from .bijections import (mod3_check_box, mod3_check_torus, to_coloring)
from .cutsets import cutset_profile, enumerate_omcut, level_set, omcut_violations
from .errors import BudgetExceeded, CoalescenceBudgetExceeded, HeightLabError
from .heights import (HOM, BoundaryCondition, HeightFunction, from_json,
                      make_bc, to_json)
from .oracle import exact_distribution, parse_statistic, parse_statistic_list
from .sampler import (RandomSource, batch_statistics, cftp_sample_info,
                      sample_one)
from .torus import TorusSpec, ball_metrics, build_torus
from .transforms import (expansion_audit, omega_x_l, t1, t2, t_combined)
from .walls import detect_walls


def parse_torus(text: str) -> TorusSpec:
    parts = [int(p) for p in text.lower().split("x")]
    t = build_torus(parts)
    if list(t.dims) != parts:
        print(f"note: sides reordered ascending to {t}", file=sys.stderr)
    return t


def parse_vertex(t: TorusSpec, text: str) -> int:
    parts = [int(p) for p in text.split(",")]
    if len(parts) == 1:
        return parts[0]
    return t.index(parts)


def parse_bc(t: TorusSpec, text: str) -> BoundaryCondition:
    if text.startswith("one-point"):
        base = 0
        if ":" in text:
            base = parse_vertex(t, text.split(":", 1)[1])
        return make_bc(t, "one-point", base=base)
    if text in ("zero", "box", "zero-one"):
        return make_bc(t, text)
    raise ValueError(f"unknown BC {text!r}")


def _code_version() -> str:
    try:
        desc = subprocess.run(["git", "describe", "--always", "--dirty"],
                              capture_output=True, text=True, timeout=5,
                              cwd=os.path.dirname(__file__))
        if desc.returncode == 0:
            return f"{__version__}+{desc.stdout.strip()}"
    except Exception:
        pass
    return __version__


def atomic_write(path: str, data: str) -> None:
    d = os.path.dirname(os.path.abspath(path))
    os.makedirs(d, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=d, prefix=".tmp-")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(data)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


class Run:
    """Output directory handling; '-' streams the main CSV to stdout."""

    def __init__(self, out: str | None, argv: list[str], command: str):
        self.stream = out == "-"
        self.argv = argv
        self.command = command
        self.files: list[str] = []
        if self.stream:
            self.dir = None
        else:
            if out is None:
                stamp = datetime.datetime.now().strftime("%Y%m%d-%H%M%S")
                digest = hashlib.sha1(" ".join(argv).encode()).hexdigest()[:8]
                out = os.path.join("runs", f"{stamp}-{digest}")
            self.dir = out

    def emit(self, name: str, data: str) -> None:
        if self.stream:
            sys.stdout.write(data)
            return
        path = os.path.join(self.dir, name)
        atomic_write(path, data)
        self.files.append(name)
        print(f"wrote {path}", file=sys.stderr)

    def finish(self, extra: dict | None = None) -> None:
        if self.stream:
            return
        manifest = {
            "command": self.command,
            "argv": self.argv,
            "version": _code_version(),
            "created": datetime.datetime.now().isoformat(timespec="seconds"),
            "files": self.files,
        }
        if extra:
            manifest.update(extra)
        atomic_write(os.path.join(self.dir, "manifest.json"),
                     json.dumps(manifest, indent=2) + "\n")


def _exact_str(x) -> str:
    if isinstance(x, Fraction):
        return f"{x.numerator}/{x.denominator}"
    return str(x)


# -- subcommands ----------------------------------------------------------------

def cmd_enumerate(args, argv) -> int:
    t = parse_torus(args.torus)
    bc = parse_bc(t, args.bc)
    stat = parse_statistic(args.stat)
    dist = exact_distribution(bc, args.model, stat, budget=args.budget)
    lines = ["value,count,total"]
    for v, c in sorted(dist.support.items()):
        lines.append(f"{_exact_str(v)},{c},{dist.total}")
    run = Run(args.out, argv, "enumerate")
    run.emit("distribution.csv", "\n".join(lines) + "\n")
    run.finish({"torus": str(t), "bc": bc.describe(), "model": args.model,
                "stat": stat.name, "total": dist.total})
    return 0


def cmd_sample(args, argv) -> int:
    t = parse_torus(args.torus)
    bc = parse_bc(t, args.bc)
    rng = RandomSource(args.seed)
    stats = parse_statistic_list(args.stats) if args.stats else []
    run = Run(args.out, argv, "sample")
    results = batch_statistics(bc, args.model, rng, args.samples, stats,
                               method=args.method, sweeps=args.sweeps,
                               max_doublings=args.max_doublings,
                               via_yadin=args.via_yadin,
                               threads=args.threads) if stats else {}
    doc = {}
    for name, emp in results.items():
        doc[name] = {
            "counts": {_exact_str(k): v for k, v in sorted(emp.counts.items(),
                                                           key=lambda kv: str(kv[0]))},
            "total": emp.total,
            "confidence": emp.confidence,
            "intervals": {_exact_str(k): list(emp.intervals[k])
                          for k in sorted(emp.intervals, key=str)},
        }
    run.emit("stats.json", json.dumps(doc, indent=2) + "\n")
    last = sample_one(bc, args.model, rng.spawn(max(args.samples - 1, 0)),
                      method=args.method, sweeps=args.sweeps,
                      max_doublings=args.max_doublings, via_yadin=args.via_yadin)
    run.emit("last_sample.json", to_json(last) + "\n")
    if args.emit_levelsets:
        run.emit("levelsets.json", emit_levelset_geometry(last, bc))
    extra = {"torus": str(t), "bc": bc.describe(), "model": args.model,
             "method": args.method, "seed": args.seed,
             "samples": args.samples, "sweeps": args.sweeps,
             "stats": [s.name for s in stats], "backend": kernels.BACKEND}
    if args.method == "cftp" and not args.via_yadin:
        info = cftp_sample_info(bc, args.model,
                                rng.spawn(max(args.samples - 1, 0)),
                                max_doublings=args.max_doublings)
        extra["last_schedule"] = list(info.schedule.epochs)
    run.finish(extra)
    return 0


def emit_levelset_geometry(f: HeightFunction, bc: BoundaryCondition) -> str:
    """JSON with the deduplicated level sets around every vertex."""
    groups: dict[frozenset, dict] = {}
    for x in f.torus.vertices():
        ls = level_set(f, x, bc)
        if ls is None:
            continue
        entry = groups.setdefault(ls.edges, {"vertices": [], "edges":
                                             [list(e) for e in sorted(ls.edges)]})
        entry["vertices"].append(x)
    doc = {"dims": list(f.torus.dims),
           "level_sets": [groups[k] for k in sorted(groups, key=sorted)]}
    return json.dumps(doc, indent=2) + "\n"


def cmd_cutsets(args, argv) -> int:
    t = parse_torus(args.torus)
    x = parse_vertex(t, args.x)
    b = parse_vertex(t, args.b)
    run = Run(args.out, argv, "cutsets")
    header = "size,r_total,exposed,trivial,violations"
    if args.profile:
        header += ",p_histogram"
    lines = [header]
    count = 0
    for gamma in enumerate_omcut(t, x, b, max_edges=args.max_edges,
                                 budget=args.budget):
        prof = cutset_profile(gamma)
        bad = omcut_violations(gamma)
        row = (f"{prof.size},{prof.r_total},{prof.exposed_count},"
               f"{int(prof.trivial)},{len(bad)}")
        if args.profile:
            hist = ";".join(f"{k}:{v}" for k, v in sorted(prof.histogram.items()))
            row += f",{hist}"
        lines.append(row)
        count += 1
    run.emit("cutsets.csv", "\n".join(lines) + "\n")
    run.finish({"torus": str(t), "x": x, "b": b, "count": count})
    return 0


def cmd_audit(args, argv) -> int:
    t = parse_torus(args.torus)
    bc = parse_bc(t, args.bc)
    x = parse_vertex(t, args.x)
    omega = omega_x_l(bc, x, args.L, budget=args.budget)
    if not omega:
        print(f"no functions with level-set size {args.L}", file=sys.stderr)
        return 1
    if args.transform == "t1":
        tf = lambda f: t1(f, bc, x)
    elif args.transform == "t2":
        tf = lambda f: t2(f, bc, x)
    else:
        tf = lambda f: t_combined(f, bc, x, lam=args.lam)
    audit = expansion_audit(omega, tf, bc, HOM, budget=args.budget)
    doc = {
        "torus": str(t), "x": x, "L": args.L, "transform": args.transform,
        "lambda": args.lam,
        "out_min": audit.out_min, "in_max": audit.in_max,
        "tau": _exact_str(audit.tau),
        "omega_size": audit.omega_size, "image_size": audit.image_size,
        "p_omega": _exact_str(audit.p_omega),
        "p_image": _exact_str(audit.p_image),
        "identity_holds": audit.identity_holds,
        "inverse_bound_holds": audit.inverse_bound_holds,
    }
    run = Run(args.out, argv, "audit")
    run.emit("audit.json", json.dumps(doc, indent=2) + "\n")
    run.finish(doc)
    return 0


def cmd_walls(args, argv) -> int:
    from .oracle import enumerate_functions
    from .walls import omega_b, omega_low, omega_w
    if args.gamma <= 9 * args.beta:
        print("note: gamma <= 9*beta leaves the audit regime", file=sys.stderr)
    t = parse_torus(args.torus)
    bc = make_bc(t, "one-point")
    wall_hist: dict[int, int] = {}
    balance_hist: dict[int, int] = {}
    predicate_hits = {"omega_low": 0, "omega_w": 0, "omega_b": 0}
    total = 0
    for f in enumerate_functions(bc, HOM, budget=args.budget):
        profile = detect_walls(f, bc)
        k = len(profile.positions)
        s = profile.sign_sum()
        wall_hist[k] = wall_hist.get(k, 0) + 1
        balance_hist[s] = balance_hist.get(s, 0) + 1
        if omega_low(f, 1.0, args.beta):
            predicate_hits["omega_low"] += 1
        if omega_w(f, bc, args.gamma):
            predicate_hits["omega_w"] += 1
        if omega_b(f, bc, args.beta, args.gamma):
            predicate_hits["omega_b"] += 1
        total += 1
    lines = ["kind,value,count,total"]
    for k, c in sorted(wall_hist.items()):
        lines.append(f"walls,{k},{c},{total}")
    for s, c in sorted(balance_hist.items()):
        lines.append(f"balance,{s},{c},{total}")
    for name, c in predicate_hits.items():
        lines.append(f"{name},1,{c},{total}")
    run = Run(args.out, argv, "walls")
    run.emit("walls.csv", "\n".join(lines) + "\n")
    run.finish({"torus": str(t), "total": total,
                "beta": args.beta, "gamma": args.gamma})
    return 0


def cmd_bijection_check(args, argv) -> int:
    if args.box:
        dims = [int(p) for p in args.box.lower().split("x")]
        report = mod3_check_box(dims, budget=args.budget)
        desc = {"box": args.box, "bc": "one-point"}
    else:
        text = args.g.lower().removeprefix("z")
        t = parse_torus(text)
        bc = parse_bc(t, args.bc)
        report = mod3_check_torus(bc, budget=args.budget)
        desc = {"torus": str(t), "bc": bc.describe()}
    doc = dict(desc, hom_count=report.hom_count, col_count=report.col_count,
               injective=report.injective, surjective=report.surjective,
               bijective=report.bijective,
               missing_examples=[list(c) for c in report.missing])
    run = Run(args.out, argv, "bijection-check")
    run.emit("bijection.json", json.dumps(doc, indent=2) + "\n")
    run.finish(doc)
    return 0


def cmd_color(args, argv) -> int:
    with open(args.infile) as fh:
        f = from_json(fh.read())
    coloring = to_coloring(f)
    doc = {"dims": list(f.torus.dims), "colors": list(coloring.colors)}
    run = Run(args.out, argv, "color")
    run.emit("coloring.json", json.dumps(doc) + "\n")
    run.finish({"input": args.infile})
    return 0


def cmd_isoperimetry(args, argv) -> int:
    t = parse_torus(args.torus)
    lines = ["r,V,E_r,s_r"]
    cumulative = 0
    verdicts = []
    for r in range(args.tmax + 1):
        bm = ball_metrics(t, r)
        cumulative += bm.s
        lines.append(f"{r},{bm.V},{bm.E_r_size},{bm.s}")
        lo = t.degree * bm.V  # 2 * lo_half; compare 2*sum against it
        ok = lo <= 2 * cumulative <= 2 * t.degree * bm.V
        verdicts.append({"t": r, "sum_s": cumulative, "V": bm.V,
                         "sandwich_holds": ok})
    run = Run(args.out, argv, "isoperimetry")
    run.emit("isoperimetry.csv", "\n".join(lines) + "\n")
    run.emit("verdict.json", json.dumps(verdicts, indent=2) + "\n")
    run.finish({"torus": str(t), "tmax": args.tmax,
                "all_hold": all(v["sandwich_holds"] for v in verdicts)})
    return 0


def cmd_replay(args, argv) -> int:
    with open(args.manifest) as fh:
        manifest = json.load(fh)
    src_dir = os.path.dirname(os.path.abspath(args.manifest))
    new_dir = args.out or (src_dir.rstrip("/") + "-replay")
    replay_argv = [a for a in manifest["argv"]]
    cleaned = []
    skip = False
    for a in replay_argv:
        if skip:
            skip = False
            continue
        if a == "--out":
            skip = True
            continue
        cleaned.append(a)
    rc = main(cleaned + ["--out", new_dir])
    if rc != 0:
        return rc
    identical = True
    for name in manifest["files"]:
        with open(os.path.join(src_dir, name), "rb") as fh:
            a = fh.read()
        with open(os.path.join(new_dir, name), "rb") as fh:
            b = fh.read()
        if a != b:
            identical = False
            print(f"mismatch in {name}", file=sys.stderr)
    print("replay identical" if identical else "replay differs")
    return 0 if identical else 1


# -- parser -----------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="heightlab",
                                description="random height functions on tori")
    p.add_argument("--version", action="version", version=_code_version())
    sub = p.add_subparsers(dest="cmd", required=True)

    def common(sp, budget=True):
        sp.add_argument("--out", default=None,
                        help="output directory, or - for stdout")
        if budget:
            sp.add_argument("--budget", type=int, default=None,
                            help="search-tree node budget")

    sp = sub.add_parser("enumerate", help="exact distribution of a statistic")
    sp.add_argument("--torus", required=True)
    sp.add_argument("--bc", required=True)
    sp.add_argument("--model", choices=["hom", "lip"], default="hom")
    sp.add_argument("--stat", required=True)
    common(sp)
    sp.set_defaults(fn=cmd_enumerate)

    sp = sub.add_parser("sample", help="draw uniform samples")
    sp.add_argument("--torus", required=True)
    sp.add_argument("--bc", required=True)
    sp.add_argument("--model", choices=["hom", "lip"], default="hom")
    sp.add_argument("--method", choices=["cftp", "mcmc"], default="cftp")
    sp.add_argument("--seed", type=int, default=1)
    sp.add_argument("--samples", type=int, default=1)
    sp.add_argument("--sweeps", type=int, default=1000)
    sp.add_argument("--max-doublings", type=int, default=24)
    sp.add_argument("--stats", default="range")
    sp.add_argument("--emit-levelsets", action="store_true")
    sp.add_argument("--via-yadin", action="store_true",
                    help="sample Lipschitz through the doubled homomorphism model")
    sp.add_argument("--threads", type=int, default=1,
                    help="worker cap for independent samples")
    common(sp, budget=False)
    sp.set_defaults(fn=cmd_sample)

    sp = sub.add_parser("cutsets", help="enumerate odd minimal cutsets")
    sp.add_argument("--torus", required=True)
    sp.add_argument("--x", required=True)
    sp.add_argument("--b", required=True)
    sp.add_argument("--max-edges", type=int, default=None)
    sp.add_argument("--enumerate", action="store_true", dest="do_enumerate",
                    help="emit one row per cutset (default)")
    sp.add_argument("--profile", action="store_true",
                    help="add the plaquette histogram column")
    common(sp)
    sp.set_defaults(fn=cmd_cutsets)

    sp = sub.add_parser("audit", help="expansion audit of a transformation")
    sp.add_argument("--torus", required=True)
    sp.add_argument("--bc", required=True)
    sp.add_argument("--x", required=True)
    sp.add_argument("--L", type=int, required=True)
    sp.add_argument("--transform", choices=["t1", "t2", "t"], default="t1")
    sp.add_argument("--lambda", dest="lam", type=float, default=0.1)
    common(sp)
    sp.set_defaults(fn=cmd_audit)

    sp = sub.add_parser("walls", help="wall histograms on a linear torus")
    sp.add_argument("--torus", required=True)
    sp.add_argument("--audit", action="store_true")
    sp.add_argument("--beta", type=float, default=0.02)
    sp.add_argument("--gamma", type=float, default=0.2)
    common(sp)
    sp.set_defaults(fn=cmd_walls)

    sp = sub.add_parser("bijection-check", help="mod-3 coloring correspondence")
    sp.add_argument("--g", default=None, help="torus, e.g. Z4 or 4x4")
    sp.add_argument("--bc", default="one-point")
    sp.add_argument("--box", default=None, help="box sides, e.g. 3x3")
    common(sp)
    sp.set_defaults(fn=cmd_bijection_check)

    sp = sub.add_parser("color", help="reduce a height function mod 3")
    sp.add_argument("--in", dest="infile", required=True)
    common(sp, budget=False)
    sp.set_defaults(fn=cmd_color)

    sp = sub.add_parser("isoperimetry", help="ball volumes and boundary sizes")
    sp.add_argument("--torus", required=True)
    sp.add_argument("--tmax", type=int, default=4)
    common(sp, budget=False)
    sp.set_defaults(fn=cmd_isoperimetry)

    sp = sub.add_parser("replay", help="re-run a manifest and compare bytes")
    sp.add_argument("manifest")
    sp.add_argument("--out", default=None)
    sp.set_defaults(fn=cmd_replay)

    return p


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    args = parser.parse_args(argv)
    saved = os.environ.get("HEIGHTLAB_BUDGET")
    if getattr(args, "budget", None) is not None:
        os.environ["HEIGHTLAB_BUDGET"] = str(args.budget)
    try:
        return args.fn(args, argv)
    except (BudgetExceeded, CoalescenceBudgetExceeded) as exc:
        print(f"budget error: {exc}", file=sys.stderr)
        return 3
    except HeightLabError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (ValueError, OSError) as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 2
    finally:
        if getattr(args, "budget", None) is not None:
            if saved is None:
                os.environ.pop("HEIGHTLAB_BUDGET", None)
            else:
                os.environ["HEIGHTLAB_BUDGET"] = saved


if __name__ == "__main__":
    sys.exit(main())
