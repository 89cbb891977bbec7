"""``ffsga`` command line: generate instances, solve, and run the experiments.

Every command is deterministic given its flags (wall-clock timings are
written to separate files). Validation failures exit with status 2 and a
single JSON line on stderr: ``{"error": <kind>, "message": <text>}``.
"""

from __future__ import annotations

import argparse
import csv
import json
import statistics
import sys
from pathlib import Path
from typing import Sequence

from . import kernels
from .errors import ConfigError, ContractError, InstanceFormatError
from .instance_gen import GenParams, generate, summary
from .model import Instance, load_instance, save_instance
from .orchestrator import RunConfig, RunResult, run, run_serialized
from .rng import derive_seed

DEFAULT_GAPS = (10, 50, 100, 200, 400, 500, 800)
DEFAULT_POPULATIONS = (512, 1024, 2048, 4096)
ALGORITHMS = (("Heterogeneous", "dual"), ("Cellular", "cellular"), ("Pseudo", "pseudo"))
TRACE_HEADER = [
    "generation",
    "best_objective_combined",
    "best_objective_island_A",
    "best_objective_island_B",
    "migration_flag",
]


def _int_list(text: str) -> list[int]:
    try:
        vals = [int(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None
    if not vals:
        raise argparse.ArgumentTypeError("list must not be empty")
    return vals


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="ffsga", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    g = sub.add_parser("generate", help="write a random instance")
    g.add_argument("--jobs", type=int, default=300)
    g.add_argument("--stages", type=int, default=4)
    g.add_argument("--machines", type=_int_list, default=[2],
                   help="machines per stage; one value applies to every stage")
    g.add_argument("--wt", type=float, default=100.0)
    g.add_argument("--seed", type=int, default=1)
    g.add_argument("--integer-times", action="store_true")
    g.add_argument("--out", required=True)

    def run_flags(sp, gap_list=False, population_list=False):
        sp.add_argument("instance", help="instance JSON file")
        if population_list:
            sp.add_argument("--population", type=_int_list, default=list(DEFAULT_POPULATIONS))
        else:
            sp.add_argument("--population", type=int, default=512)
        sp.add_argument("--generations", type=int, default=2000)
        if gap_list:
            sp.add_argument("--gap", type=_int_list, default=list(DEFAULT_GAPS))
        else:
            sp.add_argument("--gap", type=int, default=500)
        sp.add_argument("--theta", type=float, default=1.0)
        sp.add_argument("--seed", type=int, default=1)
        sp.add_argument("--workers", type=int, default=1, help="inner workers per island")
        sp.add_argument("--emax", choices=("sample", "bound"), default="sample")
        sp.add_argument("--out", required=True, help="output directory")

    s = sub.add_parser("solve", help="one run; writes result.json and trace.csv")
    run_flags(s)
    s.add_argument("--mode", choices=("dual", "cellular", "pseudo"), default="dual")

    for name, help_, kw in (
        ("sweep-gap", "mean/std of the dual GA per migration gap", {"gap_list": True}),
        ("compare", "best/average/variance per algorithm", {}),
        ("bench-time", "concurrent vs serialized wall-clock", {"population_list": True}),
    ):
        sp = sub.add_parser(name, help=help_)
        run_flags(sp, **kw)
        if name != "bench-time":
            sp.add_argument("--runs", type=int, default=50)
            sp.add_argument("--varied-instance", action="store_true",
                            help="regenerate the instance for every run instead of reusing the file")
    return p


# -- shared helpers ------------------------------------------------------------


def _config(args, **over) -> RunConfig:
    kw = dict(
        population=args.population, generations=args.generations, gap=args.gap,
        theta=args.theta, seed=args.seed, workers=args.workers, emax=args.emax,
        mode=getattr(args, "mode", "dual"),
    )
    kw.update(over)
    cfg = RunConfig(**kw)
    cfg.validate()
    return cfg


def _outdir(path: str) -> Path:
    out = Path(path)
    try:
        out.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise OSError(f"cannot create output directory {out}: {exc.strerror}") from None
    return out


def _write_text(path: Path, text: str) -> None:
    try:
        path.write_text(text, encoding="utf-8", newline="\n")
    except OSError as exc:
        raise OSError(f"cannot write {path}: {exc.strerror}") from None


def _write_csv(path: Path, header: Sequence[str], rows: Sequence[Sequence]) -> None:
    try:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(header)
            w.writerows(rows)
    except OSError as exc:
        raise OSError(f"cannot write {path}: {exc.strerror}") from None


def _fmt(x: float) -> str:
    return repr(float(x))


def _run_instance(base: Instance, args, run_index: int) -> Instance:
    """Instance for one repetition under the chosen seed policy."""
    if not getattr(args, "varied_instance", False):
        return base
    return generate(GenParams(
        base.num_jobs, base.num_stages, tuple(int(m) for m in base.machines),
        base.weight, seed=derive_seed(args.seed, 7, run_index),
    ))


def _check_runs(args, minimum: int = 1) -> None:
    if args.runs < minimum:
        raise ConfigError(f"runs must be >= {minimum}")


def result_document(cfg: RunConfig, inst: Instance, res: RunResult) -> dict:
    return {
        "config": cfg.deterministic_dict(),
        "instance": {"num_jobs": inst.num_jobs, "num_stages": inst.num_stages,
                     "machines_per_stage": inst.machines.tolist(), "weight": inst.weight},
        "emax": res.emax,
        "best_objective": res.best_objective,
        "best_fitness": res.best_fitness,
        "best_chromosome": res.best_chromosome,
        "final_objective_island_A": _final(res.trace_a),
        "final_objective_island_B": _final(res.trace_b),
        "migrations": res.migrations,
    }


def _final(trace) -> float | None:
    v = float(trace[-1])
    return None if v != v else v


def trace_rows(res: RunResult) -> list[list[str]]:
    flags = res.migration_generations()
    rows = []
    for g in range(len(res.trace)):
        gen = g + 1
        a, b = res.trace_a[g], res.trace_b[g]
        rows.append([
            str(gen),
            _fmt(res.trace[g]),
            "" if a != a else _fmt(a),
            "" if b != b else _fmt(b),
            "1" if gen in flags else "0",
        ])
    return rows


# -- commands --------------------------------------------------------------------


def cmd_generate(args) -> int:
    ms = args.machines * args.stages if len(args.machines) == 1 else args.machines
    params = GenParams(args.jobs, args.stages, tuple(ms), args.wt, args.seed, args.integer_times)
    inst = generate(params)
    out = Path(args.out)
    try:
        save_instance(inst, out)
    except OSError as exc:
        raise OSError(f"cannot write {out}: {exc.strerror}") from None
    stats = summary(inst)
    print(f"wrote {out}")
    print(f"mean total work (Pbar) = {stats['mean_work_total']:.6f}")
    for k, v in stats.items():
        if k != "mean_work_total":
            print(f"{k} = {v}")
    return 0


def cmd_solve(args) -> int:
    inst = load_instance(args.instance)
    cfg = _config(args)
    out = _outdir(args.out)
    res = run(cfg, inst)
    _write_text(out / "result.json", json.dumps(result_document(cfg, inst, res), indent=1) + "\n")
    _write_csv(out / "trace.csv", TRACE_HEADER, trace_rows(res))
    _write_text(out / "timings.json", json.dumps(res.timings, indent=1) + "\n")
    print(f"best objective {res.best_objective!r} ({len(res.migrations)} migrations, "
          f"{res.timings['total']:.2f}s, kernels={kernels.BACKEND})")
    return 0


def _finals(base: Instance, args, mode: str, gap: int) -> list[float]:
    vals = []
    for r in range(args.runs):
        inst = _run_instance(base, args, r)
        cfg = _config(args, mode=mode, gap=gap, seed=args.seed + r)
        vals.append(run(cfg, inst).best_objective)
    return vals


def cmd_sweep_gap(args) -> int:
    _check_runs(args)
    base = load_instance(args.instance)
    out = _outdir(args.out)
    rows = []
    for gap in args.gap:
        vals = _finals(base, args, "dual", gap)
        std = statistics.stdev(vals) if len(vals) > 1 else 0.0
        rows.append([str(gap), _fmt(statistics.fmean(vals)), _fmt(std)])
        print(f"gap {gap:5d}: mean {statistics.fmean(vals):.4f}  std {std:.4f}")
    _write_csv(out / "sweep_gap.csv", ["gap", "mean_objective", "std_objective"], rows)
    return 0


def cmd_compare(args) -> int:
    _check_runs(args, 2)
    base = load_instance(args.instance)
    out = _outdir(args.out)
    per_alg = {label: _finals(base, args, mode, args.gap) for label, mode in ALGORITHMS}
    rows = []
    print(f"{'algorithm':<14}{'best':>16}{'average':>16}{'variance':>16}")
    for label, vals in per_alg.items():
        best, avg, var = min(vals), statistics.fmean(vals), statistics.variance(vals)
        rows.append([label, _fmt(best), _fmt(avg), _fmt(var)])
        print(f"{label:<14}{best:>16.2f}{avg:>16.2f}{var:>16.2f}")
    _write_csv(out / "compare.csv", ["algorithm", "best", "average", "variance"], rows)
    _write_csv(
        out / "compare_runs.csv",
        ["run", "seed"] + [label for label, _ in ALGORITHMS],
        [[str(r), str(args.seed + r)] + [_fmt(per_alg[label][r]) for label, _ in ALGORITHMS]
         for r in range(args.runs)],
    )
    return 0


def cmd_bench_time(args) -> int:
    inst = load_instance(args.instance)
    out = _outdir(args.out)
    rows = []
    for n in args.population:
        cfg = _config(args, population=n)
        conc = run(cfg, inst)
        ser = run_serialized(cfg, inst)
        tc, ts = conc.timings["total"], ser.timings["total"]
        if conc.best_objective != ser.best_objective:
            raise RuntimeError(f"population {n}: concurrent and serialized runs disagree")
        rows.append([str(n), f"{tc:.6f}", f"{ts:.6f}", f"{ts / tc:.4f}", _fmt(conc.best_objective)])
        print(f"N={n:5d}  concurrent {tc:8.3f}s  serialized {ts:8.3f}s  speedup {ts / tc:.3f}")
    _write_csv(
        out / "bench_time.csv",
        ["population", "concurrent_seconds", "serialized_seconds", "speedup", "best_objective"],
        rows,
    )
    return 0


COMMANDS = {
    "generate": cmd_generate,
    "solve": cmd_solve,
    "sweep-gap": cmd_sweep_gap,
    "compare": cmd_compare,
    "bench-time": cmd_bench_time,
}


def _fail(kind: str, exc: BaseException) -> int:
    msg = " ".join(str(exc).split())
    print(json.dumps({"error": kind, "message": msg}), file=sys.stderr)
    return 2


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except InstanceFormatError as exc:
        return _fail("instance_format", exc)
    except (ConfigError, ContractError) as exc:
        return _fail("validation", exc)
    except OSError as exc:
        return _fail("io", exc)


if __name__ == "__main__":
    sys.exit(main())
