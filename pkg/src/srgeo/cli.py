"""Command-line front end.

Subcommands: ``exp`` (sample a geodesic), ``verify`` (closed form vs RK4
oracle), ``periodic`` (enumerate periodic geodesics), ``maxwell`` (first
Maxwell time), ``sphere`` (projected trajectory and cut data).

Output is JSON (default) or CSV with identical numeric content; floats are
serialized with shortest round-trip decimal encoding (<= 17 significant
digits), so re-parsing reproduces the binary64 values exactly and golden
files are stable.  Exit codes: 0 success, 2 invalid input, 3 internal
invariant violation.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass

import numpy as np

from .elliptic import Modulus
from .errors import InvariantViolation, TransversalityError
from .expmap import exp_from_elliptic
from .pendulum import (
    EllipticData,
    Region,
    SRParams,
    Tolerances,
    covector_at,
    to_elliptic,
)
from .periodic import elliptic_data_for, enumerate_periodic, verify_closure
from .so3 import check_rotation, check_unit_quaternion
from .sphere import (
    ar_geodesic,
    cut_bound_ar,
    cut_bound_sr,
    first_singular_return,
    project_ed,
    singular_set,
    transversal_family,
)
from .symmetry import first_maxwell_time
from .verifier import IntegratorConfig, integrate_quat, integrate_so3

DEFAULT_TOL_ENV = "SRGEO_TOL"


@dataclass(frozen=True)
class RunConfig:
    """Parsed invocation: metric invariant, covector source, grid, output."""

    params: SRParams
    ed: EllipticData | None
    times: list[float]
    fmt: str
    seed: int


def _fmt_float(x) -> str:
    return repr(float(x))


def _params_from(args) -> SRParams:
    tol = Tolerances()
    env = os.environ.get(DEFAULT_TOL_ENV)
    if env:
        tol = Tolerances(zero=float(env))
    return SRParams(args.a, tol=tol)


def _parse_triple(text: str) -> np.ndarray:
    parts = [float(v) for v in text.split(",")]
    if len(parts) != 3:
        raise ValueError(f"expected three comma-separated numbers, got {text!r}")
    return np.array(parts)


def _parse_times(args) -> list[float]:
    if getattr(args, "t", None) is not None:
        return [args.t]
    if getattr(args, "times", None):
        return [float(v) for v in args.times.split(",")]
    if getattr(args, "t_grid", None):
        start, stop, num = args.t_grid.split(":")
        return list(np.linspace(float(start), float(stop), int(num)))
    raise ValueError("one of --t, --times, --t-grid is required")


def _run_config(args, need_times: bool = True) -> RunConfig:
    params = _params_from(args)
    ed = _covector_from(args, params)
    times = _parse_times(args) if need_times else []
    if times and (any(t < 0 for t in times)
                  or any(b < a_ for a_, b in zip(times, times[1:]))):
        raise ValueError("times must be nonnegative and nondecreasing")
    return RunConfig(params=params, ed=ed, times=times, fmt=args.format,
                     seed=getattr(args, "seed", 0))


def _covector_from(args, params: SRParams) -> EllipticData:
    if args.p0 is not None:
        return to_elliptic(_parse_triple(args.p0), params)
    if args.region is None:
        raise ValueError("either --p0 or --region is required")
    region = Region(args.region)
    if region in (Region.C1, Region.C2):
        if args.k is None:
            raise ValueError(f"--k is required for region {region.value}")
        return EllipticData(region, Modulus.from_k(args.k), args.theta0,
                            s1=args.s1, s2=args.s2)
    if region is Region.C3:
        return EllipticData(region, None, args.theta0, s1=args.s1, s2=args.s2)
    return EllipticData(region, None, 0.0, n_parity=args.parity)


def _meta(ed: EllipticData, params: SRParams) -> dict:
    return {
        "a": params.a,
        "region": ed.region.value,
        "k": None if ed.k is None else ed.k.k,
        "theta0": ed.theta0,
        "signs": [ed.s1, ed.s2],
    }


def _emit(payload: dict, rows: list[dict], columns: list[str], args) -> None:
    out = sys.stdout if args.out is None else open(args.out, "w")
    try:
        if args.format == "json":
            json.dump(payload, out, indent=2)
            out.write("\n")
        else:
            for key, val in payload.get("meta", {}).items():
                out.write(f"# {key}={val}\n")
            out.write(",".join(columns) + "\n")
            for row in rows:
                out.write(",".join(_fmt_float(row[c]) if isinstance(row[c], float) else str(row[c])
                                   for c in columns) + "\n")
    finally:
        if out is not sys.stdout:
            out.close()


def cmd_exp(args) -> int:
    config = _run_config(args)
    params, ed = config.params, config.ed
    samples = []
    for t in config.times:
        s = exp_from_elliptic(ed, params, t)
        check_rotation(s.R)  # loud on invariant breach (exit 3)
        check_unit_quaternion(s.q, tol=1e-10)
        samples.append(s)
    payload = {
        "meta": _meta(ed, params),
        "samples": [
            {
                "t": s.t,
                "R": [float(v) for v in s.R.reshape(9)],
                "q": [float(v) for v in s.q],
                "p": [float(v) for v in s.p],
                "phi3": s.phi.phi3,
            }
            for s in samples
        ],
    }
    columns = (["t"] + [f"R{i}{j}" for i in range(3) for j in range(3)]
               + [f"q{i}" for i in range(4)] + [f"p{i}" for i in (1, 2, 3)] + ["phi3"])
    rows = []
    for s in samples:
        row = {"t": s.t, "phi3": s.phi.phi3}
        row.update({f"R{i}{j}": float(s.R[i, j]) for i in range(3) for j in range(3)})
        row.update({f"q{i}": float(s.q[i]) for i in range(4)})
        row.update({f"p{i+1}": float(s.p[i]) for i in range(3)})
        rows.append(row)
    _emit(payload, rows, columns, args)
    return 0


def cmd_verify(args) -> int:
    params = _params_from(args)
    rng = np.random.default_rng(args.seed)
    if args.random:
        covs = []
        for _ in range(args.random):
            psi = rng.uniform(0.0, 2.0 * np.pi)
            covs.append(np.array([np.cos(psi), -np.sin(psi), rng.normal() * 0.9]))
    else:
        ed = _covector_from(args, params)
        covs = [covector_at(ed, params, 0.0)]
    cfg = IntegratorConfig(step=args.step)
    batch = np.stack(covs)
    (_, R_ode, _), = integrate_so3(batch, params, args.t_end, cfg)
    (_, q_ode, _), = integrate_quat(batch, params, args.t_end, cfg)
    reports = []
    for i, p0 in enumerate(covs):
        ed = to_elliptic(p0, params)
        s = exp_from_elliptic(ed, params, args.t_end)
        dev_R = float(np.max(np.abs(s.R - R_ode[i])))
        dev_q = float(np.max(np.abs(s.q - q_ode[i])))
        reports.append({
            "index": i,
            "p0": [float(v) for v in p0],
            "region": ed.region.value,
            "matrix_deviation": dev_R,
            "quaternion_deviation": dev_q,
        })
    payload = {
        "meta": {"a": params.a, "t_end": args.t_end, "step": args.step, "seed": args.seed},
        "deviations": reports,
        "max_matrix_deviation": max(r["matrix_deviation"] for r in reports),
        "max_quaternion_deviation": max(r["quaternion_deviation"] for r in reports),
    }
    columns = ["index", "region", "matrix_deviation", "quaternion_deviation"]
    _emit(payload, reports, columns, args)
    return 0


def cmd_periodic(args) -> int:
    params = _params_from(args)
    rows = []
    for pg in enumerate_periodic(args.a, args.max_n, args.max_m):
        err, sign = verify_closure(pg, elliptic_data_for(pg), params)
        rows.append({
            "n": pg.spec.n,
            "m": pg.spec.m,
            "region": pg.spec.region.value,
            "k": pg.k.k,
            "T": pg.T,
            "total_time": pg.total_time,
            "closure_error": err,
            "lift_sign": sign,
            "contractible": pg.contractible,
        })
    payload = {"meta": {"a": args.a, "max_n": args.max_n, "max_m": args.max_m}, "rows": rows}
    columns = ["n", "m", "region", "k", "T", "total_time", "closure_error", "lift_sign", "contractible"]
    _emit(payload, rows, columns, args)
    return 0


def cmd_maxwell(args) -> int:
    config = _run_config(args, need_times=False)
    params, ed = config.params, config.ed
    p0 = covector_at(ed, params, 0.0)
    res = first_maxwell_time(p0, params, args.t_max)
    result = None if res is None else {"t": res[0], "condition": res[1]}
    payload = {"meta": _meta(ed, params) | {"t_max": args.t_max}, "result": result}
    rows = [] if result is None else [result]
    _emit(payload, rows, ["t", "condition"], args)
    return 0


def cmd_sphere(args) -> int:
    params = _params_from(args)
    gamma0 = _parse_triple(args.gamma0)
    if args.p0 is not None:
        p0 = _parse_triple(args.p0)
    else:
        fam = transversal_family(gamma0, params)
        p0 = fam.covector(args.psi0 if fam.chart == "psi0" else args.p3)
    ar = ar_geodesic(gamma0, p0, params)  # raises TransversalityError on bad p0
    times = _parse_times(args)
    if any(t < 0 for t in times) or any(b < a_ for a_, b in zip(times, times[1:])):
        raise ValueError("times must be nonnegative and nondecreasing")
    traj = [{"t": t, "gamma": [float(v) for v in project_ed(ar.ed, params, gamma0, t)]}
            for t in times]
    cut = {
        "first_singular_return": first_singular_return(ar, params) if singular_set(gamma0) else None,
        "bound_ar": cut_bound_ar(ar.ed, params),
        "bound_sr": cut_bound_sr(ar.ed, params),
    }
    payload = {"meta": _meta(ar.ed, params) | {"gamma0": [float(v) for v in gamma0]},
               "trajectory": traj, "cut": cut}
    rows = [{"t": r["t"], "x": r["gamma"][0], "y": r["gamma"][1], "z": r["gamma"][2]}
            for r in traj]
    _emit(payload, rows, ["t", "x", "y", "z"], args)
    return 0


def _add_covector_args(sub, with_parity=True):
    sub.add_argument("--p0", help="initial covector p1,p2,p3 on the level set")
    sub.add_argument("--region", choices=[r.value for r in Region])
    sub.add_argument("--k", type=float, help="modulus for C1/C2")
    sub.add_argument("--theta0", type=float, default=0.0)
    sub.add_argument("--s1", type=int, default=1, choices=(-1, 1))
    sub.add_argument("--s2", type=int, default=1, choices=(-1, 1))
    if with_parity:
        sub.add_argument("--parity", type=int, default=0, help="sign branch for C4/C5")


def _add_output_args(sub):
    sub.add_argument("--format", choices=("json", "csv"), default="json")
    sub.add_argument("--out", help="output path (default: stdout)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="srgeo", description=__doc__.splitlines()[0])
    subs = parser.add_subparsers(dest="command", required=True)

    p = subs.add_parser("exp", help="sample a geodesic")
    p.add_argument("--a", type=float, required=True)
    _add_covector_args(p)
    p.add_argument("--t", type=float)
    p.add_argument("--times", help="comma-separated times")
    p.add_argument("--t-grid", dest="t_grid", help="start:stop:num uniform grid")
    _add_output_args(p)
    p.set_defaults(func=cmd_exp)

    p = subs.add_parser("verify", help="closed form vs RK4 oracle deviation report")
    p.add_argument("--a", type=float, required=True)
    _add_covector_args(p)
    p.add_argument("--random", type=int, default=0, help="number of random covectors")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--t-end", dest="t_end", type=float, default=5.0)
    p.add_argument("--step", type=float, default=1e-3)
    _add_output_args(p)
    p.set_defaults(func=cmd_verify)

    p = subs.add_parser("periodic", help="enumerate periodic geodesics")
    p.add_argument("--a", type=float, required=True)
    p.add_argument("--max-n", dest="max_n", type=int, required=True)
    p.add_argument("--max-m", dest="max_m", type=int, required=True)
    _add_output_args(p)
    p.set_defaults(func=cmd_periodic)

    p = subs.add_parser("maxwell", help="first Maxwell time of a geodesic")
    p.add_argument("--a", type=float, required=True)
    _add_covector_args(p)
    p.add_argument("--t-max", dest="t_max", type=float, default=20.0)
    _add_output_args(p)
    p.set_defaults(func=cmd_maxwell)

    p = subs.add_parser("sphere", help="projected geodesic on S^2 and cut data")
    p.add_argument("--a", type=float, required=True)
    p.add_argument("--gamma0", required=True, help="initial point x,y,z on the sphere")
    p.add_argument("--p0", help="explicit transversal covector p1,p2,p3")
    p.add_argument("--psi0", type=float, default=0.0, help="family parameter when z0 != 0")
    p.add_argument("--p3", type=float, default=0.0, help="family parameter when z0 = 0")
    p.add_argument("--t", type=float)
    p.add_argument("--times", help="comma-separated times")
    p.add_argument("--t-grid", dest="t_grid", help="start:stop:num uniform grid")
    _add_output_args(p)
    p.set_defaults(func=cmd_sphere)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except InvariantViolation as exc:
        print(f"internal invariant violation: {exc}", file=sys.stderr)
        return 3
    except (ValueError, TransversalityError) as exc:
        print(f"invalid input: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
