"""Command-line front end: ``gaussamp {evolve,check,sweep,verify}``.

Exit codes: 0 ok, 1 verification failure, 2 invalid input, 3 singular
stationary system, 4 criterion used outside its regime.
"""

import argparse
import csv
import io
import json
import math
import sys

import numpy as np

from . import __version__
from .channel import (
    ChannelParams,
    ComplexCM,
    GaussianState,
    classify_regime,
    has_stationary_limit,
    validate,
)
from .errors import RegimeViolation, SingularSystem, ValidationError
from .propagator import evolve, intermode_blocks, residue_general
from .separability import (
    XpSymmetricState,
    complex_to_real_cm,
    ppt_general,
    ppt_xp_symmetric,
    strong_asymptotic_criterion,
    strong_finite_time_criterion,
    strong_finite_time_state,
    symmetric_quartic_criterion,
    symplectic_eigenvalues,
    weak_intermode_criterion,
)
from .sweep import INTERMODE_GRID, SYMMETRIC_GRID, GridSpec, axis, sweep_grid

EXIT_OK, EXIT_VERIFY, EXIT_INPUT, EXIT_SINGULAR, EXIT_REGIME = 0, 1, 2, 3, 4

NORMALIZED = ("eta0p", "eta1p", "eta3p", "gamma3p")
RAW = ("eta0", "eta1", "eta3", "gamma1", "gamma2")


class UsageError(Exception):
    pass


def fmt(x):
    return format(float(x), ".17g")


# ---------------------------------------------------------------------------
# parameter handling


def _add_param_flags(p, time_flag):
    g = p.add_argument_group("normalized parameters (gamma0 = 1)")
    for name in NORMALIZED:
        g.add_argument(f"--{name}", type=float)
    g.add_argument(f"--{time_flag[0]}", type=float)
    r = p.add_argument_group("raw rates")
    for name in RAW:
        r.add_argument(f"--{name}", type=float)
    r.add_argument(f"--{time_flag[1]}", type=float)
    p.add_argument("--nbar0", type=float)
    p.add_argument("--config", help="JSON file whose keys mirror the flag names")


def _apply_config(args, parser_dests):
    if not getattr(args, "config", None):
        return
    try:
        with open(args.config, encoding="utf-8") as fh:
            cfg = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"--config: cannot read {args.config}: {exc}") from exc
    if not isinstance(cfg, dict):
        raise UsageError("--config: top level must be a JSON object")
    for key, value in cfg.items():
        dest = key.replace("-", "_")
        if dest not in parser_dests or dest == "config":
            raise UsageError(f"--config: unknown key {key!r}")
        if getattr(args, dest) is None:
            setattr(args, dest, value)


def _flag(field, mode):
    if mode == "normalized":
        renamed = {"gamma1": "gamma3p", "gamma2": "gamma3p", "eta0": "eta0p", "eta1": "eta1p", "eta3": "eta3p"}
        return "--" + renamed.get(field, field)
    return f"--{field}"


def build_params(args, time_names):
    """Return ``(params, tprime_or_None)`` from normalized or raw flags."""
    norm_given = [n for n in NORMALIZED + (time_names[0],) if getattr(args, n, None) is not None]
    raw_given = [n for n in RAW + (time_names[1],) if getattr(args, n, None) is not None]
    if norm_given and raw_given:
        raise UsageError(
            "cannot mix normalized flags (%s) with raw flags (%s)"
            % (", ".join("--" + n.replace("_", "-") for n in norm_given),
               ", ".join("--" + n.replace("_", "-") for n in raw_given))
        )
    nbar0 = args.nbar0 if args.nbar0 is not None else 0.0
    mode = "raw" if raw_given else "normalized"
    if mode == "raw":
        params = ChannelParams(
            eta0=args.eta0 or 0.0,
            eta1=args.eta1 or 0.0,
            eta3=args.eta3 or 0.0,
            gamma1=1.0 if args.gamma1 is None else args.gamma1,
            gamma2=1.0 if args.gamma2 is None else args.gamma2,
            nbar0=nbar0,
        )
    else:
        gamma3p = args.gamma3p or 0.0
        if not abs(gamma3p) <= 1:
            raise ValidationError("--gamma3p must lie in [-1, 1]", field="gamma3p")
        params = ChannelParams.normalized(
            eta1p=args.eta1p or 0.0,
            gamma3p=gamma3p,
            nbar0=nbar0,
            eta0p=args.eta0p or 0.0,
            eta3p=args.eta3p or 0.0,
        )
    try:
        validate(params)
    except ValidationError as exc:
        exc.args = (f"{_flag(exc.field, mode)}: {exc}",)
        raise
    t_norm = getattr(args, time_names[0].replace("-", "_"), None)
    t_raw = getattr(args, time_names[1].replace("-", "_"), None)
    if t_raw is not None:
        tprime = params.tprime(t_raw)
    else:
        tprime = t_norm
    if tprime is not None and (not math.isfinite(tprime) or tprime < 0):
        flag = time_names[1] if t_raw is not None else time_names[0]
        raise ValidationError(f"--{flag.replace('_', '-')} must be finite and >= 0", field=flag)
    return params, tprime


def _normalized_dict(params):
    return {
        "eta0p": params.eta0p,
        "eta1p": params.eta1p,
        "eta3p": params.eta3p,
        "gamma3p": params.gamma3p,
        "nbar0": params.nbar0,
    }


# ---------------------------------------------------------------------------
# evolve

EVOLVE_HEADER = (
    ["t", "tprime"]
    + [f"{b}{ij}_{part}" for b in "XY" for ij in ("11", "12", "22") for part in ("re", "im")]
    + ["nu1", "nu2"]
)


def cmd_evolve(args, out):
    params, tprime_max = build_params(args, ("tprime_max", "t_max"))
    tprime_max = 0.0 if tprime_max is None else tprime_max
    samples = 50 if args.samples is None else int(args.samples)
    if samples < 1:
        raise ValidationError("--samples must be >= 1", field="samples")
    initial = args.initial or "vacuum"
    if initial == "vacuum":
        state = GaussianState.vacuum()
    elif initial == "thermal":
        nbar = args.initial_nbar or 0.0
        if nbar < 0:
            raise ValidationError("--initial-nbar must be >= 0", field="initial_nbar")
        state = GaussianState.thermal(nbar)
    else:
        raise ValidationError(f"--initial: unknown initial state {initial!r}", field="initial")

    times = [0.0] if tprime_max == 0 else list(np.linspace(0.0, tprime_max, samples))
    residue = residue_general(params)

    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(EVOLVE_HEADER)
    for tp in times:
        cm = evolve(state, params, params.time(tp), residue=residue).cm
        nu1, nu2 = symplectic_eigenvalues(complex_to_real_cm(cm))
        row = [params.time(tp), tp]
        for block in (cm.X, cm.Y):
            for i, j in ((0, 0), (0, 1), (1, 1)):
                row += [block[i, j].real, block[i, j].imag]
        writer.writerow([fmt(v) for v in row + [nu1, nu2]])
    _emit(buf.getvalue(), args.output, out)
    return EXIT_OK


# ---------------------------------------------------------------------------
# check

METHODS = ("general", "xp", "weak", "strong-finite", "strong-asymptotic", "quartic")


def cmd_check(args, out):
    params, tprime = build_params(args, ("tprime", "t"))
    method = args.method
    regime = classify_regime(params)
    result = {"method": method, "params": _normalized_dict(params), "regime": regime.as_dict()}
    if tprime is not None:
        result["tprime"] = tprime

    if method == "general":
        if tprime is None:
            if not has_stationary_limit(params):
                raise RegimeViolation(
                    "general: no long-time state, the drift grows (need C1 > B1 and C2 > B2); "
                    "pass --tprime for a finite-time check"
                )
            cm = residue_general(params).cm()
        else:
            cm = evolve(GaussianState.vacuum(), params, params.time(tprime)).cm
        verdict = ppt_general(cm)
    elif method == "xp":
        explicit = [args.alpha_a, args.alpha_b, args.beta_c]
        if any(v is not None for v in explicit):
            if any(v is None for v in explicit):
                raise UsageError("xp: give all of --alpha-a, --alpha-b, --beta-c")
            state = XpSymmetricState(*map(float, explicit))
        elif tprime is not None:
            state = strong_finite_time_state(params, tprime)
        else:
            if params.eta0 != 0 or params.eta3 != 0:
                raise RegimeViolation("xp: requires eta0 = eta3 = 0")
            if not params.k < 1:
                raise RegimeViolation(
                    f"xp: long-time state needs k < 1, got k = {params.k:.12g}; pass --tprime"
                )
            state = XpSymmetricState(*intermode_blocks(params.gamma3p, params.eta1p, params.nbar0))
        verdict = ppt_xp_symmetric(state)
        result["state"] = {"alpha_a": state.alpha_a, "alpha_b": state.alpha_b, "beta_c": state.beta_c}
    elif method == "weak":
        verdict = weak_intermode_criterion(params.gamma3p, params.eta1p, params.nbar0)
    elif method == "strong-finite":
        if tprime is None:
            raise UsageError("strong-finite: --tprime (or --t) is required")
        verdict = strong_finite_time_criterion(params, tprime)
        result["alternate_margin"] = verdict.alternate_margin
        result["direct_margin"] = verdict.direct_margin
    elif method == "strong-asymptotic":
        verdict = strong_asymptotic_criterion(params.gamma3p, params.eta1p, params.nbar0)
    elif method == "quartic":
        verdict = symmetric_quartic_criterion(params)
    else:  # argparse restricts choices
        raise UsageError(f"unknown method {method!r}")

    result["decision"] = verdict.decision.value
    result["margin"] = verdict.margin
    _emit(json.dumps(result, sort_keys=True, indent=2) + "\n", args.output, out)
    return EXIT_OK


# ---------------------------------------------------------------------------
# sweep

SWEEP_HEADER = ["gamma3p", "eta1p", "eta0p", "regime", "critical_nbar0", "status"]
_SWEEP_AXES = ("gamma3p", "eta1p", "eta0p")


def _grid_from_args(args):
    preset = {"intermode": INTERMODE_GRID, "symmetric": SYMMETRIC_GRID}[args.preset or "intermode"]
    axes = {}
    for name in _SWEEP_AXES:
        lo, hi, step = (getattr(args, f"{name}_{s}") for s in ("min", "max", "step"))
        base = getattr(preset, name)
        if name == "eta0p" and args.eta0p is not None:
            if lo is not None or hi is not None:
                raise UsageError("give either --eta0p or the --eta0p-min/max/step range")
            lo = hi = args.eta0p
        if lo is None and hi is None and step is None:
            axes[name] = base
            continue
        lo = base[0] if lo is None else lo
        hi = base[-1] if hi is None else hi
        if step is None:
            step = (base[1] - base[0]) if len(base) > 1 else 1.0
        try:
            axes[name] = axis(float(lo), float(hi), float(step))
        except (TypeError, ValueError) as exc:
            raise UsageError(f"--{name}-min/max/step: {exc}") from exc
    nbar_max = preset.nbar_max if args.nbar_max is None else float(args.nbar_max)
    tol = preset.tol if args.tol is None else float(args.tol)
    if not nbar_max > 0:
        raise UsageError("--nbar-max must be positive")
    if not tol > 0:
        raise UsageError("--tol must be positive")
    return GridSpec(axes["gamma3p"], axes["eta1p"], axes["eta0p"], nbar_max, tol)


def sweep_csv(points):
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(SWEEP_HEADER)
    for p in points:
        crit = fmt(p.critical_value) if p.status == "ok" else ""
        writer.writerow([fmt(p.gamma3p), fmt(p.eta1p), fmt(p.eta0p), p.governing_regime.value, crit, p.status])
    return buf.getvalue()


def cmd_sweep(args, out):
    spec = _grid_from_args(args)
    points = sweep_grid(spec)
    _emit(sweep_csv(points), args.output, out)
    return EXIT_OK


# ---------------------------------------------------------------------------
# verify


def cmd_verify(args, out):
    from .verify import run_verification

    trials = 100 if args.trials is None else int(args.trials)
    if trials < 0:
        raise ValidationError("--trials must be >= 0", field="trials")
    seed = 42 if args.seed is None else int(args.seed)
    try:
        report = run_verification(seed=seed, trials=trials, inject_fault=args.inject_fault)
    except ValueError as exc:
        raise UsageError(f"--inject-fault: {exc}") from exc
    _emit(json.dumps(report, sort_keys=True, indent=2) + "\n", args.output, out)
    return EXIT_OK if report["passed"] else EXIT_VERIFY


# ---------------------------------------------------------------------------


def _emit(text, path, out):
    if path:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        out.write(text)


def build_parser():
    parser = argparse.ArgumentParser(prog="gaussamp", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("evolve", help="propagate a state and print the CM over time")
    _add_param_flags(p, ("tprime-max", "t-max"))
    p.add_argument("--samples", type=int)
    p.add_argument("--initial", choices=("vacuum", "thermal"))
    p.add_argument("--initial-nbar", type=float)
    p.add_argument("--output", "-o")
    p.set_defaults(func=cmd_evolve)

    p = sub.add_parser("check", help="apply one separability criterion")
    _add_param_flags(p, ("tprime", "t"))
    p.add_argument("--method", choices=METHODS, required=False)
    p.add_argument("--alpha-a", type=float)
    p.add_argument("--alpha-b", type=float)
    p.add_argument("--beta-c", type=float)
    p.add_argument("--output", "-o")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("sweep", help="critical-noise border over a parameter grid")
    p.add_argument("--preset", choices=("intermode", "symmetric"))
    for name in _SWEEP_AXES:
        for s in ("min", "max", "step"):
            p.add_argument(f"--{name}-{s}", type=float)
    p.add_argument("--eta0p", type=float)
    p.add_argument("--nbar-max", type=float)
    p.add_argument("--tol", type=float)
    p.add_argument("--config")
    p.add_argument("--output", "-o")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("verify", help="run the oracle suites")
    p.add_argument("--seed", type=int)
    p.add_argument("--trials", type=int)
    p.add_argument("--config")
    p.add_argument("--output", "-o")
    p.add_argument("--inject-fault", help=argparse.SUPPRESS)
    p.set_defaults(func=cmd_verify)
    return parser


def _dests(parser, command):
    for action in parser._subparsers._group_actions:
        sp = action.choices[command]
        return {a.dest for a in sp._actions}
    return set()


def main(argv=None, out=None, err=None):
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code
    try:
        _apply_config(args, _dests(parser, args.command))
        if args.command == "check" and args.method is None:
            raise UsageError("check: --method is required")
        return args.func(args, out)
    except (UsageError, ValidationError) as exc:
        print(f"gaussamp {args.command}: error: {exc}", file=err)
        return EXIT_INPUT
    except SingularSystem as exc:
        print(f"gaussamp {args.command}: singular system: {exc}", file=err)
        return EXIT_SINGULAR
    except RegimeViolation as exc:
        print(f"gaussamp {args.command}: regime violation: {exc}", file=err)
        return EXIT_REGIME


if __name__ == "__main__":
    sys.exit(main())
