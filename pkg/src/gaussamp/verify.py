"""Seeded self-verification suites behind ``gaussamp verify``.

Each suite draws its own parameters from ``numpy.random.default_rng([seed, i])``
so suites are independent of one another and of the trial count of others.
Draws use normalized rates (gamma0 in [0.1, 2], |eta'| <= 1, |gamma3'| <= 0.9,
t' in [0, 5]); errors are measured relative to the size of the quantity checked.
"""

import math

import numpy as np

from .channel import ChannelParams, GaussianState
from .errors import SingularSystem
from .oracle import criterion_equivalence_report, residual_alpha_beta, rk4_mn
from .propagator import compute_mn, evolve, residue_general
from .separability import complex_to_real_cm, symplectic_eigenvalues

SUITES = ("mn-ode", "residue-residual", "criterion-equivalence", "physicality")

MN_TOL = 1e-9
RESIDUE_TOL = 1e-10
PHYSICAL_TOL = 1e-9
RK4_STEPS = 2000


def _draw_params(rng, nbar_max=1.0):
    gamma0 = rng.uniform(0.1, 2.0)
    eta0p, eta1p, eta3p = rng.uniform(-1.0, 1.0, 3)
    gamma3p = rng.uniform(-0.9, 0.9)
    nbar0 = rng.uniform(0.0, nbar_max)
    return ChannelParams(
        eta0=eta0p * gamma0 / 2,
        eta1=eta1p * gamma0 / 2,
        eta3=eta3p * gamma0 / 2,
        gamma1=gamma0 * (1 + gamma3p),
        gamma2=gamma0 * (1 - gamma3p),
        nbar0=nbar0,
    )


def _suite_mn_ode(rng, trials):
    params = [_draw_params(rng) for _ in range(trials)]
    times = np.array([p.time(rng.uniform(0.0, 5.0)) for p in params])
    m, n = rk4_mn(
        np.array([p.eta_matrix() for p in params]),
        np.array([p.gamma_matrix() for p in params]),
        times,
        RK4_STEPS,
    )
    worst = 0.0
    for i, p in enumerate(params):
        prop = compute_mn(p, times[i])
        size = max(1.0, float(np.max(np.abs(prop.M))), float(np.max(np.abs(prop.N))))
        err = max(float(np.max(np.abs(prop.M - m[i]))), float(np.max(np.abs(prop.N - n[i]))))
        worst = max(worst, err / size)
    return {"max_error": worst, "tolerance": MN_TOL, "passed": bool(worst <= MN_TOL)}


def _suite_residue(rng, trials):
    worst, singular = 0.0, 0
    for _ in range(trials):
        p = _draw_params(rng)
        try:
            pair = residue_general(p)
        except SingularSystem:
            singular += 1
            continue
        size = max(1.0, float(np.max(np.abs(pair.alpha))), float(np.max(np.abs(pair.beta))))
        scale = p.gamma0 + 2 * max(abs(p.eta0), abs(p.eta1), abs(p.eta3))
        worst = max(worst, max(residual_alpha_beta(p, pair)) / (size * scale))
    return {
        "max_error": worst,
        "tolerance": RESIDUE_TOL,
        "singular_draws": singular,
        "passed": bool(worst <= RESIDUE_TOL),
    }


def _suite_equivalence(rng, trials):
    points = {"weak": [], "quartic": [], "strong-finite": [], "strong-asymptotic": []}
    for _ in range(trials):
        g = rng.uniform(0.0, 0.9)
        n = rng.uniform(0.0, 1.0)
        # weak: k < 1
        k = rng.uniform(0.0, 1.0) * math.sqrt(1 - g * g)
        points["weak"].append({"gamma3p": g, "nbar0": n, "eta1p": k})
        # quartic: 1 - eta0p > k
        e0 = rng.uniform(0.0, 0.8)
        reach = (1 - e0) ** 2 - g * g
        if reach > 0:
            e1 = rng.uniform(0.0, 1.0) * math.sqrt(reach)
            points["quartic"].append({"eta0p": e0, "gamma3p": g, "nbar0": n, "eta1p": e1})
        # strong: k in (1, 2]
        k = rng.uniform(1.0, 2.0)
        if k > 1 + 1e-6 and k > g:
            e1 = math.sqrt(k * k - g * g)
            points["strong-finite"].append(
                {"gamma3p": g, "nbar0": n, "eta1p": e1, "tprime": rng.uniform(0.0, 5.0)}
            )
        k = rng.uniform(1.1, 2.0)
        points["strong-asymptotic"].append(
            {"gamma3p": g, "nbar0": n, "eta1p": math.sqrt(k * k - g * g), "tprime": 30.0}
        )
    pairs = {}
    for name, pts in points.items():
        rep = criterion_equivalence_report(name, pts)
        pairs[name] = {"agree": rep.agree, "disagree": rep.disagree, "within_band": rep.within_band}
    disagreements = sum(v["disagree"] for v in pairs.values())
    return {"pairs": pairs, "max_error": float(disagreements), "tolerance": 0.0, "passed": bool(disagreements == 0)}


def _suite_physicality(rng, trials):
    worst = math.inf
    for _ in range(trials):
        p = _draw_params(rng)
        try:
            state = evolve(GaussianState.vacuum(), p, p.time(rng.uniform(0.0, 5.0)))
        except SingularSystem:
            continue
        nu2 = symplectic_eigenvalues(complex_to_real_cm(state.cm))[1]
        worst = min(worst, nu2)
    worst = 0.5 if worst == math.inf else float(worst)
    return {"min_nu": worst, "tolerance": PHYSICAL_TOL, "passed": bool(worst >= 0.5 - PHYSICAL_TOL)}


_RUNNERS = {
    "mn-ode": _suite_mn_ode,
    "residue-residual": _suite_residue,
    "criterion-equivalence": _suite_equivalence,
    "physicality": _suite_physicality,
}


def run_verification(seed=42, trials=100, inject_fault=None):
    """Run every suite and return a JSON-ready report.

    ``inject_fault`` names a suite whose result is forced to fail; it exists
    so the harness itself can be tested.
    """
    if inject_fault is not None and inject_fault not in SUITES:
        raise ValueError(f"unknown suite {inject_fault!r}; choose from {', '.join(SUITES)}")
    report = {"seed": seed, "trials": trials, "suites": {}}
    if trials > 0:
        for i, name in enumerate(SUITES):
            rng = np.random.default_rng([seed, i])
            result = _RUNNERS[name](rng, trials)
            if name == inject_fault:
                result["passed"] = False
                result["injected_fault"] = True
            result["trials"] = trials
            report["suites"][name] = result
    failed = sorted(name for name, r in report["suites"].items() if not r["passed"])
    report["failed"] = failed
    report["passed"] = not failed
    return report
