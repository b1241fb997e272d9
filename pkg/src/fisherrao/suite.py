"""Randomized verification suite over the geometry, model and oracle modules.

Every documented invariant becomes one seeded check returning a
VerificationReport.  Checks are independent: each owns a PRNG stream derived
from (master seed, registry index), so a check's result is identical whether
it runs alone, in a sub-suite, sequentially or on a thread pool.  Reports
always come back in declaration order.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .gaussian import GaussianModel
from .geometry import (
    DistanceConvention,
    Geodesic,
    christoffel,
    distance,
    log_map,
    metric,
)
from .oracles import VerificationReport, check_inverse_derivative, integrate_geodesic_ode, make_report, mc_fisher
from .symmat import SpdMatrix, SymmetricMatrix, congruence, sym_eigen

SUITE_NAMES = ("none", "geometry", "gaussian", "oracles", "full")


@dataclass(frozen=True)
class SuiteConfig:
    """Suite selection, master seed and problem sizes (defaults match the
    documented acceptance settings)."""

    suite: str = "full"
    seed: int = 42
    dims: tuple[int, ...] = (1, 2, 3, 5, 10)
    mc_samples: int = 1_000_000
    mc_pairs: int = 20
    score_samples: int = 100_000
    endpoint_pairs: int = 200
    invariance_instances: int = 500
    compat_instances: int = 100
    ode_pairs: int = 50
    ode_steps: int = 1000
    workers: int = 1

    def __post_init__(self):
        if self.suite not in SUITE_NAMES:
            raise ValueError(f"unknown suite {self.suite!r}; expected one of {SUITE_NAMES}")
        if not self.dims or any(d < 1 for d in self.dims):
            raise ValueError(f"dims must be positive integers, got {self.dims}")


def _rng(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(key=seed))


def _derive_seed(master: int, index: int) -> int:
    return int(np.random.SeedSequence([master, index]).generate_state(1, np.uint64)[0])


def random_orthogonal(dim: int, rng: np.random.Generator) -> np.ndarray:
    q, upper = np.linalg.qr(rng.standard_normal((dim, dim)))
    return q * np.where(np.diag(upper) < 0.0, -1.0, 1.0)


def random_spd(dim: int, rng: np.random.Generator, spread: float = 1.0) -> SpdMatrix:
    """Random SPD point with eigenvalues exp(U(-spread, spread)) in a random basis."""
    q = random_orthogonal(dim, rng)
    lam = np.exp(rng.uniform(-spread, spread, dim))
    return SpdMatrix((q * lam) @ q.T)


def random_symmetric(dim: int, rng: np.random.Generator, scale: float = 1.0) -> SymmetricMatrix:
    a = rng.standard_normal((dim, dim))
    return SymmetricMatrix(scale * (a + a.T) / 2.0)


def random_tangent(
    base: SpdMatrix, rng: np.random.Generator, generator_norm: float = 1.0
) -> SymmetricMatrix:
    """Random direction D scaled so ||R^-1/2 D R^-1/2||_F = generator_norm."""
    w = random_symmetric(base.dim, rng).entries
    norm = float(np.linalg.norm(w))
    if norm == 0.0:
        w = np.eye(base.dim)
        norm = float(np.linalg.norm(w))
    w = w * (generator_norm / norm)
    sqrt = base.eigen.apply(np.sqrt)
    return SymmetricMatrix(sqrt @ w @ sqrt)


def _cycle_dims(dims: tuple[int, ...], count: int) -> list[int]:
    return [dims[i % len(dims)] for i in range(count)]


def _gaussian_dims(dims: tuple[int, ...]) -> tuple[int, ...]:
    small = tuple(d for d in dims if d <= 5)
    return small or dims


def _rel_gap(left: float, right: float) -> float:
    return abs(left - right) / max(abs(left), abs(right), 1.0)


# --------------------------------------------------------------------------
# geometry checks


def _check_metric_bilinearity(cfg: SuiteConfig, seed: int) -> VerificationReport:
    rng = _rng(seed)
    worst = 0.0
    for p in _cycle_dims(cfg.dims, cfg.compat_instances):
        r = random_spd(p, rng)
        a = random_symmetric(p, rng)
        b = random_symmetric(p, rng)
        extra = random_symmetric(p, rng)
        alpha = float(rng.uniform(-2.0, 2.0))
        worst = max(worst, _rel_gap(metric(r, a, b), metric(r, b, a)))
        combo = SymmetricMatrix(alpha * a.entries + extra.entries)
        lhs = metric(r, combo, b)
        rhs = alpha * metric(r, a, b) + metric(r, extra, b)
        worst = max(worst, _rel_gap(lhs, rhs))
    return make_report(
        "metric_bilinearity", worst, 1e-12, seed,
        details=f"{cfg.compat_instances} instances, dims {cfg.dims}",
    )


def _check_metric_polarization(cfg: SuiteConfig, seed: int) -> VerificationReport:
    rng = _rng(seed)
    worst = 0.0
    for p in _cycle_dims(cfg.dims, cfg.compat_instances):
        r = random_spd(p, rng)
        a = random_symmetric(p, rng)
        b = random_symmetric(p, rng)
        plus = SymmetricMatrix(a.entries + b.entries)
        minus = SymmetricMatrix(a.entries - b.entries)
        polarized = 0.25 * (metric(r, plus, plus) - metric(r, minus, minus))
        worst = max(worst, _rel_gap(metric(r, a, b), polarized))
    return make_report(
        "metric_polarization", worst, 1e-12, seed,
        details=f"{cfg.compat_instances} instances, dims {cfg.dims}",
    )


def _check_metric_compatibility(cfg: SuiteConfig, seed: int) -> VerificationReport:
    rng = _rng(seed)
    h = 1e-6
    worst = 0.0
    for p in _cycle_dims(cfg.dims, cfg.compat_instances):
        r = random_spd(p, rng)
        x = random_symmetric(p, rng)
        y = random_symmetric(p, rng)
        z = random_symmetric(p, rng)
        plus = metric(SpdMatrix(r.entries + h * x.entries), y, z)
        minus = metric(SpdMatrix(r.entries - h * x.entries), y, z)
        lhs = (plus - minus) / (2.0 * h)
        rhs = metric(r, christoffel(r, x, y), z) + metric(r, y, christoffel(r, x, z))
        worst = max(worst, abs(lhs - rhs))
    return make_report(
        "metric_compatibility", worst, 1e-6, seed,
        details=f"{cfg.compat_instances} instances, central step {h}",
    )


def _check_geodesic_ode_residual(cfg: SuiteConfig, seed: int) -> VerificationReport:
    rng = _rng(seed)
    instances = 20
    worst = 0.0
    for p in _cycle_dims(cfg.dims, instances):
        r = random_spd(p, rng)
        d = random_tangent(r, rng, generator_norm=float(rng.uniform(0.5, 1.5)))
        geo = Geodesic(r, d)
        inv_sqrt = r.eigen.apply(lambda v: 1.0 / np.sqrt(v))
        w_eigen = sym_eigen(SymmetricMatrix(inv_sqrt @ d.entries @ inv_sqrt))
        for t in np.linspace(0.0, 1.0, 20):
            e = w_eigen.apply(lambda v: np.exp(t * v))
            accel = d.entries @ inv_sqrt @ e @ inv_sqrt @ d.entries
            vel = geo.velocity(t).entries
            gamma = geo.point(t).entries
            term = vel @ np.linalg.solve(gamma, vel)
            worst = max(worst, float(np.max(np.abs(accel - term)) / np.max(np.abs(accel))))
    return make_report(
        "geodesic_ode_residual", worst, 1e-10, seed,
        details=f"{instances} geodesics, 20 samples of t in [0, 1]",
    )


def _check_geodesic_endpoint(cfg: SuiteConfig, seed: int) -> VerificationReport:
    rng = _rng(seed)
    worst = 0.0
    for p in _cycle_dims(cfg.dims, cfg.endpoint_pairs):
        r = random_spd(p, rng)
        s = random_spd(p, rng)
        end = Geodesic(r, log_map(r, s)).point(1.0)
        worst = max(
            worst,
            float(np.max(np.abs(end.entries - s.entries)) / np.max(np.abs(s.entries))),
        )
    return make_report(
        "geodesic_endpoint", worst, 1e-10, seed,
        details=f"{cfg.endpoint_pairs} pairs, dims {cfg.dims}",
    )


def _check_geodesic_additivity(cfg: SuiteConfig, seed: int) -> VerificationReport:
    rng = _rng(seed)
    worst = 0.0
    fractions = (0.25, 0.5, 0.75)
    for p in _cycle_dims(cfg.dims, cfg.endpoint_pairs):
        r = random_spd(p, rng)
        s = random_spd(p, rng)
        geo = Geodesic(r, log_map(r, s))
        full = distance(r, s)
        for t in fractions:
            partial = distance(r, geo.point(t))
            worst = max(worst, abs(partial - t * full) / full)
    return make_report(
        "geodesic_additivity", worst, 1e-9, seed,
        details=f"{cfg.endpoint_pairs} pairs at t in {fractions}",
    )


def _check_distance_symmetry(cfg: SuiteConfig, seed: int) -> VerificationReport:
    rng = _rng(seed)
    worst = 0.0
    for p in _cycle_dims(cfg.dims, cfg.invariance_instances):
        r = random_spd(p, rng)
        s = random_spd(p, rng)
        worst = max(worst, _rel_gap(distance(r, s), distance(s, r)))
    return make_report(
        "distance_symmetry", worst, 1e-12, seed,
        details=f"{cfg.invariance_instances} pairs, dims {cfg.dims}",
    )


def _check_congruence_invariance(cfg: SuiteConfig, seed: int) -> VerificationReport:
    rng = _rng(seed)
    worst = 0.0
    for p in _cycle_dims(cfg.dims, cfg.invariance_instances):
        r = random_spd(p, rng)
        s = random_spd(p, rng)
        m = rng.standard_normal((p, p))
        while np.linalg.cond(m) > 1e4:
            m = rng.standard_normal((p, p))
        mapped = distance(SpdMatrix(congruence(r, m)), SpdMatrix(congruence(s, m)))
        worst = max(worst, _rel_gap(mapped, distance(r, s)))
    return make_report(
        "congruence_invariance", worst, 1e-9, seed,
        details=f"{cfg.invariance_instances} pairs, dims {cfg.dims}",
    )


def _check_inversion_invariance(cfg: SuiteConfig, seed: int) -> VerificationReport:
    rng = _rng(seed)
    worst = 0.0
    for p in _cycle_dims(cfg.dims, cfg.invariance_instances):
        r = random_spd(p, rng)
        s = random_spd(p, rng)
        inverted = distance(SpdMatrix(r.inv()), SpdMatrix(s.inv()))
        worst = max(worst, _rel_gap(inverted, distance(r, s)))
    return make_report(
        "inversion_invariance", worst, 1e-9, seed,
        details=f"{cfg.invariance_instances} pairs, dims {cfg.dims}",
    )


def _check_triangle_inequality(cfg: SuiteConfig, seed: int) -> VerificationReport:
    rng = _rng(seed)
    worst = -np.inf
    for p in _cycle_dims(cfg.dims, cfg.invariance_instances):
        r = random_spd(p, rng)
        s = random_spd(p, rng)
        t = random_spd(p, rng)
        worst = max(worst, distance(r, t) - distance(r, s) - distance(s, t))
    return make_report(
        "triangle_inequality", float(worst), 1e-9, seed,
        details=f"{cfg.invariance_instances} triples, dims {cfg.dims}",
    )


def _check_trace_pencil_agreement(cfg: SuiteConfig, seed: int) -> VerificationReport:
    rng = _rng(seed)
    worst = 0.0
    for p in _cycle_dims(cfg.dims, cfg.invariance_instances):
        r = random_spd(p, rng)
        s = random_spd(p, rng)
        via_trace = distance(r, s, method="trace")
        via_pencil = distance(r, s, method="pencil")
        worst = max(worst, abs(via_trace - via_pencil) / max(via_trace, 1e-300))
    return make_report(
        "trace_pencil_agreement", worst, 1e-10, seed,
        details=f"{cfg.invariance_instances} pairs, dims {cfg.dims}",
    )


def _check_convention_factor(cfg: SuiteConfig, seed: int) -> VerificationReport:
    rng = _rng(seed)
    factor = np.sqrt(2.0)
    worst = 0.0
    for p in _cycle_dims(cfg.dims, cfg.invariance_instances):
        r = random_spd(p, rng)
        s = random_spd(p, rng)
        paper = distance(r, s, convention=DistanceConvention.PAPER)
        smith = distance(r, s, convention=DistanceConvention.SMITH)
        worst = max(worst, abs(smith - factor * paper) / max(smith, 1e-300))
    return make_report(
        "convention_factor", worst, 1e-12, seed,
        details=f"{cfg.invariance_instances} pairs, dims {cfg.dims}",
    )


# --------------------------------------------------------------------------
# gaussian-model checks


def _check_score_identity(cfg: SuiteConfig, seed: int) -> VerificationReport:
    rng = _rng(seed)
    dims = _gaussian_dims(cfg.dims)
    worst = 0.0
    for p in _cycle_dims(dims, cfg.mc_pairs):
        r = random_spd(p, rng)
        d = random_symmetric(p, rng)
        model = GaussianModel(r)
        x = model.sample(cfg.score_samples, int(rng.integers(2**63)))
        values = model.score(d, x)
        std_error = float(np.std(values, ddof=1)) / np.sqrt(cfg.score_samples)
        worst = max(worst, abs(float(np.mean(values))) / std_error)
    return make_report(
        "score_identity", worst, 4.0, seed,
        details=f"{cfg.mc_pairs} pairs, {cfg.score_samples} draws, dims {dims};"
                " residual in standard errors",
    )


def _check_information_identity(cfg: SuiteConfig, seed: int) -> VerificationReport:
    rng = _rng(seed)
    dims = _gaussian_dims(cfg.dims)
    worst = 0.0
    for p in _cycle_dims(dims, cfg.mc_pairs):
        r = random_spd(p, rng)
        d = random_symmetric(p, rng)
        target = metric(r, d, d)
        pair_seed = int(rng.integers(2**63))
        for form in ("score", "hessian"):
            estimate, std_error = mc_fisher(r, d, cfg.mc_samples, pair_seed, form=form)
            worst = max(worst, abs(estimate - target) / std_error)
    return make_report(
        "information_identity", worst, 4.0, seed,
        details=f"{cfg.mc_pairs} pairs, {cfg.mc_samples} draws, both estimator forms;"
                " residual in standard errors",
    )


def _check_log_det_consistency(cfg: SuiteConfig, seed: int) -> VerificationReport:
    rng = _rng(seed)
    worst = 0.0
    for p in _cycle_dims(cfg.dims, cfg.compat_instances):
        r = random_spd(p, rng)
        model = GaussianModel(r)
        x = rng.standard_normal(p)
        quad = float(x @ np.linalg.solve(r.entries, x))
        lhs = -2.0 * (float(model.log_pdf(x)) + 0.5 * p * np.log(2.0 * np.pi) + 0.5 * quad)
        rhs = float(np.sum(np.log(np.linalg.eigvalsh(r.entries))))
        worst = max(worst, abs(lhs - rhs) / max(1.0, abs(rhs)))
    return make_report(
        "log_det_consistency", worst, 1e-12, seed,
        details=f"{cfg.compat_instances} instances, dims {cfg.dims}",
    )


# --------------------------------------------------------------------------
# oracle checks


def _check_mc_cross_form(cfg: SuiteConfig, seed: int) -> VerificationReport:
    rng = _rng(seed)
    dims = _gaussian_dims(cfg.dims)
    worst = 0.0
    for p in _cycle_dims(dims, cfg.mc_pairs):
        r = random_spd(p, rng)
        d = random_symmetric(p, rng)
        pair_seed = int(rng.integers(2**63))
        est_s, se_s = mc_fisher(r, d, cfg.mc_samples, pair_seed, form="score")
        est_h, se_h = mc_fisher(r, d, cfg.mc_samples, pair_seed, form="hessian")
        pooled = np.sqrt(se_s**2 + se_h**2)
        worst = max(worst, abs(est_s - est_h) / pooled)
    return make_report(
        "mc_cross_form", worst, 6.0, seed,
        details=f"{cfg.mc_pairs} pairs, {cfg.mc_samples} draws;"
                " residual in pooled standard errors",
    )


def _check_rk4_convergence_order(cfg: SuiteConfig, seed: int) -> VerificationReport:
    rng = _rng(seed)
    instances = 5
    step_counts = (8, 16, 32, 64)
    worst = 0.0
    for _ in range(instances):
        r = random_spd(2, rng)
        d = random_tangent(r, rng, generator_norm=1.0)
        closed = Geodesic(r, d).point(1.0).entries
        errors = []
        for steps in step_counts:
            final = integrate_geodesic_ode(r, d, 1.0, steps).final[0].entries
            errors.append(float(np.max(np.abs(final - closed))))
        for coarse, fine in zip(errors, errors[1:]):
            worst = max(worst, abs(coarse / fine - 16.0))
    return make_report(
        "rk4_convergence_order", worst, 4.0, seed,
        details=f"{instances} p=2 instances, steps {step_counts};"
                " residual is max |error ratio - 16| (pass band [12, 20])",
    )


def _check_ode_endpoint_agreement(cfg: SuiteConfig, seed: int) -> VerificationReport:
    rng = _rng(seed)
    dims = _gaussian_dims(cfg.dims)
    worst = 0.0
    for p in _cycle_dims(dims, cfg.ode_pairs):
        r = random_spd(p, rng)
        d = random_tangent(r, rng, generator_norm=float(rng.uniform(0.3, 1.5)))
        closed = Geodesic(r, d).point(1.0).entries
        final = integrate_geodesic_ode(r, d, 1.0, cfg.ode_steps).final[0].entries
        worst = max(worst, float(np.max(np.abs(final - closed)) / np.max(np.abs(closed))))
    return make_report(
        "ode_endpoint_agreement", worst, 1e-8, seed,
        details=f"{cfg.ode_pairs} pairs, {cfg.ode_steps} RK4 steps to t=1, dims {dims}",
    )


def _check_inverse_derivative_slope(cfg: SuiteConfig, seed: int) -> VerificationReport:
    rng = _rng(seed)
    instances = 5
    steps = np.logspace(-2.0, -4.0, 5)
    worst = 0.0
    for p in _cycle_dims(cfg.dims, instances):
        r = random_spd(p, rng)
        d = random_symmetric(p, rng, scale=0.5)
        residuals = [check_inverse_derivative(r, d, h).residual for h in steps]
        slope = float(np.polyfit(np.log(steps), np.log(residuals), 1)[0])
        worst = max(worst, abs(slope - 2.0))
    return make_report(
        "inverse_derivative_slope", worst, 0.2, seed,
        details=f"{instances} instances, steps 1e-2..1e-4;"
                " residual is |log-log slope - 2| (pass band [1.8, 2.2])",
    )


_CHECKS: tuple[tuple[str, str, object], ...] = (
    ("geometry", "metric_bilinearity", _check_metric_bilinearity),
    ("geometry", "metric_polarization", _check_metric_polarization),
    ("geometry", "metric_compatibility", _check_metric_compatibility),
    ("geometry", "geodesic_ode_residual", _check_geodesic_ode_residual),
    ("geometry", "geodesic_endpoint", _check_geodesic_endpoint),
    ("geometry", "geodesic_additivity", _check_geodesic_additivity),
    ("geometry", "distance_symmetry", _check_distance_symmetry),
    ("geometry", "congruence_invariance", _check_congruence_invariance),
    ("geometry", "inversion_invariance", _check_inversion_invariance),
    ("geometry", "triangle_inequality", _check_triangle_inequality),
    ("geometry", "trace_pencil_agreement", _check_trace_pencil_agreement),
    ("geometry", "convention_factor", _check_convention_factor),
    ("gaussian", "score_identity", _check_score_identity),
    ("gaussian", "information_identity", _check_information_identity),
    ("gaussian", "log_det_consistency", _check_log_det_consistency),
    ("oracles", "mc_cross_form", _check_mc_cross_form),
    ("oracles", "rk4_convergence_order", _check_rk4_convergence_order),
    ("oracles", "ode_endpoint_agreement", _check_ode_endpoint_agreement),
    ("oracles", "inverse_derivative_slope", _check_inverse_derivative_slope),
)


def suite_check_names(suite: str = "full") -> tuple[str, ...]:
    """Names of the checks a suite selection would run, in order."""
    if suite not in SUITE_NAMES:
        raise ValueError(f"unknown suite {suite!r}; expected one of {SUITE_NAMES}")
    if suite == "none":
        return ()
    return tuple(name for tag, name, _ in _CHECKS if suite == "full" or tag == suite)


def run_suite(config: SuiteConfig) -> list[VerificationReport]:
    """Run the selected checks and return their reports in declaration order.

    Deterministic for a fixed config: per-check seeds derive from the master
    seed and the check's registry position (not the selection), so a check
    reports the same residual under any suite selection or worker count.
    """
    jobs = [
        (fn, _derive_seed(config.seed, index))
        for index, (tag, _, fn) in enumerate(_CHECKS)
        if config.suite == "full" or tag == config.suite
    ]
    if config.workers > 1 and len(jobs) > 1:
        with ThreadPoolExecutor(max_workers=config.workers) as pool:
            futures = [pool.submit(fn, config, seed) for fn, seed in jobs]
            return [f.result() for f in futures]
    return [fn(config, seed) for fn, seed in jobs]
