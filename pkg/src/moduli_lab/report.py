"""Verification suites and their reports.

Each check draws its random data from a generator seeded by (seed, check
name), so results do not depend on which other checks run or on the order
in which a thread pool finishes them.
"""
from __future__ import annotations

import csv
import io
import json
import os
import time
import zlib
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field

import numpy as np

from . import complex_surface as cs
from .complex_surface import fourier as cf
from .lie import (GL2, GroupElement, StructureGroup, conjugacy_invariant, group_commutator,
                  random_algebra_matrix, random_group)
from .real_surface import fatgraph, forms, gauge
from .real_surface.mesh import build_surface

SCHEMA_VERSION = "1"
SUITES = ("real", "complex", "stokes-leray", "all")
THREADS_ENV = "MODULI_LAB_THREADS"


class ConfigError(ValueError):
    """Invalid suite configuration (reported as a usage error)."""


@dataclass(frozen=True)
class SuiteConfig:
    suite: str = "all"
    group: StructureGroup | None = None
    genus: int = 1
    holes: int = 1
    refine: int = 0
    tau1: complex = 1j
    tau2: complex = 1j
    pole_p: complex = 0.5
    fourier_k: int = 2
    quad_depth: int = 4
    trials: int = 20
    seed: int = 0
    tolerances: dict = field(default_factory=dict)

    def validate(self) -> None:
        if self.suite not in SUITES:
            raise ConfigError(f"suite must be one of {', '.join(SUITES)}")
        if not 0 <= self.genus <= 4:
            raise ConfigError("genus must lie in 0..4")
        if not 0 <= self.holes <= 6:
            raise ConfigError("holes must lie in 0..6")
        if not 0 <= self.refine <= 3:
            raise ConfigError("refine must lie in 0..3")
        for name in ("tau1", "tau2"):
            if complex(getattr(self, name)).imag <= 0:
                raise ConfigError(f"{name} must have positive imaginary part")
        if not 0 <= self.fourier_k <= 4:
            raise ConfigError("fourier-k must lie in 0..4")
        if not 0 <= self.quad_depth <= 8:
            raise ConfigError("quad-depth must lie in 0..8")
        if self.trials < 0:
            raise ConfigError("trials must be non-negative")
        if self.seed < 0:
            raise ConfigError("seed must be non-negative")
        unknown = set(self.tolerances) - set(CHECKS)
        if unknown:
            raise ConfigError(f"tolerance override for unknown checks: {sorted(unknown)}")
        try:
            self.sigma()
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc

    def real_group(self) -> StructureGroup:
        from .lie import SU2
        return self.group or SU2

    def complex_group(self) -> StructureGroup:
        """Group for the nonabelian complex identities; compact choices fall back to GL(2)."""
        g = self.group
        if g is None or g.is_compact:
            return GL2
        return g

    def sigma(self) -> cs.MeromorphicTwoForm:
        S = cs.EllipticProductSurface.from_taus(complex(self.tau1), complex(self.tau2))
        return cs.MeromorphicTwoForm(S, complex(self.pole_p))

    def scheme(self, depth: int | None = None) -> cs.QuadratureScheme:
        return cs.QuadratureScheme(depth=self.quad_depth if depth is None else depth)


@dataclass(frozen=True)
class CheckReport:
    name: str
    anchor: str
    max_residual: float
    tolerance: float
    passed: bool
    runtime: float

    def as_dict(self) -> dict:
        d = asdict(self)
        d["pass"] = d.pop("passed")
        return d


@dataclass(frozen=True)
class Check:
    name: str
    anchor: str
    suite: str
    tolerance: float
    run: object                 # (cfg, rng) -> residual
    quadrature: object = None   # (cfg, rng, depth) -> (lhs, rhs, defect) for convergence tables


def _rng(cfg: SuiteConfig, name: str) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence([cfg.seed, zlib.crc32(name.encode())]))


def _rel(diff, *scales) -> float:
    return float(abs(diff) / max(1.0, *(abs(s) for s in scales)))


# -- real checks ------------------------------------------------------------------------------

def _real_surface(cfg):
    return build_surface(cfg.genus, cfg.holes, cfg.refine)


def check_stokes(cfg, rng) -> float:
    s, G = _real_surface(cfg), cfg.real_group()
    worst = 0.0
    for _ in range(cfg.trials):
        w = forms.random_one_form(s, G, rng)
        lhs = forms.integrate_surface(forms.exterior_d(w))
        rhs = forms.integrate_boundary(w)
        worst = max(worst, _rel(lhs - rhs, lhs, rhs))
    return worst


def check_real_variation(cfg, rng) -> float:
    s, G = _real_surface(cfg), cfg.real_group()
    worst = 0.0
    for _ in range(cfg.trials):
        A = forms.random_one_form(s, G, rng)
        eps = forms.random_zero_form(s, G, rng)
        a = forms.random_one_form(s, G, rng)
        dh = gauge.hamiltonian_variation(A, eps, a)
        w = gauge.symplectic_W(a, gauge.gauge_direction(A, eps))
        worst = max(worst, _rel(dh - w, dh, w))
    return worst


def check_real_fd_slope(cfg, rng) -> float:
    s, G = _real_surface(cfg), cfg.real_group()
    h = 1e-3
    worst = 0.0
    for _ in range(cfg.trials):
        A = forms.random_one_form(s, G, rng)
        eps = forms.random_zero_form(s, G, rng)
        a = forms.random_one_form(s, G, rng)
        slope = (gauge.hamiltonian(A + h * a, eps) - gauge.hamiltonian(A - h * a, eps)) / (2 * h)
        dh = gauge.hamiltonian_variation(A, eps, a)
        worst = max(worst, _rel(slope - dh, dh))
    return worst


def check_real_extension(cfg, rng) -> float:
    s, G = _real_surface(cfg), cfg.real_group()
    worst = 0.0
    for _ in range(cfg.trials):
        A = forms.random_one_form(s, G, rng)
        e1, e2, e3 = (forms.random_zero_form(s, G, rng) for _ in range(3))
        worst = max(worst, gauge.verify_extension_identity(A, e1, e2),
                    gauge.cocycle_jacobi_defect(e1, e2, e3))
    return worst


def check_closed_cocycle(cfg, rng) -> float:
    s = build_surface(max(cfg.genus, 1), 0, cfg.refine)
    G = cfg.real_group()
    worst = 0.0
    for _ in range(cfg.trials):
        e1, e2 = forms.random_zero_form(s, G, rng), forms.random_zero_form(s, G, rng)
        worst = max(worst, abs(gauge.cocycle(e1, e2)),
                    abs(forms.integrate_boundary(forms.wedge(e1, forms.exterior_d(e2)))))
    return worst


def check_dual_pairing(cfg, rng) -> float:
    s, G = _real_surface(cfg), cfg.real_group()
    worst = 0.0
    for _ in range(cfg.trials):
        A = forms.random_one_form(s, G, rng)
        eps = forms.random_zero_form(s, G, rng)
        h = gauge.hamiltonian(A, eps)
        p = gauge.dual_pairing(gauge.momentum(A), eps)
        worst = max(worst, _rel(h - p, h, p))
    return worst


def check_momentum_bracket(cfg, rng) -> float:
    s, G = _real_surface(cfg), cfg.real_group()
    worst = 0.0
    for _ in range(cfg.trials):
        A = forms.random_one_form(s, G, rng)
        e1, e2 = forms.random_zero_form(s, G, rng), forms.random_zero_form(s, G, rng)
        worst = max(worst, gauge.verify_momentum_bracket(A, e1, e2))
    return worst


def _random_flat(cfg, rng, g, k):
    G = cfg.real_group()
    if k == 0:
        # closed surface: commuting pairs satisfy the relation
        handles = []
        for _ in range(g):
            X = random_algebra_matrix(G, rng)
            a, b = rng.uniform(-np.pi, np.pi, 2)
            from scipy.linalg import expm
            handles.append((GroupElement(expm(a * X), G), GroupElement(expm(b * X), G)))
        return fatgraph.flat_from_holonomy(g, 0, handles, [], group=G, rng=rng)
    handles = [(random_group(G, rng), random_group(G, rng)) for _ in range(g)]
    holes = [random_group(G, rng) for _ in range(k - 1)]
    prod = np.eye(G.n, dtype=complex)
    for a, b in handles:
        prod = prod @ group_commutator(a.m, b.m)
    for m in holes:
        prod = prod @ m.m
    holes.append(GroupElement(np.linalg.inv(prod), G))
    return fatgraph.flat_from_holonomy(g, k, handles, holes, group=G, rng=rng)


def check_leaf_labels(cfg, rng) -> float:
    G = cfg.real_group()
    worst = 0.0
    for _ in range(cfg.trials):
        conn = _random_flat(cfg, rng, cfg.genus, cfg.holes)
        label = fatgraph.leaf_label(conn)
        h = np.array([random_group(G, rng).m for _ in range(conn.graph.n_vertices)])
        worst = max(worst, fatgraph.label_distance(label, fatgraph.leaf_label(conn.gauge(h))))
        for j in range(conn.graph.holes):
            for start in range(len(conn.graph.hole_cycles[j])):
                inv = conjugacy_invariant(conn.boundary_holonomy(j, start))
                worst = max(worst, inv.distance(label[j]))
    return worst


def check_relation_gate(cfg, rng) -> float:
    """1 for every accepted tuple with defect above the gate or rejected valid tuple, else 0."""
    G = cfg.real_group()
    k = max(cfg.holes, 2)
    failures = 0
    for _ in range(cfg.trials):
        # sphere with k holes: the last holonomy is the inverse product of the others
        holes = [random_group(G, rng) for _ in range(k - 1)]
        prod = np.eye(G.n, dtype=complex)
        for m in holes:
            prod = prod @ m.m
        last = np.linalg.inv(prod)
        try:
            conn = fatgraph.flat_from_holonomy(0, k, [], holes + [GroupElement(last, G)], group=G)
            if conn.face_defect() > fatgraph.FLAT_TOL:
                failures += 1
        except fatgraph.RelationError:
            failures += 1
        bad = last @ random_group(G, rng, scale=1e-6).m
        try:
            fatgraph.flat_from_holonomy(0, k, [], holes + [GroupElement(bad, G)], group=G)
            failures += 1
        except fatgraph.RelationError:
            pass
    return float(failures)


# -- complex checks ---------------------------------------------------------------------------

def check_weierstrass(cfg, rng) -> float:
    worst = 0.0
    for _ in range(max(cfg.trials, 10) if cfg.trials else 0):
        w1 = rng.uniform(0.5, 2.0) * np.exp(2j * np.pi * rng.uniform())
        tau = complex(rng.uniform(-1, 1), rng.uniform(0.4, 2.0))
        E = cs.EllipticCurve(w1, w1 * tau)
        p = E.to_point(*rng.uniform(0.1, 0.9, 2))
        S = cs.EllipticProductSurface(E, cs.EllipticCurve.from_tau(1j))
        sig = cs.MeromorphicTwoForm(S, p)
        z = E.to_point(*rng.uniform(0, 1, 2))
        if min(abs(z), abs(z - p)) < 0.05 * abs(w1):
            z += 0.1 * E.omega2 + 0.07 * E.omega1
        ell = max(abs(sig.eta(z + E.omega1) - sig.eta(z)), abs(sig.eta(z + E.omega2) - sig.eta(z)))
        odd = abs(E.zeta(z) + E.zeta(-z))
        worst = max(worst, E.legendre_defect(), float(ell) / max(1.0, abs(sig.eta(z))), float(odd))
    return worst


def check_residues(cfg, rng) -> float:
    sig = cfg.sigma()
    comps = sig.components()
    worst = abs(sum(c.residue_sign for c in comps))
    for c in comps:
        worst = max(worst, abs(cs.contour_residue(sig, c) - cs.residue_of_sigma(sig, c)))
    return float(worst)


def _sl_form(cfg, rng, S):
    return cf.random_form(S, 1, 1, min(cfg.fourier_k, 2), rng)


def check_stokes_leray(cfg, rng) -> float:
    sig = cfg.sigma()
    worst = 0.0
    for _ in range(cfg.trials):
        u = _sl_form(cfg, rng, sig.surface)
        worst = max(worst, cs.stokes_leray_check(sig, u, cfg.scheme()).defect)
    return worst


def _stokes_leray_quadrature(cfg, rng, depth):
    sig = cfg.sigma()
    r = cs.stokes_leray_check(sig, _sl_form(cfg, rng, sig.surface), cfg.scheme(depth), stall_tol=np.inf)
    return r.lhs, r.rhs, r.defect


def _identity_data(cfg, rng, sig):
    G = cfg.complex_group()
    K = cfg.fourier_k if G.is_abelian else min(cfg.fourier_k, 1)
    S = sig.surface
    A = cf.random_form(S, 1, G.n, K, rng, 0.5)
    e1 = cf.random_form(S, 0, G.n, K, rng, 0.5)
    e2 = cf.random_form(S, 0, G.n, K, rng, 0.5)
    a = cf.random_form(S, 1, G.n, K, rng, 0.5)
    return A, e1, e2, a


def _variation_quadrature(cfg, rng, depth):
    sig = cfg.sigma()
    A, e1, _, a = _identity_data(cfg, rng, sig)
    sch = cfg.scheme(depth)
    dh = cs.hamiltonian_variation_c(sig, A, e1, a, sch)
    w = cs.symplectic_Wc(sig, a, cs.gauge_direction_c(A, e1), sch)
    return dh, w, _rel(dh - w, dh, w)


def _extension_quadrature(cfg, rng, depth):
    sig = cfg.sigma()
    A, e1, e2, _ = _identity_data(cfg, rng, sig)
    t = cs.extension_terms_c(sig, A, e1, e2, cfg.scheme(depth))
    return t.bracket, t.hamiltonian + t.cocycle, t.residual


def _trials_of(quad):
    def run(cfg, rng):
        return max((quad(cfg, rng, cfg.quad_depth)[2] for _ in range(cfg.trials)), default=0.0)
    return run


def check_polar_terms(cfg, rng) -> float:
    sig = cfg.sigma()
    worst = 0.0
    for _ in range(cfg.trials):
        A, e1, e2, _ = _identity_data(cfg, rng, sig)
        c12, c21 = cs.cocycle_c(sig, e1, e2), cs.cocycle_c(sig, e2, e1)
        const = cf.constant_form(sig.surface, 0, [random_algebra_matrix(cfg.complex_group(), rng)])
        h = cs.hamiltonian_c(sig, A, e1, cfg.scheme())
        p = cs.dual_pairing_c(sig, cs.momentum_c(sig, A), e1, scheme=cfg.scheme())
        worst = max(worst, _rel(c12 + c21, c12), abs(cs.cocycle_c(sig, e1, const)), _rel(h - p, h, p))
    return worst


def _abelian_pair(cfg, rng, sig):
    K = cfg.fourier_k
    return (cf.random_form(sig.surface, 1, 1, K, rng), cf.random_form(sig.surface, 0, 1, K, rng))


def check_jacobian_invariance(cfg, rng) -> float:
    sig = cfg.sigma()
    worst = 0.0
    for _ in range(cfg.trials):
        A, _ = _abelian_pair(cfg, rng, sig)
        base = [cs.jacobian_class(A.restrict(*_angles(sig, c))) for c in sig.components()]
        for _ in range(50):
            phi = cf.random_form(sig.surface, 0, 1, cfg.fourier_k, rng, scale=1e-2)
            shifted = A + cf.dbar(phi)
            for c, b in zip(sig.components(), base):
                worst = max(worst, abs(cs.jacobian_class(shifted.restrict(*_angles(sig, c))) - b))
        slopes = cs.leaves.harmonic_shift_slope(sig, A, 1.0)
        worst = max(worst, max((abs(s - 1.0) for s in slopes), default=0.0))
    return worst


def _angles(sig, comp):
    return tuple(float(v) for v in sig.surface.E1.to_angles(comp.location))


def check_leaf_invariance(cfg, rng) -> float:
    sig = cfg.sigma()
    worst = 0.0
    for _ in range(cfg.trials):
        A, eps = _abelian_pair(cfg, rng, sig)
        eps = cs.vanish_on_polar_set(sig, eps)
        worst = max(worst, cs.leaf_invariance_check(sig, A, eps))
    return worst


def check_leaf_control(cfg, rng) -> float:
    """Shortfall of the restriction velocity below 1e-6 for generic eps (0 when it moves)."""
    sig = cfg.sigma()
    worst = 0.0
    for _ in range(cfg.trials):
        A, eps = _abelian_pair(cfg, rng, sig)
        if cfg.fourier_k == 0:
            eps = cf.mode_form(sig.surface, 0, 0, (0, 0, 1, 0), 1.0)
        v = cs.leaf_velocity(sig, A, cs.gauge_direction_c(A, eps))
        worst = max(worst, max(0.0, 1e-6 - min(v.restriction_velocity, default=1.0)))
    return worst


def check_harmonic_pairing(cfg, rng) -> float:
    sig = cfg.sigma()
    ker = cs.restriction_kernel(sig)
    worst = float(abs(abs(ker[0, 0]) - 1.0) + abs(ker[1, 0])) if ker.shape == (2, 1) else 1.0
    k = cs.leaves.harmonic_form(sig, complex(ker[0, 0]), complex(ker[1, 0]))
    worst = max(worst, abs(cs.harmonic_leaf_pairing(sig, k, k).value))
    closed = cs.MeromorphicTwoForm.closed(sig.surface)
    for _ in range(max(cfg.trials, 1)):
        a1, a2, b1, b2 = rng.standard_normal(4) + 1j * rng.standard_normal(4)
        a = cs.leaves.harmonic_form(closed, a1, a2)
        b = cs.leaves.harmonic_form(closed, b1, b2)
        worst = max(worst, cs.leaves.cohomological_vs_symplectic(closed, a, b, cfg.scheme()))
    return worst


CHECKS = {c.name: c for c in [
    Check("stokes-exactness", "discrete Stokes formula", "real", 1e-13, check_stokes),
    Check("real-variation", "gauge Hamiltonian generates the gauge action", "real", 1e-10,
          check_real_variation),
    Check("real-fd-slope", "gauge Hamiltonian finite-difference slope", "real", 1e-6, check_real_fd_slope),
    Check("real-extension", "Poisson bracket of gauge Hamiltonians and boundary cocycle", "real", 1e-10,
          check_real_extension),
    Check("closed-cocycle", "cocycle vanishes without boundary", "real", 0.0, check_closed_cocycle),
    Check("dual-pairing", "momentum map pairing reproduces the Hamiltonian", "real", 1e-12,
          check_dual_pairing),
    Check("momentum-bracket", "equivariance of the momentum map up to the cocycle", "real", 1e-10,
          check_momentum_bracket),
    Check("leaf-labels", "boundary holonomy classes label symplectic leaves", "real", 1e-10,
          check_leaf_labels),
    Check("relation-gate", "fundamental group relation on holonomies", "real", 0.0, check_relation_gate),
    Check("weierstrass", "Legendre relation and ellipticity of eta_p", "complex", 1e-10, check_weierstrass),
    Check("residues", "residue of sigma along the polar curves", "complex", 1e-8, check_residues),
    Check("stokes-leray", "Stokes-Leray formula for sigma", "stokes-leray", 1e-3, check_stokes_leray,
          _stokes_leray_quadrature),
    Check("complex-variation", "complex gauge Hamiltonian generates the gauge action", "complex", 1e-3,
          _trials_of(_variation_quadrature), _variation_quadrature),
    Check("complex-extension", "Poisson bracket of complex gauge Hamiltonians and polar cocycle",
          "complex", 1e-3, _trials_of(_extension_quadrature), _extension_quadrature),
    Check("polar-terms", "polar cocycle antisymmetry and momentum pairing", "complex", 1e-10,
          check_polar_terms),
    Check("jacobian-invariance", "Jacobian class of the polar restriction", "complex", 1e-12,
          check_jacobian_invariance),
    Check("leaf-invariance", "restriction to the polar curve is constant on leaves", "complex", 1e-8,
          check_leaf_invariance),
    Check("leaf-control", "gauge directions not vanishing on the polar curve move the restriction",
          "complex", 0.0, check_leaf_control),
    Check("harmonic-pairing", "pairing on the kernel of restriction to the polar curve", "complex", 1e-6,
          check_harmonic_pairing),
]}


def _selected(suite: str) -> list:
    if suite == "all":
        return list(CHECKS.values())
    if suite == "complex":
        return [c for c in CHECKS.values() if c.suite in ("complex", "stokes-leray")]
    return [c for c in CHECKS.values() if c.suite == suite]


def _threads() -> int:
    raw = os.environ.get(THREADS_ENV, "1")
    try:
        return max(1, int(raw))
    except ValueError as exc:
        raise ConfigError(f"{THREADS_ENV} must be an integer, got {raw!r}") from exc


def _run_one(cfg: SuiteConfig, check: Check) -> CheckReport:
    tol = float(cfg.tolerances.get(check.name, check.tolerance))
    t0 = time.perf_counter()
    residual = float(check.run(cfg, _rng(cfg, check.name)))
    runtime = time.perf_counter() - t0
    return CheckReport(check.name, check.anchor, residual, tol, bool(residual <= tol), runtime)


def run_suite(cfg: SuiteConfig) -> list:
    """One CheckReport per check of the configured suite; empty when trials == 0."""
    cfg.validate()
    if cfg.trials == 0:
        return []
    checks = _selected(cfg.suite)
    workers = min(_threads(), len(checks))
    if workers <= 1:
        return [_run_one(cfg, c) for c in checks]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(lambda c: _run_one(cfg, c), checks))


def quadrature_checks() -> list:
    return [name for name, c in CHECKS.items() if c.quadrature is not None]


def convergence_table(cfg: SuiteConfig, check_id: str, levels) -> list:
    """Rows (level, lhs, rhs, defect) for one random instance of a quadrature check."""
    cfg.validate()
    check = CHECKS.get(check_id)
    if check is None:
        raise ConfigError(f"unknown check {check_id!r}")
    if check.quadrature is None:
        raise ConfigError(f"{check_id} is exact, not quadrature-based; choose from {quadrature_checks()}")
    levels = [int(v) for v in levels]
    if not levels or min(levels) < 0 or max(levels) > 8:
        raise ConfigError("levels must lie in 0..8")
    rows = []
    for L in levels:
        lhs, rhs, defect = check.quadrature(cfg, _rng(cfg, check.name), L)
        rows.append((L, complex(lhs), complex(rhs), float(defect)))
    return rows


# -- output -------------------------------------------------------------------------------------

def report_json(cfg: SuiteConfig, reports: list) -> str:
    doc = {
        "schema_version": SCHEMA_VERSION,
        "config": _config_dict(cfg),
        "passed": all(r.passed for r in reports),
        "checks": [r.as_dict() for r in reports],
    }
    return json.dumps(doc, indent=2)


def report_csv(reports: list) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["name", "anchor", "max_residual", "tolerance", "pass", "runtime"])
    for r in reports:
        w.writerow([r.name, r.anchor, repr(r.max_residual), repr(r.tolerance), r.passed, f"{r.runtime:.3f}"])
    return buf.getvalue()


def table_csv(rows: list) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["level", "lhs_re", "lhs_im", "rhs_re", "rhs_im", "defect"])
    for L, lhs, rhs, d in rows:
        w.writerow([L, repr(lhs.real), repr(lhs.imag), repr(rhs.real), repr(rhs.imag), repr(d)])
    return buf.getvalue()


def table_json(check_id: str, rows: list) -> str:
    return json.dumps({"schema_version": SCHEMA_VERSION, "check": check_id,
                       "rows": [{"level": L, "lhs": [lhs.real, lhs.imag], "rhs": [rhs.real, rhs.imag],
                                 "defect": d} for L, lhs, rhs, d in rows]}, indent=2)


def _config_dict(cfg: SuiteConfig) -> dict:
    def c(z):
        z = complex(z)
        return [z.real, z.imag]
    g = cfg.group
    return {"suite": cfg.suite, "group": None if g is None else {"kind": g.kind, "n": g.n},
            "genus": cfg.genus, "holes": cfg.holes, "refine": cfg.refine,
            "tau1": c(cfg.tau1), "tau2": c(cfg.tau2), "pole_p": c(cfg.pole_p),
            "fourier_k": cfg.fourier_k, "quad_depth": cfg.quad_depth,
            "trials": cfg.trials, "seed": cfg.seed, "tolerances": dict(sorted(cfg.tolerances.items()))}
