"""Verification campaigns for k Xi_{2n}: decomposition, classification and cross-checks."""

from __future__ import annotations

import itertools
import time
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Any, Callable

import numpy as np

from . import char_theory as ct
from . import fps_calculus as fps
from . import gf2_engine as ge
from .gf2 import Gf2Matrix
from .perm_core import (
    cycle_type,
    enumerate_fpf_involutions,
    sign,
    sylow2_subgroup,
    sylow2_sym,
)

SCHEMA_VERSION = 1
MAX_N = 5

CHECK_NAMES = (
    "component_count",
    "base_case",
    "no_projective_component",
    "perm_character_identity",
    "induced_sign_identity",
    "component_characters",
    "broue_correspondence",
    "vertex_structure",
    "alt_twist",
    "kappa_probe",
    "property_suites",
)


class UsageError(ValueError):
    """Input outside the supported range."""


def pair_coset_type(x, y) -> tuple[int, ...]:
    """The partition of n classifying the pair (x, y).

    Cycles of xy come in equal-length pairs; keeping one of each pair gives it.
    """
    return tuple(cycle_type(x * y)[::2])


# ------------------------------------------------------------- decomposition


@dataclass
class Decomposition:
    n: int
    module: ge.PermModule
    basis: ge.EndAlgebraBasis
    components: list[ge.Component]
    lifts: list[np.ndarray]
    precision: int


@lru_cache(maxsize=None)
def decomposition(n: int, precision: int = ge.DEFAULT_PRECISION) -> Decomposition:
    action = enumerate_fpf_involutions(2 * n)
    module = ge.PermModule(action)
    basis = ge.end_algebra_basis(module, pair_coset_type)
    comps = ge.decompose(module, basis)
    lifts = ge.lift_decomposition(basis, comps, precision)
    reps = [ct.class_representative(r) for r in ct.partitions(2 * n)]
    for comp, lift in zip(comps, lifts):
        if (1 << precision) <= 2 * comp.dimension:
            raise UsageError(f"precision 2^{precision} too small for dimension {comp.dimension}")
        comp.lifted = lift
        vals = ge.character_from_coeffs(basis, lift, reps, precision)
        comp.character = dict(zip(ct.partitions(2 * n), vals))
    return Decomposition(n, module, basis, comps, lifts, precision)


def identify(dec: Decomposition) -> None:
    """Attach Brauer-quotient dimensions, a vertex label and a matching phi_mu to each component."""
    n = dec.n
    specs = {mu: fps.vertex_spec(mu) for mu in fps.enumerate_mu(n)}
    phis = {mu: ct.phi_mu(mu) for mu in specs}
    for comp in dec.components:
        comp.brauer_data = {str(mu): ge.brauer_quotient(comp, vs.group, dec.module).dimension
                            for mu, vs in specs.items()}
        comp.vertex = vertex_from_brauer(comp.brauer_data, specs)
        comp.projective_brauer = {str(mu): brauer_module_is_projective(comp, mu, dec)
                                  for mu in specs if comp.brauer_data[str(mu)]}
        chi = ct.CharacterVector(2 * n, comp.character)
        comp.matches = [mu for mu, phi in phis.items() if phi == chi]
        comp.mu = comp.matches[0] if len(comp.matches) == 1 else None


def brauer_module_is_projective(comp: ge.Component, mu: fps.MuLabel, dec: Decomposition) -> bool:
    """Is the Brauer quotient of ``comp`` at Q_mu non-zero and projective over Nbar of W_mu?

    The quotient is the image of the idempotent restricted to Fix(Q_mu) x Fix(Q_mu), a
    submodule of k W_mu on which the set stabilizer of W_mu acts through Nbar.
    """
    W, sd, module, P = _broue_setup(mu)
    idx = [dec.module.action.index(m) for m in W.members]
    fixed = ge.brauer_quotient(comp, fps.vertex_spec(mu).group, dec.module, method="fixed")
    if sorted(idx) != fixed.fixed_points:
        raise ValueError(f"Fix(Q_mu) differs from W_mu for {mu}")
    sub = (comp.coeffs % 2)[comp.basis.labels[np.ix_(idx, idx)]]
    image = Gf2Matrix.from_dense(sub.astype(np.uint8)).row_basis()
    if image.nrows == 0:
        return False
    return ge.is_projective_over_2group(module, image, P)


@lru_cache(maxsize=None)
def _broue_setup(mu: fps.MuLabel):
    W = fps.build_W(mu)
    sd = fps.stabilizer_data(W)
    module = fps.member_module(W, sd.Nbar)
    return W, sd, module, sylow2_subgroup(sd.Nbar)


def vertex_from_brauer(bq: dict[str, int], specs: dict[fps.MuLabel, fps.VertexSpec]):
    """The candidate of strictly largest order among those with non-zero Brauer quotient."""
    live = [(vs.order, mu) for mu, vs in specs.items() if bq[str(mu)]]
    if not live:
        return None
    live.sort(key=lambda p: p[0], reverse=True)
    if len(live) > 1 and live[0][0] == live[1][0]:
        return None
    return live[0][1]


# ------------------------------------------------------------------ sections


def _check_n(n: int, lo: int = 1) -> None:
    if not lo <= n <= MAX_N:
        raise UsageError(f"n must be in {lo}..{MAX_N}, got {n}")


def cmd_enumerate(n: int) -> dict[str, Any]:
    _check_n(n)
    rows = []
    for mu in fps.enumerate_mu(n):
        W = fps.build_W(mu)
        vs = fps.vertex_spec(mu)
        rows.append({
            "mu": str(mu), "s": mu.s, "t": mu.t, "I": list(mu.I),
            "W_members": [str(m) for m in W.members],
            "vertex": vs.factors, "vertex_order": vs.order,
            "vertex_generators": [str(g) for g in vs.generators],
        })
    return {"n": n, "labels": rows}


def _component_row(comp: ge.Component, n: int) -> dict[str, Any]:
    vertex = getattr(comp, "vertex", None)
    return {
        "dimension": comp.dimension,
        "mu": str(comp.mu) if comp.mu is not None else None,
        "vertex": str(vertex) if vertex is not None else None,
        "vertex_order": fps.vertex_spec(vertex).order if vertex is not None else None,
        "vertex_generators": ([str(g) for g in fps.vertex_spec(vertex).generators]
                              if vertex is not None else []),
        "brauer_quotient_dims": dict(comp.brauer_data),
        "projective_brauer_quotient": dict(getattr(comp, "projective_brauer", {})),
        "character": {ct.cycle_type_key(r): int(v) for r, v in comp.character.items()},
        "idempotent_coefficients": [int(c) for c in comp.coeffs],
        "locality_span": comp.local_span,
    }


def cmd_decompose(n: int, precision: int = ge.DEFAULT_PRECISION) -> dict[str, Any]:
    _check_n(n, lo=2)
    dec = decomposition(n, precision)
    identify(dec)
    return {"n": n, "precision": precision,
            "endomorphism_basis": [list(inv) for inv in dec.basis.invariants],
            "components": [_component_row(c, n) for c in dec.components]}


def cmd_character(n: int | None = None, mu: fps.MuLabel | None = None) -> dict[str, Any]:
    if mu is None and n is None:
        raise UsageError("give n or mu")
    labels = [mu] if mu is not None else fps.enumerate_mu(n)
    if mu is not None:
        n = mu.n
    _check_n(n)
    rows = []
    for lab in labels:
        phi = ct.phi_mu(lab)
        rows.append({"mu": str(lab),
                     "constituents": [list(p) for p in ct.phi_constituents(lab.s, lab.t)],
                     "dimension": phi.dimension, "values": phi.to_json()})
    out = {"n": n, "classes": [ct.cycle_type_key(r) for r in ct.partitions(2 * n)], "rows": rows}
    if mu is None:
        total = ct.CharacterVector.zero(2 * n)
        for lab in labels:
            total = total + ct.phi_mu(lab)
        out["sum_equals_permutation_character"] = total == ct.perm_character_xi(2 * n)
    return out


# -------------------------------------------------------------------- checks


@dataclass
class CheckResult:
    status: str           # "pass" | "fail" | "skipped"
    detail: Any = None


def _result(ok: bool, detail: Any = None) -> CheckResult:
    return CheckResult("pass" if ok else "fail", detail)


def check_component_count(dec: Decomposition) -> CheckResult:
    count = len(dec.components)
    return _result(count == dec.n // 2 + 1, {"components": count, "expected": dec.n // 2 + 1})


def check_base_case() -> CheckResult:
    dec = decomposition(2)
    dims = sorted(c.dimension for c in dec.components)
    image = fps.nbar_group(fps.V, dec.module.group)
    quotient_module = fps.member_module(fps.V, image)
    P = sylow2_subgroup(image)
    E = next(c for c in dec.components if c.dimension == 2)
    projective = ge.is_projective_over_2group(quotient_module, E.subspace(), P)
    return _result(dims == [1, 2] and projective and image.order() == 6,
                   {"dimensions": dims, "quotient_order": image.order(), "E_projective": projective})


def check_no_projective(dec: Decomposition) -> CheckResult:
    P = sylow2_sym(2 * dec.n)
    flags = [ge.is_projective_over_2group(dec.module, c.subspace(), P) for c in dec.components]
    return _result(not any(flags), {"sylow_order": P.order(), "projective": flags})


def check_perm_character(two_ns) -> CheckResult:
    bad = [d for d in two_ns
           if ct.perm_character_xi(d) != ct.character_sum(ct.lambda_set(d, 0), d)]
    return _result(not bad, {"degrees": list(two_ns), "failures": bad})


def check_irs(pairs) -> CheckResult:
    bad = [(a, m) for a, m in pairs if not ct.irs_character(a, m).equal]
    return _result(not bad, {"pairs": [list(p) for p in pairs], "failures": bad})


def check_component_characters(dec: Decomposition) -> CheckResult:
    matched = [[str(mu) for mu in c.matches] for c in dec.components]
    labels = [m[0] for m in matched if len(m) == 1]
    ok = all(len(m) == 1 for m in matched) and len(set(labels)) == len(matched)
    return _result(ok, {"matches": matched, "precision": dec.precision})


def broue_table(n: int) -> list[dict[str, Any]]:
    rows = []
    for mu in fps.enumerate_mu(n):
        W = fps.build_W(mu)
        sd = fps.stabilizer_data(W)
        proj = fps.projective_components(W, sd.Nbar)
        rows.append({"mu": str(mu), "nbar_order": sd.Nbar.order(),
                     "projective_dims": [c.dimension for c in proj],
                     "expected_dim": 2 ** len(mu.I), "expected_nbar": 6 ** len(mu.I)})
    return rows


def check_broue(dec: Decomposition) -> CheckResult:
    rows = broue_table(dec.n)
    ok = True
    for row in rows:
        with_vertex = [c for c in dec.components if str(c.vertex) == row["mu"]]
        row["components_with_vertex"] = len(with_vertex)
        row["brauer_dim_at_vertex"] = [c.brauer_data[row["mu"]] for c in with_vertex]
        row["nonzero_brauer_components"] = sum(1 for c in dec.components if c.brauer_data[row["mu"]])
        row["projective_brauer_components"] = sum(
            1 for c in dec.components if c.projective_brauer.get(row["mu"], False))
        ok &= row["projective_brauer_components"] == 1
        ok &= row["projective_dims"] == [row["expected_dim"]]
        ok &= row["nbar_order"] == row["expected_nbar"]
        ok &= len(with_vertex) == len(row["projective_dims"]) == 1
        ok &= row["brauer_dim_at_vertex"] == [row["expected_dim"]]
    ok &= all(c.vertex is not None for c in dec.components)
    return _result(bool(ok), rows)


def check_vertex_structure(n: int) -> CheckResult:
    rows = []
    ok = True
    mus = fps.enumerate_mu(n)
    Ws = {mu: fps.build_W(mu) for mu in mus}
    for mu in mus:
        vs = fps.vertex_spec(mu)
        W = Ws[mu]
        sd = fps.stabilizer_data(W)
        in_alt = all(sign(g) == 1 for g in vs.generators)
        centralizes = all(g * m == m * g for g in vs.generators for m in W.members)
        row = {"mu": str(mu), "order": vs.order, "formula": fps.vertex_order_formula(mu),
               "sylow_of_stabilizer": sd.Q.order(), "in_alt": in_alt, "s": mu.s,
               "closed": fps.is_closed(W, sd.Q), "size_two_orbits": fps.size_two_orbits(W),
               "centralizes_W": centralizes}
        ok &= row["order"] == row["formula"] == row["sylow_of_stabilizer"]
        ok &= in_alt == (mu.s == 0)
        ok &= row["closed"] and centralizes and row["size_two_orbits"] == mu.s
        rows.append(row)
    distinct = all(not fps.equivalent(Ws[a], Ws[b]) for a, b in itertools.combinations(mus, 2))
    return _result(bool(ok and distinct), {"labels": rows, "pairwise_inequivalent": distinct})


def check_alt_twist(ts) -> CheckResult:
    res = {t: ct.alt_twist_check(t) for t in ts}
    return _result(all(res.values()), {str(t): v for t, v in res.items()})


def check_kappa() -> CheckResult:
    has_proj = fps.kappa_probe(0)
    sanity = bool(fps.projective_components(fps.V, fps.stabilizer_data(fps.V).Nbar))
    return _result(not has_proj and sanity,
                   {"V0*V0_has_projective": has_proj, "V0_has_projective": sanity,
                    "note": "multiplicity-one use of each V_i is consistent with this result"})


def check_properties(n: int, dec: Decomposition | None) -> CheckResult:
    rng = np.random.default_rng(20240601)
    ranks_ok = True
    for shape in [(5, 7), (40, 30), (70, 130), (130, 70)]:
        A = Gf2Matrix.from_dense(rng.integers(0, 2, size=shape))
        R, _ = A.rref()
        ranks_ok &= A.rank() == R.rank() and R.rref()[0] == R
    laws = ge.check_decomposition(dec.module, dec.components) if dec is not None else {}
    top = min(2 * n, 8)
    hook_ok = all(ct.mn_character(lam, (1,) * d) == ct.hook_dimension(lam)
                  for d in range(1, 2 * n + 1) for lam in ct.partitions(d))
    orth_ok = True
    for d in range(1, top + 1):
        cd = ct.class_data(d)
        for rho, z in zip(cd.cycle_types, cd.centralizer_orders):
            orth_ok &= sum(ct.mn_character(lam, rho) ** 2 for lam in ct.partitions(d)) == z
    ok = ranks_ok and all(laws.values()) and hook_ok and orth_ok
    return _result(bool(ok), {"rank_roundtrip": bool(ranks_ok), "idempotent_laws": laws,
                              "mn_vs_hook": hook_ok, "orthogonality": bool(orth_ok)})


# -------------------------------------------------------------------- report


@dataclass
class VerificationReport:
    n: int
    components: list[dict[str, Any]]
    checks: dict[str, CheckResult]
    timings: dict[str, float] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(c.status != "fail" for c in self.checks.values())

    def to_json(self, with_timings: bool = False) -> dict[str, Any]:
        out = {
            "schema": SCHEMA_VERSION,
            "n": self.n,
            "status": "pass" if self.passed else "fail",
            "components": self.components,
            "checks": {k: {"status": v.status, "detail": _jsonable(v.detail)}
                       for k, v in self.checks.items()},
        }
        if with_timings:
            out["timings"] = {k: round(v, 3) for k, v in self.timings.items()}
        return out


def _jsonable(obj: Any) -> Any:
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.bool_,)):
        return bool(obj)
    return obj


def cmd_verify(n: int, precision: int = ge.DEFAULT_PRECISION,
               skip_decompose: bool = False) -> VerificationReport:
    _check_n(n)
    checks: dict[str, CheckResult] = {}
    timings: dict[str, float] = {}

    def run(name: str, fn: Callable[[], CheckResult]) -> None:
        t0 = time.perf_counter()
        checks[name] = fn()
        timings[name] = time.perf_counter() - t0

    skipped = CheckResult("skipped", "decomposition skipped")
    dec = None
    if not skip_decompose:
        t0 = time.perf_counter()
        dec = decomposition(n, precision)
        identify(dec)
        timings["decompose"] = time.perf_counter() - t0

    pairs = [(a, m) for a in range(n + 1) for m in range(n + 1) if a + m == n and 2 * n <= 10]
    dec_checks = {
        "component_count": lambda: check_component_count(dec),
        "base_case": check_base_case,
        "no_projective_component": lambda: check_no_projective(dec),
        "component_characters": lambda: check_component_characters(dec),
        "broue_correspondence": lambda: check_broue(dec),
    }
    for name in CHECK_NAMES:
        if name in dec_checks:
            if dec is None:
                checks[name] = skipped
            else:
                run(name, dec_checks[name])
        elif name == "perm_character_identity":
            run(name, lambda: check_perm_character([2 * n]))
        elif name == "induced_sign_identity":
            run(name, lambda: check_irs(pairs))
        elif name == "vertex_structure":
            run(name, lambda: check_vertex_structure(n))
        elif name == "alt_twist":
            run(name, lambda: check_alt_twist(range(0, n // 2 + 1)))
        elif name == "kappa_probe":
            run(name, check_kappa)
        elif name == "property_suites":
            run(name, lambda: check_properties(n, dec))
    comps = [_component_row(c, n) for c in dec.components] if dec is not None else []
    return VerificationReport(n, comps, checks, timings)


# ----------------------------------------------------------------- rendering


def render_table(headers: list[str], rows: list[list[Any]]) -> str:
    cells = [[str(h) for h in headers]] + [[str(v) for v in r] for r in rows]
    widths = [max(len(r[i]) for r in cells) for i in range(len(headers))]
    lines = ["  ".join(c.rjust(w) for c, w in zip(r, widths)) for r in cells]
    lines.insert(1, "  ".join("-" * w for w in widths))
    return "\n".join(lines)
