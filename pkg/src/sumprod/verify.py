"""The inequality registry.

Every labelled sum-product bound is evaluated on a concrete set: exact
pass/fail where the constant is explicit, an exact-rational tightness
ratio where the statement hides a constant.  Also houses the executable
low-L construction, the Katz-Koester inclusion test and the trace of the
|A|^{4/3+c} argument at toy scale.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property

from ._approx import log2_frac, product_pow
from .counting import sigma_count, solymosi_cluster_report
from .exactset import (
    DomainError,
    FiniteSet,
    ResourceError,
    Scalar,
    format_scalar,
)
from .stats import (
    DoublingProfile,
    d_upper,
    dyadic_slices,
    energy,
    lambda_set,
    productset,
    quotientset,
    rep_counts,
    sumset,
)

#: exponent bump of the max{|A+A|,|AA|} >= |A|^{4/3+c} bound, just under
#: the admissible supremum 1/20598
SOLPLUS_C = Fraction(1, 20598) - Fraction(1, 10**6)

QUOTIENT_ENERGY_CAP = 2000


@dataclass(frozen=True)
class InequalityReport:
    """One evaluated registry entry.

    For hidden-constant entries `passed` is None and lhs/rhs/ratio are
    deterministic decimal renderings of the (possibly irrational) values.
    """

    id: str
    lhs: Fraction | None
    rhs: Fraction | None
    ratio: Fraction | None
    explicit: bool
    passed: bool | None
    inputs: str
    error: str | None = None

    def to_json_dict(self) -> dict:
        if self.error is not None:
            return {"id": self.id, "error": self.error}
        return {
            "id": self.id,
            "lhs": format_scalar(self.lhs),
            "rhs": format_scalar(self.rhs),
            "ratio": format_scalar(self.ratio),
            "explicit": self.explicit,
            "pass": self.passed,
            "inputs": self.inputs,
        }


def report_json(reports) -> str:
    """Canonical JSON rendering (stable key order, compact separators)."""
    return json.dumps([r.to_json_dict() for r in reports],
                      sort_keys=True, separators=(",", ":"))


def _digest(A: FiniteSet) -> str:
    h = hashlib.sha256(repr(A).encode()).hexdigest()[:10]
    return f"|A|={len(A)};min={format_scalar(A.min())};max={format_scalar(A.max())};{h}"


class SetContext:
    """Caches the basic statistics of one set across registry entries."""

    def __init__(self, A: FiniteSet):
        self.A = A
        self.n = len(A)

    @cached_property
    def nsum(self) -> int:
        return len(sumset(self.A, self.A))

    @cached_property
    def nprod(self) -> int:
        return len(productset(self.A, self.A))

    @cached_property
    def nquot(self) -> int:
        return len(quotientset(self.A, self.A))

    @cached_property
    def K(self) -> Fraction:
        return Fraction(min(self.nprod, self.nquot), self.n)

    @cached_property
    def Ex(self) -> int:
        return energy(self.A, mode="mul")

    @cached_property
    def Ep(self) -> int:
        return energy(self.A, mode="add")

    @cached_property
    def dhat(self) -> DoublingProfile:
        return d_upper(self.A)

    @cached_property
    def log2n(self) -> Fraction:
        return log2_frac(Fraction(self.n))

    @cached_property
    def ceil_log2n(self) -> int:
        return (self.n - 1).bit_length()

    @cached_property
    def L_quot(self) -> Fraction:
        return max(Fraction(1),
                   Fraction(self.nsum) ** 2 * self.nquot / Fraction(self.n) ** 4)

    @cached_property
    def L_prod(self) -> Fraction:
        return max(Fraction(1),
                   Fraction(self.nsum) ** 2 * self.nprod / Fraction(self.n) ** 4)


def _need(ctx: SetContext, min_size=2, nonzero=False, positive=False):
    if ctx.n < min_size:
        raise DomainError(f"entry requires |A| >= {min_size}")
    if nonzero and ctx.A.has_zero():
        raise DomainError("entry requires 0 not in A")
    if positive and not ctx.A.is_positive():
        raise DomainError("entry requires positive elements")


def _explicit(rid, ctx, lhs: Fraction, rhs: Fraction) -> InequalityReport:
    lhs, rhs = Fraction(lhs), Fraction(rhs)
    return InequalityReport(id=rid, lhs=lhs, rhs=rhs, ratio=lhs / rhs,
                            explicit=True, passed=lhs >= rhs,
                            inputs=_digest(ctx.A))


def _ratio(rid, ctx, lhs: Fraction, factors) -> InequalityReport:
    """Hidden-constant entry: rhs = prod base^exp, rendered not asserted."""
    lhs = Fraction(lhs)
    rhs = product_pow(factors)
    ratio = product_pow([(lhs, Fraction(1))]
                        + [(b, -Fraction(e)) for b, e in factors])
    return InequalityReport(id=rid, lhs=lhs, rhs=rhs, ratio=ratio,
                            explicit=False, passed=None, inputs=_digest(ctx.A))


# -- registry entries ------------------------------------------------------

def _soly_prod(ctx, params):
    _need(ctx)
    lhs = Fraction(ctx.nsum) ** 2 * ctx.nprod
    rhs = Fraction(ctx.n**4, 4 * ctx.ceil_log2n)
    return _explicit("SOLY-PROD", ctx, lhs, rhs)


def _soly_quot(ctx, params):
    _need(ctx)
    lhs = Fraction(ctx.nsum) ** 2 * ctx.nquot
    rhs = Fraction(ctx.n**4, 4 * ctx.ceil_log2n)
    return _explicit("SOLY-QUOT", ctx, lhs, rhs)


def _soly_max(ctx, params):
    _need(ctx)
    lhs = Fraction(max(ctx.nsum, ctx.nprod))
    return _ratio("SOLY-MAX", ctx, lhs,
                  [(Fraction(ctx.n), Fraction(4, 3)),
                   (ctx.log2n, Fraction(-1, 3))])


def _cor_sol(ctx, params):
    _need(ctx)
    return _ratio("COR-SOL", ctx, Fraction(ctx.nsum),
                  [(Fraction(ctx.n), Fraction(3, 2)), (ctx.K, Fraction(-1, 2))])


def _prev(ctx, params):
    _need(ctx)
    return _ratio("PREV", ctx, Fraction(ctx.nsum),
                  [(Fraction(ctx.n), Fraction(58, 37)), (ctx.K, Fraction(-42, 37))])


def _prev_da(ctx, params):
    _need(ctx, nonzero=True)
    return _ratio("PREV-DA", ctx, Fraction(ctx.nsum),
                  [(Fraction(ctx.n), Fraction(58, 37)),
                   (ctx.dhat.d_upper, Fraction(-21, 37))])


def _main_a(ctx, params):
    _need(ctx)
    return _ratio("MAIN-A", ctx, Fraction(ctx.nsum),
                  [(Fraction(ctx.n), Fraction(19, 12)), (ctx.K, Fraction(-5, 6))])


def _main_b(ctx, params):
    _need(ctx)
    return _ratio("MAIN-B", ctx, Fraction(ctx.nsum),
                  [(Fraction(ctx.n), Fraction(49, 32)), (ctx.K, Fraction(-19, 32))])


def _cs_subs(ctx, params):
    _need(ctx, nonzero=True)
    A1 = params.get("A1", ctx.A)
    A2 = params.get("A2", ctx.A)
    if not (A1 <= ctx.A and A2 <= ctx.A):
        raise DomainError("CS-SUBS requires A1, A2 subsets of A")
    lhs = Fraction(energy(A1, A2, "mul")) * min(ctx.nquot, ctx.nprod)
    rhs = Fraction(len(A1)) ** 2 * Fraction(len(A2)) ** 2
    return _explicit("CS-SUBS", ctx, lhs, rhs)


def _levelset(ctx, params):
    B = params.get("B", ctx.A)
    tau = Fraction(params.get("tau", 2))
    if min(len(ctx.A), len(B)) < 2:
        raise DomainError("LEVELSET requires min size 2")
    if tau < 1:
        raise DomainError("LEVELSET requires tau >= 1")
    counts = rep_counts(ctx.A, B, "div")
    lhs = Fraction(sum(1 for c in counts.values() if c >= tau))
    nsumB = len(sumset(B, B))
    rhs = Fraction(ctx.nsum * nsumB) / tau**2
    return InequalityReport(id="LEVELSET", lhs=lhs, rhs=rhs,
                            ratio=lhs / rhs, explicit=False, passed=None,
                            inputs=_digest(ctx.A))


def _energy_sumset(ctx, params):
    B = params.get("B", ctx.A)
    _need(ctx, nonzero=True)
    if B.has_zero():
        raise DomainError("entry requires 0 not in B")
    lhs = Fraction(energy(ctx.A, B, "mul"))
    nsumB = len(sumset(B, B))
    logm = log2_frac(Fraction(min(len(ctx.A), len(B))))
    if logm == 0:
        raise DomainError("ENERGY-SUMSET requires min size 2")
    return _ratio("ENERGY-SUMSET", ctx, lhs,
                  [(Fraction(ctx.nsum * nsumB), Fraction(1)), (logm, Fraction(1))])


def _da_level(ctx, params):
    _need(ctx, nonzero=True)
    B = params.get("B", ctx.A)
    tau = Fraction(params.get("tau", 2))
    if tau < 1:
        raise DomainError("DA-LEVEL requires tau >= 1")
    counts = rep_counts(ctx.A, B, "add")
    lhs = Fraction(sum(1 for c in counts.values() if c >= tau))
    rhs = ctx.dhat.d_upper * ctx.n * Fraction(len(B)) ** 2 / tau**3
    return InequalityReport(id="DA-LEVEL", lhs=lhs, rhs=rhs, ratio=lhs / rhs,
                            explicit=False, passed=None, inputs=_digest(ctx.A))


def _gen_sigma(ctx, params):
    _need(ctx, nonzero=True)
    A1 = params.get("A1", ctx.A)
    A2 = params.get("A2", ctx.A)
    A3 = params.get("A3", ctx.A)
    coeffs = params.get("coeffs", (1, 1, -1))
    sig = sigma_count(coeffs[0], A1, coeffs[1], A2, coeffs[2], A3)
    d1 = d_upper(A1).d_upper
    lhs = Fraction(sig.count)
    rep = _ratio("GEN-SIGMA", ctx, max(lhs, Fraction(1)),
                 [(d1, Fraction(1, 3)),
                  (Fraction(len(A1)), Fraction(1, 3)),
                  (Fraction(len(A2)), Fraction(2, 3)),
                  (Fraction(len(A3)), Fraction(2, 3))])
    # keep the genuine (possibly zero) solution count in the report
    return InequalityReport(id="GEN-SIGMA", lhs=lhs, rhs=rep.rhs,
                            ratio=rep.ratio if lhs > 0 else Fraction(0),
                            explicit=False, passed=None, inputs=rep.inputs)


def _er(ctx, params):
    _need(ctx)
    lhs = Fraction(ctx.Ep) ** 4
    return _ratio("ER", ctx, lhs,
                  [(Fraction(min(ctx.nprod, ctx.nquot)), Fraction(1)),
                   (Fraction(ctx.n), Fraction(10)),
                   (ctx.log2n, Fraction(1))])


def _smallmd_energy(ctx, params):
    _need(ctx, nonzero=True)
    return _ratio("SMALLMD-ENERGY", ctx, Fraction(ctx.Ex),
                  [(ctx.K, Fraction(1, 4)),
                   (Fraction(ctx.n), Fraction(5, 8)),
                   (Fraction(ctx.nsum), Fraction(3, 2)),
                   (ctx.log2n, Fraction(3, 4))])


def _smallmd(ctx, params):
    _need(ctx)
    return _ratio("SMALLMD", ctx, Fraction(ctx.nsum),
                  [(Fraction(ctx.n), Fraction(19, 12)),
                   (ctx.K, Fraction(-5, 6)),
                   (ctx.log2n, Fraction(-1, 2))])


def _small2(ctx, params):
    _need(ctx)
    return _ratio("SMALL2", ctx, Fraction(ctx.nsum),
                  [(Fraction(ctx.n), Fraction(49, 32)),
                   (ctx.K, Fraction(-19, 32))])


def _prop_crit(ctx, params, product_variant: bool):
    _need(ctx, nonzero=True)
    rid = "PROP-CRIT-P" if product_variant else "PROP-CRIT-Q"
    cap = params.get("cap", QUOTIENT_ENERGY_CAP)
    big = productset(ctx.A, ctx.A) if product_variant else quotientset(ctx.A, ctx.A)
    if len(big) > cap:
        raise ResourceError(f"{rid}: |derived set| = {len(big)} exceeds cap {cap}")
    L = ctx.L_prod if product_variant else ctx.L_quot
    lhs = Fraction(energy(big, mode="mul"))
    rhs = Fraction(ctx.Ex) ** 3 / (L**32 * Fraction(ctx.n) ** 4)
    return InequalityReport(id=rid, lhs=lhs, rhs=rhs, ratio=lhs / rhs,
                            explicit=False, passed=None, inputs=_digest(ctx.A))


def _solplus(ctx, params):
    _need(ctx)
    lhs = Fraction(max(ctx.nsum, min(ctx.nprod, ctx.nquot)))
    return _ratio("SOLPLUS", ctx, lhs,
                  [(Fraction(ctx.n), Fraction(4, 3) + SOLPLUS_C)])


def _lemma3(ctx, params):
    _need(ctx, nonzero=True, positive=True)
    tau = params.get("tau")
    if tau is None:
        rep = smallL_construction(ctx.A)
        if rep.tau is None:
            raise DomainError("LEMMA3: no qualifying dyadic slice")
        tau = rep.tau
    M = params.get("M", 2)
    S_sub = params.get("S_sub")
    pair_budget = params.get("pair_budget", 200_000)
    cluster = solymosi_cluster_report(ctx.A, tau, M, S_sub=S_sub,
                                      pair_budget=pair_budget)
    lhs = Fraction(ctx.nsum) ** 2
    both = all(cluster.conditions_ok)
    rhs = cluster.lemma_rhs if (both and cluster.lemma_rhs is not None) else Fraction(0)
    passed = True
    if both:
        passed = bool(cluster.lemma_pass) and cluster.sums_total <= ctx.nsum**2
    if not cluster.sums_in_box:
        passed = False
    ratio = lhs / rhs if rhs > 0 else lhs
    return InequalityReport(id="LEMMA3", lhs=lhs, rhs=rhs, ratio=ratio,
                            explicit=True, passed=passed, inputs=_digest(ctx.A))


REGISTRY = {
    "SOLY-PROD": _soly_prod,
    "SOLY-QUOT": _soly_quot,
    "SOLY-MAX": _soly_max,
    "COR-SOL": _cor_sol,
    "PREV": _prev,
    "PREV-DA": _prev_da,
    "MAIN-A": _main_a,
    "MAIN-B": _main_b,
    "CS-SUBS": _cs_subs,
    "LEVELSET": _levelset,
    "ENERGY-SUMSET": _energy_sumset,
    "DA-LEVEL": _da_level,
    "GEN-SIGMA": _gen_sigma,
    "ER": _er,
    "SMALLMD-ENERGY": _smallmd_energy,
    "SMALLMD": _smallmd,
    "SMALL2": _small2,
    "PROP-CRIT-Q": lambda ctx, p: _prop_crit(ctx, p, False),
    "PROP-CRIT-P": lambda ctx, p: _prop_crit(ctx, p, True),
    "SOLPLUS": _solplus,
    "LEMMA3": _lemma3,
}


def evaluate(rid: str, A: FiniteSet, params: dict | None = None,
             ctx: SetContext | None = None) -> InequalityReport:
    """Evaluate one registry entry on A."""
    if rid not in REGISTRY:
        raise DomainError(f"unknown registry id {rid!r}")
    if ctx is None:
        ctx = SetContext(A)
    return REGISTRY[rid](ctx, params or {})


def verify_suite(A: FiniteSet, ids: list[str] | None = None,
                 params_map: dict | None = None) -> list[InequalityReport]:
    """Evaluate all (or selected) entries, aggregating per-entry errors."""
    ids = sorted(REGISTRY) if ids is None else list(ids)
    params_map = params_map or {}
    ctx = SetContext(A)
    reports = []
    for rid in ids:
        try:
            reports.append(evaluate(rid, A, params_map.get(rid), ctx=ctx))
        except (DomainError, ResourceError) as exc:
            reports.append(InequalityReport(id=rid, lhs=None, rhs=None,
                                            ratio=None, explicit=False,
                                            passed=None, inputs=_digest(A),
                                            error=str(exc)))
    return reports


# -- low-L construction (Dirichlet slice + energy split) -------------------

@dataclass(frozen=True)
class SmallLReport:
    """Selected dyadic slice and the per-fiber lower-bound ratios.

    S_doubleprime holds the floor(|S_tau|/2) slopes of smallest fiber
    additive energy; S_prime is the rest (both equal S_tau when it is a
    singleton).  The *_ratio fields compare against the tau^3 / tau^2
    scales of the fiber bounds; they carry no hidden constants.
    """

    L: Fraction
    L_prod: Fraction
    tau: Scalar | None
    S_tau: FiniteSet | None
    S_prime: FiniteSet | None
    S_doubleprime: FiniteSet | None
    min_additive_energy_ratio: Fraction | None
    min_quotient_ratio: Fraction | None
    min_product_ratio: Fraction | None
    diagnostics: dict = field(default_factory=dict)


def smallL_construction(A: FiniteSet) -> SmallLReport:
    """Pick the dyadic slice of maximal |S_tau| tau^2 above the energy
    threshold and split it by fiber additive energy."""
    if len(A) < 2:
        raise DomainError("construction requires |A| >= 2")
    if A.has_zero():
        raise DomainError("construction requires 0 not in A")
    ctx = SetContext(A)
    Ex = ctx.Ex
    threshold = Fraction(Ex, 2 * ctx.n**2)
    slices = [s for s in dyadic_slices(A) if s.sizes]
    mass_all = sum(len(s.sizes) * s.tau**2 for s in slices)
    qualifying = [s for s in slices if s.tau >= threshold]
    mass_qual = sum(len(s.sizes) * s.tau**2 for s in qualifying)
    diagnostics = {
        "threshold": threshold,
        "energy_mul": Ex,
        "slice_mass_all": mass_all,
        "slice_mass_qualifying": mass_qual,
        "n_slices": len(dyadic_slices(A)),
    }
    if not qualifying:
        return SmallLReport(L=ctx.L_quot, L_prod=ctx.L_prod, tau=None,
                            S_tau=None, S_prime=None, S_doubleprime=None,
                            min_additive_energy_ratio=None,
                            min_quotient_ratio=None, min_product_ratio=None,
                            diagnostics=diagnostics)

    chosen = max(qualifying, key=lambda s: (len(s.sizes) * s.tau**2, s.tau))
    tau = chosen.tau
    S_tau = chosen.lambdas
    fibers = {lam: lambda_set(A, lam) for lam in S_tau}
    fiber_energy = {lam: energy(fibers[lam], mode="add") for lam in S_tau}

    if len(S_tau) == 1:
        S_prime = S_dprime = S_tau
    else:
        half = len(S_tau) // 2
        by_energy = sorted(S_tau, key=lambda lam: (fiber_energy[lam], lam))
        S_dprime = FiniteSet(by_energy[:half])
        S_prime = FiniteSet(by_energy[half:])

    add_ratio = min(Fraction(fiber_energy[lam]) / tau**3 for lam in S_prime)
    quot_ratio = min(Fraction(len(quotientset(fibers[lam], fibers[lam]))) / tau**2
                     for lam in S_prime)
    prod_ratio = min(Fraction(len(productset(fibers[lam], fibers[lam]))) / tau**2
                     for lam in S_prime)
    return SmallLReport(L=ctx.L_quot, L_prod=ctx.L_prod, tau=tau, S_tau=S_tau,
                        S_prime=S_prime, S_doubleprime=S_dprime,
                        min_additive_energy_ratio=add_ratio,
                        min_quotient_ratio=quot_ratio,
                        min_product_ratio=prod_ratio,
                        diagnostics=diagnostics)


# -- Katz-Koester inclusions ----------------------------------------------

def katz_koester_check(A: FiniteSet) -> list[tuple[Scalar, str, Scalar]]:
    """Verify A_l/A_l ⊆ Π ∩ lΠ and A_l A_l ⊆ Π' ∩ lΠ' for every fiber.

    Π = A/A, Π' = AA.  Returns violating (lambda, which, element) triples;
    an empty list is the expected outcome.
    """
    if A.has_zero():
        raise DomainError("inclusion check requires 0 not in A")
    Pi = set(quotientset(A, A).elements)
    PiP = set(productset(A, A).elements)
    violations = []
    for lam in sorted(Pi):
        fiber = lambda_set(A, lam)
        if fiber is None:
            continue
        for q in quotientset(fiber, fiber):
            if q not in Pi or q / lam not in Pi:
                violations.append((lam, "quot", q))
        for p in productset(fiber, fiber):
            if p not in PiP or p / lam not in PiP:
                violations.append((lam, "prod", p))
    return violations


# -- toy-scale trace of the |A|^{4/3+c} argument ---------------------------

@dataclass(frozen=True)
class SolPlusTrace:
    """Diagnostic quantities of the improved-Solymosi argument; no pass flag."""

    L: Fraction
    L_prime: Fraction
    eta: Fraction
    tau: Scalar
    S_prime: FiniteSet
    S_doubleprime: FiniteSet
    a_witness: Scalar
    A_prime: FiniteSet


def solplus_trace(A: FiniteSet, max_bsg_size: int = 14) -> SolPlusTrace:
    """Trace L, L', eta and the dense-subset/dilation step on a small set."""
    if max_bsg_size > 14:
        raise DomainError("max_bsg_size capped at 14")
    rep = smallL_construction(A)
    if rep.tau is None:
        raise DomainError("no qualifying dyadic slice")
    ctx = SetContext(A)
    L_prime = max(Fraction(1), Fraction(ctx.nquot) ** 3 / Fraction(ctx.n) ** 4)
    eta = rep.L**-64 * ctx.Ex * rep.tau**6 / Fraction(ctx.nquot) ** 5

    S_prime = rep.S_prime
    if len(S_prime) > max_bsg_size:
        raise ResourceError(
            f"|S'_tau| = {len(S_prime)} exceeds the subset-oracle cap {max_bsg_size}")
    if len(S_prime) < 2:
        S_dprime = S_prime
    else:
        from .explore import bsg_subset_oracle
        S_dprime, _ = bsg_subset_oracle(S_prime, max_bsg_size)

    best_a, best_set = None, None
    targets = set(S_dprime.elements)
    for a in A:
        hit = [x for x in A if x / a in targets]
        if best_set is None or len(hit) > len(best_set):
            best_a, best_set = a, hit
    return SolPlusTrace(L=rep.L, L_prime=L_prime, eta=eta, tau=rep.tau,
                        S_prime=S_prime, S_doubleprime=S_dprime,
                        a_witness=best_a, A_prime=FiniteSet(best_set))
