"""Executable stability pipelines.

Each certifier mirrors one stability proof: measure the relevant defect
suprema on a grid, run the proof's construction to obtain a concrete
candidate solution, evaluate the explicit constants, and check that the
distance between the data and the candidate stays under constant * epsilon.
The outcome is a frozen certificate that serialises to a plain JSON dict.

Bound checks carry a uniform numeric slack of 1e-9 * (1 + bound) so that
exactly-tight instances do not flap on rounding.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .domains import ConeGrid, PairGrid, SimplexGrid, TriangleGrid, UnitGrid, pow0
from .equations import (
    EntropyEq,
    FundamentalParametric,
    ModifiedEntropy,
    SumFormMultiplicative,
    _fundamental_defect,
    homogeneity_residual,
    residual,
    symmetry_residual,
)
from .errors import (
    BudgetExceededError,
    ConfigurationError,
    DispatchError,
    UnsupportedParameterError,
)
from .measures import (
    InformationMeasure,
    _GeneratorFunction,
    check_semisymmetry3,
    recursivity_defect,
)
from .models import (
    Alpha,
    Constant,
    Constant3,
    EndpointPatch,
    EntropySolution,
    FunctionSum,
    GridSample,
    LogFamily,
    ModifiedEntropySolution,
    PhiForm,
    PowerFamily,
    PowerLaw,
    PowerLog,
    Regime,
    XLogX,
    alpha_entropy,
    config_of,
)

__all__ = [
    "stability_constant_K",
    "stability_constant_T",
    "box_growth_constants",
    "StabilityConstants",
    "stability_constants",
    "certificate_slack",
    "CertifierTrace",
    "StabilityCertificate",
    "certify_fundamental_open",
    "certify_fundamental_closed",
    "certify_hyperstable",
    "hyperstability_blowup_probe",
    "SequenceRow",
    "MeasureSequenceCertificate",
    "certify_measure_sequence",
    "certify_entropy_equation",
    "AssociativityCertificate",
    "certify_associativity",
    "certify_modified_entropy",
    "certify_sum_form",
    "certify_sum_form_multiplicative",
    "certify_sum_form_mixed",
]

_BLOCK = 1 << 15


# ---------------------------------------------------------------------------
# explicit constants


def stability_constant_K(alpha) -> float:
    """Constant of the open-domain stability bound.

    The printed formula divides by |2**(-alpha) - 1| and is singular at
    alpha = 0; there the proof's direct constant 63 applies and is returned.
    At alpha = 1 the constant diverges and no value exists.
    """
    a = Alpha.of(alpha)
    if a.regime is Regime.ONE:
        raise UnsupportedParameterError(
            "no stability constant at alpha = 1; K(alpha) diverges there"
        )
    if a.regime is Regime.ZERO:
        return 63.0
    v = a.value
    outer = abs(2.0 ** (1.0 - v) - 1.0)
    inner = 3.0 + 12.0 * 2.0**v + 32.0 * 3.0 ** (v + 1.0) / abs(2.0**-v - 1.0)
    return inner / outer


def stability_constant_T(alpha) -> float:
    """Companion constant of the closed-domain bound; defined for 1 != alpha > 0."""
    a = Alpha.of(alpha)
    if a.regime is not Regime.POSITIVE_NOT_ONE:
        raise UnsupportedParameterError(
            f"T(alpha) is defined for positive alpha != 1, got {a.value}"
        )
    v = a.value
    return 3.0 * 2.0**v + 8.0 * 3.0 ** (v + 1.0) / abs(2.0**-v - 1.0)


def box_growth_constants(n, alpha):
    """(c_n, d_n) of the modified-entropy bound on the box (0, n]^3.

    c_n = 2 + 7 * 2**alpha * n**alpha * K(alpha) and
    d_n = 4 + 7 * 2**(alpha+2) * n**alpha * K(alpha); both grow without
    bound in n for alpha > 0.
    """
    if not float(n) > 0:
        raise ConfigurationError(f"box bound must be positive, got {n}")
    a = Alpha.of(alpha)
    k = stability_constant_K(a)
    v = a.value
    c = 2.0 + 7.0 * 2.0**v * float(n) ** v * k
    d = 4.0 + 7.0 * 2.0 ** (v + 2.0) * float(n) ** v * k
    return c, d


@dataclass(frozen=True)
class StabilityConstants:
    """The explicit constants a certificate may cite, bundled per alpha."""

    alpha: float
    K: float
    T: Optional[float] = None
    n: Optional[float] = None
    c_n: Optional[float] = None
    d_n: Optional[float] = None


def stability_constants(alpha, n=None) -> StabilityConstants:
    a = Alpha.of(alpha)
    k = stability_constant_K(a)
    t = stability_constant_T(a) if a.regime is Regime.POSITIVE_NOT_ONE else None
    c_n = d_n = None
    if n is not None:
        c_n, d_n = box_growth_constants(n, a)
    return StabilityConstants(
        alpha=a.value,
        K=k,
        T=t,
        n=None if n is None else float(n),
        c_n=c_n,
        d_n=d_n,
    )


# ---------------------------------------------------------------------------
# certificates


def certificate_slack(bound) -> float:
    """Uniform numeric slack added to every bound check."""
    return 1e-9 * (1.0 + float(bound))


def _passes(distance, bound) -> bool:
    return float(distance) <= float(bound) + certificate_slack(bound)


def _plain(v):
    if v is None or isinstance(v, (bool, str)):
        return v
    if isinstance(v, np.bool_):
        return bool(v)
    if isinstance(v, (int, np.integer)):
        return int(v)
    if isinstance(v, (float, np.floating)):
        return float(v)
    if isinstance(v, (tuple, list, np.ndarray)):
        return [_plain(u) for u in v]
    if isinstance(v, dict):
        return {k: _plain(u) for k, u in v.items()}
    return v


@dataclass(frozen=True)
class CertifierTrace:
    """Ordered intermediate values of a proof pipeline, kept for the report."""

    entries: tuple

    @staticmethod
    def of(**values) -> "CertifierTrace":
        return CertifierTrace(tuple(values.items()))

    def extended(self, **values) -> "CertifierTrace":
        return CertifierTrace(self.entries + tuple(values.items()))

    @property
    def names(self):
        return tuple(k for k, _ in self.entries)

    def __getitem__(self, name):
        for k, v in self.entries:
            if k == name:
                return v
        raise KeyError(name)

    def get(self, name, default=None):
        for k, v in self.entries:
            if k == name:
                return v
        return default

    def to_json_dict(self) -> dict:
        return {k: _plain(v) for k, v in self.entries}


@dataclass(frozen=True)
class StabilityCertificate:
    """Outcome of one stability pipeline: candidate, distance, bound, verdict.

    epsilon_source is "measured" when epsilon came from a grid sweep inside
    the certifier and "supplied" when the caller overrode it to reproduce a
    statement-style bound.
    """

    theorem: str
    alpha: Optional[float]
    resolution: int
    epsilon: float
    epsilon_source: str
    constants: dict
    candidate: object
    distance: float
    bound: float
    satisfied: bool
    trace: CertifierTrace

    def to_json_dict(self) -> dict:
        return {
            "theorem": self.theorem,
            "alpha": None if self.alpha is None else float(self.alpha),
            "resolution": int(self.resolution),
            "epsilon": float(self.epsilon),
            "epsilon_source": self.epsilon_source,
            "constants": _plain(self.constants),
            "candidate": config_of(self.candidate),
            "distance": float(self.distance),
            "bound": float(self.bound),
            "satisfied": bool(self.satisfied),
            "trace": self.trace.to_json_dict(),
        }


# ---------------------------------------------------------------------------
# fundamental equation, open and closed domain


def _power_fit(f, a: Alpha):
    # proof pipeline for alpha not in {0, 1}: one g sample at 1/2 pins c,
    # the shifted function's value at 1/2 pins a, and b = a + c exactly
    v = a.value
    g_half = 1.5**v * (float(f(2.0 / 3.0)) - float(f(1.0 / 3.0)))
    c = g_half / (2.0**-v - 1.0)
    f0_half = float(f(0.5)) - c * (2.0**-v - 1.0)
    coef_a = f0_half / (2.0 ** (1.0 - v) - 1.0)
    coef_b = coef_a + c
    candidate = PowerFamily(coef_a, coef_b, v)
    trace = CertifierTrace.of(
        g_half=g_half, c=c, f0_half=f0_half, a=coef_a, b=coef_b
    )
    return candidate, trace


def _log_fit(f, resolution: int):
    # alpha = 0 branch: g(u) = f(1/(1+u)) - f(u/(1+u)) tracks lambda*log2(u);
    # one-parameter least squares, then the offset from the value at 1/2
    us = UnitGrid(resolution).points
    g = np.asarray(f(1.0 / (1.0 + us))) - np.asarray(f(us / (1.0 + us)))
    basis = np.log2(us)
    lam = float(np.dot(g, basis) / np.dot(basis, basis))
    c = float(f(0.5)) + lam
    candidate = LogFamily(lam, c)
    trace = CertifierTrace.of(lam=lam, c=c, g_samples=int(us.size))
    return candidate, trace


def _fundamental_dispatch(a: Alpha):
    if a.regime is Regime.NEGATIVE:
        raise DispatchError(
            "negative alpha is the hyperstable regime; use certify_hyperstable"
        )
    if a.regime is Regime.ONE:
        raise DispatchError(
            "alpha = 1 is outside the method; no certifier exists there"
        )


def _require_even(resolution: int):
    if int(resolution) % 2:
        raise ConfigurationError(
            f"resolution must be even so 1/2 is a grid node, got {resolution}"
        )


def certify_fundamental_open(
    f,
    alpha,
    resolution: int,
    *,
    jobs: int = 1,
    budget: int = 10**7,
    epsilon_override=None,
) -> StabilityCertificate:
    """Open-domain stability certificate for the two-variable equation.

    Measures the equation defect on the open triangle lattice, reruns the
    proof's construction (power family for alpha not in {0,1}, logarithmic
    family at alpha = 0) and checks sup |f - candidate| <= K(alpha) * eps
    on the open unit lattice.
    """
    a = Alpha.of(alpha)
    _fundamental_dispatch(a)
    _require_even(resolution)
    if epsilon_override is None:
        report = residual(
            FundamentalParametric(a.value),
            f,
            TriangleGrid(resolution),
            jobs=jobs,
            budget=budget,
        )
        eps, source = report.sup, "measured"
    else:
        eps, source = float(epsilon_override), "supplied"
    k = stability_constant_K(a)
    if a.regime is Regime.ZERO:
        candidate, trace = _log_fit(f, resolution)
    else:
        candidate, trace = _power_fit(f, a)
    xs = UnitGrid(resolution).points
    distance = float(np.max(np.abs(np.asarray(f(xs)) - np.asarray(candidate(xs)))))
    bound = k * eps
    return StabilityCertificate(
        theorem="fundamental_open",
        alpha=a.value,
        resolution=int(resolution),
        epsilon=eps,
        epsilon_source=source,
        constants={"K": k},
        candidate=candidate,
        distance=distance,
        bound=bound,
        satisfied=_passes(distance, bound),
        trace=trace,
    )


def certify_fundamental_closed(
    f,
    alpha,
    resolution: int,
    *,
    jobs: int = 1,
    budget: int = 10**7,
    epsilon_override=None,
) -> StabilityCertificate:
    """Closed-domain variant: epsilon from the closed triangle lattice and the
    candidate extended to [0, 1].

    For alpha > 0 the piecewise extension coincides with the power family
    under the zero-power convention (0 at x=0, a-b at x=1) and the bound is
    max{K, T+1} * eps.  For alpha = 0 the interior collapses to the constant
    c with f's own endpoint values patched in, bound K(0) * eps.
    """
    a = Alpha.of(alpha)
    _fundamental_dispatch(a)
    _require_even(resolution)
    if epsilon_override is None:
        report = residual(
            FundamentalParametric(a.value),
            f,
            TriangleGrid(resolution, closed=True),
            jobs=jobs,
            budget=budget,
        )
        eps, source = report.sup, "measured"
    else:
        eps, source = float(epsilon_override), "supplied"
    k = stability_constant_K(a)
    if a.regime is Regime.ZERO:
        inner, trace = _log_fit(f, resolution)
        value0, value1 = float(f(0.0)), float(f(1.0))
        candidate = EndpointPatch(Constant(inner.offset), value0, value1)
        trace = trace.extended(value0=value0, value1=value1)
        constants = {"K": k}
        bound = k * eps
    else:
        candidate, trace = _power_fit(f, a)
        t = stability_constant_T(a)
        constants = {"K": k, "T": t}
        bound = max(k, t + 1.0) * eps
    xs = UnitGrid(resolution, closed=True).points
    distance = float(np.max(np.abs(np.asarray(f(xs)) - np.asarray(candidate(xs)))))
    return StabilityCertificate(
        theorem="fundamental_closed",
        alpha=a.value,
        resolution=int(resolution),
        epsilon=eps,
        epsilon_source=source,
        constants=constants,
        candidate=candidate,
        distance=distance,
        bound=bound,
        satisfied=_passes(distance, bound),
        trace=trace,
    )


# ---------------------------------------------------------------------------
# hyperstable regime, alpha < 0


def _hyperstable_fit(f, a: Alpha):
    # anchor the family through f(1/2) and f(1/4); the system is regular for
    # every alpha < 0
    v = a.value
    m = np.array(
        [
            [2.0**-v, 2.0**-v - 1.0],
            [4.0**-v, 0.75**v - 1.0],
        ]
    )
    rhs = np.array([float(f(0.5)), float(f(0.25))])
    det = m[0, 0] * m[1, 1] - m[0, 1] * m[1, 0]
    assert det != 0.0, "anchor system became singular; impossible for alpha < 0"
    c, d = np.linalg.solve(m, rhs)
    return float(c), float(d)


def certify_hyperstable(
    f,
    alpha,
    resolution: int,
    closed: bool = False,
    *,
    jobs: int = 1,
    budget: int = 10**7,
) -> StabilityCertificate:
    """Hyperstability check for alpha < 0: the data must BE a family member.

    Fits (c, d) through two anchor values and passes only when
    sup |f - family| stays under the scale-aware exactness tolerance
    1e-8 * sup|f|, independent of the measured equation defect.  The closed
    variant also compares the endpoint values f(0) = 0 and f(1) = c - d,
    which the closed unit lattice covers automatically.
    """
    a = Alpha.of(alpha)
    if a.regime is not Regime.NEGATIVE:
        raise DispatchError(
            "hyperstability needs alpha < 0; use the fundamental certifiers"
        )
    c, d = _hyperstable_fit(f, a)
    candidate = PowerFamily(c, d, a.value)
    report = residual(
        FundamentalParametric(a.value),
        f,
        TriangleGrid(resolution, closed=closed),
        jobs=jobs,
        budget=budget,
    )
    xs = UnitGrid(resolution, closed=closed).points
    fv = np.asarray(f(xs))
    scale = float(np.max(np.abs(fv)))
    distance = float(np.max(np.abs(fv - np.asarray(candidate(xs)))))
    tol = 1e-8 * scale
    trace = CertifierTrace.of(c=c, d=d, scale=scale)
    if closed:
        trace = trace.extended(
            endpoint_gap0=abs(float(f(0.0))),
            endpoint_gap1=abs(float(f(1.0)) - (c - d)),
        )
    return StabilityCertificate(
        theorem="hyperstability",
        alpha=a.value,
        resolution=int(resolution),
        epsilon=report.sup,
        epsilon_source="measured",
        constants={"tolerance": tol},
        candidate=candidate,
        distance=distance,
        bound=tol,
        satisfied=_passes(distance, tol),
        trace=trace,
    )


def hyperstability_blowup_probe(
    f, alpha, margins, resolution: int = 2048, *, budget: int = 10**7
):
    """Equation-defect suprema on the shrinking domains {x + y <= 1 - h}.

    For data that is an exact family member every supremum is at rounding
    level; for family-plus-bounded-perturbation data the sequence grows
    without bound as h -> 0, which is the numerical signature of the
    hyperstable regime.  Returns [(h, sup), ...] in the given margin order.
    """
    a = Alpha.of(alpha)
    if a.regime is not Regime.NEGATIVE:
        raise DispatchError("the blow-up probe applies to alpha < 0 only")
    hs = [float(h) for h in margins]
    if not hs or any(not 0.0 < h < 1.0 for h in hs):
        raise ConfigurationError("margins must lie strictly between 0 and 1")
    if any(hs[i] <= hs[i + 1] for i in range(len(hs) - 1)):
        raise ConfigurationError("margins must decrease strictly toward 0")
    grid = TriangleGrid(resolution)
    pts = grid.points
    if pts.shape[0] > budget:
        raise BudgetExceededError(
            f"{pts.shape[0]} grid points exceed the budget of {budget}"
        )
    sums = pts[:, 0] + pts[:, 1]
    sups = [0.0] * len(hs)
    for start in range(0, pts.shape[0], _BLOCK):
        block = pts[start : start + _BLOCK]
        d = np.abs(_fundamental_defect(f, a.value, block))
        s = sums[start : start + _BLOCK]
        for i, h in enumerate(hs):
            keep = s <= 1.0 - h + 1e-12
            if np.any(keep):
                worst = float(np.max(d[keep]))
                if worst > sups[i]:
                    sups[i] = worst
    return list(zip(hs, sups))


# ---------------------------------------------------------------------------
# sequences of information measures


@dataclass(frozen=True)
class SequenceRow:
    """One level of a measure-sequence certificate."""

    n: int
    bound: float
    distance: Optional[float] = None
    satisfied: Optional[bool] = None


@dataclass(frozen=True)
class MeasureSequenceCertificate:
    """Per-level certificates for a recursive sequence of measures.

    epsilons holds (eps_1, eps_2, ...): the 3-semi-symmetry defect first,
    then the recursivity defects of levels 3, 4, ...  In statement mode
    (generator plus supplied defects) distances are not computable and stay
    None.
    """

    alpha: float
    levels: int
    resolution: int
    epsilons: tuple
    candidate: object
    coefficients: dict
    rows: tuple
    satisfied: Optional[bool]
    trace: CertifierTrace

    def to_json_dict(self) -> dict:
        return {
            "theorem": "measure_sequence",
            "alpha": float(self.alpha),
            "levels": int(self.levels),
            "resolution": int(self.resolution),
            "epsilons": [float(e) for e in self.epsilons],
            "candidate": config_of(self.candidate),
            "coefficients": _plain(self.coefficients),
            "rows": [
                {
                    "n": int(r.n),
                    "bound": float(r.bound),
                    "distance": None if r.distance is None else float(r.distance),
                    "satisfied": r.satisfied,
                }
                for r in self.rows
            ],
            "satisfied": self.satisfied,
            "trace": self.trace.to_json_dict(),
        }


def certify_measure_sequence(
    measure,
    levels: int,
    resolution: int,
    *,
    alpha=None,
    budget: int = 10**6,
    jobs: int = 1,
) -> MeasureSequenceCertificate:
    """Certify sup |I_n - J_n| level by level against the sequence bounds.

    measure is either an InformationMeasure (defects are measured on interior
    simplex lattices, distances are checked) or a (generator, epsilon-seq)
    pair reproducing a statement-style bound table; the pair form needs the
    alpha keyword.  For alpha >= 0 the bound at level n is
    sum(eps_k, k=2..n-1) + (n-1) K(alpha) (2 eps_2 + eps_1); for alpha < 0
    the K term drops and only the recursivity defects remain.
    """
    if levels < 2:
        raise ConfigurationError(f"levels must be at least 2, got {levels}")
    top = max(2, int(levels) - 1)

    if isinstance(measure, InformationMeasure):
        a = Alpha.of(measure.alpha_value)
        if alpha is not None and Alpha.of(alpha).value != a.value:
            raise ConfigurationError(
                f"alpha={alpha} disagrees with the measure's alpha={a.value}"
            )
        if measure.max_n < max(3, levels):
            raise ConfigurationError(
                f"measure supports n <= {measure.max_n}, need {max(3, levels)}"
            )
        f = _GeneratorFunction(measure)
        eps = [check_semisymmetry3(measure, resolution, budget=budget).sup]
        for k in range(2, top + 1):
            eps.append(
                recursivity_defect(measure, k + 1, resolution, budget=budget).sup
            )
        statement = False
    else:
        try:
            f, supplied = measure
        except (TypeError, ValueError) as exc:
            raise ConfigurationError(
                "measure must be an InformationMeasure or a (generator, "
                "epsilon-sequence) pair"
            ) from exc
        if alpha is None:
            raise ConfigurationError(
                "the (generator, epsilon-sequence) form needs an explicit alpha"
            )
        a = Alpha.of(alpha)
        eps = [float(e) for e in supplied]
        if len(eps) < top:
            raise ConfigurationError(
                f"need {top} defect values (eps_1..eps_{top}), got {len(eps)}"
            )
        if any(e < 0 for e in eps):
            raise ConfigurationError("defect values must be nonnegative")
        statement = True

    if a.regime is Regime.ONE:
        raise UnsupportedParameterError(
            "measure sequences at alpha = 1 are outside the method"
        )

    v = a.value
    if a.regime is Regime.NEGATIVE:
        c, d = _hyperstable_fit(f, a)
        candidate = PowerFamily(c, d, v)
        trace = CertifierTrace.of(c=c, d=d)
        k_const = None
    elif a.regime is Regime.ZERO:
        candidate, trace = _log_fit(f, resolution)
        k_const = stability_constant_K(a)
    else:
        candidate, trace = _power_fit(f, a)
        k_const = stability_constant_K(a)

    if a.regime is Regime.ZERO:
        coefficients = {"c": candidate.offset, "lam": candidate.slope}
    else:
        # J_n = c H_n + d (p_1**alpha - 1) with the proof's translations
        coefficients = {
            "c": (2.0 ** (1.0 - v) - 1.0) * candidate.a,
            "d": candidate.b - candidate.a,
        }
        trace = trace.extended(j_c=coefficients["c"], j_d=coefficients["d"])

    def j_rows(block, n):
        p1 = block[:, 0]
        if a.regime is Regime.ZERO:
            return coefficients["c"] * float(n - 1) + coefficients["lam"] * np.log2(p1)
        hn = np.asarray(alpha_entropy(block, v))
        return coefficients["c"] * hn + coefficients["d"] * (pow0(p1, v) - 1.0)

    rows = []
    for n in range(2, int(levels) + 1):
        if a.regime is Regime.NEGATIVE:
            row_bound = math.fsum(eps[k - 1] for k in range(2, n))
        else:
            row_bound = math.fsum(eps[k - 1] for k in range(2, n)) + (
                n - 1
            ) * k_const * (2.0 * eps[1] + eps[0])
        if statement:
            rows.append(SequenceRow(n=n, bound=row_bound))
            continue
        grid = SimplexGrid(n, resolution, closed=False, budget=budget)
        if grid.count > budget:
            raise BudgetExceededError(
                f"level {n} lattice holds {grid.count} points, over the "
                f"budget of {budget}"
            )
        dist = 0.0
        for block in grid.iter_blocks():
            gap = np.abs(measure.eval_rows(block) - j_rows(block, n))
            worst = float(np.max(gap))
            if worst > dist:
                dist = worst
        rows.append(
            SequenceRow(
                n=n,
                bound=row_bound,
                distance=dist,
                satisfied=_passes(dist, row_bound),
            )
        )

    overall = None if statement else all(r.satisfied for r in rows)
    return MeasureSequenceCertificate(
        alpha=v,
        levels=int(levels),
        resolution=int(resolution),
        epsilons=tuple(eps[:top]),
        candidate=candidate,
        coefficients=coefficients,
        rows=tuple(rows),
        satisfied=overall,
        trace=trace,
    )


# ---------------------------------------------------------------------------
# entropy equation on the positive cone


def certify_entropy_equation(
    H,
    alpha,
    resolution: int,
    *,
    bound: float = 1.0,
    jobs: int = 1,
    budget: int = 10**7,
) -> StabilityCertificate:
    """Stability certificate for the cone entropy equation.

    Measures the symmetry defect eps_1, the equation defect eps_2 and the
    homogeneity defect eps_3 on the box (0, bound]^3, fits the regime's
    candidate from the anchor value H(1,1,0) (or its limit proxy when the
    zero face is inaccessible), and checks the regime's bound.
    """
    a = Alpha.of(alpha)
    grid = ConeGrid(resolution, bound=bound, budget=budget)
    eps1 = symmetry_residual(H, grid, jobs=jobs).sup
    eps2 = residual(EntropyEq(), H, grid, jobs=jobs, budget=budget).sup

    def face(u, v):
        u = np.asarray(u, dtype=float)
        return H(u, v, np.zeros_like(u))

    eps3 = homogeneity_residual(face, a.value, PairGrid(resolution, bound), jobs=jobs).sup

    proxy = False
    tau = 0.0
    try:
        anchor = float(H(1.0, 1.0, 0.0))
    except (ValueError, ArithmeticError):
        # zero face inaccessible: step inside by one grid spacing
        proxy = True
        tau = float(bound) / float(resolution)
        anchor = float(H(1.0, 1.0, tau))

    pts = grid.points
    v = a.value
    if a.regime is Regime.ONE:
        c = anchor / 2.0
        candidate = PhiForm(XLogX(c))
        constants = {"eps1_weight": 1.0, "eps2_weight": 1.0}
        bnd = eps1 + eps2
        fit_trace = {"c": c}
    elif a.regime is Regime.ZERO:
        vals = np.empty(pts.shape[0])
        for s in range(0, pts.shape[0], _BLOCK):
            blk = pts[s : s + _BLOCK]
            vals[s : s + blk.shape[0]] = np.asarray(H(blk[:, 0], blk[:, 1], blk[:, 2]))
        c = float(np.median(vals))
        candidate = Constant3(c)
        constants = {"eps1_weight": 49.0, "eps2_weight": 25.0, "eps3_weight": 8.0}
        bnd = 8.0 * eps3 + 25.0 * eps2 + 49.0 * eps1
        fit_trace = {"median": c}
    else:
        c = anchor / (2.0**v - 2.0)
        candidate = EntropySolution(c, v)
        constants = {"eps1_weight": 1.0, "eps2_weight": 1.0}
        bnd = eps1 + eps2
        fit_trace = {"c": c}

    distance = 0.0
    for s in range(0, pts.shape[0], _BLOCK):
        blk = pts[s : s + _BLOCK]
        gap = np.abs(
            np.asarray(H(blk[:, 0], blk[:, 1], blk[:, 2]))
            - np.asarray(candidate(blk[:, 0], blk[:, 1], blk[:, 2]))
        )
        worst = float(np.max(gap))
        if worst > distance:
            distance = worst

    trace = CertifierTrace.of(
        eps1=eps1,
        eps2=eps2,
        eps3=eps3,
        anchor=anchor,
        anchor_proxy=proxy,
        anchor_tau=tau,
        **fit_trace,
    )
    return StabilityCertificate(
        theorem="entropy_equation",
        alpha=v,
        resolution=int(resolution),
        epsilon=eps2,
        epsilon_source="measured",
        constants=constants,
        candidate=candidate,
        distance=distance,
        bound=bnd,
        satisfied=_passes(distance, bnd),
        trace=trace,
    )


# ---------------------------------------------------------------------------
# associativity-style sum representations


@dataclass(frozen=True)
class AssociativityCertificate:
    """Bridged representation phi with its two bounds: the B side must track
    phi(t+s) within epsilon and the A side within 2 * epsilon."""

    epsilon: float
    resolution: int
    intervals: tuple
    phi: GridSample
    distance_a: float
    bound_a: float
    distance_b: float
    bound_b: float
    satisfied: bool
    trace: CertifierTrace

    def to_json_dict(self) -> dict:
        return {
            "theorem": "associativity",
            "epsilon": float(self.epsilon),
            "resolution": int(self.resolution),
            "intervals": [[float(lo), float(hi)] for lo, hi in self.intervals],
            "phi": config_of(self.phi),
            "distance_a": float(self.distance_a),
            "bound_a": float(self.bound_a),
            "distance_b": float(self.distance_b),
            "bound_b": float(self.bound_b),
            "satisfied": bool(self.satisfied),
            "trace": self.trace.to_json_dict(),
        }


def certify_associativity(
    A, B, U, V, W, resolution: int, *, budget: int = 10**7
) -> AssociativityCertificate:
    """Measure the associativity gap and check the bridged representation.

    epsilon is the sup of |A(u+v, w) - B(u, v+w)| on the interval lattice.
    phi(s) = A(p_a, s - p_a) slices A along the anti-diagonal, anchored at
    p_a = max(t_hi + min V, s - max W) where t_hi = min(max U, s - min(V+W));
    that choice keeps p_a - t inside V for every admissible t and s - p_a
    inside W, so each B value sits one defect application from phi and each
    A value two.  The A side is then checked within 2 * epsilon on
    (U+V) x W and the B side within epsilon on U x (V+W).
    """
    named = []
    for name, iv in (("U", U), ("V", V), ("W", W)):
        try:
            lo, hi = float(iv[0]), float(iv[1])
        except (TypeError, IndexError, ValueError) as exc:
            raise ConfigurationError(
                f"interval {name} must be a (lo, hi) pair, got {iv!r}"
            ) from exc
        if not (math.isfinite(lo) and math.isfinite(hi) and lo < hi):
            raise ConfigurationError(
                f"interval {name} must satisfy lo < hi, got ({lo}, {hi})"
            )
        named.append((lo, hi))
    (u0, u1), (v0, v1), (w0, w1) = named
    r = int(resolution)
    if r < 1:
        raise ConfigurationError(f"resolution must be >= 1, got {resolution}")
    if (r + 1) ** 3 > budget:
        raise BudgetExceededError(
            f"{(r + 1) ** 3} lattice points exceed the budget of {budget}"
        )
    us = np.linspace(u0, u1, r + 1)
    vs = np.linspace(v0, v1, r + 1)
    ws = np.linspace(w0, w1, r + 1)

    uu, vv, ww = (t.ravel() for t in np.meshgrid(us, vs, ws, indexing="ij"))
    eps = 0.0
    for s in range(0, uu.size, _BLOCK):
        gap = np.abs(
            np.asarray(A(uu[s : s + _BLOCK] + vv[s : s + _BLOCK], ww[s : s + _BLOCK]))
            - np.asarray(B(uu[s : s + _BLOCK], vv[s : s + _BLOCK] + ww[s : s + _BLOCK]))
        )
        worst = float(np.max(gap))
        if worst > eps:
            eps = worst

    def phi(sv):
        sv = np.asarray(sv, dtype=float)
        t_lo = np.maximum(u0, sv - (v1 + w1))
        t_hi = np.minimum(u1, sv - (v0 + w0))
        pa = np.maximum(t_hi + v0, sv - w1)
        pa = np.minimum(pa, t_lo + v1)
        # A must stay on (U+V) x W even when U is wider than V
        pa = np.clip(pa, sv - w1, sv - w0)
        return np.asarray(A(pa, sv - pa))

    s_nodes = np.linspace(u0 + v0 + w0, u1 + v1 + w1, 2 * r + 1)
    snapshot = GridSample(
        tuple(float(t) for t in s_nodes), tuple(float(t) for t in phi(s_nodes))
    )

    ps = np.linspace(u0 + v0, u1 + v1, 2 * r + 1)
    pp, ww2 = (t.ravel() for t in np.meshgrid(ps, ws, indexing="ij"))
    dist_a = float(np.max(np.abs(np.asarray(A(pp, ww2)) - phi(pp + ww2))))

    ts = np.linspace(v0 + w0, v1 + w1, 2 * r + 1)
    uu2, tt = (t.ravel() for t in np.meshgrid(us, ts, indexing="ij"))
    dist_b = float(np.max(np.abs(np.asarray(B(uu2, tt)) - phi(uu2 + tt))))

    bound_a = 2.0 * eps
    bound_b = eps
    ok = _passes(dist_a, bound_a) and _passes(dist_b, bound_b)
    trace = CertifierTrace.of(
        anchor_v_window=(v0, v1),
        anchor_w_window=(w0, w1),
        s_lo=float(s_nodes[0]),
        s_hi=float(s_nodes[-1]),
    )
    return AssociativityCertificate(
        epsilon=eps,
        resolution=r,
        intervals=((u0, u1), (v0, v1), (w0, w1)),
        phi=snapshot,
        distance_a=dist_a,
        bound_a=bound_a,
        distance_b=dist_b,
        bound_b=bound_b,
        satisfied=ok,
        trace=trace,
    )


# ---------------------------------------------------------------------------
# modified entropy equation on a box


def certify_modified_entropy(
    f,
    alpha,
    n,
    resolution: int,
    *,
    jobs: int = 1,
    budget: int = 10**7,
) -> StabilityCertificate:
    """Stability certificate for the splitting recursion on the box (0, n]^3.

    Measures the recursion defect eps_1 and the symmetry defect eps_2, fits
    the coefficient of the power part from a probe pair near the corner, and
    tabulates phi along the diagonal.  Bounds: 2 eps_1 + 3 eps_2 for
    alpha < 0, 191 eps_1 + 1263 eps_2 at alpha = 0, and
    c_n eps_1 + d_n eps_2 for positive alpha != 1.
    """
    a = Alpha.of(alpha)
    if a.regime is Regime.ONE:
        raise UnsupportedParameterError(
            "the modified-entropy certifier needs alpha != 1"
        )
    if not float(n) > 0:
        raise ConfigurationError(f"box bound must be positive, got {n}")
    box = float(n)
    grid = ConeGrid(resolution, bound=box, budget=budget)
    eps1 = residual(ModifiedEntropy(a.value), f, grid, jobs=jobs, budget=budget).sup
    eps2 = symmetry_residual(f, grid, jobs=jobs).sup

    r = int(resolution)
    v = a.value
    s_nodes = np.arange(3, 3 * r + 1) * (box / r)
    diag = s_nodes / 3.0
    diag_vals = np.asarray(f(diag, diag, diag))

    if a.regime is Regime.ZERO:
        coeff = 0.0
        phi_vals = diag_vals
        constants = {"eps1_weight": 191.0, "eps2_weight": 1263.0}
        bnd = 191.0 * eps1 + 1263.0 * eps2
        fit_trace = {"a": coeff}
    else:
        # probe pair on the sum level s = box; the small offset h keeps the
        # denominator large for alpha < 0 so the fitted coefficient error
        # stays well below the bound
        h = box / (64.0 * r)
        third = box / 3.0
        denom = 3.0 * third**v - ((box - 2.0 * h) ** v + 2.0 * h**v)
        assert denom != 0.0, "degenerate probe pair; impossible for alpha != 1"
        coeff = (float(f(third, third, third)) - float(f(box - 2.0 * h, h, h))) / denom
        phi_vals = diag_vals - 3.0 * coeff * np.power(diag, v)
        if a.regime is Regime.NEGATIVE:
            constants = {"eps1_weight": 2.0, "eps2_weight": 3.0}
            bnd = 2.0 * eps1 + 3.0 * eps2
        else:
            c_n, d_n = box_growth_constants(box, a)
            constants = {"c_n": c_n, "d_n": d_n}
            bnd = c_n * eps1 + d_n * eps2
        fit_trace = {"a": coeff, "probe_h": h, "probe_denominator": denom}

    candidate = ModifiedEntropySolution(
        coeff,
        v,
        GridSample(
            tuple(float(t) for t in s_nodes), tuple(float(t) for t in phi_vals)
        ),
    )
    pts = grid.points
    distance = 0.0
    for s in range(0, pts.shape[0], _BLOCK):
        blk = pts[s : s + _BLOCK]
        gap = np.abs(
            np.asarray(f(blk[:, 0], blk[:, 1], blk[:, 2]))
            - np.asarray(candidate(blk[:, 0], blk[:, 1], blk[:, 2]))
        )
        worst = float(np.max(gap))
        if worst > distance:
            distance = worst

    trace = CertifierTrace.of(eps1=eps1, eps2=eps2, box=box, **fit_trace)
    return StabilityCertificate(
        theorem="modified_entropy",
        alpha=v,
        resolution=r,
        epsilon=eps1,
        epsilon_source="measured",
        constants=constants,
        candidate=candidate,
        distance=distance,
        bound=bnd,
        satisfied=_passes(distance, bnd),
        trace=trace,
    )


# ---------------------------------------------------------------------------
# sum-form inequalities on closed simplices


def certify_sum_form(
    phi, n: int, resolution: int, *, jobs: int = 1, budget: int = 10**7
) -> StabilityCertificate:
    """Vanishing sum form: |sum phi(p_i)| small forces phi - phi(0) near kappa*p.

    epsilon is the sup of |sum phi(p_i)| over the closed simplex lattice; the
    regular additive representative kappa*p is the one-parameter Chebyshev
    (minimax) fit on the closed unit lattice, solved by golden-section search
    over the bracket [-M, M], M = 2 * sup|phi| * resolution.  The certificate
    passes when the bounded remainder stays under epsilon.
    """
    if n < 3:
        raise ConfigurationError(f"the sum-form theorem needs n >= 3, got {n}")
    grid = SimplexGrid(n, resolution, closed=True, budget=budget)
    if grid.count > budget:
        raise BudgetExceededError(
            f"{grid.count} lattice points exceed the budget of {budget}"
        )
    eps = 0.0
    for block in grid.iter_blocks():
        sums = np.abs(np.sum(np.asarray(phi(block)), axis=1))
        worst = float(np.max(sums))
        if worst > eps:
            eps = worst

    xs = UnitGrid(resolution, closed=True).points
    pv = np.asarray(phi(xs))
    phi0 = float(phi(0.0))
    rel = pv - phi0

    def remainder_sup(kappa):
        return float(np.max(np.abs(rel - kappa * xs)))

    m_hi = 2.0 * float(np.max(np.abs(pv))) * resolution
    if m_hi == 0.0:
        kappa = 0.0
    else:
        # golden-section over the convex piecewise-linear minimax objective
        lo, hi = -m_hi, m_hi
        ratio = (math.sqrt(5.0) - 1.0) / 2.0
        x1 = hi - ratio * (hi - lo)
        x2 = lo + ratio * (hi - lo)
        f1, f2 = remainder_sup(x1), remainder_sup(x2)
        for _ in range(200):
            if f1 <= f2:
                hi, x2, f2 = x2, x1, f1
                x1 = hi - ratio * (hi - lo)
                f1 = remainder_sup(x1)
            else:
                lo, x1, f1 = x1, x2, f2
                x2 = lo + ratio * (hi - lo)
                f2 = remainder_sup(x2)
        kappa = 0.5 * (lo + hi)
    distance = remainder_sup(kappa)
    trace = CertifierTrace.of(n=int(n), kappa=kappa, phi0=phi0, bracket=m_hi)
    return StabilityCertificate(
        theorem="sum_form",
        alpha=None,
        resolution=int(resolution),
        epsilon=eps,
        epsilon_source="measured",
        constants={},
        candidate=PowerLaw(kappa, 1.0),
        distance=distance,
        bound=eps,
        satisfied=_passes(distance, eps),
        trace=trace,
    )


def certify_sum_form_multiplicative(
    g, n: int, m: int, resolution: int, *, jobs: int = 1, budget: int = 10**7
) -> StabilityCertificate:
    """Multiplicative sum form: decompose g into kappa*p + p**beta + bounded.

    epsilon comes from the product-distribution defect sweep.  kappa runs
    over a coarse symmetric grid (always containing 0), beta follows by
    log-log regression on the positive part of g - kappa*p, and the winner
    is the smallest remainder with ties broken toward the smaller |kappa|.
    When no kappa leaves a usable positive part the multiplicative term is
    dropped and the fit-failure is flagged in the trace; that is a fit
    degeneracy, not a certificate failure.  The pass itself is informational:
    remainder <= epsilon on the lattice.
    """
    if n < 3 or m < 3:
        raise ConfigurationError(
            f"the multiplicative sum form needs n, m >= 3, got ({n}, {m})"
        )
    pair = (
        SimplexGrid(n, resolution, closed=True, budget=budget),
        SimplexGrid(m, resolution, closed=True, budget=budget),
    )
    eps = residual(
        SumFormMultiplicative(n, m), g, pair, jobs=jobs, budget=budget
    ).sup

    xs = UnitGrid(resolution, closed=True).points
    gv = np.asarray(g(xs))
    sup_g = float(np.max(np.abs(gv)))
    ks = [0.0] + [float(t) for t in np.linspace(-2.0 * sup_g, 2.0 * sup_g, 41)]
    ks.sort(key=lambda t: (abs(t), t))
    pos_x = xs > 0

    best = None
    for kappa in ks:
        resid = gv - kappa * xs
        mask = pos_x & (resid > 0)
        if int(mask.sum()) < 2:
            continue
        lx = np.log2(xs[mask])
        ly = np.log2(resid[mask])
        lxc = lx - lx.mean()
        denom = float(np.dot(lxc, lxc))
        if denom == 0.0:
            continue
        beta = float(np.dot(lxc, ly - ly.mean()) / denom)
        rem = float(np.max(np.abs(gv - kappa * xs - pow0(xs, beta))))
        if best is None or rem < best[0] - 1e-12 * (1.0 + best[0]):
            best = (rem, kappa, beta)

    if best is None:
        # no positive residual part for any kappa: drop the multiplicative term
        options = [(float(np.max(np.abs(gv - k * xs))), abs(k), k) for k in ks]
        rem, _, kappa = min(options)
        beta = None
        candidate = PowerLaw(kappa, 1.0)
        fit_failed = True
    else:
        rem, kappa, beta = best
        candidate = FunctionSum((PowerLaw(kappa, 1.0), PowerLaw(1.0, beta)))
        fit_failed = False

    trace = CertifierTrace.of(
        n=int(n), m=int(m), kappa=kappa, beta=beta, fit_failed=fit_failed, sup_g=sup_g
    )
    return StabilityCertificate(
        theorem="sum_form_multiplicative",
        alpha=None,
        resolution=int(resolution),
        epsilon=eps,
        epsilon_source="measured",
        constants={},
        candidate=candidate,
        distance=rem,
        bound=eps,
        satisfied=_passes(rem, eps),
        trace=trace,
    )


def certify_sum_form_mixed(
    f,
    alpha,
    beta,
    n: int,
    m: int,
    resolution: int,
    *,
    jobs: int = 1,
    budget: int = 10**7,
) -> StabilityCertificate:
    """Mixed-weight sum form: f(p) ~ c(p**alpha - p**beta) plus bounded.

    The defect couples two closed simplices with weights alpha and beta.  The
    additive part is pinned to zero by the a(1) = 0 normalisation; for
    beta != alpha a single coefficient c is fitted by least squares against
    p**alpha - p**beta, and for beta == alpha != 1 the logarithmic branch
    fits lambda against p**alpha * log2(p).  alpha = beta = 1 is the Shannon
    case the theorem does not cover.
    """
    av = Alpha.of(alpha).value
    bv = Alpha.of(beta).value
    if av == 1.0 and bv == 1.0:
        raise UnsupportedParameterError(
            "the mixed sum form does not cover alpha = beta = 1"
        )
    if n < 3 or m < 3:
        raise ConfigurationError(
            f"the mixed sum form needs n, m >= 3, got ({n}, {m})"
        )
    gp = SimplexGrid(n, resolution, closed=True, budget=budget)
    gq = SimplexGrid(m, resolution, closed=True, budget=budget)
    if gp.count * gq.count > budget:
        raise BudgetExceededError(
            f"{gp.count * gq.count} distribution pairs exceed the budget of {budget}"
        )
    P = gp.points
    Q = gq.points
    fp = np.sum(np.asarray(f(P)), axis=1)
    fq = np.sum(np.asarray(f(Q)), axis=1)
    pa = np.sum(pow0(P, av), axis=1)
    qb = np.sum(pow0(Q, bv), axis=1)
    eps = 0.0
    rows_per_block = max(1, _BLOCK // max(1, Q.shape[0]))
    for s in range(0, P.shape[0], rows_per_block):
        e = min(s + rows_per_block, P.shape[0])
        prods = P[s:e, None, :, None] * Q[None, :, None, :]
        cross = np.sum(np.asarray(f(prods.reshape(e - s, Q.shape[0], -1))), axis=2)
        d = np.abs(cross - fp[s:e, None] * qb[None, :] - fq[None, :] * pa[s:e, None])
        worst = float(np.max(d))
        if worst > eps:
            eps = worst

    xs = UnitGrid(resolution, closed=True).points
    fv = np.asarray(f(xs))
    if av == bv:
        safe = np.where(xs > 0, xs, 1.0)
        basis = np.where(xs > 0, pow0(xs, av) * np.log2(safe), 0.0)
        denom = float(np.dot(basis, basis))
        lam = 0.0 if denom == 0.0 else float(np.dot(fv, basis) / denom)
        candidate = PowerLog(lam, av)
        fitted = {"lam": lam}
    else:
        w = pow0(xs, av) - pow0(xs, bv)
        denom = float(np.dot(w, w))
        c = 0.0 if denom == 0.0 else float(np.dot(fv, w) / denom)
        candidate = FunctionSum((PowerLaw(c, av), PowerLaw(-c, bv)))
        fitted = {"c": c}
    distance = float(np.max(np.abs(fv - np.asarray(candidate(xs)))))

    trace = CertifierTrace.of(n=int(n), m=int(m), beta=bv, kappa=0.0, **fitted)
    return StabilityCertificate(
        theorem="sum_form_mixed",
        alpha=av,
        resolution=int(resolution),
        epsilon=eps,
        epsilon_source="measured",
        constants={},
        candidate=candidate,
        distance=distance,
        bound=eps,
        satisfied=_passes(distance, eps),
        trace=trace,
    )
