"""The adjunction between cobar and bar, twisting cochains and their checks.

A morphism Cobar C -> A, a morphism C -> Bar A and a twisting cochain C -> A carry
the same finite data: the letter map fcheck_1: Cbar[-1] -> A (resp. gcheck_1: Cbar -> Abar[1]
together with g0' = g0 restricted to Cbar) and the scalar und. The functions here move
between the three descriptions and check the naturality squares and the split
equation systems on concrete instances.
"""

import logging
from typing import Dict, Optional

from pydantic import BaseModel, ConfigDict, model_validator

from .barcobar import (
    BarResult,
    CobarResult,
    bar_morphism,
    bar_object,
    cobar_morphism,
    cobar_morphism_components,
    cobar_object,
)
from .curved import (
    AlgMorphism,
    CACoalgebra,
    CoalgMorphism,
    UCCAlgebra,
    compose_alg_morphisms,
    compose_coalg_morphisms,
    identity_coalg_morphism,
    is_ac,
    is_ucdg,
    validate_alg_morphism,
    validate_coalg_morphism,
)
from .exceptions import CapTooSmall, NotConilpotent, NotConilpotentUpToCap, ShapeMismatch, TwistingCochainViolation
from .gmod import GradedMap, ground_module, identity, maps_equal, scalar_map, sigma, tensor_map, tensor_power, zero
from .report import ValidationReport
from .tca import multiplicative_extension, reduced_coproduct_power

logger = logging.getLogger(__name__)


class TwistingCochain(BaseModel):
    """
    A degree-1 map theta: C -> A.

    Attributes:
        theta (GradedMap): The cochain.
    """

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    theta: GradedMap

    @model_validator(mode="after")
    def validate_degree(self) -> "TwistingCochain":
        if self.theta.deg != 1:
            raise ShapeMismatch(f"a twisting cochain has degree 1, got {self.theta.deg}")
        return self


class AdjunctionWitness(BaseModel):
    """
    Corresponding morphisms and cochain for a pair (C, A).

    Attributes:
        C (CACoalgebra): The coalgebra.
        A (UCCAlgebra): The algebra.
        f (AlgMorphism): Cobar C -> A.
        g (CoalgMorphism): C -> Bar A.
        theta (TwistingCochain): The twisting cochain of f.
        cobar_cap (int): Word length of Cobar C.
        bar_cap (int): Word length of Bar A.
    """

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    C: CACoalgebra
    A: UCCAlgebra
    f: AlgMorphism
    g: CoalgMorphism
    theta: TwistingCochain
    cobar_cap: int
    bar_cap: int

    def cobar(self) -> CobarResult:
        return cobar_object(self.C, cap=self.cobar_cap)

    def bar(self) -> BarResult:
        return bar_object(self.A, cap=self.bar_cap)

    def validate(self) -> ValidationReport:
        """Validate f, g and theta and the correspondences between them."""
        report = ValidationReport(subject="adjunction witness")
        cobar, bar = self.cobar(), self.bar()
        report.merge(validate_alg_morphism(self.f, cobar.algebra, self.A, window=cobar.window_rows()), "f.")
        report.merge(validate_coalg_morphism(self.g, self.C, bar.coalgebra), "g.")
        report.merge(validate_twisting_cochain(self.theta, self.C, self.A), "theta.")
        g_from_f = adjoint_fwd(self.f, self.C, self.A, cobar=cobar, bar=bar)
        report.check("fwd_g1", g_from_f.g1, self.g.g1)
        report.check("fwd_g0", g_from_f.g0, self.g.g0)
        theta = to_twisting_cochain(self.f, self.C, self.A, cobar=cobar, strict=False)
        report.check("theta_of_f", theta.theta, self.theta.theta)
        return report.log_outcome()


# ---------------------------------------------------------------------------
# Shift bookkeeping
# ---------------------------------------------------------------------------


def _letter_map(f: AlgMorphism, cobar: CobarResult) -> GradedMap:
    """fcheck_1: Y -> A, the restriction of f1 to generators."""
    return cobar.words.inj(1) @ f.f1


def _cbar_to_y(C: CACoalgebra) -> GradedMap:
    """sigma^{-1}: Cbar -> Cbar[-1], degree 1."""
    return sigma(C.incl().dom, -1)


def _y_to_cbar(C: CACoalgebra) -> GradedMap:
    """sigma: Cbar[-1] -> Cbar, degree -1."""
    return sigma(_cbar_to_y(C).cod, 1)


def _abar_to_x(A: UCCAlgebra) -> GradedMap:
    """sigma: Abar -> Abar[1], degree -1."""
    return sigma(A.incl().dom, 1)


def _x_to_abar(A: UCCAlgebra) -> GradedMap:
    """sigma^{-1}: Abar[1] -> Abar, degree 1."""
    return sigma(_abar_to_x(A).cod, -1)


def _index(C: CACoalgebra) -> int:
    if C.conilpotency_index is not None:
        return C.conilpotency_index
    try:
        return C.with_index().conilpotency_index
    except NotConilpotentUpToCap as e:
        raise NotConilpotent(f"coalgebra has no conilpotency certificate up to {e.cap}") from e


def assemble_coalg_morphism(
    C: CACoalgebra, bar: BarResult, gcheck: GradedMap, g0_restricted: GradedMap, und: int
) -> CoalgMorphism:
    """Coalgebra morphism C -> Bar A with letter part gcheck: Cbar -> X.

    g1 = pr_C (sum_k Delta^(k) gcheck^{(x)k}) + eps inj_0 and g0 = pr_C g0' + eps und.

    Raises:
        NotConilpotent: If C carries no conilpotency certificate.
        CapTooSmall: If Bar A is truncated below the longest image word.
    """
    index = _index(C)
    W = bar.words
    longest = index - 1
    if longest > W.cap:
        raise CapTooSmall(f"bar cap {W.cap} is below the required word length {longest}", longest)
    delta_bar = C.reduced_coproduct()
    Cbar = delta_bar.dom
    parts = {1: gcheck}
    for n in range(2, longest + 1):
        parts[n] = reduced_coproduct_power(delta_bar, n) @ tensor_power(gcheck, n)
    g1 = C.pr() @ W.scatter(parts, Cbar, 0) + C.eps @ W.inj(0)
    g0 = C.pr() @ g0_restricted + C.eps @ scalar_map(C.C.ring, und, 1)
    return CoalgMorphism(g1=g1, g0=g0)


# ---------------------------------------------------------------------------
# The bijection
# ---------------------------------------------------------------------------


def adjoint_fwd(
    f: AlgMorphism,
    C: CACoalgebra,
    A: UCCAlgebra,
    cap: Optional[int] = None,
    cobar: Optional[CobarResult] = None,
    bar: Optional[BarResult] = None,
) -> CoalgMorphism:
    """Transport Cobar C -> A to C -> Bar A.

    gcheck_1 = sigma^{-1} fcheck_1 pr_A sigma, g0' = sigma^{-1} fcheck_1 v and w g0 = und f.

    Args:
        f: Algebra morphism out of Cobar C.
        C: The coalgebra.
        A: The algebra.
        cap: Word length used for constructions not passed in.
        cobar: Precomputed Cobar C.
        bar: Precomputed Bar A.
    """
    cobar = cobar or cobar_object(C, cap=cap)
    bar = bar or bar_object(A, cap=cap)
    fcheck = _letter_map(f, cobar)
    lift = _cbar_to_y(C) @ fcheck
    gcheck = lift @ A.pr() @ _abar_to_x(A)
    g0_restricted = lift @ A.v
    logger.debug(f"adjoint_fwd: {gcheck.dom.rank} cogenerators, und {f.und}")
    return assemble_coalg_morphism(C, bar, gcheck, g0_restricted, f.und)


def adjoint_bwd(
    g: CoalgMorphism,
    C: CACoalgebra,
    A: UCCAlgebra,
    cap: Optional[int] = None,
    cobar: Optional[CobarResult] = None,
    bar: Optional[BarResult] = None,
) -> AlgMorphism:
    """Transport C -> Bar A to Cobar C -> A.

    fcheck_1 = sigma (gcheck_1 sigma^{-1} incl_A + g0' eta), extended multiplicatively, und f = w g0.
    """
    cobar = cobar or cobar_object(C, cap=cap)
    bar = bar or bar_object(A, cap=cap)
    gcheck = C.incl() @ g.g1 @ bar.words.pr(1)
    g0_restricted, und = g.restricted(C)
    fcheck = _y_to_cbar(C) @ (gcheck @ _x_to_abar(A) @ A.incl() + g0_restricted @ A.eta)
    f1 = multiplicative_extension(fcheck, cobar.words, A.m2, A.eta)
    return AlgMorphism(f1=f1, und=und.entry(0, 0))


# ---------------------------------------------------------------------------
# Twisting cochains
# ---------------------------------------------------------------------------


def validate_twisting_cochain(theta: TwistingCochain, C: CACoalgebra, A: UCCAlgebra) -> ValidationReport:
    """Check w theta = 0 and theta m1 + delta1 theta = delta0 eta + eps m0 - delta2 (theta (x) theta) m2."""
    report = ValidationReport(subject="twisting cochain")
    t = theta.theta
    k = ground_module(A.A.ring)
    report.check("augmentation_vanishes", C.w @ t, zero(k, A.A, 1), [0])
    report.check(
        "maurer_cartan",
        t @ A.m1 + C.delta1 @ t,
        C.delta0 @ A.eta + C.eps @ A.m0 - C.delta2 @ tensor_map(t, t) @ A.m2,
    )
    return report.log_outcome()


def validate_twisting_cochain_dg(theta: TwistingCochain, C: CACoalgebra, A: UCCAlgebra) -> ValidationReport:
    """Reduced form on Cbar for dg algebras and augmented curved coalgebras.

    thetabar m1 + deltabar1 thetabar = incl delta0 eta - deltabar2 (thetabar (x) thetabar) m2,
    with thetabar = incl theta and deltabar1 = incl delta1 pr.
    """
    report = ValidationReport(subject="twisting cochain (reduced form)")
    report.require("dg_algebra", is_ucdg(A), detail="the algebra has nonzero curvature")
    report.require("augmented_coalgebra", is_ac(C), detail="the coalgebra is not augmented curved")
    incl = C.incl()
    tbar = incl @ theta.theta
    dbar1 = incl @ C.delta1 @ C.pr()
    report.check(
        "reduced_maurer_cartan",
        tbar @ A.m1 + dbar1 @ tbar,
        incl @ C.delta0 @ A.eta - C.reduced_coproduct() @ tensor_map(tbar, tbar) @ A.m2,
    )
    return report.log_outcome()


def _checked(theta: GradedMap, C: CACoalgebra, A: UCCAlgebra, strict: bool) -> TwistingCochain:
    cochain = TwistingCochain(theta=theta)
    if strict:
        report = validate_twisting_cochain(cochain, C, A)
        if not report.is_valid:
            raise TwistingCochainViolation(str(report.errors[0]), report.violated_eq, report.witness)
    return cochain


def to_twisting_cochain(
    f: AlgMorphism,
    C: CACoalgebra,
    A: UCCAlgebra,
    cap: Optional[int] = None,
    cobar: Optional[CobarResult] = None,
    strict: bool = True,
) -> TwistingCochain:
    """theta = pr_C sigma^{-1} fcheck_1.

    Raises:
        TwistingCochainViolation: In strict mode, when theta fails either equation.
    """
    cobar = cobar or cobar_object(C, cap=cap)
    theta = C.pr() @ _cbar_to_y(C) @ _letter_map(f, cobar)
    return _checked(theta, C, A, strict)


def tw_to_alg(
    theta: TwistingCochain,
    C: CACoalgebra,
    A: UCCAlgebra,
    cap: Optional[int] = None,
    cobar: Optional[CobarResult] = None,
) -> AlgMorphism:
    """fcheck_1 = sigma incl_C theta, extended multiplicatively, und = 0."""
    cobar = cobar or cobar_object(C, cap=cap)
    fcheck = _y_to_cbar(C) @ C.incl() @ theta.theta
    return AlgMorphism(f1=multiplicative_extension(fcheck, cobar.words, A.m2, A.eta), und=0)


def tw_to_coalg(
    theta: TwistingCochain,
    C: CACoalgebra,
    A: UCCAlgebra,
    cap: Optional[int] = None,
    bar: Optional[BarResult] = None,
) -> CoalgMorphism:
    """gcheck_1 = incl theta pr_A sigma and g0' = incl theta v, assembled with und = 0."""
    bar = bar or bar_object(A, cap=cap)
    restricted = C.incl() @ theta.theta
    gcheck = restricted @ A.pr() @ _abar_to_x(A)
    return assemble_coalg_morphism(C, bar, gcheck, restricted @ A.v, 0)


def coalg_to_tw(
    g: CoalgMorphism,
    C: CACoalgebra,
    A: UCCAlgebra,
    cap: Optional[int] = None,
    bar: Optional[BarResult] = None,
    strict: bool = True,
) -> TwistingCochain:
    """theta = pr_C (gcheck_1 sigma^{-1} incl_A + g0' eta)."""
    bar = bar or bar_object(A, cap=cap)
    gcheck = C.incl() @ g.g1 @ bar.words.pr(1)
    g0_restricted, _ = g.restricted(C)
    theta = C.pr() @ (gcheck @ _x_to_abar(A) @ A.incl() + g0_restricted @ A.eta)
    return _checked(theta, C, A, strict)


# ---------------------------------------------------------------------------
# Witnesses and naturality
# ---------------------------------------------------------------------------


def make_witness(C: CACoalgebra, A: UCCAlgebra, f: AlgMorphism, cobar_cap: int, bar_cap: int) -> AdjunctionWitness:
    """Complete f: Cobar C -> A to a witness (C, A, f, g, theta)."""
    cobar = cobar_object(C, cap=cobar_cap)
    bar = bar_object(A, cap=bar_cap)
    g = adjoint_fwd(f, C, A, cobar=cobar, bar=bar)
    theta = to_twisting_cochain(f, C, A, cobar=cobar, strict=False)
    return AdjunctionWitness(C=C, A=A, f=f, g=g, theta=theta, cobar_cap=cobar_cap, bar_cap=bar_cap)


def counit_witness(A: UCCAlgebra, bar_cap: int = 2, cobar_cap: int = 4) -> AdjunctionWitness:
    """The witness of the identity of Bar A: C = Bar A, g = id, f = adjoint_bwd(id).

    Bar A must be exact (pr m0 = 0) for C to be a genuine coalgebra.
    """
    bar = bar_object(A, cap=bar_cap)
    C = bar.coalgebra
    g = identity_coalg_morphism(C)
    cobar = cobar_object(C, cap=cobar_cap)
    f = adjoint_bwd(g, C, A, cobar=cobar, bar=bar)
    theta = to_twisting_cochain(f, C, A, cobar=cobar, strict=False)
    return AdjunctionWitness(C=C, A=A, f=f, g=g, theta=theta, cobar_cap=cobar_cap, bar_cap=bar_cap)


def check_naturality_in_A(
    h: AlgMorphism,
    f: AlgMorphism,
    C: CACoalgebra,
    A: UCCAlgebra,
    B: UCCAlgebra,
    cobar_cap: int = 4,
    bar_cap: int = 2,
) -> ValidationReport:
    """Compare (f then h) transported with (f transported) then Bar h.

    Also checks w q0 = und f + und h and v_A + pr_A incl_A h1 v_B = h1 v_B.
    """
    report = ValidationReport(subject="naturality in the algebra")
    cobar = cobar_object(C, cap=cobar_cap)
    bar_A, bar_B = bar_object(A, cap=bar_cap), bar_object(B, cap=bar_cap)
    q = adjoint_fwd(compose_alg_morphisms(f, h), C, B, cobar=cobar, bar=bar_B)
    path = compose_coalg_morphisms(adjoint_fwd(f, C, A, cobar=cobar, bar=bar_A), bar_morphism(h, A, B, cap=bar_cap))
    report.check("square_g1", q.g1, path.g1)
    report.check("square_g0", q.g0, path.g0)
    ring = C.C.ring
    report.require("scalar_part", ring.reduce(q.und(C) - f.und - h.und) == 0, [q.und(C), f.und, h.und])
    h1 = h.f1
    report.check("splitting_identity", A.v + A.pr() @ A.incl() @ h1 @ B.v, h1 @ B.v)
    return report.log_outcome()


def check_naturality_in_C(
    j: CoalgMorphism,
    f: AlgMorphism,
    C: CACoalgebra,
    D: CACoalgebra,
    A: UCCAlgebra,
    cobar_cap: int = 4,
    bar_cap: int = 2,
) -> ValidationReport:
    """Compare (Cobar j then f) transported with j then (f transported).

    Also checks w r0 = und Cobar j + und f and the letter identity
    (Cobar_1 j f1)check = gbar_0 eta + gbar_1 fcheck_1.
    """
    report = ValidationReport(subject="naturality in the coalgebra")
    cobar_C, cobar_D = cobar_object(C, cap=cobar_cap), cobar_object(D, cap=cobar_cap)
    bar = bar_object(A, cap=bar_cap)
    cobar_j = cobar_morphism(j, C, D, cap=cobar_cap)
    composite = compose_alg_morphisms(cobar_j, f)
    r = adjoint_fwd(composite, C, A, cobar=cobar_C, bar=bar)
    path = compose_coalg_morphisms(j, adjoint_fwd(f, D, A, cobar=cobar_D, bar=bar))
    report.check("square_g1", r.g1, path.g1)
    report.check("square_g0", r.g0, path.g0)
    ring = C.C.ring
    report.require("scalar_part", ring.reduce(r.und(C) - cobar_j.und - f.und) == 0, [r.und(C), cobar_j.und, f.und])
    gbar0, gbar1, _ = cobar_morphism_components(j, C, D)
    report.check(
        "letter_identity",
        _letter_map(composite, cobar_C),
        gbar0 @ A.eta + gbar1 @ _letter_map(f, cobar_D),
    )
    return report.log_outcome()


# ---------------------------------------------------------------------------
# Split equation systems
# ---------------------------------------------------------------------------

SYSTEM_LABELS = ("a", "b", "c", "d")


def split_equations_alg(f: AlgMorphism, cobar: CobarResult, A: UCCAlgebra) -> Dict[str, bool]:
    """The morphism equations of f: Cobar C -> A split along A = Abar + k.

    a, b: the differential equation on generators composed with pr_A and v;
    c, d: the curvature equation composed with pr_A and v.
    """
    inj1 = cobar.words.inj(1)
    src = cobar.algebra
    diff_lhs = inj1 @ src.m1 @ f.f1
    diff_rhs = inj1 @ f.f1 @ A.m1
    curv_lhs = src.m0 @ f.f1
    return {
        "a": maps_equal(diff_lhs @ A.pr(), diff_rhs @ A.pr()) is None,
        "b": maps_equal(diff_lhs @ A.v, diff_rhs @ A.v) is None,
        "c": maps_equal(curv_lhs @ A.pr(), A.m0 @ A.pr()) is None,
        "d": maps_equal(curv_lhs @ A.v, A.m0 @ A.v) is None,
    }


def split_equations_coalg(g: CoalgMorphism, C: CACoalgebra, bar: BarResult) -> Dict[str, bool]:
    """The morphism equations of g: C -> Bar A on cogenerators, split along C = Cbar + k w.

    a: incl delta1 pr gcheck + incl delta2 (g0 (x) 1 - 1 (x) g0) pr gcheck
       = gcheck incl b1 pr + deltabar2 (gcheck (x) gcheck)(incl (x) incl) b2 pr
    b: incl (delta0 - delta1 g0) - deltabar2 (g0' (x) g0')
       = -gcheck incl b1 v - deltabar2 (gcheck incl (x) gcheck incl) b2 v
    c: w delta1 pr gcheck = b0 pr
    d: w delta0 - w delta1 g0 = -b0 v
    """
    ainf = bar.source
    incl_X, pr_X, v_b = bar.incl_letters, bar.pr_letters, ainf.v_bold
    b0, b1, b2 = ainf.op(0), ainf.op(1), ainf.op(2)
    incl, pr = C.incl(), C.pr()
    idC = identity(C.C)
    gcheck = incl @ g.g1 @ bar.words.pr(1)
    g0_restricted, _ = g.restricted(C)
    dbar2 = C.reduced_coproduct()
    lifted = gcheck @ incl_X

    a_lhs = incl @ C.delta1 @ pr @ gcheck + incl @ C.delta2 @ (tensor_map(g.g0, idC) - tensor_map(idC, g.g0)) @ pr @ gcheck
    a_rhs = lifted @ b1 @ pr_X + dbar2 @ tensor_map(gcheck, gcheck) @ tensor_map(incl_X, incl_X) @ b2 @ pr_X
    b_lhs = incl @ (C.delta0 - C.delta1 @ g.g0) - dbar2 @ tensor_map(g0_restricted, g0_restricted)
    b_rhs = (lifted @ b1 @ v_b).scale(-1) - dbar2 @ tensor_map(lifted, lifted) @ b2 @ v_b
    c_lhs = C.w @ C.delta1 @ pr @ gcheck
    d_lhs = C.w @ C.delta0 - C.w @ C.delta1 @ g.g0
    return {
        "a": maps_equal(a_lhs, a_rhs) is None,
        "b": maps_equal(b_lhs, b_rhs) is None,
        "c": maps_equal(c_lhs, b0 @ pr_X) is None,
        "d": maps_equal(d_lhs, (b0 @ v_b).scale(-1)) is None,
    }


def check_system_equivalence(
    f: AlgMorphism,
    g: CoalgMorphism,
    C: CACoalgebra,
    A: UCCAlgebra,
    cobar: CobarResult,
    bar: BarResult,
) -> ValidationReport:
    """Each split algebra-side equation holds iff its coalgebra-side partner holds.

    f and g are expected to correspond under the adjunction; neither needs to be a morphism.
    """
    report = ValidationReport(subject="split equation systems")
    alg_side = split_equations_alg(f, cobar, A)
    coalg_side = split_equations_coalg(g, C, bar)
    for label in SYSTEM_LABELS:
        report.require(
            f"equivalence_{label}",
            alg_side[label] == coalg_side[label],
            [label, alg_side[label], coalg_side[label]],
            f"algebra side {alg_side[label]}, coalgebra side {coalg_side[label]}",
        )
    logger.debug(f"split systems: algebra {alg_side}, coalgebra {coalg_side}")
    return report.log_outcome()
