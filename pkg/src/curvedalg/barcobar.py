"""Bar and cobar constructions at object and morphism level.

Bar A is the truncated tensor coalgebra on X = Abar[1] with the cut coproduct and the
coderivation assembled from the reduced operations. Cobar C is the truncated tensor
algebra on Y = Cbar[-1] with concatenation and the derivation assembled from the
reduced cooperations. Truncation is accounted for explicitly: a bar result is exact on
words of length at most ``cap - 2``, a cobar result on generator-level identities.
"""

import logging
from typing import Dict, List, Optional, Union

from pydantic import BaseModel, ConfigDict

from .config import uses_default_cap
from .curved import (
    AlgMorphism,
    CACoalgebra,
    CoalgMorphism,
    CurvedAInfAlgebra,
    CurvedAInfCoalgebra,
    UCCAlgebra,
    b_from_m,
    validate_ca_coalgebra,
    validate_ucc_algebra,
    xi_from_delta,
)
from .exceptions import CapTooSmall, InvariantViolation
from .gmod import (
    GradedMap,
    GradedModule,
    drop_first,
    ground_module,
    identity,
    include_tail,
    maps_equal,
    shift_map,
    sigma,
    sum_maps,
    tensor_map,
    tensor_maps,
    tensor_power,
    tensor_power_module,
    zero,
)
from .report import ValidationReport
from .tca import (
    WordModule,
    algebra_hom_from_components,
    coalgebra_hom_from_components,
    coderivation_from_components,
    concat_product,
    cut_coproduct,
    derivation_from_components,
)

logger = logging.getLogger(__name__)

BAR_MIN_CAP = 2
COBAR_MIN_CAP = 4


class BarResult(BaseModel):
    """
    Truncated bar construction of a curved A-infinity algebra.

    Attributes:
        coalgebra (CACoalgebra): The coalgebra on the word module over Abar[1].
        cap (int): Maximal word length N.
        exactness_window (int): Largest word length on which every axiom is exact (N - 2).
        words (WordModule): Word module over the letter module Abar[1].
        source (CurvedAInfAlgebra): The b-form the construction was built from.
        components (Dict[int, GradedMap]): Reduced operations bbar_n: X^{(x)n} -> X.
    """

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    coalgebra: CACoalgebra
    cap: int
    exactness_window: int
    words: WordModule
    source: CurvedAInfAlgebra
    components: Dict[int, GradedMap]

    def window_rows(self) -> List[int]:
        return list(self.words.window(self.exactness_window))

    @property
    def incl_letters(self) -> GradedMap:
        """X -> A[1]."""
        return include_tail(self.source.P)

    @property
    def pr_letters(self) -> GradedMap:
        """A[1] -> X, (1 - v eta) followed by dropping the unit line."""
        P = self.source.P
        return (identity(P) - self.source.v_bold @ self.source.eta_bold) @ drop_first(P)

    def validate(self) -> ValidationReport:
        """Validate the coalgebra axioms on the exactness window."""
        return validate_ca_coalgebra(self.coalgebra, window=self.window_rows())


class CobarResult(BaseModel):
    """
    Truncated cobar construction of a curved augmented coalgebra.

    Attributes:
        algebra (UCCAlgebra): The algebra on the word module over Cbar[-1].
        cap (int): Maximal word length N.
        words (WordModule): Word module over the letter module Cbar[-1].
        source (CurvedAInfCoalgebra): The xi-form the construction was built from.
        components (Dict[int, GradedMap]): Reduced cooperations xibar_n: Y -> Y^{(x)n}.
        m0_components (Dict[int, GradedMap]): Curvature components k -> Y^{(x)n}, n in {0, 1, 2}.
    """

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    algebra: UCCAlgebra
    cap: int
    words: WordModule
    source: CurvedAInfCoalgebra
    components: Dict[int, GradedMap]
    m0_components: Dict[int, GradedMap]

    def window_rows(self) -> List[int]:
        """The empty word and the generators."""
        return list(self.words.window(1))

    @property
    def incl_letters(self) -> GradedMap:
        """Y -> C[-1]."""
        return include_tail(self.source.Q)

    @property
    def pr_letters(self) -> GradedMap:
        """C[-1] -> Y, (1 - eps w) followed by dropping the counit line."""
        Q = self.source.Q
        return (identity(Q) - self.source.eps_bold @ self.source.w_bold) @ drop_first(Q)

    def validate(self) -> ValidationReport:
        """Validate the algebra axioms at generator level."""
        return validate_ucc_algebra(self.algebra, window=self.window_rows())


def _as_b_form(alg: Union[UCCAlgebra, CurvedAInfAlgebra]) -> CurvedAInfAlgebra:
    return b_from_m(alg) if isinstance(alg, UCCAlgebra) else alg


def _letters(M: GradedModule) -> GradedModule:
    return GradedModule(ring=M.ring, gens=M.degrees()[1:])


@uses_default_cap
def bar_object(alg: Union[UCCAlgebra, CurvedAInfAlgebra], cap: Optional[int] = None) -> BarResult:
    """Truncated bar construction.

    Args:
        alg: A unit-complemented curved algebra or a curved A-infinity algebra in b-form.
        cap: Maximal word length; defaults to the configured cap.

    Returns:
        BarResult: Coalgebra with cut coproduct, coderivation from bbar_n = incl b_n pr and
            curvature functional with components -(incl b_n v_bold).

    Raises:
        CapTooSmall: If cap < 2.
    """
    if cap < BAR_MIN_CAP:
        raise CapTooSmall(f"bar construction needs cap >= {BAR_MIN_CAP}, got {cap}", BAR_MIN_CAP)
    ainf = _as_b_form(alg)
    P = ainf.P
    X = _letters(P)
    k = ground_module(P.ring)
    incl = include_tail(P)
    pr = (identity(P) - ainf.v_bold @ ainf.eta_bold) @ drop_first(P)
    W = WordModule(letter=X, cap=cap)
    logger.info(f"Building bar construction: {X.rank} letters, cap {cap}, arities {sorted(ainf.b)}")

    components = {n: tensor_power(incl, n) @ bn @ pr for n, bn in ainf.b.items()}
    curvature = {
        n: (tensor_power(incl, n) @ bn @ ainf.v_bold).scale(-1) for n, bn in ainf.b.items() if n <= cap
    }
    delta2 = cut_coproduct(W)
    delta1 = coderivation_from_components(components, W, strict=False)
    delta0 = W.gather(curvature, k, 2)
    index = cap + 1 if X.rank else 2
    coalgebra = CACoalgebra(
        C=W.module,
        delta2=delta2,
        delta1=delta1,
        delta0=delta0,
        eps=W.pr(0),
        w=W.inj(0),
        conilpotency_index=index,
    )
    return BarResult(
        coalgebra=coalgebra,
        cap=cap,
        exactness_window=cap - 2,
        words=W,
        source=ainf,
        components=components,
    )


def bar_is_exact(bar: BarResult) -> bool:
    """True when bbar_0 vanishes, so the coderivation never lengthens words and every axiom is exact."""
    b0 = bar.components.get(0)
    return b0 is None or not b0.entries()


@uses_default_cap
def bar_morphism(f: AlgMorphism, A: UCCAlgebra, B: UCCAlgebra, cap: Optional[int] = None) -> CoalgMorphism:
    """Bar of an algebra morphism: the strict coalgebra hom on fbar_1 with g0 = und f on the empty word
    and incl f1 v_bold on letters."""
    bA, bB = b_from_m(A), b_from_m(B)
    PA, PB = bA.P, bB.P
    XA, XB = _letters(PA), _letters(PB)
    WA, WB = WordModule(letter=XA, cap=cap), WordModule(letter=XB, cap=cap)
    f1b = shift_map(f.f1, 1)
    pr_B = (identity(PB) - bB.v_bold @ bB.eta_bold) @ drop_first(PB)
    incl_A = include_tail(PA)
    fbar = incl_A @ f1b @ pr_B
    g1 = coalgebra_hom_from_components({1: fbar}, WA, WB)
    g0 = WA.gather({0: f.und_map(), 1: incl_A @ f1b @ bB.v_bold}, ground_module(PA.ring), 1)
    logger.debug(f"bar morphism on cap {cap}, und {f.und}")
    return CoalgMorphism(g1=g1, g0=g0)


def bar_arity_identities(bar: BarResult, max_arity: Optional[int] = None) -> ValidationReport:
    """Check the per-arity identities behind the bar coalgebra axioms.

    For each n up to ``max_arity`` (default: the exactness window):

    * sum (1^r (x) bbar_k (x) 1^t) bbar_{r+1+t} = phi_{n-1} (x) 1 - 1 (x) phi_{n-1}
      with phi_n = incl^{(x)n} b_n v_bold;
    * sum (1^r (x) bbar_k (x) 1^t) phi_{r+1+t} = 0.
    """
    report = ValidationReport(subject="bar arity identities")
    ainf = bar.source
    X = bar.words.letter
    k = ground_module(X.ring)
    incl = bar.incl_letters
    idX = identity(X)
    top = max_arity if max_arity is not None else bar.exactness_window
    phi = {n: tensor_power(incl, n) @ ainf.op(n) @ ainf.v_bold for n in range(top + 2)}
    bbar = {n: tensor_power(incl, n) @ ainf.op(n) @ bar.pr_letters for n in range(top + 2)}

    def insertions(n: int, targets: Dict[int, GradedMap], cod: GradedModule, deg: int) -> GradedMap:
        terms = []
        for kk in range(n + 1):
            for r in range(n - kk + 1):
                t = n - kk - r
                inner = tensor_maps(
                    [identity(tensor_power_module(X, r)), bbar[kk], identity(tensor_power_module(X, t))], X.ring
                )
                terms.append(inner @ targets[r + 1 + t])
        return sum_maps(terms, tensor_power_module(X, n), cod, deg)

    for n in range(1, top + 1):
        lhs = insertions(n, bbar, X, 2)
        rhs = tensor_map(phi[n - 1], idX) - tensor_map(idX, phi[n - 1])
        report.check(f"bar_letter_identity_{n}", lhs, rhs)
    for n in range(0, top + 1):
        lhs = insertions(n, phi, k, 3)
        report.check(f"bar_scalar_identity_{n}", lhs, zero(tensor_power_module(X, n), k, 3))
    return report.log_outcome()


@uses_default_cap
def cobar_object(C: CACoalgebra, cap: Optional[int] = None) -> CobarResult:
    """Truncated cobar construction.

    Args:
        C: A curved augmented coalgebra.
        cap: Maximal word length; defaults to the configured cap.

    Returns:
        CobarResult: Algebra with concatenation, derivation from xibar_n = incl xi_n pr^{(x)n}
            (n <= 2) and curvature with components -w xi_0 and -w xi_1 pr.

    Raises:
        CapTooSmall: If cap < 4.
        InvariantViolation: If a construction-time identity fails.
    """
    if cap < COBAR_MIN_CAP:
        raise CapTooSmall(f"cobar construction needs cap >= {COBAR_MIN_CAP}, got {cap}", COBAR_MIN_CAP)
    xi = xi_from_delta(C)
    Q = xi.Q
    Y = _letters(Q)
    k = ground_module(Q.ring)
    incl = include_tail(Q)
    pr = (identity(Q) - xi.eps_bold @ xi.w_bold) @ drop_first(Q)
    W = WordModule(letter=Y, cap=cap)
    logger.info(f"Building cobar construction: {Y.rank} letters, cap {cap}")

    idQ = identity(Q)
    proj = idQ - xi.eps_bold @ xi.w_bold
    xi2 = xi.op(2)
    expected = (
        xi2
        + tensor_map(idQ, xi.w_bold)
        - tensor_map(xi.w_bold, idQ)
        - xi.eps_bold @ tensor_map(xi.w_bold, xi.w_bold)
    )
    if maps_equal(xi2 @ tensor_map(proj, proj), expected) is not None:
        raise InvariantViolation("reduced cooperation xi_2 (pr (x) pr) does not match its counit expansion")

    components = {n: incl @ xi.op(n) @ tensor_power(pr, n) for n in (0, 1, 2)}
    m0_parts = {
        0: (xi.w_bold @ xi.op(0)).scale(-1),
        1: (xi.w_bold @ xi.op(1) @ pr).scale(-1),
    }
    top = (tensor_map(xi.w_bold, xi.w_bold).scale(-1) - xi.w_bold @ xi2) @ tensor_map(pr, pr)
    if top.row(0):
        raise InvariantViolation("curvature component of word length 2 does not vanish")
    m0_parts[2] = zero(k, tensor_power_module(Y, 2), 2)

    m2 = concat_product(W)
    m1 = derivation_from_components(components, W, strict=False)
    m0 = W.scatter(m0_parts, k, 2)
    algebra = UCCAlgebra(A=W.module, m2=m2, m1=m1, m0=m0, eta=W.inj(0), v=W.pr(0))
    if maps_equal(m0 @ m1, zero(k, W.module, 3), [0]) is not None:
        raise InvariantViolation("cobar curvature is not closed: m0 m1 != 0")
    return CobarResult(
        algebra=algebra, cap=cap, words=W, source=xi, components=components, m0_components=m0_parts
    )


def cobar_arity_identities(cobar: CobarResult) -> ValidationReport:
    """Check sum xibar_{r+1+t} (1^r (x) xibar_k (x) 1^t) = (m0)_{n-1} (x) 1 - 1 (x) (m0)_{n-1} on generators."""
    report = ValidationReport(subject="cobar arity identities")
    Y = cobar.words.letter
    xbar = cobar.components
    idY = identity(Y)
    for n in range(0, 4):
        terms = []
        for kk in range(min(n, 2) + 1):
            for r in range(n - kk + 1):
                t = n - kk - r
                if r + 1 + t > 2:
                    continue
                inner = tensor_maps(
                    [identity(tensor_power_module(Y, r)), xbar[kk], identity(tensor_power_module(Y, t))], Y.ring
                )
                terms.append(xbar[r + 1 + t] @ inner)
        cod = tensor_power_module(Y, n)
        lhs = sum_maps(terms, Y, cod, 2)
        m0 = cobar.m0_components.get(n - 1)
        rhs = tensor_map(m0, idY) - tensor_map(idY, m0) if m0 is not None else zero(Y, cod, 2)
        report.check(f"cobar_generator_identity_{n}", lhs, rhs)
    return report.log_outcome()


def cobar_morphism_components(g: CoalgMorphism, C: CACoalgebra, D: CACoalgebra):
    """Letter data (gbar_0, gbar_1, und) of Cobar g.

    Returns:
        Tuple of gbar_0: Y_C -> k, gbar_1: Y_C -> Y_D and the scalar w_bold g0_bold.

    Raises:
        InvariantViolation: If w_bold g1_bold pr does not vanish.
    """
    xC, xD = xi_from_delta(C), xi_from_delta(D)
    QC, QD = xC.Q, xD.Q
    g1b = shift_map(g.g1, -1)
    g0b = sigma(QC, 1) @ g.g0
    incl_C = include_tail(QC)
    pr_D = (identity(QD) - xD.eps_bold @ xD.w_bold) @ drop_first(QD)
    if (xC.w_bold @ g1b @ pr_D).row(0):
        raise InvariantViolation("w g1 does not land on the augmentation line")
    gbar1 = incl_C @ g1b @ pr_D
    gbar0 = incl_C @ g0b
    und = (xC.w_bold @ g0b).entry(0, 0)
    return gbar0, gbar1, und


@uses_default_cap
def cobar_morphism(g: CoalgMorphism, C: CACoalgebra, D: CACoalgebra, cap: Optional[int] = None) -> AlgMorphism:
    """Cobar of a coalgebra morphism: the algebra hom with letter components gbar_0 and gbar_1, und = w g0."""
    gbar0, gbar1, und = cobar_morphism_components(g, C, D)
    WC = WordModule(letter=gbar1.dom, cap=cap)
    WD = WordModule(letter=gbar1.cod, cap=cap)
    f1 = algebra_hom_from_components({0: gbar0, 1: gbar1}, WC, WD)
    logger.debug(f"cobar morphism on cap {cap}, und {und}")
    return AlgMorphism(f1=f1, und=und)
