"""Curved algebra and coalgebra structures, their morphisms and axiom validators.

Four presentations are supported:

* :class:`UCCAlgebra` - unit-complemented curved algebras (m-form, arity <= 2).
* :class:`CurvedAInfAlgebra` - curved A-infinity algebras on the shift A[1] (b-form).
* :class:`CACoalgebra` - curved augmented coalgebras (delta-form, arity <= 2).
* :class:`CurvedAInfCoalgebra` - curved A-infinity coalgebras on C[-1] (xi-form).

Complements are normalized: the unit (counit) generator has index 0 and the
splitting v (counit eps) is the dual of that generator.
"""

import logging
from typing import Dict, Optional, Sequence, Tuple

from pydantic import BaseModel, ConfigDict, model_validator

from .config import Settings
from .exceptions import CurvedAlgError, NotConilpotentUpToCap, ShapeMismatch
from .gmod import (
    GradedMap,
    GradedModule,
    drop_first,
    ground_module,
    identity,
    include_tail,
    maps_equal,
    power_rows,
    scalar_map,
    shift_module,
    sigma,
    sigma_power_inverse,
    sum_maps,
    tensor_map,
    tensor_maps,
    tensor_module,
    tensor_power,
    tensor_power_module,
    zero,
)
from .report import ValidationReport
from .tca import conilpotency_index

logger = logging.getLogger(__name__)

_STRUCTURE_CONFIG = ConfigDict(arbitrary_types_allowed=True, frozen=True)


def _require(f: GradedMap, dom: GradedModule, cod: GradedModule, deg: int, name: str):
    if f.dom != dom or f.cod != cod:
        raise ShapeMismatch(f"{name}: unexpected domain or codomain")
    if f.deg != deg:
        raise ShapeMismatch(f"{name}: expected degree {deg}, got {f.deg}")


def _require_dual_of_first(f: GradedMap, name: str):
    """f: M -> k must be the dual of the first generator."""
    for i in range(f.dom.rank):
        expected = {0: 1} if i == 0 else {}
        if f.row(i) != expected:
            raise ShapeMismatch(f"{name} must be the dual of generator 0 (row {i} is {f.row(i)})")


def _require_unit_vector(f: GradedMap, name: str):
    """f: k -> M must have coefficient 1 on generator 0."""
    if f.row(0).get(0) != 1:
        raise ShapeMismatch(f"{name} must have coefficient 1 on generator 0")


def _sign(n: int) -> int:
    return -1 if n % 2 else 1


# ---------------------------------------------------------------------------
# Structures
# ---------------------------------------------------------------------------


class UCCAlgebra(BaseModel):
    """
    Unit-complemented curved algebra (A, m2, m1, m0, eta, v).

    Attributes:
        A (GradedModule): Underlying module; generator 0 spans the unit line.
        m2 (GradedMap): Multiplication A (x) A -> A, degree 0.
        m1 (GradedMap): Derivation A -> A, degree 1.
        m0 (GradedMap): Curvature k -> A, degree 2.
        eta (GradedMap): Unit k -> A, degree 0, coefficient 1 on generator 0.
        v (GradedMap): Splitting A -> k, degree 0, dual of generator 0.
    """

    model_config = _STRUCTURE_CONFIG

    A: GradedModule
    m2: GradedMap
    m1: GradedMap
    m0: GradedMap
    eta: GradedMap
    v: GradedMap

    @model_validator(mode="after")
    def validate_shapes(self) -> "UCCAlgebra":
        A, k = self.A, ground_module(self.A.ring)
        _require(self.m2, tensor_module(A, A), A, 0, "m2")
        _require(self.m1, A, A, 1, "m1")
        _require(self.m0, k, A, 2, "m0")
        _require(self.eta, k, A, 0, "eta")
        _require(self.v, A, k, 0, "v")
        _require_dual_of_first(self.v, "v")
        _require_unit_vector(self.eta, "eta")
        return self

    @property
    def k(self) -> GradedModule:
        return ground_module(self.A.ring)

    def incl(self) -> GradedMap:
        """Abar -> A."""
        return include_tail(self.A)

    def pr(self) -> GradedMap:
        """A -> Abar, x |-> x - (x v) eta on the complement."""
        return (identity(self.A) - self.v @ self.eta) @ drop_first(self.A)


class CACoalgebra(BaseModel):
    """
    Curved augmented coalgebra (C, delta2, delta1, delta0, eps, w).

    Attributes:
        C (GradedModule): Underlying module; generator 0 is dual to the counit.
        delta2 (GradedMap): Comultiplication C -> C (x) C, degree 0.
        delta1 (GradedMap): Coderivation C -> C, degree 1.
        delta0 (GradedMap): Curvature functional C -> k, degree 2.
        eps (GradedMap): Counit C -> k, dual of generator 0.
        w (GradedMap): Augmentation k -> C, coefficient 1 on generator 0.
        conilpotency_index (Optional[int]): Certified index of the reduced coproduct.
    """

    model_config = _STRUCTURE_CONFIG

    C: GradedModule
    delta2: GradedMap
    delta1: GradedMap
    delta0: GradedMap
    eps: GradedMap
    w: GradedMap
    conilpotency_index: Optional[int] = None

    @model_validator(mode="after")
    def validate_shapes(self) -> "CACoalgebra":
        C, k = self.C, ground_module(self.C.ring)
        _require(self.delta2, C, tensor_module(C, C), 0, "delta2")
        _require(self.delta1, C, C, 1, "delta1")
        _require(self.delta0, C, k, 2, "delta0")
        _require(self.eps, C, k, 0, "eps")
        _require(self.w, k, C, 0, "w")
        _require_dual_of_first(self.eps, "eps")
        _require_unit_vector(self.w, "w")
        return self

    @property
    def k(self) -> GradedModule:
        return ground_module(self.C.ring)

    def incl(self) -> GradedMap:
        """Cbar -> C."""
        return include_tail(self.C)

    def pr(self) -> GradedMap:
        """C -> Cbar, x |-> x - (x eps) w on the complement."""
        return (identity(self.C) - self.eps @ self.w) @ drop_first(self.C)

    def reduced_coproduct(self) -> GradedMap:
        """Cbar -> Cbar (x) Cbar."""
        pr = self.pr()
        return self.incl() @ self.delta2 @ tensor_map(pr, pr)

    def with_index(self, cap: Optional[int] = None) -> "CACoalgebra":
        """Copy carrying a freshly computed conilpotency certificate."""
        index = conilpotency_index(self.reduced_coproduct(), cap or Settings.get_conilpotency_cap())
        return self.model_copy(update={"conilpotency_index": index})


class CurvedAInfAlgebra(BaseModel):
    """
    Curved A-infinity algebra in b-form on P = A[1].

    Attributes:
        A (GradedModule): Underlying (unshifted) module.
        b (Dict[int, GradedMap]): Operations b_n: P^{(x)n} -> P of degree 1; absent arities vanish.
        eta_bold (GradedMap): k -> P, degree -1.
        v_bold (GradedMap): P -> k, degree 1.
        arity_cap (int): Highest arity checked by validators.
    """

    model_config = _STRUCTURE_CONFIG

    A: GradedModule
    b: Dict[int, GradedMap]
    eta_bold: GradedMap
    v_bold: GradedMap
    arity_cap: int = 4

    @model_validator(mode="after")
    def validate_shapes(self) -> "CurvedAInfAlgebra":
        P, k = self.P, ground_module(self.A.ring)
        for n, bn in self.b.items():
            if n > self.arity_cap:
                raise ShapeMismatch(f"b_{n} exceeds arity cap {self.arity_cap}")
            _require(bn, tensor_power_module(P, n), P, 1, f"b_{n}")
        _require(self.eta_bold, k, P, -1, "eta_bold")
        _require(self.v_bold, P, k, 1, "v_bold")
        _require_dual_of_first(self.v_bold, "v_bold")
        _require_unit_vector(self.eta_bold, "eta_bold")
        return self

    @property
    def P(self) -> GradedModule:
        return shift_module(self.A, 1)

    def op(self, n: int) -> GradedMap:
        P = self.P
        return self.b.get(n) or zero(tensor_power_module(P, n), P, 1)


class CurvedAInfCoalgebra(BaseModel):
    """
    Curved A-infinity coalgebra in xi-form on Q = C[-1].

    Attributes:
        C (GradedModule): Underlying (unshifted) module.
        xi (Dict[int, GradedMap]): Cooperations xi_n: Q -> Q^{(x)n} of degree 1.
        eps_bold (GradedMap): Q -> k, degree -1.
        w_bold (GradedMap): k -> Q, degree 1.
        arity_cap (int): Highest arity checked by validators.
    """

    model_config = _STRUCTURE_CONFIG

    C: GradedModule
    xi: Dict[int, GradedMap]
    eps_bold: GradedMap
    w_bold: GradedMap
    arity_cap: int = 4

    @model_validator(mode="after")
    def validate_shapes(self) -> "CurvedAInfCoalgebra":
        Q, k = self.Q, ground_module(self.C.ring)
        for n, xn in self.xi.items():
            if n > self.arity_cap:
                raise ShapeMismatch(f"xi_{n} exceeds arity cap {self.arity_cap}")
            _require(xn, Q, tensor_power_module(Q, n), 1, f"xi_{n}")
        _require(self.eps_bold, Q, k, -1, "eps_bold")
        _require(self.w_bold, k, Q, 1, "w_bold")
        _require_dual_of_first(self.eps_bold, "eps_bold")
        _require_unit_vector(self.w_bold, "w_bold")
        return self

    @property
    def Q(self) -> GradedModule:
        return shift_module(self.C, -1)

    def op(self, n: int) -> GradedMap:
        Q = self.Q
        return self.xi.get(n) or zero(Q, tensor_power_module(Q, n), 1)


class AInfMForm(BaseModel):
    """Unshifted operations m_n: A^{(x)n} -> A of degree 2 - n with unit and splitting."""

    model_config = _STRUCTURE_CONFIG

    A: GradedModule
    m: Dict[int, GradedMap]
    eta: GradedMap
    v: GradedMap
    arity_cap: int = 4

    @classmethod
    def from_ucc(cls, alg: UCCAlgebra, arity_cap: int = 4) -> "AInfMForm":
        return cls(A=alg.A, m={0: alg.m0, 1: alg.m1, 2: alg.m2}, eta=alg.eta, v=alg.v, arity_cap=arity_cap)

    def op(self, n: int) -> GradedMap:
        return self.m.get(n) or zero(tensor_power_module(self.A, n), self.A, 2 - n)

    def to_ucc(self) -> UCCAlgebra:
        """Reduced form; raises ShapeMismatch if an operation of arity > 2 is nonzero."""
        for n, mn in self.m.items():
            if n > 2 and mn.entries():
                raise ShapeMismatch(f"m_{n} is nonzero, not a unit-complemented curved algebra")
        return UCCAlgebra(A=self.A, m2=self.op(2), m1=self.op(1), m0=self.op(0), eta=self.eta, v=self.v)


class AInfDeltaForm(BaseModel):
    """Unshifted cooperations delta_n: C -> C^{(x)n} of degree 2 - n with counit and augmentation."""

    model_config = _STRUCTURE_CONFIG

    C: GradedModule
    delta: Dict[int, GradedMap]
    eps: GradedMap
    w: GradedMap
    arity_cap: int = 4

    @classmethod
    def from_ca(cls, coalg: CACoalgebra, arity_cap: int = 4) -> "AInfDeltaForm":
        return cls(
            C=coalg.C,
            delta={0: coalg.delta0, 1: coalg.delta1, 2: coalg.delta2},
            eps=coalg.eps,
            w=coalg.w,
            arity_cap=arity_cap,
        )

    def op(self, n: int) -> GradedMap:
        return self.delta.get(n) or zero(self.C, tensor_power_module(self.C, n), 2 - n)

    def to_ca(self) -> CACoalgebra:
        for n, dn in self.delta.items():
            if n > 2 and dn.entries():
                raise ShapeMismatch(f"delta_{n} is nonzero, not a curved augmented coalgebra")
        return CACoalgebra(
            C=self.C, delta2=self.op(2), delta1=self.op(1), delta0=self.op(0), eps=self.eps, w=self.w
        )


class AlgMorphism(BaseModel):
    """
    Morphism (f1, und f) of unit-complemented curved algebras; f0 = und f . eta.

    Attributes:
        f1 (GradedMap): A -> B, degree 0.
        und (int): Coefficient of the degree-1 scalar und f (zero unless the ring has degree 1).
    """

    model_config = _STRUCTURE_CONFIG

    f1: GradedMap
    und: int = 0

    @model_validator(mode="after")
    def validate_shapes(self) -> "AlgMorphism":
        if self.f1.deg != 0:
            raise ShapeMismatch("f1 must have degree 0")
        ring = self.f1.ring
        if ring.reduce(self.und) and not ring.realizable(1):
            raise ShapeMismatch(f"{ring.label()} has no degree-1 scalars")
        return self

    def und_map(self) -> GradedMap:
        return scalar_map(self.f1.ring, self.und, 1)


class CoalgMorphism(BaseModel):
    """
    Morphism (g1, g0) of curved augmented coalgebras.

    Attributes:
        g1 (GradedMap): C -> D, degree 0.
        g0 (GradedMap): C -> k, degree 1.
    """

    model_config = _STRUCTURE_CONFIG

    g1: GradedMap
    g0: GradedMap

    @model_validator(mode="after")
    def validate_shapes(self) -> "CoalgMorphism":
        _require(self.g0, self.g1.dom, ground_module(self.g1.ring), 1, "g0")
        if self.g1.deg != 0:
            raise ShapeMismatch("g1 must have degree 0")
        return self

    def restricted(self, C: CACoalgebra) -> Tuple[GradedMap, GradedMap]:
        """The pair (g0', und g): restriction of g0 to Cbar and w g0."""
        return C.incl() @ self.g0, C.w @ self.g0

    @classmethod
    def from_triple(cls, C: CACoalgebra, g1: GradedMap, g0_restricted: GradedMap, und: GradedMap) -> "CoalgMorphism":
        """Rebuild g0 = pr g0' + eps und."""
        return cls(g1=g1, g0=C.pr() @ g0_restricted + C.eps @ und)

    def und(self, C: CACoalgebra) -> int:
        return (C.w @ self.g0).entry(0, 0)


# ---------------------------------------------------------------------------
# Conversions between shifted and unshifted forms
# ---------------------------------------------------------------------------


def b_from_m(alg, arity_cap: Optional[int] = None) -> CurvedAInfAlgebra:
    """b_n = (-1)^n (sigma^{(x)n})^{-1} m_n sigma, eta_bold = eta sigma, v_bold = sigma^{-1} v.

    Args:
        alg: A UCCAlgebra or an AInfMForm.
        arity_cap: Arity cap of the result; defaults to the settings registry.
    """
    mform = AInfMForm.from_ucc(alg) if isinstance(alg, UCCAlgebra) else alg
    cap = arity_cap if arity_cap is not None else (mform.arity_cap if isinstance(alg, AInfMForm) else Settings.get_arity_cap())
    A = mform.A
    s = sigma(A, 1)
    s_inv = sigma(shift_module(A, 1), -1)
    b = {}
    for n, mn in mform.m.items():
        b[n] = (sigma_power_inverse(A, 1, n) @ mn @ s).scale(_sign(n))
    return CurvedAInfAlgebra(A=A, b=b, eta_bold=mform.eta @ s, v_bold=s_inv @ mform.v, arity_cap=cap)


def m_from_b(alg: CurvedAInfAlgebra) -> AInfMForm:
    """m_n = (-1)^n sigma^{(x)n} b_n sigma^{-1}, eta = eta_bold sigma^{-1}, v = sigma v_bold."""
    A = alg.A
    s = sigma(A, 1)
    s_inv = sigma(alg.P, -1)
    m = {}
    for n, bn in alg.b.items():
        m[n] = (tensor_power(s, n) @ bn @ s_inv).scale(_sign(n))
    return AInfMForm(A=A, m=m, eta=alg.eta_bold @ s_inv, v=s @ alg.v_bold, arity_cap=alg.arity_cap)


def xi_from_delta(coalg, arity_cap: Optional[int] = None) -> CurvedAInfCoalgebra:
    """xi_n = (-1)^n sigma delta_n (sigma^{(x)n})^{-1} with sigma: C[-1] -> C; eps_bold = sigma eps, w_bold = w sigma^{-1}.

    Args:
        coalg: A CACoalgebra or an AInfDeltaForm.
        arity_cap: Arity cap of the result.
    """
    dform = AInfDeltaForm.from_ca(coalg) if isinstance(coalg, CACoalgebra) else coalg
    cap = arity_cap if arity_cap is not None else dform.arity_cap
    C = dform.C
    Q = shift_module(C, -1)
    s = sigma(Q, 1)
    t = sigma(C, -1)
    xi = {}
    for n, dn in dform.delta.items():
        xi[n] = (s @ dn @ sigma_power_inverse(Q, 1, n)).scale(_sign(n))
    return CurvedAInfCoalgebra(C=C, xi=xi, eps_bold=s @ dform.eps, w_bold=dform.w @ t, arity_cap=cap)


def delta_from_xi(coalg: CurvedAInfCoalgebra) -> AInfDeltaForm:
    """delta_n = (-1)^n sigma^{-1} xi_n sigma^{(x)n}, eps = sigma^{-1} eps_bold, w = w_bold sigma."""
    C = coalg.C
    Q = coalg.Q
    s = sigma(Q, 1)
    t = sigma(C, -1)
    delta = {}
    for n, xn in coalg.xi.items():
        delta[n] = (t @ xn @ tensor_power(s, n)).scale(_sign(n))
    return AInfDeltaForm(C=C, delta=delta, eps=t @ coalg.eps_bold, w=coalg.w_bold @ s, arity_cap=coalg.arity_cap)


# ---------------------------------------------------------------------------
# Validators
# ---------------------------------------------------------------------------


def _ident(M: GradedModule, n: int) -> GradedMap:
    return identity(tensor_power_module(M, n))


def _insert(M: GradedModule, r: int, f: GradedMap, t: int) -> GradedMap:
    """1^{(x)r} (x) f (x) 1^{(x)t}."""
    return tensor_maps([_ident(M, r), f, _ident(M, t)], M.ring)


def validate_ucc_algebra(alg: UCCAlgebra, window: Optional[Sequence[int]] = None) -> ValidationReport:
    """Check the reduced curved-algebra system.

    Args:
        alg: The algebra.
        window: Basis indices of A on which the identities are evaluated (all when omitted);
            tensor domains use products of the window.

    Returns:
        ValidationReport: Names of violated equations and witnesses.
    """
    report = ValidationReport(subject="ucc algebra")
    A, k = alg.A, alg.k
    idA = identity(A)
    m2, m1, m0, eta, v = alg.m2, alg.m1, alg.m0, alg.eta, alg.v
    rows1 = power_rows(A, 1, window)
    rows2 = power_rows(A, 2, window)
    rows3 = power_rows(A, 3, window)

    report.check("associativity", tensor_map(m2, idA) @ m2, tensor_map(idA, m2) @ m2, rows3)
    report.check("leibniz", m2 @ m1, (tensor_map(idA, m1) + tensor_map(m1, idA)) @ m2, rows2)
    report.check("curvature_square", m1 @ m1, (tensor_map(m0, idA) - tensor_map(idA, m0)) @ m2, rows1)
    report.check("curvature_closed", m0 @ m1, zero(k, A, 3), [0])
    report.check("left_unit", tensor_map(eta, idA) @ m2, idA, rows1)
    report.check("right_unit", tensor_map(idA, eta) @ m2, idA, rows1)
    report.check("unit_closed", eta @ m1, zero(k, A, 1), [0])
    report.check("unit_split", eta @ v, identity(k), [0])
    return report.log_outcome()


def validate_ca_coalgebra(
    coalg: CACoalgebra, window: Optional[Sequence[int]] = None, conilpotency_cap: Optional[int] = None
) -> ValidationReport:
    """Check the reduced curved-coalgebra system, the reduced coproduct display and conilpotency."""
    report = ValidationReport(subject="ca coalgebra")
    C, k = coalg.C, coalg.k
    idC = identity(C)
    d2, d1, d0, eps, w = coalg.delta2, coalg.delta1, coalg.delta0, coalg.eps, coalg.w
    rows = list(window) if window is not None else list(range(C.rank))

    report.check("coassociativity", d2 @ tensor_map(d2, idC), d2 @ tensor_map(idC, d2), rows)
    report.check("coleibniz", d1 @ d2, d2 @ (tensor_map(idC, d1) + tensor_map(d1, idC)), rows)
    report.check("curvature_square", d1 @ d1, d2 @ (tensor_map(idC, d0) - tensor_map(d0, idC)), rows)
    report.check("curvature_closed", d1 @ d0, zero(C, k, 3), rows)
    report.check("left_counit", d2 @ tensor_map(eps, idC), idC, rows)
    report.check("right_counit", d2 @ tensor_map(idC, eps), idC, rows)
    report.check("counit_closed", d1 @ eps, zero(C, k, 1), rows)
    report.check("counit_split", w @ eps, identity(k), [0])
    report.check("grouplike", w @ d2, tensor_map(w, w), [0])

    bar_rows = [i - 1 for i in rows if i > 0]
    incl = coalg.incl()
    report.check(
        "reduced_coproduct",
        incl @ (d2 - tensor_map(idC, w) - tensor_map(w, idC)),
        coalg.reduced_coproduct() @ tensor_map(incl, incl),
        bar_rows,
    )
    cap = conilpotency_cap or Settings.get_conilpotency_cap()
    try:
        index = conilpotency_index(coalg.reduced_coproduct(), cap)
        report.require(
            "conilpotency_certificate",
            coalg.conilpotency_index is None or coalg.conilpotency_index >= index,
            [index],
            f"recorded index {coalg.conilpotency_index} below computed {index}",
        )
    except NotConilpotentUpToCap as e:
        report.require("conilpotency", False, [e.cap], str(e))
    return report.log_outcome()


def validate_cainf_algebra(alg: CurvedAInfAlgebra, window: Optional[Sequence[int]] = None) -> ValidationReport:
    """Check the A-infinity relation sum (1^r (x) b_k (x) 1^t) b_{r+1+t} = 0 for n <= arity_cap and strict units."""
    report = ValidationReport(subject="curved A-infinity algebra")
    P = alg.P
    k = ground_module(P.ring)
    cap = alg.arity_cap
    for n in range(cap + 1):
        terms = []
        for kk in range(n + 1):
            if kk not in alg.b:
                continue
            for r in range(n - kk + 1):
                t = n - kk - r
                if r + 1 + t in alg.b:
                    terms.append(_insert(P, r, alg.b[kk], t) @ alg.b[r + 1 + t])
        lhs = sum_maps(terms, tensor_power_module(P, n), P, 2)
        report.check(f"ainf_relation_{n}", lhs, zero(tensor_power_module(P, n), P, 2), power_rows(P, n, window))

    eta, rows1 = alg.eta_bold, power_rows(P, 1, window)
    idP = identity(P)
    report.check("right_unit", tensor_map(idP, eta) @ alg.op(2), idP, rows1)
    report.check("left_unit", tensor_map(eta, idP) @ alg.op(2), idP.scale(-1), rows1)
    for n in range(1, cap + 1):
        for a in range(n):
            c = n - 1 - a
            if a + c == 1:
                continue
            lhs = _insert(P, a, eta, c) @ alg.op(n)
            report.check(f"unit_vanishing_{a}_{c}", lhs, zero(lhs.dom, P, 0), power_rows(P, n - 1, window))
    report.check("unit_split", eta @ alg.v_bold, identity(k), [0])
    return report.log_outcome()


def validate_ainf_m_form(mform: AInfMForm, window: Optional[Sequence[int]] = None) -> ValidationReport:
    """Check sum (-1)^{jp+q} (1^j (x) m_p (x) 1^q) m_{j+1+q} = 0 and the m-form unit laws."""
    report = ValidationReport(subject="A-infinity algebra (m-form)")
    A = mform.A
    k = ground_module(A.ring)
    for n in range(mform.arity_cap + 1):
        terms = []
        for p in range(n + 1):
            if p not in mform.m:
                continue
            for j in range(n - p + 1):
                q = n - p - j
                if j + 1 + q in mform.m:
                    terms.append((_insert(A, j, mform.m[p], q) @ mform.m[j + 1 + q]).scale(_sign(j * p + q)))
        dom = tensor_power_module(A, n)
        lhs = sum_maps(terms, dom, A, 3 - n)
        report.check(f"ainf_relation_{n}", lhs, zero(dom, A, 3 - n), power_rows(A, n, window))
    idA, rows1 = identity(A), power_rows(A, 1, window)
    report.check("left_unit", tensor_map(mform.eta, idA) @ mform.op(2), idA, rows1)
    report.check("right_unit", tensor_map(idA, mform.eta) @ mform.op(2), idA, rows1)
    for n in range(1, mform.arity_cap + 1):
        for a in range(n):
            c = n - 1 - a
            if a + c == 1:
                continue
            lhs = _insert(A, a, mform.eta, c) @ mform.op(n)
            report.check(f"unit_vanishing_{a}_{c}", lhs, zero(lhs.dom, A, 2 - n), power_rows(A, n - 1, window))
    report.check("unit_split", mform.eta @ mform.v, identity(k), [0])
    return report.log_outcome()


def validate_cainf_coalgebra(coalg: CurvedAInfCoalgebra, window: Optional[Sequence[int]] = None) -> ValidationReport:
    """Check sum xi_{r+1+t} (1^r (x) xi_k (x) 1^t) = 0 for n <= arity_cap, strict counits and wxi_2 = -w (x) w."""
    report = ValidationReport(subject="curved A-infinity coalgebra")
    Q = coalg.Q
    k = ground_module(Q.ring)
    rows = list(window) if window is not None else list(range(Q.rank))
    for n in range(coalg.arity_cap + 1):
        terms = []
        for kk in range(n + 1):
            if kk not in coalg.xi:
                continue
            for r in range(n - kk + 1):
                t = n - kk - r
                if r + 1 + t in coalg.xi:
                    terms.append(coalg.xi[r + 1 + t] @ _insert(Q, r, coalg.xi[kk], t))
        cod = tensor_power_module(Q, n)
        report.check(f"ainf_relation_{n}", sum_maps(terms, Q, cod, 2), zero(Q, cod, 2), rows)

    eps, w = coalg.eps_bold, coalg.w_bold
    idQ = identity(Q)
    report.check("right_counit", coalg.op(2) @ tensor_map(idQ, eps), idQ.scale(-1), rows)
    report.check("left_counit", coalg.op(2) @ tensor_map(eps, idQ), idQ, rows)
    for n in range(1, coalg.arity_cap + 1):
        for a in range(n):
            c = n - 1 - a
            if a + c == 1:
                continue
            rhs_cod = tensor_power_module(Q, n - 1)
            lhs = coalg.op(n) @ _insert(Q, a, eps, c)
            report.check(f"counit_vanishing_{a}_{c}", lhs, zero(Q, rhs_cod, 0), rows)
    report.check("counit_split", w @ eps, identity(k), [0])
    report.check("grouplike", w @ coalg.op(2), tensor_map(w, w).scale(-1), [0])
    return report.log_outcome()


def validate_delta_form(dform: AInfDeltaForm, window: Optional[Sequence[int]] = None) -> ValidationReport:
    """Check sum (-1)^{r+kt} delta_{r+1+t} (1^r (x) delta_k (x) 1^t) = 0 for n <= arity_cap."""
    report = ValidationReport(subject="A-infinity coalgebra (delta-form)")
    C = dform.C
    rows = list(window) if window is not None else list(range(C.rank))
    for n in range(dform.arity_cap + 1):
        terms = []
        for kk in range(n + 1):
            if kk not in dform.delta:
                continue
            for r in range(n - kk + 1):
                t = n - kk - r
                if r + 1 + t in dform.delta:
                    terms.append((dform.delta[r + 1 + t] @ _insert(C, r, dform.delta[kk], t)).scale(_sign(r + kk * t)))
        cod = tensor_power_module(C, n)
        report.check(f"ainf_relation_{n}", sum_maps(terms, C, cod, 3 - n), zero(C, cod, 3 - n), rows)
    return report.log_outcome()


# ---------------------------------------------------------------------------
# Morphisms
# ---------------------------------------------------------------------------


def validate_alg_morphism(
    f: AlgMorphism, A: UCCAlgebra, B: UCCAlgebra, window: Optional[Sequence[int]] = None
) -> ValidationReport:
    """Check f1 multiplicative, f1 m1 = m1 f1, m0^B = m0^A f1 and eta^A f1 = eta^B."""
    report = ValidationReport(subject="algebra morphism")
    try:
        _require(f.f1, A.A, B.A, 0, "f1")
    except ShapeMismatch as e:
        report.add_error(str(e), "shape")
        return report.log_outcome()
    f1 = f.f1
    report.check("multiplicative", A.m2 @ f1, tensor_map(f1, f1) @ B.m2, power_rows(A.A, 2, window))
    report.check("differential", A.m1 @ f1, f1 @ B.m1, power_rows(A.A, 1, window))
    report.check("curvature", A.m0 @ f1, B.m0, [0])
    report.check("unit", A.eta @ f1, B.eta, [0])
    return report.log_outcome()


def validate_coalg_morphism(
    g: CoalgMorphism, C: CACoalgebra, D: CACoalgebra, window: Optional[Sequence[int]] = None
) -> ValidationReport:
    """Check the morphism equations of curved augmented coalgebras and the reduction identity."""
    report = ValidationReport(subject="coalgebra morphism")
    try:
        _require(g.g1, C.C, D.C, 0, "g1")
    except ShapeMismatch as e:
        report.add_error(str(e), "shape")
        return report.log_outcome()
    g1, g0 = g.g1, g.g0
    idC = identity(C.C)
    rows = list(window) if window is not None else list(range(C.C.rank))

    report.check("comultiplicative", C.delta2 @ tensor_map(g1, g1), g1 @ D.delta2, rows)
    report.check(
        "differential",
        C.delta1 @ g1 + C.delta2 @ (tensor_map(g0, g1) - tensor_map(g1, g0)),
        g1 @ D.delta1,
        rows,
    )
    report.check(
        "curvature",
        C.delta0 - C.delta1 @ g0 - C.delta2 @ tensor_map(g0, g0),
        g1 @ D.delta0,
        rows,
    )
    report.check("counit", g1 @ D.eps, C.eps, rows)
    report.check("augmentation", C.w @ g1, D.w, [0])

    incl = C.incl()
    report.check(
        "reduction_identity",
        incl @ C.delta2 @ (tensor_map(g0, idC) - tensor_map(idC, g0)),
        C.reduced_coproduct() @ (tensor_map(incl @ g0, incl) - tensor_map(incl, incl @ g0)),
        [i - 1 for i in rows if i > 0],
    )
    return report.log_outcome()


def compose_alg_morphisms(f: AlgMorphism, g: AlgMorphism) -> AlgMorphism:
    """h = f then g: h1 = f1 g1, und h = und f + und g."""
    if f.f1.cod != g.f1.dom:
        raise ShapeMismatch("algebra morphisms are not composable")
    return AlgMorphism(f1=f.f1 @ g.f1, und=f.f1.ring.reduce(f.und + g.und))


def compose_coalg_morphisms(f: CoalgMorphism, g: CoalgMorphism) -> CoalgMorphism:
    """h = f then g: h1 = f1 g1, h0 = f0 + f1 g0."""
    if f.g1.cod != g.g1.dom:
        raise ShapeMismatch("coalgebra morphisms are not composable")
    return CoalgMorphism(g1=f.g1 @ g.g1, g0=f.g0 + f.g1 @ g.g0)


def identity_alg_morphism(A: UCCAlgebra, und: int = 0) -> AlgMorphism:
    return AlgMorphism(f1=identity(A.A), und=und)


def identity_coalg_morphism(C: CACoalgebra, und: int = 0) -> CoalgMorphism:
    return CoalgMorphism(g1=identity(C.C), g0=C.eps @ scalar_map(C.C.ring, und, 1))


def alg_morphisms_equal(f: AlgMorphism, g: AlgMorphism, rows: Optional[Sequence[int]] = None) -> bool:
    return f.f1.ring.reduce(f.und - g.und) == 0 and maps_equal(f.f1, g.f1, rows) is None


def coalg_morphisms_equal(f: CoalgMorphism, g: CoalgMorphism, rows: Optional[Sequence[int]] = None) -> bool:
    return maps_equal(f.g1, g.g1, rows) is None and maps_equal(f.g0, g.g0, rows) is None


# ---------------------------------------------------------------------------
# Subcategory predicates
# ---------------------------------------------------------------------------


def is_ucdg(alg: UCCAlgebra) -> bool:
    """Unit-complemented dg algebra: zero curvature."""
    return not alg.m0.row(0)


def is_ac(coalg: CACoalgebra) -> bool:
    """Augmented curved coalgebra: w delta1 = 0 and w delta0 = 0."""
    return not (coalg.w @ coalg.delta1).row(0) and not (coalg.w @ coalg.delta0).row(0)


def require_valid(report: ValidationReport, what: str):
    """Raise when a construction produced an invalid structure."""
    if not report.is_valid:
        raise CurvedAlgError(f"{what} failed validation: {report.violated_eq}")
