"""Seeded generators of valid structures and morphisms.

Instances are built from constructive families rather than by rejection sampling:
a base graded algebra (truncated polynomial, square-zero extension, or the
curvature example over F_p[u]/(u^top)) receives a differential m1 drawn from the
solution space of the Leibniz system and a curvature m0 drawn from the solution
space of m1^2 = [m0, -], m0 m1 = 0. Both systems are linear and solved exactly.
Every emitted structure is validated before it is returned.
"""

import logging
import random
from fractions import Fraction
from itertools import product
from typing import Dict, Hashable, List, Optional, Sequence, Tuple

from .adjoint import AdjunctionWitness, TwistingCochain, make_witness, tw_to_alg
from .barcobar import bar_object
from .curved import (
    AInfMForm,
    AlgMorphism,
    CACoalgebra,
    CoalgMorphism,
    CurvedAInfAlgebra,
    UCCAlgebra,
    b_from_m,
    compose_alg_morphisms,
    identity_alg_morphism,
    validate_ainf_m_form,
    validate_alg_morphism,
    validate_ca_coalgebra,
    validate_cainf_algebra,
    validate_coalg_morphism,
    validate_ucc_algebra,
)
from .exceptions import EmptySolutionSpace, InvariantViolation, ShapeMismatch
from .gmod import (
    GradedMap,
    GradedModule,
    base_module,
    dual_module,
    ground_module,
    identity,
    invert_diagonal,
    maps_equal,
    tensor_map,
    tensor_module,
    tensor_power_module,
    transpose,
    zero,
)
from .gring import RingDescriptor, RingKind
from .linalg import clear_denominators, nullspace, solve

logger = logging.getLogger(__name__)

MAX_ATTEMPTS = 8


# ---------------------------------------------------------------------------
# Base algebras
# ---------------------------------------------------------------------------


def _unit_and_splitting(A: GradedModule) -> Tuple[GradedMap, GradedMap]:
    k = ground_module(A.ring)
    return GradedMap(k, A, 0, rows={0: {0: 1}}), GradedMap(A, k, 0, rows={0: {0: 1}})


def _assemble(A: GradedModule, products: Dict[int, Dict[int, int]], m0_coef: int = 0) -> UCCAlgebra:
    eta, v = _unit_and_splitting(A)
    k = ground_module(A.ring)
    m0 = GradedMap(k, A, 2, rows={0: {0: m0_coef}}) if m0_coef else zero(k, A, 2)
    m2 = GradedMap(tensor_module(A, A), A, 0, rows=products)
    return UCCAlgebra(A=A, m2=m2, m1=zero(A, A, 1), m0=m0, eta=eta, v=v)


def truncated_polynomial_algebra(ring: RingDescriptor, dims: int, x_degree: int = 1) -> UCCAlgebra:
    """k[x]/(x^dims) with basis e_i = x^i, deg x = x_degree, m1 = 0 and m0 = 0."""
    if dims < 1:
        raise ShapeMismatch("an algebra needs at least the unit generator")
    A = base_module(ring, [i * x_degree for i in range(dims)])
    products = {i * dims + j: {i + j: 1} for i in range(dims) for j in range(dims) if i + j < dims}
    return _assemble(A, products)


def square_zero_algebra(ring: RingDescriptor, degrees: Sequence[int]) -> UCCAlgebra:
    """k + V with V V = 0, V spanned by generators of the given degrees."""
    dims = len(degrees) + 1
    A = base_module(ring, [0, *degrees])
    products = {0: {0: 1}}
    for i in range(1, dims):
        products[i] = {i: 1}
        products[i * dims] = {i: 1}
    return _assemble(A, products)


def trivial_algebra(ring: RingDescriptor, c: int = 0) -> UCCAlgebra:
    """The ground ring as an algebra with curvature c u (only over rings with degree-2 scalars)."""
    if c and not ring.realizable(2):
        raise ShapeMismatch(f"{ring.label()} has no degree-2 scalars for a curvature")
    return _assemble(ground_module(ring), {0: {0: 1}}, m0_coef=c)


def curvature_example(ring: RingDescriptor, c: int = 0) -> UCCAlgebra:
    """Basis {1, x} with deg x = 1 and x^2 = u 1 over F_p[u]/(u^top); m1 = 0, m0 = c u 1."""
    if ring.kind != RingKind.EVEN_TRUNCATED:
        raise ShapeMismatch("the curvature example needs an even_truncated ring")
    A = base_module(ring, [0, 1])
    products = {0: {0: 1}, 1: {1: 1}, 2: {1: 1}, 3: {0: 1}}
    return _assemble(A, products, m0_coef=c)


# ---------------------------------------------------------------------------
# Linear solution spaces
# ---------------------------------------------------------------------------


def _coefficients(f: GradedMap, rows: Sequence[int], tag: Hashable = None) -> Dict[Hashable, int]:
    out = {}
    for i in rows:
        for j, c in f.row(i).items():
            out[(tag, i, j)] = c
    return out


def _system(columns: List[Dict[Hashable, int]], rhs: Optional[Dict[Hashable, int]] = None):
    keys = set(rhs or {})
    for col in columns:
        keys |= set(col)
    keys = sorted(keys, key=repr)
    mat = [[col.get(key, 0) for col in columns] for key in keys]
    vec = [(rhs or {}).get(key, 0) for key in keys]
    return mat, vec


def _integral_basis(basis: List[List], p: Optional[int]) -> List[List[int]]:
    if p is not None:
        return [[int(x) for x in vec] for vec in basis]
    return [clear_denominators(vec)[0] for vec in basis]


def _random_combination(basis: List[List[int]], n: int, rng: random.Random, p: Optional[int]) -> List[int]:
    out = [0] * n
    for vec in basis:
        c = rng.randrange(p) if p is not None else rng.randint(-2, 2)
        out = [a + c * b for a, b in zip(out, vec)]
    return [x % p for x in out] if p is not None else out


def _differential_unknowns(A: GradedModule) -> List[Tuple[int, int]]:
    """Entries (i, j) of a degree-1 map A -> A with realizable ring degree and i != 0 (eta m1 = 0)."""
    ring = A.ring
    return [
        (i, j)
        for i in range(1, A.rank)
        for j in range(A.rank)
        if ring.realizable(A.degree(i) + 1 - A.degree(j))
    ]


def sample_differential(base: UCCAlgebra, rng: random.Random) -> GradedMap:
    """Random solution of the Leibniz system m2 m1 = (1 (x) m1 + m1 (x) 1) m2 with eta m1 = 0."""
    A, m2 = base.A, base.m2
    idA = identity(A)
    p = A.ring.modulus
    unknowns = _differential_unknowns(A)
    rows = range(tensor_module(A, A).rank)
    columns = []
    for i, j in unknowns:
        E = GradedMap(A, A, 1, rows={i: {j: 1}})
        residual = m2 @ E - (tensor_map(idA, E) + tensor_map(E, idA)) @ m2
        columns.append(_coefficients(residual, rows))
    mat, _ = _system(columns)
    basis = _integral_basis(nullspace(mat, len(unknowns), p), p)
    vec = _random_combination(basis, len(unknowns), rng, p)
    entries: Dict[int, Dict[int, int]] = {}
    for (i, j), c in zip(unknowns, vec):
        if c:
            entries.setdefault(i, {})[j] = c
    logger.debug(f"Leibniz system: {len(unknowns)} unknowns, solution space of dimension {len(basis)}")
    return GradedMap(A, A, 1, rows=entries)


def sample_curvature(base: UCCAlgebra, m1: GradedMap, rng: random.Random, unit_only: bool = False) -> List:
    """Random solution of (m0 (x) 1 - 1 (x) m0) m2 = m1^2 and m0 m1 = 0.

    Returns:
        The coefficient vector of m0 over A's generators (Fractions over the integers).

    Raises:
        EmptySolutionSpace: If the system has no solution for this m1.
    """
    A, m2 = base.A, base.m2
    k = ground_module(A.ring)
    idA = identity(A)
    p = A.ring.modulus
    unknowns = [j for j in range(A.rank) if A.ring.realizable(2 - A.degree(j)) and (not unit_only or j == 0)]
    rows = range(A.rank)
    columns = []
    for j in unknowns:
        E = GradedMap(k, A, 2, rows={0: {j: 1}})
        commutator = (tensor_map(E, idA) - tensor_map(idA, E)) @ m2
        columns.append({**_coefficients(commutator, rows, "bracket"), **_coefficients(E @ m1, [0], "closed")})
    mat, rhs = _system(columns, _coefficients(m1 @ m1, rows, "bracket"))
    particular = solve(mat, rhs, len(unknowns), p)
    basis = _integral_basis(nullspace(mat, len(unknowns), p), p)
    free = _random_combination(basis, len(unknowns), rng, p)
    vec = [a + b for a, b in zip(particular, free)]
    if p is not None:
        vec = [int(x) % p for x in vec]
    out = [0] * A.rank
    for j, c in zip(unknowns, vec):
        out[j] = c
    return out


def _with_structure(base: UCCAlgebra, m1: GradedMap, m0_vec: Sequence[int]) -> UCCAlgebra:
    A = base.A
    k = ground_module(A.ring)
    m0 = GradedMap(k, A, 2, rows={0: {j: int(c) for j, c in enumerate(m0_vec) if c}})
    return UCCAlgebra(A=A, m2=base.m2, m1=m1, m0=m0, eta=base.eta, v=base.v)


def equip_structure(base: UCCAlgebra, rng: random.Random, flat: bool = False) -> UCCAlgebra:
    """Give a graded algebra a sampled differential and curvature.

    Args:
        base: Algebra supplying m2, eta and v.
        rng: Source of randomness.
        flat: Restrict to m1^2 = 0 and curvature on the unit line (pr m0 = 0).

    Returns:
        UCCAlgebra: The equipped algebra; falls back to m1 = 0 when no draw succeeds.
    """
    A = base.A
    p = A.ring.modulus
    for attempt in range(MAX_ATTEMPTS):
        m1 = sample_differential(base, rng)
        if flat and maps_equal(m1 @ m1, zero(A, A, 2)) is not None:
            continue
        try:
            m0_vec = sample_curvature(base, m1, rng, unit_only=flat)
        except EmptySolutionSpace:
            logger.debug(f"curvature system inconsistent on attempt {attempt}, resampling")
            continue
        if p is None:
            ints, den = clear_denominators([Fraction(x) for x in m0_vec])
            m1 = m1.scale(den)
            m0_vec = [den * x for x in ints]
        return _with_structure(base, m1, m0_vec)
    logger.debug("falling back to m1 = 0")
    m1 = zero(A, A, 1)
    return _with_structure(base, m1, sample_curvature(base, m1, rng, unit_only=flat))


def gen_random_ucc_algebra(
    seed: int, ring: RingDescriptor, dims: int, flat: bool = False, augmented: bool = False
) -> UCCAlgebra:
    """Deterministic random unit-complemented curved algebra.

    Args:
        seed: Random seed.
        ring: Base ring.
        dims: Rank of the underlying module (1 gives the ground ring).
        flat: Only emit algebras with m1^2 = 0 and pr m0 = 0.
        augmented: Only emit algebras whose splitting v is multiplicative.

    Returns:
        UCCAlgebra: A validated instance.

    Raises:
        InvariantViolation: If the emitted instance fails validation.
    """
    rng = random.Random(seed)
    if dims <= 1:
        c = rng.randrange(ring.modulus or 1) if ring.realizable(2) and not augmented else 0
        base = trivial_algebra(ring, c)
        family = "trivial"
    else:
        families = ["polynomial", "square_zero"]
        if ring.kind == RingKind.EVEN_TRUNCATED and dims == 2 and not augmented:
            families.append("curvature")
        family = rng.choice(families)
        if family == "polynomial":
            base = truncated_polynomial_algebra(ring, dims, rng.choice([1, 2]))
        elif family == "square_zero":
            base = square_zero_algebra(ring, sorted(rng.choice([1, 2, 3]) for _ in range(dims - 1)))
        else:
            base = curvature_example(ring)
    alg = equip_structure(base, rng, flat=flat) if dims > 1 else base
    report = validate_ucc_algebra(alg)
    if not report.is_valid:
        raise InvariantViolation(f"generated {family} algebra failed {report.violated_eq}")
    logger.info(f"Generated {family} algebra of rank {dims} over {ring.label()} (seed {seed})")
    return alg


def _unit(ring: RingDescriptor, rng: random.Random) -> int:
    return rng.randrange(1, ring.p) if ring.p is not None else rng.choice([-1, 1])


def _scalar(ring: RingDescriptor, rng: random.Random) -> int:
    return rng.randrange(ring.p) if ring.p is not None else rng.randint(-2, 2)


# ---------------------------------------------------------------------------
# Curved A-infinity algebras
# ---------------------------------------------------------------------------


def square_zero_ainf_algebra(
    ring: RingDescriptor,
    odd: int,
    even: int,
    m3: Optional[Dict[Tuple[int, ...], Sequence[int]]] = None,
    m4: Optional[Dict[Tuple[int, ...], Sequence[int]]] = None,
    m0: Optional[Sequence[int]] = None,
    arity_cap: int = 4,
) -> AInfMForm:
    """Square-zero algebra k + X + W with higher products on words in X landing in W.

    X has ``odd`` generators of degree 1 and W has ``even`` generators of degree 2, so
    m3 and m4 have scalar coefficients. Every higher product vanishes on words containing
    the unit or a letter of W, and the curvature lies in W; each composite in the
    A-infinity relations then passes through a product inside the square-zero ideal.

    Args:
        ring: Base ring.
        odd: Number of degree-1 generators (X).
        even: Number of degree-2 generators (W).
        m3: Words of three letters of X (0-based) mapped to coefficient lists over W.
        m4: The same for words of four letters.
        m0: Coefficients of the curvature over W.
        arity_cap: Arity cap of the result.

    Example:
        >>> F7 = RingDescriptor.parse('prime_field:7')
        >>> mform = square_zero_ainf_algebra(F7, 1, 1, m3={(0, 0, 0): [1]})
        >>> validate_ainf_m_form(mform).is_valid
        True
    """
    if odd < 1 or even < 1:
        raise ShapeMismatch("need at least one generator of degree 1 and one of degree 2")
    base = square_zero_algebra(ring, [1] * odd + [2] * even)
    A = base.A

    def into_w(coefs: Sequence[int]) -> Dict[int, int]:
        if len(coefs) != even:
            raise ShapeMismatch(f"expected {even} coefficients over W, got {len(coefs)}")
        return {1 + odd + j: c for j, c in enumerate(coefs) if c}

    def operation(n: int, table: Dict[Tuple[int, ...], Sequence[int]]) -> GradedMap:
        M = tensor_power_module(A, n)
        rows = {}
        for word, coefs in table.items():
            if len(word) != n or not all(0 <= a < odd for a in word):
                raise ShapeMismatch(f"m_{n} is defined on words of {n} letters of X, got {word}")
            rows[M.join(tuple(1 + a for a in word))] = into_w(coefs)
        return GradedMap(M, A, 2 - n, rows=rows)

    m = {
        0: GradedMap(ground_module(ring), A, 2, rows={0: into_w(m0 or [0] * even)}),
        1: zero(A, A, 1),
        2: base.m2,
        3: operation(3, m3 or {}),
    }
    if m4:
        m[4] = operation(4, m4)
    return AInfMForm(A=A, m=m, eta=base.eta, v=base.v, arity_cap=arity_cap)


def gen_random_cainf_algebra(seed: int, ring: RingDescriptor, dims: int = 4, arity_cap: int = 4) -> CurvedAInfAlgebra:
    """Deterministic random curved A-infinity algebra with nonzero b3, and nonzero b4 when arity_cap >= 4.

    Args:
        seed: Random seed.
        ring: Base ring.
        dims: Largest rank of the underlying module, at least 3.
        arity_cap: Arity cap of the result, at least 3.

    Returns:
        CurvedAInfAlgebra: The b-form of a validated square_zero_ainf_algebra.

    Raises:
        ShapeMismatch: If dims < 3 or arity_cap < 3.
        InvariantViolation: If the instance fails validation in m-form or in b-form.
    """
    if dims < 3 or arity_cap < 3:
        raise ShapeMismatch("a nonzero m3 needs rank at least 3 and arity cap at least 3")
    rng = random.Random(seed)
    odd = rng.randint(1, min(2, dims - 2))
    even = rng.randint(1, dims - 1 - odd)

    def table(n: int) -> Dict[Tuple[int, ...], List[int]]:
        out = {word: [_scalar(ring, rng) for _ in range(even)] for word in product(range(odd), repeat=n)}
        out[(0,) * n][0] = _unit(ring, rng)
        return out

    mform = square_zero_ainf_algebra(
        ring,
        odd,
        even,
        m3=table(3),
        m4=table(4) if arity_cap >= 4 else None,
        m0=[_scalar(ring, rng) for _ in range(even)],
        arity_cap=arity_cap,
    )
    report = validate_ainf_m_form(mform)
    if not report.is_valid:
        raise InvariantViolation(f"generated A-infinity algebra failed {report.violated_eq}")
    alg = b_from_m(mform)
    report = validate_cainf_algebra(alg)
    if not report.is_valid:
        raise InvariantViolation(f"b-form of generated A-infinity algebra failed {report.violated_eq}")
    logger.info(f"Generated A-infinity algebra with {odd} odd and {even} even generators over {ring.label()} (seed {seed})")
    return alg


# ---------------------------------------------------------------------------
# Coalgebras
# ---------------------------------------------------------------------------


def dual_coalgebra(alg: UCCAlgebra) -> CACoalgebra:
    """Transpose an augmented algebra: delta2 = m2^T, delta1 = m1^T, delta0 = -m0^T, eps = eta^T, w = v^T.

    Raises:
        ShapeMismatch: If v is not multiplicative.
        InvariantViolation: If the dual fails validation.
    """
    if maps_equal(alg.m2 @ alg.v, tensor_map(alg.v, alg.v)) is not None:
        raise ShapeMismatch("the splitting v is not multiplicative")
    C = dual_module(alg.A)
    coalg = CACoalgebra(
        C=C,
        delta2=transpose(alg.m2),
        delta1=transpose(alg.m1),
        delta0=transpose(alg.m0).scale(-1),
        eps=transpose(alg.eta),
        w=transpose(alg.v),
    ).with_index()
    report = validate_ca_coalgebra(coalg)
    if not report.is_valid:
        raise InvariantViolation(f"dual coalgebra failed {report.violated_eq}")
    return coalg


def gen_random_ca_coalgebra(seed: int, ring: RingDescriptor, dims: int, cap: int = 2) -> CACoalgebra:
    """Deterministic random curved augmented coalgebra.

    Either the dual of a generated augmented algebra of rank ``dims`` or the truncated bar
    construction (word length ``cap``) of a generated flat algebra of rank ``min(dims, 3)``;
    the latter is exact because its coderivation never lengthens words.
    """
    rng = random.Random(seed)
    family = rng.choice(["dual", "bar"])
    if family == "dual":
        coalg = dual_coalgebra(gen_random_ucc_algebra(seed, ring, dims, augmented=True))
    else:
        alg = gen_random_ucc_algebra(seed, ring, min(dims, 3), flat=True)
        coalg = bar_object(alg, cap=cap).coalgebra
        report = validate_ca_coalgebra(coalg)
        if not report.is_valid:
            raise InvariantViolation(f"bar coalgebra failed {report.violated_eq}")
    logger.info(
        f"Generated {family} coalgebra of rank {coalg.C.rank} over {ring.label()} "
        f"(seed {seed}, conilpotency index {coalg.conilpotency_index})"
    )
    return coalg


def curvature_line_coalgebra(ring: RingDescriptor, lam: int = 1) -> CACoalgebra:
    """Basis {w, c} with deg c = 1, c primitive, delta1 w = lam c and delta0 = 0.

    For lam != 0 the coalgebra is not augmented curved (w delta1 != 0).
    """
    C = base_module(ring, [0, 1])
    k = ground_module(ring)
    coalg = CACoalgebra(
        C=C,
        delta2=GradedMap(C, tensor_module(C, C), 0, rows={0: {0: 1}, 1: {1: 1, 2: 1}}),
        delta1=GradedMap(C, C, 1, rows={0: {1: lam}}),
        delta0=zero(C, k, 2),
        eps=GradedMap(C, k, 0, rows={0: {0: 1}}),
        w=GradedMap(k, C, 0, rows={0: {0: 1}}),
    ).with_index()
    report = validate_ca_coalgebra(coalg)
    if not report.is_valid:
        raise InvariantViolation(f"curvature line coalgebra failed {report.violated_eq}")
    return coalg


# ---------------------------------------------------------------------------
# Morphisms
# ---------------------------------------------------------------------------


def unit_morphism(alg: UCCAlgebra) -> Tuple[AlgMorphism, UCCAlgebra]:
    """The unit eta: k_c -> A from the trivial algebra with the same curvature, when m0 lies on the unit line."""
    row = alg.m0.row(0)
    if any(j != 0 for j in row):
        raise ShapeMismatch("curvature is not a multiple of the unit")
    source = trivial_algebra(alg.A.ring, row.get(0, 0))
    return AlgMorphism(f1=alg.eta), source


def augmentation_morphism(alg: UCCAlgebra) -> Tuple[AlgMorphism, UCCAlgebra]:
    """The splitting v: A -> k_c, when v is multiplicative and m1 lands in Abar."""
    k = ground_module(alg.A.ring)
    if maps_equal(alg.m2 @ alg.v, tensor_map(alg.v, alg.v)) is not None:
        raise ShapeMismatch("the splitting v is not multiplicative")
    if maps_equal(alg.m1 @ alg.v, zero(alg.A, k, 1)) is not None:
        raise ShapeMismatch("m1 does not land in the complement")
    target = trivial_algebra(alg.A.ring, (alg.m0 @ alg.v).entry(0, 0))
    return AlgMorphism(f1=alg.v), target


def scaling_morphism(alg: UCCAlgebra, weights: Sequence[int], lam: int) -> Tuple[AlgMorphism, UCCAlgebra]:
    """Diagonal isomorphism e_i |-> lam^{w_i} e_i onto the transported structure.

    Args:
        alg: Source algebra.
        weights: One weight per generator; the unit generator must have weight 0.
        lam: A unit of the ground ring.

    Returns:
        The morphism and its target B with m2' = (f^-1 (x) f^-1) m2 f, m1' = f^-1 m1 f, m0' = m0 f.
    """
    ring = alg.A.ring
    if len(weights) != alg.A.rank or weights[0] != 0:
        raise ShapeMismatch("one weight per generator is required, with weight 0 on the unit")
    if ring.inverse(lam) is None:
        raise ShapeMismatch(f"{lam} is not a unit of {ring.label()}")
    f1 = GradedMap(alg.A, alg.A, 0, rows={i: {i: ring.reduce(lam**w)} for i, w in enumerate(weights)})
    return transport_algebra(alg, f1, invert_diagonal(f1))


def transport_algebra(alg: UCCAlgebra, f1: GradedMap, finv: GradedMap) -> Tuple[AlgMorphism, UCCAlgebra]:
    """Isomorphism f1: A -> B onto the transported structure.

    B carries m2' = (f^-1 (x) f^-1) m2 f, m1' = f^-1 m1 f, m0' = m0 f, eta' = eta f and
    v' = f^-1 v. f1 must fix the unit generator and map Abar into itself.
    """
    if maps_equal(f1 @ finv, identity(alg.A)) is not None:
        raise ShapeMismatch("the given maps are not inverse to each other")
    target = UCCAlgebra(
        A=alg.A,
        m2=(tensor_map(finv, finv) @ alg.m2 @ f1).materialize(),
        m1=(finv @ alg.m1 @ f1).materialize(),
        m0=(alg.m0 @ f1).materialize(),
        eta=(alg.eta @ f1).materialize(),
        v=(finv @ alg.v).materialize(),
    )
    return AlgMorphism(f1=f1), target


def transport_coalgebra(coalg: CACoalgebra, g1: GradedMap, ginv: GradedMap) -> Tuple[CoalgMorphism, CACoalgebra]:
    """Isomorphism g1: S -> C from the structure pulled back along g1, with g0 = 0.

    S carries delta2' = g delta2 (g^-1 (x) g^-1), delta1' = g delta1 g^-1, delta0' = g delta0,
    eps' = g eps and w' = w g^-1.
    """
    if maps_equal(g1 @ ginv, identity(coalg.C)) is not None:
        raise ShapeMismatch("the given maps are not inverse to each other")
    C = coalg.C
    source = CACoalgebra(
        C=C,
        delta2=(g1 @ coalg.delta2 @ tensor_map(ginv, ginv)).materialize(),
        delta1=(g1 @ coalg.delta1 @ ginv).materialize(),
        delta0=(g1 @ coalg.delta0).materialize(),
        eps=(g1 @ coalg.eps).materialize(),
        w=(coalg.w @ ginv).materialize(),
    ).with_index()
    return CoalgMorphism(g1=g1, g0=zero(C, ground_module(C.ring), 1)), source


def shear_pairs(M: GradedModule) -> List[Tuple[int, int]]:
    """Pairs (a, b) of distinct non-unit generators joined by a degree-0 map with a realizable coefficient."""
    return [
        (a, b)
        for a in range(1, M.rank)
        for b in range(1, M.rank)
        if a != b and M.ring.realizable(M.degree(a) - M.degree(b))
    ]


def _random_automorphism(M: GradedModule, rng: random.Random) -> Tuple[GradedMap, GradedMap]:
    """A unit diagonal fixing generator 0, followed by a shear e_a |-> e_a + t e_b when one exists."""
    ring = M.ring
    diagonal = GradedMap(M, M, 0, rows={i: {i: 1 if i == 0 else _unit(ring, rng)} for i in range(M.rank)})
    f1, finv = diagonal, invert_diagonal(diagonal)
    pairs = shear_pairs(M)
    if pairs:
        a, b = rng.choice(pairs)
        t = _unit(ring, rng)
        shear = identity(M) + GradedMap(M, M, 0, rows={a: {b: t}})
        unshear = identity(M) - GradedMap(M, M, 0, rows={a: {b: t}})
        f1, finv = f1 @ shear, unshear @ finv
    return f1.materialize(), finv.materialize()



def gen_random_scaling(seed: int, alg: UCCAlgebra, und: int = 0) -> Tuple[AlgMorphism, UCCAlgebra]:
    """Random scaling morphism out of ``alg``, validated."""
    rng = random.Random(seed)
    ring = alg.A.ring
    lam = rng.randrange(1, ring.p) if ring.p is not None else -1
    weights = [0] + [rng.randint(0, 3) for _ in range(alg.A.rank - 1)]
    f, target = scaling_morphism(alg, weights, lam)
    if und:
        f = AlgMorphism(f1=f.f1, und=und)
    report = validate_alg_morphism(f, alg, target)
    if not report.is_valid:
        raise InvariantViolation(f"scaling morphism failed {report.violated_eq}")
    return f, target


def dual_morphism(f: AlgMorphism, A: UCCAlgebra, B: UCCAlgebra) -> CoalgMorphism:
    """The transpose f1^T: B* -> A* of a morphism preserving the splitting, with g0 = 0."""
    if maps_equal(f.f1 @ B.v, A.v) is not None:
        raise ShapeMismatch("the morphism does not preserve the splitting")
    g1 = transpose(f.f1)
    return CoalgMorphism(g1=g1, g0=zero(g1.dom, ground_module(g1.ring), 1))


def gen_random_algebra_iso(seed: int, alg: UCCAlgebra, und: int = 0) -> Tuple[AlgMorphism, UCCAlgebra]:
    """Random isomorphism out of ``alg``: a unit diagonal followed by a shear inside Abar, validated."""
    f1, finv = _random_automorphism(alg.A, random.Random(seed))
    f, target = transport_algebra(alg, f1, finv)
    if und:
        f = AlgMorphism(f1=f.f1, und=und)
    report = validate_alg_morphism(f, alg, target)
    if not report.is_valid:
        raise InvariantViolation(f"algebra isomorphism failed {report.violated_eq}")
    return f, target


def gen_random_coalgebra_iso(seed: int, coalg: CACoalgebra) -> Tuple[CoalgMorphism, CACoalgebra]:
    """Random isomorphism j: S -> ``coalg`` from a transported source, validated."""
    g1, ginv = _random_automorphism(coalg.C, random.Random(seed))
    j, source = transport_coalgebra(coalg, g1, ginv)
    for report in (validate_ca_coalgebra(source), validate_coalg_morphism(j, source, coalg)):
        if not report.is_valid:
            raise InvariantViolation(f"coalgebra isomorphism failed {report.violated_eq}")
    return j, source


# ---------------------------------------------------------------------------
# Adjunction witnesses
# ---------------------------------------------------------------------------


def sample_abar_cochain(C: CACoalgebra, A: UCCAlgebra, rng: random.Random) -> GradedMap:
    """Random theta: C -> A of degree 1 with values in Abar, zero on w, solving the Cbar rows.

    On Cbar the Maurer-Cartan equation reads theta m1 + delta1 theta = delta0 eta; the
    quadratic term vanishes because A is square-zero on Abar. The w row is left to the
    curvature of A.

    Raises:
        EmptySolutionSpace: If the system is inconsistent, or has no integral solution over Z.
    """
    ring = A.A.ring
    p = ring.modulus
    unknowns = [
        (i, j)
        for i in range(1, C.C.rank)
        for j in range(1, A.A.rank)
        if ring.realizable(C.C.degree(i) + 1 - A.A.degree(j))
    ]
    rows = range(1, C.C.rank)
    columns = []
    for i, j in unknowns:
        E = GradedMap(C.C, A.A, 1, rows={i: {j: 1}})
        columns.append(_coefficients(E @ A.m1 + C.delta1 @ E, rows))
    mat, rhs = _system(columns, _coefficients(C.delta0 @ A.eta, rows))
    particular = solve(mat, rhs, len(unknowns), p)
    basis = _integral_basis(nullspace(mat, len(unknowns), p), p)
    free = _random_combination(basis, len(unknowns), rng, p)
    vec = [Fraction(a) + b for a, b in zip(particular, free)]
    if any(x.denominator != 1 for x in vec):
        raise EmptySolutionSpace("the cochain system has no integral solution")
    entries: Dict[int, Dict[int, int]] = {}
    for (i, j), c in zip(unknowns, vec):
        c = int(c) % p if p is not None else int(c)
        if c:
            entries.setdefault(i, {})[j] = c
    return GradedMap(C.C, A.A, 1, rows=entries)


def gen_random_witness(seed: int, ring: RingDescriptor, dims: int = 3, cobar_cap: int = 4) -> AdjunctionWitness:
    """Deterministic random adjunction witness (C, A, f, g, theta), validated.

    C is a generated curved augmented coalgebra or a curvature line. A is a rank-3
    square-zero algebra with a sampled differential; theta is drawn from sample_abar_cochain and the
    curvature of A is read off the w row, m0 = w delta1 theta - w delta0 eta, so A is
    curved whenever delta1 w meets the support of theta. f = tw_to_alg(theta), shifted by
    und = 1 half the time when the ring has degree-1 scalars.

    Args:
        seed: Random seed.
        ring: Base ring.
        dims: Rank bound for generated coalgebras.
        cobar_cap: Word length of Cobar C.

    Raises:
        InvariantViolation: If A or the witness fails validation.
    """
    rng = random.Random(seed)
    degrees = sorted([2, rng.choice([1, 2, 3])])
    flat = equip_structure(square_zero_algebra(ring, degrees), rng, flat=True)
    family = rng.choice(["random", "curvature_line"])
    C = gen_random_ca_coalgebra(seed, ring, dims) if family == "random" else curvature_line_coalgebra(ring, _unit(ring, rng))
    try:
        theta = sample_abar_cochain(C, flat, rng)
    except EmptySolutionSpace:
        logger.debug(f"no Abar-valued cochain on the {family} coalgebra, using a curvature line")
        family = "curvature_line"
        C = curvature_line_coalgebra(ring, _unit(ring, rng))
        theta = sample_abar_cochain(C, flat, rng)
    m0 = (C.w @ C.delta1 @ theta - C.w @ C.delta0 @ flat.eta).materialize()
    A = UCCAlgebra(A=flat.A, m2=flat.m2, m1=flat.m1, m0=m0, eta=flat.eta, v=flat.v)
    report = validate_ucc_algebra(A)
    if not report.is_valid:
        raise InvariantViolation(f"witness algebra failed {report.violated_eq}")
    f = tw_to_alg(TwistingCochain(theta=theta), C, A, cap=cobar_cap)
    if ring.realizable(1) and rng.random() < 0.5:
        f = compose_alg_morphisms(f, identity_alg_morphism(A, und=1))
    index = C.conilpotency_index or C.with_index().conilpotency_index
    witness = make_witness(C, A, f, cobar_cap=cobar_cap, bar_cap=max(2, index))
    report = witness.validate()
    if not report.is_valid:
        raise InvariantViolation(f"generated witness failed {report.violated_eq}")
    logger.info(
        f"Generated witness on a {family} coalgebra of rank {C.C.rank} over {ring.label()} "
        f"(seed {seed}, curved algebra: {bool(m0.row(0))})"
    )
    return witness
