"""Seeded property suite behind ``curvedalg selftest``.

Each property takes a case seed, a ring and the suite options and returns a
``ValidationReport``; ``run_suite`` tallies passes and failures per property.
"""

import logging
import random
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from pydantic import BaseModel, Field

from .adjoint import (
    AdjunctionWitness,
    TwistingCochain,
    adjoint_bwd,
    adjoint_fwd,
    check_naturality_in_A,
    check_naturality_in_C,
    check_system_equivalence,
    coalg_to_tw,
    to_twisting_cochain,
    tw_to_alg,
    tw_to_coalg,
    validate_twisting_cochain,
    validate_twisting_cochain_dg,
)
from .barcobar import (
    bar_arity_identities,
    bar_morphism,
    bar_object,
    cobar_arity_identities,
    cobar_morphism,
    cobar_object,
)
from .config import Settings
from .curved import (
    AInfDeltaForm,
    AInfMForm,
    AlgMorphism,
    UCCAlgebra,
    alg_morphisms_equal,
    coalg_morphisms_equal,
    compose_alg_morphisms,
    compose_coalg_morphisms,
    identity_alg_morphism,
    identity_coalg_morphism,
    is_ac,
    is_ucdg,
    validate_alg_morphism,
    validate_ainf_m_form,
    validate_ca_coalgebra,
    validate_coalg_morphism,
    validate_delta_form,
    validate_ucc_algebra,
)
from .exceptions import CurvedAlgError
from .generators import (
    curvature_example,
    dual_coalgebra,
    dual_morphism,
    gen_random_algebra_iso,
    gen_random_ca_coalgebra,
    gen_random_cainf_algebra,
    gen_random_coalgebra_iso,
    gen_random_scaling,
    gen_random_ucc_algebra,
    gen_random_witness,
)
from .gmod import GradedMap, GradedModule, from_entries, koszul_sign_oracle, sigma, tensor_maps
from .gring import RingDescriptor, RingKind
from .report import ValidationReport

logger = logging.getLogger(__name__)

DEFAULT_RINGS = ("prime_field:7", "odd_exterior:7", "even_truncated:7:3")


class SuiteOptions(BaseModel):
    """
    Knobs of the property suite.

    Attributes:
        bar_cap (int): Word length of bar constructions checked for soundness (settings default cap).
        cobar_cap (int): Word length of cobar constructions.
        max_dims (int): Largest rank of generated algebras.
        inject_fault (bool): Flip one sign in generated algebras; the suite must then fail.
    """

    bar_cap: int = Field(default_factory=Settings.get_default_cap, ge=2)
    cobar_cap: int = Field(default=4, ge=4)
    max_dims: int = Field(default=3, ge=1, le=4)
    inject_fault: bool = False


class PropertyTally(BaseModel):
    """Pass and failure counts of one property, plus the counters its reports kept."""

    name: str
    passed: int = 0
    failed: int = 0
    first_failure: Optional[Dict] = None
    counts: Dict[str, int] = Field(default_factory=dict)


class SuiteSummary(BaseModel):
    """Outcome of a suite run."""

    seed: int
    cases: int
    rings: List[str]
    tallies: List[PropertyTally]

    @property
    def ok(self) -> bool:
        return all(t.failed == 0 for t in self.tallies)


Property = Callable[[int, RingDescriptor, SuiteOptions], ValidationReport]
PROPERTIES: Dict[str, Property] = {}


def register(name: str):
    def wrap(fn: Property) -> Property:
        PROPERTIES[name] = fn
        return fn

    return wrap


def flip_unit_sign(alg: UCCAlgebra) -> UCCAlgebra:
    """Negate the product of the unit with itself."""
    m2 = alg.m2
    entries = [(i, j, -c if i == 0 else c) for i, j, c in m2.entries()]
    return alg.model_copy(update={"m2": from_entries(m2.dom, m2.cod, 0, entries)})


def _dims(seed: int, opts: SuiteOptions, low: int = 2) -> int:
    return random.Random(seed).randint(min(low, opts.max_dims), opts.max_dims)


def _flat(seed: int, ring: RingDescriptor, opts: SuiteOptions) -> UCCAlgebra:
    return gen_random_ucc_algebra(seed, ring, min(_dims(seed, opts), 3), flat=True)


# ---------------------------------------------------------------------------
# Sign calculus and structures
# ---------------------------------------------------------------------------


@register("koszul_sign")
def prop_koszul_sign(seed: int, ring: RingDescriptor, opts: SuiteOptions) -> ValidationReport:
    """Tensor products of shifts at random positions of random words agree with the transposition count."""
    report = ValidationReport(subject="koszul sign")
    rng = random.Random(seed)
    for _ in range(200):
        word = [rng.randint(-2, 3) for _ in range(rng.randint(1, 5))]
        positions = sorted(rng.sample(range(1, len(word) + 1), rng.randint(1, len(word))))
        shifts = {q: rng.randint(-2, 2) for q in positions}
        maps = [sigma(GradedModule(ring=ring, gens=(w,)), shifts.get(q, 0)) for q, w in enumerate(word, start=1)]
        product = tensor_maps(maps, ring)
        expected = koszul_sign_oracle(word, [-shifts[q] for q in positions], positions)
        report.require("koszul_sign", ring.reduce(product.entry(0, 0) - expected) == 0, [word, positions])
    return report


@register("ucc_algebra")
def prop_ucc_algebra(seed: int, ring: RingDescriptor, opts: SuiteOptions) -> ValidationReport:
    alg = gen_random_ucc_algebra(seed, ring, _dims(seed, opts, low=1))
    if opts.inject_fault:
        alg = flip_unit_sign(alg)
    return validate_ucc_algebra(alg)


ALGEBRA_MAPS = ("m2", "m1", "m0", "eta")
COALGEBRA_MAPS = ("delta2", "delta1", "delta0", "w")


def perturb_entry(f: GradedMap, rng: random.Random) -> Optional[Tuple[GradedMap, int, int]]:
    """Add a random nonzero unit to one entry of f with a realizable ring degree.

    Returns:
        The changed map with the row and column touched, or None when f has no such entry.
    """
    ring = f.ring
    slots = [
        (i, j)
        for i in range(f.dom.rank)
        for j in range(f.cod.rank)
        if ring.realizable(f.dom.degree(i) + f.deg - f.cod.degree(j))
    ]
    if not slots:
        return None
    i, j = rng.choice(slots)
    unit = rng.randrange(1, ring.p) if ring.p is not None else rng.choice([-1, 1])
    return from_entries(f.dom, f.cod, f.deg, [*f.entries(), (i, j, unit)]), i, j


@register("perturbation_detected")
def prop_perturbation_detected(seed: int, ring: RingDescriptor, opts: SuiteOptions) -> ValidationReport:
    """One random entry of one random structure map gets a unit added, on an algebra and on a coalgebra.

    The reduced and A-infinity validators must agree on the result, and entries every
    change of which breaks a unit or counit law must be caught. Counters record how
    many perturbations each validator detected.
    """
    report = ValidationReport(subject="perturbation")
    rng = random.Random(seed)

    alg = gen_random_ucc_algebra(seed, ring, _dims(seed, opts))
    name = rng.choice(ALGEBRA_MAPS)
    changed = perturb_entry(getattr(alg, name), rng)
    if changed is None:
        report.add_warning(f"algebra map {name} has no realizable entry")
    else:
        f, i, j = changed
        broken = alg.model_copy(update={name: f})
        reduced = validate_ucc_algebra(broken)
        ainf = validate_ainf_m_form(AInfMForm.from_ucc(broken))
        report.require("algebra.forms_agree", reduced.is_valid == ainf.is_valid, [name, i, j])
        if name == "eta" or (name == "m2" and 0 in f.dom.split(i)):
            report.require("algebra.unit_law_caught", not reduced.is_valid, [name, i, j])
        report.tally("algebra.perturbed")
        report.tally("algebra.detected", int(not reduced.is_valid))

    coalg = gen_random_ca_coalgebra(seed, ring, _dims(seed, opts))
    name = rng.choice(COALGEBRA_MAPS)
    changed = perturb_entry(getattr(coalg, name), rng)
    if changed is None:
        report.add_warning(f"coalgebra map {name} has no realizable entry")
        return report
    f, i, j = changed
    broken = coalg.model_copy(update={name: f, "conilpotency_index": None})
    reduced = validate_ca_coalgebra(broken, conilpotency_cap=4)
    relations = validate_delta_form(AInfDeltaForm.from_ca(broken))
    report.require("coalgebra.forms_agree", relations.is_valid or not reduced.is_valid, [name, i, j])
    counit_entry = name == "delta2" and (i == 0 or 0 in f.cod.split(j))
    if counit_entry or (name == "w" and j == 0):
        report.require("coalgebra.counit_law_caught", not reduced.is_valid, [name, i, j])
    report.tally("coalgebra.perturbed")
    report.tally("coalgebra.detected", int(not reduced.is_valid))
    return report


@register("ca_coalgebra")
def prop_ca_coalgebra(seed: int, ring: RingDescriptor, opts: SuiteOptions) -> ValidationReport:
    return validate_ca_coalgebra(gen_random_ca_coalgebra(seed, ring, _dims(seed, opts)))


# ---------------------------------------------------------------------------
# Bar and cobar
# ---------------------------------------------------------------------------


@register("bar_soundness")
def prop_bar_soundness(seed: int, ring: RingDescriptor, opts: SuiteOptions) -> ValidationReport:
    alg = gen_random_ucc_algebra(seed, ring, _dims(seed, opts))
    bar = bar_object(alg, cap=opts.bar_cap)
    report = bar.validate()
    return report.merge(bar_arity_identities(bar), "arity.")


@register("cainf_bar_soundness")
def prop_cainf_bar_soundness(seed: int, ring: RingDescriptor, opts: SuiteOptions) -> ValidationReport:
    """Bar of a curved A-infinity algebra with nonzero b3 and b4."""
    alg = gen_random_cainf_algebra(seed, ring, dims=max(3, opts.max_dims))
    bar = bar_object(alg, cap=opts.bar_cap)
    report = bar.validate()
    report.require("higher_products", bool(alg.op(3).entries()) and bool(alg.op(4).entries()))
    return report.merge(bar_arity_identities(bar), "arity.")


@register("cobar_soundness")
def prop_cobar_soundness(seed: int, ring: RingDescriptor, opts: SuiteOptions) -> ValidationReport:
    coalg = gen_random_ca_coalgebra(seed, ring, _dims(seed, opts))
    cobar = cobar_object(coalg, cap=opts.cobar_cap)
    report = cobar.validate()
    return report.merge(cobar_arity_identities(cobar), "arity.")


@register("bar_restriction")
def prop_bar_restriction(seed: int, ring: RingDescriptor, opts: SuiteOptions) -> ValidationReport:
    """Bar of a dg algebra is augmented curved."""
    report = ValidationReport(subject="bar restriction")
    alg = _flat(seed, ring, opts)
    if not is_ucdg(alg):
        report.add_warning("generated algebra has unit curvature, restriction not applicable")
        return report
    report.require("augmented_curved", is_ac(bar_object(alg, cap=2).coalgebra))
    return report


@register("curvature_witness")
def prop_curvature_witness(seed: int, ring: RingDescriptor, opts: SuiteOptions) -> ValidationReport:
    """x^2 = u 1 gives delta0 = u on the word (x, x)."""
    report = ValidationReport(subject="curvature witness")
    if ring.kind != RingKind.EVEN_TRUNCATED:
        report.add_warning(f"{ring.label()} has no degree-2 scalar")
        return report
    bar = bar_object(curvature_example(ring), cap=2)
    word = bar.words.index((0, 0))
    report.require("delta0_on_xx", bar.coalgebra.delta0.entry(word, 0) == 1, [0, 0])
    return report


@register("bar_functoriality")
def prop_bar_functoriality(seed: int, ring: RingDescriptor, opts: SuiteOptions) -> ValidationReport:
    report = ValidationReport(subject="bar functoriality")
    A = gen_random_ucc_algebra(seed, ring, _dims(seed, opts))
    f, B = gen_random_scaling(seed, A)
    h, D = gen_random_scaling(seed + 1, B)
    bar_A = bar_object(A, cap=2).coalgebra
    report.require(
        "identity",
        coalg_morphisms_equal(bar_morphism(identity_alg_morphism(A), A, A, cap=2), identity_coalg_morphism(bar_A)),
    )
    composite = bar_morphism(compose_alg_morphisms(f, h), A, D, cap=2)
    path = compose_coalg_morphisms(bar_morphism(f, A, B, cap=2), bar_morphism(h, B, D, cap=2))
    report.require("composition", coalg_morphisms_equal(composite, path))
    return report


@register("cobar_functoriality")
def prop_cobar_functoriality(seed: int, ring: RingDescriptor, opts: SuiteOptions) -> ValidationReport:
    report = ValidationReport(subject="cobar functoriality")
    A = gen_random_ucc_algebra(seed, ring, _dims(seed, opts), augmented=True)
    f, B = gen_random_scaling(seed, A)
    h, D = gen_random_scaling(seed + 1, B)
    CA, CB, CD = dual_coalgebra(A), dual_coalgebra(B), dual_coalgebra(D)
    jf, jh = dual_morphism(f, A, B), dual_morphism(h, B, D)
    cap = opts.cobar_cap
    cobar = cobar_object(CA, cap=cap)
    rows = list(cobar.words.window(2))
    same = cobar_morphism(identity_coalg_morphism(CA), CA, CA, cap=cap)
    report.require("identity", alg_morphisms_equal(same, identity_alg_morphism(cobar.algebra), rows))
    composite = cobar_morphism(compose_coalg_morphisms(jh, jf), CD, CA, cap=cap)
    path = compose_alg_morphisms(cobar_morphism(jh, CD, CB, cap=cap), cobar_morphism(jf, CB, CA, cap=cap))
    rows = list(cobar_object(CD, cap=cap).words.window(2))
    report.require("composition", alg_morphisms_equal(composite, path, rows))
    return report


# ---------------------------------------------------------------------------
# Adjunction
# ---------------------------------------------------------------------------


def _shifted(f: AlgMorphism, A: UCCAlgebra, ring: RingDescriptor) -> AlgMorphism:
    """f followed by (id, und) with und = 1 when the ring has degree-1 scalars."""
    return compose_alg_morphisms(f, identity_alg_morphism(A, und=1)) if ring.realizable(1) else f


def _witness(seed: int, ring: RingDescriptor, opts: SuiteOptions) -> AdjunctionWitness:
    return gen_random_witness(seed, ring, _dims(seed, opts), cobar_cap=opts.cobar_cap)


@register("adjunction_roundtrip")
def prop_adjunction_roundtrip(seed: int, ring: RingDescriptor, opts: SuiteOptions) -> ValidationReport:
    report = ValidationReport(subject="adjunction round trip")
    witness = _witness(seed, ring, opts)
    C, A, cobar, bar = witness.C, witness.A, witness.cobar(), witness.bar()
    rows = list(cobar.words.window(2))
    for label, f in (("twisted", witness.f), ("shifted", _shifted(witness.f, A, ring))):
        report.merge(validate_alg_morphism(f, cobar.algebra, A, window=cobar.window_rows()), f"{label}.f.")
        g = adjoint_fwd(f, C, A, cobar=cobar, bar=bar)
        report.merge(validate_coalg_morphism(g, C, bar.coalgebra), f"{label}.g.")
        back = adjoint_bwd(g, C, A, cobar=cobar, bar=bar)
        report.require(f"{label}.bwd_fwd", alg_morphisms_equal(back, f, rows))
        again = adjoint_fwd(back, C, A, cobar=cobar, bar=bar)
        report.require(f"{label}.fwd_bwd", coalg_morphisms_equal(again, g))
        report.require(f"{label}.und", ring.reduce(g.und(C) - f.und) == 0, [g.und(C), f.und])
        if f.und == 0:
            report.require(f"{label}.restriction", g.und(C) == 0)
    report.tally("curved_algebra", int(not is_ucdg(A)))
    report.tally("curved_coalgebra", int(not is_ac(C)))
    return report


@register("twisting_triangle")
def prop_twisting_triangle(seed: int, ring: RingDescriptor, opts: SuiteOptions) -> ValidationReport:
    report = ValidationReport(subject="twisting cochain triangle")
    witness = _witness(seed, ring, opts)
    C, A, cobar, bar = witness.C, witness.A, witness.cobar(), witness.bar()
    theta = to_twisting_cochain(witness.f, C, A, cobar=cobar, strict=False)
    report.merge(validate_twisting_cochain(theta, C, A), "theta.")
    rows = list(cobar.words.window(2))
    twisted = tw_to_alg(theta, C, A, cobar=cobar)
    report.require("alg_side", alg_morphisms_equal(twisted, AlgMorphism(f1=witness.f.f1, und=0), rows))
    coalg_side = tw_to_coalg(theta, C, A, bar=bar)
    report.require("coalg_side", coalg_morphisms_equal(coalg_side, adjoint_fwd(twisted, C, A, cobar=cobar, bar=bar)))
    back = coalg_to_tw(witness.g, C, A, bar=bar, strict=False)
    report.check("cochain_side", back.theta, theta.theta)
    if is_ucdg(A) and is_ac(C):
        report.merge(validate_twisting_cochain_dg(theta, C, A), "reduced.")
    return report


@register("naturality_in_algebra")
def prop_naturality_in_algebra(seed: int, ring: RingDescriptor, opts: SuiteOptions) -> ValidationReport:
    """Naturality along a diagonal-and-shear isomorphism h out of the witness algebra."""
    witness = _witness(seed, ring, opts)
    h, B = gen_random_algebra_iso(seed, witness.A)
    h = _shifted(h, B, ring)
    return check_naturality_in_A(
        h, witness.f, witness.C, witness.A, B, cobar_cap=witness.cobar_cap, bar_cap=witness.bar_cap
    )


@register("naturality_in_coalgebra")
def prop_naturality_in_coalgebra(seed: int, ring: RingDescriptor, opts: SuiteOptions) -> ValidationReport:
    """Naturality along a diagonal-and-shear isomorphism j into the witness coalgebra."""
    witness = _witness(seed, ring, opts)
    j, C = gen_random_coalgebra_iso(seed, witness.C)
    return check_naturality_in_C(
        j, witness.f, C, witness.C, witness.A, cobar_cap=witness.cobar_cap, bar_cap=witness.bar_cap
    )


@register("split_equivalence")
def prop_split_equivalence(seed: int, ring: RingDescriptor, opts: SuiteOptions) -> ValidationReport:
    """The split systems agree on the pair of the witness cochain and on the pair of its double."""
    report = ValidationReport(subject="split equation systems")
    witness = _witness(seed, ring, opts)
    C, A, cobar, bar = witness.C, witness.A, witness.cobar(), witness.bar()
    for label, theta in (("witness", witness.theta), ("doubled", TwistingCochain(theta=witness.theta.theta.scale(2)))):
        f = tw_to_alg(theta, C, A, cobar=cobar)
        g = tw_to_coalg(theta, C, A, bar=bar)
        report.merge(check_system_equivalence(f, g, C, A, cobar, bar), f"{label}.")
    return report


# ---------------------------------------------------------------------------
# Runner
# ---------------------------------------------------------------------------


def run_property(name: str, seed: int, ring: RingDescriptor, opts: SuiteOptions) -> ValidationReport:
    """Run one property, turning library errors into a failed report."""
    try:
        return PROPERTIES[name](seed, ring, opts)
    except CurvedAlgError as e:
        report = ValidationReport(subject=name)
        report.add_error(f"{type(e).__name__}: {e}", "exception", [seed])
        return report


def run_suite(
    seed: int,
    cases: int,
    rings: Sequence[str] = DEFAULT_RINGS,
    opts: Optional[SuiteOptions] = None,
    names: Optional[Sequence[str]] = None,
) -> SuiteSummary:
    """Run every property on ``cases`` seeded instances per ring.

    Case seeds derive from ``seed`` only, so a run is reproducible.
    """
    opts = opts or SuiteOptions()
    names = list(names or PROPERTIES)
    tallies = {name: PropertyTally(name=name) for name in names}
    parsed = [RingDescriptor.parse(r) for r in rings]
    if cases == 0:
        logger.warning("selftest ran with zero cases, nothing was checked")
    seeds = random.Random(seed)
    for case in range(cases):
        case_seed = seeds.randrange(2**31)
        for ring in parsed:
            for name in names:
                report = run_property(name, case_seed, ring, opts)
                tally = tallies[name]
                for key, n in report.counts.items():
                    tally.counts[key] = tally.counts.get(key, 0) + n
                if report.is_valid:
                    tally.passed += 1
                    continue
                tally.failed += 1
                if tally.first_failure is None:
                    tally.first_failure = {
                        "case": case,
                        "seed": case_seed,
                        "ring": ring.label(),
                        **report.to_dict(),
                    }
        logger.debug(f"case {case} done")
    summary = SuiteSummary(seed=seed, cases=cases, rings=[r.label() for r in parsed], tallies=list(tallies.values()))
    logger.info(f"selftest finished: {'all passed' if summary.ok else 'failures'} over {cases} cases")
    return summary
