"""JSON wire models for rings, modules, maps, structures, morphisms and witnesses.

Every file read or written by the command line is one bundle tagged by ``type``. Maps are
stored as sparse triplets ``[i, j, [[deg, coef]]]``; the canonical text form sorts keys and
triplets so equal objects serialize to equal bytes.
"""

import json
import logging
from typing import Annotated, List, Literal, Optional, Sequence, Tuple, Union

from pydantic import BaseModel, Field, TypeAdapter, ValidationError, model_validator

from .adjoint import AdjunctionWitness, TwistingCochain, validate_twisting_cochain
from .barcobar import BarResult, CobarResult
from .curved import (
    AlgMorphism,
    CACoalgebra,
    CoalgMorphism,
    UCCAlgebra,
    validate_alg_morphism,
    validate_ca_coalgebra,
    validate_coalg_morphism,
    validate_ucc_algebra,
)
from .exceptions import CurvedAlgError, ParseError
from .gmod import GradedMap, GradedModule, from_entries
from .gring import RingDescriptor
from .report import ValidationReport

logger = logging.getLogger(__name__)

Term = Tuple[int, int]
Triplet = Tuple[int, int, List[Term]]


class ModuleModel(BaseModel):
    """
    A free graded module: either base generators or a list of tensor factors.

    Attributes:
        ring (RingDescriptor): Coefficient ring.
        gens (Optional[List[int]]): Generator degrees of a base module.
        factors (Optional[List[ModuleModel]]): Factors of a tensor product.

    Example:
        module = ModuleModel(ring=RingDescriptor(kind='prime_field', p=7), gens=[0, 1])
    """

    ring: RingDescriptor
    gens: Optional[List[int]] = None
    factors: Optional[List["ModuleModel"]] = None

    @model_validator(mode="after")
    def validate_one_form(self) -> "ModuleModel":
        """Ensure exactly one of gens and factors is given."""
        if (self.gens is None) == (self.factors is None):
            raise ValueError("a module has either 'gens' or 'factors'")
        return self

    @classmethod
    def from_module(cls, M: GradedModule) -> "ModuleModel":
        if M.factors:
            return cls(ring=M.ring, factors=[cls.from_module(f) for f in M.factors])
        return cls(ring=M.ring, gens=list(M.gens))

    def to_module(self) -> GradedModule:
        if self.factors is not None:
            return GradedModule(ring=self.ring, factors=tuple(f.to_module() for f in self.factors))
        return GradedModule(ring=self.ring, gens=tuple(self.gens))


class MapModel(BaseModel):
    """
    A homogeneous map as sparse triplets.

    Attributes:
        dom (ModuleModel): Domain.
        cod (ModuleModel): Codomain.
        deg (int): Map degree.
        entries (List[Triplet]): ``[row, column, [[ring_degree, coefficient]]]``, sorted.
    """

    dom: ModuleModel
    cod: ModuleModel
    deg: int
    entries: List[Triplet] = Field(default_factory=list)

    @classmethod
    def from_map(cls, f: GradedMap) -> "MapModel":
        ring = f.ring
        triplets = []
        for i, j, c in f.entries():
            c = ring.reduce(c)
            if c:
                triplets.append((i, j, [(f.dom.degree(i) + f.deg - f.cod.degree(j), c)]))
        return cls(
            dom=ModuleModel.from_module(f.dom),
            cod=ModuleModel.from_module(f.cod),
            deg=f.deg,
            entries=sorted(triplets),
        )

    def to_map(self) -> GradedMap:
        """Rebuild the map, checking that every term sits in its implied ring degree.

        Raises:
            ParseError: If an index is out of range or a term has the wrong ring degree.
        """
        dom, cod = self.dom.to_module(), self.cod.to_module()
        ring = dom.ring
        flat = []
        for i, j, terms in self.entries:
            if not (0 <= i < dom.rank and 0 <= j < cod.rank):
                raise ParseError(f"entry ({i}, {j}) outside a {dom.rank} x {cod.rank} map")
            implied = dom.degree(i) + self.deg - cod.degree(j)
            for d, c in terms:
                if d != implied:
                    raise ParseError(f"entry ({i}, {j}) has ring degree {d}, expected {implied}")
                if ring.reduce(c) and not ring.realizable(d):
                    raise ParseError(f"entry ({i}, {j}) needs a degree {d} scalar in {ring.label()}")
                flat.append((i, j, c))
        return from_entries(dom, cod, self.deg, flat)


class TruncationModel(BaseModel):
    """
    Truncation metadata of a bar or cobar output.

    Attributes:
        cap (int): Maximal word length.
        exactness_window (int): Largest word length on which the axioms hold exactly.
        window_rows (List[int]): Basis rows the validators are evaluated on.
    """

    cap: int = Field(ge=0)
    exactness_window: int
    window_rows: List[int]


class UCCAlgebraModel(BaseModel):
    """Wire form of a unit-complemented curved algebra."""

    type: Literal["ucc_algebra"] = "ucc_algebra"
    A: ModuleModel
    m2: MapModel
    m1: MapModel
    m0: MapModel
    eta: MapModel
    v: MapModel
    truncation: Optional[TruncationModel] = None

    @classmethod
    def from_domain(cls, alg: UCCAlgebra, truncation: Optional[TruncationModel] = None) -> "UCCAlgebraModel":
        return cls(
            A=ModuleModel.from_module(alg.A),
            m2=MapModel.from_map(alg.m2),
            m1=MapModel.from_map(alg.m1),
            m0=MapModel.from_map(alg.m0),
            eta=MapModel.from_map(alg.eta),
            v=MapModel.from_map(alg.v),
            truncation=truncation,
        )

    def to_domain(self) -> UCCAlgebra:
        return UCCAlgebra(
            A=self.A.to_module(),
            m2=self.m2.to_map(),
            m1=self.m1.to_map(),
            m0=self.m0.to_map(),
            eta=self.eta.to_map(),
            v=self.v.to_map(),
        )

    def window(self) -> Optional[List[int]]:
        return self.truncation.window_rows if self.truncation else None

    def check(self) -> ValidationReport:
        return validate_ucc_algebra(self.to_domain(), window=self.window())


class CACoalgebraModel(BaseModel):
    """Wire form of a curved augmented coalgebra."""

    type: Literal["ca_coalgebra"] = "ca_coalgebra"
    C: ModuleModel
    delta2: MapModel
    delta1: MapModel
    delta0: MapModel
    eps: MapModel
    w: MapModel
    conilpotency_index: Optional[int] = None
    truncation: Optional[TruncationModel] = None

    @classmethod
    def from_domain(cls, coalg: CACoalgebra, truncation: Optional[TruncationModel] = None) -> "CACoalgebraModel":
        return cls(
            C=ModuleModel.from_module(coalg.C),
            delta2=MapModel.from_map(coalg.delta2),
            delta1=MapModel.from_map(coalg.delta1),
            delta0=MapModel.from_map(coalg.delta0),
            eps=MapModel.from_map(coalg.eps),
            w=MapModel.from_map(coalg.w),
            conilpotency_index=coalg.conilpotency_index,
            truncation=truncation,
        )

    def to_domain(self) -> CACoalgebra:
        return CACoalgebra(
            C=self.C.to_module(),
            delta2=self.delta2.to_map(),
            delta1=self.delta1.to_map(),
            delta0=self.delta0.to_map(),
            eps=self.eps.to_map(),
            w=self.w.to_map(),
            conilpotency_index=self.conilpotency_index,
        )

    def window(self) -> Optional[List[int]]:
        return self.truncation.window_rows if self.truncation else None

    def check(self) -> ValidationReport:
        return validate_ca_coalgebra(self.to_domain(), window=self.window())


class AlgMorphismModel(BaseModel):
    """Wire form of an algebra morphism, optionally with its source and target."""

    type: Literal["alg_morphism"] = "alg_morphism"
    f1: MapModel
    und: int = 0
    source: Optional[UCCAlgebraModel] = None
    target: Optional[UCCAlgebraModel] = None

    @classmethod
    def from_domain(
        cls,
        f: AlgMorphism,
        source: Optional[UCCAlgebraModel] = None,
        target: Optional[UCCAlgebraModel] = None,
    ) -> "AlgMorphismModel":
        return cls(f1=MapModel.from_map(f.f1), und=f.und, source=source, target=target)

    def to_domain(self) -> AlgMorphism:
        return AlgMorphism(f1=self.f1.to_map(), und=self.und)

    def check(self) -> ValidationReport:
        if self.source is None or self.target is None:
            raise ParseError("checking a morphism needs both 'source' and 'target'")
        return validate_alg_morphism(
            self.to_domain(), self.source.to_domain(), self.target.to_domain(), window=self.source.window()
        )


class CoalgMorphismModel(BaseModel):
    """Wire form of a coalgebra morphism, optionally with its source and target."""

    type: Literal["coalg_morphism"] = "coalg_morphism"
    g1: MapModel
    g0: MapModel
    source: Optional[CACoalgebraModel] = None
    target: Optional[CACoalgebraModel] = None

    @classmethod
    def from_domain(
        cls,
        g: CoalgMorphism,
        source: Optional[CACoalgebraModel] = None,
        target: Optional[CACoalgebraModel] = None,
    ) -> "CoalgMorphismModel":
        return cls(g1=MapModel.from_map(g.g1), g0=MapModel.from_map(g.g0), source=source, target=target)

    def to_domain(self) -> CoalgMorphism:
        return CoalgMorphism(g1=self.g1.to_map(), g0=self.g0.to_map())

    def check(self) -> ValidationReport:
        if self.source is None or self.target is None:
            raise ParseError("checking a morphism needs both 'source' and 'target'")
        return validate_coalg_morphism(
            self.to_domain(), self.source.to_domain(), self.target.to_domain(), window=self.source.window()
        )


class TwistingCochainModel(BaseModel):
    """Wire form of a twisting cochain, optionally with its coalgebra and algebra."""

    type: Literal["twisting_cochain"] = "twisting_cochain"
    theta: MapModel
    coalgebra: Optional[CACoalgebraModel] = None
    algebra: Optional[UCCAlgebraModel] = None

    def to_domain(self) -> TwistingCochain:
        return TwistingCochain(theta=self.theta.to_map())

    def check(self) -> ValidationReport:
        if self.coalgebra is None or self.algebra is None:
            raise ParseError("checking a twisting cochain needs both 'coalgebra' and 'algebra'")
        return validate_twisting_cochain(self.to_domain(), self.coalgebra.to_domain(), self.algebra.to_domain())


class AdjunctionWitnessModel(BaseModel):
    """Wire form bundling C, A, f, g, theta and both caps."""

    type: Literal["adjunction_witness"] = "adjunction_witness"
    C: CACoalgebraModel
    A: UCCAlgebraModel
    f: AlgMorphismModel
    g: CoalgMorphismModel
    theta: MapModel
    cobar_cap: int
    bar_cap: int

    @classmethod
    def from_domain(cls, witness: AdjunctionWitness) -> "AdjunctionWitnessModel":
        return cls(
            C=CACoalgebraModel.from_domain(witness.C),
            A=UCCAlgebraModel.from_domain(witness.A),
            f=AlgMorphismModel.from_domain(witness.f),
            g=CoalgMorphismModel.from_domain(witness.g),
            theta=MapModel.from_map(witness.theta.theta),
            cobar_cap=witness.cobar_cap,
            bar_cap=witness.bar_cap,
        )

    def to_domain(self) -> AdjunctionWitness:
        return AdjunctionWitness(
            C=self.C.to_domain(),
            A=self.A.to_domain(),
            f=self.f.to_domain(),
            g=self.g.to_domain(),
            theta=TwistingCochain(theta=self.theta.to_map()),
            cobar_cap=self.cobar_cap,
            bar_cap=self.bar_cap,
        )

    def check(self) -> ValidationReport:
        return self.to_domain().validate()


Bundle = Annotated[
    Union[
        UCCAlgebraModel,
        CACoalgebraModel,
        AlgMorphismModel,
        CoalgMorphismModel,
        TwistingCochainModel,
        AdjunctionWitnessModel,
    ],
    Field(discriminator="type"),
]

_bundle_adapter = TypeAdapter(Bundle)


def bar_truncation(bar: BarResult) -> TruncationModel:
    return TruncationModel(cap=bar.cap, exactness_window=bar.exactness_window, window_rows=bar.window_rows())


def cobar_truncation(cobar: CobarResult) -> TruncationModel:
    return TruncationModel(cap=cobar.cap, exactness_window=1, window_rows=cobar.window_rows())


def bar_to_model(bar: BarResult) -> CACoalgebraModel:
    return CACoalgebraModel.from_domain(bar.coalgebra, truncation=bar_truncation(bar))


def cobar_to_model(cobar: CobarResult) -> UCCAlgebraModel:
    return UCCAlgebraModel.from_domain(cobar.algebra, truncation=cobar_truncation(cobar))


def dump_canonical(model: BaseModel) -> str:
    """Serialize with sorted keys, no whitespace and no null fields."""
    return json.dumps(model.model_dump(mode="json", exclude_none=True), sort_keys=True, separators=(",", ":"))


def load_bundle(text: str) -> BaseModel:
    """Parse a bundle and check that it describes a well-formed object.

    Raises:
        ParseError: On malformed JSON, an unknown ``type`` or maps of the wrong shape.
    """
    try:
        model = _bundle_adapter.validate_json(text)
    except ValidationError as e:
        raise ParseError(f"not a known bundle: {e.error_count()} validation errors") from e
    try:
        model.to_domain()
    except (CurvedAlgError, ValueError) as e:
        if isinstance(e, ParseError):
            raise
        raise ParseError(f"{model.type} is malformed: {e}") from e
    logger.debug(f"loaded {model.type} bundle")
    return model


def load_as(text: str, kinds: Sequence[type]) -> BaseModel:
    """Load a bundle and require one of the given model classes."""
    model = load_bundle(text)
    if not isinstance(model, tuple(kinds)):
        expected = ", ".join(k.model_fields["type"].default for k in kinds)
        raise ParseError(f"expected {expected}, got {model.type}")
    return model
