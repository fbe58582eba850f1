"""Test suite for curved.py - curved structures, their A-infinity forms and morphisms."""

import pytest

from src.curvedalg.curved import (
    AInfDeltaForm,
    AInfMForm,
    AlgMorphism,
    UCCAlgebra,
    alg_morphisms_equal,
    b_from_m,
    coalg_morphisms_equal,
    compose_alg_morphisms,
    compose_coalg_morphisms,
    delta_from_xi,
    identity_alg_morphism,
    identity_coalg_morphism,
    is_ac,
    is_ucdg,
    m_from_b,
    require_valid,
    validate_ainf_m_form,
    validate_alg_morphism,
    validate_ca_coalgebra,
    validate_cainf_algebra,
    validate_cainf_coalgebra,
    validate_coalg_morphism,
    validate_delta_form,
    validate_ucc_algebra,
    xi_from_delta,
)
from src.curvedalg.exceptions import CurvedAlgError, ShapeMismatch
from src.curvedalg.generators import (
    augmentation_morphism,
    curvature_example,
    dual_coalgebra,
    dual_morphism,
    scaling_morphism,
    truncated_polynomial_algebra,
    unit_morphism,
)
from src.curvedalg.gmod import GradedMap, identity, maps_equal, tensor_power_module, zero
from src.curvedalg.suite import flip_unit_sign


class TestUCCAlgebra:
    """Test cases for unit-complemented curved algebras."""

    def test_polynomial_algebra_valid_over_every_ring(self, any_ring):
        """Test k[x]/(x^3) with deg x = 2 over each shipped ring."""
        report = validate_ucc_algebra(truncated_polynomial_algebra(any_ring, 3, 2))
        assert report.is_valid, report.errors

    def test_fixture_algebras_valid(self, poly3, square_zero, curved):
        """Test the shipped example algebras."""
        for alg in (poly3, square_zero, curved):
            assert validate_ucc_algebra(alg).is_valid

    def test_curved_example_with_curvature(self, even7):
        """Test that a central curvature c u keeps the example valid but not dg."""
        alg = curvature_example(even7, 1)
        assert validate_ucc_algebra(alg).is_valid
        assert not is_ucdg(alg)

    def test_flat_algebra_is_ucdg(self, poly3):
        """Test that zero curvature is detected."""
        assert is_ucdg(poly3)

    def test_flipped_unit_detected(self, poly3):
        """Test that negating 1 * 1 breaks associativity first."""
        report = validate_ucc_algebra(flip_unit_sign(poly3))
        assert not report.is_valid
        assert report.violated_eq == "associativity"
        assert report.witness is not None

    def test_window_restricts_rows(self, poly3):
        """Test that a window still sees a fault among its generators."""
        report = validate_ucc_algebra(flip_unit_sign(poly3), window=[0])
        assert not report.is_valid

    def test_wrong_degree_rejected(self, poly3):
        """Test that m1 must have degree 1."""
        A = poly3.A
        with pytest.raises(ShapeMismatch):
            UCCAlgebra(A=A, m2=poly3.m2, m1=zero(A, A, 0), m0=poly3.m0, eta=poly3.eta, v=poly3.v)

    def test_incl_then_pr_is_identity(self, poly3):
        """Test pr . incl = 1 on the complement."""
        incl = poly3.incl()
        assert maps_equal(incl @ poly3.pr(), identity(incl.dom)) is None

    def test_require_valid_raises(self, poly3):
        """Test the raising wrapper around reports."""
        with pytest.raises(CurvedAlgError):
            require_valid(validate_ucc_algebra(flip_unit_sign(poly3)), "algebra")


class TestCACoalgebra:
    """Test cases for curved augmented coalgebras."""

    def test_dual_coalgebra_valid(self, dual_coalg):
        """Test the dual of k[x]/(x^2)."""
        assert validate_ca_coalgebra(dual_coalg).is_valid
        assert dual_coalg.conilpotency_index == 2
        assert is_ac(dual_coalg)

    def test_conilpotency_index_of_larger_dual(self, poly3):
        """Test that the dual of k[x]/(x^3) has index 3."""
        coalg = dual_coalgebra(poly3)
        assert coalg.conilpotency_index == 3
        assert validate_ca_coalgebra(coalg).is_valid

    def test_understated_index_reported(self, poly3):
        """Test that a recorded index below the computed one fails validation."""
        coalg = dual_coalgebra(poly3).model_copy(update={"conilpotency_index": 2})
        report = validate_ca_coalgebra(coalg)
        assert report.violated_eq == "conilpotency_certificate"

    def test_non_multiplicative_splitting_rejected(self, curved):
        """Test that only augmented algebras dualize."""
        with pytest.raises(ShapeMismatch):
            dual_coalgebra(curved)


class TestAInfinityForms:
    """Test cases for the shifted and unshifted A-infinity presentations."""

    def test_b_form_valid(self, poly3, square_zero, curved):
        """Test that the shifted form of a valid algebra satisfies the A-infinity relations."""
        for alg in (poly3, square_zero, curved):
            report = validate_cainf_algebra(b_from_m(alg, arity_cap=3))
            assert report.is_valid, report.errors

    def test_b_form_detects_fault(self, poly3):
        """Test that a broken product breaks the A-infinity relations."""
        assert not validate_cainf_algebra(b_from_m(flip_unit_sign(poly3), arity_cap=3)).is_valid

    def test_m_form_valid(self, curved):
        """Test the unshifted relations on the curvature example."""
        assert validate_ainf_m_form(AInfMForm.from_ucc(curved, arity_cap=3)).is_valid

    def test_b_to_m_recovers_product(self, poly3):
        """Test that shifting back returns the original operations."""
        mform = m_from_b(b_from_m(poly3, arity_cap=3))
        back = mform.to_ucc()
        assert maps_equal(back.m2, poly3.m2) is None
        assert maps_equal(back.m0, poly3.m0) is None

    def test_higher_operation_blocks_reduction(self, poly3):
        """Test that a nonzero m_3 has no reduced form."""
        A = poly3.A
        m3 = GradedMap(tensor_power_module(A, 3), A, -1, rows={1: {0: 1}})
        mform = AInfMForm.from_ucc(poly3)
        mform = mform.model_copy(update={"m": {**mform.m, 3: m3}})
        with pytest.raises(ShapeMismatch):
            mform.to_ucc()

    def test_xi_form_valid(self, dual_coalg, poly3):
        """Test the shifted coalgebra relations on duals."""
        for coalg in (dual_coalg, dual_coalgebra(poly3)):
            assert validate_cainf_coalgebra(xi_from_delta(coalg, arity_cap=3)).is_valid

    def test_delta_form_valid(self, dual_coalg):
        """Test the unshifted coalgebra relations and the round trip through xi."""
        assert validate_delta_form(AInfDeltaForm.from_ca(dual_coalg, arity_cap=3)).is_valid
        back = delta_from_xi(xi_from_delta(dual_coalg, arity_cap=3)).to_ca()
        assert maps_equal(back.delta2, dual_coalg.delta2) is None


class TestAlgMorphisms:
    """Test cases for algebra morphisms."""

    def test_identity_valid(self, poly3):
        """Test the identity morphism."""
        assert validate_alg_morphism(identity_alg_morphism(poly3), poly3, poly3).is_valid

    def test_unit_and_augmentation(self, poly3):
        """Test eta: k -> A and v: A -> k, and that eta then v is the identity of k."""
        unit, source = unit_morphism(poly3)
        aug, target = augmentation_morphism(poly3)
        assert validate_alg_morphism(unit, source, poly3).is_valid
        assert validate_alg_morphism(aug, poly3, target).is_valid
        assert alg_morphisms_equal(compose_alg_morphisms(unit, aug), identity_alg_morphism(source))

    def test_scaling_morphism(self, poly3):
        """Test that x |-> 3x transports the structure."""
        f, target = scaling_morphism(poly3, [0, 1, 2], 3)
        assert validate_alg_morphism(f, poly3, target).is_valid

    def test_scaling_requires_unit(self, poly3):
        """Test that lambda must be invertible."""
        with pytest.raises(ShapeMismatch):
            scaling_morphism(poly3, [0, 1, 2], 7)

    def test_odd_scalar_component(self, odd7):
        """Test (id, und) with und of degree 1 over the exterior ring."""
        alg = truncated_polynomial_algebra(odd7, 2, 1)
        f = identity_alg_morphism(alg, und=1)
        assert validate_alg_morphism(f, alg, alg).is_valid
        assert f.und_map().entry(0, 0) == 1

    def test_odd_scalar_needs_degree_one(self, poly3):
        """Test that und must vanish over F_p."""
        with pytest.raises(ShapeMismatch):
            AlgMorphism(f1=identity(poly3.A), und=1)

    def test_non_multiplicative_map_detected(self, poly3):
        """Test that doubling every basis element is not multiplicative."""
        f = AlgMorphism(f1=identity(poly3.A).scale(2))
        report = validate_alg_morphism(f, poly3, poly3)
        assert report.violated_eq == "multiplicative"


class TestCoalgMorphisms:
    """Test cases for coalgebra morphisms."""

    def test_identity_valid(self, dual_coalg):
        """Test the identity morphism and its composite with itself."""
        ident = identity_coalg_morphism(dual_coalg)
        assert validate_coalg_morphism(ident, dual_coalg, dual_coalg).is_valid
        assert coalg_morphisms_equal(compose_coalg_morphisms(ident, ident), ident)

    def test_dual_of_scaling(self, dual_numbers):
        """Test that the transpose of a scaling is a coalgebra morphism between the duals."""
        f, target = scaling_morphism(dual_numbers, [0, 1], 3)
        g = dual_morphism(f, dual_numbers, target)
        report = validate_coalg_morphism(g, dual_coalgebra(target), dual_coalgebra(dual_numbers))
        assert report.is_valid, report.errors

    def test_wrong_domain_reported(self, dual_coalg, poly3):
        """Test that a shape error becomes a failed report."""
        other = dual_coalgebra(poly3)
        report = validate_coalg_morphism(identity_coalg_morphism(dual_coalg), other, other)
        assert report.violated_eq == "shape"
