"""Test suite for adjoint.py - the cobar-bar adjunction and twisting cochains."""

import pytest

from src.curvedalg.adjoint import (
    SYSTEM_LABELS,
    TwistingCochain,
    adjoint_bwd,
    adjoint_fwd,
    check_naturality_in_A,
    check_naturality_in_C,
    check_system_equivalence,
    coalg_to_tw,
    counit_witness,
    make_witness,
    split_equations_alg,
    split_equations_coalg,
    to_twisting_cochain,
    tw_to_alg,
    tw_to_coalg,
    validate_twisting_cochain,
    validate_twisting_cochain_dg,
)
from src.curvedalg.barcobar import bar_morphism, bar_object, cobar_object
from src.curvedalg.curved import (
    UCCAlgebra,
    alg_morphisms_equal,
    coalg_morphisms_equal,
    compose_alg_morphisms,
    identity_alg_morphism,
    identity_coalg_morphism,
    is_ac,
    is_ucdg,
    validate_alg_morphism,
    validate_coalg_morphism,
)
from src.curvedalg.exceptions import CapTooSmall, ShapeMismatch, TwistingCochainViolation
from src.curvedalg.generators import (
    curvature_example,
    curvature_line_coalgebra,
    dual_coalgebra,
    gen_random_algebra_iso,
    gen_random_coalgebra_iso,
    gen_random_witness,
    scaling_morphism,
    square_zero_algebra,
    truncated_polynomial_algebra,
)
from src.curvedalg.gmod import GradedMap, ground_module, maps_equal, zero


@pytest.fixture
def witness(dual_numbers):
    """Provide the counit witness of k[x]/(x^2): C = Bar A, g = id."""
    return counit_witness(dual_numbers)


@pytest.fixture
def odd_witness(odd7):
    """Provide the counit witness of k[x]/(x^2) over the exterior ring."""
    return counit_witness(truncated_polynomial_algebra(odd7, 2, 1))


@pytest.fixture
def curvature_line_pair(fp7):
    """Provide a curvature line C, a curved square-zero A with m0 = w delta1 theta, and theta."""
    C = curvature_line_coalgebra(fp7, 1)
    flat = square_zero_algebra(fp7, [2, 2])
    theta = GradedMap(C.C, flat.A, 1, rows={1: {1: 1}})
    m0 = GradedMap(ground_module(fp7), flat.A, 2, rows={0: {1: 1}})
    A = UCCAlgebra(A=flat.A, m2=flat.m2, m1=flat.m1, m0=m0, eta=flat.eta, v=flat.v)
    return C, A, TwistingCochain(theta=theta)


@pytest.fixture
def broken_cochain(poly3):
    """Provide a cochain on the dual of k[x]/(x^3) that sends e1* to the unit."""
    C = dual_coalgebra(poly3)
    return C, TwistingCochain(theta=GradedMap(C.C, poly3.A, 1, rows={1: {0: 1}}))


class TestTwistingCochain:
    """Test cases for the cochain model and its equations."""

    def test_degree_enforced(self, witness):
        """Test that only degree-1 maps are accepted."""
        with pytest.raises(ShapeMismatch):
            TwistingCochain(theta=zero(witness.C.C, witness.A.A, 0))

    def test_counit_cochain_valid(self, witness):
        """Test both forms of the Maurer-Cartan equation on the counit cochain."""
        assert validate_twisting_cochain(witness.theta, witness.C, witness.A).is_valid
        assert validate_twisting_cochain_dg(witness.theta, witness.C, witness.A).is_valid

    def test_broken_cochain_detected(self, poly3, broken_cochain):
        """Test that theta theta = 1 on e2* breaks the equation."""
        C, theta = broken_cochain
        report = validate_twisting_cochain(theta, C, poly3)
        assert report.violated_eq == "maurer_cartan"

    def test_strict_conversion_raises(self, poly3, broken_cochain):
        """Test that strict conversion refuses a morphism whose cochain is not twisting."""
        C, theta = broken_cochain
        cobar = cobar_object(C, cap=4)
        f = tw_to_alg(theta, C, poly3, cobar=cobar)
        with pytest.raises(TwistingCochainViolation) as exc_info:
            to_twisting_cochain(f, C, poly3, cobar=cobar)
        assert exc_info.value.equation == "maurer_cartan"
        lenient = to_twisting_cochain(f, C, poly3, cobar=cobar, strict=False)
        assert maps_equal(lenient.theta, theta.theta) is None

    def test_reduced_form_needs_dg_algebra(self, even7):
        """Test that the reduced form reports curved algebras."""
        A = curvature_example(even7, 1)
        C = bar_object(A, cap=2).coalgebra
        report = validate_twisting_cochain_dg(TwistingCochain(theta=zero(C.C, A.A, 1)), C, A)
        assert report.violated_eq == "dg_algebra"


class TestAdjunctionWitness:
    """Test cases for witnesses of the bijection."""

    def test_counit_witness_valid(self, witness):
        """Test f, g, theta and their correspondences."""
        report = witness.validate()
        assert report.is_valid, report.errors

    def test_counit_g_is_identity(self, witness):
        """Test that the counit witness carries g = id."""
        assert coalg_morphisms_equal(witness.g, identity_coalg_morphism(witness.C))
        assert witness.g.und(witness.C) == 0

    def test_make_witness_from_scaled_counit(self, dual_numbers):
        """Test completing a composite morphism to a witness."""
        base = counit_witness(dual_numbers)
        h, B = scaling_morphism(dual_numbers, [0, 1], 3)
        f = compose_alg_morphisms(base.f, h)
        witness = make_witness(base.C, B, f, cobar_cap=4, bar_cap=2)
        assert witness.validate().is_valid


class TestBijection:
    """Test cases for adjoint_fwd and adjoint_bwd."""

    def test_round_trips(self, witness):
        """Test bwd . fwd = id and fwd . bwd = id."""
        C, A, cobar, bar = witness.C, witness.A, witness.cobar(), witness.bar()
        rows = list(cobar.words.window(2))
        g = adjoint_fwd(witness.f, C, A, cobar=cobar, bar=bar)
        assert coalg_morphisms_equal(g, witness.g)
        assert alg_morphisms_equal(adjoint_bwd(g, C, A, cobar=cobar, bar=bar), witness.f, rows)

    def test_odd_scalar_travels(self, odd_witness):
        """Test that und f = 1 becomes w g0 = 1 and comes back."""
        C, A, cobar, bar = odd_witness.C, odd_witness.A, odd_witness.cobar(), odd_witness.bar()
        shifted = compose_alg_morphisms(odd_witness.f, identity_alg_morphism(A, und=1))
        assert validate_alg_morphism(shifted, cobar.algebra, A, window=cobar.window_rows()).is_valid
        g = adjoint_fwd(shifted, C, A, cobar=cobar, bar=bar)
        assert g.und(C) == 1
        assert validate_coalg_morphism(g, C, bar.coalgebra).is_valid
        back = adjoint_bwd(g, C, A, cobar=cobar, bar=bar)
        assert back.und == 1
        assert alg_morphisms_equal(back, shifted, list(cobar.words.window(2)))

    def test_bar_cap_below_conilpotency(self, dual_numbers):
        """Test that Bar A must hold the longest image word."""
        C = bar_object(dual_numbers, cap=3).coalgebra
        theta = TwistingCochain(theta=zero(C.C, dual_numbers.A, 1))
        with pytest.raises(CapTooSmall) as exc_info:
            tw_to_coalg(theta, C, dual_numbers, bar=bar_object(dual_numbers, cap=2))
        assert exc_info.value.required == 3

    def test_missing_certificate_computed(self, dual_coalg, dual_numbers):
        """Test that a coalgebra without a recorded index is certified on the fly."""
        C = dual_coalg.model_copy(update={"conilpotency_index": None})
        theta = TwistingCochain(theta=zero(C.C, dual_numbers.A, 1))
        g = tw_to_coalg(theta, C, dual_numbers, cap=2)
        assert validate_coalg_morphism(g, C, bar_object(dual_numbers, cap=2).coalgebra).is_valid


class TestTriangle:
    """Test cases for the three descriptions of the same data."""

    def test_cochain_to_both_sides(self, witness):
        """Test that theta determines f and g."""
        C, A, cobar, bar = witness.C, witness.A, witness.cobar(), witness.bar()
        rows = list(cobar.words.window(2))
        assert alg_morphisms_equal(tw_to_alg(witness.theta, C, A, cobar=cobar), witness.f, rows)
        assert coalg_morphisms_equal(tw_to_coalg(witness.theta, C, A, bar=bar), witness.g)

    def test_coalgebra_side_back_to_cochain(self, witness):
        """Test coalg_to_tw(g) = theta."""
        back = coalg_to_tw(witness.g, witness.C, witness.A, bar=witness.bar())
        assert maps_equal(back.theta, witness.theta.theta) is None


class TestNaturality:
    """Test cases for the naturality squares."""

    def test_naturality_in_algebra(self, witness, dual_numbers):
        """Test the square for a scaling h: A -> B."""
        h, B = scaling_morphism(dual_numbers, [0, 1], 3)
        report = check_naturality_in_A(h, witness.f, witness.C, dual_numbers, B)
        assert report.is_valid, report.errors

    def test_naturality_in_algebra_with_odd_scalar(self, odd_witness):
        """Test the square when h carries und = 1."""
        A = odd_witness.A
        h, B = scaling_morphism(A, [0, 1], 3)
        h = compose_alg_morphisms(h, identity_alg_morphism(B, und=1))
        report = check_naturality_in_A(h, odd_witness.f, odd_witness.C, A, B)
        assert report.is_valid, report.errors

    def test_naturality_in_coalgebra(self, dual_numbers):
        """Test the square for j = Bar h: Bar A' -> Bar A."""
        h, A = scaling_morphism(dual_numbers, [0, 1], 3)
        witness = counit_witness(A)
        j = bar_morphism(h, dual_numbers, A, cap=witness.bar_cap)
        C = bar_object(dual_numbers, cap=witness.bar_cap).coalgebra
        report = check_naturality_in_C(j, witness.f, C, witness.C, A)
        assert report.is_valid, report.errors


class TestSplitSystems:
    """Test cases for the split equation systems."""

    def test_counit_pair_satisfies_everything(self, witness):
        """Test that a genuine pair satisfies all four equations on both sides."""
        cobar, bar = witness.cobar(), witness.bar()
        alg_side = split_equations_alg(witness.f, cobar, witness.A)
        coalg_side = split_equations_coalg(witness.g, witness.C, bar)
        assert all(alg_side[label] for label in SYSTEM_LABELS)
        assert all(coalg_side[label] for label in SYSTEM_LABELS)
        assert check_system_equivalence(witness.f, witness.g, witness.C, witness.A, cobar, bar).is_valid

    @pytest.mark.slow
    def test_doubled_cochain_fails_on_both_sides(self, poly3):
        """Test that doubling the counit cochain of k[x]/(x^3) breaks the same equations on both sides."""
        witness = counit_witness(poly3)
        C, cobar, bar = witness.C, witness.cobar(), witness.bar()
        doubled = TwistingCochain(theta=witness.theta.theta.scale(2))
        f = tw_to_alg(doubled, C, poly3, cobar=cobar)
        g = tw_to_coalg(doubled, C, poly3, bar=bar)
        alg_side = split_equations_alg(f, cobar, poly3)
        assert not alg_side["a"]
        assert check_system_equivalence(f, g, C, poly3, cobar, bar).is_valid


class TestCurvedWitnesses:
    """Test cases for witnesses on curved algebras and coalgebras that are not augmented."""

    def test_curvature_line_pair(self, curvature_line_pair):
        """Test the witness of theta when both sides carry curvature."""
        C, A, theta = curvature_line_pair
        assert not is_ucdg(A)
        assert not is_ac(C)
        assert validate_twisting_cochain(theta, C, A).is_valid
        f = tw_to_alg(theta, C, A, cap=4)
        witness = make_witness(C, A, f, cobar_cap=4, bar_cap=2)
        report = witness.validate()
        assert report.is_valid, report.errors
        assert coalg_morphisms_equal(tw_to_coalg(theta, C, A, cap=2), witness.g)

    def test_curvature_line_round_trip(self, curvature_line_pair):
        """Test bwd . fwd = id on the curved pair."""
        C, A, theta = curvature_line_pair
        witness = make_witness(C, A, tw_to_alg(theta, C, A, cap=4), cobar_cap=4, bar_cap=2)
        cobar, bar = witness.cobar(), witness.bar()
        back = adjoint_bwd(witness.g, C, A, cobar=cobar, bar=bar)
        assert alg_morphisms_equal(back, witness.f, list(cobar.words.window(2)))

    @pytest.mark.parametrize("seed", range(4))
    def test_random_witnesses(self, fp7, odd7, seed):
        """Test generated witnesses over F_7 and the exterior ring."""
        for ring in (fp7, odd7):
            witness = gen_random_witness(seed, ring)
            assert witness.A.A.rank == 3
            assert witness.validate().is_valid

    @pytest.mark.parametrize("seed", range(4))
    def test_naturality_in_algebra_for_isomorphisms(self, fp7, odd7, seed):
        """Test the algebra square for a random isomorphism with a shear."""
        for ring in (fp7, odd7):
            witness = gen_random_witness(seed, ring)
            h, B = gen_random_algebra_iso(seed, witness.A)
            report = check_naturality_in_A(
                h, witness.f, witness.C, witness.A, B, cobar_cap=witness.cobar_cap, bar_cap=witness.bar_cap
            )
            assert report.is_valid, report.errors

    @pytest.mark.parametrize("seed", range(4))
    def test_naturality_in_coalgebra_for_isomorphisms(self, fp7, odd7, seed):
        """Test the coalgebra square for a random isomorphism j: S -> C."""
        for ring in (fp7, odd7):
            witness = gen_random_witness(seed, ring)
            j, S = gen_random_coalgebra_iso(seed, witness.C)
            report = check_naturality_in_C(
                j, witness.f, S, witness.C, witness.A, cobar_cap=witness.cobar_cap, bar_cap=witness.bar_cap
            )
            assert report.is_valid, report.errors

    def test_naturality_on_the_curved_pair(self, curvature_line_pair):
        """Test both squares on the curved pair, with a sheared algebra isomorphism."""
        C, A, theta = curvature_line_pair
        f = tw_to_alg(theta, C, A, cap=4)
        h, B = gen_random_algebra_iso(3, A)
        assert any(i != j for i, j, _ in h.f1.entries())
        assert check_naturality_in_A(h, f, C, A, B, cobar_cap=4, bar_cap=2).is_valid
        j, S = gen_random_coalgebra_iso(3, C)
        assert check_naturality_in_C(j, f, S, C, A, cobar_cap=4, bar_cap=2).is_valid
