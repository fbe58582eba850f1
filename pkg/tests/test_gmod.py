"""Test suite for gmod.py - graded modules, graded maps and the Koszul sign rule."""

import pytest
from hypothesis import given
from hypothesis import strategies as st

from src.curvedalg.exceptions import PositionOutOfRange, RingMismatch, ShapeMismatch
from src.curvedalg.gmod import (
    GradedMap,
    GradedModule,
    base_module,
    dual_module,
    from_entries,
    ground_module,
    identity,
    invert_diagonal,
    koszul_sign_oracle,
    maps_equal,
    power_rows,
    scalar_map,
    shift_module,
    sigma,
    sigma_power_inverse,
    tensor_map,
    tensor_maps,
    tensor_module,
    tensor_power,
    tensor_power_module,
    transpose,
    zero,
)
from src.curvedalg.gring import RingDescriptor

F7 = RingDescriptor.parse("prime_field:7")


def _odd_map(degree_in: int = 1) -> GradedMap:
    """Degree-1 map sending a single generator of degree d to one of degree d + 1."""
    return GradedMap(base_module(F7, [degree_in]), base_module(F7, [degree_in + 1]), 1, rows={0: {0: 1}})


class TestGradedModule:
    """Test cases for GradedModule shapes."""

    def test_base_module_rank_and_degrees(self, fp7):
        """Test rank and degree lookup of a base module."""
        M = base_module(fp7, [0, 1, 3])
        assert M.rank == 3
        assert M.degrees() == (0, 1, 3)
        assert M.degree(2) == 3

    def test_tensor_degrees_add(self, fp7):
        """Test that tensor basis degrees are sums in lexicographic order."""
        M = base_module(fp7, [0, 1])
        N = base_module(fp7, [2, 5])
        assert tensor_module(M, N).degrees() == (2, 5, 3, 6)

    def test_ground_factors_dropped(self, fp7):
        """Test k (x) M == M."""
        M = base_module(fp7, [0, 1])
        assert tensor_module(ground_module(fp7), M) == M
        assert tensor_module(M, ground_module(fp7)) == M
        assert tensor_power_module(M, 0) == ground_module(fp7)
        assert tensor_power_module(M, 1) == M

    def test_split_and_join(self, fp7):
        """Test mixed-radix index decomposition."""
        M = tensor_power_module(base_module(fp7, [0, 1, 2]), 3)
        assert M.split(M.join((2, 0, 1))) == (2, 0, 1)
        assert M.join((1, 2, 0)) == 1 * 9 + 2 * 3

    def test_shift_lowers_degrees(self, fp7):
        """Test M[a]^k = M^{a+k}."""
        assert shift_module(base_module(fp7, [0, 1]), 1).degrees() == (-1, 0)

    def test_dual_negates(self, fp7):
        """Test that the dual module negates degrees."""
        assert dual_module(base_module(fp7, [0, 1])).degrees() == (0, -1)

    def test_mixed_rings_rejected(self, fp7, odd7):
        """Test that modules over different rings cannot be tensored."""
        with pytest.raises(RingMismatch):
            tensor_module(base_module(fp7, [0]), base_module(odd7, [1]))

    def test_tensor_module_needs_two_factors(self, fp7):
        """Test the factors validator."""
        with pytest.raises(ValueError):
            GradedModule(ring=fp7, factors=(base_module(fp7, [0]),))


class TestGradedMap:
    """Test cases for GradedMap construction and algebra."""

    def test_entries_reduced_mod_p(self, fp7):
        """Test that coefficients are stored reduced."""
        M = base_module(fp7, [0])
        f = GradedMap(M, M, 0, rows={0: {0: -1}})
        assert f.entry(0, 0) == 6
        assert f.entries() == [(0, 0, 6)]

    def test_unrealizable_entry_rejected(self, fp7):
        """Test that an entry needing a degree-1 scalar is rejected over F_p."""
        with pytest.raises(ShapeMismatch):
            GradedMap(base_module(fp7, [0]), base_module(fp7, [0]), 1, rows={0: {0: 1}})

    def test_odd_scalar_entry_accepted(self, odd7):
        """Test that a degree-1 map between degree-0 generators is realizable over the exterior ring."""
        f = GradedMap(base_module(odd7, [0]), base_module(odd7, [0]), 1, rows={0: {0: 1}})
        assert f.entry_degree(0, 0) == 1

    def test_out_of_range_column_rejected(self, fp7):
        """Test the column range check."""
        with pytest.raises(ShapeMismatch):
            GradedMap(base_module(fp7, [0]), base_module(fp7, [0]), 0, rows={0: {3: 1}})

    def test_compose_is_first_then_second(self, fp7):
        """Test that f @ g applies f first."""
        M = base_module(fp7, [0, 0])
        f = from_entries(M, M, 0, [(0, 1, 2)])
        g = from_entries(M, M, 0, [(1, 0, 3)])
        assert (f @ g).entries() == [(0, 0, 6)]
        assert (g @ f).entries() == [(1, 1, 6)]

    def test_compose_shape_mismatch(self, fp7):
        """Test that non-composable maps raise."""
        with pytest.raises(ShapeMismatch):
            identity(base_module(fp7, [0])) @ identity(base_module(fp7, [0, 1]))

    def test_add_and_subtract(self, fp7):
        """Test f - f = 0."""
        M = base_module(fp7, [0, 1])
        f = from_entries(M, M, 0, [(0, 0, 3), (1, 1, 4)])
        assert maps_equal(f - f, zero(M, M, 0)) is None
        assert (f + f).entry(1, 1) == 1

    def test_add_degree_mismatch(self, fp7):
        """Test that maps of different degrees cannot be added."""
        M = base_module(fp7, [0, 1])
        with pytest.raises(ShapeMismatch):
            zero(M, M, 0) + zero(M, M, 1)

    def test_maps_equal_reports_first_difference(self, fp7):
        """Test the witness of maps_equal."""
        M = base_module(fp7, [0, 0])
        f = from_entries(M, M, 0, [(1, 0, 1)])
        assert maps_equal(f, zero(M, M, 0)) == (1, 0)
        assert maps_equal(f, zero(M, M, 0), rows=[0]) is None
        assert maps_equal(f, zero(M, base_module(fp7, [0]), 0)) == (-1, -1)

    def test_scalar_map(self, even7):
        """Test scalar maps on the ground ring."""
        u = scalar_map(even7, 3, 2)
        assert u.entry(0, 0) == 3
        with pytest.raises(ShapeMismatch):
            scalar_map(even7, 1, 1)

    def test_invert_diagonal(self, fp7):
        """Test inversion of a diagonal unit map."""
        M = base_module(fp7, [0, 1])
        f = from_entries(M, M, 0, [(0, 0, 2), (1, 1, 3)])
        assert maps_equal(f @ invert_diagonal(f), identity(M)) is None

    def test_invert_rejects_non_monomial(self, fp7):
        """Test that a map with two entries in a row cannot be inverted."""
        M = base_module(fp7, [0, 0])
        with pytest.raises(ShapeMismatch):
            invert_diagonal(from_entries(M, M, 0, [(0, 0, 1), (0, 1, 1), (1, 1, 1)]))

    def test_transpose_lands_between_duals(self, fp7):
        """Test the domain and codomain of a transpose."""
        M = base_module(fp7, [0, 1])
        f = from_entries(M, M, 0, [(1, 1, 2)])
        t = transpose(f)
        assert t.dom == dual_module(M)
        assert t.entries() == [(1, 1, 2)]


class TestKoszulSigns:
    """Test cases for tensor products of maps and the sign oracle."""

    def test_odd_map_past_odd_letter(self):
        """Test (f (x) g)(x (x) y) = -f(x) (x) g(y) for odd f, g and odd y."""
        f = _odd_map(1)
        product = tensor_map(f, f)
        assert product.entry(0, 0) == F7.reduce(-1)

    def test_even_map_has_no_sign(self):
        """Test that degree-0 maps never produce signs."""
        M = base_module(F7, [1, 3])
        f = identity(M)
        assert tensor_map(f, f).entries() == [(i, i, 1) for i in range(4)]

    def test_oracle_agrees_with_tensor_map(self):
        """Test that the transposition count matches tensor_map on two odd operators."""
        f = _odd_map(1)
        expected = koszul_sign_oracle([1, 1], [1, 1], [1, 2])
        assert tensor_map(f, f).entry(0, 0) == F7.reduce(expected)

    def test_oracle_single_operator(self):
        """Test a single operator moving past the letters to its right."""
        assert koszul_sign_oracle([1, 1, 1], [1], [1]) == 1
        assert koszul_sign_oracle([0, 1, 1], [1], [2]) == -1
        assert koszul_sign_oracle([1, 1], [2], [1]) == 1

    def test_oracle_rejects_bad_positions(self):
        """Test position validation."""
        with pytest.raises(PositionOutOfRange):
            koszul_sign_oracle([1, 1], [1, 1], [2, 1])
        with pytest.raises(PositionOutOfRange):
            koszul_sign_oracle([1], [1], [2])
        with pytest.raises(PositionOutOfRange):
            koszul_sign_oracle([1], [1, 1], [1])

    @given(st.lists(st.integers(0, 3), min_size=1, max_size=5), st.data())
    def test_oracle_sign_is_unit(self, word, data):
        """Test that the oracle always returns +-1."""
        position = data.draw(st.integers(1, len(word)))
        degree = data.draw(st.integers(0, 3))
        assert koszul_sign_oracle(word, [degree], [position]) in (1, -1)

    @given(st.lists(st.integers(0, 3), min_size=1, max_size=5), st.data())
    def test_oracle_single_operator_parity(self, word, data):
        """Test that one operator picks up the parity of the letters after its position."""
        position = data.draw(st.integers(1, len(word)))
        degree = data.draw(st.integers(0, 3))
        tail = sum(word[position:])
        expected = -1 if (degree * tail) % 2 else 1
        assert koszul_sign_oracle(word, [degree], [position]) == expected

    @given(st.lists(st.integers(-2, 3), min_size=1, max_size=5), st.data())
    def test_tensor_maps_agree_with_oracle(self, word, data):
        """Test the folded tensor product against transposition counting on random words."""
        positions = data.draw(st.lists(st.integers(1, len(word)), unique=True).map(sorted))
        operator_degrees = [data.draw(st.integers(0, 3)) for _ in positions]
        degree_at = dict(zip(positions, operator_degrees))
        maps = []
        for q, w in enumerate(word, start=1):
            d = degree_at.get(q, 0)
            maps.append(GradedMap(base_module(F7, [w]), base_module(F7, [w + d]), d, rows={0: {0: 1}}))
        expected = koszul_sign_oracle(word, operator_degrees, positions)
        product = tensor_maps(maps)
        assert product.deg == sum(operator_degrees)
        assert product.entries() == [(0, 0, F7.reduce(expected))]


class TestSuspension:
    """Test cases for the suspension maps."""

    def test_sigma_degree(self, fp7):
        """Test that sigma^a has degree -a and lands in M[a]."""
        M = base_module(fp7, [0, 1])
        s = sigma(M, 1)
        assert s.deg == -1
        assert s.cod == shift_module(M, 1)

    def test_sigma_power_inverse(self, fp7):
        """Test that sigma_power_inverse undoes the tensor power of sigma."""
        M = base_module(fp7, [0, 1])
        for n in (1, 2, 3):
            forward = tensor_power(sigma(M, 1), n)
            back = sigma_power_inverse(M, 1, n)
            assert maps_equal(forward @ back, identity(tensor_power_module(M, n))) is None

    def test_power_rows_window(self, fp7):
        """Test that power_rows only keeps words in the window."""
        M = base_module(fp7, [0, 1, 2])
        assert power_rows(M, 2, [0, 1]) == [0, 1, 3, 4]
        assert power_rows(M, 0) == [0]
