"""Test suite for cli.py - the curvedalg command line."""

import json

import pytest
from click.testing import CliRunner

from src.curvedalg.adjoint import TwistingCochain, make_witness, tw_to_alg
from src.curvedalg.cli import EXIT_FAIL, EXIT_PARSE, EXIT_PASS, main
from src.curvedalg.gmod import zero
from src.curvedalg.models import (
    AlgMorphismModel,
    CACoalgebraModel,
    CoalgMorphismModel,
    MapModel,
    TwistingCochainModel,
    UCCAlgebraModel,
    dump_canonical,
)
from src.curvedalg.config import CAP_ENV_VAR
from src.curvedalg.suite import SuiteSummary, flip_unit_sign


@pytest.fixture
def runner():
    """Provide a click test runner."""
    return CliRunner()


@pytest.fixture
def write(tmp_path):
    """Provide a helper writing a bundle to a temporary file and returning its path."""

    def _write(name, model):
        path = tmp_path / name
        path.write_text(dump_canonical(model) if not isinstance(model, str) else model)
        return str(path)

    return _write


@pytest.fixture
def pair(write, dual_coalg, dual_numbers):
    """Provide files for the dual of k[x]/(x^2) and k[x]/(x^2) itself."""
    return write("coalg.json", CACoalgebraModel.from_domain(dual_coalg)), write(
        "alg.json", UCCAlgebraModel.from_domain(dual_numbers)
    )


@pytest.fixture
def zero_witness(dual_coalg, dual_numbers):
    """Provide the witness of the zero cochain on the dual pair."""
    theta = TwistingCochain(theta=zero(dual_coalg.C, dual_numbers.A, 1))
    f = tw_to_alg(theta, dual_coalg, dual_numbers, cap=4)
    return make_witness(dual_coalg, dual_numbers, f, cobar_cap=4, bar_cap=2)


class TestCheck:
    """Test cases for the check command."""

    def test_valid_algebra(self, runner, write, poly3):
        """Test exit code 0 and a passing JSON report."""
        result = runner.invoke(main, ["check", write("a.json", UCCAlgebraModel.from_domain(poly3))])
        assert result.exit_code == EXIT_PASS
        assert json.loads(result.output)["pass"] is True

    def test_broken_algebra(self, runner, write, poly3):
        """Test exit code 1 and the violated equation."""
        path = write("a.json", UCCAlgebraModel.from_domain(flip_unit_sign(poly3)))
        result = runner.invoke(main, ["check", path])
        assert result.exit_code == EXIT_FAIL
        report = json.loads(result.output)
        assert report["violated_eq"] == "associativity"
        assert len(report["witness_word"]) == 2

    def test_unparseable_file(self, runner, write):
        """Test exit code 2 on malformed input."""
        result = runner.invoke(main, ["check", write("bad.json", '{"type": "ucc_algebra"}')])
        assert result.exit_code == EXIT_PARSE
        assert "parse error" in result.output


class TestConstructions:
    """Test cases for the bar and cobar commands."""

    def test_bar(self, runner, write, dual_numbers, tmp_path):
        """Test that bar writes a coalgebra bundle that checks."""
        out = tmp_path / "bar.json"
        path = write("a.json", UCCAlgebraModel.from_domain(dual_numbers))
        result = runner.invoke(main, ["bar", path, "--cap", "2", "-o", str(out)])
        assert result.exit_code == EXIT_PASS
        data = json.loads(out.read_text())
        assert data["type"] == "ca_coalgebra"
        assert data["truncation"]["cap"] == 2
        assert runner.invoke(main, ["check", str(out)]).exit_code == EXIT_PASS

    def test_bar_default_cap_from_group_option(self, runner, write, dual_numbers):
        """Test that the group --cap feeds the default truncation."""
        path = write("a.json", UCCAlgebraModel.from_domain(dual_numbers))
        result = runner.invoke(main, ["--cap", "3", "bar", path])
        assert result.exit_code == EXIT_PASS
        assert json.loads(result.output)["truncation"]["cap"] == 3

    def test_bar_cap_too_small(self, runner, write, dual_numbers):
        """Test exit code 2 and the required minimum."""
        path = write("a.json", UCCAlgebraModel.from_domain(dual_numbers))
        result = runner.invoke(main, ["bar", path, "--cap", "1"])
        assert result.exit_code == EXIT_PARSE
        assert "required cap 2" in result.output

    def test_bar_rejects_coalgebra(self, runner, pair):
        """Test that bar needs an algebra bundle."""
        coalg_path, _ = pair
        assert runner.invoke(main, ["bar", coalg_path]).exit_code == EXIT_PARSE

    def test_cobar(self, runner, pair):
        """Test that cobar writes an algebra bundle with its window."""
        coalg_path, _ = pair
        result = runner.invoke(main, ["cobar", coalg_path])
        assert result.exit_code == EXIT_PASS
        data = json.loads(result.output)
        assert data["type"] == "ucc_algebra"
        assert data["truncation"]["window_rows"] == [0, 1]

    def test_cobar_cap_too_small(self, runner, pair):
        """Test exit code 2 below cap 4."""
        coalg_path, _ = pair
        result = runner.invoke(main, ["cobar", coalg_path, "--cap", "3"])
        assert result.exit_code == EXIT_PARSE


class TestAdjunctionCommands:
    """Test cases for the adjoint and tw commands."""

    def test_needs_one_direction(self, runner, pair):
        """Test that exactly one of --fwd and --bwd is required."""
        coalg_path, alg_path = pair
        result = runner.invoke(main, ["adjoint", "--coalg", coalg_path, "--alg", alg_path])
        assert result.exit_code == EXIT_PARSE

    def test_forward(self, runner, write, pair, zero_witness):
        """Test that --fwd emits a coalgebra morphism into the bar construction."""
        coalg_path, alg_path = pair
        f_path = write("f.json", AlgMorphismModel.from_domain(zero_witness.f))
        result = runner.invoke(main, ["adjoint", "--coalg", coalg_path, "--alg", alg_path, "--fwd", f_path])
        assert result.exit_code == EXIT_PASS
        data = json.loads(result.output)
        assert data["type"] == "coalg_morphism"
        assert data["g1"] == json.loads(dump_canonical(MapModel.from_map(zero_witness.g.g1)))

    def test_backward(self, runner, write, pair, zero_witness):
        """Test that --bwd emits an algebra morphism out of the cobar construction."""
        coalg_path, alg_path = pair
        g_path = write("g.json", CoalgMorphismModel.from_domain(zero_witness.g))
        result = runner.invoke(main, ["adjoint", "--coalg", coalg_path, "--alg", alg_path, "--bwd", g_path])
        assert result.exit_code == EXIT_PASS
        assert json.loads(result.output)["type"] == "alg_morphism"

    def test_tw_from_theta(self, runner, write, pair, dual_coalg, dual_numbers, tmp_path):
        """Test that a cochain completes to a witness that checks."""
        coalg_path, alg_path = pair
        theta = TwistingCochainModel(theta=MapModel.from_map(zero(dual_coalg.C, dual_numbers.A, 1)))
        out = tmp_path / "witness.json"
        result = runner.invoke(
            main, ["tw", "--from", "theta", write("t.json", theta), "--coalg", coalg_path, "--alg", alg_path, "-o", str(out)]
        )
        assert result.exit_code == EXIT_PASS
        assert json.loads(out.read_text())["type"] == "adjunction_witness"
        assert runner.invoke(main, ["check", str(out)]).exit_code == EXIT_PASS

    def test_tw_wrong_bundle(self, runner, pair):
        """Test that --from theta refuses an algebra bundle."""
        coalg_path, alg_path = pair
        result = runner.invoke(main, ["tw", "--from", "theta", alg_path, "--coalg", coalg_path, "--alg", alg_path])
        assert result.exit_code == EXIT_PARSE


class TestRandomAndSelftest:
    """Test cases for the random and selftest commands."""

    def test_random_algebra_checks(self, runner, tmp_path):
        """Test that a random algebra bundle validates."""
        out = tmp_path / "r.json"
        result = runner.invoke(main, ["random", "--seed", "3", "--ring", "odd_exterior:7", "-o", str(out)])
        assert result.exit_code == EXIT_PASS
        assert runner.invoke(main, ["check", str(out)]).exit_code == EXIT_PASS

    def test_random_is_deterministic(self, runner):
        """Test that the same seed prints the same bundle."""
        args = ["random", "--kind", "coalgebra", "--seed", "5", "--dims", "2"]
        assert runner.invoke(main, args).output == runner.invoke(main, args).output

    def test_bad_ring_descriptor(self, runner):
        """Test exit code 2 on an unknown ring."""
        assert runner.invoke(main, ["random", "--ring", "rationals"]).exit_code == EXIT_PARSE

    def test_zero_cases_warns(self, runner):
        """Test that an empty run passes with a warning."""
        result = runner.invoke(main, ["selftest", "--cases", "0"])
        assert result.exit_code == EXIT_PASS
        assert "zero cases" in result.output

    def test_selftest_bar_cap_too_small(self, runner):
        """Test that a bar cap below 2 is a usage error naming the minimum."""
        result = runner.invoke(main, ["selftest", "--cases", "0", "--bar-cap", "1"])
        assert result.exit_code == EXIT_PARSE
        assert "required cap 2" in result.output

    def test_selftest_bar_cap_defaults_to_configured_cap(self, runner, mocker, monkeypatch):
        """Test that the suite gets cap 6 unless --cap or --bar-cap says otherwise."""
        monkeypatch.delenv(CAP_ENV_VAR, raising=False)
        run = mocker.patch("src.curvedalg.cli.run_suite", return_value=SuiteSummary(seed=1, cases=0, rings=[], tallies=[]))
        assert runner.invoke(main, ["selftest", "--cases", "0"]).exit_code == EXIT_PASS
        assert run.call_args.args[3].bar_cap == 6
        runner.invoke(main, ["--cap", "5", "selftest", "--cases", "0"])
        assert run.call_args.args[3].bar_cap == 5
        runner.invoke(main, ["selftest", "--cases", "0", "--bar-cap", "3"])
        assert run.call_args.args[3].bar_cap == 3

    def test_random_witness_checks(self, runner, tmp_path):
        """Test that a random witness bundle validates."""
        out = tmp_path / "w.json"
        result = runner.invoke(main, ["random", "--kind", "witness", "--seed", "2", "-o", str(out)])
        assert result.exit_code == EXIT_PASS
        assert runner.invoke(main, ["check", str(out)]).exit_code == EXIT_PASS

    def test_selftest_json(self, runner):
        """Test the JSON summary of an empty run."""
        result = runner.invoke(main, ["selftest", "--cases", "0", "--json", "--ring", "prime_field:7"])
        summary = json.loads(result.output[result.output.index("{"):])
        assert summary["rings"] == ["prime_field:7"]

    @pytest.mark.slow
    def test_injected_fault_fails(self, runner):
        """Test that a flipped sign makes the suite exit 1."""
        result = runner.invoke(main, ["selftest", "--cases", "1", "--ring", "prime_field:7", "--inject-fault"])
        assert result.exit_code == EXIT_FAIL
        assert "FAIL" in result.output
