"""Command line front end.

Exit codes are shared by every command: 0 when the checked or produced object passes
validation, 1 on an axiom failure, 2 when the input cannot be parsed or the request is
malformed (unknown bundle type, cap below the minimum).
"""

import json
import logging
from pathlib import Path
from typing import Optional

import click
from pydantic import BaseModel

from .adjoint import (
    AdjunctionWitness,
    adjoint_bwd,
    adjoint_fwd,
    coalg_to_tw,
    make_witness,
    tw_to_alg,
)
from .barcobar import BAR_MIN_CAP, COBAR_MIN_CAP, bar_object, cobar_object
from .config import Settings
from .curved import validate_alg_morphism, validate_coalg_morphism, validate_ucc_algebra
from .exceptions import CapTooSmall, CurvedAlgError, ParseError
from .generators import gen_random_ca_coalgebra, gen_random_ucc_algebra, gen_random_witness
from .gring import RingDescriptor
from .models import (
    AdjunctionWitnessModel,
    AlgMorphismModel,
    CACoalgebraModel,
    CoalgMorphismModel,
    TwistingCochainModel,
    UCCAlgebraModel,
    bar_to_model,
    cobar_to_model,
    dump_canonical,
    load_as,
    load_bundle,
)
from .report import ValidationReport
from .suite import DEFAULT_RINGS, SuiteOptions, run_suite

logger = logging.getLogger(__name__)

EXIT_PASS = 0
EXIT_FAIL = 1
EXIT_PARSE = 2


def _abort(message: str, code: int):
    click.echo(message, err=True)
    raise SystemExit(code)


def _read(path: str) -> str:
    return Path(path).read_text()


def _emit(model: BaseModel, output: Optional[str]):
    text = dump_canonical(model)
    if output:
        Path(output).write_text(text)
        logger.info(f"wrote {model.type} to {output}")
    else:
        click.echo(text)


def _require_pass(report: ValidationReport, what: str):
    if not report.is_valid:
        click.echo(json.dumps(report.to_dict(), sort_keys=True))
        _abort(f"{what} failed validation at {report.violated_eq}", EXIT_FAIL)


def _parse_ring(ctx, param, value):
    try:
        return RingDescriptor.parse(value)
    except (ValueError, IndexError) as e:
        raise click.BadParameter(f"{value!r} is not a ring descriptor: {e}")


class _Failures:
    """Map library errors onto exit codes."""

    def __enter__(self):
        return self

    def __exit__(self, exc_type, exc, tb):
        if exc is None:
            return False
        if isinstance(exc, ParseError):
            _abort(f"parse error: {exc}", EXIT_PARSE)
        if isinstance(exc, CapTooSmall):
            _abort(f"cap too small: {exc} (required cap {exc.required})", EXIT_PARSE)
        if isinstance(exc, CurvedAlgError):
            _abort(f"{type(exc).__name__}: {exc}", EXIT_FAIL)
        return False


@click.group()
@click.option("--verbose", is_flag=True, help="Log construction details to stderr")
@click.option("--cap", "default_cap", type=int, default=None, help="Default truncation cap for this run")
def main(verbose: bool, default_cap: Optional[int]):
    """Curved algebras, curved coalgebras and the bar-cobar adjunction."""
    if verbose:
        logging.basicConfig(level=logging.DEBUG, format="%(levelname)s %(name)s: %(message)s")
    if default_cap is not None:
        Settings.set_default_cap(default_cap)


@main.command()
@click.argument("path", type=click.Path(exists=True, dir_okay=False))
def check(path: str):
    """Validate any bundle and print a JSON report."""
    with _Failures():
        model = load_bundle(_read(path))
        report = model.check()
    click.echo(json.dumps(report.to_dict(), sort_keys=True))
    raise SystemExit(EXIT_PASS if report.is_valid else EXIT_FAIL)


@main.command()
@click.argument("path", type=click.Path(exists=True, dir_okay=False))
@click.option("--cap", type=int, default=None, help="Maximal word length (at least 2)")
@click.option("-o", "--output", type=click.Path(), help="Output file (default: stdout)")
def bar(path: str, cap: Optional[int], output: Optional[str]):
    """Truncated bar construction of an algebra bundle."""
    with _Failures():
        alg = load_as(_read(path), [UCCAlgebraModel]).to_domain()
        _require_pass(validate_ucc_algebra(alg), "input algebra")
        result = bar_object(alg, cap=cap)
        _require_pass(result.validate(), "bar construction")
    _emit(bar_to_model(result), output)


@main.command()
@click.argument("path", type=click.Path(exists=True, dir_okay=False))
@click.option("--cap", type=int, default=COBAR_MIN_CAP, show_default=True, help="Maximal word length")
@click.option("-o", "--output", type=click.Path(), help="Output file (default: stdout)")
def cobar(path: str, cap: int, output: Optional[str]):
    """Truncated cobar construction of a coalgebra bundle."""
    with _Failures():
        model = load_as(_read(path), [CACoalgebraModel])
        _require_pass(model.check(), "input coalgebra")
        result = cobar_object(model.to_domain(), cap=cap)
        _require_pass(result.validate(), "cobar construction")
    _emit(cobar_to_model(result), output)


@main.command()
@click.option("--coalg", "coalg_path", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--alg", "alg_path", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--fwd", "fwd_path", type=click.Path(exists=True, dir_okay=False), help="Morphism Cobar C -> A")
@click.option("--bwd", "bwd_path", type=click.Path(exists=True, dir_okay=False), help="Morphism C -> Bar A")
@click.option("--cobar-cap", type=int, default=COBAR_MIN_CAP, show_default=True)
@click.option("--bar-cap", type=int, default=2, show_default=True)
@click.option("-o", "--output", type=click.Path(), help="Output file (default: stdout)")
def adjoint(
    coalg_path: str,
    alg_path: str,
    fwd_path: Optional[str],
    bwd_path: Optional[str],
    cobar_cap: int,
    bar_cap: int,
    output: Optional[str],
):
    """Transport a morphism across the adjunction."""
    if (fwd_path is None) == (bwd_path is None):
        _abort("give exactly one of --fwd and --bwd", EXIT_PARSE)
    with _Failures():
        C_model = load_as(_read(coalg_path), [CACoalgebraModel])
        A_model = load_as(_read(alg_path), [UCCAlgebraModel])
        C, A = C_model.to_domain().with_index(), A_model.to_domain()
        cobar_result = cobar_object(C, cap=cobar_cap)
        bar_result = bar_object(A, cap=bar_cap)
        bar_model = bar_to_model(bar_result)
        if fwd_path:
            f = load_as(_read(fwd_path), [AlgMorphismModel]).to_domain()
            _require_pass(
                validate_alg_morphism(f, cobar_result.algebra, A, window=cobar_result.window_rows()), "input morphism"
            )
            g = adjoint_fwd(f, C, A, cobar=cobar_result, bar=bar_result)
            _require_pass(validate_coalg_morphism(g, C, bar_result.coalgebra), "transported morphism")
            out = CoalgMorphismModel.from_domain(g, source=C_model, target=bar_model)
        else:
            g = load_as(_read(bwd_path), [CoalgMorphismModel]).to_domain()
            _require_pass(validate_coalg_morphism(g, C, bar_result.coalgebra), "input morphism")
            f = adjoint_bwd(g, C, A, cobar=cobar_result, bar=bar_result)
            _require_pass(
                validate_alg_morphism(f, cobar_result.algebra, A, window=cobar_result.window_rows()),
                "transported morphism",
            )
            out = AlgMorphismModel.from_domain(f, target=A_model)
    _emit(out, output)


@main.command()
@click.option(
    "--from", "source", required=True, type=click.Choice(["alg", "coalg", "theta"]), help="Which corner is given"
)
@click.argument("path", type=click.Path(exists=True, dir_okay=False))
@click.option("--coalg", "coalg_path", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--alg", "alg_path", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--cobar-cap", type=int, default=COBAR_MIN_CAP, show_default=True)
@click.option("--bar-cap", type=int, default=2, show_default=True)
@click.option("-o", "--output", type=click.Path(), help="Output file (default: stdout)")
def tw(
    source: str,
    path: str,
    coalg_path: str,
    alg_path: str,
    cobar_cap: int,
    bar_cap: int,
    output: Optional[str],
):
    """Complete one corner of the twisting-cochain triangle to a full adjunction witness."""
    with _Failures():
        C = load_as(_read(coalg_path), [CACoalgebraModel]).to_domain().with_index()
        A = load_as(_read(alg_path), [UCCAlgebraModel]).to_domain()
        cobar_result = cobar_object(C, cap=cobar_cap)
        text = _read(path)
        if source == "alg":
            f = load_as(text, [AlgMorphismModel]).to_domain()
        elif source == "coalg":
            g = load_as(text, [CoalgMorphismModel]).to_domain()
            theta = coalg_to_tw(g, C, A, bar=bar_object(A, cap=bar_cap))
            f = tw_to_alg(theta, C, A, cobar=cobar_result)
        else:
            theta = load_as(text, [TwistingCochainModel]).to_domain()
            f = tw_to_alg(theta, C, A, cobar=cobar_result)
        witness = make_witness(C, A, f, cobar_cap=cobar_cap, bar_cap=bar_cap)
        _require_pass(witness.validate(), "adjunction witness")
    _emit(AdjunctionWitnessModel.from_domain(witness), output)


@main.command(name="random")
@click.option(
    "--kind", type=click.Choice(["algebra", "coalgebra", "witness"]), default="algebra", show_default=True
)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--ring", default="prime_field:7", show_default=True, callback=_parse_ring)
@click.option("--dims", type=int, default=3, show_default=True, help="Rank of the underlying module")
@click.option("--flat", is_flag=True, help="Algebras only: m1^2 = 0 and pr m0 = 0")
@click.option("--augmented", is_flag=True, help="Algebras only: multiplicative splitting")
@click.option("-o", "--output", type=click.Path(), help="Output file (default: stdout)")
def random_instance(
    kind: str, seed: int, ring: RingDescriptor, dims: int, flat: bool, augmented: bool, output: Optional[str]
):
    """Write a seeded random instance."""
    with _Failures():
        if kind == "algebra":
            out = UCCAlgebraModel.from_domain(gen_random_ucc_algebra(seed, ring, dims, flat=flat, augmented=augmented))
        elif kind == "coalgebra":
            out = CACoalgebraModel.from_domain(gen_random_ca_coalgebra(seed, ring, dims))
        else:
            witness: AdjunctionWitness = gen_random_witness(seed, ring, dims)
            out = AdjunctionWitnessModel.from_domain(witness)
    _emit(out, output)


@main.command()
@click.option("--seed", type=int, default=1, show_default=True)
@click.option("--cases", type=click.IntRange(min=0), default=5, show_default=True)
@click.option("--ring", "rings", multiple=True, help="Ring descriptor; repeat for several (default: one of each kind)")
@click.option("--bar-cap", type=int, default=None, help="Bar word length (default: the configured cap)")
@click.option("--json", "as_json", is_flag=True, help="Print the summary as JSON")
@click.option("--inject-fault", is_flag=True, hidden=True)
def selftest(seed: int, cases: int, rings: tuple, bar_cap: Optional[int], as_json: bool, inject_fault: bool):
    """Run the seeded property suite."""
    bar_cap = bar_cap if bar_cap is not None else Settings.get_default_cap()
    if bar_cap < BAR_MIN_CAP:
        _abort(f"cap too small: bar cap {bar_cap} (required cap {BAR_MIN_CAP})", EXIT_PARSE)
    for r in rings:
        _parse_ring(None, None, r)
    if cases == 0:
        click.echo("warning: zero cases requested, the suite passes vacuously", err=True)
    opts = SuiteOptions(bar_cap=bar_cap, inject_fault=inject_fault)
    summary = run_suite(seed, cases, list(rings) or list(DEFAULT_RINGS), opts)
    if as_json:
        click.echo(summary.model_dump_json())
    else:
        click.echo(f"seed {summary.seed}, {summary.cases} cases, rings {', '.join(summary.rings)}")
        for tally in summary.tallies:
            total = tally.passed + tally.failed
            mark = "ok" if tally.failed == 0 else "FAIL"
            click.echo(f"  {tally.name:<26} {tally.passed}/{total} {mark}")
            if tally.counts:
                click.echo("    " + ", ".join(f"{key} {n}" for key, n in sorted(tally.counts.items())))
            if tally.first_failure:
                click.echo(f"    first failure: {json.dumps(tally.first_failure, sort_keys=True)}")
    raise SystemExit(EXIT_PASS if summary.ok else EXIT_FAIL)
