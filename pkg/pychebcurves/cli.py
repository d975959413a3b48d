"""
cli.py

The `chebcurves` command line. Every subcommand computes a result payload,
wraps it in a `ReportEnvelope` together with the parameters and the
configuration snapshot, and prints it as a table, JSON or CSV.

Exit codes: 0 on success, 2 when a computed result deviates from the
predicted one (the data is still printed), 1 on errors and 64 on bad
usage.
"""

import json
import sys
import time
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from logging import getLogger
from typing import Any, Dict, List, Optional, Sequence

import click
import pandas as pd

from pychebcurves import routines
from pychebcurves.autgroup import (
    DISTINGUISH_MODES,
    affine_twist_search,
    affine_twists_as_expected,
    char5_order3_witness,
    compute_aut,
    distinguish_pair,
    inversion_twist_search,
    order3_family_search,
    order3_witness,
    quarter_case_grid,
    quartic_aut_grid,
    scan_expectation,
)
from pychebcurves.chebyshev import (
    ChebSpec,
    chebyshev_poly,
    closed_form,
    integer_coefficients,
    verify_exceptional_identity,
    verify_fermat_identity,
    verify_laurent_identity,
    verify_order3_identity,
    verify_quartic_root_identity,
)
from pychebcurves.config import OUTPUT_FORMATS, RunConfig, current, set_current
from pychebcurves.ff import make_field, prime_power_exponent, split_prime_power
from pychebcurves.moebius import ProjPoint1, fingerprint, generating_set, setwise_stabilizer
from pychebcurves.plane_curve import (
    PlaneCurve,
    SuperellipticCurve,
    count_points,
    is_maximal,
    j_invariant_quartic,
    j_invariant_rational,
    total_inflections,
)
from pychebcurves.poly import Poly, roots_in_field, splitting_degree

logger = getLogger("pychebcurves.cli")

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_DEVIATION = 2
EXIT_USAGE = 64

VERIFY_CHOICES = (
    "laurent",
    "exceptional",
    "quartic-root",
    "fermat",
    "order3",
    "char5",
    "pair",
    "quartic-grid",
    "quarter-grid",
    "affine-twists",
    "inversion-twists",
    "order3-family",
)


@dataclass
class ReportEnvelope:
    """
    Everything needed to reproduce a result: command, parameters and the
    configuration snapshot. `wall_time` is only filled in on request so
    that repeated runs print identical JSON.
    """

    command: str
    parameters: Dict[str, Any]
    config: Dict[str, Any]
    result: Dict[str, Any]
    deviations: List[str] = dc_field(default_factory=list)
    wall_time: Optional[float] = None

    def to_dict(self) -> Dict[str, Any]:
        data = {
            "command": self.command,
            "parameters": self.parameters,
            "config": self.config,
            "result": self.result,
            "deviations": list(self.deviations),
        }
        if self.wall_time is not None:
            data["wall_time"] = self.wall_time
        return data


@dataclass
class _State:
    config: RunConfig
    timing: bool
    started: float
    report_path: Optional[str] = None


def _parse_ints(text: str) -> List[int]:
    try:
        return [int(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise click.BadParameter(f"expected comma-separated integers, got {text!r}")


def _render_table(envelope: ReportEnvelope, frame: Optional[pd.DataFrame]) -> str:
    lines = [f"command: {envelope.command}"]
    lines.extend(f"{key}: {value}" for key, value in sorted(envelope.parameters.items()))
    if frame is None:
        flat = pd.json_normalize(envelope.result, sep=".")
        lines.append(flat.T.to_string(header=False))
    else:
        lines.append(frame.to_string(index=False))
    for message in envelope.deviations:
        lines.append(f"DEVIATION: {message}")
    if envelope.wall_time is not None:
        lines.append(f"wall time: {envelope.wall_time:.3f} s")
    return "\n".join(lines)


def _envelope(
    state: _State, command: str, parameters: Dict[str, Any], result: Dict[str, Any], deviations: Sequence[str]
) -> ReportEnvelope:
    envelope = ReportEnvelope(
        command,
        {key: value for key, value in parameters.items() if value is not None},
        state.config.snapshot(),
        result,
        list(deviations),
        round(time.perf_counter() - state.started, 6) if state.timing else None,
    )
    if state.report_path:
        routines.dump_json(state.report_path, envelope.to_dict())
        logger.info(f"Wrote the report to {state.report_path}")
    return envelope


def _emit(
    command: str,
    parameters: Dict[str, Any],
    result: Dict[str, Any],
    deviations: Sequence[str] = (),
    frame: Optional[pd.DataFrame] = None,
) -> int:
    state: _State = click.get_current_context().find_object(_State)
    envelope = _envelope(state, command, parameters, result, deviations)
    output_format = state.config.output_format
    if output_format == "json":
        click.echo(routines.to_json(envelope.to_dict()))
    elif output_format == "csv":
        table = frame if frame is not None else pd.json_normalize(envelope.result, sep=".")
        click.echo(table.to_csv(index=False), nl=False)
    else:
        click.echo(_render_table(envelope, frame))
    for message in envelope.deviations:
        logger.warning(message)
    return EXIT_DEVIATION if envelope.deviations else EXIT_OK


@click.group()
@click.option("--config", "config_path", type=click.Path(exists=True, dir_okay=False), help="YAML run configuration, or a JSON report to repeat.")
@click.option("--format", "output_format", type=click.Choice(OUTPUT_FORMATS), help="Output format.")
@click.option("--jobs", type=int, help="Worker processes for scans; -1 uses every core.")
@click.option("--seed", type=int, help="Seed for randomized steps.")
@click.option("--enumeration-cap", type=int, help="Largest field size that may be enumerated.")
@click.option("--extension-cap", type=int, help="Largest extension degree.")
@click.option("--log-level", help="Logging level name.")
@click.option("--log-file", type=click.Path(dir_okay=False), help="Also write the log to this file.")
@click.option("--timing", is_flag=True, default=False, help="Include the wall time in reports.")
@click.option("--report", "report_path", type=click.Path(dir_okay=False), help="Also write the report as JSON.")
@click.option("--save-config", type=click.Path(dir_okay=False), help="Write the effective configuration as YAML.")
@click.pass_context
def cli(
    ctx, config_path, output_format, jobs, seed, enumeration_cap, extension_cap, log_level, log_file, timing,
    report_path, save_config,
):
    """Chebyshev plane curves over finite fields."""
    base = RunConfig.load(config_path) if config_path else RunConfig.from_env()
    config = base.replace(
        output_format=output_format,
        jobs=jobs,
        seed=seed,
        enumeration_cap=enumeration_cap,
        extension_cap=extension_cap,
        log_level=log_level,
        log_file=log_file,
    )
    set_current(config)
    routines.init_logging(config.log_level.upper(), config.log_file)
    if save_config:
        config.to_yaml(save_config)
    ctx.obj = _State(config, timing, time.perf_counter(), report_path)


@cli.command()
@click.option("--d", "d", type=int, required=True)
@click.option("--p", "p", type=int, required=True)
@click.option("--ext", type=int, default=1, show_default=True, help="Extension degree of the coefficient field.")
def cheb(d, p, ext):
    """Print phi_d and check it against the closed form and the Laurent identity."""
    field = make_field(p, ext)
    spec = ChebSpec(d, field)
    phi = chebyshev_poly(d, field)
    laurent = verify_laurent_identity(spec)
    matches = phi == closed_form(d, field)
    result = {
        "polynomial": str(phi),
        "coefficients": [c.to_json() for c in phi.coefficients],
        "integer_coefficients": integer_coefficients(d),
        "laurent_identity": laurent,
        "closed_form_matches": matches,
    }
    deviations = []
    if not laurent:
        deviations.append("Laurent identity fails")
    if not matches:
        deviations.append("recurrence and closed form differ")
    return _emit("cheb", {"d": d, "p": p, "ext": ext}, result, deviations)


@cli.command()
@click.option("--d", "d", type=int, required=True)
@click.option("--p", "p", type=int, required=True)
@click.option("--ext", type=int, default=None, help="Degree of the search field over F_p.")
def inflect(d, p, ext):
    """Find and classify the total inflection points."""
    curve = PlaneCurve.chebyshev(d, p)
    search = make_field(p, ext) if ext else None
    report = total_inflections(curve, search)
    result = {
        "curve": curve.to_dict(),
        "field": report.field.to_dict(),
        "result": {
            "count": report.count,
            "predicted": report.predicted,
            "observed": report.observed,
            "complete": report.complete,
        },
        "witnesses": [point.to_json() for point in report.points],
    }
    return _emit("inflect", {"d": d, "p": p, "ext": ext}, result, report.deviations)


def _curve(d: int, p: int, m: Optional[int], fermat: bool):
    base = make_field(p, 1)
    if m is None and not fermat:
        return PlaneCurve(d, base)
    exponent = d if m is None else m
    if fermat:
        return SuperellipticCurve.fermat_type(exponent, d, base)
    return SuperellipticCurve.chebyshev(exponent, d, base)


_curve_options = [
    click.option("--d", "d", type=int, required=True, help="Degree of phi_d (or of x^d + 1)."),
    click.option("--q", "q", type=int, required=True, help="Prime power."),
    click.option("--m", "m", type=int, default=None, help="Exponent of y for y^m = f(x)."),
    click.option("--fermat", is_flag=True, default=False, help="Use f = x^d + 1 instead of phi_d."),
]


def curve_options(func):
    for option in reversed(_curve_options):
        func = option(func)
    return func


@cli.command()
@curve_options
def count(d, q, m, fermat):
    """Count rational points over F_q."""
    p, r = split_prime_power(q)
    curve = _curve(d, p, m, fermat)
    field = make_field(p, r)
    total = count_points(curve, field)
    result = {"curve": curve.to_dict(), "field": field.to_dict(), "result": {"count": total, "genus": curve.genus()}}
    return _emit("count", {"d": d, "q": q, "m": m, "fermat": fermat}, result)


@cli.command()
@curve_options
def maximal(d, q, m, fermat):
    """Decide maximality over F_{q^2}."""
    p, _ = split_prime_power(q)
    curve = _curve(d, p, m, fermat)
    verdict = is_maximal(curve, q)
    result = {"curve": curve.to_dict(), "result": verdict.to_dict()}
    return _emit("maximal", {"d": d, "q": q, "m": m, "fermat": fermat}, result)


@cli.command()
@click.option("--d", "d", type=int, required=True)
@click.option("--p", "p", type=int, required=True)
def stab(d, p):
    """Setwise stabilizer of the roots of phi_d."""
    base = make_field(p, 1)
    ChebSpec(d, base)
    phi = chebyshev_poly(d, base)
    field = make_field(p, splitting_degree(phi))
    group = setwise_stabilizer([ProjPoint1.affine(r) for r in roots_in_field(phi, field)])
    shape = fingerprint(group)
    result = {
        "field": field.to_dict(),
        "order": shape.order,
        "fingerprint": shape.to_dict(),
        "generators": [g.to_dict()["matrix"] for g in generating_set(group)],
    }
    return _emit("stab", {"d": d, "p": p}, result)


@cli.command()
@click.option("--d", "d", type=int, required=True)
@click.option("--p", "p", type=int, required=True)
@click.option("--g", "g_text", default=None, help="Coefficients of g over F_p, low degree first, comma-separated.")
def aut(d, p, g_text):
    """Automorphism group of y^d = g(x), g = phi_d by default."""
    g = Poly.from_ints(make_field(p, 1), _parse_ints(g_text)) if g_text else None
    report = compute_aut(d, p, g)
    return _emit("aut", {"d": d, "p": p, "g": g_text}, report.to_dict(), report.deviations)


@cli.command()
@click.option("--d-min", type=int, default=5, show_default=True)
@click.option("--d-max", type=int, required=True)
@click.option("--p-min", type=int, default=3, show_default=True)
@click.option("--p-max", type=int, required=True)
@click.option("--stream", is_flag=True, default=False, help="Print one JSON line per cell.")
@click.option("--output", type=click.Path(dir_okay=False), default=None, help="Also write the table as CSV.")
@click.option("--cache", type=click.Path(dir_okay=False), default=None, help="Reuse and extend the cells stored in this file.")
@click.option("--progress/--no-progress", default=False)
def scan(d_min, d_max, p_min, p_max, stream, output, cache, progress):
    """Stabilizers of the roots of phi_d on a grid of (d, p)."""
    report = scan_expectation(range(d_min, d_max + 1), range(p_min, p_max + 1), progress=progress, cache=cache)
    if output:
        report.to_csv(output)
    deviations = report.to_dict()["deviations"]
    parameters = {"d_min": d_min, "d_max": d_max, "p_min": p_min, "p_max": p_max}
    if stream:
        state: _State = click.get_current_context().find_object(_State)
        _envelope(state, "scan", parameters, report.to_dict(), deviations)
        for cell in report.cells:
            click.echo(json.dumps(cell.to_dict(), sort_keys=True))
        for message in deviations:
            logger.warning(message)
        return EXIT_DEVIATION if deviations else EXIT_OK
    return _emit("scan", parameters, report.to_dict(), deviations, frame=report.to_frame())


def _need(name: str, value):
    if value is None:
        raise click.UsageError(f"--{name} is required for this check.")
    return value


def _identity_result(name: str, holds: bool, expected: Optional[bool]):
    deviations = []
    if expected is not None and holds != expected:
        deviations.append(f"{name} identity is {holds}, expected {expected}")
    return {"identity": holds, "expected": expected}, deviations


def _power_of(n: int, p: int) -> bool:
    r = prime_power_exponent(n, p)
    return r is not None and r >= 1


@cli.command()
@click.option("--which", type=click.Choice(VERIFY_CHOICES), required=True)
@click.option("--d", "d", type=int, default=None)
@click.option("--p", "p", type=int, default=None)
@click.option("--n", "n", type=int, default=None)
@click.option("--m", "m", type=int, default=None)
@click.option("--q", "q", type=int, default=None)
@click.option("--mode", type=click.Choice(DISTINGUISH_MODES), default="order3", show_default=True)
@click.option("--p-max", type=int, default=50, show_default=True)
@click.option("--d-max", type=int, default=20, show_default=True)
def verify(which, d, p, n, m, q, mode, p_max, d_max):
    """Run one of the identity checks, witnesses or searches."""
    parameters = {"which": which}
    deviations: List[str] = []
    if which in ("laurent", "exceptional", "quartic-root", "fermat", "order3", "affine-twists",
                 "inversion-twists", "order3-family"):
        d, p = _need("d", d), _need("p", p)
        parameters.update(d=d, p=p)
    if which == "laurent":
        result, deviations = _identity_result(which, verify_laurent_identity(ChebSpec(d, make_field(p, 1))), True)
    elif which == "exceptional":
        result, deviations = _identity_result(which, verify_exceptional_identity(d, p), _power_of(2 * d - 1, p) or d == 1)
    elif which == "quartic-root":
        result, deviations = _identity_result(which, verify_quartic_root_identity(d, p), False if d >= 4 else None)
    elif which == "fermat":
        result, deviations = _identity_result(which, verify_fermat_identity(d, p), True if _power_of(2 * d - 1, p) else None)
    elif which == "order3":
        expected = _power_of(4 * d - 1, p)
        result, deviations = _identity_result(which, verify_order3_identity(d, p), True if expected else None)
        if expected:
            witness = order3_witness(d, p)
            result["witness"] = witness.to_dict()
            result["witness_order"] = witness.order()
    elif which == "char5":
        witness = char5_order3_witness()
        result = {"witness": witness.to_dict(), "order": witness.order(), "verified": True}
    elif which == "pair":
        n, m, q = _need("n", n), _need("m", m), _need("q", q)
        parameters.update(n=n, m=m, q=q, mode=mode)
        report = distinguish_pair(n, m, q, mode)
        result, deviations = report.to_dict(), report.deviations
    elif which == "quartic-grid":
        parameters.update(p_max=p_max)
        rows = quartic_aut_grid(p_max)
        result = {"rows": [_grid_row(r) for r in rows]}
        deviations = [message for r in rows for message in r.deviations]
    elif which == "quarter-grid":
        parameters.update(d_max=d_max)
        rows = quarter_case_grid(d_max)
        result = {"rows": [_grid_row(r) for r in rows]}
        deviations = [message for r in rows for message in r.deviations]
    elif which == "affine-twists":
        solutions = affine_twist_search(d, p)
        result = {"solutions": [[a.to_json(), b.to_json()] for a, b in solutions]}
        if (d % 2 == 0 or (d - 1) % p != 0) and not affine_twists_as_expected(d, p, solutions):
            deviations.append(f"affine twists other than (0, 1), (0, -1) for d={d}, p={p}")
    elif which == "inversion-twists":
        found = inversion_twist_search(d, p)
        result = {"solutions": [twist.to_dict() for twist in found]}
        deviations = [
            f"b = {twist.b} violates the necessary conditions"
            for twist in found
            if not (twist.eight_b_squared_is_d and twist.congruence_holds)
        ]
    else:
        found = order3_family_search(d, p)
        result = {"solutions": [c.to_json() for c in found]}
    return _emit("verify", parameters, result, deviations)


def _grid_row(report) -> Dict[str, Any]:
    return {
        "d": report.d,
        "p": report.p,
        "total_order": report.total_order,
        "image": None if report.image is None else report.image.to_dict(),
        "predicted_order": report.predicted_order,
    }


@cli.command()
@click.option("--coeffs", required=True, help="a,b,c,d,e of y^2 = a x^4 + b x^3 + c x^2 + d x + e.")
@click.option("--p", "p", type=int, required=True)
def jinv(coeffs, p):
    """j-invariant of y^2 = quartic, over F_p and over the rationals."""
    values = _parse_ints(coeffs)
    if len(values) != 5:
        raise click.BadParameter("exactly five coefficients are needed", param_hint="--coeffs")
    j_mod_p = j_invariant_quartic(values, make_field(p, 1))
    try:
        rational: Optional[Fraction] = j_invariant_rational(values)
    except ValueError:
        rational = None
    result = {
        "curve": {"coeffs": values},
        "field": make_field(p, 1).to_dict(),
        "result": {"j": j_mod_p.to_json(), "j_rational": None if rational is None else str(rational)},
    }
    return _emit("jinv", {"coeffs": coeffs, "p": p}, result)


@cli.command()
@click.option("--n", "n", type=int, required=True)
@click.option("--m", "m", type=int, required=True)
@click.option("--q", "q", type=int, required=True)
@click.option("--mode", type=click.Choice(DISTINGUISH_MODES), default="order3", show_default=True)
def distinguish(n, m, q, mode):
    """Evidence that y^m = phi_n(x) and y^m = x^n + 1 are (not) isomorphic."""
    report = distinguish_pair(n, m, q, mode)
    return _emit("distinguish", {"n": n, "m": m, "q": q, "mode": mode}, report.to_dict(), report.deviations)


def main(argv: Optional[Sequence[str]] = None) -> int:
    """Run the command line and return its exit code."""
    previous = current()
    try:
        code = cli.main(args=list(argv) if argv is not None else None, prog_name="chebcurves", standalone_mode=False)
    except click.UsageError as error:
        error.show()
        return EXIT_USAGE
    except click.ClickException as error:
        error.show()
        return EXIT_ERROR
    except click.Abort:
        return EXIT_ERROR
    except (ValueError, ArithmeticError, RuntimeError) as error:
        click.echo(f"error: {error}", err=True)
        return EXIT_ERROR
    finally:
        set_current(previous)
    return code if isinstance(code, int) else EXIT_OK


def run():
    sys.exit(main())
