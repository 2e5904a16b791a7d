"""Command-line entry point: ``crossprod <command> [options]``.

Every command prints one JSON report on standard output.  Errors go to
standard error as a JSON body.  Exit codes: 0 success, 1 mathematical failure
(the report carries a witness), 2 malformed input, 3 size limit exceeded.
"""

from __future__ import annotations

import json
import sys

import click
import numpy as np

from . import io
from .errors import CrossprodError, SizeLimitExceeded

DEFAULT_MAX_SIZE = 8
DEFAULT_MAX_SCALARS = 16


class Failure(Exception):
    """A completed computation whose answer is negative; the report is still printed."""

    def __init__(self, report: dict):
        super().__init__("failure")
        self.report = report


def _emit(report: dict) -> None:
    click.echo(io.dumps(report), nl=False)


def _finish(report: dict, ok: bool) -> None:
    if not ok:
        raise Failure(report)
    _emit(report)


def _limits(ctx: click.Context, *groups, scalars=None) -> None:
    max_size = ctx.obj["max_size"]
    for name, g in groups:
        if g.order > max_size:
            raise SizeLimitExceeded(f"|{name}| = {g.order} exceeds --max-size {max_size}")
    if scalars is not None and scalars.size > ctx.obj["max_scalars"]:
        raise SizeLimitExceeded(f"|M| = {scalars.size} exceeds --max-scalars {ctx.obj['max_scalars']}")


def _system(ctx, path: str):
    S = io.parse_system(io.load_json(path), "$")
    _limits(ctx, ("G", S.group), ("L", S.L), scalars=S.M)
    return S


def _category(ctx, path: str, *, checked: bool = True):
    C = io.parse_category(io.load_json(path), "$", checked=checked)
    _limits(ctx, ("L", C.objects), scalars=C.scalars)
    return C


def _write_or_embed(report: dict, key: str, doc, out) -> None:
    if out:
        io.write_atomic(out, doc)
        report[key] = out
    else:
        report[key] = doc


@click.group()
@click.option("--max-size", type=int, default=DEFAULT_MAX_SIZE, show_default=True, help="Bound on |G| and |L|.")
@click.option("--max-scalars", type=int, default=DEFAULT_MAX_SCALARS, show_default=True, help="Bound on |M|.")
@click.pass_context
def main(ctx: click.Context, max_size: int, max_scalars: int) -> None:
    """Crossed products of pointed tensor categories."""
    ctx.obj = {"max_size": max_size, "max_scalars": max_scalars}


@main.command()
@click.option("--group", "group_path", required=True, type=click.Path())
@click.option("--module", "module_path", required=True, type=click.Path())
@click.option("-n", "degree", required=True, type=int)
@click.option("--oracle", is_flag=True, help="Cross-check against the enumeration oracle.")
@click.pass_context
def cohomology(ctx, group_path, module_path, degree, oracle):
    """Invariant factors of H^n(G, M)."""
    from .cohomology import cohomology_group, oracle_cohomology

    G = io.parse_group(io.load_json(group_path), "$")
    M = io.parse_module(io.load_json(module_path), G, "$")
    _limits(ctx, ("G", G), scalars=M)
    if degree < 0:
        raise click.BadParameter("degree must be non-negative", param_hint="-n")
    factors = cohomology_group(G, M, degree)
    report = {"degree": degree, "factors": factors, "order": int(np.prod(factors)) if factors else 1}
    ok = True
    if oracle:
        ref = oracle_cohomology(G, M, degree)
        report["oracle_factors"] = ref
        ok = ref == factors
    report["ok"] = ok
    _finish(report, ok)


@main.command("pentagon-check")
@click.option("--category", "category_path", required=True, type=click.Path())
@click.pass_context
def pentagon_check_cmd(ctx, category_path):
    """Check the pentagon at every quadruple of objects."""
    from .pointed import pentagon_check

    C = _category(ctx, category_path, checked=False)
    res = pentagon_check(C)
    _finish(res.to_json(), res.ok)


@main.command()
@click.option("--system", "system_path", required=True, type=click.Path())
@click.pass_context
def obstruction(ctx, system_path):
    """The obstruction 4-cocycle of a crossed system and a trivializer if one exists."""
    from .outer_action import coherence_obstruction

    S = _system(ctx, system_path)
    ob = coherence_obstruction(S)
    report = {"ok": ob.trivial_class, **ob.to_json()}
    _finish(report, ob.trivial_class)


@main.command()
@click.option("--system", "system_path", required=True, type=click.Path())
@click.option("-o", "out", type=click.Path(), help="Write the coherent system here.")
@click.pass_context
def coherify(ctx, system_path, out):
    """Adjust omega so that the system becomes coherent."""
    from .outer_action import coherify as run

    S = _system(ctx, system_path)
    T = run(S)
    if T is None:
        _finish({"ok": False, "system": None}, False)
        return
    report = {"ok": True}
    _write_or_embed(report, "system", T.to_json(), out)
    _finish(report, True)


@main.command("build-crossed")
@click.option("--system", "system_path", required=True, type=click.Path())
@click.option("-o", "out", type=click.Path(), help="Category file to write.")
@click.option("--grading-out", type=click.Path(), help="Grading file (default: next to -o).")
@click.pass_context
def build_crossed(ctx, system_path, out, grading_out):
    """Build the crossed product category of a coherent system."""
    from .crossed_product import build_crossed_product

    S = _system(ctx, system_path)
    D = build_crossed_product(S)
    report = {"ok": True, "objects": int(D.category.objects.order)}
    if out and not grading_out:
        grading_out = out[:-5] + ".grading.json" if out.endswith(".json") else out + ".grading.json"
    _write_or_embed(report, "category", D.category.to_json(), out)
    _write_or_embed(report, "grading", io.grading_to_json(D), grading_out)
    _finish(report, True)


@main.command("extract-system")
@click.option("--category", "category_path", required=True, type=click.Path())
@click.option("--grading", "grading_path", required=True, type=click.Path())
@click.option("--sections", "sections_path", type=click.Path())
@click.option("-o", "out", type=click.Path(), help="System file to write.")
@click.pass_context
def extract_system(ctx, category_path, grading_path, sections_path, out):
    """Read a crossed system off a graded pointed category."""
    from .crossed_product import extract_with_gauge

    C = _category(ctx, category_path)
    D = io.parse_grading(io.load_json(grading_path), C, "$")
    _limits(ctx, ("G", D.group))
    sections = None
    if sections_path:
        sections = io.parse_sections(io.load_json(sections_path), D.group.order, C.objects.order, "$")
    E = extract_with_gauge(D, sections)
    report = {"ok": True, "labels": E.labels.tolist(), "gauge": E.gauge.to_json()}
    _write_or_embed(report, "system", E.system.to_json(), out)
    _finish(report, True)


def _cells(ctx, system_path, target_path):
    S = _system(ctx, system_path)
    S2 = _system(ctx, target_path) if target_path else S
    return S, S2


@main.command("check-functor")
@click.option("--system", "system_path", required=True, type=click.Path())
@click.option("--target", "target_path", type=click.Path(), help="Target system (default: the source).")
@click.option("--one-cell", "cell_path", required=True, type=click.Path())
@click.option("-o", "out", type=click.Path(), help="Write the graded functor here.")
@click.pass_context
def check_functor(ctx, system_path, target_path, cell_path, out):
    """Verify a 1-cell and emit the graded monoidal functor it induces."""
    from .crossed_product import build_unchecked, check_one_cell_diagram, graded_functor_unchecked, verify_one_cell
    from .outer_action import check_coherence
    from .errors import NotCoherent

    S, S2 = _cells(ctx, system_path, target_path)
    for sys_ in (S, S2):
        res = check_coherence(sys_)
        if not res:
            raise NotCoherent("system fails the coherence diagram", witness=list(res.witness))
    T = io.parse_one_cell(io.load_json(cell_path), S, S2, "$")
    source, target = build_unchecked(S), build_unchecked(S2)
    res = verify_one_cell(T, source, target)
    report = res.to_json()
    if res.ok:
        report["diagram"] = check_one_cell_diagram(T).to_json()
        F = graded_functor_unchecked(T, source, target)
        _write_or_embed(report, "functor", F.to_json(), out)
    _finish(report, res.ok)


@main.command("check-two-cell")
@click.option("--system", "system_path", required=True, type=click.Path())
@click.option("--target", "target_path", type=click.Path(), help="Target system (default: the source).")
@click.option("--one-cell", "cell_path", required=True, type=click.Path())
@click.option("--other-cell", "other_path", required=True, type=click.Path())
@click.option("--two-cell", "two_path", required=True, type=click.Path())
@click.pass_context
def check_two_cell(ctx, system_path, target_path, cell_path, other_path, two_path):
    """Verify a 2-cell between two 1-cells."""
    from .crossed_product import verify_two_cell

    S, S2 = _cells(ctx, system_path, target_path)
    T = io.parse_one_cell(io.load_json(cell_path), S, S2, "$")
    T2 = io.parse_one_cell(io.load_json(other_path), S, S2, "$")
    c = io.parse_two_cell(io.load_json(two_path), S, "$")
    res = verify_two_cell(c, T, T2)
    _finish(res.to_json(), res.ok)


@main.command("find-braidings")
@click.option("--category", "category_path", required=True, type=click.Path())
@click.option("--oracle", is_flag=True, help="Cross-check against exhaustive enumeration.")
@click.pass_context
def find_braidings(ctx, category_path, oracle):
    """All braidings of a pointed category."""
    from .braiding import solve_braidings

    C = _category(ctx, category_path)
    found = solve_braidings(C, oracle=oracle)
    _finish({"ok": True, "count": len(found), "braidings": [b.to_json() for b in found]}, True)


@main.command("find-action-braidings")
@click.option("--system", "system_path", required=True, type=click.Path())
@click.option("--base-braiding", "base_path", required=True, type=click.Path())
@click.pass_context
def find_action_braidings(ctx, system_path, base_path):
    """All braidings of a central action over a base braiding."""
    from .braiding import solve_action_braidings

    S = _system(ctx, system_path)
    base = io.parse_braiding(io.load_json(base_path), S.base, "$")
    found = solve_action_braidings(S, base)
    docs = [ab.to_json(S.M) for ab in found]
    _finish({"ok": True, "count": len(found), "action_braidings": docs}, True)


@main.command("check-braiding")
@click.option("--category", "category_path", required=True, type=click.Path())
@click.option("--braiding", "braiding_path", required=True, type=click.Path())
@click.pass_context
def check_braiding(ctx, category_path, braiding_path):
    """Check both hexagons of a braiding."""
    from .braiding import hexagon_check

    C = _category(ctx, category_path)
    b = io.parse_braiding(io.load_json(braiding_path), C, "$")
    res = hexagon_check(b)
    _finish(res.to_json(), res.ok)


def _error_body(exc: Exception) -> str:
    if isinstance(exc, CrossprodError):
        body = exc.to_json()
    else:
        body = {"error": exc.__class__.__name__, "message": str(exc)}
    return json.dumps(body, sort_keys=False)


def run(argv=None) -> int:
    """Run the CLI and return the exit code instead of exiting."""
    try:
        main.main(args=argv, prog_name="crossprod", standalone_mode=False)
        return 0
    except Failure as f:
        _emit(f.report)
        return 1
    except CrossprodError as exc:
        click.echo(_error_body(exc), err=True)
        return exc.exit_code
    except click.exceptions.Exit as exc:
        return exc.exit_code
    except click.ClickException as exc:
        body = {"error": "UsageError", "message": exc.format_message()}
        click.echo(json.dumps(body), err=True)
        return 2
    except click.exceptions.Abort:
        click.echo(json.dumps({"error": "Aborted", "message": "aborted"}), err=True)
        return 2


def entry() -> None:
    sys.exit(run())


if __name__ == "__main__":
    entry()
