"""Command-line interface.

Exit codes: 0 success, 1 infeasible, 2 usage error, 3 time limit reached.
"""

from __future__ import annotations

import json
import sys
from pathlib import Path

import click

from .engine import solve_global, solve_iterative
from .lab import (
    SweepError,
    demand_scalability,
    hog_sweep,
    moq_sweep,
    weight_sweep,
    write_sweep_csv,
)
from .model import Instance, Scenario, WeightVector
from .reductions import parse_graph, reduce_is_moq, reduce_is_mpa
from .serialize import (
    InstanceFormatError,
    parse_instance,
    serialize_instance,
    solution_document,
)
from .solver import SolverOptions, Status
from .solver.backends import available_backends

_EXIT_INFEASIBLE = 1
_EXIT_USAGE = 2
_EXIT_TIME_LIMIT = 3


def _load_instance(path: str) -> Instance:
    try:
        return parse_instance(Path(path).read_bytes())
    except FileNotFoundError:
        raise click.UsageError(f"instance file not found: {path}")
    except InstanceFormatError as exc:
        raise click.UsageError(f"bad instance file: {exc}")


def _parse_weights(text: str) -> WeightVector:
    parts = text.split(",")
    if len(parts) != 5:
        raise click.UsageError("--weights expects five comma-separated numbers")
    try:
        return WeightVector.of([float(p) for p in parts])
    except ValueError:
        raise click.UsageError(f"bad weight value in {text!r}")


def _parse_fixed(levels: tuple[str, ...]) -> dict[str, float]:
    fixed = {}
    for item in levels:
        if "=" not in item:
            raise click.UsageError("--fix-recipe expects ID=LEVEL")
        rid, _, level = item.partition("=")
        try:
            fixed[rid] = float(level)
        except ValueError:
            raise click.UsageError(f"bad level in --fix-recipe {item!r}")
    return fixed


def _exit_for(status: Status) -> int:
    if status == Status.OPTIMAL:
        return 0
    if status in (Status.TIME_LIMIT, Status.NODE_LIMIT):
        return _EXIT_TIME_LIMIT
    return _EXIT_INFEASIBLE


def _emit(doc: dict, out: str | None) -> None:
    text = json.dumps(doc, indent=2)
    if out:
        Path(out).write_text(text + "\n")
    else:
        click.echo(text)


@click.group()
@click.version_option(package_name="carveopt")
def main() -> None:
    """Purchase and production planning for recipe-based processing."""


@main.command()
@click.option("--instance", "instance_path", required=True, help="Instance JSON file.")
@click.option("--weights", default="1,1,1,1,1", show_default=True,
              help="Objective weights w0,w1,w2,w3,w4.")
@click.option("--moq", type=float, default=None,
              help="Uniform minimum order quantity override.")
@click.option("--mpa-ratio", type=float, default=0.05, show_default=True,
              help="Minimum share of an alternative when used at all.")
@click.option("--fix-recipe", "fixed", multiple=True, metavar="ID=LEVEL",
              help="Pin a recipe activity level (repeatable).")
@click.option("--method", type=click.Choice(["iterative", "global"]),
              default="iterative", show_default=True)
@click.option("--time-limit", type=float, default=60.0, show_default=True)
@click.option("--backend", type=click.Choice(available_backends()),
              default="simplex", show_default=True)
@click.option("--out", default=None, help="Write the solution JSON here instead of stdout.")
def solve(instance_path, weights, moq, mpa_ratio, fixed, method, time_limit,
          backend, out) -> None:
    """Solve one scenario and print a solution document."""
    instance = _load_instance(instance_path)
    fixed_levels = _parse_fixed(fixed)
    for rid in fixed_levels:
        if rid not in instance.recipes:
            raise click.UsageError(f"--fix-recipe names unknown recipe {rid!r}")
    try:
        scenario = Scenario(
            instance=instance,
            weights=_parse_weights(weights),
            fixed_recipe_levels=fixed_levels,
            moq_override=moq,
            mpa_ratio=mpa_ratio,
            solver_options=SolverOptions(time_limit=time_limit, backend=backend),
        )
    except ValueError as exc:
        raise click.UsageError(str(exc))
    report = (solve_iterative if method == "iterative" else solve_global)(scenario)
    _emit(solution_document(report, scenario), out)
    sys.exit(_exit_for(report.status))


def _finish_sweep(rows, out, key_label, include_t, plot, x_label) -> None:
    write_sweep_csv(rows, out, key_label=key_label, include_t=include_t)
    if plot:
        from .plots import render_sweep_plot

        render_sweep_plot(rows, plot, x_label=x_label)
    worst = max((_exit_for(Status(row.status)) for row in rows), default=0)
    sys.exit(worst if worst != _EXIT_INFEASIBLE else 0)


@main.command("sweep-weights")
@click.option("--instance", "instance_path", required=True)
@click.option("--set", "sets", multiple=True, required=True, metavar="W0,W1,W2,W3,W4",
              help="A weight set (repeatable).")
@click.option("--moq", type=float, default=None)
@click.option("--time-limit", type=float, default=60.0, show_default=True)
@click.option("--backend", type=click.Choice(available_backends()), default="simplex")
@click.option("--out", required=True, help="CSV output path.")
@click.option("--plot", default=None, help="Also render a PNG figure here.")
def sweep_weights_cmd(instance_path, sets, moq, time_limit, backend, out, plot) -> None:
    """Compare objective weight sets; reports t-columns against per-component references."""
    instance = _load_instance(instance_path)
    weight_sets = [_parse_weights(s).as_tuple() for s in sets]
    opts = SolverOptions(time_limit=time_limit, backend=backend)
    try:
        rows = weight_sweep(instance, weight_sets, options=opts, moq_override=moq)
    except SweepError as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(_EXIT_INFEASIBLE)
    _finish_sweep(rows, out, "weights", True, plot, "weight set")


@main.command("sweep-hogs")
@click.option("--instance", "instance_path", required=True)
@click.option("--recipe", required=True, help="Recipe whose activity level is pinned.")
@click.option("--level", "levels", multiple=True, required=True, type=float,
              help="Pinned activity level (repeatable).")
@click.option("--weights", default="1,1,1,1,1", show_default=True)
@click.option("--time-limit", type=float, default=60.0, show_default=True)
@click.option("--backend", type=click.Choice(available_backends()), default="simplex")
@click.option("--out", required=True, help="CSV output path.")
@click.option("--plot", default=None, help="Also render a PNG figure here.")
def sweep_hogs_cmd(instance_path, recipe, levels, weights, time_limit, backend,
                   out, plot) -> None:
    """Sweep a pinned recipe level (e.g. number of animals cut)."""
    instance = _load_instance(instance_path)
    if recipe not in instance.recipes:
        raise click.UsageError(f"unknown recipe {recipe!r}")
    rows = hog_sweep(instance, recipe, sorted(levels),
                     weights=_parse_weights(weights),
                     options=SolverOptions(time_limit=time_limit, backend=backend))
    _finish_sweep(rows, out, "level", False, plot, f"pinned level of {recipe}")


@main.command("sweep-moq")
@click.option("--instance", "instance_path", required=True)
@click.option("--moq", "moqs", multiple=True, required=True, type=float,
              help="Uniform MOQ value (repeatable).")
@click.option("--weights", default="1,1,1,1,1", show_default=True)
@click.option("--time-limit", type=float, default=60.0, show_default=True)
@click.option("--backend", type=click.Choice(available_backends()), default="simplex")
@click.option("--out", required=True, help="CSV output path.")
@click.option("--plot", default=None, help="Also render a PNG figure here.")
def sweep_moq_cmd(instance_path, moqs, weights, time_limit, backend, out, plot) -> None:
    """Sweep uniform minimum-order-quantity overrides."""
    instance = _load_instance(instance_path)
    rows = moq_sweep(instance, list(moqs), weights=_parse_weights(weights),
                     options=SolverOptions(time_limit=time_limit, backend=backend))
    _finish_sweep(rows, out, "moq", False, plot, "minimum order quantity")


@main.command("sweep-demand")
@click.option("--instance", "instance_path", required=True)
@click.option("--counts", required=True, help="Comma-separated ascending demand counts.")
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--moq", type=float, default=100.0, show_default=True)
@click.option("--weights", default="100,100,1,1,1", show_default=True)
@click.option("--time-limit", type=float, default=60.0, show_default=True)
@click.option("--backend", type=click.Choice(available_backends()), default="simplex")
@click.option("--out", required=True, help="CSV output path.")
@click.option("--plot", default=None, help="Also render a PNG figure here.")
def sweep_demand_cmd(instance_path, counts, seed, moq, weights, time_limit,
                     backend, out, plot) -> None:
    """Runtime scalability over sampled demand counts."""
    instance = _load_instance(instance_path)
    try:
        count_list = [int(c) for c in counts.split(",")]
    except ValueError:
        raise click.UsageError("--counts expects comma-separated integers")
    try:
        rows = demand_scalability(
            instance, count_list, seed=seed, moq=moq,
            weights=_parse_weights(weights).as_tuple(),
            options=SolverOptions(time_limit=time_limit, backend=backend))
    except (ValueError, SweepError) as exc:
        raise click.UsageError(str(exc))
    _finish_sweep(rows, out, "demands", False, plot, "number of demands")


@main.command("reduce-is")
@click.option("--graph", "graph_path", required=True,
              help="Graph file: 'n m' header, one 'u v' edge per line.")
@click.option("--k", required=True, type=int, help="Independent-set size to test.")
@click.option("--variant", type=click.Choice(["moq", "mpa"]), required=True)
@click.option("--out", required=True, help="Instance JSON output path.")
def reduce_is_cmd(graph_path, k, variant, out) -> None:
    """Encode an independent-set question as a planning instance."""
    try:
        graph = parse_graph(Path(graph_path).read_text())
    except FileNotFoundError:
        raise click.UsageError(f"graph file not found: {graph_path}")
    except ValueError as exc:
        raise click.UsageError(f"bad graph file: {exc}")
    try:
        scenario, target = (reduce_is_moq if variant == "moq" else reduce_is_mpa)(graph, k)
    except ValueError as exc:
        raise click.UsageError(str(exc))

    Path(out).write_text(serialize_instance(scenario.instance) + "\n")
    weights = ",".join(f"{w:g}" for w in scenario.weights.as_tuple())
    click.echo(json.dumps({
        "variant": variant,
        "k": k,
        "weights": weights,
        "target_objective": target,
        "note": ("solve with --weights " + weights +
                 "; an objective equal to target_objective certifies an"
                 " independent set of the requested size"),
    }, indent=2))


@main.command()
@click.option("--port", type=int, default=8220, show_default=True,
              help="Listen port; the CARVEOPT_PORT environment variable wins over the flag.")
@click.option("--host", default="127.0.0.1", show_default=True)
def serve(port, host) -> None:
    """Run the HTTP service."""
    import os

    import uvicorn

    from .service import create_app

    env_port = os.environ.get("CARVEOPT_PORT")
    if env_port is not None:
        try:
            port = int(env_port)
        except ValueError:
            raise click.UsageError(f"CARVEOPT_PORT is not an integer: {env_port!r}")
    uvicorn.run(create_app(), host=host, port=port)


if __name__ == "__main__":
    main()
