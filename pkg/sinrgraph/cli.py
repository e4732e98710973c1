"""
sinrgraph/cli.py
================
Command-line interface.

Usage:
    python -m sinrgraph gen --n 400 --lmax 250 --seed 7 --out inst.json
    python -m sinrgraph graph --in inst.json --gamma 4 --delta 0.8
    python -m sinrgraph tdma --in inst.json --gamma 4 --delta 0.8 --diag
    python -m sinrgraph mwis --in inst.json --gamma 4 --delta 0.8 --rate-control --utils u.json
    python -m sinrgraph bench --config exp.json --csv results.csv

Every command prints one JSON document (or writes it to --out). Library
errors exit with status 1 and a single diagnostic line; invariant
violations exit with status 2.
"""

import json
import logging

import click

from sinrgraph import __version__
from sinrgraph.bench import ExperimentConfig, gen_random_instance, run_experiment, write_csv
from sinrgraph.config import Config, get_config
from sinrgraph.conflict_graph import (
    build_conflict_graph, choose_tau, delta_for_epsilon, graph_params,
)
from sinrgraph.errors import InvariantViolation, SinrGraphError
from sinrgraph.mcma import mcma_feasible_check, mcma_mwis, uniform_caps
from sinrgraph.models.graph import ConflictFn
from sinrgraph.models.links import PowerAssignment
from sinrgraph.physical_model import is_feasible, is_instance_subset_feasible
from sinrgraph.rate_control import (
    collapse_solution, delta_prime, expand_discrete, expand_geometric, realized_links,
)
from sinrgraph.schemas import (
    load_caps, load_experiment_config, load_instance, load_utility_specs, read_json,
)
from sinrgraph.scheduling import (
    first_fit_coloring, greedy_multichannel, local_ratio_mwis,
    measure_inductive_independence, partition_feasible,
)
from sinrgraph.utils.logging import configure_logging

logger = logging.getLogger(__name__)


class SinrGraphGroup(click.Group):
    """Turns library errors into a diagnostic line and a nonzero exit code."""

    def invoke(self, ctx):
        try:
            return super().invoke(ctx)
        except InvariantViolation as e:
            click.echo(f"invariant violation: {e}", err=True)
            ctx.exit(2)
        except SinrGraphError as e:
            click.echo(f"error: {e}", err=True)
            ctx.exit(1)


def _emit(payload: dict, out: str | None) -> None:
    text = json.dumps(payload, indent=2)
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
        logger.info("Wrote %s", out)
    else:
        click.echo(text)


def _graph_options(f):
    f = click.option("--delta", type=float, default=0.0, show_default=True, help="Conflict exponent δ.")(f)
    f = click.option("--gamma", type=float, default=1.0, show_default=True, help="Conflict factor γ.")(f)
    f = click.option("--in", "in_path", required=True, type=click.Path(exists=True, dir_okay=False),
                     help="Instance JSON file.")(f)
    f = click.option("--out", type=click.Path(dir_okay=False), default=None, help="Write JSON here.")(f)
    return f


def _load_graph(in_path: str, gamma: float, delta: float):
    inst = load_instance(read_json(in_path))
    return inst, build_conflict_graph(inst, ConflictFn(gamma, delta))


def _diag(payload: dict, graph) -> dict:
    payload.setdefault("diagnostics", {})
    payload["diagnostics"]["inductive_independence"] = measure_inductive_independence(graph).to_dict()
    return payload


@click.group(cls=SinrGraphGroup)
@click.version_option(__version__, prog_name="sinrgraph")
@click.option("--log-level", default=None, help="Override the configured log level.")
def cli(log_level):
    """Conflict-graph scheduling in the SINR model."""
    configure_logging(get_config(), level=log_level)


# ─────────────────────────────────────────────────────────────────────────────
# INSTANCES
# ─────────────────────────────────────────────────────────────────────────────
@cli.command()
@click.option("--n", type=int, default=Config.DEFAULT_N, show_default=True)
@click.option("--lmax", type=float, default=250.0, show_default=True)
@click.option("--alpha", type=float, default=Config.DEFAULT_ALPHA, show_default=True)
@click.option("--beta", type=float, default=Config.DEFAULT_BETA, show_default=True)
@click.option("--beta-max", type=float, default=None, help="Draw β uniformly from [beta, beta-max].")
@click.option("--side", type=float, default=Config.SQUARE_SIDE, show_default=True)
@click.option("--seed", type=int, default=Config.DEFAULT_SEED, show_default=True)
@click.option("--trial", type=int, default=0, show_default=True)
@click.option("--out", type=click.Path(dir_okay=False), default=None)
def gen(n, lmax, alpha, beta, beta_max, side, seed, trial, out):
    """Generate a random instance."""
    cfg = ExperimentConfig(n=n, l_max=(lmax,), alpha=alpha, beta=beta, beta_max=beta_max,
                           side=side, seed=seed, trials=1)
    _emit(gen_random_instance(cfg, trial, lmax).to_dict(), out)


@cli.command()
@_graph_options
@click.option("--diag", is_flag=True, help="Measure inductive independence.")
def graph(out, in_path, gamma, delta, diag):
    """Build the conflict graph G_γ^δ."""
    _, g = _load_graph(in_path, gamma, delta)
    payload = g.to_dict()
    _emit(_diag(payload, g) if diag else payload, out)


@cli.command()
@click.option("--in", "in_path", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--ids", default=None, help="Comma-separated link ids (default: all).")
@click.option("--tau", type=float, default=None, help="Use P_τ instead of uniform power.")
@click.option("--out", type=click.Path(dir_okay=False), default=None)
def feasible(in_path, ids, tau, out):
    """SIR feasibility of a link set."""
    inst = load_instance(read_json(in_path))
    selected = [int(i) for i in ids.split(",")] if ids else inst.ids
    power = PowerAssignment.uniform() if tau is None else PowerAssignment.oblivious(tau)
    report = is_instance_subset_feasible(inst, selected, power)
    _emit({**report.to_dict(), "power": power.to_dict()}, out)


@cli.command()
@click.option("--alpha", type=float, default=Config.DEFAULT_ALPHA, show_default=True)
@click.option("--m", type=int, default=Config.DEFAULT_M, show_default=True)
@click.option("--delta", type=float, default=None)
@click.option("--epsilon", type=float, default=None, help="δ = δ₀ + ε(1 − δ₀).")
def params(alpha, m, delta, epsilon):
    """δ₀, the admissible τ-interval and the chosen τ."""
    if (delta is None) == (epsilon is None):
        raise click.UsageError("Give exactly one of --delta or --epsilon.")
    if delta is None:
        delta = delta_for_epsilon(epsilon, alpha, m)
    _emit({**graph_params(delta, alpha, m).to_dict(), "delta": delta, "alpha": alpha, "m": m}, None)


# ─────────────────────────────────────────────────────────────────────────────
# SCHEDULING
# ─────────────────────────────────────────────────────────────────────────────
@cli.command()
@_graph_options
@click.option("--diag", is_flag=True)
def tdma(out, in_path, gamma, delta, diag):
    """First-fit TDMA schedule."""
    _, g = _load_graph(in_path, gamma, delta)
    payload = first_fit_coloring(g).to_dict()
    _emit(_diag(payload, g) if diag else payload, out)


@cli.command()
@_graph_options
@click.option("--ids", required=True, help="Comma-separated ids of a feasible set.")
@click.option("--two-stage", is_flag=True, help="Split by ρ-independence first.")
def partition(out, in_path, gamma, delta, ids, two_stage):
    """Split a feasible set into independent sets of G_γ^δ."""
    _, g = _load_graph(in_path, gamma, delta)
    coloring = partition_feasible(g, [int(i) for i in ids.split(",")], two_stage=two_stage)
    _emit(coloring.to_dict(), out)


@cli.command()
@_graph_options
@click.option("--diag", is_flag=True)
@click.option("--rate-control", is_flag=True, help="Choose a rate per link from --utils.")
@click.option("--utils", "utils_path", type=click.Path(exists=True, dir_okay=False), default=None)
@click.option("--levels", type=click.Choice(["geometric", "discrete"]), default="geometric", show_default=True)
def mwis(out, in_path, gamma, delta, diag, rate_control, utils_path, levels):
    """Local-ratio maximum-weight independent set."""
    inst = load_instance(read_json(in_path))
    fn = ConflictFn(gamma, delta)
    if not rate_control:
        g = build_conflict_graph(inst, fn)
        payload = local_ratio_mwis(g).to_dict()
        _emit(_diag(payload, g) if diag else payload, out)
        return

    if utils_path is None:
        raise click.UsageError("--rate-control needs --utils.")
    specs = load_utility_specs(read_json(utils_path), inst)
    expanded = expand_geometric(inst, specs) if levels == "geometric" else expand_discrete(inst, specs)
    g = build_conflict_graph(expanded.instance, fn)
    collapsed = collapse_solution(expanded, local_ratio_mwis(g))

    payload = collapsed.to_dict()
    payload["diagnostics"] = {**payload.get("diagnostics", {}),
                              "delta_prime": delta_prime(inst, specs),
                              "num_copies": len(expanded.instance)}
    if delta > 0:
        try:
            power = PowerAssignment.oblivious(choose_tau(delta, inst.alpha, inst.m))
        except SinrGraphError:
            power = None
        if power is not None:
            payload["diagnostics"]["sir_consistent"] = is_feasible(
                realized_links(expanded, collapsed), power, inst.alpha).feasible
    _emit(_diag(payload, g) if diag else payload, out)


@cli.command()
@_graph_options
@click.option("--c", "c", type=int, required=True, help="Number of channels.")
def channels(out, in_path, gamma, delta, c):
    """Greedy multi-channel selection."""
    _, g = _load_graph(in_path, gamma, delta)
    _emit(greedy_multichannel(g, c).to_dict(), out)


@cli.command()
@_graph_options
@click.option("--caps", "caps_path", type=click.Path(exists=True, dir_okay=False), default=None,
              help="Node capabilities JSON (default: 1 antenna, channels 0..c-1).")
@click.option("--c", "c", type=int, default=1, show_default=True)
def mcma(out, in_path, gamma, delta, caps_path, c):
    """Select virtual links in the multi-channel multi-antenna setting."""
    inst, g = _load_graph(in_path, gamma, delta)
    caps = load_caps(read_json(caps_path)) if caps_path else uniform_caps(inst, 1, range(c))
    result = mcma_mwis(inst, caps, g)
    payload = result.to_dict()
    if delta > 0:
        try:
            tau = choose_tau(delta, inst.alpha, inst.m)
        except SinrGraphError:
            tau = None
        if tau is not None:
            payload["tau"] = tau
            payload["feasible"] = mcma_feasible_check(result.selected, PowerAssignment.oblivious(tau), inst)
    _emit(payload, out)


# ─────────────────────────────────────────────────────────────────────────────
# EXPERIMENTS AND SERVICE
# ─────────────────────────────────────────────────────────────────────────────
@cli.command()
@click.option("--config", "config_path", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--csv", "csv_path", required=True, type=click.Path(dir_okay=False))
@click.option("--workers", type=int, default=None, help="Override the configured worker count.")
def bench(config_path, csv_path, workers):
    """Run the MWISL-vs-diversity experiment and write CSV."""
    cfg = load_experiment_config(read_json(config_path))
    if workers is not None:
        cfg = ExperimentConfig(**{**cfg.to_dict(), "workers": workers})
    result = run_experiment(cfg)
    write_csv(result.rows, csv_path)
    _emit({"rows": len(result.rows), "failures": result.failures,
           "incomplete": result.incomplete, "csv": csv_path}, None)
    if not result.complete:
        raise InvariantViolation(f"{len(result.incomplete)} result cells have fewer than "
                                 f"{cfg.trials} trials; see 'incomplete' above.")


@cli.command()
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", type=int, default=5000, show_default=True)
@click.option("--config-name", default=None, help="development | testing | production")
def serve(host, port, config_name):
    """Run the web service (development server)."""
    from sinrgraph.api import create_app

    app = create_app(config_name)
    app.run(host=host, port=port, debug=app.config["DEBUG"], threaded=True)


def main():
    cli(prog_name="sinrgraph")
