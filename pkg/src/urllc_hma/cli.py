"""Command-line entry point: ``urllc-hma run | preset | validate``."""
import logging
import os
import sys
from dataclasses import replace

import click

from . import kernels
from .config import ConfigError, dump_config, parse_config
from .engine import Engine, metrics_dict
from .presets import PRESETS, run_preset, write_csv


def _load(path):
    try:
        return parse_config(path)
    except ConfigError as e:
        raise click.ClickException(str(e)) from None


@click.group()
@click.option("-v", "--verbose", is_flag=True, help="Log progress to stderr.")
def main(verbose):
    """Single-cell URLLC slicing simulator with hybrid OMA/NOMA (HMA)."""
    logging.basicConfig(level=logging.INFO if verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")


@main.command()
@click.option("--config", "config_path", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--seed", type=int, default=None, help="Override sim.seed.")
@click.option("--out", "out_dir", default=".", type=click.Path(file_okay=False))
@click.option("--export-policies", "policy_path", default=None, type=click.Path(dir_okay=False),
              help="Write the trained Q-tables and risk map to this file.")
def run(config_path, seed, out_dir, policy_path):
    """Train, evaluate and write metrics.csv."""
    cfg = _load(config_path)
    if seed is not None:
        cfg = replace(cfg, seed=seed)
    eng = Engine(cfg).train()
    m = eng.evaluate()
    try:
        os.makedirs(out_dir, exist_ok=True)
        d = metrics_dict(m)
        row = {"seed": cfg.seed, "mode": cfg.mode, "eps_ns": cfg.eps_ns,
               "slice": "{%d,%d,%d}" % m.slice,
               "reliable_rate_bps": d["scheduled_reliable_goodput_bps"],
               "ns_attempts": d["ns_attempts"], "ns_outages": d["ns_outages"],
               "ns_outage_measured": d["ns_outage_measured"],
               "ns_outage_realized": d["ns_outage_realized"],
               "scheduled_violations": d["scheduled_violations"]}
        row.update({f"util_rrb{i}": u for i, u in enumerate(m.rrb_utilization)})
        path = write_csv(os.path.join(out_dir, "metrics.csv"), [row])
        if policy_path:
            with open(policy_path, "w", encoding="utf-8") as fh:
                fh.write(eng.export_policies())
    except OSError as e:
        raise click.ClickException(f"cannot write results: {e}") from None
    click.echo(f"slice {row['slice']}  rate {row['reliable_rate_bps']:.0f} bit/s  "
               f"NS outage {row['ns_outage_measured']:.3e}  -> {path}")


@main.command()
@click.argument("name", type=click.Choice(sorted(PRESETS)))
@click.option("--out", "out_dir", default="results", type=click.Path(file_okay=False))
@click.option("--reps", type=int, default=1, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--config", "config_path", default=None, type=click.Path(exists=True, dir_okay=False),
              help="Base configuration for rate_vs_eps.")
@click.option("--workers", type=int, default=1, show_default=True)
def preset(name, out_dir, reps, seed, config_path, workers):
    """Run one of the canned experiments and write its CSV files."""
    if reps < 1:
        raise click.BadParameter("must be >= 1", param_hint="--reps")
    base = _load(config_path) if config_path else None
    try:
        paths = run_preset(name, out_dir, reps=reps, seed=seed, base=base, workers=workers)
    except OSError as e:
        raise click.ClickException(str(e)) from None
    for p in paths:
        click.echo(p)


@main.command()
@click.option("--config", "config_path", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--show", is_flag=True, help="Print the effective configuration.")
def validate(config_path, show):
    """Check a configuration file without running anything."""
    cfg = _load(config_path)
    if show:
        click.echo(dump_config(cfg), nl=False)
    click.echo(f"ok ({kernels.BACKEND} kernels)")


if __name__ == "__main__":
    sys.exit(main())
