"""Command-line front door.

Each subcommand runs one named experiment, writes an RFC-4180 CSV (header
row, '.' decimal, %.17g floats) plus a JSON sidecar with the full config,
seed, version and wall-clock time, and exits 0 on success, 2 when --check
finds a tolerance violation, 1 on error.  Flags override --config file
values; reruns with the same config produce byte-identical CSVs.
"""

import csv
import io
import json
import os
import sys
import time

import click
import numpy as np

from . import __version__
from .dicke import CapacityError
from .experiments import run_experiment

_SCHEMA = "metroscope-result/1"

_PHI_NAMES = {"pi/2": np.pi / 2, "pi/3": np.pi / 3, "pi/4": np.pi / 4, "pi": np.pi, "0": 0.0}


def _fmt(x):
    if isinstance(x, float):
        return format(x, ".17g")
    return str(x)


def _parse_multi(_ctx, _param, value):
    """Comma-separated numbers; 'pi/2'-style phases allowed."""
    if value is None:
        return None
    out = []
    for tok in str(value).split(","):
        tok = tok.strip()
        if not tok:
            continue
        if tok in _PHI_NAMES:
            out.append(_PHI_NAMES[tok])
        else:
            out.append(float(tok) if ("." in tok or "e" in tok or "E" in tok) else int(tok))
    return out


def _write_outputs(result, params, out_path, started):
    rows_csv = io.StringIO()
    writer = csv.writer(rows_csv, lineterminator="\n")
    writer.writerow(result.columns)
    for row in result.rows:
        writer.writerow([_fmt(row.get(c, "")) for c in result.columns])
    with open(out_path, "w", newline="") as fh:
        fh.write(rows_csv.getvalue())

    sidecar = {
        "schema": _SCHEMA,
        "experiment": result.experiment,
        "config": {k: v for k, v in sorted(params.items())},
        "seed": params.get("seed", 0),
        "version": f"metroscope-{__version__}",
        "wall_time_s": time.perf_counter() - started,
        "timestamp": time.strftime("%Y-%m-%dT%H:%M:%S%z"),
        "checks": [
            {"name": c.name, "passed": bool(c.passed), "observed": c.observed,
             "target": c.target}
            for c in result.checks
        ],
    }
    with open(out_path + ".json", "w") as fh:
        json.dump(sidecar, fh, indent=2, default=str)
        fh.write("\n")


def _run(name, params, out, check):
    started = time.perf_counter()
    if params.get("config"):
        with open(params.pop("config")) as fh:
            file_params = json.load(fh)
        if not isinstance(file_params, dict):
            raise click.ClickException("config file must hold a JSON object")
        file_params.update({k: v for k, v in params.items() if v is not None})
        params = file_params
    params = {k: v for k, v in params.items() if v is not None}
    try:
        result = run_experiment(name, params)
    except CapacityError as exc:
        click.echo(f"capacity error: {exc}", err=True)
        click.echo("hint: full-space runs need d^N <= 4096 (N <= 12 qubits); "
                   "use --space sym for larger N", err=True)
        sys.exit(1)
    except (ValueError, RuntimeError) as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(1)

    out = out or f"metroscope_{name}.csv"
    _write_outputs(result, params, out, started)
    click.echo(f"wrote {out} ({len(result.rows)} rows) and {out}.json")
    for c in result.checks:
        status = "PASS" if c.passed else "FAIL"
        click.echo(f"[{status}] {c.name}: observed {c.observed:.6g}, target {c.target}")
    if check and not result.ok:
        sys.exit(2)
    sys.exit(0)


@click.group()
@click.version_option(version=__version__, prog_name="metroscope")
def main():
    """Fisher-information experiments on random bosonic states."""


def _common(f):
    f = click.option("--out", type=click.Path(dir_okay=False), default=None,
                     help="CSV output path (sidecar at <out>.json).")(f)
    f = click.option("--config", type=click.Path(exists=True, dir_okay=False),
                     default=None, help="JSON config file; flags override.")(f)
    f = click.option("--seed", type=int, default=None, help="Master seed.")(f)
    f = click.option("--workers", type=int, default=os.cpu_count(),
                     help="Worker threads for Monte Carlo loops.")(f)
    f = click.option("--check", is_flag=True,
                     help="Exit 2 if any tolerance check fails.")(f)
    return f


@main.command("avg-qfi")
@click.option("--space", type=click.Choice(["sym", "full"]), default=None)
@click.option("--N", "n_values", callback=_parse_multi, default=None,
              help="Particle counts, comma separated.")
@click.option("--d", type=int, default=None, help="Local dimension.")
@click.option("--pure", is_flag=True, help="Pure-state ensemble (default).")
@click.option("--depol", type=float, default=None, help="Depolarization weight p.")
@click.option("--spectrum", callback=_parse_multi, default=None,
              help="Explicit spectrum, comma separated.")
@click.option("--samples", type=int, default=None)
@_common
def avg_qfi(space, n_values, d, pure, depol, spectrum, samples, out, config,
            seed, workers, check):
    """Haar-average QFI vs the closed-form integration value.

    CSV columns: space,N,d,ensemble,samples,mean,std_error,analytic,rel_dev.
    """
    del pure  # pure is the default ensemble; flag kept for symmetry
    params = {"space": space, "N": n_values, "d": d, "depol": depol,
              "spectrum": spectrum, "samples": samples, "seed": seed,
              "workers": workers, "config": config}
    _run("avg-qfi", params, out, check)


@main.command("futility")
@click.option("--N", "n", type=int, default=None)
@click.option("--samples", type=int, default=None)
@click.option("--lu-N", "lu_n", type=int, default=None)
@click.option("--lu-samples", type=int, default=None)
@click.option("--lu-sweeps", type=int, default=None)
@_common
def futility(n, samples, lu_n, lu_samples, lu_sweeps, out, config, seed,
             workers, check):
    """Full-space Haar mean QFI vs the closed form and the LU bound.

    CSV columns: N,kind,samples,value,std_error,analytic,lu_bound.
    """
    params = {"N": n, "samples": samples, "lu_N": lu_n,
              "lu_samples": lu_samples, "lu_sweeps": lu_sweeps, "seed": seed,
              "workers": workers, "config": config}
    _run("futility", params, out, check)


@main.command("loss")
@click.option("--N", "n", type=int, default=None)
@click.option("--k", callback=_parse_multi, default=None,
              help="Lost-particle counts, comma separated.")
@click.option("--samples", type=int, default=None)
@_common
def loss_cmd(n, k, samples, out, config, seed, workers, check):
    """Average QFI after particle loss vs the analytic bounds; GHZ fragility.

    CSV columns: N,k,samples,mean,std_error,lower,upper.
    """
    params = {"N": n, "k": k, "samples": samples, "seed": seed,
              "workers": workers, "config": config}
    _run("loss", params, out, check)


@main.command("bs-equiv")
@click.option("--N", "n", type=int, default=None)
@click.option("--eta", callback=_parse_multi, default=None,
              help="Transmissivities, comma separated.")
@click.option("--states", type=int, default=None, help="Random states per eta.")
@click.option("--tol", type=float, default=None)
@_common
def bs_equiv(n, eta, states, tol, out, config, seed, workers, check):
    """Beam-splitter channel vs binomially weighted partial traces (Lemma-level
    exact equality).

    CSV columns: N,eta,states,max_block_dev,max_prob_dev.
    """
    del workers
    params = {"N": n, "eta": eta, "states": states, "tol": tol, "seed": seed,
              "config": config}
    _run("bs-equiv", params, out, check)


@main.command("mz-fi")
@click.option("--N", "n_values", callback=_parse_multi, default=None)
@click.option("--samples", type=int, default=None)
@click.option("--phi", callback=_parse_multi, default=None,
              help="Phases; accepts 'pi/2' style tokens.")
@_common
def mz_fi_cmd(n_values, samples, phi, out, config, seed, workers, check):
    """Interferometric FI of Haar states vs the analytic band and conjecture.

    CSV columns: N,phi,samples,mean,std_error,band_lower,band_upper,
    conjecture,conjecture_rel_dev.
    """
    params = {"N": n_values, "samples": samples, "phi": phi, "seed": seed,
              "workers": workers, "config": config}
    _run("mz-fi", params, out, check)


@main.command("circuit-converge")
@click.option("--N", "n", type=int, default=None)
@click.option("--K", "k_values", callback=_parse_multi, default=None,
              help="Circuit depths, comma separated.")
@click.option("--samples", type=int, default=None)
@click.option("--start", type=click.Choice(["polarized", "balanced", "noon"]),
              default=None)
@click.option("--phi", callback=_parse_multi, default=None)
@click.option("--ksuf-pct", type=float, default=None)
@_common
def circuit_converge(n, k_values, samples, start, phi, ksuf_pct, out, config,
                     seed, workers, check):
    """Random-circuit depth scan toward Haar-typical QFI/FI.

    CSV columns: N,start,K,qfi_mean,qfi_se,fi_mean_phi*,fi_se_phi*,
    qfi_target,fi_target.
    """
    del workers
    params = {"N": n, "K": k_values, "samples": samples, "start": start,
              "phi": phi, "ksuf_pct": ksuf_pct, "seed": seed, "config": config}
    _run("circuit-converge", params, out, check)


@main.command("concentration")
@click.option("--kind", type=click.Choice(
    ["haar_sym_isospectral", "haar_sym_depolarized", "haar_full_pure"]),
    default=None)
@click.option("--functional", type=click.Choice(["qfi", "mz_fi"]), default=None)
@click.option("--relstd-N", "relstd_n", callback=_parse_multi, default=None,
              help="Particle counts for the relative-std scan.")
@click.option("--samples", type=int, default=None)
@click.option("--eps", callback=_parse_multi, default=None)
@click.option("--phi", callback=_parse_multi, default=None)
@click.option("--p", type=float, default=None, help="Depolarization weight.")
@_common
def concentration(kind, functional, relstd_n, samples, eps, phi, p, out,
                  config, seed, workers, check):
    """Empirical deviation tails vs the analytic concentration bounds.

    CSV columns: kind,functional,N,samples,eps,tail,bound,vacuous,rel_std.
    """
    phi_val = phi[0] if phi else None
    params = {"kind": kind, "functional": functional, "relstd_N": relstd_n,
              "samples": samples, "eps": eps, "phi": phi_val, "p": p,
              "seed": seed, "workers": workers, "config": config}
    _run("concentration", params, out, check)


if __name__ == "__main__":
    main()
