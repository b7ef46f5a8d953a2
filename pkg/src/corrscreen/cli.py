"""Command-line client for the screening service.

Every subcommand builds a request, executes it against an in-process
service instance (or a remote one when ``--server`` is given), and
writes the response to stdout or to files.  File parsing and file
writing happen on the client; the numerical work happens behind the
service boundary.  Exit codes follow sysexits(3): 64 for bad usage,
65 for infeasible or malformed data, 74 for I/O failures.
"""

import asyncio
import csv
import io
import json
import os
import shutil
import sys
import warnings

import click
import httpx

from . import __version__, report
from .errors import EXIT_BAD_FLAGS, EXIT_INFEASIBLE, EXIT_IO, InfeasibleError
from .ingest import load_matrix, load_treatments
from .uscore import compute_uscores, write_uscores_csv

_ARGV = []


class _RecordArgsGroup(click.Group):
    """Group that records raw argv so provenance blocks can echo it."""

    def main(self, args=None, **extra):
        global _ARGV
        _ARGV = list(args) if args is not None else list(sys.argv[1:])
        return super().main(args=args, **extra)


class ServiceClient:
    """POSTs to a remote service, or to an in-process app when no URL is set."""

    def __init__(self, server=None):
        self.server = server

    def post(self, path, payload):
        if self.server:
            with httpx.Client(base_url=self.server, timeout=None) as client:
                response = client.post(path, json=payload)
        else:
            response = asyncio.run(self._post_in_process(path, payload))
        return self._unwrap(response)

    @staticmethod
    async def _post_in_process(path, payload):
        from .service import create_app

        transport = httpx.ASGITransport(app=create_app())
        async with httpx.AsyncClient(transport=transport, base_url="http://corrscreen") as client:
            return await client.post(path, json=payload)

    @staticmethod
    def _unwrap(response):
        if response.status_code == 200:
            return response.json()
        try:
            body = response.json()
        except ValueError:
            body = {"detail": response.text}
        detail = body.get("detail", response.text)
        if isinstance(detail, list):
            # FastAPI request validation: flag values the schema rejected.
            parts = []
            for item in detail:
                location = ".".join(str(piece) for piece in item.get("loc", []) if piece != "body")
                parts.append(f"{location}: {item.get('msg', 'invalid')}" if location else item.get("msg", "invalid"))
            raise click.UsageError("; ".join(parts))
        if body.get("error_type") == "infeasible":
            raise InfeasibleError(str(detail))
        raise ValueError(str(detail))


def _provenance(subcommand, master_seed=None):
    return {
        "tool": "corrscreen",
        "version": __version__,
        "subcommand": subcommand,
        "argv": list(_ARGV),
        "master_seed": master_seed,
    }


def _parse_int_list(text, flag):
    """Parse '10,15,20', a single int, or an inclusive 'start:stop:step' range."""
    try:
        if ":" in text:
            parts = [int(piece) for piece in text.split(":")]
            if len(parts) == 2:
                parts.append(1)
            if len(parts) != 3 or parts[2] == 0:
                raise ValueError
            start, stop, step = parts
            values = list(range(start, stop + (1 if step > 0 else -1), step))
            if not values:
                raise ValueError
            return values
        return [int(piece) for piece in text.split(",")]
    except ValueError:
        raise click.UsageError(f"{flag} expects an integer, a comma list, or start:stop:step (got {text!r})")


def _parse_float_list(text, flag):
    """Parse '0.01,0.025', a single float, or an inclusive 'start:stop:step' range."""
    try:
        if ":" in text:
            start, stop, step = (float(piece) for piece in text.split(":"))
            if step == 0 or (stop - start) * step < 0:
                raise ValueError
            count = int(round((stop - start) / step)) + 1
            values = [start + k * step for k in range(count)]
            return [v for v in values if min(start, stop) - 1e-12 <= v <= max(start, stop) + 1e-12]
        return [float(piece) for piece in text.split(",")]
    except ValueError:
        raise click.UsageError(f"{flag} expects a number, a comma list, or start:stop:step (got {text!r})")


def _check_unit_interval(values, flag):
    for value in values:
        if not 0.0 < value < 1.0:
            raise click.UsageError(f"{flag} values must lie in (0, 1), got {value:g}")
    return values


def _scalar_or_list(values):
    return values[0] if len(values) == 1 else values


def _emit_text(text, path):
    if path:
        with open(path, "w") as fh:
            fh.write(text)
    else:
        click.echo(text, nl=False)


def _emit_json(obj, path):
    _emit_text(json.dumps(obj, indent=2, sort_keys=True) + "\n", path)


def _load_json_file(path):
    with open(path) as fh:
        return json.load(fh)


def _load_matrices(inputs, manifest, delimiter, header, constant_columns):
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        if manifest:
            matrices = list(load_treatments(manifest).matrices)
        else:
            matrices = [
                load_matrix(path, delimiter=delimiter, header=header, constant_columns=constant_columns)
                for path in inputs
            ]
    for entry in caught:
        click.echo(f"warning: {entry.message}", err=True)
    return matrices


@click.group(cls=_RecordArgsGroup)
@click.version_option(__version__, prog_name="corrscreen")
def cli():
    """Correlation screening for many variables on few samples."""


@cli.command("screen")
@click.option("--mode", type=click.Choice(["auto", "cross", "persistent"]), default="auto", show_default=True)
@click.option("--input", "inputs", multiple=True, type=click.Path(dir_okay=False),
              help="Sample CSV (rows samples, columns variables); repeat for cross/persistent.")
@click.option("--manifest", type=click.Path(dir_okay=False),
              help="JSON manifest listing treatment CSVs; aligns columns across files.")
@click.option("--rho", default=None, help="Threshold in (0, 1); comma list gives one per treatment.")
@click.option("--alpha", type=click.FloatRange(0, 1, min_open=True, max_open=True), default=None,
              help="Solve the threshold from this familywise error rate instead.")
@click.option("--j", type=click.FloatRange(0, min_open=True), default=1.0, show_default=True,
              help="Dependency factor in the Poisson rate.")
@click.option("--chunk-size", type=click.IntRange(1), default=2048, show_default=True)
@click.option("--edge-cap", type=click.IntRange(1), default=10_000_000, show_default=True,
              help="Edges kept in memory before spilling to disk.")
@click.option("--delimiter", default=",", show_default=True)
@click.option("--no-header", is_flag=True, help="Input files have no header row.")
@click.option("--constant-columns", type=click.Choice(["reject", "drop"]), default="reject", show_default=True)
@click.option("--edges", "edges_path", type=click.Path(dir_okay=False), help="Write the edge list CSV here.")
@click.option("--discoveries", "discoveries_path", type=click.Path(dir_okay=False),
              help="Write the discovery CSV here.")
@click.option("--summary", "summary_path", type=click.Path(dir_okay=False),
              help="Write the JSON summary here instead of stdout.")
@click.option("--uscores", "uscores_path", type=click.Path(dir_okay=False),
              help="Dump the U-score matrix (one file per treatment).")
@click.option("--server", default=None, help="Base URL of a running service; default runs in-process.")
def screen_command(mode, inputs, manifest, rho, alpha, j, chunk_size, edge_cap, delimiter, no_header,
                   constant_columns, edges_path, discoveries_path, summary_path, uscores_path, server):
    """Screen correlations above a threshold and report discoveries."""
    if manifest and inputs:
        raise click.UsageError("give --input files or --manifest, not both")
    if not manifest and not inputs:
        raise click.UsageError("no input data; pass --input or --manifest")
    if (rho is None) == (alpha is None):
        raise click.UsageError("exactly one of --rho or --alpha is required")

    matrices = _load_matrices(inputs, manifest, delimiter, not no_header, constant_columns)
    required = {"auto": (1, 1), "cross": (2, 2), "persistent": (2, None)}[mode]
    if len(matrices) < required[0] or (required[1] is not None and len(matrices) > required[1]):
        wanted = str(required[0]) if required[1] == required[0] else f"at least {required[0]}"
        raise click.UsageError(f"{mode} mode expects {wanted} input matrices, got {len(matrices)}")

    payload = {
        "mode": mode,
        "matrices": [
            {
                "values": mat.values.tolist(),
                "variable_ids": list(mat.variable_ids),
                "treatment_id": mat.treatment_id,
            }
            for mat in matrices
        ],
        "j": j,
        "chunk_size": chunk_size,
        "edge_cap": edge_cap,
        "max_edges": edge_cap if edges_path else 0,
    }
    if rho is not None:
        payload["rho"] = _scalar_or_list(_check_unit_interval(_parse_float_list(rho, "--rho"), "--rho"))
    else:
        payload["alpha"] = alpha

    response = ServiceClient(server).post("/screen", payload)

    if uscores_path:
        root, extension = os.path.splitext(uscores_path)
        for mat in matrices:
            target = uscores_path if len(matrices) == 1 else f"{root}.{mat.treatment_id}{extension or '.csv'}"
            write_uscores_csv(compute_uscores(mat), target)

    if edges_path:
        _write_edges(response, edges_path)
    if discoveries_path:
        _write_discoveries(response, discoveries_path)

    summary = {key: value for key, value in response.items() if key not in ("edges", "edges_truncated")}
    summary["provenance"] = _provenance("screen")
    _emit_json(summary, summary_path)


def _write_edges(response, path):
    if response.get("edges") is not None:
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerow(["var_i", "var_j", "r", "treatment"])
        for edge in response["edges"]:
            writer.writerow([edge["var_i"], edge["var_j"], f"{edge['r']:.17g}", edge["treatment"]])
        _emit_text(buffer.getvalue(), path)
        if response.get("edges_truncated"):
            click.echo("warning: edge list truncated by the service's max_edges cap", err=True)
    elif response.get("edges_path") and os.path.exists(response["edges_path"]):
        shutil.copyfile(response["edges_path"], path)
    else:
        click.echo("warning: edge list exceeded the cap and is only on the server "
                   f"({response.get('edges_path')})", err=True)


def _write_discoveries(response, path):
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(["var", "degree", "max_abs_r"])
    for var in response["discoveries"]:
        writer.writerow([var, response["degrees"][var], f"{response['max_abs_r'][var]:.17g}"])
    _emit_text(buffer.getvalue(), path)


@cli.group("phase")
def phase_group():
    """Critical thresholds and familywise-error solvers."""


@phase_group.command("solve")
@click.option("--mode", type=click.Choice(["auto", "cross", "persistent"]), default="auto", show_default=True)
@click.option("--p", type=click.IntRange(2), required=True, help="Number of variables.")
@click.option("--n", required=True, help="Samples per treatment; comma list for persistent.")
@click.option("--alpha", type=click.FloatRange(0, 1, min_open=True, max_open=True), default=None,
              help="Solve rho for this familywise error rate.")
@click.option("--rho", default=None, help="Report the rate and error level of this threshold.")
@click.option("--critical", is_flag=True, help="Return the phase-transition critical threshold.")
@click.option("--j", default="1.0", show_default=True, help="Dependency factor; comma list for persistent.")
@click.option("--h2a", type=click.FloatRange(1), default=1.0, show_default=True,
              help="Second-moment factor of treatment a (persistent critical point).")
@click.option("--h2b", type=click.FloatRange(1), default=1.0, show_default=True,
              help="Second-moment factor of treatment b (persistent critical point).")
@click.option("--variant", type=click.Choice(["unit_slope", "table_matching"]), default="table_matching",
              show_default=True, help="Critical-point calibration.")
@click.option("--exact-mean", is_flag=True, help="Solve against the exact discovery mean (auto mode).")
@click.option("--out", "out_path", type=click.Path(dir_okay=False), help="Write JSON here instead of stdout.")
@click.option("--server", default=None)
def phase_solve(mode, p, n, alpha, rho, critical, j, h2a, h2b, variant, exact_mean, out_path, server):
    """Solve for a threshold, or characterise one you supply."""
    goals = sum(value is not None for value in (alpha, rho)) + int(critical)
    if goals != 1:
        raise click.UsageError("give exactly one of --alpha, --rho, or --critical")
    payload = {
        "mode": mode,
        "p": p,
        "n": _scalar_or_list(_parse_int_list(n, "--n")),
        "critical": critical,
        "j": _scalar_or_list(_parse_float_list(j, "--j")),
        "h2a": h2a,
        "h2b": h2b,
        "variant": variant,
        "exact_mean": exact_mean,
    }
    if alpha is not None:
        payload["alpha"] = alpha
    if rho is not None:
        payload["rho"] = _scalar_or_list(_check_unit_interval(_parse_float_list(rho, "--rho"), "--rho"))
    response = ServiceClient(server).post("/phase/solve", payload)
    response["provenance"] = _provenance("phase solve")
    _emit_json(response, out_path)


@phase_group.command("table1")
@click.option("--p", type=click.IntRange(2), required=True, help="Number of variables.")
@click.option("--n", default="550,500,450,150,100,50,10,8,6", show_default=True,
              help="Sample counts to tabulate.")
@click.option("--j", type=click.FloatRange(0, min_open=True), default=1.0, show_default=True)
@click.option("--variant", type=click.Choice(["unit_slope", "table_matching"]), default="table_matching",
              show_default=True)
@click.option("--out", "out_path", type=click.Path(dir_okay=False), help="Write CSV here instead of stdout.")
@click.option("--server", default=None)
def phase_table1(p, n, j, variant, out_path, server):
    """Tabulate the critical threshold rho_c over sample counts."""
    payload = {"p": p, "n_values": _parse_int_list(n, "--n"), "j": j, "variant": variant}
    response = ServiceClient(server).post("/phase/table1", payload)
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(["n", "rho_c"])
    for row in response["rows"]:
        writer.writerow([row["n"], f"{row['rho_c']:.6f}"])
    _emit_text(buffer.getvalue(), out_path)


@cli.command("power-table")
@click.option("--p", type=click.IntRange(2), required=True, help="Number of variables.")
@click.option("--n", default="10:35:5", show_default=True, help="Sample counts (list or start:stop:step).")
@click.option("--alpha", default="0.01,0.025,0.05,0.075,0.1", show_default=True,
              help="Familywise error rates.")
@click.option("--beta", type=click.FloatRange(0, 1, min_open=True, max_open=True), required=True,
              help="Target detection power.")
@click.option("--j", type=click.FloatRange(0, min_open=True), default=1.0, show_default=True)
@click.option("--treatments", type=click.IntRange(2), default=2, show_default=True,
              help="Treatments the detection must persist across.")
@click.option("--per-treatment", is_flag=True,
              help="Require beta per treatment instead of jointly.")
@click.option("--out", "out_path", type=click.Path(dir_okay=False), help="Write CSV here instead of stdout.")
@click.option("--json-out", "json_path", type=click.Path(dir_okay=False), help="Also write cells as JSON.")
@click.option("--server", default=None)
def power_table_command(p, n, alpha, beta, j, treatments, per_treatment, out_path, json_path, server):
    """Solved thresholds and minimum detectable correlations over a grid."""
    payload = {
        "p": p,
        "n_values": _parse_int_list(n, "--n"),
        "alphas": _parse_float_list(alpha, "--alpha"),
        "beta": beta,
        "j": j,
        "treatments": treatments,
        "per_treatment": per_treatment,
    }
    response = ServiceClient(server).post("/power-table", payload)
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(["n", "alpha", "rho", "rho1", "beta", "p"])
    for cell in response["cells"]:
        writer.writerow([
            cell["n"], f"{cell['alpha']:g}", f"{cell['rho']:.6f}", f"{cell['rho1']:.6f}",
            f"{cell['beta']:g}", cell["p"],
        ])
    _emit_text(buffer.getvalue(), out_path)
    if json_path:
        _emit_json({"cells": response["cells"], "provenance": _provenance("power-table")}, json_path)


@cli.command("p0")
@click.option("--rho", type=click.FloatRange(0, 1), required=True)
@click.option("--n", type=click.IntRange(3), required=True)
@click.option("--server", default=None)
def p0_command(rho, n, server):
    """Probability that a null correlation exceeds rho (spherical cap)."""
    response = ServiceClient(server).post("/p0", {"rho": rho, "n": n})
    response["provenance"] = _provenance("p0")
    _emit_json(response, None)


@cli.command("simulate")
@click.option("--op", type=click.Choice(["fwer", "poisson", "phase-curve", "operating-points"]),
              default="fwer", show_default=True)
@click.option("--spec", "spec_path", type=click.Path(dir_okay=False),
              help="JSON file with the simulation request; flags override its fields.")
@click.option("--p", type=click.IntRange(2), default=None)
@click.option("--n", default=None, help="Samples per treatment; comma list for persistent.")
@click.option("--mode", type=click.Choice(["auto", "cross", "persistent"]), default=None)
@click.option("--distribution", type=click.Choice(["gaussian", "student_t"]), default=None)
@click.option("--dof", type=click.FloatRange(2, min_open=True), default=None,
              help="Degrees of freedom for student_t.")
@click.option("--cov", type=click.Choice(["diagonal", "planted_block", "q_sparse"]), default=None)
@click.option("--q", type=click.IntRange(0), default=None, help="Dependent block size.")
@click.option("--rho1", type=click.FloatRange(-1, 1, min_open=True, max_open=True), default=None,
              help="Within-block correlation.")
@click.option("--permutation-seed", type=int, default=None,
              help="Scatter the dependent block over random columns.")
@click.option("--rho", default=None, help="Screening threshold; comma list for persistent.")
@click.option("--alpha", type=click.FloatRange(0, 1, min_open=True, max_open=True), default=None,
              help="Solve the threshold per replicate set from this error rate.")
@click.option("--j", type=click.FloatRange(0, min_open=True), default=None)
@click.option("--replicates", type=click.IntRange(1), default=None)
@click.option("--master-seed", type=int, default=None)
@click.option("--chunk-size", type=click.IntRange(1), default=None)
@click.option("--workers", type=click.IntRange(1), default=None,
              help="Worker processes; defaults to $CORRSCREEN_WORKERS or the machine's core count.")
@click.option("--rho-grid", default=None, help="Thresholds for phase-curve (list or start:stop:step).")
@click.option("--n-grid", default=None, help="Sample counts for phase-curve.")
@click.option("--beta", "beta_values", default=None, help="Power targets for operating-points.")
@click.option("--out", "out_path", type=click.Path(dir_okay=False), help="Write JSON here instead of stdout.")
@click.option("--curve-out", type=click.Path(dir_okay=False),
              help="Write phase-curve or operating-points rows as CSV.")
@click.option("--server", default=None)
def simulate_command(op, spec_path, p, n, mode, distribution, dof, cov, q, rho1, permutation_seed,
                     rho, alpha, j, replicates, master_seed, chunk_size, workers, rho_grid, n_grid,
                     beta_values, out_path, curve_out, server):
    """Monte Carlo checks: error rates, Poisson dispersion, phase curves."""
    payload = _load_json_file(spec_path) if spec_path else {}
    payload["op"] = op

    overrides = {
        "p": p,
        "mode": mode,
        "distribution": distribution,
        "dof": dof,
        "alpha": alpha,
        "j": j,
        "replicates": replicates,
        "master_seed": master_seed,
        "chunk_size": chunk_size,
    }
    for key, value in overrides.items():
        if value is not None:
            payload[key] = value
    if n is not None:
        payload["n"] = _scalar_or_list(_parse_int_list(n, "--n"))
    if rho is not None:
        payload["rho"] = _scalar_or_list(_check_unit_interval(_parse_float_list(rho, "--rho"), "--rho"))
    if rho_grid is not None:
        payload["rho_grid"] = _check_unit_interval(_parse_float_list(rho_grid, "--rho-grid"), "--rho-grid")
    if n_grid is not None:
        payload["n_grid"] = _parse_int_list(n_grid, "--n-grid")
    if beta_values is not None:
        payload["beta_values"] = _parse_float_list(beta_values, "--beta")
    if any(value is not None for value in (cov, q, rho1, permutation_seed)):
        covariance = payload.get("covariance", {})
        for key, value in (("kind", cov), ("q", q), ("rho1", rho1), ("permutation_seed", permutation_seed)):
            if value is not None:
                covariance[key] = value
        payload["covariance"] = covariance
    if workers is None and "workers" not in payload:
        workers = int(os.environ.get("CORRSCREEN_WORKERS", "0")) or os.cpu_count() or 1
    if workers is not None:
        payload["workers"] = workers
    if "p" not in payload or "n" not in payload:
        raise click.UsageError("simulate needs --p and --n (or a --spec file providing them)")

    response = ServiceClient(server).post("/simulate", payload)
    rows = response.get("curve") or response.get("operating_points")
    if curve_out:
        if not rows:
            raise click.UsageError(f"--curve-out applies to phase-curve or operating-points, not {op}")
        buffer = io.StringIO()
        writer = csv.DictWriter(buffer, fieldnames=list(rows[0].keys()), lineterminator="\n")
        writer.writeheader()
        writer.writerows(rows)
        _emit_text(buffer.getvalue(), curve_out)
    out = {key: value for key, value in response.items() if value is not None}
    out["provenance"] = _provenance("simulate", master_seed=payload.get("master_seed", 0))
    _emit_json(out, out_path)


@cli.command("inclusion-graph")
@click.option("--result", "result_paths", multiple=True, type=click.Path(dir_okay=False),
              help="JSON summaries from screen runs; repeat per subset.")
@click.option("--subsets", "subsets_path", type=click.Path(dir_okay=False),
              help="JSON object mapping subset label to a list of variable ids.")
@click.option("--label", "labels", multiple=True,
              help="Override labels for --result files, in order.")
@click.option("--cutoff", type=click.FloatRange(0, 1, min_open=True), default=0.9, show_default=True,
              help="Minimum inclusion fraction for an edge.")
@click.option("--edge-csv", "edge_csv_path", type=click.Path(dir_okay=False))
@click.option("--dot", "dot_path", type=click.Path(dir_okay=False))
@click.option("--summary", "summary_path", type=click.Path(dir_okay=False),
              help="Write the JSON graph here instead of stdout.")
@click.option("--server", default=None)
def inclusion_graph_command(result_paths, subsets_path, labels, cutoff, edge_csv_path, dot_path,
                            summary_path, server):
    """How discovery sets from different screens include each other."""
    if subsets_path and result_paths:
        raise click.UsageError("give --result files or --subsets, not both")
    if subsets_path:
        subsets = _load_json_file(subsets_path)
        if not isinstance(subsets, dict):
            raise ValueError("--subsets file must be a JSON object of label -> id list")
    else:
        if len(result_paths) < 2:
            raise click.UsageError("need at least two --result files (or --subsets)")
        if labels and len(labels) != len(result_paths):
            raise click.UsageError("--label count must match --result count")
        subsets = {}
        for index, path in enumerate(result_paths):
            summary = _load_json_file(path)
            label = labels[index] if labels else summary.get("treatment") or os.path.splitext(os.path.basename(path))[0]
            if label in subsets:
                raise click.UsageError(f"duplicate subset label {label!r}; disambiguate with --label")
            subsets[label] = summary.get("discoveries", [])

    response = ServiceClient(server).post("/inclusion-graph", {"subsets": subsets, "cutoff": cutoff})
    if edge_csv_path or dot_path:
        graph = report.InclusionGraph(
            nodes=dict(response["nodes"]),
            edges=tuple(
                (edge["src"], edge["dst"], edge["fraction"], edge["full_inclusion"])
                for edge in response["edges"]
            ),
            cutoff=response["cutoff"],
        )
        if edge_csv_path:
            report.export(graph, "edge-csv", edge_csv_path)
        if dot_path:
            report.export(graph, "dot", dot_path)
    response["provenance"] = _provenance("inclusion-graph")
    _emit_json(response, summary_path)


@cli.command("serve")
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", type=int, default=8000, show_default=True)
def serve_command(host, port):
    """Run the screening service over HTTP."""
    import uvicorn

    from .service import create_app

    uvicorn.run(create_app(), host=host, port=port)


class _NeverRaised(Exception):
    pass


_NoArgsHelp = getattr(click.exceptions, "NoArgsIsHelpError", _NeverRaised)


def main(argv=None):
    try:
        cli.main(args=argv, prog_name="corrscreen", standalone_mode=False)
        return 0
    except _NoArgsHelp as exc:
        click.echo(exc.format_message())
        return 0
    except click.exceptions.Abort:
        click.echo("aborted", err=True)
        return 130
    except click.UsageError as exc:
        exc.show()
        return EXIT_BAD_FLAGS
    except click.ClickException as exc:
        exc.show()
        return exc.exit_code
    except InfeasibleError as exc:
        click.echo(f"error: {exc}", err=True)
        return EXIT_INFEASIBLE
    except (OSError, httpx.HTTPError) as exc:
        click.echo(f"error: {exc}", err=True)
        return EXIT_IO
    except ValueError as exc:
        click.echo(f"error: {exc}", err=True)
        return EXIT_INFEASIBLE


if __name__ == "__main__":
    sys.exit(main())
