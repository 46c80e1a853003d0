"""
xstable commands: lattice, diag, verify, simulate
"""

from contextlib import contextmanager
from pathlib import Path
from typing import List, Tuple

import click

import settings
from diagnostics import all_pairs_diagnostics, multiway_verdict, pair_diagnostic, parse_grid
from errors import DomainError, XStableError
from lattice import chi_from_v, d_from_v, enumerate_subsets, parse_index_set, parse_point, round_trip_residuals
from lattice.subsets import IndexSet
from logging_config import get_cli_logger
from models import load_spec
from simulation import ecdf_check, simulate
from .reports import file_digest, run_report, write_csv
from .suites import SUITE_NAMES, SuiteContext, run_suites

logger = get_cli_logger()

DIAG_HEADER = ["A", "B", "C", "grid_size", "sup_d", "sup_chi", "independent", "ci_possible", "ci_rule", "certificate"]


class CommandError(click.ClickException):
    """Library errors surface as usage errors"""
    exit_code = 2


@contextmanager
def reporting(command: str, out: Path, parameters: dict):
    try:
        with run_report(command, out, parameters) as report:
            yield report
    except XStableError as e:
        raise CommandError(str(e))


def parse_pair(text: str) -> Tuple[IndexSet, IndexSet]:
    """'A;B' with sets written as '1+2' or '1'"""
    parts = text.split(";")
    if len(parts) != 2:
        raise DomainError(f"invalid --sets value '{text}', expected A;B")
    return parse_index_set(parts[0]), parse_index_set(parts[1])


def parse_blocks(text: str) -> List[IndexSet]:
    blocks = [parse_index_set(part) for part in text.split(";") if part.strip()]
    if len(blocks) < 2:
        raise DomainError(f"invalid --blocks value '{text}', expected at least two blocks")
    return blocks


def resolve_threads(threads) -> int:
    return threads or settings.DEFAULT_THREADS


model_option = click.option("--model", "model_path", required=True, type=click.Path(dir_okay=False),
                            help="Model specification JSON file")
out_option = click.option("--out", default=settings.OUTPUT_DIR, show_default=True, type=click.Path(file_okay=False),
                          help="Output directory for CSV files and the run report")
threads_option = click.option("--threads", type=click.IntRange(min=1), default=None,
                              help="Worker threads (default: XSTABLE_THREADS or 1)")


@click.command("lattice")
@model_option
@click.option("--point", required=True, help="Evaluation point x1,...,xd in ascending label order")
@out_option
def lattice_command(model_path, point, out):
    """V, d and chi tables at one point, with round-trip residuals"""
    out = Path(out)
    with reporting("lattice", out, {"model": model_path, "point": point}) as report:
        loaded = load_spec(model_path)
        report.model_digest = loaded.digest
        model = loaded.model
        x = parse_point(point, model.ground)

        v_table = model.exponent_table(x)
        d_table, chi_table = d_from_v(v_table), chi_from_v(v_table)
        residuals = round_trip_residuals(v_table)
        rows = [
            (subset.label(), v_table[subset], d_table[subset], chi_table[subset])
            for subset in enumerate_subsets(model.ground)
        ]
        rows.append(("residual", residuals["V"], residuals["d"], residuals["chi"]))
        path = write_csv(out / "lattice.csv", ["subset", "V", "d", "chi"], rows)

        negatives = [str(subset) for table in (d_table, chi_table) for subset in table.negative_entries()]
        if negatives:
            logger.warning(f"Negative d/chi entries beyond tolerance: {', '.join(negatives)}")
        report.outputs.append(str(path))
        report.summary = {"entries": len(v_table), "residuals": residuals, "negative_entries": negatives}


@click.command("diag")
@model_option
@click.option("--sets", "pairs", multiple=True, help="Disjoint pair A;B, e.g. 1;5 or 1+2;3 (repeatable)")
@click.option("--all-pairs", is_flag=True, help="Every unordered disjoint pair")
@click.option("--blocks", default=None, help="Blocks A1;A2;... for the joint independence check")
@click.option("--grid", default="default", show_default=True,
              help="default | tensor:v1,v2,... | points:x1,..,xd;x1,..,xd")
@click.option("--tol", type=float, default=None, help="Zero tolerance (default 1e-9 * (1 + |I|))")
@threads_option
@out_option
def diag_command(model_path, pairs, all_pairs, blocks, grid, tol, threads, out):
    """Independence and conditional-independence diagnostics"""
    out = Path(out)
    parameters = {"model": model_path, "sets": list(pairs), "all_pairs": all_pairs, "blocks": blocks,
                  "grid": grid, "tol": tol}
    with reporting("diag", out, parameters) as report:
        if not pairs and not all_pairs and not blocks:
            raise click.UsageError("give --sets, --all-pairs or --blocks")
        loaded = load_spec(model_path)
        report.model_digest = loaded.digest
        model = loaded.model
        evaluation_grid = parse_grid(grid, model.ground)
        threads = resolve_threads(threads)

        if all_pairs:
            diagnostics = all_pairs_diagnostics(model, evaluation_grid, tol, threads)
        else:
            diagnostics = [
                pair_diagnostic(model, first, second, evaluation_grid, tol, threads)
                for first, second in map(parse_pair, pairs)
            ]
        if diagnostics:
            rows = [
                (item.first.label(), item.second.label(), item.rest.label(), item.grid_size, item.sup_d,
                 item.sup_chi, item.independent, item.ci_possible, item.ci_rule, item.certificate)
                for item in diagnostics
            ]
            report.outputs.append(str(write_csv(out / "diag.csv", DIAG_HEADER, rows)))
            report.summary["pairs"] = len(diagnostics)
            report.summary["independent"] = sum(item.independent for item in diagnostics)
            report.summary["ci_ruled_out"] = sum(not item.ci_possible for item in diagnostics)
            for item in diagnostics:
                logger.info(item.summary())

        if blocks:
            multiway = multiway_verdict(model, parse_blocks(blocks), evaluation_grid, tol)
            rows = [
                (multiway.blocks[i].label(), multiway.blocks[j].label(), multiway.pair_chi[(i, j)],
                 multiway.pair_d[(i, j)], multiway.pairwise_independent,
                 "" if multiway.factorization_residual is None else multiway.factorization_residual)
                for (i, j) in multiway.pair_chi
            ]
            header = ["A", "B", "sup_chi", "sup_d_marginal", "pairwise_independent", "factorization_residual"]
            report.outputs.append(str(write_csv(out / "multiway.csv", header, rows)))
            report.summary["jointly_independent"] = multiway.jointly_independent


@click.command("verify")
@click.option("--suite", required=True, type=click.Choice(SUITE_NAMES), help="Suite to run")
@click.option("--model", "model_path", default=None, type=click.Path(dir_okay=False),
              help="Optional model spec checked alongside the built-in fixtures")
@click.option("--seed", required=True, type=click.IntRange(0, 2 ** 64 - 1), help="Seed for fixtures and sampling")
@threads_option
@out_option
@click.pass_context
def verify_command(ctx, suite, model_path, seed, threads, out):
    """Run verification suites; exit 1 when a criterion fails"""
    out = Path(out)
    with reporting("verify", out, {"suite": suite, "model": model_path, "seed": seed}) as report:
        context = SuiteContext(seed=seed, threads=resolve_threads(threads))
        if model_path:
            loaded = load_spec(model_path)
            report.model_digest = loaded.digest
            context.model = loaded.model

        results = run_suites(suite, context)
        rows = []
        for result in results:
            if result.skipped:
                rows.append((result.name, "skipped", "", "", "", result.skipped))
            for criterion in result.criteria:
                rows.append((result.name, criterion.name, criterion.measured, criterion.threshold,
                             criterion.passed, criterion.detail))
        header = ["suite", "criterion", "measured", "threshold", "passed", "detail"]
        report.outputs.append(str(write_csv(out / "verify.csv", header, rows)))
        report.summary = {
            result.name: {
                "status": "skipped" if result.skipped else ("pass" if result.passed else "fail"),
                "elapsed": round(result.elapsed, 3),
                "notice": result.skipped,
                "tables": result.tables,
            }
            for result in results
        }
        if not all(result.passed for result in results):
            report.status = "fail"
    if report.failed:
        ctx.exit(1)


@click.command("simulate")
@model_option
@click.option("-n", "--samples", required=True, type=click.IntRange(min=1), help="Number of draws")
@click.option("--seed", required=True, type=click.IntRange(0, 2 ** 64 - 1), help="Random seed")
@threads_option
@out_option
@click.pass_context
def simulate_command(ctx, model_path, samples, seed, threads, out):
    """Exact samples of a discrete spectral model with an ECDF check"""
    out = Path(out)
    with reporting("simulate", out, {"model": model_path, "samples": samples, "seed": seed}) as report:
        loaded = load_spec(model_path)
        report.model_digest = loaded.digest
        model = loaded.model
        batch = simulate(model, samples, seed, resolve_threads(threads))

        sample_path = write_csv(out / "sample.csv", [str(label) for label in model.ground.labels],
                                (tuple(float(value) for value in row) for row in batch.values))
        check = ecdf_check(model, batch)
        check_rows = [
            (",".join(format(value, ".17g") for value in probe.point.coords), probe.ecdf, probe.expected,
             probe.se, probe.within_3se)
            for probe in check.probes
        ]
        check_path = write_csv(out / "ecdf_check.csv", ["probe", "ecdf", "exp_neg_v", "se", "within_3se"],
                               check_rows)
        report.outputs.extend([str(sample_path), str(check_path)])
        report.summary = {"sample_sha256": file_digest(sample_path), "probe_misses": check.misses,
                          "allowed_misses": check.allowed_misses}
        if not check.passed:
            report.status = "fail"
    if report.failed:
        ctx.exit(1)
