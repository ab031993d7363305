#!/usr/bin/env python3
"""
Main entry point for random-cc

Exit codes: 0 success, 1 usage or invalid input, 2 validation or domain error,
3 undersampling (outputs are still written).
"""

import json
import logging
import sys
import time
from contextlib import contextmanager
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple

import click
import typer
from rich.console import Console

from random_cc import __version__
from random_cc.errors import BudgetExceededError, InvalidInputError, RCCError
from random_cc.evaluation.accuracy import (
    ReferenceMethod,
    approximation_accuracy,
    harvest_cycles,
    summarize_accuracy,
)
from random_cc.graphs.graph import (
    Graph,
    GraphModel,
    GraphModelSpec,
    generate,
    mle_edge_probability,
    read_edge_list,
    save_edge_list,
)
from random_cc.monitoring.logging_config import set_run_id, setup_logging
from random_cc.monitoring.manifest import RunManifest
from random_cc.monitoring.profiler import RuntimeProfiler
from random_cc.oracles.oracles import (
    TransferCurrentOracle,
    rejection_sample_cells,
    rho_exact_matrix_tree,
    rho_monte_carlo,
    spanning_tree_count,
    tree_count_report,
    tree_frequency_rho,
)
from random_cc.probability.occurrence import rho_exact_lrw
from random_cc.sampling.cycle_census import estimate_counts, exact_counts
from random_cc.sampling.induced_cycles import Approximation
from random_cc.sampling.lifting_sampler import (
    SamplingConfig,
    SamplingMode,
    parse_length_probabilities,
    sample_lifting,
    sample_random_cell_complex,
)
from random_cc.topology.complex_analysis import analysis_record, dump_complex, read_complex
from random_cc.trees.spanning_forest import Cycle
from random_cc.utils.config import Config
from random_cc.utils.seeding import SeedStream, derive_seed

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_VALIDATION = 2
EXIT_UNDERSAMPLED = 3

app = typer.Typer(name="random-cc", help="Random two-dimensional cell complexes from spanning trees")
oracle_app = typer.Typer(help="Exact and brute-force reference computations")
app.add_typer(oracle_app, name="oracle")

console = Console(stderr=True)
logger = logging.getLogger(__name__)

state: Dict[str, Any] = {"config": Config.default()}


@app.callback()
def configure(
    config_file: Optional[str] = typer.Option(None, "--config", "-c", help="Configuration file path"),
    workers: Optional[int] = typer.Option(None, "--workers", "-w", help="Worker threads"),
    log_level: Optional[str] = typer.Option(None, "--log-level", help="Log level"),
    structured_logs: bool = typer.Option(False, "--structured-logs", help="JSON log lines"),
):
    """Load configuration and set up logging for every subcommand"""
    with exit_on_error():
        config = Config.load(config_file) if config_file else Config.default()
    if workers is not None:
        config.performance.workers = max(1, workers)
    if log_level is not None:
        config.monitoring.log_level = log_level
    if structured_logs:
        config.monitoring.structured_logs = True
    setup_logging(
        config.monitoring.log_level,
        structured=config.monitoring.structured_logs,
        log_file=config.monitoring.log_file,
    )
    set_run_id()
    state["config"] = config


def _config() -> Config:
    return state["config"]


@contextmanager
def exit_on_error():
    """Map library errors to exit codes"""
    try:
        yield
    except InvalidInputError as e:
        console.print(f"[bold red]Invalid input:[/bold red] {e}")
        raise typer.Exit(EXIT_USAGE)
    except OSError as e:
        console.print(f"[bold red]Cannot access file:[/bold red] {e}")
        raise typer.Exit(EXIT_USAGE)
    except RCCError as e:
        console.print(f"[bold red]{type(e).__name__}:[/bold red] {e}")
        raise typer.Exit(EXIT_VALIDATION)


def _emit(text: str, out: Optional[str]) -> List[str]:
    """
    Write a primary output to a file, or to stdout when no path is given.

    Relative paths resolve against the configured output directory.
    """
    if out is None:
        sys.stdout.write(text)
        return []
    target = Path(_config().output.directory) / out
    target.parent.mkdir(parents=True, exist_ok=True)
    target.write_text(text)
    return [str(target)]


def _write_manifest(
    subcommand: str,
    parameters: Dict[str, Any],
    seed: Optional[int],
    outputs: List[str],
    started: float,
    exit_code: int = EXIT_OK,
):
    if not outputs:
        return
    manifest = RunManifest(
        subcommand=subcommand,
        parameters=parameters,
        seed=seed,
        version=__version__,
        wall_time_seconds=time.perf_counter() - started,
        outputs=outputs,
        exit_code=exit_code,
    )
    manifest.write(outputs[0] + _config().output.manifest_suffix)


def _parse_ints(text: str) -> List[int]:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise InvalidInputError(f"expected comma-separated integers, got {text!r}")


def _parse_er(text: str) -> Tuple[int, float]:
    parts = text.split(",")
    if len(parts) != 2:
        raise InvalidInputError(f"expected 'N,P', got {text!r}")
    try:
        return int(parts[0]), float(parts[1])
    except ValueError:
        raise InvalidInputError(f"expected 'N,P', got {text!r}")


def _load_skeleton(graph: Optional[str], er: Optional[str], seed: int) -> Tuple[Graph, Optional[float]]:
    """Skeleton from an edge-list file or an ER(n, p) draw; p is returned when known"""
    if (graph is None) == (er is None):
        raise InvalidInputError("give exactly one of --graph and --er")
    if graph is not None:
        return read_edge_list(graph), None
    n, p = _parse_er(er)
    spec = GraphModelSpec.erdos_renyi(n, p, seed=derive_seed(seed, SeedStream.GRAPH))
    return generate(spec), spec.known_edge_probability()


def _approximation(name: str) -> Approximation:
    try:
        return Approximation(name)
    except ValueError:
        raise InvalidInputError(f"approximation must be one of fast, estimated, exact; got {name!r}")


@app.command("gen-graph")
def gen_graph(
    model: str = typer.Option("er", "--model", "-m", help="er | complete | bipartite | sbm | ba | karate"),
    n: int = typer.Option(0, "--n", help="Number of nodes"),
    p: float = typer.Option(0.0, "--p", help="ER edge probability"),
    a: int = typer.Option(0, "--a", help="First side of a complete bipartite graph"),
    b: int = typer.Option(0, "--b", help="Second side of a complete bipartite graph"),
    blocks: Optional[str] = typer.Option(None, "--blocks", help="SBM block sizes, e.g. 10,10"),
    p_in: float = typer.Option(0.0, "--p-in", help="SBM probability within a block"),
    p_out: float = typer.Option(0.0, "--p-out", help="SBM probability between blocks"),
    attach: int = typer.Option(1, "--attach", help="Barabasi-Albert edges per new node"),
    seed: int = typer.Option(0, "--seed", "-s", help="Master seed"),
    out: Optional[str] = typer.Option(None, "--out", "-o", help="Edge-list output file"),
):
    """Draw a 1-skeleton and write it as an edge list"""
    started = time.perf_counter()
    with exit_on_error():
        try:
            kind = GraphModel(model)
        except ValueError:
            raise InvalidInputError(f"unknown model {model!r}")
        graph_seed = derive_seed(seed, SeedStream.GRAPH)
        if kind is GraphModel.ER:
            spec = GraphModelSpec.erdos_renyi(n, p, seed=graph_seed)
        elif kind is GraphModel.COMPLETE:
            spec = GraphModelSpec.complete(n)
        elif kind is GraphModel.COMPLETE_BIPARTITE:
            spec = GraphModelSpec.complete_bipartite(a, b)
        elif kind is GraphModel.SBM:
            sizes = _parse_ints(blocks or "")
            probabilities = [[p_in if i == j else p_out for j in range(len(sizes))] for i in range(len(sizes))]
            spec = GraphModelSpec.sbm(sizes, probabilities, seed=graph_seed)
        elif kind is GraphModel.BARABASI_ALBERT:
            spec = GraphModelSpec.barabasi_albert(n, attach, seed=graph_seed)
        else:
            spec = GraphModelSpec.karate()

        g = generate(spec)
        outputs = _emit(save_edge_list(g), out)
        mle = mle_edge_probability(g) if g.node_count >= 2 else float("nan")
        console.print(f"n={g.node_count} m={g.edge_count} mle_p={mle:.6f}")

    _write_manifest("gen-graph", spec.to_dict(), seed, outputs, started)


@app.command()
def sample(
    graph: Optional[str] = typer.Option(None, "--graph", "-g", help="Edge-list file"),
    er: Optional[str] = typer.Option(None, "--er", help="Draw the skeleton from ER: N,P"),
    trees: Optional[int] = typer.Option(None, "--trees", "-t", help="Spanning trees s"),
    uniform_pl: Optional[str] = typer.Option(None, "--uniform-pl", help="Target P_l, e.g. 3:0.5,4:0.1"),
    cells: Optional[float] = typer.Option(None, "--cells", help="Expected number of cells nu"),
    threshold: Optional[int] = typer.Option(None, "--threshold", help="Occurrence threshold t"),
    approx: Optional[str] = typer.Option(None, "--approx", help="fast | estimated | exact"),
    q: Optional[float] = typer.Option(None, "--q", help="Assumed edge probability (default: MLE)"),
    seed: int = typer.Option(0, "--seed", "-s", help="Master seed"),
    out: Optional[str] = typer.Option(None, "--out", "-o", help="Complex JSON output file"),
):
    """Lift a skeleton to a random two-dimensional cell complex"""
    started = time.perf_counter()
    settings = _config().sampling
    with exit_on_error():
        if (uniform_pl is None) == (cells is None):
            raise InvalidInputError("give exactly one of --uniform-pl and --cells")
        if uniform_pl is not None:
            mode, targets, nu = SamplingMode.UNIFORM, parse_length_probabilities(uniform_pl), 0.0
        else:
            mode, targets, nu = SamplingMode.EXPECTED_CELLS, {}, cells
        cfg = SamplingConfig(
            trees=trees if trees is not None else settings.trees,
            mode=mode,
            target_probabilities=targets,
            expected_cells=nu,
            threshold=threshold if threshold is not None else settings.threshold,
            approximation=_approximation(approx or settings.approximation),
            seed=seed,
            edge_probability=q,
            workers=_config().performance.workers,
        )
        if er is not None and graph is None:
            n, p = _parse_er(er)
            _, complex_, report = sample_random_cell_complex(n, p, cfg)
        else:
            g, _ = _load_skeleton(graph, er, seed)
            complex_, report = sample_lifting(g, cfg)

        meta = {
            "seed": seed,
            "s": cfg.trees,
            "mode": cfg.mode.value,
            "approximation": cfg.approximation.value,
            "undersampled_lengths": report.undersampled_lengths,
        }
        outputs = _emit(dump_complex(complex_, meta), out)
        if out is not None:
            outputs += _emit(json.dumps(report.to_dict(), sort_keys=True, indent=2) + "\n", out + ".report.json")
        console.print(
            f"cells={complex_.cell_count} duplicates={report.duplicate_hits} "
            f"undersampled_lengths={report.undersampled_lengths}"
        )

    exit_code = EXIT_UNDERSAMPLED if report.undersampled else EXIT_OK
    parameters = cfg.to_dict()
    parameters.update({"graph": graph, "er": er})
    _write_manifest("sample", parameters, seed, outputs, started, exit_code)
    if exit_code != EXIT_OK:
        raise typer.Exit(exit_code)


@app.command()
def count(
    graph: Optional[str] = typer.Option(None, "--graph", "-g", help="Edge-list file"),
    er: Optional[str] = typer.Option(None, "--er", help="Draw the skeleton from ER: N,P"),
    trees: Optional[int] = typer.Option(None, "--trees", "-t", help="Spanning trees s"),
    approx: Optional[str] = typer.Option(None, "--approx", help="fast | estimated | exact"),
    exact: bool = typer.Option(False, "--exact", help="Append exact counts when within budget"),
    q: Optional[float] = typer.Option(None, "--q", help="Assumed edge probability (default: MLE)"),
    seed: int = typer.Option(0, "--seed", "-s", help="Master seed"),
    out: Optional[str] = typer.Option(None, "--out", "-o", help="CSV output file"),
):
    """Estimate the number of simple cycles per length"""
    started = time.perf_counter()
    config = _config()
    with exit_on_error():
        g, p = _load_skeleton(graph, er, seed)
        approximation = _approximation(approx or config.sampling.approximation)
        s = trees if trees is not None else config.sampling.trees
        census = estimate_counts(
            g,
            s,
            approximation,
            seed=seed,
            edge_probability=q if q is not None else p,
            workers=config.performance.workers,
        )
        if exact:
            try:
                census.exact = exact_counts(
                    g,
                    max_cycle_space_dimension=config.oracle.max_cycle_space_dimension,
                    max_visited_path_nodes=config.oracle.max_visited_path_nodes,
                )
            except BudgetExceededError as e:
                logger.warning(f"Exact counts skipped: {e}")
        outputs = _emit(census.to_csv(), out)

    parameters = {
        "graph": graph,
        "er": er,
        "trees": s,
        "approximation": approximation.value,
        "exact": exact,
        "q": q,
    }
    _write_manifest("count", parameters, seed, outputs, started)


@app.command()
def analyze(
    cc: str = typer.Option(..., "--cc", help="Complex JSON file"),
    out: Optional[str] = typer.Option(None, "--out", "-o", help="JSON output file"),
):
    """Betti numbers and orientability of a cell complex"""
    started = time.perf_counter()
    with exit_on_error():
        complex_, _meta = read_complex(cc)
        record = analysis_record(complex_)
        outputs = _emit(json.dumps(record, sort_keys=True) + "\n", out)
    _write_manifest("analyze", {"cc": cc}, None, outputs, started)


@app.command()
def bench(
    sizes: str = typer.Option("100,200,400,800", "--sizes", help="Node counts"),
    p: float = typer.Option(0.5, "--p", help="ER edge probability"),
    trees: Optional[int] = typer.Option(None, "--trees", "-t", help="Spanning trees s"),
    cells_per_node: Optional[float] = typer.Option(None, "--cells-per-node", help="nu / n"),
    repeats: int = typer.Option(1, "--repeats", help="Runs per size"),
    seed: int = typer.Option(0, "--seed", "-s", help="Master seed"),
    out: Optional[str] = typer.Option(None, "--out", "-o", help="CSV output file"),
):
    """Time the full pipeline per size and fit the log-log slope"""
    started = time.perf_counter()
    config = _config()
    s = trees if trees is not None else config.sampling.trees
    per_node = cells_per_node if cells_per_node is not None else config.sampling.cells_per_node
    profiler = RuntimeProfiler()
    with exit_on_error():
        for n in _parse_ints(sizes):
            for run in range(repeats):
                cfg = SamplingConfig(
                    trees=s,
                    mode=SamplingMode.EXPECTED_CELLS,
                    expected_cells=per_node * n,
                    threshold=config.sampling.threshold,
                    approximation=Approximation.FAST,
                    seed=derive_seed(seed, n, run),
                    workers=config.performance.workers,
                )
                run_started = time.perf_counter()
                g, complex_, _ = sample_random_cell_complex(n, p, cfg)
                elapsed = time.perf_counter() - run_started
                profiler.record(n, elapsed, edge_count=g.edge_count, cells=complex_.cell_count)
                console.print(f"n={n} run={run} seconds={elapsed:.3f} cells={complex_.cell_count}")

        slope = profiler.loglog_slope()
        outputs = _emit(profiler.to_frame().to_csv(index=False, lineterminator="\n"), out)
        console.print(f"log-log slope: {slope:.3f}")

    parameters = {"sizes": sizes, "p": p, "trees": s, "cells_per_node": per_node, "repeats": repeats}
    parameters["slope"] = slope
    _write_manifest("bench", parameters, seed, outputs, started)


def _parse_cycle(text: str) -> Cycle:
    return Cycle.canonical(_parse_ints(text))


@oracle_app.command("rho")
def oracle_rho(
    graph: str = typer.Option(..., "--graph", "-g", help="Edge-list file"),
    cycle: str = typer.Option(..., "--cycle", help="Cycle nodes, e.g. 0,1,2"),
    method: str = typer.Option(
        "matrix-tree", "--method", help="matrix-tree | enumeration | lrw | transfer-current | monte-carlo"
    ),
    trials: Optional[int] = typer.Option(None, "--trials", help="Monte Carlo trials"),
    seed: int = typer.Option(0, "--seed", "-s", help="Master seed"),
):
    """Exact (or Monte Carlo) probability that a uniform spanning tree induces a cycle"""
    config = _config()
    with exit_on_error():
        g = read_edge_list(graph)
        c = _parse_cycle(cycle)
        c.validate(g)
        if method == "matrix-tree":
            value: Any = rho_exact_matrix_tree(g, c)
        elif method == "enumeration":
            value = tree_frequency_rho(g, c, config.oracle.tree_enumeration_budget)
        elif method == "lrw":
            value = rho_exact_lrw(c, g)
        elif method == "transfer-current":
            value = TransferCurrentOracle(g).rho(c)
        elif method == "monte-carlo":
            estimate = rho_monte_carlo(
                g, c, trials or config.oracle.monte_carlo_trials, seed, config.performance.workers
            )
            value = f"{estimate.estimate} +- {estimate.standard_error}"
        else:
            raise InvalidInputError(f"unknown method {method!r}")
    typer.echo(str(value))


@oracle_app.command("trees")
def oracle_trees(
    graph: str = typer.Option(..., "--graph", "-g", help="Edge-list file"),
    cycle: Optional[str] = typer.Option(None, "--cycle", help="Also count trees inducing this cycle"),
):
    """Spanning tree count t(G), optionally with |T_c|"""
    with exit_on_error():
        g = read_edge_list(graph)
        if cycle is None:
            record = {"total_trees": spanning_tree_count(g)}
        else:
            report = tree_count_report(g, _parse_cycle(cycle))
            record = {"total_trees": report.total_trees, "trees_containing": report.trees_containing}
    typer.echo(json.dumps(record, sort_keys=True))


@oracle_app.command("reject")
def oracle_reject(
    graph: str = typer.Option(..., "--graph", "-g", help="Edge-list file"),
    length: int = typer.Option(..., "--length", "-l", help="Cycle length"),
    count: int = typer.Option(1, "--count", help="Cells to draw"),
    max_attempts: Optional[int] = typer.Option(None, "--max-attempts", help="Draw budget"),
    seed: int = typer.Option(0, "--seed", "-s", help="Master seed"),
):
    """Uniform l-cycles by rejection sampling of node permutations"""
    with exit_on_error():
        g = read_edge_list(graph)
        result = rejection_sample_cells(
            g, length, count, seed, max_attempts or _config().oracle.rejection_max_attempts
        )
    record = {
        "cycles": [c.to_list() for c in result.cycles],
        "attempts": result.attempts,
        "accepted": result.accepted,
        "shortfall": result.shortfall,
    }
    typer.echo(json.dumps(record, sort_keys=True))


@oracle_app.command("accuracy")
def oracle_accuracy(
    graph: Optional[str] = typer.Option(None, "--graph", "-g", help="Edge-list file"),
    er: Optional[str] = typer.Option(None, "--er", help="Draw the skeleton from ER: N,P"),
    trees: int = typer.Option(10, "--trees", "-t", help="Trees to harvest cycles from"),
    reference: str = typer.Option("transfer-current", "--reference", help="transfer-current | matrix-tree | monte-carlo"),
    trials: Optional[int] = typer.Option(None, "--trials", help="Monte Carlo trials"),
    seed: int = typer.Option(0, "--seed", "-s", help="Master seed"),
    out: Optional[str] = typer.Option(None, "--out", "-o", help="Per-cycle CSV output file"),
):
    """Compare both approximations with an exact reference on harvested cycles"""
    started = time.perf_counter()
    config = _config()
    with exit_on_error():
        try:
            method = ReferenceMethod(reference)
        except ValueError:
            raise InvalidInputError(f"unknown reference {reference!r}")
        g, p = _load_skeleton(graph, er, seed)
        cycles = harvest_cycles(g, trees, seed)
        frame = approximation_accuracy(
            g,
            cycles,
            q=p,
            reference=method,
            trials=trials or config.oracle.monte_carlo_trials,
            seed=seed,
            workers=config.performance.workers,
        )
        outputs = _emit(frame.to_csv(index=False, lineterminator="\n"), out) if out else []
        summary = summarize_accuracy(frame)
    typer.echo(json.dumps(summary, sort_keys=True))
    parameters = {"graph": graph, "er": er, "trees": trees, "reference": reference}
    _write_manifest("oracle accuracy", parameters, seed, outputs, started)


def run(argv: Optional[List[str]] = None) -> int:
    """Invoke the CLI and return its exit code"""
    try:
        result = app(args=argv, prog_name="random-cc", standalone_mode=False)
    except click.exceptions.UsageError as e:
        e.show()
        return EXIT_USAGE
    except click.exceptions.Abort:
        console.print("[yellow]Interrupted[/yellow]")
        return EXIT_USAGE
    return result if isinstance(result, int) else EXIT_OK


def main():
    """Main entry point"""
    sys.exit(run())


if __name__ == "__main__":
    main()
