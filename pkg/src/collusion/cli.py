"""Single command-line entry point wiring the whole pipeline.

Stages compose via files so every intermediate is auditable:

    collusion simulate --players 2000 --matches 1000 --colluders 10 \
        --strength 0.9 --seed 7 --out data/
    collusion detect --data data/ --mode top_k --k 20 --out report.csv
    collusion evaluate --report report.csv --truth data/ground_truth.csv --k 20
    collusion serve --report report.csv --data data/ --listen 127.0.0.1:8877
"""

from __future__ import annotations

import json
import os
import sys
from functools import wraps
from pathlib import Path

import click

from . import detect as detect_mod
from . import graph as graph_mod
from . import iforest, simulate
from .errors import CollusionError
from .features import PairContext, extract_pairs, write_features_csv
from .ingest import filter_active_players, load_dataset


def _fail(exc: Exception, as_json: bool) -> None:
    if as_json:
        click.echo(
            json.dumps({"error": type(exc).__name__, "message": str(exc)}),
            err=True,
        )
    else:
        click.echo(f"error: {exc}", err=True)
    sys.exit(1)


def handles_errors(fn):
    @wraps(fn)
    def wrapper(*args, **kwargs):
        as_json = bool(kwargs.get("as_json"))
        try:
            return fn(*args, **kwargs)
        except (CollusionError, OSError, ValueError) as exc:
            _fail(exc, as_json)

    return wrapper


@click.group()
@click.version_option(package_name="collusion-toolkit")
def main():
    """Collusion detection toolkit for team-based multiplayer telemetry."""


@main.command("simulate")
@click.option("--players", type=int, required=True, help="Population size.")
@click.option("--matches", type=int, required=True, help="Number of matches to generate.")
@click.option("--colluders", type=int, default=0, show_default=True, help="Planted colluding pairs.")
@click.option("--strength", type=float, default=0.5, show_default=True, help="Collusion strength in [0,1].")
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--team-size", type=int, default=2, show_default=True)
@click.option("--teams", type=int, default=20, show_default=True, help="Teams per match.")
@click.option("--map-extent", type=float, default=80_000.0, show_default=True, help="Map side length, game units.")
@click.option("--out", "out_dir", type=click.Path(path_type=Path), required=True, help="Output directory.")
@click.option("--json", "as_json", is_flag=True, help="Machine-readable errors/output.")
@handles_errors
def simulate_cmd(players, matches, colluders, strength, seed, team_size, teams, map_extent, out_dir, as_json):
    """Generate a synthetic dataset with planted colluders."""
    cfg = simulate.SimConfig(
        num_players=players,
        num_matches=matches,
        colluder_pairs=colluders,
        colluder_strength=strength,
        team_size=team_size,
        teams_per_match=teams,
        seed=seed,
        map_extent=map_extent,
    )
    dataset, truth = simulate.generate(cfg)
    simulate.write_dataset(dataset, truth, out_dir)
    payload = {
        "out": str(out_dir),
        "matches": len(dataset.matches),
        "players": players,
        "colluder_pairs": len(truth.colluding_pairs),
    }
    click.echo(json.dumps(payload) if as_json else f"wrote {payload['matches']} matches to {out_dir}")


@main.command()
@click.option("--data", "data_dir", type=click.Path(path_type=Path), required=True)
@click.option("--json", "as_json", is_flag=True)
@handles_errors
def ingest(data_dir, as_json):
    """Parse and validate a dataset directory, printing the ingest report."""
    _, report = load_dataset(data_dir)
    payload = {
        "matches_accepted": report.matches_accepted,
        "matches_rejected": report.matches_rejected,
        "players_seen": report.players_seen,
        "violations": [
            {"match": mid, "code": v.code, "detail": v.detail} for mid, v in report.violations
        ],
    }
    if as_json:
        click.echo(json.dumps(payload))
    else:
        click.echo(
            f"accepted {report.matches_accepted}, rejected {report.matches_rejected}, "
            f"players {report.players_seen}"
        )
        for mid, v in report.violations:
            click.echo(f"  {mid}: {v.code}: {v.detail}")


@main.command()
@click.option("--data", "data_dir", type=click.Path(path_type=Path), required=True)
@click.option("--plot", "plot_path", type=click.Path(path_type=Path), default=None,
              help="Also render the distance-distribution figure to this file.")
@click.option("--json", "as_json", is_flag=True)
@handles_errors
def stats(data_dir, plot_path, as_json):
    """Dataset statistics panel: pair counts, distances, streaks."""
    dataset, _ = load_dataset(data_dir)
    summary = detect_mod.summarize(dataset)
    if plot_path is not None:
        from . import plots

        rows = extract_pairs(dataset, 1, None)
        plots.save_distance_histograms(
            [r.avg_distance_team for r in rows if r.avg_distance_team is not None],
            [r.avg_distance_opp for r in rows if r.avg_distance_opp is not None],
            plot_path,
        )
    if as_json:
        click.echo(json.dumps(summary.to_dict()))
    else:
        d = summary.to_dict()
        click.echo(f"players {d['players']}, matches {d['matches']}")
        for side in ("teammates", "opponents"):
            s = d[side]
            click.echo(
                f"{side}: pairs {s['pairs']}, avg matches {s['avg_matches']:.2f}, "
                f"max {s['max_matches']}, avg distance {s['avg_distance']:.2f}, "
                f"3+ consecutive {s['pairs_with_3plus_consecutive']}"
            )
        click.echo(f"avg opponent rank diff {d['avg_rank_diff_opp']:.2f}")
        click.echo(f"acquaintances {d['acquaintances']}")


@main.command()
@click.option("--data", "data_dir", type=click.Path(path_type=Path), required=True)
@click.option("--out", "out_path", type=click.Path(path_type=Path), required=True)
@click.option("--min-shared", type=int, default=5, show_default=True,
              help="Minimum shared opponent matches per pair.")
@click.option("--min-player-matches", type=int, default=3, show_default=True,
              help="Drop players with fewer total matches.")
@click.option("--json", "as_json", is_flag=True)
@handles_errors
def features(data_dir, out_path, min_shared, min_player_matches, as_json):
    """Export the opponent-pair feature table as CSV."""
    dataset, _ = load_dataset(data_dir)
    dataset = filter_active_players(dataset, min_player_matches)
    rows = extract_pairs(dataset, min_shared, PairContext.OPPONENT)
    with open(out_path, "w", encoding="utf-8") as fh:
        write_features_csv(rows, fh)
    click.echo(json.dumps({"rows": len(rows), "out": str(out_path)}) if as_json
               else f"wrote {len(rows)} pair rows to {out_path}")


@main.command()
@click.option("--data", "data_dir", type=click.Path(path_type=Path), required=True)
@click.option("--out", "out_path", type=click.Path(path_type=Path), required=True)
@click.option("--min-shared", type=int, default=5, show_default=True,
              help="Minimum shared opponent matches per pair.")
@click.option("--min-player-matches", type=int, default=3, show_default=True)
@click.option("--trees", type=int, default=100, show_default=True, help="Estimators in the forest.")
@click.option("--subsample", type=int, default=1000, show_default=True, help="Samples per tree.")
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--mode", type=click.Choice([m.value for m in detect_mod.ThresholdMode]),
              default="score_zero", show_default=True, help="Flagging rule.")
@click.option("--k", type=int, default=20, show_default=True, help="Pairs to flag in top_k mode.")
@click.option("--contamination", type=float, default=0.05, show_default=True,
              help="Flagged fraction in contamination mode.")
@click.option("--scale/--no-scale", "scale_features", default=True, show_default=True,
              help="Min-max scale features before fitting.")
@click.option("--plots/--no-plots", "render_plots", default=True, show_default=True,
              help="Render the score scatter next to the report.")
@click.option("--threads", type=int, default=os.cpu_count, help="Parallelism cap. [default: machine]")
@click.option("--json", "as_json", is_flag=True)
@handles_errors
def detect(data_dir, out_path, min_shared, min_player_matches, trees, subsample, seed,
           mode, k, contamination, scale_features, render_plots, threads, as_json):
    """Score opponent pairs and write the ranked detection report."""
    del threads  # stages are deterministic single-pass; accepted as a cap
    dataset, _ = load_dataset(data_dir)
    mode = detect_mod.ThresholdMode(mode)
    if mode is detect_mod.ThresholdMode.TOP_K:
        threshold = float(k)
    elif mode is detect_mod.ThresholdMode.CONTAMINATION:
        threshold = contamination
    else:
        threshold = 0.0
    cfg = detect_mod.DetectConfig(
        min_shared_matches=min_shared,
        min_player_matches=min_player_matches,
        forest=iforest.ForestParams(n_trees=trees, subsample=subsample, seed=seed),
        threshold_mode=mode,
        threshold_value=threshold,
        scale_features=scale_features,
    )
    rows, scores, _ = detect_mod.score_pairs(dataset, cfg)
    flagged = detect_mod.flag_pairs(rows, scores, cfg)
    with open(out_path, "w", encoding="utf-8") as fh:
        detect_mod.write_report(flagged, fh)

    figure = None
    if render_plots:
        from . import plots

        figure = str(plots.save_score_scatter(
            rows, scores, Path(out_path).with_name(Path(out_path).stem + "_scatter.png")
        ))

    if as_json:
        click.echo(json.dumps({"flagged": len(flagged), "out": str(out_path), "figure": figure}))
    else:
        click.echo(f"flagged {len(flagged)} pairs -> {out_path}")
        if flagged:
            click.echo(detect_mod.format_table2_block(flagged))
        if figure:
            click.echo(f"figure -> {figure}")


@main.command()
@click.option("--data", "data_dir", type=click.Path(path_type=Path), required=True)
@click.option("--format", "fmt", type=click.Choice(["json", "dot"]), default="json", show_default=True)
@click.option("--out", "out_path", type=click.Path(path_type=Path), required=True)
@click.option("--min-matches", type=int, default=3, show_default=True,
              help="Shared matches needed for an edge.")
@click.option("--json", "as_json", is_flag=True)
@handles_errors
def graph(data_dir, fmt, out_path, min_matches, as_json):
    """Export the teammate/opponent social graph."""
    dataset, _ = load_dataset(data_dir)
    g = graph_mod.build_graph_from_dataset(dataset, min_matches=min_matches)
    Path(out_path).write_bytes(graph_mod.export_graph(g, format=fmt))
    payload = {"nodes": len(g.nodes), "edges": len(g.edges), "out": str(out_path)}
    click.echo(json.dumps(payload) if as_json
               else f"wrote {payload['nodes']} nodes / {payload['edges']} edges to {out_path}")


@main.command()
@click.option("--report", "report_path", type=click.Path(path_type=Path), required=True)
@click.option("--truth", "truth_path", type=click.Path(path_type=Path), required=True)
@click.option("--k", type=int, default=20, show_default=True)
@click.option("--json", "as_json", is_flag=True)
@handles_errors
def evaluate(report_path, truth_path, k, as_json):
    """Recall/precision of a report's top-k against planted ground truth."""
    report = detect_mod.read_report(report_path)
    truth = simulate.read_ground_truth(truth_path)
    result = detect_mod.evaluate(report, truth, k)
    payload = {
        "k": result.k,
        "recall_at_k": result.recall_at_k,
        "precision_at_k": result.precision_at_k,
        "planted_found": result.planted_found,
        "planted_total": len(truth.colluding_pairs),
    }
    click.echo(json.dumps(payload) if as_json else (
        f"recall@{k}: {result.recall_at_k:.3f}  precision@{k}: {result.precision_at_k:.3f}  "
        f"found {result.planted_found}/{len(truth.colluding_pairs)}"
    ))


@main.command()
@click.option("--report", "report_path", type=click.Path(path_type=Path), default=None,
              envvar="COLL_REPORT", help="Detection report CSV. [env: COLL_REPORT]")
@click.option("--data", "data_dir", type=click.Path(path_type=Path), default=None,
              envvar="COLL_DATA", help="Dataset directory. [env: COLL_DATA]")
@click.option("--verdicts", "verdict_path", type=click.Path(path_type=Path),
              default=Path("verdicts.jsonl"), show_default=True, envvar="COLL_VERDICTS",
              help="Append-only verdict log. [env: COLL_VERDICTS]")
@click.option("--listen", default="127.0.0.1:8877", show_default=True, envvar="COLL_LISTEN",
              help="host:port to bind. [env: COLL_LISTEN]")
@click.option("--json", "as_json", is_flag=True)
@handles_errors
def serve(report_path, data_dir, verdict_path, listen, as_json):
    """Run the review service (backend for the triage console)."""
    import uvicorn

    from .service import create_app

    host, _, port = listen.rpartition(":")
    if not host or not port.isdigit():
        raise ValueError(f"--listen expects host:port, got {listen!r}")
    app = create_app(
        report_path=report_path, data_path=data_dir, verdict_log_path=verdict_path
    )
    uvicorn.run(app, host=host, port=int(port), log_level="warning")


if __name__ == "__main__":
    main()
