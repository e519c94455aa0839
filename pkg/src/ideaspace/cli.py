"""Command-line interface: ingest, analyze, plot, serve."""

from __future__ import annotations

import sys
from pathlib import Path

import click

from .corpus import DEFAULT_TEMPLATE, parse_corpus
from .embed import DEFAULT_DIM, DEFAULT_MODEL_ID, EmbedderConfig
from .reduce import UmapParams
from .report import (
    PipelineConfig,
    emit_eigen_svg,
    emit_heatmap_svg,
    emit_scatter_svg,
    emit_spider_svg,
    load_similarity,
    report_from_json,
    run_pipeline,
    write_reports,
)
from .server import serve as serve_reports


@click.group()
def main():
    """Embedding-space analytics for design ideation."""


@main.command()
@click.argument("corpus_file", type=click.Path(exists=True, path_type=Path))
@click.option("--format", "fmt", type=click.Choice(["json", "csv"]), default=None,
              help="Input format; inferred from the extension by default.")
def ingest(corpus_file: Path, fmt: str | None):
    """Validate a corpus file and summarize its contents."""
    if fmt is None:
        fmt = "csv" if corpus_file.suffix == ".csv" else "json"
    sets = parse_corpus(corpus_file.read_bytes(), format=fmt)
    click.echo(f"{corpus_file}: {len(sets)} idea set(s)")
    for s in sets:
        click.echo(f"  {s.set_id}: {len(s.ideas)} ideas - {s.problem_statement[:60]}")


@main.command()
@click.argument("corpus_file", type=click.Path(exists=True, path_type=Path))
@click.option("--backend", type=click.Choice(["offline", "remote"]), default="offline")
@click.option("--seed", type=int, default=0, help="Seed for embedding and projection.")
@click.option("--eps", type=float, default=None, help="DBSCAN eps; k-distance elbow if omitted.")
@click.option("--min-pts", type=int, default=5)
@click.option("--umap-neighbors", type=int, default=15)
@click.option("--union/--no-union", default=False, help="Also analyze all sets merged.")
@click.option("--dim", type=int, default=None, help="Embedding dimension.")
@click.option("--model", default=DEFAULT_MODEL_ID, help="Remote embedding model id.")
@click.option("--endpoint", default="https://api.openai.com", help="Remote API base URL.")
@click.option("--cache", type=click.Path(path_type=Path), default=None,
              help="Vector cache file; defaults to ~/.cache/ideaspace/embeddings.bin for remote runs.")
@click.option("--template", default=DEFAULT_TEMPLATE, show_default=True)
@click.option("--include-problem-statement", is_flag=True, default=False)
@click.option("--out", type=click.Path(path_type=Path), default=Path("reports"), show_default=True)
def analyze(corpus_file, backend, seed, eps, min_pts, umap_neighbors, union, dim,
            model, endpoint, cache, template, include_problem_statement, out):
    """Run the full pipeline and write one report per idea set."""
    if dim is None:
        dim = DEFAULT_DIM if backend == "remote" else 256
    if cache is None and backend == "remote":
        cache = Path.home() / ".cache" / "ideaspace" / "embeddings.bin"
    config = PipelineConfig(
        embedder=EmbedderConfig(
            backend=backend, endpoint_url=endpoint, model_id=model,
            dim=dim, seed=seed, cache_path=cache,
        ),
        umap=UmapParams(n_neighbors=umap_neighbors, seed=seed),
        eps=eps,
        min_pts=min_pts,
        union=union,
        template=template,
        include_problem_statement=include_problem_statement,
    )
    result = run_pipeline(corpus_file, config)
    written = write_reports(result, out)
    for path in written:
        click.echo(f"wrote {path}")
    for failure in result.failures:
        click.echo(f"FAILED [{failure.stage}] {failure.set_id}: {failure.cause}", err=True)
    if result.failures:
        sys.exit(1)


@main.command()
@click.argument("report_files", nargs=-1, required=True,
                type=click.Path(exists=True, path_type=Path))
@click.option("--kind", type=click.Choice(["scatter", "heatmap", "spider", "eigen"]),
              required=True)
@click.option("--out", type=click.Path(path_type=Path), default=None,
              help="Output SVG path; stdout if omitted.")
def plot(report_files, kind, out):
    """Render a report (or several, for eigen plots) as SVG."""
    if kind == "eigen":
        reports = [report_from_json(p.read_text(encoding="utf-8")) for p in report_files]
        svg = emit_eigen_svg(
            [r.metrics["eigenvalues"] for r in reports],
            names=[r.set_id for r in reports],
        )
    else:
        if len(report_files) != 1:
            raise click.UsageError(f"--kind {kind} takes exactly one report file")
        path = report_files[0]
        if kind == "heatmap":
            sidecar = path.with_name(path.name.replace(".report.json", ".similarity.json"))
            if not sidecar.exists():
                raise click.UsageError(f"similarity sidecar not found: {sidecar}")
            svg = emit_heatmap_svg(load_similarity(sidecar))
        else:
            report = report_from_json(path.read_text(encoding="utf-8"))
            svg = emit_scatter_svg(report) if kind == "scatter" else emit_spider_svg(report.metrics)
    if out is None:
        click.echo(svg, nl=False)
    else:
        out.write_text(svg, encoding="utf-8")
        click.echo(f"wrote {out}")


@main.command()
@click.argument("reports_dir", type=click.Path(exists=True, file_okay=False, path_type=Path))
@click.option("--bind", default="127.0.0.1:8765", show_default=True)
def serve(reports_dir, bind):
    """Serve reports and collect selections over HTTP."""
    serve_reports(reports_dir, bind)


if __name__ == "__main__":
    main()
