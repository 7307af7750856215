"""Command-line entry point: index, query, eval, and serve subcommands.

Exit codes follow one discipline across subcommands: 0 success, 1 usage
errors, 2 I/O failures, 3 data or format mismatches.
"""

from __future__ import annotations

import sys

import click

from .color import QuantizationScheme
from .errors import (
    CorruptDataError,
    EmptyCorpusError,
    EmptyStoreError,
    MissingFeatureError,
    SchemeMismatchError,
    SingleClassError,
    StoreFormatError,
    UnlabeledCorpusError,
    UnsupportedFormatError,
)
from .estimators import coerce_image
from .evaluation import EvalConfig, evaluate_corpus
from .metrics import METRIC_KINDS, MetricSpec
from .query import QuerySpec, parse_weights, rank
from .store import ExtractionConfig, extract_features, ingest_directory, load_store, save_store

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_IO = 2
EXIT_DATA = 3


def _parse_triple(ctx, param, value):
    try:
        parts = [int(p) for p in value.split(",")]
        if len(parts) != 3:
            raise ValueError
        return QuantizationScheme(*parts)
    except ValueError:
        raise click.BadParameter(f"expected H,S,V positive bin counts, got {value!r}")


def _parse_grid(ctx, param, value):
    try:
        parts = [int(p) for p in value.split(",")]
        if len(parts) != 2 or parts[0] < 1 or parts[1] < 1:
            raise ValueError
        return tuple(parts)
    except ValueError:
        raise click.BadParameter(f"expected ROWS,COLS positive counts, got {value!r}")


def _parse_weights_opt(ctx, param, value):
    if value is None:
        return None
    try:
        return parse_weights(value)
    except ValueError as exc:
        raise click.BadParameter(str(exc))


def _metric_spec(metric: str, mk: float | None) -> MetricSpec:
    if metric == "minkowski" and mk is None:
        raise click.UsageError("--metric minkowski requires --mk ORDER")
    if metric != "minkowski" and mk is not None:
        raise click.UsageError("--mk only applies to --metric minkowski")
    try:
        return MetricSpec(metric, mk)
    except ValueError as exc:
        raise click.UsageError(str(exc))


def _default_weights(config, metric: MetricSpec) -> dict:
    families = config.enabled_families()
    if metric.kind in ("bray_curtis", "hamming"):
        families = tuple(f for f in families if f != "texture")
    return {family: 1.0 for family in families}


@click.group()
@click.version_option(package_name="visq")
def cli():
    """Content-based image retrieval: index a corpus, query it, score it."""


@cli.command("index")
@click.option("--dir", "directory", required=True, help="Corpus root, laid out as root/<label>/<image>.")
@click.option("--out", required=True, type=click.Path(dir_okay=False), help="Store file to write.")
@click.option("--hsv-bins", default="16,4,4", callback=_parse_triple, help="Histogram bins per HSV axis.")
@click.option("--grid", default="4,4", callback=_parse_grid, help="Block grid ROWS,COLS for local histograms.")
@click.option("--no-lch", is_flag=True, help="Skip block histograms.")
@click.option("--no-texture", is_flag=True, help="Skip texture moments.")
def cmd_index(directory, out, hsv_bins, grid, no_lch, no_texture):
    """Extract features for every image under --dir into a store file."""
    config = ExtractionConfig(
        scheme=hsv_bins,
        grid_rows=grid[0],
        grid_cols=grid[1],
        include_lch=not no_lch,
        include_texture=not no_texture,
    )
    store, skipped = ingest_directory(directory, config)
    save_store(store, out)
    scheme = config.scheme
    click.echo(
        f"indexed {len(store)} entries ({skipped} skipped) -> {out} "
        f"[hsv {scheme.h_bins}x{scheme.s_bins}x{scheme.v_bins}, "
        f"grid {config.grid_rows}x{config.grid_cols}, "
        f"lch {'on' if config.include_lch else 'off'}, "
        f"texture {'on' if config.include_texture else 'off'}]"
    )


@cli.command("query")
@click.option("--store", "store_path", required=True, help="Store file written by index.")
@click.option("--image", "image_path", required=True, help="Query image file.")
@click.option("--metric", default="l1", type=click.Choice(METRIC_KINDS), help="Distance measure.")
@click.option("--mk", type=float, default=None, help="Minkowski order (required for --metric minkowski).")
@click.option("--k", default=10, type=int, help="Result count.")
@click.option("--weights", callback=_parse_weights_opt, default=None,
              help="Per-family weights, e.g. gch=1,lch=1,texture=1.")
def cmd_query(store_path, image_path, metric, mk, k, weights):
    """Rank stored images against a query image and print the top k."""
    spec_metric = _metric_spec(metric, mk)
    store = load_store(store_path)
    if weights is None:
        weights = _default_weights(store.config, spec_metric)
    try:
        spec = QuerySpec(metric=spec_metric, k=k, weights=weights)
    except ValueError as exc:
        raise click.UsageError(str(exc))
    img = coerce_image(image_path)
    fv = extract_features(img, store.config, id=image_path)
    results = rank(fv, store, spec)
    families = spec.active_families()
    header = ["rank", "id", "label", "total"] + list(families)
    rows = [
        [str(i + 1), r.id, r.label or "-", f"{r.total_distance:.6f}"]
        + [f"{r.per_feature[f]:.6f}" for f in families]
        for i, r in enumerate(results)
    ]
    widths = [max(len(h), *(len(row[j]) for row in rows)) if rows else len(h)
              for j, h in enumerate(header)]
    click.echo("  ".join(h.ljust(w) for h, w in zip(header, widths)))
    for row in rows:
        click.echo("  ".join(cell.ljust(w) for cell, w in zip(row, widths)))


@cli.command("eval")
@click.option("--store", "store_path", required=True, help="Store file written by index.")
@click.option("--x", required=True, type=int, help="Returned-set size per query.")
@click.option("--metric", default="l1", type=click.Choice(METRIC_KINDS), help="Distance measure.")
@click.option("--mk", type=float, default=None, help="Minkowski order.")
@click.option("--weights", callback=_parse_weights_opt, default=None,
              help="Per-family weights, e.g. gch=1,lch=1,texture=1.")
@click.option("--report", required=True, type=click.Path(dir_okay=False), help="CSV report to write.")
def cmd_eval(store_path, x, metric, mk, weights, report):
    """Score retrieval quality over a labeled store and write the CSV report."""
    spec_metric = _metric_spec(metric, mk)
    if x < 1:
        raise click.UsageError("--x must be >= 1")
    store = load_store(store_path)
    if weights is None:
        weights = _default_weights(store.config, spec_metric)
    try:
        cfg = EvalConfig(x=x, metric=spec_metric, weights=weights)
    except ValueError as exc:
        raise click.UsageError(str(exc))
    result = evaluate_corpus(store, cfg)
    result.write_csv(report)
    macro_p, macro_r, macro_s = result.macro
    click.echo(f"MACRO,,{macro_p:.6f},{macro_r:.6f},{macro_s:.6f}")


@cli.command("serve")
@click.option("--store", "store_path", required=True, help="Store file written by index.")
@click.option("--port", default=8000, type=int, help="Listen port.")
@click.option("--host", default="127.0.0.1", help="Bind address.")
@click.option("--assets", default=None, help="Directory of UI assets to serve at /.")
def cmd_serve(store_path, port, host, assets):
    """Serve the HTTP query API (and optionally the browser UI)."""
    import uvicorn

    from .server import create_app

    store = load_store(store_path)
    app = create_app(store, assets_dir=assets)
    click.echo(f"serving {len(store)} entries on http://{host}:{port}")
    uvicorn.run(app, host=host, port=port, log_level="warning")


_IO_ERRORS = (OSError, EmptyCorpusError, UnsupportedFormatError, CorruptDataError)
_DATA_ERRORS = (
    StoreFormatError,
    SchemeMismatchError,
    MissingFeatureError,
    EmptyStoreError,
    UnlabeledCorpusError,
    SingleClassError,
)


def main(argv=None) -> int:
    """Run the CLI with the documented exit-code discipline."""
    try:
        cli.main(args=argv, standalone_mode=False)
    except click.UsageError as exc:
        exc.show()
        return EXIT_USAGE
    except click.ClickException as exc:
        exc.show()
        return EXIT_USAGE
    except click.Abort:
        click.echo("aborted", err=True)
        return EXIT_USAGE
    except _DATA_ERRORS as exc:
        click.echo(f"error: {exc}", err=True)
        return EXIT_DATA
    except _IO_ERRORS as exc:
        click.echo(f"error: {exc}", err=True)
        return EXIT_IO
    except ValueError as exc:
        click.echo(f"error: {exc}", err=True)
        return EXIT_USAGE
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
