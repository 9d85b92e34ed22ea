"""Command-line entry point.

Measurement subcommands call the library in-process; `serve` runs the
FastAPI labeling service. Commands that read a label store refuse to run
while a labeling session holds its lock.
"""

from __future__ import annotations

import functools
import sys
from pathlib import Path

import click

from . import __version__
from .anchor import AnchorQuery
from .classifier import (
    TrainConfig,
    evaluate,
    load_model,
    predict,
    save_model,
    split,
    train,
)
from .documents import read_corpus
from .embeddings import read_embeddings
from .errors import AmbientkitError
from .gazetteer import load_gazetteer
from .ingest import CORPUS_FILENAME, binning_from_manifest, read_manifest, run_ingest
from .labels import (
    LabelRecord,
    LabelStore,
    SOURCE_HUMAN,
    SOURCE_MODEL,
    StoreLock,
    read_labels,
    write_labels,
)
from .lexicon import apply_lens, load_lexicon
from .ngrams import count_tokens
from .pipeline import load_config, run_pipeline
from .rtd import RtdConfig, rtd, write_rtd_report
from .sentiment import FrequencyDistribution, Partition, build_series, write_series
from .timebins import TimeBin, parse_epoch
from .wordshift import shift_contributions, write_shift_report

_MATCH_MODES = {"word": "word_boundary", "substring": "substring"}


def _friendly(fn):
    """Turn library errors into clean CLI failures (exit code 1)."""

    @functools.wraps(fn)
    def wrapper(*args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except AmbientkitError as exc:
            raise click.ClickException(str(exc)) from exc
        except OSError as exc:
            raise click.ClickException(str(exc)) from exc

    return wrapper


def _corpus_file(path: Path) -> Path:
    return path / CORPUS_FILENAME if path.is_dir() else path


def _read_documents(path: Path):
    errors: list = []
    docs = read_corpus(_corpus_file(path), errors)
    if errors:
        click.echo(f"skipped {len(errors)} bad records in {path}", err=True)
    return docs


def _parse_lens(value: str | None) -> tuple[float, float] | None:
    if value is None:
        return None
    try:
        lo_text, hi_text = value.split(":", 1)
        return float(lo_text), float(hi_text)
    except ValueError:
        raise click.BadParameter("expected LO:HI, e.g. 4:6", param_hint="--lens")


def _refuse_if_locked(labels_path: Path):
    holder = StoreLock(labels_path).holder()
    if holder is not None:
        raise click.ClickException(
            f"label store {labels_path} is in use by a labeling session (pid {holder}); "
            "stop it before running measurements"
        )


def _effective_labels(path: Path) -> dict[str, str]:
    return {doc_id: record.label for doc_id, record in read_labels(path).items()}


@click.group()
@click.version_option(__version__)
def main():
    """Corpus curation and lexical measurement toolkit."""


@main.command()
@click.option("--corpus", required=True, type=click.Path(exists=True, dir_okay=False, path_type=Path))
@click.option("--anchor", required=True)
@click.option("--match-mode", type=click.Choice(sorted(_MATCH_MODES)), default="word", show_default=True)
@click.option("--lang", default=None, help="Keep only records with this language tag.")
@click.option("--gazetteer", type=click.Path(exists=True, dir_okay=False, path_type=Path), default=None)
@click.option("--epoch", default=None, help="Bin alignment start, ISO 8601 (required).")
@click.option("--bin-days", type=int, default=14, show_default=True)
@click.option("--out", required=True, type=click.Path(file_okay=False, path_type=Path))
@_friendly
def ingest(corpus, anchor, match_mode, lang, gazetteer, epoch, bin_days, out):
    """Filter a raw corpus by keyword/language/location and bin it."""
    if epoch is None:
        # Bin alignment is never guessed; see the manifest of any prior run.
        raise click.UsageError("--epoch is required")
    if bin_days < 1:
        raise click.UsageError("--bin-days must be >= 1")
    query = AnchorQuery(
        anchor=anchor.lower(),
        match_mode=_MATCH_MODES[match_mode],
        required_language=lang.lower() if lang else None,
    )
    binning = TimeBin(epoch_start=parse_epoch(epoch), width=bin_days * 86_400)
    gaz = load_gazetteer(gazetteer) if gazetteer else None
    stats = run_ingest(corpus, query, out, gazetteer=gaz, binning=binning)
    for key, value in stats.as_dict().items():
        click.echo(f"{key}: {value}")
    click.echo(f"bins: {len(stats.bin_documents)}")


@main.command("sentiment-series")
@click.option("--corpus", required=True, type=click.Path(exists=True, file_okay=False, path_type=Path))
@click.option("--labels", required=True, type=click.Path(exists=True, dir_okay=False, path_type=Path))
@click.option("--lexicon", "lexicon_path", required=True, type=click.Path(exists=True, dir_okay=False, path_type=Path))
@click.option("--lens", default=None, help="Exclude scores in LO:HI (inclusive).")
@click.option("--background", type=click.Path(exists=True, dir_okay=False, path_type=Path), default=None)
@click.option("--out", required=True, type=click.Path(dir_okay=False, path_type=Path))
@click.option("--plot", "plot_path", type=click.Path(dir_okay=False, path_type=Path), default=None)
@_friendly
def sentiment_series(corpus, labels, lexicon_path, lens, background, out, plot_path):
    """Per-bin mean lexicon score for the R, NR, and combined partitions."""
    _refuse_if_locked(labels)
    manifest = read_manifest(corpus)
    binning = binning_from_manifest(manifest)
    if binning is None:
        raise click.ClickException(
            f"{corpus} was ingested without binning; re-run ingest with --epoch"
        )
    lexicon = load_lexicon(lexicon_path)
    lens_pair = _parse_lens(lens)
    if lens_pair is not None:
        lexicon = apply_lens(lexicon, *lens_pair)

    docs = _read_documents(corpus)
    labels_by_id = _effective_labels(labels)
    series_list = [
        build_series(docs, binning, lexicon, partition, labels_by_id)
        for partition in (Partition.R, Partition.NR, Partition.COMBINED)
    ]
    if background is not None:
        series_list.append(
            build_series(_read_documents(background), binning, lexicon, Partition.BACKGROUND)
        )
    write_series(series_list, binning, out)
    for series in series_list:
        click.echo(
            f"{series.partition.value}: {len(series.bins)} bins"
            + (f", {len(series.gaps)} gaps" if series.gaps else "")
        )
    if plot_path is not None:
        from .plotting import plot_series

        plot_series(series_list, binning, plot_path)
        click.echo(f"plot: {plot_path}")


@main.command()
@click.option("--ref", "ref_path", required=True, type=click.Path(exists=True, dir_okay=False, path_type=Path))
@click.option("--comp", "comp_path", required=True, type=click.Path(exists=True, dir_okay=False, path_type=Path))
@click.option("--lexicon", "lexicon_path", required=True, type=click.Path(exists=True, dir_okay=False, path_type=Path))
@click.option("--top", type=int, default=20, show_default=True)
@click.option("--out", required=True, type=click.Path(dir_okay=False, path_type=Path))
@click.option("--plot", "plot_path", type=click.Path(dir_okay=False, path_type=Path), default=None)
@_friendly
def wordshift(ref_path, comp_path, lexicon_path, top, out, plot_path):
    """Per-word decomposition of the mean-score difference between corpora."""
    lexicon = load_lexicon(lexicon_path)
    ref = FrequencyDistribution.from_counts(
        count_tokens((d.text for d in _read_documents(ref_path)), 1)
    )
    comp = FrequencyDistribution.from_counts(
        count_tokens((d.text for d in _read_documents(comp_path)), 1)
    )
    report = shift_contributions(ref, comp, lexicon)
    write_shift_report(report, out, top=top)
    click.echo(f"phi_ref={report.phi_ref!r}")
    click.echo(f"phi_comp={report.phi_comp!r}")
    click.echo(f"total_shift={report.total_shift!r}")
    if plot_path is not None:
        from .plotting import plot_shift

        plot_shift(report, plot_path, top=top)
        click.echo(f"plot: {plot_path}")


@main.command("rtd")
@click.option("--corpus1", required=True, type=click.Path(exists=True, dir_okay=False, path_type=Path))
@click.option("--corpus2", required=True, type=click.Path(exists=True, dir_okay=False, path_type=Path))
@click.option("--alpha", type=float, default=0.25, show_default=True)
@click.option("--ngram", type=click.Choice(["1", "2"]), default="1", show_default=True)
@click.option("--top", type=int, default=40, show_default=True)
@click.option("--out", required=True, type=click.Path(file_okay=False, path_type=Path))
@_friendly
def rtd_command(corpus1, corpus2, alpha, ngram, top, out):
    """Rank-turbulence divergence between two corpora."""
    n = int(ngram)
    dist1 = FrequencyDistribution.from_counts(
        count_tokens((d.text for d in _read_documents(corpus1)), n)
    )
    dist2 = FrequencyDistribution.from_counts(
        count_tokens((d.text for d in _read_documents(corpus2)), n)
    )
    report = rtd(dist1, dist2, RtdConfig(alpha=alpha))
    paths = write_rtd_report(report, out, top=top)
    click.echo(f"divergence={report.divergence!r}")
    for name, path in paths.items():
        click.echo(f"{name}: {path}")


@main.command("train")
@click.option("--embeddings", required=True, type=click.Path(exists=True, dir_okay=False, path_type=Path))
@click.option("--labels", required=True, type=click.Path(exists=True, dir_okay=False, path_type=Path))
@click.option("--train-frac", type=float, default=0.67, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--epochs", type=int, default=500, show_default=True)
@click.option("--l2", type=float, default=0.0, show_default=True)
@click.option("--class-weight", is_flag=True, default=False)
@click.option("--model-out", required=True, type=click.Path(dir_okay=False, path_type=Path))
@_friendly
def train_command(embeddings, labels, train_frac, seed, epochs, l2, class_weight, model_out):
    """Fit the relevance head on human labels and report held-out metrics."""
    matrix = read_embeddings(embeddings)
    human = {
        doc_id: record.label
        for doc_id, record in read_labels(labels).items()
        if record.source == SOURCE_HUMAN
    }
    ids = [doc_id for doc_id in matrix.ids if doc_id in human]
    if not ids:
        raise click.ClickException("no human-labeled ids overlap the embedding rows")
    train_ids, test_ids = split(ids, human, train_frac, seed=seed)
    config = TrainConfig(epochs=epochs, l2=l2, class_weight=class_weight, seed=seed)
    model = train(matrix, human, train_ids, config)
    save_model(model, model_out)
    predictions = predict(model, matrix)
    report = evaluate(
        {i: predictions[i][1] for i in test_ids},
        {i: human[i] for i in test_ids},
        train_frac=train_frac,
        seed=seed,
    )
    click.echo(f"labeled={len(ids)} train={len(train_ids)} test={len(test_ids)}")
    click.echo(
        f"held-out: precision={report.precision:.6f} recall={report.recall:.6f} "
        f"f1={report.f1:.6f}"
    )
    click.echo(
        f"confusion: tp={report.tp} fp={report.fp} fn={report.fn} tn={report.tn}"
    )
    click.echo(f"model: {model_out}")


@main.command("classify")
@click.option("--embeddings", required=True, type=click.Path(exists=True, dir_okay=False, path_type=Path))
@click.option("--model", "model_path", required=True, type=click.Path(exists=True, dir_okay=False, path_type=Path))
@click.option("--labels-out", required=True, type=click.Path(dir_okay=False, path_type=Path))
@_friendly
def classify_command(embeddings, model_path, labels_out):
    """Score every embedded document and write model labels."""
    matrix = read_embeddings(embeddings)
    model = load_model(model_path)
    predictions = predict(model, matrix)
    records = [
        LabelRecord(doc_id=doc_id, label=label, source=SOURCE_MODEL, score=score)
        for doc_id, (score, label) in predictions.items()
    ]
    write_labels(records, labels_out)
    n_relevant = sum(1 for r in records if r.label == "R")
    click.echo(f"classified={len(records)} R={n_relevant} NR={len(records) - n_relevant}")


@main.command("evaluate")
@click.option("--pred", required=True, type=click.Path(exists=True, dir_okay=False, path_type=Path))
@click.option("--truth", required=True, type=click.Path(exists=True, dir_okay=False, path_type=Path))
@_friendly
def evaluate_command(pred, truth):
    """Positive-class precision/recall/F1 of one label file against another."""
    report = evaluate(_effective_labels(pred), _effective_labels(truth))
    click.echo(f"precision={report.precision!r}")
    click.echo(f"recall={report.recall!r}")
    click.echo(f"f1={report.f1!r}")
    click.echo(
        f"confusion: tp={report.tp} fp={report.fp} fn={report.fn} tn={report.tn}"
    )
    if report.undefined:
        click.echo("note: a zero denominator was reported as 0", err=True)


@main.command("run")
@click.option("--config", "config_path", required=True, type=click.Path(exists=True, dir_okay=False, path_type=Path))
@_friendly
def run_command(config_path):
    """Run the full pipeline from a JSON config, skipping unchanged stages."""
    config = load_config(config_path)
    _refuse_if_locked(config.labels)
    manifest = run_pipeline(config)
    for stage, entry in manifest["stages"].items():
        click.echo(f"{stage}: {'cached' if entry['cache_hit'] else 'built'}")
    click.echo(f"manifest: {Path(config.out_dir) / 'run_manifest.json'}")


@main.command("serve")
@click.option("--corpus", required=True, type=click.Path(exists=True, path_type=Path))
@click.option("--labels", required=True, type=click.Path(dir_okay=False, path_type=Path))
@click.option("--strategy", type=click.Choice(["random", "uncertainty"]), default="random", show_default=True)
@click.option("--scores", type=click.Path(exists=True, dir_okay=False, path_type=Path), default=None)
@click.option("--bind", default="127.0.0.1:8817", show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--ui-dir", type=click.Path(file_okay=False, path_type=Path), default=None)
@_friendly
def serve_command(corpus, labels, strategy, scores, bind, seed, ui_dir):
    """Serve the hand-labeling API (and UI bundle when present)."""
    import uvicorn

    from .service import create_app

    try:
        host, port_text = bind.rsplit(":", 1)
        port = int(port_text)
    except ValueError:
        raise click.BadParameter("expected HOST:PORT", param_hint="--bind")

    docs = {d.id: d for d in _read_documents(corpus)}
    if not docs:
        raise click.ClickException(f"no documents in {corpus}")
    score_map = None
    if scores is not None:
        score_map = {
            doc_id: record.score
            for doc_id, record in read_labels(scores).items()
            if record.score is not None
        }
    if ui_dir is None and Path("frontend/dist").is_dir():
        ui_dir = Path("frontend/dist")

    lock = StoreLock(labels)
    lock.acquire()
    try:
        with LabelStore(labels) as store:
            app = create_app(
                docs, store, strategy=strategy, scores=score_map, seed=seed, ui_dir=ui_dir
            )
            click.echo(
                f"serving {len(docs)} documents at http://{host}:{port} "
                f"(strategy={strategy}, store={labels})",
                err=True,
            )
            uvicorn.run(app, host=host, port=port, log_level="warning")
    finally:
        lock.release()


if __name__ == "__main__":
    main()
