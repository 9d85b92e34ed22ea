"""The ``embed`` command."""

from __future__ import annotations

from pathlib import Path

import click

from .encoders import DEFAULT_MODEL
from .errors import JobError
from .export import EmbedJob, export_embeddings


@click.command(name="embed")
@click.option(
    "--corpus",
    type=click.Path(exists=True, dir_okay=False, path_type=Path),
    required=True,
)
@click.option(
    "--model",
    default=DEFAULT_MODEL,
    show_default=True,
    help="Sentence-embedding model name, or hash:<dim> for the offline encoder.",
)
@click.option(
    "--out",
    "out_prefix",
    type=click.Path(dir_okay=False, path_type=Path),
    required=True,
    help="Output prefix; writes PREFIX.emb and PREFIX.ids.",
)
@click.option("--batch", default=64, show_default=True)
def main(corpus: Path, model: str, out_prefix: Path, batch: int) -> None:
    """Encode a corpus and write the binary embedding file pair."""
    job = EmbedJob(corpus=corpus, out_prefix=out_prefix, model=model, batch_size=batch)
    try:
        result = export_embeddings(job)
    except JobError as exc:
        raise click.ClickException(str(exc)) from None
    click.echo(
        f"wrote {result.count} x {result.dim} ({result.model}) -> {result.matrix_path}"
    )
    if result.skipped:
        click.echo(f"skipped {result.skipped} malformed corpus line(s)", err=True)


if __name__ == "__main__":
    main()
