"""Command-line surface: evaluate, fuse, compare, simulate, serve.

The CLI is a thin client: it reads files, posts their contents to the
service (in-process by default, remote with ``--server``), renders the
structured responses, and writes artifacts atomically. Exit status is 0
iff all artifacts were produced; every error path prints a single
``error: <category>: <reason>`` line on stderr and exits nonzero.
"""

from __future__ import annotations

import functools
import os
import sys
import tempfile
from pathlib import Path

import click

from . import __version__
from .client import ServiceClient
from .errors import FusevalError
from .render import (
    render_compare_csv,
    render_compare_text,
    render_confusion_csv,
    render_confusion_text,
    render_json,
    render_manifest_text,
    render_report_csv,
    render_report_text,
)

_THRESHOLD = click.FloatRange(0.0, 1.0, min_open=True, max_open=True)
_FORMATS = click.Choice(["text", "json", "csv"])
_IN_FILE = click.Path(exists=True, dir_okay=False, path_type=Path)
_OUT_FILE = click.Path(dir_okay=False, path_type=Path)


def _surface_errors(func):
    @functools.wraps(func)
    def wrapper(*args, **kwargs):
        try:
            return func(*args, **kwargs)
        except FusevalError as exc:
            click.echo(f"error: {exc.category}: {exc}", err=True)
            sys.exit(1)

    return wrapper


def _atomic_write(path: Path, content: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as handle:
            handle.write(content)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _emit(artifact: str, out: Path | None) -> None:
    if out is None:
        click.echo(artifact, nl=False)
    else:
        _atomic_write(out, artifact)
        click.echo(f"wrote {out}")


def _report_artifact(doc: dict, fmt: str) -> str:
    if fmt == "json":
        return render_json(doc)
    if fmt == "csv":
        return render_manifest_text(doc["manifest"]) + render_report_csv(doc["report"])
    return (
        render_manifest_text(doc["manifest"])
        + "\n"
        + render_report_text(doc["report"])
        + "\n"
        + render_confusion_text(doc["confusion_matrix"])
    )


def _parse_weights(value: str) -> list[float]:
    try:
        weights = [float(tok) for tok in value.split(",")]
    except ValueError:
        raise click.UsageError(f"--weights must be a comma-separated list of numbers: {value!r}")
    return weights


def _weight_source_payload(value: str) -> dict:
    paths = [Path(tok) for tok in value.split(",") if tok]
    if len(paths) < 2:
        raise click.UsageError("--weights-from needs a labels file and at least one prediction file")
    for path in paths:
        if not path.is_file():
            raise click.UsageError(f"--weights-from file not found: {path}")
    return {
        "labels": paths[0].read_text(encoding="utf-8"),
        "predictions": [p.read_text(encoding="utf-8") for p in paths[1:]],
    }


def _model_ids_option(value: str | None, count: int) -> list[str | None] | None:
    if value is None:
        return None
    ids = [tok.strip() or None for tok in value.split(",")]
    if len(ids) != count:
        raise click.UsageError(f"--model-ids lists {len(ids)} ids for {count} prediction files")
    return ids


@click.group(context_settings={"help_option_names": ["-h", "--help"]})
@click.version_option(__version__, prog_name="fuseval")
@click.option(
    "--server",
    envvar="FUSEVAL_SERVER",
    default=None,
    metavar="URL",
    help="Base URL of a running fuseval service; default runs the service in-process.",
)
@click.pass_context
def main(ctx: click.Context, server: str | None):
    """Fuse and evaluate probability outputs of independent binary classifiers."""
    ctx.obj = ServiceClient(server=server)


@main.command()
@click.argument("labels_path", type=_IN_FILE)
@click.argument("predictions_path", type=_IN_FILE)
@click.option("--model-id", default=None, help="Model id; overrides any '# model:' comment.")
@click.option("--threshold", type=_THRESHOLD, default=0.5, show_default=True)
@click.option("--format", "fmt", type=_FORMATS, default="text", show_default=True)
@click.option("--out", type=_OUT_FILE, default=None, help="Report artifact path (default stdout).")
@click.option("--confusion-out", type=_OUT_FILE, default=None, help="Confusion matrix CSV path.")
@click.pass_obj
@_surface_errors
def evaluate(client: ServiceClient, labels_path, predictions_path, model_id, threshold, fmt, out, confusion_out):
    """Report one model's metrics against a label file."""
    doc = client.evaluate(
        {
            "labels": labels_path.read_text(encoding="utf-8"),
            "predictions": predictions_path.read_text(encoding="utf-8"),
            "model_id": model_id,
            "threshold": threshold,
            "labels_name": labels_path.name,
            "predictions_name": predictions_path.name,
        }
    )
    _emit(_report_artifact(doc, fmt), out)
    if confusion_out is not None:
        _atomic_write(confusion_out, render_confusion_csv(doc["confusion_matrix"]))
        click.echo(f"wrote {confusion_out}")


def _fusion_inputs(labels_path: Path, predictions_paths, model_ids, weights, weights_from):
    if weights is not None and weights_from is not None:
        raise click.UsageError("--weights and --weights-from are mutually exclusive")
    payload = {
        "labels": labels_path.read_text(encoding="utf-8"),
        "predictions": [p.read_text(encoding="utf-8") for p in predictions_paths],
        "model_ids": _model_ids_option(model_ids, len(predictions_paths)),
        "labels_name": labels_path.name,
        "prediction_names": [p.name for p in predictions_paths],
    }
    if weights is not None:
        payload["weights"] = _parse_weights(weights)
    if weights_from is not None:
        payload["weights_from"] = _weight_source_payload(weights_from)
    return payload


@main.command()
@click.argument("labels_path", type=_IN_FILE)
@click.argument("predictions_paths", type=_IN_FILE, nargs=-1, required=True)
@click.option(
    "--strategy",
    type=click.Choice(["weighted_average", "plain_average", "majority_vote"]),
    default="weighted_average",
    show_default=True,
)
@click.option("--weights", default=None, metavar="W1,W2,...", help="Explicit per-model weights.")
@click.option(
    "--weights-from",
    default=None,
    metavar="LABELS,PREDS,...",
    help="Derive weights from model accuracies measured on these files.",
)
@click.option("--model-ids", default=None, metavar="ID1,ID2,...", help="Override per-file model ids.")
@click.option("--threshold", type=_THRESHOLD, default=0.5, show_default=True)
@click.option("--format", "fmt", type=_FORMATS, default="text", show_default=True)
@click.option("--out", type=_OUT_FILE, default=None, help="Fused prediction file path.")
@click.option("--report-out", type=_OUT_FILE, default=None, help="Report artifact path (default stdout).")
@click.pass_obj
@_surface_errors
def fuse(client: ServiceClient, labels_path, predictions_paths, strategy, weights, weights_from, model_ids, threshold, fmt, out, report_out):
    """Fuse several prediction files and report the ensemble's metrics."""
    if strategy == "weighted_average" and weights is None and weights_from is None:
        raise click.UsageError("strategy 'weighted_average' requires --weights or --weights-from")
    payload = _fusion_inputs(labels_path, predictions_paths, model_ids, weights, weights_from)
    payload.update({"strategy": strategy, "threshold": threshold})
    doc = client.fuse(payload)
    _emit(_report_artifact(doc, fmt), report_out)
    if out is not None:
        _atomic_write(out, doc["fused_file"])
        click.echo(f"wrote {out}")


@main.command()
@click.argument("labels_path", type=_IN_FILE)
@click.argument("predictions_paths", type=_IN_FILE, nargs=-1, required=True)
@click.option("--weights", default=None, metavar="W1,W2,...", help="Explicit per-model weights.")
@click.option(
    "--weights-from",
    default=None,
    metavar="LABELS,PREDS,...",
    help="Derive weights from model accuracies measured on these files.",
)
@click.option("--model-ids", default=None, metavar="ID1,ID2,...", help="Override per-file model ids.")
@click.option("--threshold", type=_THRESHOLD, default=0.5, show_default=True)
@click.option("--format", "fmt", type=_FORMATS, default="text", show_default=True)
@click.option("--out", type=_OUT_FILE, default=None, help="Comparison artifact path (default stdout).")
@click.pass_obj
@_surface_errors
def compare(client: ServiceClient, labels_path, predictions_paths, weights, weights_from, model_ids, threshold, fmt, out):
    """Rank single models against all three fusion strategies."""
    if len(predictions_paths) < 2:
        raise click.UsageError("compare needs at least two prediction files")
    if weights is None and weights_from is None:
        raise click.UsageError("compare requires --weights or --weights-from for its weighted row")
    payload = _fusion_inputs(labels_path, predictions_paths, model_ids, weights, weights_from)
    payload["threshold"] = threshold
    doc = client.compare(payload)
    if fmt == "json":
        artifact = render_json(doc)
    elif fmt == "csv":
        artifact = render_manifest_text(doc["manifest"]) + render_compare_csv(doc["rows"])
    else:
        artifact = render_manifest_text(doc["manifest"]) + "\n" + render_compare_text(doc["rows"])
    _emit(artifact, out)


def _parse_per_model(value: str, n_models: int, flag: str) -> list[float]:
    try:
        values = [float(tok) for tok in value.split(",")]
    except ValueError:
        raise click.UsageError(f"{flag} must be a number or comma-separated list: {value!r}")
    if len(values) == 1:
        return values * n_models
    if len(values) != n_models:
        raise click.UsageError(f"{flag} lists {len(values)} values for {n_models} models")
    return values


@main.command()
@click.option("--preset", type=click.Choice(["breakhis"]), default=None, help="Built-in fixture.")
@click.option("--n0", "n_class0", type=click.IntRange(min=0), default=None, help="Class-0 sample count.")
@click.option("--n1", "n_class1", type=click.IntRange(min=0), default=None, help="Class-1 sample count.")
@click.option("--models", "n_models", type=click.IntRange(min=1), default=None, help="Model count.")
@click.option("--recall0", default=None, help="Per-class-0 recall; single value or comma list.")
@click.option("--recall1", default=None, help="Per-class-1 recall; single value or comma list.")
@click.option("--sharpness", default="8", show_default=True, help="Score margin sharpness.")
@click.option("--overlap", type=click.FloatRange(0.0, 1.0), default=0.0, show_default=True)
@click.option("--seed", type=click.IntRange(min=0), default=0, show_default=True)
@click.option("--out-dir", type=click.Path(file_okay=False, path_type=Path), required=True)
@click.pass_obj
@_surface_errors
def simulate(client: ServiceClient, preset, n_class0, n_class1, n_models, recall0, recall1, sharpness, overlap, seed, out_dir):
    """Write a synthetic label/prediction bundle (or the built-in fixture)."""
    if preset is not None:
        payload: dict = {"preset": preset}
    else:
        if n_class0 is None or n_class1 is None or n_models is None or recall0 is None or recall1 is None:
            raise click.UsageError(
                "simulate needs --preset or all of --n0, --n1, --models, --recall0, --recall1"
            )
        r0 = _parse_per_model(recall0, n_models, "--recall0")
        r1 = _parse_per_model(recall1, n_models, "--recall1")
        sh = _parse_per_model(sharpness, n_models, "--sharpness")
        payload = {
            "n_class0": n_class0,
            "n_class1": n_class1,
            "models": [
                {"recall0": r0[i], "recall1": r1[i], "sharpness": sh[i]} for i in range(n_models)
            ],
            "error_overlap": overlap,
            "seed": seed,
        }
    doc = client.simulate(payload)
    out_dir.mkdir(parents=True, exist_ok=True)
    _atomic_write(out_dir / "labels.csv", doc["label_file"])
    click.echo(f"wrote {out_dir / 'labels.csv'}")
    for pf in doc["prediction_files"]:
        _atomic_write(out_dir / pf["filename"], pf["content"])
        click.echo(f"wrote {out_dir / pf['filename']}")
    _atomic_write(out_dir / "provenance.txt", doc["provenance"])
    click.echo(f"wrote {out_dir / 'provenance.txt'}")


@main.command()
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", type=int, default=8000, show_default=True)
def serve(host: str, port: int):
    """Run the fuseval service with uvicorn."""
    import uvicorn

    from .service.app import create_app

    uvicorn.run(create_app(), host=host, port=port)


if __name__ == "__main__":
    main()
