"""Domain types for ground-truth labels and model probability outputs.

File formats (UTF-8, LF or CRLF):

* label file: header ``sample_id,label``, one ``<id>,<0|1>`` row per sample;
* prediction file: header ``sample_id,score``, one ``<id>,<probability>`` row
  per sample, where the score is the probability of class 1 (malignant) in
  the closed interval [0, 1]. The model id comes from a ``# model: <name>``
  comment line, unless overridden by the caller (CLI flag wins).

Lines starting with ``#`` are comments; blank lines are ignored. Row order
is irrelevant: re-serializing a loaded file sorts rows by sample id, and
loading the result yields an identical object.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

from .errors import AlignmentError, IngestionError

LABEL_HEADER = "sample_id,label"
PREDICTION_HEADER = "sample_id,score"

_MODEL_COMMENT = re.compile(r"^#\s*model\s*:\s*(.+?)\s*$")


def _check_token(token: str, kind: str, source: str, lineno: int) -> str:
    # Sample and model ids are opaque tokens: non-empty, no whitespace, and no
    # comma (the field separator).
    if not token or "," in token or any(ch.isspace() for ch in token):
        raise IngestionError(f"{source}:{lineno}: invalid {kind} {token!r}")
    return token


def _data_rows(text: str, header: str, source: str):
    """Yield ``(lineno, sample_id_token, value_token)`` for every data row."""
    header_seen = False
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            continue
        if not header_seen:
            if line != header:
                raise IngestionError(
                    f"{source}:{lineno}: expected header {header!r}, got {line!r}"
                )
            header_seen = True
            continue
        parts = line.split(",")
        if len(parts) != 2:
            raise IngestionError(
                f"{source}:{lineno}: expected 2 comma-separated fields, got {len(parts)}"
            )
        yield lineno, parts[0].strip(), parts[1].strip()
    if not header_seen:
        raise IngestionError(f"{source}: empty file (missing header {header!r})")


@dataclass(frozen=True)
class LabelSet:
    """Ground-truth binary label per sample id; the universe of samples."""

    entries: Mapping[str, int]
    support0: int = field(init=False)
    support1: int = field(init=False)

    def __post_init__(self):
        if not self.entries:
            raise IngestionError("label set must contain at least one sample")
        ones = 0
        for sid, label in self.entries.items():
            if label not in (0, 1):
                raise IngestionError(f"label for sample {sid!r} must be 0 or 1, got {label!r}")
            ones += label
        object.__setattr__(self, "support1", ones)
        object.__setattr__(self, "support0", len(self.entries) - ones)

    @property
    def total(self) -> int:
        return len(self.entries)

    @property
    def sample_ids(self):
        return self.entries.keys()


@dataclass(frozen=True)
class PredictionSet:
    """One model's probability-of-class-1 per sample id."""

    model_id: str
    scores: Mapping[str, float]

    def __post_init__(self):
        if not self.model_id or "," in self.model_id or any(c.isspace() for c in self.model_id):
            raise IngestionError(f"invalid model id {self.model_id!r}")
        for sid, score in self.scores.items():
            ok = isinstance(score, (int, float)) and not isinstance(score, bool)
            if not (ok and math.isfinite(score) and 0.0 <= score <= 1.0):
                raise IngestionError(
                    f"model {self.model_id!r}: score for sample {sid!r} out of range: {score!r}"
                )

    @property
    def sample_ids(self):
        return self.scores.keys()


@dataclass(frozen=True)
class AlignedPanel:
    """A label set plus M >= 1 prediction sets covering exactly its samples."""

    labels: LabelSet
    models: tuple[PredictionSet, ...]

    def __post_init__(self):
        if not self.models:
            raise AlignmentError("at least one prediction set is required")
        seen: set[str] = set()
        for model in self.models:
            if model.model_id in seen:
                raise AlignmentError(f"duplicate model id {model.model_id!r}")
            seen.add(model.model_id)
        label_ids = set(self.labels.sample_ids)
        for model in self.models:
            model_ids = set(model.sample_ids)
            missing = label_ids - model_ids
            if missing:
                raise AlignmentError(
                    f"model {model.model_id!r} is missing {len(missing)} labeled "
                    f"sample(s): {_preview(missing)}"
                )
            extra = model_ids - label_ids
            if extra:
                raise AlignmentError(
                    f"model {model.model_id!r} has {len(extra)} unlabeled "
                    f"sample(s): {_preview(extra)}"
                )

    @property
    def model_ids(self) -> tuple[str, ...]:
        return tuple(m.model_id for m in self.models)

    @property
    def n_models(self) -> int:
        return len(self.models)

    def scores_for(self, sample_id: str) -> tuple[float, ...]:
        return tuple(m.scores[sample_id] for m in self.models)


def _preview(ids: Iterable[str], limit: int = 10) -> str:
    ordered = sorted(ids)
    shown = ", ".join(ordered[:limit])
    if len(ordered) > limit:
        shown += f", ... (+{len(ordered) - limit} more)"
    return shown


def load_labels(text: str, source: str = "<labels>") -> LabelSet:
    """Parse label-file content into a LabelSet.

    Raises IngestionError naming the offending id/row for duplicates, labels
    outside {0, 1}, malformed rows, and empty files.
    """
    entries: dict[str, int] = {}
    for lineno, sid, value in _data_rows(text, LABEL_HEADER, source):
        sid = _check_token(sid, "sample id", source, lineno)
        if sid in entries:
            raise IngestionError(f"{source}:{lineno}: duplicate sample id {sid!r}")
        if value not in ("0", "1"):
            raise IngestionError(f"{source}:{lineno}: label must be 0 or 1, got {value!r}")
        entries[sid] = int(value)
    if not entries:
        raise IngestionError(f"{source}: label file has no data rows")
    return LabelSet(entries=entries)


def load_predictions(
    text: str,
    model_id: str | None = None,
    source: str = "<predictions>",
) -> PredictionSet:
    """Parse prediction-file content into a PredictionSet.

    ``model_id`` overrides any ``# model:`` comment in the file; the first
    such comment applies when no override is given.
    """
    comment_id = None
    for match in map(_MODEL_COMMENT.match, text.splitlines()):
        if match:
            comment_id = match.group(1)
            break
    effective_id = model_id if model_id is not None else comment_id
    if effective_id is None:
        raise IngestionError(
            f"{source}: no model id ('# model: <name>' comment or explicit override required)"
        )

    scores: dict[str, float] = {}
    for lineno, sid, value in _data_rows(text, PREDICTION_HEADER, source):
        sid = _check_token(sid, "sample id", source, lineno)
        if sid in scores:
            raise IngestionError(f"{source}:{lineno}: duplicate sample id {sid!r}")
        try:
            score = float(value)
        except ValueError:
            raise IngestionError(f"{source}:{lineno}: score is not a number: {value!r}") from None
        if not math.isfinite(score) or score < 0.0 or score > 1.0:
            raise IngestionError(f"{source}:{lineno}: score out of range [0, 1]: {value}")
        scores[sid] = score
    if not scores:
        raise IngestionError(f"{source}: prediction file has no data rows")
    return PredictionSet(model_id=effective_id, scores=scores)


def serialize_labels(labels: LabelSet) -> str:
    lines = [LABEL_HEADER]
    lines.extend(f"{sid},{labels.entries[sid]}" for sid in sorted(labels.entries))
    return "\n".join(lines) + "\n"


def serialize_predictions(predictions: PredictionSet) -> str:
    lines = [f"# model: {predictions.model_id}", PREDICTION_HEADER]
    lines.extend(f"{sid},{predictions.scores[sid]!r}" for sid in sorted(predictions.scores))
    return "\n".join(lines) + "\n"


def align(labels: LabelSet, models: Sequence[PredictionSet]) -> AlignedPanel:
    """Validate that every model covers exactly the labeled samples.

    Strict by design: a model with missing or extra sample ids is an error,
    never silently intersected, so class supports stay trustworthy.
    """
    return AlignedPanel(labels=labels, models=tuple(models))
