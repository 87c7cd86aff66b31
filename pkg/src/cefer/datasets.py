"""Loaders for the three evaluation corpora plus the Circumplex→Plutchik
class equalization.

None of the corpora ship with this package; users point the loaders at
their own copies. Loaded record counts are compared against the published
totals and reported (never asserted — partial downloads are common).
"""

import logging
from dataclasses import dataclass
from enum import Enum

from .errors import ParseError, UnknownLabel
from .plutchik import EmotionLabel

log = logging.getLogger(__name__)

MASK_LITERAL = "[#TRIGGERWORD#]"

# published totals, for the verification report
EXPECTED_EI_TOTAL = 7097
EXPECTED_EMOTEX_TOTAL = 135000
EXPECTED_IEST_TEST_TOTAL = 28757


class Split(Enum):
    TRAIN = "train"
    DEV = "dev"
    TEST = "test"


@dataclass(frozen=True)
class LabeledTweet:
    id: str
    text: str
    label: str
    split: Split


@dataclass(frozen=True)
class LabelScheme:
    name: str
    classes: tuple

    def index(self, label: str) -> int:
        return self.classes.index(label)


EI4 = LabelScheme("EI4", ("joy", "sadness", "fear", "anger"))
CIRCUMPLEX4 = LabelScheme(
    "Circumplex4",
    ("Happy-Active", "Happy-Inactive", "Unhappy-Active", "Unhappy-Inactive"),
)
IEST6 = LabelScheme("IEST6", ("sad", "joy", "disgust", "surprise", "anger", "fear"))
PLUTCHIK8 = LabelScheme("Plutchik8", tuple(e.name.capitalize() for e in EmotionLabel))

SCHEMES = {s.name: s for s in (EI4, CIRCUMPLEX4, IEST6, PLUTCHIK8)}


def _read_rows(path, n_cols, columns=None):
    """Tab-separated rows; ``columns`` optionally remaps positional columns
    (a tuple of source indices, one per logical column)."""
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.rstrip("\n")
            if not line.strip():
                continue
            parts = line.split("\t")
            if columns is not None:
                try:
                    parts = [parts[i] for i in columns]
                except IndexError:
                    raise ParseError(
                        f"row has {len(parts)} columns, override needs {max(columns) + 1}",
                        line=lineno, path=str(path),
                    ) from None
            elif len(parts) != n_cols:
                raise ParseError(
                    f"expected {n_cols} tab-separated columns, got {len(parts)}",
                    line=lineno, path=str(path),
                )
            yield lineno, parts


def _check_label(label, scheme: LabelScheme, path, lineno):
    canonical = {c.lower(): c for c in scheme.classes}
    key = label.strip().lower().replace(" ", "-")
    if key not in canonical:
        raise UnknownLabel(f"{path}:{lineno}: label {label!r} not in scheme {scheme.name}")
    return canonical[key]


def load_ei(path, split: Split, columns=None) -> list:
    """Emotion Intensity rows: `id<TAB>tweet<TAB>emotion<TAB>intensity`.

    The intensity value is parsed (to catch malformed files) and then
    discarded; this pipeline classifies labels only.
    """
    records = []
    for lineno, (rid, text, emotion, intensity) in _read_rows(path, 4, columns):
        try:
            float(intensity)
        except ValueError:
            raise ParseError(f"bad intensity {intensity!r}", line=lineno, path=str(path)) from None
        label = _check_label(emotion, EI4, path, lineno)
        records.append(LabeledTweet(id=rid, text=text, label=label, split=split))
    return records


def load_iest(path, split: Split, columns=None) -> list:
    """IEST rows: `label<TAB>tweet`; the [#TRIGGERWORD#] mask literal is kept
    verbatim (downstream extraction maps it to the model's mask token).
    Records missing the mask are kept with a warning."""
    records = []
    missing_mask = 0
    for lineno, (emotion, text) in _read_rows(path, 2, columns):
        label = _check_label(emotion, IEST6, path, lineno)
        if MASK_LITERAL not in text:
            missing_mask += 1
        records.append(LabeledTweet(id=f"iest-{lineno}", text=text, label=label, split=split))
    if missing_mask:
        log.warning("%s: %d records lack the %s mask literal", path, missing_mask, MASK_LITERAL)
    return records


def load_emotex(path, columns=None) -> list:
    """EmoTex rows: `tweet<TAB>class` against the Circumplex scheme."""
    records = []
    for lineno, (text, cls) in _read_rows(path, 2, columns):
        label = _check_label(cls, CIRCUMPLEX4, path, lineno)
        records.append(LabeledTweet(id=f"emotex-{lineno}", text=text, label=label, split=Split.TRAIN))
    return records


# Circumplex class equalization. The published table also lists Pessimism,
# love, and Optimism; those fall outside the eight-category model this
# pipeline is defined over and are dropped.
_CIRCUMPLEX_TO_PLUTCHIK = {
    "Unhappy-Active": frozenset({EmotionLabel.FEAR, EmotionLabel.DISGUST, EmotionLabel.ANGER}),
    "Unhappy-Inactive": frozenset({EmotionLabel.SADNESS}),
    "Happy-Active": frozenset({EmotionLabel.SURPRISE, EmotionLabel.JOY}),
    "Happy-Inactive": frozenset({EmotionLabel.TRUST, EmotionLabel.ANTICIPATION}),
}


def map_circumplex_to_plutchik(label: str) -> frozenset:
    key = label.strip().lower().replace(" ", "-")
    for cls, emotions in _CIRCUMPLEX_TO_PLUTCHIK.items():
        if cls.lower() == key:
            return emotions
    raise UnknownLabel(f"not a Circumplex class: {label!r}")


def count_report(records, scheme: LabelScheme, expected_total: int | None) -> dict:
    """Record counts and label histogram, compared to the published total.

    Deviation is flagged, not raised: users may hold partial data.
    """
    histogram = {c: 0 for c in scheme.classes}
    for r in records:
        histogram[r.label] += 1
    total = len(records)
    report = {
        "scheme": scheme.name,
        "total": total,
        "histogram": histogram,
        "expected_total": expected_total,
        "matches_published": (total == expected_total) if expected_total else None,
    }
    if expected_total and total != expected_total:
        log.warning("loaded %d records; published total is %d", total, expected_total)
    return report
