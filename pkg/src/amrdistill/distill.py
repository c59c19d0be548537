"""Turning selected concepts back into a compact context string.

Each selected concept is rendered to a surface form: date entities are
rebuilt from their ``:day``/``:month``/``:year`` attributes, named
entities from their ``:opN`` strings, and every other concept is looked
up in the source document so the original inflection and casing come
back ("establish-01" -> "established"). Adjacent duplicates are then
collapsed and the pieces joined with spaces; documents are joined with
newlines.
"""

from __future__ import annotations

import logging
import re
import string
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

from .penman import AmrGraph, UnknownVariable, attributes_of, concept_nodes, strip_sense_suffix
from .stats import SignificanceResult

logger = logging.getLogger(__name__)

MONTHS = (
    "January", "February", "March", "April", "May", "June",
    "July", "August", "September", "October", "November", "December",
)

# suffixes stripped from a lemma to form stems, and re-attached when probing
_STEM_STRIP = ("ing", "ed", "e", "s")
_INFLECTIONS = ("", "s", "es", "d", "ed", "ing", "e", "er", "ers")
_MIN_STEM = 3
# past forms that no suffix rule reaches
_IRREGULAR = {
    "bear": ("born", "bore", "borne"),
    "begin": ("began", "begun"),
    "become": ("became",),
    "buy": ("bought",),
    "choose": ("chose", "chosen"),
    "come": ("came",),
    "do": ("did", "done"),
    "find": ("found",),
    "give": ("gave", "given"),
    "go": ("went", "gone"),
    "hold": ("held",),
    "know": ("knew", "known"),
    "lead": ("led",),
    "leave": ("left",),
    "make": ("made",),
    "run": ("ran",),
    "say": ("said",),
    "see": ("saw", "seen"),
    "take": ("took", "taken"),
    "teach": ("taught",),
    "think": ("thought",),
    "win": ("won",),
    "write": ("wrote", "written"),
}
_PUNCT = string.punctuation + "“”‘’«»"


class MonthOutOfRange(ValueError):
    def __init__(self, month):
        super().__init__(f"month {month!r} is outside 1..12")
        self.month = month


@dataclass(frozen=True)
class CompressedDocument:
    document_id: str
    concepts: Tuple[str, ...] = ()
    text: str = ""

    def __post_init__(self):
        object.__setattr__(self, "concepts", tuple(self.concepts))
        for a, b in zip(self.concepts, self.concepts[1:]):
            if a == b:
                raise ValueError(f"adjacent duplicate concept {a!r}")


@dataclass(frozen=True)
class CompressedContext:
    per_document: Tuple[CompressedDocument, ...] = field(default_factory=tuple)
    text: str = ""


def _int_attr(value) -> Optional[int]:
    try:
        return int(str(value))
    except ValueError:
        return None


def reconstruct_temporal(g: AmrGraph, variable: str) -> Optional[str]:
    """Render a ``date-entity`` node as text, or ``None`` for other nodes.

    ``:month 7 :year 2025`` -> ``"July 2025"``; with a day the form is
    ``"July 4, 2025"``. Dates with only a day, or no day/month/year at
    all, give ``None``.
    """
    if variable not in g.nodes:
        raise UnknownVariable(variable)
    if g.nodes[variable].label != "date-entity":
        return None
    attrs: Dict[str, object] = {}
    for role, const in attributes_of(g, variable):
        attrs.setdefault(role, const.value)

    month_name = None
    if ":month" in attrs:
        month = _int_attr(attrs[":month"])
        if month is None or not 1 <= month <= 12:
            raise MonthOutOfRange(attrs[":month"])
        month_name = MONTHS[month - 1]
    day = attrs.get(":day")
    year = attrs.get(":year")

    if month_name and day is not None and year is not None:
        return f"{month_name} {day}, {year}"
    if month_name and year is not None:
        return f"{month_name} {year}"
    if month_name and day is not None:
        return f"{month_name} {day}"
    if month_name:
        return month_name
    if year is not None:
        return str(year)
    return None


def name_of(g: AmrGraph, variable: str) -> Optional[str]:
    """The ``:op1 :op2 ...`` strings of a ``name`` node joined by spaces."""
    if g.nodes[variable].label != "name":
        return None
    ops = []
    for role, const in attributes_of(g, variable):
        m = re.fullmatch(r":op(\d+)", role)
        if m:
            ops.append((int(m.group(1)), str(const.value)))
    if not ops:
        return None
    return " ".join(v for _, v in sorted(ops))


def dedup_adjacent(items: Sequence[str]) -> List[str]:
    out: List[str] = []
    for item in items:
        if not out or out[-1] != item:
            out.append(item)
    return out


def _stems(lemma: str) -> List[str]:
    lemma = lemma.lower()
    stems = [lemma]
    for suffix in _STEM_STRIP:
        if lemma.endswith(suffix) and len(lemma) - len(suffix) >= _MIN_STEM:
            stems.append(lemma[: -len(suffix)])
    # study -> studi(ed|es)
    if len(lemma) > _MIN_STEM and lemma.endswith("y") and lemma[-2] not in "aeiou":
        stems.append(lemma[:-1] + "i")
    return stems


def _word_matches(word: str, stems: Sequence[str]) -> bool:
    if word in _IRREGULAR.get(stems[0], ()):
        return True
    return any(word == stem + suffix for stem in stems for suffix in _INFLECTIONS)


def realize_surface(label: str, source_text: str) -> str:
    """Map a concept label to how it is written in ``source_text``.

    The sense suffix is dropped and the source is scanned for the first
    word equal to the lemma, a stem of it plus a common inflection, or a
    listed irregular past form (``bear`` -> ``born``).
    Multi-word labels (named entities) must match a run of consecutive
    words, the later ones exactly. The matched span is returned with its
    original casing; without a match the stripped label is returned.
    """
    lemma = strip_sense_suffix(label)
    targets = lemma.split()
    if not targets:
        return label
    words = [w.strip(_PUNCT) for w in source_text.split()]
    lowered = [w.lower() for w in words]
    stems = _stems(targets[0])
    rest = [t.lower() for t in targets[1:]]
    for i, word in enumerate(lowered):
        if not word or not _word_matches(word, stems):
            continue
        if lowered[i + 1: i + 1 + len(rest)] == rest:
            return " ".join(words[i: i + 1 + len(rest)])
    return lemma


def _surface(g: AmrGraph, variable: str, source_text: str) -> str:
    label = g.nodes[variable].label
    if label == "date-entity":
        rendered = reconstruct_temporal(g, variable)
        if rendered:
            return rendered
    elif label == "name":
        rendered = name_of(g, variable)
        if rendered:
            return realize_surface(rendered, source_text)
    return realize_surface(label, source_text)


def compress_document(graphs: Sequence[AmrGraph], selection: Sequence[SignificanceResult],
                      source_text: str, document_id: str = "") -> CompressedDocument:
    """Realize the selected concepts of one document.

    Concepts come out in source order: by sentence, then by first
    appearance within the sentence graph. The output never has more
    whitespace tokens than ``source_text``; should realization overshoot
    (short sources with many abstract concepts), trailing concepts are
    dropped.
    """
    chosen = {(r.sentence_index, r.variable) for r in selection if r.selected}
    pieces: List[str] = []
    for g in sorted(graphs, key=lambda g: g.source_sentence_index):
        for node in concept_nodes(g):
            if (g.source_sentence_index, node.variable) in chosen:
                pieces.append(_surface(g, node.variable, source_text))

    concepts = dedup_adjacent(pieces)
    budget = len(source_text.split())
    kept: List[str] = []
    used = 0
    for piece in concepts:
        n = len(piece.split())
        if used + n > budget:
            logger.warning("document %s: realized concepts exceed source length; truncating",
                           document_id)
            break
        kept.append(piece)
        used += n
    return CompressedDocument(document_id, tuple(kept), " ".join(kept))


def compress_context(docs: Sequence[CompressedDocument]) -> CompressedContext:
    """Join document texts with newlines; all-empty input gives ``""``."""
    docs = tuple(docs)
    if not any(d.text for d in docs):
        return CompressedContext(docs, "")
    return CompressedContext(docs, "\n".join(d.text for d in docs))
