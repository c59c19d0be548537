"""Concept-level entropy from parser token log-probabilities.

The AMR parser emits a linearized graph as a stream of subword tokens,
each scored with its natural-log probability under the parser model.
Tokens are grouped into units at every word-boundary prefix (``"Ġ"`` for
byte-level BPE vocabularies); units that spell graph syntax (roles,
parentheses, variables, quoted literals) are flagged structural and the
rest are matched to concept nodes by label.

A token's entropy score is ``exp(-logprob)`` (the inverse probability)
and a concept's score is the mean over its subword tokens, so a concept
split into many pieces is not penalised relative to a single-token one.
"""

from __future__ import annotations

import logging
import math
import re
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

from .penman import AmrGraph, ConceptNode, concept_nodes, strip_sense_suffix

logger = logging.getLogger(__name__)

DEFAULT_BOUNDARY_PREFIX = "Ġ"

_VARIABLE = re.compile(r"^[a-z]\d*$")
_SYNTAX = frozenset({"(", ")", "/"})


class EmptySequence(ValueError):
    pass


class NonFiniteLogProb(ValueError):
    pass


@dataclass(frozen=True)
class ScoredToken:
    text: str
    logprob: float
    index: int = 0

    def __post_init__(self):
        if not math.isfinite(self.logprob):
            raise NonFiniteLogProb(f"token {self.text!r} has logprob {self.logprob}")
        if self.logprob > 0:
            raise ValueError(f"token {self.text!r} has positive logprob {self.logprob}")


@dataclass(frozen=True)
class ConceptUnit:
    """A run of tokens from one boundary-prefixed token up to the next.

    ``token_indices`` are positions in the token list the unit was cut from.
    """
    token_indices: Tuple[int, ...]
    detokenized: str
    is_structural: bool = False

    def __post_init__(self):
        if not self.token_indices:
            raise ValueError("a concept unit needs at least one token")
        if not self.detokenized and not self.is_structural:
            raise ValueError("non-structural unit with empty text")

    @property
    def m(self) -> int:
        return len(self.token_indices)


@dataclass(frozen=True)
class ConceptEntropy:
    concept_label: str
    variable: Optional[str]
    entropy: float
    subword_count: int
    sentence_index: int = 0


def token_entropy(token: ScoredToken) -> float:
    """``exp(-logprob)``, i.e. ``1 / P``; at least 1 for any valid token."""
    if not math.isfinite(token.logprob):
        raise NonFiniteLogProb(f"token {token.text!r} has logprob {token.logprob}")
    return math.exp(-token.logprob)


def _is_structural(text: str) -> bool:
    return (
        text.startswith(":")
        or text in _SYNTAX
        or _VARIABLE.match(text) is not None
        or text.startswith('"')
        or text.endswith('"')
    )


def segment_units(tokens: Sequence[ScoredToken],
                  boundary_prefix: str = DEFAULT_BOUNDARY_PREFIX) -> List[ConceptUnit]:
    """Cut a token stream into units at each boundary-prefixed token.

    The first token always opens a unit, so the units partition the
    sequence. A unit that directly follows a ``/`` unit is a concept label
    even when it looks like a variable (the pronoun concept ``i``, say).
    """
    if not tokens:
        raise EmptySequence("no tokens to segment")
    if not boundary_prefix:
        raise ValueError("boundary_prefix must be non-empty")

    groups: List[List[int]] = []
    for pos, tok in enumerate(tokens):
        if not groups or tok.text.startswith(boundary_prefix):
            groups.append([pos])
        else:
            groups[-1].append(pos)

    units = []
    previous = None
    for group in groups:
        first = tokens[group[0]].text
        if first.startswith(boundary_prefix):
            first = first[len(boundary_prefix):]
        text = (first + "".join(tokens[i].text for i in group[1:])).strip()
        structural = previous != "/" and (not text or _is_structural(text))
        units.append(ConceptUnit(tuple(group), text, structural))
        previous = text
    return units


def concept_entropy(unit: ConceptUnit, tokens: Sequence[ScoredToken]) -> float:
    """Mean token entropy over the unit's subwords."""
    total = 0.0
    for i in unit.token_indices:
        if not 0 <= i < len(tokens):
            raise IndexError(f"token index {i} out of range for {len(tokens)} tokens")
        total += token_entropy(tokens[i])
    return total / len(unit.token_indices)


def match_units(nodes: Sequence[ConceptNode], units: Sequence[ConceptUnit]
                ) -> List[Optional[int]]:
    """Align each node to a unit index, or ``None`` when nothing matches.

    First pass: case-insensitive exact label match, each node taking the
    earliest unused unit, so repeated labels pair up in order. Second
    pass, for nodes still unmatched: compare with sense suffixes stripped
    on both sides (``establish`` <-> ``establish-01``).
    """
    candidates = [i for i, u in enumerate(units) if not u.is_structural]
    used = set()
    matched: List[Optional[int]] = [None] * len(nodes)

    for key in (lambda s: s.lower(), lambda s: strip_sense_suffix(s).lower()):
        for n, node in enumerate(nodes):
            if matched[n] is not None:
                continue
            want = key(node.label)
            for i in candidates:
                if i not in used and key(units[i].detokenized) == want:
                    matched[n] = i
                    used.add(i)
                    break
    return matched


def score_graph_concepts(g: AmrGraph, tokens: Sequence[ScoredToken],
                         boundary_prefix: str = DEFAULT_BOUNDARY_PREFIX,
                         unmatched: Optional[list] = None) -> List[ConceptEntropy]:
    """Score every concept node of ``g`` that can be aligned to a token unit.

    Nodes with no matching unit are left out of the result (they never
    enter the significance test). Pass a list as ``unmatched`` to collect
    them.
    """
    units = segment_units(tokens, boundary_prefix)
    nodes = concept_nodes(g)
    scores = []
    for node, u in zip(nodes, match_units(nodes, units)):
        if u is None:
            logger.debug("no token unit for concept %s / %s", node.variable, node.label)
            if unmatched is not None:
                unmatched.append(node)
            continue
        unit = units[u]
        scores.append(ConceptEntropy(
            concept_label=node.label,
            variable=node.variable,
            entropy=concept_entropy(unit, tokens),
            subword_count=unit.m,
            sentence_index=g.source_sentence_index,
        ))
    return scores
