"""Transfer POS tags across a word alignment onto the translated sentence."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

from .corpus import Sentence, SentencePair, Token


class ProjectionError(ValueError):
    pass


@dataclass(frozen=True)
class ProjectedSentence:
    forms: tuple[str, ...]
    tags: tuple[Optional[str], ...]
    # source indices that supplied candidates for each target position (empty if unlinked)
    provenance: tuple[tuple[int, ...], ...]
    id: Optional[str] = None
    collisions: int = 0

    def __post_init__(self):
        if not (len(self.forms) == len(self.tags) == len(self.provenance)):
            raise ValueError("forms, tags and provenance must have equal length")


@dataclass
class ProjectionSummary:
    sentences_in: int = 0
    sentences_kept: int = 0
    tokens_in: int = 0
    tokens_dropped: int = 0
    collisions: int = 0
    gaps_merged: int = 0

    def render(self) -> str:
        return "".join(f"{k}\t{v}\n" for k, v in vars(self).items())


def project(source: Sentence, target_forms: Sequence[str], alignment: Iterable) -> ProjectedSentence:
    """Copy each source tag to the target words it is linked to.

    A target word linked to several differently-tagged source words takes the tag
    of the leftmost source word.
    """
    src_tags = source.tags
    for i, tag in enumerate(src_tags):
        if tag is None:
            raise ProjectionError(f"source token {i} ({source.tokens[i].form!r}) has no tag")
    n, m = len(src_tags), len(target_forms)
    candidates: list[list[int]] = [[] for _ in range(m)]
    for i, j in alignment:
        if not (0 <= i < n and 0 <= j < m):
            raise ProjectionError(f"link {i}-{j} out of range for a {n}x{m} pair")
        candidates[j].append(i)

    tags = []
    collisions = 0
    for cand in candidates:
        cand.sort()
        if not cand:
            tags.append(None)
            continue
        first = src_tags[cand[0]]
        if any(src_tags[i] != first for i in cand[1:]):
            collisions += 1
        tags.append(first)
    return ProjectedSentence(
        tuple(target_forms), tuple(tags), tuple(tuple(c) for c in candidates),
        id=source.id, collisions=collisions,
    )


def merge_gaps(p: ProjectedSentence) -> ProjectedSentence:
    tags = list(p.tags)
    for k in range(1, len(tags) - 1):
        if p.tags[k] is None and p.tags[k - 1] is not None and p.tags[k - 1] == p.tags[k + 1]:
            tags[k] = p.tags[k - 1]
    return ProjectedSentence(p.forms, tuple(tags), p.provenance, p.id, p.collisions)


def drop_untagged(p: ProjectedSentence) -> Sentence:
    return Sentence(tuple(Token(f, t) for f, t in zip(p.forms, p.tags) if t is not None), p.id)


def project_corpus(
    tagged_source: Sequence[Sentence],
    bitext: Sequence[SentencePair],
    alignments: Sequence,
) -> tuple[list[Sentence], ProjectionSummary]:
    if not (len(tagged_source) == len(bitext) == len(alignments)):
        raise ProjectionError(
            f"length mismatch: {len(tagged_source)} source sentences, "
            f"{len(bitext)} bitext pairs, {len(alignments)} alignments"
        )
    out = []
    summary = ProjectionSummary()
    for k, (src, pair, a) in enumerate(zip(tagged_source, bitext, alignments)):
        if tuple(src.forms) != pair.source:
            raise ProjectionError(f"sentence {k}: bitext source side does not match the tagged source forms")
        try:
            projected = project(src, pair.target, a)
        except ProjectionError as e:
            raise ProjectionError(f"sentence {k}: {e}") from None
        merged = merge_gaps(projected)
        sent = drop_untagged(merged)
        summary.sentences_in += 1
        summary.tokens_in += len(pair.target)
        summary.tokens_dropped += len(pair.target) - len(sent)
        summary.collisions += projected.collisions
        summary.gaps_merged += sum(
            old is None and new is not None for old, new in zip(projected.tags, merged.tags)
        )
        if len(sent):
            summary.sentences_kept += 1
            out.append(sent)
    return out, summary
