"""Response datasets: loading, validation, stratified splitting, augmentation.

Augmented negatives (off-prompt answers and word-shuffled copies of high
graded answers) are labeled with the lowest grade and are only ever placed
in the training part of a split; the test part stays purely original.
"""
from __future__ import annotations

import enum
import logging
import math
import random
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

logger = logging.getLogger(__name__)

TSV_HEADER = ("Id", "EssaySet", "Score1", "Score2", "EssayText")

SCORE_POLICIES = ("score_a", "score_b", "max")


class Origin(str, enum.Enum):
    ORIGINAL = "original"
    CROSS_PROMPT = "cross_prompt_negative"
    SHUFFLED = "shuffled_negative"


class CorpusError(ValueError):
    """Malformed dataset rows, bad scores, or unknown prompts; carries line info."""


@dataclass(frozen=True)
class PromptSpec:
    prompt_id: str
    question_text: str
    grade_min: int
    grade_max: int
    passage_text: str | None = None
    reference_docs: tuple[str, ...] = ()

    def __post_init__(self):
        if self.grade_min >= self.grade_max:
            raise ValueError(
                f"prompt {self.prompt_id}: grade_min {self.grade_min} must be "
                f"< grade_max {self.grade_max}")

    @property
    def n_grades(self) -> int:
        return self.grade_max - self.grade_min + 1


@dataclass(frozen=True)
class Response:
    id: str
    prompt_id: str
    text: str
    score_a: int
    resolved_score: int
    score_b: int | None = None
    origin: Origin = Origin.ORIGINAL


@dataclass
class SplitSet:
    train: list[str]
    validation: list[str]
    test: list[str]
    ratios: tuple[float, float, float]

    def parts(self) -> dict[str, list[str]]:
        return {"train": self.train, "validation": self.validation, "test": self.test}


def resolve_score(score_a: int, score_b: int | None, policy: str = "score_a") -> int:
    if policy == "score_a":
        return score_a
    if policy == "score_b":
        return score_b if score_b is not None else score_a
    if policy == "max":
        return max(score_a, score_b) if score_b is not None else score_a
    raise ValueError(f"unknown score policy {policy!r}; expected one of {SCORE_POLICIES}")


def load_asap_tsv(path: str | Path, prompts: dict[str, PromptSpec] | Iterable[PromptSpec],
                  score_policy: str = "score_a") -> list[Response]:
    """Load the tab-separated release format (header then one response per row)."""
    if not isinstance(prompts, dict):
        prompts = {p.prompt_id: p for p in prompts}
    responses = []
    with open(path, encoding="utf-8") as fh:
        header = fh.readline()
        if not header.strip():
            return []
        for lineno, line in enumerate(fh, start=2):
            if not line.strip():
                continue
            parts = line.rstrip("\n").split("\t", 4)
            if len(parts) != 5:
                raise CorpusError(f"{path}:{lineno}: expected 5 tab-separated "
                                  f"columns, got {len(parts)}")
            rid, prompt_id, s1, s2, text = parts
            prompt = prompts.get(prompt_id)
            if prompt is None:
                raise CorpusError(f"{path}:{lineno}: unknown prompt id {prompt_id!r}")
            try:
                score_a = int(s1)
                score_b = int(s2) if s2.strip() else None
            except ValueError:
                raise CorpusError(f"{path}:{lineno}: non-integer score") from None
            for label, score in (("Score1", score_a), ("Score2", score_b)):
                if score is not None and not prompt.grade_min <= score <= prompt.grade_max:
                    raise CorpusError(
                        f"{path}:{lineno}: {label}={score} outside grade range "
                        f"[{prompt.grade_min}, {prompt.grade_max}] of prompt {prompt_id}")
            responses.append(Response(
                id=rid, prompt_id=prompt_id, text=text, score_a=score_a,
                score_b=score_b,
                resolved_score=resolve_score(score_a, score_b, score_policy)))
    return responses


def _largest_remainder(n: int, ratios: Sequence[float]) -> list[int]:
    quotas = [n * r for r in ratios]
    alloc = [math.floor(q) for q in quotas]
    remainders = [q - a for q, a in zip(quotas, alloc)]
    leftover = n - sum(alloc)
    for i in sorted(range(len(ratios)), key=lambda i: (-remainders[i], i))[:leftover]:
        alloc[i] += 1
    return alloc


def stratified_split(responses: Sequence[Response],
                     ratios: tuple[float, float, float] = (0.7, 0.1, 0.2),
                     seed: int = 0) -> SplitSet:
    """Per-grade largest-remainder split of the original responses.

    Augmented responses always land in train. Deterministic for a fixed
    seed; within each grade stratum ids are sorted, shuffled once, then
    dealt out train/validation/test.
    """
    if abs(sum(ratios) - 1.0) > 1e-9:
        raise ValueError(f"split ratios must sum to 1, got {ratios}")
    prompt_ids = {r.prompt_id for r in responses}
    if len(prompt_ids) > 1:
        raise ValueError(f"responses span multiple prompts: {sorted(prompt_ids)}")

    originals = [r for r in responses if r.origin is Origin.ORIGINAL]
    augmented = [r for r in responses if r.origin is not Origin.ORIGINAL]

    strata: dict[int, list[str]] = {}
    for r in originals:
        strata.setdefault(r.resolved_score, []).append(r.id)

    rng = random.Random(seed)
    train, validation, test = [], [], []
    for grade in sorted(strata):
        ids = sorted(strata[grade])
        rng.shuffle(ids)
        n_train, n_val, _ = _largest_remainder(len(ids), ratios)
        train.extend(ids[:n_train])
        validation.extend(ids[n_train:n_train + n_val])
        test.extend(ids[n_train + n_val:])
    train.extend(r.id for r in augmented)
    return SplitSet(train=train, validation=validation, test=test, ratios=tuple(ratios))


def augment_cross_prompt(target_prompt: PromptSpec,
                         other_sets: dict[str, Sequence[Response]],
                         k: int = 10) -> list[Response]:
    """Top-graded answers from other prompts, relabeled to the lowest grade."""
    pool = [r for pid, rs in other_sets.items() if pid != target_prompt.prompt_id
            for r in rs if r.origin is Origin.ORIGINAL]
    if k > 0 and not pool:
        raise ValueError("cross-prompt augmentation needs at least one other "
                         "prompt with graded responses")
    pool.sort(key=lambda r: (-r.resolved_score, r.id))
    if k > len(pool):
        logger.warning("cross-prompt pool has only %d responses; requested %d",
                       len(pool), k)
        k = len(pool)
    lowest = target_prompt.grade_min
    return [Response(id=f"xneg:{r.id}", prompt_id=target_prompt.prompt_id,
                     text=r.text, score_a=lowest, score_b=None,
                     resolved_score=lowest, origin=Origin.CROSS_PROMPT)
            for r in pool[:k]]


def augment_shuffled(train: Sequence[Response], prompt: PromptSpec,
                     m: int = 10, seed: int = 0) -> list[Response]:
    """Word-shuffled copies of the top graded answers, relabeled to the lowest grade."""
    if m <= 0:
        return []
    if not train:
        raise ValueError("cannot augment an empty training set")
    eligible = [r for r in sorted(train, key=lambda r: (-r.resolved_score, r.id))
                if len(r.text.split()) >= 2]
    rng = random.Random(seed)
    out = []
    for r in eligible[:m]:
        words = r.text.split()
        perm = list(range(len(words)))
        while perm == sorted(perm):
            rng.shuffle(perm)
        shuffled = " ".join(words[i] for i in perm)
        out.append(Response(id=f"sneg:{r.id}", prompt_id=prompt.prompt_id,
                            text=shuffled, score_a=prompt.grade_min, score_b=None,
                            resolved_score=prompt.grade_min, origin=Origin.SHUFFLED))
    return out


def by_id(responses: Iterable[Response]) -> dict[str, Response]:
    return {r.id: r for r in responses}


def grade_histogram(responses: Iterable[Response]) -> dict[int, int]:
    hist: dict[int, int] = {}
    for r in responses:
        hist[r.resolved_score] = hist.get(r.resolved_score, 0) + 1
    return dict(sorted(hist.items()))
