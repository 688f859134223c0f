"""Versioned on-disk model bundle: forest, fitted feature state, prompt.

A single JSON document. Floats survive the round trip exactly (shortest
round-trip decimal repr), so a reloaded model predicts bit-identically.
Word-vector tables and lexicons are not embedded; the bundle records
their file paths so scoring can reload the same resources.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .corpus import PromptSpec
from .features import FeatureExtractor
from .forest import Forest, ForestParams, Tree

MODEL_FORMAT_VERSION = 1


class ModelFormatError(ValueError):
    """Unreadable or structurally corrupt model file."""


class ModelVersionError(ModelFormatError):
    """Readable model file written by an incompatible format version."""


def _tree_to_dict(tree: Tree) -> dict:
    return {
        "feature": tree.feature.tolist(),
        "threshold": [None if np.isnan(t) else float(t) for t in tree.threshold],
        "left": tree.left.tolist(),
        "right": tree.right.tolist(),
        "mean": tree.mean.tolist(),
    }


def _tree_from_dict(d: dict) -> Tree:
    return Tree(
        feature=np.asarray(d["feature"], dtype=np.int32),
        threshold=np.asarray([np.nan if t is None else t for t in d["threshold"]],
                             dtype=np.float64),
        left=np.asarray(d["left"], dtype=np.int32),
        right=np.asarray(d["right"], dtype=np.int32),
        mean=np.asarray(d["mean"], dtype=np.float64),
    )


@dataclass
class ModelBundle:
    forest: Forest
    extractor_state: dict
    prompt: PromptSpec
    resources_info: dict | None
    score_policy: str

    def make_extractor(self, table=None, doc_embedder=None, tagger=None) -> FeatureExtractor:
        return FeatureExtractor.from_state_dict(
            self.extractor_state, prompt=self.prompt, table=table,
            doc_embedder=doc_embedder, tagger=tagger)


def save_model(path: str | Path, forest: Forest, extractor: FeatureExtractor,
               score_policy: str = "score_a",
               resources_info: dict | None = None) -> None:
    prompt = extractor.prompt
    payload = {
        "format_version": MODEL_FORMAT_VERSION,
        "kind": "shortscore_model",
        "prompt": {
            "prompt_id": prompt.prompt_id,
            "question_text": prompt.question_text,
            "passage_text": prompt.passage_text,
            "grade_min": prompt.grade_min,
            "grade_max": prompt.grade_max,
        },
        "score_policy": score_policy,
        "resources_info": resources_info,
        "extractor_state": extractor.state_dict(),
        "forest": {
            "params": forest.params.to_dict(),
            "n_features": forest.n_features,
            "schema_fingerprint": forest.schema_fingerprint,
            "target_range": list(forest.target_range),
            "trees": [_tree_to_dict(t) for t in forest.trees],
        },
    }
    Path(path).write_text(json.dumps(payload, sort_keys=True, separators=(",", ":")),
                          encoding="utf-8")


def load_model(path: str | Path) -> ModelBundle:
    try:
        payload = json.loads(Path(path).read_text(encoding="utf-8"))
    except FileNotFoundError:
        raise ModelFormatError(f"model file not found: {path}") from None
    except (OSError, json.JSONDecodeError) as exc:
        raise ModelFormatError(f"corrupt model file {path}: {exc}") from None
    if not isinstance(payload, dict) or payload.get("kind") != "shortscore_model":
        raise ModelFormatError(f"not a model file: {path}")
    version = payload.get("format_version")
    if version != MODEL_FORMAT_VERSION:
        raise ModelVersionError(
            f"model format version {version!r} unsupported "
            f"(expected {MODEL_FORMAT_VERSION})")
    try:
        f = payload["forest"]
        forest = Forest(
            trees=[_tree_from_dict(t) for t in f["trees"]],
            params=ForestParams.from_dict(f["params"]),
            n_features=int(f["n_features"]),
            schema_fingerprint=f.get("schema_fingerprint"),
            target_range=tuple(f.get("target_range", (0.0, 0.0))),
        )
        p = payload["prompt"]
        prompt = PromptSpec(prompt_id=p["prompt_id"], question_text=p["question_text"],
                            passage_text=p.get("passage_text"),
                            grade_min=int(p["grade_min"]), grade_max=int(p["grade_max"]))
        return ModelBundle(forest=forest, extractor_state=payload["extractor_state"],
                           prompt=prompt, resources_info=payload.get("resources_info"),
                           score_policy=payload.get("score_policy", "score_a"))
    except (KeyError, TypeError, ValueError) as exc:
        raise ModelFormatError(f"malformed model file {path}: {exc}") from None
