"""Fixed-order feature schema shared by extraction, training, and feedback."""
from __future__ import annotations

import hashlib
from dataclasses import dataclass

import numpy as np

# Canonical group order; every feature name belongs to exactly one group.
GROUPS = (
    "embeddings",
    "pos_ngrams",
    "keywords",
    "prompt_overlap",
    "lexical_overlap",
    "logical_ops",
    "temporal",
    "length_stats",
    "word_difficulty",
)

GROUP_LABELS = {
    "embeddings": "Response/Document Embeddings",
    "pos_ngrams": "POS Tag N-grams",
    "keywords": "Weighted Keywords",
    "prompt_overlap": "Prompt Overlap",
    "lexical_overlap": "Lexical Overlap",
    "logical_ops": "Logical Operators",
    "temporal": "Temporal Features",
    "length_stats": "Sentence and Word Length",
    "word_difficulty": "Word Frequency, Difficulty and Diversity",
}


class SchemaMismatchError(ValueError):
    """A vector, model, or contribution was built against a different schema."""


@dataclass
class FeatureSchema:
    names: tuple[str, ...]
    groups: tuple[str, ...]            # parallel to names
    means: np.ndarray                  # train means (z-normalization)
    stds: np.ndarray                   # train stddevs
    normalized: np.ndarray             # bool mask; embedding block stays raw

    def __post_init__(self):
        n = len(self.names)
        if len(self.groups) != n or len(self.means) != n or len(self.stds) != n \
                or len(self.normalized) != n:
            raise ValueError("schema fields must be parallel arrays")
        if len(set(self.names)) != n:
            raise ValueError("feature names must be unique")
        unknown = set(self.groups) - set(GROUPS)
        if unknown:
            raise ValueError(f"unknown feature groups: {sorted(unknown)}")
        if not (np.isfinite(self.means).all() and np.isfinite(self.stds).all()):
            raise ValueError("schema normalization stats must be finite")

    def __len__(self) -> int:
        return len(self.names)

    def index_of(self, name: str) -> int:
        try:
            return self.names.index(name)
        except ValueError:
            raise SchemaMismatchError(f"unknown feature {name!r}") from None

    def group_indices(self, group: str) -> list[int]:
        return [i for i, g in enumerate(self.groups) if g == group]

    def present_groups(self) -> list[str]:
        seen = set(self.groups)
        return [g for g in GROUPS if g in seen]

    def fingerprint(self) -> str:
        blob = "\x1f".join(f"{n}\x1e{g}" for n, g in zip(self.names, self.groups))
        return hashlib.sha256(blob.encode("utf-8")).hexdigest()[:16]

    def normalize(self, raw: np.ndarray) -> np.ndarray:
        """z-score the scalar block; zero where train stddev was 0."""
        if raw.shape[-1] != len(self.names):
            raise SchemaMismatchError(
                f"vector length {raw.shape[-1]} != schema length {len(self.names)}")
        safe = np.where(self.stds > 0, self.stds, 1.0)
        z = (raw - self.means) / safe
        z = np.where(self.stds > 0, z, 0.0)
        return np.where(self.normalized, z, raw)

    def to_dict(self) -> dict:
        return {
            "names": list(self.names),
            "groups": list(self.groups),
            "means": [float(v) for v in self.means],
            "stds": [float(v) for v in self.stds],
            "normalized": [bool(v) for v in self.normalized],
        }

    @classmethod
    def from_dict(cls, d: dict) -> "FeatureSchema":
        return cls(names=tuple(d["names"]), groups=tuple(d["groups"]),
                   means=np.asarray(d["means"], dtype=np.float64),
                   stds=np.asarray(d["stds"], dtype=np.float64),
                   normalized=np.asarray(d["normalized"], dtype=bool))
