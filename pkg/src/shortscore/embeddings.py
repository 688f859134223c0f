"""Pretrained word-vector tables and response / document embedding features.

Reads the two standard interchange formats (text: ``word v1 ... vd`` rows
with an optional count/dim header; binary: ``"count dim\\n"`` header then
word + little-endian float32 payload per entry). The document-level
feature is an idf-weighted token mean behind a small provider protocol so
a true paragraph-vector model can be swapped in.
"""
from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import Protocol

import numpy as np

from .textproc import TaggedDoc


class VectorFormatError(ValueError):
    """Malformed vector file: inconsistent dims or truncated payload."""


@dataclass
class EmbeddingTable:
    dim: int
    vectors: dict[str, np.ndarray]
    idf: dict[str, float] | None = None

    def __contains__(self, word: str) -> bool:
        return word in self.vectors

    def __len__(self) -> int:
        return len(self.vectors)

    def get(self, word: str) -> np.ndarray | None:
        return self.vectors.get(word)


def _load_text(path: Path) -> EmbeddingTable:
    vectors: dict[str, np.ndarray] = {}
    dim: int | None = None
    with open(path, encoding="utf-8") as fh:
        first = fh.readline()
        parts = first.split()
        header = len(parts) == 2 and all(p.isdigit() for p in parts)
        if header:
            dim = int(parts[1])
        lines = [] if header else [(1, first)]
        lines.extend((i, ln) for i, ln in enumerate(fh, start=2))
        for lineno, line in lines:
            fields = line.split()
            if not fields:
                continue
            word, values = fields[0], fields[1:]
            if dim is None:
                dim = len(values)
                if dim == 0:
                    raise VectorFormatError(f"{path}:{lineno}: row has no values")
            if len(values) != dim:
                raise VectorFormatError(
                    f"{path}:{lineno}: expected {dim} values, got {len(values)}")
            if word not in vectors:
                vectors[word] = np.asarray([float(v) for v in values], dtype=np.float32)
    if dim is None:
        raise VectorFormatError(f"{path}: empty vector file")
    return EmbeddingTable(dim=dim, vectors=vectors)


def _load_binary(path: Path) -> EmbeddingTable:
    data = Path(path).read_bytes()
    nl = data.find(b"\n")
    if nl < 0:
        raise VectorFormatError(f"{path}: missing binary header")
    try:
        count, dim = (int(x) for x in data[:nl].split())
    except ValueError:
        raise VectorFormatError(f"{path}: bad binary header {data[:nl]!r}") from None
    vectors: dict[str, np.ndarray] = {}
    offset = nl + 1
    vec_bytes = 4 * dim
    for _ in range(count):
        while offset < len(data) and data[offset:offset + 1] == b"\n":
            offset += 1
        sep = data.find(b" ", offset)
        if sep < 0 or sep + vec_bytes > len(data):
            raise VectorFormatError(f"{path}: truncated binary payload")
        word = data[offset:sep].decode("utf-8")
        vec = np.frombuffer(data, dtype="<f4", count=dim, offset=sep + 1)
        if word not in vectors:
            vectors[word] = vec.copy()
        offset = sep + 1 + vec_bytes
    return EmbeddingTable(dim=dim, vectors=vectors)


def load_vectors(path: str | Path, format: str = "text") -> EmbeddingTable:
    path = Path(path)
    if format == "text":
        return _load_text(path)
    if format == "binary":
        return _load_binary(path)
    raise ValueError(f"unknown vector format {format!r}; expected 'text' or 'binary'")


def save_vectors(table: EmbeddingTable, path: str | Path, format: str = "text") -> None:
    path = Path(path)
    if format == "text":
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(f"{len(table.vectors)} {table.dim}\n")
            for word, vec in table.vectors.items():
                fh.write(word + " " + " ".join(repr(float(v)) for v in vec) + "\n")
    elif format == "binary":
        with open(path, "wb") as fh:
            fh.write(f"{len(table.vectors)} {table.dim}\n".encode())
            for word, vec in table.vectors.items():
                fh.write(word.encode("utf-8") + b" ")
                fh.write(np.asarray(vec, dtype="<f4").tobytes())
                fh.write(b"\n")
    else:
        raise ValueError(f"unknown vector format {format!r}")


def load_idf(path: str | Path) -> dict[str, float]:
    """Sidecar idf file: ``word<TAB>idf`` per line."""
    idf = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                word, value = line.rstrip("\n").split("\t")
                idf[word] = float(value)
            except ValueError:
                raise VectorFormatError(f"{path}:{lineno}: expected word<TAB>idf") from None
    return idf


def _doc_words(doc: TaggedDoc) -> list[str]:
    return [t.surface.lower() for t in doc.tokens]


def embed_response(doc: TaggedDoc, table: EmbeddingTable,
                   weighting: str = "uniform") -> np.ndarray:
    """Mean (or idf-weighted mean) vector of in-vocabulary tokens.

    Out-of-vocabulary tokens are skipped; an empty or all-OOV document
    embeds to the zero vector.
    """
    if weighting not in ("uniform", "idf"):
        raise ValueError(f"unknown weighting {weighting!r}")
    idf = table.idf or {}
    total = np.zeros(table.dim, dtype=np.float64)
    weight_sum = 0.0
    for word in _doc_words(doc):
        vec = table.vectors.get(word)
        if vec is None:
            continue
        w = idf.get(word, 1.0) if weighting == "idf" else 1.0
        total += w * vec.astype(np.float64)
        weight_sum += w
    if weight_sum == 0.0:
        return np.zeros(table.dim, dtype=np.float64)
    return total / weight_sum


class DocumentEmbedder(Protocol):
    """Pluggable whole-document embedding provider."""

    dim: int

    def embed(self, doc: TaggedDoc) -> np.ndarray: ...


class IdfMeanEmbedder:
    """Default document embedding: idf-weighted token mean over the table."""

    def __init__(self, table: EmbeddingTable):
        self.table = table
        self.dim = table.dim

    def embed(self, doc: TaggedDoc) -> np.ndarray:
        return embed_response(doc, self.table, weighting="idf")


def embed_document(doc: TaggedDoc, table: EmbeddingTable) -> np.ndarray:
    return IdfMeanEmbedder(table).embed(doc)
