"""Term embedding store and cosine similarity over observed PTs.

Embeddings arrive either as CSV (``term,x1,...,xd``) or as the compact
binary format (magic ``SHEM``); both load to identical stores.  Similarity
is computed only for the PTs observed in the trial, never for the whole
dictionary, keeping memory O(m^2).
"""

from __future__ import annotations

import csv
import io
import struct
from dataclasses import dataclass

import numpy as np

from .errors import InvalidArgument, InvalidVector, MissingEmbedding, SchemaError

_MAGIC = b"SHEM"
_NORM_TOL = 1e-6


@dataclass(frozen=True)
class EmbeddingStore:
    """Unit-norm embedding vectors keyed by term."""

    terms: list[str]
    vectors: np.ndarray  # (n, d) float64, rows L2-normalized

    def __post_init__(self):
        index = {t: i for i, t in enumerate(self.terms)}
        if len(index) != len(self.terms):
            raise SchemaError("duplicate term in embedding source")
        object.__setattr__(self, "_index", index)

    @property
    def dim(self) -> int:
        return self.vectors.shape[1]

    def __contains__(self, term: str) -> bool:
        return term in self._index

    def vector(self, term: str) -> np.ndarray:
        return self.vectors[self._index[term]]


@dataclass(frozen=True)
class SimilarityMatrix:
    """Symmetric cosine similarities over an ordered PT list, unit diagonal."""

    terms: list[str]
    values: np.ndarray  # (m, m) float64

    def index_of(self, term: str) -> int:
        return self.terms.index(term)


def _finalize_store(terms: list[str], vectors: np.ndarray) -> EmbeddingStore:
    if vectors.ndim != 2 or vectors.shape[1] < 2:
        raise SchemaError("embedding vectors must share a dimension d >= 2")
    norms = np.linalg.norm(vectors, axis=1)
    zero = norms <= 0.0
    if np.any(zero):
        raise InvalidVector(f"zero-norm vector for term {terms[int(np.argmax(zero))]!r}")
    off = np.abs(norms - 1.0) > _NORM_TOL
    if np.any(off):
        vectors = vectors / norms[:, np.newaxis]
    vectors = np.ascontiguousarray(vectors, dtype=np.float64)
    vectors.flags.writeable = False
    return EmbeddingStore(terms=terms, vectors=vectors)


def _load_embeddings_csv(text: str) -> EmbeddingStore:
    terms: list[str] = []
    rows: list[list[float]] = []
    dim = None
    for r, row in enumerate(csv.reader(io.StringIO(text)), start=1):
        if not row or not any(c.strip() for c in row):
            continue
        term = row[0].strip()
        try:
            values = [float(c) for c in row[1:]]
        except ValueError:
            raise SchemaError(f"non-numeric embedding component at row {r}") from None
        if dim is None:
            dim = len(values)
        elif len(values) != dim:
            raise SchemaError(
                f"row {r} has {len(values)} components, expected {dim}"
            )
        terms.append(term)
        rows.append(values)
    if not terms:
        raise SchemaError("embedding CSV has no rows")
    return _finalize_store(terms, np.array(rows, dtype=np.float64))


def _load_embeddings_binary(data: bytes) -> EmbeddingStore:
    if len(data) < 12:
        raise SchemaError("binary embedding file truncated")
    count, dim = struct.unpack_from("<II", data, 4)
    offset = 12
    terms: list[str] = []
    vectors = np.empty((count, dim), dtype=np.float64)
    for i in range(count):
        if offset + 2 > len(data):
            raise SchemaError("binary embedding file truncated")
        (name_len,) = struct.unpack_from("<H", data, offset)
        offset += 2
        name = data[offset : offset + name_len].decode("utf-8")
        offset += name_len
        end = offset + 4 * dim
        if end > len(data):
            raise SchemaError("binary embedding file truncated")
        vectors[i] = np.frombuffer(data, dtype="<f4", count=dim, offset=offset)
        offset += 4 * dim
        terms.append(name)
    return _finalize_store(terms, vectors)


def load_embeddings(source) -> EmbeddingStore:
    """Load an embedding file (CSV or ``SHEM`` binary) into a store.

    Vectors are L2-normalized on load when their norms deviate from 1 by
    more than 1e-6.
    """
    if isinstance(source, (bytes, bytearray)):
        data = bytes(source)
    elif isinstance(source, str):
        data = source.encode("utf-8")
    else:
        data = source.read()
        if isinstance(data, str):
            data = data.encode("utf-8")
    if data[:4] == _MAGIC:
        return _load_embeddings_binary(data)
    return _load_embeddings_csv(data.decode("utf-8"))


def write_embeddings_binary(store: EmbeddingStore) -> bytes:
    """Serialize a store to the ``SHEM`` binary format (float32 payload)."""
    out = bytearray(_MAGIC)
    out += struct.pack("<II", len(store.terms), store.dim)
    for term, vec in zip(store.terms, store.vectors):
        name = term.encode("utf-8")
        out += struct.pack("<H", len(name))
        out += name
        out += np.asarray(vec, dtype="<f4").tobytes()
    return bytes(out)


def cosine_similarity_submatrix(store: EmbeddingStore, pts: list[str]) -> SimilarityMatrix:
    """Cosine similarity submatrix restricted to the observed PTs.

    Exactly symmetric (upper triangle mirrored) with a unit diagonal.
    Raises :class:`MissingEmbedding` listing every PT absent from the store.
    """
    missing = [p for p in pts if p not in store]
    if missing:
        raise MissingEmbedding(missing)
    v = np.stack([store.vector(p) for p in pts])
    s = v @ v.T
    s = np.triu(s, 1)
    s = s + s.T
    np.fill_diagonal(s, 1.0)
    return SimilarityMatrix(terms=list(pts), values=s)


def threshold_similarity(s: SimilarityMatrix, tau: float) -> SimilarityMatrix:
    """Zero out off-diagonal similarities below `tau` (>= tau is kept)."""
    if not 0.0 <= tau < 1.0:
        raise InvalidArgument(f"tau must be in [0, 1), got {tau}")
    values = s.values.copy()
    mask = values < tau
    np.fill_diagonal(mask, False)
    values[mask] = 0.0
    return SimilarityMatrix(terms=list(s.terms), values=values)
