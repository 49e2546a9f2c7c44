"""Embedding providers: a remote HTTP backend and a deterministic local
fallback, plus an LRU caching wrapper.

All vectors are L2-normalized client-side regardless of what the backend
returns, so cosine similarity downstream reduces to a dot product.

Remote wire protocol (selected by the ``PWIM_EMBED_URL`` env var)::

    POST {base}/embed
    {"model": "<name>", "texts": ["...", ...]}
    -> 200 {"model": "<name>", "dimension": D, "vectors": [[...], ...]}

Any non-200 response or transport failure maps to provider-unavailable.

The fallback embedder is fully specified so independent implementations
agree bit-for-bit on the pre-normalization integer counts: lowercase the
text, pad with literal ``<`` and ``>`` boundary markers, take every
overlapping character trigram, hash each trigram's UTF-8 bytes with
FNV-1a 64, and count into ``hash % 256`` buckets.
"""

from __future__ import annotations

import os
import threading
from collections import OrderedDict

import httpx
import numpy as np

from .errors import (
    DimensionMismatchError,
    ProviderUnavailableError,
    ZeroVectorError,
)

FALLBACK_DIM = 256
DEFAULT_MODEL = "all-mpnet-base-v2"
EMBED_URL_ENV = "PWIM_EMBED_URL"

_FNV_OFFSET = 0xCBF29CE484222325
_FNV_PRIME = 0x100000001B3
_MASK64 = (1 << 64) - 1


def fnv1a64(data: bytes) -> int:
    """FNV-1a, 64-bit."""
    h = _FNV_OFFSET
    for byte in data:
        h ^= byte
        h = (h * _FNV_PRIME) & _MASK64
    return h


def normalize(vector: np.ndarray) -> np.ndarray:
    vec = np.asarray(vector, dtype=np.float64)
    if vec.ndim != 1 or vec.size < 2:
        raise ValueError("embedding vectors must be 1-d with dimension >= 2")
    if not np.all(np.isfinite(vec)):
        raise ValueError("embedding vector has non-finite components")
    norm = float(np.linalg.norm(vec))
    if norm == 0.0:
        raise ZeroVectorError("cannot normalize a zero vector")
    return vec / norm


def _check_texts(texts: list[str]) -> None:
    if not texts:
        raise ValueError("texts must be a non-empty list")
    for i, text in enumerate(texts):
        if not isinstance(text, str) or not text.strip():
            raise ValueError(f"texts[{i}] is empty")


def trigram_counts(text: str) -> np.ndarray:
    """Integer bucket counts for the fallback embedder (pre-normalization)."""
    padded = "<" + text.lower() + ">"
    counts = np.zeros(FALLBACK_DIM, dtype=np.int64)
    for i in range(len(padded) - 2):
        bucket = fnv1a64(padded[i : i + 3].encode("utf-8")) % FALLBACK_DIM
        counts[bucket] += 1
    return counts


class FallbackEmbedder:
    """Deterministic hashed-trigram embedder; no ML runtime needed."""

    kind = "fallback"
    model_name = f"trigram-fnv1a64-{FALLBACK_DIM}"
    dimension = FALLBACK_DIM

    def embed_batch(self, texts: list[str]) -> list[np.ndarray]:
        _check_texts(texts)
        return [normalize(trigram_counts(t).astype(np.float64)) for t in texts]

    def embed(self, text: str) -> np.ndarray:
        return self.embed_batch([text])[0]


class RemoteEmbedder:
    """Client for the POST /embed protocol."""

    kind = "remote"

    def __init__(
        self,
        endpoint: str,
        model_name: str = DEFAULT_MODEL,
        timeout: float = 30.0,
        transport: httpx.BaseTransport | None = None,
    ):
        self.endpoint = endpoint.rstrip("/")
        self.model_name = model_name
        self.dimension: int | None = None  # fixed by the first response
        self._client = httpx.Client(timeout=timeout, transport=transport)

    def embed_batch(self, texts: list[str]) -> list[np.ndarray]:
        _check_texts(texts)
        try:
            response = self._client.post(
                f"{self.endpoint}/embed",
                json={"model": self.model_name, "texts": list(texts)},
            )
        except httpx.HTTPError as exc:
            raise ProviderUnavailableError(
                f"embedding backend unreachable: {exc}"
            ) from exc
        if response.status_code != 200:
            raise ProviderUnavailableError(
                f"embedding backend returned {response.status_code}"
            )
        try:
            body = response.json()
            dimension = int(body["dimension"])
            vectors = body["vectors"]
        except (KeyError, TypeError, ValueError) as exc:
            raise ProviderUnavailableError(
                f"malformed embedding response: {exc}"
            ) from exc
        if len(vectors) != len(texts):
            raise ProviderUnavailableError(
                f"backend returned {len(vectors)} vectors for {len(texts)} texts"
            )
        if self.dimension is None:
            self.dimension = dimension
        if dimension != self.dimension:
            raise DimensionMismatchError(
                f"backend dimension changed from {self.dimension} to {dimension}"
            )
        out = []
        for i, values in enumerate(vectors):
            if len(values) != dimension:
                raise DimensionMismatchError(
                    f"vector {i} has length {len(values)}, expected {dimension}"
                )
            out.append(normalize(np.asarray(values, dtype=np.float64)))
        return out

    def embed(self, text: str) -> np.ndarray:
        return self.embed_batch([text])[0]

    def close(self) -> None:
        self._client.close()


class CachingEmbedder:
    """Exact-string LRU cache in front of any provider.

    Transparent: results with and without the cache are identical.
    ``backend_batches`` records the size of every backend call, which
    tests use to observe hits and misses.
    """

    def __init__(self, provider, capacity: int = 4096):
        if capacity < 1:
            raise ValueError("cache capacity must be >= 1")
        self.provider = provider
        self.capacity = capacity
        self.backend_batches: list[int] = []
        self._cache: OrderedDict[str, np.ndarray] = OrderedDict()
        self._lock = threading.Lock()

    @property
    def kind(self):
        return self.provider.kind

    @property
    def model_name(self):
        return self.provider.model_name

    @property
    def dimension(self):
        return self.provider.dimension

    @property
    def backend_calls(self) -> int:
        return len(self.backend_batches)

    def _store(self, text: str, vector: np.ndarray) -> None:
        self._cache[text] = vector
        self._cache.move_to_end(text)
        while len(self._cache) > self.capacity:
            self._cache.popitem(last=False)

    def embed_batch(self, texts: list[str]) -> list[np.ndarray]:
        _check_texts(texts)
        with self._lock:
            # Resolve hits up front: storing misses later may evict them.
            results: dict[str, np.ndarray] = {}
            misses: list[str] = []
            for text in texts:
                if text in self._cache:
                    self._cache.move_to_end(text)
                    results[text] = self._cache[text]
                elif text not in results and text not in misses:
                    misses.append(text)
            if misses:
                vectors = self.provider.embed_batch(misses)
                self.backend_batches.append(len(misses))
                for text, vector in zip(misses, vectors):
                    results[text] = vector
                    self._store(text, vector)
            return [results[text] for text in texts]

    def embed(self, text: str) -> np.ndarray:
        return self.embed_batch([text])[0]


def provider_from_env(environ=None) -> FallbackEmbedder | RemoteEmbedder:
    """Remote provider when PWIM_EMBED_URL is set, fallback otherwise."""
    env = os.environ if environ is None else environ
    url = env.get(EMBED_URL_ENV)
    if url:
        return RemoteEmbedder(url)
    return FallbackEmbedder()
