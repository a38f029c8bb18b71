"""Embedding providers and related vector plumbing.

A provider is anything with a ``name``, a ``native_dim``, and an
``embed_batch(texts) -> list of vectors`` method. Two implementations
ship here:

* HashEmbedding: a deterministic feature-hashing embedder over character
  3-grams. No model weights, no network; its vectors carry enough lexical
  signal for the ranking math to be exercised and tested end to end.
* RemoteEmbedding: an HTTP client for a sentence-embedding sidecar
  speaking ``POST {endpoint}/embed`` with body ``{"texts": [...]}`` and
  response ``{"embeddings": [[...], ...], "dim": D}``. Transport errors
  and malformed bodies are retried with exponential backoff; a dimension
  that contradicts the provider's declared one is a hard error.

embed_batch() is the contract-enforcing entry point: it validates counts,
dimensions, and finiteness, then L2-normalizes every vector (the all-zero
vector, produced for empty text, is kept as-is).
"""

from __future__ import annotations

import hashlib
import json
import math
import threading
import time
import urllib.error
import urllib.request
from functools import lru_cache
from typing import List, Optional, Sequence

import numpy as np

from .extraction import normalize_phrase, tokenize
from .model import Document


class EmbeddingTransportError(RuntimeError):
    """Remote embedding failed after all retry attempts."""

    def __init__(self, message: str, attempts: int):
        super().__init__(message)
        self.attempts = attempts


class DimensionMismatchError(ValueError):
    """Provider returned vectors that contradict its declared dimension."""


def _hash_gram(gram: str, dim: int, key: bytes):
    digest = hashlib.blake2b(gram.encode("utf-8"), digest_size=8, key=key).digest()
    h = int.from_bytes(digest, "big")
    bucket = h % dim
    sign = 1.0 if (h >> 63) & 1 else -1.0
    return bucket, sign


def _grams(text: str) -> List[str]:
    s = normalize_phrase(text)
    if not s:
        return []
    if len(s) < 3:
        return [s]
    return [s[i:i + 3] for i in range(len(s) - 2)]


def hash_embed(text: str, dim: int, seed: int = 42) -> np.ndarray:
    """Feature-hash character 3-grams of ``text`` into a unit vector.

    Buckets and signs come from a keyed blake2b over each 3-gram of the
    case-folded, whitespace-collapsed text, so the result is identical
    across runs and platforms for the same (text, dim, seed). Empty text
    maps to the zero vector.
    """
    if dim < 1:
        raise ValueError(f"dim must be >= 1, got {dim}")
    vec = np.zeros(dim, dtype=np.float64)
    key = str(seed).encode("utf-8")
    for gram in _grams(text):
        bucket, sign = _hash_gram(gram, dim, key)
        vec[bucket] += sign
    norm = float(np.linalg.norm(vec))
    if norm != 0.0:
        vec /= norm
    return vec


class HashEmbedding:
    """Bundled deterministic provider backed by hash_embed.

    Stateless apart from a 3-gram hash cache, so concurrent embed_batch
    calls are safe.
    """

    name = "hash"

    def __init__(self, dim: int = 512, seed: int = 42):
        if dim < 1:
            raise ValueError(f"dim must be >= 1, got {dim}")
        self.native_dim = dim
        self.seed = seed
        self._key = str(seed).encode("utf-8")
        self._gram_cache: dict = {}

    def _embed_one(self, text: str) -> np.ndarray:
        vec = np.zeros(self.native_dim, dtype=np.float64)
        cache = self._gram_cache
        for gram in _grams(text):
            hit = cache.get(gram)
            if hit is None:
                hit = _hash_gram(gram, self.native_dim, self._key)
                cache[gram] = hit
            vec[hit[0]] += hit[1]
        norm = float(np.linalg.norm(vec))
        if norm != 0.0:
            vec /= norm
        return vec

    def embed_batch(self, texts: Sequence[str]) -> List[np.ndarray]:
        return [self._embed_one(t) for t in texts]


class RemoteEmbedding:
    """Client for an HTTP embedding sidecar (the only network interface).

    ``native_dim`` may be declared up front or adopted from the first
    response; later responses must agree. At most ``max_in_flight``
    requests run concurrently; retries are serialized per request.
    """

    name = "remote"

    def __init__(self, endpoint: str, native_dim: Optional[int] = None, *,
                 attempts: int = 3, backoff_base_ms: float = 100.0,
                 max_in_flight: int = 4, timeout_s: float = 30.0):
        if not endpoint:
            raise ValueError("remote provider needs a nonempty endpoint")
        if attempts < 1:
            raise ValueError(f"attempts must be >= 1, got {attempts}")
        self.endpoint = endpoint.rstrip("/")
        self.native_dim = native_dim
        self.attempts = attempts
        self.backoff_base_ms = backoff_base_ms
        self.timeout_s = timeout_s
        self._gate = threading.BoundedSemaphore(max_in_flight)
        self._dim_lock = threading.Lock()

    def _post(self, payload: bytes) -> dict:
        req = urllib.request.Request(
            self.endpoint + "/embed", data=payload,
            headers={"Content-Type": "application/json"}, method="POST")
        with self._gate:
            with urllib.request.urlopen(req, timeout=self.timeout_s) as resp:
                if resp.status != 200:
                    raise RuntimeError(f"embedding service returned {resp.status}")
                return json.loads(resp.read().decode("utf-8"))

    def embed_batch(self, texts: Sequence[str]) -> List[np.ndarray]:
        texts = list(texts)
        if not texts:
            return []
        payload = json.dumps({"texts": texts}).encode("utf-8")
        last_error: Optional[Exception] = None
        for attempt in range(self.attempts):
            if attempt:
                time.sleep(self.backoff_base_ms * (2 ** (attempt - 1)) / 1000.0)
            try:
                body = self._post(payload)
                vectors = body["embeddings"]
                dim = int(body["dim"])
                if len(vectors) != len(texts):
                    raise RuntimeError(
                        f"service returned {len(vectors)} vectors for "
                        f"{len(texts)} texts")
                out = [np.asarray(v, dtype=np.float64) for v in vectors]
                for v in out:
                    if v.shape != (dim,):
                        raise RuntimeError(
                            f"service vector shape {v.shape} does not match "
                            f"declared dim {dim}")
            except (KeyError, TypeError, ValueError, RuntimeError, OSError) as exc:
                last_error = exc
                continue
            with self._dim_lock:
                if self.native_dim is None:
                    self.native_dim = dim
            if dim != self.native_dim:
                raise DimensionMismatchError(
                    f"service dim {dim} contradicts provider dim "
                    f"{self.native_dim}")
            return out
        raise EmbeddingTransportError(
            f"embedding endpoint {self.endpoint!r} failed after "
            f"{self.attempts} attempts: {last_error}", attempts=self.attempts)


def embed_batch(provider, texts: Sequence[str]) -> List[np.ndarray]:
    """Embed texts through ``provider`` and enforce the output contract.

    One vector per text, order preserved, each of the provider's native
    dimension, finite, and L2-normalized on return (an exactly-zero
    vector stays zero).
    """
    texts = list(texts)
    if not texts:
        return []
    raw = provider.embed_batch(texts)
    if len(raw) != len(texts):
        raise ValueError(
            f"provider {provider.name!r} returned {len(raw)} vectors for "
            f"{len(texts)} texts")
    out = []
    for i, v in enumerate(raw):
        v = np.asarray(v, dtype=np.float64)
        if v.ndim != 1:
            raise ValueError(
                f"provider {provider.name!r} vector {i} is not 1-D")
        if v.shape[0] != provider.native_dim:
            raise DimensionMismatchError(
                f"provider {provider.name!r} vector {i} has dim {v.shape[0]}, "
                f"declared native_dim is {provider.native_dim}")
        if not np.all(np.isfinite(v)):
            raise ValueError(
                f"provider {provider.name!r} vector {i} has non-finite entries")
        norm = float(np.linalg.norm(v))
        if norm == 0.0:
            v = np.zeros(provider.native_dim, dtype=np.float64)
        else:
            v = v / norm
        v.flags.writeable = False
        out.append(v)
    return out


@lru_cache(maxsize=32)
def _projection_matrix(in_dim: int, out_dim: int, seed: int) -> np.ndarray:
    rng = np.random.default_rng([seed % (2 ** 63), in_dim, out_dim])
    signs = rng.integers(0, 2, size=(out_dim, in_dim)).astype(np.float64)
    matrix = (signs * 2.0 - 1.0) / math.sqrt(out_dim)
    matrix.flags.writeable = False
    return matrix


def project(v, target_dim: int, seed: int = 42) -> np.ndarray:
    """Map a vector into ``target_dim`` dimensions.

    Identity when the dimensions already match; otherwise a seeded
    random sign projection followed by re-normalization. The zero vector
    is preserved exactly.
    """
    if target_dim < 1:
        raise ValueError(f"target_dim must be >= 1, got {target_dim}")
    v = np.asarray(v, dtype=np.float64)
    if v.ndim != 1:
        raise ValueError(f"expected a 1-D vector, got shape {v.shape}")
    if not np.all(np.isfinite(v)):
        raise ValueError("vector has non-finite entries")
    if v.shape[0] == target_dim:
        return v
    out = _projection_matrix(v.shape[0], target_dim, seed) @ v
    norm = float(np.linalg.norm(out))
    if norm != 0.0:
        out /= norm
    else:
        out = np.zeros(target_dim, dtype=np.float64)
    out.flags.writeable = False
    return out


def chunk_token_texts(tokens: Sequence[str], size: int = 256) -> List[str]:
    """Group a token sequence into consecutive space-joined chunks."""
    if size < 1:
        raise ValueError(f"chunk size must be >= 1, got {size}")
    return [" ".join(tokens[i:i + size]) for i in range(0, len(tokens), size)]


def embed_document(provider, doc: Document, *, chunk_tokens: int = 256) -> np.ndarray:
    """Embed a whole document, mean-pooling over 256-token chunks.

    Documents short enough for a single chunk are embedded verbatim, so
    the result is exactly embed_batch([doc.text])[0]. Longer documents
    are split on token boundaries, embedded chunk by chunk, mean-pooled,
    and re-normalized; this uses the entire document instead of
    truncating it.
    """
    token_texts = [t for t, _ in tokenize(doc.text)]
    if len(token_texts) <= chunk_tokens:
        return embed_batch(provider, [doc.text])[0]
    chunks = chunk_token_texts(token_texts, chunk_tokens)
    vectors = embed_batch(provider, chunks)
    pooled = np.mean(np.vstack(vectors), axis=0)
    norm = float(np.linalg.norm(pooled))
    if norm != 0.0:
        pooled = pooled / norm
    else:
        pooled = np.zeros(provider.native_dim, dtype=np.float64)
    pooled.flags.writeable = False
    return pooled
