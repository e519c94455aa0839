"""Embedding vectors for idea texts.

Two backends: a remote OpenAI-compatible embeddings endpoint (with
retry, batching, and bounded parallelism) and a deterministic offline
hash embedder for CI and experiments without API access. Vectors are
cached in a content-addressed append-only file keyed by
(model_id, sha256 of text); all rows are L2-normalized float32.
"""

from __future__ import annotations

import hashlib
import os
import struct
import threading
import time
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path

import numpy as np
import requests

from .errors import ProtocolError, TransportError

_RECORD_MAGIC = b"VC01"
_API_KEY_ENV = "EMBED_API_KEY"

DEFAULT_MODEL_ID = "text-embedding-3-large"  # the 3072-dim variant
DEFAULT_DIM = 3072


@dataclass(frozen=True)
class EmbedderConfig:
    backend: str = "offline"  # "remote" | "offline"
    endpoint_url: str = "https://api.openai.com"
    model_id: str = DEFAULT_MODEL_ID
    dim: int = DEFAULT_DIM
    batch_size: int = 64
    max_retries: int = 3  # total attempts per batch
    retry_backoff: float = 0.5  # seconds, doubled per attempt
    parallelism: int = 4  # in-flight batches
    seed: int = 0  # offline backend only
    cache_path: Path | None = None

    def __post_init__(self):
        if self.backend not in ("remote", "offline"):
            raise ValueError(f"unknown backend {self.backend!r}")
        if self.dim < 2:
            raise ValueError("dim must be >= 2")
        if self.batch_size < 1:
            raise ValueError("batch_size must be >= 1")

    def effective_model_id(self) -> str:
        """Cache key; the offline embedder's output depends on dim and seed."""
        if self.backend == "offline":
            return f"offline-hash-d{self.dim}-s{self.seed}"
        return self.model_id


@dataclass(frozen=True)
class EmbeddingMatrix:
    """n x d matrix of unit-norm float32 rows aligned with idea ids."""

    vectors: np.ndarray
    model_id: str
    dim: int
    row_ids: tuple[str, ...]
    normalized: bool = True

    def __post_init__(self):
        v = self.vectors
        if v.ndim != 2 or v.shape[1] != self.dim:
            raise ValueError(f"vectors must be n x {self.dim}, got {v.shape}")
        if v.shape[0] != len(self.row_ids):
            raise ValueError("row count must equal row_ids length")
        if len(set(self.row_ids)) != len(self.row_ids):
            raise ValueError("duplicate row_ids")
        if not np.all(np.isfinite(v)):
            raise ValueError("vectors contain non-finite entries")
        if self.normalized:
            norms = np.linalg.norm(v.astype(np.float64), axis=1)
            if np.any(np.abs(norms - 1.0) > 1e-6):
                raise ValueError("normalized matrix has rows off the unit sphere")

    def digest(self) -> str:
        h = hashlib.sha256()
        h.update(self.model_id.encode())
        for rid in self.row_ids:
            h.update(rid.encode())
            h.update(b"\x00")
        h.update(np.ascontiguousarray(self.vectors, dtype="<f4").tobytes())
        return h.hexdigest()


def text_digest(text: str) -> str:
    return hashlib.sha256(text.encode("utf-8")).hexdigest()


def _tokenize(text: str) -> list[str]:
    tokens = []
    word = []
    for ch in text.lower():
        if ch.isalnum():
            word.append(ch)
        elif word:
            tokens.append("".join(word))
            word = []
    if word:
        tokens.append("".join(word))
    return tokens


def offline_embed(text: str, dim: int, seed: int = 0) -> np.ndarray:
    """Deterministic stand-in for a remote embedding model.

    Each token hashes (salted with the seed) to a pseudo-random Gaussian
    direction; token directions are summed and L2-normalized, so texts
    sharing tokens land closer on the unit sphere than disjoint ones.
    """
    if dim < 2:
        raise ValueError("dim must be >= 2")
    tokens = _tokenize(text)
    if not tokens:
        raise ValueError(f"unembeddable text (no tokens): {text!r}")
    acc = np.zeros(dim, dtype=np.float64)
    for token in tokens:
        h = hashlib.sha256(f"{seed}:{token}".encode("utf-8")).digest()
        token_seed = int.from_bytes(h[:8], "little")
        acc += np.random.default_rng(token_seed).standard_normal(dim)
    norm = np.linalg.norm(acc)
    if norm == 0.0:
        raise ValueError(f"unembeddable text (token directions cancelled): {text!r}")
    return (acc / norm).astype(np.float32)


class VectorCache:
    """Append-only binary vector cache, content-addressed by
    (model_id, sha256(text)).

    One record = magic, model id, digest, dim, then dim little-endian
    float32 values. Appends are serialized through a lock; corrupt or
    truncated records are skipped with a warning.
    """

    def __init__(self, path: str | Path):
        self.path = Path(path)
        self._lock = threading.Lock()
        self._index: dict[tuple[str, str], np.ndarray] = {}
        if self.path.exists():
            self._load()

    def _load(self) -> None:
        blob = self.path.read_bytes()
        pos = 0
        skipped = 0
        while pos < len(blob):
            start = blob.find(_RECORD_MAGIC, pos)
            if start < 0:
                skipped += 1
                break
            if start != pos:
                skipped += 1
            record = self._read_record(blob, start)
            if record is None:
                pos = start + 1  # resync on next magic
                skipped += 1
                continue
            model_id, digest, vector, pos = record
            self._index[(model_id, digest)] = vector
        if skipped:
            warnings.warn(
                f"vector cache {self.path}: skipped {skipped} corrupt record(s)",
                RuntimeWarning,
                stacklevel=2,
            )

    @staticmethod
    def _read_record(blob: bytes, pos: int):
        try:
            pos += len(_RECORD_MAGIC)
            (model_len,) = struct.unpack_from("<H", blob, pos)
            pos += 2
            if pos + model_len + 32 + 4 > len(blob):
                return None
            model_id = blob[pos : pos + model_len].decode("utf-8")
            pos += model_len
            digest = blob[pos : pos + 32].hex()
            pos += 32
            (dim,) = struct.unpack_from("<I", blob, pos)
            pos += 4
            if dim == 0 or dim > 1_000_000 or pos + 4 * dim > len(blob):
                return None
            vector = np.frombuffer(blob, dtype="<f4", count=dim, offset=pos).copy()
            return model_id, digest, vector, pos + 4 * dim
        except (struct.error, UnicodeDecodeError):
            return None

    def lookup(self, digest: str, model_id: str) -> np.ndarray | None:
        vector = self._index.get((model_id, digest))
        return None if vector is None else vector.copy()

    def store(self, digest: str, model_id: str, vector: np.ndarray) -> None:
        v = np.ascontiguousarray(vector, dtype="<f4")
        record = b"".join(
            (
                _RECORD_MAGIC,
                struct.pack("<H", len(model_id.encode("utf-8"))),
                model_id.encode("utf-8"),
                bytes.fromhex(digest),
                struct.pack("<I", v.shape[0]),
                v.tobytes(),
            )
        )
        with self._lock:
            self.path.parent.mkdir(parents=True, exist_ok=True)
            with open(self.path, "ab") as fh:
                fh.write(record)
            self._index[(model_id, digest)] = v.copy()


def _normalize_rows(rows: np.ndarray) -> np.ndarray:
    rows = np.asarray(rows, dtype=np.float64)
    norms = np.linalg.norm(rows, axis=1, keepdims=True)
    if np.any(norms == 0.0):
        raise ProtocolError("embedding provider returned a zero vector")
    return (rows / norms).astype(np.float32)


def _fetch_batch(
    session: requests.Session, config: EmbedderConfig, batch: list[str]
) -> np.ndarray:
    url = config.endpoint_url.rstrip("/") + "/v1/embeddings"
    headers = {"Content-Type": "application/json"}
    api_key = os.environ.get(_API_KEY_ENV)
    if api_key:
        headers["Authorization"] = f"Bearer {api_key}"
    attempts = max(1, config.max_retries)
    last_status = None
    last_error = None
    for attempt in range(attempts):
        if attempt:
            time.sleep(config.retry_backoff * (2 ** (attempt - 1)))
        try:
            resp = session.post(
                url,
                json={"model": config.model_id, "input": batch},
                headers=headers,
                timeout=60,
            )
        except requests.RequestException as exc:
            last_error, last_status = exc, None
            continue
        last_status = resp.status_code
        if resp.status_code != 200:
            last_error = None
            continue
        data = resp.json().get("data")
        if data is None:
            raise ProtocolError("response carries no 'data' array")
        if len(data) != len(batch):
            raise ProtocolError(
                f"row count mismatch: sent {len(batch)} texts, got {len(data)} embeddings"
            )
        rows = np.empty((len(batch), config.dim), dtype=np.float64)
        for item in data:
            vec = item["embedding"]
            if len(vec) != config.dim:
                raise ProtocolError(
                    f"dimension mismatch: expected {config.dim}, got {len(vec)}"
                )
            rows[item["index"]] = vec
        return rows
    detail = f"HTTP {last_status}" if last_status is not None else repr(last_error)
    raise TransportError(
        f"embeddings request failed after {attempts} attempt(s): {detail}",
        status=last_status,
    )


def _embed_remote(texts: list[str], config: EmbedderConfig) -> np.ndarray:
    batches = [
        texts[i : i + config.batch_size] for i in range(0, len(texts), config.batch_size)
    ]
    session = requests.Session()
    try:
        if config.parallelism > 1 and len(batches) > 1:
            with ThreadPoolExecutor(max_workers=config.parallelism) as pool:
                results = list(pool.map(lambda b: _fetch_batch(session, config, b), batches))
        else:
            results = [_fetch_batch(session, config, b) for b in batches]
    finally:
        session.close()
    return np.vstack(results)


def embed_texts(
    texts: list[str],
    config: EmbedderConfig,
    row_ids: list[str] | None = None,
    cache: VectorCache | None = None,
) -> EmbeddingMatrix:
    """Embed texts in input order, consulting the cache before any
    remote call and updating it afterwards.

    Offline backend output is a pure function of (texts, dim, seed).
    """
    if not texts:
        raise ValueError("texts must be non-empty")
    if row_ids is None:
        row_ids = [str(i) for i in range(len(texts))]
    if cache is None and config.cache_path is not None:
        cache = VectorCache(config.cache_path)
    model_id = config.effective_model_id()

    digests = [text_digest(t) for t in texts]
    by_digest: dict[str, np.ndarray] = {}
    if cache is not None:
        for d in digests:
            if d not in by_digest:
                hit = cache.lookup(d, model_id)
                if hit is not None:
                    by_digest[d] = hit.astype(np.float32)

    missing: list[tuple[str, str]] = []  # (digest, text), deduplicated
    seen = set(by_digest)
    for d, t in zip(digests, texts):
        if d not in seen:
            missing.append((d, t))
            seen.add(d)

    if missing:
        miss_texts = [t for _, t in missing]
        if config.backend == "offline":
            fresh = np.vstack(
                [offline_embed(t, config.dim, config.seed) for t in miss_texts]
            )
        else:
            fresh = _normalize_rows(_embed_remote(miss_texts, config))
        for (d, _), row in zip(missing, fresh):
            by_digest[d] = row
            if cache is not None:
                cache.store(d, model_id, row)

    vectors = np.vstack([by_digest[d] for d in digests]).astype(np.float32)
    return EmbeddingMatrix(
        vectors=vectors,
        model_id=model_id,
        dim=config.dim,
        row_ids=tuple(row_ids),
        normalized=True,
    )
