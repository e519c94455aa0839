import numpy as np
import pytest

from ideaspace.embed import (
    EmbedderConfig,
    EmbeddingMatrix,
    VectorCache,
    embed_texts,
    offline_embed,
    text_digest,
)
from ideaspace.errors import ProtocolError, TransportError
from ideaspace.geometry import cosine_similarity


def offline_config(**kw):
    defaults = dict(backend="offline", dim=8, seed=42, model_id="offline")
    defaults.update(kw)
    return EmbedderConfig(**defaults)


def remote_config(url, **kw):
    defaults = dict(
        backend="remote",
        endpoint_url=url,
        model_id="test-model",
        dim=8,
        batch_size=16,
        max_retries=3,
        retry_backoff=0.01,
    )
    defaults.update(kw)
    return EmbedderConfig(**defaults)


class TestOfflineEmbed:
    def test_deterministic(self):
        assert np.array_equal(offline_embed("chair", 8, 42), offline_embed("chair", 8, 42))

    def test_unit_norm(self):
        for text in ["chair", "a few more words", "numbers 123 mixed"]:
            v = offline_embed(text, 64, 7)
            assert abs(np.linalg.norm(v.astype(np.float64)) - 1.0) < 1e-6

    def test_shared_tokens_raise_similarity(self):
        # Verified numerically: shared-token pairs sit far above disjoint
        # pairs for this seed (0.56 vs -0.02 at dim 256).
        shared = cosine_similarity(
            offline_embed("chair seat", 256, 42), offline_embed("chair bench", 256, 42)
        )
        disjoint = cosine_similarity(
            offline_embed("chair seat", 256, 42), offline_embed("xylophone quartz", 256, 42)
        )
        assert shared > disjoint + 0.3

    def test_empty_text_unembeddable(self):
        with pytest.raises(ValueError, match="unembeddable"):
            offline_embed("", 8, 42)
        with pytest.raises(ValueError, match="unembeddable"):
            offline_embed("!!! ---", 8, 42)

    def test_dim_lower_bound(self):
        with pytest.raises(ValueError):
            offline_embed("chair", 1, 42)

    def test_tokenization_case_and_separators(self):
        a = offline_embed("Smart-Bins", 32, 0)
        b = offline_embed("smart bins", 32, 0)
        assert np.array_equal(a, b)


class TestEmbedTexts:
    def test_offline_pure_function(self):
        cfg = offline_config()
        m1 = embed_texts(["one", "two"], cfg)
        m2 = embed_texts(["one", "two"], cfg)
        assert np.array_equal(m1.vectors, m2.vectors)
        assert m1.normalized and m1.dim == 8

    def test_empty_input_rejected(self):
        with pytest.raises(ValueError):
            embed_texts([], offline_config())

    def test_row_order_matches_input(self):
        cfg = offline_config()
        m = embed_texts(["alpha", "beta", "alpha"], cfg)
        assert np.array_equal(m.vectors[0], m.vectors[2])
        assert not np.array_equal(m.vectors[0], m.vectors[1])

    def test_matrix_invariants_enforced(self):
        bad = np.array([[2.0, 0.0], [0.0, 1.0]], dtype=np.float32)
        with pytest.raises(ValueError):
            EmbeddingMatrix(vectors=bad, model_id="m", dim=2, row_ids=("a", "b"))
        with pytest.raises(ValueError):
            EmbeddingMatrix(
                vectors=np.eye(2, dtype=np.float32),
                model_id="m",
                dim=2,
                row_ids=("a", "a"),
            )


class TestRemote:
    def test_fetch_and_reorder(self, fake_embeddings_server):
        url, state = fake_embeddings_server
        m = embed_texts(["a", "b", "c"], remote_config(url))
        assert m.vectors.shape == (3, 8)
        # The stub reverses rows; matching per-text vectors proves we
        # reassembled by index.
        again = embed_texts(["c"], remote_config(url))
        assert np.allclose(m.vectors[2], again.vectors[0])

    def test_batching_matches_single_batch(self, fake_embeddings_server):
        url, state = fake_embeddings_server
        texts = [f"text {i}" for i in range(10)]
        one = embed_texts(texts, remote_config(url, batch_size=10))
        many = embed_texts(texts, remote_config(url, batch_size=3))
        assert np.array_equal(one.vectors, many.vectors)
        assert 3 in state["batch_sizes"]

    def test_row_count_mismatch_is_protocol_error(self, fake_embeddings_server):
        url, state = fake_embeddings_server
        state["drop_rows"] = 1
        with pytest.raises(ProtocolError, match="row count"):
            embed_texts([f"t{i}" for i in range(5)], remote_config(url))

    def test_dim_mismatch_is_protocol_error(self, fake_embeddings_server):
        url, state = fake_embeddings_server
        state["short_dim"] = 5
        with pytest.raises(ProtocolError, match="dimension"):
            embed_texts(["a"], remote_config(url))

    def test_retry_then_success(self, fake_embeddings_server):
        url, state = fake_embeddings_server
        state["fail_next"] = 2
        m = embed_texts(["a"], remote_config(url, max_retries=3))
        assert m.vectors.shape == (1, 8)
        assert state["calls"] == 3

    def test_transport_error_carries_last_status(self, fake_embeddings_server):
        url, state = fake_embeddings_server
        state["fail_next"] = 99
        state["fail_status"] = 503
        with pytest.raises(TransportError) as err:
            embed_texts(["a"], remote_config(url, max_retries=2))
        assert err.value.status == 503
        assert state["calls"] == 2

    def test_unreachable_endpoint(self):
        cfg = remote_config("http://127.0.0.1:1", max_retries=2)
        with pytest.raises(TransportError) as err:
            embed_texts(["a"], cfg)
        assert err.value.status is None

    def test_cache_prevents_remote_calls(self, fake_embeddings_server, tmp_path):
        url, state = fake_embeddings_server
        cfg = remote_config(url, cache_path=tmp_path / "cache.bin")
        first = embed_texts(["a", "b"], cfg)
        calls_after_first = state["calls"]
        second = embed_texts(["a", "b"], cfg)
        assert state["calls"] == calls_after_first  # served from cache
        assert np.array_equal(first.vectors, second.vectors)


class TestVectorCache:
    def test_store_lookup_bit_exact(self, tmp_path):
        cache = VectorCache(tmp_path / "c.bin")
        vec = np.array([0.25, -0.5, 0.75], dtype=np.float32)
        digest = text_digest("hello")
        cache.store(digest, "model-x", vec)
        assert np.array_equal(cache.lookup(digest, "model-x"), vec)
        # And after reopening from disk.
        reopened = VectorCache(tmp_path / "c.bin")
        assert np.array_equal(reopened.lookup(digest, "model-x"), vec)

    def test_unknown_digest_absent(self, tmp_path):
        cache = VectorCache(tmp_path / "c.bin")
        assert cache.lookup(text_digest("nope"), "model-x") is None

    def test_model_id_partitions_cache(self, tmp_path):
        cache = VectorCache(tmp_path / "c.bin")
        digest = text_digest("hello")
        cache.store(digest, "model-a", np.ones(3, dtype=np.float32))
        assert cache.lookup(digest, "model-b") is None

    def test_truncated_record_skipped_with_warning(self, tmp_path):
        path = tmp_path / "c.bin"
        cache = VectorCache(path)
        d1, d2 = text_digest("one"), text_digest("two")
        cache.store(d1, "m", np.full(4, 0.5, dtype=np.float32))
        cache.store(d2, "m", np.full(4, 0.25, dtype=np.float32))
        blob = path.read_bytes()
        path.write_bytes(blob[:-7])  # chop the tail record
        with pytest.warns(RuntimeWarning, match="corrupt"):
            reopened = VectorCache(path)
        assert reopened.lookup(d1, "m") is not None
        assert reopened.lookup(d2, "m") is None
