"""Shared fixtures: a fake embeddings endpoint and small corpora."""

from __future__ import annotations

import json
import threading
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer

import numpy as np
import pytest

from ideaspace.corpus import Idea, IdeaSet


@pytest.fixture
def three_ideas() -> IdeaSet:
    return IdeaSet(
        set_id="ps-1",
        problem_statement="Product for segregation as a means for effective waste management",
        ideas=(
            Idea(
                id="1",
                title="Smart Segregation Bins",
                action="Automatically sort waste",
                object="Bins",
                context="Use sensors to identify and segregate waste into streams",
            ),
            Idea(
                id="2",
                title="Colour-Coded Waste Bags",
                action="Visually indicate waste type",
                object="Waste Bags",
                context="Different coloured bags encourage segregation at the source",
            ),
            Idea(
                id="3",
                title="Segregation Education App",
                action="Educate and guide users",
                object="Mobile App",
                context="Teaches waste segregation and tracks environmental impact",
            ),
        ),
    )


class _FakeEmbeddingsHandler(BaseHTTPRequestHandler):
    """OpenAI-compatible /v1/embeddings stub with scriptable failures."""

    server_state: dict

    def log_message(self, *args):
        pass

    def do_POST(self):
        state = self.server_state
        state["calls"] += 1
        if self.path != "/v1/embeddings":
            self.send_response(404)
            self.end_headers()
            return
        if state["fail_next"] > 0:
            state["fail_next"] -= 1
            self.send_response(state.get("fail_status", 503))
            self.end_headers()
            return
        length = int(self.headers.get("Content-Length", "0"))
        payload = json.loads(self.rfile.read(length))
        texts = payload["input"]
        state["batch_sizes"].append(len(texts))
        dim = state["dim"]
        drop = state.get("drop_rows", 0)
        short_dim = state.get("short_dim")
        data = []
        for i, text in enumerate(texts):
            if drop and i >= len(texts) - drop:
                continue
            d = short_dim if short_dim else dim
            rng = np.random.default_rng(abs(hash(text)) % (2**32))
            vec = rng.standard_normal(d)
            data.append({"index": i, "embedding": vec.tolist()})
        data.reverse()  # clients must reorder by index
        body = json.dumps({"data": data}).encode()
        self.send_response(200)
        self.send_header("Content-Type", "application/json")
        self.send_header("Content-Length", str(len(body)))
        self.end_headers()
        self.wfile.write(body)


@pytest.fixture
def fake_embeddings_server():
    """Yields (base_url, state). Mutate state to script failures."""
    state = {
        "calls": 0,
        "batch_sizes": [],
        "fail_next": 0,
        "dim": 8,
    }
    handler = type("Handler", (_FakeEmbeddingsHandler,), {"server_state": state})
    httpd = ThreadingHTTPServer(("127.0.0.1", 0), handler)
    thread = threading.Thread(target=httpd.serve_forever, daemon=True)
    thread.start()
    try:
        yield f"http://127.0.0.1:{httpd.server_address[1]}", state
    finally:
        httpd.shutdown()
        httpd.server_close()
