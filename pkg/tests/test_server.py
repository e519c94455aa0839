import json
import threading
import urllib.error
import urllib.request

import pytest

from ideaspace.corpus import synthesize_corpus
from ideaspace.embed import EmbedderConfig
from ideaspace.reduce import UmapParams
from ideaspace.report import PipelineConfig, run_pipeline, write_reports
from ideaspace.server import make_server


@pytest.fixture(scope="module")
def served_reports(tmp_path_factory):
    out = tmp_path_factory.mktemp("reports")
    sets = synthesize_corpus(n_sets=1, n_ideas=40, seed=6)
    config = PipelineConfig(
        embedder=EmbedderConfig(backend="offline", dim=48, seed=6),
        umap=UmapParams(seed=6, n_epochs=120, n_neighbors=10),
        min_pts=4,
    )
    result = run_pipeline(sets, config)
    write_reports(result, out)
    httpd = make_server(out, "127.0.0.1:0")
    thread = threading.Thread(target=httpd.serve_forever, daemon=True)
    thread.start()
    base = f"http://127.0.0.1:{httpd.server_address[1]}"
    try:
        yield base, result.reports[0]
    finally:
        httpd.shutdown()
        httpd.server_close()


def get(url):
    with urllib.request.urlopen(url) as resp:
        return resp.status, json.loads(resp.read())


def post(url, payload):
    req = urllib.request.Request(
        url,
        data=json.dumps(payload).encode(),
        headers={"Content-Type": "application/json"},
        method="POST",
    )
    try:
        with urllib.request.urlopen(req) as resp:
            return resp.status, json.loads(resp.read())
    except urllib.error.HTTPError as err:
        return err.code, json.loads(err.read())


class TestReadEndpoints:
    def test_list_sets(self, served_reports):
        base, report = served_reports
        status, sets = get(f"{base}/api/sets")
        assert status == 200
        assert sets == [report.set_id]

    def test_full_report(self, served_reports):
        base, report = served_reports
        status, payload = get(f"{base}/api/sets/{report.set_id}/report")
        assert status == 200
        assert payload["set_id"] == report.set_id
        assert len(payload["projection"]) == 40
        assert payload["metrics"] == report.metrics

    def test_unknown_set_404(self, served_reports):
        base, _ = served_reports
        with pytest.raises(urllib.error.HTTPError) as err:
            get(f"{base}/api/sets/nope/report")
        assert err.value.code == 404

    def test_unknown_route_404(self, served_reports):
        base, _ = served_reports
        with pytest.raises(urllib.error.HTTPError) as err:
            get(f"{base}/api/whatever")
        assert err.value.code == 404


class TestSelections:
    def test_initial_metrics_empty(self, served_reports):
        base, report = served_reports
        status, payload = get(f"{base}/api/sets/{report.set_id}/selection-metrics")
        assert status == 200
        assert payload["x"] == 0
        assert payload["ss"] == 0.0
        assert all(v == 0 for v in payload["si"].values())

    def test_post_then_read_your_writes(self, served_reports):
        base, report = served_reports
        idea_ids = [idea["id"] for idea in report.ideas]
        cluster_of = dict(zip(idea_ids, report.labels))
        non_noise = sorted({c for c in report.labels if c != -1})
        # One pick in every real cluster -> SS must be 1.0 for this participant.
        picks = []
        for cluster in non_noise:
            picks.append(next(i for i in idea_ids if cluster_of[i] == cluster))
        status, payload = post(
            f"{base}/api/sets/{report.set_id}/selections",
            {"participant_id": "alice", "selected_idea_ids": picks},
        )
        assert status == 200
        assert payload["x"] == 1
        assert payload["ss"] == 1.0
        status, payload = get(f"{base}/api/sets/{report.set_id}/selection-metrics")
        assert payload["x"] == 1
        for cluster in non_noise:
            assert payload["si"][str(cluster)] == 1

    def test_resubmission_overwrites(self, served_reports):
        base, report = served_reports
        idea_ids = [idea["id"] for idea in report.ideas]
        first, second = idea_ids[0], idea_ids[-1]
        post(
            f"{base}/api/sets/{report.set_id}/selections",
            {"participant_id": "bob", "selected_idea_ids": [first]},
        )
        status, payload = post(
            f"{base}/api/sets/{report.set_id}/selections",
            {"participant_id": "bob", "selected_idea_ids": [second]},
        )
        assert status == 200
        # bob counted once: x grows by at most 1 regardless of resubmits
        assert payload["x"] == 2  # alice + bob

    def test_unknown_idea_400(self, served_reports):
        base, report = served_reports
        status, payload = post(
            f"{base}/api/sets/{report.set_id}/selections",
            {"participant_id": "eve", "selected_idea_ids": ["not-an-idea"]},
        )
        assert status == 400
        assert "unknown idea" in payload["error"]

    def test_malformed_body_400(self, served_reports):
        base, report = served_reports
        url = f"{base}/api/sets/{report.set_id}/selections"
        status, payload = post(url, {"participant_id": "", "selected_idea_ids": []})
        assert status == 400
        assert "participant_id" in payload["error"]
        assert "selected_idea_ids" in payload["error"]

    def test_post_unknown_set_404(self, served_reports):
        base, _ = served_reports
        status, _ = post(
            f"{base}/api/sets/absent/selections",
            {"participant_id": "p", "selected_idea_ids": ["x"]},
        )
        assert status == 404
