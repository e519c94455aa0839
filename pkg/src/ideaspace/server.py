"""Read-only report API plus selection ingestion.

Serves a directory of analysis reports over HTTP for the selection
explorer: report payloads are static, participant selections append to a
JSON-lines file per set, and selection metrics (per-cluster selection
index, sampling score) are recomputed from those records on every read,
last write winning per participant.
"""

from __future__ import annotations

import json
import threading
from dataclasses import dataclass
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from pathlib import Path

import numpy as np

from .cluster import NOISE, Clustering
from .metrics import SelectionRecord, sampling_score, selection_index
from .report import AnalysisReport, report_from_json, safe_filename


@dataclass
class _SetEntry:
    report: AnalysisReport
    raw_json: str
    selections_path: Path


class ReportStore:
    """Reports plus append-only selection logs for one directory."""

    def __init__(self, reports_dir: str | Path):
        self.reports_dir = Path(reports_dir)
        self._write_lock = threading.Lock()
        self._sets: dict[str, _SetEntry] = {}
        for path in sorted(self.reports_dir.glob("*.report.json")):
            raw = path.read_text(encoding="utf-8")
            report = report_from_json(raw)
            base = safe_filename(report.set_id)
            self._sets[report.set_id] = _SetEntry(
                report=report,
                raw_json=raw,
                selections_path=self.reports_dir / f"{base}.selections.jsonl",
            )

    def set_ids(self) -> list[str]:
        return sorted(self._sets)

    def get(self, set_id: str) -> _SetEntry | None:
        return self._sets.get(set_id)

    def append_selection(self, set_id: str, participant_id: str, idea_ids: list[str]) -> None:
        entry = self._sets[set_id]
        known = {idea["id"] for idea in entry.report.ideas}
        unknown = [i for i in idea_ids if i not in known]
        if unknown:
            raise ValueError(f"unknown idea id(s): {', '.join(sorted(unknown))}")
        line = json.dumps(
            {"participant_id": participant_id, "selected_idea_ids": sorted(idea_ids)}
        )
        with self._write_lock:
            with open(entry.selections_path, "a", encoding="utf-8") as fh:
                fh.write(line + "\n")

    def load_records(self, set_id: str) -> list[SelectionRecord]:
        """Selection records with last-write-wins per participant."""
        entry = self._sets[set_id]
        latest: dict[str, SelectionRecord] = {}
        if entry.selections_path.exists():
            for line in entry.selections_path.read_text(encoding="utf-8").splitlines():
                if not line.strip():
                    continue
                payload = json.loads(line)
                record = SelectionRecord(
                    participant_id=payload["participant_id"],
                    plot_id=set_id,
                    selected_idea_ids=frozenset(payload["selected_idea_ids"]),
                )
                latest[record.participant_id] = record
        return list(latest.values())

    def selection_metrics(self, set_id: str) -> dict:
        entry = self._sets[set_id]
        records = self.load_records(set_id)
        labels = np.asarray(entry.report.labels, dtype=int)
        clustering = Clustering(
            labels=labels,
            eps=entry.report.params["dbscan"]["eps"],
            min_pts=entry.report.params["dbscan"]["min_pts"],
        )
        row_ids = [idea["id"] for idea in entry.report.ideas]
        si = selection_index(records, clustering, row_ids)
        x = len({r.participant_id for r in records})
        n_real = len(clustering.cluster_ids)
        if x >= 1 and n_real >= 1:
            ss = sampling_score(si, x, n_real)
        else:
            ss = 0.0
        return {"si": {str(k): v for k, v in si.items()}, "ss": ss, "x": x}


class _Handler(BaseHTTPRequestHandler):
    store: ReportStore  # set by make_server

    def log_message(self, format, *args):  # quiet by default
        pass

    def _send(self, status: int, payload, content_type="application/json") -> None:
        body = payload if isinstance(payload, bytes) else json.dumps(payload).encode()
        self.send_response(status)
        self.send_header("Content-Type", content_type)
        self.send_header("Content-Length", str(len(body)))
        self.send_header("Access-Control-Allow-Origin", "*")
        self.send_header("Access-Control-Allow-Headers", "Content-Type")
        self.send_header("Access-Control-Allow-Methods", "GET, POST, OPTIONS")
        self.end_headers()
        self.wfile.write(body)

    def _error(self, status: int, message: str) -> None:
        self._send(status, {"error": message})

    def do_OPTIONS(self):
        self._send(204, b"")

    def do_GET(self):
        parts = [p for p in self.path.split("?")[0].split("/") if p]
        if parts == ["api", "sets"]:
            self._send(200, self.store.set_ids())
            return
        if len(parts) == 4 and parts[:2] == ["api", "sets"]:
            set_id, leaf = parts[2], parts[3]
            entry = self.store.get(set_id)
            if entry is None:
                self._error(404, f"unknown set {set_id!r}")
                return
            if leaf == "report":
                self._send(200, entry.raw_json.encode("utf-8"))
                return
            if leaf == "selection-metrics":
                self._send(200, self.store.selection_metrics(set_id))
                return
        self._error(404, "no such resource")

    def do_POST(self):
        parts = [p for p in self.path.split("?")[0].split("/") if p]
        if len(parts) != 4 or parts[:2] != ["api", "sets"] or parts[3] != "selections":
            self._error(404, "no such resource")
            return
        set_id = parts[2]
        if self.store.get(set_id) is None:
            self._error(404, f"unknown set {set_id!r}")
            return
        try:
            length = int(self.headers.get("Content-Length", "0"))
            payload = json.loads(self.rfile.read(length) or b"{}")
        except (ValueError, json.JSONDecodeError) as exc:
            self._error(400, f"malformed JSON body: {exc}")
            return
        participant = payload.get("participant_id")
        idea_ids = payload.get("selected_idea_ids")
        problems = []
        if not isinstance(participant, str) or not participant.strip():
            problems.append("participant_id must be a non-empty string")
        if not isinstance(idea_ids, list) or not idea_ids or not all(
            isinstance(i, str) for i in idea_ids
        ):
            problems.append("selected_idea_ids must be a non-empty list of strings")
        if problems:
            self._error(400, "; ".join(problems))
            return
        try:
            self.store.append_selection(set_id, participant.strip(), idea_ids)
        except ValueError as exc:
            self._error(400, str(exc))
            return
        self._send(200, self.store.selection_metrics(set_id))


def make_server(reports_dir: str | Path, bind_addr: str = "127.0.0.1:8765") -> ThreadingHTTPServer:
    """Build the HTTP server without starting it (tests drive it directly)."""
    host, _, port = bind_addr.rpartition(":")
    handler = type("BoundHandler", (_Handler,), {"store": ReportStore(reports_dir)})
    return ThreadingHTTPServer((host or "127.0.0.1", int(port)), handler)


def serve(reports_dir: str | Path, bind_addr: str = "127.0.0.1:8765") -> None:
    """Serve a reports directory until interrupted."""
    httpd = make_server(reports_dir, bind_addr)
    host, port = httpd.server_address[:2]
    print(f"serving {reports_dir} on http://{host}:{port}")
    try:
        httpd.serve_forever()
    except KeyboardInterrupt:
        pass
    finally:
        httpd.server_close()
