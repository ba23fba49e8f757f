"""HTTP front for the broker store.

Binds 127.0.0.1 only; port 0 picks a free ephemeral port, which is how the
test suite runs it. ``python -m foonbridge.broker_sim --port 1026`` serves
a standalone instance.
"""

from __future__ import annotations

import argparse
import json
import logging
import threading
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer

from .store import EntityStore, dumps

log = logging.getLogger(__name__)


class _Handler(BaseHTTPRequestHandler):
    protocol_version = "HTTP/1.1"
    store: EntityStore  # injected by server factory

    def _read_body(self):
        length = int(self.headers.get("Content-Length") or 0)
        if length == 0:
            return None
        raw = self.rfile.read(length)
        try:
            return json.loads(raw)
        except json.JSONDecodeError:
            return raw.decode("utf-8", "replace")

    def _respond(self, status: int, headers: dict, payload) -> None:
        body = b"" if payload is None else dumps(payload)
        self.send_response(status)
        for name, value in headers.items():
            self.send_header(name, value)
        self.send_header("Content-Length", str(len(body)))
        self.end_headers()
        if body:
            self.wfile.write(body)

    def _handle(self):
        body = self._read_body()
        if isinstance(body, str):
            self._respond(
                400,
                {"Content-Type": "application/json"},
                {"title": "InvalidRequest", "detail": "body is not valid JSON"},
            )
            return
        status, headers, payload = self.store.route(self.command, self.path, body)
        self._respond(status, headers, payload)

    do_GET = do_POST = do_PATCH = _handle

    def log_message(self, format, *args):
        log.debug("broker-sim: " + format, *args)


class BrokerSimServer:
    """Threaded HTTP server around an EntityStore, usable as a context manager."""

    def __init__(self, store: EntityStore | None = None, port: int = 0):
        self.store = store or EntityStore()
        handler = type("BoundHandler", (_Handler,), {"store": self.store})
        self._server = ThreadingHTTPServer(("127.0.0.1", port), handler)
        self._thread: threading.Thread | None = None

    @property
    def port(self) -> int:
        return self._server.server_address[1]

    @property
    def base_url(self) -> str:
        return f"http://127.0.0.1:{self.port}"

    def start(self) -> "BrokerSimServer":
        self._thread = threading.Thread(target=self._server.serve_forever, daemon=True)
        self._thread.start()
        return self

    def stop(self) -> None:
        self._server.shutdown()
        self._server.server_close()
        if self._thread is not None:
            self._thread.join(timeout=5)

    def __enter__(self) -> "BrokerSimServer":
        return self.start()

    def __exit__(self, *exc_info) -> None:
        self.stop()


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(description="serve an NGSI-LD broker subset")
    parser.add_argument("--port", type=int, default=1026)
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO)
    server = BrokerSimServer(port=args.port)
    print(f"broker-sim listening on {server.base_url}")
    try:
        server._server.serve_forever()
    except KeyboardInterrupt:
        pass
    finally:
        server._server.server_close()
    return 0
