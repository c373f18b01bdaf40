"""HTTP play service backing the browser UI.

Sessions live in memory behind per-session locks: requests touching
different games run concurrently, requests touching the same game are
serialized, and a failed request never mutates anything.  Every request and
response body is a wire document.  With a snapshot directory configured,
each mutation appends a recovery line to ``<id>.jsonl``.
"""

from __future__ import annotations

import mimetypes
import re
import secrets
import threading
import time
from dataclasses import dataclass, field
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from pathlib import Path

from . import codec
from .core import (
    GameConfig,
    Move,
    MultivisionError,
    MoveViolation,
    Position,
    apply_move,
    is_terminal,
    lex_key,
    new_game,
    total_exponents,
    validate_move,
)
from .sim import MoveRecord, Transcript
from .strategy import (
    Classification,
    can_delay,
    classify,
    engine_move,
    residues,
    winning_move,
)


class ServiceError(MultivisionError):
    def __init__(self, status: int, code: str, reason: str):
        super().__init__(f"{code}: {reason}")
        self.status = status
        self.code = code
        self.reason = reason


@dataclass
class GameSession:
    id: str
    k_power: int
    engine_side: str  # "I" | "II" | "none"
    start: Position
    position: Position
    history: list[MoveRecord] = field(default_factory=list)
    winner: str | None = None
    created_at: float = 0.0
    updated_at: float = 0.0
    lock: threading.Lock = field(default_factory=threading.Lock, repr=False, compare=False)

    @property
    def whose_turn(self) -> str:
        return "I" if len(self.history) % 2 == 0 else "II"

    @property
    def transcript(self) -> Transcript:
        return Transcript(self.start, tuple(self.history), self.winner, False)


class GameService:
    """Session store plus the game-facing request handlers."""

    def __init__(self, snapshot_dir: str | Path | None = None, verify_replay: bool = True):
        self._sessions: dict[str, GameSession] = {}
        self._map_lock = threading.Lock()
        self.snapshot_dir = Path(snapshot_dir) if snapshot_dir else None
        if self.snapshot_dir:
            self.snapshot_dir.mkdir(parents=True, exist_ok=True)
        self.verify_replay = verify_replay

    # -- request handlers ---------------------------------------------------

    def create_game(self, payload) -> dict:
        piles = []
        for pile in codec.list_field(payload, "piles"):
            if not isinstance(pile, list):
                raise ServiceError(400, "malformed", "each pile must be a list of [prime, exponent] pairs")
            pairs = []
            for pair in pile:
                if not isinstance(pair, list) or len(pair) != 2:
                    raise ServiceError(400, "malformed", "each factor must be a [prime, exponent] pair")
                pairs.append((codec.decimal_int(pair[0]), codec.decimal_int(pair[1])))
            piles.append(pairs)
        k_power = codec.decimal_int(codec.field(payload, "power"))
        engine_side = codec.field(payload, "engine_side")
        if engine_side not in ("I", "II", "none"):
            raise ServiceError(400, "bad-engine-side", "engine_side must be I, II, or none")
        position = new_game(piles, GameConfig(k_power))
        now = time.time()
        session = GameSession(
            id=secrets.token_urlsafe(12),
            k_power=k_power,
            engine_side=engine_side,
            start=position,
            position=position,
            created_at=now,
            updated_at=now,
        )
        with self._map_lock:
            self._sessions[session.id] = session
        self._snapshot(session)
        return self._view(session)

    def view(self, session_id: str) -> dict:
        session = self._get(session_id)
        with session.lock:
            return self._view(session)

    def submit_move(self, session_id: str, move: Move) -> dict:
        session = self._get(session_id)
        with session.lock:
            if session.winner is not None or is_terminal(session.position):
                raise ServiceError(409, "game-over", "the game has already ended")
            if session.engine_side == session.whose_turn:
                raise ServiceError(409, "not-your-turn", f"it is the engine's turn ({session.whose_turn})")
            self._apply(session, move)
            return self._view(session)

    def engine_reply(self, session_id: str, delay_min_moves: int | None = None) -> dict:
        session = self._get(session_id)
        with session.lock:
            if session.winner is not None or is_terminal(session.position):
                raise ServiceError(409, "game-over", "the game has already ended")
            if session.engine_side != session.whose_turn:
                raise ServiceError(409, "not-engine-turn", f"it is {session.whose_turn}'s turn")
            move = engine_move(session.position, session.k_power, delay_min_moves)
            self._apply(session, move)
            return self._view(session)

    def hint(self, session_id: str) -> dict:
        session = self._get(session_id)
        with session.lock:
            pos = session.position
            label = classify(pos, session.k_power)
            move = None
            if label is Classification.N and not is_terminal(pos):
                move = winning_move(pos, session.k_power)
            return {
                "classification": label.value,
                "move": codec.move_payload(move) if move else None,
                "can_delay": can_delay(pos),
            }

    # -- internals ----------------------------------------------------------

    def _get(self, session_id: str) -> GameSession:
        with self._map_lock:
            session = self._sessions.get(session_id)
        if session is None:
            raise ServiceError(404, "unknown-id", f"no session {session_id!r}")
        return session

    def _apply(self, session: GameSession, move: Move) -> None:
        config = GameConfig(session.k_power)
        violation = validate_move(session.position, move, config)
        if violation is not None:
            raise ServiceError(400, violation.code, violation.detail)
        mover = session.whose_turn
        from_p = classify(session.position, session.k_power) is Classification.P
        after = apply_move(session.position, move, config)
        session.position = after
        session.history.append(MoveRecord(mover, move, lex_key(after), from_p))
        if is_terminal(after):
            session.winner = mover
        session.updated_at = time.time()
        if self.verify_replay:
            self._check_replay(session)
        self._snapshot(session)

    def _check_replay(self, session: GameSession) -> None:
        config = GameConfig(session.k_power)
        pos = session.start
        for rec in session.history:
            pos = apply_move(pos, rec.move, config)
        if pos != session.position:
            raise ServiceError(500, "internal-invariant", "history replay diverged from the stored position")

    def _view(self, session: GameSession) -> dict:
        pos = session.position
        state = residues(pos, session.k_power)
        last = session.history[-1] if session.history else None
        return {
            "id": session.id,
            "power": str(session.k_power),
            "engine_side": session.engine_side,
            "whose_turn": session.whose_turn,
            "primes": [str(p) for p in pos.window.primes],
            "piles": [[str(e) for e in pile] for pile in pos.piles],
            "totals": [str(t) for t in total_exponents(pos)],
            "residues": [str(r) for r in state.total],
            "classification": classify(pos, session.k_power).value,
            "is_terminal": is_terminal(pos),
            "can_delay": can_delay(pos),
            "winner": session.winner,
            "history_length": str(len(session.history)),
            "last_move": codec.move_payload(last.move) if last else None,
            "lex_key": [str(t) for t in lex_key(pos)],
            "created_at": repr(session.created_at),
            "updated_at": repr(session.updated_at),
        }

    # -- snapshots ----------------------------------------------------------

    def _snapshot(self, session: GameSession) -> None:
        if not self.snapshot_dir:
            return
        doc = codec.document(
            "session_snapshot",
            {
                "id": session.id,
                "power": str(session.k_power),
                "engine_side": session.engine_side,
                "start": codec.position_payload(session.start),
                "moves": [codec.move_record_payload(rec) for rec in session.history],
                "winner": session.winner,
                "created_at": repr(session.created_at),
                "updated_at": repr(session.updated_at),
            },
        )
        with open(self.snapshot_dir / f"{session.id}.jsonl", "ab") as handle:
            handle.write(codec.dumps(doc) + b"\n")

    def restore(self) -> int:
        """Rebuild sessions from the last snapshot line of each file;
        returns how many sessions were recovered."""
        if not self.snapshot_dir:
            return 0
        recovered = 0
        for path in sorted(self.snapshot_dir.glob("*.jsonl")):
            lines = [line for line in path.read_bytes().splitlines() if line.strip()]
            if not lines:
                continue
            doc = codec.loads(lines[-1])
            if doc["kind"] != "session_snapshot":
                raise codec.WireFormatError(f"unexpected kind in snapshot {path.name}")
            payload = doc["payload"]
            start = codec.position_from_payload(codec.field(payload, "start"))
            k_power = codec.decimal_int(codec.field(payload, "power"))
            history = [codec.move_record_from_payload(rec) for rec in codec.list_field(payload, "moves")]
            config = GameConfig(k_power)
            position = start
            for rec in history:
                position = apply_move(position, rec.move, config)
            session = GameSession(
                id=codec.field(payload, "id"),
                k_power=k_power,
                engine_side=codec.field(payload, "engine_side"),
                start=start,
                position=position,
                history=history,
                winner=codec.field(payload, "winner"),
                created_at=float(codec.field(payload, "created_at")),
                updated_at=float(codec.field(payload, "updated_at")),
            )
            with self._map_lock:
                self._sessions[session.id] = session
            recovered += 1
        return recovered


# ---------------------------------------------------------------------------
# HTTP layer

_ROUTES = (
    ("POST", re.compile(r"/games\Z"), "create"),
    ("GET", re.compile(r"/games/([A-Za-z0-9_\-]+)\Z"), "view"),
    ("POST", re.compile(r"/games/([A-Za-z0-9_\-]+)/moves\Z"), "move"),
    ("POST", re.compile(r"/games/([A-Za-z0-9_\-]+)/engine-move\Z"), "engine"),
    ("GET", re.compile(r"/games/([A-Za-z0-9_\-]+)/hint\Z"), "hint"),
)


def make_handler(service: GameService, static_dir: str | Path | None):
    static_root = Path(static_dir).resolve() if static_dir else None

    class Handler(BaseHTTPRequestHandler):
        protocol_version = "HTTP/1.1"

        def log_message(self, *args):  # quiet by default; tests hammer the server
            pass

        def do_GET(self):
            self._route("GET")

        def do_POST(self):
            self._route("POST")

        def _route(self, method: str) -> None:
            path = self.path.split("?", 1)[0]
            try:
                for verb, pattern, action in _ROUTES:
                    match = pattern.match(path)
                    if match and verb == method:
                        self._dispatch(action, match)
                        return
                if method == "GET" and static_root is not None:
                    self._static(path)
                    return
                raise ServiceError(404, "unknown-endpoint", f"no route for {method} {path}")
            except ServiceError as exc:
                self._send_error(exc.status, exc.code, exc.reason)
            except MoveViolation as exc:
                self._send_error(400, exc.code, str(exc))
            except codec.CodecError as exc:
                self._send_error(400, "malformed", str(exc))
            except MultivisionError as exc:
                self._send_error(400, "bad-position", str(exc))
            except Exception as exc:  # pragma: no cover - defensive
                self._send_error(500, "internal", f"{type(exc).__name__}: {exc}")

        def _dispatch(self, action: str, match: re.Match) -> None:
            if action == "create":
                doc = self._body_doc()
                if doc["kind"] != "create_game":
                    raise ServiceError(400, "malformed", "expected a create_game document")
                self._send(201, codec.document("session", service.create_game(doc["payload"])))
            elif action == "view":
                self._send(200, codec.document("session", service.view(match.group(1))))
            elif action == "move":
                doc = self._body_doc()
                if doc["kind"] != "move":
                    raise ServiceError(400, "malformed", "expected a move document")
                move = codec.move_from_payload(doc["payload"])
                self._send(200, codec.document("session", service.submit_move(match.group(1), move)))
            elif action == "engine":
                delay = None
                raw = self._body_bytes()
                if raw:
                    doc = codec.loads(raw)
                    if doc["kind"] != "engine_options":
                        raise ServiceError(400, "malformed", "expected an engine_options document")
                    payload = doc["payload"]
                    if isinstance(payload, dict) and payload.get("delay_r") is not None:
                        delay = codec.decimal_int(payload["delay_r"])
                        if delay < 1:
                            raise ServiceError(400, "malformed", "delay_r must be >= 1")
                self._send(200, codec.document("session", service.engine_reply(match.group(1), delay)))
            elif action == "hint":
                self._send(200, codec.document("hint", service.hint(match.group(1))))

        def _body_bytes(self) -> bytes:
            length = int(self.headers.get("Content-Length") or 0)
            return self.rfile.read(length) if length else b""

        def _body_doc(self) -> dict:
            raw = self._body_bytes()
            if not raw:
                raise ServiceError(400, "malformed", "request body required")
            return codec.loads(raw)

        def _send(self, status: int, doc: dict) -> None:
            body = codec.dumps(doc)
            self.send_response(status)
            self.send_header("Content-Type", "application/json")
            self.send_header("Content-Length", str(len(body)))
            self.send_header("Access-Control-Allow-Origin", "*")
            self.end_headers()
            self.wfile.write(body)

        def _send_error(self, status: int, code: str, reason: str) -> None:
            self._send(status, codec.document("error", {"code": code, "reason": reason}))

        def _static(self, path: str) -> None:
            rel = path.lstrip("/") or "index.html"
            target = (static_root / rel).resolve()
            if not str(target).startswith(str(static_root)) or not target.is_file():
                raise ServiceError(404, "not-found", f"no file {path}")
            body = target.read_bytes()
            ctype = mimetypes.guess_type(target.name)[0] or "application/octet-stream"
            self.send_response(200)
            self.send_header("Content-Type", ctype)
            self.send_header("Content-Length", str(len(body)))
            self.end_headers()
            self.wfile.write(body)

    return Handler


def make_server(
    service: GameService,
    host: str = "127.0.0.1",
    port: int = 0,
    static_dir: str | Path | None = None,
) -> ThreadingHTTPServer:
    """A threading HTTP server bound to ``host:port`` (port 0 = ephemeral)."""
    server = ThreadingHTTPServer((host, port), make_handler(service, static_dir))
    server.daemon_threads = True
    return server
