import threading
from concurrent.futures import ThreadPoolExecutor

import httpx
import pytest

from multivision import codec
from multivision.service import GameService, make_server


@pytest.fixture
def server(tmp_path):
    service = GameService(snapshot_dir=tmp_path / "snapshots")
    srv = make_server(service, port=0)
    thread = threading.Thread(target=lambda: srv.serve_forever(poll_interval=0.02), daemon=True)
    thread.start()
    base = f"http://127.0.0.1:{srv.server_address[1]}"
    yield service, base
    srv.shutdown()
    srv.server_close()


def create_doc(piles, power="2", engine_side="II"):
    return codec.document(
        "create_game", {"piles": piles, "power": power, "engine_side": engine_side}
    )


def move_doc(prime_index, parts):
    return codec.document(
        "move",
        {
            "prime_index": prime_index,
            "parts": [
                {"pile": pile, "times": times, "increments": increments}
                for pile, times, increments in parts
            ],
        },
    )


def post(base, path, doc=None):
    content = codec.dumps(doc) if doc is not None else b""
    return httpx.post(base + path, content=content)


class TestCreateGame:
    def test_two_singleton_piles(self, server):
        _, base = server
        r = post(base, "/games", create_doc([[["2", "1"]], [["3", "1"]]]))
        assert r.status_code == 201
        doc = r.json()
        assert doc["version"] == "1" and doc["kind"] == "session"
        payload = doc["payload"]
        assert payload["classification"] == "N"
        assert payload["whose_turn"] == "I"
        assert payload["primes"] == ["2", "3"]
        assert payload["totals"] == ["1", "1"]
        assert payload["residues"] == ["1", "1"]
        assert payload["can_delay"] is True

    def test_all_ones_start_is_terminal_p(self, server):
        _, base = server
        r = post(base, "/games", create_doc([[]]))
        assert r.status_code == 201
        payload = r.json()["payload"]
        assert payload["classification"] == "P"
        assert payload["is_terminal"] is True

    def test_non_prime_base_is_client_error(self, server):
        _, base = server
        r = post(base, "/games", create_doc([[["4", "1"]]]))
        assert r.status_code == 400
        payload = r.json()["payload"]
        assert "not prime" in payload["reason"]

    def test_malformed_body(self, server):
        _, base = server
        r = httpx.post(base + "/games", content=b"{nope")
        assert r.status_code == 400
        assert r.json()["payload"]["code"] == "malformed"


class TestSubmitMove:
    def test_legal_move_flips_turn_and_grows_history(self, server):
        _, base = server
        sid = post(base, "/games", create_doc([[["2", "1"]], [["3", "1"]]])).json()["payload"]["id"]
        r = post(base, f"/games/{sid}/moves", move_doc("0", [("0", "1", {})]))
        assert r.status_code == 200
        payload = r.json()["payload"]
        assert payload["whose_turn"] == "II"
        assert payload["history_length"] == "1"
        assert payload["last_move"]["prime_index"] == "0"

    def test_illegal_move_leaves_session_unchanged(self, server):
        _, base = server
        sid = post(base, "/games", create_doc([[["2", "1"]], [["3", "1"]]])).json()["payload"]["id"]
        before = httpx.get(base + f"/games/{sid}").json()["payload"]
        r = post(base, f"/games/{sid}/moves", move_doc("1", [("0", "1", {})]))
        assert r.status_code == 400
        assert r.json()["payload"]["code"] == "insufficient-exponent"
        after = httpx.get(base + f"/games/{sid}").json()["payload"]
        assert after == before

    def test_unknown_session(self, server):
        _, base = server
        r = post(base, "/games/nope/moves", move_doc("0", [("0", "1", {})]))
        assert r.status_code == 404
        assert r.json()["payload"]["code"] == "unknown-id"

    def test_not_your_turn_when_engine_moves_first(self, server):
        _, base = server
        sid = post(
            base, "/games", create_doc([[["2", "1"], ["3", "1"]]], engine_side="I")
        ).json()["payload"]["id"]
        r = post(base, f"/games/{sid}/moves", move_doc("1", [("0", "1", {})]))
        assert r.status_code == 409
        assert r.json()["payload"]["code"] == "not-your-turn"

    def test_game_over_rejected(self, server):
        _, base = server
        sid = post(base, "/games", create_doc([[["2", "1"]]], engine_side="none")).json()[
            "payload"
        ]["id"]
        assert post(base, f"/games/{sid}/moves", move_doc("0", [("0", "1", {})])).status_code == 200
        r = post(base, f"/games/{sid}/moves", move_doc("0", [("0", "1", {})]))
        assert r.status_code == 409
        assert r.json()["payload"]["code"] == "game-over"


class TestEngineReply:
    def test_engine_restores_square(self, server):
        _, base = server
        sid = post(base, "/games", create_doc([[["2", "1"], ["3", "1"]]])).json()["payload"]["id"]
        post(base, f"/games/{sid}/moves", move_doc("1", [("0", "1", {})]))  # human blunder
        r = post(base, f"/games/{sid}/engine-move")
        assert r.status_code == 200
        payload = r.json()["payload"]
        assert payload["classification"] == "P"
        assert payload["residues"] == ["0", "0"]

    def test_engine_stalls_on_lost_positions(self, server):
        _, base = server
        sid = post(
            base, "/games", create_doc([[["2", "1"]], [["2", "1"], ["3", "2"]]], engine_side="I")
        ).json()["payload"]["id"]
        r = post(base, f"/games/{sid}/engine-move")
        assert r.status_code == 200
        payload = r.json()["payload"]
        # a losing engine stalls: the move pumps the top prime
        assert payload["last_move"]["parts"][0]["increments"], payload

    def test_delay_option_pumps_harder(self, server):
        _, base = server
        sid = post(base, "/games", create_doc([[["2", "1"], ["3", "1"]]], engine_side="I")).json()[
            "payload"
        ]["id"]
        r = post(
            base,
            f"/games/{sid}/engine-move",
            codec.document("engine_options", {"delay_r": "10"}),
        )
        assert r.status_code == 200
        payload = r.json()["payload"]
        assert payload["classification"] == "P"
        assert int(payload["totals"][1]) >= 10

    def test_not_engine_turn(self, server):
        _, base = server
        sid = post(base, "/games", create_doc([[["2", "1"]]])).json()["payload"]["id"]
        r = post(base, f"/games/{sid}/engine-move")
        assert r.status_code == 409
        assert r.json()["payload"]["code"] == "not-engine-turn"

    def test_terminal_session_is_game_over(self, server):
        _, base = server
        sid = post(base, "/games", create_doc([[]], engine_side="I")).json()["payload"]["id"]
        r = post(base, f"/games/{sid}/engine-move")
        assert r.status_code == 409
        assert r.json()["payload"]["code"] == "game-over"


class TestHint:
    def test_hint_on_n_position(self, server):
        _, base = server
        sid = post(base, "/games", create_doc([[["2", "1"], ["3", "1"]]])).json()["payload"]["id"]
        r = httpx.get(base + f"/games/{sid}/hint")
        assert r.status_code == 200
        payload = r.json()["payload"]
        assert payload["classification"] == "N"
        assert payload["move"]["prime_index"] == "0"

    def test_hint_on_p_position(self, server):
        _, base = server
        sid = post(base, "/games", create_doc([[["2", "2"]]])).json()["payload"]["id"]
        payload = httpx.get(base + f"/games/{sid}/hint").json()["payload"]
        assert payload["classification"] == "P"
        assert payload["move"] is None

    def test_hint_is_pure(self, server):
        _, base = server
        sid = post(base, "/games", create_doc([[["2", "1"], ["3", "1"]]])).json()["payload"]["id"]
        first = httpx.get(base + f"/games/{sid}/hint").json()
        second = httpx.get(base + f"/games/{sid}/hint").json()
        assert first == second
        assert httpx.get(base + f"/games/{sid}").json()["payload"]["history_length"] == "0"


class TestLifecycle:
    def test_full_game_declares_winner(self, server):
        _, base = server
        sid = post(base, "/games", create_doc([[["2", "1"], ["3", "1"]]])).json()["payload"]["id"]
        payload = post(base, f"/games/{sid}/moves", move_doc("0", [("0", "1", {"1": "1"})])).json()[
            "payload"
        ]
        assert payload["classification"] == "P"
        while payload["winner"] is None:
            if payload["whose_turn"] == "II":
                payload = post(base, f"/games/{sid}/engine-move").json()["payload"]
            else:
                # human keeps dividing the top prime
                payload = post(
                    base, f"/games/{sid}/moves", move_doc("1", [("0", "1", {})])
                ).json()["payload"]
        # the human opened with the winning move, so the human consummates
        assert payload["winner"] == "I"
        assert payload["is_terminal"] is True

    def test_snapshots_restore_sessions(self, server, tmp_path):
        service, base = server
        sid = post(base, "/games", create_doc([[["2", "1"], ["3", "1"]]])).json()["payload"]["id"]
        post(base, f"/games/{sid}/moves", move_doc("0", [("0", "1", {})]))
        fresh = GameService(snapshot_dir=service.snapshot_dir)
        assert fresh.restore() == 1
        view = fresh.view(sid)
        assert view["history_length"] == "1"
        assert view["piles"] == [["0", "1"]]

    def test_concurrent_sessions_do_not_interfere(self, server):
        _, base = server

        def one_game(n):
            sid = post(base, "/games", create_doc([[["2", "1"], ["3", str(n + 1)]]])).json()[
                "payload"
            ]["id"]
            post(base, f"/games/{sid}/moves", move_doc("1", [("0", "1", {})]))
            return httpx.get(base + f"/games/{sid}").json()["payload"]

        with ThreadPoolExecutor(max_workers=8) as pool:
            results = list(pool.map(one_game, range(8)))
        for n, payload in enumerate(results):
            assert payload["totals"] == ["1", str(n)]
            assert payload["history_length"] == "1"
