import pytest
from fastapi.testclient import TestClient

from collusion.detect import DetectConfig, ThresholdMode, run_detection, write_report
from collusion.iforest import ForestParams
from collusion.service import create_app
from collusion.simulate import SimConfig, generate, write_dataset


@pytest.fixture(scope="module")
def workspace(tmp_path_factory):
    root = tmp_path_factory.mktemp("svc")
    cfg = SimConfig(
        num_players=200, num_matches=150, teams_per_match=8, team_size=2,
        colluder_pairs=3, colluder_strength=1.0, seed=31,
    )
    dataset, truth = generate(cfg)
    data_dir = root / "data"
    write_dataset(dataset, truth, data_dir)
    dcfg = DetectConfig(
        min_shared_matches=3, min_player_matches=3,
        forest=ForestParams(n_trees=50, subsample=256, seed=31),
        threshold_mode=ThresholdMode.TOP_K, threshold_value=15,
    )
    report = run_detection(dataset, dcfg)
    report_path = root / "report.csv"
    with open(report_path, "w", encoding="utf-8") as fh:
        write_report(report, fh)
    return root, data_dir, report_path, report


@pytest.fixture()
def client(workspace, tmp_path):
    root, data_dir, report_path, _ = workspace
    app = create_app(
        report_path=report_path,
        data_path=data_dir,
        verdict_log_path=tmp_path / "verdicts.jsonl",
    )
    return TestClient(app)


def test_pairs_default_sort_lowest_score_first(client):
    body = client.get("/api/v1/pairs?limit=5").json()
    scores = [e["score"] for e in body["entries"]]
    assert scores == sorted(scores)
    assert body["total"] == 15
    assert body["entries"][0]["rank"] == 1


def test_pairs_pagination_stable(client):
    first = client.get("/api/v1/pairs?limit=5&offset=0").json()
    second = client.get("/api/v1/pairs?limit=5&offset=5").json()
    assert {tuple((e["pair_a"], e["pair_b"])) for e in first["entries"]}.isdisjoint(
        {tuple((e["pair_a"], e["pair_b"])) for e in second["entries"]}
    )
    assert first["total"] == second["total"]


def test_pairs_offset_beyond_end(client):
    body = client.get("/api/v1/pairs?limit=5&offset=9999").json()
    assert body["entries"] == []
    assert body["total"] == 15


def test_pairs_status_filter_empty_without_verdicts(client):
    body = client.get("/api/v1/pairs?status=confirmed").json()
    assert body["total"] == 0


def test_409_without_report(workspace, tmp_path):
    _, data_dir, _, _ = workspace
    app = create_app(report_path=None, data_path=data_dir,
                     verdict_log_path=tmp_path / "v.jsonl")
    c = TestClient(app)
    assert c.get("/api/v1/pairs").status_code == 409


def test_detail_reversed_ids_same_resource(client, workspace):
    *_, report = workspace
    a, b = report[0].pair
    d1 = client.get(f"/api/v1/pairs/{a}/{b}").json()
    d2 = client.get(f"/api/v1/pairs/{b}/{a}").json()
    assert d1 == d2
    assert d1["pair_a"] == a


def test_detail_timeline_matches_report(client, workspace):
    *_, report = workspace
    entry = report[0]
    a, b = entry.pair
    detail = client.get(f"/api/v1/pairs/{a}/{b}").json()
    timeline = detail["timeline"]
    assert len(timeline) == entry.features.num_matches_opp
    avg = sum(t["distance"] for t in timeline) / len(timeline)
    assert abs(avg - entry.features.avg_distance_opp) < 1e-9
    assert all(t["rank_diff"] == abs(t["rank_a"] - t["rank_b"]) for t in timeline)


def test_detail_unknown_pair_404(client):
    assert client.get("/api/v1/pairs/nobody/nothing").status_code == 404


def test_network_radius_zero(client, workspace):
    *_, report = workspace
    a, b = report[0].pair
    net = client.get(f"/api/v1/pairs/{a}/{b}/network?radius=0").json()
    assert {n["id"] for n in net["nodes"]} == {a, b}


def test_network_radius_grows(client, workspace):
    *_, report = workspace
    a, b = report[0].pair
    n0 = client.get(f"/api/v1/pairs/{a}/{b}/network?radius=0").json()
    n1 = client.get(f"/api/v1/pairs/{a}/{b}/network?radius=1").json()
    assert len(n1["nodes"]) >= len(n0["nodes"])
    assert {n["id"] for n in n0["nodes"]} <= {n["id"] for n in n1["nodes"]}


def test_verdict_post_then_fetch(client, workspace):
    *_, report = workspace
    a, b = report[0].pair
    res = client.post(
        f"/api/v1/pairs/{a}/{b}/verdict",
        json={"status": "confirmed", "notes": "obvious", "reviewer": "r1"},
    )
    assert res.status_code == 200
    detail = client.get(f"/api/v1/pairs/{a}/{b}").json()
    assert detail["verdict"]["status"] == "confirmed"
    listing = client.get("/api/v1/pairs?status=confirmed").json()
    assert listing["total"] == 1
    unreviewed = client.get("/api/v1/pairs?status=unreviewed").json()
    assert unreviewed["total"] == 14


def test_verdict_latest_wins_history_kept(client, workspace):
    *_, report = workspace
    a, b = report[1].pair
    client.post(f"/api/v1/pairs/{a}/{b}/verdict",
                json={"status": "inconclusive", "reviewer": "r1"})
    client.post(f"/api/v1/pairs/{a}/{b}/verdict",
                json={"status": "rejected", "reviewer": "r2"})
    detail = client.get(f"/api/v1/pairs/{a}/{b}").json()
    assert detail["verdict"]["status"] == "rejected"
    assert len(detail["verdicts"]) == 2


def test_verdict_idempotent_consecutive(client, workspace):
    *_, report = workspace
    a, b = report[2].pair
    body = {"status": "confirmed", "notes": "n", "reviewer": "r"}
    r1 = client.post(f"/api/v1/pairs/{a}/{b}/verdict", json=body).json()
    r2 = client.post(f"/api/v1/pairs/{a}/{b}/verdict", json=body).json()
    assert r1["appended"] is True
    assert r2["appended"] is False
    detail = client.get(f"/api/v1/pairs/{a}/{b}").json()
    assert len(detail["verdicts"]) == 1


def test_verdict_invalid_status_400(client, workspace):
    *_, report = workspace
    a, b = report[0].pair
    res = client.post(f"/api/v1/pairs/{a}/{b}/verdict", json={"status": "banned"})
    assert res.status_code == 400


def test_verdict_unknown_pair_404(client):
    res = client.post("/api/v1/pairs/x/y/verdict", json={"status": "confirmed"})
    assert res.status_code == 404


def test_stats_panel_and_tallies(client, workspace):
    *_, report = workspace
    a, b = report[0].pair
    client.post(f"/api/v1/pairs/{a}/{b}/verdict", json={"status": "confirmed"})
    body = client.get("/api/v1/stats").json()
    assert body["summary"]["matches"] == 150
    assert body["verdicts"]["confirmed"] == 1
    assert body["verdicts"]["total"] == 1


def test_concurrent_verdicts_never_lost(workspace, tmp_path):
    from concurrent.futures import ThreadPoolExecutor

    _, data_dir, report_path, report = workspace
    app = create_app(report_path=report_path, data_path=data_dir,
                     verdict_log_path=tmp_path / "v.jsonl")
    c = TestClient(app)

    def post(entry):
        a, b = entry.pair
        return c.post(f"/api/v1/pairs/{a}/{b}/verdict",
                      json={"status": "confirmed", "reviewer": "racer"}).status_code

    with ThreadPoolExecutor(max_workers=8) as pool:
        codes = list(pool.map(post, report))
    assert codes == [200] * len(report)
    assert c.get("/api/v1/stats").json()["verdicts"]["confirmed"] == len(report)
    lines = (tmp_path / "v.jsonl").read_text().strip().splitlines()
    assert len(lines) == len(report)  # serialized append, no interleaving


def test_log_replay_reconstructs_state(workspace, tmp_path):
    root, data_dir, report_path, report = workspace
    log = tmp_path / "verdicts.jsonl"
    app = create_app(report_path=report_path, data_path=data_dir, verdict_log_path=log)
    c = TestClient(app)
    posted = {}
    for i, entry in enumerate(report[:6]):
        a, b = entry.pair
        status = ["confirmed", "rejected", "inconclusive"][i % 3]
        c.post(f"/api/v1/pairs/{a}/{b}/verdict",
               json={"status": status, "reviewer": f"r{i}"})
        posted[(a, b)] = status
    before = c.get("/api/v1/pairs?limit=100").json()

    # simulate a crash: brand-new process state, same log
    app2 = create_app(report_path=report_path, data_path=data_dir, verdict_log_path=log)
    c2 = TestClient(app2)
    after = c2.get("/api/v1/pairs?limit=100").json()
    assert [e["verdict"] for e in after["entries"]] == [
        e["verdict"] for e in before["entries"]
    ]
    assert c2.get("/api/v1/stats").json()["verdicts"] == c.get("/api/v1/stats").json()["verdicts"]
