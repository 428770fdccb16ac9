import pytest
from fastapi.testclient import TestClient

from cds.catalog import load_catalog
from cds.service import create_app
from cds.store import InMemoryStore
from conftest import FIVE_WORDS, make_complete_sheet


@pytest.fixture
def store():
    return InMemoryStore()


@pytest.fixture
def client(store, catalog):
    app = create_app(store=store, catalog=catalog, ui_origin="http://localhost:5173")
    return TestClient(app)


def fill_body(sheet_id, body):
    """Complete a draft document in place: name, words, all 30 values."""
    body["overview"]["design_name"] = "Demo"
    body["overview"]["essence"] = "essence"
    body["overview"]["circled_words"] = FIVE_WORDS
    for slot in body["responses"]:
        slot["value"] = 1
    return body


# -- catalog --------------------------------------------------------------


def test_catalog_document(client):
    r = client.get("/api/catalog")
    assert r.status_code == 200
    doc = r.json()
    assert len(doc["heuristics"]) == 30
    assert len(doc["lexicon"]) == 20
    assert doc["likert"] == {"min": -2, "max": 2}


def test_catalog_etag_is_stable(client):
    first = client.get("/api/catalog")
    second = client.get("/api/catalog")
    assert first.headers["etag"] == second.headers["etag"]
    cached = client.get("/api/catalog", headers={"If-None-Match": first.headers["etag"]})
    assert cached.status_code == 304


def test_catalog_head_request(client):
    r = client.head("/api/catalog")
    assert r.status_code == 200
    assert r.content == b""
    assert "etag" in r.headers


# -- critique lifecycle -----------------------------------------------------


def test_post_creates_draft_201(client):
    r = client.post("/api/critiques", json={"artefact_key": "poster-2025", "appraiser": "alice"})
    assert r.status_code == 201
    doc = r.json()
    assert doc["sheet_id"]
    assert doc["status"] == "draft"
    assert len(doc["responses"]) == 30


def test_post_missing_artefact_key_400(client):
    r = client.post("/api/critiques", json={"appraiser": "alice"})
    assert r.status_code == 400
    assert r.json()["error"]["code"] == "schema"


def test_post_malformed_json_400(client):
    r = client.post(
        "/api/critiques",
        content=b"{nope",
        headers={"Content-Type": "application/json"},
    )
    assert r.status_code == 400
    assert r.json()["error"]["code"] == "malformed_body"


def test_post_full_record_document(client, catalog):
    doc = make_complete_sheet(catalog).to_dict()
    r = client.post("/api/critiques", json=doc)
    assert r.status_code == 201
    assert r.json()["sheet_id"] == doc["sheet_id"]


def test_get_unknown_404(client):
    r = client.get("/api/critiques/nope")
    assert r.status_code == 404
    assert r.json()["error"]["code"] == "not_found"


def test_put_updates_draft(client):
    created = client.post(
        "/api/critiques", json={"artefact_key": "poster-2025", "appraiser": "alice"}
    ).json()
    body = fill_body(created["sheet_id"], created)
    r = client.put(f"/api/critiques/{created['sheet_id']}", json=body)
    assert r.status_code == 200
    assert r.json()["overview"]["design_name"] == "Demo"


def test_put_unknown_404(client, catalog):
    doc = make_complete_sheet(catalog).to_dict()
    assert client.put(f"/api/critiques/{doc['sheet_id']}", json=doc).status_code == 404


def test_put_mismatched_id_400(client):
    created = client.post(
        "/api/critiques", json={"artefact_key": "poster-2025", "appraiser": "alice"}
    ).json()
    other = dict(created, sheet_id="different")
    r = client.put(f"/api/critiques/{created['sheet_id']}", json=other)
    assert r.status_code == 400


def test_finalize_incomplete_422_lists_missing(client):
    created = client.post(
        "/api/critiques", json={"artefact_key": "poster-2025", "appraiser": "alice"}
    ).json()
    created["responses"][0]["value"] = 2  # only #1 answered
    client.put(f"/api/critiques/{created['sheet_id']}", json=created)
    r = client.post(f"/api/critiques/{created['sheet_id']}/finalize")
    assert r.status_code == 422
    details = r.json()["error"]["details"]
    assert details["unset_numbers"] == list(range(2, 31))
    assert any("design_name" in p for p in details["missing"])


def test_finalize_then_put_409(client):
    created = client.post(
        "/api/critiques", json={"artefact_key": "poster-2025", "appraiser": "alice"}
    ).json()
    sheet_id = created["sheet_id"]
    client.put(f"/api/critiques/{sheet_id}", json=fill_body(sheet_id, created))
    done = client.post(f"/api/critiques/{sheet_id}/finalize")
    assert done.status_code == 200
    assert done.json()["status"] == "finalized"

    r = client.put(f"/api/critiques/{sheet_id}", json=done.json())
    assert r.status_code == 409
    assert r.json()["error"]["code"] == "sheet_finalized"
    # Finalizing twice is also an immutability conflict.
    assert client.post(f"/api/critiques/{sheet_id}/finalize").status_code == 409


def test_delete_then_404(client, store, catalog):
    sheet = make_complete_sheet(catalog)
    store.save(sheet)
    assert client.delete(f"/api/critiques/{sheet.sheet_id}").status_code == 204
    assert client.get(f"/api/critiques/{sheet.sheet_id}").status_code == 404


def test_list_by_artefact_key(client, store, catalog):
    store.save(make_complete_sheet(catalog))
    store.save(make_complete_sheet(catalog))
    r = client.get("/api/critiques", params={"artefact_key": "poster-2025"})
    assert r.status_code == 200
    headers = r.json()
    assert len(headers) == 2
    assert all(h["score"]["total"] == 0 for h in headers)
    assert client.get("/api/critiques", params={"artefact_key": "nope"}).json() == []


# -- scores, diffs, reports ---------------------------------------------------


def test_score_endpoint(client, store, catalog):
    sheet = make_complete_sheet(catalog)
    store.save(sheet)
    r = client.get(f"/api/critiques/{sheet.sheet_id}/score")
    assert r.status_code == 200
    assert r.json()["total"] == 0
    assert r.json()["perspective_subtotals"]["design"] == 0


def test_score_of_unfilled_draft_422(client):
    created = client.post(
        "/api/critiques", json={"artefact_key": "poster-2025", "appraiser": "alice"}
    ).json()
    r = client.get(f"/api/critiques/{created['sheet_id']}/score")
    assert r.status_code == 422
    assert r.json()["error"]["details"]["unset_numbers"] == list(range(1, 31))


def test_diff_identical_sheets(client, store, catalog):
    a = make_complete_sheet(catalog)
    b = make_complete_sheet(catalog)
    store.save(a)
    store.save(b)
    r = client.get("/api/diff", params={"from": a.sheet_id, "to": b.sheet_id})
    assert r.status_code == 200
    assert r.json()["total_delta"] == 0


def test_diff_cross_artefact_409(client, store, catalog):
    a = make_complete_sheet(catalog, artefact_key="poster-2025")
    b = make_complete_sheet(catalog, artefact_key="tool-2025")
    store.save(a)
    store.save(b)
    r = client.get("/api/diff", params={"from": a.sheet_id, "to": b.sheet_id})
    assert r.status_code == 409


def test_diff_unknown_sheet_404(client, store, catalog):
    a = make_complete_sheet(catalog)
    store.save(a)
    assert client.get("/api/diff", params={"from": a.sheet_id, "to": "x"}).status_code == 404


def test_report_markdown(client, store, catalog):
    sheet = make_complete_sheet(catalog)
    store.save(sheet)
    r = client.get(f"/api/critiques/{sheet.sheet_id}/report", params={"format": "md"})
    assert r.status_code == 200
    assert r.headers["content-type"].startswith("text/markdown")
    assert "## Stage 3" in r.text


def test_report_html_content_type(client, store, catalog):
    sheet = make_complete_sheet(catalog)
    store.save(sheet)
    r = client.get(f"/api/critiques/{sheet.sheet_id}/report", params={"format": "html"})
    assert r.status_code == 200
    assert r.headers["content-type"].startswith("text/html")


def test_report_of_draft_422(client, store, catalog):
    draft = make_complete_sheet(catalog, finalize=False)
    store.save(draft)
    r = client.get(f"/api/critiques/{draft.sheet_id}/report")
    assert r.status_code == 422


def test_report_unknown_format_400(client, store, catalog):
    sheet = make_complete_sheet(catalog)
    store.save(sheet)
    r = client.get(f"/api/critiques/{sheet.sheet_id}/report", params={"format": "pdf"})
    assert r.status_code == 400


# -- analytics ---------------------------------------------------------------


def test_alpha_endpoint(client):
    rows = [[c] * 30 for c in (-2, -1, 0, 1, 2)]
    r = client.post("/api/analytics/alpha", json={"rows": rows})
    assert r.status_code == 200
    assert abs(r.json()["alpha"] - 1.0) < 1e-12


def test_alpha_zero_variance_422(client):
    r = client.post("/api/analytics/alpha", json={"rows": [[1, 2], [2, 1]]})
    assert r.status_code == 422
    assert "undefined" in r.json()["error"]["message"]


def test_alpha_malformed_body_400(client):
    assert client.post("/api/analytics/alpha", json={"rows": "nope"}).status_code == 400


def test_ttest_endpoint(client):
    r = client.post(
        "/api/analytics/ttest", json={"group1": [1, 2, 3], "group2": [1, 2, 3]}
    )
    assert r.status_code == 200
    body = r.json()
    assert body["t"] == 0
    assert body["p_two_tailed"] == 1


def test_ttest_undersized_422(client):
    r = client.post("/api/analytics/ttest", json={"group1": [5], "group2": [1, 2]})
    assert r.status_code == 422


def test_word_frequencies_endpoint(client, store, catalog):
    store.save(make_complete_sheet(catalog))
    r = client.get("/api/analytics/word-frequencies")
    assert r.status_code == 200
    rows = r.json()
    assert len(rows) == 20
    clear = [row for row in rows if row["word"] == "clear"][0]
    assert clear == {
        "group": "alice", "stimulus": "poster-2025", "word": "clear", "count": 1,
    }


def test_cors_header_for_ui_origin(client):
    r = client.get("/api/catalog", headers={"Origin": "http://localhost:5173"})
    assert r.headers.get("access-control-allow-origin") == "http://localhost:5173"
