from __future__ import annotations

import threading

import requests

from foonbridge.broker_sim import BrokerSimServer, EntityStore


def task_doc(entity_id="urn:ngsi-ld:Task:g:0:r", involves=()):
    return {
        "id": entity_id,
        "type": "Task",
        "involves": [
            {"type": "Relationship", "object": target, "datasetId": target}
            for target in involves
        ],
        "isDefinedBy": {"type": "Property", "value": "foon:g#unit/0"},
        "status": {"type": "Property", "value": "completed"},
        "@context": ["https://example.org/ctx.jsonld"],
    }


def test_create_then_get():
    store = EntityStore()
    status, headers, _ = store.handle_create(task_doc())
    assert status == 201
    assert headers["Location"].endswith("urn:ngsi-ld:Task:g:0:r")
    status, _, body = store.handle_get("urn:ngsi-ld:Task:g:0:r")
    assert status == 200
    assert body["isDefinedBy"]["value"] == "foon:g#unit/0"


def test_duplicate_create_conflicts():
    store = EntityStore()
    assert store.handle_create(task_doc())[0] == 201
    status, _, body = store.handle_create(task_doc())
    assert status == 409
    assert body["title"] == "AlreadyExists"


def test_create_without_id_or_type_is_rejected():
    store = EntityStore()
    assert store.handle_create({"type": "Task"})[0] == 400
    assert store.handle_create({"id": "urn:x"})[0] == 400


def test_attribute_without_discriminator_is_rejected():
    store = EntityStore()
    document = task_doc()
    document["status"] = {"value": "completed"}  # missing the type member
    status, _, body = store.handle_create(document)
    assert status == 400
    assert "status" in body["detail"]
    assert {"type", "title", "detail"} <= set(body)


def test_patch_updates_and_preserves_attributes():
    store = EntityStore()
    store.handle_create(task_doc(involves=("urn:ngsi-ld:Material:bracket:r",)))
    status, _, _ = store.handle_patch_attrs(
        "urn:ngsi-ld:Task:g:0:r",
        {"status": {"type": "Property", "value": "completed", "observedAt": "x"}},
    )
    assert status == 204
    _, _, body = store.handle_get("urn:ngsi-ld:Task:g:0:r")
    assert body["status"]["observedAt"] == "x"
    assert len(body["involves"]) == 1  # untouched attribute preserved


def test_patch_unknown_id_is_404():
    assert EntityStore().handle_patch_attrs("urn:missing", {})[0] == 404


def test_query_filters_and_sorts():
    store = EntityStore()
    store.handle_create(task_doc("urn:ngsi-ld:Task:g:1:r"))
    store.handle_create(task_doc("urn:ngsi-ld:Task:g:0:r"))
    status, _, body = store.handle_query("Task")
    assert status == 200
    assert [e["id"] for e in body] == [
        "urn:ngsi-ld:Task:g:0:r",
        "urn:ngsi-ld:Task:g:1:r",
    ]
    assert store.handle_query("Material")[2] == []


def test_get_returns_stable_document():
    store = EntityStore()
    store.handle_create(task_doc())
    first = store.handle_get("urn:ngsi-ld:Task:g:0:r")[2]
    second = store.handle_get("urn:ngsi-ld:Task:g:0:r")[2]
    assert first == second


def test_store_is_a_fold_over_the_request_log():
    store = EntityStore()
    store.route("POST", "/ngsi-ld/v1/entities", task_doc())
    store.route("POST", "/ngsi-ld/v1/entities", task_doc("urn:ngsi-ld:Task:g:1:r"))
    store.route(
        "PATCH",
        "/ngsi-ld/v1/entities/urn:ngsi-ld:Task:g:0:r/attrs",
        {"status": {"type": "Property", "value": "completed", "observedAt": "later"}},
    )
    store.route("GET", "/ngsi-ld/v1/entities?type=Task", None)
    replayed = EntityStore.replay(store.request_log())
    assert replayed.entities() == store.entities()


def test_concurrent_creates_of_distinct_ids_succeed():
    store = EntityStore()
    outcomes = []

    def create(index):
        status, _, _ = store.route(
            "POST", "/ngsi-ld/v1/entities", task_doc(f"urn:ngsi-ld:Task:g:{index}:r")
        )
        outcomes.append(status)

    threads = [threading.Thread(target=create, args=(i,)) for i in range(8)]
    for thread in threads:
        thread.start()
    for thread in threads:
        thread.join()
    assert outcomes == [201] * 8


def test_concurrent_creates_of_same_id_yield_one_201_one_409():
    store = EntityStore()
    outcomes = []

    def create():
        status, _, _ = store.route("POST", "/ngsi-ld/v1/entities", task_doc())
        outcomes.append(status)

    threads = [threading.Thread(target=create) for _ in range(2)]
    for thread in threads:
        thread.start()
    for thread in threads:
        thread.join()
    assert sorted(outcomes) == [201, 409]


def test_http_server_round_trip():
    with BrokerSimServer() as server:
        base = server.base_url
        response = requests.post(
            f"{base}/ngsi-ld/v1/entities",
            json=task_doc(involves=("urn:ngsi-ld:Material:bracket:r",)),
            headers={"Content-Type": "application/ld+json"},
            timeout=5,
        )
        assert response.status_code == 201
        assert response.headers["Location"].endswith(":r")

        assert (
            requests.post(f"{base}/ngsi-ld/v1/entities", json=task_doc(), timeout=5).status_code
            == 409
        )

        response = requests.patch(
            f"{base}/ngsi-ld/v1/entities/urn:ngsi-ld:Task:g:0:r/attrs",
            json={"status": {"type": "Property", "value": "completed", "observedAt": "t"}},
            timeout=5,
        )
        assert response.status_code == 204

        listing = requests.get(f"{base}/ngsi-ld/v1/entities", params={"type": "Task"}, timeout=5)
        assert listing.status_code == 200
        assert len(listing.json()) == 1

        single = requests.get(f"{base}/ngsi-ld/v1/entities/urn:ngsi-ld:Task:g:0:r", timeout=5)
        assert single.status_code == 200
        assert single.json()["status"]["observedAt"] == "t"

        log = requests.get(f"{base}/_sim/log", timeout=5).json()
        assert [entry["method"] for entry in log] == ["POST", "POST", "PATCH", "GET", "GET"]
        assert [entry["outcome"] for entry in log] == [201, 409, 204, 200, 200]

        assert requests.get(f"{base}/nope", timeout=5).status_code == 404

        bad = requests.post(
            f"{base}/ngsi-ld/v1/entities", data=b"not json", timeout=5
        )
        assert bad.status_code == 400
