import json

import pytest
from fastapi.testclient import TestClient

from quizsmith.curation import (
    BatchStore,
    CurationBatch,
    CurationResult,
    Edit,
    EditTarget,
    Selection,
    batch_to_dict,
    export_quiz,
    result_from_dict,
    result_to_dict,
    validate_curation,
)
from quizsmith.distractors import McQuestion
from quizsmith.errors import AlreadyCuratedError, CurationRejectedError, NotCuratedError
from quizsmith.server import create_app


def make_mcq(i):
    return McQuestion(
        question=f"Which city hosted event {i}?",
        key=f"key-{i}",
        distractors=tuple(f"cand-{i}-{j}" for j in range(5)),
    )


def make_batch(batch_id="b1", seed=7, status="open"):
    return CurationBatch(
        batch_id=batch_id,
        seed=seed,
        candidates=tuple(make_mcq(i) for i in range(10)),
        status=status,
    )


def valid_result(batch_id="b1"):
    return CurationResult(
        batch_id=batch_id,
        selections=(
            Selection(question_index=0, distractor_indices=(0, 1, 2)),
            Selection(question_index=4, distractor_indices=(1, 3, 4)),
            Selection(question_index=9, distractor_indices=(0, 2, 4)),
        ),
        edits=(),
    )


# --- validate_curation -----------------------------------------------------------


def test_valid_curation_accepted():
    assert validate_curation(make_batch(), valid_result()) == []


def test_wrong_question_pick_count():
    result = CurationResult(
        batch_id="b1",
        selections=tuple(
            Selection(question_index=i, distractor_indices=(0, 1, 2)) for i in range(4)
        ),
    )
    assert "PICK_COUNT" in validate_curation(make_batch(), result)


def test_wrong_distractor_pick_count():
    result = CurationResult(
        batch_id="b1",
        selections=(
            Selection(question_index=0, distractor_indices=(0, 1)),
            Selection(question_index=1, distractor_indices=(0, 1, 2)),
            Selection(question_index=2, distractor_indices=(0, 1, 2)),
        ),
    )
    assert "PICK_COUNT" in validate_curation(make_batch(), result)


def test_unknown_edit_category_rejected():
    result = CurationResult(
        batch_id="b1",
        selections=valid_result().selections,
        edits=(
            Edit(
                target=EditTarget(0, "question"),
                before="Which city hosted event 0?",
                after="Rewritten entirely",
                category="REWRITE",
            ),
        ),
    )
    assert "EDIT_CATEGORY" in validate_curation(make_batch(), result)


def test_edit_on_unselected_question_rejected():
    result = CurationResult(
        batch_id="b1",
        selections=valid_result().selections,
        edits=(
            Edit(
                target=EditTarget(5, "question"),
                before="Which city hosted event 5?",
                after="Which city hosted event 5 in May?",
                category="CLARIFY_SOURCE_DATE",
            ),
        ),
    )
    assert "EDIT_TARGET" in validate_curation(make_batch(), result)


def test_edit_on_unselected_distractor_rejected():
    result = CurationResult(
        batch_id="b1",
        selections=valid_result().selections,
        edits=(
            Edit(
                target=EditTarget(0, "distractor", 4),  # selection picked 0,1,2
                before="cand-0-4",
                after="cand 0 4",
                category="DISTRACTOR_FORMATTING",
            ),
        ),
    )
    assert "EDIT_TARGET" in validate_curation(make_batch(), result)


def test_edit_before_must_match_current_text():
    result = CurationResult(
        batch_id="b1",
        selections=valid_result().selections,
        edits=(
            Edit(
                target=EditTarget(0, "key"),
                before="stale text",
                after="key zero",
                category="GRAMMAR_SPELLING",
            ),
        ),
    )
    assert "EDIT_BEFORE_MISMATCH" in validate_curation(make_batch(), result)


def test_empty_edit_rejected():
    result = CurationResult(
        batch_id="b1",
        selections=valid_result().selections,
        edits=(
            Edit(
                target=EditTarget(0, "question"),
                before="Which city hosted event 0?",
                after="   ",
                category="GRAMMAR_SPELLING",
            ),
        ),
    )
    assert "EMPTY_EDIT" in validate_curation(make_batch(), result)


def test_duplicate_question_pick_rejected():
    result = CurationResult(
        batch_id="b1",
        selections=(
            Selection(question_index=0, distractor_indices=(0, 1, 2)),
            Selection(question_index=0, distractor_indices=(0, 1, 2)),
            Selection(question_index=1, distractor_indices=(0, 1, 2)),
        ),
    )
    assert "DUPLICATE_PICK" in validate_curation(make_batch(), result)


def test_batch_requires_exact_counts():
    with pytest.raises(ValueError):
        CurationBatch(batch_id="b", seed=0, candidates=tuple(make_mcq(i) for i in range(9)))
    with pytest.raises(ValueError):
        CurationBatch(
            batch_id="b",
            seed=0,
            candidates=tuple(make_mcq(i) for i in range(9))
            + (
                McQuestion(
                    question="Q?",
                    key="k",
                    distractors=("a", "b", "c", "d"),  # 4, not 5
                ),
            ),
        )


# --- export -----------------------------------------------------------------------


def test_export_structure_and_key_position():
    batch = make_batch()
    result = valid_result()
    quiz = export_quiz(batch, result)
    assert quiz["batch_id"] == "b1"
    assert len(quiz["questions"]) == 3
    for selection, entry in zip(result.selections, quiz["questions"]):
        mcq = batch.candidates[selection.question_index]
        assert len(entry["options"]) == 4
        assert entry["options"].count(mcq.key) == 1
        assert entry["options"][entry["key_index"]] == mcq.key
        assert set(entry) == {"question", "options", "key_index"}


def test_export_deterministic_given_seed():
    batch = make_batch(seed=99)
    result = valid_result()
    assert export_quiz(batch, result) == export_quiz(batch, result)
    other_seed = make_batch(seed=100)
    assert export_quiz(batch, result) != export_quiz(other_seed, result)


def test_export_applies_edits():
    batch = make_batch()
    result = CurationResult(
        batch_id="b1",
        selections=valid_result().selections,
        edits=(
            Edit(
                target=EditTarget(0, "question"),
                before="Which city hosted event 0?",
                after="Which city hosted event 0 in 2020?",
                category="CLARIFY_SOURCE_DATE",
            ),
            Edit(
                target=EditTarget(0, "distractor", 1),
                before="cand-0-1",
                after="cand 0 1 (formatted)",
                category="DISTRACTOR_FORMATTING",
            ),
        ),
    )
    assert validate_curation(batch, result) == []
    quiz = export_quiz(batch, result)
    assert quiz["questions"][0]["question"] == "Which city hosted event 0 in 2020?"
    assert "cand 0 1 (formatted)" in quiz["questions"][0]["options"]
    assert "cand-0-1" not in quiz["questions"][0]["options"]


# --- store ------------------------------------------------------------------------


def test_store_submit_and_replay(tmp_path):
    store = BatchStore(tmp_path)
    store.save(make_batch())
    store.submit_curation("b1", valid_result())
    batch, stored = store.load("b1")
    assert batch.status == "curated"
    assert stored == valid_result()
    # Persisted results replay cleanly through validation.
    assert validate_curation(batch, stored) == []


def test_store_rejects_double_curation(tmp_path):
    store = BatchStore(tmp_path)
    store.save(make_batch())
    store.submit_curation("b1", valid_result())
    with pytest.raises(AlreadyCuratedError):
        store.submit_curation("b1", valid_result())


def test_store_rejects_invalid_curation(tmp_path):
    store = BatchStore(tmp_path)
    store.save(make_batch())
    bad = CurationResult(batch_id="b1", selections=())
    with pytest.raises(CurationRejectedError) as excinfo:
        store.submit_curation("b1", bad)
    assert "PICK_COUNT" in excinfo.value.violations


def test_store_export_requires_curation(tmp_path):
    store = BatchStore(tmp_path)
    store.save(make_batch())
    with pytest.raises(NotCuratedError):
        store.export("b1")


def test_result_round_trip():
    result = CurationResult(
        batch_id="b1",
        selections=valid_result().selections,
        edits=(
            Edit(
                target=EditTarget(0, "distractor", 2),
                before="cand-0-2",
                after="cand 0 2",
                category="DISTRACTOR_FORMATTING",
            ),
        ),
    )
    assert result_from_dict(result_to_dict(result)) == result


# --- HTTP API ----------------------------------------------------------------------


@pytest.fixture()
def client(tmp_path):
    store = BatchStore(tmp_path)
    store.save(make_batch())
    app = create_app(tmp_path)
    return TestClient(app)


def test_api_list_batches(client):
    response = client.get("/api/batches")
    assert response.status_code == 200
    assert response.json() == [{"batch_id": "b1", "status": "open"}]


def test_api_get_batch(client):
    response = client.get("/api/batches/b1")
    assert response.status_code == 200
    body = response.json()
    assert body["batch_id"] == "b1"
    assert len(body["candidates"]) == 10
    assert all(len(q["distractors"]) == 5 for q in body["candidates"])


def test_api_unknown_batch_404(client):
    assert client.get("/api/batches/nope").status_code == 404
    assert client.get("/api/batches/nope/export").status_code == 404
    assert (
        client.post("/api/batches/nope/curation", json=result_to_dict(valid_result("nope"))).status_code
        == 404
    )


def test_api_curation_flow(client):
    submit = client.post("/api/batches/b1/curation", json=result_to_dict(valid_result()))
    assert submit.status_code == 200
    assert submit.json() == {"batch_id": "b1", "status": "curated"}

    # Second attempt conflicts.
    again = client.post("/api/batches/b1/curation", json=result_to_dict(valid_result()))
    assert again.status_code == 409

    export = client.get("/api/batches/b1/export")
    assert export.status_code == 200
    quiz = export.json()
    assert len(quiz["questions"]) == 3
    for entry in quiz["questions"]:
        assert len(entry["options"]) == 4
        assert 0 <= entry["key_index"] < 4


def test_api_validation_failure_422(client):
    bad = result_to_dict(valid_result())
    bad["selections"] = bad["selections"][:2]
    response = client.post("/api/batches/b1/curation", json=bad)
    assert response.status_code == 422
    assert "PICK_COUNT" in response.json()["violations"]


def test_api_bad_category_422(client):
    body = result_to_dict(valid_result())
    body["edits"] = [
        {
            "target": {"question_index": 0, "part": "question", "distractor_index": None},
            "before": "Which city hosted event 0?",
            "after": "Which city hosted event zero?",
            "category": "REWRITE",
        }
    ]
    response = client.post("/api/batches/b1/curation", json=body)
    assert response.status_code == 422
    assert "EDIT_CATEGORY" in response.json()["violations"]


def test_api_export_before_curation_409(client):
    assert client.get("/api/batches/b1/export").status_code == 409


def test_api_export_deterministic(client):
    client.post("/api/batches/b1/curation", json=result_to_dict(valid_result()))
    first = client.get("/api/batches/b1/export").json()
    second = client.get("/api/batches/b1/export").json()
    assert first == second
