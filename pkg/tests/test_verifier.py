import multiprocessing as mp

import pytest

from locfit.models import catalog, theorems
from locfit.models.settings import locfitSettings
from locfit.models.theorems import THEOREMS, Mutation
from locfit.models.verifier import SuiteSummary, runSuite


def _catalog(spec="topologies:2"):
    return list(catalog.iterCatalog(catalog.parseCatalogSpec(spec)))


def _run(frames, **kwargs):
    items = list(runSuite(frames, **kwargs))
    summary = items.pop()
    assert isinstance(summary, SuiteSummary)
    return items, summary


def test_inline_run():
    frames = _catalog()
    records, summary = _run(frames, workers=1)
    assert len(records) == len(frames) * len(THEOREMS)
    assert [r["frame"] for r in records[::len(THEOREMS)]] == [L.name for L in frames]
    assert summary.frames == len(frames)
    assert summary.failures == 0 and summary.passed
    assert all(c == {"passed": len(frames), "failed": 0} for c in summary.counts.values())


def test_pooled_run_matches_inline_run():
    frames = _catalog()
    inline, _ = _run(frames, workers=1, theoremIds=["thm-restrictions"])
    pooled, summary = _run(frames, workers=2, theoremIds=["thm-restrictions"])
    assert pooled == inline
    assert summary.frames == len(frames)


def test_overrides_reach_the_workers(b4):
    locfitSettings.override("sublocaleCap", 2)
    records, summary = _run([b4, b4], workers=2, theoremIds=["lem-heyting"])
    assert all(r.get("skipped") for r in records)
    assert summary.skipped == 2


def test_skipped_and_failed_frames(m3, b4):
    records, summary = _run([m3, b4], workers=1, theoremIds=["thm-se-iso"],
                            mutation=Mutation.DELETE_ELEMENT)
    assert records[0]["skipped"] is True
    assert records[1]["passed"] is False
    assert summary.skipped == 1
    assert summary.failures == 1
    assert not summary.passed
    assert summary.toJson()["summary"]["theorems"] == {"thm-se-iso": {"passed": 0, "failed": 1}}


def test_unknown_theorem():
    with pytest.raises(ValueError):
        next(runSuite([], theoremIds=["nope"]))


def test_summary_table():
    summary = SuiteSummary(["lem-heyting"])
    summary.record([{"frame": "b4", "theorem": "lem-heyting", "passed": True}])
    table = summary.table()
    assert table.splitlines()[0].split() == ["theorem", "passed", "failed"]
    assert table.splitlines()[-1] == "1 frames, 0 skipped, 0 failures"


def _explode(frame):
    raise RuntimeError("boom")


def test_checker_error_fails_the_frame_inline(monkeypatch, b4):
    monkeypatch.setattr(theorems, "allFilters", _explode)
    records, summary = _run([b4], workers=1, theoremIds=["lem-heyting", "thm-se-iso"])
    assert [r["theorem"] for r in records] == ["lem-heyting", "thm-se-iso"]
    assert all(not r["passed"] and r["witness"] == {"error": "RuntimeError: boom"} for r in records)
    assert summary.skipped == 0
    assert summary.failures == 2 and not summary.passed


@pytest.mark.skipif(mp.get_start_method() != "fork", reason="workers must inherit the patched module")
def test_checker_error_fails_the_frame_pooled(monkeypatch, two, b4):
    monkeypatch.setattr(theorems, "allFilters", _explode)
    frames = [two, b4]
    inline, _ = _run(frames, workers=1, theoremIds=["lem-heyting"])
    pooled, summary = _run(frames, workers=2, theoremIds=["lem-heyting"])
    assert pooled == inline
    assert summary.failures == 2 and not summary.passed
