import pytest
from hypothesis import given, strategies as st

from locfit.models import catalog, theorems
from locfit.models.lattice import LocfitError
from locfit.models.settings import locfitSettings
from locfit.models.theorems import (
    ISOMORPHISM_CHECKERS, SUITE_GROUPS, THEOREMS, Mutation, OrderMap,
    SkippedFrame, TheoremVerdict, checkFrame, selectTheorems, shrinkWitness,
)
from locfit.models.verifier import runSuite

SMALL_CATALOG = [L for L in catalog.defaultCatalog() if L.n <= 8]


def _failures(verdicts):
    return {v.theoremId: v.witness for v in verdicts if not v.passed}


def test_whole_suite_passes_on_small_frames(smallFrame):
    verdicts = checkFrame(smallFrame)
    assert [v.theoremId for v in verdicts] == list(THEOREMS)
    assert _failures(verdicts) == {}


@given(st.sampled_from(SMALL_CATALOG))
def test_whole_suite_passes_on_catalog(L):
    assert _failures(checkFrame(L)) == {}


def test_whole_suite_passes_on_default_catalog(defaultCatalog):
    *records, summary = runSuite(defaultCatalog, workers=1)
    failed = [(r["frame"], r["theorem"]) for r in records if r.get("passed") is False]
    assert failed == []
    assert summary.passed and summary.frames == len(defaultCatalog)


def test_inseparable_class_passes_generalchar(three):
    # cl on the three-chain is inseparable: all four items fail together
    verdicts = checkFrame(three, theoremIds=["prop-fe-generalchar"])
    assert verdicts[0].passed and verdicts[0].witness is None


def test_enumeration_error_fails_every_theorem(monkeypatch, b4):
    def refuse(frame):
        raise LocfitError("cannot enumerate")

    monkeypatch.setattr(theorems, "enumerateSublocales", refuse)
    verdicts = checkFrame(b4, "b4", ["lem-heyting", "thm-se-iso"])
    assert [v.theoremId for v in verdicts] == ["lem-heyting", "thm-se-iso"]
    assert all(not v.passed and v.witness == {"error": "cannot enumerate"} for v in verdicts)


@pytest.mark.parametrize("mutation", list(Mutation))
@pytest.mark.parametrize("name", ["three", "b4"])
def test_mutations_break_every_isomorphism(name, mutation):
    L = catalog.NAMED_FRAMES[name]()
    verdicts = checkFrame(L, theoremIds=sorted(ISOMORPHISM_CHECKERS), mutation=mutation)
    assert len(verdicts) == len(ISOMORPHISM_CHECKERS)
    assert all(not v.passed and v.witness for v in verdicts)


def test_mutation_leaves_other_checkers_alone(b4):
    others = [t for t in THEOREMS if t not in ISOMORPHISM_CHECKERS]
    verdicts = checkFrame(b4, theoremIds=others, mutation=Mutation.FLIP_RELATION)
    assert _failures(verdicts) == {}


def test_non_frame_is_skipped(m3):
    result = checkFrame(m3, "m3")
    assert len(result) == 1
    skipped = result[0]
    assert isinstance(skipped, SkippedFrame)
    record = skipped.toJson()
    assert record["skipped"] is True
    assert record["reason"] == "not a frame"
    assert record["witness"]["is_distributive_frame"] is False
    assert record["witness"]["witness"]["b"] in m3.labels


def test_frame_over_the_cap_is_skipped(b4):
    locfitSettings.override("sublocaleCap", 2)
    result = checkFrame(b4)
    assert len(result) == 1
    assert isinstance(result[0], SkippedFrame)
    assert "cap" in result[0].reason


def test_selectTheorems():
    assert selectTheorems(None) == list(THEOREMS)
    assert selectTheorems(["all"]) == list(THEOREMS)
    assert selectTheorems(["thm-restrictions"]) == list(SUITE_GROUPS["thm-restrictions"])
    assert selectTheorems(["lem-scl", "lem-heyting"]) == ["lem-heyting", "lem-scl"]
    with pytest.raises(ValueError):
        selectTheorems(["thm-unknown"])


def test_every_group_member_is_registered():
    for members in SUITE_GROUPS.values():
        assert all(m in THEOREMS for m in members)
    assert ISOMORPHISM_CHECKERS <= set(THEOREMS)


def test_orderMap(b4):
    identity = list(range(b4.n))
    orderMap = OrderMap.restrict(b4, identity, b4, identity, lambda i: i)
    assert orderMap.witness() is None
    assert orderMap.mutate(None) is orderMap
    assert orderMap.mutate(Mutation.DELETE_ELEMENT).witness()["defect"] == "undefined"
    assert orderMap.mutate(Mutation.REMAP_ELEMENT).witness()["defect"] == "not-injective"
    assert orderMap.mutate(Mutation.FLIP_RELATION).witness()["defect"] == "order"


def test_orderMap_outside_target(three):
    orderMap = OrderMap.restrict(three, [0, 1], three, [0, 2], lambda i: i)
    assert orderMap.witness() == {"defect": "undefined", "element": "m"}


def test_shrinkWitness():
    assert shrinkWitness([1, 2, 3, 4], lambda items: 3 in items) == [3]
    assert shrinkWitness([5], lambda items: False) == [5]


def test_verdict_json():
    assert TheoremVerdict("lem-heyting", "b4", True).toJson() == {
        "frame": "b4", "theorem": "lem-heyting", "passed": True,
    }
    failed = TheoremVerdict("lem-heyting", "b4", False, {"a": "0"}).toJson()
    assert failed["witness"] == {"a": "0"}
