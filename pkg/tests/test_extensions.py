import pytest

from locfit.models import catalog
from locfit.models.filters import allFilters
from locfit.models.extensions import (
    EXTENSION_CLASSES, basicProperties, buildExtension, cpUpsetLemma,
    dlatCanonicalExtension, extensionClass, generalChar, meetPreservationScan,
    specialCases,
)


@pytest.mark.parametrize("name, size", [("b4", 4), ("three", 2), ("two", 2)])
def test_closed_filter_extension(name, size):
    FL = allFilters(catalog.NAMED_FRAMES[name]())
    ext = buildExtension(FL, "cl")
    assert len(ext.family) == size
    assert ext.toJson()["size"] == size
    assert ext.universal.passed


def test_principal_extension_is_the_frame(three):
    FL = allFilters(three)
    ext = buildExtension(FL, "principal")
    assert ext.lattice.isIsomorphic(three)
    assert len(set(ext.eMap)) == three.n
    report = generalChar(ext)
    assert report.passed and all(report.items.values())


def test_cp_kappa_keeps_joins_only_when_they_are_intersections(defaultCatalog):
    L = next(F for F in defaultCatalog if F.name == "topologies-3-07")
    FL = allFilters(L)
    ext = buildExtension(FL, "cp")
    members = {FL.members(f) for f in ext.classFilters}
    # some pair of completely prime filters meets outside the class
    assert any(FL.members(f) & FL.members(g) not in members
               for f in ext.classFilters for g in ext.classFilters)
    report = basicProperties(ext)
    assert report.passed and report.items["kappa-bounds"]


def test_inseparable_class(three):
    ext = buildExtension(allFilters(three), "cl")
    report = generalChar(ext)
    assert report.passed
    assert not any(report.items.values())
    assert report.witness == {"inseparable": {"a": "m", "b": "0"}}
    basic = basicProperties(ext)
    assert basic.passed and not basic.items["eps-injective"]


@pytest.mark.parametrize("className", EXTENSION_CLASSES)
def test_extension_checks_per_class(smallFrame, className):
    ext = buildExtension(allFilters(smallFrame), className)
    assert basicProperties(ext).passed
    assert meetPreservationScan(ext).passed
    assert specialCases(ext).passed


def test_unknown_class(b4):
    with pytest.raises(ValueError):
        extensionClass(allFilters(b4), "bogus")


def test_cp_upset_lemma(three):
    report = cpUpsetLemma(allFilters(three))
    assert report.passed
    assert report.points == ("0", "m")
    assert report.upsets == 3
    assert report.intSize == 3


@pytest.mark.parametrize("name", ["two", "three", "b4"])
def test_dlat_canonical_extension_collapses(name):
    D = catalog.NAMED_FRAMES[name]()
    report = dlatCanonicalExtension(D)
    assert report.passed
    assert report.lattice.isIsomorphic(D)
