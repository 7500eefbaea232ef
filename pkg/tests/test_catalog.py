import pytest

from locfit.models import catalog
from locfit.models.catalog import CatalogKind, CatalogPart
from locfit.models.lattice import BoundTooLargeError
from locfit.models.settings import locfitSettings


def test_chain_and_powerset_sizes():
    assert catalog.chain(3).n == 4
    assert catalog.chain(3).name == "chain-3"
    assert catalog.powerset(3).n == 8
    assert catalog.powerset(2).isIsomorphic(catalog.booleanDiamond())


def test_topologies_on_two_points():
    frames = list(catalog.topologies(2))
    assert len(frames) == 4
    assert [L.name for L in frames] == [f"topologies-2-0{i}" for i in range(1, 5)]
    assert sorted(L.n for L in frames) == [2, 3, 3, 4]


def test_topology_count_on_three_points():
    assert len(list(catalog.topologies(3))) == 29


def test_deduplicated_catalog():
    frames = list(catalog.catalog(CatalogKind.TOPOLOGIES, 2))
    assert len(frames) == 3
    assert [L.n for L in frames] == [2, 3, 4]
    assert len(list(catalog.catalog(CatalogKind.TOPOLOGIES, 2, unique=False))) == 5


@pytest.mark.parametrize("k, count", [(1, 1), (2, 2), (3, 5), (4, 16)])
def test_poset_counts(k, count):
    assert len(catalog.posets(k)) == count


def test_downsets_of_antichain_is_boolean():
    antichain = (0b01, 0b10)
    assert catalog.downsetLattice(antichain).isIsomorphic(catalog.booleanDiamond())


def test_topology_defect():
    assert catalog.topologyDefect(2, [0, 1, 3]) is None
    assert catalog.topologyDefect(2, [1, 3]) == "missing empty set"
    assert catalog.topologyDefect(2, [0, 1, 2, 3]) is None
    assert catalog.topologyDefect(3, [0, 1, 2, 7]) == "not closed under union"


def test_parseCatalogSpec():
    assert catalog.parseCatalogSpec("chain:2, powersets:1") == [
        CatalogPart(CatalogKind.CHAIN, 2), CatalogPart(CatalogKind.POWERSET, 1),
    ]
    assert len(catalog.parseCatalogSpec("default")) == 4


@pytest.mark.parametrize("spec", ["chain", "chain:x", "chain:0", "lattices:3"])
def test_parseCatalogSpec_rejects(spec):
    with pytest.raises(ValueError):
        catalog.parseCatalogSpec(spec)


def test_catalog_cap():
    with pytest.raises(BoundTooLargeError):
        list(catalog.catalog(CatalogKind.TOPOLOGIES, 5))
    locfitSettings.override("catalogCap", 3)
    with pytest.raises(BoundTooLargeError):
        list(catalog.catalog(CatalogKind.TOPOLOGIES, 2))


def test_default_catalog(defaultCatalog):
    names = [L.name for L in defaultCatalog]
    assert len(names) == len(set(names))
    assert all(L.n > 1 for L in defaultCatalog)
    assert names[:3] == ["topologies-1-01", "topologies-2-02", "topologies-2-04"]
    assert all(L.frameReport.isDistributiveFrame for L in defaultCatalog)
    assert all(L.n <= locfitSettings.sublocaleCap for L in defaultCatalog)
    for i, L in enumerate(defaultCatalog):
        assert not any(L.isIsomorphic(M) for M in defaultCatalog[:i])
