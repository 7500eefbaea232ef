import os
import tempfile

# Settings live under the user data dir: point it at a scratch directory
# before locfit is imported.
_SCRATCH = tempfile.mkdtemp(prefix="locfit-tests-")
os.environ["XDG_DATA_HOME"] = _SCRATCH
os.environ["LOCALAPPDATA"] = _SCRATCH

import pytest  # noqa: E402
from hypothesis import HealthCheck, settings  # noqa: E402

from locfit.models import catalog  # noqa: E402
from locfit.models.settings import locfitSettings  # noqa: E402

settings.register_profile(
    "locfit", max_examples=25, deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("locfit")

# Small frames every model test runs on.
SMALL_FRAMES = ("two", "three", "b4")


@pytest.fixture(autouse=True)
def _cleanSettings():
    yield
    locfitSettings.clearOverrides()


@pytest.fixture
def two():
    return catalog.twoFrame()


@pytest.fixture
def three():
    return catalog.threeChain()


@pytest.fixture
def b4():
    return catalog.booleanDiamond()


@pytest.fixture
def m3():
    return catalog.diamondM3()


@pytest.fixture
def n5():
    return catalog.pentagonN5()


@pytest.fixture(params=SMALL_FRAMES)
def smallFrame(request):
    return catalog.NAMED_FRAMES[request.param]()


@pytest.fixture(scope="session")
def defaultCatalog():
    return catalog.defaultCatalog()
