import pytest

from locfit.models.settings import LocfitSettings, locfitSettings
from locfit.util.settings import getAppDirs


def test_defaults():
    defaults = {name: getattr(LocfitSettings, name).defaultValue for name in LocfitSettings.settingNames()}
    assert defaults["sublocaleCap"] == 16
    assert defaults["gcBruteForceCap"] == 12
    assert defaults["catalogCap"] == 400
    assert defaults["workers"] == 1


def test_override_is_not_saved(tmp_path):
    locfitSettings.override("sublocaleCap", 3)
    assert locfitSettings.sublocaleCap == 3
    assert "sublocaleCap" in locfitSettings.overrides
    locfitSettings.clearOverrides()
    assert locfitSettings.sublocaleCap == locfitSettings.value("sublocaleCap", 16)


def test_reset_and_save_roundtrip():
    locfitSettings.filterCap = 9
    locfitSettings.resetToDefaults()
    assert locfitSettings.filterCap == 16
    locfitSettings.save()
    assert locfitSettings.settingsFile.exists()


def test_settings_live_in_scratch_dir():
    dirs = getAppDirs("locfit")
    assert "locfit-tests-" in str(dirs.user_data_dir)
    assert dirs.user_log_dir.is_dir()


@pytest.mark.parametrize("name", LocfitSettings.settingNames())
def test_asDict_has_every_setting(name):
    assert name in locfitSettings.asDict()
