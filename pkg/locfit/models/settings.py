"""The LocfitSettings model.

The LocfitSettings model defines the locfit application settings and makes
them accessible throughout the application by exposing a locfitSettings
instance. The enumeration caps bound every exponential scan of the models.
"""
import os
from typing import TYPE_CHECKING, Any, Dict

from locfit.util import settings
from locfit.util.settings import Setting

if TYPE_CHECKING:
    from locfit.util.settings import AppDirs

__all__ = ["LocfitSettings", "locfitSettings"]


class LocfitSettings(settings.Settings):
    """The LocfitSettings model definition.

    Class attributes:
        logLevel: The global locfit log level.
        frameLawThreshold: above this element count, isFrame checks binary
            distributivity instead of the full frame law.
        sublocaleCap: largest frame whose sublocales are enumerated.
        sublocaleOracleCap: largest frame whose sublocale enumeration is
            cross-checked against the raw 2^n subset filter.
        filterCap: largest frame analysed by the filter models.
        gcBruteForceCap: largest carrier cross-checked against brute-force
            fixpoint filtering, also the uniqueness-check bound of the GC
            isomorphism.
        gcCarrierCap: largest carrier accepted by galoisClosed.
        subsetScanCap: number of subsets scanned exhaustively before the
            deterministic sampling of iterSubsetsCapped takes over.
        catalogCap: largest number of candidate structures a catalog request
            may enumerate.
        workers: number of verify worker processes.

    Attributes:
        appDirs: An AppDirs NamedTuple containing the user app
            directories paths.
    """
    appDirs: "AppDirs"

    _DEFAULT_LOGLEVEL = "INFO"

    logLevel: Setting = settings.Setting(defaultValue=_DEFAULT_LOGLEVEL)
    frameLawThreshold: Setting = settings.Setting(defaultValue=12)
    sublocaleCap: Setting = settings.Setting(defaultValue=16)
    sublocaleOracleCap: Setting = settings.Setting(defaultValue=10)
    filterCap: Setting = settings.Setting(defaultValue=16)
    gcBruteForceCap: Setting = settings.Setting(defaultValue=12)
    gcCarrierCap: Setting = settings.Setting(defaultValue=24)
    subsetScanCap: Setting = settings.Setting(defaultValue=4096)
    catalogCap: Setting = settings.Setting(defaultValue=400)
    workers: Setting = settings.Setting(defaultValue=1)

    def __init__(self, appName: str) -> None:
        # Retrieve or create the user directories for the application.
        appDirs = settings.getAppDirs(appName)

        super().__init__(appDirs.user_data_dir / "settings")

        self.appDirs = appDirs

    def __repr__(self) -> str:
        return f"LocfitSettings({self.asDict()})"

    @classmethod
    def settingNames(cls):
        return [
            name for name, attr in vars(cls).items() if isinstance(attr, Setting)
        ]

    def asDict(self) -> Dict[str, Any]:
        return {name: getattr(self, name) for name in self.settingNames()}

    def resetToDefaults(self) -> None:
        """Reset all settings to their default value."""
        for setting in self.settingNames():
            defaultValue = getattr(LocfitSettings, setting).defaultValue
            setattr(self, setting, defaultValue)
        self.clearOverrides()


if os.environ.get("LOCFIT_DEV", 0):
    locfitSettings = LocfitSettings("locfit_dev")
else:
    locfitSettings = LocfitSettings("locfit")
