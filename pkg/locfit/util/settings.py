r"""Basic tools to handle application settings.

It provides:
    A Settings base class to manage persistent application settings as basic
        key/value pairs.
    A SettingsError exception to handle settings persistency errors.
    A Setting data descriptor to access the basic key/value pairs as class
        attributes (appSettings.keys['mySetting'] = value is replaced by
        appSettings.mySetting = value)
    A getAppDirs convenient function to retrieve the user application
        directories: '%LOCALAPPDATA%\<appName>' on Windows and
        '$XDG_DATA_HOME/<appName>' elsewhere.
"""
import os
import sys
import json
from pathlib import Path
from typing import Dict, List, NamedTuple, Any, Optional, Type, overload

from locfit.util.basicpatterns import Singleton

__all__ = ["Settings", "SettingsError", "Setting", "AppDirs", "getAppDirs"]


class PathEncoder(json.JSONEncoder):
    """A JSONEncoder that writes pathlib.Path objects as posix strings."""

    def default(self, obj: Any) -> str:
        if isinstance(obj, Path):
            return obj.as_posix() if obj.name else ""
        # Let the base class default method raise the TypeError
        return json.JSONEncoder.default(self, obj)


class SettingsError(Exception):
    """Exception raised on settings saving error."""

    pass


class Settings(object, metaclass=Singleton):
    """A base class to handle persistent application settings.

    Settings is a singleton: only one instance of settings may exist for an
    application. Key/value pairs are read from / saved to the JSON file passed
    when creating the instance. Runtime overrides (see override) are kept
    apart from the persisted keys and are never saved.

    Examples:
        appSettings = Settings(Path('path/to/mySettingsFile.json'))
        appSettings.setValue('sublocaleCap', 16)
        appSettings.value('sublocaleCap', defaultValue=12)   # returns 16
        appSettings.override('sublocaleCap', 8)
        appSettings.value('sublocaleCap')   # returns 8, saved value stays 16

    Attributes:
        _settingsFile: the path to the persistent settings file.
        _keys: the settings key/value pairs container.
        _overrides: the run-scoped values shadowing _keys.
    """

    _keys: Dict[str, Any]
    _overrides: Dict[str, Any]
    _settingsFile: Path

    def __init__(self, settingsFile: Path) -> None:
        self._settingsFile = settingsFile.with_suffix(".json")

        self._keys = self._load()
        self._overrides = dict()

    def _load(self) -> Dict[str, Any]:
        """Initialize the settings from its persistent JSON file.

        Returns:
            The key/value pairs read from the JSON file or an empty dict on
            loading errors.
        """
        try:
            with self._settingsFile.open() as fh:
                keys = json.load(fh)
            return keys if isinstance(keys, dict) else dict()
        except (FileNotFoundError, json.JSONDecodeError):
            return dict()

    @property
    def settingsFile(self) -> Path:
        return self._settingsFile

    def save(self) -> None:
        """Save the settings key/value pairs on a JSON file.

        Raises:
            A SettingsError exception on OS or JSON encoding errors.
        """
        try:
            with self._settingsFile.open(mode="w") as fh:
                json.dump(self._keys, fh, indent=4, sort_keys=True, cls=PathEncoder)
        except (OSError, TypeError) as e:
            raise SettingsError(e)

    def value(self, key: str, defaultValue: Any = None) -> Any:
        """Returns the value for setting key.

        A run-scoped override wins over the persisted value. If the setting
        doesn't exist, returns defaultValue.

        Args:
            key: The setting key to look for.
            defaultValue: The default value to be returned if key does not exist.

        Returns:
            The key value.
        """
        if key in self._overrides:
            return self._overrides[key]
        return self._keys.get(key, defaultValue)

    def setValue(self, key: str, value: Any) -> None:
        self._keys[key] = value

    def override(self, key: str, value: Any) -> None:
        """Shadow key with value for the current run only."""
        self._overrides[key] = value

    @property
    def overrides(self) -> Dict[str, Any]:
        return dict(self._overrides)

    def clearOverrides(self) -> None:
        self._overrides = dict()

    def contains(self, key: str) -> bool:
        return key in self._keys

    def remove(self, key: str) -> None:
        if key in self._keys:
            del self._keys[key]

    def allKeys(self) -> List[str]:
        return list(self._keys)

    def clear(self) -> None:
        """Removes all entries associated to this Settings object."""
        self._keys = dict()
        self._overrides = dict()


class Setting(object):
    """A data descriptor to simplify a key/value access in a Settings instance.

    The name of a Setting descriptor corresponds to a key in the Settings
    instance container / persistent file.

    Examples:
        class AppSettings(Settings):
            gcCarrierCap = Setting(defaultValue=24)

        appSettings = AppSettings(Path('path/to/mySettingsFile.json'))
        appSettings.gcCarrierCap   # returns 24
        appSettings.gcCarrierCap = 32

    Attributes:
        defaultValue: an optional default value for the setting.
        _key: the settings key in the key/value pairs container.
    """

    _key: str
    defaultValue: Optional[Any]

    def __init__(self, defaultValue: Any = None) -> None:
        self.defaultValue = defaultValue

    def __set_name__(self, owner: Type[Settings], name: str) -> None:
        self._key = name

    @property
    def key(self) -> str:
        return self._key

    @overload
    def __get__(self, instance: None, owner: None) -> Any:
        ...

    @overload
    def __get__(self, instance: Settings, owner: Type[Settings]) -> Any:
        ...

    def __get__(
        self, instance: Optional[Settings], owner: Optional[Type[Settings]]
    ) -> Any:
        if instance is None:
            return self
        return instance.value(self._key, self.defaultValue)

    def __set__(self, instance: Settings, value: Any) -> None:
        instance.setValue(self._key, value)


class AppDirs(NamedTuple):
    """Paths of the default user directories for the application."""

    user_data_dir: Path
    user_config_dir: Path
    user_cache_dir: Path
    user_log_dir: Path


def getAppDirs(appName: str) -> AppDirs:
    r"""Returns the default user directories for the application.

    Windows: %LOCALAPPDATA%\<appName>
    Others: $XDG_DATA_HOME/<appName>, ~/.local/share/<appName> if unset.

    Fallback to the user home directory if the environment variable is not
    found. The directories are created if required.

    Args:
        appName: the application name.

    Returns:
        An AppDirs NamedTuple containing the user app directories paths.
    """
    if sys.platform.startswith("win"):
        folder = os.environ.get("LOCALAPPDATA")
    else:
        folder = os.environ.get("XDG_DATA_HOME")
        if folder is None:
            folder = Path.home() / ".local" / "share"

    if folder is None:
        folder = Path.home()
    folder = Path(folder)

    user_data_dir = folder / appName
    user_data_dir.mkdir(parents=True, exist_ok=True)

    user_config_dir = user_data_dir / "Config"
    user_config_dir.mkdir(parents=True, exist_ok=True)

    user_cache_dir = user_data_dir / "Cache"
    user_cache_dir.mkdir(parents=True, exist_ok=True)

    user_log_dir = user_data_dir / "Logs"
    user_log_dir.mkdir(parents=True, exist_ok=True)

    return AppDirs(user_data_dir, user_config_dir, user_cache_dir, user_log_dir)
