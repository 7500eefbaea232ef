"""Small design-pattern helpers shared by the locfit models."""
from typing import Any, Callable, Dict, Iterator

__all__ = ["Singleton", "ObjectFactory"]


class Singleton(type):
    """A Standard Singleton metaclass."""
    _instances: Dict[type, Any] = {}

    def __call__(cls, *args, **kwargs):
        if cls not in cls._instances:
            cls._instances[cls] = super(Singleton, cls).__call__(*args, **kwargs)
        return cls._instances[cls]

    def forget(cls) -> None:
        """Drop the cached instance so that the next call builds a fresh one."""
        Singleton._instances.pop(cls, None)


class ObjectFactory(object):
    """A general purpose object factory.

    Builders are kept in registration order, so iterating a factory yields its
    keys deterministically.
    """
    def __init__(self) -> None:
        self._builders: Dict[str, Callable] = {}

    def registerBuilder(self, key: str, builder: Callable) -> None:
        if key in self._builders:
            raise ValueError(f"Builder {key} already registered")
        self._builders[key] = builder

    def builder(self, key: str) -> Callable:
        try:
            return self._builders[key]
        except KeyError:
            raise ValueError(key) from None

    def create(self, key: str, *args, **kwargs) -> Any:
        return self.builder(key)(*args, **kwargs)

    def __contains__(self, key: str) -> bool:
        return key in self._builders

    def __iter__(self) -> Iterator[str]:
        return iter(self._builders)

    def __len__(self) -> int:
        return len(self._builders)
