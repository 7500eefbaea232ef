from typing import TYPE_CHECKING, Tuple

if TYPE_CHECKING:
    from enum import Enum
    import multiprocessing as mp

__all__ = ["Task"]


class Task:
    """A command and its parameters, posted to a worker job queue."""

    def __init__(self, command: "Enum", *args) -> None:
        self._command = command
        self._params: Tuple = args

    @property
    def command(self) -> "Enum":
        return self._command

    @property
    def params(self) -> Tuple:
        return self._params

    def execute(self, receiver: "mp.Queue") -> None:
        receiver.put((self._command, self._params))
