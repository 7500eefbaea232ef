import logging
import multiprocessing as mp
from dataclasses import dataclass
from enum import Enum
from typing import TYPE_CHECKING, Tuple, Callable, Dict, Iterator, List, Optional, Union

from locfit.util.bgdtask import Task
from locfit.util.logutil import configureRootLogger

if TYPE_CHECKING:
    from locfit.util.basicpatterns import ObjectFactory

logger = logging.getLogger(__name__)

__all__ = ["Message", "BackgroundWorker", "WorkerPool"]


@dataclass
class Message:
    topic: str
    data: Tuple = tuple()


class BackgroundWorker(mp.Process):
    """A process consuming (command, params) jobs from a shared queue.

    Subclasses declare a nested Command enum with at least a STOP member and
    register one callable per command.
    """

    class Command(Enum):
        STOP = "stop"

    def __init__(
            self,
            jobs: mp.Queue,
            results: mp.Queue,
            name: str = None,
            logQueue: Optional[mp.Queue] = None,
            logLevel: Union[int, str] = logging.INFO,
    ) -> None:
        super().__init__(name=name)

        self.logQueue = logQueue
        self.logLevel = logLevel

        self._jobs = jobs
        self._results = results
        self._exitProcess = mp.Event()

        self._actions: Dict[Enum, Callable] = dict()
        self.registerAction(self.Command.STOP, self._stop)

    def registerAction(self, action: Enum, func: Callable) -> None:
        if action not in self._actions:
            self._actions[action] = func

    def run(self) -> None:
        if self.logQueue is not None:
            configureRootLogger(self.logQueue, self.logLevel)

        self._preRun()

        self._exitProcess.clear()

        logger.info(f"{self.name} started")
        while not self._exitProcess.is_set():
            action, args = self._jobs.get()
            try:
                func = self._actions[action]
            except KeyError:
                logger.warning(f"Unknown command {action} ignored")
                continue
            func(*args)

        self._postRun()
        logger.info(f"{self.name} stopped")

    def publishData(self, content: str, *data) -> None:
        msg = Message(content, data)
        try:
            self._results.put(msg)
            logger.debug(f"Data published: {msg.topic}")
        except (OSError, EOFError, BrokenPipeError):
            pass

    def _preRun(self, *args, **kwargs) -> None:
        pass

    def _postRun(self, *args, **kwargs) -> None:
        pass

    def _stop(self):
        logger.info(f"Stopping {self.name}...")
        self._exitProcess.set()


class WorkerPool:
    """A fixed set of BackgroundWorker processes sharing job and result queues.

    Workers are built by name through a worker factory. Results come back in
    completion order; callers needing a stable order reorder them.
    """

    def __init__(
            self,
            workerName: str,
            count: int,
            factory: "ObjectFactory",
            logQueue: Optional[mp.Queue] = None,
            logLevel: Union[int, str] = logging.INFO,
    ) -> None:
        if count < 1:
            raise ValueError(f"Worker count must be positive, got {count}")
        self.name = workerName
        self._jobs: mp.Queue = mp.Queue()
        self._results: mp.Queue = mp.Queue()
        self._workers: List[BackgroundWorker] = [
            factory.create(
                workerName,
                self._jobs,
                self._results,
                name=f"{workerName}-{i}",
                logQueue=logQueue,
                logLevel=logLevel,
            )
            for i in range(count)
        ]

    def __enter__(self) -> "WorkerPool":
        self.start()
        return self

    def __exit__(self, *exc) -> None:
        self.stop()

    def start(self) -> None:
        logger.info(f"Starting {len(self._workers)} {self.name} workers...")
        for worker in self._workers:
            worker.start()

    def submit(self, task: Task) -> None:
        task.execute(self._jobs)

    def results(self, expected: int) -> Iterator[Message]:
        for _ in range(expected):
            yield self._results.get()

    def stop(self) -> None:
        logger.info(f"Request {self.name} workers to stop...")
        for worker in self._workers:
            Task(worker.Command.STOP).execute(self._jobs)
        for worker in self._workers:
            worker.join(timeout=5)
            if worker.is_alive():
                worker.terminate()
