"""Run the theorem suite over a stream of frames.

With one worker the suite runs inline. Otherwise frames are posted to a
WorkerPool of SuiteWorker processes and the verdicts, published back in
completion order, are reordered by catalog position so the output stream is
the same whatever the worker count.
"""
import logging
from dataclasses import dataclass, field
from enum import Enum, auto
from typing import Any, Dict, Iterable, Iterator, List, Optional, Sequence, Union

from locfit.util.bgdtask import Task
from locfit.util.basicpatterns import ObjectFactory
from locfit.util.workerutil import BackgroundWorker, WorkerPool
from locfit.models.lattice import FiniteLattice
from locfit.models.theorems import Mutation, checkFrame, failedVerdicts, selectTheorems
from locfit.models.settings import locfitSettings

logger = logging.getLogger(__name__)

__all__ = ["SuiteSummary", "SuiteWorker", "workerFactory", "runSuite"]

Record = Dict[str, Any]


@dataclass
class SuiteSummary:
    """Per-theorem pass and fail counts over a suite run."""

    theoremIds: List[str]
    frames: int = 0
    skipped: int = 0
    counts: Dict[str, Dict[str, int]] = field(default_factory=dict)

    def __post_init__(self) -> None:
        for theoremId in self.theoremIds:
            self.counts.setdefault(theoremId, {"passed": 0, "failed": 0})

    def record(self, frameRecords: Sequence[Record]) -> None:
        self.frames += 1
        for rec in frameRecords:
            if rec.get("skipped"):
                self.skipped += 1
                continue
            key = "passed" if rec["passed"] else "failed"
            self.counts.setdefault(rec["theorem"], {"passed": 0, "failed": 0})[key] += 1

    @property
    def failures(self) -> int:
        return sum(c["failed"] for c in self.counts.values())

    @property
    def passed(self) -> bool:
        return self.failures == 0

    def toJson(self) -> Record:
        return {
            "summary": {
                "frames": self.frames,
                "skipped": self.skipped,
                "failures": self.failures,
                "theorems": self.counts,
            }
        }

    def table(self) -> str:
        width = max([len("theorem")] + [len(t) for t in self.counts])
        lines = [f"{'theorem':<{width}}  passed  failed"]
        for theoremId, c in self.counts.items():
            lines.append(f"{theoremId:<{width}}  {c['passed']:>6}  {c['failed']:>6}")
        lines.append(f"{self.frames} frames, {self.skipped} skipped, {self.failures} failures")
        return "\n".join(lines) + "\n"


def verifyFrame(
        frame: FiniteLattice,
        theoremIds: Optional[Sequence[str]] = None,
        mutation: Optional[Mutation] = None,
) -> List[Record]:
    """The verdict records of one frame.

    An unexpected error inside a checker fails every selected theorem on
    that frame, inline or in a SuiteWorker alike.
    """
    try:
        verdicts = checkFrame(frame, frame.name, theoremIds, mutation)
    except Exception as e:
        logger.error(f"Cannot verify {frame.name}: {e}", exc_info=True)
        verdicts = failedVerdicts(frame.name, theoremIds, {"error": f"{type(e).__name__}: {e}"})
    return [v.toJson() for v in verdicts]


class SuiteWorker(BackgroundWorker):
    """A process checking the theorem suite on the frames posted to it."""

    class Command(Enum):
        STOP = auto()    # Stop the SuiteWorker process
        VERIFY = auto()  # Check one frame

    def __init__(self, *args, **kwargs) -> None:
        super().__init__(*args, **kwargs)
        self.registerAction(self.Command.VERIFY, self._verify)

    def _verify(
            self,
            position: int,
            frame: FiniteLattice,
            theoremIds: Sequence[str],
            mutation: Optional[Mutation],
            overrides: Dict[str, Any],
    ) -> None:
        # Run-scoped settings do not survive the process boundary
        for key, value in overrides.items():
            locfitSettings.override(key, value)
        logger.debug(f"Verifying {frame.name} (#{position})")
        self.publishData("verdicts", position, verifyFrame(frame, theoremIds, mutation))


workerFactory = ObjectFactory()
workerFactory.registerBuilder("SuiteWorker", SuiteWorker)


def _runPooled(
        frames: List[FiniteLattice],
        workers: int,
        theoremIds: List[str],
        mutation: Optional[Mutation],
        logQueue,
        logLevel,
) -> Iterator[List[Record]]:
    pending: Dict[int, List[Record]] = dict()
    nextPosition = 0
    overrides = locfitSettings.overrides
    with WorkerPool("SuiteWorker", workers, workerFactory, logQueue, logLevel) as pool:
        for position, frame in enumerate(frames):
            pool.submit(Task(SuiteWorker.Command.VERIFY, position, frame, theoremIds, mutation, overrides))
        for msg in pool.results(len(frames)):
            position, records = msg.data
            pending[position] = records
            while nextPosition in pending:
                yield pending.pop(nextPosition)
                nextPosition += 1


def runSuite(
        frames: Iterable[FiniteLattice],
        workers: Optional[int] = None,
        theoremIds: Optional[Sequence[str]] = None,
        mutation: Optional[Mutation] = None,
        logQueue=None,
        logLevel: Union[int, str] = logging.INFO,
) -> Iterator[Union[Record, SuiteSummary]]:
    """Yield verdict records in frame order, then the SuiteSummary.

    Args:
        frames: the frames to check, each named by its frame id.
        workers: worker process count, the workers setting by default.
        theoremIds: theorem ids or group names, all theorems by default.
        mutation: negative-control mutation forwarded to every checker.
        logQueue: the LogConfig queue the workers log to.
        logLevel: the workers log level.

    Raises:
        ValueError: on an unknown theorem id.
    """
    ids = selectTheorems(theoremIds)
    if workers is None:
        workers = locfitSettings.workers
    summary = SuiteSummary(ids)
    if workers <= 1:
        batches = (verifyFrame(frame, ids, mutation) for frame in frames)
    else:
        frames = list(frames)
        logger.info(f"Verifying {len(frames)} frames with {workers} workers")
        batches = _runPooled(frames, workers, ids, mutation, logQueue, logLevel)
    for records in batches:
        summary.record(records)
        yield from records
    logger.info(f"Suite done: {summary.frames} frames, {summary.failures} failures")
    yield summary
