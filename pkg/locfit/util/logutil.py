"""Multiprocess logging: every process logs to a queue drained by one server.

The CLI starts the server through LogConfig.initLogging(); the verify workers
attach to the same queue with configureRootLogger() in their own run().
"""
import logging
import logging.handlers
import multiprocessing as mp
import sys
import traceback
from queue import Empty
from pathlib import Path
from typing import Optional, Union

from locfit.util.basicpatterns import Singleton

__all__ = ["LogConfig", "configureRootLogger"]

CONSOLE_FORMAT = '%(processName)-15s%(levelname)s: %(message)s'
FILE_FORMAT = '%(asctime)s.%(msecs)03d %(levelname)-8s %(processName)-15s %(threadName)-20s %(message)s'
DATE_FORMAT = '%Y-%m-%d %H:%M:%S'


class _LogServer(mp.Process):
    def __init__(
            self,
            logQueue: mp.Queue,
            logFile: Optional[Path],
            logLevel: Union[int, str] = logging.INFO,
            logOnConsole: bool = True
    ):
        super().__init__()

        self.name = "LogServer"
        self.logQueue = logQueue
        self.logFile = logFile
        self.logLevel = logLevel
        self.logOnConsole = logOnConsole

    def configure(self):
        consoleLogLevel = logging.WARNING

        root = logging.getLogger()
        try:
            if self.logFile is None:
                raise OSError("no log file")
            filehandler = logging.FileHandler(self.logFile, mode='w')
        except OSError:
            consoleLogLevel = self.logLevel
        else:
            filehandler.setLevel(self.logLevel)
            filehandler.setFormatter(logging.Formatter(FILE_FORMAT, DATE_FORMAT))
            root.addHandler(filehandler)
        finally:
            if self.logOnConsole:
                consolehandler = logging.StreamHandler()
                consolehandler.set_name('console')
                consolehandler.setFormatter(logging.Formatter(CONSOLE_FORMAT))
                consolehandler.setLevel(consoleLogLevel)
                root.addHandler(consolehandler)

            root.setLevel(logging.DEBUG)

    def run(self):
        self.configure()
        while True:
            try:
                try:
                    record = self.logQueue.get(block=True, timeout=0.01)
                except Empty:
                    continue
                if record is None:  # sentinel
                    break
                logger = logging.getLogger(record.name)
                logger.handle(record)
            except Exception:
                print('LogServer failure:', file=sys.stderr)
                traceback.print_exc(file=sys.stderr)


class LogConfig(metaclass=Singleton):
    def __init__(
            self,
            logFile: Optional[Path] = None,
            logLevel: Union[int, str] = logging.INFO,
            logOnConsole: bool = True
    ):
        self.logFile = logFile
        self.logLevel = logLevel
        self.logOnConsole = logOnConsole

        logging.captureWarnings(True)

        self.logQueue = mp.Queue(maxsize=-1)
        self.logServer = _LogServer(
            self.logQueue,
            self.logFile,
            self.logLevel,
            self.logOnConsole,
        )
        self._handler: Optional[logging.Handler] = None

    @property
    def isRunning(self) -> bool:
        return self.logServer.is_alive()

    def initLogging(self):
        self.logServer.start()
        self._handler = configureRootLogger(self.logQueue, self.logLevel)

    def stopLogging(self):
        if self._handler is not None:
            logging.getLogger().removeHandler(self._handler)
            self._handler = None
        self.logQueue.put_nowait(None)
        self.logServer.join()


def configureRootLogger(logQueue: mp.Queue, logLevel: Union[int, str]) -> logging.Handler:
    handler = logging.handlers.QueueHandler(logQueue)
    root = logging.getLogger()
    root.addHandler(handler)
    root.setLevel(logLevel)
    return handler
