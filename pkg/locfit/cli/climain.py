"""The locfit command line.

CliMain parses the arguments, starts the log server and hands over to
runCommand, which dispatches to one handler per subcommand. runCommand
needs no log server and is what the tests drive.

Exit codes: 0 on success, 1 when a verification fails, 2 on an input or
usage error.
"""
import argparse
import logging
import sys
from contextlib import contextmanager
from pathlib import Path
from typing import Any, Callable, Dict, Iterator, List, Optional, Sequence, TextIO

from locfit import __about__
from locfit.util import bitset as bs
from locfit.util.basicpatterns import ObjectFactory
from locfit.util.logutil import LogConfig
from locfit.util.settings import SettingsError
from locfit.models.settings import locfitSettings
from locfit.models.lattice import (
    FiniteLattice, InvariantViolation, LocfitError, NotAFrameError, heytingLawWitness, primes,
)
from locfit.models.catalog import NAMED_FRAMES, iterCatalog, parseCatalogSpec
from locfit.models.formats import (
    FormatError, contextFromJson, dumpJson, frameFromJson, hasseDot, jsonLine, topologyFromJson,
)
from locfit.models.polarity import (
    galoisClosed, oppositeFamily, polarP, polarityLawWitness, randomPolarity,
)
from locfit.models.filters import allFilters, filterClasses, subfitnessSuite
from locfit.models.sublocales import enumerateSublocales, isFit
from locfit.models.extensions import (
    EXTENSION_CLASSES, basicProperties, buildExtension, generalChar, meetPreservationScan,
    specialCases,
)
from locfit.models.theorems import Mutation, selectTheorems
from locfit.models.verifier import SuiteSummary, runSuite

logger = logging.getLogger(__name__)

__all__ = ["CliMain", "buildParser", "runCommand"]

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_INPUT = 2

# CLI option -> setting overridden for the run
_OVERRIDES = (
    ("sublocale_cap", "sublocaleCap"),
    ("filter_cap", "filterCap"),
    ("gc_cap", "gcCarrierCap"),
    ("workers", "workers"),
    ("log_level", "logLevel"),
)


class UsageError(LocfitError):
    pass


def _positiveInt(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid int value: {text!r}") from None
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be positive, got {value}")
    return value


def _density(text: str) -> float:
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid density: {text!r}") from None
    if not 0.0 <= value <= 1.0:
        raise argparse.ArgumentTypeError(f"density must lie in [0, 1], got {value}")
    return value


def buildParser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--output", "-o", type=Path, help="write to PATH instead of stdout")
    common.add_argument("--format", choices=("json", "jsonl", "table", "dot"), default=None)
    common.add_argument("--log-level", dest="log_level",
                        choices=("DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"))
    caps = common.add_argument_group("enumeration caps")
    caps.add_argument("--sublocale-cap", dest="sublocale_cap", type=_positiveInt)
    caps.add_argument("--filter-cap", dest="filter_cap", type=_positiveInt)
    caps.add_argument("--gc-cap", dest="gc_cap", type=_positiveInt)

    source = argparse.ArgumentParser(add_help=False)
    group = source.add_mutually_exclusive_group()
    group.add_argument("--frame", type=Path, help="Frame JSON file")
    group.add_argument("--topology", type=Path, help="Topology JSON file")
    group.add_argument("--catalog", metavar="SPEC", help="catalog spec such as topologies:3,chain:6")
    group.add_argument("--named", choices=sorted(NAMED_FRAMES))

    parser = argparse.ArgumentParser(
        prog="locfit",
        description="Finite frames, their filters and sublocales, and the theorems relating them.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__about__.__version__}")
    sub = parser.add_subparsers(dest="command", metavar="COMMAND")
    sub.required = True

    sub.add_parser("validate", parents=[common, source], help="check the frame law")
    sub.add_parser("report", parents=[common, source], help="frame summary")
    sub.add_parser("filters", parents=[common, source], help="filter classes and subfitness")
    sub.add_parser("sublocales", parents=[common, source], help="sublocale classes")
    sub.add_parser("dot", parents=[common, source], help="Hasse diagram in DOT")

    verify = sub.add_parser("verify", parents=[common, source], help="run the theorem suite")
    verify.add_argument("--suite", nargs="+", default=["all"], metavar="ID",
                        help="theorem ids or groups, 'all' by default")
    verify.add_argument("--workers", type=_positiveInt)
    verify.add_argument("--mutation", choices=[m.value for m in Mutation],
                        help="negative control applied to the isomorphism checkers")

    gc = sub.add_parser("gc", parents=[common], help="closed sets of a polarity")
    gcSource = gc.add_mutually_exclusive_group(required=True)
    gcSource.add_argument("--context", type=Path, help="Context JSON file")
    gcSource.add_argument("--random", nargs=3, metavar=("N", "M", "DENSITY"),
                          help="seeded random context on N objects and M attributes")
    gc.add_argument("--seed", type=int, default=0)

    extend = sub.add_parser("extend", parents=[common, source], help="filter extension L^F")
    extend.add_argument("--class", dest="filter_class", choices=EXTENSION_CLASSES, default="so")

    catalog = sub.add_parser("catalog", parents=[common], help="list catalog frames")
    catalog.add_argument("spec", nargs="?", default="default")
    catalog.add_argument("--all", dest="keep_all", action="store_true",
                         help="keep frames isomorphic to an earlier one")

    settings = sub.add_parser("settings", help="show or reset the saved settings")
    action = settings.add_mutually_exclusive_group()
    action.add_argument("--show", action="store_true")
    action.add_argument("--reset", action="store_true")
    return parser


def _applyOverrides(args: argparse.Namespace) -> None:
    for option, key in _OVERRIDES:
        value = getattr(args, option, None)
        if value is not None:
            locfitSettings.override(key, value)


def _frames(args: argparse.Namespace, default: Optional[str] = None) -> Iterator[FiniteLattice]:
    if getattr(args, "frame", None):
        yield frameFromJson(args.frame, name=args.frame.stem)
    elif getattr(args, "topology", None):
        yield topologyFromJson(args.topology, name=args.topology.stem)
    elif getattr(args, "named", None):
        yield NAMED_FRAMES[args.named]()
    elif getattr(args, "catalog", None) or default:
        try:
            parts = parseCatalogSpec(args.catalog or default)
        except ValueError as e:
            raise UsageError(f"--catalog: {e}") from None
        yield from iterCatalog(parts)
    else:
        raise UsageError("one of --frame, --topology, --catalog or --named is required")


class _Writer:
    """Collects records and writes them in the requested format."""

    def __init__(self, out: TextIO, fmt: str) -> None:
        self.out = out
        self.fmt = fmt
        self._records: List[dict] = []

    def emit(self, record: dict) -> None:
        if self.fmt == "jsonl":
            jsonLine(record, self.out)
        else:
            self._records.append(record)

    def text(self, text: str) -> None:
        self.out.write(text)

    def close(self) -> None:
        if self.fmt == "json" and self._records:
            records = self._records
            self.out.write(dumpJson(records[0] if len(records) == 1 else records) + "\n")
        elif self.fmt == "table":
            for record in self._records:
                for key in sorted(record):
                    self.out.write(f"{key:<20} {_cell(record[key])}\n")
                self.out.write("\n")


def _cell(value: Any) -> str:
    if isinstance(value, str):
        return value
    return dumpJson(value)


def _requireText(args: argparse.Namespace, *allowed: str) -> None:
    if args.format == "dot" and "dot" not in allowed:
        raise UsageError(f"--format: dot output is not available for {args.command}")


# -- Handlers --------------------------------------------------------------------
# Each handler takes the parsed arguments and a _Writer and returns an exit code.

COMMANDS = ObjectFactory()


def command(name: str) -> Callable:
    def register(func: Callable) -> Callable:
        COMMANDS.registerBuilder(name, func)
        return func
    return register


@command("validate")
def _validate(args: argparse.Namespace, writer: _Writer) -> int:
    _requireText(args)
    code = EXIT_OK
    for L in _frames(args):
        report = L.frameReport
        writer.emit({"frame": L.name, "elements": L.n, **report.toJson(L)})
        if not report.isDistributiveFrame:
            logger.error(f"{L.name or 'input'} is not a frame")
            sys.stderr.write(f"locfit: {L.name or 'input'} is not a frame\n")
            code = EXIT_INPUT
    return code


def _frameReport(L: FiniteLattice) -> dict:
    FL = allFilters(L)
    SL = enumerateSublocales(L)
    return {
        "frame": L.name,
        "elements": L.n,
        "primes": [L.labels[p] for p in primes(L)],
        "heyting": heytingLawWitness(L) is None,
        "filters": len(FL),
        "filter_classes": {k: bs.popcount(v) for k, v in filterClasses(FL).items()},
        "subfitness": subfitnessSuite(FL).toJson(),
        "sublocales": len(SL),
        "sublocale_classes": {k: bs.popcount(v) for k, v in SL.classes.items()},
        "fit": isFit(SL),
    }


@command("report")
def _report(args: argparse.Namespace, writer: _Writer) -> int:
    _requireText(args)
    for L in _frames(args):
        writer.emit(_frameReport(L))
    return EXIT_OK


@command("filters")
def _filters(args: argparse.Namespace, writer: _Writer) -> int:
    _requireText(args)
    for L in _frames(args):
        FL = allFilters(L)
        writer.emit({
            "frame": L.name,
            "filters": [
                {"filter": FL.label(i), "members": L.labelsOf(FL.members(i)), "classes": tag.names()}
                for i, tag in enumerate(FL.tags)
            ],
            "classes": {k: FL.labelsOf(v) for k, v in filterClasses(FL).items()},
            "subfitness": subfitnessSuite(FL).toJson(),
        })
    return EXIT_OK


@command("sublocales")
def _sublocales(args: argparse.Namespace, writer: _Writer) -> int:
    _requireText(args, "dot")
    for L in _frames(args):
        SL = enumerateSublocales(L)
        if args.format == "dot":
            tags = {i: tag.names() for i, tag in enumerate(SL.tags)}
            writer.text(hasseDot(SL.lattice, classes=tags))
            continue
        writer.emit({
            "frame": L.name,
            "sublocales": [
                {"set": SL.label(S), "classes": tag.names()} for S, tag in zip(SL.sublocales, SL.tags)
            ],
            "classes": {k: [SL.label(S) for S in SL.masksOf(v)] for k, v in SL.classes.items()},
            "fit": isFit(SL),
        })
    return EXIT_OK


@command("dot")
def _dot(args: argparse.Namespace, writer: _Writer) -> int:
    for L in _frames(args):
        writer.text(hasseDot(L))
    return EXIT_OK


@command("catalog")
def _catalog(args: argparse.Namespace, writer: _Writer) -> int:
    _requireText(args, "dot")
    try:
        parts = parseCatalogSpec(args.spec)
    except ValueError as e:
        raise UsageError(f"spec: {e}") from None
    for L in iterCatalog(parts, unique=not args.keep_all):
        if args.format == "dot":
            writer.text(hasseDot(L))
        else:
            writer.emit({"frame": L.name, **L.toJson()})
    return EXIT_OK


@command("gc")
def _gc(args: argparse.Namespace, writer: _Writer) -> int:
    _requireText(args, "dot")
    if args.context:
        P = contextFromJson(args.context)
        name = args.context.stem
    else:
        n, m, density = args.random
        try:
            P = randomPolarity(_positiveInt(n), _positiveInt(m), _density(density), args.seed)
        except argparse.ArgumentTypeError as e:
            raise UsageError(f"--random: {e}") from None
        name = f"random-{n}-{m}-{args.seed}"
    gc = galoisClosed(P, name=name)
    if args.format == "dot":
        writer.text(hasseDot(gc.lattice, title=name))
        return EXIT_OK
    writer.emit({
        "context": name,
        "objects": P.nx,
        "attributes": P.ny,
        "size": len(gc),
        "concepts": [
            {"extent": [P.xLabels[x] for x in bs.iterBits(M)],
             "intent": [P.yLabels[y] for y in bs.iterBits(polarP(P, M))]}
            for M in gc.closedSets
        ],
        "polarity_laws": polarityLawWitness(P) is None,
        "opposite": oppositeFamily(P, gc).passed,
    })
    return EXIT_OK


@command("extend")
def _extend(args: argparse.Namespace, writer: _Writer) -> int:
    _requireText(args, "dot")
    code = EXIT_OK
    for L in _frames(args):
        ext = buildExtension(allFilters(L), args.filter_class)
        if args.format == "dot":
            writer.text(hasseDot(ext.lattice, title=f"{L.name}^{args.filter_class}"))
            continue
        checks = [f(ext) for f in (basicProperties, generalChar, meetPreservationScan, specialCases)]
        if not all(c.passed for c in checks):
            code = EXIT_FAILED
        writer.emit({**ext.toJson(), "checks": [c.toJson() for c in checks]})
    return code


@command("verify")
def _verify(args: argparse.Namespace, writer: _Writer, logQueue=None) -> int:
    _requireText(args)
    mutation = Mutation(args.mutation) if args.mutation else None
    try:
        theoremIds = selectTheorems(args.suite)
    except ValueError as e:
        raise UsageError(f"--suite: {e}") from None
    summary: Optional[SuiteSummary] = None
    stream = runSuite(
        _frames(args, default="default"),
        workers=locfitSettings.workers,
        theoremIds=theoremIds,
        mutation=mutation,
        logQueue=logQueue,
        logLevel=locfitSettings.logLevel,
    )
    for item in stream:
        if isinstance(item, SuiteSummary):
            summary = item
        elif writer.fmt != "table":
            writer.emit(item)
    if writer.fmt == "table":
        writer.text(summary.table())
    else:
        writer.emit(summary.toJson())
        if args.output is not None:
            sys.stdout.write(summary.table())
    return EXIT_OK if summary.passed else EXIT_FAILED


@command("settings")
def _settings(args: argparse.Namespace, writer: _Writer) -> int:
    if args.reset:
        locfitSettings.resetToDefaults()
        locfitSettings.save()
        logger.info("Settings reset to their defaults")
    writer.emit(locfitSettings.asDict())
    return EXIT_OK


_DEFAULT_FORMAT = {"verify": "jsonl", "catalog": "jsonl", "dot": "dot"}


@contextmanager
def _openOutput(path: Optional[Path], stdout: TextIO) -> Iterator[TextIO]:
    if path is None:
        yield stdout
    else:
        with path.open("w", encoding="utf-8", newline="\n") as fh:
            yield fh


def runCommand(
        args: argparse.Namespace,
        stdout: Optional[TextIO] = None,
        logQueue=None,
) -> int:
    """Run one parsed command and map domain errors to exit codes."""
    stdout = stdout or sys.stdout
    fmt = getattr(args, "format", None) or _DEFAULT_FORMAT.get(args.command, "json")
    _applyOverrides(args)
    try:
        with _openOutput(getattr(args, "output", None), stdout) as out:
            writer = _Writer(out, fmt)
            handler = COMMANDS.builder(args.command)
            if args.command == "verify":
                code = handler(args, writer, logQueue)
            else:
                code = handler(args, writer)
            writer.close()
        return code
    except NotAFrameError as e:
        sys.stderr.write(f"locfit: {e}\n")
        sys.stderr.write(dumpJson(e.report.toJson(e.lattice)) + "\n")
        return EXIT_INPUT
    except InvariantViolation as e:
        logger.error(f"{args.command}: {e}", exc_info=True)
        sys.stderr.write(f"locfit {args.command}: {e}\n")
        sys.stderr.write(dumpJson(e.witness) + "\n")
        return EXIT_FAILED
    except (LocfitError, SettingsError, OSError) as e:
        logger.error(f"{args.command}: {e}")
        sys.stderr.write(f"locfit {args.command}: {e}\n")
        return EXIT_INPUT
    finally:
        locfitSettings.clearOverrides()


def CliMain(argv: Optional[Sequence[str]] = None) -> int:
    """Command line entry point.

    Parses argv, initializes the application logging and runs the command.

    Returns:
        The process exit code.
    """
    parser = buildParser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else EXIT_INPUT

    logLevel = args.log_level if getattr(args, "log_level", None) else locfitSettings.logLevel
    logConfig = LogConfig(
        locfitSettings.appDirs.user_log_dir / "locfit.log",
        logLevel,
        logOnConsole=True,
    )
    logConfig.initLogging()
    logger.info(f"locfit {args.command} is starting...")
    try:
        return runCommand(args, logQueue=logConfig.logQueue)
    finally:
        logger.info(f"locfit {args.command} is closing...")
        logConfig.stopLogging()
