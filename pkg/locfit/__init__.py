"""locfit checks, on finite frames, the theorems relating filters of a frame
to its sublocales: the isomorphism SE(L) = So(L) and its restrictions,
Booleanizations, filter extensions and the polarities behind them.

Requires Python >= 3.8

Usage:
    ''python -m locfit verify --catalog default''
"""
__all__ = ['run_main']

import sys
import logging

from locfit.cli import climain as cli


def run_main():
    """Program entry point.

    Handles exceptions not trapped earlier.
    """
    try:
        sys.exit(cli.CliMain())
    except Exception as e:
        logger = logging.getLogger(__name__)
        logger.fatal('Fatal error!', exc_info=True)
        sys.stderr.write(f'\nlocfit - {str(e)}\n\n')
        sys.exit(2)


if __name__ == '__main__':
    run_main()
