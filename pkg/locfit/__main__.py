"""Main package entry point."""
from multiprocessing import freeze_support

import locfit

if __name__ == '__main__':
    freeze_support()
    locfit.run_main()
