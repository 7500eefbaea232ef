__all__ = [
    '__title__', '__summary__', '__uri__', '__version__', '__author__',
    '__email__', '__license__', '__copyright__',
]

__title__ = 'locfit'
__summary__ = 'Filters, sublocales and fitness of finite frames, machine-checked'
__uri__ = ''

__version__ = '0.1.0'

__author__ = 'locfit contributors'
__email__ = ''

__license__ = 'MIT'
__copyright__ = 'Copyright 2026 {}'.format(__author__)
