"""Run the command line interface with 'python -m pyfareinspection'"""

import sys

from .cli import main

sys.exit(main())
