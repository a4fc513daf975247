import sys

from .src.experiments.cli import main

sys.exit(main())
