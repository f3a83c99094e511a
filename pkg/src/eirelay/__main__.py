import sys

from eirelay.experiments.cli import main

sys.exit(main())
