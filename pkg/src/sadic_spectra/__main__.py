"""``python -m sadic_spectra``."""

import sys

from sadic_spectra.cli.main import main

sys.exit(main())
