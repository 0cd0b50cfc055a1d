import sys

from tribeam.cli import main

sys.exit(main())
