import sys

from qecon.cli import main

sys.exit(main())
