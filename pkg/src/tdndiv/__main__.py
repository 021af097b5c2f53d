import sys

from tdndiv.cli import main

sys.exit(main())
