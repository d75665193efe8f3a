import sys

from udw.shell.cli import main

sys.exit(main())
