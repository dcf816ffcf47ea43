import sys

from pakforge.cli import main

sys.exit(main())
