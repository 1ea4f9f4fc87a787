import sys

from rsgdsl.cli import main

sys.exit(main())
