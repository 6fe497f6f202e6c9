import sys

from stareigen.cli import main

sys.exit(main())
