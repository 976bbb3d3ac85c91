import sys

from discretegof.cli import main

sys.exit(main())
