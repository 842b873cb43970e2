import sys

from emkernel.cli import main

sys.exit(main())
