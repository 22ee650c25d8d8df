import sys

from pgreedy.cli import main

sys.exit(main())
