import sys

from memqec.cli import main

sys.exit(main())
