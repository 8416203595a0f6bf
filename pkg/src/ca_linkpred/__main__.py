import sys

from ca_linkpred.cli import main

sys.exit(main())
