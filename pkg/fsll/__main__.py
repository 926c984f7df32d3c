import sys

from fsll.cli.main import main

sys.exit(main())
