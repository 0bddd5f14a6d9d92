import sys

from intcp.cli import main

sys.exit(main())
