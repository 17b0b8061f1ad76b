import sys

from .casecli import main

sys.exit(main())
