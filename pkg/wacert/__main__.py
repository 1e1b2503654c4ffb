import sys

from wacert.main import main

sys.exit(main())
