import sys

from stationpdm.cli import main

sys.exit(main())
