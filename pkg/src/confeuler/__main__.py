import sys

from confeuler.cli import main

sys.exit(main())
