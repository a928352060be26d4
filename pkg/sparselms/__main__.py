import sys

from sparselms.main import main

sys.exit(main())
