from trackgamma.cli import main
import sys

sys.exit(main())
