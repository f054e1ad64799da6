import sys

from qflow.cli import run

sys.exit(run(sys.argv[1:]))
