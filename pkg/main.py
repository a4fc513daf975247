import sys

from quantum_mlp.src.experiments.cli import main

if __name__ == "__main__":
    sys.exit(main())
