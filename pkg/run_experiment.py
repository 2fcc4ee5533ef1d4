"""
Main entry point - runs the isdesign command line from a source checkout.

Examples:
  python run_experiment.py benchmark --config configs/spillover_grid.json --out results/
  python run_experiment.py design --graph isdesign/data/example12.edges --one-based --estimand total
"""

import sys
from pathlib import Path

# Make the package importable without installing it
sys.path.insert(0, str(Path(__file__).parent))

from isdesign.cli import main  # noqa: E402

if __name__ == "__main__":
    sys.exit(main())
