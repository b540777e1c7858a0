"""
cone-lab - Main Entry Point

Command-line toolkit for numerical experiments on two-dimensional minimal
cones: builds cone nets on the unit sphere, certifies the full-length
property by sampling, measures the area saved by harmonic replacement,
straightens near-geodesic curves, and evaluates density-excess decay bounds.

Usage:
    python main.py build T --dim 3 -o t.json
    python main.py full-length t.json --eta1 0.05 --budget 10000 -o cert/
    python main.py decay bound --fy 0.1 --a 0.2 --b 0.1 --C0 1 --x 0.01 --y 1

Dependencies: numpy, scipy, networkx
"""

import sys

from cone_lab.cli import main


if __name__ == "__main__":
    sys.exit(main())
