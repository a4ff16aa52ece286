#!/usr/bin/env python3
"""Sweep d-cluster-free maxima over a small (q, n, k, d) grid.

Prints one line per instance with the exact optimum next to the star bound
[n-1, k-1]_q, flagging where the bound is attained. Defaults stay at desk
scale; push --n-max/--time-limit carefully, the searches are exact.

    python scripts/explore_dclusters.py --q 2 --n-max 4 --k-max 2 --d-list 3,4
"""

import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from qclusters.cli import main  # noqa: E402

if __name__ == "__main__":
    sys.exit(main(["explore"] + sys.argv[1:]))
