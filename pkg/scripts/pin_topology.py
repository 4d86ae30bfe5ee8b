#!/usr/bin/env python3
"""Generate and save a connected random geometric topology as an edge list.

The saved file can be referenced from a run config via
`topology.kind = edge_list` / `topology.edge_list = <path>` so that a whole
experiment series runs on one pinned graph.

Usage:
    python scripts/pin_topology.py --V 20 --radius 0.35 --seed 1 --out graph.edges
"""

import argparse
import sys

from asdnlms.network import build_random_geometric, save_edge_list


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--V", type=int, default=20)
    parser.add_argument("--radius", type=float, default=0.35)
    parser.add_argument("--seed", type=int, default=1)
    parser.add_argument("--out", required=True)
    args = parser.parse_args()

    top = build_random_geometric(args.V, args.radius, args.seed)
    save_edge_list(top, args.out)
    deg = top.degrees()
    print(f"wrote {args.out}: V={top.node_count}, "
          f"links={int((deg - 1).sum() // 2)}, degrees {deg.min()}..{deg.max()}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
