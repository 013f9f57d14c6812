#!/usr/bin/env python3
"""Regenerate the golden files under tests/golden/.

The torsion-pair list for the middle extension-closed subcategory is an
exhaustively computed oracle; rewriting it is an explicit, reviewed act,
so this script is the only thing that touches the files.
"""

import pathlib
import sys

from extriang.excat import enumerate_torsion_pairs, torsion_pairs_to_json
from extriang.fixtures import build_example51

GOLDEN = pathlib.Path(__file__).resolve().parent.parent / "tests" / "golden"


def main() -> int:
    GOLDEN.mkdir(parents=True, exist_ok=True)
    bundle = build_example51(p=2, bound=2)
    pairs = enumerate_torsion_pairs(bundle.b_ext)
    out = GOLDEN / "torsion_pairs_b_ext.json"
    out.write_text(torsion_pairs_to_json(pairs, bundle.b_ext))
    print(f"wrote {out} ({len(pairs)} pairs)")
    return 0


if __name__ == "__main__":
    sys.exit(main())
