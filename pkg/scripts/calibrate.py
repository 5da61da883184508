"""Regenerate the regression floors shipped in ``hyperioso/data/calibration.json``.

Each ratio check gets the minimum ratio measured on each shipped corpus plus
the function attaining it.  Run after any intentional change to a check:

    python scripts/calibrate.py
"""

import json
import pathlib
import sys

from hyperioso import __version__, harness
from hyperioso.errors import DegenerateCorpusError

CORPORA = ("exhaustive:3", "exhaustive:4", "families:16", "random:10:1000:42")
TARGET = pathlib.Path(__file__).resolve().parents[1] / "src" / "hyperioso" / "data" / "calibration.json"


def main() -> int:
    floors = {}
    for spec in CORPORA:
        corpus = harness.parse_corpus(spec)
        floors[spec] = {}
        for cid in harness.RATIO_IDS:
            try:
                rep = harness.run_check(cid, corpus, threads=harness.default_threads(), floors={})
            except DegenerateCorpusError:
                print(f"{spec:20s} {cid:24s} degenerate", file=sys.stderr)
                continue
            floors[spec][cid] = {"min_ratio": rep.min_ratio, "witness": rep.witness}
            print(f"{spec:20s} {cid:24s} {rep.min_ratio!r} {rep.witness}", file=sys.stderr)
    doc = {"schema_version": harness.SCHEMA_VERSION, "version": __version__, "floors": floors}
    TARGET.write_text(json.dumps(doc, indent=2, sort_keys=True) + "\n")
    return 0


if __name__ == "__main__":
    sys.exit(main())
