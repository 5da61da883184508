"""Run the whole check registry over a random corpus and write reports.

Run:  python demos/06_verify_corpus.py [outdir]
"""

import sys
import tempfile

from hyperioso.cli import main

out = sys.argv[1] if len(sys.argv) > 1 else tempfile.mkdtemp(prefix="hyperioso-")

# exit 0 means every hard check passed and every ratio stayed above its floor
code = main(["verify", "--corpus", "random:8:500:1", "--checks", "all", "--out", out])
print(f"exit status {code}; reports in {out}/report.json and {out}/report.csv")
