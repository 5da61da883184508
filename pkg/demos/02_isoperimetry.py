"""How tight are the isoperimetric inequalities on small cubes?

Each check is oriented as lhs >= c * rhs; the minimum of lhs / rhs over a
corpus is the best constant the corpus allows.

Run:  python demos/02_isoperimetry.py
"""

from hyperioso import harness

# exhaustive:4 is every Boolean function on four bits, 65536 of them
corpus = harness.parse_corpus("exhaustive:4")
print(f"corpus {corpus.descriptor}: {len(corpus)} functions\n")

for cid in ("lemma-tal-lvl1", "thm-tal-iso", "thm-eg", "lemma-tal-lvld-above", "cor-noise-stable"):
    rep = harness.run_check(cid, corpus)
    check = harness.REGISTRY[cid]
    print(f"{cid}  [{check.kind}]")
    print(f"  {check.statement}")
    print(f"  min ratio {rep.min_ratio:.6f} at {rep.witness}  ({int(rep.degenerate.sum())} degenerate)")
    if rep.kind == "hard":
        print(f"  failures: {rep.failures}")
    print()

# Dictators sit on the level-1 bound exactly: E[sqrt(s)] = 1 = 2 sqrt(1/4).
# The ratio checks never go near zero, which is all an existential constant promises.

# The robust version survives any red/blue colouring of the edges.
rep = harness.run_check("lemma-robust", "exhaustive:3")
print(f"lemma-robust on exhaustive:3 with {harness.colorings_for(3)} colourings per function:"
      f" failures {rep.failures}, min ratio {rep.min_ratio:.4f}")
