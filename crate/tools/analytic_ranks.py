"""Analytic ranks of small-dimensional newform factors at prime level.

For every prime p in [lo, hi) this computes, with PARI's modular-forms
package, the order of vanishing at s = 1 of L(f, s) for each Galois orbit of
weight-2 newforms of level p with dimension <= DMAX, together with the trace
of a_n for n = 2..7 so the orbit can be matched to its database label.

Usage: python3 analytic_ranks.py LO HI DMAX OUT.jsonl   (resumes if OUT exists)
"""
import json
import os
import sys

import cypari2

pari = cypari2.Pari()
pari.allocatemem(2 * 10**9)

QUERY = """my(mf = mfinit([%d, 2], 0), B = mfeigenbasis(mf), out = List());
for (i = 1, #B,
  my(F = B[i], P = mfparams(F)[4], d = poldegree(P));
  if (d <= %d,
    my(L = lfunmf(mf, F), c = mfcoefs(F, 7));
    if (d > 1, L = L[1]);
    listput(out, [d, vector(6, n, trace(Mod(c[n + 2], P))), lfunorderzero(L)])));
Vec(out)"""


def main():
    lo, hi, dmax, out = int(sys.argv[1]), int(sys.argv[2]), int(sys.argv[3]), sys.argv[4]
    done = set()
    if os.path.exists(out):
        with open(out) as fh:
            done = {json.loads(line)["level"] for line in fh if line.strip()}
    primes = [int(q) for q in pari(f"primes([{lo}, {hi - 1}])")]
    with open(out, "a") as fh:
        for p in primes:
            if p in done or p < 11:
                continue
            rows = [{"dim": int(d), "traces": [int(t) for t in tr], "rank": int(r)}
                    for d, tr, r in pari(QUERY % (p, dmax))]
            fh.write(json.dumps({"level": p, "ranks": rows}) + "\n")
            fh.flush()


if __name__ == "__main__":
    main()
