"""Newform orbit census for prime levels via PARI modular symbols.

For every prime p in [lo, hi) this writes one JSON line with the Galois orbit
dimensions of weight-2 newforms of level p, their Fricke (w_p) eigenvalues and
trace forms (traces of a_n, n >= 2) long enough to order orbits the way the
public database labels them: by dimension, then lexicographically by trace form.

Usage: python3 newform_census.py LO HI OUT.jsonl   (resumes if OUT exists)
"""
import json
import os
import sys

import cypari2

pari = cypari2.Pari()
pari.allocatemem(6 * 10**9)

pari('read("%s")' % os.path.join(os.path.dirname(os.path.abspath(__file__)), "newforms.gp"))



def process(p):
    raw = pari(f"census({p})")
    rows = [[int(r[0]), int(r[1]), int(r[2]), int(r[3]), str(r[4])] for r in raw]
    # rows: [fricke, dim, trace a_2, multiplicity, T_2 factor]; a factor with
    # multiplicity m > 1, or two factors with the same degree and trace, may
    # come from several orbits or from one orbit of dimension up to dim * m,
    # so those eigenspaces are split with further operators.
    keys = [(r[1], r[2]) for r in rows]
    tied = [r for r in rows if r[3] > 1 or keys.count((r[1], r[2])) > 1]
    plain = [r for r in rows if r not in tied]
    expanded = []
    split = set()
    if tied:
        # every piece up to the largest tied dimension, with a full trace form
        # so that orbits of equal dimension and a_2-trace are ordered correctly
        lim = max(r[1] * r[3] for r in tied)
        for s, d, tr, f in pari(f"orbits({p}, {lim})"):
            split.add((int(s), str(f)))
            expanded.append({"fricke": int(s), "dim": int(d), "traces": [int(t) for t in tr]})
    expanded += [{"fricke": f, "dim": d, "traces": [t2]} for f, d, t2, _, poly in plain if (f, poly) not in split]
    for sign in (1, -1):
        want = sum(r[1] * r[3] for r in rows if r[0] == sign)
        got = sum(o["dim"] for o in expanded if o["fricke"] == sign)
        if want != got:
            raise RuntimeError("level %d: split of sign %d gave %d of %d dimensions" % (p, sign, got, want))
    expanded.sort(key=lambda o: (o["dim"], o["traces"]))
    return expanded


def main():
    lo, hi, out = int(sys.argv[1]), int(sys.argv[2]), sys.argv[3]
    done = set()
    if os.path.exists(out):
        with open(out) as fh:
            done = {json.loads(line)["level"] for line in fh if line.strip()}
    primes = [int(q) for q in pari(f"primes([{lo}, {hi - 1}])")]
    with open(out, "a") as fh:
        for p in primes:
            if p in done or p < 11:
                continue
            orbits = process(p)
            fh.write(json.dumps({"level": p, "orbits": orbits}) + "\n")
            fh.flush()


if __name__ == "__main__":
    main()
