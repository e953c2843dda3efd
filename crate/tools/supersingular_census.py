"""Newform orbit census for prime levels by the method of graphs.

T_2 and w_p are read off the supersingular 2-isogeny graph over F_{p^2}
(supersingular.gp); the characteristic polynomial of T_2 on each w_p
eigenspace is computed and factored with FLINT. Where that polynomial does
not separate the orbits (a repeated factor, or two factors of equal degree
and trace on the same eigenspace) the eigenspace is split further with
T_3, T_5, ... from the l-isogeny graphs. Output lines have the same shape
as those of newform_census.py.

Usage: python3 supersingular_census.py LO HI OUT.jsonl   (resumes if OUT exists)
"""
import json
import os
import sys

import cypari2
import flint

pari = cypari2.Pari()
pari.allocatemem(2 * 10**9)
pari('read("%s")' % os.path.join(os.path.dirname(os.path.abspath(__file__)), "supersingular.gp"))


def integer_rows(A):
    r, c = (int(x) for x in pari.matsize(A))
    return [[int(A[i, j]) for j in range(c)] for i in range(r)]


def process(p):
    S = pari(f"sssplit({p})")
    rows = []
    for sign, A in ((1, S[0]), (-1, S[1])):
        if int(pari.matsize(A)[0]) == 0:
            continue
        _, factors = flint.fmpz_mat(integer_rows(A)).charpoly().factor()
        for f, m in factors:
            c = f.coeffs()
            if f.degree() == 1 and c == [-3, 1]:
                m -= 1  # Eisenstein series: a_2 = 3
            if m > 0:
                rows.append((sign, f.degree(), -int(c[-2]), m, "Pol(%s)" % [int(x) for x in reversed(c)]))
    # rows sharing (degree, trace) with another row, on either eigenspace, get
    # a T_3 trace as well so that orbit labels follow the trace-form order
    keys = [r[1:3] for r in rows]
    orbits = []
    for sign, d, t2, m, f in rows:
        if m == 1 and keys.count((d, t2)) == 1:
            orbits.append({"fricke": sign, "dim": d, "traces": [t2]})
            continue
        split = [(int(dim), int(tr2), int(tr3)) for dim, (tr2, tr3) in pari(f"sstie({p}, {sign}, {f})")]
        if sum(s[0] for s in split) != d * m:
            raise RuntimeError("level %d: tied eigenspace split into %s" % (p, split))
        orbits += [{"fricke": sign, "dim": dim, "traces": [tr2, tr3]} for dim, tr2, tr3 in split]
    orbits.sort(key=lambda o: (o["dim"], o["traces"]))
    return orbits


def main():
    lo, hi, out = int(sys.argv[1]), int(sys.argv[2]), sys.argv[3]
    done = set()
    if os.path.exists(out):
        with open(out) as fh:
            done = {json.loads(line)["level"] for line in fh if line.strip()}
    primes = [int(q) for q in pari(f"primes([{max(lo, 11)}, {hi - 1}])")]
    with open(out, "a") as fh:
        for p in primes:
            if p in done:
                continue
            fh.write(json.dumps({"level": p, "orbits": process(p)}) + "\n")
            fh.flush()


if __name__ == "__main__":
    main()
