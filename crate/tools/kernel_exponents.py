"""Modular-kernel exponents for the subvarieties the morphism classifier needs.

Reads the newform census (newform_census.py) and, for every prime level p in
[lo, hi), computes exp(ker phi_A) for each subset A of newform factors with
dim A >= 2 that is neither the Fricke-plus part nor forced to be a degree-2
quotient by Riemann-Hurwitz (2g - 2 < 3(2 dim A - 2)), plus every single
one-dimensional factor (whose exponent is the modular degree of the
optimal elliptic curve).

Usage: python3 kernel_exponents.py CENSUS.jsonl LO HI OUT.jsonl
"""
import itertools
import json
import os
import sys

import cypari2

pari = cypari2.Pari()
pari.allocatemem(int(os.environ.get("PARI_MEM", 4 * 10**9)))
pari('read("%s")' % os.path.join(os.path.dirname(os.path.abspath(__file__)), "kernel.gp"))
kinit, kfactors, kkernel, ktraces, kexponent, kglobal, kexponent_global = (
    pari(name) for name in ("kinit", "kfactors", "kkernel", "ktraces", "kexponent", "kglobal", "kexponent_global"))

# Above this subspace dimension mslattice on the subspace needs more memory
# than saturating inside the lattice of the whole space.
DIRECT_LIMIT = 40

OPERATORS = [(0, 0, 0), (1, 0, 0), (-1, 0, 0), (2, 0, 0), (1, 1, 0), (1, -1, 0), (3, 1, 0), (1, 2, 1), (2, -1, 1)]


def label_suffix(i):
    digits = []
    while True:
        digits.append(chr(ord("a") + i % 26))
        i //= 26
        if i == 0:
            break
    return "".join(reversed(digits))


def needed_subsets(orbits):
    g = sum(o["dim"] for o in orbits)
    plus = frozenset(i for i, o in enumerate(orbits) if o["fricke"] == 1)
    out = []
    n = len(orbits)
    for mask in range(1, 1 << n):
        members = frozenset(i for i in range(n) if mask >> i & 1)
        gp = sum(orbits[i]["dim"] for i in members)
        if gp == 1 and len(members) == 1:
            out.append(members)
            continue
        if gp < 2 or members == plus:
            continue
        if 2 * g - 2 < 3 * (2 * gp - 2):
            continue
        out.append(members)
    return out


def orbit_kernels(K, orbits, wanted):
    """Map orbit index -> subspace (in full modular-symbol coordinates)."""
    found = {}
    for sign_idx, sign in ((1, 1), (2, -1)):
        want = [i for i in wanted if orbits[i]["fricke"] == sign]
        if not want:
            continue
        dmax = max(orbits[i]["dim"] for i in want)
        for c in OPERATORS:
            FA = kfactors(K, sign_idx, pari(list(c)), dmax)
            F, A = FA[0], FA[1]
            nf = int(pari.matsize(F)[0])
            cands = []
            for j in range(nf):
                f, m = F[j, 0], int(F[j, 1])
                if int(pari.poldegree(f)) <= dmax:
                    cands.append((f, m))
            ok = True
            local = {}
            for i in want:
                o = orbits[i]
                d = o["dim"]
                matches = []
                for f, m in cands:
                    if int(pari.poldegree(f)) != d or m != 2:
                        continue
                    V = kkernel(K, sign_idx, A, f)
                    tr = [int(t) for t in ktraces(K, V)]
                    known = o["traces"]
                    # traces list starts at n = 2; positions of n = 3, 5, 7 are 1, 3, 5
                    checks = [(0, tr[0])]
                    if len(known) > 5:
                        checks += [(1, tr[1]), (3, tr[2]), (5, tr[3])]
                    if all(known[k] == v for k, v in checks):
                        matches.append(V)
                if len(matches) != 1:
                    ok = False
                    break
                local[i] = matches[0]
            if ok:
                found.update(local)
                break
        else:
            raise RuntimeError("could not isolate orbits %s" % want)
    return found


def process(p, orbits):
    subsets = needed_subsets(orbits)
    if not subsets:
        return []
    wanted = sorted(set().union(*subsets))
    K = kinit(p)
    kern = orbit_kernels(K, orbits, wanted)
    labels = ["%d.2.a.%s" % (p, label_suffix(i)) for i in range(len(orbits))]
    rows = []
    glob = None
    for members in subsets:
        V = pari.matconcat([kern[i] for i in sorted(members)])
        if int(pari.matsize(V)[1]) <= DIRECT_LIMIT:
            e = int(kexponent(K, V))
        else:
            if glob is None:
                glob = kglobal(K)
            e = int(kexponent_global(glob, V))
        rows.append({"level": p, "members": sorted(labels[i] for i in members), "exponent": e})
    rows.sort(key=lambda r: (len(r["members"]), r["members"]))
    return rows


def main():
    census, lo, hi, out = sys.argv[1], int(sys.argv[2]), int(sys.argv[3]), sys.argv[4]
    done = set()
    if os.path.exists(out):
        with open(out) as fh:
            done = {json.loads(line)["level"] for line in fh if line.strip()}
    with open(census) as fh:
        levels = [json.loads(line) for line in fh if line.strip()]
    with open(out, "a") as fh:
        for rec in sorted(levels, key=lambda r: r["level"]):
            p = rec["level"]
            if p in done or not lo <= p < hi:
                continue
            rows = process(p, rec["orbits"])
            fh.write(json.dumps({"level": p, "rows": rows}) + "\n")
            fh.flush()


if __name__ == "__main__":
    main()
