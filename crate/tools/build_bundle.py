"""Assemble the offline bundle in data/ from the PARI-generated work files.

Inputs (JSON Lines, produced by newform_census.py, kernel_exponents.py and
analytic_ranks.py):
    census.jsonl   {"level", "orbits": [{"fricke", "dim", "traces"}]}
    kernel.jsonl   {"level", "rows": [{"members", "exponent"}]}
    ranks.jsonl    {"level", "ranks": [{"dim", "traces", "rank"}]}

Outputs in OUTDIR: newforms.jsonl, kernels.jsonl, genus2.json, facts.json.

Usage: python3 build_bundle.py WORKDIR OUTDIR [BOUND]   (levels below BOUND, default 10000)
"""
import json
import math
import os
import sys

SCHEMA_VERSION = "1"
EC_COVERAGE = (11, 1000)
GENUS2_COVERAGE = 3000


def is_prime(n):
    if n < 2:
        return False
    return all(n % q for q in range(2, math.isqrt(n) + 1))


def kron(d, p):
    """Legendre symbol (d/p) for an odd prime p."""
    r = pow(d % p, (p - 1) // 2, p)
    return -1 if r == p - 1 else r


def genus(p):
    if p in (2, 3):
        return 0
    nu2 = 1 + kron(-4, p)
    nu3 = 1 + kron(-3, p)
    twelve = (p + 1) - 3 * nu2 - 4 * nu3 - 12
    assert twelve % 12 == 0
    return twelve // 12 + 1


def class_number(d):
    """Reduced forms of discriminant d < 0."""
    h = 0
    a = 1
    while 3 * a * a <= -d:
        for b in range(-a + 1, a + 1):
            if (b * b - d) % (4 * a):
                continue
            c = (b * b - d) // (4 * a)
            if c < a or (c == a and b < 0):
                continue
            if math.gcd(math.gcd(a, abs(b)), c) == 1:
                h += 1
        a += 1
    return h


def plus_genus(p):
    g = genus(p)
    h = class_number(-4 * p)
    alpha = {7: 6, 3: 4}.get(p % 8, 3)  # times 3
    num = 3 * (2 * g + 2) - alpha * h
    assert num % 12 == 0, p
    return num // 12


def suffix(i):
    s = ""
    while True:
        s = chr(ord("a") + i % 26) + s
        i //= 26
        if i == 0:
            return s


def load(path):
    with open(path) as fh:
        return {r["level"]: r for r in (json.loads(l) for l in fh if l.strip())}


def prime_list(lo, hi):
    return [p for p in range(lo, hi) if is_prime(p)]


def ranges(text):
    out = set()
    for part in text.split(","):
        a, _, b = part.partition("-")
        out.update(range(int(a), int(b or a) + 1))
    return sorted(out)


# Levels N with infinitely many points of degree 2, 3, 4 on X_0(N).
KNOWN_DENSITY = {
    2: ranges("1-33,35-37,39-41,43,46-50,53,59,61,65,71,79,83,89,101,131"),
    3: ranges("1-29,31,32,34,36,37,43,45,49,50,54,64,81"),
    4: ranges("1-75,77-83,85-89,91,92,94-96,98-101,103,104,107,111,118,119,121,123,125,128,131,"
              "141-143,145,155,159,167,191"),
}
QUINTIC_ONLY = [109]

PLUS_CUBIC_TRUE = [67, 73, 103, 107, 109, 163, 167, 191, 269]
GONALITY_SIX = [97, 113, 127, 137, 139, 149, 151, 179, 181, 227, 239]
BIELLIPTIC = [53, 61, 79, 83, 89, 101, 131]
LOW_GONALITY = [59, 71]
GONALITY_EXACT = {193: (8, 8), 197: (8, 8), 163: (7, 8)}
KV_LOW = 200
KV_HIGH = 696


def gonality_facts():
    out = {}
    for p in prime_list(2, KV_HIGH + 1):
        g = genus(p)
        gp = plus_genus(p) if p > 3 else 0
        upper = min(g + 1, 2 * (gp + 1))
        if g == 0:
            b = (1, 1)
        elif p <= 47 or p in LOW_GONALITY:
            b = (2, 3)
        elif p in BIELLIPTIC:
            b = (2, 4)
        elif p in GONALITY_SIX:
            b = (6, 6)
        elif p in GONALITY_EXACT:
            b = GONALITY_EXACT[p]
        elif p in (157, 173, 199) or (KV_LOW < p < KV_HIGH and p != 269):
            b = (7, upper)
        else:
            b = (2, upper)
        out[str(p)] = {"lower": b[0], "upper": b[1]}
    return out


def plus_cubic_facts():
    out = {str(p): True for p in PLUS_CUBIC_TRUE}
    out["193"] = False
    for p in prime_list(KV_LOW + 1, KV_HIGH):
        if p not in (227, 239, 269):
            out[str(p)] = False
    return dict(sorted(out.items(), key=lambda kv: int(kv[0])))


def main():
    work, outdir = sys.argv[1], sys.argv[2]
    census = load(os.path.join(work, "census.jsonl"))
    kernels = load(os.path.join(work, "kernel.jsonl"))
    ranks = load(os.path.join(work, "ranks.jsonl"))
    os.makedirs(outdir, exist_ok=True)

    bound = int(sys.argv[3]) if len(sys.argv) > 3 else 10000
    levels = prime_list(2, bound)
    missing = [p for p in levels if p >= 11 and p not in census]
    if missing:
        sys.exit("census incomplete: %s" % missing[:10])

    factors_by_level = {}
    with open(os.path.join(outdir, "newforms.jsonl"), "w") as out:
        for p in levels:
            orbits = census[p]["orbits"] if p in census else []
            assert sum(o["dim"] for o in orbits) == genus(p), p
            if p > 3:
                assert sum(o["dim"] for o in orbits if o["fricke"] == 1) == plus_genus(p), p
            rank_rows = ranks.get(p, {}).get("ranks", [])
            factors = []
            for i, o in enumerate(orbits):
                rec = {"label": "%d.2.a.%s" % (p, suffix(i)), "dim": o["dim"], "fricke": o["fricke"]}
                match = [r for r in rank_rows if r["dim"] == o["dim"]
                         and r["traces"][:len(o["traces"])] == o["traces"][:6]]
                if len(match) == 1:
                    rec["analytic_rank"] = match[0]["rank"]
                elif p in ranks and o["dim"] <= 3:
                    sys.exit("ambiguous rank match at %s" % rec["label"])
                factors.append(rec)
            factors_by_level[p] = factors
            out.write(json.dumps({"level": p, "factors": factors}, separators=(",", ":")) + "\n")

    with open(os.path.join(outdir, "kernels.jsonl"), "w") as out:
        for p in sorted(kernels):
            if p >= GENUS2_COVERAGE:
                continue
            for r in kernels[p]["rows"]:
                out.write(json.dumps({"level": p, "members": r["members"], "exponent": r["exponent"]},
                                     separators=(",", ":")) + "\n")

    with open(os.path.join(outdir, "genus2.json"), "w") as out:
        json.dump({"schema_version": SCHEMA_VERSION, "coverage": GENUS2_COVERAGE, "quotients": []}, out, indent=1)
        out.write("\n")

    curves = []
    lo, hi = EC_COVERAGE
    for p in prime_list(lo, hi + 1):
        for f in factors_by_level.get(p, []):
            if f["dim"] != 1:
                continue
            exps = [r["exponent"] for r in kernels.get(p, {}).get("rows", []) if r["members"] == [f["label"]]]
            if len(exps) != 1 or "analytic_rank" not in f:
                sys.exit("missing modular degree or rank for %s" % f["label"])
            curves.append({"conductor": p, "rank": f["analytic_rank"], "modular_degree": exps[0],
                           "label": "%d.%s" % (p, f["label"].rsplit(".", 1)[1])})

    facts = {
        "gonality": gonality_facts(),
        "plus_cubic_infinite": plus_cubic_facts(),
        "elliptic_curves": curves,
        "elliptic_coverage": {"conductor_min": lo, "conductor_max": hi},
        "certificates": [{
            "level": 197,
            "statement_id": "W60_no_positive_rank_translate",
            "source": "imported: W_6^0(X_0(197)) contains no translate of a positive-rank abelian variety",
        }],
        "known_density": {
            "complete": {str(d): v for d, v in KNOWN_DENSITY.items()},
            "quintic_only": QUINTIC_ONLY,
        },
    }
    with open(os.path.join(outdir, "facts.json"), "w") as out:
        json.dump({"schema_version": SCHEMA_VERSION, "facts": facts}, out, indent=1)
        out.write("\n")


if __name__ == "__main__":
    main()
