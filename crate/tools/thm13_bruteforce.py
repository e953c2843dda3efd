"""Count primes whose J_0(p) splits as A+ (+) A- (+) A with A+ simple in the
plus part, A- simple in the minus part and dim A <= 2, by trying every pair of
factors (no greedy shortcut). A sign without factors contributes nothing.

Usage: python3 thm13_bruteforce.py newforms.jsonl BOUND
Prints {"bound", "count", "total"} as JSON.
"""
import itertools
import json
import sys


def satisfies(factors):
    total = sum(f["dim"] for f in factors)
    plus = [f["dim"] for f in factors if f["fricke"] == 1] or [0]
    minus = [f["dim"] for f in factors if f["fricke"] == -1] or [0]
    return any(total - a - b <= 2 for a, b in itertools.product(plus, minus))


def main():
    path, bound = sys.argv[1], int(sys.argv[2])
    count = total = 0
    with open(path) as fh:
        for line in fh:
            if not line.strip():
                continue
            rec = json.loads(line)
            if rec["level"] >= bound:
                continue
            total += 1
            count += satisfies(rec["factors"])
    print(json.dumps({"bound": bound, "count": count, "total": total}))


if __name__ == "__main__":
    main()
