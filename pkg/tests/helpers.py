"""Independent reference implementations the tests check the package against.

Deliberately written in the most literal way possible, sharing no code with
the package: plain neighbor scans and exhaustive enumeration.
"""

import itertools


def oracle_marks(seq, d):
    """Literal extremum rule: strictly above (below) every value within
    ceil(d/2) positions on each side, window cut at the edges."""
    half = (d + 1) // 2
    out = []
    for x in range(len(seq)):
        lo = max(0, x - half)
        hi = min(len(seq) - 1, x + half)
        neighbors = [seq[k] for k in range(lo, hi + 1) if k != x]
        if neighbors and all(seq[x] > v for v in neighbors):
            out.append(1)
        elif neighbors and all(seq[x] < v for v in neighbors):
            out.append(-1)
        else:
            out.append(0)
    return out


def brute_force_lsap(weights):
    """All injective row->column maps by enumeration; returns the optimal
    objective and every optimal positive-weight pair set."""
    rows = sorted({r for r, _ in weights})
    cols = sorted({c for _, c in weights})
    n = max(len(rows), len(cols))
    padded = cols + [("__pad__", k) for k in range(n - len(cols))]
    best_obj = None
    best_sets = []
    for combo in itertools.permutations(padded, len(rows)):
        obj = 0.0
        for r, c in zip(rows, combo):
            obj += weights.get((r, c), 0.0)
        pairs = frozenset(
            (r, c) for r, c in zip(rows, combo) if weights.get((r, c), 0.0) > 0
        )
        if best_obj is None or obj > best_obj:
            best_obj, best_sets = obj, [pairs]
        elif obj == best_obj and pairs not in best_sets:
            best_sets.append(pairs)
    return best_obj, best_sets


def lex_smallest(pair_sets):
    return min(pair_sets, key=lambda s: sorted(s))


def strict_interior_maxima(values):
    """Count of samples strictly above both immediate neighbors."""
    return sum(
        1
        for i in range(1, len(values) - 1)
        if values[i] > values[i - 1] and values[i] > values[i + 1]
    )
