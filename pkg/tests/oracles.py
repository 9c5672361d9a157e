"""Slow, loop-based reference implementations used as test oracles.

Nothing here imports the package; every formula is re-derived from its
textbook definition with plain Python loops.
"""

import math


# --- scalarisation and ranking -------------------------------------------------


def asf(f, w, z):
    return max(abs(fi - zi) / wi for fi, wi, zi in zip(f, w, z))


def r2(points, weights, z):
    total = 0.0
    for w in weights:
        total += min(asf(p, w, z) for p in points)
    return total / len(weights)


def l2(f):
    return math.sqrt(sum(v * v for v in f))


def ranks(f, weights, z_star, z_nad):
    """1 + best position over weights; a position counts strictly smaller (ASF, L2) keys."""
    n = len(f)
    norms = [l2(row) for row in f]
    fn = [
        [(row[k] - z_star[k]) / max(z_nad[k] - z_star[k], 1e-12) for k in range(len(row))]
        for row in f
    ]
    zero = [0.0] * len(z_star)
    best = [n] * n
    for w in weights:
        keys = [(asf(fn[i], w, zero), norms[i]) for i in range(n)]
        for i in range(n):
            pos = sum(1 for j in range(n) if keys[j] < keys[i])
            best[i] = min(best[i], pos)
    return [b + 1 for b in best]


def ranked_order(f, weights, z_star, z_nad):
    """(indices sorted by (rank, l2) with stable ties, ranks)."""
    r = ranks(f, weights, z_star, z_nad)
    norms = [l2(row) for row in f]
    order = sorted(range(len(f)), key=lambda i: (r[i], norms[i]))
    return order, r


# --- metrics -------------------------------------------------------------------


def igd(solutions, reference):
    total = 0.0
    for r in reference:
        total += min(math.dist(r, p) for p in solutions)
    return total / len(reference)


def spacing(solutions):
    n = len(solutions)
    d = []
    for i in range(n):
        d.append(min(math.dist(solutions[i], solutions[j]) for j in range(n) if j != i))
    dm = sum(d) / n
    return math.sqrt(sum((di - dm) ** 2 for di in d)) / (n * dm)


def friedman(table):
    """Rank-sum Friedman statistic with mid-ranks, no tie correction."""
    n, k = len(table), len(table[0])
    sums = [0.0] * k
    for row in table:
        for j, v in enumerate(row):
            below = sum(1 for u in row if u < v)
            equal = sum(1 for u in row if u == v)
            sums[j] += below + (equal + 1) / 2.0
    return 12.0 / (n * k * (k + 1)) * sum(s * s for s in sums) - 3.0 * n * (k + 1)


# --- CEC 2009 unconstrained problems (scalar transcription) ----------------------


def _split2(n):
    j1 = [j for j in range(2, n + 1) if j % 2 == 1]
    j2 = [j for j in range(2, n + 1) if j % 2 == 0]
    return j1, j2


def _split3(n):
    j1 = [j for j in range(3, n + 1) if (j - 1) % 3 == 0]
    j2 = [j for j in range(3, n + 1) if (j - 2) % 3 == 0]
    j3 = [j for j in range(3, n + 1) if j % 3 == 0]
    return j1, j2, j3


def uf(name, x):
    """Objective vector of UFk at one point ``x`` (list of floats, x[0] is x1)."""
    n = len(x)
    x1 = x[0]
    pi = math.pi

    def y_sine(j):
        return x[j - 1] - math.sin(6 * pi * x1 + j * pi / n)

    if name in ("UF1", "UF2", "UF3", "UF4", "UF5", "UF6", "UF7"):
        j1, j2 = _split2(n)
        if name == "UF2":

            def y(j):
                amp = 0.3 * x1 * x1 * math.cos(24 * pi * x1 + 4 * j * pi / n) + 0.6 * x1
                trig = math.cos if j % 2 == 1 else math.sin
                return x[j - 1] - amp * trig(6 * pi * x1 + j * pi / n)

        elif name == "UF3":

            def y(j):
                return x[j - 1] - x1 ** (0.5 * (1 + 3 * (j - 2) / (n - 2)))

        else:
            y = y_sine

        if name in ("UF1", "UF2", "UF7"):

            def g(js):
                return 2.0 / len(js) * sum(y(j) ** 2 for j in js)

        elif name in ("UF3", "UF6"):

            def g(js):
                s = sum(y(j) ** 2 for j in js)
                p = 1.0
                for j in js:
                    p *= math.cos(20 * y(j) * pi / math.sqrt(j))
                return 2.0 / len(js) * (4 * s - 2 * p + 2)

        elif name == "UF4":

            def g(js):
                return 2.0 / len(js) * sum(abs(y(j)) / (1 + math.exp(2 * abs(y(j)))) for j in js)

        else:  # UF5

            def g(js):
                return 2.0 / len(js) * sum(2 * y(j) ** 2 - math.cos(4 * pi * y(j)) + 1 for j in js)

        if name in ("UF1", "UF2", "UF3"):
            return [x1 + g(j1), 1 - math.sqrt(x1) + g(j2)]
        if name == "UF4":
            return [x1 + g(j1), 1 - x1 * x1 + g(j2)]
        if name == "UF5":
            big_n, eps = 10, 0.1
            ripple = (1 / (2 * big_n) + eps) * abs(math.sin(2 * big_n * pi * x1))
            return [x1 + ripple + g(j1), 1 - x1 + ripple + g(j2)]
        if name == "UF6":
            big_n, eps = 2, 0.1
            ripple = max(0.0, 2 * (1 / (2 * big_n) + eps) * math.sin(2 * big_n * pi * x1))
            return [x1 + ripple + g(j1), 1 - x1 + ripple + g(j2)]
        root = x1**0.2
        return [root + g(j1), 1 - root + g(j2)]

    x2 = x[1]
    j1, j2, j3 = _split3(n)

    def y3(j):
        return x[j - 1] - 2 * x2 * math.sin(2 * pi * x1 + j * pi / n)

    if name == "UF10":

        def g3(js):
            return 2.0 / len(js) * sum(4 * y3(j) ** 2 - math.cos(8 * pi * y3(j)) + 1 for j in js)

    else:

        def g3(js):
            return 2.0 / len(js) * sum(y3(j) ** 2 for j in js)

    if name == "UF9":
        eps = 0.1
        bump = max(0.0, (1 + eps) * (1 - 4 * (2 * x1 - 1) ** 2))
        return [
            0.5 * (bump + 2 * x1) * x2 + g3(j1),
            0.5 * (bump - 2 * x1 + 2) * x2 + g3(j2),
            1 - x2 + g3(j3),
        ]
    a, b = 0.5 * pi * x1, 0.5 * pi * x2
    return [
        math.cos(a) * math.cos(b) + g3(j1),
        math.cos(a) * math.sin(b) + g3(j2),
        math.sin(a) + g3(j3),
    ]


# --- dense network --------------------------------------------------------------


def mlp(weights, biases, state):
    """Forward pass with ReLU hidden layers; weights[l][i][j] maps input i to unit j."""
    a = list(state)
    for layer, (w, b) in enumerate(zip(weights, biases)):
        z = [b[j] + sum(a[i] * w[i][j] for i in range(len(a))) for j in range(len(b))]
        a = z if layer == len(weights) - 1 else [max(0.0, v) for v in z]
    return a


def quartiles(values):
    """Q1, Q2, Q3 by linear interpolation at q*(N-1) of the sorted values."""
    v = sorted(values)
    out = []
    for q in (0.25, 0.5, 0.75):
        pos = q * (len(v) - 1)
        lo = math.floor(pos)
        hi = min(lo + 1, len(v) - 1)
        out.append(v[lo] + (pos - lo) * (v[hi] - v[lo]))
    return out
