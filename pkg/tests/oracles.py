"""Slow, loop-based reference computations used as independent checks.

Nothing here imports tribox internals beyond the probability layout
``P[i, j, k, m, n, o]``.
"""
import itertools

import numpy as np

B = (0, 1)


def correlator(P, parties, settings):
    """<X Y ...> by summing (-1)^(sum of outputs) over the full table."""
    tot = 0.0
    for i, j, k, m, n, o in itertools.product(B, repeat=6):
        x = (i, j, k)
        if any(x[p] != s for p, s in zip(parties, settings)):
            continue
        out = (m, n, o)
        sign = (-1) ** sum(out[p] for p in parties)
        # the setting of an absent party is fixed to 0 to read one marginal
        if any(x[p] != 0 for p in range(3) if p not in parties):
            continue
        tot += sign * P[i, j, k, m, n, o]
    return tot


def triple(P, i, j, k):
    return correlator(P, (0, 1, 2), (i, j, k))


def svetlichny(P, a, b, g, e):
    return sum((-1) ** ((i * j) ^ (i * k) ^ (j * k) ^ (a * i) ^ (b * j) ^ (g * k) ^ e) * triple(P, i, j, k)
               for i, j, k in itertools.product(B, repeat=3))


def mermin(P, a, b, g, e):
    t = lambda i, j, k: triple(P, i, j, k)
    if (a ^ b ^ g) == 0:
        return ((-1) ** (g ^ e) * t(0, 0, 1) + (-1) ** (b ^ e) * t(0, 1, 0)
                + (-1) ** (a ^ e) * t(1, 0, 0) + (-1) ** (a ^ b ^ g ^ e ^ 1) * t(1, 1, 1))
    return ((-1) ** (a ^ b ^ e ^ 1) * t(1, 1, 0) + (-1) ** (a ^ g ^ e ^ 1) * t(1, 0, 1)
            + (-1) ** (b ^ g ^ e ^ 1) * t(0, 1, 1) + (-1) ** e * t(0, 0, 0))


def table(rule, weight):
    P = np.zeros((2,) * 6)
    for i, j, k, m, n, o in itertools.product(B, repeat=6):
        if rule(i, j, k, m, n, o):
            P[i, j, k, m, n, o] = weight
    return P


def det_box(a, b, g, e, z, h):
    return table(lambda i, j, k, m, n, o: m == (a * i) ^ b and n == (g * j) ^ e and o == (z * k) ^ h, 1.0)


def svetlichny_box(a, b, g, e):
    return table(lambda i, j, k, m, n, o: (m ^ n ^ o) == (i * j) ^ (i * k) ^ (j * k) ^ (a * i) ^ (b * j) ^ (g * k) ^ e,
                 0.25)


def pr12(a, b, g, e, h=0):
    return table(lambda i, j, k, m, n, o: (m ^ n) == (i * j) ^ (a * i) ^ (b * j) ^ g and o == (e * k) ^ h, 0.5)


def moduli(P, fn):
    return np.array([abs(fn(P, a, b, g, 0)) for a, b, g in itertools.product(B, repeat=3)])


# -- nested differences over all pairings ------------------------------------

def _pairings(items):
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for n, other in enumerate(rest):
        for tail in _pairings(rest[:n] + rest[n + 1:]):
            yield [(first, other)] + tail


def all_nestings():
    """Every balanced nesting ||x0-x1|-|x2-x3|| - ||x4-x5|-|x6-x7|| up to symmetry (315)."""
    out = []
    for level1 in _pairings(list(range(8))):
        for level2 in _pairings(list(range(4))):
            (p, q), (r, s) = level2
            # level3 is forced; fix the outer order by putting the smallest label first
            order = [level1[p], level1[q], level1[r], level1[s]]
            out.append(tuple(x for pair in order for x in pair))
    return sorted({canonical_nesting(o) for o in out})


def nested(v, nesting):
    (a, b), (c, d) = nesting
    return abs(abs(abs(v[a[0]] - v[a[1]]) - abs(v[b[0]] - v[b[1]]))
               - abs(abs(v[c[0]] - v[c[1]]) - abs(v[d[0]] - v[d[1]])))


# -- Born rule ------------------------------------------------------------------

PAULI = np.array([[[0, 1], [1, 0]], [[0, -1j], [1j, 0]], [[1, 0], [0, -1]]])


def projector(n, sign):
    op = np.tensordot(np.asarray(n, dtype=float), PAULI, axes=1)
    return (np.eye(2) + sign * op) / 2


def born(rho, dirs):
    """P[i,j,k,m,n,o] = tr(rho · Π_A ⊗ Π_B ⊗ Π_C) with plain kron products."""
    P = np.zeros((2,) * 6)
    for i, j, k, m, n, o in itertools.product(B, repeat=6):
        op = np.kron(np.kron(projector(dirs[0][i], (-1) ** m), projector(dirs[1][j], (-1) ** n)),
                     projector(dirs[2][k], (-1) ** o))
        P[i, j, k, m, n, o] = np.real(np.trace(rho @ op))
    return P


# -- LP -------------------------------------------------------------------------

def scipy_feasible(vertex_probs, target):
    from scipy.optimize import linprog

    V = np.asarray(vertex_probs)
    A = np.vstack([V.T, np.ones(len(V))])
    b = np.concatenate([np.asarray(target).ravel(), [1.0]])
    res = linprog(np.zeros(len(V)), A_eq=A, b_eq=b, bounds=(0, None), method="highs")
    return res.status == 0


def canonical_nesting(order):
    h1 = tuple(sorted([tuple(sorted(order[0:2])), tuple(sorted(order[2:4]))]))
    h2 = tuple(sorted([tuple(sorted(order[4:6])), tuple(sorted(order[6:8]))]))
    return tuple(sorted([h1, h2]))


def coset_flag_nestings():
    """Nestings whose inner pairs are cosets of a coordinate axis {0, e} and
    whose halves are cosets of a plane containing it, in labels 4α+2β+γ."""
    out = set()
    for e in (1, 2, 4):
        for t in range(1, 8):
            if t == e:
                continue
            plane = {0, e, t, e ^ t}
            halves = []
            for start in range(8):
                coset = sorted({start ^ h for h in plane})
                if coset not in halves:
                    halves.append(coset)
            order = []
            for h in halves:
                lo = h[0]
                order += [lo, lo ^ e, lo ^ t, lo ^ t ^ e]
            out.add(canonical_nesting(order))
    return out


def three_tangle(psi):
    """Cayley hyperdeterminant form of the three-tangle, 4|d1 - 2 d2 + 4 d3|."""
    a = np.asarray(psi, dtype=complex).reshape(2, 2, 2)
    d1 = (a[0, 0, 0] ** 2 * a[1, 1, 1] ** 2 + a[0, 0, 1] ** 2 * a[1, 1, 0] ** 2
          + a[0, 1, 0] ** 2 * a[1, 0, 1] ** 2 + a[1, 0, 0] ** 2 * a[0, 1, 1] ** 2)
    d2 = (a[0, 0, 0] * a[1, 1, 1] * a[0, 1, 1] * a[1, 0, 0] + a[0, 0, 0] * a[1, 1, 1] * a[1, 0, 1] * a[0, 1, 0]
          + a[0, 0, 0] * a[1, 1, 1] * a[1, 1, 0] * a[0, 0, 1] + a[0, 1, 1] * a[1, 0, 0] * a[1, 0, 1] * a[0, 1, 0]
          + a[0, 1, 1] * a[1, 0, 0] * a[1, 1, 0] * a[0, 0, 1] + a[1, 0, 1] * a[0, 1, 0] * a[1, 1, 0] * a[0, 0, 1])
    d3 = (a[0, 0, 0] * a[1, 1, 0] * a[1, 0, 1] * a[0, 1, 1] + a[1, 1, 1] * a[0, 0, 1] * a[0, 1, 0] * a[1, 0, 0])
    return float(4 * abs(d1 - 2 * d2 + 4 * d3))


def wootters(rho2):
    yy = np.kron(PAULI[1], PAULI[1])
    r = rho2 @ yy @ rho2.conj() @ yy
    lam = np.sqrt(np.clip(np.sort(np.linalg.eigvals(r).real)[::-1], 0, None))
    return float(max(0.0, lam[0] - lam[1] - lam[2] - lam[3]))
