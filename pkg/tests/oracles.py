"""Independent cross-check helpers for the test suite.

Everything here is deliberately written from scratch against textbook
definitions (integer Smith normal form, simplicial homology, flat-coloring
counts) so it shares no code with the package internals it checks.
"""

import math
from fractions import Fraction


def smith_diagonal(mat):
    """Diagonal entries of the Smith normal form of an integer matrix.

    Returns (diag, rank). Plain row/column reduction over Z; fine for the
    tiny matrices in these tests.
    """
    a = [list(map(int, row)) for row in mat]
    m = len(a)
    n = len(a[0]) if m else 0
    diag = []
    r = 0
    while r < min(m, n):
        piv = None
        best = None
        for i in range(r, m):
            for j in range(r, n):
                if a[i][j] != 0 and (best is None or abs(a[i][j]) < best):
                    best = abs(a[i][j])
                    piv = (i, j)
        if piv is None:
            break
        i0, j0 = piv
        a[r], a[i0] = a[i0], a[r]
        for row in a:
            row[r], row[j0] = row[j0], row[r]
        stable = False
        while not stable:
            stable = True
            for i in range(r + 1, m):
                if a[i][r] % a[r][r]:
                    q = a[i][r] // a[r][r]
                    for j in range(n):
                        a[i][j] -= q * a[r][j]
                    a[r], a[i] = a[i], a[r]
                    stable = False
            for i in range(r + 1, m):
                q = a[i][r] // a[r][r]
                for j in range(n):
                    a[i][j] -= q * a[r][j]
            for j in range(r + 1, n):
                if a[r][j] % a[r][r]:
                    q = a[r][j] // a[r][r]
                    for i in range(m):
                        a[i][j] -= q * a[i][r]
                    for i in range(m):
                        a[i][r], a[i][j] = a[i][j], a[i][r]
                    stable = False
            for j in range(r + 1, n):
                q = a[r][j] // a[r][r]
                for i in range(m):
                    a[i][j] -= q * a[i][r]
        diag.append(abs(a[r][r]))
        r += 1
    return diag, r


def first_homology(tri):
    """(free rank, invariant factors > 1) of H1 from the chain complex."""
    from doubletop.statesum import EDGE_SLOTS, FACE_CORNERS

    E, F = tri.n_edges, tri.n_faces
    edge_rep = {}
    for t in range(tri.n_tets):
        for (i, j) in EDGE_SLOTS:
            edge_rep.setdefault(tri.edge_class(t, i, j), (t, i, j))
    d1 = [[0] * E for _ in range(tri.n_vertex_classes)]
    for e, (t, i, j) in edge_rep.items():
        d1[tri._vmap[(t, j)]][e] += 1
        d1[tri._vmap[(t, i)]][e] -= 1
    d2 = [[0] * F for _ in range(E)]
    for fc in range(F):
        t, f = tri.face_reps[fc]
        i, j, k = FACE_CORNERS[f]
        d2[tri.edge_class(t, i, j)][fc] += 1
        d2[tri.edge_class(t, j, k)][fc] += 1
        d2[tri.edge_class(t, i, k)][fc] -= 1
    diag2, r2 = smith_diagonal(d2)
    _, r1 = smith_diagonal(d1)
    torsion = sorted(x for x in diag2 if x > 1)
    return E - r1 - r2, torsion


def hom_count_to_cyclic(rank, torsion, nmod):
    """|Hom(A, Z/nmod)| for A = Z^rank + sum Z/t."""
    count = nmod ** rank
    for t in torsion:
        count *= math.gcd(t, nmod)
    return count


def expected_flat_fraction(tri, nmod):
    """|Hom(pi1, Z/nmod)| / nmod via independently computed H1."""
    rank, torsion = first_homology(tri)
    return Fraction(hom_count_to_cyclic(rank, torsion, nmod), nmod)


def dw_plumbing(graph, nmod):
    """|Hom(H1(M), Z/nmod)| / nmod for the plumbed manifold, by brute force.

    H1 of a plumbing on m vertices is presented by the linking matrix B,
    so homomorphisms to Z/n are vectors x in (Z/n)^m with B x = 0 mod n.
    Counts them directly; independent of Smith form and of the package.
    """
    import itertools

    B = graph.linking_matrix()
    m = len(B)
    count = 0
    for x in itertools.product(range(nmod), repeat=m):
        if all(sum(B[i][j] * x[j] for j in range(m)) % nmod == 0
               for i in range(m)):
            count += 1
    return Fraction(count, nmod)


def all_pairings(items):
    if not items:
        yield []
        return
    first = items[0]
    for k in range(1, len(items)):
        rest = items[1:k] + items[k + 1:]
        for sub in all_pairings(rest):
            yield [(first, items[k])] + sub
