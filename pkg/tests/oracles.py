"""Independent reference computations in sympy.

Nothing here imports the engine's linear algebra or sign bookkeeping: cochains
are evaluated as alternating multilinear maps on explicit arguments, bases of
g^{1,0} and E^{1,0} come from sympy eigenvectors, ranks from sympy.
"""

from itertools import combinations, permutations

import sympy as sp
from sympy.combinatorics import Permutation


def to_sympy(x):
    """gmpy2 / engine scalars -> sympy numbers (via their string forms)."""
    re_ = getattr(x, "re", x)
    im_ = getattr(x, "im", 0)
    return sp.Rational(str(re_)) + sp.I * sp.Rational(str(im_))


def structure_tensor(L):
    N = L.dim
    return [[[to_sympy(L.c[i][j][k]) for k in range(N)] for j in range(N)] for i in range(N)]


def bracket(c, u, v):
    N = len(c)
    return [sp.expand(sum(u[i] * v[j] * c[i][j][k] for i in range(N) for j in range(N)
                          if u[i] != 0 and v[j] != 0)) for k in range(N)]


def perm_sign(seq):
    return Permutation([sorted(seq).index(x) for x in seq]).signature()


def eval_monomial(I, args):
    """(e^{i1} ^ ... ^ e^{ik})(v_1, ..., v_k) = det(v_b[i_a])."""
    k = len(I)
    if k == 0:
        return sp.Integer(1)
    return sp.Matrix(k, k, lambda a, b: args[b][I[a]]).det()


def chevalley_matrix(c, rho, k):
    """Matrix of d: Lambda^k g^* (x) W -> Lambda^{k+1} g^* (x) W from the evaluation formula.

    ``rho``: list of sympy matrices (None for the trivial 1-dim module). Columns
    (I, s), rows (K, r), both lexicographic in I then s.
    """
    N = len(c)
    W = 1 if rho is None else rho[0].shape[0]
    src = list(combinations(range(N), k))
    tgt = list(combinations(range(N), k + 1))
    e = [[sp.Integer(int(a == b)) for a in range(N)] for b in range(N)]
    M = sp.zeros(len(tgt) * W, len(src) * W)
    for ci, I in enumerate(src):
        for s in range(W):
            for ri, K in enumerate(tgt):
                args = [e[x] for x in K]
                val = [sp.Integer(0)] * W
                for i in range(k + 1):
                    rest = args[:i] + args[i + 1:]
                    a = eval_monomial(I, rest)
                    if a != 0 and rho is not None:
                        act = rho[K[i]][:, s]
                        for r in range(W):
                            val[r] += (-1) ** i * a * act[r]
                for i in range(k + 1):
                    for j in range(i + 1, k + 1):
                        b = bracket(c, args[i], args[j])
                        rest = [b] + [args[t] for t in range(k + 1) if t not in (i, j)]
                        a = eval_monomial(I, rest)
                        if a != 0:
                            val[s] += (-1) ** (i + j) * a
                for r in range(W):
                    M[ri * W + r, ci * W + s] = sp.nsimplify(sp.expand(val[r]))
    return M


def betti(L):
    c = structure_tensor(L)
    N = L.dim
    ranks = [chevalley_matrix(c, None, k).rank() for k in range(N)] + [0]
    dims = [sp.binomial(N, k) for k in range(N + 1)]
    return [int(dims[k] - ranks[k] - (ranks[k - 1] if k else 0)) for k in range(N + 1)]


def _eigenbasis(M, lam):
    """Column eigenvectors of M for eigenvalue lam, in sympy's own nullspace basis."""
    Msp = sp.Matrix(M)
    return [sp.simplify(v) for v in (Msp - lam * sp.eye(Msp.shape[0])).nullspace()]


def nijenhuis_zero(L, J):
    c = structure_tensor(L)
    N = L.dim
    Jm = sp.Matrix([[to_sympy(x) for x in r] for r in J.J])
    e = [sp.Matrix([int(a == b) for a in range(N)]) for b in range(N)]
    br = lambda u, v: sp.Matrix(bracket(c, list(u), list(v)))
    for i in range(N):
        for j in range(i + 1, N):
            x, y = e[i], e[j]
            val = br(x, y) - br(Jm * x, Jm * y) + Jm * br(Jm * x, y) + Jm * br(x, Jm * y)
            if any(sp.simplify(t) != 0 for t in val):
                return False
    return True


def dolbeault_numbers(L, J, rep=None):
    """h^{p,q}(g, E) from (d_rho alpha) projected to Lambda^{p,q+1} (x) E^{1,0}.

    Works in sympy's eigenbases X (J = i) for g^{1,0} and V (I = i) for E^{1,0};
    the form alpha = omega^P ^ omegabar^Q (x) V_s is evaluated on (X_P', Xbar_Q').
    """
    c = structure_tensor(L)
    N = L.dim
    n = N // 2
    Jm = sp.Matrix([[to_sympy(x) for x in r] for r in J.J])
    X = _eigenbasis(Jm, sp.I)
    Xb = [v.conjugate() for v in X]
    B = sp.Matrix.hstack(*(X + Xb))
    Binv = B.inv()
    # g_C constants in the basis (X, Xbar)
    basis = [list(v) for v in X + Xb]
    cc = [[list(Binv * sp.Matrix(bracket(c, basis[a], basis[b]))) for b in range(N)]
          for a in range(N)]
    if rep is None:
        rho = [sp.zeros(2, 2) for _ in range(N)]
        Im = sp.Matrix([[0, -1], [1, 0]])
    else:
        rho = [sp.Matrix([[to_sympy(x) for x in r] for r in m.to_dense()]) for m in rep.rho]
        Im = sp.Matrix([[to_sympy(x) for x in r] for r in rep.I.J])
    V = _eigenbasis(Im, sp.I)
    m = len(V)
    Vfull = sp.Matrix.hstack(*(V + [v.conjugate() for v in V]))
    Vinv = Vfull.inv()
    # rho of the complex basis vectors, in the (V, Vbar) basis of E_C
    rhoC = []
    for a in range(N):
        Ra = sum((basis[a][t] * rho[t] for t in range(N)), sp.zeros(*rho[0].shape))
        rhoC.append(sp.simplify(Vinv * Ra * Vfull))
    dim = 2 * n
    unit = [[sp.Integer(int(a == b)) for a in range(dim)] for b in range(dim)]

    def form_eval(P, Q, args):
        # (omega^P ^ omegabar^Q)(args), coframe index of Xbar_j is n + j
        return eval_monomial(tuple(P) + tuple(n + j for j in Q), args)

    def dmat(p, q):
        cols = [(P, Q, s) for P in combinations(range(n), p) for Q in combinations(range(n), q)
                for s in range(m)]
        rows = [(P, Q, r) for P in combinations(range(n), p) for Q in combinations(range(n), q + 1)
                for r in range(m)]
        M = sp.zeros(len(rows), len(cols))
        rowpos = {}
        for ri, (P2, Q2, r) in enumerate(rows):
            rowpos.setdefault((P2, Q2), []).append((r, ri))
        for ci, (P, Q, s) in enumerate(cols):
            for (P2, Q2), rr in rowpos.items():
                args = [unit[x] for x in P2] + [unit[n + x] for x in Q2]
                k = len(args)
                val = [sp.Integer(0)] * m
                for i in range(k):
                    rest = args[:i] + args[i + 1:]
                    a = form_eval(P, Q, rest)
                    if a != 0:
                        idx = args[i].index(1)
                        for r in range(m):
                            val[r] += (-1) ** i * a * rhoC[idx][r, s]
                for i in range(k):
                    for j in range(i + 1, k):
                        ia, ja = args[i].index(1), args[j].index(1)
                        b = cc[ia][ja]
                        rest = [b] + [args[t] for t in range(k) if t not in (i, j)]
                        a = form_eval(P, Q, rest)
                        if a != 0:
                            val[s] += (-1) ** (i + j) * a
                for r, ri in rr:
                    M[ri, ci] = sp.nsimplify(sp.expand(val[r]))
        return M

    h = {}
    for p in range(n + 1):
        ranks = [dmat(p, q).rank(simplify=True) for q in range(n)] + [0]
        for q in range(n + 1):
            dpq = sp.binomial(n, p) * sp.binomial(n, q) * m
            h[(p, q)] = int(dpq - ranks[q] - (ranks[q - 1] if q else 0))
    return h
