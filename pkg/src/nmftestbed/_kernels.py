"""Numba inner loops for the factorization algorithms.

All kernels use explicit scalar loops with a fixed summation order, so
results are bit-reproducible across processes and platforms regardless of
BLAS configuration or thread count.  Factor arguments are updated in place;
the target matrix is never written.
"""

import numpy as np
from numba import njit


@njit(cache=True)
def mu_iterate(A, W, H, iters, delta):
    """Multiplicative updates for min ||A - WH||_F: H then W, per iteration.

    delta is an additive guard in the denominators only.
    """
    m, k = W.shape
    n = H.shape[1]
    WtW = np.empty((k, k))
    WtA = np.empty((k, n))
    denH = np.empty((k, n))
    HHt = np.empty((k, k))
    AHt = np.empty((m, k))
    denW = np.empty((m, k))
    for _ in range(iters):
        for a in range(k):
            for b in range(k):
                s = 0.0
                for c in range(m):
                    s += W[c, a] * W[c, b]
                WtW[a, b] = s
        for a in range(k):
            for b in range(n):
                s = 0.0
                for c in range(m):
                    s += W[c, a] * A[c, b]
                WtA[a, b] = s
        for a in range(k):
            for b in range(n):
                s = 0.0
                for c in range(k):
                    s += WtW[a, c] * H[c, b]
                denH[a, b] = s
        for a in range(k):
            for b in range(n):
                H[a, b] = H[a, b] * WtA[a, b] / (denH[a, b] + delta)
        for a in range(k):
            for b in range(k):
                s = 0.0
                for c in range(n):
                    s += H[a, c] * H[b, c]
                HHt[a, b] = s
        for a in range(m):
            for b in range(k):
                s = 0.0
                for c in range(n):
                    s += A[a, c] * H[b, c]
                AHt[a, b] = s
        for a in range(m):
            for b in range(k):
                s = 0.0
                for c in range(k):
                    s += W[a, c] * HHt[c, b]
                denW[a, b] = s
        for a in range(m):
            for b in range(k):
                W[a, b] = W[a, b] * AHt[a, b] / (denW[a, b] + delta)


@njit(cache=True)
def chol_solve(G, B, lam):
    """Solve G X = B for symmetric positive semidefinite G.

    Plain Cholesky first; on a failed pivot the diagonal is loaded with an
    escalating multiple of lam * max(diag G) until the factorization
    succeeds, so rank-deficient systems never abort.
    """
    k = G.shape[0]
    L = np.zeros((k, k))
    maxd = 0.0
    for i in range(k):
        if G[i, i] > maxd:
            maxd = G[i, i]
    tol = 1e-13 * maxd
    reg = 0.0
    for _ in range(40):
        ok = True
        for i in range(k):
            for j in range(i + 1):
                s = G[i, j]
                if i == j:
                    s += reg
                for c in range(j):
                    s -= L[i, c] * L[j, c]
                if i == j:
                    if not (s > tol):
                        ok = False
                        break
                    L[i, i] = np.sqrt(s)
                else:
                    L[i, j] = s / L[j, j]
            if not ok:
                break
        if ok:
            break
        if reg == 0.0:
            reg = lam * maxd if maxd > 0.0 else lam
        else:
            reg *= 100.0
    n = B.shape[1]
    X = np.empty((k, n))
    y = np.empty(k)
    for col in range(n):
        for i in range(k):
            s = B[i, col]
            for c in range(i):
                s -= L[i, c] * y[c]
            y[i] = s / L[i, i]
        for i in range(k - 1, -1, -1):
            s = y[i]
            for c in range(i + 1, k):
                s -= L[c, i] * X[c, col]
            X[i, col] = s / L[i, i]
    return X


@njit(cache=True)
def als_iterate(A, W, H, iters, lam):
    """Alternating least squares with clamping: H-solve then W-solve.

    Each factor is the normal-equations least-squares solution for the other
    factor held fixed, with negative entries clamped to exactly 0.
    """
    m, k = W.shape
    n = H.shape[1]
    G = np.empty((k, k))
    B = np.empty((k, n))
    G2 = np.empty((k, k))
    B2 = np.empty((k, m))
    for _ in range(iters):
        for a in range(k):
            for b in range(k):
                s = 0.0
                for c in range(m):
                    s += W[c, a] * W[c, b]
                G[a, b] = s
        for a in range(k):
            for b in range(n):
                s = 0.0
                for c in range(m):
                    s += W[c, a] * A[c, b]
                B[a, b] = s
        X = chol_solve(G, B, lam)
        for a in range(k):
            for b in range(n):
                H[a, b] = X[a, b] if X[a, b] > 0.0 else 0.0
        for a in range(k):
            for b in range(k):
                s = 0.0
                for c in range(n):
                    s += H[a, c] * H[b, c]
                G2[a, b] = s
        for a in range(k):
            for b in range(m):
                s = 0.0
                for c in range(n):
                    s += H[a, c] * A[b, c]
                B2[a, b] = s
        X2 = chol_solve(G2, B2, lam)
        for a in range(m):
            for b in range(k):
                W[a, b] = X2[b, a] if X2[b, a] > 0.0 else 0.0


@njit(cache=True)
def pg_block(Q, R, X, inner, sigma, shrink, max_back):
    """Projected-gradient steps on min_{X>=0} 0.5<X, Q X> - <R, X>.

    This is the X-subproblem of the factorization with the other factor
    fixed (Q the Gram matrix, R the cross product).  The initial step is
    1/||Q||_F (a Lipschitz bound), halved under an Armijo sufficient-decrease
    test.  Stops early when a step cannot be accepted or no entry moves.
    """
    k, n = X.shape
    qnorm = 0.0
    for a in range(k):
        for b in range(k):
            qnorm += Q[a, b] * Q[a, b]
    L = np.sqrt(qnorm)
    step0 = 1.0 / L if L > 0.0 else 1.0
    G = np.empty((k, n))
    for _ in range(inner):
        f = 0.0
        for a in range(k):
            for b in range(n):
                s = 0.0
                for c in range(k):
                    s += Q[a, c] * X[c, b]
                G[a, b] = s - R[a, b]
                f += 0.5 * X[a, b] * s - X[a, b] * R[a, b]
        step = step0
        accepted = False
        moved = False
        for _ in range(max_back):
            Xn = np.empty((k, n))
            dec = 0.0
            for a in range(k):
                for b in range(n):
                    v = X[a, b] - step * G[a, b]
                    if v < 0.0:
                        v = 0.0
                    Xn[a, b] = v
                    dec += G[a, b] * (v - X[a, b])
            fn = 0.0
            for a in range(k):
                for b in range(n):
                    s = 0.0
                    for c in range(k):
                        s += Q[a, c] * Xn[c, b]
                    fn += 0.5 * Xn[a, b] * s - Xn[a, b] * R[a, b]
            if fn <= f + sigma * dec:
                for a in range(k):
                    for b in range(n):
                        if Xn[a, b] != X[a, b]:
                            moved = True
                        X[a, b] = Xn[a, b]
                accepted = True
                break
            step *= shrink
        if not accepted or not moved:
            break


@njit(cache=True)
def pgd_iterate(A, W, H, iters, inner, sigma, shrink, max_back):
    """Alternating projected gradient: H block then W block per iteration.

    Each block takes up to ``inner`` Armijo-backtracked projected-gradient
    steps on its nonnegative least-squares subproblem.
    """
    m, k = W.shape
    n = H.shape[1]
    Q = np.empty((k, k))
    R = np.empty((k, n))
    Q2 = np.empty((k, k))
    R2 = np.empty((k, m))
    Wt = np.empty((k, m))
    for _ in range(iters):
        for a in range(k):
            for b in range(k):
                s = 0.0
                for c in range(m):
                    s += W[c, a] * W[c, b]
                Q[a, b] = s
        for a in range(k):
            for b in range(n):
                s = 0.0
                for c in range(m):
                    s += W[c, a] * A[c, b]
                R[a, b] = s
        pg_block(Q, R, H, inner, sigma, shrink, max_back)
        for a in range(k):
            for b in range(k):
                s = 0.0
                for c in range(n):
                    s += H[a, c] * H[b, c]
                Q2[a, b] = s
        for a in range(k):
            for b in range(m):
                s = 0.0
                for c in range(n):
                    s += H[a, c] * A[b, c]
                R2[a, b] = s
        for a in range(k):
            for b in range(m):
                Wt[a, b] = W[b, a]
        pg_block(Q2, R2, Wt, inner, sigma, shrink, max_back)
        for a in range(m):
            for b in range(k):
                W[a, b] = Wt[b, a]


@njit(cache=True)
def pgd_fixed_step(A, W, H, step):
    """One simultaneous projected-gradient step of fixed size on both factors.

    W <- max(0, W - step * (WH - A) H^T), H <- max(0, H - step * W^T (WH - A)),
    both gradients evaluated at the incoming (W, H).
    """
    m, k = W.shape
    n = H.shape[1]
    R = np.empty((m, n))
    for a in range(m):
        for b in range(n):
            s = 0.0
            for c in range(k):
                s += W[a, c] * H[c, b]
            R[a, b] = s - A[a, b]
    GW = np.empty((m, k))
    GH = np.empty((k, n))
    for a in range(m):
        for b in range(k):
            s = 0.0
            for c in range(n):
                s += R[a, c] * H[b, c]
            GW[a, b] = s
    for a in range(k):
        for b in range(n):
            s = 0.0
            for c in range(m):
                s += W[c, a] * R[c, b]
            GH[a, b] = s
    for a in range(m):
        for b in range(k):
            v = W[a, b] - step * GW[a, b]
            W[a, b] = v if v > 0.0 else 0.0
    for a in range(k):
        for b in range(n):
            v = H[a, b] - step * GH[a, b]
            H[a, b] = v if v > 0.0 else 0.0
