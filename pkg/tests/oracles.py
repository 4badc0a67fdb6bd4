"""Independent reference implementations used only to check the library.

Each oracle deliberately takes a different algorithmic route from the code it
verifies: elimination instead of LAPACK solves, proximal gradient instead of
coordinate descent, zoomed grid enumeration instead of any gradient method,
power iteration instead of full SVD, bisection instead of companion-matrix
roots.  Keep them dumb and obviously correct.
"""

from __future__ import annotations

import numpy as np


def gauss_solve(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Dense solve by Gaussian elimination with partial pivoting."""
    a = np.array(a, dtype=np.float64, copy=True)
    b = np.array(b, dtype=np.float64, copy=True)
    n = a.shape[0]
    for col in range(n):
        pivot = col + int(np.argmax(np.abs(a[col:, col])))
        if a[pivot, col] == 0.0:
            raise ZeroDivisionError("singular matrix")
        if pivot != col:
            a[[col, pivot]] = a[[pivot, col]]
            b[[col, pivot]] = b[[pivot, col]]
        for row in range(col + 1, n):
            factor = a[row, col] / a[col, col]
            a[row, col:] -= factor * a[col, col:]
            b[row] -= factor * b[col]
    x = np.zeros(n)
    for row in range(n - 1, -1, -1):
        x[row] = (b[row] - a[row, row + 1 :] @ x[row + 1 :]) / a[row, row]
    return x


def weighted_l1_objective(gram, cross, y_sq, weights, lam, beta) -> float:
    beta = np.asarray(beta, dtype=np.float64)
    return (
        float(y_sq)
        - 2.0 * float(beta @ cross)
        + float(beta @ gram @ beta)
        + float(lam) * float(weights @ np.abs(beta))
    )


def fista_weighted_lasso(
    gram,
    cross,
    y_sq,
    weights,
    lam,
    max_iters: int = 100_000,
    fp_tol: float = 1e-13,
) -> np.ndarray:
    """Proximal gradient with Nesterov momentum and function-value restart.

    Minimizes ``y_sq - 2 c.b + b.G.b + lam * sum w|b|``; the smooth part has
    gradient ``2 (G b - c)`` and Lipschitz constant ``2 lambda_max(G)``.
    Stops when the plain proximal-gradient step taken from the current
    iterate moves it by at most ``fp_tol * (1 + |beta|_inf)`` (a fixed-point
    residual, hence a genuine optimality certificate for convex problems).
    """
    gram = np.asarray(gram, dtype=np.float64)
    cross = np.asarray(cross, dtype=np.float64)
    weights = np.asarray(weights, dtype=np.float64)
    r = cross.shape[0]
    lip = 2.0 * float(np.linalg.eigvalsh(gram)[-1])
    if lip <= 0.0:
        return np.zeros(r)
    step = 1.0 / lip
    thresh = step * lam * weights

    def prox_step(point: np.ndarray) -> np.ndarray:
        z = point - step * 2.0 * (gram @ point - cross)
        return np.sign(z) * np.maximum(np.abs(z) - thresh, 0.0)

    beta = np.zeros(r)
    momentum = beta.copy()
    t = 1.0
    best = weighted_l1_objective(gram, cross, y_sq, weights, lam, beta)
    stagnant_restarts = 0
    for _ in range(max_iters):
        new = prox_step(momentum)
        obj = weighted_l1_objective(gram, cross, y_sq, weights, lam, new)
        if obj > best:
            # restart; a second consecutive restart from the same point means
            # the iterate is a fixed point up to float noise
            stagnant_restarts += 1
            if stagnant_restarts >= 2:
                break
            momentum = beta.copy()
            t = 1.0
            continue
        stagnant_restarts = 0
        t_next = 0.5 * (1.0 + np.sqrt(1.0 + 4.0 * t * t))
        momentum = new + ((t - 1.0) / t_next) * (new - beta)
        t = t_next
        moved = float(np.max(np.abs(new - beta)))
        beta = new
        best = obj
        if moved <= fp_tol * (1.0 + float(np.max(np.abs(beta)))):
            candidate = prox_step(beta)
            if float(np.max(np.abs(candidate - beta))) <= 10.0 * fp_tol * (
                1.0 + float(np.max(np.abs(beta)))
            ):
                break
    return prox_step(beta)


def zoom_grid_minimize(
    gram,
    cross,
    y_sq,
    weights,
    lam,
    lo: float = -3.0,
    hi: float = 3.0,
    resolution: float = 1e-3,
    points_per_axis: int = 21,
):
    """Grid search refined around the incumbent until cells reach ``resolution``.

    Valid as a global search because the objective is convex: the minimizer
    over the box is always inside the refined sub-box around the best grid
    point.  Returns ``(beta, objective, final_cell)``.
    """
    gram = np.asarray(gram, dtype=np.float64)
    cross = np.asarray(cross, dtype=np.float64)
    weights = np.asarray(weights, dtype=np.float64)
    r = cross.shape[0]
    lower = np.full(r, float(lo))
    upper = np.full(r, float(hi))
    best_beta = np.zeros(r)
    cell = (hi - lo) / (points_per_axis - 1)
    while True:
        axes = [np.linspace(lower[i], upper[i], points_per_axis) for i in range(r)]
        mesh = np.meshgrid(*axes, indexing="ij")
        pts = np.stack([m.ravel() for m in mesh], axis=1)  # (points, r)
        quad = np.einsum("pi,ij,pj->p", pts, gram, pts)
        obj = y_sq - 2.0 * pts @ cross + quad + lam * (np.abs(pts) @ weights)
        idx = int(np.argmin(obj))
        best_beta = pts[idx]
        cell = (upper[0] - lower[0]) / (points_per_axis - 1)
        if cell <= resolution:
            return best_beta, float(obj[idx]), cell
        half = 1.5 * cell
        lower = best_beta - half
        upper = best_beta + half


def power_iteration_rank1(m: np.ndarray, iters: int = 500):
    """Dominant singular triple of a small matrix by alternating power steps."""
    m = np.asarray(m, dtype=np.float64)
    rng = np.random.default_rng(12345)
    v = rng.normal(size=m.shape[1])
    v /= np.linalg.norm(v)
    sigma = 0.0
    for _ in range(iters):
        u = m @ v
        nu = np.linalg.norm(u)
        if nu == 0.0:
            return np.zeros(m.shape[0]), 0.0, v
        u /= nu
        v = m.T @ u
        sigma = np.linalg.norm(v)
        if sigma == 0.0:
            return u, 0.0, np.zeros(m.shape[1])
        v /= sigma
    return u, float(sigma), v


def bisection_root(func, lo: float, hi: float, iters: int = 200) -> float:
    """Root of a scalar function on a sign-changing bracket."""
    flo = func(lo)
    fhi = func(hi)
    if flo == 0.0:
        return lo
    if fhi == 0.0:
        return hi
    if flo * fhi > 0.0:
        raise ValueError("bracket does not change sign")
    for _ in range(iters):
        mid = 0.5 * (lo + hi)
        fmid = func(mid)
        if fmid == 0.0:
            return mid
        if flo * fmid < 0.0:
            hi = mid
        else:
            lo, flo = mid, fmid
    return 0.5 * (lo + hi)
