"""
Coordinate-chart curvature used as an independent check of the frame and
log-grid curvature code.

Christoffel symbols come from fourth-order central differences of the metric
components, and the Ricci tensor from central differences of the Christoffel
symbols, so nothing here shares code with the package.
"""

import numpy as np

INNER_STEP = 1e-4
OUTER_STEP = 1e-3


def _central(fn, x, axis, h):
    e = np.zeros_like(x)
    e[axis] = h
    return (fn(x - 2 * e) - 8 * fn(x - e) + 8 * fn(x + e) - fn(x + 2 * e)) / (12 * h)


def christoffel(metric_fn, x, h=INNER_STEP):
    """Γ[a, i, j] = Γ^a_ij at the point x."""
    x = np.asarray(x, dtype=float)
    dim = x.size
    g_inv = np.linalg.inv(metric_fn(x))
    dg = np.array([_central(metric_fn, x, k, h) for k in range(dim)])  # dg[k, i, j] = ∂_k g_ij
    lowered = 0.5 * (np.einsum('ilj->lij', dg) + np.einsum('jli->lij', dg) - np.einsum('lij->lij', dg))
    return np.einsum('al,lij->aij', g_inv, lowered)


def ricci_tensor(metric_fn, x, h_outer=OUTER_STEP, h_inner=INNER_STEP):
    """R_ij = ∂_a Γ^a_ij - ∂_j Γ^a_ia + Γ^a_ab Γ^b_ij - Γ^a_jb Γ^b_ia."""
    x = np.asarray(x, dtype=float)
    dim = x.size
    gamma = christoffel(metric_fn, x, h_inner)
    d_gamma = np.array([_central(lambda y: christoffel(metric_fn, y, h_inner), x, k, h_outer)
                        for k in range(dim)])  # d_gamma[k, a, i, j] = ∂_k Γ^a_ij
    return (np.einsum('aaij->ij', d_gamma)
            - np.einsum('jaia->ij', d_gamma)
            + np.einsum('aab,bij->ij', gamma, gamma)
            - np.einsum('ajb,bia->ij', gamma, gamma))


def radial_cartesian_metric(A, B):
    """A(ρ)²dρ² + B(ρ)²ρ²dΩ² written in Cartesian coordinates of R³."""
    def metric(x):
        rho = np.linalg.norm(x)
        n = x / rho
        radial = np.outer(n, n)
        return A(rho) ** 2 * radial + B(rho) ** 2 * (np.eye(3) - radial)
    return metric


def radial_orthonormal_ricci(A, B, rho):
    """(Ric_r, Ric_t) at the point (ρ, 0, 0)."""
    metric = radial_cartesian_metric(A, B)
    ric = ricci_tensor(metric, np.array([rho, 0.0, 0.0]))
    return ric[0, 0] / A(rho) ** 2, ric[1, 1] / B(rho) ** 2


def euler_coframe(point):
    """Left-invariant forms σ1, σ2, σ3 on S³ in Euler angles (θ, φ, ψ), rows in (dθ, dφ, dψ)."""
    theta, _, psi = point
    return np.array([
        [np.sin(psi), -np.cos(psi) * np.sin(theta), 0.0],
        [np.cos(psi), np.sin(psi) * np.sin(theta), 0.0],
        [0.0, np.cos(theta), 1.0],
    ])


def euler_metric(coeffs):
    """Σ g_i θ_i² with θ_i = σ_i/2, the coframe dual to brackets [e_i, e_j] = ±2ε_ijk e_k."""
    weights = np.diag(np.asarray(coeffs, dtype=float) / 4.0)

    def metric(point):
        sigma = euler_coframe(point)
        return sigma.T @ weights @ sigma
    return metric


def homogeneous_orthonormal_ricci(coeffs, point=(1.0, 0.3, 0.7)):
    """Ricci tensor in the orthonormal frame f_i = e_i/√g_i, computed in the Euler chart."""
    point = np.asarray(point, dtype=float)
    coeffs = np.asarray(coeffs, dtype=float)
    ric = ricci_tensor(euler_metric(coeffs), point)
    coframe = euler_coframe(point) / 2.0
    frame = np.linalg.inv(coframe)  # columns are e_i in coordinates
    in_frame = frame.T @ ric @ frame
    root = np.sqrt(coeffs)
    return in_frame / np.outer(root, root)


def milnor_ricci(coeffs, lambdas=(2.0, 2.0, 2.0)):
    """Closed-form principal Ricci curvatures of a diagonal left-invariant metric."""
    g = np.asarray(coeffs, dtype=float)
    lam = np.asarray(lambdas, dtype=float)
    scaled = lam * np.sqrt(g) / np.sqrt(np.prod(g) / g)
    mu = 0.5 * np.sum(scaled) - scaled
    return 2.0 * np.array([mu[1] * mu[2], mu[0] * mu[2], mu[0] * mu[1]])
