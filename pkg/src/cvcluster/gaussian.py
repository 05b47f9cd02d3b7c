"""Graph-matrix representation of Gaussian pure states.

A Gaussian pure state on n modes is described, up to phase-space
displacements and overall phase, by a complex symmetric matrix Z with
positive definite imaginary part, through the wavefunction convention

    psi(q) proportional to exp((i/2) q^T Z q).

Quadratures are ordered (q_1..q_n, p_1..p_n) with symplectic form
Omega = [[0, I], [-I, 0]] and vacuum variance 1/2, so the vacuum is
Z = i*I.  A Gaussian unitary with symplectic matrix S = [[A, B], [C, D]]
acts on Z by the linear fractional (Moebius) rule

    Z' = (C + D Z) (A + B Z)^{-1},

symmetrized after every step to suppress floating-point drift.

The covariance matrix sigma (vacuum sigma = I/2) is carried as an
independent oracle representation: the two evolution pictures must agree
through the conversion maps, which is the main internal consistency
check of this module.

Mode indices in the public API are 1-based.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = [
    "CONDITION_LIMIT",
    "CovarianceMatrix",
    "GraphZ",
    "HGraph",
    "NumericalDegeneracyError",
    "Symplectic",
    "apply_symplectic",
    "covariance_from_graph",
    "graph_from_covariance",
    "hgraph_state",
    "phase_shift_symplectic",
    "tms_symplectic",
    "vacuum_state",
]

SYMMETRY_TOL = 1e-12
SYMPLECTIC_TOL = 1e-10
PURITY_TOL = 1e-8
CONDITION_LIMIT = 1e12


class NumericalDegeneracyError(ArithmeticError):
    """A Moebius update was too ill-conditioned to trust.

    Raised when the condition number of (A + B Z) exceeds
    CONDITION_LIMIT, which signals unphysically extreme squeezing for
    double precision rather than a recoverable state.
    """


def _as_locked(array):
    out = np.array(array)
    out.setflags(write=False)
    return out


@dataclass(frozen=True)
class GraphZ:
    """Complex symmetric graph matrix of an n-mode Gaussian pure state.

    Invariants checked at construction: z is square and symmetric within
    1e-12, and Im(z) is positive definite.  The definiteness check is
    floating-point aware: at extreme squeezing the true smallest
    eigenvalue (of order 1/norm) sits below the eigensolver noise floor
    (of order eps*norm), so eigenvalues are required to stay above
    -1e-12 * max(1, largest eigenvalue) instead of strictly above zero.
    """

    z: np.ndarray

    def __post_init__(self):
        z = np.asarray(self.z, dtype=complex)
        if z.ndim != 2 or z.shape[0] != z.shape[1] or z.shape[0] < 1:
            raise ValueError("z must be a square matrix with at least one mode")
        asym = np.abs(z - z.T).max()
        if asym > SYMMETRY_TOL:
            raise ValueError(f"z must be symmetric, max|z - z^T| = {asym:.3e}")
        w = np.linalg.eigvalsh(z.imag)
        if w[0] <= -SYMMETRY_TOL * max(1.0, w[-1]):
            raise ValueError(
                f"Im(z) must be positive definite, min eigenvalue {w[0]:.3e}"
            )
        object.__setattr__(self, "z", _as_locked(z))

    @property
    def n(self):
        """Mode count."""
        return self.z.shape[0]


@dataclass(frozen=True)
class Symplectic:
    """Real symplectic matrix in (q..., p...) block form {A, B; C, D}."""

    a: np.ndarray
    b: np.ndarray
    c: np.ndarray
    d: np.ndarray

    def __post_init__(self):
        blocks = [np.asarray(m, dtype=float) for m in (self.a, self.b, self.c, self.d)]
        shape = blocks[0].shape
        if len(shape) != 2 or shape[0] != shape[1] or shape[0] < 1:
            raise ValueError("blocks must be square matrices")
        if any(m.shape != shape for m in blocks):
            raise ValueError("blocks must share one shape")
        a, b, c, d = blocks
        # S Omega S^T = Omega, expressed blockwise.  The tolerance is
        # scaled by the square of the largest entry: an exactly
        # symplectic product accumulates floating-point residual of
        # order eps * |S|^2, which exceeds any absolute tolerance at
        # extreme squeezing.  Gates and moderate compositions still meet
        # the absolute 1e-10 contract (asserted in the test suite).
        eye = np.eye(shape[0])
        residual = max(
            np.abs(a @ b.T - b @ a.T).max(),
            np.abs(c @ d.T - d @ c.T).max(),
            np.abs(a @ d.T - b @ c.T - eye).max(),
        )
        scale = max(1.0, max(np.abs(m).max() for m in blocks) ** 2)
        if residual > SYMPLECTIC_TOL * scale:
            raise ValueError(f"not symplectic, S Omega S^T residual {residual:.3e}")
        for name, m in zip("abcd", blocks):
            object.__setattr__(self, name, _as_locked(m))

    @property
    def n(self):
        """Mode count."""
        return self.a.shape[0]

    @property
    def matrix(self):
        """Assembled 2n x 2n matrix acting on (q_1..q_n, p_1..p_n)."""
        return np.block([[self.a, self.b], [self.c, self.d]])

    @classmethod
    def identity(cls, n):
        eye = np.eye(n)
        zero = np.zeros((n, n))
        return cls(eye, zero, zero, eye)

    def __matmul__(self, other):
        """Composition: (self @ other) applies `other` first."""
        if not isinstance(other, Symplectic):
            return NotImplemented
        if other.n != self.n:
            raise ValueError("mode counts differ")
        return Symplectic(
            self.a @ other.a + self.b @ other.c,
            self.a @ other.b + self.b @ other.d,
            self.c @ other.a + self.d @ other.c,
            self.c @ other.b + self.d @ other.d,
        )


@dataclass(frozen=True)
class CovarianceMatrix:
    """Real 2n x 2n covariance matrix, vacuum convention sigma = I/2.

    Only pure states are representable here (the graph picture has no
    mixed-state counterpart), so purity det(2 sigma) = 1 is validated to
    1e-8 along with symmetry and the uncertainty relation
    sigma + (i/2) Omega >= 0.
    """

    sigma: np.ndarray

    def __post_init__(self):
        sigma = np.asarray(self.sigma, dtype=float)
        if sigma.ndim != 2 or sigma.shape[0] != sigma.shape[1] or sigma.shape[0] % 2:
            raise ValueError("sigma must be a square 2n x 2n matrix")
        scale = max(1.0, np.abs(sigma).max())
        if np.abs(sigma - sigma.T).max() > SYMMETRY_TOL * scale:
            raise ValueError("sigma must be symmetric")
        sign, logdet = np.linalg.slogdet(2.0 * sigma)
        if sign <= 0 or abs(np.expm1(logdet)) > PURITY_TOL:
            raise ValueError(
                f"sigma is not pure, det(2 sigma) = {sign * np.exp(logdet):.6e}"
            )
        n = sigma.shape[0] // 2
        omega = _omega(n)
        w = np.linalg.eigvalsh(sigma + 0.5j * omega)
        if w[0] < -PURITY_TOL * scale:
            raise ValueError("sigma violates the uncertainty relation")
        object.__setattr__(self, "sigma", _as_locked(sigma))

    @property
    def n(self):
        """Mode count."""
        return self.sigma.shape[0] // 2


@dataclass(frozen=True)
class HGraph:
    """Symmetric adjacency matrix G of a multimode-squeezing Hamiltonian.

    Entries carry the squeezing weight directly, G = r * A for a stage of
    identical gates along adjacency A.
    """

    g: np.ndarray

    def __post_init__(self):
        g = np.asarray(self.g, dtype=float)
        if g.ndim != 2 or g.shape[0] != g.shape[1] or g.shape[0] < 1:
            raise ValueError("g must be a square matrix")
        if np.abs(g - g.T).max() > SYMMETRY_TOL * max(1.0, np.abs(g).max()):
            raise ValueError("g must be symmetric")
        object.__setattr__(self, "g", _as_locked(g))

    @property
    def n(self):
        return self.g.shape[0]


def _omega(n):
    eye = np.eye(n)
    zero = np.zeros((n, n))
    return np.block([[zero, eye], [-eye, zero]])


def vacuum_state(n):
    """Vacuum on n modes, Z = i*I."""
    if not isinstance(n, (int, np.integer)) or n < 1:
        raise ValueError("mode count must be a positive integer")
    return GraphZ(1j * np.eye(int(n)))


def _check_mode(n, k, name):
    if not isinstance(k, (int, np.integer)) or not 1 <= k <= n:
        raise ValueError(f"mode index {name}={k} out of range 1..{n}")


def tms_symplectic(n, i, j, r):
    """Two-mode squeezing between modes i and j (1-based).

    The generator is proportional to i(a_i^dag a_j^dag - a_i a_j), which
    places cosh r on the diagonal and +sinh r (q block) / -sinh r
    (p block) on the i, j off-diagonals.  The opposite sign convention
    would flip the sign of real graph edges but nothing structural.
    """
    _check_mode(n, i, "i")
    _check_mode(n, j, "j")
    if i == j:
        raise ValueError("i and j must differ, equal indices would be "
                         "single-mode squeezing, not TMS")
    a = np.eye(n)
    d = np.eye(n)
    ii, jj = i - 1, j - 1
    ch, sh = np.cosh(r), np.sinh(r)
    a[ii, ii] = a[jj, jj] = ch
    a[ii, jj] = a[jj, ii] = sh
    d[ii, ii] = d[jj, jj] = ch
    d[ii, jj] = d[jj, ii] = -sh
    zero = np.zeros((n, n))
    return Symplectic(a, zero, zero, d)


def phase_shift_symplectic(n, thetas):
    """Per-mode phase shifts by angles `thetas` (radians, length n)."""
    thetas = np.asarray(thetas, dtype=float)
    if thetas.shape != (n,):
        raise ValueError(f"expected {n} angles, got shape {thetas.shape}")
    cos = np.diag(np.cos(thetas))
    sin = np.diag(np.sin(thetas))
    return Symplectic(cos, sin, -sin, cos)


def apply_symplectic(s, z):
    """Evolve a graph matrix: Z' = (C + D Z)(A + B Z)^{-1}, symmetrized."""
    if s.n != z.n:
        raise ValueError("mode counts differ")
    m = s.a + s.b @ z.z
    cond = np.linalg.cond(m)
    if not np.isfinite(cond) or cond > CONDITION_LIMIT:
        raise NumericalDegeneracyError(
            f"condition number {cond:.3e} of (A + B Z) exceeds "
            f"{CONDITION_LIMIT:.0e}; the squeezing regime is too extreme "
            "for a trustworthy double-precision update"
        )
    zp = np.linalg.solve(m.T, (s.c + s.d @ z.z).T).T
    return GraphZ((zp + zp.T) / 2)


def covariance_from_graph(z):
    """Covariance oracle: sigma = (1/2){U^-1, U^-1 V; V U^-1, U + V U^-1 V}."""
    u = z.z.imag
    v = z.z.real
    w = np.linalg.eigvalsh(u)
    if w[0] <= 0:
        raise ValueError("Im(Z) is not positive definite")
    ui = np.linalg.inv(u)
    ui = (ui + ui.T) / 2
    qq = ui
    qp = ui @ v
    pp = u + v @ ui @ v
    sigma = 0.5 * np.block([[qq, qp], [qp.T, pp.T]])
    return CovarianceMatrix((sigma + sigma.T) / 2)


def graph_from_covariance(sigma):
    """Inverse oracle map: U = (2 sigma_qq)^{-1}, V = U (2 sigma_qp)."""
    n = sigma.n
    qq = sigma.sigma[:n, :n]
    qp = sigma.sigma[:n, n:]
    u = np.linalg.inv(2.0 * qq)
    u = (u + u.T) / 2
    v = u @ (2.0 * qp)
    v = (v + v.T) / 2
    return GraphZ(v + 1j * u)


def hgraph_state(g):
    """H-graph state Z = i expm(2G), by eigendecomposition of symmetric G."""
    w, vecs = np.linalg.eigh(2.0 * np.asarray(g.g, dtype=float))
    expm = (vecs * np.exp(w)) @ vecs.T
    return GraphZ(1j * (expm + expm.T) / 2)
