"""Closest cluster-state analysis of Gaussian graph states.

An ideal continuous-variable cluster state has a purely real graph
matrix; any Gaussian pure state gets closer to one when selected modes
are rotated by a -pi/2 phase shift.  This module searches over such
mode subsets for the rotation minimizing the spectral norm of Im(Z'),
classifies the surviving edges by complex phase, splits the graph into
connected components, and compares the result against an intended
target adjacency.  The verdict of build_report states whether the
state is usable as a cluster state on its full mode set.

The subset search runs on the Moebius numerator/denominator rows
directly.  Given the total symplectic S = [[A, B], [C, D]] that
produced Z from the vacuum, let E = A + iB and F = C + iD (so
Z = F E^-1).  Rotating subset T by -pi/2 replaces row k of E with
-F[k] and row k of F with E[k] for every k in T, and the candidate is
Z' = F' E'^-1.  E and F stay as well conditioned as the gates that
built them even when Z itself has entries of order e^{2r}, which is
what makes exhaustive high-squeezing searches feasible.  Without the
symplectic the same formulas run with E = I, F = Z.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .gaussian import (
    CONDITION_LIMIT,
    GraphZ,
    NumericalDegeneracyError,
    Symplectic,
    apply_symplectic,
    phase_shift_symplectic,
)
from .scenarios import ladder_schedule, lattice_schedule, schedule_union_adjacency

__all__ = [
    "AnalysisReport",
    "Edge",
    "EdgeClassification",
    "PhasedState",
    "TargetComparison",
    "approximation_error",
    "build_report",
    "classify_edges",
    "closest_cvcs",
    "compare_to_target",
    "connected_components",
    "cz_apply",
    "is_bipartite_self_inverse",
    "target_graph",
]

EXHAUSTIVE_MODE_LIMIT = 24
DEFAULT_EDGE_THRESHOLD = 0.1
DEFAULT_IM_TOL = 1e-2
DEFAULT_MATCH_TOL = 0.3

_CHUNK = 2048
_TIE_REL = 1e-9
_TIE_ABS = 1e-12
_GREEDY_GAIN = 1e-15

_PHASE_BIN = np.pi / 8
_PHASE_TARGETS = ((0.0, "+1"), (np.pi, "-1"), (np.pi / 2, "+i"), (-np.pi / 2, "-i"))


@dataclass(frozen=True)
class PhasedState:
    """Result of the closest cluster-state search.

    subset holds the 1-based modes rotated by -pi/2, z_prime the rotated
    graph matrix, error the spectral norm of Im(z_prime).  ties counts
    how many subsets landed within the tie window of the optimum; the
    reported subset is the smallest, then lexicographically first, of
    those.  search records which strategy ran.
    """

    subset: tuple
    z_prime: GraphZ
    error: float
    ties: int
    search: str


@dataclass(frozen=True)
class Edge:
    """Off-diagonal graph entry at or above the reporting threshold."""

    i: int
    j: int
    weight: complex
    phase_class: str


@dataclass(frozen=True)
class EdgeClassification:
    edges: tuple
    self_loops: tuple
    below_threshold: int
    threshold: float


@dataclass(frozen=True)
class TargetComparison:
    """Least-squares match of Re(Z') against a target adjacency."""

    scale: float
    residual: float
    relative_residual: float
    matches: bool
    match_tol: float


@dataclass(frozen=True)
class AnalysisReport:
    phased: PhasedState
    im_spectrum: tuple
    classification: EdgeClassification
    components: tuple
    comparison: TargetComparison
    connected: bool
    useful: bool
    threshold: float
    im_tol: float


def approximation_error(z):
    """Spectral norm of the imaginary part of a graph matrix."""
    im = z.z.imag
    return float(np.abs(np.linalg.eigvalsh((im + im.T) / 2.0)).max())


def _subset_bits(masks, n):
    return ((masks[:, None] >> np.arange(n)[None, :]) & 1).astype(bool)


def _candidate_errors(e, f, bits):
    """Spectral-norm errors for a batch of subsets given as bit rows."""
    sel = bits[:, :, None]
    m = np.where(sel, -f[None], e[None])
    num = np.where(sel, e[None], f[None])
    try:
        zp_t = np.linalg.solve(np.transpose(m, (0, 2, 1)),
                               np.transpose(num, (0, 2, 1)))
    except np.linalg.LinAlgError:
        errors = np.empty(len(bits))
        for k in range(len(bits)):
            try:
                zp_t = np.linalg.solve(m[k].T, num[k].T)
            except np.linalg.LinAlgError:
                errors[k] = np.inf
                continue
            im = (zp_t.imag + zp_t.imag.T) / 2.0
            errors[k] = np.abs(np.linalg.eigvalsh(im)).max()
        return errors
    im = (zp_t.imag + np.transpose(zp_t.imag, (0, 2, 1))) / 2.0
    return np.abs(np.linalg.eigvalsh(im)).max(axis=-1)


def _mask_to_subset(mask, n):
    return tuple(k + 1 for k in range(n) if (mask >> k) & 1)


def _finalize(e, f, mask, n):
    """Build the rotated GraphZ for one subset, guarding conditioning."""
    bits = _subset_bits(np.array([mask], dtype=np.int64), n)[0]
    m = np.where(bits[:, None], -f, e)
    num = np.where(bits[:, None], e, f)
    cond = np.linalg.cond(m)
    if not np.isfinite(cond) or cond > CONDITION_LIMIT:
        raise NumericalDegeneracyError(
            f"phase-shift update is numerically degenerate "
            f"(condition number {cond:.3e} exceeds {CONDITION_LIMIT:.0e})"
        )
    zp = np.linalg.solve(m.T, num.T).T
    return GraphZ((zp + zp.T) / 2.0)


def _check_consistency(z, e, f):
    zmat = z.z
    scale = max(1.0, float(np.abs(zmat).max()) * float(np.abs(e).max()))
    if np.abs(zmat @ e - f).max() > 1e-8 * scale:
        raise ValueError(
            "graph matrix does not match the supplied symplectic "
            "(z @ (a + ib) differs from c + id)"
        )


def _exhaustive(e, f, n):
    best_err = np.inf
    chunk_best = []
    all_errors = np.empty(1 << n)
    for start in range(0, 1 << n, _CHUNK):
        masks = np.arange(start, min(start + _CHUNK, 1 << n), dtype=np.int64)
        errors = _candidate_errors(e, f, _subset_bits(masks, n))
        all_errors[start:start + len(masks)] = errors
    best_err = float(all_errors.min())
    window = best_err * (1.0 + _TIE_REL) + _TIE_ABS
    tied = np.nonzero(all_errors <= window)[0]
    subsets = [_mask_to_subset(int(mask), n) for mask in tied]
    pick = min(range(len(subsets)), key=lambda k: (len(subsets[k]), subsets[k]))
    return int(tied[pick]), float(all_errors[tied[pick]]), len(tied)


def _greedy(e, f, n):
    mask = 0
    err = float(_candidate_errors(e, f, _subset_bits(
        np.array([0], dtype=np.int64), n))[0])
    while True:
        flips = np.array([mask ^ (1 << k) for k in range(n)], dtype=np.int64)
        errors = _candidate_errors(e, f, _subset_bits(flips, n))
        k = int(np.lexsort((np.arange(n), errors))[0])
        if errors[k] < err - _GREEDY_GAIN:
            mask, err = int(flips[k]), float(errors[k])
        else:
            return mask, err, 1


def closest_cvcs(z, mode="auto", symplectic=None):
    """Find the -pi/2 mode-subset rotation minimizing ||Im(Z')||.

    mode is "auto" (exhaustive up to 24 modes, greedy beyond),
    "exhaustive" or "greedy".  Exhaustive search guarantees the global
    optimum and reports ties; greedy flips one mode at a time from the
    empty subset and only guarantees a local optimum.

    Passing the symplectic that generated z from the vacuum makes the
    search stable at high squeezing; it is checked for consistency
    against z.  Without it the search works from z alone and the final
    rotation inherits the usual conditioning guard, so states too
    squeezed to analyze that way fail loudly rather than silently.
    """
    n = z.n
    if symplectic is not None:
        if not isinstance(symplectic, Symplectic) or symplectic.n != n:
            raise ValueError("symplectic does not act on the state's modes")
        e = symplectic.a + 1j * symplectic.b
        f = symplectic.c + 1j * symplectic.d
        _check_consistency(z, e, f)
    else:
        e = np.eye(n, dtype=complex)
        f = z.z.astype(complex)

    if mode == "auto":
        mode = "exhaustive" if n <= EXHAUSTIVE_MODE_LIMIT else "greedy"
    if mode == "exhaustive":
        if n > EXHAUSTIVE_MODE_LIMIT:
            raise ValueError(
                f"exhaustive search supports at most {EXHAUSTIVE_MODE_LIMIT} "
                f"modes, got {n}; use greedy"
            )
        mask, error, ties = _exhaustive(e, f, n)
    elif mode == "greedy":
        mask, error, ties = _greedy(e, f, n)
    else:
        raise ValueError(f"unknown search mode {mode!r}")

    subset = _mask_to_subset(mask, n)
    if symplectic is not None:
        z_prime = _finalize(e, f, mask, n)
    else:
        thetas = np.where(_subset_bits(np.array([mask], dtype=np.int64), n)[0],
                          -np.pi / 2.0, 0.0)
        z_prime = apply_symplectic(phase_shift_symplectic(n, thetas), z)
    return PhasedState(subset=subset, z_prime=z_prime,
                       error=float(error), ties=ties, search=mode)


def _phase_class(weight):
    angle = float(np.angle(weight))
    for target, label in _PHASE_TARGETS:
        delta = abs((angle - target + np.pi) % (2.0 * np.pi) - np.pi)
        if delta <= _PHASE_BIN + 1e-15:
            return label
    return "mixed"


def classify_edges(z, threshold=DEFAULT_EDGE_THRESHOLD):
    """Split graph entries into phase-classified edges and self loops.

    Off-diagonal entries with magnitude below threshold are only
    counted; diagonal entries are always reported as self loops.
    """
    if threshold < 0:
        raise ValueError(f"threshold must be nonnegative, got {threshold}")
    mat = z.z
    edges = []
    below = 0
    for i in range(z.n):
        for j in range(i + 1, z.n):
            w = complex(mat[i, j])
            if abs(w) >= threshold:
                edges.append(Edge(i + 1, j + 1, w, _phase_class(w)))
            else:
                below += 1
    loops = tuple(complex(mat[k, k]) for k in range(z.n))
    return EdgeClassification(edges=tuple(edges), self_loops=loops,
                              below_threshold=below, threshold=float(threshold))


def connected_components(matrix, threshold=DEFAULT_EDGE_THRESHOLD):
    """Components of the graph whose edges are entries with |w| >= threshold.

    matrix is a real square array, typically Re(Z'); the diagonal is
    ignored.  Returns sorted tuples of 1-based mode labels, ordered by
    smallest member.
    """
    mat = np.asarray(matrix)
    if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
        raise ValueError(f"matrix must be square, got shape {mat.shape}")
    n = mat.shape[0]
    strong = np.abs(mat) >= threshold
    np.fill_diagonal(strong, False)
    seen = [False] * n
    components = []
    for start in range(n):
        if seen[start]:
            continue
        queue = [start]
        seen[start] = True
        comp = []
        while queue:
            u = queue.pop()
            comp.append(u + 1)
            for v in np.nonzero(strong[u])[0]:
                if not seen[v]:
                    seen[v] = True
                    queue.append(int(v))
        components.append(tuple(sorted(comp)))
    return tuple(sorted(components))


def target_graph(kind, dims):
    """Weight-1 adjacency of an ideal scenario target.

    target_graph("ladder", p) is the 2 x (p-1)/2 ladder in travel-mode
    labels; target_graph("lattice", (rows, cols)) is the full grid.
    """
    if kind == "ladder":
        return schedule_union_adjacency(ladder_schedule(dims, 1.0))
    if kind == "lattice":
        rows, cols = dims
        return schedule_union_adjacency(lattice_schedule(rows, cols, 1.0))
    raise ValueError(f"unknown target kind {kind!r}")


def compare_to_target(z_prime, target, match_tol=DEFAULT_MATCH_TOL):
    """Compare Re(Z') against a target adjacency up to a global scale.

    The scale minimizing ||Re(Z') - c * target||_F in c is the Frobenius
    inner product ratio <Re(Z'), target> / <target, target>.  The
    relative residual divides by ||Re(Z')||_F and is infinite when the
    state has no real part but the target is nonzero, since no scale
    can make them agree in shape.
    """
    a = np.asarray(target, dtype=float)
    re = z_prime.z.real
    if a.shape != re.shape:
        raise ValueError(f"target shape {a.shape} does not match state "
                         f"shape {re.shape}")
    denom = float((a * a).sum())
    scale = float((re * a).sum()) / denom if denom > 0 else 0.0
    residual = float(np.linalg.norm(re - scale * a))
    re_norm = float(np.linalg.norm(re))
    if re_norm > 0:
        relative = residual / re_norm
    else:
        relative = np.inf if denom > 0 else 0.0
    return TargetComparison(scale=scale, residual=residual,
                            relative_residual=float(relative),
                            matches=bool(relative <= match_tol),
                            match_tol=float(match_tol))


def is_bipartite_self_inverse(adjacency, tol=1e-12):
    """True when the adjacency is bipartite and squares to the identity.

    Such targets are exactly representable: a squeezing schedule on the
    matching realizes the corresponding cluster state up to known
    tanh/sech factors, which is what makes them useful exact oracles.
    """
    a = np.asarray(adjacency, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"adjacency must be square, got shape {a.shape}")
    n = a.shape[0]
    if np.abs(a - a.T).max() > tol:
        return False
    if np.abs(a @ a - np.eye(n)).max() > tol:
        return False
    color = [None] * n
    for start in range(n):
        if color[start] is not None:
            continue
        color[start] = 0
        queue = [start]
        while queue:
            u = queue.pop()
            for v in np.nonzero(np.abs(a[u]) > tol)[0]:
                if color[v] is None:
                    color[v] = 1 - color[u]
                    queue.append(int(v))
                elif color[v] == color[u]:
                    return False
    return True


def cz_apply(z, adjacency):
    """Apply CZ gates encoded as a real symmetric adjacency.

    In the graph representation a CZ of strength w between modes i and
    j adds w to the (i, j) entries, so the whole gate layer is a single
    matrix addition.
    """
    a = np.asarray(adjacency, dtype=float)
    if a.shape != z.z.shape:
        raise ValueError(f"adjacency shape {a.shape} does not match state "
                         f"shape {z.z.shape}")
    if np.abs(a - a.T).max() > 1e-12:
        raise ValueError("adjacency must be symmetric")
    return GraphZ(z.z + a)


def build_report(z, symplectic=None, search="auto",
                 threshold=DEFAULT_EDGE_THRESHOLD, im_tol=DEFAULT_IM_TOL,
                 target=None, match_tol=DEFAULT_MATCH_TOL):
    """Run the full analysis pipeline on one state.

    The verdict is deliberately strict: the state counts as a usable
    cluster state only if the thresholded real graph is a single
    component spanning every mode and the imaginary residual after the
    best rotation is at most im_tol.
    """
    phased = closest_cvcs(z, mode=search, symplectic=symplectic)
    im = phased.z_prime.z.imag
    spectrum = np.linalg.eigvalsh((im + im.T) / 2.0)
    spectrum = tuple(sorted((float(v) for v in spectrum), key=abs, reverse=True))
    classification = classify_edges(phased.z_prime, threshold)
    components = connected_components(phased.z_prime.z.real, threshold)
    comparison = None
    if target is not None:
        comparison = compare_to_target(phased.z_prime, target, match_tol)
    connected = len(components) == 1 and len(components[0]) == z.n
    useful = bool(connected and phased.error <= im_tol)
    return AnalysisReport(phased=phased, im_spectrum=spectrum,
                          classification=classification, components=components,
                          comparison=comparison, connected=connected,
                          useful=useful, threshold=float(threshold),
                          im_tol=float(im_tol))
