"""Spectral placement of interaction-graph vertices on a line.

The Fiedler vector of the graph Laplacian minimises ``sum w_ij (x_i - x_j)^2``
over unit vectors orthogonal to the all-ones vector; sorting vertices by its
entries gives the line order.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence, Union

import numpy as np
from scipy.linalg import eigh_tridiagonal
from scipy.sparse.csgraph import connected_components

from .errors import ConvergenceFailure
from .interaction import InteractionGraph
from .mapping import Mapping

SeedLike = Union[int, np.random.Generator, None]

# Start vector for Lanczos; fixed so that degenerate cases resolve the same way every run.
_START_SEED = 0x5EC7
# Edges lighter than this fraction of the heaviest one are invisible to a double-precision
# eigensolve, so they only influence how components are chained together.
EDGE_RTOL = 1e-12


@dataclass(frozen=True, eq=False)
class Laplacian:
    matrix: np.ndarray
    groups: tuple[tuple[int, ...], ...] = ()

    @property
    def n(self) -> int:
        return self.matrix.shape[0]


def laplacian(g: Union[InteractionGraph, np.ndarray]) -> Laplacian:
    """``L_ii = sum_k w_ik`` and ``L_ij = -w_ij`` off the diagonal."""
    if isinstance(g, InteractionGraph):
        w, groups = g.weights, g.groups
    else:
        w = np.asarray(g, dtype=float)
        groups = tuple((i,) for i in range(w.shape[0]))
    w = np.array(w, dtype=float)
    np.fill_diagonal(w, 0.0)
    mat = -w
    np.fill_diagonal(mat, w.sum(axis=1))
    return Laplacian(mat, groups)


def jacobi_eigh(a: np.ndarray, tol: float = 1e-13, max_sweeps: int = 64):
    """Eigen-decomposition of a small symmetric matrix by cyclic Jacobi rotations.

    Returns ascending eigenvalues and the matching orthonormal eigenvectors
    as columns.
    """
    a = np.array(a, dtype=float)
    n = a.shape[0]
    v = np.eye(n)
    scale = max(np.abs(a).max(), np.finfo(float).tiny)
    for _ in range(max_sweeps):
        off = np.sqrt(np.sum(np.triu(a, 1) ** 2))
        if off <= tol * scale:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if abs(apq) <= 1e-300:
                    continue
                theta = (a[q, q] - a[p, p]) / (2.0 * apq)
                t = np.copysign(1.0, theta) / (abs(theta) + np.sqrt(theta * theta + 1.0))
                c = 1.0 / np.sqrt(t * t + 1.0)
                s = t * c
                col_p, col_q = a[:, p].copy(), a[:, q].copy()
                a[:, p] = c * col_p - s * col_q
                a[:, q] = s * col_p + c * col_q
                row_p, row_q = a[p, :].copy(), a[q, :].copy()
                a[p, :] = c * row_p - s * row_q
                a[q, :] = s * row_p + c * row_q
                vp, vq = v[:, p].copy(), v[:, q].copy()
                v[:, p] = c * vp - s * vq
                v[:, q] = s * vp + c * vq
    else:
        raise ConvergenceFailure(max_sweeps)
    vals = np.diag(a).copy()
    order = np.argsort(vals, kind="stable")
    return vals[order], v[:, order]


def _orient(y: np.ndarray) -> np.ndarray:
    # Sign convention: the first clearly nonzero entry is negative.
    big = np.abs(y).max()
    for x in y:
        if abs(x) > 1e-9 * big:
            return -y if x > 0 else y
    return y


def _lanczos_fiedler(mat: np.ndarray, tol: float, norm: float) -> Optional[np.ndarray]:
    n = mat.shape[0]
    ones = np.full(n, 1.0 / np.sqrt(n))
    q = np.random.default_rng(_START_SEED).standard_normal(n)
    q -= ones * (ones @ q)
    q /= np.linalg.norm(q)
    basis = [q]
    diag: list[float] = []
    offdiag: list[float] = []
    ritz = None
    for k in range(n - 1):
        w = mat @ basis[-1]
        diag.append(float(basis[-1] @ w))
        # full reorthogonalisation, including against the ones vector
        Q = np.array(basis)
        for _ in range(2):
            w -= Q.T @ (Q @ w)
            w -= ones * (ones @ w)
        beta = float(np.linalg.norm(w))
        if k == 0:
            theta, s = np.array([diag[0]]), np.ones((1, 1))
        else:
            theta, s = eigh_tridiagonal(np.array(diag), np.array(offdiag))
        ritz = Q.T @ s[:, 0]
        if beta * abs(s[-1, 0]) <= tol * norm or beta <= 1e-14 * norm:
            break
        offdiag.append(beta)
        basis.append(w / beta)
    if ritz is None:
        return None
    ritz /= np.linalg.norm(ritz)
    rq = ritz @ mat @ ritz
    if np.linalg.norm(mat @ ritz - rq * ritz) > tol * norm:
        return None
    return ritz


def _dense_fiedler(mat: np.ndarray) -> np.ndarray:
    n = mat.shape[0]
    ones = np.full((n, 1), 1.0 / np.sqrt(n))
    # push the ones direction to the top of the spectrum
    shift = 2.0 * np.abs(mat).sum(axis=1).max() + 1.0
    _, vecs = jacobi_eigh(mat + shift * (ones @ ones.T))
    y = vecs[:, 0]
    y = y - ones[:, 0] * (ones[:, 0] @ y)
    return y / np.linalg.norm(y)


def fiedler_vector(lap: Union[Laplacian, np.ndarray], tol: float = 1e-6) -> np.ndarray:
    """Unit eigenvector for the second-smallest Laplacian eigenvalue.

    Lanczos iteration restricted to the complement of the all-ones vector,
    stopping once the Ritz residual drops below ``tol * ||L||``; falls back to
    a dense Jacobi solve when the residual check fails.

    Raises:
        ValueError: fewer than two vertices.
        ConvergenceFailure: the dense fallback did not converge either.
    """
    mat = lap.matrix if isinstance(lap, Laplacian) else np.asarray(lap, dtype=float)
    n = mat.shape[0]
    if n < 2:
        raise ValueError("the Fiedler vector needs at least two vertices")
    if n == 2:
        return _orient(np.array([1.0, -1.0]) / np.sqrt(2.0))
    norm = float(np.abs(mat).sum(axis=1).max())
    if norm == 0.0:
        # every ones-orthogonal vector is optimal; pick the Lanczos start vector
        ones = np.full(n, 1.0 / np.sqrt(n))
        y = np.random.default_rng(_START_SEED).standard_normal(n)
        y -= ones * (ones @ y)
        return _orient(y / np.linalg.norm(y))
    y = _lanczos_fiedler(mat, tol, norm)
    if y is None:
        y = _dense_fiedler(mat)
    return _orient(y)


def _quotient(w: np.ndarray, comps) -> np.ndarray:
    k = len(comps)
    q = np.zeros((k, k))
    for a in range(k):
        for b in range(a + 1, k):
            q[a, b] = q[b, a] = w[np.ix_(comps[a], comps[b])].sum()
    return q


def spectral_coordinates(
    weights: np.ndarray,
    anchor: Optional[np.ndarray] = None,
    tol: float = 1e-6,
    hint: Optional[np.ndarray] = None,
) -> np.ndarray:
    """Line coordinates for every vertex of a possibly disconnected graph.

    Connected graphs get their Fiedler vector. Otherwise each component is
    laid out by its own Fiedler vector, rescaled to [0, 1], and components are
    placed side by side. Component order comes from the same procedure applied
    to the graph of summed inter-component weights, falling back to the
    ``hint`` weights (e.g. lookahead interactions), then to ``anchor`` (e.g.
    previous positions) and then to size and lowest index. Each component is
    flipped so that its members with links to the right-hand components sit
    on its right, judged by the same sequence of fallbacks.
    """
    w = np.asarray(weights, dtype=float)
    n = w.shape[0]
    if n == 1:
        return np.zeros(1)
    wmax = float(w.max())
    if wmax > 0.0:
        ncomp, labels = connected_components(w > EDGE_RTOL * wmax, directed=False)
    else:
        ncomp, labels = n, np.arange(n)
    if ncomp == 1:
        return fiedler_vector(laplacian(w), tol)

    comps = [np.flatnonzero(labels == c) for c in range(ncomp)]
    local = np.full(n, 0.5)
    for members in comps:
        if len(members) > 1:
            y = fiedler_vector(laplacian(w[np.ix_(members, members)]), tol)
            span = y.max() - y.min()
            local[members] = (y - y.min()) / span if span > 0 else 0.5

    quotient = _quotient(w, comps)
    hint_q = _quotient(np.asarray(hint, dtype=float), comps) if hint is not None else None
    comp_anchor = None
    if anchor is not None:
        comp_anchor = np.array([anchor[m].mean() for m in comps])
    if quotient.max() > 0.0:
        primary = spectral_coordinates(quotient / quotient.max(), comp_anchor, tol, hint_q)
    elif hint_q is not None and hint_q.max() > 0.0:
        primary = spectral_coordinates(hint_q / hint_q.max(), comp_anchor, tol)
    elif comp_anchor is not None:
        primary = comp_anchor
    else:
        primary = np.zeros(ncomp)
    keys = sorted(range(ncomp), key=lambda c: (primary[c], -len(comps[c]), comps[c][0]))
    rank = np.empty(ncomp, dtype=int)
    rank[keys] = np.arange(ncomp)

    coords = np.empty(n)
    for c, members in enumerate(comps):
        if len(members) > 1:
            side = np.sign(rank[labels] - rank[c])  # -1 left of c, +1 right, 0 inside
            score = float((local[members] - 0.5) @ (w[members] @ side))
            if score == 0.0 and hint is not None:
                score = float((local[members] - 0.5) @ (np.asarray(hint)[members] @ side))
            if score == 0.0 and anchor is not None:
                score = float((local[members] - 0.5) @ (anchor[members] - anchor[members].mean()))
            if score < 0.0:
                local[members] = 1.0 - local[members]
        coords[members] = 2.0 * rank[c] + local[members]
    return coords


def _tie_keys(num_groups: int, num_qubits: int, seed: SeedLike):
    rng = np.random.default_rng(seed)
    return rng.random(num_groups), rng.random(num_qubits)


def coordinates_to_mapping(
    y: Sequence[float], groups: Sequence[Sequence[int]], seed: SeedLike = 0
) -> Mapping:
    """Order qubits along the line by their group's coordinate.

    Exact ties are broken by seeded random keys, first between groups and then
    between members of a fused group, so members of a group always end up on
    consecutive positions and ``pos(a) > pos(b)`` implies ``y(a) >= y(b)``.
    """
    y = np.asarray(y, dtype=float)
    if len(y) != len(groups):
        raise ValueError(f"{len(y)} coordinates for {len(groups)} groups")
    num_qubits = sum(len(g) for g in groups)
    group_key, member_key = _tie_keys(len(groups), num_qubits, seed)
    entries = []
    for gi, grp in enumerate(groups):
        for q in grp:
            entries.append((y[gi], group_key[gi], gi, member_key[q], q))
    entries.sort()
    return Mapping.from_order(e[-1] for e in entries)


def _settle_pairs(m: Mapping, prev: Mapping, groups: Sequence[Sequence[int]]) -> Mapping:
    # reverse a fused pair in place when that brings its members closer to prev
    fwd = list(m.forward)
    for grp in groups:
        if len(grp) == 2:
            a, b = grp
            keep = abs(fwd[a] - prev.forward[a]) + abs(fwd[b] - prev.forward[b])
            flip = abs(fwd[b] - prev.forward[a]) + abs(fwd[a] - prev.forward[b])
            if flip < keep:
                fwd[a], fwd[b] = fwd[b], fwd[a]
    return Mapping(tuple(fwd))


def choose_orientation(
    y: Sequence[float],
    prev: Optional[Mapping],
    groups: Sequence[Sequence[int]],
    seed: SeedLike = 0,
) -> Mapping:
    """Pick between the orders induced by ``y`` and ``-y``.

    Without a previous mapping the ``+y`` order is returned. Otherwise the one
    with the smaller total qubit displacement from ``prev`` wins, ties going
    to ``+y``; members of a fused pair are first put in whichever of their two
    orders moves them less.
    """
    if isinstance(seed, np.random.Generator):
        seed = int(seed.integers(2**63))
    y = np.asarray(y, dtype=float)
    plus = coordinates_to_mapping(y, groups, seed)
    if prev is None:
        return plus
    plus = _settle_pairs(plus, prev, groups)
    minus = _settle_pairs(coordinates_to_mapping(-y, groups, seed), prev, groups)
    return minus if minus.displacement(prev) < plus.displacement(prev) else plus
