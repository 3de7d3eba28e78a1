"""Batched length descent for trees with fixed terminals and movable Steiner points.

Each batch member is a tree on ``N`` vertices whose first ``n`` vertices are
terminals.  Steiner vertices move in the tangent space of their current
position: a few damped Weiszfeld steps first, then joint Newton-type steps.
Vertices whose connecting edge has (nearly) collapsed are merged into clusters
that move as one point; a merged Steiner vertex splits off again when the
first-order pull of its outside neighbors exceeds one.  Steps, merges and splits are only accepted when the
tree length does not increase.
"""

from dataclasses import dataclass

import numpy as np

MAX_ITER = 10_000
REL_TOL = 1e-12
GRAD_TOL = 1e-10
COLLAPSE = 1e-9
MERGE_TOL = 5e-2
SPLIT_STEP = 1e-4
HISTORY = 5
MERGE_RELAX = 3
NEWTON_FLOOR = 1e-3
SHIFT_FLOOR = 1e-3
STEP_CAP = 0.1
WARMUP = 20


@dataclass
class DescentResult:
    X: np.ndarray
    f: np.ndarray
    converged: np.ndarray
    iterations: np.ndarray


def tree_length(space, X, edges):
    rows = np.arange(X.shape[0])[:, None]
    return space.dist(X[rows, edges[..., 0]], X[rows, edges[..., 1]]).sum(axis=1)


def _scatter(index, values, size):
    """Sum rows of ``values`` (k, d) into ``size`` bins given by ``index``."""
    out = np.empty((size, values.shape[-1]))
    for c in range(values.shape[-1]):
        out[:, c] = np.bincount(index, weights=values[:, c], minlength=size)
    return out


class _State:
    def __init__(self, X, rep, edges, scale, lam, f, hist, iters, ids):
        self.X, self.rep, self.edges, self.scale = X, rep, edges, scale
        self.lam, self.f, self.hist, self.iters, self.ids = lam, f, hist, iters, ids

    def take(self, mask):
        return _State(self.X[mask], self.rep[mask], self.edges[mask], self.scale[mask],
                      self.lam[mask], self.f[mask], [h[mask] for h in self.hist],
                      self.iters[mask], self.ids[mask])


def descend(space, X0, n, edges, scale, max_iter=MAX_ITER, grad_only=False):
    """Minimize total edge length over the Steiner vertices of every member.

    ``X0``: (B, N, d) ambient positions, terminals first.  ``edges``: (B, E, 2).
    ``scale``: (B,) configuration diameters used for the merge/split radii.
    With ``grad_only`` the relative-improvement rule is replaced by the gradient
    norm, or by no decrease at all over the history window.
    """
    B, N, d = X0.shape
    arangeN = np.arange(N)
    out = DescentResult(X0.copy(), np.empty(B), np.zeros(B, dtype=bool), np.zeros(B, dtype=int))
    rep0 = np.broadcast_to(arangeN, (B, N)).copy()
    f0 = tree_length(space, X0, edges)
    st = _State(X0.copy(), rep0, edges, np.asarray(scale, dtype=float), np.ones(B), f0,
                [f0.copy()], np.zeros(B, dtype=int), np.arange(B))

    def write_back(s, conv=None):
        out.X[s.ids] = s.X
        out.f[s.ids] = s.f
        out.iterations[s.ids] = s.iters
        if conv is not None:
            out.converged[s.ids] = conv

    for _ in range(max_iter + 1):
        b = st.X.shape[0]
        rows = np.arange(b)[:, None]
        e0, e1 = st.edges[..., 0], st.edges[..., 1]
        r0, r1 = st.rep[rows, e0], st.rep[rows, e1]
        ext = r0 != r1
        P0, P1 = st.X[rows, e0], st.X[rows, e1]
        dd = space.dist(P0, P1)
        L01, L10 = space.log(P0, P1), space.log(P1, P0)
        w = np.where(ext, 1.0 / np.maximum(dd, 1e-14), 0.0)[..., None]
        unit = np.where(ext & (dd > COLLAPSE), 1.0 / np.maximum(dd, COLLAPSE), 0.0)[..., None]

        base = rows * N
        size = b * N
        i0, i1 = (base + r0).ravel(), (base + r1).ravel()
        v0, v1 = (base + e0).ravel(), (base + e1).ravel()
        num = (_scatter(i0, (w * L01).reshape(-1, d), size)
               + _scatter(i1, (w * L10).reshape(-1, d), size)).reshape(b, N, d)
        den = (np.bincount(i0, w.ravel(), size) + np.bincount(i1, w.ravel(), size)).reshape(b, N)
        uL01, uL10 = (unit * L01).reshape(-1, d), (unit * L10).reshape(-1, d)
        grad = (_scatter(i0, uL01, size) + _scatter(i1, uL10, size)).reshape(b, N, d)
        pull = (_scatter(v0, uL01, size) + _scatter(v1, uL10, size)).reshape(b, N, d)

        is_root = st.rep == arangeN
        free = is_root & (arangeN >= n)
        member = ~is_root & (arangeN >= n)
        gn2 = np.sum(np.where(free, space.norm(grad) ** 2, 0.0), axis=1)
        pull_n = np.where(member, space.norm(pull), 0.0)
        wants_split = pull_n > 1.0 + 1e-9

        done = (gn2 < GRAD_TOL ** 2) & ~wants_split.any(axis=1)
        if len(st.hist) > HISTORY:
            # grad_only still stops once the length cannot decrease at all in
            # floating point; the gradient can stall just above GRAD_TOL there
            done |= st.hist[-HISTORY - 1] - st.f <= (0.0 if grad_only else REL_TOL * st.f)
        done |= st.lam < 1e-30
        if done.all():
            write_back(st, np.ones(b, dtype=bool))
            return out
        if _ == max_iter:
            write_back(st, done)
            return out
        if done.any() and (done.sum() * 2 >= b):
            write_back(st.take(done), np.ones(int(done.sum()), dtype=bool))
            keep = ~done
            st = st.take(keep)
            rows = np.arange(st.X.shape[0])[:, None]
            num, den, free = num[keep], den[keep], free[keep]
            pull, pull_n, wants_split = pull[keep], pull_n[keep], wants_split[keep]
            done = done[keep]
        active = ~done
        st.iters = st.iters + active

        # Weiszfeld steps first (they stay near the neighbors' hull), then Newton
        step = np.where((free & (den > 0))[..., None], num / np.maximum(den, 1e-300)[..., None], 0.0)
        late = st.iters > WARMUP
        if late.any():
            step[late] = _newton_step(space, st.X[late], st.rep[late], st.edges[late], n, st.scale[late])
        X_try = space.exp(st.X, st.lam[:, None, None] * step)
        moving = free[rows, st.rep]
        X_new = np.where(moving[..., None], X_try[rows, st.rep], st.X)
        f_new = tree_length(space, X_new, st.edges)
        accept = active & (f_new <= st.f)
        st.X = np.where(accept[:, None, None], X_new, st.X)
        st.f = np.where(accept, f_new, st.f)
        st.lam = np.where(accept, np.minimum(1.0, 2.0 * st.lam), np.where(active, 0.5 * st.lam, st.lam))

        _try_merge(space, st, n, active)
        _try_split(space, st, pull, pull_n, wants_split, active)

        st.hist.append(st.f.copy())
        if len(st.hist) > HISTORY + 1:
            st.hist.pop(0)
    return out


def _newton_step(space, X, rep, edges, n, scale=None):
    """Joint Newton-type step for all free clusters.

    Each edge contributes the second variation of its length (transverse
    Jacobi-field terms of the model space), written in orthonormal tangent
    frames and averaged over both orientations; the stiffness along the edge is
    floored at ``NEWTON_FLOOR`` / length and an indefinite matrix is shifted,
    so the system stays regular.  The exact length gradient is solved against
    the assembled matrix, so the step is a descent direction.  Unlike per-point Weiszfeld updates this
    does not stall when two Steiner points are close.  Returns ambient tangent
    steps per vertex.
    """
    b, N, d = X.shape
    K = N - n
    rows = np.arange(b)[:, None]
    e0, e1 = edges[..., 0], edges[..., 1]
    r0, r1 = rep[rows, e0], rep[rows, e1]
    P0, P1 = X[rows, r0], X[rows, r1]
    dd = space.dist(P0, P1)
    w = np.where(r0 != r1, 0.5 / np.maximum(dd, 1e-14), 0.0)
    F = space.tangent_basis(X)                      # (b, N, 2, d)
    F0, F1 = F[rows, r0], F[rows, r1]               # (b, E, 2, d)
    inner = space.inner
    G = inner(F0[..., :, None, :], F1[..., None, :, :])       # (b, E, 2, 2)
    L01, L10 = space.log(P0, P1), space.log(P1, P0)
    c01 = inner(F0, L01[..., None, :])              # L01 in frame of x0
    c10 = inner(F1, L10[..., None, :])
    free = (rep == np.arange(N)) & (np.arange(N) >= n)
    f0 = free[rows, r0] & (w > 0)
    f1 = free[rows, r1] & (w > 0)
    k0, k1 = r0 - n, r1 - n
    Gt = np.swapaxes(G, -1, -2)
    # second variation of each edge length: transverse terms from Jacobi
    # fields, a small floor along the edge; frames are matched through G and
    # both orientations are averaged
    own, cross = space.jacobi(dd)
    floor = NEWTON_FLOOR / np.maximum(dd, 1e-14)
    T0, U0 = _split(c01)
    T1, U1 = _split(c10)
    wo, wc, wf = (0.5 * v[..., None, None] for v in (own, cross, floor))
    S0 = wo * T0 + wf * U0
    S1 = wo * T1 + wf * U1
    C0 = wc * T0 + wf * U0
    C1 = wc * T1 + wf * U1
    blocks = [(k0, k0, f0, S0 + G @ S1 @ Gt),
              (k1, k1, f1, S1 + Gt @ S0 @ G),
              (k0, k1, f0 & f1, -(C0 @ G + G @ C1))]
    blocks.append((k1, k0, f0 & f1, np.swapaxes(blocks[2][3], -1, -2)))
    ij = np.arange(2)
    idx, val = [], []
    for kr, kc, mask, A in blocks:
        flat = (((rows * K + kr)[..., None, None] * 2 + ij[:, None]) * K
                + kc[..., None, None]) * 2 + ij
        idx.append(flat[mask].ravel())
        val.append(A[mask].ravel())
    H = np.bincount(np.concatenate(idx), np.concatenate(val), b * 4 * K * K).reshape(b, 2 * K, 2 * K)
    # exact length gradient (the matrix only preconditions it, so the step is
    # a descent direction on every chart)
    gi = [((rows * K + k0)[..., None] * 2 + ij)[f0].ravel(), ((rows * K + k1)[..., None] * 2 + ij)[f1].ravel()]
    gv = [(-2.0 * w[..., None] * c01)[f0].ravel(), (-2.0 * w[..., None] * c10)[f1].ravel()]
    g = np.bincount(np.concatenate(gi), np.concatenate(gv), b * 2 * K)
    idle = ~free[:, n:]
    H = H + np.repeat(idle, 2, axis=1)[:, :, None] * np.eye(2 * K)
    # positive curvature can make the model indefinite: shift it
    H = 0.5 * (H + np.swapaxes(H, -1, -2))
    low = np.linalg.eigvalsh(H)[:, 0]
    level = np.trace(H, axis1=1, axis2=2) / (2 * K)
    shift = np.maximum(0.0, SHIFT_FLOOR * level - low)
    H = H + shift[:, None, None] * np.eye(2 * K)
    a = np.linalg.solve(H, -g.reshape(b, 2 * K, 1)).reshape(b, K, 2)
    step = np.zeros_like(X)
    step[:, n:] = np.einsum("bki,bkid->bkd", a, F[:, n:])
    step = np.where(free[..., None], step, 0.0)
    if scale is not None:
        # keep each move within a fixed fraction of the configuration diameter
        norm = np.maximum(space.norm(step), 1e-300)
        step = step * np.minimum(1.0, STEP_CAP * scale[:, None] / norm)[..., None]
    return step


def _split(c):
    """Projectors across and along the direction ``c`` (2-vectors)."""
    n2 = np.sum(c * c, axis=-1)[..., None, None]
    uu = c[..., :, None] * c[..., None, :] / np.maximum(n2, 1e-300)
    return np.eye(2) - uu, uu


def _try_merge(space, st, n, active):
    """Try every short edge at a free cluster as a merge; keep the best one that
    does not lengthen the tree.  Testing well beyond the collapse radius skips
    the slow sublinear approach of a Steiner point to its limit vertex."""
    b, E = st.edges.shape[:2]
    rows = np.arange(b)[:, None]
    e0, e1 = st.edges[..., 0], st.edges[..., 1]
    r0, r1 = st.rep[rows, e0], st.rep[rows, e1]
    dd = space.dist(st.X[rows, e0], st.X[rows, e1])
    cand = (r0 != r1) & ((r0 >= n) | (r1 >= n)) & (dd < MERGE_TOL * st.scale[:, None]) & active[:, None]
    if not cand.any():
        return
    bi, ki = np.nonzero(cand)
    a, c = r0[bi, ki], r1[bi, ki]
    # a terminal cluster absorbs a free one; two free clusters keep the lower
    # index and are tried at either endpoint
    target = np.where(a < n, a, np.where(c < n, c, np.minimum(a, c)))
    source = np.where(target == a, c, a)
    where = target.copy()
    both = (a >= n) & (c >= n)
    bi = np.concatenate([bi, bi[both]])
    target = np.concatenate([target, target[both]])
    source = np.concatenate([source, source[both]])
    where = np.concatenate([where, source[-both.sum():] if both.any() else where[:0]])
    rep_m = np.where(st.rep[bi] == source[:, None], target[:, None], st.rep[bi])
    X_base = st.X[bi].copy()
    X_base[np.arange(bi.size), target] = st.X[bi, where]
    X_m = X_base[np.arange(bi.size)[:, None], rep_m]
    E_m = st.edges[bi]
    f_m = tree_length(space, X_m, E_m)
    idx = np.arange(bi.size)[:, None]
    for _ in range(MERGE_RELAX):
        step = _newton_step(space, X_m, rep_m, E_m, n, st.scale[bi])
        for lam in (1.0, 0.5):
            X_r = space.exp(X_m, lam * step)[idx, rep_m]
            f_r = tree_length(space, X_r, E_m)
            better = f_r < f_m
            X_m = np.where(better[:, None, None], X_r, X_m)
            f_m = np.where(better, f_r, f_m)
    best = np.full(b, np.inf)
    np.minimum.at(best, bi, f_m)
    # first candidate (lowest edge index) attaining the member's best length
    pick = np.zeros(b, dtype=int) - 1
    hit = np.flatnonzero(f_m == best[bi])
    pick[bi[hit[::-1]]] = hit[::-1]
    ok = (pick >= 0) & (best <= st.f)
    sel = pick[ok]
    st.rep[ok] = rep_m[sel]
    st.X[ok] = X_m[sel]
    st.f[ok] = f_m[sel]


def _try_split(space, st, pull, pull_n, wants_split, active):
    todo = wants_split.any(axis=1) & active
    if not todo.any():
        return
    b, N, _ = st.X.shape
    r = np.arange(b)
    v = np.argmax(np.where(wants_split, pull_n, -1.0), axis=1)
    direction = np.where(todo[:, None], pull[r, v] / np.maximum(pull_n[r, v], 1.0)[:, None], 0.0)
    moved = space.exp(st.X[r, v], (SPLIT_STEP * st.scale)[:, None] * direction)
    X_s = st.X.copy()
    X_s[r, v] = moved
    rep_s = st.rep.copy()
    rep_s[r, v] = v
    f_s = tree_length(space, X_s, st.edges)
    ok = todo & (f_s < st.f)
    st.rep = np.where(ok[:, None], rep_s, st.rep)
    st.X = np.where(ok[:, None, None], X_s, st.X)
    st.f = np.where(ok, f_s, st.f)
