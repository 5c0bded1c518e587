"""Loop kernels over CSR arrays.

All arrays are int64. Community ids are in ``[0, n)``; ``size[c] == 0`` means
the id is unused. Scratch arrays passed in must be zero on entry and are left
zeroed on exit.
"""

import numpy as np

from ._accel import njit


# ---------------------------------------------------------------------------
# greedy sweeps


@njit
def node_pass(indptr, indices, order, assignment, size, intra, count, touched, deltas):
    """One sweep of best-improvement single-node moves; returns the move count.

    ``deltas[i]`` receives the correct-pair gain of the i-th accepted move.
    """
    moves = 0
    for idx in range(order.shape[0]):
        u = order[idx]
        a = assignment[u]
        nt = 0
        for j in range(indptr[u], indptr[u + 1]):
            c = assignment[indices[j]]
            if count[c] == 0:
                touched[nt] = c
                nt += 1
            count[c] += 1
        d_a = count[a]
        leave = size[a] - 1 - 2 * d_a
        best = 0
        best_c = -1
        best_d = 0
        for i in range(nt):
            c = touched[i]
            if c == a:
                continue
            d = leave + 2 * count[c] - size[c]
            if d > best or (d == best and d > 0 and c < best_c):
                best = d
                best_c = c
                best_d = count[c]
        for i in range(nt):
            count[touched[i]] = 0
        if best_c >= 0:
            intra[a] -= d_a
            intra[best_c] += best_d
            size[a] -= 1
            size[best_c] += 1
            assignment[u] = best_c
            deltas[moves] = best
            moves += 1
    return moves


@njit
def merge_pass(indptr, indices, order, assignment, size, intra, count, touched, deltas):
    """One sweep of best-improvement merges with adjacent communities.

    ``order`` lists community ids to visit; dead ids are skipped. The merged
    community keeps the smaller id. Returns the merge count.
    """
    n = assignment.shape[0]
    head = np.full(n, -1, np.int64)
    tail = np.full(n, -1, np.int64)
    nxt = np.full(n, -1, np.int64)
    for u in range(n - 1, -1, -1):
        c = assignment[u]
        if head[c] == -1:
            tail[c] = u
        nxt[u] = head[c]
        head[c] = u

    merges = 0
    for idx in range(order.shape[0]):
        c = order[idx]
        if size[c] == 0:
            continue
        nt = 0
        u = head[c]
        while u != -1:
            for j in range(indptr[u], indptr[u + 1]):
                d = assignment[indices[j]]
                if d != c:
                    if count[d] == 0:
                        touched[nt] = d
                        nt += 1
                    count[d] += 1
            u = nxt[u]
        best = 0
        best_c = -1
        best_e = 0
        for i in range(nt):
            d = touched[i]
            delta = 2 * count[d] - size[c] * size[d]
            if delta > best or (delta == best and delta > 0 and d < best_c):
                best = delta
                best_c = d
                best_e = count[d]
        for i in range(nt):
            count[touched[i]] = 0
        if best_c >= 0:
            keep = min(c, best_c)
            gone = max(c, best_c)
            u = head[gone]
            while u != -1:
                assignment[u] = keep
                u = nxt[u]
            nxt[tail[keep]] = head[gone]
            tail[keep] = tail[gone]
            head[gone] = -1
            tail[gone] = -1
            size[keep] += size[gone]
            intra[keep] += intra[gone] + best_e
            size[gone] = 0
            intra[gone] = 0
            deltas[merges] = best
            merges += 1
    return merges


# ---------------------------------------------------------------------------
# fastFp candidate graph


@njit
def edge_triangles(indptr, indices):
    """For every CSR slot ``j`` (edge u->v) the sorted common neighbours of u, v.

    Returned as ``(tri_ptr, tri_idx)`` with slot ``j``'s list in
    ``tri_idx[tri_ptr[j]:tri_ptr[j+1]]``.
    """
    n = indptr.shape[0] - 1
    nslots = indices.shape[0]
    counts = np.zeros(nslots, np.int64)
    for u in range(n):
        for j in range(indptr[u], indptr[u + 1]):
            v = indices[j]
            a, a_end = indptr[u], indptr[u + 1]
            b, b_end = indptr[v], indptr[v + 1]
            c = 0
            while a < a_end and b < b_end:
                x, y = indices[a], indices[b]
                if x == y:
                    c += 1
                    a += 1
                    b += 1
                elif x < y:
                    a += 1
                else:
                    b += 1
            counts[j] = c
    tri_ptr = np.zeros(nslots + 1, np.int64)
    for j in range(nslots):
        tri_ptr[j + 1] = tri_ptr[j] + counts[j]
    tri_idx = np.empty(tri_ptr[nslots], np.int64)
    for u in range(n):
        for j in range(indptr[u], indptr[u + 1]):
            v = indices[j]
            a, a_end = indptr[u], indptr[u + 1]
            b, b_end = indptr[v], indptr[v + 1]
            p = tri_ptr[j]
            while a < a_end and b < b_end:
                x, y = indices[a], indices[b]
                if x == y:
                    tri_idx[p] = x
                    p += 1
                    a += 1
                    b += 1
                elif x < y:
                    a += 1
                else:
                    b += 1
    return tri_ptr, tri_idx


@njit
def candidate_edges(indptr, indices, tri_ptr, tri_idx, threshold, per_edge):
    """All pairs ``u < v`` whose common-neighbour weight reaches ``threshold``.

    weight = 2k + e (+1 if adjacent), k = |CN(u,v)|, e = ``per_edge`` times the
    number of edges among the common neighbours. For a fixed ``u``, ``e`` is
    accumulated from the edges inside N(u): each such edge (w1, w2) adds
    ``per_edge`` to every v that is also adjacent to both w1 and w2.
    """
    n = indptr.shape[0] - 1
    kcnt = np.zeros(n, np.int64)
    ecnt = np.zeros(n, np.int64)
    stamp = np.full(n, -1, np.int64)
    touched = np.empty(n, np.int64)
    cap = 1024
    out_u = np.empty(cap, np.int64)
    out_v = np.empty(cap, np.int64)
    out_w = np.empty(cap, np.int64)
    size = 0
    for u in range(n):
        for j in range(indptr[u], indptr[u + 1]):
            stamp[indices[j]] = u
        nt = 0
        for j in range(indptr[u], indptr[u + 1]):
            w = indices[j]
            for jj in range(indptr[w], indptr[w + 1]):
                v = indices[jj]
                if v > u:
                    if kcnt[v] == 0:
                        touched[nt] = v
                        nt += 1
                    kcnt[v] += 1
        for j in range(indptr[u], indptr[u + 1]):
            w1 = indices[j]
            for jj in range(indptr[w1], indptr[w1 + 1]):
                w2 = indices[jj]
                if w2 > w1 and stamp[w2] == u:
                    for q in range(tri_ptr[jj], tri_ptr[jj + 1]):
                        v = tri_idx[q]
                        if v > u:
                            ecnt[v] += per_edge
        # adjacent pairs without common neighbours only matter for threshold 1
        if threshold <= 1:
            for j in range(indptr[u], indptr[u + 1]):
                v = indices[j]
                if v > u and kcnt[v] == 0:
                    touched[nt] = v
                    nt += 1
        for i in range(nt):
            v = touched[i]
            wgt = 2 * kcnt[v] + ecnt[v]
            if stamp[v] == u:
                wgt += 1
            if wgt >= threshold:
                if size == cap:
                    cap *= 2
                    nu = np.empty(cap, np.int64)
                    nv = np.empty(cap, np.int64)
                    nw = np.empty(cap, np.int64)
                    nu[:size] = out_u[:size]
                    nv[:size] = out_v[:size]
                    nw[:size] = out_w[:size]
                    out_u, out_v, out_w = nu, nv, nw
                out_u[size] = u
                out_v[size] = v
                out_w[size] = wgt
                size += 1
            kcnt[v] = 0
            ecnt[v] = 0
    return out_u[:size].copy(), out_v[:size].copy(), out_w[:size].copy()


@njit
def extract_seeds(n, g2_indptr, g2_indices, eu, ev, ew, order):
    """Greedy strongest-edge seed extraction over the candidate graph.

    ``order`` visits candidate edges by decreasing weight; an edge is usable
    while both endpoints survive. Returns ``(labels, picked)``: seed id per
    node (-1 for leftovers) and the index of every edge that formed a seed.
    """
    labels = np.full(n, -1, np.int64)
    picked = np.empty(order.shape[0], np.int64)
    npicked = 0
    comm = 0
    for idx in range(order.shape[0]):
        e = order[idx]
        u = eu[e]
        v = ev[e]
        if labels[u] != -1 or labels[v] != -1:
            continue
        a, a_end = g2_indptr[u], g2_indptr[u + 1]
        b, b_end = g2_indptr[v], g2_indptr[v + 1]
        while a < a_end and b < b_end:
            x, y = g2_indices[a], g2_indices[b]
            if x == y:
                if labels[x] == -1:
                    labels[x] = comm
                a += 1
                b += 1
            elif x < y:
                a += 1
            else:
                b += 1
        labels[u] = comm
        labels[v] = comm
        picked[npicked] = e
        npicked += 1
        comm += 1
    return labels, picked[:npicked].copy()


# ---------------------------------------------------------------------------
# exhaustive oracle


@njit
def best_partitions(n, adj, max_keep):
    """Enumerate every set partition as a restricted growth string.

    ``adj`` is a dense 0/1 matrix. Each partition is scored by the direct pair
    count (same block and edge, or different blocks and no edge). Returns
    ``(best, count, kept, nkept)`` with up to ``max_keep`` maximizing strings.
    """
    rgs = np.zeros(n, np.int64)
    maxv = np.zeros(n, np.int64)  # maxv[i] = max(rgs[:i]) (maxv[0] unused)
    kept = np.zeros((max_keep, n), np.int64)
    nkept = 0
    best = -1
    count = 0
    while True:
        score = 0
        for i in range(n):
            for j in range(i + 1, n):
                same = rgs[i] == rgs[j]
                if same == (adj[i, j] != 0):
                    score += 1
        count += 1
        if score > best:
            best = score
            nkept = 0
        if score == best:
            if nkept < max_keep:
                kept[nkept, :] = rgs
            nkept += 1
        # next restricted growth string
        i = n - 1
        while i > 0 and rgs[i] > maxv[i]:
            i -= 1
        if i <= 0:
            break
        rgs[i] += 1
        for k in range(i + 1, n):
            rgs[k] = 0
            maxv[k] = max(maxv[k - 1], rgs[k - 1])
    return best, count, kept, nkept


def warmup() -> None:
    """Trigger compilation (or cache loading) of every kernel on a triangle."""
    indptr = np.array([0, 2, 4, 6], np.int64)
    indices = np.array([1, 2, 0, 2, 0, 1], np.int64)
    # Graph arrays are read-only, which numba compiles as a separate signature
    indptr.setflags(write=False)
    indices.setflags(write=False)
    order = np.arange(3, dtype=np.int64)
    for kernel in (node_pass, merge_pass):
        scratch = [np.zeros(3, np.int64) for _ in range(3)]
        kernel(indptr, indices, order, np.arange(3, dtype=np.int64), np.ones(3, np.int64),
               np.zeros(3, np.int64), *scratch)
    tri_ptr, tri_idx = edge_triangles(indptr, indices)
    u, v, w = candidate_edges(indptr, indices, tri_ptr, tri_idx, 3, 1)
    extract_seeds(3, indptr, indices, u, v, w, np.arange(u.shape[0], dtype=np.int64))
    best_partitions(2, np.array([[0, 1], [1, 0]], np.int64), 1)
