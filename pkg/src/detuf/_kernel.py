"""Compiled engine for whole-trace step statistics.

Replays an edge sequence one insertion at a time while maintaining, in
O(1) amortized bookkeeping per touched edge:

* ``Q`` = sum over components of c*(c-1), where c counts active external
  edges whose "smaller" adjacent root is that component. The exact pair
  collision probability at a step is Q / (A*(A-1)) for A active edges.
* ``D`` = sum over active edges of endpoint depths in the uncompressed
  (shadow) forest, and ``F`` = the frozen rank contributions of already
  inserted edges, which together give the potential trace.

Classification lists are intrusive linked lists over flat arrays; entries
go stale only when their edge is reclassified during a merge walk (while
that very list is being consumed) or inserted (skipped by a tag check),
so chains never corrupt. Only the class lists of the two merging roots
can change on a merge: for any edge classified elsewhere, its smaller
side stays strictly smaller when an adjacent component grows.

Results are validated against the pure-Python exact engine in the tests;
this module is an internal speed path, not a public surface.
"""

import numpy as np
from numba import njit

KIND_SIZE = 0
KIND_RANK = 1
KIND_PRIORITY = 2


@njit(inline="always")
def _less(kind, a, b, size, rank, prio):
    if kind == KIND_SIZE:
        if size[a] != size[b]:
            return size[a] < size[b]
    elif kind == KIND_RANK:
        if rank[a] != rank[b]:
            return rank[a] < rank[b]
    return prio[a] < prio[b]


@njit(inline="always")
def _less_than_merged(kind, other, w, merged_size, merged_rank, size, rank, prio):
    # compare `other` against the not-yet-written merged component rooted at w
    if kind == KIND_SIZE:
        if size[other] != merged_size:
            return size[other] < merged_size
    elif kind == KIND_RANK:
        if rank[other] != merged_rank:
            return rank[other] < merged_rank
    return prio[other] < prio[w]


@njit(cache=True)
def trace_kernel(n, eu, ev, kind, prio):
    m = eu.shape[0]
    par = np.arange(n)
    size = np.ones(n, np.int64)
    rank = np.zeros(n, np.int64)
    depth = np.zeros(n, np.int64)
    adeg = np.zeros(n, np.int64)
    memb_head = np.arange(n)
    memb_tail = np.arange(n)
    memb_next = np.full(n, -1, np.int64)
    # the per-edge arrays are walked in random order during merges; int32
    # halves their footprint (edge and vertex ids stay below 2**31)
    cls = np.full(m, -1, np.int32)
    cls_head = np.full(n, -1, np.int32)
    cls_next = np.full(m, -1, np.int32)
    ccount = np.zeros(n, np.int64)

    out_c = np.empty(m, np.int64)
    out_q = np.empty(m, np.int64)
    out_d = np.empty(m, np.int64)
    out_f = np.empty(m, np.float64)
    frozen = np.zeros(m, np.int64)
    merged = np.zeros(m, np.uint8)

    q = 0
    d = 0
    f = 0.0
    comp = n

    for e in range(m):
        adeg[eu[e]] += 1
        adeg[ev[e]] += 1
    # initial classification: every vertex is a singleton root
    for e in range(m):
        u = eu[e]
        v = ev[e]
        s = u if _less(kind, u, v, size, rank, prio) else v
        cls[e] = s
        q += 2 * ccount[s]
        ccount[s] += 1
        cls_next[e] = cls_head[s]
        cls_head[s] = e

    for t in range(m):
        out_c[t] = comp
        out_q[t] = q
        out_d[t] = d
        out_f[t] = f

        u = eu[t]
        v = ev[t]
        ru = u
        while par[ru] != ru:
            par[ru] = par[par[ru]]
            ru = par[ru]
        rv = v
        while par[rv] != rv:
            par[rv] = par[par[rv]]
            rv = par[rv]

        # edge t leaves the active set (depths not yet changed by the merge)
        adeg[u] -= 1
        adeg[v] -= 1
        d -= depth[u] + depth[v]

        if ru != rv:
            old = cls[t]
            q -= 2 * (ccount[old] - 1)
            ccount[old] -= 1
            cls[t] = -1

            if _less(kind, ru, rv, size, rank, prio):
                loser, winner = ru, rv
            else:
                loser, winner = rv, ru
            merged_size = size[ru] + size[rv]
            if rank[ru] == rank[rv]:
                merged_rank = rank[winner] + 1
            else:
                merged_rank = rank[winner]

            # only edges classified to ru or rv can change side: rebuild
            # those two lists against the post-merge sizes
            q -= ccount[ru] * (ccount[ru] - 1) + ccount[rv] * (ccount[rv] - 1)
            new_head = np.int32(-1)
            cnew = 0
            for pass_idx in range(2):
                root0 = ru if pass_idx == 0 else rv
                cur = cls_head[root0]
                while cur != -1:
                    nxt = cls_next[cur]
                    if cls[cur] == root0:
                        # one endpoint's root is root0 by the class
                        # invariant; resolve the second only when needed
                        x = eu[cur]
                        while par[x] != x:
                            par[x] = par[par[x]]
                            x = par[x]
                        if x == root0:
                            y = ev[cur]
                            while par[y] != y:
                                par[y] = par[par[y]]
                                y = par[y]
                            other = y
                        else:
                            other = x
                        if other == ru or other == rv:
                            cls[cur] = -1  # internal once the merge lands
                        elif _less_than_merged(kind, other, winner, merged_size,
                                               merged_rank, size, rank, prio):
                            cls[cur] = other
                            q += 2 * ccount[other]
                            ccount[other] += 1
                            cls_next[cur] = cls_head[other]
                            cls_head[other] = cur
                        else:
                            cls[cur] = winner
                            q += 2 * cnew
                            cnew += 1
                            cls_next[cur] = new_head
                            new_head = cur
                    cur = nxt
            ccount[ru] = 0
            ccount[rv] = 0
            ccount[winner] = cnew
            cls_head[loser] = -1
            cls_head[winner] = new_head

            # loser's subtree hangs one level deeper; D grows by the
            # active degree of every vertex moved
            cur = memb_head[loser]
            while cur != -1:
                depth[cur] += 1
                d += adeg[cur]
                cur = memb_next[cur]
            memb_next[memb_tail[winner]] = memb_head[loser]
            memb_tail[winner] = memb_tail[loser]

            par[loser] = winner
            size[winner] = merged_size
            rank[winner] = merged_rank
            comp -= 1
            merged[t] = 1

        # rank of edge t frozen immediately after it is applied;
        # its multiplier uses the 1-based insertion index t+1
        fr = depth[u] + depth[v]
        frozen[t] = fr
        if t + 1 < m:
            f += (m / (m - (t + 1))) * fr

    return out_c, out_q, out_d, out_f, frozen, merged, depth


_KIND_CODES = {"size": KIND_SIZE, "rank": KIND_RANK, "priority": KIND_PRIORITY}


def run_trace_kernel(n, eu, ev, kind: str, priorities):
    """Typed front door for :func:`trace_kernel`."""
    prio = np.ascontiguousarray(priorities, dtype=np.int64)
    eu = np.ascontiguousarray(eu, dtype=np.int32)
    ev = np.ascontiguousarray(ev, dtype=np.int32)
    return trace_kernel(n, eu, ev, _KIND_CODES[kind], prio)
