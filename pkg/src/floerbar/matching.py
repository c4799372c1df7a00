"""Maximum bipartite matching via Hopcroft-Karp.

Deterministic, adjacency-list based; vertices of both sides are indexed
0..n-1.  Used by the bottleneck metric to decide feasibility of a candidate
matching tolerance, so the graphs involved are small.
"""

from __future__ import annotations

from collections import deque
from typing import List, Sequence

__all__ = ["max_bipartite_matching"]

_NIL = -1


def max_bipartite_matching(num_left: int, num_right: int,
                           adjacency: Sequence[Sequence[int]]) -> List[int]:
    """Return ``match_left`` with ``match_left[u] = v`` (or -1 if unmatched).

    ``adjacency[u]`` lists the right-side neighbours of left vertex ``u``.
    """
    match_left = [_NIL] * num_left
    match_right = [_NIL] * num_right
    inf = num_left + 1
    dist = [0] * num_left

    def bfs() -> bool:
        queue = deque()
        for u in range(num_left):
            if match_left[u] == _NIL:
                dist[u] = 0
                queue.append(u)
            else:
                dist[u] = inf
        reachable_free = False
        while queue:
            u = queue.popleft()
            for v in adjacency[u]:
                w = match_right[v]
                if w == _NIL:
                    reachable_free = True
                elif dist[w] == inf:
                    dist[w] = dist[u] + 1
                    queue.append(w)
        return reachable_free

    def dfs(u: int) -> bool:
        for v in adjacency[u]:
            w = match_right[v]
            if w == _NIL or (dist[w] == dist[u] + 1 and dfs(w)):
                match_left[u] = v
                match_right[v] = u
                return True
        dist[u] = inf
        return False

    while bfs():
        for u in range(num_left):
            if match_left[u] == _NIL:
                dfs(u)
    return match_left
