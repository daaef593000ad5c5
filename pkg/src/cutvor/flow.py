"""Edmonds-Karp maximum flow on integer capacities."""

from __future__ import annotations

from collections import deque
from typing import Hashable


class FlowNetwork:
    def __init__(self):
        self.cap: dict[Hashable, dict[Hashable, int]] = {}

    def add_arc(self, a: Hashable, b: Hashable, capacity: int):
        if capacity < 0:
            raise ValueError("negative capacity")
        self.cap.setdefault(a, {})
        self.cap.setdefault(b, {})
        self.cap[a][b] = self.cap[a].get(b, 0) + capacity
        self.cap[b].setdefault(a, 0)

    def max_flow(self, source: Hashable, sink: Hashable) -> int:
        if source not in self.cap or sink not in self.cap:
            return 0
        residual = {a: dict(nbrs) for a, nbrs in self.cap.items()}
        total = 0
        while True:
            parent = {source: None}
            queue = deque([source])
            while queue and sink not in parent:
                a = queue.popleft()
                for b, c in residual[a].items():
                    if c > 0 and b not in parent:
                        parent[b] = a
                        queue.append(b)
            if sink not in parent:
                return total
            bottleneck = None
            b = sink
            while parent[b] is not None:
                a = parent[b]
                c = residual[a][b]
                bottleneck = c if bottleneck is None else min(bottleneck, c)
                b = a
            b = sink
            while parent[b] is not None:
                a = parent[b]
                residual[a][b] -= bottleneck
                residual[b][a] += bottleneck
                b = a
            total += bottleneck
