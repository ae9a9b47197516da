"""
Interval propagation store over natural-number cells.

Every cell carries a closed interval [lo, hi] (hi None means unbounded) and a
branching limit. Propagators narrow intervals to a fixpoint; the search then
branches on unfixed cells, smallest value first, up to min(hi, limit).
"""
import logging
from collections import deque
from typing import Callable, Dict, Iterator, List, Optional, Sequence

import config

logger = logging.getLogger(__name__)

Bounds = List[Optional[int]]


def _add(x: Optional[int], y: Optional[int]) -> Optional[int]:
    if x is None or y is None:
        return None
    return x + y


def _narrow(lo: List[int], hi: Bounds, c: int, new_lo: Optional[int], new_hi: Optional[int], changed: List[int]) -> bool:
    l, h = lo[c], hi[c]
    if new_lo is not None and new_lo > l:
        l = new_lo
    if new_hi is not None and (h is None or new_hi < h):
        h = new_hi
    if h is not None and l > h:
        return False
    if l != lo[c] or h != hi[c]:
        lo[c], hi[c] = l, h
        changed.append(c)
    return True


class Propagator:
    """Base class; run narrows the domains and returns the changed cells, or None on failure."""
    cells: Sequence[int] = ()

    def run(self, lo: List[int], hi: Bounds) -> Optional[List[int]]:
        raise NotImplementedError


class CopyProp(Propagator):
    """i = j"""

    def __init__(self, i: int, j: int):
        self.i, self.j = i, j
        self.cells = (i, j)

    def run(self, lo, hi):
        ch: List[int] = []
        i, j = self.i, self.j
        if not _narrow(lo, hi, i, lo[j], hi[j], ch) or not _narrow(lo, hi, j, lo[i], hi[i], ch):
            return None
        return ch


class AddProp(Propagator):
    """i = j + k"""

    def __init__(self, i: int, j: int, k: int):
        self.i, self.j, self.k = i, j, k
        self.cells = (i, j, k)

    def run(self, lo, hi):
        ch: List[int] = []
        i, j, k = self.i, self.j, self.k
        if not _narrow(lo, hi, i, lo[j] + lo[k], _add(hi[j], hi[k]), ch):
            return None
        if not _narrow(lo, hi, j, None if hi[k] is None else lo[i] - hi[k], None if hi[i] is None else hi[i] - lo[k], ch):
            return None
        if not _narrow(lo, hi, k, None if hi[j] is None else lo[i] - hi[j], None if hi[i] is None else hi[i] - lo[j], ch):
            return None
        return ch


class MulProp(Propagator):
    """i = j * k"""

    def __init__(self, i: int, j: int, k: int):
        self.i, self.j, self.k = i, j, k
        self.cells = (i, j, k)

    def run(self, lo, hi):
        ch: List[int] = []
        i, j, k = self.i, self.j, self.k
        if hi[j] == 0 or hi[k] == 0:
            top = 0
        else:
            top = None if hi[j] is None or hi[k] is None else hi[j] * hi[k]
        if not _narrow(lo, hi, i, lo[j] * lo[k], top, ch):
            return None
        for a, b in ((j, k), (k, j)):
            new_lo = None
            if lo[i] > 0:
                # a*b >= lo_i with b <= hi_b forces a >= ceil(lo_i / hi_b)
                if hi[b] == 0:
                    return None
                new_lo = 1 if hi[b] is None else -(-lo[i] // hi[b])
            new_hi = None
            if lo[b] > 0 and hi[i] is not None:
                new_hi = hi[i] // lo[b]
            if not _narrow(lo, hi, a, new_lo, new_hi, ch):
                return None
        return ch


class OracleProp(Propagator):
    """
    Host predicate over a tuple of cells.

    check(values) decides the relation once every cell is fixed; derive(values),
    with None for unfixed cells, may return {position: value} to fix further
    cells, or None when nothing follows.
    """

    def __init__(
        self,
        cells: Sequence[int],
        check: Callable[..., bool],
        derive: Optional[Callable[..., Optional[Dict[int, int]]]] = None,
        name: str = "oracle",
    ):
        self.cells = tuple(cells)
        self.check = check
        self.derive = derive
        self.name = name

    def run(self, lo, hi):
        values = [lo[c] if hi[c] == lo[c] else None for c in self.cells]
        if all(v is not None for v in values):
            return [] if self.check(*values) else None
        if self.derive is None:
            return []
        derived = self.derive(*values)
        if not derived:
            return []
        ch: List[int] = []
        for pos, value in derived.items():
            if not _narrow(lo, hi, self.cells[pos], value, value, ch):
                return None
        return ch


class Store:
    """
    Cells, propagators and a depth-first solution generator.

    Example:
        >>> s = Store()
        >>> x, y = s.cell(hi=5), s.cell(hi=5)
        >>> s.post(AddProp(s.const(7), x, y))
        >>> next(s.solutions())[:2]
        [2, 5]
    """

    def __init__(self, max_runs: Optional[int] = None):
        self.lo: List[int] = []
        self.hi: Bounds = []
        self.limit: List[int] = []
        self.props: List[Propagator] = []
        self.watchers: List[List[int]] = []
        self.max_runs = max_runs if max_runs is not None else config.SOLVER["max_propagations"]
        self._consts: Dict[int, int] = {}
        self.nodes = 0

    def __len__(self) -> int:
        return len(self.lo)

    def cell(self, lo: int = 0, hi: Optional[int] = None, limit: Optional[int] = None) -> int:
        """New cell with domain [lo, hi]; branching never goes beyond limit."""
        if limit is None:
            limit = hi if hi is not None else config.SOLVER["value_cap"]
        self.lo.append(lo)
        self.hi.append(hi)
        self.limit.append(limit)
        self.watchers.append([])
        return len(self.lo) - 1

    def const(self, value: int) -> int:
        """Shared cell fixed to value."""
        c = self._consts.get(value)
        if c is None:
            c = self.cell(value, value)
            self._consts[value] = c
        return c

    def fix(self, c: int, value: int) -> bool:
        if value < self.lo[c] or (self.hi[c] is not None and value > self.hi[c]):
            return False
        self.lo[c] = self.hi[c] = value
        return True

    def post(self, prop: Propagator):
        idx = len(self.props)
        self.props.append(prop)
        for c in set(prop.cells):
            self.watchers[c].append(idx)

    def propagate(self, lo: List[int], hi: Bounds, seeds: Optional[Sequence[int]] = None) -> bool:
        """Run the propagators reachable from seeds (all when None) to a fixpoint, or until max_runs."""
        queue = deque(range(len(self.props)) if seeds is None else seeds)
        queued = [False] * len(self.props)
        for p in queue:
            queued[p] = True
        runs = 0
        while queue:
            if runs >= self.max_runs:
                logger.debug(f"propagation stopped after {runs} runs")
                return True
            p = queue.popleft()
            queued[p] = False
            runs += 1
            changed = self.props[p].run(lo, hi)
            if changed is None:
                return False
            for c in changed:
                for q in self.watchers[c]:
                    if not queued[q]:
                        queued[q] = True
                        queue.append(q)
        return True

    def _top(self, hi: Bounds, c: int) -> int:
        return self.limit[c] if hi[c] is None else min(hi[c], self.limit[c])

    def _pick(self, lo: List[int], hi: Bounds, order: Sequence[int], smallest_first: bool) -> Optional[int]:
        for c in order:
            if hi[c] != lo[c]:
                return c
        best, best_size = None, None
        for c in range(len(lo)):
            if hi[c] == lo[c]:
                continue
            if not smallest_first:
                return c
            size = self._top(hi, c) - lo[c]
            if best is None or size < best_size:
                best, best_size = c, size
        return best

    def solutions(self, order: Sequence[int] = (), smallest_first: bool = False) -> Iterator[List[int]]:
        """
        Yield every total assignment consistent with the propagators.

        Cells listed in order are branched first, in that order; the rest by
        index, or by smallest remaining domain when smallest_first is set.
        With order empty and smallest_first unset, solutions come in
        lexicographic order of the cell values.
        """
        lo, hi = list(self.lo), list(self.hi)
        if not self.propagate(lo, hi):
            return
        c = self._pick(lo, hi, order, smallest_first)
        if c is None:
            if self._complete(lo):
                yield lo
            return
        pending = [[lo, hi, c, lo[c], self._top(hi, c)]]
        while pending:
            frame = pending[-1]
            plo, phi, c, v, top = frame
            if v > top:
                pending.pop()
                continue
            frame[3] = v + 1
            self.nodes += 1
            nlo, nhi = list(plo), list(phi)
            nlo[c] = nhi[c] = v
            if not self.propagate(nlo, nhi, self.watchers[c]):
                continue
            nc = self._pick(nlo, nhi, order, smallest_first)
            if nc is None:
                if self._complete(nlo):
                    yield nlo
                continue
            pending.append([nlo, nhi, nc, nlo[nc], self._top(nhi, nc)])

    def _complete(self, values: List[int]) -> bool:
        """Re-check every propagator on a total assignment; needed when propagation was cut short."""
        hi = list(values)
        lo = list(values)
        return all(p.run(lo, hi) is not None for p in self.props)

    def first(self, order: Sequence[int] = (), smallest_first: bool = False) -> Optional[List[int]]:
        return next(self.solutions(order, smallest_first), None)
