"""Pivot manager lifecycle: dual pools, reader tokens, deferred reclamation.

Two pools alternate as working and waiting. Readers enter a read-side section
and get a token that pins the working pool of that instant; publication swaps
a fully built pool in atomically, so a reader never observes a partial build.
Retired pools and pivots go on a reclaim queue and are poisoned (freed flag)
only once every token issued before their retirement has exited, which the
sentinel checks in find_best_pivot turn into hard failures on any protocol bug.

Metadata modification invalidates the working pool in place: the first pivot
covered by the modified path and everything after it is flagged invalid,
covered pivots are dropped (survivors get their overlap repaired on fresh
objects so old snapshots stay self-consistent), survivors are re-validated,
and the waiting pool is marked totally invalid with the next swap suppressed.
"""

from __future__ import annotations

import itertools
import threading
from dataclasses import dataclass
from typing import Iterable, Optional

from .errors import ContractViolation
from .heat import CandidateSet, HeatEpoch
from .paths import PathBuf
from .pivots import Pivot, PivotPool, _lcp_components, build_pool
from .tree import Dentry, DirTree


@dataclass(slots=True)
class ReadToken:
    token_id: int
    generation: int
    pool: PivotPool


class ReclaimQueue:
    """Retired pools / pivot batches awaiting their grace period."""

    __slots__ = ("_entries",)

    def __init__(self) -> None:
        self._entries: list[tuple[object, int]] = []

    def push(self, payload: PivotPool | list[Pivot], retire_gen: int) -> None:
        self._entries.append((payload, retire_gen))

    @property
    def pending(self) -> int:
        return len(self._entries)

    def reclaim(self, min_active_gen: Optional[int]) -> int:
        """Poison every entry retired before the oldest active reader. Idempotent."""
        keep: list[tuple[object, int]] = []
        freed = 0
        for payload, gen in self._entries:
            if min_active_gen is not None and gen >= min_active_gen:
                keep.append((payload, gen))
                continue
            if isinstance(payload, PivotPool):
                payload.freed = True
                for pv in payload.pivots:
                    pv.freed = True
            else:
                for pv in payload:
                    pv.freed = True
            freed += 1
        self._entries = keep
        return freed


def _empty_pool(bound: int, component_capacity: int, generation: int, published: bool) -> PivotPool:
    pool = PivotPool([], bound, component_capacity, generation)
    pool.published = published
    return pool


class PivotManager:
    """Owns the pool pair, the heat epoch, and the candidate set lifecycle."""

    def __init__(
        self,
        tree: DirTree,
        candidates: CandidateSet,
        epoch: HeatEpoch,
        heat_lock: threading.Lock,
        pool_bound: int = 16,
        component_capacity: int = 8,
    ):
        self._tree = tree
        self._candidates = candidates
        self._epoch = epoch
        self._heat_lock = heat_lock
        self.pool_bound = pool_bound
        self.component_capacity = component_capacity
        self.generation = 0
        self._slots: dict[str, PivotPool] = {
            "A": _empty_pool(pool_bound, component_capacity, 0, published=True),
            "B": _empty_pool(pool_bound, component_capacity, 0, published=False),
        }
        self.working_selector = "A"
        self.waiting_invalid = False
        self.swap_suppressed_next_period = False
        self.reclaim_queue = ReclaimQueue()
        self._pool_mutex = threading.Lock()
        self._reader_lock = threading.Lock()
        self._readers: dict[int, int] = {}
        self._token_seq = itertools.count(1)
        self.ticks = 0
        self.swaps = 0

    # -- read side ------------------------------------------------------------

    @property
    def working_pool(self) -> PivotPool:
        return self._slots[self.working_selector]

    @property
    def waiting_selector(self) -> str:
        return "B" if self.working_selector == "A" else "A"

    def reader_enter(self) -> ReadToken:
        with self._reader_lock:
            pool = self._slots[self.working_selector]
            tid = next(self._token_seq)
            self._readers[tid] = pool.generation
            return ReadToken(tid, pool.generation, pool)

    def reader_exit(self, token: ReadToken) -> None:
        with self._reader_lock:
            if token.token_id not in self._readers:
                raise ContractViolation(f"token {token.token_id} released twice")
            del self._readers[token.token_id]

    @property
    def active_reader_count(self) -> int:
        with self._reader_lock:
            return len(self._readers)

    def oldest_active_generation(self) -> Optional[int]:
        with self._reader_lock:
            return min(self._readers.values(), default=None)

    # -- manager side -----------------------------------------------------------

    def periodic_update(self, candidates: Optional[Iterable[Dentry]] = None) -> bool:
        """One manager period: rebuild, maybe swap, then advance and drain heat.

        A metadata modification since the last period (flags set) discards the
        fresh build and keeps the current working pool for another period; in
        that case the heat version does not advance either. Returns whether a
        swap happened.
        """
        self.ticks += 1
        if candidates is None:
            with self._heat_lock:
                candidates = self._candidates.members()
        self._tree.lock.acquire_read()
        try:
            new_pool = build_pool(candidates, self.pool_bound, self.component_capacity)
        finally:
            self._tree.lock.release_read()

        swapped = False
        with self._pool_mutex:
            if self.waiting_invalid or self.swap_suppressed_next_period:
                self.waiting_invalid = False
                self.swap_suppressed_next_period = False
                self._slots[self.waiting_selector] = _empty_pool(
                    self.pool_bound, self.component_capacity, self.generation, published=False
                )
            else:
                self.generation += 1
                new_pool.generation = self.generation
                new_pool.published = True
                old = self._slots[self.working_selector]
                waiting = self.waiting_selector
                self._slots[waiting] = new_pool
                with self._reader_lock:
                    self.working_selector = waiting
                self.reclaim_queue.push(old, old.generation)
                self.swaps += 1
                swapped = True
        if swapped:
            with self._heat_lock:
                self._epoch.advance()
                self._candidates.drain_overdue(self._epoch)
        self.reclaim()
        return swapped

    def publish_pool(self, pool: PivotPool) -> None:
        """Directly install a hand-built pool (benches and tests)."""
        with self._pool_mutex:
            self.generation += 1
            pool.generation = self.generation
            pool.published = True
            old = self._slots[self.working_selector]
            waiting = self.waiting_selector
            self._slots[waiting] = pool
            with self._reader_lock:
                self.working_selector = waiting
            self.reclaim_queue.push(old, old.generation)
            self.swaps += 1

    def invalidate_for_metadata(self, path: PathBuf) -> int:
        """Drop every working-pool pivot covered by `path`; called pre-mutation.

        The waiting pool is marked totally invalid and the next swap is
        suppressed regardless of whether anything matched.
        """
        with self._pool_mutex:
            wp = self._slots[self.working_selector]
            pivots = wp.pivots
            prefix = path.components
            plen = len(prefix)
            covered = [i for i, p in enumerate(pivots) if p.names[:plen] == prefix]
            removed: list[Pivot] = []
            if covered:
                first = covered[0]
                # flag the suffix while the list is rearranged; old snapshots
                # skip these pivots instead of observing the surgery
                for p in pivots[first:]:
                    p.valid = False
                covered_set = set(covered)
                removed = [pivots[i] for i in covered]
                survivors = [p for i, p in enumerate(pivots) if i not in covered_set]
                repaired: list[Pivot] = []
                retired_clones: list[Pivot] = []
                prev_names: tuple[str, ...] = ()
                for j, p in enumerate(survivors):
                    want = _lcp_components(prev_names, p.names) if j else 0
                    if want != p.overlap:
                        retired_clones.append(p)
                        p = p.clone_with_overlap(want)
                    repaired.append(p)
                    prev_names = p.names
                for p in repaired:
                    p.valid = True  # reactivate the survivors
                wp.pivots = repaired
                self.reclaim_queue.push(removed + retired_clones, self.generation)
            self.waiting_invalid = True
            self.swap_suppressed_next_period = True
            return len(removed)

    def reclaim(self) -> int:
        return self.reclaim_queue.reclaim(self.oldest_active_generation())
