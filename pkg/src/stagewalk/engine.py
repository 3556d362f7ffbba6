"""The two-stage lookup engine and the plain-walk resolver it is compared to.

Stage One scans the working pivot pool (inside a read-side token section) for
the pivot sharing the deepest prefix with the query; Stage Two resolves the
remaining components through the dentry hash table exactly like the original
walk, starting from the matched component's dentry, which the pivot stores
per depth (so landing on an ancestor of the pivot is a direct array index,
recorded as rolled_up). The skipped prefix's permission check is one mask
test against traversal bits aggregated at build time; metadata modification
invalidates covering pivots, so a cached mask is never stale when consulted.
A pivot whose component dentry has been unlinked silently falls back to a
full walk from the root.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass
from typing import Optional

from .errors import PermissionDenied
from .heat import CandidateSet, HeatEpoch, observe_target
from .epoch import PivotManager
from .metrics import Metrics
from .paths import PathBuf
from .pivots import Pivot, ScanStats, find_best_pivot
from .tree import CRED_MASK_BIT, Credential, Dentry, DirTree


@dataclass(slots=True)
class StageResult:
    target: int
    skipped_components: int
    walked_components: int
    pivot_used: Optional[str]
    rolled_up: bool


@dataclass(slots=True)
class MetadataView:
    node_id: int
    kind: str
    mode: int
    size: int


class _ResolverBase:
    """Shared stat/open wrappers over a strategy's lookup."""

    tree: DirTree
    metrics: Metrics

    def __init__(self, tree: DirTree, metrics: Optional[Metrics] = None):
        self.tree = tree
        self.metrics = metrics if metrics is not None else Metrics()
        self._next_handle = 1

    def lookup(self, path: PathBuf, cred: Credential = Credential.OWNER) -> int:
        raise NotImplementedError

    def stat(self, path: PathBuf, cred: Credential = Credential.OWNER) -> MetadataView:
        d = self.tree.node(self.lookup(path, cred))
        return MetadataView(d.id, d.kind, d.mode, d.size)

    def open(self, path: PathBuf, cred: Credential = Credential.OWNER) -> int:
        self.lookup(path, cred)
        handle = self._next_handle
        self._next_handle += 1
        return handle

    def tick(self) -> None:
        """Period boundary; a no-op for strategies without a manager."""


class OriginalLookup(_ResolverBase):
    """Component-wise walk from the root; the kernel-style baseline."""

    def lookup(self, path: PathBuf, cred: Credential = Credential.OWNER) -> int:
        self.metrics.lookups += 1
        return self.tree.lookup_original(path, cred, self.metrics)


class StageLookupEngine(_ResolverBase):
    def __init__(
        self,
        tree: DirTree,
        pool_size: int = 16,
        component_capacity: int = 8,
        heat_threshold: int = 4,
        heat_capacity: int = 64,
        period_ms: int = 2000,
        metrics: Optional[Metrics] = None,
    ):
        super().__init__(tree, metrics)
        self.epoch = HeatEpoch(period_ms=period_ms)
        self.candidates = CandidateSet(heat_capacity, heat_threshold)
        self.heat_lock = threading.Lock()
        self.manager = PivotManager(
            tree,
            self.candidates,
            self.epoch,
            self.heat_lock,
            pool_bound=pool_size,
            component_capacity=component_capacity,
        )
        tree.register_hook(self._on_metadata)

    def _on_metadata(self, event: str, path: PathBuf, new_path: Optional[PathBuf]) -> None:
        self.metrics.entries_touched += self.manager.invalidate_for_metadata(path)

    def tick(self) -> None:
        self.manager.periodic_update()

    def check_prefix_permissions(self, pivot: Pivot, depth: int, cred: Credential) -> None:
        """Clear components 1..depth-1 with the mask cached on the matched component."""
        if not pivot.components[depth - 1].prefix_trav & CRED_MASK_BIT[cred]:
            raise PermissionDenied(f"skipped prefix of {pivot.path!r} not traversable for {cred.value}")

    def _note_target(self, target: Dentry) -> None:
        with self.heat_lock:
            observe_target(target, self.epoch, self.candidates)

    def _full_walk(self, path: PathBuf, cred: Credential) -> Dentry:
        tree = self.tree
        tree.lock.acquire_read()
        try:
            return tree.walk_from(tree.root, path.components, cred, self.metrics)
        finally:
            tree.lock.release_read()

    def stage_lookup(self, path: PathBuf, cred: Credential = Credential.OWNER) -> StageResult:
        metrics = self.metrics
        metrics.lookups += 1
        manager = self.manager
        token = manager.reader_enter()
        try:
            stats = ScanStats()
            hit = find_best_pivot(token.pool, path, stats)
        finally:
            manager.reader_exit(token)
        metrics.char_comparisons += stats.char_comparisons  # Stage One single scan
        n = path.depth

        if hit is not None:
            pivot, depth = hit
            start = self.tree.node(pivot.components[depth - 1].node_id)
            if start is not None and not start.dead:
                self.check_prefix_permissions(pivot, depth, cred)
                tree = self.tree
                tree.lock.acquire_read()
                try:
                    target = tree.walk_from(start, path.components[depth:], cred, metrics)
                finally:
                    tree.lock.release_read()
                metrics.pivot_hits += 1
                metrics.note_skip(depth)
                self._note_target(target)
                return StageResult(target.id, depth, n - depth, pivot.path, depth < pivot.depth)
            metrics.fallbacks += 1  # component dentry unlinked between build and use

        target = self._full_walk(path, cred)
        self._note_target(target)
        return StageResult(target.id, 0, n, None, False)

    def lookup(self, path: PathBuf, cred: Credential = Credential.OWNER) -> int:
        return self.stage_lookup(path, cred).target
