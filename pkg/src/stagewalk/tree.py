"""In-memory directory tree, dentry hash table, and the component-wise walk.

The tree mirrors a kernel directory cache: every node is a dentry hashed by
(parent id, name) into a fixed power-of-two bucket array. All dentries are
pinned (no eviction, no negative entries) and node ids are never reused.

Mutations (create/rename/chmod/unlink) are serialized through the tree's
write lock; lookups take the read side. Hooks registered by caching
strategies fire before a mutation is applied so they can observe
pre-mutation paths.
"""

from __future__ import annotations

from enum import Enum
from typing import Callable, Iterator, Optional, Sequence

from .errors import (
    AlreadyExists,
    NotADirectory,
    NotFound,
    PermissionDenied,
    Unsupported,
)
from .locks import NullRWLock, RWLock
from .metrics import Metrics
from .paths import PathBuf

DIR = "dir"
FILE = "file"

NodeId = int


class Credential(str, Enum):
    OWNER = "owner"
    GROUP = "group"
    OTHER = "other"


# exec bit that grants directory traversal, per credential class
_TRAV_BIT = {Credential.OWNER: 0o100, Credential.GROUP: 0o010, Credential.OTHER: 0o001}

# position of each class in the 3-bit aggregated traversal masks kept on pivots
CRED_MASK_BIT = {Credential.OWNER: 0b100, Credential.GROUP: 0b010, Credential.OTHER: 0b001}

ALL_CLASSES_MASK = 0b111


def trav_mask(mode: int) -> int:
    """3-bit owner/group/other traversal mask extracted from a 9-bit mode."""
    return ((mode >> 6 & 1) << 2) | ((mode >> 3 & 1) << 1) | (mode & 1)


_FNV_OFFSET = 0xCBF29CE484222325
_FNV_PRIME = 0x100000001B3
_MASK64 = (1 << 64) - 1


def hash_component(parent_id: int, name: str, bucket_bits: int = 16, seed: int = 0) -> int:
    """Deterministic bucket index for a (parent, component-name) pair.

    FNV-1a over the parent id bytes and the name, with a final avalanche mix
    so the masked low bits stay uniform. Stable across runs for a fixed seed.
    """
    h = (_FNV_OFFSET ^ (seed & _MASK64)) & _MASK64
    for b in parent_id.to_bytes(8, "little") + name.encode("utf-8"):
        h ^= b
        h = (h * _FNV_PRIME) & _MASK64
    # splitmix64-style finalizer
    h = (h + 0x9E3779B97F4A7C15) & _MASK64
    h = ((h ^ (h >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    h = ((h ^ (h >> 27)) * 0x94D049BB133111EB) & _MASK64
    h ^= h >> 31
    return h & ((1 << bucket_bits) - 1)


class Dentry:
    """A cached directory-tree node.

    heat / heat_version belong to the access-frequency machinery;
    cand_prev / cand_next are the intrusive candidate-set links and are
    non-None exactly while the dentry is a member.
    """

    __slots__ = (
        "id",
        "parent",
        "name",
        "kind",
        "mode",
        "size",
        "heat",
        "heat_version",
        "cand_prev",
        "cand_next",
        "dead",
        "children",
    )

    def __init__(self, node_id: int, parent: Optional["Dentry"], name: str, kind: str, mode: int, size: int = 0):
        self.id = node_id
        self.parent = parent
        self.name = name
        self.kind = kind
        self.mode = mode
        self.size = size
        self.heat = 0
        self.heat_version = 0
        self.cand_prev: Optional[Dentry] = None
        self.cand_next: Optional[Dentry] = None
        self.dead = False
        self.children: Optional[dict[str, Dentry]] = {} if kind == DIR else None

    @property
    def parent_id(self) -> Optional[int]:
        return self.parent.id if self.parent is not None else None

    def __repr__(self) -> str:
        return f"Dentry(id={self.id}, name={self.name!r}, kind={self.kind})"


class DcacheTable:
    """Fixed-size bucket array; every non-root dentry lives in exactly one bucket."""

    __slots__ = ("bucket_bits", "buckets", "seed", "_hash_cache")

    def __init__(self, bucket_bits: int = 16, seed: int = 0):
        self.bucket_bits = bucket_bits
        self.seed = seed
        self.buckets: list[list[Dentry]] = [[] for _ in range(1 << bucket_bits)]
        self._hash_cache: dict[tuple[int, str], int] = {}

    def bucket_index(self, parent_id: int, name: str) -> int:
        key = (parent_id, name)
        idx = self._hash_cache.get(key)
        if idx is None:
            idx = hash_component(parent_id, name, self.bucket_bits, self.seed)
            self._hash_cache[key] = idx
        return idx

    def insert(self, dentry: Dentry) -> None:
        self.buckets[self.bucket_index(dentry.parent.id, dentry.name)].append(dentry)

    def remove(self, dentry: Dentry) -> None:
        self.buckets[self.bucket_index(dentry.parent.id, dentry.name)].remove(dentry)

    def find(self, parent_id: int, name: str) -> Optional[Dentry]:
        for d in self.buckets[self.bucket_index(parent_id, name)]:
            if d.name == name and d.parent is not None and d.parent.id == parent_id:
                return d
        return None


# hook(event, path, new_path): event in {"rename", "chmod", "unlink"}; fires pre-mutation
MetadataHook = Callable[[str, PathBuf, Optional[PathBuf]], None]


class DirTree:
    def __init__(self, bucket_bits: int = 16, hash_seed: int = 0, threadsafe: bool = False):
        self.lock = RWLock() if threadsafe else NullRWLock()
        self.dcache = DcacheTable(bucket_bits, hash_seed)
        self.root = Dentry(1, None, "/", DIR, 0o755)
        self.nodes: dict[int, Dentry] = {1: self.root}
        self._next_id = 2
        self._hooks: list[MetadataHook] = []

    # -- plumbing -----------------------------------------------------------

    def register_hook(self, hook: MetadataHook) -> None:
        self._hooks.append(hook)

    def _fire_hooks(self, event: str, path: PathBuf, new_path: Optional[PathBuf]) -> None:
        for hook in self._hooks:
            hook(event, path, new_path)

    def node(self, node_id: int) -> Optional[Dentry]:
        return self.nodes.get(node_id)

    @property
    def node_count(self) -> int:
        return sum(1 for d in self.nodes.values() if not d.dead)

    def _resolve_admin(self, path: PathBuf) -> Dentry:
        """Trusted resolution through the children maps; no counters, no checks."""
        cur = self.root
        for name in path.components:
            if cur.children is None:
                raise NotFound(f"{path.text}: {cur.name!r} is not a directory")
            nxt = cur.children.get(name)
            if nxt is None:
                raise NotFound(f"{path.text}: missing component {name!r}")
            cur = nxt
        return cur

    def materialize_path(self, dentry: Dentry) -> PathBuf:
        names: list[str] = []
        cur = dentry
        while cur.parent is not None:
            names.append(cur.name)
            cur = cur.parent
        names.reverse()
        return PathBuf(tuple(names))

    def iter_subtree(self, dentry: Dentry) -> Iterator[Dentry]:
        """Depth-first over the subtree rooted at dentry, dentry included."""
        stack = [dentry]
        while stack:
            d = stack.pop()
            yield d
            if d.children:
                stack.extend(d.children.values())

    def canonical_dump(self) -> str:
        """Sorted one-line-per-node text form; equal dumps mean equal trees."""
        lines = []
        for d in self.nodes.values():
            if d.dead:
                continue
            lines.append(f"{self.materialize_path(d).text}\t{d.kind}\t{d.mode:o}\t{d.size}")
        lines.sort()
        return "\n".join(lines) + "\n"

    # -- mutations ----------------------------------------------------------

    def _attach(self, parent: Dentry, name: str, kind: str, mode: int, size: int = 0) -> Dentry:
        """Fast constructor shared by create_node and the tree generator."""
        d = Dentry(self._next_id, parent, name, kind, mode, size)
        self._next_id += 1
        parent.children[name] = d
        self.nodes[d.id] = d
        self.dcache.insert(d)
        return d

    def create_node(self, parent_path: PathBuf, name: str, kind: str, mode: int, size: int = 0) -> NodeId:
        if kind not in (DIR, FILE):
            raise Unsupported(f"unknown node kind {kind!r}")
        self.lock.acquire_write()
        try:
            parent = self._resolve_admin(parent_path)
            if parent.kind != DIR:
                raise NotADirectory(f"{parent_path.text} is not a directory")
            if name in parent.children:
                raise AlreadyExists(f"{parent_path.text}/{name} already exists")
            PathBuf((name,))  # validates the component
            return self._attach(parent, name, kind, mode, size).id
        finally:
            self.lock.release_write()

    def rename_node(self, old: PathBuf, new: PathBuf) -> None:
        self.lock.acquire_write()
        try:
            if old.is_root or new.is_root:
                raise Unsupported("cannot rename the root")
            d = self._resolve_admin(old)
            new_parent = self._resolve_admin(new.parent())
            if new_parent.kind != DIR:
                raise NotADirectory(f"{new.parent().text} is not a directory")
            if new.name in new_parent.children:
                raise AlreadyExists(f"{new.text} already exists")
            cur = new_parent
            while cur is not None:
                if cur is d:
                    raise Unsupported("cannot rename a directory into its own subtree")
                cur = cur.parent
            self._fire_hooks("rename", old, new)
            self.dcache.remove(d)
            del d.parent.children[d.name]
            d.parent = new_parent
            d.name = new.name
            new_parent.children[d.name] = d
            self.dcache.insert(d)
        finally:
            self.lock.release_write()

    def chmod_node(self, path: PathBuf, mode: int) -> None:
        self.lock.acquire_write()
        try:
            d = self._resolve_admin(path)
            self._fire_hooks("chmod", path, None)
            d.mode = mode & 0o777
        finally:
            self.lock.release_write()

    def unlink_node(self, path: PathBuf) -> None:
        self.lock.acquire_write()
        try:
            if path.is_root:
                raise Unsupported("cannot unlink the root")
            d = self._resolve_admin(path)
            if d.children:
                raise Unsupported(f"{path.text} has children")
            self._fire_hooks("unlink", path, None)
            self.dcache.remove(d)
            del d.parent.children[d.name]
            d.dead = True
        finally:
            self.lock.release_write()

    # -- lookup -------------------------------------------------------------

    def walk_from(
        self,
        start: Dentry,
        components: Sequence[str],
        cred: Credential,
        metrics: Optional[Metrics] = None,
    ) -> Dentry:
        """Resolve components through the dentry hash table starting at `start`.

        Shared by the original walk (start == root) and by Stage Two (start ==
        a pivot component), so both pay identical counters and apply identical
        permission rules: before descending out of a directory other than the
        root, its traversal bit for `cred` must be set. Each resolved component
        is scanned twice (hash + name verification). Caller holds the read lock.
        """
        cur = start
        bit = _TRAV_BIT[cred]
        find = self.dcache.find
        for name in components:
            if cur.parent is not None and cur.children is not None and not (cur.mode & bit):
                raise PermissionDenied(f"no traversal through {cur.name!r} for {cred.value}")
            if metrics is not None:
                metrics.char_comparisons += len(name)  # hash scan
            child = find(cur.id, name)
            if child is None:
                raise NotFound(f"missing component {name!r}")
            if metrics is not None:
                metrics.dentries_visited += 1
                metrics.char_comparisons += len(name)  # verification scan
                metrics.distinct_resolved.add(child.id)
            cur = child
        return cur

    def lookup_original(self, path: PathBuf, cred: Credential, metrics: Optional[Metrics] = None) -> NodeId:
        """Component-wise walk from the root; the baseline every strategy must match."""
        self.lock.acquire_read()
        try:
            return self.walk_from(self.root, path.components, cred, metrics).id
        finally:
            self.lock.release_read()
