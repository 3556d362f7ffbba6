from __future__ import annotations

import random

import pytest

from stagewalk import Credential, FullPathCache, OriginalLookup
from conftest import make_node, make_tree, mkpath, oracle_resolve, outcome

OWNER = Credential.OWNER


def test_warm_hit_two_scans_no_visits():
    tree = make_tree(files=("/a0/b0/c0/d0/e0/f0/g0/h0",))
    cache = FullPathCache(tree)
    p = mkpath("/a0/b0/c0/d0/e0/f0/g0/h0")
    cache.fp_lookup(p)  # cold fill
    visited0, chars0 = cache.metrics.dentries_visited, cache.metrics.char_comparisons
    nid = cache.fp_lookup(p)  # warm
    assert nid == tree._resolve_admin(p).id
    assert cache.metrics.dentries_visited - visited0 == 0
    assert cache.metrics.char_comparisons - chars0 == 2 * len(p.text)  # exactly two full-path scans


def test_cold_path_costs_walk_plus_probe():
    tree = make_tree(files=("/a/b/f",))
    cache = FullPathCache(tree)
    baseline = OriginalLookup(tree)
    p = mkpath("/a/b/f")
    baseline.lookup(p)
    cache.fp_lookup(p)
    assert cache.metrics.dentries_visited == baseline.metrics.dentries_visited
    # cold cost = the probe's single full-path scan + the dual-scan walk
    assert cache.metrics.char_comparisons == baseline.metrics.char_comparisons + len(p.text)


def test_hit_after_target_chmod_is_stale():
    tree = make_tree(files=("/a/b/f",))
    cache = FullPathCache(tree)
    p = mkpath("/a/b/f")
    cache.fp_lookup(p)
    tree.chmod_node(p, 0o600)  # version bump via hook
    visited0 = cache.metrics.dentries_visited
    nid = cache.fp_lookup(p)
    assert nid == tree._resolve_admin(p).id
    assert cache.metrics.dentries_visited - visited0 == 3  # stale entry forced a full walk


def test_rename_leaf_touches_one():
    tree = make_tree("/a", files=("/a/f",))
    cache = FullPathCache(tree)
    touched0 = cache.metrics.entries_touched
    tree.rename_node(mkpath("/a/f"), mkpath("/a/g"))
    assert cache.metrics.entries_touched - touched0 == 1


def test_rename_subtree_touch_count_matches_enumeration_oracle():
    tree = make_tree()
    rng = random.Random(8)
    for _ in range(120):
        depth = rng.randint(1, 4)
        p = "/" + "/".join(f"{chr(ord('a') + d)}{rng.randint(0, 3)}" for d in range(depth))
        try:
            make_node(tree, p)
        except Exception:
            pass
    cache = FullPathCache(tree)
    top = mkpath("/a0")
    want = sum(1 for _ in tree.iter_subtree(tree._resolve_admin(top)))
    touched0 = cache.metrics.entries_touched
    tree.rename_node(top, mkpath("/zz"))
    assert cache.metrics.entries_touched - touched0 == want


def test_empty_cache_still_counts_version_bumps():
    tree = make_tree("/a/b/c")
    cache = FullPathCache(tree)
    assert cache.cached_entries == 0
    touched = cache.fp_invalidate_subtree(mkpath("/a"))
    assert touched == 3  # a, b, c version bumps despite zero entry removals


def test_stale_entries_not_served_after_ancestor_rename():
    tree = make_tree("/a/b", files=("/a/b/f",))
    cache = FullPathCache(tree)
    cache.fp_lookup(mkpath("/a/b/f"))
    tree.rename_node(mkpath("/a/b"), mkpath("/a/c"))
    assert outcome(cache.fp_lookup, mkpath("/a/b/f"), OWNER) == "err:NotFound"
    assert outcome(cache.fp_lookup, mkpath("/a/c/f"), OWNER).startswith("ok:")


@pytest.mark.parametrize("cred", list(Credential))
def test_randomized_equivalence_with_original(cred):
    # equivalence is per fixed credential: version-valid hits skip permission
    # checks entirely (the collapsed permission model), so one cache serves
    # one credential's view of the tree
    rng = random.Random(13)
    tree = make_tree()
    paths = []
    for _ in range(150):
        depth = rng.randint(1, 5)
        p = "/" + "/".join(f"{chr(ord('a') + d)}{rng.randint(0, 4)}" for d in range(depth))
        try:
            make_node(tree, p)
            paths.append(p)
        except Exception:
            pass
    cache = FullPathCache(tree)
    baseline = OriginalLookup(tree)
    for step in range(3000):
        roll = rng.random()
        if roll < 0.05:
            src = rng.choice(paths)
            try:
                tree.rename_node(mkpath(src), mkpath(src).parent().child(f"r{step}"))
            except Exception:
                pass
        elif roll < 0.10:
            try:
                tree.chmod_node(mkpath(rng.choice(paths)), rng.choice([0o755, 0o750, 0o700, 0o644]))
            except Exception:
                pass
        else:
            p = mkpath(rng.choice(paths))
            got = outcome(cache.fp_lookup, p, cred)
            assert got == outcome(baseline.lookup, p, cred) == oracle_resolve(tree, p, cred), (step, p.text)
