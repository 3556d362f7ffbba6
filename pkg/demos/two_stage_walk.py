"""Walkthrough of a two-stage lookup.

Builds a small tree, hammers a few hot files so they become candidates, lets
the manager publish a pivot pool, and then shows how a lookup skips most of
the path: Stage One picks the deepest prefix-sharing pivot, Stage Two walks
only the leftover components.
"""

from stagewalk import (
    Credential,
    PathBuf,
    StageLookupEngine,
    TreeSpec,
    gen_tree,
)

tree = gen_tree(TreeSpec(levels=[4, 4, 4], seed=1))
engine = StageLookupEngine(tree, pool_size=8)

hot = [PathBuf.parse(p) for p in ("/a0/b1/c2/d0", "/a0/b1/c3/d0", "/a3/b0/c0/d0")]
for _ in range(5):
    for p in hot:
        engine.stage_lookup(p)

print("before the first period: every lookup walks from the root")
print(f"  dentries visited so far: {engine.metrics.dentries_visited}")

engine.tick()  # the manager builds pivots from the hot candidates

print("\npublished pivot pool (overlap <TAB> path):")
print(engine.manager.working_pool.dump())

res = engine.stage_lookup(PathBuf.parse("/a0/b1/c2/d0"))
print("\nexact hit:")
print(f"  pivot {res.pivot_used}: skipped {res.skipped_components}, walked {res.walked_components}")

res = engine.stage_lookup(PathBuf.parse("/a0/b1/c0/d0"))
print("cousin of a hot file (shares /a0/b1, so the walk rolls up to that component):")
print(f"  pivot {res.pivot_used}: skipped {res.skipped_components}, walked {res.walked_components}, rolled_up={res.rolled_up}")

res = engine.stage_lookup(PathBuf.parse("/a2/b2/c2/d0"), Credential.OWNER)
print("cold path (no pivot shares a prefix, full walk):")
print(f"  pivot {res.pivot_used}: walked {res.walked_components}")

print(f"\ncounters: {dict(engine.metrics.counter_rows())}")
