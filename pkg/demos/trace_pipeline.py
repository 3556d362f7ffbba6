"""End-to-end pipeline: generate a tree, synthesize a trace, replay it under
all three strategies, and print the comparison table.

The trace is lookup-only: the pool-swap protocol conservatively skips a
period's swap after any metadata modification, so steady rename churn keeps
pools empty (see metadata_cost.py for the mutation-cost story instead).
"""

from stagewalk import TreeSpec, gen_tree, replay, report, synth_trace

spec = TreeSpec(levels=[6, 6, 6], seed=3)
trace = synth_trace(
    gen_tree(spec),
    "hotdir-zipf",
    {"n_events": 10_000, "hot_dirs": 8},
    seed=4,
)

runs = []
for strategy in ("original", "fullpath", "stage"):
    tree = gen_tree(spec)  # fresh identical tree per strategy
    result = replay(trace, strategy, tree, manual_tick=True, tick_every=1000)
    runs.append((strategy, result.metrics))

table, _csv = report(runs)
print(table)
