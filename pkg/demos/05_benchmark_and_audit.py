"""
Throughput and determinism
==========================

The engine advances batches of independent scenes; aggregate steps per
second should hold up as instances grow to the core count, and engine-only
stepping is always faster than full env steps with pixel observations.
Identical seeded rollouts must hash identically, serial or pooled.

The same measurements are available from the command line:

    boxarena bench --size M --instances 1,8,64 --secs 10 --mode engine
    boxarena audit --level levels/M/catapult.json --steps 1000 --repeats 10
"""

from boxarena.harness import audit_level, bench, learnability, rank_levels
from boxarena.levelgen import generate

print("engine-only stepping, size M")
for row in bench("M", [1, 2], secs=1.0, mode="engine", seed=0):
    print(f"  {row.instances} instance(s): {row.sps:,.0f} steps/s "
          f"({row.total_steps} steps in {row.seconds:.2f}s)")

print("full env steps with pixel observations")
for row in bench("M", [1], secs=1.0, mode="env", observation_mode="pixels", seed=0):
    print(f"  {row.instances} instance(s): {row.sps:,.0f} engine steps/s")

print("\ndeterminism audit on a generated level")
level = generate(0, "M")
result = audit_level(level, steps=300, repeats=5, policy_seed=7)
print(f"  {result.level_name}: passed={result.passed}, hash {result.serial_hashes[0]}")

print("\nranking levels by learnability p(1-p) under a seeded random policy")
levels = [generate(seed, "S") for seed in range(4)]
for s in rank_levels(levels, policy_seed=0, trials=8):
    p = s.successes / s.trials
    print(f"  {s.level.name}: solve rate {p:.2f}, learnability {s.score:.3f}")
print(f"  (a level solved half the time scores {learnability(1, 2):.2f}, the maximum)")
