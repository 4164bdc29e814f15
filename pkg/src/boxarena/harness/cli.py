"""Command line tooling.

Subcommands: bench, gen, rollout, filter, audit.  All tables go to stdout
as CSV; every command prints a reproducibility comment with its seed.
Exit status is nonzero when an audit fails.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from ..env import EnvParams
from ..levelgen import GenerationFailed, generate
from ..levelio import load_level, save_level
from .audit import audit_level
from .bench import bench
from .rollout import learnability, parse_policy, rank_levels, rollout


def _cmd_bench(args):
    counts = [int(c) for c in args.instances.split(",")]
    print(f"# seed={args.seed}")
    print("size,mode,instances,seconds,steps_per_instance,total_steps,sps")
    for row in bench(
        args.size, counts, secs=args.secs, mode=args.mode,
        observation_mode=args.obs, seed=args.seed, workers=args.workers,
    ):
        print(
            f"{row.size_class},{row.mode},{row.instances},{row.seconds:.3f},"
            f"{row.steps_per_instance},{row.total_steps},{row.sps:.0f}"
        )
    return 0


def _cmd_gen(args):
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    print(f"# seed={args.seed}")
    print("name,file,status")
    written = 0
    seed = args.seed
    failures = 0
    while written < args.count:
        try:
            level = generate(seed, args.size)
        except GenerationFailed:
            print(f"gen-{args.size}-{seed},,generation-failed")
            failures += 1
            seed += 1
            continue
        path = out / f"{level.name}.json"
        save_level(level, path)
        print(f"{level.name},{path},ok")
        written += 1
        seed += 1
    print(f"# wrote {written} levels, {failures} failed seeds", file=sys.stderr)
    return 0


def _cmd_rollout(args):
    level = load_level(args.level)
    policy = parse_policy(args.policy)
    params = EnvParams(size_class=level.size_class)
    print(f"# level={args.level} policy={policy.spec}")
    result = rollout(level, policy, params)
    print("level,policy,solved,steps,return,state_hash,diverged")
    print(
        f"{result.level_name},{policy.spec},{int(result.solved)},{result.steps},"
        f"{result.episode_return:.6f},{result.state_hash},{int(result.diverged)}"
    )
    return 0


def _cmd_filter(args):
    paths = sorted(Path(args.in_dir).glob("*.json"))
    if not paths:
        print(f"no level files in {args.in_dir}", file=sys.stderr)
        return 2
    levels = [load_level(p) for p in paths]
    policy = parse_policy(args.policy)
    if not hasattr(policy, "seed"):
        print("filter requires a random:SEED policy", file=sys.stderr)
        return 2
    print(f"# seed={policy.seed} trials={args.trials}")
    scores = rank_levels(levels, policy.seed, args.trials)
    print("rank,name,successes,trials,success_rate,learnability")
    for rank, s in enumerate(scores[: args.top], start=1):
        p = s.successes / s.trials
        print(f"{rank},{s.level.name},{s.successes},{s.trials},{p:.4f},{s.score:.4f}")
    return 0


def _cmd_audit(args):
    level = load_level(args.level)
    print(f"# level={args.level} policy_seed={args.seed}")
    result = audit_level(
        level, steps=args.steps, repeats=args.repeats, policy_seed=args.seed
    )
    print("level,steps,repeats,distinct_hashes,hash,passed")
    distinct = set(result.serial_hashes) | set(result.pool_hashes)
    print(
        f"{result.level_name},{result.steps},{result.repeats},"
        f"{len(distinct)},{result.serial_hashes[0]},{int(result.passed)}"
    )
    return 0 if result.passed else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="boxarena", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("bench", help="throughput benchmark")
    p.add_argument("--size", default="M", choices=("S", "M", "L"))
    p.add_argument("--instances", default="1,8,64", help="comma-separated instance counts")
    p.add_argument("--secs", type=float, default=5.0)
    p.add_argument("--mode", default="engine", choices=("engine", "env"))
    p.add_argument("--obs", default="pixels", choices=("entity", "flat", "pixels"))
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--workers", type=int, default=None)
    p.set_defaults(func=_cmd_bench)

    p = sub.add_parser("gen", help="generate levels into a directory")
    p.add_argument("--size", default="M", choices=("S", "M", "L"))
    p.add_argument("--count", type=int, default=10)
    p.add_argument("--out", required=True)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=_cmd_gen)

    p = sub.add_parser("rollout", help="run one scripted episode")
    p.add_argument("--level", required=True)
    p.add_argument("--policy", default="noop", help="noop | random:SEED | file:PATH")
    p.set_defaults(func=_cmd_rollout)

    p = sub.add_parser("filter", help="rank levels by learnability")
    p.add_argument("--in", dest="in_dir", required=True)
    p.add_argument("--policy", default="random:0", help="random:SEED")
    p.add_argument("--trials", type=int, default=64)
    p.add_argument("--top", type=int, default=10)
    p.set_defaults(func=_cmd_filter)

    p = sub.add_parser("audit", help="determinism audit of one level")
    p.add_argument("--level", required=True)
    p.add_argument("--steps", type=int, default=1000)
    p.add_argument("--repeats", type=int, default=10)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=_cmd_audit)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
