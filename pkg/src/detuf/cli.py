"""Command-line front end: reproducible experiments to CSV artifacts.

Subcommands: gen, process, parallel, contention, lowerbound
{minima|prefix|iterations}, mst. One master seed per invocation (flag
--seed, falling back to the DETUF_SEED environment variable, then 0);
every sub-experiment derives its stream from it with a documented label,
e.g. ``process.trial.3`` then ``prio`` / ``order``.

Exit codes: 0 success, 1 usage error, 2 I/O error, 3 verification failure.
"""

from __future__ import annotations

import argparse
import math
import os
import sys
from typing import List, Optional

import numpy as np

from .collisions import replay_process, simplified_p_trace
from .contention import simulate_contention
from .csvio import write_csv
from .forest import LinkingStrategy
from .graphs import (EdgeFileError, EdgeSequence, ParameterError,
                     assign_random_weights, generate, parse_edge_file,
                     shuffle, write_edge_file)
from .lowerbounds import (maximal_window_iterations, minima_experiment,
                          prefix_no_collision_sweep)
from .parallel import (WindowPolicy, parallel_kruskal, run_windowed,
                       sequential_run)
from .rng import Rng

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_IO = 2
EXIT_VERIFY = 3

_TYPE_ALIASES = {"erdos-renyi": "erdos_renyi", "erdos_renyi": "erdos_renyi",
                 "cycle": "cycle", "star": "star", "path": "path",
                 "complete": "complete"}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # exit 1 on usage problems, not argparse's 2
        raise UsageError(message)


def _master_seed(value: Optional[int]) -> int:
    if value is not None:
        return value
    return int(os.environ.get("DETUF_SEED", "0"))


def _add_graph_args(p: _Parser, weighted: bool = False) -> None:
    p.add_argument("--input", help="edge-list file to load")
    p.add_argument("--type", dest="gtype", choices=sorted(_TYPE_ALIASES),
                   help="generator family")
    p.add_argument("--n", type=int, help="vertex count for generators")
    p.add_argument("--p", type=float, help="edge probability for erdos-renyi")
    if weighted:
        p.add_argument("--weights", action="store_true",
                       help="attach distinct random weights")


def _load_graph(args, rng: Rng) -> EdgeSequence:
    if args.input:
        if getattr(args, "gtype", None):
            raise UsageError("give either --input or --type, not both")
        return parse_edge_file(args.input)
    if not getattr(args, "gtype", None):
        raise UsageError("need --input or --type")
    if args.n is None:
        raise UsageError("--type needs --n")
    kind = _TYPE_ALIASES[args.gtype]
    seq = generate(kind, args.n, rng.split("gen"), args.p)
    if getattr(args, "weights", False):
        seq = assign_random_weights(seq, rng.split("weights"))
    return seq


def _graph_desc(args) -> str:
    if args.input:
        return f"file:{args.input}"
    parts = [f"{_TYPE_ALIASES[args.gtype]}", f"n={args.n}"]
    if args.p is not None:
        parts.append(f"p={args.p}")
    return ":".join(parts)


def _strategy_arg(p: _Parser) -> None:
    p.add_argument("--strategy", choices=("size", "rank", "priority"),
                   default="size", help="linking strategy (default size)")


def _policy_from_args(args, m: int) -> WindowPolicy:
    if args.adaptive:
        if args.window is not None:
            raise UsageError("give either --window or --adaptive")
        return WindowPolicy.adaptive(args.s0, args.s_min, args.s_max)
    if args.window is None:
        raise UsageError("need --window or --adaptive")
    return WindowPolicy.fixed(args.window)


def cmd_gen(args) -> int:
    master = Rng(_master_seed(args.seed))
    seq = _load_graph(args, master)
    write_edge_file(seq, args.out)
    print(f"n={seq.vertex_count} m={len(seq)}")
    return EXIT_OK


def cmd_process(args) -> int:
    master = Rng(_master_seed(args.seed))
    seq = _load_graph(args, master)
    m = len(seq)
    if m == 0:
        raise UsageError("graph has no edges")
    n = seq.vertex_count
    acc_p = np.zeros(m)
    acc_phi = np.zeros(m)
    acc_c = np.zeros(m)
    acc_pairs = np.zeros(m)
    sum_pt = sum_half = phi_final = 0.0
    for k in range(args.trials):
        child = master.split(f"process.trial.{k}")
        strategy = LinkingStrategy.make(args.strategy, n, child.split("prio"))
        shuffled = shuffle(seq, child.split("order"))
        trace = replay_process(shuffled, strategy, method=args.method)
        if args.definition == "simplified":
            p_arr, pairs_arr = simplified_p_trace(shuffled, strategy, return_pairs=True)
        else:
            p_arr = np.array([float(x) for x in trace.p_exact])
            pairs_arr = np.asarray(trace.colliding_pairs, dtype=np.float64)
        acc_p += p_arr
        acc_phi += np.array([float(x) for x in trace.phi])
        acc_c += np.asarray(trace.component_count, dtype=np.float64)
        acc_pairs += pairs_arr
        sum_pt += float(p_arr.sum())
        sum_half += float(p_arr[: m // 2 + 1].sum())
        phi_final += trace.final_phi
    k = args.trials
    rows = [(t, acc_c[t] / k, acc_p[t] / k, acc_phi[t] / k, acc_pairs[t] / k)
            for t in range(m)]
    config = {"subcommand": "process", "graph": _graph_desc(args),
              "strategy": args.strategy, "definition": args.definition,
              "trials": args.trials, "seed": _master_seed(args.seed),
              "method": args.method, "out": args.out}
    summary = {"trials": k, "sum_pt": sum_pt / k,
               "sum_pt_first_half": sum_half / k, "phi_final": phi_final / k}
    write_csv(args.out, "process", config, rows, summary)
    print(f"wrote {args.out}: {m} steps x {k} trials, "
          f"mean sum_pt={sum_pt / k:.6g}")
    return EXIT_OK


def cmd_parallel(args) -> int:
    master = Rng(_master_seed(args.seed))
    seq = _load_graph(args, master)
    if len(seq) == 0:
        raise UsageError("graph has no edges")
    strategy = LinkingStrategy.make(args.strategy, seq.vertex_count,
                                    master.split("prio"))
    if not args.no_shuffle:
        seq = shuffle(seq, master.split("order"))
    policy = _policy_from_args(args, len(seq))
    stats = run_windowed(seq, strategy, policy, threads=args.threads,
                         detach_stop_edge=not args.no_detach,
                         compaction=args.compaction)
    rows = [(i, stats.executed_per_iteration[i], stats.failed_per_iteration[i],
             stats.window_per_iteration[i]) for i in range(stats.iterations)]
    summary = {"iterations": stats.iterations,
               "failed_events": stats.failed_reservation_events,
               "successes": len(stats.success_set),
               "finds": stats.work.finds,
               "parent_reads": stats.work.parent_reads,
               "link_writes": stats.work.link_writes,
               "work_total": stats.work.total()}
    code = EXIT_OK
    if args.verify_determinism:
        seq_successes, seq_work = sequential_run(seq, strategy, args.compaction)
        summary["seq_finds"] = seq_work.finds
        summary["seq_parent_reads"] = seq_work.parent_reads
        summary["seq_link_writes"] = seq_work.link_writes
        summary["seq_work_total"] = seq_work.total()
        ok = seq_successes == stats.success_set
        summary["determinism"] = "ok" if ok else "MISMATCH"
        if not ok:
            par, srt = set(stats.success_set), set(seq_successes)
            print("determinism verification FAILED", file=sys.stderr)
            print(f"  parallel-only positions: {sorted(par - srt)[:20]}", file=sys.stderr)
            print(f"  sequential-only positions: {sorted(srt - par)[:20]}", file=sys.stderr)
            code = EXIT_VERIFY
    config = {"subcommand": "parallel", "graph": _graph_desc(args),
              "strategy": args.strategy, "compaction": args.compaction,
              "window": "adaptive" if args.adaptive else args.window,
              "threads": args.threads, "seed": _master_seed(args.seed),
              "shuffle": not args.no_shuffle, "detach": not args.no_detach,
              "out": args.out}
    if args.adaptive:
        config["s0"] = args.s0
    write_csv(args.out, "parallel", config, rows, summary)
    print(f"wrote {args.out}: iterations={stats.iterations} "
          f"failed={stats.failed_reservation_events} "
          f"successes={len(stats.success_set)}")
    return code


def cmd_contention(args) -> int:
    master = Rng(_master_seed(args.seed))
    seq = _load_graph(args, master)
    if len(seq) == 0:
        raise UsageError("graph has no edges")
    rows = []
    means = {}
    for threads in args.threads:
        total = 0
        for k in range(args.trials):
            child = master.split(f"contention.T{threads}.{k}")
            strategy = LinkingStrategy.make(args.strategy, seq.vertex_count,
                                            child.split("prio"))
            run = simulate_contention(seq, strategy, threads,
                                      child.split("order"))
            rows.append((threads, k, run.events))
            total += run.events
        means[threads] = total / args.trials
    config = {"subcommand": "contention", "graph": _graph_desc(args),
              "strategy": args.strategy, "threads": ",".join(map(str, args.threads)),
              "trials": args.trials, "seed": _master_seed(args.seed),
              "out": args.out}
    summary = {f"mean_events_T{t}": m for t, m in means.items()}
    write_csv(args.out, "contention", config, rows, summary)
    print("wrote", args.out + ":",
          " ".join(f"T={t} mean={m:.4g}" for t, m in means.items()))
    return EXIT_OK


def cmd_lowerbound(args) -> int:
    master = Rng(_master_seed(args.seed))
    base_config = {"subcommand": f"lowerbound.{args.mode}",
                   "trials": args.trials, "seed": _master_seed(args.seed),
                   "out": args.out}
    if args.mode == "minima":
        stats = minima_experiment(args.n[0], args.trials, master.split("minima"))
        rows = [(stats.n, stats.trials, stats.mean_m, stats.tail_prob)]
        config = dict(base_config, n=args.n[0])
        write_csv(args.out, "lowerbound_minima", config, rows)
        print(f"wrote {args.out}: mean_M={stats.mean_m:.4f} "
              f"tail_prob={stats.tail_prob!r}")
        return EXIT_OK
    if args.mode == "prefix":
        n = args.n[0]
        windows = args.w or _default_prefix_windows(n)
        probs = prefix_no_collision_sweep(n, windows, args.trials,
                                          args.strategy, master.split("prefix"))
        rows = [(n, w, prob) for w, prob in zip(windows, probs)]
        config = dict(base_config, n=n, strategy=args.strategy,
                      w=",".join(map(str, windows)))
        write_csv(args.out, "lowerbound_prefix", config, rows)
        print(f"wrote {args.out}: {len(windows)} window sizes")
        return EXIT_OK
    # iterations
    rows = []
    for n in args.n:
        iters = maximal_window_iterations(n, args.trials, args.strategy,
                                          master.split(f"maxwin.n{n}"))
        rows.extend((n, k, iters[k]) for k in range(len(iters)))
    config = dict(base_config, n=",".join(map(str, args.n)),
                  strategy=args.strategy)
    write_csv(args.out, "lowerbound_iterations", config, rows)
    print(f"wrote {args.out}: {len(rows)} runs")
    return EXIT_OK


def _default_prefix_windows(n: int) -> List[int]:
    windows = [w for w in (16, 32, 64, 128, 256, 512, 1024) if w <= n]
    # around 4*sqrt(N log N) a conflict-free prefix becomes vanishingly rare
    threshold_w = math.ceil(4 * math.sqrt(n * math.log2(n)))
    if threshold_w <= n and threshold_w not in windows:
        windows.append(threshold_w)
    return sorted(windows)


def cmd_mst(args) -> int:
    master = Rng(_master_seed(args.seed))
    seq = _load_graph(args, master)
    if len(seq) == 0:
        raise UsageError("graph has no edges")
    if seq.w is None:
        raise UsageError("mst needs weighted edges (--weights or a weighted file)")
    strategy = LinkingStrategy.make(args.strategy, seq.vertex_count,
                                    master.split("prio"))
    policy = _policy_from_args(args, len(seq))
    result = parallel_kruskal(seq, strategy, policy, threads=args.threads)
    out_seq = EdgeSequence.from_edges(seq.vertex_count, result.edges, "mst")
    write_edge_file(out_seq, args.out)
    print(f"wrote {args.out}: edges={len(result.edges)} "
          f"weight={result.total_weight!r}")
    return EXIT_OK


def _build_parser() -> _Parser:
    root = _Parser(prog="detuf", description=__doc__,
                   formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = root.add_subparsers(dest="command", required=True)

    def common(p, out_required=True):
        p.add_argument("--seed", type=int, default=None,
                       help="master seed (default: $DETUF_SEED or 0)")
        p.add_argument("--out", required=out_required, help="output path")

    p = sub.add_parser("gen", help="generate an edge-list file")
    _add_graph_args(p, weighted=True)
    common(p)
    p.set_defaults(fn=cmd_gen)

    p = sub.add_parser("process", help="sequentialized random-process trace")
    _add_graph_args(p)
    _strategy_arg(p)
    p.add_argument("--trials", type=int, default=1)
    p.add_argument("--definition", choices=("strict", "simplified"),
                   default="strict")
    p.add_argument("--method", choices=("auto", "exact", "fast"), default="auto")
    common(p)
    p.set_defaults(fn=cmd_process)

    p = sub.add_parser("parallel", help="windowed parallel run")
    _add_graph_args(p)
    _strategy_arg(p)
    p.add_argument("--window", type=int, default=None, help="fixed window size")
    p.add_argument("--adaptive", action="store_true", help="adaptive window")
    p.add_argument("--s0", type=int, default=16, help="adaptive initial window")
    p.add_argument("--s-min", type=int, default=1)
    p.add_argument("--s-max", type=int, default=None)
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--compaction", choices=("none", "full", "one_try_splitting"),
                   default="full")
    p.add_argument("--no-shuffle", action="store_true",
                   help="consume the input order as-is")
    p.add_argument("--no-detach", action="store_true",
                   help="do not process the stop edge separately")
    p.add_argument("--verify-determinism", action="store_true",
                   help="compare against the sequential success set")
    common(p)
    p.set_defaults(fn=cmd_parallel)

    p = sub.add_parser("contention", help="synchronous contention model")
    _add_graph_args(p)
    _strategy_arg(p)
    p.add_argument("--threads", type=int, nargs="+", default=[2])
    p.add_argument("--trials", type=int, default=100)
    common(p)
    p.set_defaults(fn=cmd_contention)

    p = sub.add_parser("lowerbound", help="cycle-graph lower-bound experiments")
    p.add_argument("mode", choices=("minima", "prefix", "iterations"))
    p.add_argument("--n", type=int, nargs="+", required=True)
    p.add_argument("--w", type=int, nargs="+", default=None,
                   help="window sizes for prefix mode")
    p.add_argument("--trials", type=int, default=1000)
    _strategy_arg(p)
    common(p)
    p.set_defaults(fn=cmd_lowerbound)

    p = sub.add_parser("mst", help="parallel Kruskal on a weighted graph")
    _add_graph_args(p, weighted=True)
    _strategy_arg(p)
    p.add_argument("--window", type=int, default=None)
    p.add_argument("--adaptive", action="store_true")
    p.add_argument("--s0", type=int, default=16)
    p.add_argument("--s-min", type=int, default=1)
    p.add_argument("--s-max", type=int, default=None)
    p.add_argument("--threads", type=int, default=1)
    common(p)
    p.set_defaults(fn=cmd_mst)

    return root


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        return args.fn(args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ParameterError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except EdgeFileError as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_IO
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
