"""``bithresh`` command-line interface."""

from __future__ import annotations

import argparse
import inspect
import json
import logging
import sys
from pathlib import Path

from . import graphs
from .attractors import DEFAULT_CAP, enumerate_phase_space, orbit_from, periodic_table
from .dynamics import System, ThresholdAssignment, UpdateScheme, WeightedSystem, format_state, parse_state
from .errors import BithreshError
from .potential import descent_trace, trace_csv
from .proofcheck import certify_orbit
from .specio import dump_spec, load_spec
from .verify import DEFAULT_SEED, SUITES, union_system

log = logging.getLogger("bithresh")

FAMILIES = {
    "circle": graphs.circle_graph,
    "complete": graphs.complete_graph,
    "path": graphs.path_graph,
    "htree": graphs.h_tree,
    "ytree": graphs.y_tree,
    "xtree": graphs.x_tree,
}


def _emit(args, payload: dict, text: str) -> None:
    if args.json:
        print(json.dumps(payload, indent=2))
    else:
        print(text)


def _write(path: str, content: str) -> None:
    Path(path).write_text(content)
    log.info("wrote %s", path)


def cmd_step(args) -> int:
    system = load_spec(args.spec)
    x = parse_state(args.state, system.n)
    states = [x]
    for _ in range(args.count):
        states.append(system.step(states[-1]))
    strings = [format_state(s, system.n) for s in states]
    _emit(args, {"trajectory": strings}, "\n".join(strings[1:]))
    return 0


def cmd_orbit(args) -> int:
    system = load_spec(args.spec)
    x = parse_state(args.state, system.n)
    orbit = orbit_from(system, x, low_memory=args.low_memory)
    cycle = [format_state(s, system.n) for s in orbit.cycle]
    text = f"transient {orbit.transient}\nperiod {orbit.period}\n" + "\n".join(cycle)
    _emit(args, {"transient": orbit.transient, "period": orbit.period, "cycle": cycle}, text)
    return 0


def cmd_phase_space(args) -> int:
    system = load_spec(args.spec)
    portrait = enumerate_phase_space(system, cap=args.cap, workers=args.workers)
    if args.dot:
        _write(args.dot, portrait.to_dot())
    if args.csv:
        _write(args.csv, portrait.to_csv())
    attractors = [{"attractor_id": i, "length": a.length,
                   "representative": format_state(a.representative, system.n),
                   "basin_size": a.basin_size}
                  for i, a in enumerate(portrait.attractors, start=1)]
    _emit(args, {"n": system.n, "attractors": attractors}, portrait.to_csv().rstrip())
    return 0


def cmd_verify(args) -> int:
    suite = SUITES[args.suite]
    offered = {"seed": args.seed, "count": args.count, "samples": args.samples,
               "n_min": args.n_min, "n_max": args.n_max, "c_min": args.c_min,
               "c_max": args.c_max, "n1": args.n1, "n2": args.n2}
    accepted = inspect.signature(suite).parameters
    kwargs = {k: v for k, v in offered.items() if v is not None and k in accepted}
    result = suite(**kwargs)
    lines = [f"{'PASS' if c.ok else 'FAIL'}  {c.label}" + (f"  ({c.detail})" if c.detail else "")
             for c in result.checks]
    lines.append(f"{args.suite}: {'PASS' if result.passed else 'FAIL'}")
    _emit(args, result.to_dict(), "\n".join(lines))
    return 0 if result.passed else 1


def cmd_union(args) -> int:
    s1, s2 = load_spec(args.spec1), load_spec(args.spec2)
    for label, s in (("spec1", s1), ("spec2", s2)):
        if not isinstance(s, System) or s.scheme.pi is None:
            raise BithreshError(f"{label} must be a sequential graph system")
    system, bu = union_system(s1, s2, args.u1, args.u2)
    spec = dump_spec(system)
    if args.out:
        _write(args.out, spec)
    else:
        sys.stdout.write(spec)
    state = None
    if args.state1 and args.state2:
        state = parse_state(args.state1, s1.n) | (parse_state(args.state2, s2.n) << s1.n)
    elif args.state:
        state = parse_state(args.state, system.n)
    if state is not None:
        if (state >> (bu.bridge - 1)) & 1:
            log.warning("bridge vertex %d starts in state 1; the cycle construction assumes 0",
                        bu.bridge)
        orbit = orbit_from(system, state)
        print(f"state {format_state(state, system.n)}: transient {orbit.transient}, "
              f"period {orbit.period}", file=sys.stderr)
    return 0


def cmd_generate(args) -> int:
    graph = FAMILIES[args.family](args.n)
    if args.degree_rule:
        thresholds = ThresholdAssignment.degree_rule(graph, args.kup)
    else:
        thresholds = ThresholdAssignment.uniform(graph.n, args.kup, args.kdown)
    if args.update == "sync":
        scheme = UpdateScheme()
    else:
        scheme = UpdateScheme(tuple(args.pi) if args.pi else tuple(graph.vertices))
    spec = dump_spec(System(graph, thresholds, scheme))
    if args.out:
        _write(args.out, spec)
    else:
        sys.stdout.write(spec)
    return 0


def cmd_trace(args) -> int:
    system = load_spec(args.spec)
    if not isinstance(system, System) or system.scheme.pi is None:
        raise BithreshError("descent traces need a sequential graph system")
    trace = descent_trace(system, system.scheme.pi, parse_state(args.state, system.n),
                          args.max_steps)
    csv = trace_csv(trace)
    if args.csv:
        _write(args.csv, csv)
    else:
        sys.stdout.write(csv)
    return 0


def cmd_certify(args) -> int:
    system = load_spec(args.spec)
    if not isinstance(system, WeightedSystem):
        system = WeightedSystem.from_system(system) if system.scheme.pi is None else None
    if system is None:
        raise BithreshError("orbit certification applies to synchronous systems")
    table = periodic_table(system, parse_state(args.state, system.n))
    print(json.dumps(certify_orbit(system, table).to_dict(), indent=2))
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="bithresh", description=__doc__)
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    def with_spec(sp, state=True):
        sp.add_argument("--spec", required=True, help="system spec JSON file")
        if state:
            sp.add_argument("--state", required=True, help="state as b1b2...bn")
        sp.add_argument("--json", action="store_true")
        return sp

    sp = with_spec(sub.add_parser("step", help="iterate the system map"))
    sp.add_argument("--count", type=int, default=1)
    sp.set_defaults(func=cmd_step)

    sp = with_spec(sub.add_parser("orbit", help="transient, period and cycle from a state"))
    sp.add_argument("--low-memory", action="store_true", help="use Brent's O(1)-memory search")
    sp.set_defaults(func=cmd_orbit)

    sp = with_spec(sub.add_parser("phase-space", help="enumerate all states"), state=False)
    sp.add_argument("--dot")
    sp.add_argument("--csv")
    sp.add_argument("--cap", type=int, default=DEFAULT_CAP)
    sp.add_argument("--workers", type=int, default=1)
    sp.set_defaults(func=cmd_phase_space)

    sp = sub.add_parser("verify", help="run a verification suite")
    sp.add_argument("suite", choices=sorted(SUITES))
    sp.add_argument("--seed", type=int, default=DEFAULT_SEED)
    for name in ("count", "samples", "n-min", "n-max", "c-min", "c-max", "n1", "n2"):
        sp.add_argument(f"--{name}", type=int)
    sp.add_argument("--json", action="store_true")
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("union", help="bridged union of two sequential specs")
    sp.add_argument("--spec1", required=True)
    sp.add_argument("--spec2", required=True)
    sp.add_argument("--u1", type=int, default=1)
    sp.add_argument("--u2", type=int, default=1)
    sp.add_argument("--out")
    sp.add_argument("--state1")
    sp.add_argument("--state2")
    sp.add_argument("--state", help="state of the combined system")
    sp.set_defaults(func=cmd_union)

    sp = sub.add_parser("generate", help="write a spec for a graph family")
    sp.add_argument("family", choices=sorted(FAMILIES))
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--kup", type=int, default=1)
    sp.add_argument("--kdown", type=int, default=3)
    sp.add_argument("--degree-rule", action="store_true", help="kdown(v) = d(v) + 1")
    sp.add_argument("--update", choices=("sync", "seq"), default="seq")
    sp.add_argument("--pi", type=int, nargs="+")
    sp.add_argument("--out")
    sp.set_defaults(func=cmd_generate)

    sp = with_spec(sub.add_parser("trace", help="potential descent trace as CSV"))
    sp.add_argument("--max-steps", type=int, default=1000)
    sp.add_argument("--csv")
    sp.set_defaults(func=cmd_trace)

    sp = with_spec(sub.add_parser("certify", help="orbit certificate for a synchronous system"))
    sp.set_defaults(func=cmd_certify)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s: %(message)s")
    try:
        return args.func(args)
    except BithreshError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
