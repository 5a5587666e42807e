"""``ringstab`` command-line entry point."""
import argparse
import os
import sys

from ..ring import RingError
from .report import build_report, emit_report, exit_code
from .specfile import SpecError, parse_ring_spec
from .suites import ALL, SUITES, Context, UnknownSuite, parse_ideal, run_ring, suite_names

DEFAULT_N = 3


def build_parser():
    p = argparse.ArgumentParser(prog="ringstab",
                                description="Exact checks on linear groups over finite rings.")
    p.add_argument("suite", help=f"one of: {', '.join(SUITES + (ALL,))}")
    p.add_argument("--spec", required=True, help="ring specification file")
    p.add_argument("--n", type=int, default=None, help="matrix size (default: from the spec, else 3)")
    p.add_argument("--ideal", default=None, help="comma-separated ideal generators (labels or codes)")
    p.add_argument("--cap", type=int, default=None, help="closure/enumeration cap")
    p.add_argument("--format", choices=("json", "text"), default="json")
    p.add_argument("--out", default=None, help="output path (default: stdout)")
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--ring", action="append", default=None, help="restrict to the named ring (repeatable)")
    p.add_argument("--samples", type=int, default=None, help="override every sample count")
    p.add_argument("--max-orbits", type=int, default=None, help="sample at most this many orbits in probes")
    p.add_argument("--timings", action="store_true", help="include wall-clock timings (breaks byte-identity)")
    return p


def run_suite(spec, suite, n=None, ideal=None, cap=None, seed=None, rings=None, samples=None,
              max_orbits=None, timings=False):
    """Run ``suite`` on the rings of a parsed spec and return the report document."""
    suite_names(suite)
    settings = spec.settings
    entries = [spec.get(name) for name in rings] if rings else spec.rings
    seed = seed if seed is not None else settings.get("seed", 0)
    out = []
    for entry in entries:
        size = n or entry.n or settings.get("n") or DEFAULT_N
        if size < 2:
            raise RingError("n must be at least 2")
        ring_cap = cap if cap is not None else entry.cap if entry.cap is not None else settings.get("cap")
        if ring_cap is None and os.environ.get("RINGSTAB_CAP"):
            ring_cap = int(os.environ["RINGSTAB_CAP"])
        I = parse_ideal(entry.ring, ideal) if ideal else None
        ctx = Context(entry.ring, size, ring_cap, seed, I, samples, max_orbits)
        results = run_ring(suite, ctx, timings)
        out.append({"name": entry.name, "ring": entry.ring.name, "descriptor": entry.ring.descriptor,
                    "order": int(entry.ring.order), "n": size, "cap": ring_cap, "results": results})
    report_settings = {"spec": os.path.basename(spec.path or "<text>"), "n": n, "ideal": ideal, "cap": cap,
                       "seed": seed, "samples": samples, "max_orbits": max_orbits}
    return build_report(suite, report_settings, out)


def run(args):
    suite_names(args.suite)
    spec = parse_ring_spec(args.spec)
    return run_suite(spec, args.suite, n=args.n, ideal=args.ideal, cap=args.cap, seed=args.seed, rings=args.ring,
                     samples=args.samples, max_orbits=args.max_orbits, timings=args.timings)


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        report = run(args)
    except (SpecError, UnknownSuite, RingError, OSError) as exc:
        print(f"ringstab: error: {exc}", file=sys.stderr)
        return 3
    text = emit_report(report, args.format, args.out)
    if args.out is None:
        sys.stdout.write(text)
    return exit_code(report)


if __name__ == "__main__":
    sys.exit(main())
