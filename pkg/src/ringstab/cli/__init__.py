"""Command-line front end."""
from .report import SCHEMA, build_report, emit_report, exit_code
from .specfile import RingSpec, SpecError, parse_ring_spec, parse_ring_spec_text
from .suites import SUITES, Context, run_ring

__all__ = ["SCHEMA", "SUITES", "Context", "RingSpec", "SpecError", "build_report", "emit_report", "exit_code",
           "parse_ring_spec", "parse_ring_spec_text", "run_ring"]
