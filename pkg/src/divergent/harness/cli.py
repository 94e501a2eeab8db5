"""``divergent`` command line: run an operation, re-verify it, emit a JSON report.

Exit codes: 0 success, 2 malformed input, 3 missing capability,
4 failed verification.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from pathlib import Path

from ..enclosures import default_precision_bits
from ..errors import CapabilityError, MonotonicityError, OracleContractError, VerificationError
from .commands import COMMANDS, DEFAULTS
from .io import InputError, digest, dump_report, load_json
from .verify import verify

EXIT_OK, EXIT_INPUT, EXIT_CAPABILITY, EXIT_VERIFY = 0, 2, 3, 4


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="divergent", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)
    for name in [*COMMANDS, "verify"]:
        sp = sub.add_parser(name)
        src = sp.add_mutually_exclusive_group(required=True)
        src.add_argument("--in", dest="infile", metavar="FILE", help="JSON input file")
        src.add_argument("--json", dest="inline", metavar="TEXT", help="JSON input given inline")
        sp.add_argument("--out", metavar="FILE", help="write the report here instead of stdout")
        if name == "verify":
            continue
        sp.add_argument("--horizon", type=int)
        sp.add_argument("--hits", type=int)
        sp.add_argument("--depth", type=int)
        sp.add_argument("--seed", type=int, help="recorded only; constructions are deterministic")
        sp.add_argument("--precision-bits", type=int)
        sp.add_argument("--mode", choices=["strong", "diagonal"])
        sp.add_argument("--log-form", action="store_true", help="theorem3: also carry x over to x + log(n+1)")
    return p


def _load_inputs(ns):
    if ns.infile is not None:
        try:
            return load_json(ns.infile)
        except OSError as e:
            raise InputError(f"{ns.infile}: {e.strerror}") from None
    try:
        return json.loads(ns.inline)
    except json.JSONDecodeError as e:
        raise InputError(f"--json:{e.lineno}:{e.colno}: {e.msg}") from None


def _args(command: str, ns) -> dict:
    args = dict(DEFAULTS.get(command, {}))
    for key in ("horizon", "hits", "depth", "mode"):
        v = getattr(ns, key)
        if v is not None:
            args[key] = v
    for key in ("horizon", "hits", "depth"):
        if key in args and args[key] < 1:
            raise InputError(f"--{key}: must be positive")
    args["precision_bits"] = ns.precision_bits or default_precision_bits()
    args["seed"] = ns.seed
    args["log_form"] = ns.log_form
    return args


def run_command(command: str, inputs, args: dict) -> tuple[dict, int]:
    """Construct, round-trip through JSON, re-verify.  Errors propagate."""
    t0 = time.perf_counter()
    outputs, approximate = COMMANDS[command](inputs, args)
    outputs = json.loads(json.dumps(outputs))
    checks = verify(command, inputs, outputs, args)
    report = {
        "command": command,
        "args": args,
        "input_digest": digest(inputs),
        "inputs": inputs,
        "outputs": outputs,
        "verification": checks,
        "flags": {"approximate": approximate},
        "timing": {"seconds": round(time.perf_counter() - t0, 6)},
    }
    return report, EXIT_OK if all(c["passed"] for c in checks) else EXIT_VERIFY


def reverify(report) -> tuple[dict, int]:
    """Re-run the verifier on a stored report and compare verdicts."""
    try:
        command = report["command"]
        inputs, outputs, args = report["inputs"], report["outputs"], report["args"]
        stored = report["verification"]
    except (KeyError, TypeError) as e:
        raise InputError(f"report: missing field {e}") from None
    if command not in COMMANDS:
        raise InputError(f"report.command: unknown command {command!r}")
    if digest(inputs) != report.get("input_digest"):
        raise InputError("report.input_digest: does not match report.inputs")
    t0 = time.perf_counter()
    checks = verify(command, inputs, outputs, args)
    same = [(c["check"], c["passed"]) for c in checks] == [(c["check"], c["passed"]) for c in stored]
    out = {
        "command": "verify",
        "args": {},
        "input_digest": digest(report),
        "inputs": {"command": command, "input_digest": report["input_digest"]},
        "outputs": {"verdicts_match": same},
        "verification": checks,
        "flags": {"approximate": bool(report.get("flags", {}).get("approximate"))},
        "timing": {"seconds": round(time.perf_counter() - t0, 6)},
    }
    ok = same and all(c["passed"] for c in checks)
    return out, EXIT_OK if ok else EXIT_VERIFY


def main(argv=None) -> int:
    ns = build_parser().parse_args(argv)
    try:
        inputs = _load_inputs(ns)
        if ns.command == "verify":
            report, code = reverify(inputs)
        else:
            report, code = run_command(ns.command, inputs, _args(ns.command, ns))
    except InputError as e:
        print(f"divergent: malformed input: {e}", file=sys.stderr)
        return EXIT_INPUT
    except CapabilityError as e:
        print(f"divergent: {e}", file=sys.stderr)
        return EXIT_CAPABILITY
    except MonotonicityError as e:
        print(f"divergent: missing capability monotone: {e}", file=sys.stderr)
        return EXIT_CAPABILITY
    except (VerificationError, OracleContractError) as e:
        print(f"divergent: verification failed: {e}", file=sys.stderr)
        return EXIT_VERIFY
    except (ValueError, KeyError, TypeError) as e:
        print(f"divergent: malformed input: {type(e).__name__}: {e}", file=sys.stderr)
        return EXIT_INPUT

    text = dump_report(report)
    if ns.out:
        Path(ns.out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    if code == EXIT_VERIFY:
        failed = [c["check"] for c in report["verification"] if not c["passed"]]
        print(f"divergent: verification failed: {failed or 'verdict mismatch'}", file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
