"""Constructors behind each subcommand: parse inputs, run the operation, emit JSON outputs."""

from __future__ import annotations

from fractions import Fraction

from ..adversary import adversarial_open_set, separation_profile
from ..category import bump_transfer_demo, log_form_check, remark_witness, theorem3_witness, wave_family_probe
from ..exact import Interval, format_rational, interval, open_region_from_json
from ..omega import OmegaFunction, diagonal_dominator, le_star_verdict, monotone_envelope
from ..sequences import TRIANGLE, SequenceFamily, Wave, condition_c_probe, coverage_functional, make_generator, theorem2_sequence
from .io import InputError, require

DEFAULTS = {
    "dominate": {"horizon": 100},
    "envelope": {"horizon": 100},
    "theorem2": {"horizon": 32},
    "coverage": {"horizon": 20},
    "probe-c": {"horizon": 100, "hits": 5},
    "adversary": {"horizon": 64},
    "theorem3": {"depth": 10},
    "remark": {"hits": 10},
    "wave": {"horizon": 100, "hits": 10},
    "demo-bump": {"horizon": 64},
}


def _parse(where: str, fn, obj):
    try:
        return fn(obj)
    except InputError:
        raise
    except (KeyError, ValueError, TypeError, ZeroDivisionError) as e:
        raise InputError(f"{where}: {type(e).__name__}: {e}") from None


def parse_family(inputs) -> SequenceFamily:
    raw = require(inputs, "family", "input")
    if not isinstance(raw, list):
        raise InputError("input.family: expected a list")
    return SequenceFamily(tuple(_parse(f"input.family[{i}]", make_generator, s) for i, s in enumerate(raw)))


def parse_region(obj, where="input.open_set"):
    return _parse(where, open_region_from_json, obj)


def parse_interval(obj, default, where) -> Interval:
    if obj is None:
        return interval(*default)
    return _parse(where, Interval.from_json, obj)


def cmd_dominate(inputs, args):
    raw = inputs["functions"] if isinstance(inputs, dict) and "functions" in inputs else inputs
    if not isinstance(raw, list):
        raise InputError("input.functions: expected a list")
    family = [_parse(f"input.functions[{j}]", OmegaFunction.from_json, f) for j, f in enumerate(raw)]
    g = _parse("input.functions", diagonal_dominator, family)
    h = args["horizon"]
    return {"dominator": {"presentation": g.to_json(), "prefix": g.prefix(h)},
            "members": [{"member": j, "verdict": le_star_verdict(f, g, h).to_json()}
                        for j, f in enumerate(family)]}, False


def cmd_envelope(inputs, args):
    f = _parse("input.function", OmegaFunction.from_json, require(inputs, "function", "input"))
    env = monotone_envelope(f)
    h = args["horizon"]
    return {"prefix": f.prefix(h), "envelope": env.prefix(h), "presentation": env.to_json()}, False


def cmd_theorem2(inputs, args):
    g = _parse("input.g", OmegaFunction.from_json, require(inputs, "g", "input"))
    if inputs.get("envelope"):
        g = monotone_envelope(g)
    s = theorem2_sequence(g)
    h = args["horizon"]
    starts = []
    m = 0
    while s.block_start(m) < h:
        starts.append(s.block_start(m))
        m += 1
    return {"sequence": s.to_json(), "terms": [format_rational(s.term(n)) for n in range(h)],
            "block_starts": starts}, False


def cmd_coverage(inputs, args):
    s = _parse("input.sequence", make_generator, require(inputs, "sequence", "input"))
    indices = inputs.get("indices", list(range(args["horizon"])))
    return {"values": [{"i": i, "value": coverage_functional(s, i)} for i in indices]}, False


def cmd_probe_c(inputs, args):
    family = parse_family(inputs)
    U = parse_region(require(inputs, "open_set", "input"))
    res = condition_c_probe(family, U, args["hits"], args["horizon"])
    return res.to_json(), res.approximate


def cmd_adversary(inputs, args):
    family = parse_family(inputs)
    mode = inputs.get("mode") or args.get("mode") or "strong"
    profile = _parse("input.mode", lambda m: separation_profile(family, mode=m), mode)
    h = args["horizon"]
    U, certs = adversarial_open_set(profile, h)
    minimal = [profile.minimality_holds(a, n) for a in range(len(family)) for n in range(h)]
    return {"mode": mode,
            "base": [format_rational(profile.base.term(n)) for n in range(h)],
            "h": [profile.h_combined(n) for n in range(h)],
            "h_per_member": [[hm(n) for n in range(h)] for hm in profile.h_per_member],
            "open_set": U.to_json(),
            "certificates": [c.to_json() for c in certs],
            "minimality": {"cells": len(minimal), "holds": sum(minimal)}}, family.approximate


def cmd_theorem3(inputs, args):
    region = inputs["open_set"] if "open_set" in inputs else inputs
    U = parse_region(region, "input")
    start = parse_interval(inputs.get("start"), (1, 2), "input.start")
    w = theorem3_witness(U, args["depth"], start)
    out = w.to_json()
    approximate = False
    if args.get("log_form") or inputs.get("log_form"):
        out["log_form"] = log_form_check(w, U, args.get("precision_bits"))
        approximate = True
    return out, approximate


def cmd_remark(inputs, args):
    U = parse_region(require(inputs, "open_set", "input"))
    s = _parse("input.sequence", make_generator, require(inputs, "sequence", "input"))
    target = parse_interval(inputs.get("target"), (0, Fraction(1, 2)), "input.target")
    return remark_witness(U, s, target, args["hits"]).to_json(), False


def cmd_wave(inputs, args):
    U = parse_region(require(inputs, "open_set", "input"))
    variant = inputs.get("variant", "wave")
    if variant not in ("wave", "frac"):
        raise InputError("input.variant: expected 'wave' or 'frac'")
    wave = None
    if variant == "wave":
        wave = _parse("input.wave", Wave.from_json, inputs["wave"]) if "wave" in inputs else TRIANGLE
    res = wave_family_probe(U, wave, int(inputs.get("max_denominator", 16)), args["hits"], args["horizon"])
    out = res.to_json()
    out["variant"] = variant
    out["wave"] = wave.to_json() if wave is not None else None
    return out, False


def cmd_demo_bump(inputs, args):
    family = parse_family(inputs)
    return bump_transfer_demo(family, args["horizon"]).to_json(), family.approximate


COMMANDS = {
    "dominate": cmd_dominate,
    "envelope": cmd_envelope,
    "theorem2": cmd_theorem2,
    "coverage": cmd_coverage,
    "probe-c": cmd_probe_c,
    "adversary": cmd_adversary,
    "theorem3": cmd_theorem3,
    "remark": cmd_remark,
    "wave": cmd_wave,
    "demo-bump": cmd_demo_bump,
}
