"""Command-line interface: ``modclass <command> --ring SPEC [options]``."""
from __future__ import annotations

import argparse
import dataclasses
import json
import re
import sys

import numpy as np

from . import __version__, config
from .errors import CapExceeded, InvalidSpec, ModclassError, NotCommutative, PreconditionViolated

SCHEMA = "modclass.report/1"

# Minimal published schema for every JSON report (checked by the test suite).
REPORT_SCHEMA = {
    "type": "object",
    "required": ["schema", "version", "command", "ring", "caps", "result"],
    "properties": {
        "schema": {"const": SCHEMA},
        "version": {"type": "string"},
        "command": {"type": "string"},
        "ring": {"type": "object"},
        "caps": {"type": "object"},
        "result": {"type": "object"},
    },
}

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_CAP = 0, 1, 2, 3


class UsageError(ModclassError):
    pass


def _plain(x):
    if isinstance(x, dict):
        return {str(k): _plain(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_plain(v) for v in x]
    if isinstance(x, np.ndarray):
        return _plain(x.tolist())
    if isinstance(x, np.bool_):
        return bool(x)
    if isinstance(x, np.integer):
        return int(x)
    return x


# ---------------------------------------------------------------- module specs

def _split_args(text: str) -> list[str]:
    parts, depth, cur = [], 0, []
    for ch in text:
        if ch in "([{":
            depth += 1
        elif ch in ")]}":
            depth -= 1
        if ch == "," and depth == 0:
            parts.append("".join(cur).strip())
            cur = []
        else:
            cur.append(ch)
    if depth != 0:
        raise InvalidSpec(f"unbalanced brackets in module spec {text!r}")
    parts.append("".join(cur).strip())
    return [p for p in parts if p]


def parse_module_spec(R, text: str):
    """regular | simple:i | inj:i | uniform:i | sum(a, b, ...) | power(a, k) | JSON tables."""
    from .injectivity import indecomposable_injectives, simple_modules, uniform_modules
    from .module import FiniteModule, direct_power, direct_sum, regular_module

    t = text.strip()
    if t.startswith("{"):
        try:
            data = json.loads(t)
            return FiniteModule.from_tables(R, data["add"], data["act"])
        except (ValueError, KeyError) as exc:
            raise InvalidSpec(f"bad module tables {t[:60]!r}: {exc}") from exc
    if t == "regular":
        return regular_module(R)
    m = re.fullmatch(r"(simple|inj|uniform):(\d+)", t)
    if m:
        pool = {"simple": simple_modules, "inj": indecomposable_injectives, "uniform": uniform_modules}[m[1]](R)
        i = int(m[2])
        if i >= len(pool):
            raise InvalidSpec(f"{t!r}: index out of range, the ring has {len(pool)}")
        return pool[i]
    m = re.fullmatch(r"(sum|power)\((.*)\)", t, flags=re.S)
    if m:
        args = _split_args(m[2])
        if m[1] == "sum":
            if not args:
                raise InvalidSpec(f"{t!r}: empty sum")
            mods = [parse_module_spec(R, a) for a in args]
            return mods[0] if len(mods) == 1 else direct_sum(*mods)[0]
        if len(args) != 2 or not args[1].isdigit() or int(args[1]) < 1:
            raise InvalidSpec(f"{t!r}: expected power(<module>, <k>=1,2,...)")
        return direct_power(parse_module_spec(R, args[0]), int(args[1]))
    raise InvalidSpec(f"unrecognized module spec {t!r}")


# ---------------------------------------------------------------- commands

def _module_summary(M) -> dict:
    from .lattice import composition_length

    return {"size": M.size, "invariants": list(M.invariants), "length": composition_length(M)}


def cmd_ring(R, args) -> tuple[dict, int]:
    from .ringtheory import is_semisimple_ring, jacobson_elements

    return {
        "size": R.size,
        "characteristic": R.characteristic,
        "commutative": R.is_commutative,
        "semisimple": is_semisimple_ring(R),
        "radical_size": len(jacobson_elements(R)),
        "units": len(R.units),
        "idempotents": len(R.idempotents),
    }, EXIT_OK


def _listing(mods) -> list[dict]:
    from .injectivity import is_injective

    return [{"index": i, **_module_summary(M), "injective": is_injective(M)} for i, M in enumerate(mods)]


def cmd_simples(R, args):
    from .injectivity import simple_modules

    return {"modules": _listing(simple_modules(R))}, EXIT_OK


def cmd_injectives(R, args):
    from .injectivity import indecomposable_injectives

    return {"modules": _listing(indecomposable_injectives(R))}, EXIT_OK


def cmd_uniforms(R, args):
    from .injectivity import uniform_modules

    return {"modules": _listing(uniform_modules(R))}, EXIT_OK


def cmd_classify(R, args):
    from .classification import classify

    M = parse_module_spec(R, args.module)
    return {"module": args.module, **classify(M).to_json()}, EXIT_OK


def cmd_hull(R, args):
    from .injectivity import injective_hull

    M = parse_module_spec(R, args.module)
    H = injective_hull(M, method=args.method)
    return {
        "module": args.module,
        "source": _module_summary(M),
        "hull": _module_summary(H.hull),
        "embedding": H.embedding.matrix,
        "certificate": H.minimality_certificate,
    }, EXIT_OK


def cmd_corpus(R, args):
    from .corpus import CLASS_IDS, module_corpus

    C = module_corpus(R, args.bound, args.generators)
    entries = []
    for k in range(len(C)):
        entries.append({
            "label": C.label(k),
            "size": C.entries[k].size,
            "classes": {c: C.member(c, k) for c in CLASS_IDS},
        })
    return {**C.describe(), "modules": entries}, EXIT_OK


def cmd_preenvelope(R, args):
    from .approximation import construct_C1_preenvelope

    if args.cls != "C1":
        raise UsageError(f"--class {args.cls!r}: only C1 preenvelopes are constructed")
    M = parse_module_spec(R, args.module)
    cert = construct_C1_preenvelope(M, args.bound, args.generators, check_envelope=args.envelope)
    code = EXIT_OK if cert.status != "FAILED" else EXIT_FAIL
    return {"module": args.module, **cert.to_json()}, code


def cmd_suite(R, args):
    from .approximation import run_suite

    rep = run_suite(args.name, R, bound=args.bound_given, generators=args.generators)
    return rep.to_json(), EXIT_OK if rep.passed else EXIT_FAIL


def cmd_keytrick(R, args):
    from .classification import key_trick_witness

    M = parse_module_spec(R, args.module)
    w = key_trick_witness(M)
    return {"module": args.module, **w.to_json()}, EXIT_OK if w.passed else EXIT_FAIL


COMMANDS = {
    "ring": cmd_ring,
    "simples": cmd_simples,
    "injectives": cmd_injectives,
    "uniforms": cmd_uniforms,
    "classify": cmd_classify,
    "hull": cmd_hull,
    "corpus": cmd_corpus,
    "preenvelope": cmd_preenvelope,
    "suite": cmd_suite,
    "keytrick": cmd_keytrick,
}


# ---------------------------------------------------------------- output

def _table(obj, indent: int = 0) -> list[str]:
    pad = "  " * indent
    lines = []
    if isinstance(obj, dict):
        for k, v in obj.items():
            if isinstance(v, (dict, list)) and v and not _is_flat(v):
                lines.append(f"{pad}{k}:")
                lines.extend(_table(v, indent + 1))
            else:
                lines.append(f"{pad}{k}: {_flat(v)}")
    elif isinstance(obj, list):
        for item in obj:
            if isinstance(item, dict):
                head = ", ".join(f"{k}={_flat(v)}" for k, v in item.items() if _is_flat(v) or not isinstance(v, (dict, list)))
                lines.append(f"{pad}- {head}")
                nested = {k: v for k, v in item.items() if isinstance(v, (dict, list)) and v and not _is_flat(v)}
                if nested:
                    lines.extend(_table(nested, indent + 1))
            else:
                lines.append(f"{pad}- {_flat(item)}")
    else:
        lines.append(f"{pad}{_flat(obj)}")
    return lines


def _is_flat(v) -> bool:
    if isinstance(v, dict):
        return all(not isinstance(x, (dict, list)) for x in v.values())
    if isinstance(v, list):
        return all(not isinstance(x, (dict, list)) for x in v) or len(json.dumps(v)) < 60
    return True


def _flat(v) -> str:
    if isinstance(v, (dict, list)):
        return json.dumps(v)
    if v is None:
        return "-"
    return str(v)


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="modclass", description=__doc__)
    p.add_argument("--version", action="version", version=f"modclass {__version__}")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--ring", help="ring spec: JSON or shorthand such as zmod:8, ut2:2, ut2rel:2,2")
    common.add_argument("--format", choices=("table", "json"), default="table")
    common.add_argument("--output", help="write the report here instead of stdout")
    common.add_argument("--module-cap", type=int)
    common.add_argument("--lattice-cap", type=int)
    common.add_argument("--hom-cap", type=int)
    common.add_argument("--generators", type=int, default=2, help="generator bound G for corpora")
    sub = p.add_subparsers(dest="command", required=True)
    for name in ("ring", "simples", "injectives", "uniforms"):
        sub.add_parser(name, parents=[common])
    for name in ("classify", "hull", "keytrick"):
        sp = sub.add_parser(name, parents=[common])
        sp.add_argument("--module", required=True)
        if name == "hull":
            sp.add_argument("--method", choices=("auto", "cogenerator", "socle"), default="auto")
    sp = sub.add_parser("corpus", parents=[common])
    sp.add_argument("--bound", type=int, default=64)
    sp = sub.add_parser("preenvelope", parents=[common])
    sp.add_argument("--module", required=True)
    sp.add_argument("--class", dest="cls", default="C1")
    sp.add_argument("--bound", type=int, default=64)
    sp.add_argument("--envelope", action="store_true", help="also test the envelope (minimality) property")
    sp = sub.add_parser("suite", parents=[common])
    sp.add_argument("name")
    sp.add_argument("--bound", dest="bound_given", type=int)
    return p


def run(argv=None) -> int:
    from .approximation import DEFAULT_RINGS, SUITES
    from .ring import build_ring, parse_ring_spec

    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_USAGE
    for flag in ("module_cap", "lattice_cap", "hom_cap", "generators", "bound", "bound_given"):
        v = getattr(args, flag, None)
        if v is not None and v <= 0:
            print(f"error: --{flag.replace('_given', '').replace('_', '-')} must be positive, got {v}", file=sys.stderr)
            return EXIT_USAGE
    if args.command == "suite" and args.name not in SUITES:
        print(f"error: unknown suite {args.name!r}; choose from {', '.join(sorted(SUITES))}", file=sys.stderr)
        return EXIT_USAGE
    ring_text = args.ring
    if ring_text is None:
        if args.command != "suite":
            print("error: --ring is required", file=sys.stderr)
            return EXIT_USAGE
        ring_text = DEFAULT_RINGS[args.name]
    overrides = {k: v for k, v in (("module_size", args.module_cap), ("lattice", args.lattice_cap), ("hom", args.hom_cap)) if v}
    try:
        with config.override(**overrides) as caps:
            R = build_ring(parse_ring_spec(ring_text))
            result, code = COMMANDS[args.command](R, args)
    except (InvalidSpec, UsageError, NotCommutative, PreconditionViolated) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except CapExceeded as exc:
        print(f"cap exceeded: {exc}", file=sys.stderr)
        return EXIT_CAP
    report = {
        "schema": SCHEMA,
        "version": __version__,
        "command": args.command,
        "ring": R.spec,
        "caps": dataclasses.asdict(caps),
        "result": result,
    }
    if hasattr(args, "bound"):
        report["corpus_bound"] = args.bound
    report = _plain(report)
    if args.format == "json":
        text = json.dumps(report, indent=2, sort_keys=True, ensure_ascii=False) + "\n"
    else:
        text = "\n".join(_table(report)) + "\n"
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return code


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
