"""Command line: ``c2o compile | verify | diff | replay``.

Exit codes: 0 ok, 1 usage or unreadable input, 2 parse or type error,
3 well-formedness, 4 internal error, 5 interface mismatch, 10 counterexample
(``verify``/``replay``) or TranslationBug found (``diff``).
"""

from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path
from typing import Optional, Sequence

from c2o import __version__, errors as E
from c2o.codegen import TypeConfig
from c2o.emit import EmitTarget, emit
from c2o.frontend import Contract, parse
from c2o.harness import (ContractModel, DesignModel, bind, check_bounded, check_random, diff,
                         registered)
from c2o.harness.check import Harness
from c2o.pipeline import compile_contract
from c2o.report import RunManifest, diff_text, report_json, verify_text
from c2o.trace import Trace, parse_value

EXIT_OK, EXIT_USAGE, EXIT_PARSE, EXIT_WF, EXIT_INTERNAL, EXIT_MISMATCH = 0, 1, 2, 3, 4, 5
EXIT_FAIL = 10

_EXIT_FOR = [
    ((E.LexError, E.ParseError, E.ResolveError, E.TypeMismatch, E.ConstantOverflow,
      E.RecursiveNodeError), EXIT_PARSE),
    ((E.WellFormednessError, E.CombinationalCycle), EXIT_WF),
    ((E.InterfaceMismatch, E.BindingError), EXIT_MISMATCH),
    ((E.ConfigError,), EXIT_USAGE),
]


class UsageError(Exception):
    pass


def exit_code(exc: BaseException) -> int:
    for kinds, code in _EXIT_FOR:
        if isinstance(exc, kinds):
            return code
    return EXIT_INTERNAL


def _type_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--int-width", type=int, choices=(8, 16, 32), default=32)
    p.add_argument("--unsigned", action="store_true", help="lower int to uintN")
    p.add_argument("--real", choices=("single", "double"), default="double")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="c2o", description=__doc__.splitlines()[0])
    ap.add_argument("--version", action="version", version=f"c2o {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    c = sub.add_parser("compile", help="compile a contract to observer programs")
    c.add_argument("file")
    _type_flags(c)
    c.add_argument("--emit", action="append", choices=[t.value for t in EmitTarget],
                   help="target format (repeatable; default osl)")
    c.add_argument("--dump-ir", action="store_true", help="print the dataflow IR to stdout")
    c.add_argument("--out", default=".")

    v = sub.add_parser("verify", help="check a design model against a contract")
    v.add_argument("contract")
    v.add_argument("model", help="model contract file, or builtin:NAME")
    _type_flags(v)
    v.add_argument("--mode", choices=("bounded", "random"), default="bounded")
    v.add_argument("--depth", type=int, default=6)
    v.add_argument("--trials", type=int, default=1000)
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--domain", action="append", default=[], metavar="NAME=V1,V2,...")
    v.add_argument("--out", default=".")

    d = sub.add_parser("diff", help="differential test: observer versus reference evaluator")
    d.add_argument("files", nargs="+")
    _type_flags(d)
    d.add_argument("--trials", type=int, default=1000)
    d.add_argument("--depth", type=int, default=10)
    d.add_argument("--seed", type=int, default=0)
    d.add_argument("--jobs", type=int, default=os.cpu_count() or 1)
    d.add_argument("--domain", action="append", default=[], metavar="NAME=V1,V2,...")
    d.add_argument("--out", default=".")

    r = sub.add_parser("replay", help="re-run a counterexample trace")
    r.add_argument("contract")
    r.add_argument("model")
    r.add_argument("trace", help="CSV trace of the component inputs")
    _type_flags(r)
    return ap


def _cfg(args) -> TypeConfig:
    return TypeConfig(args.int_width, not args.unsigned, args.real)


def _read(path: str) -> str:
    try:
        return Path(path).read_text()
    except OSError as e:
        raise UsageError(f"cannot read {path}: {e.strerror}") from None


def _load(path: str) -> Contract:
    return parse(_read(path))


def _model(spec: str) -> tuple[DesignModel, list[str]]:
    if spec.startswith("builtin:"):
        try:
            return registered(spec.split(":", 1)[1]), []
        except KeyError as e:
            raise UsageError(e.args[0]) from None
    return ContractModel(_load(spec)), [spec]


def _domains(specs: Sequence[str], contract: Contract) -> dict[str, list]:
    types = dict(contract.input_types() + contract.output_types())
    out: dict[str, list] = {}
    for spec in specs:
        name, sep, values = spec.partition("=")
        if not sep or not values:
            raise UsageError(f"--domain expects NAME=V1,V2,..., got {spec!r}")
        if name not in types:
            raise UsageError(f"--domain: {name!r} is not a signal of {contract.name}")
        try:
            out[name] = [parse_value(v, types[name]) for v in values.split(",")]
        except (ValueError, TypeError) as e:
            raise UsageError(f"--domain {name}: {e}") from None
    return out


def _write(out: Path, files: dict[str, str]) -> None:
    """Write everything at once, after all work has succeeded."""
    out.mkdir(parents=True, exist_ok=True)
    for name, text in files.items():
        (out / name).write_text(text)


def cmd_compile(args, argv) -> int:
    contract = _load(args.file)
    compiled = compile_contract(contract, _cfg(args))
    if args.dump_ir:
        sys.stdout.write(compiled.ir.to_json())
    for w in contract.warnings:
        print(w.render(args.file), file=sys.stderr)
    targets = [EmitTarget(t) for t in (args.emit or ["osl"])]
    files = {f"{contract.name}{t.extension}": emit(compiled.program, t) for t in targets}
    _write(Path(args.out), files)
    for name in files:
        print(Path(args.out) / name)
    return EXIT_OK


def cmd_verify(args, argv) -> int:
    cfg = _cfg(args)
    contract = _load(args.contract)
    model, model_files = _model(args.model)
    binding = bind(contract, model)
    for w in binding.warnings:
        print(w.render(args.model), file=sys.stderr)
    domains = _domains(args.domain, contract)
    if args.mode == "bounded":
        res = check_bounded(binding, args.depth, domains, cfg)
    else:
        res = check_random(binding, args.trials, args.depth, args.seed, domains, cfg)
    manifest = RunManifest.create("verify", cfg, [args.contract] + model_files, argv,
                                  args.seed if args.mode == "random" else None)
    result = res.to_dict()
    text = verify_text(contract.name, result)
    files = {f"{contract.name}.verify.json": report_json(manifest, result),
             f"{contract.name}.verify.txt": text}
    if res.counterexample:
        files[f"{contract.name}.cex.csv"] = res.counterexample.trace.to_csv(
            [(s.name, s.ty) for s in binding.inputs])
    _write(Path(args.out), files)
    sys.stdout.write(text)
    return EXIT_OK if res.passed else EXIT_FAIL


def cmd_diff(args, argv) -> int:
    cfg = _cfg(args)
    contracts = [(f, _load(f)) for f in args.files]
    results, bugs = [], 0
    for path, contract in contracts:
        rep = diff(contract, cfg, args.trials, args.depth, args.seed,
                   _domains(args.domain, contract) if len(contracts) == 1 else
                   _shared_domains(args.domain, contract), args.jobs)
        bugs += rep.translation_bugs
        d = rep.to_dict()
        d["file"] = path
        results.append(d)
        sys.stdout.write(diff_text(d))
    manifest = RunManifest.create("diff", cfg, args.files, argv, args.seed)
    _write(Path(args.out), {"diff.json": report_json(manifest, results)})
    return EXIT_OK if bugs == 0 else EXIT_FAIL


def _shared_domains(specs, contract: Contract) -> dict:
    # with several files, a --domain applies only where the signal exists
    names = {n for n, _ in contract.input_types() + contract.output_types()}
    return _domains([s for s in specs if s.partition("=")[0] in names], contract)


def cmd_replay(args, argv) -> int:
    cfg = _cfg(args)
    contract = _load(args.contract)
    model, _ = _model(args.model)
    binding = bind(contract, model)
    try:
        trace = Trace.from_csv(_read(args.trace), [(s.name, s.ty) for s in binding.inputs])
    except ValueError as e:
        raise UsageError(f"{args.trace}: {e}") from None
    found = Harness(binding, cfg).first_failure(trace.steps)
    if found is None:
        print(f"no guarantee fails over {len(trace)} steps")
        return EXIT_OK
    print(f"{found[1]!r} fails at step {found[0]}")
    return EXIT_FAIL


def _source(args) -> str:
    for attr in ("file", "contract"):
        if getattr(args, attr, None):
            return getattr(args, attr)
    return "<input>"


COMMANDS = {"compile": cmd_compile, "verify": cmd_verify, "diff": cmd_diff,
            "replay": cmd_replay}


def main(argv: Optional[Sequence[str]] = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as e:
        return EXIT_USAGE if e.code else EXIT_OK
    try:
        return COMMANDS[args.command](args, argv)
    except UsageError as e:
        print(f"c2o: error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except E.WellFormednessError as e:
        for d in e.diagnostics:
            print(d.render(_source(args)), file=sys.stderr)
        return EXIT_WF
    except E.InterfaceMismatch as e:
        print("c2o: interface mismatch:", file=sys.stderr)
        for line in e.details:
            print(f"  {line}", file=sys.stderr)
        return EXIT_MISMATCH
    except E.C2OError as e:
        print(f"c2o: {e}", file=sys.stderr)
        return exit_code(e)
    except Exception as e:  # pragma: no cover - reported, never swallowed silently
        print(f"c2o: internal error: {type(e).__name__}: {e}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
