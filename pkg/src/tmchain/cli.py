"""Command line front end: ``tmchain <command> <target> [options]``."""

from __future__ import annotations

import argparse
import sys
import warnings
from pathlib import Path

from .compile_netm import compile_tm_to_netm, dumps_compiled
from .compile_wang import compile_netm_to_hooper, compile_netm_to_wang
from .corpus import FAMILIES
from .has_encoding import NoFinalMarkWarning, assemble, load_manifest, manifest
from .hasenjaeger import HasenjaegerConfig, canonical_machine, has_run
from .tapes import HeadedTape
from .turing import TmConfig, loads_tm, tm_run, tm_step
from .wang import WangConfig, dumps_wb, loads_wb, wang_run, wang_step
from .workbench import bench_slowdown, bench_tsv, golden_table1, run_chain


def _tape(args) -> HeadedTape:
    return HeadedTape.from_string(args.tape or "", args.head)


def _report(status: str, steps: int, tape: HeadedTape) -> str:
    offset, bits = tape.window()
    return (f"status: {status}\nsteps: {steps}\nhead: {tape.head}\n"
            f"offset: {offset}\ntape: {bits}\n")


def _trace_tm(m, tape, budget, out):
    out.write("step\tstate\thead\tread\twrite\tmove\tnext\n")
    c = TmConfig(0, tape)
    for step in range(1, budget + 1):
        if c.state == m.halt_state:
            break
        r = m.rule(c.state, c.tape.read())
        out.write(f"{step}\t{c.state}\t{c.tape.head}\t{r.read}\t{r.write}\t{r.move}\t{r.to_state}\n")
        c = tm_step(m, c)


def _trace_wang(p, tape, budget, out):
    out.write("step\tpc\tinstr\thead\tread\n")
    c = WangConfig(0, tape)
    for step in range(1, budget + 1):
        if c.pc >= len(p):
            break
        out.write(f"{step}\t{c.pc}\t{p[c.pc]}\t{c.tape.head}\t{c.tape.read()}\n")
        c = wang_step(p, c)


def cmd_run(args) -> int:
    text = Path(args.program).read_text()
    trace = open(args.trace, "w") if args.trace else None
    try:
        if args.target in ("tm", "netm"):
            m = loads_tm(text, non_erasing=args.target == "netm")
            tape = _tape(args)
            r = tm_run(m, tape, budget=args.max_steps)
            if trace:
                _trace_tm(m, tape, args.max_steps, trace)
            sys.stdout.write(_report(r.status.value, r.steps, r.final.tape))
        elif args.target == "wang":
            p, _ = loads_wb(text)
            tape = _tape(args)
            r = wang_run(p, tape, budget=args.max_steps)
            if trace:
                _trace_wang(p, tape, args.max_steps, trace)
            sys.stdout.write(_report(r.status.value, r.steps, r.final.tape))
        else:
            asm = load_manifest(text)
            cfg = asm.config
            if args.tape is not None:
                cfg = HasenjaegerConfig(cfg.state, cfg.p, cfg.c, _tape(args))
            r = has_run(canonical_machine(), cfg, args.max_steps, asm.halt,
                        fast=trace is None, trace=trace)
            sys.stdout.write(_report(r.status.value, r.steps, r.final.w))
            sys.stdout.write("rules: " + " ".join(f"{k}:{v}" for k, v in sorted(r.rule_counts.items())) + "\n")
    finally:
        if trace:
            trace.close()
    return 0


def cmd_compile(args) -> int:
    text = Path(args.inp).read_text()
    if args.target == "tm-to-netm":
        out = dumps_compiled(compile_tm_to_netm(loads_tm(text)))
    else:
        m = loads_tm(text, non_erasing=True)
        fn = compile_netm_to_wang if args.target == "netm-to-wang" else compile_netm_to_hooper
        prog, codec = fn(m)
        out = dumps_wb(prog, codec.header())
    Path(args.out).write_text(out)
    return 0


def cmd_encode(args) -> int:
    p, _ = loads_wb(Path(args.inp).read_text())
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always", NoFinalMarkWarning)
        asm = assemble(p, _tape(args), append_mark=args.append_mark, physical=args.physical)
    for w in caught:
        sys.stderr.write(f"warning: {w.message}\n")
    Path(args.out_manifest).write_text(manifest(asm))
    return 0


def cmd_verify(args) -> int:
    m = loads_tm(Path(args.tm).read_text())
    rep = run_chain(m, _tape(args), args.max_steps)
    text = rep.to_text()
    if args.report:
        Path(args.report).write_text(text)
    sys.stdout.write(text)
    return 0 if rep.passed else 1


def cmd_bench(args) -> int:
    sizes = [int(s) for s in args.sizes.split(",") if s.strip()]
    rows = bench_slowdown(args.family, sizes)
    sys.stdout.write(bench_tsv(rows))
    return 0


def cmd_golden(args) -> int:
    res = golden_table1()
    sys.stdout.write(res.to_text())
    return 0 if res.passed else 1


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="tmchain", description=__doc__)
    sub = ap.add_subparsers(dest="command", required=True)

    def tape_opts(p):
        p.add_argument("--tape", default=None, help="bits for cells 0..len-1")
        p.add_argument("--head", type=int, default=0)

    p = sub.add_parser("run", help="run a machine")
    p.add_argument("target", choices=["tm", "netm", "wang", "has"])
    p.add_argument("--program", required=True)
    tape_opts(p)
    p.add_argument("--max-steps", type=int, default=10_000)
    p.add_argument("--trace")
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("compile", help="compile one level down")
    p.add_argument("target", choices=["tm-to-netm", "netm-to-wang", "netm-to-hooper"])
    p.add_argument("--in", dest="inp", required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_compile)

    p = sub.add_parser("encode", help="encode a Wang program for Hasenjaeger's machine")
    p.add_argument("target", choices=["wang-to-has"])
    p.add_argument("--in", dest="inp", required=True)
    tape_opts(p)
    p.add_argument("--out-manifest", required=True)
    p.add_argument("--physical", action="store_true")
    p.add_argument("--append-mark", action="store_true")
    p.set_defaults(func=cmd_encode)

    p = sub.add_parser("verify", help="check a machine against the whole chain")
    p.add_argument("target", choices=["chain"])
    p.add_argument("--tm", required=True)
    tape_opts(p)
    p.add_argument("--max-steps", type=int, default=200)
    p.add_argument("--report")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("bench", help="measure slowdown over a machine family")
    p.add_argument("target", choices=["slowdown"])
    p.add_argument("--family", choices=sorted(FAMILIES), default="incrementer")
    p.add_argument("--sizes", default="4,8,16")
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("golden", help="compare the built-in rule table with its transcription")
    p.add_argument("target", choices=["table1"])
    p.set_defaults(func=cmd_golden)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, OSError) as e:
        sys.stderr.write(f"error: {e}\n")
        return 2


if __name__ == "__main__":
    sys.exit(main())
