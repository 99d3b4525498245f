"""Command-line interface.

Exit codes: 0 success, 1 audit violation, 2 input error, 3 resource cap.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import cohomology, theorems
from .cohomology import DEFAULT_COCHAIN_CAP, DEFAULT_WINDOW, CapExceeded, cyclic_tate_oracle, h2, tate
from .exactla import AbelianInvariants
from .extensions import (GroupExtensionData, dagger, middle_group, roundtrip_check, roundtrip_check_module,
                         splitting_module, star)
from .gmodules import augmentation_ideal, direct_sum, group_ring, trivial_module
from .groups import BUILTIN_NAMES, FiniteGroup, is_p_group, subgroups
from .serialize import (dump_json, extension_from_json, extension_to_json, group_from_json,
                        group_to_json, load_json, module_extension_from_json,
                        module_extension_to_json, module_from_json, module_to_json)

EXIT_OK, EXIT_AUDIT, EXIT_INPUT, EXIT_CAP = 0, 1, 2, 3
DEFAULT_KERNEL_ORDER = 4


class InputError(ValueError):
    pass


def parse_range(text: str) -> tuple[int, int]:
    """``lo..hi`` (inclusive), a single integer ``i``, or ``N`` read as ``i..i``."""
    try:
        if ".." in text:
            lo, hi = (int(x) for x in text.split("..", 1))
        else:
            lo = hi = int(text)
    except ValueError:
        raise InputError(f"bad degree range {text!r}; expected lo..hi") from None
    if lo > hi:
        raise InputError(f"degree range {text!r} has lo > hi")
    return lo, hi


def fmt(X: AbelianInvariants) -> str:
    return "[" + ",".join(map(str, X.factors)) + "]" + (f"+Z^{X.free_rank}" if X.free_rank else "")


def _group(ref: str) -> FiniteGroup:
    return group_from_json(ref)


def _emit(args, text: str) -> None:
    if getattr(args, "out", None):
        Path(args.out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _kernel(G: FiniteGroup, args):
    if args.kernel_module:
        return module_from_json(load_json(args.kernel_module), G)
    try:
        diag = [int(x) for x in args.kernel.replace(" ", "").split(",") if x]
    except ValueError:
        raise InputError(f"bad --kernel {args.kernel!r}; expected comma-separated orders") from None
    if any(d < 1 for d in diag):
        raise InputError("--kernel orders must be positive")
    X = AbelianInvariants.from_diagonal(diag)
    action = args.action
    if action == "trivial":
        return trivial_module(G, X)
    if action.startswith("sign:"):
        H = tuple(sorted(int(x) for x in action[5:].split(",") if x))
        if frozenset(H) not in subgroups(G) or 2 * len(H) != G.order:
            raise InputError(f"sign action needs an index-2 subgroup, got {set(H)}")
        if len(X.factors) != 1:
            raise InputError("sign action needs a cyclic kernel")
        m = X.factors[0]
        return theorems.KernelSpec("sign", X.factors, m, H).build(G)
    raise InputError(f"unknown --action {action!r}; use 'trivial' or 'sign:<elements of H>'")


# --------------------------------------------------------------------------
# subcommands


def cmd_tate(args) -> int:
    G = _group(args.group)
    M = module_from_json(load_json(args.module), G)
    lo, hi = parse_range(args.degrees)
    window = DEFAULT_WINDOW if args.degree_window is None else args.degree_window
    lines = []
    for i in range(lo, hi + 1):
        lines.append(f"{i}: {fmt(tate(G, M, i, window=window, cochain_cap=args.cochain_cap))}\n")
    _emit(args, "".join(lines))
    return EXIT_OK


def cmd_h2(args) -> int:
    G = _group(args.group)
    A = _kernel(G, args)
    desc = h2(G, A, enumerate=args.enumerate, module_cap=args.max_kernel_order_cap,
              enumeration_cap=args.enumeration_cap)
    print(f"H2: {fmt(desc.class_group)}")
    if args.enumerate:
        print(f"representatives: {len(desc.representatives)}"
              + ("" if desc.complete else " (enumeration capped)"))
        if args.out:
            out = Path(args.out)
            out.mkdir(parents=True, exist_ok=True)
            for j, f in enumerate(desc.representatives):
                (out / f"cocycle_{j}.json").write_text(dump_json(f.to_json()), encoding="utf-8")
            print(f"written to {out}")
    return EXIT_OK


def _bundle(args):
    return extension_from_json(load_json(args.bundle), _group(args.group) if args.group else None)


def cmd_split(args) -> int:
    _emit(args, dump_json(module_to_json(splitting_module(_bundle(args)))))
    return EXIT_OK


def cmd_middle(args) -> int:
    E = middle_group(_bundle(args))
    orders = sorted(E.group.element_order(g) for g in range(E.group.order))
    doc = {"group": E.group.to_json(), "inject": list(E.inject), "project": list(E.project),
           "order": E.group.order, "element_orders": orders}
    _emit(args, dump_json(doc))
    return EXIT_OK


def cmd_dagger(args) -> int:
    e = module_extension_from_json(load_json(args.bundle), _group(args.group) if args.group else None)
    _emit(args, dump_json(extension_to_json(dagger(e))))
    return EXIT_OK


def cmd_star(args) -> int:
    _emit(args, dump_json(module_extension_to_json(star(_bundle(args)))))
    return EXIT_OK


def cmd_roundtrip(args) -> int:
    data = load_json(args.bundle)
    G = _group(args.group) if args.group else None
    if isinstance(data, dict) and "middle" in data:
        rep = roundtrip_check_module(module_extension_from_json(data, G))
    else:
        rep = roundtrip_check(extension_from_json(data, G))
    where = ""
    if args.out:
        Path(args.out).write_text(dump_json(rep.to_json()), encoding="utf-8")
        where = f" (witness: {args.out})"
    print(("PASS" if rep.ok else "FAIL") + where)
    if not rep.ok:
        for k, v in rep.checks.items():
            if not v:
                print(f"  failed: {k}")
    return EXIT_OK if rep.ok else EXIT_AUDIT


def _census(args, G: FiniteGroup) -> theorems.CensusReport:
    lo, hi = parse_range(args.degree_window) if args.degree_window else theorems.DEFAULT_CENSUS_WINDOW
    return theorems.census_run(G, args.max_kernel_order, (lo, hi), jobs=args.jobs,
                               cochain_cap=args.cochain_cap)


def cmd_census(args) -> int:
    G = _group(args.group)
    report = _census(args, G)
    text = report.to_csv() if args.format == "csv" else dump_json(report.to_json())
    _emit(args, text)
    failed = [k for k, v in report.audits.items() if not v.passed]
    for k in failed:
        print(f"audit {k} FAILED: {len(report.audits[k].violations)} violations", file=sys.stderr)
    return EXIT_AUDIT if failed else EXIT_OK


# -- verify suites ------------------------------------------------------------


def _suite_h0_h2_witnesses(G, args, log):
    bad = 0
    for X in theorems.small_targets(G.order):
        _, h0 = theorems.h0_realization_witness(G, X, cochain_cap=args.cochain_cap)
        _, h2v = theorems.h2_realization_witness(G, X, cochain_cap=args.cochain_cap)
        ok = h0 == X and h2v == X
        bad += not ok
        log(f"X={fmt(X)}: Ĥ^0 {fmt(h0)}, Ĥ^2 {fmt(h2v)} {'ok' if ok else 'MISMATCH'}")
    return bad


def _suite_h_minus2_witnesses(G, args, log):
    found = theorems.find_h_minus2_vanisher(G, args.max_kernel_order, cochain_cap=args.cochain_cap)
    if not found:
        log(f"no Ĥ^-2 vanisher within kernel order {args.max_kernel_order} "
            f"({found.kernels_searched} kernels, {found.classes_searched} classes searched)")
        return 0
    M0 = splitting_module(found)
    log(f"Ĥ^-2 vanisher: kernel {fmt(found.kernel.invariants())}")
    bad = 0
    for X in theorems.small_targets(G.order):
        _, h = theorems.h_minus2_realization_witness(G, M0, X, cochain_cap=args.cochain_cap)
        bad += h != X
        log(f"X={fmt(X)}: Ĥ^-2 {fmt(h)} {'ok' if h == X else 'MISMATCH'}")
    return bad


def _suite_audit(name):
    def run(G, args, log):
        if name == "divisibility" and not G.is_abelian():
            raise InputError(f"the {args.suite} suite needs an abelian group")
        report = _census(args, G)
        verdict = report.audits[name]
        log(f"{len(report.instances)} instances, complete={report.complete}, "
            f"applicable={verdict.applicable}, violations={len(verdict.violations)}")
        for v in verdict.violations:
            log(f"  {v}")
        return len(verdict.violations)
    return run


def _suite_roundtrip(G, args, log):
    bad = count = 0
    for spec in theorems.census_kernels(G, args.max_kernel_order):
        A = spec.build(G)
        for f in h2(G, A).representatives:
            eps = GroupExtensionData(G, A, f)
            a = roundtrip_check(eps)
            b = roundtrip_check_module(star(eps))
            count += 1
            if not (a.ok and b.ok):
                bad += 1
                log(f"{spec.label}: FAIL {a.checks} {b.checks}")
    log(f"{count} extensions checked")
    return bad


def _suite_oracle(G, args, log):
    if not G.is_cyclic():
        raise InputError("the oracle suite needs a cyclic group")
    lo, hi = parse_range(args.degree_window) if args.degree_window else (-3, 3)
    mods = [augmentation_ideal(G), trivial_module(G, AbelianInvariants(free_rank=1)), group_ring(G)]
    for spec in theorems.census_kernels(G, args.max_kernel_order):
        A = spec.build(G)
        mods.append(A)
        mods.append(direct_sum(A, augmentation_ideal(G)))
    bad = 0
    for M in mods:
        for i in range(lo, hi + 1):
            a, b = tate(G, M, i, cochain_cap=args.cochain_cap), cyclic_tate_oracle(G, M, i)
            if a != b:
                bad += 1
                log(f"{M.name} degree {i}: bar {fmt(a)} vs oracle {fmt(b)}")
    log(f"{len(mods)} modules x {hi - lo + 1} degrees compared")
    return bad


SUITES = {
    "witnesses": _suite_h0_h2_witnesses,
    "vanisher-witnesses": _suite_h_minus2_witnesses,
    "divisibility": _suite_audit("divisibility"),
    "nonvanishing": _suite_audit("nonvanishing"),
    "roundtrip": _suite_roundtrip,
    "oracle": _suite_oracle,
}
# short names kept for existing scripts
SUITE_ALIASES = {"thm3": "witnesses", "lemma1": "vanisher-witnesses",
                 "suzuki": "divisibility", "satz94": "nonvanishing"}


def cmd_verify(args) -> int:
    G = _group(args.group)
    lines = []
    bad = SUITES[SUITE_ALIASES.get(args.suite, args.suite)](G, args, lines.append)
    lines.append(f"{args.suite}: {'PASS' if not bad else 'FAIL'}, {bad} violations")
    _emit(args, "\n".join(lines) + "\n")
    return EXIT_OK if not bad else EXIT_AUDIT


def cmd_group(args) -> int:
    if args.action == "list":
        _emit(args, "".join(f"{name}\n" for name in BUILTIN_NAMES))
        return EXIT_OK
    if not args.name:
        raise InputError("group describe needs a group reference")
    G = _group(args.name)
    orders = [G.element_order(g) for g in range(G.order)]
    doc = {
        "group": group_to_json(G),
        "order": G.order,
        "abelian": G.is_abelian(),
        "cyclic": G.is_cyclic(),
        "exponent": G.exponent,
        "p_group": is_p_group(G),
        "element_orders": orders,
        "subgroup_count": len(subgroups(G)),
    }
    _emit(args, dump_json(doc))
    return EXIT_OK


# --------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="tatecoh", description="Tate cohomology of splitting modules.")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, group_required=True):
        sp.add_argument("--group", required=group_required,
                        help="builtin:<name> or path to a group JSON file")
        sp.add_argument("--out", help="output path (default: standard output)")
        sp.add_argument("--cochain-cap", type=int, default=DEFAULT_COCHAIN_CAP,
                        help=f"largest cochain space per block (default {DEFAULT_COCHAIN_CAP})")

    sp = sub.add_parser("tate", help="Tate cohomology of a module")
    common(sp)
    sp.add_argument("--module", required=True, help="module JSON file")
    sp.add_argument("--degrees", default="0..0", help="lo..hi (inclusive)")
    sp.add_argument("--degree-window", type=int, default=None,
                    help=f"largest |i| accepted (default {DEFAULT_WINDOW})")
    sp.set_defaults(func=cmd_tate)

    sp = sub.add_parser("h2", help="second cohomology with representatives")
    common(sp)
    sp.add_argument("--kernel", default="", help="comma-separated cyclic orders, e.g. 2,4")
    sp.add_argument("--kernel-module", help="kernel module JSON instead of --kernel")
    sp.add_argument("--action", default="trivial", help="trivial or sign:<elements of an index-2 subgroup>")
    sp.add_argument("--enumerate", action="store_true", help="write one cocycle file per class to --out")
    sp.add_argument("--max-kernel-order", dest="max_kernel_order_cap", type=int,
                    default=cohomology.H2_MODULE_CAP,
                    help=f"refuse kernels larger than this (default {cohomology.H2_MODULE_CAP})")
    sp.add_argument("--enumeration-cap", type=int, default=cohomology.H2_ENUMERATION_CAP,
                    help=f"most classes listed (default {cohomology.H2_ENUMERATION_CAP})")
    sp.set_defaults(func=cmd_h2)

    for name, func, text in (("split", cmd_split, "splitting module of an extension bundle"),
                             ("middle", cmd_middle, "middle group of an extension bundle"),
                             ("star", cmd_star, "module extension of an extension bundle"),
                             ("dagger", cmd_dagger, "group extension of a module extension bundle"),
                             ("roundtrip", cmd_roundtrip, "check both dictionary round trips")):
        sp = sub.add_parser(name, help=text)
        common(sp, group_required=False)
        sp.add_argument("--bundle", required=True, help="extension bundle JSON file")
        sp.set_defaults(func=func)

    def census_flags(sp):
        sp.add_argument("--max-kernel-order", type=int, default=DEFAULT_KERNEL_ORDER,
                        help=f"largest kernel order enumerated (default {DEFAULT_KERNEL_ORDER})")
        sp.add_argument("--degree-window", default=None, help="lo..hi (default -2..2)")
        sp.add_argument("--jobs", type=int, default=1, help="worker processes (default 1)")

    sp = sub.add_parser("census", help="tabulate Tate groups of splitting modules")
    common(sp)
    census_flags(sp)
    sp.add_argument("--format", choices=("json", "csv"), default="json", help="default json")
    sp.set_defaults(func=cmd_census)

    sp = sub.add_parser("verify", help="run a verification suite")
    common(sp)
    census_flags(sp)
    sp.add_argument("--suite", required=True, choices=sorted(SUITES) + sorted(SUITE_ALIASES))
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("group", help="list or describe groups")
    sp.add_argument("action", choices=("list", "describe"))
    sp.add_argument("name", nargs="?", help="builtin name, for describe")
    sp.add_argument("--out", help="output path (default: standard output)")
    sp.set_defaults(func=cmd_group)
    return p


_RANGE_FLAGS = ("--degrees", "--degree-window")


def _join_ranges(argv: list[str]) -> list[str]:
    """Let ``--degrees -3..3`` through; argparse would read ``-3..3`` as a flag."""
    out, i = [], 0
    while i < len(argv):
        if argv[i] in _RANGE_FLAGS and i + 1 < len(argv) and argv[i + 1].startswith("-"):
            out.append(f"{argv[i]}={argv[i + 1]}")
            i += 2
        else:
            out.append(argv[i])
            i += 1
    return out


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(_join_ranges(sys.argv[1:] if argv is None else list(argv)))
    if getattr(args, "jobs", 1) < 1:
        print("error: --jobs must be >= 1", file=sys.stderr)
        return EXIT_INPUT
    try:
        return args.func(args)
    except CapExceeded as exc:
        print(f"error: resource cap: {exc}", file=sys.stderr)
        return EXIT_CAP
    except (ValueError, KeyError, OSError, ArithmeticError) as exc:
        msg = exc.args[0] if isinstance(exc, KeyError) and exc.args else exc
        print(f"error: {type(exc).__name__}: {msg}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
