"""Command-line interface.

Exit codes: 0 success / all rounds passed, 1 verification failure,
2 usage or file-format error, 3 inconsistent dealing, 4 insufficient shares.
"""

from __future__ import annotations

import argparse
import random
import shutil
import sys
from pathlib import Path

from .access import AuthorizedSet, build_vtn_structure
from .algebra import BitVector
from .analysis import (
    EstimateConfig,
    TamperModel,
    format_table,
    random_vector_control,
    sweep_m,
    tamper_payload,
)
from .control import TableControl, TruthTable
from .dealer import InconsistentDealing, deal
from .fileformat import BUILTINS, FormatError, ShareFile, resolve_control
from .protocol import VerificationFailed, recover_secret, render_report, run_protocol
from .sharing import InsufficientShares, KghInstance, ShamirInstance

EXIT_OK = 0
EXIT_VERIFY_FAILED = 1
EXIT_USAGE = 2
EXIT_INCONSISTENT = 3
EXIT_INSUFFICIENT = 4


class UsageError(Exception):
    pass


def _int_list(text: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def _read_secret(args) -> int:
    if args.secret is not None:
        return args.secret
    text = sys.stdin.readline().strip()
    try:
        return int(text)
    except ValueError:
        raise UsageError("secret must be given with --secret or as an integer on standard input") from None


def _stage_tables(spec: str, out: Path) -> str:
    """Copy table files next to the share file; return the name for the header."""
    if spec in BUILTINS:
        return spec
    names = []
    for part in spec.split(","):
        src = Path(part)
        dst = out.parent / src.name
        if not dst.exists():
            shutil.copyfile(src, dst)
        elif dst.resolve() != src.resolve() and dst.read_bytes() != src.read_bytes():
            raise UsageError(f"{dst} exists with different contents")
        names.append(src.name)
    return ",".join(names)


def cmd_deal(args) -> int:
    out = Path(args.out)
    if args.scheme == "shamir":
        if args.p is None or args.t is None:
            raise UsageError("shamir dealing needs --p and --t")
        scheme = ShamirInstance(args.p, args.t, args.n)
        p, t = args.p, args.t
    else:
        if args.l is None:
            raise UsageError("kgh dealing needs --l")
        scheme = KghInstance(args.n, args.l)
        p, t = 0, args.n
    l = scheme.l
    v = args.v if args.v is not None else t
    secret = _read_secret(args)
    if not 0 <= secret < (scheme.p if args.scheme == "shamir" else 1 << l):
        raise UsageError(f"secret {secret} out of range for the scheme")
    if args.f not in BUILTINS:
        parts = args.f.split(",")
        for part in parts:
            if not Path(part).is_file():
                raise UsageError(f"no such truth table file: {part}")
        f = TableControl([TruthTable.load(x) for x in parts], name=",".join(Path(x).name for x in parts))
        m = f.m
        if f.l != l:
            raise UsageError(f"tables have l={f.l}, the scheme needs l={l}")
    else:
        m = args.m
        f = resolve_control(args.f, l, m)
    vs = build_vtn_structure(v, t, args.n)
    rng = random.Random(args.seed)
    shares = deal(scheme, secret, vs, f, rng, coeffs=args.coeffs, strategy=args.strategy,
                  max_attempts=args.max_attempts)
    name = _stage_tables(args.f, out)
    sf = ShareFile.from_shares(shares, scheme=args.scheme, p=p, t=t, n=args.n, v=v, l=l, m=m,
                               strategy=args.strategy, f=name)
    sf.write(out)
    print(f"wrote {len(shares)} shares to {out}", file=sys.stderr)
    return EXIT_OK


def _load(args):
    sf = ShareFile.read(args.shares)
    f = resolve_control(sf.f, sf.l, sf.m, Path(args.shares).parent)
    auth = AuthorizedSet(tuple(args.auth))
    if any(i > sf.n for i in auth):
        raise UsageError(f"--auth names participants beyond n={sf.n}")
    return sf, f, auth


def cmd_verify(args) -> int:
    sf, f, auth = _load(args)
    report = run_protocol(auth, sf.structure(), sf.shares(), f)
    sys.stdout.write(f"control f={sf.f} digest={f.digest()}\n")
    sys.stdout.write(render_report(report))
    sys.stdout.write(f"overall {report.overall}\n")
    if not report.all_pass:
        sys.stdout.write("suspects " + ",".join(str(i) for i in report.suspects()) + "\n")
        return EXIT_VERIFY_FAILED
    return EXIT_OK


def cmd_recover(args) -> int:
    sf, f, auth = _load(args)
    scheme = sf.scheme_instance()
    if sf.scheme == "kgh" and len(auth) != sf.n:
        raise InsufficientShares(f"kgh recovery needs all {sf.n} shares")
    try:
        secret = recover_secret(auth, sf.shares(), scheme, require_verification=not args.skip_verify,
                                vs=sf.structure(), f=f)
    except VerificationFailed as exc:
        sys.stderr.write(render_report(exc.report))
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VERIFY_FAILED
    print(f"secret={secret} bits={BitVector(secret, sf.l)}")
    return EXIT_OK


def cmd_tamper(args) -> int:
    sf = ShareFile.read(args.shares)
    ids = [i for i, _ in sf.records]
    if args.victim not in ids:
        raise UsageError(f"no share for participant {args.victim}")
    rng = random.Random(args.seed)
    width = sf.l + sf.m
    kind = "flip_random_bit" if args.mode == "flip-bit" else "replace_random_share"
    if args.bit is not None and not 0 <= args.bit < width:
        raise UsageError(f"--bit must lie in [0, {width})")
    records = [
        (i, tamper_payload(bits, kind, 0, width, rng, bit=args.bit) if i == args.victim else bits)
        for i, bits in sf.records
    ]
    sf.records = records
    sf.validate()
    out = Path(args.out)
    sf.write(out)
    if sf.f not in BUILTINS and out.parent.resolve() != Path(args.shares).parent.resolve():
        for part in sf.f.split(","):
            _stage_tables(str(Path(args.shares).parent / part), out)
    return EXIT_OK


def cmd_estimate(args) -> int:
    if args.trials < 1:
        raise UsageError("--trials must be positive")
    scheme = ShamirInstance(args.p, args.t, args.n)
    l = scheme.l
    v = args.v if args.v is not None else args.t
    for m in args.m_list:
        if not 1 <= m < l:
            raise UsageError(f"m={m} must satisfy 1 <= m < l={l}")
    base = None
    if args.f not in ("verhoeff", "hash"):
        if args.f in BUILTINS:
            base = resolve_control(args.f, l, 1)
        else:
            base = TableControl([TruthTable.load(args.f)], name=Path(args.f).name)
            if base.l != l:
                raise UsageError(f"table has l={base.l}, GF({args.p}) needs l={l}")

    def factory(m):
        if base is None:
            return resolve_control(args.f, l, m)
        if m == 1:
            return base
        extra = random_vector_control(l, m - 1, args.seed).tables
        return TableControl(base.tables + extra, name=f"{base.name}+{m - 1}")

    vs = build_vtn_structure(v, args.t, args.n)
    auth = AuthorizedSet(tuple(args.auth)) if args.auth else None
    kind = {"replace": "replace_random_share", "flip-bit": "flip_random_bit"}[args.tamper]
    model = TamperModel(kind=kind, victims=(args.victim,))
    config = EstimateConfig(scheme, vs, factory(args.m_list[0]), auth=auth, scope=args.scope)
    estimates = sweep_m(config, args.m_list, args.trials, model, args.seed, factory)
    sys.stdout.write(format_table(estimates))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="vsscontrol", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    d = sub.add_parser("deal", help="share a secret and write extended shares")
    d.add_argument("--scheme", choices=("shamir", "kgh"), default="shamir")
    d.add_argument("--p", type=int)
    d.add_argument("--t", type=int)
    d.add_argument("--n", type=int, required=True)
    d.add_argument("--v", type=int)
    d.add_argument("--l", type=int, help="secret width in bits (kgh only)")
    d.add_argument("--m", type=int, default=1, help="control width for verhoeff/hash")
    d.add_argument("--secret", type=int, help="secret value; read from stdin when omitted")
    d.add_argument("--f", default="example_table",
                   help="builtin name (%s) or truth-table file(s)" % ", ".join(BUILTINS))
    d.add_argument("--strategy", choices=("direct", "constrained"), default="constrained")
    d.add_argument("--seed", type=int, default=0)
    d.add_argument("--coeffs", type=_int_list, help="explicit polynomial coefficients (or kgh shares)")
    d.add_argument("--max-attempts", type=int, default=64,
                   help="redeals allowed when controls are inconsistent (ignored with --coeffs)")
    d.add_argument("--out", required=True)
    d.set_defaults(func=cmd_deal)

    for name, fn, helptext in (("verify", cmd_verify, "run the verification protocol"),
                               ("recover", cmd_recover, "verify and recover the secret")):
        c = sub.add_parser(name, help=helptext)
        c.add_argument("--shares", required=True)
        c.add_argument("--auth", type=_int_list, required=True)
        if name == "recover":
            c.add_argument("--skip-verify", action="store_true")
        c.set_defaults(func=fn)

    t = sub.add_parser("tamper", help="corrupt one participant's payload")
    t.add_argument("--shares", required=True)
    t.add_argument("--victim", type=int, required=True)
    t.add_argument("--mode", choices=("flip-bit", "replace"), default="flip-bit")
    t.add_argument("--bit", type=int, help="bit index, 0 = MSB of the payload")
    t.add_argument("--seed", type=int, default=0)
    t.add_argument("--out", required=True)
    t.set_defaults(func=cmd_tamper)

    e = sub.add_parser("estimate", help="Monte-Carlo detection rates")
    e.add_argument("--p", type=int, default=31)
    e.add_argument("--t", type=int, default=3)
    e.add_argument("--n", type=int, default=4)
    e.add_argument("--v", type=int)
    e.add_argument("--f", default="example_table")
    e.add_argument("--m-list", type=_int_list, default=[1])
    e.add_argument("--trials", type=int, default=10000)
    e.add_argument("--seed", type=int, default=0)
    e.add_argument("--victim", type=int, default=1)
    e.add_argument("--tamper", choices=("replace", "flip-bit"), default="replace")
    e.add_argument("--scope", choices=("round", "protocol"), default="round")
    e.add_argument("--auth", type=_int_list)
    e.set_defaults(func=cmd_estimate)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except InconsistentDealing as exc:
        print(f"error: {exc}", file=sys.stderr)
        print("conflicting VSoPs: " + " ".join(str(v) for v in exc.vsops), file=sys.stderr)
        return EXIT_INCONSISTENT
    except InsufficientShares as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INSUFFICIENT
    except (UsageError, FormatError, ValueError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
