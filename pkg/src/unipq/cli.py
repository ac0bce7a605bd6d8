"""Command-line front end.

Thin shell over the library: KEM/signature operations, KAT running,
the prime-selection study, and the ISA simulator.  All key material is
lowercase hex, newline terminated, on stdout or a file via --out.

Exit codes: 0 success, 1 KAT mismatch or failed verification, 2 usage
error, 3 I/O error.
"""

from __future__ import annotations

import argparse
import os
import sys

from . import analysis, dilithium, kat, saber
from .isa import Memory, ProgramError, load_program, run
from .keccak import shake256
from .modmath import CTX23, CTX24, CTX25

KAT_DIR_ENV = "UNIPQ_KAT_DIR"

_PRIMES = {23: CTX23, 24: CTX24, 25: CTX25}
_KEM_LEVELS = {"lightsaber": 1, "saber": 3, "firesaber": 5,
               "1": 1, "3": 3, "5": 5}
_SIG_LEVELS = {"dilithium2": 2, "dilithium3": 3, "dilithium5": 5,
               "2": 2, "3": 3, "5": 5}


class UsageError(ValueError):
    pass


def _kem_level(s: str) -> int:
    try:
        return _KEM_LEVELS[s.lower()]
    except KeyError:
        raise UsageError(f"unknown KEM level {s!r}")


def _sig_level(s: str) -> int:
    try:
        return _SIG_LEVELS[s.lower()]
    except KeyError:
        raise UsageError(f"unknown signature level {s!r}")


def _read_hex(arg: str) -> bytes:
    """Accept inline hex or the path of a file containing hex."""
    if os.path.exists(arg):
        with open(arg) as f:
            arg = f.read().strip()
        if "=" in arg:          # single-value .rsp-style line
            arg = arg.rsplit("=", 1)[1].strip()
    try:
        return bytes.fromhex(arg)
    except ValueError:
        raise UsageError(f"not valid hex: {arg[:40]!r}")


def _seed_bytes(seed_hex: str | None, n: int) -> bytes:
    if seed_hex is None:
        return os.urandom(n)
    raw = _read_hex(seed_hex)
    return raw if len(raw) == n else shake256(raw, n)


def _emit(lines: list[str], out: str | None) -> None:
    text = "".join(f"{line}\n" for line in lines)
    if out:
        with open(out, "w") as f:
            f.write(text)
    else:
        sys.stdout.write(text)


# -- subcommand bodies ----------------------------------------------------


def _require(args, *names) -> None:
    for name in names:
        if getattr(args, name) is None:
            raise UsageError(f"--{name} is required for this operation")


def _cmd_kem(args) -> int:
    level = _kem_level(args.level)
    params = saber.PARAMS[level]
    ctx = _PRIMES[args.prime]
    if args.op == "keygen":
        pk, sk = saber.kem_keygen(_seed_bytes(args.seed, 96), params, ctx=ctx)
        _emit([f"pk = {pk.hex()}", f"sk = {sk.hex()}"], args.out)
    elif args.op == "encaps":
        _require(args, "pk")
        pk = _read_hex(args.pk)
        ct, ss = saber.kem_encaps(_seed_bytes(args.seed, 32), pk, params,
                                  ctx=ctx)
        _emit([f"ct = {ct.hex()}", f"ss = {ss.hex()}"], args.out)
    else:
        _require(args, "ct", "sk")
        ss = saber.kem_decaps(_read_hex(args.ct), _read_hex(args.sk), params,
                              ctx=ctx)
        _emit([f"ss = {ss.hex()}"], args.out)
    return 0


def _cmd_sig(args) -> int:
    level = _sig_level(args.level)
    if args.op == "keygen":
        pk, sk = dilithium.keygen(level, _seed_bytes(args.seed, 32))
        _emit([f"pk = {pk.hex()}", f"sk = {sk.hex()}"], args.out)
    elif args.op == "sign":
        _require(args, "sk", "msg")
        sig, _ = dilithium.sign(level, _read_hex(args.sk), _read_hex(args.msg))
        _emit([f"sig = {sig.hex()}"], args.out)
    else:
        _require(args, "pk", "msg", "sig")
        good = dilithium.verify(level, _read_hex(args.pk), _read_hex(args.msg),
                                _read_hex(args.sig))
        _emit([f"valid = {int(good)}"], args.out)
        return 0 if good else 1
    return 0


def _cmd_kat(args) -> int:
    path = args.file
    if not os.path.exists(path):
        kat_dir = os.environ.get(KAT_DIR_ENV)
        if kat_dir:
            path = os.path.join(kat_dir, args.file)
    with open(path) as f:
        text = f.read()
    _, cases = kat.parse_rsp(text)
    mismatches = kat.run_kat_text(text, ctx=_PRIMES[args.prime],
                                  jobs=args.jobs)
    if mismatches:
        count, field, expected, got = mismatches[0]
        print(f"count {count}: field {field} mismatch: "
              f"expected {expected}, got {got}")
        print(f"{len(mismatches)} mismatching fields in {len(cases)} cases")
        return 1
    print(f"{len(cases)} cases ok")
    return 0


def _cmd_analyze(args) -> int:
    level = _kem_level(args.level)
    lines = []
    if args.what == "bound":
        bound, width = analysis.worst_case_bound(level)
        lines.append(f"peak = {bound}")
        lines.append(f"{width}-bit required" if width is not None
                     else "no prime in family suffices")
    elif args.what == "dist":
        mean, sigma, (centers, counts), peak = \
            analysis.monte_carlo_distribution(level, args.trials, args.seed)
        ana = analysis.analytic_sigma(level)
        lines += [f"mc_mean = {mean:.2f}", f"mc_sigma = {sigma:.2f}",
                  f"mc_peak = {peak}", f"analytic_sigma = {ana.sigma:.2f}"]
        acc_mean, acc_sigma = analysis.monte_carlo_accumulated(
            level, args.trials, args.seed)
        lines += [f"acc_mean = {acc_mean:.2f}", f"acc_sigma = {acc_sigma:.2f}"]
        if args.hist:
            with open(args.hist, "w") as f:
                f.write(analysis.histogram_csv(centers, counts))
    else:
        if args.method == "mc":
            mean, sigma, _, _ = analysis.monte_carlo_distribution(
                level, args.trials, args.seed)
            dist = analysis.ProductDistribution(level, mean, sigma)
        else:
            dist = analysis.analytic_sigma(level)
        for ctx in (CTX23, CTX24):
            est = analysis.tail_log2_prob(dist, ctx, args.method)
            lines.append(f"log2_p{ctx.x} = {est.log2_prob:.1f}")
    _emit(lines, args.out)
    return 0


def _cmd_simulate(args) -> int:
    with open(args.program) as f:
        text = f.read()
    program = load_program(text)
    _, trace = run(program, mode=args.mode, memory=Memory())
    print(f"cycles = {trace.total_cycles}")
    if args.trace:
        with open(args.trace, "w") as f:
            f.write(trace.to_csv())
    return 0


# -- parser ---------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="unipq")
    sub = ap.add_subparsers(dest="cmd", required=True)

    kem = sub.add_parser("kem", help="Saber KEM operations")
    kem.add_argument("op", choices=["keygen", "encaps", "decaps"])
    kem.add_argument("--level", required=True,
                     help="lightsaber | saber | firesaber (or 1|3|5)")
    kem.add_argument("--prime", type=int, choices=[23, 24, 25], default=25)
    kem.add_argument("--seed", help="hex seed for deterministic output")
    kem.add_argument("--pk")
    kem.add_argument("--sk")
    kem.add_argument("--ct")
    kem.add_argument("--out")
    kem.set_defaults(fn=_cmd_kem)

    sig = sub.add_parser("sig", help="Dilithium signature operations")
    sig.add_argument("op", choices=["keygen", "sign", "verify"])
    sig.add_argument("--level", required=True, help="2 | 3 | 5")
    sig.add_argument("--seed")
    sig.add_argument("--pk")
    sig.add_argument("--sk")
    sig.add_argument("--msg")
    sig.add_argument("--sig", dest="sig")
    sig.add_argument("--out")
    sig.set_defaults(fn=_cmd_sig)

    kr = sub.add_parser("kat", help="run .rsp known-answer tests")
    kr.add_argument("op", choices=["run"])
    kr.add_argument("--file", required=True,
                    help=f"path, resolved against ${KAT_DIR_ENV} as fallback")
    kr.add_argument("--prime", type=int, choices=[23, 24, 25], default=25)
    kr.add_argument("--jobs", type=int, default=1)
    kr.set_defaults(fn=_cmd_kat)

    an = sub.add_parser("analyze", help="prime-selection error study")
    an.add_argument("what", choices=["dist", "tail", "bound"])
    an.add_argument("--level", required=True)
    an.add_argument("--trials", type=int, default=10 ** 5)
    an.add_argument("--seed", type=int, default=0)
    an.add_argument("--method", choices=["analytic", "mc"], default="analytic")
    an.add_argument("--hist", help="write histogram CSV here (dist only)")
    an.add_argument("--out")
    an.set_defaults(fn=_cmd_analyze)

    sim = sub.add_parser("simulate", help="run an ISA program")
    sim.add_argument("--program", required=True)
    sim.add_argument("--mode", choices=["serial", "parallel"],
                     default="serial")
    sim.add_argument("--trace", help="write a cycle trace CSV here")
    sim.set_defaults(fn=_cmd_simulate)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except (UsageError, ProgramError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except OSError as e:
        print(f"i/o error: {e}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
