"""Known-answer-test generation and checking in .rsp format.

Generation follows the NIST harness call discipline exactly: a master
DRBG seeded with bytes 0..47 emits the per-case 48-byte seeds (and, for
signatures, the messages), and each case re-seeds a fresh DRBG whose
randombytes calls are split at the same boundaries as the reference
implementations.
"""

from __future__ import annotations

import concurrent.futures
import re

from . import dilithium, saber
from .drbg import AesCtrDrbg
from .modmath import CTX25, PrimeCtx

MASTER_ENTROPY = bytes(range(48))

_KEM_HEADERS = {1: "LightSaber", 3: "Saber", 5: "FireSaber"}
_SIG_HEADERS = {2: "Dilithium2", 3: "Dilithium3", 5: "Dilithium5"}


# -- .rsp text ------------------------------------------------------------


def parse_rsp(text: str):
    """Returns (header, cases).  Tolerant of comments and blank lines."""
    header = None
    cases: list[dict[str, str]] = []
    current: dict[str, str] = {}
    for line in text.splitlines():
        line = line.strip()
        if not line:
            if current:
                cases.append(current)
                current = {}
            continue
        if line.startswith("#"):
            if header is None:
                header = line.lstrip("# ").strip()
            continue
        m = re.fullmatch(r"(\w+)\s*=\s*(\S*)", line)
        if not m:
            raise ValueError(f"malformed .rsp line: {line!r}")
        current[m.group(1)] = m.group(2).lower()
    if current:
        cases.append(current)
    return header, cases


def format_rsp(header: str, cases) -> str:
    lines = [f"# {header}", ""]
    for case in cases:
        for k, v in case.items():
            lines.append(f"{k} = {v}")
        lines.append("")
    return "\n".join(lines) + "\n"


# -- case generation ------------------------------------------------------


def _kem_case(seed: bytes, level: int, ctx: PrimeCtx) -> dict[str, str]:
    params = saber.PARAMS[level]
    rng = AesCtrDrbg(seed)
    coins = b"".join(rng.random_bytes(32) for _ in range(3))
    pk, sk = saber.kem_keygen(coins, params, ctx=ctx)
    ct, ss = saber.kem_encaps(rng.random_bytes(32), pk, params, ctx=ctx)
    return {"seed": seed.hex(), "pk": pk.hex(), "sk": sk.hex(),
            "ct": ct.hex(), "ss": ss.hex()}


def _sig_case(seed: bytes, msg: bytes, level: int) -> dict[str, str]:
    rng = AesCtrDrbg(seed)
    pk, sk = dilithium.keygen(level, rng.random_bytes(32))
    sig, _ = dilithium.sign(level, sk, msg)
    sm = sig + msg
    return {"seed": seed.hex(), "mlen": str(len(msg)), "msg": msg.hex(),
            "pk": pk.hex(), "sk": sk.hex(),
            "smlen": str(len(sm)), "sm": sm.hex()}


def gen_kem_kat(level: int, count: int, ctx: PrimeCtx = CTX25) -> str:
    master = AesCtrDrbg(MASTER_ENTROPY)
    cases = []
    for i in range(count):
        seed = master.random_bytes(48)
        case = {"count": str(i)}
        case.update(_kem_case(seed, level, ctx))
        cases.append(case)
    return format_rsp(_KEM_HEADERS[level], cases)


def gen_sig_kat(level: int, count: int) -> str:
    master = AesCtrDrbg(MASTER_ENTROPY)
    cases = []
    for i in range(count):
        seed = master.random_bytes(48)
        msg = master.random_bytes(33 * (i + 1))
        case = {"count": str(i)}
        case.update(_sig_case(seed, msg, level))
        cases.append(case)
    return format_rsp(_SIG_HEADERS[level], cases)


# -- checking -------------------------------------------------------------


def _infer(header: str | None, case: dict[str, str]):
    """Returns (scheme, level) from header or field shapes."""
    if header:
        words = {w.lower() for w in header.split()}
        for lvl, name in _SIG_HEADERS.items():
            if name.lower() in words:
                return "sig", lvl
        for lvl, name in _KEM_HEADERS.items():
            if name.lower() in words:
                return "kem", lvl
    if "sm" in case or "smlen" in case:
        for lvl, p in dilithium.PARAMS.items():
            if len(case["pk"]) // 2 == p.pk_bytes:
                return "sig", lvl
    else:
        for lvl, p in saber.PARAMS.items():
            if len(case["pk"]) // 2 == p.pk_bytes:
                return "kem", lvl
    raise ValueError("cannot infer scheme/level from KAT case")


def check_case(scheme: str, level: int, case: dict[str, str],
               ctx: PrimeCtx = CTX25):
    """Recompute a case; returns None or (field, expected, got)."""
    seed = bytes.fromhex(case["seed"])
    if scheme == "kem":
        got = _kem_case(seed, level, ctx)
    else:
        got = _sig_case(seed, bytes.fromhex(case["msg"]), level)
    for field, value in got.items():
        if field in case and case[field] != value:
            return field, case[field], value
    return None


def run_kat_text(text: str, ctx: PrimeCtx = CTX25, jobs: int = 1):
    """Check every case; returns list of (count, field, expected, got)."""
    header, cases = parse_rsp(text)
    if not cases:
        raise ValueError("no KAT cases found")
    scheme, level = _infer(header, cases[0])

    def one(case):
        return check_case(scheme, level, case, ctx)

    if jobs > 1:
        with concurrent.futures.ThreadPoolExecutor(max_workers=jobs) as ex:
            results = list(ex.map(one, cases))
    else:
        results = [one(c) for c in cases]
    return [(case.get("count", str(i)),) + r
            for i, (case, r) in enumerate(zip(cases, results)) if r is not None]
