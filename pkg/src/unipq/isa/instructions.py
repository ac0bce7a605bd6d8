"""Instruction set: opcodes, lanes, parsing, and execution semantics.

Lane placement follows the two-column split of the processor: Set-1
holds the Keccak-side operations (hashing, stream samplers, byte
codecs), Set-2 the polynomial-arithmetic side.  Operands are (bank,
word) addresses written `b<bank>:<word>`; named parameters ride along
as `#key=value`; `;par` flags an adjacent-line Set-1/Set-2 pair for
parallel issue.  The 4-bit control field carries the parallel flag in
bit 0 with the rest reserved.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .. import dilithium, saber
from ..bits import pack_bits, unpack_bits
from ..keccak import sha3_256, sha3_512, shake128, shake256
from ..modmath import CTX23, CTX24, CTX25
from ..ntt import build_twiddles, intt_inverse, ntt_forward
from ..sampling import (cbd_poly, eta_poly, gamma_poly, sample_in_ball,
                        uniform_poly)
from .machine import Memory, N_BANKS, BANK_WORDS

_PRIMES = {23: CTX23, 24: CTX24, 25: CTX25}


class ProgramError(ValueError):
    pass


@dataclass(frozen=True)
class Instruction:
    opcode: str
    lane: str                       # "Set1" | "Set2"
    operands: tuple                 # ((bank, word), ...)
    params: dict = field(default_factory=dict, hash=False)
    par: bool = False

    @property
    def control(self) -> int:
        return 1 if self.par else 0   # bit 0 of the 4-bit field


@dataclass
class Program:
    instructions: list[Instruction]
    meta: dict = field(default_factory=dict)


class Env:
    """Execution context: scheme configuration plus the compare flag."""

    def __init__(self, meta: dict):
        self.scheme = meta.get("scheme", "saber")
        self.level = int(meta.get("level", 3))
        self.ctx = _PRIMES[int(meta.get("prime", 25 if self.scheme == "saber"
                                        else 23))]
        self.tw = build_twiddles(self.ctx)
        self.flag = False
        if self.scheme == "saber":
            self.sp = saber.PARAMS[self.level]
        else:
            self.dp = dilithium.PARAMS[self.level]


def _center_q(v, q):
    v = np.asarray(v, dtype=np.int64) % q
    return np.where(v > q // 2, v - q, v)


# -- handlers -------------------------------------------------------------
# Convention: operand 0 is the destination unless noted.


def _h_nop(mem, ins, env):
    pass


def _h_sha3_256(mem, ins, env):
    (db, dw), (sb, sw) = ins.operands
    mem.store_bytes(db, dw, sha3_256(mem.load_bytes(sb, sw, ins.params["inlen"])))


def _h_sha3_512(mem, ins, env):
    (db, dw), (sb, sw) = ins.operands
    mem.store_bytes(db, dw, sha3_512(mem.load_bytes(sb, sw, ins.params["inlen"])))


def _h_shake(mem, ins, env, fn):
    (db, dw), (sb, sw) = ins.operands
    msg = mem.load_bytes(sb, sw, ins.params["inlen"])
    mem.store_bytes(db, dw, fn(msg, ins.params["outlen"]))


def _h_shake128(mem, ins, env):
    _h_shake(mem, ins, env, shake128)


def _h_shake256(mem, ins, env):
    _h_shake(mem, ins, env, shake256)


def _h_shake128x26(mem, ins, env):
    """One 13-bit public-matrix polynomial, 26-bit pairs off the stream.

    #index selects which 256-coefficient window of the seed's stream to
    parse (hardware streams; the model re-derives the prefix)."""
    (db, dw), (sb, sw) = ins.operands
    idx = ins.params["index"]
    seed = mem.load_bytes(sb, sw, 32)
    step = 256 * 13 // 8
    buf = shake128(seed, (idx + 1) * step)
    mem.store_poly(db, dw, unpack_bits(buf[idx * step:(idx + 1) * step], 13, 256))


def _h_bs2polvec(mem, ins, env):
    (db, dw), (sb, sw) = ins.operands
    width = ins.params["width"]
    mem.store_poly(db, dw, unpack_bits(
        mem.load_bytes(sb, sw, 256 * width // 8), width, 256))


def _h_cbd(mem, ins, env):
    (db, dw), (sb, sw) = ins.operands
    mu = ins.params["mu"]
    mem.store_poly(db, dw, cbd_poly(mem.load_bytes(sb, sw, mu * 32), mu))


def _h_rej_q(mem, ins, env):
    (db, dw), (sb, sw) = ins.operands
    mem.store_poly(db, dw, uniform_poly(mem.load_bytes(sb, sw, 32),
                                        ins.params["nonce"]))


def _h_rej_eta(mem, ins, env):
    (db, dw), (sb, sw) = ins.operands
    mem.store_poly(db, dw, eta_poly(mem.load_bytes(sb, sw, 48),
                                    ins.params["nonce"], env.dp.eta))


def _h_rej_gamma(mem, ins, env):
    (db, dw), (sb, sw) = ins.operands
    mem.store_poly(db, dw, gamma_poly(mem.load_bytes(sb, sw, 48),
                                      ins.params["nonce"], env.dp.gamma1))


def _h_sample_in_ball(mem, ins, env):
    (db, dw), (sb, sw) = ins.operands
    mem.store_poly(db, dw, sample_in_ball(mem.load_bytes(sb, sw, 32),
                                          env.dp.tau))


def _h_pack(mem, ins, env):
    (db, dw), (sb, sw) = ins.operands
    kind = ins.params["kind"]
    p = mem.load_poly(sb, sw)
    if kind in ("z", "t0"):
        p = _center_q(p, env.ctx.q)
    mem.store_bytes(db, dw, dilithium.pack_poly(kind, p, env.dp))


def _h_unpackd(mem, ins, env):
    (db, dw), (sb, sw) = ins.operands
    kind = ins.params["kind"]
    if kind == "hint":
        nbytes = env.dp.omega + env.dp.k
        hs = dilithium.decode_hint(mem.load_bytes(sb, sw, nbytes), env.dp)
        if hs is None:
            env.flag = False
            hs = [np.zeros(256, dtype=np.int64)] * env.dp.k
        for i, h in enumerate(hs):
            mem.store_poly(db, dw + 128 * i, h)
        return
    widths = {"t1": 10, "t0": 13, "eta": env.dp.eta_bits,
              "z": env.dp.z_bits, "w1": env.dp.w1_bits}
    buf = mem.load_bytes(sb, sw, 32 * widths[kind])
    p = dilithium.unpack_poly(kind, buf, env.dp)
    p = p << ins.params.get("shift", 0)
    mem.store_poly(db, dw, p)


def _h_encode_h(mem, ins, env):
    (db, dw), (sb, sw) = ins.operands
    hs = [mem.load_poly(sb, sw + 128 * i) for i in range(env.dp.k)]
    mem.store_bytes(db, dw, dilithium.encode_hint(hs, env.dp))


def _h_decompose(mem, ins, env):
    (hb, hw), (lb, lw), (sb, sw) = ins.operands
    a1, a0 = dilithium.decompose(mem.load_poly(sb, sw) % env.ctx.q,
                                 env.dp.gamma2)
    mem.store_poly(hb, hw, a1)
    mem.store_poly(lb, lw, a0)


def _h_power2round(mem, ins, env):
    (hb, hw), (lb, lw), (sb, sw) = ins.operands
    r1, r0 = dilithium.power2round(mem.load_poly(sb, sw) % env.ctx.q)
    mem.store_poly(hb, hw, r1)
    mem.store_poly(lb, lw, r0)


def _h_makehint(mem, ins, env):
    (db, dw), (ab, aw), (hb, hw) = ins.operands
    a0 = _center_q(mem.load_poly(ab, aw), env.ctx.q)
    mem.store_poly(db, dw, dilithium.make_hint(
        a0, mem.load_poly(hb, hw), env.dp.gamma2))


def _h_usehint(mem, ins, env):
    (db, dw), (hb, hw), (rb, rw) = ins.operands
    mem.store_poly(db, dw, dilithium.use_hint(
        mem.load_poly(hb, hw), mem.load_poly(rb, rw) % env.ctx.q,
        env.dp.gamma2))


def _h_ntt(mem, ins, env):
    # One operand: in-place.  Two: (dst, src) across banks.
    db, dw = ins.operands[0]
    sb, sw = ins.operands[-1]
    p = mem.load_poly(sb, sw)
    lift = ins.params.get("lift", 0)
    if lift:
        p = saber._center_pow2(p, lift)
    mem.store_poly(db, dw, ntt_forward(p % env.ctx.q, env.tw))


def _h_intt(mem, ins, env):
    (b, w), = ins.operands
    p = intt_inverse(mem.load_poly(b, w) % env.ctx.q, env.tw)
    unlift = ins.params.get("unlift", 0)
    if unlift:
        p = np.where(p > env.ctx.q // 2, p - env.ctx.q, p) % (1 << unlift)
    mem.store_poly(b, w, p)


def _h_pwm(mem, ins, env):
    (db, dw), (ab, aw), (bb, bw) = ins.operands
    mem.store_poly(db, dw, (mem.load_poly(ab, aw) % env.ctx.q)
                   * (mem.load_poly(bb, bw) % env.ctx.q) % env.ctx.q)


def _h_pwm_acc(mem, ins, env):
    (db, dw), (ab, aw), (bb, bw) = ins.operands
    acc = mem.load_poly(db, dw) % env.ctx.q
    acc = (acc + (mem.load_poly(ab, aw) % env.ctx.q)
           * (mem.load_poly(bb, bw) % env.ctx.q)) % env.ctx.q
    mem.store_poly(db, dw, acc)


def _addsub(mem, ins, env, sign):
    (db, dw), (ab, aw), (bb, bw) = ins.operands
    b = mem.load_poly(bb, bw) << ins.params.get("lshift_b", 0)
    r = mem.load_poly(ab, aw) + sign * b
    mod = ins.params.get("mod", 0)
    r = r % (1 << mod) if mod else r % env.ctx.q
    mem.store_poly(db, dw, r)


def _h_add(mem, ins, env):
    _addsub(mem, ins, env, 1)


def _h_sub(mem, ins, env):
    _addsub(mem, ins, env, -1)


def _h_addround(mem, ins, env):
    (db, dw), (sb, sw) = ins.operands
    p = ins.params
    r = (mem.load_poly(sb, sw) + p.get("const", 0)) % (1 << p["mod"])
    mem.store_poly(db, dw, (r >> p.get("shift", 0)) & ((1 << p["mask"]) - 1))


def _h_addpack(mem, ins, env):
    (db, dw), (sb, sw) = ins.operands
    width = ins.params["width"]
    p = mem.load_poly(sb, sw) % (1 << width)
    mem.store_bytes(db, dw, pack_bits(p, width))


def _h_verify(mem, ins, env):
    (ab, aw), (bb, bw) = ins.operands
    n = ins.params["n"]
    env.flag = mem.load_bytes(ab, aw, n) == mem.load_bytes(bb, bw, n)


def _h_cmov(mem, ins, env):
    (db, dw), (ab, aw), (bb, bw) = ins.operands
    n = ins.params["n"]
    src = (ab, aw) if env.flag else (bb, bw)
    mem.store_bytes(db, dw, mem.load_bytes(*src, n))


def _h_copy(mem, ins, env):
    (db, dw), (sb, sw) = ins.operands
    mem.store_bytes(db, dw, mem.load_bytes(sb, sw, ins.params["n"]))


@dataclass(frozen=True)
class OpSpec:
    lane: str
    handler: object
    writes: tuple = (0,)       # operand indices written
    reads_dst: bool = False    # destination is also read (accumulate)


OPCODES: dict[str, OpSpec] = {
    # Set-1: Keccak side
    "RESET": OpSpec("Set1", _h_nop, writes=()),
    "SHA3_256": OpSpec("Set1", _h_sha3_256),
    "SHA3_512": OpSpec("Set1", _h_sha3_512),
    "SHAKE128": OpSpec("Set1", _h_shake128),
    "SHAKE256": OpSpec("Set1", _h_shake256),
    "SHAKE_IRESET": OpSpec("Set1", _h_nop, writes=()),
    "SHAKE_RESUME": OpSpec("Set1", _h_nop, writes=()),
    "SHAKE128X26": OpSpec("Set1", _h_shake128x26),
    "BS2POLVEC": OpSpec("Set1", _h_bs2polvec),
    "CBD": OpSpec("Set1", _h_cbd),
    "REJ_Q": OpSpec("Set1", _h_rej_q),
    "REJ_ETA": OpSpec("Set1", _h_rej_eta),
    "REJ_GAMMA": OpSpec("Set1", _h_rej_gamma),
    "PACK": OpSpec("Set1", _h_pack),
    "UNPACKD": OpSpec("Set1", _h_unpackd),
    "DECOMPOSE": OpSpec("Set1", _h_decompose, writes=(0, 1)),
    "WRITE_INST": OpSpec("Set1", _h_nop, writes=()),
    "REFRESH": OpSpec("Set1", _h_nop, writes=()),
    # Set-2: arithmetic side
    "NTT": OpSpec("Set2", _h_ntt, reads_dst=True),
    "INTT": OpSpec("Set2", _h_intt, reads_dst=True),
    "PWM": OpSpec("Set2", _h_pwm),
    "PWM_ACC": OpSpec("Set2", _h_pwm_acc, reads_dst=True),
    "ADD": OpSpec("Set2", _h_add),
    "SUB": OpSpec("Set2", _h_sub),
    "ADDROUND": OpSpec("Set2", _h_addround),
    "ADDPACK": OpSpec("Set2", _h_addpack),
    "UNPACK_SABER": OpSpec("Set2", _h_bs2polvec),
    "VERIFY": OpSpec("Set2", _h_verify, writes=()),
    "CMOV": OpSpec("Set2", _h_cmov),
    "COPY": OpSpec("Set2", _h_copy),
    "SAMPLEINBALL": OpSpec("Set2", _h_sample_in_ball),
    "ENCODEH": OpSpec("Set2", _h_encode_h),
    "POWER2ROUND": OpSpec("Set2", _h_power2round, writes=(0, 1)),
    "MAKEHINT": OpSpec("Set2", _h_makehint),
    "USEHINT": OpSpec("Set2", _h_usehint),
    "COUNTER_REF": OpSpec("Set2", _h_nop, writes=()),
}


# -- parsing --------------------------------------------------------------


def _parse_operand(tok: str) -> tuple[int, int]:
    if not tok.startswith("b") or ":" not in tok:
        raise ProgramError(f"bad operand {tok!r}")
    bank, word = tok[1:].split(":")
    bank, word = int(bank), int(word)
    if not (0 <= bank < N_BANKS and 0 <= word < BANK_WORDS):
        raise ProgramError(f"operand address out of range: {tok!r}")
    return bank, word


def _parse_param(tok: str):
    key, _, val = tok[1:].partition("=")
    try:
        return key, int(val)
    except ValueError:
        return key, val


def load_program(text: str) -> Program:
    meta: dict = {}
    instrs: list[Instruction] = []
    for raw in text.splitlines():
        line = raw.strip()
        par = False
        if line.endswith(";par"):
            par = True
            line = line[:-4].strip()
        else:
            line = line.split(";")[0].strip()
        if not line:
            continue
        if line.startswith("."):
            key, _, val = line[1:].partition(" ")
            meta[key] = val.strip()
            continue
        toks = line.split()
        opcode = toks[0].upper()
        if opcode not in OPCODES:
            raise ProgramError(f"unknown opcode {opcode!r}")
        operands = tuple(_parse_operand(t) for t in toks[1:]
                         if not t.startswith("#"))
        params = dict(_parse_param(t) for t in toks[1:] if t.startswith("#"))
        instrs.append(Instruction(opcode, OPCODES[opcode].lane, operands,
                                  params, par))
    _check_pairs(instrs)
    return Program(instrs, meta)


def _check_pairs(instrs: list[Instruction]) -> None:
    i = 0
    while i < len(instrs):
        if instrs[i].par:
            if i + 1 >= len(instrs) or not instrs[i + 1].par:
                raise ProgramError(f"unpaired ;par at instruction {i}")
            a, b = instrs[i], instrs[i + 1]
            if a.lane == b.lane:
                raise ProgramError(
                    f"lane violation: parallel pair {a.opcode}/{b.opcode} "
                    f"both on {a.lane}")
            shared = set(a.operands) & set(b.operands)
            if shared:
                raise ProgramError(
                    f"data hazard: pair {a.opcode}/{b.opcode} shares "
                    f"operand {shared.pop()}")
            i += 2
        else:
            i += 1


def instruction_ports(ins: Instruction):
    """(bank, port) pairs the instruction occupies; port is 'r' or 'w'."""
    spec = OPCODES[ins.opcode]
    ports = set()
    for idx, (bank, _word) in enumerate(ins.operands):
        if idx in spec.writes:
            ports.add((bank, "w"))
            if spec.reads_dst:
                ports.add((bank, "r"))
        else:
            ports.add((bank, "r"))
    return ports
