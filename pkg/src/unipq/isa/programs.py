"""Hand-scheduled builtin programs for the protocol operations.

Layout convention: banks 0/1 hold working polynomials (128 words each),
bank 2 holds byte inputs/outputs plus the streamed public-matrix
polynomials, bank 3 holds seeds and hash digests.  Public-matrix
generation is software-pipelined against the multiplier: the sampler
writes the next matrix polynomial into one of two staging slots while
the arithmetic lane consumes the previous one from the other.

Each program's meta carries an `io` table of name -> (bank, word,
nbytes) regions so callers can place inputs and fetch outputs.
"""

from __future__ import annotations

from .. import dilithium, saber
from .instructions import (Program, ProgramError, instruction_ports,
                           load_program)


class Asm:
    def __init__(self, scheme: str, level: int, prime: int):
        self.lines = [f".scheme {scheme}", f".level {level}", f".prime {prime}"]
        self.paired = 0
        self.unpaired = 0

    def emit(self, line: str) -> None:
        self.lines.append(line)
        self.unpaired += 1

    def pair(self, set1_line: str, set2_line: str) -> None:
        """Flag the two lines for parallel issue when legal, otherwise
        fall back to serial emission."""
        probe = load_program("\n".join(self.lines[:3] + [set1_line, set2_line]))
        a, b = probe.instructions[-2:]
        ok = (a.lane != b.lane
              and not (set(a.operands) & set(b.operands))
              and not (instruction_ports(a) & instruction_ports(b)))
        if ok:
            self.lines += [set1_line + " ;par", set2_line + " ;par"]
            self.paired += 1
        else:
            self.emit(set1_line)
            self.emit(set2_line)

    def program(self, io: dict) -> Program:
        prog = load_program("\n".join(self.lines) + "\n")
        prog.meta["io"] = io
        prog.meta["pairs"] = self.paired
        return prog


# -- Saber ----------------------------------------------------------------
# Bank 0: streamed A-hat @0/@128 (matvec), bp/b @256+128j, v acc @1280,
#         v' acc @1408, message poly @1536, rounding scratch @1664..@1920.
# Bank 1: s_j @128j, s'_j @512+128j, row accumulators @1024+128i, cm @1664.
# Bank 2: 26-bit stream staging @1024/@1152; byte regions per program.
# Bank 3: seed_A @0, secret byte stream @400, digests @100..@130.


def _saber_matvec(A: Asm, p, transpose: bool, acc_base: int, sp_base: int):
    """Streamed A times a transformed secret vector, rows into bank 1."""
    l = p.l
    order = [(j * l + i if transpose else i * l + j, i, j)
             for i in range(l) for j in range(l)]
    for t, (idx, i, j) in enumerate(order):
        slot = 1024 + 128 * (t % 2)
        ah = 128 * (t % 2)
        if t == 0:
            A.emit(f"SHAKE128X26 b2:{slot} b3:0 #index={idx}")
        ntt = f"NTT b0:{ah} b2:{slot} #lift=13"
        if t + 1 < len(order):
            nidx = order[t + 1][0]
            nslot = 1024 + 128 * ((t + 1) % 2)
            A.pair(f"SHAKE128X26 b2:{nslot} b3:0 #index={nidx}", ntt)
        else:
            A.emit(ntt)
        A.emit(f"PWM_ACC b1:{acc_base + 128 * i} b0:{ah} b1:{sp_base + 128 * j}")


def _saber_encrypt(A: Asm, p, pk_b_w: int, m_src: str, coins_w: int,
                   ct_w: int):
    """CPA-encrypt tail shared by encaps and decaps: secrets expanded
    from 32 coin bytes at b3:coins_w, message bits at m_src, ciphertext
    bytes written at b2:ct_w."""
    l, et, mu = p.l, p.et, p.mu
    A.emit(f"SHAKE128 b3:400 b3:{coins_w} #inlen=32 #outlen={l * mu * 32}")
    for j in range(l):
        A.emit(f"CBD b1:{512 + 128 * j} b3:{400 + mu * 4 * j} #mu={mu}")
    for j in range(l):
        A.emit(f"NTT b1:{512 + 128 * j}")
    _saber_matvec(A, p, transpose=False, acc_base=1024, sp_base=512)
    for i in range(l):
        A.pair(f"BS2POLVEC b0:{256 + 128 * i} b2:{pk_b_w + 40 * i} #width=10",
               f"INTT b1:{1024 + 128 * i} #unlift=13")
    for i in range(l):
        A.emit(f"ADDROUND b1:{1024 + 128 * i} b1:{1024 + 128 * i} "
               f"#const={p.h1} #shift=3 #mask=10 #mod=13")
        A.emit(f"ADDPACK b2:{ct_w + 40 * i} b1:{1024 + 128 * i} #width=10")
    for j in range(l):
        A.emit(f"NTT b0:{256 + 128 * j} #lift=10")
        A.emit(f"PWM_ACC b0:1408 b0:{256 + 128 * j} b1:{512 + 128 * j}")
    A.emit("INTT b0:1408 #unlift=10")
    A.emit(f"BS2POLVEC b0:1536 {m_src} #width=1")
    A.emit("SUB b0:1664 b0:1408 b0:1536 #lshift_b=9 #mod=10")
    A.emit(f"ADDROUND b0:1792 b0:1664 #const={p.h1} #shift={10 - et} "
           f"#mask={et} #mod=10")
    A.emit(f"ADDPACK b2:{ct_w + 40 * l} b0:1792 #width={et}")


def saber_keygen(level: int, prime: int = 25) -> Program:
    p = saber.PARAMS[level]
    l, mu = p.l, p.mu
    A = Asm("saber", level, prime)
    sk_w = 600
    pk_w = sk_w + 52 * l
    A.emit("SHAKE128 b3:0 b2:0 #inlen=32 #outlen=32")
    A.emit(f"SHAKE128 b3:400 b2:4 #inlen=32 #outlen={l * mu * 32}")
    for j in range(l):
        A.emit(f"CBD b1:{512 + 128 * j} b3:{400 + mu * 4 * j} #mu={mu}")
        A.emit(f"ADDPACK b2:{sk_w + 52 * j} b1:{512 + 128 * j} #width=13")
        A.emit(f"NTT b1:{512 + 128 * j}")
    _saber_matvec(A, p, transpose=True, acc_base=1024, sp_base=512)
    for i in range(l):
        A.emit(f"INTT b1:{1024 + 128 * i} #unlift=13")
        A.emit(f"ADDROUND b1:{1024 + 128 * i} b1:{1024 + 128 * i} "
               f"#const={p.h1} #shift=3 #mask=10 #mod=13")
        A.emit(f"ADDPACK b2:{pk_w + 40 * i} b1:{1024 + 128 * i} #width=10")
    A.emit(f"COPY b2:{pk_w + 40 * l} b3:0 #n=32")
    A.emit(f"SHA3_256 b2:{pk_w + 40 * l + 4} b2:{pk_w} #inlen={p.pk_bytes}")
    A.emit(f"COPY b2:{pk_w + 40 * l + 8} b2:8 #n=32")
    return A.program({
        "in.seed_a": (2, 0, 32), "in.seed_s": (2, 4, 32), "in.z": (2, 8, 32),
        "out.pk": (2, pk_w, p.pk_bytes), "out.sk": (2, sk_w, p.sk_bytes)})


def saber_encaps(level: int, prime: int = 25) -> Program:
    p = saber.PARAMS[level]
    A = Asm("saber", level, prime)
    A.emit("SHA3_256 b3:100 b2:500 #inlen=32")
    A.emit(f"SHA3_256 b3:104 b2:0 #inlen={p.pk_bytes}")
    A.emit("SHA3_512 b3:110 b3:100 #inlen=64")
    A.emit(f"COPY b3:0 b2:{40 * p.l} #n=32")
    _saber_encrypt(A, p, pk_b_w=0, m_src="b3:100", coins_w=114, ct_w=600)
    A.emit(f"SHA3_256 b3:124 b2:600 #inlen={p.ct_bytes}")
    A.emit("COPY b3:120 b3:110 #n=32")
    A.emit("SHA3_256 b3:130 b3:120 #inlen=64")
    return A.program({
        "in.pk": (2, 0, p.pk_bytes), "in.coins": (2, 500, 32),
        "out.ct": (2, 600, p.ct_bytes), "out.ss": (3, 130, 32)})


def saber_decaps(level: int, prime: int = 25) -> Program:
    p = saber.PARAMS[level]
    l, et = p.l, p.et
    sk_w = 200
    pk_in_sk = sk_w + 52 * l
    seed_a_w = pk_in_sk + 40 * l
    hash_pk_w = seed_a_w + 4
    z_w = hash_pk_w + 4
    A = Asm("saber", level, prime)
    for j in range(l):
        A.emit(f"BS2POLVEC b1:{128 * j} b2:{sk_w + 52 * j} #width=13")
    for j in range(l):
        A.pair(f"BS2POLVEC b0:{256 + 128 * j} b2:{40 * j} #width=10",
               f"NTT b1:{128 * j} #lift=13")
    for j in range(l):
        A.emit(f"NTT b0:{256 + 128 * j} #lift=10")
        A.emit(f"PWM_ACC b0:1280 b0:{256 + 128 * j} b1:{128 * j}")
    A.pair(f"BS2POLVEC b1:1664 b2:{40 * l} #width={et}",
           "INTT b0:1280 #unlift=10")
    A.emit(f"SUB b0:1920 b0:1280 b1:1664 #lshift_b={10 - et} #mod=10")
    A.emit(f"ADDROUND b0:1536 b0:1920 #const={p.h2} #shift=9 #mask=1 #mod=10")
    A.emit("ADDPACK b3:100 b0:1536 #width=1")
    A.emit(f"COPY b3:104 b2:{hash_pk_w} #n=32")
    A.emit("SHA3_512 b3:110 b3:100 #inlen=64")
    A.emit(f"COPY b3:0 b2:{seed_a_w} #n=32")
    _saber_encrypt(A, p, pk_b_w=pk_in_sk, m_src="b3:100", coins_w=114,
                   ct_w=600)
    A.emit(f"VERIFY b2:0 b2:600 #n={p.ct_bytes}")
    A.emit(f"SHA3_256 b3:124 b2:0 #inlen={p.ct_bytes}")
    A.emit(f"CMOV b3:120 b3:110 b2:{z_w} #n=32")
    A.emit("SHA3_256 b3:130 b3:120 #inlen=64")
    return A.program({
        "in.ct": (2, 0, p.ct_bytes), "in.sk": (2, sk_w, p.sk_bytes),
        "out.ss": (3, 130, 32)})


# -- Dilithium ------------------------------------------------------------
# Bank 0: s1hat/zhat @128i, raw s1 or y @2048+128i, keygen t1 @3072+128i,
#         keygen s2 or w1 @4096+128i, c @5248, chat @5376, scratch @5504.
# Bank 1: t1hat (verify) @128i, keygen t0 @512+128i, s2hat @1024+128i,
#         t0hat @2048+128i, yhat @3072+128j (hints in verify), w rows
#         @4096+128i, hints @5248+128i, product scratch @6400.
# Bank 2: byte inputs/outputs; streamed A staging @1024/@1152.
# Bank 3: seeds and digests low, w1 pack buffer @60, concat @200,
#         c-tilde @350, signature image @400, verdict words @3000.


def _dil_matvec(A: Asm, k: int, l: int, acc, vec, seed_w: int = 50):
    """Streamed NTT-domain A times vec; REJ_Q pipelined against PWM_ACC."""
    order = [(i, j) for i in range(k) for j in range(l)]
    for t, (i, j) in enumerate(order):
        slot = 1024 + 128 * (t % 2)
        if t == 0:
            A.emit(f"REJ_Q b2:{slot} b3:{seed_w} #nonce={(i << 8) + j}")
        pwm = f"PWM_ACC {acc(i)} b2:{slot} {vec(j)}"
        if t + 1 < len(order):
            ni, nj = order[t + 1]
            nslot = 1024 + 128 * ((t + 1) % 2)
            A.pair(f"REJ_Q b2:{nslot} b3:{seed_w} #nonce={(ni << 8) + nj}",
                   pwm)
        else:
            A.emit(pwm)


def _interleaved_unpack_ntt(A: Asm, queue0: list, queue1: list,
                            defer_last: bool = False):
    """Alternate bank-0 and bank-1 unpacks so each UNPACKD can pair with
    the transform of the previously unpacked polynomial.  With
    defer_last the final transform is returned unemitted so the caller
    can pair it against an unrelated Set-1 operation."""
    seq = []
    while queue0 or queue1:
        if queue0:
            seq.append(queue0.pop(0))
        if queue1:
            seq.append(queue1.pop(0))
    prev = None
    for dst, up in seq:
        if prev is None:
            A.emit(up)
        else:
            A.pair(up, f"NTT {prev}")
        prev = dst
    if defer_last:
        return f"NTT {prev}"
    A.emit(f"NTT {prev}")
    return None


def dilithium_keygen(level: int) -> Program:
    p = dilithium.PARAMS[level]
    k, l, ew = p.k, p.l, 4 * p.eta_bits
    A = Asm("dilithium", level, 23)
    A.emit("SHAKE256 b3:0 b2:0 #inlen=32 #outlen=112")
    A.emit("COPY b3:50 b3:0 #n=32")                      # rho for REJ_Q
    for i in range(l):
        A.emit(f"REJ_ETA b0:{2048 + 128 * i} b3:4 #nonce={i}")
        A.emit(f"NTT b0:{128 * i} b0:{2048 + 128 * i}")
    _dil_matvec(A, k, l, acc=lambda i: f"b1:{1024 + 128 * i}",
                vec=lambda j: f"b0:{128 * j}")
    for i in range(k):
        A.pair(f"REJ_ETA b0:{4096 + 128 * i} b3:4 #nonce={l + i}",
               f"INTT b1:{1024 + 128 * i}")
    pk_w, sk_w = 600, 2000
    for i in range(k):
        A.emit(f"ADD b1:{1024 + 128 * i} b1:{1024 + 128 * i} "
               f"b0:{4096 + 128 * i}")
        A.emit(f"POWER2ROUND b0:{3072 + 128 * i} b1:{512 + 128 * i} "
               f"b1:{1024 + 128 * i}")
        A.emit(f"PACK b2:{pk_w + 4 + 40 * i} b0:{3072 + 128 * i} #kind=t1")
    A.emit(f"COPY b2:{pk_w} b3:0 #n=32")
    A.emit(f"SHAKE256 b3:20 b2:{pk_w} #inlen={p.pk_bytes} #outlen=48")
    A.emit(f"COPY b2:{sk_w} b3:0 #n=32")
    A.emit(f"COPY b2:{sk_w + 4} b3:10 #n=32")
    A.emit(f"COPY b2:{sk_w + 8} b3:20 #n=48")
    off = sk_w + 14
    for i in range(l):
        A.emit(f"PACK b2:{off + ew * i} b0:{2048 + 128 * i} #kind=eta")
    off += ew * l
    for i in range(k):
        A.emit(f"PACK b2:{off + ew * i} b0:{4096 + 128 * i} #kind=eta")
    off += ew * k
    for i in range(k):
        A.emit(f"PACK b2:{off + 52 * i} b1:{512 + 128 * i} #kind=t0")
    return A.program({
        "in.seed": (2, 0, 32),
        "out.pk": (2, pk_w, p.pk_bytes), "out.sk": (2, sk_w, p.sk_bytes)})


def dilithium_sign(level: int, mlen: int = 32) -> Program:
    """Best-case signing: one loop iteration, no rejection re-entry.  The
    result matches the functional core whenever the core accepts on its
    first attempt."""
    if mlen > 112:
        raise ProgramError("builtin sign program supports mlen <= 112")
    p = dilithium.PARAMS[level]
    k, l, ew = p.k, p.l, 4 * p.eta_bits
    zw = 4 * p.z_bits
    w1w = 4 * p.w1_bits
    A = Asm("dilithium", level, 23)
    s1_w = 14
    s2_w = s1_w + ew * l
    t0_w = s2_w + ew * k
    sig_w = 400
    A.emit("COPY b3:50 b2:0 #n=32")                      # rho
    q0 = [(f"b0:{128 * i}",
           f"UNPACKD b0:{128 * i} b2:{s1_w + ew * i} #kind=eta")
          for i in range(l)]
    q1 = ([(f"b1:{1024 + 128 * i}",
            f"UNPACKD b1:{1024 + 128 * i} b2:{s2_w + ew * i} #kind=eta")
           for i in range(k)]
          + [(f"b1:{2048 + 128 * i}",
              f"UNPACKD b1:{2048 + 128 * i} b2:{t0_w + 52 * i} #kind=t0")
             for i in range(k)])
    last_ntt = _interleaved_unpack_ntt(A, q0, q1, defer_last=True)
    A.emit("COPY b3:0 b2:8 #n=48")                       # tr
    A.emit(f"COPY b3:6 b2:1000 #n={mlen}")
    A.pair(f"SHAKE256 b3:20 b3:0 #inlen={48 + mlen} #outlen=48",   # mu
           last_ntt)
    A.emit("COPY b3:30 b2:4 #n=32")                      # key
    A.emit("COPY b3:34 b3:20 #n=48")
    A.emit("SHAKE256 b3:40 b3:30 #inlen=80 #outlen=48")  # rho-prime
    for i in range(l):
        gam = f"REJ_GAMMA b0:{2048 + 128 * i} b3:40 #nonce={i}"
        if i == 0:
            A.emit(gam)
        else:
            A.pair(gam, f"NTT b1:{3072 + 128 * (i - 1)} "
                        f"b0:{2048 + 128 * (i - 1)}")
    A.emit(f"NTT b1:{3072 + 128 * (l - 1)} b0:{2048 + 128 * (l - 1)}")
    # w rows alternate banks so DECOMPOSE can overlap the next INTT.
    row = lambda i: f"b{i % 2}:{4096 + 128 * i}"
    _dil_matvec(A, k, l, acc=row, vec=lambda j: f"b1:{3072 + 128 * j}")
    A.emit(f"INTT {row(0)}")
    for i in range(1, k):
        A.pair(f"DECOMPOSE b2:{2048 + 128 * (i - 1)} {row(i - 1)} "
               f"{row(i - 1)}", f"INTT {row(i)}")
    A.emit(f"DECOMPOSE b2:{2048 + 128 * (k - 1)} {row(k - 1)} {row(k - 1)}")
    for i in range(k):
        A.emit(f"PACK b3:{60 + w1w * i} b2:{2048 + 128 * i} #kind=w1")
    A.emit("COPY b3:200 b3:20 #n=48")
    A.emit(f"COPY b3:206 b3:60 #n={k * 32 * p.w1_bits}")
    A.emit(f"SHAKE256 b3:350 b3:200 #inlen={48 + k * 32 * p.w1_bits} "
           f"#outlen=32")                                # c-tilde
    A.emit("SAMPLEINBALL b0:5248 b3:350")
    A.emit("NTT b0:5376 b0:5248")
    for i in range(l):
        A.emit(f"PWM b0:5504 b0:5376 b0:{128 * i}")
        A.emit("INTT b0:5504")
        A.emit(f"ADD b0:{2048 + 128 * i} b0:{2048 + 128 * i} b0:5504")
    for i in range(k):
        A.emit(f"PWM b1:6400 b0:5376 b1:{1024 + 128 * i}")
        if i < l:
            # z packing rides on the hint-side transforms
            A.pair(f"PACK b3:{sig_w + 4 + zw * i} b0:{2048 + 128 * i} "
                   f"#kind=z", "INTT b1:6400")
        else:
            A.emit("INTT b1:6400")
        A.emit(f"SUB {row(i)} {row(i)} b1:6400")
        A.emit(f"PWM b1:6400 b0:5376 b1:{2048 + 128 * i}")
        A.emit("INTT b1:6400")
        A.emit(f"ADD {row(i)} {row(i)} b1:6400")
        A.emit(f"MAKEHINT b1:{5248 + 128 * i} {row(i)} b2:{2048 + 128 * i}")
    A.emit(f"COPY b3:{sig_w} b3:350 #n=32")
    A.emit(f"ENCODEH b3:{sig_w + 4 + zw * l} b1:5248")
    return A.program({
        "in.sk": (2, 0, p.sk_bytes), "in.msg": (2, 1000, mlen),
        "out.sig": (3, sig_w, p.sig_bytes)})


def dilithium_verify(level: int, mlen: int = 32) -> Program:
    p = dilithium.PARAMS[level]
    k, l = p.k, p.l
    zw = 4 * p.z_bits
    w1w = 4 * p.w1_bits
    sig_w = 400
    A = Asm("dilithium", level, 23)
    A.emit("COPY b3:50 b2:0 #n=32")                      # rho
    q0 = [(f"b0:{128 * i}",
           f"UNPACKD b0:{128 * i} b2:{sig_w + 4 + zw * i} #kind=z")
          for i in range(l)]
    q1 = [(f"b1:{128 * i}",
           f"UNPACKD b1:{128 * i} b2:{4 + 40 * i} #kind=t1 #shift=13")
          for i in range(k)]
    _interleaved_unpack_ntt(A, q0, q1)
    A.emit(f"UNPACKD b1:3072 b2:{sig_w + 4 + zw * l} #kind=hint")
    A.emit(f"SHAKE256 b3:0 b2:0 #inlen={p.pk_bytes} #outlen=48")   # tr
    A.emit("COPY b3:10 b3:0 #n=48")
    A.emit(f"COPY b3:16 b2:1400 #n={mlen}")
    A.emit(f"SHAKE256 b3:30 b3:10 #inlen={48 + mlen} #outlen=48")  # mu
    A.emit(f"SAMPLEINBALL b0:5248 b2:{sig_w}")
    A.emit("NTT b0:5376 b0:5248")
    _dil_matvec(A, k, l, acc=lambda i: f"b1:{1024 + 128 * i}",
                vec=lambda j: f"b0:{128 * j}")
    for i in range(k):
        A.emit(f"PWM b1:6400 b0:5376 b1:{128 * i}")
        A.emit(f"SUB b1:{1024 + 128 * i} b1:{1024 + 128 * i} b1:6400")
        A.emit(f"INTT b1:{1024 + 128 * i}")
        A.emit(f"USEHINT b0:{4096 + 128 * i} b1:{3072 + 128 * i} "
               f"b1:{1024 + 128 * i}")
        A.emit(f"PACK b3:{60 + w1w * i} b0:{4096 + 128 * i} #kind=w1")
    A.emit("COPY b3:200 b3:30 #n=48")
    A.emit(f"COPY b3:206 b3:60 #n={k * 32 * p.w1_bits}")
    A.emit(f"SHAKE256 b3:350 b3:200 #inlen={48 + k * 32 * p.w1_bits} "
           f"#outlen=32")
    A.emit(f"VERIFY b2:{sig_w} b3:350 #n=32")
    A.emit("CMOV b3:3010 b3:3000 b3:3001 #n=8")
    return A.program({
        "in.pk": (2, 0, p.pk_bytes), "in.sig": (2, sig_w, p.sig_bytes),
        "in.msg": (2, 1400, mlen), "const.one": (3, 3000, 8),
        "out.ok": (3, 3010, 8)})


_BUILTINS = {
    ("saber", "keygen"): saber_keygen,
    ("saber", "encaps"): saber_encaps,
    ("saber", "decaps"): saber_decaps,
    ("dilithium", "keygen"): lambda level, **kw: dilithium_keygen(level),
    ("dilithium", "sign"): dilithium_sign,
    ("dilithium", "verify"): dilithium_verify,
}


def builtin_program(scheme: str, operation: str, level: int, **kw) -> Program:
    try:
        gen = _BUILTINS[(scheme, operation)]
    except KeyError:
        raise ProgramError(f"no builtin program for {scheme}/{operation}")
    return gen(level, **kw)
