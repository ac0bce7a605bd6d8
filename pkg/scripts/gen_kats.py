#!/usr/bin/env python3
"""Regenerate the .rsp files in kats/.

The generator follows the NIST harness call discipline (AES-256-CTR
DRBG seeded with the byte ramp 00..2f, per-case 48-byte seeds), so the
files are reproducible bit for bit.
"""

import argparse
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from unipq import kat

KEM = {1: "lightsaber", 3: "saber", 5: "firesaber"}
SIG = {2: "dilithium2", 3: "dilithium3", 5: "dilithium5"}


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--count", type=int, default=100,
                    help="cases per file (default 100)")
    ap.add_argument("--out", default=None,
                    help="output directory (default kats/ next to src/)")
    args = ap.parse_args()

    out = Path(args.out) if args.out else \
        Path(__file__).resolve().parent.parent / "kats"
    out.mkdir(parents=True, exist_ok=True)

    for level, name in KEM.items():
        path = out / f"{name}.rsp"
        path.write_text(kat.gen_kem_kat(level, args.count))
        print(f"wrote {path}")
    for level, name in SIG.items():
        path = out / f"{name}.rsp"
        path.write_text(kat.gen_sig_kat(level, args.count))
        print(f"wrote {path}")


if __name__ == "__main__":
    main()
