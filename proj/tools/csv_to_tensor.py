#!/usr/bin/env python3
"""Convert a numeric CSV (one token per row, no header) to an IFSQ tensor file."""

import argparse
import csv
import math
import struct
import sys


def write_tensor(rows, path):
    if not rows or not rows[0]:
        raise ValueError("empty tensor")
    dim = len(rows[0])
    if any(len(r) != dim for r in rows):
        raise ValueError("ragged rows")
    flat = [float(x) for r in rows for x in r]
    if not all(math.isfinite(x) for x in flat):
        raise ValueError("non-finite value")
    with open(path, "wb") as f:
        f.write(b"IFSQ")
        f.write(struct.pack("<HBB", 1, 0, 2))
        f.write(struct.pack("<QQ", len(rows), dim))
        f.write(struct.pack("<%df" % len(flat), *flat))


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("csv")
    p.add_argument("out")
    args = p.parse_args(argv)
    with open(args.csv, newline="") as f:
        rows = [r for r in csv.reader(f) if r]
    write_tensor(rows, args.out)
    return 0


if __name__ == "__main__":
    sys.exit(main())
