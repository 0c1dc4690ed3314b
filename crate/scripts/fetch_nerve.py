"""Download the Fatt-Katz nerve pulse waiting times (799 intervals) and write
them as data/nerve.csv.

The source file lists the waiting times in seconds. They are multiplied by 50
so that times are in units of 1/50 s. All observations are uncensored.
"""

import argparse
import urllib.request
from pathlib import Path

URL = "http://www.stat.cmu.edu/~larry/all-of-nonpar/=data/nerve.dat"
SCALE = 50.0


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--url", default=URL)
    parser.add_argument("--source", type=Path, help="read a local copy instead of downloading")
    parser.add_argument(
        "--out", type=Path, default=Path(__file__).resolve().parent.parent / "data" / "nerve.csv"
    )
    args = parser.parse_args()
    if args.source:
        text = args.source.read_text()
    else:
        with urllib.request.urlopen(args.url, timeout=60) as resp:
            text = resp.read().decode()
    values = [float(tok) for tok in text.split()]
    if len(values) != 799:
        raise SystemExit(f"expected 799 waiting times, found {len(values)}")
    lines = ["time,status"] + [f"{v * SCALE!r},exact" for v in values]
    args.out.write_text("\n".join(lines) + "\n")
    print(f"wrote {len(values)} rows to {args.out}")


if __name__ == "__main__":
    main()
