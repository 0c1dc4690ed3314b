"""Regenerate the bundled lung and PBC CSV files from the R `survival` package
copies distributed with the `rdatasets` Python package."""

import argparse
import math
from pathlib import Path

import rdatasets


def fmt(v):
    return repr(float(v))


def write_lung(out: Path) -> int:
    df = rdatasets.data("survival", "cancer")
    df = df[df["ph.ecog"].notna()]
    lines = ["id,time,status,age,sex,ph.ecog"]
    for _, row in df.iterrows():
        status = "exact" if row["status"] == 2 else "right"
        lines.append(
            f"{int(row['rownames'])},{int(row['time'])},{status},"
            f"{int(row['age'])},{int(row['sex'])},{int(row['ph.ecog'])}"
        )
    out.write_text("\n".join(lines) + "\n")
    return len(lines) - 1


def write_pbc(out: Path) -> int:
    df = rdatasets.data("survival", "pbc")
    df = df[df["protime"].notna() & df["albumin"].notna() & df["bili"].notna()]
    lines = ["id,time,status,age,log_albumin,log_bili,edema,log_protime"]
    for _, row in df.iterrows():
        # 2 = death; 0 = censored, 1 = transplant, both right-censored
        status = "exact" if row["status"] == 2 else "right"
        lines.append(
            ",".join(
                [
                    str(int(row["id"])),
                    fmt(row["time"] / 365.25),
                    status,
                    fmt(row["age"]),
                    fmt(math.log(row["albumin"])),
                    fmt(math.log(row["bili"])),
                    fmt(row["edema"]),
                    fmt(math.log(row["protime"])),
                ]
            )
        )
    out.write_text("\n".join(lines) + "\n")
    return len(lines) - 1


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out", type=Path, default=Path(__file__).resolve().parent.parent / "data")
    args = parser.parse_args()
    args.out.mkdir(parents=True, exist_ok=True)
    print("lung rows:", write_lung(args.out / "lung.csv"))
    print("pbc rows:", write_pbc(args.out / "pbc.csv"))


if __name__ == "__main__":
    main()
