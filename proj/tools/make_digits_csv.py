"""Write the optical handwritten-digits sample used by configs/svm_digits.json.

The 8x8 digits shipped with scikit-learn are the UCI "Optical Recognition of
Handwritten Digits" test split. We keep the first 1500 rows and make the task
binary: digits 0-4 -> -1, digits 5-9 -> +1. Features stay at their native width
(64); the run config pads them.
"""

import argparse
import csv

from sklearn.datasets import load_digits


def main() -> None:
    ap = argparse.ArgumentParser()
    ap.add_argument("--out", default="data/digits_1500.csv")
    ap.add_argument("--rows", type=int, default=1500)
    args = ap.parse_args()

    digits = load_digits()
    with open(args.out, "w", newline="") as fh:
        w = csv.writer(fh)
        for x, y in zip(digits.data[: args.rows], digits.target[: args.rows]):
            w.writerow([f"{v:g}" for v in x] + [1 if y >= 5 else -1])


if __name__ == "__main__":
    main()
