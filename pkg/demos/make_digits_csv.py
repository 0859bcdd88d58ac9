"""Write the 8x8 handwritten Digits set as a CSV that ``hqnas`` can load.

Digits is not bundled with the package. This converts the copy shipped with
scikit-learn (install it separately)::

    python3 demos/make_digits_csv.py data/digits.csv

The acceptance suite picks the file up from ``data/digits.csv`` or from the
path in ``$HQNAS_DIGITS_CSV``.
"""

import sys
from pathlib import Path

from sklearn.datasets import load_digits

from hqnas.data import Dataset, save_csv


def main(path="data/digits.csv"):
    d = load_digits()
    ds = Dataset("digits", d.data.astype(float), d.target, 10)
    Path(path).parent.mkdir(parents=True, exist_ok=True)
    save_csv(ds, path)
    print(f"wrote {ds.num_samples} rows x {ds.num_features} features to {path}")


if __name__ == "__main__":
    main(*sys.argv[1:])
