#!/usr/bin/env python3
# Copyright 2026 The combnet Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
"""Regenerates the files under data/ from redistributable Python packages.

MNIST: the 5000-image training subset bundled with mlxtend (500 images per
digit) is written as a pair of IDX files.
WDBC: the copy bundled with scikit-learn is written in the UCI wdbc.data row
layout. scikit-learn drops the patient ids, so the row ordinal is used.

Usage: tools/prepare_data.py [--mlxtend-wheel PATH] [--out data]
"""

import argparse
import glob
import gzip
import os
import struct
import subprocess
import sys
import tempfile
import zipfile


def mnist_rows(wheel):
    with zipfile.ZipFile(wheel) as z:
        raw = gzip.decompress(z.read("mlxtend/data/data/mnist_5k.csv.gz"))
    rows = []
    for line in raw.decode().splitlines():
        fields = [int(v) for v in line.split(",")]
        rows.append((fields[:784], fields[784]))
    return rows


def write_idx(rows, out):
    with open(os.path.join(out, "mnist-5k-images-idx3-ubyte"), "wb") as f:
        f.write(struct.pack(">IIII", 0x00000803, len(rows), 28, 28))
        for pixels, _ in rows:
            f.write(bytes(pixels))
    with open(os.path.join(out, "mnist-5k-labels-idx1-ubyte"), "wb") as f:
        f.write(struct.pack(">II", 0x00000801, len(rows)))
        f.write(bytes(label for _, label in rows))


def write_wdbc(out):
    import sklearn.datasets

    path = os.path.join(os.path.dirname(sklearn.datasets.__file__), "data",
                        "breast_cancer.csv")
    with open(path) as src, open(os.path.join(out, "wdbc.data"), "w") as dst:
        next(src)  # "569,30,malignant,benign"
        for i, line in enumerate(src, start=1):
            fields = line.strip().split(",")
            # scikit-learn target: 0 = malignant, 1 = benign
            diagnosis = "M" if fields[30] == "0" else "B"
            dst.write(",".join([str(i), diagnosis] + fields[:30]) + "\n")


def fetch_wheel(tmp):
    subprocess.check_call([sys.executable, "-m", "pip", "download", "--no-deps",
                           "mlxtend==0.24.0", "-d", tmp])
    return glob.glob(os.path.join(tmp, "mlxtend-*.whl"))[0]


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--mlxtend-wheel")
    ap.add_argument("--out", default=os.path.join(
        os.path.dirname(os.path.abspath(__file__)), "..", "data"))
    args = ap.parse_args()
    os.makedirs(args.out, exist_ok=True)
    with tempfile.TemporaryDirectory() as tmp:
        wheel = args.mlxtend_wheel or fetch_wheel(tmp)
        write_idx(mnist_rows(wheel), args.out)
    write_wdbc(args.out)


if __name__ == "__main__":
    main()
