#!/usr/bin/env python3
# Copyright 2026 The PNML Authors.
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
"""Converts a dense MULAN-style ARFF file to the sparse multi-label format.

The last --labels attributes are the binary labels (emotions: 6).

    convert_mulan_arff.py emotions.arff data/emotions.txt --labels 6
"""

import argparse

import numpy as np
from scipy.io import arff


def main():
    parser = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    parser.add_argument("arff")
    parser.add_argument("out")
    parser.add_argument("--labels", type=int, required=True)
    args = parser.parse_args()

    data, meta = arff.loadarff(args.arff)
    names = meta.names()
    k = args.labels
    if not 0 < k < len(names):
        raise SystemExit(f"--labels must be between 1 and {len(names) - 1}")

    def column(name):
        col = data[name]
        if col.dtype.kind in "SO":
            col = np.array([v.decode() if isinstance(v, bytes) else v for v in col])
        return col.astype(float)

    x = np.column_stack([column(n) for n in names[:-k]])
    y = np.column_stack([column(n) for n in names[-k:]]).astype(int)
    if not np.isin(y, (0, 1)).all():
        raise SystemExit("label attributes must be 0/1")

    with open(args.out, "w") as out:
        out.write(f"{x.shape[0]} {x.shape[1]} {k}\n")
        for xi, yi in zip(x, y):
            labels = ",".join(str(j + 1) for j in np.flatnonzero(yi))
            feats = " ".join(f"{j + 1}:{v!r}" for j, v in enumerate(xi) if v != 0.0)
            out.write(f"{labels} {feats}".strip() + "\n")
    print(f"wrote {x.shape[0]} x {x.shape[1]} features, {k} labels to {args.out}")


if __name__ == "__main__":
    main()
