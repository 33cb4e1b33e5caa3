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
"""Writes the small bundled datasets under data/.

blobs.txt: sparse multi-label text. Instances come from a few Gaussian
topics; each topic switches on a correlated subset of labels.
tiny_csv/: the same kind of data as a dense features.csv/labels.csv pair.
"""

import argparse
import pathlib

import numpy as np


def blobs(rng, n, d, k, topics):
    centers = rng.normal(scale=2.5, size=(topics, d))
    label_sets = rng.random((topics, k)) < 0.4
    label_sets[np.arange(topics), np.arange(topics) % k] = True
    topic = rng.integers(topics, size=n)
    x = centers[topic] + rng.normal(size=(n, d))
    y = label_sets[topic].copy()
    flip = rng.random((n, k)) < 0.05
    y ^= flip
    return x, y.astype(int)


def write_sparse(path, x, y):
    with open(path, "w") as out:
        out.write(f"{x.shape[0]} {x.shape[1]} {y.shape[1]}\n")
        for xi, yi in zip(x, y):
            labels = ",".join(str(j + 1) for j in np.flatnonzero(yi))
            feats = " ".join(f"{j + 1}:{v:.6f}" for j, v in enumerate(xi) if v != 0.0)
            out.write(f"{labels} {feats}".strip() + "\n")


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out", default=str(pathlib.Path(__file__).resolve().parent.parent / "data"))
    parser.add_argument("--seed", type=int, default=20260)
    args = parser.parse_args()
    out = pathlib.Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    rng = np.random.default_rng(args.seed)

    x, y = blobs(rng, n=240, d=12, k=4, topics=5)
    write_sparse(out / "blobs.txt", x, y)

    x, y = blobs(rng, n=60, d=5, k=3, topics=3)
    csv = out / "tiny_csv"
    csv.mkdir(exist_ok=True)
    np.savetxt(csv / "features.csv", x, delimiter=",", fmt="%.6f")
    np.savetxt(csv / "labels.csv", y, delimiter=",", fmt="%d")


if __name__ == "__main__":
    main()
