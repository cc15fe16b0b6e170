#!/usr/bin/env python3
# Copyright 2026 The StreamForge Authors
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
"""Builds data/elecNormNew.arff.gz and data/covtypeNorm.arff.gz.

Both sources ship as CSV inside the scikit-multiflow 0.4.1 source
distribution on PyPI. The electricity CSV lacks the date and day columns of
the usual 8-attribute version; they are reconstructed from the row index
(48 half-hour periods per day, starting Tuesday 1996-05-07).
"""

import argparse
import csv
import datetime
import gzip
import io
import pathlib
import tarfile
import urllib.request

SDIST = ("https://files.pythonhosted.org/packages/source/s/scikit-multiflow/"
         "scikit-multiflow-0.4.1.tar.gz")
MEMBER = "scikit-multiflow-0.4.1/src/skmultiflow/data/datasets/{}"


def load_csv(source_dir, name):
    if source_dir:
        return (pathlib.Path(source_dir) / name).read_text()
    with urllib.request.urlopen(SDIST) as resp:
        blob = resp.read()
    with tarfile.open(fileobj=io.BytesIO(blob), mode="r:gz") as tar:
        return tar.extractfile(MEMBER.format(name)).read().decode()


def fmt(x):
    return ("%.6f" % x).rstrip("0").rstrip(".") if x != int(x) else str(int(x))


def write_elec(text, out):
    rows = list(csv.reader(io.StringIO(text)))[1:]
    start = datetime.date(1996, 5, 7)
    last = start + datetime.timedelta(days=(len(rows) - 1) // 48)
    code = lambda d: (d.year % 100) * 10000 + d.month * 100 + d.day
    lo, hi = code(start), code(last)
    with gzip.open(out, "wt") as f:
        f.write("@relation elecNormNew\n\n")
        f.write("@attribute date numeric\n@attribute day numeric\n")
        for name in ["period", "nswprice", "nswdemand", "vicprice", "vicdemand", "transfer"]:
            f.write("@attribute %s numeric\n" % name)
        f.write("@attribute class {UP,DOWN}\n\n@data\n")
        for i, r in enumerate(rows):
            d = start + datetime.timedelta(days=i // 48)
            date = (code(d) - lo) / (hi - lo)
            day = d.isoweekday()
            label = "UP" if r[6].strip() in ("1", "1.0") else "DOWN"
            f.write(",".join([fmt(date), str(day)] + r[:6] + [label]) + "\n")


def write_covtype(text, out):
    rows = list(csv.reader(io.StringIO(text)))[1:]
    cols = len(rows[0]) - 1
    values = [[float(v) for v in r[:cols]] for r in rows]
    lo = [min(v[j] for v in values) for j in range(cols)]
    hi = [max(v[j] for v in values) for j in range(cols)]
    with gzip.open(out, "wt") as f:
        f.write("@relation covtypeNorm\n\n")
        for j in range(cols):
            f.write("@attribute attr%d numeric\n" % (j + 1))
        f.write("@attribute class {1,2,3,4,5,6,7}\n\n@data\n")
        for v, r in zip(values, rows):
            norm = [(x - a) / (b - a) if b > a else 0.0 for x, a, b in zip(v, lo, hi)]
            f.write(",".join(fmt(x) for x in norm) + "," + str(int(float(r[cols]))) + "\n")


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--source-dir", help="directory holding elec.csv and covtype.csv")
    ap.add_argument("--out", default=str(pathlib.Path(__file__).resolve().parent.parent / "data"))
    args = ap.parse_args()
    out = pathlib.Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    write_elec(load_csv(args.source_dir, "elec.csv"), out / "elecNormNew.arff.gz")
    write_covtype(load_csv(args.source_dir, "covtype.csv"), out / "covtypeNorm.arff.gz")


if __name__ == "__main__":
    main()
