#!/usr/bin/env python3
# Copyright 2026 The lfe Authors.
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
"""Regenerates the demo corpus, its gold spans and the coverage hand count.

Every document is assembled from a small design table, and gold offsets are
located from the same table, so nothing here depends on the engine. The split
is recomputed with an independent port of the manifest hash to decide which
documents are dev/test (gold) and which are train (coverage).

    python3 data/demo/generate.py
"""

import json
import pathlib

HERE = pathlib.Path(__file__).resolve().parent
SEED = 30
RATIOS = (0.8, 0.1, 0.1)
MASK = (1 << 64) - 1

CONCEPTS = [
    "employer_name",
    "union_name",
    "agreement_start_date",
    "agreement_end_date",
    "sick_leave_clause",
    "sick_leave_amount",
    "sick_leave_unit",
    "employment_status",
]

# One row per document.
#   parties: "between" or "recognizes" phrasing
#   term:    "from_until", "commence_expire" or "term_years" (no end date)
#   sick:    list of sick leave sentences as (kind, status, amount, unit), or
#            None for an agreement without a sick leave article
DESIGN = [
    dict(employer="Acme Manufacturing Inc", union="United Steelworkers Local 1234",
         parties="between", term="from_until", start="January 1, 2021",
         end="December 31, 2023",
         sick=[("accrue", "Full time", "8", "hours"), ("accrue", "Part time", "4", "hours")],
         pages=2),
    dict(employer="Northwind Foods LLC", union="Northwind Workers Association",
         parties="recognizes", term="commence_expire", start="July 1, 2022",
         end="June 30, 2025", sick=[("entitled", None, "ten", "days"),
                                    ("ineligible", "Seasonal", None, None)],
         pages=1),
    dict(employer="Harbor Logistics Corp", union="Teamsters Local 710",
         parties="between", term="commence_expire", start="2021-04-01",
         end="2024-03-31", sick=[("accrue", "Full time", "12", "days")], pages=2),
    dict(employer="Summit Health Services", union="Nurses United Local 55",
         parties="between", term="term_years", start="March 15, 2020", end=None,
         sick=[("accrue", "Full time", "1", "day"), ("accrue", "Part time", "4", "hours")],
         pages=1),
    dict(employer="Great Lakes Paper Company", union="Paperworkers Union Local 88",
         parties="recognizes", term="from_until", start="May 1, 2019",
         end="April 30, 2022", sick=None, pages=2),
    dict(employer="Riverside School District", union="Riverside Education Association",
         parties="recognizes", term="from_until", start="September 1, 2021",
         end="August 31, 2024",
         sick=[("entitled", None, "fifteen", "days"),
               ("ineligible", "Probationary", None, None)],
         pages=1),
    dict(employer="Metro Transit Authority", union="Amalgamated Transit Union Local 1001",
         parties="between", term="from_until", start="October 1, 2020",
         end="September 30, 2023",
         sick=[("accrue", "Full time", "10", "hours"), ("ineligible", "Temporary", None, None)],
         pages=2),
    dict(employer="Cedar Valley Foods Inc", union="Food Workers Local 400",
         parties="between", term="commence_expire", start="February 1, 2022",
         end="January 31, 2026", sick=[("entitled", None, "five", "days")], pages=1),
    dict(employer="Pioneer Steel Works", union="Steelworkers Local 9",
         parties="recognizes", term="commence_expire", start="June 1, 2021",
         end="May 31, 2024", sick=[("accrue", "All employees", "one", "day"),
                                   ("ineligible", "Seasonal", None, None)],
         pages=1),
    dict(employer="Blue Ridge Hospital", union="Healthcare Workers Union Local 32",
         parties="between", term="from_until", start="2023-01-01", end="2025-12-31",
         sick=[("accrue", "Full time", "6", "hours"), ("accrue", "Part time", "3", "hours")],
         pages=2),
    dict(employer="Coastal Energy Ltd", union="Utility Workers Local 12",
         parties="recognizes", term="from_until", start="April 1, 2022",
         end="March 31, 2025", sick=[("accrue", "Full time", "2", "weeks")], pages=1),
    dict(employer="Granite City Council", union="Municipal Employees Association",
         parties="between", term="commence_expire", start="January 1, 2024",
         end="December 31, 2027",
         sick=[("entitled", None, "twelve", "days"), ("ineligible", "Seasonal", None, None)],
         pages=2),
]

WAGES = ("Employees shall be paid every two weeks. "
         "Overtime is paid at one and one half times the regular rate.")
GRIEVANCE = "Grievances must be filed within 10 days of the event."
HOLIDAYS = "The following days are recognized as paid holidays for eligible staff."


def fnv1a64(data, h=0xCBF29CE484222325):
    for b in data:
        h ^= b
        h = (h * 0x100000001B3) & MASK
    return h


def mix64(x):
    x ^= x >> 30
    x = (x * 0xBF58476D1CE4E5B9) & MASK
    x ^= x >> 27
    x = (x * 0x94D049BB133111EB) & MASK
    x ^= x >> 31
    return x


def split(ids, seed):
    key = lambda i: (mix64(fnv1a64(i.encode(), fnv1a64(seed.to_bytes(8, "little")))), i)
    order = sorted(ids, key=key)
    n_train = int(RATIOS[0] * len(ids))
    n_dev = int(RATIOS[1] * len(ids))
    out = {}
    for pos, doc in enumerate(order):
        out[doc] = "train" if pos < n_train else "dev" if pos < n_train + n_dev else "test"
    return out


class Builder:
    """Appends text and remembers the offsets of labeled pieces."""

    def __init__(self):
        self.text = ""
        self.spans = []

    def add(self, s):
        self.text += s

    def label(self, concept, s):
        start = len(self.text)
        self.text += s
        self.spans.append((concept, start, start + len(s)))

    def header(self, d):
        self.add(d["employer"] + " Collective Agreement\n\n")

    def footer(self, page):
        self.add("\nPage " + str(page) + "\n")


def sick_sentence(b, kind, status, amount, unit):
    if kind == "accrue":
        b.label("employment_status", status) if status != "All employees" else b.add(status)
        b.add(" employees shall accrue " if status != "All employees" else " shall accrue ")
        b.label("sick_leave_amount", amount)
        b.add(" ")
        b.label("sick_leave_unit", unit)
        b.add(" of sick leave per month.")
    elif kind == "entitled":
        b.add("Employees are entitled to ")
        b.label("sick_leave_amount", amount)
        b.add(" ")
        b.label("sick_leave_unit", unit)
        b.add(" of paid sick leave per year.")
    else:
        b.label("employment_status", status)
        b.add(" employees are not eligible for sick leave.")


def build(d):
    b = Builder()
    article = 1
    if d["pages"] == 2:
        b.header(d)
    b.add("COLLECTIVE AGREEMENT\n\n")
    if d["parties"] == "between":
        b.add("This Agreement is made between ")
        b.label("employer_name", d["employer"])
        b.add(", hereinafter the Employer, and ")
        b.label("union_name", d["union"])
        b.add(", hereinafter the Union.\n\n")
    else:
        b.add("The Employer, ")
        b.label("employer_name", d["employer"])
        b.add(", recognizes the ")
        b.label("union_name", d["union"])
        b.add(" as the sole bargaining agent for its employees.\n\n")

    b.add("ARTICLE %d\nTERM OF AGREEMENT\n\n" % article)
    article += 1
    if d["term"] == "from_until":
        b.add("This Agreement shall be effective from ")
        b.label("agreement_start_date", d["start"])
        b.add(" and shall remain in effect until ")
        b.label("agreement_end_date", d["end"])
        b.add(".\n\n")
    elif d["term"] == "commence_expire":
        b.add("This Agreement shall commence on ")
        b.label("agreement_start_date", d["start"])
        b.add(" and shall expire on ")
        b.label("agreement_end_date", d["end"])
        b.add(".\n\n")
    else:
        b.add("This Agreement shall be effective from ")
        b.label("agreement_start_date", d["start"])
        b.add(" for a term of three years.\n\n")

    b.add("ARTICLE %d\nWAGES\n\n%s\n\n" % (article, WAGES))
    article += 1
    if d["pages"] == 2:
        b.footer(1)
        b.add("\f")
        b.header(d)

    if d["sick"] is not None:
        start = len(b.text)
        b.add("ARTICLE %d\nSICK LEAVE\n\n" % article)
        article += 1
        for i, sentence in enumerate(d["sick"]):
            if i:
                b.add(" ")
            sick_sentence(b, *sentence)
        b.add("\nSick leave may be used for personal illness or injury.\n\n")
        # The clause runs from its heading to the next article heading.
        b.spans.append(("sick_leave_clause", start, len(b.text)))

    b.add("ARTICLE %d\nHOLIDAYS\n\n%s\n\n" % (article, HOLIDAYS))
    article += 1
    b.add("ARTICLE %d\nGRIEVANCE PROCEDURE\n\n%s\n" % (article, GRIEVANCE))
    if d["pages"] == 2:
        b.footer(2)
    return b


def main():
    ids = ["cba%02d" % (i + 1) for i in range(len(DESIGN))]
    buckets = split(ids, SEED)
    corpus = HERE / "corpus"
    corpus.mkdir(exist_ok=True)
    gold_lines = []
    labeled = {c: 0 for c in CONCEPTS}
    train_docs = 0
    for doc_id, d in zip(ids, DESIGN):
        b = build(d)
        (corpus / (doc_id + ".txt")).write_text(b.text)
        concepts = {c for c, _, _ in b.spans}
        if buckets[doc_id] == "train":
            train_docs += 1
            for c in concepts:
                labeled[c] += 1
            continue
        missing = set(CONCEPTS) - concepts
        assert not missing, "%s is %s but lacks %s" % (doc_id, buckets[doc_id], missing)
        for concept, start, end in sorted(b.spans, key=lambda s: (CONCEPTS.index(s[0]), s[1])):
            gold_lines.append(json.dumps(
                {"doc": doc_id, "concept": concept, "start": start, "end": end}))
    (HERE / "gold").mkdir(exist_ok=True)
    (HERE / "gold" / "gold.jsonl").write_text("\n".join(gold_lines) + "\n")
    expected = {
        "seed": SEED,
        "train_docs": train_docs,
        "buckets": {b: sorted(i for i in ids if buckets[i] == b) for b in ("train", "dev", "test")},
        "concepts": [{"concept": c, "labeled_docs": labeled[c]} for c in CONCEPTS],
    }
    (HERE / "expected_coverage.json").write_text(json.dumps(expected, indent=2) + "\n")


if __name__ == "__main__":
    main()
