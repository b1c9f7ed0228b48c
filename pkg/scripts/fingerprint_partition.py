#!/usr/bin/env python3
"""Partition the catalog's two-product tables by their invariant fingerprint.

Parametric families are bound at a = 2 (off every recorded singular set) so
each label contributes one concrete algebra.  The resulting partition is a
regression fixture: a change in any invariant computation, or in the
catalog tables, moves some label between blocks.

Writes src/cpalib/data/fixtures/fingerprint_partition_a2.json and prints a
summary.  Run from the repository root.
"""
from __future__ import annotations

import dataclasses
import json
from fractions import Fraction
from pathlib import Path

from cpalib.catalog import entries, load
from cpalib.invariants import fingerprint

PAIR_FAMILIES = ("pair2", "pair3", "pair4", "nil3", "component")
A_VALUE = Fraction(2)


def main():
    rows = {}
    for ent in entries():
        if ent.family not in PAIR_FAMILIES or ent.single:
            continue
        P = load(ent.label, a=A_VALUE) if ent.has_param else load(ent.label)
        fp = fingerprint(P)
        rows[ent.label] = dataclasses.astuple(fp)
    blocks: dict[tuple, list[str]] = {}
    for label, key in rows.items():
        blocks.setdefault(key, []).append(label)
    partition = sorted(
        (sorted(labels) for labels in blocks.values()),
        key=lambda b: (len(b[0]), b[0]),
    )
    payload = {
        "a": str(A_VALUE),
        "families": list(PAIR_FAMILIES),
        "fields": [
            "n", "ann", "dot_square", "bracket_square", "derived", "der",
            "nilpotent", "nil_class", "dot_perfect", "bracket_perfect",
        ],
        "fingerprints": {label: list(key) for label, key in sorted(rows.items())},
        "partition": partition,
    }
    out = Path(__file__).resolve().parent.parent / "src" / "cpalib" / "data" / \
        "fixtures" / "fingerprint_partition_a2.json"
    out.write_text(json.dumps(payload, indent=1) + "\n")
    singletons = sum(1 for b in partition if len(b) == 1)
    print(f"{len(rows)} labels, {len(partition)} fingerprint blocks, "
          f"{singletons} singletons")
    for b in partition:
        if len(b) > 1:
            print("  block:", ", ".join(b))
    print("wrote", out)


if __name__ == "__main__":
    main()
