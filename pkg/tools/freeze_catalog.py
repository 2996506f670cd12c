"""Regenerate the shipped catalog data from the pinned family samples.

Writes ``<slug>.cubic`` for every family and ``expected.json`` with what the
full pipeline computes for each sample.  Refuses to write anything if a
sample does not reproduce its table row or breaks a structural invariant.

    python3 tools/freeze_catalog.py [--check]
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from fanocurves import catalog, discovery, geometry
from fanocurves.cli import build_report, dumps
from fanocurves.poly import cubic_to_text

DATA = Path(__file__).resolve().parents[1] / "src" / "fanocurves" / "data" / "catalog"


def freeze_one(fam: catalog.FamilySpec) -> tuple[str, dict]:
    f = catalog.pinned(fam.id)
    if geometry.singular_scan(f, fam.scan_prime) is not None:
        raise SystemExit(f"{fam.id}: sample is singular mod {fam.scan_prime}")
    cfg = discovery.analyze(f)
    if (cfg.n_s, cfg.group.order) != (fam.row.n_s, fam.row.order):
        raise SystemExit(f"{fam.id}: sample gives {(cfg.n_s, cfg.group.order)}, expected {(fam.row.n_s, fam.row.order)}")
    if bad := discovery.configuration_violations(cfg):
        raise SystemExit(f"{fam.id}: {bad}")
    report = build_report(f, cfg, [])
    entry = {
        "id": fam.id,
        "slug": fam.slug,
        "digest": report["input_digest"],
        "params": {p.name: catalog.param_str(fam.pinned[p.name]) for p in fam.params} if fam.params else {},
        "scan_prime": fam.scan_prime,
        "cubic": report["cubic"],
        "n_S": cfg.n_s,
        "order": cfg.group.order,
        "reflection_count": cfg.group.reflection_count,
        "character_trivial": cfg.group.character_trivial,
        "class_label": cfg.class_label,
        "curves": report["curves"],
        "intersection_matrix": cfg.matrix,
        "graphs": report["graphs"],
    }
    return cubic_to_text(f), entry


def main() -> int:
    ap = argparse.ArgumentParser()
    ap.add_argument("--check", action="store_true", help="compare with the shipped files instead of writing")
    args = ap.parse_args()
    files: dict[str, str] = {}
    expected = {}
    for fam in catalog.FAMILIES.values():
        text, entry = freeze_one(fam)
        files[f"{fam.slug}.cubic"] = text
        expected[fam.id] = entry
        print(f"{fam.id:<20} n_S={entry['n_S']:<3} order={entry['order']}")
    files["expected.json"] = dumps(expected)
    if args.check:
        stale = [name for name, text in files.items() if not (DATA / name).exists() or (DATA / name).read_text() != text]
        if stale:
            print("stale:", ", ".join(stale))
            return 1
        print("catalog data up to date")
        return 0
    DATA.mkdir(parents=True, exist_ok=True)
    for name, text in files.items():
        (DATA / name).write_text(text)
    print(f"wrote {len(files)} files to {DATA}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
