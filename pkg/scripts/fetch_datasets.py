"""Regenerate the bundled sample datasets from the vega-datasets distribution.

Run `npm pack vega-datasets`, unpack the tarball, then:

    python scripts/fetch_datasets.py path/to/package/data

Writes normalized CSVs into src/treescribe/assets/. Normalization: snake_case
headers, ISO-8601 dates, rows with missing values dropped (the loader rejects
empty cells).
"""

import csv
import json
import sys
from datetime import datetime
from pathlib import Path

ASSETS = Path(__file__).resolve().parent.parent / "src" / "treescribe" / "assets"

MONTHS = {m: i + 1 for i, m in enumerate(
    ["Jan", "Feb", "Mar", "Apr", "May", "Jun", "Jul", "Aug", "Sep", "Oct", "Nov", "Dec"])}


def write_penguins(src: Path) -> None:
    records = json.loads((src / "penguins.json").read_text())
    out = []
    for r in records:
        if r["Flipper Length (mm)"] is None or r["Body Mass (g)"] is None:
            continue
        out.append((r["Species"], r["Flipper Length (mm)"], r["Body Mass (g)"]))
    with open(ASSETS / "penguins.csv", "w", newline="") as f:
        w = csv.writer(f)
        w.writerow(["species", "flipper_length_mm", "body_mass_g"])
        w.writerows(out)
    print(f"penguins.csv: {len(out)} rows")


def write_stocks(src: Path) -> None:
    with open(src / "stocks.csv", newline="") as f:
        rows = list(csv.DictReader(f))
    with open(ASSETS / "stocks.csv", "w", newline="") as f:
        w = csv.writer(f)
        w.writerow(["symbol", "date", "price"])
        for r in rows:
            month, day, year = r["date"].split()
            iso = datetime(int(year), MONTHS[month], int(day)).date().isoformat()
            w.writerow([r["symbol"], iso, r["price"]])
    print(f"stocks.csv: {len(rows)} rows")


def write_temperatures(src: Path) -> None:
    with open(src / "seattle-weather.csv", newline="") as f:
        rows = list(csv.DictReader(f))
    kept = [r for r in rows if r["temp_max"] and r["temp_min"]]
    with open(ASSETS / "seattle_temps.csv", "w", newline="") as f:
        w = csv.writer(f)
        w.writerow(["date", "temp_max", "temp_min"])
        for r in kept:
            w.writerow([r["date"], r["temp_max"], r["temp_min"]])
    print(f"seattle_temps.csv: {len(kept)} rows")


def main() -> None:
    if len(sys.argv) != 2:
        sys.exit("usage: fetch_datasets.py <vega-datasets-data-dir>")
    src = Path(sys.argv[1])
    ASSETS.mkdir(parents=True, exist_ok=True)
    write_penguins(src)
    write_stocks(src)
    write_temperatures(src)


if __name__ == "__main__":
    main()
