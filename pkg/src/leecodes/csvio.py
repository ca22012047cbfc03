"""CSV output with a provenance comment line, and comment-tolerant reading."""

import csv


def write_csv(path, columns, rows, seed=None):
    """Write rows (dicts) with a header and a '# leecodes <version> seed=...' comment."""
    from . import __version__
    with open(path, "w", newline="") as fh:
        tag = f"# leecodes {__version__}"
        if seed is not None:
            tag += f" seed={seed}"
        fh.write(tag + "\n")
        writer = csv.DictWriter(fh, fieldnames=columns, extrasaction="ignore")
        writer.writeheader()
        for row in rows:
            writer.writerow(row)


def read_csv(path):
    """Read a CSV written by write_csv; returns (columns, list of dict rows)."""
    with open(path, newline="") as fh:
        lines = [ln for ln in fh if not ln.startswith("#")]
    reader = csv.DictReader(lines)
    return list(reader.fieldnames or []), [dict(r) for r in reader]
