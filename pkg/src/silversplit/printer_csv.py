import csv
import math
import numbers

import numpy as np


def _cell(value):
    # numpy scalars repr as np.float64(...) and np.True_, so normalise to builtins first
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, numbers.Integral):
        return int(value)
    if isinstance(value, numbers.Real):
        value = float(value)
        if math.isnan(value):
            return "nan"
        return repr(value)
    return value


class TablePrinter:
    """Writes a list of flat row dicts as CSV, columns in first-row order."""

    def __init__(self, fh, rows, header=None):
        rows = list(rows)
        fieldnames = header or (list(rows[0].keys()) if rows else [])
        writer = csv.DictWriter(fh, fieldnames=fieldnames, lineterminator="\n", extrasaction="ignore")
        writer.writeheader()
        for row in rows:
            writer.writerow({k: _cell(row.get(k)) for k in fieldnames})
