import json
import math

import attrs
import numpy as np

from silversplit import version


def todict(obj):
    if isinstance(obj, dict):
        return {str(k): todict(v) for k, v in obj.items()}
    elif isinstance(obj, (str, bytes, bool, int)) or obj is None:
        return obj
    elif isinstance(obj, float):
        # JSON has no nan/inf
        return obj if math.isfinite(obj) else str(obj)
    elif isinstance(obj, np.generic):
        return todict(obj.item())
    elif isinstance(obj, np.ndarray):
        return [todict(v) for v in obj.tolist()]
    elif attrs.has(type(obj)):
        data = {
            a.name: todict(getattr(obj, a.name))
            for a in attrs.fields(type(obj)) if not a.name.startswith("_")
        }
        data["Klass"] = type(obj).__name__
        return data
    elif hasattr(obj, "__iter__"):
        return [todict(v) for v in obj]
    elif hasattr(obj, "__dict__"):
        return {k: todict(v) for k, v in vars(obj).items() if not callable(v) and not k.startswith("_")}
    else:
        return obj


class ReportPrinter:
    """Writes a JSON report with schema, tool version and the producing command."""

    def __init__(self, fh, kind, payload, cmd_str):
        report = {
            "schema": version.REPORT_SCHEMA,
            "version": version.VERSION_NUMBER,
            "command": cmd_str,
            "kind": kind,
            "data": todict(payload),
        }
        fh.write(json.dumps(report, sort_keys=True, indent=4))
        fh.write("\n")
