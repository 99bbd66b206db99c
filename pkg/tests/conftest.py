import os
import sys
import csv
import json
import atexit
import shlex
import shutil
from pathlib import Path

import silversplit.__main__


TEST_DIR = Path(__file__).resolve().parent
SILVERSPLIT_DIR = TEST_DIR.parent
TMP_DIR = TEST_DIR/"tmp"

CLEANUP_OK = bool(int(os.environ.get("CLEANUP_OK", "1")))
SLOW = bool(int(os.environ.get("SILVERSPLIT_SLOW", "0")))


def _remove_tmpdir():
    if TMP_DIR.exists(): shutil.rmtree(TMP_DIR)

def _init_tmpdir():
    _remove_tmpdir()
    TMP_DIR.mkdir()

_init_tmpdir()
if CLEANUP_OK: atexit.register(_remove_tmpdir)


def silversplit_wrapper(args, echo=True):
    args = [str(a) for a in args]
    if echo:
        str_args = ' '.join([shlex.quote(a) for a in ["silversplit", *args]])
        print(str_args, file=sys.stderr)
    return silversplit.__main__.main(args)


COUNTER = 0

def tmp_path_for(name, suffix):
    global COUNTER; COUNTER += 1
    return TMP_DIR/f"{name}_{COUNTER:02d}.{suffix}"


def run_command(command, args=(), fmt="csv"):
    """
    Run one subcommand with output redirected to a temp file.
    Returns (exit code, parsed output): a list of row dicts for csv, the report dict for json.
    """
    tmp_out = tmp_path_for(command.replace("-", "_"), fmt)
    code = silversplit_wrapper([command, *args, "--format", fmt, "-o", tmp_out, "--quiet"])
    content = None
    try:
        if tmp_out.exists():
            text = tmp_out.read_text(encoding="utf-8")
            if fmt == "csv":
                content = list(csv.DictReader(text.splitlines()))
            else:
                content = json.loads(text)
    finally:
        if CLEANUP_OK and tmp_out.exists():
            tmp_out.unlink()
    return code, content


def write_phases(records):
    path = tmp_path_for("phases", "json")
    path.write_text(json.dumps(records), encoding="utf-8")
    return path
