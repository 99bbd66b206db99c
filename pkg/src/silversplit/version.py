#!/usr/bin/env python3

import subprocess
from pathlib import Path

THIS_DIR = Path(__file__).resolve().parent
VERSION_FILE = THIS_DIR/"VERSION"
DEFAULT_PREFIX = "silversplit"

# bump when the layout of JSON reports changes
REPORT_SCHEMA = "silversplit-report/1"

__all__ = ["VERSION", "VERSION_NUMBER", "REPORT_SCHEMA", "version_tuple"]


def version_tuple(v):
    # "silversplit-1.2.3" -> (1, 2, 3); unparseable tags sort last
    try:
        number = v.partition("-")[-1]
        return tuple(int(i) for i in number.split("+")[0].split("."))
    except ValueError:
        return (-1, -1, -1, v)


def read_file_version():
    return VERSION_FILE.read_text().strip()


def git_version():
    p = subprocess.run(
        ["git", "describe", "--tags"],
        cwd=THIS_DIR, capture_output=True, text=True,
    )
    if p.returncode:
        raise RuntimeError("no git tag reachable")
    return p.stdout.strip()


def version():
    for getter in (git_version, read_file_version):
        try:
            return f"{DEFAULT_PREFIX}-{getter()}"
        except (OSError, RuntimeError):
            continue
    return f"{DEFAULT_PREFIX}-0.0.0"


VERSION = version()
VERSION_NUMBER = VERSION.partition("-")[-1]


if __name__ == "__main__":
    print(VERSION)
