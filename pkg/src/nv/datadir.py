"""Location of the packaged data files (codes, tables, cases)."""

import json
import os
from pathlib import Path


def data_dir():
    env = os.environ.get("NV_DATA_DIR")
    if env:
        return Path(env)
    return Path(__file__).resolve().parents[2] / "data"


def load_manifest(base=None):
    base = Path(base) if base else data_dir()
    path = base / "manifest.json"
    if not path.exists():
        return {}
    with open(path) as fh:
        return json.load(fh)
