"""
Shared writers for JSON reports and CSV / plain-text tables
"""

import hashlib
import json
import os

import pandas as pd
from pydantic import BaseModel

TABLE_FORMATS = ('csv', 'text')


def to_jsonable(report):
    if isinstance(report, BaseModel):
        return report.model_dump(mode='json')
    if isinstance(report, (list, tuple)):
        return [to_jsonable(r) for r in report]
    if isinstance(report, dict):
        return {k: to_jsonable(v) for k, v in report.items()}
    return report


def write_json(report, path):
    os.makedirs(os.path.dirname(os.path.abspath(path)), exist_ok=True)
    with open(path, 'w', encoding='utf-8') as f:
        json.dump(to_jsonable(report), f, indent=2, sort_keys=True)
        f.write('\n')
    return path


def write_table(frame: pd.DataFrame, path, fmt='csv'):
    """CSV by default; 'text' writes an aligned panel for eyeballing"""
    if fmt not in TABLE_FORMATS:
        raise ValueError(f"unknown table format {fmt!r}")
    os.makedirs(os.path.dirname(os.path.abspath(path)), exist_ok=True)
    if fmt == 'csv':
        frame.to_csv(path, index=False, encoding='utf-8', lineterminator='\n')
    else:
        with open(path, 'w', encoding='utf-8') as f:
            f.write(frame.to_string(index=False, na_rep='---'))
            f.write('\n')
    return path


def file_digest(path) -> str:
    sha = hashlib.sha256()
    with open(path, 'rb') as f:
        for block in iter(lambda: f.read(1 << 16), b''):
            sha.update(block)
    return sha.hexdigest()
