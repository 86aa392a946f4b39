import os
import csv
import json
import os.path as osp
import numpy as np
from tabulate import tabulate


def to_builtin(obj):
    # numpy scalars/arrays -> plain python for json
    if isinstance(obj, dict):
        return {str(k): to_builtin(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_builtin(v) for v in obj]
    if isinstance(obj, np.ndarray):
        if np.iscomplexobj(obj):
            return [[float(v.real), float(v.imag)] for v in obj.ravel()]
        return to_builtin(obj.tolist())
    if isinstance(obj, (np.bool_, bool)):
        return bool(obj)
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, (np.floating, float)):
        val = float(obj)
        if val != val or val in (float('inf'), float('-inf')):
            return repr(val)
        return val
    if isinstance(obj, complex):
        return [obj.real, obj.imag]
    return obj

def flatten(report, prefix=''):
    
    flat = {}
    for key, value in report.items():
        name = '%s/%s' % (prefix, key) if prefix else str(key)
        if isinstance(value, dict):
            flat.update(flatten(value, name))
        else:
            flat[name] = value
    return flat

def write_report(report, path, fmt='json'):
    """Write a report as JSON (sorted keys) or CSV.

    CSV output has one row per record when the report holds a ``records``
    list, otherwise a single row of ``group/key`` columns.
    """
    
    if osp.dirname(path) and not osp.exists(osp.dirname(path)):
        os.makedirs(osp.dirname(path))
    
    report = to_builtin(report)
    if fmt == 'json':
        with open(path, 'w') as f:
            json.dump(report, f, indent=2, sort_keys=True)
            f.write('\n')
    elif fmt == 'csv':
        rows = report.get('records') if isinstance(report.get('records'), list) else None
        if rows is None:
            rows = [report]
        rows = [flatten(r) for r in rows]
        header = sorted(set(k for r in rows for k in r.keys()))
        with open(path, 'w', newline='') as f:
            writer = csv.writer(f)
            writer.writerow(header)
            for r in rows:
                writer.writerow([json.dumps(r[k]) if isinstance(r.get(k), list) else r.get(k, '') for k in header])
    else:
        raise ValueError('Only json and csv report formats are supported.')
    
    return path

def print_table(records, keys, floatfmt='.3e'):
    
    table = [[r.get(k) for k in keys] for r in records]
    print(tabulate(table, headers=keys, floatfmt=floatfmt))

def relative_residual(a, b):
    """||a - b|| / max(||a||, ||b||), Frobenius for matrices, 0 when both vanish."""
    
    def norm(x):
        if hasattr(x, "toarray"):
            return np.sqrt(abs(x.multiply(x).sum()))
        return np.linalg.norm(np.asarray(x))
    
    scale = max(norm(a), norm(b))
    if scale == 0:
        return 0.0
    return float(norm(a - b) / scale)
