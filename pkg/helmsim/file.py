# helmsim/file.py
"""File operation utilities for trajectory, report and plot-data export."""

import csv
import json
import math
import os

import numpy as np

SIGNIFICANT_DIGITS = 9


def format_float(f_value):
    """
    Render a number with 9 significant digits, decimal dot.

    Args:
        f_value (float): Value to render

    Returns:
        str: Formatted value ('nan'/'inf' passed through)
    """
    f_value = float(f_value)
    if not math.isfinite(f_value):
        return repr(f_value)
    f_text = f"{f_value:.{SIGNIFICANT_DIGITS}g}"
    return "0" if f_text == "-0" else f_text


def round_float(f_value):
    """Round a float to 9 significant digits, keeping it a float."""
    return float(format_float(f_value))


def _stable(f_obj):
    # floats and numpy scalars rounded, containers walked
    if isinstance(f_obj, (bool, np.bool_)):
        return bool(f_obj)
    if isinstance(f_obj, (int, np.integer)):
        return int(f_obj)
    if isinstance(f_obj, (float, np.floating)):
        return round_float(f_obj)
    if isinstance(f_obj, dict):
        return {str(f_k): _stable(f_v) for f_k, f_v in f_obj.items()}
    if isinstance(f_obj, (list, tuple, np.ndarray)):
        return [_stable(f_v) for f_v in f_obj]
    return f_obj


def write_rows_csv(f_rows, f_target_file, f_fieldnames=None):
    """
    Write a list of dictionaries to CSV file.

    Args:
        f_rows (list): List of dictionaries with data
        f_target_file (str): Target CSV file path
        f_fieldnames (list): Column order; defaults to the keys of the first row
    """
    if f_fieldnames is None:
        f_fieldnames = list(f_rows[0].keys())
    with open(f_target_file, 'w', encoding='UTF-8', newline='') as f_fileobject:
        f_writer = csv.DictWriter(f_fileobject, delimiter=',', fieldnames=f_fieldnames,
                                  lineterminator='\n')
        f_writer.writeheader()
        for f_row in f_rows:
            f_writer.writerow({
                f_k: format_float(f_v) if isinstance(f_v, (float, np.floating)) else f_v
                for f_k, f_v in f_row.items()
            })
    os.chmod(f_target_file, 0o644)


def write_json(f_content, f_target_file):
    """
    Write a JSON document with byte-stable formatting.

    Args:
        f_content (dict): JSON-serialisable data (numpy scalars allowed)
        f_target_file (str): Target JSON file path
    """
    with open(f_target_file, 'w', encoding='UTF-8', newline='') as f_fileobject:
        json.dump(_stable(f_content), f_fileobject, indent=2, sort_keys=True)
        f_fileobject.write("\n")
    os.chmod(f_target_file, 0o644)


def dumps_json(f_content):
    """Serialise to the same stable JSON text as write_json()."""
    return json.dumps(_stable(f_content), indent=2, sort_keys=True) + "\n"
