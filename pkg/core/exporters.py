"""CSV and JSON writers shared by every ``pme`` subcommand.

CSV files have a header row, comma separators and LF line endings. Floats
are written with ``repr`` so identical runs give byte-identical files.
"""
import csv
import json
import logging
import sys
from contextlib import contextmanager
from pathlib import Path

import numpy as np
from rest_framework.renderers import JSONRenderer

from .rng import lab_setting
from .serializers import VerifyReportSerializer

logger = logging.getLogger(__name__)

FORMATS = ('csv', 'json')
REPORT_COLUMNS = ('check', 'params', 'value', 'tolerance', 'pass', 'seed', 'n_samples')


@contextmanager
def open_output(path=None, stdout=None):
    """Yield a text stream for ``path``, relative paths resolved against OUTPUT_DIR.

    Without a path the stream is ``stdout``, or sys.stdout.
    """
    if not path or path == '-':
        yield stdout or sys.stdout
        return
    path = Path(path)
    if not path.is_absolute():
        path = Path(lab_setting('OUTPUT_DIR')) / path
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open('w', newline='', encoding='utf-8') as handle:
        yield handle
    logger.debug('Wrote %s', path)


def _cell(value):
    if isinstance(value, (np.floating, float)):
        return repr(float(value))
    if isinstance(value, (np.integer, int)) and not isinstance(value, bool):
        return str(int(value))
    if isinstance(value, (dict, list)):
        return json.dumps(value, sort_keys=True, default=_json_default)
    return '' if value is None else str(value)


def _json_default(value):
    if hasattr(value, 'tolist'):
        return value.tolist()
    raise TypeError(f'{type(value).__name__} is not JSON serializable')


def render_json(data):
    return JSONRenderer().render(data, renderer_context={'indent': 2}).decode('utf-8') + '\n'


def write_rows(stream, rows, columns, fmt='csv'):
    """Write ``rows`` (a sequence of dicts) with the given column order."""
    if fmt not in FORMATS:
        raise ValueError(f'Unknown format {fmt!r}')
    if fmt == 'json':
        stream.write(render_json([{key: row.get(key) for key in columns} for row in rows]))
        return
    writer = csv.writer(stream, lineterminator='\n')
    writer.writerow(columns)
    for row in rows:
        writer.writerow([_cell(row.get(key)) for key in columns])


def write_columns(stream, columns, fmt='csv'):
    """Write equally long arrays as a table; ``columns`` maps header to array."""
    names = list(columns)
    arrays = [np.asarray(columns[name]) for name in names]
    rows = [dict(zip(names, values)) for values in zip(*(a.tolist() for a in arrays))]
    write_rows(stream, rows, names, fmt)


def report_rows(reports):
    return VerifyReportSerializer(reports, many=True).data


def write_reports(stream, reports, fmt='csv'):
    write_rows(stream, report_rows(reports), REPORT_COLUMNS, fmt)


def write_record(stream, record, fmt='json'):
    """Write one flat dict, as a JSON object or a one-row CSV."""
    if fmt == 'json':
        stream.write(render_json(record))
    else:
        write_rows(stream, [record], list(record), fmt)
