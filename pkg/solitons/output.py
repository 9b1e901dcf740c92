"""
CSV profiles and JSON summaries on disk.

CSV: header row, ',' delimiter, '%.17g' (locale independent, exact float
round trip), '\n' line endings. JSON: DRF JSONRenderer, indent 2,
trailing newline.
"""

from pathlib import Path
import logging
import math

import numpy as np
from rest_framework.exceptions import ParseError
from rest_framework.parsers import JSONParser
from rest_framework.renderers import JSONRenderer

from .conf import solver_setting
from .exceptions import GridError, ValidationFailure
from .grid import Grid, GridFunction


logger = logging.getLogger(__name__)


JSON = 'json'
CSV = 'csv'
BOTH = 'both'
FORMATS = (JSON, CSV, BOTH)


def output_stem(out=None, default_name='run'):
    """
    Path without suffix that both files hang off. `out` may name a
    directory, a stem, or a file with a .json/.csv suffix.
    """
    if out is None:
        path = Path(solver_setting('OUTPUT_DIR')) / default_name
    else:
        path = Path(out)
        if path.is_dir():
            path = path / default_name
        elif path.suffix in ('.json', '.csv'):
            path = path.with_suffix('')
    path.parent.mkdir(parents=True, exist_ok=True)
    return path


def wants(fmt, kind):
    return fmt == BOTH or fmt == kind


def write_csv(path, columns):
    """
    columns: mapping of header name to equally long 1-d arrays.
    """
    path = Path(path)
    names = list(columns)
    data = np.column_stack([np.asarray(columns[name], dtype=float) for name in names])
    np.savetxt(path, data, fmt='%.17g', delimiter=',', header=','.join(names), comments='', newline='\n')
    logger.info("Wrote %s", path)
    return path


def write_profile_csv(path, f, name='f'):
    return write_csv(path, {'x': f.grid.nodes, name: f.values})


def render_json(data):
    return JSONRenderer().render(data, renderer_context={'indent': 2}) + b'\n'


def write_summary_json(path, data):
    path = Path(path)
    path.write_bytes(render_json(data))
    logger.info("Wrote %s", path)
    return path


def write_outputs(stem, fmt, summary=None, columns=None):
    """
    Write <stem>.json and/or <stem>.csv as `fmt` asks; returns the paths.
    """
    written = []
    if summary is not None and wants(fmt, JSON):
        written.append(write_summary_json(stem.with_suffix('.json'), summary))
    if columns is not None and wants(fmt, CSV):
        written.append(write_csv(stem.with_suffix('.csv'), columns))
    return written


def read_profile(csv_path):
    """
    Read an (x, value) profile written by write_profile_csv back onto its grid.
    """
    csv_path = Path(csv_path)
    try:
        data = np.loadtxt(csv_path, delimiter=',', skiprows=1, ndmin=2)
    except (OSError, ValueError) as error:
        raise ValidationFailure(f"Could not read profile {csv_path}: {error}") from error
    if data.shape[1] != 2:
        raise ValidationFailure(f"{csv_path} must have two columns, found {data.shape[1]}.")

    x = data[:, 0]
    half_length = -float(x[0])
    l = round(math.log2(half_length)) if half_length > 0 else -1
    if l < 0 or 2.0 ** l != half_length:
        raise GridError(f"{csv_path} does not start at x = -2^l (first node {x[0]!r}).")
    grid = Grid(l=l, n=len(x))
    if not np.allclose(x, grid.nodes, rtol=0.0, atol=1e-12 * grid.L):
        raise GridError(f"The nodes in {csv_path} are not the uniform grid l={l}, n={len(x)}.")
    return GridFunction(grid, data[:, 1])


def read_summary(json_path):
    """
    Parse and validate a solve summary; returns the validated dict.
    """
    # serializers imports FORMATS from this module
    from .serializers import StoredSummarySerializer

    json_path = Path(json_path)
    try:
        with json_path.open('rb') as stream:
            data = JSONParser().parse(stream)
    except (OSError, ParseError) as error:
        raise ValidationFailure(f"Could not read summary {json_path}: {error}") from error

    serializer = StoredSummarySerializer(data=data)
    if not serializer.is_valid():
        raise ValidationFailure(f"Invalid summary {json_path}: {dict(serializer.errors)}")
    return serializer.validated_data
