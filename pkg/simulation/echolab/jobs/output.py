"""
Result files: curve.csv, samples.csv, sweep.csv, fit.txt and meta.txt.
"""
import logging
from pathlib import Path

from echolab import __version__

logger = logging.getLogger(__name__)

CURVE_HEADER = 't,mean,stderr,realizations'
SWEEP_HEADER = 'strength,rate,rate_error'
CSV_PRECISION = 17


def format_number(value, precision=CSV_PRECISION):
    return f"{value:.{precision}g}"


def _write(path, text):
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text)
    logger.debug(f"Wrote {path}")
    return path


def write_curve_csv(path, curve, precision=CSV_PRECISION):
    """`t,mean,stderr,realizations` rows at full precision."""
    rows = [CURVE_HEADER]
    for t, mean, stderr in zip(curve.times, curve.mean, curve.stderr):
        rows.append(
            f"{int(t)},{format_number(mean, precision)},{format_number(stderr, precision)},{curve.realizations}"
        )
    return _write(path, '\n'.join(rows) + '\n')


def write_samples_csv(path, curve, precision=CSV_PRECISION):
    """Per-realization echo values, one row per realization."""
    rows = ['realization,' + ','.join(f"t{int(t)}" for t in curve.times)]
    for index, values in enumerate(curve.samples):
        rows.append(f"{index}," + ','.join(format_number(v, precision) for v in values))
    return _write(path, '\n'.join(rows) + '\n')


def write_sweep_csv(path, points, precision=CSV_PRECISION):
    """
    Args:
        points: iterable of (strength, rate, rate_error)
    """
    rows = [SWEEP_HEADER]
    for strength, rate, error in points:
        rows.append(','.join(format_number(v, precision) for v in (strength, rate, error)))
    return _write(path, '\n'.join(rows) + '\n')


def read_curve_csv(path):
    """(times, mean, stderr, realizations) columns of a curve.csv."""
    lines = Path(path).read_text().splitlines()
    if not lines or lines[0] != CURVE_HEADER:
        raise ValueError(f"{path} does not start with '{CURVE_HEADER}'")
    columns = ([], [], [], [])
    for line in lines[1:]:
        t, mean, stderr, realizations = line.split(',')
        columns[0].append(int(t))
        columns[1].append(float(mean))
        columns[2].append(float(stderr))
        columns[3].append(int(realizations))
    return columns


def _format_field(value):
    if isinstance(value, float):
        return format_number(value, 10)
    if isinstance(value, (tuple, list)):
        return '[' + ', '.join(_format_field(v) for v in value) + ']'
    if value is None:
        return 'n/a'
    return str(value)


def write_fit_report(path, sections):
    """
    Human-readable report.

    Args:
        sections: list of (title, dict) pairs written as `[title]` blocks
    """
    lines = []
    for title, entries in sections:
        lines.append(f"[{title}]")
        for key, value in entries.items():
            lines.append(f"{key}: {_format_field(value)}")
        lines.append('')
    return _write(path, '\n'.join(lines))


def fit_entries(fit):
    """fit.txt entries of a DecayFit."""
    return {
        'model': fit.model.value,
        'rate': fit.rate,
        'quad_coeff': fit.quad_coeff,
        'uncertainty': fit.uncertainty,
        'prefactor': fit.prefactor,
        'window': list(fit.fit_window),
        'points': fit.n_points,
        'residual_rms': fit.residual_rms,
        'dof': fit.dof,
        'capped': fit.capped,
    }


def write_meta(path, config, derived):
    """
    Resolved config followed by derived values as comments.

    The file parses back as a config.
    """
    lines = [config.to_text().rstrip('\n'), '', f"# version = {__version__}"]
    for key, value in derived.items():
        lines.append(f"# {key} = {_format_field(value)}")
    return _write(path, '\n'.join(lines) + '\n')
