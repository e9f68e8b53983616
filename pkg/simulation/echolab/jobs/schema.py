"""
Experiment configuration: plain-text `key = value` files validated with marshmallow.

One key per line; `#` starts a comment. Every error is reported with the
line number of the offending key.
"""
import logging
import math
import re
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path

from marshmallow import (
    RAISE,
    Schema,
    fields,
    post_load,
    pre_load,
    validate,
    validates,
    validates_schema,
)
from marshmallow import ValidationError as SchemaError

from echolab.analysis.fitting import WindowPolicy
from echolab.echo.engine import EchoRunSpec, default_times
from echolab.errors import ConfigError
from echolab.preparation.ensembles import Rho2Kind, Rho2Spec
from echolab.preparation.wavepacket import WavepacketSpec
from echolab.quantum.params import DEFAULT_PHASE_OFFSET, ModelParams, is_power_of_two

logger = logging.getLogger(__name__)

FIG1_DEFAULT_N = 256
FIG1_FULL_N = 1024
FIG1_SIGMA1 = 0.0018
FIG1_EPS_VALUES = (0.0, 0.0018, 0.0037)

_LINE = re.compile(r'^\s*([A-Za-z_][A-Za-z0-9_]*)\s*=\s*(.*?)\s*$')
_RANGE = re.compile(r'^(\d+)\s*\.\.\s*(\d+)(?:\s*:\s*(\d+))?$')


class ExperimentKind(str, Enum):
    ECHO_CURVE = 'echo_curve'
    LOSCHMIDT_CURVE = 'loschmidt_curve'
    SIGMA_SWEEP = 'sigma_sweep'
    EPS_SWEEP = 'eps_sweep'
    K2_INDEPENDENCE = 'k2_independence'
    LYAPUNOV = 'lyapunov'
    GAMMA_ESTIMATE = 'gamma_estimate'
    FIG1_REPRO = 'fig1_repro'


CURVE_KINDS = {
    ExperimentKind.ECHO_CURVE, ExperimentKind.LOSCHMIDT_CURVE, ExperimentKind.SIGMA_SWEEP,
    ExperimentKind.EPS_SWEEP, ExperimentKind.K2_INDEPENDENCE, ExperimentKind.FIG1_REPRO,
}


def parse_times(text):
    """
    Measurement-time grammar.

    `default`, `a..b`, `a..b:step` or a comma list of integers.
    """
    text = text.strip()
    if text == 'default':
        return 'default'
    match = _RANGE.match(text)
    if match:
        start, stop = int(match.group(1)), int(match.group(2))
        step = int(match.group(3)) if match.group(3) else 1
        if step < 1 or stop < start:
            raise SchemaError(f"Empty time range '{text}'")
        return tuple(range(start, stop + 1, step))
    try:
        return tuple(int(part) for part in text.split(','))
    except ValueError:
        raise SchemaError(f"Invalid times '{text}': expected default, a..b, a..b:step or a list")


class TimesField(fields.Field):
    def _deserialize(self, value, attr, data, **kwargs):
        return parse_times(str(value))

    def _serialize(self, value, attr, obj, **kwargs):
        return ','.join(str(t) for t in value)


class FloatList(fields.Field):
    """Comma-separated floats."""

    def _deserialize(self, value, attr, data, **kwargs):
        try:
            values = tuple(float(part) for part in str(value).split(','))
        except ValueError:
            raise SchemaError(f"Invalid number list '{value}'")
        if not all(math.isfinite(v) for v in values):
            raise SchemaError("List values must be finite")
        return values


class ExperimentSchema(Schema):
    class Meta:
        unknown = RAISE
        ordered = True

    experiment = fields.String(required=True, validate=validate.OneOf([k.value for k in ExperimentKind]))
    seed = fields.Integer(load_default=0, validate=validate.Range(min=0, max=2 ** 64 - 1))
    output = fields.String(load_default=None)

    # Model
    N = fields.Integer(load_default=64)
    K1 = fields.Float(load_default=10.09)
    K2 = fields.Float(load_default=10.09)
    sigma1 = fields.Float(load_default=0.0)
    sigma2 = fields.Float(load_default=0.0)
    eps_f = fields.Float(load_default=0.0, validate=validate.Range(min=0.0))
    eps_b = fields.Float(load_default=None, validate=validate.Range(min=0.0))
    phase_offset = fields.Float(load_default=DEFAULT_PHASE_OFFSET)
    T = fields.Float(load_default=1.0, validate=validate.Range(min=0.0, min_inclusive=False))

    # Initial states
    psi1_r0 = fields.Float(load_default=math.pi)
    psi1_p0 = fields.Float(load_default=math.pi)
    psi1_sigma_x = fields.Float(load_default=None, validate=validate.Range(min=0.0, min_inclusive=False))
    randomize_center = fields.Boolean(load_default=True)
    rho2_kind = fields.String(load_default=Rho2Kind.RANDOM_PURE.value,
                              validate=validate.OneOf([k.value for k in Rho2Kind]))
    rho2_r0 = fields.Float(load_default=math.pi)
    rho2_p0 = fields.Float(load_default=math.pi)
    rho2_sigma_x = fields.Float(load_default=None, validate=validate.Range(min=0.0, min_inclusive=False))
    rho2_weights = FloatList(load_default=None)
    rho2_beta = fields.Float(load_default=None, allow_nan=True)
    rho2_samples = fields.Integer(load_default=None, validate=validate.Range(min=1))
    rho2_seed = fields.Integer(load_default=None, validate=validate.Range(min=0, max=2 ** 64 - 1))

    # Protocol
    times = TimesField(load_default=None)
    t_max = fields.Integer(load_default=100, validate=validate.Range(min=0))
    realizations = fields.Integer(load_default=10, validate=validate.Range(min=0))

    # Sweeps
    sigma1_values = FloatList(load_default=None)
    eps_values = FloatList(load_default=None)
    k2_values = FloatList(load_default=None)
    sigma2_values = FloatList(load_default=None)

    # Classical reference
    n_traj = fields.Integer(load_default=1000, validate=validate.Range(min=1))
    t_steps = fields.Integer(load_default=10_000, validate=validate.Range(min=1))
    transient = fields.Integer(load_default=100, validate=validate.Range(min=0))
    max_lag = fields.Integer(load_default=10, validate=validate.Range(min=0))

    # Analysis
    window_upper = fields.Float(load_default=0.8, validate=validate.Range(min=0.0, max=1.0, min_inclusive=False))
    window_lower_factor = fields.Float(load_default=10.0, validate=validate.Range(min=0.0))
    window_t_lo = fields.Integer(load_default=None, validate=validate.Range(min=0))
    window_t_hi = fields.Integer(load_default=None, validate=validate.Range(min=0))
    tail_fraction = fields.Float(load_default=0.25, validate=validate.Range(min=0.0, max=1.0, min_inclusive=False))

    @pre_load
    def apply_kind_defaults(self, data, **kwargs):
        if data.get('experiment') == ExperimentKind.FIG1_REPRO.value:
            data = dict(data)
            data.setdefault('N', str(FIG1_DEFAULT_N))
            data.setdefault('sigma1', str(FIG1_SIGMA1))
        return data

    @validates('N')
    def validate_n(self, value, **kwargs):
        if not is_power_of_two(value):
            raise SchemaError(f"N must be a power of two >= 2, got {value}")

    @validates('rho2_beta')
    def validate_beta(self, value, **kwargs):
        if value is not None and (math.isnan(value) or value < 0):
            raise SchemaError("rho2_beta must be >= 0 (inf allowed)")

    @validates('times')
    def validate_times(self, value, **kwargs):
        if value == 'default' or value is None:
            return
        if any(t < 0 for t in value):
            raise SchemaError("Measurement times must be non-negative")
        if any(b <= a for a, b in zip(value, value[1:])):
            raise SchemaError("Measurement times must be strictly increasing")

    @validates_schema
    def validate_kind_requirements(self, data, **kwargs):
        kind = ExperimentKind(data['experiment'])
        required = {
            ExperimentKind.SIGMA_SWEEP: 'sigma1_values',
            ExperimentKind.EPS_SWEEP: 'eps_values',
        }.get(kind)
        if required and not data.get(required):
            raise SchemaError(f"{kind.value} needs {required}", field_name=required)
        if kind is ExperimentKind.K2_INDEPENDENCE and not (data.get('k2_values') or data.get('sigma2_values')):
            raise SchemaError("k2_independence needs k2_values or sigma2_values", field_name='k2_values')
        if data.get('rho2_kind') == Rho2Kind.THERMAL.value and data.get('rho2_beta') is None:
            raise SchemaError("thermal rho2 needs rho2_beta", field_name='rho2_beta')
        lo, hi = data.get('window_t_lo'), data.get('window_t_hi')
        if lo is not None and hi is not None and hi < lo:
            raise SchemaError("window_t_hi must not precede window_t_lo", field_name='window_t_hi')

    @post_load
    def resolve(self, data, **kwargs):
        if data['times'] is None or data['times'] == 'default':
            data['times'] = default_times(data['t_max'])
        data['t_max'] = max(data['times'])
        if data['eps_b'] is None:
            data['eps_b'] = data['eps_f']
        if data['rho2_seed'] is None:
            data['rho2_seed'] = data['seed']
        if data['rho2_samples'] is None:
            data['rho2_samples'] = max(data['realizations'], 1)
        if ExperimentKind(data['experiment']) is ExperimentKind.FIG1_REPRO and data['eps_values'] is None:
            data['eps_values'] = FIG1_EPS_VALUES
        return data


# Output order of keys in a resolved config
KEY_ORDER = tuple(ExperimentSchema._declared_fields)


def _format_value(value):
    if isinstance(value, bool):
        return 'true' if value else 'false'
    if isinstance(value, float):
        return repr(value)
    if isinstance(value, (tuple, list)):
        return ','.join(_format_value(v) for v in value)
    return str(value)


@dataclass
class ExperimentConfig:
    """A validated experiment config with builders for the run objects."""
    values: dict
    source: Path = None
    lines: dict = field(default_factory=dict)

    def __getattr__(self, name):
        values = self.__dict__.get('values', {})
        if name in values:
            return values[name]
        raise AttributeError(name)

    @property
    def kind(self):
        return ExperimentKind(self.values['experiment'])

    def model_params(self, **overrides):
        v = self.values
        params = ModelParams(
            N=v['N'], K1=v['K1'], K2=v['K2'], sigma1=v['sigma1'], sigma2=v['sigma2'],
            eps_f=v['eps_f'], eps_b=v['eps_b'], phase_offset=v['phase_offset'], T=v['T'],
        )
        return params.with_updates(**overrides) if overrides else params

    def psi1_spec(self):
        v = self.values
        return WavepacketSpec(r0=v['psi1_r0'], p0=v['psi1_p0'], sigma_x=v['psi1_sigma_x'])

    def rho2_spec(self):
        v = self.values
        kind = Rho2Kind(v['rho2_kind'])
        wavepacket = None
        if kind is Rho2Kind.WAVEPACKET:
            wavepacket = WavepacketSpec(r0=v['rho2_r0'], p0=v['rho2_p0'], sigma_x=v['rho2_sigma_x'])
        return Rho2Spec(
            kind=kind, wavepacket=wavepacket, weights=v['rho2_weights'], beta=v['rho2_beta'],
            sample_count=v['rho2_samples'], seed=v['rho2_seed'],
        )

    def run_spec(self, params=None):
        v = self.values
        return EchoRunSpec(
            params=params or self.model_params(),
            psi1=self.psi1_spec(),
            rho2=self.rho2_spec(),
            times=v['times'],
            realizations=v['realizations'],
            seed=v['seed'],
            randomize_center=v['randomize_center'],
        )

    def window_policy(self):
        v = self.values
        return WindowPolicy(
            upper=v['window_upper'], lower_factor=v['window_lower_factor'],
            t_lo=v['window_t_lo'], t_hi=v['window_t_hi'],
        )

    def with_values(self, **changes):
        """Copy with resolved values replaced (cli overrides)."""
        return ExperimentConfig(values={**self.values, **changes}, source=self.source, lines=self.lines)

    def to_text(self):
        """Resolved config in the input format; parses back to the same values."""
        lines = []
        for key in KEY_ORDER:
            value = self.values.get(key)
            if value is None:
                continue
            lines.append(f"{key} = {_format_value(value)}")
        return '\n'.join(lines) + '\n'


def parse_config_text(text, source=None):
    """
    Parse and validate config text.

    Raises:
        ConfigError: malformed line, duplicate key or invalid value, with its line number
    """
    raw, lines = {}, {}
    for number, line in enumerate(text.splitlines(), start=1):
        content = line.split('#', 1)[0].strip()
        if not content:
            continue
        match = _LINE.match(content)
        if not match:
            raise ConfigError(f"expected 'key = value', got {content!r}", line=number)
        key, value = match.group(1), match.group(2)
        if key in raw:
            raise ConfigError(f"duplicate key '{key}' (first set on line {lines[key]})", line=number, key=key)
        if value == '':
            raise ConfigError(f"empty value for '{key}'", line=number, key=key)
        raw[key], lines[key] = value, number

    try:
        values = ExperimentSchema().load(raw)
    except SchemaError as e:
        raise _config_error(e.messages, lines)

    return ExperimentConfig(values=values, source=Path(source) if source else None, lines=lines)


def _config_error(messages, lines):
    """First schema error in file order, as a ConfigError."""
    if not isinstance(messages, dict):
        return ConfigError(str(messages))

    def position(item):
        return lines.get(item[0], math.inf)

    key, problems = min(messages.items(), key=position)
    problem = problems[0] if isinstance(problems, list) else problems
    if problem == 'Unknown field.':
        problem = 'unknown key'
    return ConfigError(
        f"{key}: {problem}",
        line=lines.get(key),
        key=key,
        details={'errors': messages},
    )


def load_config(path):
    """Read and validate a config file."""
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as e:
        raise ConfigError(f"cannot read config {path}: {e.strerror}")
    logger.debug(f"Loading config {path}")
    return parse_config_text(text, source=path)
