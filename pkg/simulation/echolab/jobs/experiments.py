"""
Experiment jobs: one function per experiment kind.

Each job computes its curves or classical estimates, writes result files
under the output directory and returns a summary dict.
"""
import logging
import math
import time
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from echolab.analysis.fitting import compare_models, fit_exponential, rates_agree
from echolab.analysis.saturation import detect_saturation
from echolab.analysis.scaling import fit_capped_rate, scaling_regression
from echolab.classical.rates import (
    classify_regime,
    gamma_coupling,
    gamma_sigma1,
    predict_decay_rate,
    quoted_rates,
)
from echolab.classical.standard_map import large_k_lyapunov, lyapunov_exponent
from echolab.echo.engine import boltzmann_echo_curve
from echolab.echo.loschmidt import loschmidt_echo_curve
from echolab.errors import EchoLabError, InsufficientDataError, log_error
from echolab.jobs.cost import estimate_cost
from echolab.jobs.output import (
    CSV_PRECISION,
    fit_entries,
    write_curve_csv,
    write_fit_report,
    write_meta,
    write_samples_csv,
    write_sweep_csv,
)
from echolab.jobs.schema import ExperimentKind
from echolab.monitoring.metrics import MetricsCollector

logger = logging.getLogger(__name__)


@dataclass
class RunOptions:
    workers: int = 1
    fft_workers: int = 1
    step_budget: int = None
    precision: int = CSV_PRECISION
    error_stats: object = None


@dataclass
class CurveOutcome:
    label: str
    strength: float
    curve: object
    fit: object = None
    sections: list = field(default_factory=list)


def _label(name, value):
    return f"{name}_{value:g}"


def _curve_sections(curve, config, lyapunov=None):
    """Fit and saturation sections for one curve; returns (sections, exponential fit or None)."""
    policy = config.window_policy()
    sections = []
    fit = None
    try:
        comparison = compare_models(curve, policy, lyapunov=lyapunov)
        fit = comparison.exponential
        sections.append(('exponential', fit_entries(comparison.exponential)))
        sections.append(('gaussian', fit_entries(comparison.gaussian)))
        sections.append(('comparison', {
            'preferred': comparison.preferred.value if comparison.preferred else 'none (residuals within 10%)',
            'residual_ratio_gaussian_over_exponential': comparison.residual_ratio,
        }))
    except InsufficientDataError as e:
        logger.warning(f"No decay fit for {curve.kind} curve: {e.message}", extra={'error_code': e.error_code})
        sections.append(('fit', {'status': 'insufficient data', 'reason': e.message}))

    try:
        saturation = detect_saturation(curve, config.tail_fraction)
        sections.append(('saturation', {
            **saturation.to_dict(),
            'ratio_to_expected': saturation.ratio,
            'matches_expected': saturation.matches_expected(),
        }))
    except InsufficientDataError as e:
        sections.append(('saturation', {'status': 'insufficient data', 'reason': e.message}))

    return sections, fit


def _write_curve(directory, curve, config, options, lyapunov=None):
    directory = Path(directory)
    write_curve_csv(directory / 'curve.csv', curve, options.precision)
    write_samples_csv(directory / 'samples.csv', curve, options.precision)
    sections, fit = _curve_sections(curve, config, lyapunov)
    write_fit_report(directory / 'fit.txt', sections)
    return sections, fit


def _boltzmann(config, params, options):
    return boltzmann_echo_curve(
        config.run_spec(params),
        workers=options.workers,
        step_budget=options.step_budget,
        fft_workers=options.fft_workers,
    )


def echo_curve_job(config, output_dir, options):
    """Single Boltzmann echo curve."""
    curve = _boltzmann(config, config.model_params(), options)
    sections, fit = _write_curve(output_dir, curve, config, options, large_k_lyapunov(config.K1))
    return {
        'curves': 1,
        'rate': fit.rate if fit else None,
        'final_mean': float(curve.mean[-1]),
    }


def loschmidt_curve_job(config, output_dir, options):
    """Single-rotator Loschmidt echo curve at (K1, sigma1)."""
    curve = loschmidt_echo_curve(
        config.N, config.K1, config.sigma1, config.psi1_spec(), config.times,
        realizations=config.realizations, seed=config.seed,
        randomize_center=config.randomize_center, workers=options.workers,
        T=config.T, step_budget=options.step_budget,
    )
    sections, fit = _write_curve(output_dir, curve, config, options, large_k_lyapunov(config.K1))
    return {'curves': 1, 'rate': fit.rate if fit else None, 'final_mean': float(curve.mean[-1])}


def _run_members(config, output_dir, options, members):
    """
    Compute and write one curve per (label, strength, params) member.

    Returns:
        list[CurveOutcome]
    """
    outcomes = []
    lyapunov = large_k_lyapunov(config.K1)
    for label, strength, params in members:
        logger.info(f"Computing member {label}")
        curve = _boltzmann(config, params, options)
        sections, fit = _write_curve(Path(output_dir) / label, curve, config, options, lyapunov)
        outcomes.append(CurveOutcome(label=label, strength=strength, curve=curve, fit=fit, sections=sections))
    return outcomes


def _sweep_points(outcomes):
    return [
        (o.strength, o.fit.rate, o.fit.uncertainty)
        for o in outcomes if o.fit is not None
    ]


def _scaling_section(points):
    usable = [(s, r) for s, r, _ in points if s > 0 and r > 0]
    try:
        return scaling_regression(usable).to_dict()
    except EchoLabError as e:
        return {'status': 'not available', 'reason': e.message}


def _capped_section(points, lyapunov):
    try:
        capped = fit_capped_rate([(s, r) for s, r, _ in points], lyapunov)
    except EchoLabError as e:
        return {'status': 'not available', 'reason': e.message}
    return {
        'coefficient': capped.coefficient,
        'lyapunov': capped.lyapunov,
        'crossover_strength': capped.crossover_strength,
        'saturated': list(capped.saturated),
        'residual_rms': capped.residual_rms,
    }


def _classical_kwargs(config):
    return {'n_traj': max(config.n_traj, 1000), 'max_lag': config.max_lag, 'seed': config.seed}


def sigma_sweep_job(config, output_dir, options):
    """Decay rate against sigma1 with the coupling held fixed."""
    base = config.model_params()
    members = [(_label('sigma1', v), v, base.with_updates(sigma1=v)) for v in config.sigma1_values]
    outcomes = _run_members(config, output_dir, options, members)
    points = _sweep_points(outcomes)
    write_sweep_csv(Path(output_dir) / 'sweep.csv', points, options.precision)

    lyapunov = large_k_lyapunov(config.K1)
    classical = gamma_sigma1(1.0, config.K1, base.hbar_eff, **_classical_kwargs(config))
    write_fit_report(Path(output_dir) / 'fit.txt', [
        ('scaling', _scaling_section(points)),
        ('lyapunov_capped', _capped_section(points, lyapunov)),
        ('classical', {
            'predicted_coefficient': classical.coefficient,
            'correlator_sum': classical.correlator_sum,
            'quoted_coefficient_at_N': quoted_rates(1.0, 0.0, config.N)['gamma_sigma1'],
        }),
    ])
    return {'curves': len(outcomes), 'points': points}


def eps_sweep_job(config, output_dir, options):
    """Decay rate against the coupling strength, eps_f = eps_b."""
    base = config.model_params()
    members = [(_label('eps', v), v, base.with_updates(eps_f=v, eps_b=v)) for v in config.eps_values]
    outcomes = _run_members(config, output_dir, options, members)
    points = _sweep_points(outcomes)
    write_sweep_csv(Path(output_dir) / 'sweep.csv', points, options.precision)

    lyapunov = large_k_lyapunov(config.K1)
    classical = gamma_coupling(1.0, config.K1, config.K2, config.phase_offset, base.hbar_eff,
                               **_classical_kwargs(config))
    write_fit_report(Path(output_dir) / 'fit.txt', [
        ('scaling', _scaling_section(points)),
        ('lyapunov_capped', _capped_section(points, lyapunov)),
        ('classical', {
            # Both legs decohere: rate = gamma_f + gamma_b
            'predicted_coefficient': 2.0 * classical.coefficient,
            'correlator_sum': classical.correlator_sum,
            'quoted_coefficient_at_N': 2.0 * quoted_rates(0.0, 1.0, config.N)['gamma_u'],
        }),
    ])
    return {'curves': len(outcomes), 'points': points}


def k2_independence_job(config, output_dir, options):
    """Fitted rates across K2 and sigma2 values at fixed rotator-1 parameters."""
    base = config.model_params()
    groups = {}
    if config.k2_values:
        groups['K2'] = [(_label('K2', v), v, base.with_updates(K2=v)) for v in config.k2_values]
    if config.sigma2_values:
        groups['sigma2'] = [(_label('sigma2', v), v, base.with_updates(sigma2=v)) for v in config.sigma2_values]

    sections, summary = [], {'curves': 0}
    for name, members in groups.items():
        outcomes = _run_members(config, output_dir, options, members)
        fits = [o.fit for o in outcomes if o.fit is not None]
        points = _sweep_points(outcomes)
        write_sweep_csv(Path(output_dir) / f"sweep_{name}.csv", points, options.precision)
        agree = rates_agree(fits) if len(fits) == len(outcomes) else False
        sections.append((name, {
            'values': [o.strength for o in outcomes],
            'rates': [o.fit.rate if o.fit else None for o in outcomes],
            'uncertainties': [o.fit.uncertainty if o.fit else None for o in outcomes],
            'agree_within_2_sigma': agree,
        }))
        summary['curves'] += len(outcomes)
        summary[f"{name}_agree"] = agree
    write_fit_report(Path(output_dir) / 'fit.txt', sections)
    return summary


def lyapunov_job(config, output_dir, options):
    """Standard-map Lyapunov exponent at K1."""
    estimate = lyapunov_exponent(config.K1, n_traj=config.n_traj, t_steps=config.t_steps,
                                 seed=config.seed, transient=config.transient)
    reference = large_k_lyapunov(config.K1)
    write_fit_report(Path(output_dir) / 'fit.txt', [('lyapunov', {
        'K': config.K1,
        'exponent': estimate.exponent,
        'error': estimate.error,
        'n_trajectories': estimate.n_trajectories,
        't_steps': estimate.t_steps,
        'transient_discard': estimate.transient_discard,
        'ln_K_over_2': reference,
        'relative_deviation': (estimate.exponent - reference) / reference,
    })])
    return {'curves': 0, 'exponent': estimate.exponent}


def gamma_estimate_job(config, output_dir, options):
    """Classical golden-rule rates at the config's strengths and N."""
    params = config.model_params()
    kwargs = {'n_traj': config.n_traj, 'max_lag': config.max_lag, 'seed': config.seed}
    sigma = gamma_sigma1(params.sigma1, params.K1, params.hbar_eff, **kwargs)
    coupling_f = gamma_coupling(params.eps_f, params.K1, params.K2, params.phase_offset, params.hbar_eff, **kwargs)
    coupling_b = gamma_coupling(params.eps_b, params.K1, params.K2, params.phase_offset, params.hbar_eff, **kwargs)
    lyapunov = large_k_lyapunov(params.K1)

    lag_rows = ['lag,sigma,coupling']
    for lag, (c, d) in enumerate(zip(sigma.lags, coupling_f.lags)):
        lag_rows.append(f"{lag},{c:.{options.precision}g},{d:.{options.precision}g}")
    Path(output_dir).mkdir(parents=True, exist_ok=True)
    (Path(output_dir) / 'correlator.csv').write_text('\n'.join(lag_rows) + '\n')

    predicted = predict_decay_rate(sigma.gamma, coupling_f.gamma, coupling_b.gamma, lyapunov)
    quoted = quoted_rates(params.sigma1, params.eps_f, params.N)
    write_fit_report(Path(output_dir) / 'fit.txt', [
        ('gamma_sigma1', sigma.to_dict()),
        ('gamma_f', coupling_f.to_dict()),
        ('gamma_b', coupling_b.to_dict()),
        ('prediction', {
            'total_golden_rule': sigma.gamma + coupling_f.gamma + coupling_b.gamma,
            'lyapunov_cap': lyapunov,
            'predicted_rate': predicted,
            'regime': classify_regime(sigma.gamma, coupling_f.gamma, params.N, lyapunov),
            'quoted_gamma_sigma1': quoted['gamma_sigma1'],
            'quoted_gamma_u': quoted['gamma_u'],
        }),
    ])
    return {'curves': 0, 'predicted_rate': predicted}


def fig1_repro_job(config, output_dir, options):
    """Decay curves at fixed sigma1 for increasing coupling, plus classical predictions."""
    base = config.model_params()
    members = [(_label('eps', v), v, base.with_updates(eps_f=v, eps_b=v)) for v in config.eps_values]
    outcomes = _run_members(config, output_dir, options, members)
    points = _sweep_points(outcomes)
    write_sweep_csv(Path(output_dir) / 'sweep.csv', points, options.precision)

    lyapunov = large_k_lyapunov(config.K1)
    kwargs = _classical_kwargs(config)
    sigma = gamma_sigma1(base.sigma1, base.K1, base.hbar_eff, **kwargs)
    unit_coupling = gamma_coupling(1.0, base.K1, base.K2, base.phase_offset, base.hbar_eff, **kwargs)

    rows = {}
    for outcome in outcomes:
        gamma_u = unit_coupling.coefficient * outcome.strength ** 2
        rows[outcome.label] = {
            'fitted_rate': outcome.fit.rate if outcome.fit else None,
            'predicted_rate': predict_decay_rate(sigma.gamma, gamma_u, gamma_u, lyapunov),
            'mean_at_t_max': float(outcome.curve.mean[-1]),
        }

    # Larger coupling decays faster: the late-time means must fall with eps
    late = [float(np.mean(o.curve.mean[-max(1, len(o.curve) // 4):])) for o in outcomes]
    ordered = all(b <= a for a, b in zip(late, late[1:]))

    write_fit_report(Path(output_dir) / 'fit.txt', [
        *[(label, entries) for label, entries in rows.items()],
        ('ordering', {'late_time_means': late, 'ordered_by_coupling': ordered}),
        ('reference', {
            'N': config.N,
            'saturation': 1.0 / config.N,
            'lyapunov_cap': lyapunov,
            'gamma_sigma1': sigma.gamma,
        }),
    ])
    return {'curves': len(outcomes), 'ordered': ordered, 'points': points}


JOBS = {
    ExperimentKind.ECHO_CURVE: echo_curve_job,
    ExperimentKind.LOSCHMIDT_CURVE: loschmidt_curve_job,
    ExperimentKind.SIGMA_SWEEP: sigma_sweep_job,
    ExperimentKind.EPS_SWEEP: eps_sweep_job,
    ExperimentKind.K2_INDEPENDENCE: k2_independence_job,
    ExperimentKind.LYAPUNOV: lyapunov_job,
    ExperimentKind.GAMMA_ESTIMATE: gamma_estimate_job,
    ExperimentKind.FIG1_REPRO: fig1_repro_job,
}


def run_experiment(config, output_dir, options=None):
    """
    Run the job for `config.kind` and write meta.txt.

    Returns:
        dict: job summary with status, duration and output directory
    """
    options = options or RunOptions()
    output_dir = Path(output_dir)
    output_dir.mkdir(parents=True, exist_ok=True)
    collector = MetricsCollector()
    cost = estimate_cost(config)
    start = time.perf_counter()

    logger.info(f"Starting {config.kind.value} experiment -> {output_dir}")
    try:
        summary = JOBS[config.kind](config, output_dir, options)
    except Exception as e:
        duration = time.perf_counter() - start
        log_error(e, {'experiment': config.kind.value, 'output': str(output_dir)})
        collector.collect_job_metrics(config.kind.value, 'failed', duration, cost.total_steps,
                                      getattr(e, 'error_code', None))
        raise

    duration = time.perf_counter() - start
    collector.collect_job_metrics(config.kind.value, 'completed', duration, cost.total_steps)
    usage = collector.summary()

    derived = {
        'hbar_eff': 2.0 * math.pi / config.N,
        'total_steps': cost.total_steps,
        'steps_per_realization': cost.steps_per_realization,
        'duration_seconds': duration,
        'peak_memory_mb': usage['peak_memory_mb'],
    }
    if cost.step_cost_vs_reference is not None:
        derived['step_cost_vs_reference'] = cost.step_cost_vs_reference
    if options.error_stats is not None:
        stats = options.error_stats()
        derived['errors_total'] = stats['total_errors']
        derived['errors_by_code'] = ', '.join(f"{k}={v}" for k, v in sorted(stats['error_counts'].items())) or 'none'
    write_meta(output_dir / 'meta.txt', config, derived)

    logger.info(f"Finished {config.kind.value} in {duration:.2f}s (peak memory {usage['peak_memory_mb']:.1f} MB)")
    return {'status': 'completed', 'duration': duration, 'output_dir': str(output_dir), **summary}
