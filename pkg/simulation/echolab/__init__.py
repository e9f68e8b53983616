"""
Boltzmann echo simulator for coupled quantum kicked rotators on a torus.
"""
import logging
from dataclasses import dataclass

__version__ = '1.0.0'


@dataclass(frozen=True)
class RunContext:
    """Resolved settings plus the configured package logger"""
    config_name: str
    settings: type
    logger: logging.Logger

    @property
    def step_budget(self):
        return self.settings.STEP_BUDGET

    @property
    def workers(self):
        return self.settings.DEFAULT_WORKERS


def create_context(config_name='default'):
    """Resolve a settings class and initialize logging, like an app factory."""
    from config import config
    from logging_config import setup_logging

    if config_name not in config:
        raise KeyError(f"Unknown config '{config_name}'. Available: {sorted(config)}")

    settings = config[config_name]
    logger = setup_logging(settings)
    logger.info(f"echolab {__version__} started with '{config_name}' settings")
    return RunContext(config_name=config_name, settings=settings, logger=logger)
