import os
from dotenv import load_dotenv

basedir = os.path.abspath(os.path.dirname(__file__))
load_dotenv(os.path.join(basedir, '.env'))


def _env_int(name, default):
    value = os.environ.get(name)
    return int(value) if value not in (None, '') else default


class Config:
    # Logging
    LOG_LEVEL = os.environ.get('LOG_LEVEL', 'INFO')
    LOG_FORMAT = os.environ.get('LOG_FORMAT', 'json')
    LOG_DIR = os.environ.get('LOG_DIR') or None

    # Execution limits
    STEP_BUDGET = _env_int('ECHO_STEP_BUDGET', 200_000_000)
    DEFAULT_WORKERS = _env_int('ECHO_WORKERS', 1)
    FFT_WORKERS = _env_int('ECHO_FFT_WORKERS', 1)

    # Significant digits in result CSVs
    CSV_PRECISION = 17

    # Output
    OUTPUT_DIR = os.environ.get('ECHO_OUTPUT_DIR', os.path.join(basedir, 'runs'))


class DevelopmentConfig(Config):
    DEBUG = True
    LOG_LEVEL = os.environ.get('LOG_LEVEL', 'DEBUG')
    LOG_FORMAT = os.environ.get('LOG_FORMAT', 'detailed')


class ProductionConfig(Config):
    DEBUG = False

    # Long reproduction runs get file logs unless told otherwise
    LOG_DIR = os.environ.get('LOG_DIR', os.path.join(basedir, 'logs'))
    STEP_BUDGET = _env_int('ECHO_STEP_BUDGET', 2_000_000_000)


class TestingConfig(Config):
    TESTING = True
    LOG_LEVEL = 'WARNING'
    LOG_FORMAT = 'detailed'
    LOG_DIR = None
    DEFAULT_WORKERS = 1


config = {
    'development': DevelopmentConfig,
    'production': ProductionConfig,
    'testing': TestingConfig,
    'default': Config
}
