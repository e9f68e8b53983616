"""
Logging configuration with structured output and error tracking.
"""
import os
import json
import logging
import logging.config
from datetime import datetime, timezone


_RESERVED_ATTRS = {
    'name', 'msg', 'args', 'levelname', 'levelno', 'pathname', 'filename',
    'module', 'lineno', 'funcName', 'created', 'msecs', 'relativeCreated',
    'thread', 'threadName', 'processName', 'process', 'getMessage',
    'exc_info', 'exc_text', 'stack_info', 'taskName', 'message',
}


class JSONFormatter(logging.Formatter):
    """JSON formatter for structured logging"""

    def format(self, record):
        log_entry = {
            'timestamp': datetime.now(timezone.utc).isoformat(),
            'level': record.levelname,
            'logger': record.name,
            'module': record.module,
            'function': record.funcName,
            'line': record.lineno,
            'message': record.getMessage(),
        }

        if record.exc_info:
            log_entry['exception'] = self.formatException(record.exc_info)

        # Extra fields passed through `extra={...}`
        for key, value in record.__dict__.items():
            if key not in _RESERVED_ATTRS:
                log_entry[key] = value

        return json.dumps(log_entry, default=str)


class ErrorTrackingHandler(logging.Handler):
    """Counts errors by error code so runs can report them"""

    def __init__(self):
        super().__init__(level=logging.WARNING)
        self.error_counts = {}

    def emit(self, record):
        error_code = getattr(record, 'error_code', None)
        if error_code is None and record.levelno < logging.ERROR:
            return
        error_code = error_code or 'UNCLASSIFIED'
        self.error_counts[error_code] = self.error_counts.get(error_code, 0) + 1

    def reset(self):
        self.error_counts = {}

    def get_error_stats(self):
        """Get error statistics for run metadata"""
        return {
            'error_counts': dict(self.error_counts),
            'total_errors': sum(self.error_counts.values())
        }


# Global error tracking handler instance
error_tracker = ErrorTrackingHandler()


def setup_logging(settings):
    """
    Configure logging for simulation runs.

    Args:
        settings: Config class (or instance) from config.py

    Returns:
        logging.Logger: the package logger
    """
    log_level = getattr(settings, 'LOG_LEVEL', 'INFO')
    log_format = getattr(settings, 'LOG_FORMAT', 'json')
    log_dir = getattr(settings, 'LOG_DIR', None)

    formatter = 'json' if log_format == 'json' else 'detailed'

    handlers = {
        'console': {
            'class': 'logging.StreamHandler',
            'level': log_level,
            'formatter': formatter,
            'stream': 'ext://sys.stderr'
        }
    }
    package_handlers = ['console']
    performance_handlers = []

    if log_dir:
        os.makedirs(log_dir, exist_ok=True)
        handlers.update({
            'file': {
                'class': 'logging.handlers.RotatingFileHandler',
                'level': 'INFO',
                'formatter': 'json',
                'filename': os.path.join(log_dir, 'echolab.log'),
                'maxBytes': 10485760,  # 10MB
                'backupCount': 10
            },
            'error_file': {
                'class': 'logging.handlers.RotatingFileHandler',
                'level': 'ERROR',
                'formatter': 'json',
                'filename': os.path.join(log_dir, 'errors.log'),
                'maxBytes': 10485760,  # 10MB
                'backupCount': 10
            },
            'performance_file': {
                'class': 'logging.handlers.RotatingFileHandler',
                'level': 'INFO',
                'formatter': 'json',
                'filename': os.path.join(log_dir, 'performance.log'),
                'maxBytes': 5242880,  # 5MB
                'backupCount': 5
            }
        })
        package_handlers += ['file', 'error_file']
        performance_handlers.append('performance_file')

    logging_config = {
        'version': 1,
        'disable_existing_loggers': False,
        'formatters': {
            'detailed': {
                'format': '[%(asctime)s] %(levelname)s [%(name)s.%(funcName)s:%(lineno)d] %(message)s',
                'datefmt': '%Y-%m-%d %H:%M:%S'
            },
            'json': {
                '()': JSONFormatter
            }
        },
        'handlers': handlers,
        'loggers': {
            'echolab': {
                'level': log_level,
                'handlers': package_handlers,
                'propagate': False
            },
            'echolab.performance': {
                'level': 'INFO' if performance_handlers else 'WARNING',
                'handlers': performance_handlers,
                'propagate': False
            },
        },
        'root': {
            'level': 'WARNING',
            'handlers': ['console']
        }
    }

    logging.config.dictConfig(logging_config)

    package_logger = logging.getLogger('echolab')
    if error_tracker not in package_logger.handlers:
        package_logger.addHandler(error_tracker)

    package_logger.debug(f"Logging configured: level={log_level} format={formatter} dir={log_dir}")
    return package_logger


def get_error_stats():
    """Get error statistics for run metadata"""
    return error_tracker.get_error_stats()
