"""
Error hierarchy and error logging for simulation runs.
"""
import logging
from datetime import datetime, timezone

logger = logging.getLogger(__name__)


class EchoLabError(Exception):
    """Base error class for consistent error reporting"""

    def __init__(self, message, exit_code=1, error_code=None, details=None, recoverable=False):
        super().__init__(message)
        self.message = message
        self.exit_code = exit_code
        self.error_code = error_code or self._generate_error_code()
        self.details = details or {}
        self.recoverable = recoverable
        self.timestamp = datetime.now(timezone.utc).isoformat()

    def _generate_error_code(self):
        """Generate error code from exit code"""
        code_map = {
            1: 'RUNTIME_ERROR',
            2: 'INVALID_INPUT',
            3: 'STEP_BUDGET_EXCEEDED',
        }
        return code_map.get(self.exit_code, 'UNKNOWN_ERROR')

    def to_dict(self):
        """Convert error to dictionary for logs and run metadata"""
        return {
            'error': {
                'code': self.error_code,
                'message': self.message,
                'details': self.details,
                'timestamp': self.timestamp,
                'recoverable': self.recoverable
            }
        }


# Input errors
class ValidationError(EchoLabError):
    """Invalid physical parameters, specs or analysis inputs"""
    def __init__(self, message, field=None, details=None):
        details = dict(details or {})
        if field:
            details['field'] = field
        super().__init__(message, 2, 'VALIDATION_ERROR', details)


class ConfigError(EchoLabError):
    """Experiment config file problems, reported with line numbers"""
    def __init__(self, message, line=None, key=None, details=None):
        details = dict(details or {})
        if line is not None:
            details['line'] = line
        if key is not None:
            details['key'] = key
        self.line = line
        self.key = key
        prefix = f"line {line}: " if line is not None else ""
        super().__init__(prefix + message, 2, 'CONFIG_INVALID', details)


class NormalizationError(EchoLabError):
    """State handed to the echo engine is not unit norm"""
    def __init__(self, message, norm=None, tolerance=None):
        details = {}
        if norm is not None:
            details['norm'] = norm
        if tolerance is not None:
            details['tolerance'] = tolerance
        super().__init__(message, 2, 'NOT_NORMALIZED', details)


class OracleSizeError(EchoLabError):
    """Dense oracle requested for a Hilbert space that is too large"""
    def __init__(self, n, max_n):
        super().__init__(
            f"Dense propagator refused for N={n}: an N^2 x N^2 matrix needs N <= {max_n}",
            2, 'ORACLE_TOO_LARGE', {'N': n, 'max_N': max_n}
        )


# Runtime errors
class ContractViolationError(EchoLabError):
    """An operation received data in the wrong representation"""
    def __init__(self, message, details=None):
        super().__init__(message, 1, 'CONTRACT_VIOLATION', details)


class StepBudgetError(EchoLabError):
    """A run would exceed the configured Floquet step budget"""
    def __init__(self, total_steps, budget, details=None):
        details = dict(details or {})
        details.update({'total_steps': total_steps, 'budget': budget})
        super().__init__(
            f"Run needs {total_steps} Floquet steps, budget is {budget}",
            3, 'STEP_BUDGET_EXCEEDED', details, recoverable=True
        )
        self.total_steps = total_steps
        self.budget = budget


class InsufficientDataError(EchoLabError):
    """Curve data cannot support the requested fit"""
    def __init__(self, message, window=None, details=None):
        details = dict(details or {})
        if window is not None:
            details['window'] = list(window)
        super().__init__(message, 1, 'INSUFFICIENT_DATA', details)


def log_error(error, context=None):
    """Log error with context information"""
    error_info = {
        'error_type': type(error).__name__,
        'error_message': str(error),
        'timestamp': datetime.now(timezone.utc).isoformat(),
    }

    if context:
        error_info['context'] = context

    if isinstance(error, EchoLabError):
        error_info['details'] = error.details
        extra = {'error_code': error.error_code}
        if error.exit_code == 1:
            logger.error(f"Run error: {error_info}", extra=extra)
        else:
            logger.warning(f"Input error: {error_info}", extra=extra)
    else:
        logger.error(f"Unexpected error: {error_info}", exc_info=True)

    return error_info
