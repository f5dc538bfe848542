import logging
import os
import time
from dataclasses import asdict, dataclass, field

logger = logging.getLogger(__name__)

# Exit codes shared by every subcommand
EXIT_PASS = 0
EXIT_FAILURE = 1
EXIT_RESOURCE = 2
EXIT_USAGE = 3

STATUS_EXIT = {
    'passed': EXIT_PASS,
    'completed': EXIT_PASS,
    'failed': EXIT_FAILURE,
    'incomplete': EXIT_RESOURCE,
    'usage': EXIT_USAGE,
}


def _env_int(name, default):
    value = os.environ.get(name)
    if value is None:
        return default
    try:
        return int(value)
    except ValueError:
        logger.warning(f"Ignoring non-integer {name}={value!r}")
        return default


def _env_float(name, default):
    value = os.environ.get(name)
    if value is None:
        return default
    try:
        return float(value)
    except ValueError:
        logger.warning(f"Ignoring non-numeric {name}={value!r}")
        return default


def _env_sign(name, default):
    value = _env_int(name, default)
    if value not in (1, -1):
        logger.warning(f"{name} must be +1 or -1, using {default}")
        return default
    return value


@dataclass
class RunConfig:
    """Settings for one command invocation"""
    braid: str = ''
    strands: int = None
    command: str = ''
    lambda_sign: int = -1
    psi_sign: int = -1
    torus_sign: int = -1
    spair_budget: int = 200_000
    timeout_s: float = 60.0
    output: str = 'text'
    log_level: str = 'WARNING'
    oracle_trials: int = 0
    seed: int = 0

    @classmethod
    def from_env(cls, **overrides):
        """
        Build a config from KCH_* environment variables, then apply explicit
        overrides whose value is not None.
        """
        cfg = cls(
            lambda_sign=_env_sign('KCH_LAMBDA_SIGN', -1),
            psi_sign=_env_sign('KCH_PSI_SIGN', -1),
            torus_sign=_env_sign('KCH_TORUS_SIGN', -1),
            spair_budget=_env_int('KCH_SPAIR_BUDGET', 200_000),
            timeout_s=_env_float('KCH_TIMEOUT_S', 60.0),
            log_level=os.environ.get('KCH_LOG_LEVEL', 'WARNING').upper(),
        )
        for key, value in overrides.items():
            if value is not None:
                setattr(cfg, key, value)
        return cfg

    @property
    def json(self):
        return self.output == 'json'

    def limits(self):
        return {'spair_budget': self.spair_budget, 'timeout_s': self.timeout_s}

    def to_dict(self):
        return asdict(self)

    def __repr__(self):
        return f'<RunConfig {self.command} {self.braid!r}>'


@dataclass
class CheckTask:
    """Progress record for a multi-step check"""
    task_type: str
    status: str = 'pending'
    progress: int = 0
    steps: list = field(default_factory=list)
    error_message: str = None
    started_at: float = field(default_factory=time.monotonic)

    def record(self, step, passed, detail='', seconds=0.0):
        self.steps.append({'step': step, 'status': 'passed' if passed else 'failed',
                           'detail': detail, 'seconds': round(seconds, 3)})
        logger.info(f"{self.task_type}: {step} {'passed' if passed else 'FAILED'} {detail}")

    def passed(self):
        return all(s['status'] == 'passed' for s in self.steps)

    def to_dict(self):
        return {'task_type': self.task_type, 'status': self.status, 'progress': self.progress,
                'steps': self.steps, 'error': self.error_message}

    def __repr__(self):
        return f'<CheckTask {self.task_type} - {self.status}>'
