from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Union
from dotenv import load_dotenv
import logging
import os

logger = logging.getLogger(__name__)

THREADS_VAR = 'SQFLOW_THREADS'


class EnvironmentConfigError(Exception):
    """Custom exception for invalid runtime environment settings"""
    pass


@dataclass(frozen=True)
class RuntimeEnvironment:
    """
    Settings read from the process environment

    Attributes:
        threads (Optional[int]): Upper bound on worker processes, None when unset
        source (Optional[Path]): Environment file that was loaded, if any
    """

    threads: Optional[int] = None
    source: Optional[Path] = None

    def cap_jobs(self, jobs: int) -> int:
        """Requested worker count limited by SQFLOW_THREADS"""
        if jobs < 1:
            raise EnvironmentConfigError(f"--jobs must be positive, got {jobs}")
        if self.threads is not None and jobs > self.threads:
            logger.info(f"Capping {jobs} jobs to {THREADS_VAR}={self.threads}")
            return self.threads
        return jobs


def load_runtime_env(env_path: Union[str, Path, None] = None) -> RuntimeEnvironment:
    """
    Load runtime settings from the environment or an .env file

    Args:
        env_path: Explicit environment file; must exist when given

    Returns:
        RuntimeEnvironment with the parsed thread cap

    Raises:
        FileNotFoundError: If the specified env_path doesn't exist
        EnvironmentConfigError: If SQFLOW_THREADS is not a positive integer
    """
    if env_path and not os.path.exists(env_path):
        raise FileNotFoundError(f"Environment file not found: {env_path}")

    # Candidate environment files in order of preference
    env_locations = [
        Path(loc) for loc in [
            env_path if env_path else None,
            '.env',
            Path.home() / '.sqflow' / '.env',
        ] if loc and os.path.exists(loc)
    ]

    source = None
    if env_locations:
        source = env_locations[0]
        load_dotenv(source)
        logger.debug(f"Loaded environment from {source}")

    raw = os.getenv(THREADS_VAR)
    if raw is None or raw.strip() == '':
        return RuntimeEnvironment(None, source)
    try:
        threads = int(raw)
    except ValueError:
        raise EnvironmentConfigError(f"{THREADS_VAR} must be an integer, got {raw!r}")
    if threads < 1:
        raise EnvironmentConfigError(f"{THREADS_VAR} must be positive, got {threads}")
    return RuntimeEnvironment(threads, source)
