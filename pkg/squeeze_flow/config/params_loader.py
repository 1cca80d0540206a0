import logging
import math
from pathlib import Path
from typing import Any, Dict, Mapping, Optional, Union

import yaml
from dotenv import dotenv_values

from .params_mapping import PARAMS_FILE_MAPPING
from .sim_config import DEFAULT_PARAMS, ParameterError, SimParams

logger = logging.getLogger(__name__)


class ParamsMapper:
    """
    Maps flat key=value entries onto SimParams fields
    """

    def __init__(self, mapping_config: Dict[str, Dict[str, Any]]):
        """
        Initialize with a mapping configuration

        Args:
            mapping_config: Dictionary of file keys to field names and transformers
        """
        self.mapping_config = mapping_config

    def parse_float(self, raw: str) -> float:
        value = float(raw)
        if not math.isfinite(value):
            raise ValueError(f"not a finite number: {raw}")
        return value

    def parse_int(self, raw: str) -> int:
        value = float(raw)
        if not value.is_integer():
            raise ValueError(f"not an integer: {raw}")
        return int(value)

    def parse_bool(self, raw: str) -> bool:
        lowered = raw.strip().lower()
        if lowered in ('1', 'true', 'yes', 'on'):
            return True
        if lowered in ('0', 'false', 'no', 'off'):
            return False
        raise ValueError(f"not a boolean: {raw}")

    def map_params(self, entries: Mapping[str, Optional[str]],
                   base: SimParams = DEFAULT_PARAMS) -> SimParams:
        """
        Build SimParams from raw file entries

        Args:
            entries: Raw key/value strings as read from the parameter file
            base: Parameters supplying every value the file leaves out

        Returns:
            SimParams with the file's overrides applied

        Raises:
            ParameterError: On unknown keys, unparsable values or inconsistent derived values
        """
        unknown = [key for key in entries if key not in self.mapping_config]
        if unknown:
            raise ParameterError(f"Unknown parameter keys: {', '.join(sorted(unknown))}")

        overrides = {}
        derived = {}
        for key, raw in entries.items():
            mapping = self.mapping_config[key]
            if raw is None or raw.strip() == '':
                raise ParameterError(f"Parameter '{key}' has no value")
            try:
                value = getattr(self, mapping['transformer'])(raw)
            except ValueError as e:
                raise ParameterError(f"Invalid value for '{key}': {str(e)}")
            if mapping['field'] is None:
                derived[mapping['derived']] = value
            else:
                overrides[mapping['field']] = value

        params = base.with_overrides(**overrides)

        # Derived quantities may be listed for readability but must agree
        for name, value in derived.items():
            actual = getattr(params, name)
            if not math.isclose(actual, value, rel_tol=1e-9):
                raise ParameterError(f"'{name}'={value} disagrees with the computed value {actual}")

        return params


def load_params_file(path: Union[str, Path], base: SimParams = DEFAULT_PARAMS) -> SimParams:
    """Load a key=value parameter file"""
    path = Path(path)
    if not path.is_file():
        raise ParameterError(f"Parameter file not found: {path}")
    entries = dotenv_values(path)
    logger.info(f"Loaded {len(entries)} parameter overrides from {path}")
    return ParamsMapper(PARAMS_FILE_MAPPING).map_params(entries, base)


def dump_params(params: SimParams) -> str:
    """Render parameters in the key=value file format"""
    lines = []
    for key, mapping in PARAMS_FILE_MAPPING.items():
        if mapping['field'] is None:
            continue
        value = getattr(params, mapping['field'])
        if isinstance(value, bool):
            lines.append(f"{key}={'true' if value else 'false'}")
        else:
            lines.append(f"{key}={value!r}")
    return '\n'.join(lines) + '\n'


def load_yaml_config(config_path: Union[str, Path]) -> dict:
    """Load a YAML configuration file"""
    try:
        with open(config_path, 'r') as f:
            config = yaml.safe_load(f)
    except Exception as e:
        raise ParameterError(f"Error loading config file: {str(e)}")
    if not isinstance(config, dict):
        raise ParameterError(f"Config file {config_path} does not hold a mapping")
    return config
