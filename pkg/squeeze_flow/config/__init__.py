from .sim_config import DEFAULT_PARAMS, ParameterError, SimParams
from .params_loader import ParamsMapper, dump_params, load_params_file, load_yaml_config
from .params_mapping import PARAMS_FILE_MAPPING

__all__ = [
    'SimParams',
    'DEFAULT_PARAMS',
    'ParameterError',
    'ParamsMapper',
    'PARAMS_FILE_MAPPING',
    'load_params_file',
    'dump_params',
    'load_yaml_config',
]
