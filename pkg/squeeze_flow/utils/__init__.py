from .environment import EnvironmentConfigError, RuntimeEnvironment, load_runtime_env
from .image_writer import ImageWriter, read_pgm

__all__ = ['EnvironmentConfigError', 'RuntimeEnvironment', 'load_runtime_env', 'ImageWriter', 'read_pgm']
