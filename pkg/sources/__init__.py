from .builtin_model import BuiltinModel
from .parameter_file import ModelParameterFile
from .spec_file import SpecFile

__all__ = [
    'BuiltinModel',
    'ModelParameterFile',
    'SpecFile',
]
