"""Approximate optimal mu-distributions of quality indicators on parametric Pareto fronts."""
from . import analysis, fronts, indicators, optimizer, refsets
from ._accel import BACKEND
from .errors import ConfigurationError, InvalidInputError, MudistError
from .fronts import FrontShape, decode
from .indicators import IndicatorSpec, evaluate

__version__ = "0.1.0"
