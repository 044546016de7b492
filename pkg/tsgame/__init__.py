__version__ = '0.1.0'

from .model import Instance, load_instance, validate_instance
from .solvers import best_response_dynamics, maximize_potential, maximize_welfare, verify_ne

__all__ = [
    'Instance', 'load_instance', 'validate_instance', 'best_response_dynamics',
    'maximize_potential', 'maximize_welfare', 'verify_ne',
]
