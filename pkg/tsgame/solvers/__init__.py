from . import best_response, dynamics, optimizer
from .best_response import best_response as solve_best_response
from .dynamics import best_response_dynamics, verify_ne
from .optimizer import greedy_welfare_heuristic, maximize_potential, maximize_welfare

__all__ = [
    'best_response', 'dynamics', 'optimizer', 'solve_best_response',
    'best_response_dynamics', 'verify_ne', 'greedy_welfare_heuristic',
    'maximize_potential', 'maximize_welfare',
]
