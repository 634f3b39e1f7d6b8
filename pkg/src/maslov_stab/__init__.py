"""Maslov-index spectral analysis of linearized Hamiltonian operators on an interval."""

from .waves import (Branch, Nonlinearity, PotentialPair, StandingWave, linearized_potentials,
                    solve_standing_wave)
from .hamflow import fundamental_matrix, greens_residual, rescaled_trace
from .spectra import (conjugate_points, crossing_at, fd_spectrum, morse_index, real_eigenvalues,
                      trace_curves)
from .maslov import (concavity, correction_term, crossing_form_lambda, crossing_form_s,
                     maslov_box, second_order_form, solve_inhomogeneous)
from .stability import (assess, classical_vk, krein_analysis, neumann_concavity_sign,
                        stability_report)

__version__ = "0.1.0"

__all__ = [
    "Branch", "Nonlinearity", "PotentialPair", "StandingWave", "linearized_potentials",
    "solve_standing_wave", "fundamental_matrix", "greens_residual", "rescaled_trace",
    "conjugate_points", "crossing_at", "fd_spectrum", "morse_index", "real_eigenvalues",
    "trace_curves", "concavity", "correction_term", "crossing_form_lambda", "crossing_form_s",
    "maslov_box", "second_order_form", "solve_inhomogeneous", "assess", "classical_vk",
    "krein_analysis", "neumann_concavity_sign", "stability_report",
]
