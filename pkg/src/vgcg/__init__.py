"""Riemann problems for a Keyfitz-Kranzer type balance law with varying Chaplygin gas."""

from .model import (
    ConservedPair, Direction, FlowCase, ParameterError, PhysParams, PositivityError,
    PrimState, RiemannProblem, TransState, change_frame, conserved_and_flux, pressure,
    state_of_conserved, validate_params,
)

__version__ = "0.1.0"
