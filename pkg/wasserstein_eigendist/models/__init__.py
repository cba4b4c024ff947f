"""
Models Package

This package contains the data models shared by the solver, the iterations and the CLI.
"""

from .markov_chain import MarkovChain
from .pseudo_metric import PseudoMetric
from .tolerances import Tolerances
from .transport import TransportInstance, TransportPlan, PlanCheck
from .wp_result import WpResult
from .eigendistance_result import EigendistanceResult, EigenCheck
from .coupling_operator import CouplingOperator, CoupledSimulation
from .partition import Partition
from .concentration_params import ConcentrationParams, TailReport
from .example_spec import ExampleSpec, ExampleFamily, GeneratedExample
from .run_config import RunConfig

__all__ = [
    'MarkovChain',
    'PseudoMetric',
    'Tolerances',
    'TransportInstance',
    'TransportPlan',
    'PlanCheck',
    'WpResult',
    'EigendistanceResult',
    'EigenCheck',
    'CouplingOperator',
    'CoupledSimulation',
    'Partition',
    'ConcentrationParams',
    'TailReport',
    'ExampleSpec',
    'ExampleFamily',
    'GeneratedExample',
    'RunConfig',
]
