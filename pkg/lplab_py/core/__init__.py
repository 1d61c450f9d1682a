"""
Core engine for lplab.
"""

from lplab_py.core.errors import (
    ConfigError,
    GroupSpecSyntaxError,
    InvariantViolationError,
    LabError,
    NonConvergenceError,
    ResourceLimitError,
)
from lplab_py.core.groups import GeneratingSet, GroupKind, GroupSpec
from lplab_py.core.graph import CayleyBall, ball
from lplab_py.core.algebra import AveragingSpec, ExactScalar, GroupRingMatrix, GroupVector, ScalarMode, VectorTuple
from lplab_py.core.parser import parse_element, parse_group, parse_vector
from lplab_py.core.energy import DirichletProblem, GraphFunction, dirichlet_sum, solve_dirichlet
from lplab_py.core.cohomology import ComplexSpec, builtin_complex, density_experiment, distance_to_image, truncate
from lplab_py.core.invariance import diff_decompose, sobolev_ratio, theta, translate
