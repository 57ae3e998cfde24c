"""Master-equation relaxation realized as contact Hamiltonian flow on a para-contact metric manifold."""
from .contact_core import (
    ContactPoint,
    GeneratingFunction,
    TangentVector,
    contact_form,
    contact_hamiltonian,
    flow_closed_form,
    h_decay_check,
    hamiltonian_vector_field,
    legendre_point,
    nondegeneracy_volume,
)
from .integrators import IntegratorConfig
from .length_quad import QuadratureConfig, convergence_rate, curve_length, speed
from .master_engine import MarkovKernel, exact_solution, general_rhs, integrate, solvable_rhs
from .moment_flow import (
    MomentState,
    consistency_check,
    expectation,
    moment_closed_form,
    moment_rhs,
    noneq_potential,
)
from .para_metric import (
    FrameBasis,
    frame_basis,
    identity_suite,
    lie_derivative_h,
    mrugala_metric,
    phi_apply,
    phi_squared_apply,
)
from .state_space import (
    Distribution,
    ObservableSystem,
    ThetaParams,
    equilibrium_distribution,
    equilibrium_expectation,
    partition_function,
    theta_potential,
)

__version__ = "0.1.0"
