"""Exception types raised by the simulation and verification routines."""


class ParacontactError(Exception):
    """Base class for all errors raised by this package."""


class DimensionError(ParacontactError, ValueError):
    pass


class NonFiniteResultError(ParacontactError, ArithmeticError):
    pass


class StrictPositivityError(ParacontactError, ValueError):
    pass


class DomainError(ParacontactError, ValueError):
    pass


class IntegrationError(ParacontactError, RuntimeError):
    pass


class InconsistencyError(ParacontactError, AssertionError):
    def __init__(self, component: str, deviation: float, tol: float):
        self.component = component
        self.deviation = deviation
        self.tol = tol
        super().__init__(f"{component}: deviation {deviation:.3e} exceeds tolerance {tol:.1e}")


class PropertyViolationError(ParacontactError, AssertionError):
    def __init__(self, name: str, residual: float, tol: float):
        self.name = name
        self.residual = residual
        self.tol = tol
        super().__init__(f"{name}: residual {residual:.3e} exceeds tolerance {tol:.1e}")


class DegenerateFitError(ParacontactError, ValueError):
    pass


class ConfigError(ParacontactError, ValueError):
    pass
