""" file:    errors.py (schwarz_lbw)
    author:  schwarz_lbw developers
    date:    Monday, 12 October 2026

    description: Exception hierarchy for the solver workbench
"""


class SchwarzLBWError(Exception):

    "Base class for all errors raised by schwarz_lbw"


class InvalidArgumentError(SchwarzLBWError, ValueError):

    "An argument is out of range or inconsistent with the other inputs"


class DegenerateElementError(SchwarzLBWError, ValueError):

    "An element has a non-positive Jacobian determinant at a quadrature point"


class SingularMaterialError(SchwarzLBWError, ValueError):

    "Material parameters give a singular elasticity tensor (nu >= 0.5)"


class FactorizationError(SchwarzLBWError, RuntimeError):

    """
    A direct factorization failed

    Parameters:
        block - a human readable name for the matrix block that failed,
            e.g. 'subdomain 3 local' or 'coarse'
        message - what went wrong
    """

    def __init__(self, block, message):
        self.block = block
        super().__init__(f'factorization of {block} failed: {message}')


class ConfigurationError(SchwarzLBWError, ValueError):

    """
    A scenario or solver configuration is invalid

    Parameters:
        message - what went wrong
        line - the (1-based) line of the offending entry in the source file, if known
        source - the name of the file being read, if any
    """

    def __init__(self, message, line=None, source=None):
        self.line = line
        self.source = source
        self.message = message
        if line is not None:
            prefix = f'{source or "<config>"}:{line}: '
        elif source is not None:
            prefix = f'{source}: '
        else:
            prefix = ''
        super().__init__(prefix + message)


class MisuseError(SchwarzLBWError, RuntimeError):

    "An object was used against the operator it was not built for"


class StepFailure(SchwarzLBWError, RuntimeError):

    """
    Newton's method failed within a time step

    Parameters:
        step - the index of the failing time step
        residuals - the residual norm history of the failed Newton loop
        reason - a short description
    """

    def __init__(self, step, residuals, reason):
        self.step = step
        self.residuals = list(residuals)
        self.reason = reason
        super().__init__(f'time step {step} failed: {reason}')
