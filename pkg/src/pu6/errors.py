"""Exception types shared across the package."""


class Pu6Error(Exception):
    """Base class for all errors raised by this package."""


class ComplexFrequencies(Pu6Error):
    """The characteristic cubic has complex or non-positive roots (non-oscillatory regime)."""


class GammaZero(Pu6Error):
    """An operation requiring gamma != 0 was attempted at gamma = 0."""


class DegenerateFrequencies(Pu6Error):
    """Frequencies are (nearly) degenerate; the requested expansion does not exist."""


class SingularCombination(Pu6Error):
    """A coefficient combination hits a vanishing denominator (degenerate for some mode pair)."""


class SingularModeMatrix(Pu6Error):
    """The mode-matching linear system is singular (signals misclassified degeneracy)."""


class ComplexBranch(Pu6Error):
    """A representation branch requires the square root of a negative radicand."""


class InvalidPermutation(Pu6Error):
    """Index triples do not form the permutation structure a representation requires."""


class ZeroDenominator(Pu6Error):
    """A free choice puts a zero in a denominator of the representation formulas."""


class ZeroKinetic(Pu6Error):
    """A kinetic coefficient a_i = 0 makes the Legendre transform undefined."""


class EquivalenceFailure(Pu6Error):
    """A second-order equation is neither a sixth-order oscillator equation nor trivially zero."""

    def __init__(self, index: int, residual: float, message: str = ""):
        self.index = index
        self.residual = residual
        super().__init__(
            message or f"equation {index}: max residual {residual:.3e} "
            "is neither oscillator-equivalent nor trivially vanishing"
        )


class NonFinite(Pu6Error):
    """The integrated state overflowed (divergent degenerate mode or unstable interaction)."""


class ConfigError(Pu6Error):
    """A run configuration is malformed."""
