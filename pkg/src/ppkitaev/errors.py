"""Exception types raised by the solvers and oracles."""


class PPKitaevError(Exception):
    """Base class for all package errors."""


class DegenerateMomentum(PPKitaevError):
    """Closed form hit a removable 0/0 (|I|, |R| or |a| below tolerance);
    caller should fall back to the eigenvector route."""


class ZeroQ(PPKitaevError):
    """Closed form requested at q = 0 where the ARE degenerates to a
    linear (Lyapunov) equation."""


class NoPhysicalSolution(PPKitaevError):
    """No eigenvector candidate passed the anti-Hermiticity / traceless /
    stability filters. Carries the per-candidate diagnostics."""

    def __init__(self, message, diagnostics=None):
        super().__init__(message)
        self.diagnostics = diagnostics or []


class DegenerateEigenbasis(PPKitaevError):
    """W11 singular for every admissible eigenvector pair."""


class SingularLyapunov(PPKitaevError):
    """Lyapunov equation singular (gamma = 0 with q = 0: undamped,
    steady state not unique)."""


class NotConverged(PPKitaevError):
    """Time integration reached its horizon above the stationarity
    threshold. Carries the final residual."""

    def __init__(self, message, residual=None):
        super().__init__(message)
        self.residual = residual


class FitFailed(PPKitaevError):
    """Correlation-decay fit impossible: window values underflowed
    (correlation length too short for the window)."""


class EmptyScan(PPKitaevError):
    """No discontinuity found below im_max; raise im_max and rescan."""


class IllConditionedComposite(PPKitaevError):
    """(1 + G+ G-) numerically singular in the negativity composite."""


class PairingFailure(PPKitaevError):
    """A structure-matrix eigenvalue lacks a (-beta) partner within
    tolerance. Carries the unpaired set."""

    def __init__(self, message, unpaired=None):
        super().__init__(message)
        self.unpaired = unpaired


class AllDiscarded(PPKitaevError):
    """Every sampled trajectory was discarded; raise n_traj or shorten T."""
