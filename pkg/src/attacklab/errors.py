"""Exception hierarchy. Every error carries a machine-readable ``code``."""


class AttackLabError(Exception):
    code = "error"


class InvalidStateError(AttackLabError):
    code = "invalid_state"


class ContractViolation(AttackLabError):
    code = "contract_violation"


class SingularTransformError(AttackLabError):
    code = "singular_transform"


class CoincidentObstacleError(AttackLabError):
    code = "coincident_obstacle"


class InsufficientHistoryError(AttackLabError):
    code = "insufficient_history"


class NoReactionError(AttackLabError):
    code = "no_reaction"


class DegenerateSectorError(AttackLabError):
    code = "degenerate_sector"

    def __init__(self, msg, alpha_lo=None, alpha_hi=None):
        super().__init__(msg)
        self.alpha_lo = alpha_lo
        self.alpha_hi = alpha_hi


class RankDeficientError(AttackLabError):
    code = "rank_deficient"


class InsufficientDataError(AttackLabError):
    code = "insufficient_data"


class EmptyDatasetError(AttackLabError):
    code = "empty_dataset"


class UnderdeterminedError(AttackLabError):
    code = "underdetermined"


class ConvergenceError(AttackLabError):
    code = "convergence"


class InvalidInputError(AttackLabError):
    code = "invalid_input"


class OutOfRegimeError(AttackLabError):
    code = "out_of_regime"


class DegenerateTrajectoryError(AttackLabError):
    code = "degenerate_trajectory"


class InfeasibleTrapError(AttackLabError):
    code = "infeasible_trap"


class ValidationError(AttackLabError):
    code = "validation"

    def __init__(self, errors):
        self.errors = list(errors)
        super().__init__("; ".join(self.errors))


class MissingArtifactError(AttackLabError):
    code = "missing_artifact"


class StageError(AttackLabError):
    code = "stage"

    def __init__(self, stage, cause):
        self.stage = stage
        self.cause = cause
        self.code = f"{stage}:{getattr(cause, 'code', 'error')}"
        super().__init__(f"stage '{stage}' failed: {cause}")
