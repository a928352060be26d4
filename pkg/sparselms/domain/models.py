from enum import Enum
from typing import List, Optional, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, PrivateAttr, model_validator


class PenaltyKind(str, Enum):
    """Convex regularizer enumeration."""
    L1 = "l1"
    WEIGHTED_L1 = "weighted_l1"
    GROUP_L12 = "group_l12"
    WEIGHTED_GROUP_L12 = "weighted_group_l12"

    @property
    def is_group(self) -> bool:
        return self in (PenaltyKind.GROUP_L12, PenaltyKind.WEIGHTED_GROUP_L12)

    @property
    def is_weighted(self) -> bool:
        return self in (PenaltyKind.WEIGHTED_L1, PenaltyKind.WEIGHTED_GROUP_L12)


class StepSizeKind(str, Enum):
    """Step size policy enumeration."""
    CONSTANT = "constant"
    NORMALIZED = "normalized"


class RhoKind(str, Enum):
    """Regularization step size policy enumeration."""
    FIXED = "fixed"
    THEOREM1_LMS = "theorem1_lms"
    THEOREM1_NLMS = "theorem1_nlms"
    THEOREM2 = "theorem2"


class InputKind(str, Enum):
    """Input process enumeration."""
    WHITE = "white"
    AR1 = "ar1"


class SystemKind(str, Enum):
    """How the true impulse response is drawn."""
    GENERAL = "general"
    GROUP = "group"
    EXPLICIT = "explicit"


class TrackingEventKind(str, Enum):
    """Sudden change applied to the true system."""
    SHIFT_LEFT = "shift_left"
    SHIFT_RIGHT = "shift_right"
    RESET_ACTIVE = "reset_active"


class GroupPartition(BaseModel):
    """Disjoint cover of the tap indices {0, ..., n_taps - 1}.

    Groups need not be contiguous. ``labels[i]`` is the group of tap ``i``.
    """
    groups: List[List[int]] = Field(..., min_length=1)
    n_taps: int = Field(..., gt=0)
    _labels: np.ndarray = PrivateAttr()

    model_config = ConfigDict(extra="forbid")

    @model_validator(mode='after')
    def validate_cover(self):
        """Validate that the groups are non-empty, disjoint and cover every tap."""
        seen = set()
        for j, group in enumerate(self.groups):
            if not group:
                raise ValueError(f"group {j} is empty")
            for index in group:
                if index < 0 or index >= self.n_taps:
                    raise ValueError(f"tap index {index} in group {j} is outside [0, {self.n_taps})")
                if index in seen:
                    raise ValueError(f"tap index {index} appears in more than one group")
                seen.add(index)
        if len(seen) != self.n_taps:
            missing = sorted(set(range(self.n_taps)) - seen)
            raise ValueError(f"groups do not cover taps {missing[:10]}")
        return self

    def model_post_init(self, __context) -> None:
        """Cache the tap -> group lookup used by the vectorized penalty kernels."""
        labels = np.empty(self.n_taps, dtype=np.intp)
        for j, group in enumerate(self.groups):
            labels[group] = j
        self._labels = labels

    @classmethod
    def singletons(cls, n_taps: int) -> "GroupPartition":
        return cls(groups=[[i] for i in range(n_taps)], n_taps=n_taps)

    @classmethod
    def uniform(cls, n_taps: int, group_size: int) -> "GroupPartition":
        """Contiguous blocks of ``group_size`` taps; the last block may be shorter."""
        groups = [list(range(start, min(start + group_size, n_taps)))
                  for start in range(0, n_taps, group_size)]
        return cls(groups=groups, n_taps=n_taps)

    @property
    def n_groups(self) -> int:
        return len(self.groups)

    @property
    def labels(self) -> np.ndarray:
        return self._labels

    @property
    def is_singleton(self) -> bool:
        return self.n_groups == self.n_taps


class Penalty(BaseModel):
    """A convex regularizer bound to a concrete partition."""
    kind: PenaltyKind
    partition: GroupPartition
    delta: float = Field(0.01, gt=0)

    @model_validator(mode='after')
    def validate_partition(self):
        """Scalar kinds always work on the all-singleton partition."""
        if not self.kind.is_group and not self.partition.is_singleton:
            raise ValueError(f"{self.kind.value} penalty requires an all-singleton partition")
        return self

    @property
    def n_taps(self) -> int:
        return self.partition.n_taps


class PenaltySpec(BaseModel):
    """Penalty as written in a scenario document; the partition is built per filter length."""
    kind: PenaltyKind
    delta: float = Field(0.01, gt=0)
    group_size: Optional[int] = Field(None, gt=0)
    groups: Optional[List[List[int]]] = None

    model_config = ConfigDict(extra="forbid")

    @model_validator(mode='after')
    def validate_grouping(self):
        """Group kinds need exactly one of group_size / groups; scalar kinds need neither."""
        given = (self.group_size is not None) + (self.groups is not None)
        if self.kind.is_group and given != 1:
            raise ValueError(f"{self.kind.value} penalty needs exactly one of group_size or groups")
        if not self.kind.is_group and given:
            raise ValueError(f"{self.kind.value} penalty does not take a grouping")
        return self

    def build(self, n_taps: int) -> Penalty:
        if self.groups is not None:
            partition = GroupPartition(groups=self.groups, n_taps=n_taps)
        elif self.group_size is not None:
            partition = GroupPartition.uniform(n_taps, self.group_size)
        else:
            partition = GroupPartition.singletons(n_taps)
        return Penalty(kind=self.kind, partition=partition, delta=self.delta)


class StepSizePolicy(BaseModel):
    """Constant mu (LMS) or alpha / ||x||^2 (NLMS)."""
    kind: StepSizeKind
    mu: Optional[float] = Field(None, gt=0)
    alpha: Optional[float] = Field(None, gt=0)

    model_config = ConfigDict(extra="forbid")

    @model_validator(mode='after')
    def validate_parameter(self):
        """Validate that the kind's parameter, and only that one, is set."""
        if self.kind == StepSizeKind.CONSTANT and (self.mu is None or self.alpha is not None):
            raise ValueError("constant step size needs mu and no alpha")
        if self.kind == StepSizeKind.NORMALIZED and (self.alpha is None or self.mu is not None):
            raise ValueError("normalized step size needs alpha and no mu")
        return self

    @classmethod
    def constant(cls, mu: float) -> "StepSizePolicy":
        return cls(kind=StepSizeKind.CONSTANT, mu=mu)

    @classmethod
    def normalized(cls, alpha: float = 1.0) -> "StepSizePolicy":
        return cls(kind=StepSizeKind.NORMALIZED, alpha=alpha)


class EtaBound(BaseModel):
    """Assumed upper bound eta_n on the penalty value of the true system.

    Either a constant ``value`` (optionally replaced from given iterations on by
    ``schedule``) or the ``oracle`` value f_n(w_n) of the true system. The
    result is multiplied by ``factor``.
    """
    value: Optional[float] = Field(None, ge=0)
    oracle: bool = False
    factor: float = Field(1.0, gt=0)
    schedule: List[Tuple[int, float]] = Field(default_factory=list)

    model_config = ConfigDict(extra="forbid")

    @model_validator(mode='after')
    def validate_source(self):
        """Validate that exactly one source of eta is configured."""
        if self.oracle:
            if self.value is not None or self.schedule:
                raise ValueError("oracle eta cannot also have a value or schedule")
            return self
        iterations = [it for it, _ in self.schedule]
        if iterations != sorted(iterations) or any(it < 0 for it in iterations):
            raise ValueError("eta schedule must be sorted by non-negative iteration")
        if any(v < 0 for _, v in self.schedule):
            raise ValueError("eta schedule values must be non-negative")
        if self.value is None and (not self.schedule or self.schedule[0][0] > 0):
            raise ValueError("eta needs a value from iteration 0 on, or oracle: true")
        return self

    def at(self, iteration: int, oracle_value: Optional[float] = None) -> float:
        if self.oracle:
            if oracle_value is None:
                raise ValueError("oracle eta requested without the true penalty value")
            return self.factor * oracle_value
        eta = self.value
        for start, value in self.schedule:
            if iteration >= start:
                eta = value
        return self.factor * eta


class RhoPolicy(BaseModel):
    """How rho_n is chosen at every iteration."""
    kind: RhoKind
    rho: Optional[float] = Field(None, ge=0)
    sigma_x2: Optional[float] = Field(None, gt=0)
    eta: Optional[EtaBound] = None
    scale: float = Field(1.0, gt=0, le=2)

    model_config = ConfigDict(extra="forbid")

    @model_validator(mode='after')
    def validate_parameters(self):
        """Validate per-kind parameters."""
        if self.kind == RhoKind.FIXED:
            if self.rho is None:
                raise ValueError("fixed rho policy needs rho")
        elif self.eta is None:
            raise ValueError(f"{self.kind.value} rho policy needs eta")
        if self.sigma_x2 is not None and self.kind != RhoKind.THEOREM1_LMS:
            raise ValueError("sigma_x2 only applies to theorem1_lms")
        return self


class InputProcess(BaseModel):
    """White Gaussian or AR(1) input.

    ``variance`` applies to white input only (default 1); AR(1) input is
    scaled by ``normalize`` instead.
    """
    kind: InputKind
    variance: Optional[float] = Field(None, gt=0)
    a: Optional[float] = Field(None, gt=-1, lt=1)
    normalize: bool = True

    model_config = ConfigDict(extra="forbid")

    @model_validator(mode='after')
    def validate_parameters(self):
        """AR(1) needs its coefficient; white input does not take one."""
        if self.kind == InputKind.AR1 and self.a is None:
            raise ValueError("ar1 input needs a")
        if self.kind == InputKind.WHITE and self.a is not None:
            raise ValueError("white input does not take a")
        if self.kind == InputKind.AR1 and self.variance is not None:
            raise ValueError("ar1 input does not take variance; use normalize")
        return self

    @property
    def white_variance(self) -> float:
        return 1.0 if self.variance is None else self.variance

    @property
    def stationary_variance(self) -> float:
        if self.kind == InputKind.WHITE:
            return self.white_variance
        return 1.0 if self.normalize else 1.0 / (1.0 - self.a ** 2)


class NoiseProcess(BaseModel):
    """Zero-mean Gaussian observation noise."""
    variance: float = Field(..., ge=0)

    model_config = ConfigDict(extra="forbid")


class TrackingEvent(BaseModel):
    """Sudden change of the true system, applied before the given iteration's sample."""
    iteration: int = Field(..., ge=0)
    kind: TrackingEventKind
    taps: Optional[int] = Field(None, ge=0)

    model_config = ConfigDict(extra="forbid")

    @model_validator(mode='after')
    def validate_taps(self):
        """Shifts need a tap count; resets do not take one."""
        is_shift = self.kind != TrackingEventKind.RESET_ACTIVE
        if is_shift and self.taps is None:
            raise ValueError(f"{self.kind.value} event needs taps")
        if not is_shift and self.taps is not None:
            raise ValueError("reset_active event does not take taps")
        return self


class SystemSpec(BaseModel):
    """How the true system is drawn, and how it changes over time."""
    kind: SystemKind
    sparsity: Optional[int] = Field(None, ge=0)
    blocks: Optional[List[Tuple[int, int]]] = None
    coefficients: Optional[List[float]] = None
    events: List[TrackingEvent] = Field(default_factory=list)

    model_config = ConfigDict(extra="forbid")

    @model_validator(mode='after')
    def validate_parameters(self):
        """Validate per-kind parameters and event ordering."""
        required = {
            SystemKind.GENERAL: "sparsity",
            SystemKind.GROUP: "blocks",
            SystemKind.EXPLICIT: "coefficients",
        }[self.kind]
        for name in ("sparsity", "blocks", "coefficients"):
            present = getattr(self, name) is not None
            if name == required and not present:
                raise ValueError(f"{self.kind.value} system needs {name}")
            if name != required and present:
                raise ValueError(f"{self.kind.value} system does not take {name}")
        iterations = [event.iteration for event in self.events]
        if iterations != sorted(iterations):
            raise ValueError("tracking events must be sorted by iteration")
        return self


class FilterSpec(BaseModel):
    """One member of the filter bank: step size policy plus optional regularizer."""
    name: str = Field(..., min_length=1, pattern=r'^[A-Za-z0-9_.()+-]+$')
    step: StepSizePolicy
    penalty: Optional[PenaltySpec] = None
    rho: Optional[RhoPolicy] = None

    model_config = ConfigDict(extra="forbid")

    @model_validator(mode='after')
    def validate_regularizer(self):
        """A penalty and a rho policy come together or not at all."""
        if (self.penalty is None) != (self.rho is None):
            raise ValueError(f"filter '{self.name}' needs both penalty and rho, or neither")
        if self.rho is not None:
            if self.rho.kind == RhoKind.THEOREM1_LMS and self.step.kind != StepSizeKind.CONSTANT:
                raise ValueError(f"filter '{self.name}': theorem1_lms rho needs a constant step size")
            if self.rho.kind == RhoKind.THEOREM1_NLMS and self.step.kind != StepSizeKind.NORMALIZED:
                raise ValueError(f"filter '{self.name}': theorem1_nlms rho needs a normalized step size")
        return self

    @property
    def is_regularized(self) -> bool:
        return self.penalty is not None


def default_eta_factors() -> List[float]:
    """21 log-spaced multipliers from 0.1 to 10."""
    return [float(f) for f in np.logspace(-1.0, 1.0, 21)]


class EtaSweep(BaseModel):
    """Re-run the scenario for each eta factor and read MSD at one iteration."""
    probe_iteration: int = Field(..., ge=0)
    factors: List[float] = Field(default_factory=default_eta_factors, min_length=1)
    filters: Optional[List[str]] = None

    model_config = ConfigDict(extra="forbid")


class Scenario(BaseModel):
    """Domain model for a complete paired Monte Carlo experiment."""
    name: str = Field(..., min_length=1)
    description: str = ""
    n_taps: int = Field(..., gt=0)
    horizon: int = Field(..., ge=0)
    trials: int = Field(..., ge=1)
    master_seed: int = Field(..., ge=0)
    system: SystemSpec
    input: InputProcess
    noise: NoiseProcess
    filters: List[FilterSpec] = Field(..., min_length=1)
    sweep: Optional[EtaSweep] = None

    model_config = ConfigDict(extra="forbid")

    @model_validator(mode='after')
    def validate_consistency(self):
        """Validate cross-field constraints that depend on the filter length and horizon."""
        names = [f.name for f in self.filters]
        duplicates = sorted({n for n in names if names.count(n) > 1})
        if duplicates:
            raise ValueError(f"duplicate filter names: {duplicates}")

        system = self.system
        if system.sparsity is not None and system.sparsity > self.n_taps:
            raise ValueError(f"sparsity {system.sparsity} exceeds n_taps {self.n_taps}")
        if system.coefficients is not None and len(system.coefficients) != self.n_taps:
            raise ValueError(f"coefficients has length {len(system.coefficients)}, expected {self.n_taps}")
        if system.blocks is not None:
            covered = set()
            for start, length in system.blocks:
                taps = set(range(start, start + length))
                if start < 0 or length < 0 or start + length > self.n_taps:
                    raise ValueError(f"block ({start}, {length}) is outside [0, {self.n_taps})")
                if covered & taps:
                    raise ValueError(f"block ({start}, {length}) overlaps another block")
                covered |= taps

        for event in system.events:
            if event.iteration > 0 and event.iteration >= self.horizon:
                raise ValueError(f"{event.kind.value} event at iteration {event.iteration} "
                                 f"is outside the horizon {self.horizon}")

        for spec in self.filters:
            if spec.penalty is not None:
                spec.penalty.build(self.n_taps)

        if self.sweep is not None:
            if self.sweep.probe_iteration > self.horizon:
                raise ValueError("sweep probe_iteration is beyond the horizon")
            unknown = set(self.sweep.filters or []) - set(names)
            if unknown:
                raise ValueError(f"sweep names unknown filters: {sorted(unknown)}")
        return self

    def filter_named(self, name: str) -> FilterSpec:
        for spec in self.filters:
            if spec.name == name:
                return spec
        raise KeyError(name)
