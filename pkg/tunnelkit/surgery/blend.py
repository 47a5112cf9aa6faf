import logging
from typing import Generic, Optional, TypeVar

import numpy as np
from scipy.special import expit

from tunnelkit.constants import BLEND_SCALE_RATIO
from tunnelkit.errors import ScenarioValidationError
from tunnelkit.models.blend import (
    BlendProfileConfig,
    LogisticBlendConfig,
    OffBlendConfig,
)

BlendProfileConfigType = TypeVar("BlendProfileConfigType", bound=BlendProfileConfig)

# |z| beyond which B is 0 or 1 to double precision for the built-in profile
SATURATION = 40.0


class BaseBlendProfile(Generic[BlendProfileConfigType]):
    """B((t - t_star) / epsilon) together with the shift constant A and the width beta."""

    enforces_scale: bool = True

    def __init__(
        self,
        profile_config: BlendProfileConfigType,
        epsilon: float,
        beta: float,
        t_star: float,
        shift: float = 1.0,
        logger: Optional[logging.Logger] = None,
    ):
        if epsilon <= 0 or beta <= 0:
            raise ScenarioValidationError("blend width and insertion width must be positive")
        if self.enforces_scale and epsilon * BLEND_SCALE_RATIO > beta:
            raise ScenarioValidationError(
                f"epsilon={epsilon!r} must not exceed "
                f"beta/{BLEND_SCALE_RATIO:g}={beta / BLEND_SCALE_RATIO!r}"
            )
        self.profile_config = profile_config
        self.epsilon = epsilon
        self.beta = beta
        self.t_star = t_star
        self.shift = shift
        self.logger = logger or logging.getLogger(__name__)

    def get_profile_config(self) -> BlendProfileConfigType:
        return self.profile_config

    @property
    def is_off(self) -> bool:
        return False

    def shape(self, z):
        raise NotImplementedError

    def __call__(self, t):
        return self.shape((np.asarray(t, dtype=float) - self.t_star) / self.epsilon)

    def transition(self, t: float) -> bool:
        """True while B is still changing at t."""
        return abs(t - self.t_star) < SATURATION * self.epsilon

    def with_shift(self, shift: float) -> "BaseBlendProfile":
        return type(self)(
            self.profile_config,
            self.epsilon,
            self.beta,
            self.t_star,
            shift=shift,
            logger=self.logger,
        )

    def with_epsilon(self, epsilon: float) -> "BaseBlendProfile":
        return type(self)(
            self.profile_config,
            epsilon,
            self.beta,
            self.t_star,
            shift=self.shift,
            logger=self.logger,
        )


class LogisticBlendProfile(BaseBlendProfile[LogisticBlendConfig]):
    def shape(self, z):
        return expit(z)


class OffBlendProfile(BaseBlendProfile[OffBlendConfig]):
    enforces_scale = False

    @property
    def is_off(self) -> bool:
        return True

    def shape(self, z):
        return np.zeros_like(np.asarray(z, dtype=float))

    def transition(self, t: float) -> bool:
        return False


class BlendProfileFactory:
    def create_profile(
        self,
        profile_config: BlendProfileConfig,
        epsilon: float,
        beta: float,
        t_star: float,
        shift: float = 1.0,
        logger: Optional[logging.Logger] = None,
    ) -> BaseBlendProfile:
        if isinstance(profile_config, LogisticBlendConfig):
            return LogisticBlendProfile(
                profile_config, epsilon, beta, t_star, shift=shift, logger=logger
            )
        elif isinstance(profile_config, OffBlendConfig):
            return OffBlendProfile(
                profile_config, epsilon, beta, t_star, shift=shift, logger=logger
            )
        raise Exception("Invalid blend profile config")


def create_blend_profile(
    profile_config: BlendProfileConfig,
    epsilon: float,
    beta: float,
    t_star: float,
    shift: float = 1.0,
    logger: Optional[logging.Logger] = None,
) -> BaseBlendProfile:
    return BlendProfileFactory().create_profile(
        profile_config, epsilon, beta, t_star, shift=shift, logger=logger
    )
