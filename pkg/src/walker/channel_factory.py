from dataclasses import dataclass
from typing import Dict, List

import src.utils.config as config
from src.walker.channels.base_channel import BaseChannel
from src.walker.channels.coherent_channel import CoherentChannel
from src.walker.channels.tunneling_channel import TunnelingChannel
from src.walker.channels.coin_measurement_channel import CoinMeasurementChannel


@dataclass(frozen=True)
class NoiseModel:
    """Noise kind ("none", "tunneling" or "coin") with its probability."""

    kind: str = "none"
    p: float = 0.0

    def __post_init__(self):
        if self.kind not in config.NOISE_KINDS:
            raise ValueError(f"Unknown noise kind {self.kind!r}; expected one of {config.NOISE_KINDS}")
        if not 0.0 <= float(self.p) <= 1.0:
            raise ValueError(f"Noise probability must lie in [0, 1], got {self.p}")

    @classmethod
    def coherent(cls) -> "NoiseModel":
        return cls("none", 0.0)

    @classmethod
    def tunneling(cls, p: float) -> "NoiseModel":
        return cls("tunneling", p)

    @classmethod
    def coin_measurement(cls, p: float) -> "NoiseModel":
        return cls("coin", p)


class ChannelFactory:
    """Factory class to create the channel for a noise model."""

    _CHANNELS = {
        "none": CoherentChannel,
        "tunneling": TunnelingChannel,
        "coin": CoinMeasurementChannel,
    }

    @staticmethod
    def create_channel(noise: NoiseModel) -> BaseChannel:
        """
        Create a channel instance based on the noise model.

        Args:
            noise: Noise kind and probability

        Returns:
            BaseChannel: A channel instance
        """
        if noise.kind == "none":
            return CoherentChannel()
        return ChannelFactory._CHANNELS[noise.kind](noise.p)

    @staticmethod
    def create_all_channels(p: float) -> Dict[str, BaseChannel]:
        """
        Create one channel of every noise kind at probability ``p``.

        Returns:
            Dict[str, BaseChannel]: Channels keyed by noise kind
        """
        return {
            kind: ChannelFactory.create_channel(NoiseModel(kind, 0.0 if kind == "none" else p))
            for kind in config.NOISE_KINDS
        }

    @staticmethod
    def noise_grid(kind: str, grid: List[float]) -> List[NoiseModel]:
        """Noise models for a probability grid."""
        return [NoiseModel(kind, p) for p in grid]
