"""Wireless link benchmarking and real-time feasibility tools for field robots.

Submodules:

    channel  -- seedable latency/capacity emulation and the 4G/5G/WiFi6 presets
    loadgen  -- probe and video-stream load generation over emulated or UDP transports
    metrics  -- the six run statistics and both run-aggregation methods
    rtsim    -- message-pair delay accounting for a robot traversing a path
    cli      -- batch orchestration (``fieldnet probe|stream|simulate|report``)
"""

from fieldnet.errors import (
    ConfigurationError,
    DomainError,
    FieldnetError,
    ProtocolError,
    SessionError,
    StatisticsError,
)

__version__ = "0.1.0"

__all__ = [
    "ConfigurationError",
    "DomainError",
    "FieldnetError",
    "ProtocolError",
    "SessionError",
    "StatisticsError",
]
