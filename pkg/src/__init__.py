"""
Decoherent Quantum Walk Toolkit

Simulates the one-dimensional Hadamard walk under position-tunneling and
coin-measurement noise, evaluates its closed-form moments and distributions,
and cross-checks them through a momentum-space superoperator layer.
"""

__version__ = '1.0.0'
