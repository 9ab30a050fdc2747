"""Toolkit for early-generation competitive battle replays: protocol
parsing, deterministic simulation, team inference, offline-RL trajectory
reconstruction, heuristic agents, and evaluation math."""

__version__ = "0.1.0"
