"""Pacote autoexplore."""

from . import mdp, planning, analysis, envs, agents, reporting, workflows

__all__ = ["mdp", "planning", "analysis", "envs", "agents", "reporting", "workflows"]
