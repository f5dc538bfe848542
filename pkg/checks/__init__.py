"""
Check runners for the augmentation-ideal toolkit.

Each runner executes a multi-step verification and records the outcome of
every step on a CheckTask.
"""

from checks.markov_check import MarkovCheck
from checks.unknot_check import UnknotCheck

__all__ = ['MarkovCheck', 'UnknotCheck']
