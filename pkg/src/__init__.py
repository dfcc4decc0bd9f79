"""
OSOMA toolkit
SOMA, opportunistic SOMA, DE and PSO on benchmark functions and the
dynamic traveling salesman problem.
"""

__version__ = "1.0.0"
__author__ = "OSOMA Team"
