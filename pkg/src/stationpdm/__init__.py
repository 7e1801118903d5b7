"""Proxy-flow predictive maintenance for station doors and elevators.

The pipeline runs passenger demand through a reduced station graph, converts
edge flows to operating cycles, estimates the probability that maintenance
conditions have been reached and schedules grouped interventions.
"""

__version__ = "0.1.0"

STREAMS = ("embarking", "disembarking")
