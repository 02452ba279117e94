# Swarm Aggregation Simulator
# Bimodal line-of-sight controllers for disc robots: simulation,
# counterexample construction and Monte Carlo experiments.

__version__ = "1.0.0"
