"""
cone-lab: numerical experiments on two-dimensional minimal cones

A toolkit that builds minimal cones in R^n as geodesic nets on the unit
sphere, perturbs them, and checks at desk scale the quantitative
inequalities behind their regularity theory: the full length property,
the epiperimetric gain of harmonic replacement, maximal-function curve
straightening, and density-excess decay.

Author: cone-lab developers
Dependencies: numpy, scipy, networkx
"""

__version__ = "1.0.0"
__author__ = "cone-lab developers"
