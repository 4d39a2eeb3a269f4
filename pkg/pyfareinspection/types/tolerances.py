"""Constants that define numerical tolerances"""

# Cost and probability comparisons
TOL = 1e-9
# Budget slack of strategies
BUDGET_TOL = 1e-9
# Edges with larger probability belong to the support
SUPPORT_TOL = 1e-6
# Label domination in the Pareto enumeration
DOMINANCE_TOL = 1e-12
# Slack of cost windows that prune labels and local search evaluations
WINDOW_TOL = 1e-6
