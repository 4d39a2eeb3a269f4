"""Constants that define algorithm names"""

# Follower best-response solvers
EXACT = 'exact'
FPTAS = 'fptas'
SP = 'sp'
ORACLE = 'oracle'
FOLLOWER_ALL = (EXACT, FPTAS, SP, ORACLE)

# Leader algorithms reported by the benchmark
LP = 'lp'
LP_LS = 'lp+ls'
MC = 'mc'
MC_LS = 'mc+ls'
ORACLE_GRID = 'oracle-grid'
LEADER_DEFAULT = (LP, LP_LS, MC, MC_LS)
LEADER_ALL = (LP, LP_LS, MC, MC_LS, ORACLE_GRID)

# Methods for the relaxation
HIGHS = 'lp'
SUPERGRADIENT = 'supergradient'
