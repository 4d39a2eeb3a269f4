"""Constants that define start solutions and provenance of leader solutions"""

LP = 'lp'
MULTICUT = 'multicut'
ALL = (LP, MULTICUT)

# Support sets can be taken from these artifacts
RELAXATION = 'relaxation'
SOURCES = (RELAXATION, MULTICUT)

LP_ROUND = 'lp-round'
LOCAL_SEARCH = 'local-search({})'
GRID = 'grid'
