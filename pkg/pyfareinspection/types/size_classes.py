"""Constants that define the random instance size classes"""

SMALL = 'small'
MEDIUM = 'medium'
LARGE = 'large'
HUGE = 'huge'

# Number of nodes and the average number of directed edges of each class
NODES = {SMALL: 25, MEDIUM: 50, LARGE: 100, HUGE: 200}
EXPECTED_EDGES = {SMALL: 95, MEDIUM: 195, LARGE: 399, HUGE: 806}
