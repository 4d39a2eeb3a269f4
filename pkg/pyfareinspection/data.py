"""Module with classes that represent the solver results"""

from warnings import warn

from .types.variants import FLEXIBLE


def gap_of(profit, upper_bound):
    """
    Ratio between profit and upper bound, 1 if the bound is 0

    :param float: The profit
    :param float: The upper bound
    :return float: The gap
    """
    if upper_bound <= 0:
        return 1.0
    return profit / upper_bound


class BaseData:
    """
    Abstract class that represents any result of the solvers

    Methods
    -------
    get_members
        Get names of member variables that are available
    to_dict
        Export the data to flat dict
    to_pandas
        Export the data to pandas DataFrame
    """
    # Column used as DataFrame index by to_pandas
    _INDEX = None

    def __init__(self):
        # Prevent users from instantiating the BaseData
        if type(self) is BaseData:  # pylint: disable=C0123
            raise Exception('BaseData cannot be instantiated!')

    def get_members(self):
        """
        Build list of variable names that are available in the instance

        :return list: List with string names of the available variables
        """
        # Ignore callables and variables that start with '_'
        return [x for x in dir(self) if
                not callable(getattr(self, x)) and not x.startswith("_")]

    def to_dict(self):
        """
        Export the data to dict

        :return dict: The data as dict
        """
        return {key: getattr(self, key) for key in self.get_members()}

    def _rows(self):
        """Rows of the DataFrame exported by to_pandas"""
        return [self.to_dict()]

    def to_pandas(self):
        """
        Export the data to pandas DataFrame

        NOTE: This needs 'pandas' module, which is not needed for any other
        parts of pyfareinspection except the benchmark tables. To use this
        feature, use 'pip install pyfareinspection[pandas]' to install this
        package, or install pandas manually using 'pip install pandas'.

        :return pandas.DataFrame: One row per commodity or per run
        """
        # Try to lazy-load 'pandas' module
        try:
            import pandas as pd  # pylint: disable=C0415
        except ImportError:
            # If pandas is not installed, print warning and return None
            warn("Module pandas is not installed, cannot export the data. "
                 "Try to install pandas with 'pip install pandas'.")
            return None

        df = pd.DataFrame(self._rows())
        if self._INDEX is not None and self._INDEX in df.columns:
            df.set_index(self._INDEX, inplace=True)
        return df

    def __repr__(self):
        """
        Override __repr__ to have usefull text when attepting to print
        """
        c, members = self.__class__.__name__, self.get_members()
        return '<Instance of {} with {} member variables ({})>'.format(
            c, len(members), ', '.join(members))

    def __getitem__(self, attr):
        """
        Override __getitem__ to allow variable access using [] operator
        """
        return getattr(self, attr)


class FollowerResult(BaseData):
    """
    Best response of one commodity

    Attributes
    ----------
    path : tuple
        Edge ids of the chosen path
    cost_value : float
        The achieved value of the follower's cost function
    label : PathLabel
        Cost and survival probability of the path
    variant : str
        'n' for non-adaptive, 'a' for adaptive followers
    frontier : list/None
        Nondominated labels at the target (exact non-adaptive solver)
    labels : AdaptiveLabels/None
        Labels of the backward label-setting (adaptive solver)
    """
    def __init__(self, path, cost_value, label, variant, frontier=None,
                 labels=None):
        super().__init__()
        self.path = tuple(path)
        self.cost_value = float(cost_value)
        self.label = label
        self.variant = variant
        self.frontier = frontier
        self.labels = labels

    def to_dict(self):
        return {'path': list(self.path), 'value': self.cost_value,
                'cost': self.label.cost, 'survival': self.label.survival,
                'variant': self.variant}

    def __repr__(self):
        return '<Instance of {} ({}) with value {:.6g} on {} edges>'.format(
            self.__class__.__name__, self.variant, self.cost_value,
            len(self.path))


class CommodityRevenue(BaseData):
    """
    Revenue per passenger of one commodity

    Attributes
    ----------
    index : int
        Index of the commodity
    gamma : float
        Revenue per passenger
    choice : str
        'ticket' or 'evade'
    path : tuple
        Edge ids of the path that the passengers travel
    evasion : float
        Expected cost of the best evasion path, None if not computed
    evasion_path : tuple
        Edge ids of the best evasion path, empty if not computed
    """
    def __init__(self, index, gamma, choice, path, evasion=None,
                 evasion_path=()):
        super().__init__()
        self.index = index
        self.gamma = float(gamma)
        self.choice = choice
        self.path = tuple(path)
        self.evasion = evasion
        self.evasion_path = tuple(evasion_path)

    def to_dict(self):
        return {'commodity': self.index, 'revenue': self.gamma,
                'choice': self.choice, 'path': list(self.path)}


class RevenueBreakdown(BaseData):
    """
    Revenues of all commodities under one strategy

    Attributes
    ----------
    per_commodity : list
        CommodityRevenue instances in commodity order
    total_profit : float
        Sum of demand times revenue per passenger
    """
    _INDEX = 'commodity'

    def __init__(self, per_commodity, total_profit):
        super().__init__()
        self.per_commodity = list(per_commodity)
        self.total_profit = float(total_profit)

    def _rows(self):
        return [x.to_dict() for x in self.per_commodity]

    def __repr__(self):
        return '<Instance of {} with {} commodities and profit {:.6g}>'.format(
            self.__class__.__name__, len(self), self.total_profit)

    def __getitem__(self, attr):
        """
        Allow both attribute access and indexing of commodities
        """
        if isinstance(attr, int):
            return self.per_commodity[attr]
        return getattr(self, attr)

    def __len__(self):
        return len(self.per_commodity)

    def __iter__(self):
        return iter(self.per_commodity)


class RelaxationSolution(BaseData):
    """
    Optimum of the LP relaxation

    Attributes
    ----------
    strategy : InspectionStrategy
        The probabilities of the relaxation
    potentials : numpy.ndarray
        Node potentials, one row per commodity
    objective : float
        Weighted sum of the per-commodity lambdas
    per_commodity_lambda : numpy.ndarray
        Relaxed revenue per passenger of every commodity
    bound : float
        Certified upper bound on the relaxation optimum
    method : str
        Method that produced the solution
    iterations : int
        Iterations of the method (0 for the LP backend)
    fares : str
        Fare setting of the revenue caps, 'fix' or 'flex'
    """
    _INDEX = 'commodity'

    def __init__(self, strategy, potentials, objective, per_commodity_lambda,
                 bound, method, iterations=0, fares=FLEXIBLE):
        super().__init__()
        self.strategy = strategy
        self.potentials = potentials
        self.objective = float(objective)
        self.per_commodity_lambda = per_commodity_lambda
        self.bound = float(bound)
        self.method = method
        self.iterations = iterations
        self.fares = fares

    def _rows(self):
        return [{'commodity': i, 'lambda': float(x)}
                for i, x in enumerate(self.per_commodity_lambda)]

    def __repr__(self):
        return '<Instance of {} ({}, {} fares) with objective {:.6g}>'.format(
            self.__class__.__name__, self.method, self.fares, self.objective)


class LeaderSolution(BaseData):
    """
    Strategy of the leader together with the followers' responses

    Attributes
    ----------
    strategy : InspectionStrategy
        The inspection probabilities
    variant : VariantId
        The model variant the profit refers to
    breakdown : RevenueBreakdown
        Per-commodity responses and the total profit
    upper_bound : float
        Upper bound from the relaxation
    provenance : str
        'lp-round', 'multicut', 'grid' or 'local-search(<start>)'
    iterations : int
        Local search iterations used
    history : list
        Profit after every local search iteration
    """
    _INDEX = 'commodity'

    def __init__(self, strategy, variant, breakdown, upper_bound, provenance,
                 iterations=0, history=()):
        super().__init__()
        self.strategy = strategy
        self.variant = variant
        self.breakdown = breakdown
        self.upper_bound = float(upper_bound)
        self.provenance = provenance
        self.iterations = iterations
        self.history = list(history)

    @property
    def profit(self):
        """Total profit of the strategy"""
        return self.breakdown.total_profit

    @property
    def gap(self):
        """Ratio of profit and upper bound"""
        return gap_of(self.profit, self.upper_bound)

    def _rows(self):
        return self.breakdown._rows()  # pylint: disable=W0212

    def __repr__(self):
        return '<Instance of {} ({}, {}) with profit {:.6g} and gap {:.4f}>' \
            .format(self.__class__.__name__, self.variant, self.provenance,
                    self.profit, self.gap)


class RunRecord(BaseData):
    """
    One row of the benchmark table

    Attributes
    ----------
    instance, variant, algorithm : str
        What was run
    budget, profit, upper_bound, gap : float
        Results of the run, profit is NaN for failed runs
    wall_time_ms : float
        Duration of the run
    seed : int
        Seed of the instance
    status : str
        'ok', 'skipped' or 'failed: <reason>'
    """
    COLUMNS = ('instance', 'variant', 'algorithm', 'budget', 'profit',
               'upper_bound', 'gap', 'wall_time_ms', 'seed', 'status')

    def __init__(self, instance, variant, algorithm, budget, profit,
                 upper_bound, wall_time_ms, seed, status='ok'):
        super().__init__()
        self.instance = instance
        self.variant = str(variant)
        self.algorithm = algorithm
        self.budget = float(budget)
        self.profit = float(profit)
        self.upper_bound = float(upper_bound)
        self.gap = gap_of(self.profit, self.upper_bound)
        self.wall_time_ms = float(wall_time_ms)
        self.seed = int(seed)
        self.status = status

    def to_dict(self):
        return {key: getattr(self, key) for key in self.COLUMNS}

    def sort_key(self):
        """Key that gives the deterministic order of the CSV rows"""
        return (self.instance, self.variant, self.algorithm, self.budget)


class RunRecords(BaseData):
    """
    Collection of benchmark rows

    Attributes
    ----------
    data : list
        RunRecord instances in deterministic order
    """
    def __init__(self, records):
        super().__init__()
        self.data = sorted(records, key=RunRecord.sort_key)

    def _rows(self):
        return [x.to_dict() for x in self.data]

    def __repr__(self):
        return '<Instance of {} containing {} runs>'.format(
            self.__class__.__name__, len(self))

    def __getitem__(self, attr):
        if isinstance(attr, int):
            return self.data[attr]
        return getattr(self, attr)

    def __len__(self):
        return len(self.data)

    def __iter__(self):
        return iter(self.data)
