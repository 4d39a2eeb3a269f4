"""Various custom exceptions"""


class InstanceParseError(ValueError):
    """
    Exception that is raised when instance or strategy file cannot be parsed

    Attributes
    ----------
    MSG : string
        The exceptions message to print
    """
    MSG = 'Cannot parse input at %s: %s'

    def __init__(self, location, reason):
        """
        :param str: Line/column or field path where the problem was found
        :param str: Description of the problem
        """
        self.location = location
        self.message = self.MSG % (location, reason)
        super().__init__(self.message)


class InstanceValidationError(ValueError):
    """
    Exception that is raised when a parsed instance violates an invariant

    Attributes
    ----------
    MSG : string
        The exceptions message to print
    """
    MSG = 'Invalid instance: %s'

    def __init__(self, reason):
        """
        :param str: The violated invariant
        """
        self.message = self.MSG % reason
        super().__init__(self.message)


class InvalidStrategyError(ValueError):
    """
    Exception that is raised when inspection probabilities are out of range,
    exceed the budget or do not match the network

    Attributes
    ----------
    MSG : string
        The exceptions message to print
    """
    MSG = 'Invalid strategy: %s'

    def __init__(self, reason):
        """
        :param str: Description of the problem
        """
        self.message = self.MSG % reason
        super().__init__(self.message)


class InvalidPathError(ValueError):
    """
    Exception that is raised when an edge sequence is not a connected walk

    Attributes
    ----------
    MSG : string
        The exceptions message to print
    """
    MSG = 'Edge sequence %s is not a connected walk: %s'

    def __init__(self, path, reason):
        """
        :param list: The offending edge sequence
        :param str: Description of the problem
        """
        self.message = self.MSG % (list(path), reason)
        super().__init__(self.message)


class InvalidEpsilonError(ValueError):
    """
    Exception that is raised when the approximation parameter is not positive

    Attributes
    ----------
    MSG : string
        The exceptions message to print
    """
    MSG = 'Epsilon must be positive, got "%s"'

    def __init__(self, epsilon):
        """
        :param float: The value that was incorrectly used
        """
        self.message = self.MSG % epsilon
        super().__init__(self.message)


class NotSeriesParallelError(ValueError):
    """
    Exception that is raised when the series/parallel reduction gets stuck

    Attributes
    ----------
    MSG : string
        The exceptions message to print
    witness : list
        Edge ids of the irreducible configuration
    """
    MSG = 'Graph between "%s" and "%s" is not series-parallel, ' \
          'irreducible edges: %s'

    def __init__(self, source, target, witness):
        """
        :param str: Name of the source terminal
        :param str: Name of the target terminal
        :param list: Edge ids left after the reduction
        """
        self.witness = sorted(witness)
        self.message = self.MSG % (source, target, self.witness)
        super().__init__(self.message)


class OracleLimitError(ValueError):
    """
    Exception that is raised when the brute-force enumeration guard is exceeded

    Attributes
    ----------
    MSG : string
        The exceptions message to print
    """
    MSG = 'Brute-force guard exceeded: %s nodes and more than %s simple paths'

    def __init__(self, n_nodes, limit):
        """
        :param int: Number of nodes of the network
        :param int: Maximal number of enumerated paths
        """
        self.message = self.MSG % (n_nodes, limit)
        super().__init__(self.message)


class InvalidVariantError(ValueError):
    """
    Exception that is raised when unknown model variant is requested

    Attributes
    ----------
    MSG : string
        The exceptions message to print
    """
    MSG = 'Invalid variant "%s", should be one of %s'

    def __init__(self, variant, allowed):
        """
        :param str: The value that was passed
        :param iterable: Allowed values
        """
        self.message = self.MSG % (variant, ', '.join(allowed))
        super().__init__(self.message)


class InvalidConfigError(ValueError):
    """
    Exception that is raised when a configuration value is out of range

    Attributes
    ----------
    MSG : string
        The exceptions message to print
    """
    MSG = 'Invalid configuration: %s'

    def __init__(self, reason):
        """
        :param str: Description of the problem
        """
        self.message = self.MSG % reason
        super().__init__(self.message)


class InvalidSupportError(ValueError):
    """
    Exception that is raised when the candidate edge set of the local search
    misses edges used by the start strategy, or has unknown source

    Attributes
    ----------
    MSG : string
        The exceptions message to print
    """
    MSG = 'Invalid support: %s'

    def __init__(self, reason):
        """
        :param str: Description of the problem
        """
        self.message = self.MSG % reason
        super().__init__(self.message)


class GeneratorError(ValueError):
    """
    Exception that is raised when more commodities are requested than there
    are distinct ordered node pairs

    Attributes
    ----------
    MSG : string
        The exceptions message to print
    """
    MSG = 'Cannot draw %s distinct commodities from %s ordered node pairs'

    def __init__(self, requested, available):
        """
        :param int: Number of requested commodities
        :param int: Number of available ordered pairs
        """
        self.message = self.MSG % (requested, available)
        super().__init__(self.message)


class RelaxationError(RuntimeError):
    """
    Exception that is raised when the LP backend does not return an optimum

    Attributes
    ----------
    MSG : string
        The exceptions message to print
    """
    MSG = 'LP solver failed with status %s: %s'

    def __init__(self, status, reason):
        """
        :param int: Status code of the solver
        :param str: Message of the solver
        """
        self.message = self.MSG % (status, reason)
        super().__init__(self.message)


class RelaxationNotConvergedError(RuntimeError):
    """
    Exception that is raised when the supergradient ascent hits its iteration
    cap before the stopping rule fires

    Attributes
    ----------
    MSG : string
        The exceptions message to print
    solution : RelaxationSolution
        The best iterate found so far
    gap : float
        Certificate gap of the best iterate
    """
    MSG = 'Relaxation did not converge after %s iterations, ' \
          'certificate gap %s'

    def __init__(self, iterations, solution, gap):
        """
        :param int: Number of performed iterations
        :param RelaxationSolution: The best iterate
        :param float: Certificate gap of the best iterate
        """
        self.solution = solution
        self.gap = gap
        self.message = self.MSG % (iterations, gap)
        super().__init__(self.message)
