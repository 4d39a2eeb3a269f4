"""Module that evaluates the revenue of the leader"""

import logging
import math

from .data import CommodityRevenue, RevenueBreakdown
from .followers import (solve_adaptive, solve_nonadaptive_exact,
                        solve_nonadaptive_fptas)
from .types import choices
from .types.tolerances import TOL
from .types.variants import FIXED, NON_ADAPTIVE, parse

logger = logging.getLogger(__name__)


def _best_response(instance, strategy, commodity, followers, epsilon):
    if followers == NON_ADAPTIVE:
        if epsilon is not None:
            return solve_nonadaptive_fptas(instance, strategy, commodity,
                                           epsilon)
        return solve_nonadaptive_exact(instance, strategy, commodity)
    return solve_adaptive(instance, strategy, commodity)


def revenue(instance, strategy, commodity, variant, epsilon=None):
    """
    Revenue per passenger of one commodity

    With fixed fares the passenger compares the best evasion against the
    ticket (shortest path plus ticket price). Ties within 1e-9 are resolved
    in favour of the leader, over the ticket and all tied evasion paths.
    With flexible fares the ticket price equals the willingness to pay, the
    best evasion value minus the shortest path cost.

    :param Instance: The instance
    :param InspectionStrategy: The inspection probabilities
    :param int: Index of the commodity
    :param str/VariantId: One of 'fix-n', 'fix-a', 'flex-n', 'flex-a'
    :param float/None: Use the approximation scheme for non-adaptive
        followers with this epsilon
    :return CommodityRevenue: Revenue, choice and path
    """
    variant = parse(variant)
    fine = instance.fine
    k = instance.commodities[commodity]
    sp_cost, sp_path = instance.sp_cost(commodity), instance.sp_path(commodity)
    result = _best_response(instance, strategy, commodity, variant.followers,
                            epsilon)
    evasion, route = result.cost_value, result.path

    if variant.fares != FIXED:
        gamma = min(max(evasion - sp_cost, 0.0), fine)
        return CommodityRevenue(commodity, gamma, choices.TICKET, sp_path,
                                evasion, route)

    ticket_value = sp_cost + k.ticket
    if ticket_value < evasion - TOL:
        return CommodityRevenue(commodity, k.ticket, choices.TICKET, sp_path,
                                evasion, route)

    # Fines collected on the best evasion paths, tied ones included
    options = [(fine * (1.0 - result.label.survival), result.path)]
    if result.frontier is not None:
        for label in result.frontier:
            value = label.cost + (1.0 - label.survival) * fine
            if value <= evasion + TOL:
                options.append((fine * (1.0 - label.survival), label.path))
    fined, path = min(options, key=lambda x: (-x[0], x[1]))

    if evasion < ticket_value - TOL or fined > k.ticket:
        return CommodityRevenue(commodity, fined, choices.EVADE, path, evasion,
                                route)
    return CommodityRevenue(commodity, k.ticket, choices.TICKET, sp_path,
                            evasion, route)


def evaluate_profit(instance, strategy, variant, epsilon=None):
    """
    Revenues of all commodities and the total profit

    :param Instance: The instance
    :param InspectionStrategy: The inspection probabilities
    :param str/VariantId: The model variant
    :param float/None: Epsilon of the approximation scheme, exact if None
    :return RevenueBreakdown: The per-commodity revenues and their sum
    """
    instance.check_strategy(strategy)
    parts = [revenue(instance, strategy, i, variant, epsilon)
             for i in range(instance.n_commodities)]
    total = math.fsum(k.demand * x.gamma
                      for k, x in zip(instance.commodities, parts))
    return RevenueBreakdown(parts, total)
