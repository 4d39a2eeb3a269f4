"""Constants that define the four model variants"""

from collections import namedtuple

from ..errors import InvalidVariantError

# Ticket pricing of the operator
FIXED = 'fix'
FLEXIBLE = 'flex'

# Behaviour of the passengers
NON_ADAPTIVE = 'n'
ADAPTIVE = 'a'

FIX_N = 'fix-n'
FIX_A = 'fix-a'
FLEX_N = 'flex-n'
FLEX_A = 'flex-a'
ALL = (FIX_N, FIX_A, FLEX_N, FLEX_A)
FOLLOWERS = (NON_ADAPTIVE, ADAPTIVE)


class VariantId(namedtuple('VariantId', ['fares', 'followers'])):
    """Pair of the fare setting and the follower model"""
    __slots__ = ()

    def __str__(self):
        return '{}-{}'.format(self.fares, self.followers)


def parse(variant):
    """
    Convert a variant given as string (e.g. 'flex-n') to VariantId

    :param str/VariantId: The variant
    :return VariantId: The parsed variant
    """
    if isinstance(variant, VariantId):
        return variant
    if variant not in ALL:
        raise InvalidVariantError(variant, ALL)
    fares, followers = variant.split('-')
    return VariantId(fares, followers)


def parse_followers(followers):
    """
    Check the follower model given as 'n' or 'a'

    :param str: The follower model
    :return str: The same value
    """
    if followers not in FOLLOWERS:
        raise InvalidVariantError(followers, FOLLOWERS)
    return followers


def parse_fares(fares):
    """
    Fare setting of a variant, or the fare setting itself

    :param str/VariantId: 'fix', 'flex' or a model variant
    :return str: 'fix' or 'flex'
    """
    if fares in (FIXED, FLEXIBLE):
        return fares
    return parse(fares).fares
