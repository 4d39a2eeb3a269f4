"""Constants that define follower choices"""

TICKET = 'ticket'
EVADE = 'evade'
