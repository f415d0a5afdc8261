"""
Betting decision rule with epsilon and EV thresholds
"""

from enum import Enum

from backend.core.models import BetChoice, BetDecision


def choose(ev_f, ev_u, p_f, p_u, epsilon, tau) -> BetChoice:
    # both sides priced below zero
    if ev_f < 0 and ev_u < 0:
        return BetChoice.NO_BET
    # outside the bettable band: back the probability favorite
    if epsilon is not None and p_f >= 0.5 + epsilon:
        return BetChoice.FAVORITE if p_f >= p_u else BetChoice.UNDERDOG
    if ev_f >= ev_u:
        return BetChoice.FAVORITE if ev_f > tau else BetChoice.NO_BET
    return BetChoice.UNDERDOG if ev_u > tau else BetChoice.NO_BET


def decide(ev_f, ev_u, p_f, p_u, epsilon, tau) -> BetDecision:
    """Apply the rule; epsilon=None disables the probability-favorite branch"""
    return BetDecision(
        choice=choose(ev_f, ev_u, p_f, p_u, epsilon, tau),
        ev_favorite=ev_f,
        ev_underdog=ev_u,
        p_favorite=p_f,
        p_underdog=p_u,
    )


class DecisionEncoding(str, Enum):
    """Integer conventions accepted at the serialization boundary"""

    ENUM = 'enum'
    ALG3 = 'alg3'   # -1 neither, 0 underdog, +1 favorite
    ALG6 = 'alg6'   # 0 neither, -1 underdog, +1 favorite


_CODES = {
    DecisionEncoding.ALG3: {BetChoice.NO_BET: -1, BetChoice.UNDERDOG: 0, BetChoice.FAVORITE: 1},
    DecisionEncoding.ALG6: {BetChoice.NO_BET: 0, BetChoice.UNDERDOG: -1, BetChoice.FAVORITE: 1},
}


def encode_choice(choice: BetChoice, encoding=DecisionEncoding.ENUM):
    encoding = DecisionEncoding(encoding)
    if encoding is DecisionEncoding.ENUM:
        return BetChoice(choice).value
    return _CODES[encoding][BetChoice(choice)]


def decode_choice(value, encoding=DecisionEncoding.ENUM) -> BetChoice:
    encoding = DecisionEncoding(encoding)
    if encoding is DecisionEncoding.ENUM:
        return BetChoice(value)
    for choice, code in _CODES[encoding].items():
        if code == int(value):
            return choice
    raise ValueError(f"{value!r} is not a valid {encoding.value} decision code")
