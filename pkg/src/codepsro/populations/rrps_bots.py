"""The rock-paper-scissors opponent population.

Twelve classic tournament-style heuristics. The one-line strategy glosses
these bots are known under leave their first moves and tie-breaking rules
open, so each bot's exact rule is frozen in its class docstring and pinned
by golden transcripts in the tests; reproducibility takes priority over
fidelity to the original (unavailable) tournament sources.

All bots are deterministic given the per-match seed passed to ``reset``.
"""

from __future__ import annotations

import random
from collections import Counter, defaultdict
from dataclasses import dataclass

from ..games.base import PAPER, Policy, ROCK, RRPS, RRPS_MOVES, SCISSORS
from ..games.rrps import COUNTER, stage_payoff

PI_DIGITS = (
    "314159265358979323846264338327950288419716939937510582097494459230781640"
    "628620899862803482534211706798214808651328230664709384460955058223172535"
    "940812848111745028410270193852110555964462294895493038196442881097566593"
    "344612847564823378678316527120190914564856692346034861045432664821339360"
    "726024914127372458700660631558817488152092096282925409171536436789259036"
    "001133053054882046652138414695194151160943305727036575959195309218611738"
    "193261179310511854807446237996274956735188575272489122793818301194912983"
    "367336244065664308602139494639522473719070217986094370277053921717629317"
    "675238467481846766940513200056812714526356082778577134275778960917363717"
    "872146844090122495343014654958537105079227968925892354201995611212902196"
    "086403441815981362977477130996051870721134999999837297804995105973173281"
    "609631859502445945534690830264252230825334468503526193118817101000313783"
    "875288658753320838142061717766914730359825349042875546873115956286388235"
    "378759375195778185778053217122680661300192787661119590921642019893809525"
    "720106548586327886593615338182796823030195203530185296899577362259941389"
    "124972177528347913151557485724245415069595082953311686172785588907509838"
    "175463746493931925506040092770167113900984882401"
)


class RrpsBot(Policy):
    """Base class handling the previous-round observation bookkeeping."""

    def reset(self, seed: int) -> None:
        self._rng = random.Random(seed)
        self.my_history: list[str] = []
        self.opp_history: list[str] = []
        self._setup()

    def _setup(self) -> None:
        pass

    def act(self, observation: dict) -> str:
        my_prev = observation.get("my_action")
        if my_prev is not None:
            opp_prev = observation["opponent_action"]
            self.my_history.append(my_prev)
            self.opp_history.append(opp_prev)
            self._observe(my_prev, opp_prev)
        return self._move()

    def _observe(self, my_prev: str, opp_prev: str) -> None:
        pass

    def _move(self) -> str:
        raise NotImplementedError


def _most_common(counts: dict[str, float]) -> str:
    """Highest-count move, ties broken toward ROCK < PAPER < SCISSORS."""
    best = max(counts.get(m, 0) for m in RRPS_MOVES)
    for move in RRPS_MOVES:
        if counts.get(move, 0) == best:
            return move
    raise AssertionError


def _least_common(counts: dict[str, float]) -> str:
    worst = min(counts.get(m, 0) for m in RRPS_MOVES)
    for move in RRPS_MOVES:
        if counts.get(move, 0) == worst:
            return move
    raise AssertionError


class RandBot(RrpsBot):
    """Plays uniformly at random every round."""

    def _move(self) -> str:
        return self._rng.choice(RRPS_MOVES)


class RockBot(RrpsBot):
    """Plays ROCK every round."""

    def _move(self) -> str:
        return ROCK


class CopyBot(RrpsBot):
    """Beats the opponent's last move; plays ROCK on the first round."""

    def _move(self) -> str:
        if not self.opp_history:
            return ROCK
        return COUNTER[self.opp_history[-1]]


class RotateBot(RrpsBot):
    """Cycles ROCK, PAPER, SCISSORS, starting from ROCK."""

    def _move(self) -> str:
        return RRPS_MOVES[len(self.my_history) % 3]


class PiBot(RrpsBot):
    """Plays a fixed sequence: decimal digits of pi, each taken mod 3.

    Digit d maps to (ROCK, PAPER, SCISSORS)[d % 3]; the 1200-digit table
    wraps around for longer matches.
    """

    def _move(self) -> str:
        digit = int(PI_DIGITS[len(self.my_history) % len(PI_DIGITS)])
        return RRPS_MOVES[digit % 3]


class FreqBot2(RrpsBot):
    """Frequency analysis: counters the opponent's most frequent move.

    With no observations yet every count is zero, so the tie rule selects
    ROCK as the forecast and the bot opens with PAPER.
    """

    def _setup(self) -> None:
        self._counts = Counter()

    def _observe(self, my_prev, opp_prev) -> None:
        self._counts[opp_prev] += 1

    def _move(self) -> str:
        return COUNTER[_most_common(self._counts)]


class DriftBot(RrpsBot):
    """Random walk over its own moves.

    Opens uniformly at random, then each round shifts its previous move's
    index by -1, 0 or +1 (uniformly) modulo 3.
    """

    def _move(self) -> str:
        if not self.my_history:
            return self._rng.choice(RRPS_MOVES)
        index = RRPS_MOVES.index(self.my_history[-1])
        return RRPS_MOVES[(index + self._rng.choice((-1, 0, 1))) % 3]


class AntiFlatBot(RrpsBot):
    """Assumes the opponent balances its own move frequencies.

    Forecasts the opponent's next move as the move the opponent has played
    least so far (ties toward ROCK < PAPER < SCISSORS) and plays the
    counter. Starts by forecasting ROCK, hence opens with PAPER. Maximally
    loses to constant bots, which makes it a useful exploitability probe.
    """

    def _setup(self) -> None:
        self._counts = Counter()

    def _observe(self, my_prev, opp_prev) -> None:
        self._counts[opp_prev] += 1

    def _move(self) -> str:
        return COUNTER[_least_common(self._counts)]


class SwitchBot(RrpsBot):
    """Never repeats its own previous move; picks one of the other two."""

    def _move(self) -> str:
        if not self.my_history:
            return self._rng.choice(RRPS_MOVES)
        options = [m for m in RRPS_MOVES if m != self.my_history[-1]]
        return self._rng.choice(options)


class FlatBot3(RrpsBot):
    """Keeps its own move distribution flat.

    Plays uniformly among the moves it has used least often so far.
    """

    def _move(self) -> str:
        counts = Counter(self.my_history)
        least = min(counts.get(m, 0) for m in RRPS_MOVES)
        options = [m for m in RRPS_MOVES if counts.get(m, 0) == least]
        return self._rng.choice(options)


class MultiBot(RrpsBot):
    """Switches between internal sub-policies based on profitability.

    Sub-policies: the three constant bots, beat-the-opponent's-last-move,
    and counter-the-opponent's-most-frequent-move. Every round each
    sub-policy proposes a move; the bot plays the proposal of the
    sub-policy with the highest cumulative hypothetical payoff so far
    (ties broken by registration order).
    """

    def _setup(self) -> None:
        self._counts = Counter()
        self._subs = [
            ("rock", lambda: ROCK),
            ("paper", lambda: PAPER),
            ("scissors", lambda: SCISSORS),
            ("beat_last", self._beat_last),
            ("beat_freq", self._beat_freq),
        ]
        self._scores = {name: 0 for name, _ in self._subs}
        self._last_proposals: dict[str, str] | None = None

    def _beat_last(self) -> str:
        if not self.opp_history:
            return ROCK
        return COUNTER[self.opp_history[-1]]

    def _beat_freq(self) -> str:
        return COUNTER[_most_common(self._counts)]

    def _observe(self, my_prev, opp_prev) -> None:
        if self._last_proposals is not None:
            for name, proposal in self._last_proposals.items():
                self._scores[name] += stage_payoff(proposal, opp_prev)
        self._counts[opp_prev] += 1

    def _move(self) -> str:
        proposals = {name: sub() for name, sub in self._subs}
        self._last_proposals = proposals
        best = max(self._scores[name] for name, _ in self._subs)
        for name, _ in self._subs:
            if self._scores[name] == best:
                return proposals[name]
        raise AssertionError


class MarkovBot(RrpsBot):
    """Maximum-likelihood prediction over opponent n-grams (order 5).

    Counts which move followed each length-5 window of opponent moves. If
    the current window has been seen at least once, the forecast is the
    highest-count successor (ties toward ROCK < PAPER < SCISSORS) and the
    counter move is played; otherwise the bot plays uniformly at random.
    """

    order = 5

    def _setup(self) -> None:
        self._model: dict[tuple, Counter] = defaultdict(Counter)

    def _observe(self, my_prev, opp_prev) -> None:
        if len(self.opp_history) > self.order:
            window = tuple(self.opp_history[-self.order - 1:-1])
            self._model[window][opp_prev] += 1

    def _move(self) -> str:
        if len(self.opp_history) >= self.order:
            window = tuple(self.opp_history[-self.order:])
            counts = self._model.get(window)
            if counts:
                return COUNTER[_most_common(counts)]
        return self._rng.choice(RRPS_MOVES)


@dataclass(frozen=True)
class BotDescriptor:
    """A named, documented opponent with a reentrant instance factory."""

    name: str
    game_id: str
    description: str
    factory: object

    def make(self) -> Policy:
        return self.factory()


_RRPS_BOTS = [
    ("randbot", RandBot, "uniform random move every round"),
    ("rockbot", RockBot, "always plays ROCK"),
    ("copybot", CopyBot, "beats the opponent's last move (opens ROCK)"),
    ("rotatebot", RotateBot, "cycles ROCK, PAPER, SCISSORS"),
    ("pibot", PiBot, "fixed sequence from the decimal digits of pi mod 3"),
    ("freqbot2", FreqBot2, "counters the opponent's most frequent move"),
    ("driftbot", DriftBot, "random walk of +-1 step around its own last move"),
    ("antiflatbot", AntiFlatBot,
     "counters the opponent's least frequent move"),
    ("switchbot", SwitchBot, "always switches away from its own last move"),
    ("flatbot3", FlatBot3, "plays uniformly among its least-used moves"),
    ("multibot", MultiBot,
     "switches between internal sub-policies based on profitability"),
    ("markov5", MarkovBot,
     "order-5 Markov prediction of the opponent, counter move played"),
]


def rrps_population() -> list[BotDescriptor]:
    """The documented RRPS opponent subset, in fixed registration order."""
    return [
        BotDescriptor(name=name, game_id=RRPS, description=desc, factory=cls)
        for name, cls, desc in _RRPS_BOTS
    ]
