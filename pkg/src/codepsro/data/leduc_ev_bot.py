from typing import Any, Dict


class RepeatedLeducPokerBot:
  """A bot using a non-stationary strategy.

  It collapses its strategy into a single, continuous 'bravery' parameter. This
  parameter adapts based on the opponent's observed passivity and aggression,
  creating a reactive, non-stationary strategy designed to be difficult for
  learning opponents to model.
  """

  def __init__(self):
    """Initializes the bot."""
    self.player_id: int = -1
    self.opponent_id: int = -1
    self.card_ranking = {'J': 1, 'Q': 2, 'K': 3}
    self.game_count = 0

    self.alpha = 1.0  # Laplace smoothing parameter.
    # Model: info_set_str -> {'FOLD': count, 'CALL': count, 'RAISE': count}
    self.opponent_model = {}

  def _get_info_set_key(self, round_name, public_card, round_history) -> str:
    """Creates a unique key for an information set."""
    public_card_str = public_card if public_card else ''

    action_str = ''.join(a['action'][0] for a in round_history)
    return f'{round_name}:{public_card_str}:{action_str}'

  def receive_outcome(self, obs: Dict[str, Any]):
    """Receives the game outcome and updates the opponent action model."""
    self.game_count += 1
    action_history = obs.get('action_history', {})

    for round_name in ['PREFLOP', 'POSTFLOP']:
      round_history = action_history.get(round_name, [])
      # We need to build the history incrementally to get the info set *before* each action
      temp_round_history = []
      for action_event in round_history:
        if action_event.get('player_id') == self.opponent_id:
          public_card = (
              obs['public_state'].get('public_card')
              if round_name == 'POSTFLOP'
              else None
          )
          info_set_key = self._get_info_set_key(
              round_name, public_card, temp_round_history
          )

          if info_set_key not in self.opponent_model:
            self.opponent_model[info_set_key] = {
                'FOLD': self.alpha,
                'CALL': self.alpha,
                'RAISE': self.alpha,
            }

          action = action_event.get('action')
          if action in self.opponent_model[info_set_key]:
            self.opponent_model[info_set_key][action] += 1

        temp_round_history.append(action_event)

  def restart(self, player_id: int):
    """Starts a new game, assigning player position and adapting 'bravery'.

    Args:
        player_id: The player ID (0 or 1) for the new game.
    """
    self.player_id = player_id
    self.opponent_id = 1 - player_id

    # This method is called at the start of a new game.
    # We can reset any per-game state here if needed.
    pass

  def act(self, obs: Dict[str, Any]) -> str:
    """Outputs an action based on Expected Value (EV) calculations."""
    legal_actions = obs['player_view']['legal_actions']
    if not legal_actions:
      return 'CALL'

    # 1. Calculate Equity
    my_hand = obs['player_view']['hand']
    public_card = obs['public_state']['public_card']
    equity = self._calculate_equity(my_hand, public_card, obs)  # Pass obs here

    # 2. Calculate EV for each legal action
    evs = {}
    for action in legal_actions:
      evs[action] = self._calculate_action_ev(action, obs, equity)

    # 3. Choose best action
    best_action = max(evs, key=evs.get)
    return best_action

  def _calculate_equity(
      self, my_hand: str, public_card: str or None, obs: Dict[str, Any]
  ) -> float:
    """Calculates the equity of our hand against a distribution of opponent hands,

    weighted by opponent's observed actions in the current hand.
    Equity is the probability of winning at showdown.
    """
    deck = ['J', 'J', 'Q', 'Q', 'K', 'K']
    deck.remove(my_hand)
    if public_card:
      if public_card in deck:
        if public_card in deck:  # Check membership before removing
          deck.remove(public_card)

    possible_opponent_hands = deck
    if not possible_opponent_hands:
      return 0.5  # No possible hands for opponent, return neutral equity

    opponent_hand_weights = {
        hand: 1.0 for hand in possible_opponent_hands
    }  # Start with uniform weights

    # --- Add Weighting based on History ---
    action_history = obs.get('action_history', {})
    preflop_history = action_history.get('PREFLOP', [])
    postflop_history = action_history.get('POSTFLOP', [])

    opponent_preflop_raises = 0
    opponent_preflop_calls = 0  # Calls implying >0 bet (heuristic)
    opponent_postflop_raises = 0
    opponent_postflop_calls = 0  # Calls implying >0 bet (heuristic)

    # Simplified action parsing (doesn't know exact bet amounts)
    temp_round_hist = []
    for action_event in preflop_history:
      if action_event['player_id'] == self.opponent_id:
        action = action_event['action']
        # Check if this action faces a bet based on prior actions
        facing_bet = (
            any(
                a['action'] == 'RAISE'
                for a in temp_round_hist
                if a['player_id'] == self.player_id
            )
            or self.player_id == 1
        )  # P2 faces BB

        if action == 'RAISE':
          opponent_preflop_raises += 1
        elif (
            action == 'CALL' and facing_bet
        ):  # Count calls that match a bet/raise
          opponent_preflop_calls += 1
      temp_round_hist.append(action_event)

    temp_round_hist = []
    # Base postflop bet state on whether preflop ended with aggression
    postflop_facing_bet = False  # Initial state for P1 postflop
    if preflop_history:
      last_preflop_action = preflop_history[-1]
      # If last preflop action was a raise (either ours or theirs that we called)
      if last_preflop_action['action'] == 'RAISE':
        postflop_facing_bet = (
            True  # Simplified: assumes aggression carries over
        )

    for action_event in postflop_history:
      if action_event['player_id'] == self.opponent_id:
        action = action_event['action']
        # Check if opponent faced a bet in this round before their action
        currently_facing_bet = any(
            a['action'] == 'RAISE'
            for a in temp_round_hist
            if a['player_id'] == self.player_id
        )

        if action == 'RAISE':
          opponent_postflop_raises += 1
          postflop_facing_bet = True  # Their raise makes us face a bet
        elif (
            action == 'CALL' and currently_facing_bet
        ):  # Count calls that match a bet/raise
          opponent_postflop_calls += 1
          postflop_facing_bet = False  # Call equalizes bets
        elif (
            action == 'CALL' and not currently_facing_bet
        ):  # Zero-cost call (check)
          postflop_facing_bet = False  # Check equalizes bets
      else:  # Our action
        if action_event['action'] == 'RAISE':
          postflop_facing_bet = True  # We raised, opponent faces bet
        elif action_event['action'] == 'CALL':  # Our check or call
          # If we called a raise, bets are equal. If we checked, bets are equal.
          postflop_facing_bet = False
      temp_round_hist.append(action_event)

    # Apply weights (Heuristics - Requires Tuning)
    if opponent_preflop_raises > 0:
      for hand in list(opponent_hand_weights.keys()):
        if hand == 'J':
          opponent_hand_weights[hand] *= 0.1  # Less likely J
        if hand == 'Q':
          opponent_hand_weights[hand] *= 0.7
        if hand == 'K':
          opponent_hand_weights[hand] *= 2.0  # More likely K
    elif opponent_preflop_calls > 0:  # Called preflop but didn't raise
      for hand in list(opponent_hand_weights.keys()):
        if hand == 'J':
          opponent_hand_weights[hand] *= 1.2
        if hand == 'K':
          opponent_hand_weights[hand] *= 0.5  # Less likely K

    if public_card:
      if opponent_postflop_raises > 0:
        for hand in list(opponent_hand_weights.keys()):
          opp_rank_tuple = self._get_hand_rank(hand, public_card)
          is_pair = (
              opp_rank_tuple[0] >= 3 + self.card_ranking['J']
          )  # Check if it's any pair
          if not is_pair:
            opponent_hand_weights[
                hand
            ] *= 0.1  # Unlikely to raise postflop without a pair
          else:
            opponent_hand_weights[
                hand
            ] *= 2.0  # More likely to have a pair if raised

    # Normalize weights to form a probability distribution
    total_weight = sum(opponent_hand_weights.values())
    if (
        total_weight <= 1e-9
    ):  # Avoid division by zero / handle case where all weights -> 0
      # Reset to uniform if weights collapse
      opponent_hand_weights = {hand: 1.0 for hand in possible_opponent_hands}
      total_weight = sum(opponent_hand_weights.values())
      if total_weight <= 1e-9:
        return 0.5  # Still no weight, return neutral equity

    opponent_hand_probs = {
        hand: weight / total_weight
        for hand, weight in opponent_hand_weights.items()
    }
    # Filter out hands with zero probability for efficiency
    opponent_hand_probs = {
        h: p for h, p in opponent_hand_probs.items() if p > 1e-9
    }

    if not opponent_hand_probs:
      return 0.5  # Check again after filtering

    win, tie = 0.0, 0.0  # Use floats for weighted sum
    total_prob_considered = 0.0

    if public_card:  # Postflop Equity Calculation
      my_rank = self._get_hand_rank(my_hand, public_card)
      for opp_hand, prob in opponent_hand_probs.items():
        opp_rank = self._get_hand_rank(opp_hand, public_card)
        if my_rank > opp_rank:
          win += prob
        elif my_rank == opp_rank:
          tie += prob
        total_prob_considered += prob

      if total_prob_considered == 0:
        return 0.5
      # Weighted Equity = (Sum P(OppHand)*Win(OppHand) + 0.5 * Sum P(OppHand)*Tie(OppHand)) / Sum P(OppHand)
      # Since Sum P(OppHand) = total_prob_considered, this simplifies:
      return (win + 0.5 * tie) / total_prob_considered

    else:  # Preflop Equity Calculation (Average over public cards)
      total_weighted_outcomes = 0.0  # Sum of probabilities of paths considered

      # Need the deck *after* my card is removed, before considering opponent hand
      base_deck_for_opp = ['J', 'J', 'Q', 'Q', 'K', 'K']
      base_deck_for_opp.remove(my_hand)

      for opp_hand, opp_prob in opponent_hand_probs.items():
        # Create the deck for board cards given my_hand and opp_hand
        deck_for_board = list(base_deck_for_opp)
        if opp_hand not in deck_for_board:
          # This can happen if opponent_hand_weights included hands now impossible
          # due to filtering or deck state issues. Skip this opponent hand.
          continue
        deck_for_board.remove(opp_hand)

        if not deck_for_board:  # No possible board cards (e.g., K vs K preflop)
          # Rank based on private card only
          my_rank_priv = self.card_ranking[my_hand]
          opp_rank_priv = self.card_ranking[opp_hand]
          outcome_weight = (
              opp_prob  # Weight by probability of this opponent hand
          )
          if my_rank_priv > opp_rank_priv:
            win += outcome_weight
          elif my_rank_priv == opp_rank_priv:
            tie += outcome_weight
          total_weighted_outcomes += outcome_weight
          continue  # Skip board card loop for this opponent hand

        # Loop through possible board cards
        num_board_cards = len(deck_for_board)
        board_card_prob = (
            1.0 / num_board_cards
        )  # Uniform prob for each possible board card

        for board_card in deck_for_board:
          outcome_weight = (
              opp_prob * board_card_prob
          )  # Combined probability of this path

          my_rank_board = self._get_hand_rank(my_hand, board_card)
          opp_rank_board = self._get_hand_rank(opp_hand, board_card)

          if my_rank_board > opp_rank_board:
            win += outcome_weight
          # Loss contributes 0 to 'win' or 'tie'
          elif my_rank_board == opp_rank_board:
            tie += outcome_weight
          total_weighted_outcomes += outcome_weight

      if total_weighted_outcomes == 0:
        return 0.5  # Default if something went wrong
      # Equity = (Weighted Wins + 0.5 * Weighted Ties) / Total Weight Considered
      # Note: total_weighted_outcomes should ideally sum close to 1.0 if all paths are covered.
      # Normalizing by total_weighted_outcomes accounts for any paths skipped (e.g., impossible opp hands)
      return (win + 0.5 * tie) / total_weighted_outcomes

  def _get_hand_rank(
      self, private_card: str, public_card: str or None
  ) -> tuple[int, int]:
    """Assigns a numeric rank tuple to a hand for comparison."""
    private_rank = self.card_ranking[private_card]
    if not public_card:
      # Pre-showdown, just rank by private card
      return (private_rank, 0)

    public_rank = self.card_ranking[public_card]
    # Postflop
    if private_rank == public_rank:  # Pair
      # Major rank for pairs (4,5,6) is higher than for high cards (1,2,3)
      return (3 + private_rank, 0)
    else:  # High card
      # Major rank is the highest card, minor rank is the kicker
      return (max(private_rank, public_rank), min(private_rank, public_rank))

  def _get_opponent_action_probs(self, obs: Dict[str, Any]) -> Dict[str, float]:
    """Gets the opponent's likely response probabilities to our RAISE from our model."""
    round_name = obs['public_state']['round']
    public_card = obs['public_state']['public_card']

    current_history = obs['action_history'][round_name]
    # Simulate our raise to create the info set the opponent would face
    simulated_history = current_history + [
        {'player_id': self.player_id, 'action': 'RAISE'}
    ]
    info_set_key = self._get_info_set_key(
        round_name, public_card, simulated_history
    )

    if info_set_key in self.opponent_model:
      counts = self.opponent_model[info_set_key]
      total = sum(counts.values())
      if total > 0:
        return {action: count / total for action, count in counts.items()}

    # Default assumption if we have no data
    return {'FOLD': 0.33, 'CALL': 0.34, 'RAISE': 0.33}

  def _calculate_action_ev(
      self, action: str, obs: Dict[str, Any], equity: float
  ) -> float:
    """Calculates the Expected Value of a single action."""
    pot_size = obs['public_state']['pot_size']

    committed = [(100 - c) for c in obs['public_state']['chips']]
    my_committed = committed[self.player_id]
    opp_committed = committed[self.opponent_id]
    amount_to_call = opp_committed - my_committed

    round_name = obs['public_state']['round']
    raise_amount = 2 if round_name == 'PREFLOP' else 4

    if action == 'FOLD':
      return 0

    if action == 'CALL':
      pot_after_call = pot_size + amount_to_call
      return (equity * pot_after_call) - amount_to_call

    if action == 'RAISE':
      # EV(Raise) = P(Opponent Folds) * (Win Pot) + P(Opponent Calls) * (EV at Showdown)
      # We simplify by ignoring opponent re-raises.

      opp_probs = self._get_opponent_action_probs(obs)
      prob_opp_folds = opp_probs['FOLD']

      # What we win if opponent folds
      win_on_fold = pot_size

      # What happens if opponent calls our raise
      amount_to_raise = amount_to_call + raise_amount
      # Pot includes current pot, my raise, and opponent's call of the raise amount
      pot_after_opp_calls = pot_size + amount_to_raise + raise_amount

      value_if_called = (equity * pot_after_opp_calls) - amount_to_raise

      return (prob_opp_folds * win_on_fold) + (
          (1 - prob_opp_folds) * value_if_called
      )

    return -999  # Should not be reached
