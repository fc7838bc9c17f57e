from collections import defaultdict
import random
from typing import Any, Callable, Dict, List, Optional, Tuple


class Agent:
  """An expert agent for Repeated Rock Paper Scissors, engineered to defeat
  a field of sophisticated, adaptive opponents.

  This agent's strategy is a significant enhancement of the 'ensemble of 
  experts' paradigm, built on four core principles:

  1.  **Superset Expert Ensemble**: The agent employs a vast portfolio of
      predictive experts designed to be a strict superset of those used by its
      competitors. This includes high-order Markov models (up to 8th order),
      complex reactive/joint models, and a wide range of periodic and
      heuristic predictors. By having more 'lenses' to view the game, it can
      detect patterns that other agents cannot.

  2.  **Aggressive, High-Confidence Adaptation**: The agent uses a highly
      aggressive weighted voting system, weighting each expert's vote by the
      *fifth power* of its score. This allows the agent to rapidly and
      decisively lock onto successful predictive models while effectively
      eliminating noise from the dozens of other, less-successful experts.

  3.  **Advanced Meta-Prediction ('Theory of Mind')**: The agent not only models
      the opponent but also models itself being modeled by the opponent. Its
      most critical expert, `meta_imitation`, deduces the opponent's likely
      predictive model by observing which of its own strategies is currently
      most successful. It then simulates the opponent's prediction of its own
      move and plays the perfect counter to the opponent's anticipated play.

  4.  **Strategic Randomization**: To combat the meta-predictors of its
      opponents, the agent introduces randomness at key decision points. When
      any of its predictive models or the final vote tally results in a tie,
      it chooses randomly among the best options. This makes its own behavior
      significantly harder to predict and exploit.

  Combined with finely tuned hyperparameters for a 1000-round game (a
  long-memory decay rate of 0.985), this agent is designed to out-learn, 
  out-adapt, and out-think its competition.
  """

  def __init__(self):
    """Initializes the agent's constants, models, and meta-strategy state."""
    # Game constants
    self.MOVES = ['ROCK', 'PAPER', 'SCISSORS']
    self.COUNTER_MOVES = {
        'ROCK': 'PAPER',
        'PAPER': 'SCISSORS',
        'SCISSORS': 'ROCK',
    }

    # Hyperparameters tuned for a 1000-round game against strong learners
    self.decay = 0.985  # Slower decay for longer memory and pattern stability
    self.vote_power = (
        5  # Use score^5 for extremely aggressive, high-confidence adaptation
    )

    # State is initialized in reset()
    self.reset()

  def reset(self) -> None:
    """Resets all agent state for the beginning of a new match."""
    self.my_history: List[str] = []
    self.opponent_history: List[str] = []

    # --- Underlying predictive models (Opponent's patterns) ---
    self.opp_markov_models = {
        i: defaultdict(lambda: defaultdict(int)) for i in range(1, 9)
    }  # n=1 to 8
    self.reactive_model = defaultdict(lambda: defaultdict(int))
    self.joint_hist_model = defaultdict(lambda: defaultdict(int))
    self.freq_model = defaultdict(int)

    # --- Underlying predictive models (My own patterns for meta-experts) ---
    self.my_markov_models = {
        i: defaultdict(lambda: defaultdict(int)) for i in range(1, 9)
    }  # n=1 to 8
    self.my_reactive_model = defaultdict(lambda: defaultdict(int))
    self.my_joint_hist_model = defaultdict(lambda: defaultdict(int))

    # --- Meta-learning state (The Experts) ---
    self.experts: Dict[str, Callable[[], Optional[str]]] = {
        # Opponent-history-based predictors (Markov up to 8th order)
        **{
            f'opp_markov{i}': self._create_opp_markov_predictor(i)
            for i in range(1, 9)
        },
        # My-history-based predictors
        'reactive': self._predict_reactive,
        'joint_hist': self._predict_joint_hist,
        # Simple statistical predictors
        'frequentist': self._predict_frequentist,
        # Heuristic predictors
        'copy_opponent': self._predict_copy_opponent,
        'copy_me': self._predict_copy_me,
        'rotator': self._predict_rotator,
        'counter_rotator': self._predict_counter_rotator,
        # Periodic predictors (up to 12 rounds)
        **{
            f'periodic_{i}': self._create_periodic_predictor(i)
            for i in range(2, 13)
        },
        # Standard Meta-predictors (Theory of Mind Level 1)
        **{
            f'meta_my_markov{i}': self._create_meta_my_markov_predictor(i)
            for i in range(1, 4)
        },
        'meta_my_reaction': self._predict_meta_my_reaction,
        'meta_my_joint': self._predict_meta_my_joint,
        # Advanced Meta-predictor (Theory of Mind Level 2)
        'meta_imitation': self._predict_meta_imitation,
    }
    self.expert_scores = {name: 1.0 for name in self.experts}
    self.last_predictions: Dict[str, Optional[str]] = {
        name: None for name in self.experts
    }

  # --- Update Methods ---

  def _update_scores(self, actual_opponent_move: str) -> None:
    """Updates expert scores based on their last prediction's accuracy."""
    for name, prediction in self.last_predictions.items():
      self.expert_scores[name] *= self.decay
      if prediction == actual_opponent_move:
        self.expert_scores[name] += 1

  def _update_models(self, my_action: str, opponent_action: str) -> None:
    """Updates all internal statistical models with the last round's data."""
    self.freq_model[opponent_action] += 1

    if self.my_history:
      self.reactive_model[self.my_history[-1]][opponent_action] += 1
      joint_key = (self.my_history[-1], self.opponent_history[-1])
      self.joint_hist_model[joint_key][opponent_action] += 1
      self.my_joint_hist_model[joint_key][my_action] += 1

    if self.opponent_history:
      self.my_reactive_model[self.opponent_history[-1]][my_action] += 1

    for n in self.opp_markov_models:
      if len(self.opponent_history) >= n:
        key = tuple(self.opponent_history[-n:])
        self.opp_markov_models[n][key][opponent_action] += 1
      if len(self.my_history) >= n:
        key = tuple(self.my_history[-n:])
        self.my_markov_models[n][key][my_action] += 1

  # --- Expert Prediction Methods ---

  def _get_best_prediction(self, model: Dict, key: Any) -> Optional[str]:
    """Helper to get the most likely move from a model given a key.

    Crucially, it breaks ties randomly to make our agent less predictable.
    """
    predictions = model.get(key)
    if not predictions:
      return None
    max_val = max(predictions.values())
    best_moves = [move for move, val in predictions.items() if val == max_val]
    return random.choice(best_moves)

  def _create_opp_markov_predictor(self, n: int) -> Callable[[], Optional[str]]:
    """Factory for creating n-th order Markov model predictors for the opponent."""

    def predictor() -> Optional[str]:
      if len(self.opponent_history) < n:
        return None
      key = tuple(self.opponent_history[-n:])
      return self._get_best_prediction(self.opp_markov_models[n], key)

    return predictor

  def _predict_reactive(self) -> Optional[str]:
    if not self.my_history:
      return None
    return self._get_best_prediction(self.reactive_model, self.my_history[-1])

  def _predict_joint_hist(self) -> Optional[str]:
    if not self.my_history:
      return None
    key = (self.my_history[-1], self.opponent_history[-1])
    return self._get_best_prediction(self.joint_hist_model, key)

  def _predict_frequentist(self) -> Optional[str]:
    return self._get_best_prediction({'freq': self.freq_model}, 'freq')

  def _predict_copy_opponent(self) -> Optional[str]:
    return self.opponent_history[-1] if self.opponent_history else None

  def _predict_copy_me(self) -> Optional[str]:
    return self.my_history[-1] if self.my_history else None

  def _predict_rotator(self) -> Optional[str]:
    if not self.opponent_history:
      return None
    return self.COUNTER_MOVES.get(self.opponent_history[-1])

  def _predict_counter_rotator(self) -> Optional[str]:
    if not self.opponent_history:
      return None
    return {v: k for k, v in self.COUNTER_MOVES.items()}.get(
        self.opponent_history[-1]
    )

  def _create_periodic_predictor(self, n: int) -> Callable[[], Optional[str]]:
    """Factory for creating predictors for various periodicities."""

    def predictor() -> Optional[str]:
      return (
          self.opponent_history[-n] if len(self.opponent_history) >= n else None
      )

    return predictor

  def _create_meta_my_markov_predictor(
      self, n: int
  ) -> Callable[[], Optional[str]]:
    """Assumes opponent predicts my n-th order markov pattern and counters it."""

    def predictor() -> Optional[str]:
      if len(self.my_history) < n:
        return None
      key = tuple(self.my_history[-n:])
      predicted_my_move = self._get_best_prediction(
          self.my_markov_models[n], key
      )
      return (
          self.COUNTER_MOVES.get(predicted_my_move)
          if predicted_my_move
          else None
      )

    return predictor

  def _predict_meta_my_reaction(self) -> Optional[str]:
    """Assumes opponent predicts my reaction pattern and counters it."""
    if not self.opponent_history:
      return None
    predicted_my_reaction = self._get_best_prediction(
        self.my_reactive_model, self.opponent_history[-1]
    )
    return (
        self.COUNTER_MOVES.get(predicted_my_reaction)
        if predicted_my_reaction
        else None
    )

  def _predict_meta_my_joint(self) -> Optional[str]:
    """Assumes opponent predicts my joint history pattern and counters it."""
    if not self.my_history:
      return None
    key = (self.my_history[-1], self.opponent_history[-1])
    predicted_my_move = self._get_best_prediction(self.my_joint_hist_model, key)
    return (
        self.COUNTER_MOVES.get(predicted_my_move) if predicted_my_move else None
    )

  def _predict_meta_imitation(self) -> Optional[str]:
    """Predicts by assuming the opponent is using a model similar to our own

    best-performing model to predict our moves. This is Theory of Mind Level 2.
    """
    # Define the set of our experts that an opponent is likely to be using.
    opponent_modeling_experts = {
        'opp_markov1': (self.my_markov_models[1], self.my_history, 1),
        'opp_markov2': (self.my_markov_models[2], self.my_history, 2),
        'opp_markov3': (self.my_markov_models[3], self.my_history, 3),
        'reactive': (self.my_reactive_model, self.opponent_history, 1),
        'joint_hist': (
            self.my_joint_hist_model,
            (self.my_history, self.opponent_history),
            2,
        ),
    }
    # Find which of these opponent-modeling experts is performing best for us.
    best_expert_name = max(
        opponent_modeling_experts,
        key=lambda name: self.expert_scores.get(name, 0),
    )
    model, history_data, hist_len = opponent_modeling_experts[best_expert_name]

    key = None
    # Construct the key for the corresponding model of *our* behavior.
    if best_expert_name == 'joint_hist':
      if len(history_data[0]) >= 1 and len(history_data[1]) >= 1:
        key = (history_data[0][-1], history_data[1][-1])
    elif isinstance(history_data, list) and len(history_data) >= hist_len:
      key = tuple(history_data[-hist_len:])

    if key is None:
      return None

    # Predict our own move using the model the opponent is likely using.
    predicted_my_move = self._get_best_prediction(model, key)
    # Assume the opponent will play the counter to our predicted move.
    return (
        self.COUNTER_MOVES.get(predicted_my_move) if predicted_my_move else None
    )

  # --- Main Agent Logic ---

  def act(self, observation: dict[str, Any]) -> str:
    """Determines the agent's next move by learning from the past and using the

    weighted ensemble to predict the opponent's action.
    """
    # First round: reset state and play randomly.
    if observation.get('my_action') is None:
      self.reset()
      return random.choice(self.MOVES)

    # --- 1. Learning Phase (from previous turn's outcome) ---
    my_prev_action = observation['my_action']
    opp_prev_action = observation['opponent_action']

    self._update_scores(opp_prev_action)
    self._update_models(my_prev_action, opp_prev_action)
    self.my_history.append(my_prev_action)
    self.opponent_history.append(opp_prev_action)

    # --- 2. Prediction Phase (for the current turn) ---
    for name, func in self.experts.items():
      self.last_predictions[name] = func()

    # --- 3. Action Phase (for the current turn) ---
    vote_tally = defaultdict(float)
    for name, prediction in self.last_predictions.items():
      if prediction is not None:
        vote_tally[prediction] += self.expert_scores[name] ** self.vote_power

    if vote_tally:
      # Determine the most likely opponent move using our tie-breaking helper.
      predicted_opponent_move = self._get_best_prediction(
          {'vote': vote_tally}, 'vote'
      )
      return self.COUNTER_MOVES[predicted_opponent_move]

    # Ultimate fallback: If no expert could predict, play randomly.
    return random.choice(self.MOVES)
