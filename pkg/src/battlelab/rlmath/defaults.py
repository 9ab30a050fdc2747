"""Every tunable constant of the offline-RL math, in one place.

* Exponential weights default to beta = 0.5 with weights clipped into
  [1e-5, 50]; the "extreme" preset uses beta = 1 with an upper clip of
  100 (the lower clip keeps the positive sign an exponential implies).
* Value classification uses 96 bins spaced evenly over [-110, 110],
  matching the reward function's extremes.
* Critics train over several discount horizons; 0.999 is the evaluation
  head.
* Auto-forfeit fires after the win estimate stays below 5% for 5
  consecutive turns (plumbing defaults, config-exposed).
"""

EXP_BETA = 0.5
EXP_CLIP_LO = 1e-5
EXP_CLIP_HI = 50.0

EXP_EXTREME_BETA = 1.0
EXP_EXTREME_CLIP_HI = 100.0

BINARY_MAXQ_LAMBDA = 1.0

VALUE_N_BINS = 96
VALUE_LO = -110.0
VALUE_HI = 110.0

GAMMAS = (0.7, 0.9, 0.95, 0.99, 0.995, 0.999)
EVAL_GAMMA = 0.999

WIN_PROB_REWARD_SCALE = 100.0
AUTO_FORFEIT_THRESHOLD = 0.05
AUTO_FORFEIT_PATIENCE = 5
