"""
Contains configurations and settings used by the rest of the project.
"""

# number of Gaussian pseudo-samples in the bootstrap
DEFAULT_N_MC = 1000

# relative floor for ratio denominators, scaled by the
# grid mean of |center|
EPS_FLOOR = 1e-8

# composite Simpson panels for kernel integrals (even, so
# that x = 0 is a node)
QUAD_PANELS = 4096

# exponent of the MV search interval for n
MV_ETA = 0.47

# above this length the MV search interval moves up
MV_LARGE_N = 1000

# lattice steps and smallest bandwidth for MV selection
MV_STEP_N = 2
MV_STEP_B = 2
MV_B_MIN = 8

# size of the fixed MV evaluation grid
MV_EVAL_U = 8
MV_EVAL_THETA = 17

# local Whittle optimizer settings
WHITTLE_RESTARTS = 5
WHITTLE_MAXITER = 2000
WHITTLE_TOL = 1e-8

# recursions start this many draws before i = 1, at frozen u = 0
BURN_IN = 200

# shortest series accepted from files
MIN_SERIES_LENGTH = 50

# frozen-u reference spectra for models without a closed form
MC_TRUTH_LENGTH = 200000
MC_TRUTH_BANDWIDTH = 200

# stream addresses kept apart from bootstrap replicates (seed, m)
SIMULATION_STREAM = 4294967295
TRUTH_STREAM = 4294967294
