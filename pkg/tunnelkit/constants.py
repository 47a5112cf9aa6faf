SCHEMA_VERSION = 1

# hamflow
DEFAULT_LABEL_SPACING = 2e-3
DEFAULT_STEP_FRACTION = 1e-3
TOL_CAUSTIC = 1e-6

# symbol
H_FD = 1e-4

# manifold
XTOL = 1e-6
DEFAULT_PHASE_POINTS = 2001

# continuity
SIDE_OFFSET_CELLS = 3
SIDE_CELL_WIDTH = 2e-4
DEGENERATE_JUMP_TOL = 1e-8
BIRTH_WARMUP_STEPS = 3
JACOBIAN_FLOOR = 1e-9

# surgery
DEFAULT_BETA = 0.05
BLEND_SCALE_RATIO = 10.0
MAX_SHIFT_DOUBLINGS = 10
MAX_BACKFLOW_HALVINGS = 8

# reference
MASS_LEAKAGE_TOL = 1e-6
INSTABILITY_GROWTH = 10.0
DEFAULT_DX_OVER_EPSILON = 0.125
DEFAULT_RATE_FRACTION = 0.25

FLOAT_FORMAT = "%.17g"
