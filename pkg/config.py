"""
Configuration settings for the soliton curvature verification engine.
"""
import os
from dotenv import load_dotenv

load_dotenv()

TOOL_VERSION = "1.0.0"

# Jet Configuration
JET_ORDER = int(os.getenv('SOLITON_JET_ORDER', '4'))
POINT_BATCH_SIZE = int(os.getenv('SOLITON_POINT_BATCH_SIZE', '256'))

# Quadrature Configuration
DEFAULT_RESOLUTION = int(os.getenv('SOLITON_RESOLUTION', '64'))
MIN_RESOLUTION = 8
GL_PANEL_NODES = 16
TAIL_TOLERANCE = 1e-12
TAIL_POLY_DEGREE = 6
MAX_GRID_POINTS = 300_000
REGULAR_VALUE_FLOOR = 1e-6

# Tolerances
DEFAULT_TOLERANCE = 1e-6
POINTWISE_TOLERANCE = 1e-8
SOLITON_RESIDUAL_TOLERANCE = 1e-10
DIVERGENCE_TOLERANCE = 1e-6
STOKES_TOLERANCE = 1e-8
BACH_LINE_RTOL = 1e-12

# Finite Difference Protocol
FD_STEPS = (1e-3, 5e-4)
FD_TOLERANCE = 1e-4
DIVERGENCE_FD_STEP = 1e-2
VARIATION_RESOLUTION = int(os.getenv('SOLITON_VARIATION_RESOLUTION', '32'))
TT_MODE_SEARCH_RANGE = 3
GRADIENT_FIELD_COUNT = 5
GRADIENT_PAIRING_FLOOR = 1e-8
GRADIENT_MAX_DRAWS = 20

# Sampling
RANDOM_SEED = int(os.getenv('SOLITON_RANDOM_SEED', '20240611'))
SAMPLE_POINTS = 100
STOKES_FIELD_COUNT = 10

# Model Parameters
CONFORMAL_TORUS_AMPLITUDE = float(os.getenv('SOLITON_TORUS_AMPLITUDE', '0.1'))

# Suite Defaults
CATALOG_SOLITONS = ["gaussian", "sphere4", "cyl-s3xr", "cyl-s2xr2"]
IDENTITY_IDS = [
    "L2.2-1", "L2.2-2", "L2.2-3", "L2.2-4", "L2.2-5", "L2.2-6",
    "L3.1", "EQ-VW", "L5.1", "L5.1-c",
    "L7.1-1", "L7.1-2", "L7.1-3", "L7.3", "L7.4",
]
DEFAULT_R_OFFSETS = [1.0]
DEFAULT_C_VALUES = [1.0]
DEFAULT_RIGIDITY_R = [0.5]
DEFAULT_CHECKS = ["pointwise", "integrals", "rigidity"]
DEFAULT_STABILITY_GRID = [(1.0, 0.0), (1.0, 1.0 / 3.0), (0.0, 1.0), (0.5, 1.0 / 6.0), (-1.0, 0.0)]
DEFAULT_STABILITY_MU0 = 3.0
DEFAULT_STABILITY_R = 6.0
DEFAULT_VARIATION_PARAMS = [(1.0, 0.0), (0.0, 1.0)]
DEFAULT_VARIATION_MODEL = "conformal-torus"
SUITE_CHECKS = ["pointwise", "integrals", "rigidity", "stokes", "decay", "torus-energy", "stability", "variation"]

# File Paths
RESULTS_DIR = os.getenv('SOLITON_RESULTS_DIR', 'results/')
LOGS_DIR = os.getenv('SOLITON_LOGS_DIR', 'logs/')

# Logging Configuration
LOG_LEVEL = os.getenv('LOG_LEVEL', 'INFO')
LOG_FORMAT = '%(asctime)s - %(name)s - %(levelname)s - %(message)s'
