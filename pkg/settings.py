"""
xstable configuration
"""

import os

# ===== LATTICE CONFIGURATION =====
MAX_LATTICE_SIZE = 20           # Largest |I| for dense subset tables (2^20 entries)
MAX_PARTITION_SIZE = 10         # Largest |M| for partition-dependent ops (Bell(10) = 115975)
ZERO_TOLERANCE = 1e-9           # |v| <= ZERO_TOLERANCE * (1 + table max) counts as zero

# ===== MODEL CONFIGURATION =====
MOMENT_TOLERANCE = 1e-12        # Per-coordinate spectral moment sums must be 1 within this
PROBE_VALUES = [0.3, 1.0, 4.5]  # Coordinates used by model probe validation
PROBE_SCALES = [0.1, 1.0, 7.3]  # Homogeneity factors t checked on the probe grid
PROBE_TOLERANCE = 1e-10         # Relative tolerance of probe checks

# ===== DIAGNOSTICS CONFIGURATION =====
GRID_VALUES = [0.25, 0.5, 1.0, 2.0, 4.0]  # Default tensor grid values per coordinate
GRID_MAX_POINTS = 100_000       # Cap on grid size, larger grids are subsampled
CLAMP_SLACK = 1e-8              # Negative chi/d beyond -CLAMP_SLACK * scale is an error
WARN_SLACK = 1e-10              # Negative chi/d beyond -WARN_SLACK * scale is logged

# ===== DENSITY CONFIGURATION =====
FD_MIN_COORDINATE = 1e-3        # Finite differences refuse coordinates below this
FD_MAX_ORDER = 6                # Largest |B| for finite-difference mixed partials
RICHARDSON_RATIO = 2.0          # Step ratio of the single Richardson level
GROWTH_T_GRID = [1, 2, 4, 8, 16, 32, 64, 128, 256]
GROWTH_MIN_R2 = 0.999           # Exponential classification needs this fit quality
GROWTH_MIN_RATE = 1e-6          # ... and a slope above this
QUADRATURE_NODES = 96           # Gauss-Legendre nodes per axis for density integrals
QUADRATURE_LOG_RANGE = (-4.0, 12.0)  # Integration range in log-coordinates

# ===== SIMULATION CONFIGURATION =====
SAMPLE_CHUNK_SIZE = 8192        # Draws per random substream
ECDF_PROBE_COUNT = 10           # Probe points used by ECDF checks
ECDF_ALLOWED_MISSES = 1         # Probes allowed outside 3 SE

# ===== CLI CONFIGURATION =====
CSV_SIGNIFICANT_DIGITS = 17
LABEL_JOINER = "+"
OUTPUT_DIR = "xstable-out"
REPORT_FILE = "report.json"
DEFAULT_THREADS = int(os.environ.get("XSTABLE_THREADS", "1"))

# ===== LOGGING CONFIGURATION =====
LOG_LEVEL = os.environ.get("XSTABLE_LOG_LEVEL", "INFO")
LOG_FORMAT = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"
LOG_FILE = None  # Set to filename for file logging, None for console only
