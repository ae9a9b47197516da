"""
Configuration settings for the h10tower reduction toolkit.
"""
import os
from dotenv import load_dotenv

# Load environment variables
load_dotenv()

# Fuel budgets per computation model
FUEL = {
    "mm": int(os.getenv("H10_MM_FUEL", "10000")),
    "fractran": int(os.getenv("H10_FRACTRAN_FUEL", "10000")),
    "murec": int(os.getenv("H10_MUREC_FUEL", "100000")),
    "lterm": int(os.getenv("H10_LTERM_FUEL", "10000")),
}

# Bounded solver settings
SOLVER = {
    "bound": int(os.getenv("H10_SOLVER_BOUND", "5")),
    "shards": int(os.getenv("H10_SOLVER_SHARDS", "1")),
    "value_cap": 10**12,  # upper bound for helper cells nobody enumerates
    "chunk_dims": 3,  # trailing coordinates vectorized per numpy chunk
    "max_propagations": int(os.getenv("H10_MAX_PROPAGATIONS", "200000")),
    "single_check_points": 20000,  # largest box the chain check scans for the single equation
}

# Sparse cipher settings
CIPHER = {
    "digit_exponent": 4,  # r = 2^(4q)
}

# Prime enumeration
PRIMES = {
    "trial_division_limit": 2**32,
    "miller_rabin_limit": 3317044064679887385961981,
    "miller_rabin_bases": (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41),
    "precompute": 64,
}

# Compiler settings
COMPILER = {
    "bisim_factor": 4,
}

# Formula size regressions
FORMULA_SIZES = {
    "alpha": 1445,
    "expo": 4903,
    "golden_file": os.path.join(os.path.dirname(os.path.abspath(__file__)), "tests", "golden", "formula_sizes.json"),
}

# Logging Settings
LOGGING = {
    "level": os.getenv("H10_LOG_LEVEL", "INFO"),
    "file": os.getenv("H10_LOG_FILE", "h10tower.log"),
    "console": True,
    "format": "%(asctime)s - %(name)s - %(levelname)s - %(message)s",
}
