"""
Configuration settings for linecheck
"""

import logging
import os
import sys

# Base directory
BASE_DIR = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))

# Data directories
OUTPUTS_DIR = os.environ.get('LINECHECK_OUTPUT_DIR', os.path.join(BASE_DIR, 'outputs'))
UPLOADS_DIR = os.environ.get('LINECHECK_UPLOADS_DIR', os.path.join(BASE_DIR, 'uploads'))
SCHEMAS_DIR = os.path.join(BASE_DIR, 'schemas')

# Logging
LOG_LEVEL = os.environ.get('LINECHECK_LOG_LEVEL', 'INFO').upper()
LOG_FORMAT = '%(asctime)s %(levelname)s %(name)s: %(message)s'

# Parallelism for bootstrap, grid and baseline replication
WORKERS = int(os.environ.get('LINECHECK_WORKERS', 1))

# Market data
KNOWN_LEAGUES = ('NFL', 'NBA', 'NCAAF', 'NCAAB', 'WNBA')
MAX_QUOTES_PER_GAME = 16
SPREAD_RESOLUTION = 0.5
ALLOWED_DATASET_EXTENSIONS = {'.csv', '.json'}

# Strategy defaults
DEFAULT_STRATEGY_PARAMS = {
    'model': 'simple',
    'epsilon': 0.0,
    'ev_threshold': 0.0,
}

DEFAULT_GRID_PARAMS = {
    'epsilon_min': 0.0,
    'epsilon_max': 0.5,
    'epsilon_step': 0.01,
    'ev_min': 0.0,
    'ev_step': 0.001,
}

DEFAULT_BOOTSTRAP_PARAMS = {
    'iterations': 10_000,
    'level': 0.95,
    'one_sided_level': 0.99,
    'alpha': 0.05,
}

DEFAULT_BASELINE_PARAMS = {
    'replications': 10_000,
    'theta': 0.5,
    'tilted_theta': 0.67,
    'level': 0.95,
    'spread_win_payout': 100 / 110,
}

DEFAULT_DENSITY_PARAMS = {
    'shifts': 5,
    'scott_constant': 3.49,
}

# Flask Settings
SECRET_KEY = os.environ.get('SECRET_KEY', 'dev-secret-key-change-in-production')
DEBUG = os.environ.get('DEBUG', 'False').lower() == 'true'
HOST = os.environ.get('HOST', '0.0.0.0')
PORT = int(os.environ.get('PORT', 5000))
MAX_UPLOAD_SIZE = 200 * 1024 * 1024  # 200MB


def configure_logging(level=None):
    """Send log records to stderr so stdout stays clean for data"""
    logging.basicConfig(
        stream=sys.stderr,
        level=(level or LOG_LEVEL),
        format=LOG_FORMAT,
        force=True,
    )
